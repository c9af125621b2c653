//! Exact squared distances between polytopal bodies.
//!
//! Distances are computed by feature-pair enumeration (vertex-vertex,
//! vertex-edge, vertex-triangle and edge-edge), which keeps every squared
//! distance rational. Hull membership and hull-hull intersection are decided
//! first with the exact LP, so the returned value is 0 exactly when the
//! closures meet.

use super::simplex::feasible_point;
use super::Point;
use crate::scalar::Scalar;
use num_traits::{One, Signed, Zero};

/// Is `p` in the convex hull of `verts`? Exact, degeneracy-safe.
pub fn point_in_hull(p: &Point, verts: &[Point]) -> bool {
    if verts.is_empty() {
        return false;
    }
    let dim = p.dim();
    let m = verts.len();
    let mut a = Vec::with_capacity(dim + 1);
    for k in 0..dim {
        a.push(verts.iter().map(|v| v.coords[k].clone()).collect::<Vec<_>>());
    }
    a.push(vec![Scalar::one(); m]);
    let mut b: Vec<Scalar> = p.coords.clone();
    b.push(Scalar::one());
    feasible_point(a, b).is_some()
}

/// Do the convex hulls of `va` and `vb` intersect (as closed sets)?
pub fn hulls_intersect(va: &[Point], vb: &[Point], dim: usize) -> bool {
    if va.is_empty() || vb.is_empty() {
        return false;
    }
    let ma = va.len();
    let mb = vb.len();
    let cols = ma + mb;
    let mut a = Vec::with_capacity(dim + 2);
    for k in 0..dim {
        let mut row = Vec::with_capacity(cols);
        row.extend(va.iter().map(|v| v.coords[k].clone()));
        row.extend(vb.iter().map(|v| -v.coords[k].clone()));
        a.push(row);
    }
    let mut row = vec![Scalar::one(); ma];
    row.extend(std::iter::repeat_with(Scalar::zero).take(mb));
    a.push(row);
    let mut row = vec![Scalar::zero(); ma];
    row.extend(std::iter::repeat_with(Scalar::one).take(mb));
    a.push(row);
    let mut b = vec![Scalar::zero(); dim];
    b.push(Scalar::one());
    b.push(Scalar::one());
    feasible_point(a, b).is_some()
}

pub fn dist_sq_point_point(p: &Point, q: &Point) -> Scalar {
    p.dist_sq(q)
}

/// Squared distance from `p` to the closed segment `[a, b]`.
pub fn dist_sq_point_segment(p: &Point, a: &Point, b: &Point) -> Scalar {
    let d = b.sub(a);
    let dd = d.norm_sq();
    if dd.is_zero() {
        return p.dist_sq(a);
    }
    let t = p.sub(a).dot(&d) / &dd;
    let t = clamp01(t);
    p.dist_sq(&a.lerp(b, &t))
}

fn clamp01(t: Scalar) -> Scalar {
    if t.is_negative() {
        Scalar::zero()
    } else if t > Scalar::one() {
        Scalar::one()
    } else {
        t
    }
}

fn cross3(a: &Point, b: &Point) -> Point {
    Point::d3(
        &a.coords[1] * &b.coords[2] - &a.coords[2] * &b.coords[1],
        &a.coords[2] * &b.coords[0] - &a.coords[0] * &b.coords[2],
        &a.coords[0] * &b.coords[1] - &a.coords[1] * &b.coords[0],
    )
}

/// Squared distance from a point to a (possibly degenerate) triangle in R^3.
pub fn dist_sq_point_triangle3(p: &Point, t0: &Point, t1: &Point, t2: &Point) -> Scalar {
    let n = cross3(&t1.sub(t0), &t2.sub(t0));
    let nn = n.norm_sq();
    if nn.is_zero() {
        // Collinear triangle; fall back to its edges.
        return dist_sq_point_segment(p, t0, t1)
            .min(dist_sq_point_segment(p, t1, t2))
            .min(dist_sq_point_segment(p, t0, t2));
    }
    // Foot of the perpendicular onto the plane, then barycentric sign tests.
    let h = p.sub(t0).dot(&n); // signed height * ||n||
    let foot = p.sub(&n.scale(&(&h / &nn)));
    let inside = {
        let s0 = cross3(&t1.sub(t0), &foot.sub(t0)).dot(&n);
        let s1 = cross3(&t2.sub(t1), &foot.sub(t1)).dot(&n);
        let s2 = cross3(&t0.sub(t2), &foot.sub(t2)).dot(&n);
        !s0.is_negative() && !s1.is_negative() && !s2.is_negative()
    };
    if inside {
        &h * &h / nn
    } else {
        dist_sq_point_segment(p, t0, t1)
            .min(dist_sq_point_segment(p, t1, t2))
            .min(dist_sq_point_segment(p, t0, t2))
    }
}

/// Squared distance between two closed segments in R^2 or R^3.
pub fn dist_sq_segment_segment(a0: &Point, a1: &Point, b0: &Point, b1: &Point) -> Scalar {
    let u = a1.sub(a0);
    let v = b1.sub(b0);
    let w = a0.sub(b0);
    let uu = u.norm_sq();
    let vv = v.norm_sq();
    let uv = u.dot(&v);
    let det = &uu * &vv - &uv * &uv;
    let mut best: Option<Scalar> = None;
    if det.is_positive() {
        // Unconstrained closest parameters of the two lines.
        let uw = u.dot(&w);
        let vw = v.dot(&w);
        let s = (&uv * &vw - &vv * &uw) / &det;
        let t = (&uu * &vw - &uv * &uw) / &det;
        if !s.is_negative() && s <= Scalar::one() && !t.is_negative() && t <= Scalar::one() {
            let pa = a0.lerp(a1, &s);
            let pb = b0.lerp(b1, &t);
            best = Some(pa.dist_sq(&pb));
        }
    }
    for d in [
        dist_sq_point_segment(a0, b0, b1),
        dist_sq_point_segment(a1, b0, b1),
        dist_sq_point_segment(b0, a0, a1),
        dist_sq_point_segment(b1, a0, a1),
    ] {
        if best.as_ref().is_none_or(|b| d < *b) {
            best = Some(d);
        }
    }
    best.unwrap()
}

/// Squared distance from a point to a convex hull given by vertices.
pub fn dist_sq_point_hull(p: &Point, verts: &[Point]) -> Scalar {
    assert!(!verts.is_empty());
    if point_in_hull(p, verts) {
        return Scalar::zero();
    }
    let mut best: Option<Scalar> = None;
    let m = verts.len();
    let mut consider = |d: Scalar| {
        if best.as_ref().is_none_or(|b| d < *b) {
            best = Some(d);
        }
    };
    for i in 0..m {
        consider(p.dist_sq(&verts[i]));
        for j in i + 1..m {
            consider(dist_sq_point_segment(p, &verts[i], &verts[j]));
            if p.dim() == 3 {
                for k in j + 1..m {
                    consider(dist_sq_point_triangle3(p, &verts[i], &verts[j], &verts[k]));
                }
            }
        }
    }
    best.unwrap()
}

/// Exact squared distance between two convex hulls (0 iff they intersect).
pub fn dist_sq_hulls(va: &[Point], vb: &[Point], dim: usize) -> Scalar {
    assert!(!va.is_empty() && !vb.is_empty());
    // Cheap reject: overlapping ranges are common for the LP to resolve,
    // but disjoint bounding ranges skip it entirely.
    if ranges_overlap(va, vb, dim) && hulls_intersect(va, vb, dim) {
        return Scalar::zero();
    }
    let mut best: Option<Scalar> = None;
    let mut consider = |d: Scalar| {
        if best.as_ref().is_none_or(|b| d < *b) {
            best = Some(d);
        }
    };
    // Vertices of one against vertex/edge/triangle features of the other.
    for (xs, ys) in [(va, vb), (vb, va)] {
        for p in xs {
            consider(dist_sq_point_hull_features(p, ys));
        }
    }
    if dim == 3 {
        for (i0, i1) in pairs(va.len()) {
            for (j0, j1) in pairs(vb.len()) {
                consider(dist_sq_segment_segment(
                    &va[i0], &va[i1], &vb[j0], &vb[j1],
                ));
            }
        }
    }
    best.unwrap()
}

fn pairs(m: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for i in 0..m {
        for j in i + 1..m {
            out.push((i, j));
        }
    }
    out
}

/// Feature-only point-to-hull distance (no membership test).
fn dist_sq_point_hull_features(p: &Point, verts: &[Point]) -> Scalar {
    let m = verts.len();
    let mut best: Option<Scalar> = None;
    let mut consider = |d: Scalar| {
        if best.as_ref().is_none_or(|b| d < *b) {
            best = Some(d);
        }
    };
    for i in 0..m {
        consider(p.dist_sq(&verts[i]));
        for j in i + 1..m {
            consider(dist_sq_point_segment(p, &verts[i], &verts[j]));
            if p.dim() == 3 {
                for k in j + 1..m {
                    consider(dist_sq_point_triangle3(p, &verts[i], &verts[j], &verts[k]));
                }
            }
        }
    }
    best.unwrap()
}

/// Closest point of segment `[a, b]` to `p`.
pub fn closest_point_segment(p: &Point, a: &Point, b: &Point) -> Point {
    let d = b.sub(a);
    let dd = d.norm_sq();
    if dd.is_zero() {
        return a.clone();
    }
    let t = clamp01(p.sub(a).dot(&d) / &dd);
    a.lerp(b, &t)
}

fn closest_point_triangle3(p: &Point, t0: &Point, t1: &Point, t2: &Point) -> Point {
    let n = cross3(&t1.sub(t0), &t2.sub(t0));
    let nn = n.norm_sq();
    if !nn.is_zero() {
        let h = p.sub(t0).dot(&n);
        let foot = p.sub(&n.scale(&(&h / &nn)));
        let s0 = cross3(&t1.sub(t0), &foot.sub(t0)).dot(&n);
        let s1 = cross3(&t2.sub(t1), &foot.sub(t1)).dot(&n);
        let s2 = cross3(&t0.sub(t2), &foot.sub(t2)).dot(&n);
        if !s0.is_negative() && !s1.is_negative() && !s2.is_negative() {
            return foot;
        }
    }
    let mut best = closest_point_segment(p, t0, t1);
    let mut best_d = p.dist_sq(&best);
    for (a, b) in [(t1, t2), (t0, t2)] {
        let q = closest_point_segment(p, a, b);
        let d = p.dist_sq(&q);
        if d < best_d {
            best_d = d;
            best = q;
        }
    }
    best
}

/// Closest point of `conv(verts)` to `p` (`p` itself when inside).
pub fn closest_point_on_hull(p: &Point, verts: &[Point]) -> Point {
    if point_in_hull(p, verts) {
        return p.clone();
    }
    let m = verts.len();
    let mut best = verts[0].clone();
    let mut best_d = p.dist_sq(&best);
    let mut consider = |q: Point| {
        let d = p.dist_sq(&q);
        if d < best_d {
            best_d = d;
            best = q;
        }
    };
    for i in 0..m {
        consider(verts[i].clone());
        for j in i + 1..m {
            consider(closest_point_segment(p, &verts[i], &verts[j]));
            if p.dim() == 3 {
                for k in j + 1..m {
                    consider(closest_point_triangle3(p, &verts[i], &verts[j], &verts[k]));
                }
            }
        }
    }
    best
}

/// A near-closest pair of points of two hulls (equal when they meet).
/// Downstream users only need a good direction seed; their margins are
/// re-checked exactly, so the alternating projection here does not have to
/// land on the true optimum.
pub fn closest_points_hulls(va: &[Point], vb: &[Point], dim: usize) -> (Point, Point) {
    if let Some(p) = hull_common_point(va, vb, dim) {
        return (p.clone(), p);
    }
    let mut best: Option<(Scalar, Point, Point)> = None;
    for a in va {
        let q = closest_point_on_hull(a, vb);
        let p = closest_point_on_hull(&q, va);
        let q = closest_point_on_hull(&p, vb);
        let d = p.dist_sq(&q);
        if best.as_ref().is_none_or(|(bd, _, _)| d < *bd) {
            best = Some((d, p, q));
        }
    }
    let (_, p, q) = best.unwrap();
    (p, q)
}

/// A common point of two hulls, when they intersect.
pub fn hull_common_point(va: &[Point], vb: &[Point], dim: usize) -> Option<Point> {
    if va.is_empty() || vb.is_empty() {
        return None;
    }
    let ma = va.len();
    let mb = vb.len();
    let cols = ma + mb;
    let mut a = Vec::with_capacity(dim + 2);
    for k in 0..dim {
        let mut row = Vec::with_capacity(cols);
        row.extend(va.iter().map(|v| v.coords[k].clone()));
        row.extend(vb.iter().map(|v| -v.coords[k].clone()));
        a.push(row);
    }
    let mut row = vec![Scalar::one(); ma];
    row.extend(std::iter::repeat_with(Scalar::zero).take(mb));
    a.push(row);
    let mut row = vec![Scalar::zero(); ma];
    row.extend(std::iter::repeat_with(Scalar::one).take(mb));
    a.push(row);
    let mut b = vec![Scalar::zero(); dim];
    b.push(Scalar::one());
    b.push(Scalar::one());
    let lambda = feasible_point(a, b)?;
    let mut coords = vec![Scalar::zero(); dim];
    for (i, v) in va.iter().enumerate() {
        for k in 0..dim {
            coords[k] += &lambda[i] * &v.coords[k];
        }
    }
    Some(Point::new(coords))
}

fn ranges_overlap(va: &[Point], vb: &[Point], dim: usize) -> bool {
    for k in 0..dim {
        let a_min = va.iter().map(|p| &p.coords[k]).min().unwrap();
        let a_max = va.iter().map(|p| &p.coords[k]).max().unwrap();
        let b_min = vb.iter().map(|p| &p.coords[k]).min().unwrap();
        let b_max = vb.iter().map(|p| &p.coords[k]).max().unwrap();
        if a_max < b_min || b_max < a_min {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{s_frac, s_int};

    fn pt2(x: i64, y: i64) -> Point {
        Point::d2(s_int(x), s_int(y))
    }

    fn pt3(x: i64, y: i64, z: i64) -> Point {
        Point::d3(s_int(x), s_int(y), s_int(z))
    }

    #[test]
    fn point_segment() {
        let d = dist_sq_point_segment(&pt2(0, 1), &pt2(-1, 0), &pt2(1, 0));
        assert_eq!(d, s_int(1));
        let d = dist_sq_point_segment(&pt2(3, 0), &pt2(-1, 0), &pt2(1, 0));
        assert_eq!(d, s_int(4));
    }

    #[test]
    fn segment_segment() {
        // Spec example: (0,0)-(1,0) and (0,1)-(1,2) are 1 apart.
        let d = dist_sq_segment_segment(&pt2(0, 0), &pt2(1, 0), &pt2(0, 1), &pt2(1, 2));
        assert_eq!(d, s_int(1));
        // Crossing segments touch.
        let d = dist_sq_segment_segment(&pt2(-1, -1), &pt2(1, 1), &pt2(-1, 1), &pt2(1, -1));
        assert_eq!(d, s_int(0));
        // Skew segments in 3D.
        let d = dist_sq_segment_segment(&pt3(0, 0, 0), &pt3(1, 0, 0), &pt3(0, 0, 1), &pt3(0, 1, 1));
        assert_eq!(d, s_int(1));
    }

    #[test]
    fn point_triangle() {
        let d = dist_sq_point_triangle3(&pt3(0, 0, 2), &pt3(-1, -1, 0), &pt3(2, 0, 0), &pt3(0, 2, 0));
        assert_eq!(d, s_int(4));
        // Off to the side: nearest is an edge.
        let d = dist_sq_point_triangle3(&pt3(3, 0, 0), &pt3(0, 0, 0), &pt3(2, 0, 0), &pt3(0, 2, 0));
        assert_eq!(d, s_int(1));
    }

    #[test]
    fn hull_membership() {
        let tri = [pt2(0, 0), pt2(2, 0), pt2(0, 2)];
        assert!(point_in_hull(&Point::d2(s_frac(1, 2), s_frac(1, 2)), &tri));
        assert!(!point_in_hull(&pt2(2, 2), &tri));
        // Degenerate hull: a segment.
        let seg = [pt3(0, 0, 0), pt3(2, 2, 2)];
        assert!(point_in_hull(&pt3(1, 1, 1), &seg));
        assert!(!point_in_hull(&pt3(1, 1, 0), &seg));
    }

    #[test]
    fn hull_distances() {
        // Squares [0,1]^2 and [3,4]x[0,1]: gap 2, squared 4.
        let a = [pt2(0, 0), pt2(1, 0), pt2(1, 1), pt2(0, 1)];
        let b = [pt2(3, 0), pt2(4, 0), pt2(4, 1), pt2(3, 1)];
        assert_eq!(dist_sq_hulls(&a, &b, 2), s_int(4));
        // Touching squares: 0.
        let c = [pt2(1, 0), pt2(2, 0), pt2(2, 1), pt2(1, 1)];
        assert_eq!(dist_sq_hulls(&a, &c, 2), s_int(0));
        // Flat triangles in 3D, stacked a height apart.
        let t1 = [pt3(0, 0, 0), pt3(2, 0, 0), pt3(0, 2, 0)];
        let t2 = [pt3(0, 0, 3), pt3(2, 0, 3), pt3(0, 2, 3)];
        assert_eq!(dist_sq_hulls(&t1, &t2, 3), s_int(9));
    }
}
