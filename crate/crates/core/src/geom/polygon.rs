//! Convex polygon helpers: validation, halfplane representation, exact
//! clipping, and the Chebyshev inscribed-ball LP.

use super::simplex::{solve, LpOutcome, StandardForm};
use super::{GeomError, Point};
use crate::scalar::{sqrt_bounds, Scalar};
use num_traits::{One, Signed, Zero};

/// `cross(b - a, c - a)`: positive iff `a,b,c` turn counterclockwise.
pub fn orient2d(a: &Point, b: &Point, c: &Point) -> Scalar {
    let abx = &b.coords[0] - &a.coords[0];
    let aby = &b.coords[1] - &a.coords[1];
    let acx = &c.coords[0] - &a.coords[0];
    let acy = &c.coords[1] - &a.coords[1];
    &abx * &acy - &aby * &acx
}

pub fn validate_polygon(vertices: &[Point]) -> Result<(), GeomError> {
    if vertices.len() < 3 {
        return Err(GeomError::BadBody("polygon needs at least 3 vertices"));
    }
    if vertices.iter().any(|v| v.dim() != 2) {
        return Err(GeomError::BadBody("polygon vertices must be 2-dimensional"));
    }
    let n = vertices.len();
    for i in 0..n {
        let a = &vertices[i];
        let b = &vertices[(i + 1) % n];
        let c = &vertices[(i + 2) % n];
        if !orient2d(a, b, c).is_positive() {
            return Err(GeomError::BadBody(
                "polygon vertices must be strictly convex and counterclockwise",
            ));
        }
    }
    Ok(())
}

/// A halfplane `a . x <= c`.
#[derive(Clone, Debug)]
pub struct Halfplane {
    pub a: Point,
    pub c: Scalar,
}

/// Outward facet halfplanes of a ccw convex polygon.
pub fn polygon_facets(vertices: &[Point]) -> Vec<Halfplane> {
    let n = vertices.len();
    (0..n)
        .map(|i| {
            let p = &vertices[i];
            let q = &vertices[(i + 1) % n];
            let dx = &q.coords[0] - &p.coords[0];
            let dy = &q.coords[1] - &p.coords[1];
            // Outward normal of a ccw edge.
            let a = Point::d2(dy, -dx);
            let c = a.dot(p);
            Halfplane { a, c }
        })
        .collect()
}

/// Signed distance numerator `c - a.x`; the point is inside iff >= 0.
pub fn facet_slack(h: &Halfplane, p: &Point) -> Scalar {
    &h.c - &h.a.dot(p)
}

pub fn point_in_polygon(vertices: &[Point], p: &Point, strict: bool) -> bool {
    polygon_facets(vertices).iter().all(|h| {
        let s = facet_slack(h, p);
        if strict {
            s.is_positive()
        } else {
            !s.is_negative()
        }
    })
}

/// Rational lower bound on the Euclidean distance from an interior point to
/// the polygon boundary.
pub fn polygon_depth_lower_bound(vertices: &[Point], p: &Point) -> Scalar {
    let mut best: Option<Scalar> = None;
    for h in polygon_facets(vertices) {
        let s = facet_slack(&h, p);
        if s.is_negative() {
            return Scalar::zero();
        }
        let (_, norm_ub) = sqrt_bounds(&h.a.norm_sq(), 48);
        let d = s / norm_ub;
        if best.as_ref().is_none_or(|b| d < *b) {
            best = Some(d);
        }
    }
    best.unwrap_or_else(Scalar::zero)
}

/// Sutherland-Hodgman clip of a convex polygon by one halfplane; exact.
/// The returned chain may be degenerate (fewer than 3 distinct points).
pub fn clip_by_halfplane(vertices: &[Point], h: &Halfplane) -> Vec<Point> {
    let n = vertices.len();
    let mut out = Vec::new();
    for i in 0..n {
        let cur = &vertices[i];
        let nxt = &vertices[(i + 1) % n];
        let s_cur = facet_slack(h, cur);
        let s_nxt = facet_slack(h, nxt);
        let cur_in = !s_cur.is_negative();
        let nxt_in = !s_nxt.is_negative();
        if cur_in {
            out.push(cur.clone());
        }
        if cur_in != nxt_in {
            // Crossing point at parameter t where the slack vanishes.
            let t = &s_cur / (&s_cur - &s_nxt);
            out.push(cur.lerp(nxt, &t));
        }
    }
    out
}

/// Dedupe and drop collinear vertices; `None` if fewer than 3 survive.
/// Input must already be convex and counterclockwise (as clip output is).
pub fn canonicalize_polygon(points: &[Point]) -> Option<Vec<Point>> {
    let mut pts: Vec<Point> = Vec::new();
    for p in points {
        if pts.last() != Some(p) {
            pts.push(p.clone());
        }
    }
    while pts.len() > 1 && pts.first() == pts.last() {
        pts.pop();
    }
    // Remove collinear middle vertices until stable.
    loop {
        if pts.len() < 3 {
            return None;
        }
        let n = pts.len();
        let mut removed = false;
        for i in 0..n {
            let a = &pts[(i + n - 1) % n];
            let b = &pts[i];
            let c = &pts[(i + 1) % n];
            if !orient2d(a, b, c).is_positive() {
                pts.remove(i);
                removed = true;
                break;
            }
        }
        if !removed {
            return Some(pts);
        }
    }
}

/// Exact intersection of two convex polygons, `None` when the intersection
/// has empty interior.
pub fn polygon_intersection(p: &[Point], q: &[Point]) -> Option<Vec<Point>> {
    let cur = clip_chain(p, q);
    if cur.is_empty() {
        return None;
    }
    canonicalize_polygon(&cur)
}

/// Clip `p` by all facets of `q` without canonicalizing; the result is
/// empty iff the closed polygons are disjoint (touching yields a
/// degenerate chain).
pub fn clip_chain(p: &[Point], q: &[Point]) -> Vec<Point> {
    let mut cur = p.to_vec();
    for h in polygon_facets(q) {
        cur = clip_by_halfplane(&cur, &h);
        if cur.is_empty() {
            break;
        }
    }
    cur
}

/// Chebyshev center of the halfplane system: the deepest point and a
/// rational lower bound on its Euclidean clearance from every facet.
pub fn chebyshev_center(facets: &[Halfplane], dim: usize) -> Option<(Point, Scalar)> {
    // max t  s.t.  a.x + t * ||a||_ub <= c for each facet.
    // Using per-facet upper bounds on ||a|| makes t itself a valid
    // Euclidean clearance lower bound.
    // Standard form variables: x = xp - xm (dim each), t, one slack per facet.
    let m = facets.len();
    let cols = 2 * dim + 1 + m;
    let mut a_rows = Vec::with_capacity(m);
    let mut b = Vec::with_capacity(m);
    for (fi, f) in facets.iter().enumerate() {
        let (_, norm_ub) = sqrt_bounds(&f.a.norm_sq(), 48);
        let mut row = vec![Scalar::zero(); cols];
        for k in 0..dim {
            row[k] = f.a.coords[k].clone();
            row[dim + k] = -f.a.coords[k].clone();
        }
        row[2 * dim] = norm_ub;
        row[2 * dim + 1 + fi] = Scalar::one();
        a_rows.push(row);
        b.push(f.c.clone());
    }
    let mut c = vec![Scalar::zero(); cols];
    c[2 * dim] = -Scalar::one(); // maximize t
    match solve(&StandardForm { a: a_rows, b, c }) {
        LpOutcome::Optimal(x, _) => {
            let t = x[2 * dim].clone();
            if !t.is_positive() {
                return None;
            }
            let center = Point::new(
                (0..dim).map(|k| &x[k] - &x[dim + k]).collect::<Vec<_>>(),
            );
            Some((center, t))
        }
        _ => None,
    }
}

/// Vertex centroid; a convenient interior point of a convex polygon.
pub fn centroid(points: &[Point]) -> Point {
    let dim = points[0].dim();
    let n = Scalar::from_integer(num_bigint::BigInt::from(points.len() as i64));
    Point::new(
        (0..dim)
            .map(|k| points.iter().map(|p| p.coords[k].clone()).sum::<Scalar>() / &n)
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{s_frac, s_int};

    fn square(lo: i64, hi: i64) -> Vec<Point> {
        vec![
            Point::d2(s_int(lo), s_int(lo)),
            Point::d2(s_int(hi), s_int(lo)),
            Point::d2(s_int(hi), s_int(hi)),
            Point::d2(s_int(lo), s_int(hi)),
        ]
    }

    #[test]
    fn validation() {
        assert!(validate_polygon(&square(0, 1)).is_ok());
        let cw: Vec<Point> = square(0, 1).into_iter().rev().collect();
        assert!(validate_polygon(&cw).is_err());
        let collinear = vec![
            Point::d2(s_int(0), s_int(0)),
            Point::d2(s_int(1), s_int(0)),
            Point::d2(s_int(2), s_int(0)),
        ];
        assert!(validate_polygon(&collinear).is_err());
    }

    #[test]
    fn membership_and_depth() {
        let sq = square(0, 4);
        let c = Point::d2(s_int(2), s_int(2));
        assert!(point_in_polygon(&sq, &c, true));
        assert!(!point_in_polygon(&sq, &Point::d2(s_int(5), s_int(0)), false));
        // Boundary point: inside closed, not strict.
        let edge = Point::d2(s_int(0), s_int(2));
        assert!(point_in_polygon(&sq, &edge, false));
        assert!(!point_in_polygon(&sq, &edge, true));
        let d = polygon_depth_lower_bound(&sq, &c);
        assert!(d > s_frac(19, 10) && d <= s_int(2));
    }

    #[test]
    fn clipping() {
        let sq = square(0, 2);
        // Keep x <= 1.
        let h = Halfplane {
            a: Point::d2(s_int(1), s_int(0)),
            c: s_int(1),
        };
        let clipped = canonicalize_polygon(&clip_by_halfplane(&sq, &h)).unwrap();
        assert_eq!(clipped.len(), 4);
        assert!(clipped.iter().all(|p| p.coords[0] <= s_int(1)));

        // Clip everything away.
        let h = Halfplane {
            a: Point::d2(s_int(1), s_int(0)),
            c: s_int(-1),
        };
        assert!(clip_by_halfplane(&sq, &h).is_empty());
    }

    #[test]
    fn intersections() {
        let a = square(0, 4);
        let b = square(1, 2);
        let inter = polygon_intersection(&a, &b).unwrap();
        assert_eq!(canonicalize_polygon(&inter).unwrap().len(), 4);

        let c = square(5, 6);
        assert!(polygon_intersection(&a, &c).is_none());

        // Touching squares share only an edge: empty interior.
        let d = square(4, 8);
        assert!(polygon_intersection(&a, &d).is_none());
    }

    #[test]
    fn chebyshev_of_square() {
        let facets = polygon_facets(&square(0, 4));
        let (center, r) = chebyshev_center(&facets, 2).unwrap();
        assert_eq!(center, Point::d2(s_int(2), s_int(2)));
        // True inradius is 2; the bound must be positive and not exceed it.
        assert!(r.is_positive() && r <= s_int(2));
        assert!(r > s_frac(19, 10));
    }
}
