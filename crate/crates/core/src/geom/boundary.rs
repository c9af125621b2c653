//! Boundary witness points: a rational point on the boundary of one body at
//! positive certified distance from every other body in the arrangement.

use super::distance::dist_sq_point_hull;
use super::hull3::facets3;
use super::polygon::facet_slack;
use super::predicates::{contains, pair_intersects, point_dist_lb};
use super::{Arrangement, ConvexBody, GeomError, Point, Topology};
use crate::scalar::{exact_sqrt, s_frac, s_int, Scalar};
use num_traits::{One, Signed, Zero};

/// A boundary point of body `label` free of every other body, plus a
/// rational lower bound on its distance to them (`None` = unconstrained,
/// the other bodies are all empty).
pub fn boundary_free_point(
    arr: &Arrangement,
    label: usize,
) -> Result<(Point, Option<Scalar>), GeomError> {
    boundary_free_point_excluding(arr, label, &[])
}

/// As [`boundary_free_point`], ignoring the bodies in `exclude` (used while
/// a slot is about to be replaced).
pub fn boundary_free_point_excluding(
    arr: &Arrangement,
    label: usize,
    exclude: &[usize],
) -> Result<(Point, Option<Scalar>), GeomError> {
    let body = arr
        .body(label)
        .ok_or(GeomError::BadBody("no body with that label"))?;
    if body.is_empty() {
        return Err(GeomError::NoFreeBoundary);
    }
    let others: Vec<&ConvexBody> = arr
        .bodies()
        .iter()
        .filter(|(l, b)| *l != label && !exclude.contains(l) && !b.is_empty())
        .map(|(_, b)| b)
        .collect();
    // The lemma's hypothesis: the body is not swallowed by any single other.
    for other in &others {
        if contains(other, body)? {
            return Err(GeomError::NoFreeBoundary);
        }
    }
    let candidates = boundary_candidates(body, &others)?;
    let mut best: Option<(Point, Option<Scalar>)> = None;
    for p in candidates {
        let mut margin: Option<Scalar> = None; // None = infinity so far
        let mut blocked = false;
        for other in &others {
            match point_dist_lb(other, &p) {
                None => {}
                Some(d) if d.is_positive() => {
                    margin = Some(match margin {
                        None => d,
                        Some(m) => m.min(d),
                    });
                }
                Some(_) => {
                    blocked = true;
                    break;
                }
            }
        }
        if blocked {
            continue;
        }
        let better = match (&best, &margin) {
            (None, _) => true,
            (Some((_, None)), _) => false,
            (Some((_, Some(_))), None) => true,
            (Some((_, Some(bm))), Some(m)) => m > bm,
        };
        if better {
            best = Some((p, margin));
        }
    }
    best.ok_or(GeomError::NoFreeBoundary)
}

/// Candidate rational points on the boundary of `body`. For segments and
/// polygon edges the candidates come from exact free-gap subtraction, so a
/// free point is found whenever one exists with nonnegligible clearance.
fn boundary_candidates(
    body: &ConvexBody,
    others: &[&ConvexBody],
) -> Result<Vec<Point>, GeomError> {
    let mut out = Vec::new();
    match body {
        ConvexBody::Empty { .. } => {}
        ConvexBody::Interval { lo, hi } => {
            out.push(Point::d1(lo.clone()));
            out.push(Point::d1(hi.clone()));
        }
        ConvexBody::Segment { a, b } => {
            edge_free_candidates(a, b, others, &mut out)?;
        }
        ConvexBody::Polygon { vertices } => {
            let n = vertices.len();
            for i in 0..n {
                edge_free_candidates(&vertices[i], &vertices[(i + 1) % n], others, &mut out)?;
            }
        }
        ConvexBody::Polytope3 { vertices } => {
            let facets = facets3(vertices);
            let mut push_if_boundary = |p: Point| {
                let on_boundary = match &facets {
                    None => true, // lower-dimensional: every point is boundary
                    Some(fs) => {
                        let mut zero = false;
                        for f in fs {
                            let s = facet_slack(f, &p);
                            if s.is_negative() {
                                return;
                            }
                            if s.is_zero() {
                                zero = true;
                            }
                        }
                        zero
                    }
                };
                if on_boundary {
                    out.push(p);
                }
            };
            for (i, v) in vertices.iter().enumerate() {
                push_if_boundary(v.clone());
                for w in &vertices[i + 1..] {
                    push_if_boundary(v.lerp(w, &s_frac(1, 2)));
                    push_if_boundary(v.lerp(w, &s_frac(1, 4)));
                    push_if_boundary(v.lerp(w, &s_frac(3, 4)));
                }
            }
        }
        ConvexBody::Disk { center, radius_sq } => {
            let r = exact_sqrt(radius_sq).ok_or(GeomError::UnsupportedBody(
                "disk boundary points require a rational radius",
            ))?;
            for (ux, uy) in unit_directions_2d() {
                out.push(Point::d2(
                    &center.coords[0] + &r * &ux,
                    &center.coords[1] + &r * &uy,
                ));
            }
        }
        ConvexBody::Offset { core, radius } => {
            let core_pts = core.seed_points();
            let rr = radius * radius;
            let dim = body.dim();
            let dirs: Vec<Vec<Scalar>> = if dim == 2 {
                unit_directions_2d()
                    .into_iter()
                    .map(|(x, y)| vec![x, y])
                    .collect()
            } else {
                unit_directions_3d()
            };
            for v in &core_pts {
                for u in &dirs {
                    let p = Point::new(
                        v.coords
                            .iter()
                            .zip(u)
                            .map(|(c, d)| c + radius * d)
                            .collect(),
                    );
                    // Only keep genuine boundary points: the push direction
                    // must be in the normal cone at v.
                    if dist_sq_point_hull(&p, &core_pts) == rr {
                        out.push(p);
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Exact rational unit vectors spread around the circle.
fn unit_directions_2d() -> Vec<(Scalar, Scalar)> {
    let mut dirs = vec![
        (s_int(1), s_int(0)),
        (s_int(-1), s_int(0)),
        (s_int(0), s_int(1)),
        (s_int(0), s_int(-1)),
    ];
    for (a, b) in [(3i64, 4i64), (4, 3)] {
        for sa in [1i64, -1] {
            for sb in [1i64, -1] {
                dirs.push((s_frac(sa * a, 5), s_frac(sb * b, 5)));
            }
        }
    }
    dirs
}

fn unit_directions_3d() -> Vec<Vec<Scalar>> {
    let mut dirs = Vec::new();
    for k in 0..3 {
        for sign in [1i64, -1] {
            let mut v = vec![s_int(0), s_int(0), s_int(0)];
            v[k] = s_int(sign);
            dirs.push(v);
        }
    }
    // (1/3, 2/3, 2/3) permutations: exactly unit length.
    for perm in [[0usize, 1, 2], [1, 2, 0], [2, 0, 1]] {
        for signs in 0..8u32 {
            let mags = [s_frac(1, 3), s_frac(2, 3), s_frac(2, 3)];
            let mut v = vec![s_int(0), s_int(0), s_int(0)];
            for (slot, &axis) in perm.iter().enumerate() {
                let sign = if signs >> slot & 1 == 1 { -1 } else { 1 };
                v[axis] = &mags[slot] * s_int(sign);
            }
            dirs.push(v);
        }
    }
    dirs
}

/// Candidates on the edge `[a, b]` outside every other body: midpoints of
/// the exact free gaps after subtracting each body's (over-approximated)
/// trace interval.
fn edge_free_candidates(
    a: &Point,
    b: &Point,
    others: &[&ConvexBody],
    out: &mut Vec<Point>,
) -> Result<(), GeomError> {
    let mut forbidden: Vec<(Scalar, Scalar)> = Vec::new();
    for other in others {
        if let Some(iv) = trace_interval(a, b, other)? {
            forbidden.push(iv);
        }
    }
    forbidden.sort_by(|x, y| x.0.cmp(&y.0));
    // Walk the gaps.
    let mut cursor = Scalar::zero();
    let one = Scalar::one();
    for (lo, hi) in &forbidden {
        if *lo > cursor {
            let mid = (&cursor + lo) / s_int(2);
            out.push(a.lerp(b, &mid));
        }
        if *hi > cursor {
            cursor = hi.clone();
        }
        if cursor >= one {
            break;
        }
    }
    if cursor < one {
        let mid = (&cursor + &one) / s_int(2);
        out.push(a.lerp(b, &mid));
    }
    // Endpoints are boundary points too.
    out.push(a.clone());
    out.push(b.clone());
    Ok(())
}

/// Over-approximated parameter interval of `{t : a + t(b-a) ∈ other}`.
/// Convexity makes the trace an interval; binary search on exact
/// sub-segment intersection brackets it from outside.
fn trace_interval(
    a: &Point,
    b: &Point,
    other: &ConvexBody,
) -> Result<Option<(Scalar, Scalar)>, GeomError> {
    let seg = ConvexBody::Segment {
        a: a.clone(),
        b: b.clone(),
    };
    if !pair_intersects(&seg, other, Topology::Closed)? {
        return Ok(None);
    }
    let prefix_hits = |t: &Scalar| -> Result<bool, GeomError> {
        let p = a.lerp(b, t);
        if &p == a {
            return Ok(super::predicates::point_membership(other, a, false));
        }
        pair_intersects(
            &ConvexBody::Segment {
                a: a.clone(),
                b: p,
            },
            other,
            Topology::Closed,
        )
    };
    // Smallest t whose prefix [a, p(t)] meets the body: bracket downward.
    let mut lo = Scalar::zero();
    let mut hi = Scalar::one();
    for _ in 0..40 {
        let mid = (&lo + &hi) / s_int(2);
        if prefix_hits(&mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let t0 = lo; // certified below the true entry parameter
    let suffix_hits = |t: &Scalar| -> Result<bool, GeomError> {
        let p = a.lerp(b, t);
        if &p == b {
            return Ok(super::predicates::point_membership(other, b, false));
        }
        pair_intersects(
            &ConvexBody::Segment {
                a: p,
                b: b.clone(),
            },
            other,
            Topology::Closed,
        )
    };
    let mut lo = Scalar::zero();
    let mut hi = Scalar::one();
    for _ in 0..40 {
        let mid = (&lo + &hi) / s_int(2);
        if suffix_hits(&mid)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let t1 = hi; // certified above the true exit parameter
    Ok(Some((t0, t1)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::Topology;
    use crate::scalar::s_int;

    fn square(lo: i64, hi: i64) -> ConvexBody {
        ConvexBody::Polygon {
            vertices: vec![
                Point::d2(s_int(lo), s_int(lo)),
                Point::d2(s_int(hi), s_int(lo)),
                Point::d2(s_int(hi), s_int(hi)),
                Point::d2(s_int(lo), s_int(hi)),
            ],
        }
    }

    #[test]
    fn lone_square_has_free_boundary_with_infinite_margin() {
        let arr = Arrangement::new(2, Topology::Open, vec![(1, square(0, 2))]).unwrap();
        let (p, margin) = boundary_free_point(&arr, 1).unwrap();
        assert!(margin.is_none());
        // The point is on the boundary.
        assert!(super::super::predicates::point_membership(
            arr.body(1).unwrap(),
            &p,
            false
        ));
        assert!(!super::super::predicates::point_membership(
            arr.body(1).unwrap(),
            &p,
            true
        ));
    }

    #[test]
    fn overlapping_squares_left_edge_is_free() {
        let arr = Arrangement::new(
            2,
            Topology::Open,
            vec![(1, square(0, 2)), (2, square(1, 3))],
        )
        .unwrap();
        let (p, margin) = boundary_free_point(&arr, 1).unwrap();
        let m = margin.expect("finite margin");
        assert!(m.is_positive());
        assert!(!super::super::predicates::point_membership(
            arr.body(2).unwrap(),
            &p,
            false
        ));
    }

    #[test]
    fn nested_inner_square_has_none() {
        let arr = Arrangement::new(
            2,
            Topology::Open,
            vec![(1, square(1, 3)), (2, square(0, 4))],
        )
        .unwrap();
        assert_eq!(
            boundary_free_point(&arr, 1).unwrap_err(),
            GeomError::NoFreeBoundary
        );
    }

    #[test]
    fn disk_boundary_needs_rational_radius() {
        let arr = Arrangement::new(
            2,
            Topology::Open,
            vec![(
                1,
                ConvexBody::Disk {
                    center: Point::d2(s_int(0), s_int(0)),
                    radius_sq: s_int(4),
                },
            )],
        )
        .unwrap();
        let (p, _) = boundary_free_point(&arr, 1).unwrap();
        assert_eq!(p.dist_sq(&Point::d2(s_int(0), s_int(0))), s_int(4));

        let arr2 = Arrangement::new(
            2,
            Topology::Open,
            vec![(
                1,
                ConvexBody::Disk {
                    center: Point::d2(s_int(0), s_int(0)),
                    radius_sq: s_int(2),
                },
            )],
        )
        .unwrap();
        assert!(matches!(
            boundary_free_point(&arr2, 1),
            Err(GeomError::UnsupportedBody(_))
        ));
    }
}
