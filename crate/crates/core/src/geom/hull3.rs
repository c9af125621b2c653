//! Facet systems for 3D polytopes.
//!
//! Vertex sets are the primary representation; facets are derived on demand
//! and only exist for full-dimensional hulls. Everything is brute force over
//! point triples, which is fine at the problem sizes in this crate.

use super::polygon::Halfplane;
use super::Point;
use crate::scalar::Scalar;
use num_traits::{Signed, Zero};
use std::collections::BTreeSet;

fn cross3(a: &Point, b: &Point) -> Point {
    Point::d3(
        &a.coords[1] * &b.coords[2] - &a.coords[2] * &b.coords[1],
        &a.coords[2] * &b.coords[0] - &a.coords[0] * &b.coords[2],
        &a.coords[0] * &b.coords[1] - &a.coords[1] * &b.coords[0],
    )
}

/// Is the hull of `verts` full-dimensional in R^3?
pub fn is_full_dimensional(verts: &[Point]) -> bool {
    let m = verts.len();
    if m < 4 {
        return false;
    }
    for i in 0..m {
        for j in i + 1..m {
            for k in j + 1..m {
                let n = cross3(&verts[j].sub(&verts[i]), &verts[k].sub(&verts[i]));
                if n.norm_sq().is_zero() {
                    continue;
                }
                for l in 0..m {
                    if !verts[l].sub(&verts[i]).dot(&n).is_zero() {
                        return true;
                    }
                }
            }
        }
    }
    false
}

/// Outward facet halfspaces `a.x <= c` of a full-dimensional hull;
/// `None` when the hull is lower-dimensional.
pub fn facets3(verts: &[Point]) -> Option<Vec<Halfplane>> {
    if !is_full_dimensional(verts) {
        return None;
    }
    let m = verts.len();
    let mut seen: BTreeSet<(Vec<Scalar>, Scalar)> = BTreeSet::new();
    let mut out = Vec::new();
    for i in 0..m {
        for j in i + 1..m {
            for k in j + 1..m {
                let n = cross3(&verts[j].sub(&verts[i]), &verts[k].sub(&verts[i]));
                if n.norm_sq().is_zero() {
                    continue;
                }
                let c = n.dot(&verts[i]);
                let mut above = false;
                let mut below = false;
                for v in verts {
                    let s = n.dot(v) - &c;
                    if s.is_positive() {
                        above = true;
                    } else if s.is_negative() {
                        below = true;
                    }
                    if above && below {
                        break;
                    }
                }
                if above && below {
                    continue;
                }
                // Orient outward: all points on the <= side.
                let (a, c) = if above {
                    (n.scale(&-Scalar::from_integer(1.into())), -c)
                } else {
                    (n, c)
                };
                // Canonical scale so duplicates collapse.
                let lead = a
                    .coords
                    .iter()
                    .find(|v| !v.is_zero())
                    .expect("nonzero normal")
                    .clone();
                let scale = lead.abs();
                let key: Vec<Scalar> = a.coords.iter().map(|v| v / &scale).collect();
                let kc = &c / &scale;
                if seen.insert((key.clone(), kc.clone())) {
                    out.push(Halfplane {
                        a: Point::new(key),
                        c: kc,
                    });
                }
            }
        }
    }
    Some(out)
}

/// All basic feasible points of a halfspace system in R^3 (a vertex
/// superset whose hull is exactly the feasible region, when bounded).
pub fn vertices_from_halfspaces3(facets: &[Halfplane]) -> Vec<Point> {
    let m = facets.len();
    let mut out: Vec<Point> = Vec::new();
    for i in 0..m {
        for j in i + 1..m {
            for k in j + 1..m {
                if let Some(p) = solve3(&facets[i], &facets[j], &facets[k]) {
                    let ok = facets.iter().all(|f| !(&f.c - f.a.dot(&p)).is_negative());
                    if ok && !out.contains(&p) {
                        out.push(p);
                    }
                }
            }
        }
    }
    out
}

fn det3(r0: &[Scalar], r1: &[Scalar], r2: &[Scalar]) -> Scalar {
    &r0[0] * (&r1[1] * &r2[2] - &r1[2] * &r2[1])
        - &r0[1] * (&r1[0] * &r2[2] - &r1[2] * &r2[0])
        + &r0[2] * (&r1[0] * &r2[1] - &r1[1] * &r2[0])
}

fn solve3(f0: &Halfplane, f1: &Halfplane, f2: &Halfplane) -> Option<Point> {
    let r0 = &f0.a.coords;
    let r1 = &f1.a.coords;
    let r2 = &f2.a.coords;
    let d = det3(r0, r1, r2);
    if d.is_zero() {
        return None;
    }
    let col = |k: usize| -> Scalar {
        let sub = |r: &[Scalar], c: &Scalar| -> Vec<Scalar> {
            let mut v = r.to_vec();
            v[k] = c.clone();
            v
        };
        det3(&sub(r0, &f0.c), &sub(r1, &f1.c), &sub(r2, &f2.c)) / &d
    };
    Some(Point::d3(col(0), col(1), col(2)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::s_int;

    fn cube() -> Vec<Point> {
        let mut v = Vec::new();
        for x in [0, 2] {
            for y in [0, 2] {
                for z in [0, 2] {
                    v.push(Point::d3(s_int(x), s_int(y), s_int(z)));
                }
            }
        }
        v
    }

    #[test]
    fn cube_has_six_facets() {
        let f = facets3(&cube()).unwrap();
        assert_eq!(f.len(), 6);
    }

    #[test]
    fn degenerate_hulls_have_no_facets() {
        let tri = vec![
            Point::d3(s_int(0), s_int(0), s_int(0)),
            Point::d3(s_int(1), s_int(0), s_int(0)),
            Point::d3(s_int(0), s_int(1), s_int(0)),
        ];
        assert!(facets3(&tri).is_none());
        assert!(!is_full_dimensional(&tri));
        assert!(is_full_dimensional(&cube()));
    }

    #[test]
    fn vertex_recovery() {
        let f = facets3(&cube()).unwrap();
        let vs = vertices_from_halfspaces3(&f);
        assert_eq!(vs.len(), 8);
        for v in cube() {
            assert!(vs.contains(&v));
        }
    }

    #[test]
    fn tetra_facets() {
        let tetra = vec![
            Point::d3(s_int(0), s_int(0), s_int(0)),
            Point::d3(s_int(1), s_int(0), s_int(0)),
            Point::d3(s_int(0), s_int(1), s_int(0)),
            Point::d3(s_int(0), s_int(0), s_int(1)),
        ];
        let f = facets3(&tetra).unwrap();
        assert_eq!(f.len(), 4);
    }
}
