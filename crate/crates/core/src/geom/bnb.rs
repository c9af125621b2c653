//! Certified box subdivision for triple-intersection tests that involve
//! disks or offset bodies.
//!
//! Emptiness is certified by covering the search region with boxes that are
//! each excluded by a single body (rational distance bounds, so the
//! certificate is exact). Nonemptiness is certified by an explicit rational
//! witness point checked with exact membership. When neither certificate
//! appears before boxes shrink below `2^-40` of the arrangement diameter,
//! the test reports `Indeterminate` rather than guessing.

use super::distance::dist_sq_hulls;
use super::predicates::point_membership;
use super::{ConvexBody, Point, Topology};
use crate::scalar::{s_frac, s_int, Scalar};
use num_traits::{Signed, Zero};
use std::collections::VecDeque;

const TOLERANCE_EXP: i64 = 40;

#[derive(Debug)]
pub enum TripleResult {
    Empty { clearance_sq: Scalar },
    NonEmpty { witness: Point },
    Indeterminate,
}

struct BodyTest<'a> {
    body: &'a ConvexBody,
    core: Vec<Point>,
    /// Squared inclusion radius: a point belongs to the body iff its squared
    /// distance to the core is at most this.
    radius_sq: Scalar,
}

fn body_test(body: &ConvexBody) -> Option<BodyTest<'_>> {
    match body {
        ConvexBody::Empty { .. } => None,
        ConvexBody::Disk { center, radius_sq } => Some(BodyTest {
            body,
            core: vec![center.clone()],
            radius_sq: radius_sq.clone(),
        }),
        ConvexBody::Offset { core, radius } => Some(BodyTest {
            body,
            core: core.seed_points(),
            radius_sq: radius * radius,
        }),
        other => Some(BodyTest {
            body,
            core: other.seed_points(),
            radius_sq: Scalar::zero(),
        }),
    }
}

#[derive(Clone)]
struct BoxRegion {
    lo: Vec<Scalar>,
    hi: Vec<Scalar>,
}

impl BoxRegion {
    fn corners(&self, dim: usize) -> Vec<Point> {
        let mut out = Vec::with_capacity(1 << dim);
        for mask in 0..1u32 << dim {
            let coords: Vec<Scalar> = (0..dim)
                .map(|k| {
                    if mask >> k & 1 == 1 {
                        self.hi[k].clone()
                    } else {
                        self.lo[k].clone()
                    }
                })
                .collect();
            out.push(Point::new(coords));
        }
        out
    }

    fn center(&self, dim: usize) -> Point {
        Point::new(
            (0..dim)
                .map(|k| (&self.lo[k] + &self.hi[k]) / s_int(2))
                .collect(),
        )
    }

    fn longest_axis(&self, dim: usize) -> (usize, Scalar) {
        let mut axis = 0;
        let mut len = &self.hi[0] - &self.lo[0];
        for k in 1..dim {
            let l = &self.hi[k] - &self.lo[k];
            if l > len {
                len = l;
                axis = k;
            }
        }
        (axis, len)
    }
}

/// Decide whether the three bodies share a point, by exact box subdivision.
pub fn triple_common_point(bodies: [&ConvexBody; 3], topology: Topology) -> TripleResult {
    let tests: Vec<BodyTest> = match bodies.iter().map(|b| body_test(b)).collect() {
        Some(t) => t,
        None => {
            return TripleResult::Empty {
                clearance_sq: Scalar::zero(),
            }
        }
    };
    let dim = bodies[0].dim();
    // Search region: intersection of the bounding boxes.
    let boxes: Option<Vec<(Point, Point)>> =
        bodies.iter().map(|b| b.bounding_box()).collect();
    let Some(boxes) = boxes else {
        return TripleResult::Empty {
            clearance_sq: Scalar::zero(),
        };
    };
    let mut lo = boxes[0].0.coords.clone();
    let mut hi = boxes[0].1.coords.clone();
    for (blo, bhi) in &boxes[1..] {
        for k in 0..dim {
            if blo.coords[k] > lo[k] {
                lo[k] = blo.coords[k].clone();
            }
            if bhi.coords[k] < hi[k] {
                hi[k] = bhi.coords[k].clone();
            }
        }
    }
    for k in 0..dim {
        if lo[k] > hi[k] {
            // Bounding boxes already certify disjointness.
            let gap = &lo[k] - &hi[k];
            return TripleResult::Empty {
                clearance_sq: &gap * &gap,
            };
        }
    }
    let diameter: Scalar = (0..dim).map(|k| &hi[k] - &lo[k]).sum();
    let tol = if diameter.is_positive() {
        diameter * s_frac(1, 1i64 << TOLERANCE_EXP)
    } else {
        // Degenerate region: a single candidate point decides or we give up.
        s_frac(1, 1i64 << TOLERANCE_EXP)
    };
    let strict = topology == Topology::Open;

    let mut queue = VecDeque::new();
    queue.push_back(BoxRegion { lo, hi });
    let mut min_excess: Option<Scalar> = None;
    while let Some(region) = queue.pop_front() {
        // Try to exclude the whole box with a single body.
        let corners = region.corners(dim);
        let mut excluded = false;
        for t in &tests {
            let d = dist_sq_hulls(&corners, &t.core, dim);
            let out = if strict {
                d >= t.radius_sq
            } else {
                d > t.radius_sq
            };
            if out {
                let excess = &d - &t.radius_sq;
                if min_excess.as_ref().is_none_or(|m| excess < *m) {
                    min_excess = Some(excess);
                }
                excluded = true;
                break;
            }
        }
        if excluded {
            continue;
        }
        // Candidate witness at the center.
        let c = region.center(dim);
        if tests.iter().all(|t| point_membership(t.body, &c, strict)) {
            return TripleResult::NonEmpty { witness: c };
        }
        let (axis, len) = region.longest_axis(dim);
        if len < tol {
            return TripleResult::Indeterminate;
        }
        let mid = (&region.lo[axis] + &region.hi[axis]) / s_int(2);
        let mut left = region.clone();
        left.hi[axis] = mid.clone();
        let mut right = region;
        right.lo[axis] = mid;
        queue.push_back(left);
        queue.push_back(right);
    }
    TripleResult::Empty {
        clearance_sq: min_excess.unwrap_or_else(Scalar::zero),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::s_int;

    fn disk(x: i64, y: i64, r_sq: i64) -> ConvexBody {
        ConvexBody::Disk {
            center: Point::d2(s_int(x), s_int(y)),
            radius_sq: s_int(r_sq),
        }
    }

    #[test]
    fn three_overlapping_disks_share_a_point() {
        let a = disk(0, 0, 4);
        let b = disk(1, 0, 4);
        let c = disk(0, 1, 4);
        match triple_common_point([&a, &b, &c], Topology::Open) {
            TripleResult::NonEmpty { witness } => {
                for d in [&a, &b, &c] {
                    assert!(point_membership(d, &witness, true));
                }
            }
            other => panic!("expected nonempty, got {other:?}"),
        }
    }

    #[test]
    fn pairwise_lenses_without_common_point() {
        let a = disk(0, 0, 16);
        let b = disk(7, 0, 16);
        let c = ConvexBody::Disk {
            center: Point::d2(crate::scalar::s_frac(7, 2), s_int(6)),
            radius_sq: s_int(16),
        };
        match triple_common_point([&a, &b, &c], Topology::Open) {
            TripleResult::Empty { .. } => {}
            other => panic!("expected empty, got {other:?}"),
        }
    }

    #[test]
    fn far_disk_excluded_by_bounding_boxes() {
        let a = disk(0, 0, 1);
        let b = disk(1, 0, 1);
        let c = disk(100, 0, 1);
        match triple_common_point([&a, &b, &c], Topology::Closed) {
            TripleResult::Empty { clearance_sq } => {
                assert!(clearance_sq.is_positive());
            }
            other => panic!("expected empty, got {other:?}"),
        }
    }
}
