//! Replace disks by inscribed rational polygons without changing the code.
//!
//! This bridges numerically-found disk arrangements (circle packing) into
//! the fully polytopal kernel: when every strict inequality the code depends
//! on holds with margin, inscribed polygons close enough to the circles
//! produce the identical relation matrix, which is re-verified exactly.

use super::polygon::validate_polygon;
use super::predicates::relation_matrix;
use super::{Arrangement, ConvexBody, GeomError, Point};
use crate::scalar::{rational_round, scalar_to_f64, sqrt_lower, Scalar};
use num_traits::{One, Signed, Zero};

/// Replace every disk by an inscribed polygon whose Hausdorff deviation from
/// the disk is below `margin / 4`, verifying afterwards that the relation
/// matrix is unchanged.
pub fn disks_to_polygons(arr: &Arrangement, margin: &Scalar) -> Result<Arrangement, GeomError> {
    if !margin.is_positive() {
        return Err(GeomError::MarginTooSmall);
    }
    if arr.dim != 2 {
        return Err(GeomError::UnsupportedBody("disk arrangements live in R^2"));
    }
    validate_pair_margins(arr, margin)?;
    let mut bodies = Vec::new();
    for (label, body) in arr.bodies() {
        match body {
            ConvexBody::Empty { .. } => bodies.push((*label, body.clone())),
            ConvexBody::Disk { center, radius_sq } => {
                let poly = inscribe_polygon(center, radius_sq, &(margin / crate::scalar::s_int(4)))?;
                bodies.push((*label, poly));
            }
            _ => {
                return Err(GeomError::UnsupportedBody(
                    "disks_to_polygons expects an all-disk arrangement",
                ))
            }
        }
    }
    let out = Arrangement::new(arr.dim, arr.topology, bodies)?;
    let before = relation_matrix(arr)?;
    let after = relation_matrix(&out)?;
    if before != after {
        return Err(GeomError::MarginTooSmall);
    }
    Ok(out)
}

/// Every pair must hold its relation with slack at least `margin`: a gap of
/// that size, or an overlap depth of that size with the containment slack
/// also bounded away from zero. Tangencies and grazing containments fail
/// here before any polygon is built.
fn validate_pair_margins(arr: &Arrangement, margin: &Scalar) -> Result<(), GeomError> {
    const BITS: u32 = 64;
    let disks: Vec<(&Point, &Scalar)> = arr
        .bodies()
        .iter()
        .filter_map(|(_, b)| match b {
            ConvexBody::Disk { center, radius_sq } => Some((center, radius_sq)),
            _ => None,
        })
        .collect();
    for (i, (c1, s1)) in disks.iter().enumerate() {
        for (c2, s2) in &disks[i + 1..] {
            let d = c1.dist_sq(c2);
            let d_lo = crate::scalar::sqrt_lower(&d, BITS);
            let d_hi = crate::scalar::sqrt_upper(&d, BITS);
            let r1_lo = sqrt_lower(s1, BITS);
            let r1_hi = crate::scalar::sqrt_upper(s1, BITS);
            let r2_lo = sqrt_lower(s2, BITS);
            let r2_hi = crate::scalar::sqrt_upper(s2, BITS);
            let gap = &d_lo - &r1_hi - &r2_hi;
            if &gap >= margin {
                continue;
            }
            let overlap = &r1_lo + &r2_lo - &d_hi;
            // Containment slack of either order, bounded from both sides.
            let c12 = &r1_lo - &r2_hi - &d_hi; // disk 2 inside disk 1
            let c21 = &r2_lo - &r1_hi - &d_hi;
            let sticks12 = &d_lo + &r2_lo - &r1_hi; // disk 2 sticks out of 1
            let sticks21 = &d_lo + &r1_lo - &r2_hi;
            let order_ok = |inside: &Scalar, sticks: &Scalar| {
                inside >= margin || sticks >= margin
            };
            if &overlap >= margin && order_ok(&c12, &sticks12) && order_ok(&c21, &sticks21) {
                continue;
            }
            return Err(GeomError::MarginTooSmall);
        }
    }
    Ok(())
}

/// An inscribed convex polygon within Hausdorff distance `deviation` of the
/// disk. Vertices are exact rational points at a common rational distance
/// `r_in <= r` from the center.
fn inscribe_polygon(
    center: &Point,
    radius_sq: &Scalar,
    deviation: &Scalar,
) -> Result<ConvexBody, GeomError> {
    let r_f = scalar_to_f64(radius_sq).sqrt();
    let dev_f = scalar_to_f64(deviation);
    if !(r_f.is_finite() && dev_f > 0.0) {
        return Err(GeomError::MarginTooSmall);
    }
    // Pick a vertex count so the sagitta eats at most half the budget; the
    // radius shortfall eats the other half. Verified exactly below.
    let half = dev_f / 2.0;
    let cos_needed = (1.0 - half / r_f).clamp(-1.0, 1.0);
    let step = cos_needed.acos().max(1e-6);
    let m = ((std::f64::consts::PI / step).ceil() as usize).clamp(8, 4096);
    // Rational radius within half the budget of the true radius.
    let bits = (2.0 - (dev_f / (r_f + 1.0)).log2()).max(8.0).min(200.0) as u32;
    let r_in = sqrt_lower(radius_sq, bits);
    if !r_in.is_positive() {
        return Err(GeomError::MarginTooSmall);
    }
    // Rational unit vectors via the tangent half-angle parametrization.
    let mut vertices = Vec::with_capacity(m);
    for k in 0..m {
        let theta = 2.0 * std::f64::consts::PI * (k as f64) / (m as f64);
        let (ux, uy) = rational_unit(theta);
        vertices.push(Point::d2(
            &center.coords[0] + &r_in * &ux,
            &center.coords[1] + &r_in * &uy,
        ));
    }
    validate_polygon(&vertices).map_err(|_| GeomError::MarginTooSmall)?;
    // Exact check: the polygon contains the disk shrunk by `deviation`,
    // i.e. every facet clears radius (r - deviation).
    let facets = super::polygon::polygon_facets(&vertices);
    let shrunk = {
        // (r - deviation)^2 = radius_sq + deviation^2 - 2 r deviation;
        // use the upper sqrt bound on r for a safe (larger) target.
        let r_ub = crate::scalar::sqrt_upper(radius_sq, 64);
        let v = radius_sq + deviation * deviation
            - crate::scalar::s_int(2) * deviation * &r_ub;
        if v.is_positive() {
            v
        } else {
            Scalar::zero()
        }
    };
    for f in &facets {
        let slack = &f.c - f.a.dot(center);
        if slack.is_negative() || &slack * &slack < &shrunk * &f.a.norm_sq() {
            return Err(GeomError::MarginTooSmall);
        }
    }
    Ok(ConvexBody::Polygon { vertices })
}

/// A rational point close to `(cos t, sin t)` and exactly on the unit circle.
fn rational_unit(theta: f64) -> (Scalar, Scalar) {
    // tan half-angle: (cos, sin) = ((1-u^2)/(1+u^2), 2u/(1+u^2)).
    let half = theta / 2.0;
    let t = half.tan();
    let u = if t.is_finite() && t.abs() < 1e6 {
        rational_round(t, 1 << 20)
    } else {
        // Near theta = pi the parametrization blows up; use the antipode.
        return (crate::scalar::s_int(-1), crate::scalar::s_int(0));
    };
    let u2 = &u * &u;
    let denom = Scalar::one() + &u2;
    ((Scalar::one() - &u2) / &denom, crate::scalar::s_int(2) * &u / &denom)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::predicates::pair_intersects;
    use crate::geom::Topology;
    use crate::scalar::{s_frac, s_int};

    fn disk(x: i64, y: i64, r_sq: i64) -> ConvexBody {
        ConvexBody::Disk {
            center: Point::d2(s_int(x), s_int(y)),
            radius_sq: s_int(r_sq),
        }
    }

    #[test]
    fn single_disk_roundtrip() {
        let arr =
            Arrangement::new(2, Topology::Open, vec![(1, disk(0, 0, 4))]).unwrap();
        let out = disks_to_polygons(&arr, &s_frac(1, 10)).unwrap();
        match out.body(1).unwrap() {
            ConvexBody::Polygon { vertices } => assert!(vertices.len() >= 8),
            other => panic!("expected polygon, got {other:?}"),
        }
    }

    #[test]
    fn overlap_survives_when_margin_allows() {
        // Lens depth 2 - sqrt(2) ≈ 0.59 ≥ margin 1/4.
        let arr = Arrangement::new(
            2,
            Topology::Open,
            vec![(1, disk(0, 0, 1)), (2, disk(1, 1, 1))],
        )
        .unwrap();
        let out = disks_to_polygons(&arr, &s_frac(1, 4)).unwrap();
        assert!(pair_intersects(
            out.body(1).unwrap(),
            out.body(2).unwrap(),
            Topology::Open
        )
        .unwrap());
    }

    #[test]
    fn tangency_cannot_be_preserved() {
        let arr = Arrangement::new(
            2,
            Topology::Closed,
            vec![(1, disk(0, 0, 1)), (2, disk(2, 0, 1))],
        )
        .unwrap();
        assert_eq!(
            disks_to_polygons(&arr, &s_frac(1, 10)).unwrap_err(),
            GeomError::MarginTooSmall
        );
    }
}
