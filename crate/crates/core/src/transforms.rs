//! Trim and inflate operators and the conversions between open and closed
//! realizations of 2-sparse codes.
//!
//! Trim is erosion by an epsilon ball, inflate is the Minkowski sum with
//! one. Exact inward/outward facet offsets would need irrational norms, so
//! polytopes are offset by a rational amount within the band
//! `[eps/2, eps]`; every epsilon chosen here carries enough slack that any
//! offset in that band preserves the code, and conversion entry points
//! halve the chosen epsilon once more before use.

use crate::geom::polygon::{canonicalize_polygon, chebyshev_center, clip_by_halfplane, polygon_facets, Halfplane};
use crate::geom::predicates::{
    contains, deep_pair_point, pair_intersects, witness_point_outside,
};
use crate::geom::simplex::{solve, LpOutcome, StandardForm};
use crate::geom::{hull3, Arrangement, ConvexBody, GeomError, Point, Topology};
use crate::scalar::{exact_sqrt, s_frac, s_int, sqrt_bounds, sqrt_lower, Scalar};
use crate::verify::has_triple_intersection;
use num_traits::{One, Signed, Zero};
use std::collections::BTreeMap;

#[derive(Debug)]
pub enum TransformError {
    NotTwoSparseArrangement(usize, usize, usize),
    WrongTopology(&'static str),
    /// No rational witness with positive margin was found; the arrangement
    /// is too degenerate for the epsilon-selection recipes.
    WitnessSearchFailed(String),
    Geometry(GeomError),
}

impl std::fmt::Display for TransformError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            TransformError::NotTwoSparseArrangement(i, j, k) => {
                write!(f, "bodies {i}, {j}, {k} share a point; not a 2-sparse arrangement")
            }
            TransformError::WrongTopology(need) => write!(f, "expected a {need} arrangement"),
            TransformError::WitnessSearchFailed(what) => {
                write!(f, "witness search failed: {what}")
            }
            TransformError::Geometry(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for TransformError {}

impl From<GeomError> for TransformError {
    fn from(e: GeomError) -> Self {
        TransformError::Geometry(e)
    }
}

/// Erosion of a body by `eps`: the set of centers of `eps`-balls inside it,
/// with lower-dimensional results collapsing to `Empty`. Total on every
/// body kind; an empty result is a value, not an error.
pub fn trim(body: &ConvexBody, eps: &Scalar) -> ConvexBody {
    assert!(eps.is_positive(), "trim needs a positive epsilon");
    let dim = body.dim();
    match body {
        ConvexBody::Empty { .. } | ConvexBody::Segment { .. } => ConvexBody::Empty { dim },
        ConvexBody::Interval { lo, hi } => {
            let nlo = lo + eps;
            let nhi = hi - eps;
            if nlo < nhi {
                ConvexBody::Interval { lo: nlo, hi: nhi }
            } else {
                ConvexBody::Empty { dim }
            }
        }
        ConvexBody::Polygon { vertices } => {
            let shifted = shift_facets_inward(&polygon_facets(vertices), eps);
            let mut chain = vertices.clone();
            for h in &shifted {
                chain = clip_by_halfplane(&chain, h);
                if chain.is_empty() {
                    return ConvexBody::Empty { dim };
                }
            }
            match canonicalize_polygon(&chain) {
                Some(vs) => ConvexBody::Polygon { vertices: vs },
                None => ConvexBody::Empty { dim },
            }
        }
        ConvexBody::Polytope3 { vertices } => match hull3::facets3(vertices) {
            None => ConvexBody::Empty { dim },
            Some(facets) => {
                let shifted = shift_facets_inward(&facets, eps);
                let vs = hull3::vertices_from_halfspaces3(&shifted);
                if hull3::is_full_dimensional(&vs) {
                    ConvexBody::Polytope3 { vertices: vs }
                } else {
                    ConvexBody::Empty { dim }
                }
            }
        },
        ConvexBody::Disk { center, radius_sq } => {
            match band_radius(radius_sq, eps, false) {
                Some(r) => ConvexBody::Disk {
                    center: center.clone(),
                    radius_sq: &r * &r,
                },
                None => ConvexBody::Empty { dim },
            }
        }
        ConvexBody::Offset { core, radius } => {
            if eps < radius {
                ConvexBody::Offset {
                    core: core.clone(),
                    radius: radius - eps,
                }
            } else if eps == radius {
                // The erosion is exactly the core; only a full-dimensional
                // core survives the interior operation.
                match core.as_ref() {
                    ConvexBody::Interval { lo, hi } if lo < hi => core.as_ref().clone(),
                    ConvexBody::Polygon { .. } => core.as_ref().clone(),
                    ConvexBody::Polytope3 { vertices }
                        if hull3::is_full_dimensional(vertices) =>
                    {
                        core.as_ref().clone()
                    }
                    _ => ConvexBody::Empty { dim },
                }
            } else {
                trim(core, &(eps - radius))
            }
        }
    }
}

/// Minkowski sum with an `eps`-ball. Total; inflating an offset adds radii.
pub fn inflate(body: &ConvexBody, eps: &Scalar) -> ConvexBody {
    assert!(eps.is_positive(), "inflate needs a positive epsilon");
    match body {
        ConvexBody::Empty { dim } => ConvexBody::Empty { dim: *dim },
        ConvexBody::Interval { lo, hi } => ConvexBody::Interval {
            lo: lo - eps,
            hi: hi + eps,
        },
        ConvexBody::Segment { .. } | ConvexBody::Polygon { .. } | ConvexBody::Polytope3 { .. } => {
            ConvexBody::Offset {
                core: Box::new(body.clone()),
                radius: eps.clone(),
            }
        }
        ConvexBody::Disk { center, radius_sq } => {
            let r = band_radius(radius_sq, eps, true).expect("outward band radius exists");
            ConvexBody::Disk {
                center: center.clone(),
                radius_sq: &r * &r,
            }
        }
        ConvexBody::Offset { core, radius } => ConvexBody::Offset {
            core: core.clone(),
            radius: radius + eps,
        },
    }
}

/// Shift `a.x <= c` inward by distance `eps` exactly when `|a|` is
/// rational, and otherwise by a rational distance within `[eps/2, eps]`.
fn shift_facets_inward(facets: &[Halfplane], eps: &Scalar) -> Vec<Halfplane> {
    facets
        .iter()
        .map(|f| {
            let nsq = f.a.norm_sq();
            let step = match exact_sqrt(&nsq) {
                Some(norm) => eps * norm,
                None => s_frac(3, 4) * eps * sqrt_lower(&nsq, 48),
            };
            Halfplane {
                a: f.a.clone(),
                c: &f.c - step,
            }
        })
        .collect()
}

/// New disk radius after an inward (`outward = false`) or outward band
/// offset by `eps`: exact when the radius is rational, otherwise a rational
/// value within `[eps/2, eps]` of the true offset, monotone in `eps`.
/// `None` when the disk erodes away.
fn band_radius(radius_sq: &Scalar, eps: &Scalar, outward: bool) -> Option<Scalar> {
    if let Some(r) = exact_sqrt(radius_sq) {
        let nr = if outward { &r + eps } else { &r - eps };
        return nr.is_positive().then_some(nr);
    }
    // Precision chosen so the sqrt bound error is at most eps/4; the bit
    // count is monotone in eps, which keeps trim monotone too.
    let mut k = 0u32;
    let mut scaled = eps.clone();
    while scaled < Scalar::one() && k < 4096 {
        scaled = scaled * s_int(2);
        k += 1;
    }
    let magnitude_bits = (radius_sq.numer().bits() / 2 + 8) as u32;
    let bits = 48 + k + magnitude_bits;
    let r_lb = sqrt_lower(radius_sq, bits);
    let step = s_frac(3, 4) * eps;
    let nr = if outward { &r_lb + &step } else { &r_lb - &step };
    nr.is_positive().then_some(nr)
}

/// A witness inscribed ball: a rational center and a rational lower bound
/// on a ball radius around it inside the body.
fn inradius_witness(body: &ConvexBody) -> Option<(Point, Scalar)> {
    match body {
        ConvexBody::Interval { lo, hi } if lo < hi => Some((
            Point::d1((lo + hi) / s_int(2)),
            (hi - lo) / s_int(2),
        )),
        ConvexBody::Polygon { vertices } => chebyshev_center(&polygon_facets(vertices), 2),
        ConvexBody::Polytope3 { vertices } => {
            let facets = hull3::facets3(vertices)?;
            chebyshev_center(&facets, 3)
        }
        ConvexBody::Disk { center, radius_sq } => {
            let r = sqrt_lower(radius_sq, 48);
            r.is_positive().then(|| (center.clone(), r))
        }
        ConvexBody::Offset { core, radius } => {
            let anchor = core.seed_points().into_iter().next()?;
            Some((anchor, radius.clone()))
        }
        _ => None,
    }
}

/// Epsilon such that trimming every body by it preserves the code, chosen
/// by the per-body inscribed-ball and per-pair witness recipes. The result
/// already carries the recipes' halving; callers halve once more before
/// trimming to absorb the rational offset band.
pub fn choose_trim_epsilon(arr: &Arrangement) -> Result<Scalar, TransformError> {
    if arr.topology != Topology::Open {
        return Err(TransformError::WrongTopology("open"));
    }
    if let Some((i, j, k)) = has_triple_intersection(arr)? {
        return Err(TransformError::NotTwoSparseArrangement(i, j, k));
    }
    let live: Vec<(usize, &ConvexBody)> = arr
        .bodies()
        .iter()
        .filter(|(_, b)| !b.is_empty())
        .map(|(l, b)| (*l, b))
        .collect();
    let mut eps: Option<Scalar> = None;
    let mut shrink = |slot: &mut Option<Scalar>, v: Scalar| {
        debug_assert!(v.is_positive());
        if slot.as_ref().is_none_or(|m| v < *m) {
            *slot = Some(v);
        }
    };
    for (label, body) in &live {
        let (_, delta) = inradius_witness(body).ok_or_else(|| {
            TransformError::WitnessSearchFailed(format!(
                "no inscribed ball for body {label}; open realizations need full-dimensional bodies"
            ))
        })?;
        shrink(&mut eps, delta / s_int(2));
    }
    for (ai, (li, x)) in live.iter().enumerate() {
        for (lj, y) in live.iter().skip(ai + 1) {
            if !pair_intersects(x, y, Topology::Open)? {
                continue; // Type A: the per-body epsilons suffice
            }
            let x_in_y = contains(y, x)?;
            let y_in_x = contains(x, y)?;
            match (x_in_y, y_in_x) {
                (true, true) => {} // equal bodies shrink in lockstep
                (true, false) | (false, true) => {
                    let (outer, inner, outer_l, inner_l) = if x_in_y {
                        (y, x, lj, li)
                    } else {
                        (x, y, li, lj)
                    };
                    let (_, m) = witness_point_outside(outer, inner).ok_or_else(|| {
                        TransformError::WitnessSearchFailed(format!(
                            "no ball in body {outer_l} avoiding body {inner_l}"
                        ))
                    })?;
                    shrink(&mut eps, m / s_int(2));
                }
                (false, false) => {
                    for (a, b, la, lb) in [(x, y, li, lj), (y, x, lj, li)] {
                        let (_, m) = witness_point_outside(a, b).ok_or_else(|| {
                            TransformError::WitnessSearchFailed(format!(
                                "no ball in body {la} avoiding body {lb}"
                            ))
                        })?;
                        shrink(&mut eps, m / s_int(2));
                    }
                    let (_, rho) = deep_pair_point(x, y).ok_or_else(|| {
                        TransformError::WitnessSearchFailed(format!(
                            "no ball inside bodies {li} and {lj}"
                        ))
                    })?;
                    shrink(&mut eps, rho / s_int(2));
                }
            }
        }
    }
    eps.map(|e| crate::scalar::floor_pow2(&e)).ok_or_else(|| {
        TransformError::WitnessSearchFailed("arrangement has no nonempty bodies".into())
    })
}

/// Per-body inflation amounts such that inflating simultaneously by half
/// their minimum turns a closed realization into an open one with the same
/// code. Bodies are processed maximal-first against the partially inflated
/// arrangement, mirroring the iterative argument that justifies the choice.
pub fn choose_inflate_epsilon(
    arr: &Arrangement,
) -> Result<BTreeMap<usize, Scalar>, TransformError> {
    if arr.topology != Topology::Closed {
        return Err(TransformError::WrongTopology("closed"));
    }
    if let Some((i, j, k)) = has_triple_intersection(arr)? {
        return Err(TransformError::NotTwoSparseArrangement(i, j, k));
    }
    let live: Vec<usize> = arr
        .bodies()
        .iter()
        .filter(|(_, b)| !b.is_empty())
        .map(|(l, _)| *l)
        .collect();
    // Group equal bodies; they inflate simultaneously by the same amount.
    let mut groups: Vec<Vec<usize>> = Vec::new();
    'next: for &l in &live {
        for g in &mut groups {
            let rep = arr.body(g[0]).unwrap();
            let b = arr.body(l).unwrap();
            if contains(rep, b)? && contains(b, rep)? {
                g.push(l);
                continue 'next;
            }
        }
        groups.push(vec![l]);
    }
    // Supersets first: group A precedes group B when A's body strictly
    // contains B's.
    let mut order: Vec<usize> = (0..groups.len()).collect();
    let mut strictly_above = vec![vec![false; groups.len()]; groups.len()];
    for i in 0..groups.len() {
        for j in 0..groups.len() {
            if i != j {
                let bi = arr.body(groups[i][0]).unwrap();
                let bj = arr.body(groups[j][0]).unwrap();
                strictly_above[i][j] = contains(bi, bj)? && !contains(bj, bi)?;
            }
        }
    }
    order.sort_by_key(|&g| strictly_above.iter().filter(|row| row[g]).count());

    let base = (arr.diameter_upper_bound() + Scalar::one()) / s_int(4);
    let mut working = arr.clone();
    let mut eps_map: BTreeMap<usize, Scalar> = BTreeMap::new();
    let mut group_eps: Vec<Option<Scalar>> = vec![None; groups.len()];
    for &gi in &order {
        let rep_label = groups[gi][0];
        let rep = working.body(rep_label).unwrap().clone();
        let others: Vec<usize> = live
            .iter()
            .copied()
            .filter(|l| !groups[gi].contains(l))
            .collect();
        let mut bound = base.clone();
        let mut shrink = |bound: &mut Scalar, v: Scalar| {
            if v < *bound {
                *bound = v;
            }
        };
        // Distance to disjoint bodies.
        for &l in &others {
            let other = working.body(l).unwrap();
            if !pair_intersects(&rep, other, Topology::Closed)? {
                let gap = crate::geom::predicates::body_gap_lb(&rep, other).unwrap();
                if !gap.is_positive() {
                    return Err(TransformError::WitnessSearchFailed(format!(
                        "cannot certify the gap between bodies {rep_label} and {l}"
                    )));
                }
                shrink(&mut bound, gap);
            }
        }
        // Distance to pairwise intersections not involving this group.
        for (ai, &lj) in others.iter().enumerate() {
            for &lk in others.iter().skip(ai + 1) {
                let bj = working.body(lj).unwrap();
                let bk = working.body(lk).unwrap();
                if !pair_intersects(bj, bk, Topology::Closed)? {
                    continue;
                }
                let d = dist_to_pair_intersection(&rep, bj, bk, arr.dim).ok_or_else(|| {
                    TransformError::WitnessSearchFailed(format!(
                        "cannot certify distance from body {rep_label} to bodies {lj} ∩ {lk}"
                    ))
                })?;
                shrink(&mut bound, d);
            }
        }
        // Margins that keep non-containments: both directions around the
        // group representative.
        for &l in &others {
            let other = working.body(l).unwrap();
            if !contains(&rep, other)? {
                let (_, m) = witness_point_outside(other, &rep).ok_or_else(|| {
                    TransformError::WitnessSearchFailed(format!(
                        "no witness that body {l} sticks out of body {rep_label}"
                    ))
                })?;
                shrink(&mut bound, m);
            }
        }
        let mut eps_g = crate::scalar::floor_pow2(&(bound / s_int(4)));
        // Strict subsets inflate by strictly less than their supersets.
        for (gj, val) in group_eps.iter().enumerate() {
            if let Some(sup) = val {
                if strictly_above[gj][gi] {
                    let half = sup / s_int(2);
                    if half < eps_g {
                        eps_g = crate::scalar::floor_pow2(&half);
                    }
                }
            }
        }
        group_eps[gi] = Some(eps_g.clone());
        for &l in &groups[gi] {
            let inflated = inflate(working.body(l).unwrap(), &eps_g);
            working = working.with_body(l, inflated);
            eps_map.insert(l, eps_g.clone());
        }
    }
    Ok(eps_map)
}

/// Rational lower bound on the distance from `body` to the intersection
/// `bj ∩ bk` (which is nonempty and disjoint from `body`).
pub(crate) fn dist_to_pair_intersection(
    body: &ConvexBody,
    bj: &ConvexBody,
    bk: &ConvexBody,
    dim: usize,
) -> Option<Scalar> {
    // Separating direction: from the intersection toward the body, refined
    // by alternating between the body's nearest point and the
    // intersection's support point. `val_low - val_high > 0` certifies a
    // separating slab whose width bounds the distance from below.
    let outer_j = cube_outer_vertices(bj, dim)?;
    let outer_k = cube_outer_vertices(bk, dim)?;
    let mut probe = crate::verify::pair_common_point(bj, bk)?;
    for _ in 0..6 {
        let anchor = body_anchor_toward(body, &probe);
        let dir = anchor.sub(&probe);
        if dir.norm_sq().is_zero() {
            break;
        }
        let norm_ub = crate::scalar::sqrt_upper(&dir.norm_sq(), 48);
        let val_low = linear_min_over_body(&dir, body)?;
        let Some((val_high, support)) =
            max_linear_over_hull_intersection(&dir, &outer_j, &outer_k, dim)
        else {
            break;
        };
        let gap = val_low - val_high;
        if gap.is_positive() {
            return Some(gap / norm_ub);
        }
        if support == probe {
            break;
        }
        probe = support;
    }
    // The cube outer approximation can be too coarse once neighbors carry
    // offsets. Bisect against the certified triple test instead: an empty
    // triple for the body grown by theta bounds the distance by theta/2
    // (the growth reaches at least theta/2 even through the rational band).
    let (blo, bhi) = body.bounding_box()?;
    let mut theta = (&bhi.coords[0] - &blo.coords[0] + Scalar::one()) / s_int(4);
    for _ in 0..32 {
        let grown = inflate(body, &theta);
        match crate::geom::bnb::triple_common_point([&grown, bj, bk], Topology::Closed) {
            crate::geom::bnb::TripleResult::Empty { .. } => {
                return Some(theta / s_int(2));
            }
            _ => theta = theta / s_int(2),
        }
    }
    None
}

fn body_anchor_toward(body: &ConvexBody, toward: &Point) -> Point {
    use crate::geom::distance::closest_point_on_hull;
    use crate::geom::predicates::{metric, Metric};
    match metric(body) {
        Some(Metric::Hull(v)) | Some(Metric::Sum { core: v, .. }) => {
            closest_point_on_hull(toward, &v)
        }
        Some(Metric::Ball { center, .. }) => center.clone(),
        None => toward.clone(),
    }
}

fn linear_min_over_body(dir: &Point, body: &ConvexBody) -> Option<Scalar> {
    use crate::geom::predicates::{metric, Metric};
    let norm_ub = crate::scalar::sqrt_upper(&dir.norm_sq(), 48);
    match metric(body)? {
        Metric::Hull(v) => v.iter().map(|p| dir.dot(p)).min(),
        Metric::Ball { center, radius_sq } => {
            let r_ub = crate::scalar::sqrt_upper(radius_sq, 48);
            Some(dir.dot(center) - norm_ub * r_ub)
        }
        Metric::Sum { core, radius } => core
            .iter()
            .map(|p| dir.dot(p))
            .min()
            .map(|m| m - &norm_ub * radius),
    }
}

/// Vertices of an outer approximation: the core plus its radius cube.
fn cube_outer_vertices(body: &ConvexBody, dim: usize) -> Option<Vec<Point>> {
    use crate::geom::predicates::{metric, Metric};
    let (core, r) = match metric(body)? {
        Metric::Hull(v) => return Some(v),
        Metric::Ball { center, radius_sq } => (
            vec![center.clone()],
            crate::scalar::sqrt_upper(radius_sq, 48),
        ),
        Metric::Sum { core, radius } => (core, radius.clone()),
    };
    let mut out = Vec::with_capacity(core.len() << dim);
    for v in &core {
        for mask in 0..1u32 << dim {
            let coords: Vec<Scalar> = (0..dim)
                .map(|k| {
                    if mask >> k & 1 == 1 {
                        &v.coords[k] + &r
                    } else {
                        &v.coords[k] - &r
                    }
                })
                .collect();
            out.push(Point::new(coords));
        }
    }
    Some(out)
}

/// Exact maximum of `dir . x` over the intersection of two hulls, plus the
/// maximizing point.
fn max_linear_over_hull_intersection(
    dir: &Point,
    va: &[Point],
    vb: &[Point],
    dim: usize,
) -> Option<(Scalar, Point)> {
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
    let mut c = vec![Scalar::zero(); cols];
    for (i, v) in va.iter().enumerate() {
        c[i] = -dir.dot(v);
    }
    match solve(&StandardForm { a, b, c }) {
        LpOutcome::Optimal(x, val) => {
            let mut coords = vec![Scalar::zero(); dim];
            for (i, v) in va.iter().enumerate() {
                for k in 0..dim {
                    coords[k] += &x[i] * &v.coords[k];
                }
            }
            Some((-val, Point::new(coords)))
        }
        _ => None,
    }
}

/// Trim every body by half the chosen epsilon and reinterpret the result as
/// closed sets; the code is unchanged.
pub fn open_to_closed(arr: &Arrangement) -> Result<Arrangement, TransformError> {
    let eps = choose_trim_epsilon(arr)? / s_int(2);
    let bodies = arr
        .bodies()
        .iter()
        .map(|(l, b)| (*l, if b.is_empty() { b.clone() } else { trim(b, &eps) }))
        .collect();
    Arrangement::new(arr.dim, Topology::Closed, bodies).map_err(TransformError::Geometry)
}

/// Inflate every body by half the minimum of the chosen per-body epsilons;
/// the result is an open realization of the same code.
pub fn closed_to_open(arr: &Arrangement) -> Result<Arrangement, TransformError> {
    let eps_map = choose_inflate_epsilon(arr)?;
    let Some(eps) = eps_map.values().min().cloned() else {
        return Ok(arr.with_topology(Topology::Open));
    };
    let eps = eps / s_int(2);
    let bodies = arr
        .bodies()
        .iter()
        .map(|(l, b)| {
            (
                *l,
                if b.is_empty() {
                    b.clone()
                } else {
                    inflate(b, &eps)
                },
            )
        })
        .collect();
    Arrangement::new(arr.dim, Topology::Open, bodies).map_err(TransformError::Geometry)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::code::parse_code;
    use crate::verify::compute_code;

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
    fn trim_examples() {
        // Disk radius 2 trimmed by 1 becomes radius 1.
        let d = ConvexBody::Disk {
            center: Point::d2(s_int(0), s_int(0)),
            radius_sq: s_int(4),
        };
        match trim(&d, &s_int(1)) {
            ConvexBody::Disk { radius_sq, .. } => assert_eq!(radius_sq, s_int(1)),
            other => panic!("expected disk, got {other:?}"),
        }
        // Square [0,4]^2 trimmed by 1 is [1,3]^2.
        match trim(&square(0, 4), &s_int(1)) {
            ConvexBody::Polygon { vertices } => {
                assert_eq!(vertices.len(), 4);
                for v in vertices {
                    for c in v.coords {
                        assert!(c >= s_int(1) && c <= s_int(3));
                    }
                }
            }
            other => panic!("expected polygon, got {other:?}"),
        }
        // Segments trim to nothing.
        let seg = ConvexBody::Segment {
            a: Point::d2(s_int(0), s_int(0)),
            b: Point::d2(s_int(5), s_int(0)),
        };
        assert!(trim(&seg, &s_frac(1, 100)).is_empty());
        // Over-trimming empties a body.
        assert!(trim(&square(0, 2), &s_int(2)).is_empty());
    }

    #[test]
    fn trim_monotone_and_contained() {
        let body = square(0, 8);
        let t1 = trim(&body, &s_int(1));
        let t2 = trim(&body, &s_int(2));
        assert!(contains(&body, &t1).unwrap());
        assert!(contains(&t1, &t2).unwrap());
        assert!(!contains(&t2, &t1).unwrap());
    }

    #[test]
    fn inflate_examples() {
        let pt = ConvexBody::Segment {
            a: Point::d2(s_int(1), s_int(1)),
            b: Point::d2(s_int(1), s_int(1)),
        };
        match inflate(&pt, &s_frac(1, 2)) {
            ConvexBody::Offset { radius, .. } => assert_eq!(radius, s_frac(1, 2)),
            other => panic!("expected offset, got {other:?}"),
        }
        let d = ConvexBody::Disk {
            center: Point::d2(s_int(0), s_int(0)),
            radius_sq: s_int(1),
        };
        match inflate(&d, &s_frac(1, 2)) {
            ConvexBody::Disk { radius_sq, .. } => assert_eq!(radius_sq, s_frac(9, 4)),
            other => panic!("expected disk, got {other:?}"),
        }
        // Offsets compose by radius addition.
        let off = inflate(&pt, &s_frac(1, 2));
        match inflate(&off, &s_frac(1, 4)) {
            ConvexBody::Offset { radius, .. } => assert_eq!(radius, s_frac(3, 4)),
            other => panic!("expected offset, got {other:?}"),
        }
    }

    #[test]
    fn irrational_disk_offsets_stay_in_band() {
        let d = ConvexBody::Disk {
            center: Point::d2(s_int(0), s_int(0)),
            radius_sq: s_int(2), // radius sqrt(2)
        };
        let eps = s_frac(1, 10);
        let ConvexBody::Disk { radius_sq: out, .. } = trim(&d, &eps) else {
            panic!("expected disk");
        };
        // (sqrt(2) - 1/10)^2 <= out and out <= (sqrt(2) - 1/20)^2, checked
        // through the squared form.
        let lo = s_int(2) + &eps * &eps - s_int(2) * &eps * crate::scalar::sqrt_upper(&s_int(2), 64);
        let half = &eps / s_int(2);
        let hi = s_int(2) + &half * &half
            - s_int(2) * &half * crate::scalar::sqrt_lower(&s_int(2), 64);
        assert!(out >= lo && out <= hi, "band violated: {out}");
    }

    #[test]
    fn choose_trim_epsilon_single_square() {
        let arr = super::super::geom::Arrangement::new(
            2,
            Topology::Open,
            vec![(1, square(0, 2))],
        )
        .unwrap();
        let eps = choose_trim_epsilon(&arr).unwrap();
        // Half of the certified inradius bound: close to 1/2, never more.
        assert!(eps.is_positive() && eps <= s_frac(1, 2));
        assert!(eps > s_frac(2, 5));
    }

    #[test]
    fn open_closed_round_trip_preserves_interval_code() {
        let arr = super::super::geom::Arrangement::new(
            1,
            Topology::Open,
            vec![
                (1, ConvexBody::Interval { lo: s_int(0), hi: s_int(2) }),
                (2, ConvexBody::Interval { lo: s_int(1), hi: s_int(4) }),
                (3, ConvexBody::Interval { lo: s_int(2), hi: s_int(3) }),
            ],
        )
        .unwrap();
        let fig1 = parse_code("000,100,010,110,011").unwrap().code;
        assert_eq!(compute_code(&arr).unwrap(), fig1);
        let closed = open_to_closed(&arr).unwrap();
        assert_eq!(closed.topology, Topology::Closed);
        assert_eq!(compute_code(&closed).unwrap(), fig1);
        let reopened = closed_to_open(&closed).unwrap();
        assert_eq!(reopened.topology, Topology::Open);
        assert_eq!(compute_code(&reopened).unwrap(), fig1);
    }

    #[test]
    fn closed_to_open_tangent_disks() {
        // Tangent closed unit disks: the code has the pair word; inflation
        // must keep it (the tangency becomes a lens).
        let disk = |x: i64| ConvexBody::Disk {
            center: Point::d2(s_int(x), s_int(0)),
            radius_sq: s_int(1),
        };
        let arr = super::super::geom::Arrangement::new(
            2,
            Topology::Closed,
            vec![(1, disk(0)), (2, disk(2)), (3, disk(10))],
        )
        .unwrap();
        let before = compute_code(&arr).unwrap();
        assert!(before.contains_mask(0b011));
        let open = closed_to_open(&arr).unwrap();
        assert_eq!(compute_code(&open).unwrap(), before);
    }

    #[test]
    fn nested_squares_inflate_with_smaller_inner_epsilon() {
        let arr = super::super::geom::Arrangement::new(
            2,
            Topology::Closed,
            vec![(1, square(0, 4)), (2, square(1, 3))],
        )
        .unwrap();
        let eps = choose_inflate_epsilon(&arr).unwrap();
        assert!(eps[&2] < eps[&1]);
        // The containment margin is 1, so the inner epsilon stays below 1/2.
        assert!(eps[&2] < s_frac(1, 2));
        let open = closed_to_open(&arr).unwrap();
        assert_eq!(
            compute_code(&open).unwrap(),
            compute_code(&arr).unwrap()
        );
    }
}
