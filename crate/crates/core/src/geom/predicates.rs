//! The pairwise and triple predicates every higher module relies on:
//! intersection, containment, relation classification, exact point
//! membership, and rational witness/margin machinery.
//!
//! Conventions. Bodies are closed point sets; `Topology::Open` asks about
//! relative interiors (for full-dimensional bodies: interiors). Containment
//! is closure-insensitive. Polytopal questions are answered by the exact LP
//! in V-representation, which handles degenerate hulls uniformly; disks and
//! offsets go through exact square-root comparisons on rational squared
//! distances.

use super::bnb::{self, TripleResult};
use super::distance::{
    closest_points_hulls, dist_sq_hulls, dist_sq_point_hull,
    dist_sq_point_segment, hull_common_point, hulls_intersect, point_in_hull,
};
use super::hull3::facets3;
use super::polygon::{facet_slack, polygon_facets, Halfplane};
use super::simplex::{solve, LpOutcome, StandardForm};
use super::{Arrangement, ConvexBody, GeomError, Point, RelationMatrix, RelationType, Topology};
use crate::scalar::{
    cmp_sqrt_rat, cmp_sqrt_sum_rat, cmp_sqrt_vs_sqrt_plus_rat, sqrt_lower, sqrt_upper, Scalar,
};
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use std::cmp::Ordering;

const SQRT_BITS: u32 = 48;

/// Metric view of a body: a polytopal core plus a radius.
pub(crate) enum Metric<'a> {
    Hull(Vec<Point>),
    Ball {
        center: &'a Point,
        radius_sq: &'a Scalar,
    },
    Sum {
        core: Vec<Point>,
        radius: &'a Scalar,
    },
}

pub(crate) fn metric(body: &ConvexBody) -> Option<Metric<'_>> {
    match body {
        ConvexBody::Empty { .. } => None,
        ConvexBody::Interval { lo, hi } => Some(Metric::Hull(vec![
            Point::d1(lo.clone()),
            Point::d1(hi.clone()),
        ])),
        ConvexBody::Segment { a, b } => Some(Metric::Hull(vec![a.clone(), b.clone()])),
        ConvexBody::Polygon { vertices } | ConvexBody::Polytope3 { vertices } => {
            Some(Metric::Hull(vertices.clone()))
        }
        ConvexBody::Disk { center, radius_sq } => Some(Metric::Ball { center, radius_sq }),
        ConvexBody::Offset { core, radius } => Some(Metric::Sum {
            core: core.seed_points(),
            radius,
        }),
    }
}

fn check_dims(x: &ConvexBody, y: &ConvexBody) -> Result<(), GeomError> {
    if !x.is_empty() && !y.is_empty() && x.dim() != y.dim() {
        return Err(GeomError::DimensionMismatch);
    }
    Ok(())
}

/// Does `X ∩ Y ≠ ∅` under the given topology?
pub fn pair_intersects(
    x: &ConvexBody,
    y: &ConvexBody,
    topology: Topology,
) -> Result<bool, GeomError> {
    check_dims(x, y)?;
    // Clipping is much cheaper than the LP for many-vertex polygons.
    if let (ConvexBody::Polygon { vertices: va }, ConvexBody::Polygon { vertices: vb }) = (x, y)
    {
        return Ok(match topology {
            Topology::Open => super::polygon::polygon_intersection(va, vb).is_some(),
            Topology::Closed => !super::polygon::clip_chain(va, vb).is_empty(),
        });
    }
    let (Some(mx), Some(my)) = (metric(x), metric(y)) else {
        return Ok(false);
    };
    let strict = topology == Topology::Open;
    let dim = x.dim();
    let ok = |ord: Ordering| {
        if strict {
            ord == Ordering::Less
        } else {
            ord != Ordering::Greater
        }
    };
    Ok(match (&mx, &my) {
        (Metric::Hull(a), Metric::Hull(b)) => {
            if strict {
                relint_common(&[a, b], dim).is_some()
            } else {
                hulls_intersect(a, b, dim)
            }
        }
        (Metric::Hull(a), Metric::Ball { center, radius_sq })
        | (Metric::Ball { center, radius_sq }, Metric::Hull(a)) => {
            let d = dist_sq_point_hull(center, a);
            ok(d.cmp(radius_sq))
        }
        (Metric::Hull(a), Metric::Sum { core, radius })
        | (Metric::Sum { core, radius }, Metric::Hull(a)) => {
            let d = dist_sq_hulls(a, core, dim);
            ok(d.cmp(&(*radius * *radius)))
        }
        (
            Metric::Ball {
                center: c1,
                radius_sq: s1,
            },
            Metric::Ball {
                center: c2,
                radius_sq: s2,
            },
        ) => {
            // sqrt(D) <= sqrt(s1) + sqrt(s2)
            let d = c1.dist_sq(c2);
            let t = &d - *s1 - *s2;
            let ord = if t.is_negative() {
                Ordering::Less
            } else {
                (&t * &t).cmp(&(*s1 * *s2 * crate::scalar::s_int(4)))
            };
            ok(ord)
        }
        (Metric::Ball { center, radius_sq }, Metric::Sum { core, radius })
        | (Metric::Sum { core, radius }, Metric::Ball { center, radius_sq }) => {
            let d = dist_sq_point_hull(center, core);
            ok(cmp_sqrt_vs_sqrt_plus_rat(&d, radius_sq, radius))
        }
        (
            Metric::Sum {
                core: a,
                radius: r1,
            },
            Metric::Sum {
                core: b,
                radius: r2,
            },
        ) => {
            let d = dist_sq_hulls(a, b, dim);
            ok(cmp_sqrt_rat(&d, &(*r1 + *r2)))
        }
    })
}

/// Is `Y ⊆ X` as closed point sets?
pub fn contains(x: &ConvexBody, y: &ConvexBody) -> Result<bool, GeomError> {
    check_dims(x, y)?;
    let Some(my) = metric(y) else {
        return Ok(true); // the empty set is contained in anything
    };
    let Some(mx) = metric(x) else {
        return Ok(false);
    };
    let dim = x.dim();
    Ok(match (&mx, &my) {
        (Metric::Hull(a), Metric::Hull(b)) => {
            if let ConvexBody::Polygon { vertices } = x {
                b.iter()
                    .all(|v| super::polygon::point_in_polygon(vertices, v, false))
            } else {
                b.iter().all(|v| point_in_hull(v, a))
            }
        }
        (Metric::Hull(_), Metric::Ball { center, radius_sq }) => {
            match body_facets(x) {
                Some(facets) => facets.iter().all(|f| {
                    ball_fits_behind_facet(f, center, &Radius::Sqrt((*radius_sq).clone()))
                }),
                None => false, // lower-dimensional hull cannot contain a disk
            }
        }
        (Metric::Hull(_), Metric::Sum { core, radius }) => match body_facets(x) {
            Some(facets) => core.iter().all(|v| {
                facets
                    .iter()
                    .all(|f| ball_fits_behind_facet(f, v, &Radius::Rat((*radius).clone())))
            }),
            None => false,
        },
        (Metric::Ball { center, radius_sq }, Metric::Hull(b)) => {
            b.iter().all(|v| v.dist_sq(center) <= **radius_sq)
        }
        (
            Metric::Ball {
                center: cx,
                radius_sq: sx,
            },
            Metric::Ball {
                center: cy,
                radius_sq: sy,
            },
        ) => {
            // sqrt(D) + sqrt(sy) <= sqrt(sx)  iff  t := sx - D - sy >= 0
            // and 4 D sy <= t^2.
            let d = cx.dist_sq(cy);
            let t = *sx - &d - *sy;
            !t.is_negative() && d * *sy * crate::scalar::s_int(4) <= &t * &t
        }
        (Metric::Ball { center, radius_sq }, Metric::Sum { core, radius }) => {
            core.iter().all(|v| {
                // sqrt(|v-c|^2) <= sqrt(sx) - r
                cmp_sqrt_vs_sqrt_plus_rat(&v.dist_sq(center), radius_sq, &-(*radius).clone())
                    .is_le()
            })
        }
        (Metric::Sum { core, radius }, Metric::Hull(b)) => {
            let rr = *radius * *radius;
            b.iter().all(|v| dist_sq_point_hull(v, core) <= rr)
        }
        (
            Metric::Sum {
                core,
                radius: rx,
            },
            Metric::Ball { center, radius_sq },
        ) => {
            if cmp_sqrt_rat(radius_sq, rx).is_le() {
                // sqrt(D) + sqrt(sy) <= rx
                cmp_sqrt_sum_rat(&dist_sq_point_hull(center, core), radius_sq, rx).is_le()
            } else {
                // center must sit in core eroded by sqrt(sy) - rx
                match core_facets(core, dim) {
                    Some(facets) => facets.iter().all(|f| {
                        ball_fits_behind_facet(
                            f,
                            center,
                            &Radius::SqrtMinusRat((*radius_sq).clone(), (*rx).clone()),
                        )
                    }),
                    None => false,
                }
            }
        }
        (
            Metric::Sum {
                core: ca,
                radius: ra,
            },
            Metric::Sum {
                core: cb,
                radius: rb,
            },
        ) => {
            if *rb <= *ra {
                let t = *ra - *rb;
                let tt = &t * &t;
                cb.iter().all(|v| dist_sq_point_hull(v, ca) <= tt)
            } else {
                match core_facets(ca, dim) {
                    Some(facets) => cb.iter().all(|v| {
                        facets.iter().all(|f| {
                            ball_fits_behind_facet(f, v, &Radius::Rat(*rb - *ra))
                        })
                    }),
                    None => false,
                }
            }
        }
    })
}

enum Radius {
    Rat(Scalar),
    Sqrt(Scalar),
    /// `sqrt(s) - r`, assumed positive.
    SqrtMinusRat(Scalar, Scalar),
}

/// Does the ball of the given radius around `p` fit behind `a.x <= c`?
fn ball_fits_behind_facet(f: &Halfplane, p: &Point, radius: &Radius) -> bool {
    let slack = facet_slack(f, p);
    if slack.is_negative() {
        return false;
    }
    let nsq = f.a.norm_sq();
    match radius {
        Radius::Rat(r) => !r.is_positive() || &slack * &slack >= r * r * nsq,
        Radius::Sqrt(s) => &slack * &slack >= s * &nsq,
        Radius::SqrtMinusRat(s, r) => {
            // (sqrt(s) - r) * ||a|| <= slack, with sqrt(s) > r >= 0.
            let u = (s + r * r) * &nsq - &slack * &slack;
            if !u.is_positive() {
                true
            } else {
                &u * &u <= r * r * &nsq * &nsq * s * crate::scalar::s_int(4)
            }
        }
    }
}

/// Halfspace description of a polytopal body; `None` for lower-dimensional
/// bodies, whose erosion by any positive radius is empty.
fn body_facets(body: &ConvexBody) -> Option<Vec<Halfplane>> {
    match body {
        ConvexBody::Interval { lo, hi } => Some(interval_facets(lo, hi)),
        ConvexBody::Polygon { vertices } => Some(polygon_facets(vertices)),
        ConvexBody::Polytope3 { vertices } => facets3(vertices),
        _ => None,
    }
}

fn core_facets(core: &[Point], dim: usize) -> Option<Vec<Halfplane>> {
    match dim {
        1 => {
            let lo = core.iter().map(|p| p.coords[0].clone()).min()?;
            let hi = core.iter().map(|p| p.coords[0].clone()).max()?;
            Some(interval_facets(&lo, &hi))
        }
        2 => {
            let poly = super::polygon::canonicalize_polygon(&hull2d(core))?;
            Some(polygon_facets(&poly))
        }
        3 => facets3(core),
        _ => None,
    }
}

fn interval_facets(lo: &Scalar, hi: &Scalar) -> Vec<Halfplane> {
    vec![
        Halfplane {
            a: Point::d1(Scalar::one()),
            c: hi.clone(),
        },
        Halfplane {
            a: Point::d1(-Scalar::one()),
            c: -lo.clone(),
        },
    ]
}

/// Convex hull of 2D points, counterclockwise (monotone chain).
pub fn hull2d(points: &[Point]) -> Vec<Point> {
    let mut pts: Vec<Point> = points.to_vec();
    pts.sort();
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let cross = |o: &Point, a: &Point, b: &Point| super::polygon::orient2d(o, a, b);
    let mut lower: Vec<Point> = Vec::new();
    for p in &pts {
        while lower.len() >= 2
            && !cross(&lower[lower.len() - 2], &lower[lower.len() - 1], p).is_positive()
        {
            lower.pop();
        }
        lower.push(p.clone());
    }
    let mut upper: Vec<Point> = Vec::new();
    for p in pts.iter().rev() {
        while upper.len() >= 2
            && !cross(&upper[upper.len() - 2], &upper[upper.len() - 1], p).is_positive()
        {
            upper.pop();
        }
        upper.push(p.clone());
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

/// Exact membership of a rational point in a body. `strict` asks for the
/// relative interior.
pub fn point_membership(body: &ConvexBody, p: &Point, strict: bool) -> bool {
    match body {
        ConvexBody::Empty { .. } => false,
        ConvexBody::Interval { lo, hi } => {
            let x = &p.coords[0];
            if strict {
                if lo == hi {
                    x == lo
                } else {
                    lo < x && x < hi
                }
            } else {
                lo <= x && x <= hi
            }
        }
        ConvexBody::Segment { a, b } => {
            if a == b {
                return p == a;
            }
            if !dist_sq_point_segment(p, a, b).is_zero() {
                return false;
            }
            if !strict {
                return true;
            }
            let d = b.sub(a);
            let t = p.sub(a).dot(&d) / d.norm_sq();
            t.is_positive() && t < Scalar::one()
        }
        ConvexBody::Polygon { vertices } => {
            super::polygon::point_in_polygon(vertices, p, strict)
        }
        ConvexBody::Polytope3 { vertices } => {
            if !point_in_vertex_box(p, vertices, None) {
                return false;
            }
            if strict {
                relint_point(p, vertices)
            } else {
                point_in_hull(p, vertices)
            }
        }
        ConvexBody::Disk { center, radius_sq } => {
            let d = p.dist_sq(center);
            if strict {
                d < *radius_sq
            } else {
                d <= *radius_sq
            }
        }
        ConvexBody::Offset { core, radius } => {
            let verts = core.seed_points();
            if !point_in_vertex_box(p, &verts, Some(radius)) {
                return false;
            }
            let rr = radius * radius;
            // Feature distance decides without the hull-membership LP
            // unless the point might sit deep inside the core.
            let feat = feature_dist_sq_point(p, &verts);
            let near = if strict { feat < rr } else { feat <= rr };
            if near {
                return true;
            }
            point_in_vertex_box(p, &verts, None) && point_in_hull(p, &verts)
        }
    }
}

/// Cheap exact reject: is `p` within the axis-aligned bounding box of the
/// vertices, padded by `pad`?
fn point_in_vertex_box(p: &Point, verts: &[Point], pad: Option<&Scalar>) -> bool {
    let dim = p.dim();
    for k in 0..dim {
        let mut lo = verts[0].coords[k].clone();
        let mut hi = lo.clone();
        for v in &verts[1..] {
            if v.coords[k] < lo {
                lo = v.coords[k].clone();
            }
            if v.coords[k] > hi {
                hi = v.coords[k].clone();
            }
        }
        if let Some(r) = pad {
            lo -= r;
            hi += r;
        }
        if p.coords[k] < lo || p.coords[k] > hi {
            return false;
        }
    }
    true
}

/// Min squared distance from `p` to the vertex/edge/triangle features of a
/// hull (equals the true distance whenever `p` is outside the hull).
fn feature_dist_sq_point(p: &Point, verts: &[Point]) -> Scalar {
    use super::distance::{dist_sq_point_segment, dist_sq_point_triangle3};
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

/// Do the relative interiors of all hulls share a point? Returns the
/// barycentric slack (positive) when they do.
pub fn relint_common(hulls: &[&[Point]], dim: usize) -> Option<Scalar> {
    relint_common_with_point(hulls, dim).map(|(s, _)| s)
}

/// As [`relint_common`], also returning a common point.
pub fn relint_common_with_point(hulls: &[&[Point]], dim: usize) -> Option<(Scalar, Point)> {
    let h = hulls.len();
    debug_assert!(h >= 1);
    let sizes: Vec<usize> = hulls.iter().map(|v| v.len()).collect();
    let total: usize = sizes.iter().sum();
    // Columns: all lambdas, then t, then one surplus per lambda.
    let cols = total + 1 + total;
    let t_col = total;
    let mut a: Vec<Vec<Scalar>> = Vec::new();
    let mut b: Vec<Scalar> = Vec::new();
    let offset = |g: usize| -> usize { sizes[..g].iter().sum() };
    // Equal points: hull 0 combination minus hull g combination = 0.
    for g in 1..h {
        for k in 0..dim {
            let mut row = vec![Scalar::zero(); cols];
            for (i, v) in hulls[0].iter().enumerate() {
                row[i] = v.coords[k].clone();
            }
            for (i, v) in hulls[g].iter().enumerate() {
                row[offset(g) + i] = -v.coords[k].clone();
            }
            a.push(row);
            b.push(Scalar::zero());
        }
    }
    // Convexity: each group sums to 1.
    for g in 0..h {
        let mut row = vec![Scalar::zero(); cols];
        for i in 0..sizes[g] {
            row[offset(g) + i] = Scalar::one();
        }
        a.push(row);
        b.push(Scalar::one());
    }
    // lambda_i - t - surplus_i = 0.
    for i in 0..total {
        let mut row = vec![Scalar::zero(); cols];
        row[i] = Scalar::one();
        row[t_col] = -Scalar::one();
        row[total + 1 + i] = -Scalar::one();
        a.push(row);
        b.push(Scalar::zero());
    }
    let mut c = vec![Scalar::zero(); cols];
    c[t_col] = -Scalar::one();
    match solve(&StandardForm { a, b, c }) {
        LpOutcome::Optimal(x, _) => {
            let t = x[t_col].clone();
            if !t.is_positive() {
                return None;
            }
            let mut coords = vec![Scalar::zero(); dim];
            for (i, v) in hulls[0].iter().enumerate() {
                for k in 0..dim {
                    coords[k] += &x[i] * &v.coords[k];
                }
            }
            Some((t, Point::new(coords)))
        }
        _ => None,
    }
}

/// Is `p` in the relative interior of `conv(verts)`?
pub fn relint_point(p: &Point, verts: &[Point]) -> bool {
    let dim = p.dim();
    let m = verts.len();
    let cols = m + 1 + m;
    let mut a: Vec<Vec<Scalar>> = Vec::new();
    let mut b: Vec<Scalar> = Vec::new();
    for k in 0..dim {
        let mut row = vec![Scalar::zero(); cols];
        for (i, v) in verts.iter().enumerate() {
            row[i] = v.coords[k].clone();
        }
        a.push(row);
        b.push(p.coords[k].clone());
    }
    let mut row = vec![Scalar::zero(); cols];
    for i in 0..m {
        row[i] = Scalar::one();
    }
    a.push(row);
    b.push(Scalar::one());
    for i in 0..m {
        let mut row = vec![Scalar::zero(); cols];
        row[i] = Scalar::one();
        row[m] = -Scalar::one();
        row[m + 1 + i] = -Scalar::one();
        a.push(row);
        b.push(Scalar::zero());
    }
    let mut c = vec![Scalar::zero(); cols];
    c[m] = -Scalar::one();
    matches!(solve(&StandardForm { a, b, c }), LpOutcome::Optimal(x, _) if x[m].is_positive())
}

/// A common point of all hulls, when the closed hulls intersect.
pub fn hulls_common_point(hulls: &[&[Point]], dim: usize) -> Option<Point> {
    match hulls.len() {
        0 => None,
        1 => Some(hulls[0][0].clone()),
        2 => hull_common_point(hulls[0], hulls[1], dim),
        _ => {
            let sizes: Vec<usize> = hulls.iter().map(|v| v.len()).collect();
            let total: usize = sizes.iter().sum();
            let offset = |g: usize| -> usize { sizes[..g].iter().sum() };
            let mut a: Vec<Vec<Scalar>> = Vec::new();
            let mut b: Vec<Scalar> = Vec::new();
            for g in 1..hulls.len() {
                for k in 0..dim {
                    let mut row = vec![Scalar::zero(); total];
                    for (i, v) in hulls[0].iter().enumerate() {
                        row[i] = v.coords[k].clone();
                    }
                    for (i, v) in hulls[g].iter().enumerate() {
                        row[offset(g) + i] = -v.coords[k].clone();
                    }
                    a.push(row);
                    b.push(Scalar::zero());
                }
            }
            for g in 0..hulls.len() {
                let mut row = vec![Scalar::zero(); total];
                for i in 0..sizes[g] {
                    row[offset(g) + i] = Scalar::one();
                }
                a.push(row);
                b.push(Scalar::one());
            }
            let lambda = super::simplex::feasible_point(a, b)?;
            let mut coords = vec![Scalar::zero(); dim];
            for (i, v) in hulls[0].iter().enumerate() {
                for k in 0..dim {
                    coords[k] += &lambda[i] * &v.coords[k];
                }
            }
            Some(Point::new(coords))
        }
    }
}

/// Does `X ∩ Y ∩ Z ≠ ∅` under the topology? All-polytopal triples are
/// decided exactly by LP; triples involving disks or offsets go through the
/// certified branch-and-bound, which can report `Indeterminate` when the
/// margin is below tolerance.
pub fn triple_intersects(
    x: &ConvexBody,
    y: &ConvexBody,
    z: &ConvexBody,
    topology: Topology,
) -> Result<bool, GeomError> {
    check_dims(x, y)?;
    check_dims(y, z)?;
    check_dims(x, z)?;
    if x.is_empty() || y.is_empty() || z.is_empty() {
        return Ok(false);
    }
    // A failing pair settles it.
    if !pair_intersects(x, y, topology)?
        || !pair_intersects(x, z, topology)?
        || !pair_intersects(y, z, topology)?
    {
        return Ok(false);
    }
    let dim = x.dim();
    if let (
        ConvexBody::Polygon { vertices: va },
        ConvexBody::Polygon { vertices: vb },
        ConvexBody::Polygon { vertices: vc },
    ) = (x, y, z)
    {
        return Ok(match topology {
            Topology::Open => super::polygon::polygon_intersection(va, vb)
                .and_then(|ab| super::polygon::polygon_intersection(&ab, vc))
                .is_some(),
            Topology::Closed => {
                let ab = super::polygon::clip_chain(va, vb);
                !ab.is_empty() && !super::polygon::clip_chain(&ab, vc).is_empty()
            }
        });
    }
    let all_polytopal = [x, y, z]
        .iter()
        .all(|b| matches!(metric(b), Some(Metric::Hull(_))));
    if all_polytopal {
        let hx = polytopal_vertices(x);
        let hy = polytopal_vertices(y);
        let hz = polytopal_vertices(z);
        let hulls = [hx.as_slice(), hy.as_slice(), hz.as_slice()];
        return Ok(match topology {
            Topology::Open => relint_common(&hulls, dim).is_some(),
            Topology::Closed => hulls_common_point(&hulls, dim).is_some(),
        });
    }
    // Sandwich the curved bodies between polytopes: disjoint cube outer
    // approximations certify emptiness, a common point of strictly inner
    // sets certifies nonemptiness; only the sliver in between needs the
    // box subdivision.
    if let Some(decided) = triple_sandwich([x, y, z], topology, dim) {
        return Ok(decided);
    }
    match bnb::triple_common_point([x, y, z], topology) {
        TripleResult::NonEmpty { .. } => Ok(true),
        TripleResult::Empty { .. } => Ok(false),
        TripleResult::Indeterminate => Err(GeomError::Indeterminate),
    }
}

/// Vertices of `body ⊕ radius·cube ⊇ body`, exact for polytopal bodies.
pub(crate) fn outer_cube_vertices(body: &ConvexBody, dim: usize) -> Option<Vec<Point>> {
    let (core, r) = match metric(body)? {
        Metric::Hull(v) => return Some(v),
        Metric::Ball { center, radius_sq } => (
            vec![center.clone()],
            crate::scalar::sqrt_upper(radius_sq, SQRT_BITS),
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

/// Vertices of a polytope strictly inside the interior of the body;
/// `None` for bodies without one (polytopal bodies carry no slack).
fn inner_strict_vertices(body: &ConvexBody) -> Option<Vec<Point>> {
    match metric(body)? {
        Metric::Hull(_) => None,
        Metric::Ball { center, radius_sq } => {
            // Inscribed axis square: half-side h with h*sqrt(2) < r.
            let h = crate::scalar::sqrt_lower(radius_sq, SQRT_BITS) * crate::scalar::s_frac(7, 10);
            if !h.is_positive() {
                return None;
            }
            let mut out = Vec::with_capacity(4);
            for mask in 0..4u32 {
                let sx = if mask & 1 == 1 { 1i64 } else { -1 };
                let sy = if mask & 2 == 2 { 1i64 } else { -1 };
                out.push(Point::d2(
                    &center.coords[0] + &h * crate::scalar::s_int(sx),
                    &center.coords[1] + &h * crate::scalar::s_int(sy),
                ));
            }
            Some(out)
        }
        Metric::Sum { core, .. } => Some(core),
    }
}

/// One-LP decisions for a curved triple: `Some(false)` when the outer
/// polytopes already miss each other, `Some(true)` when the strictly inner
/// polytopes share a point, `None` otherwise.
fn triple_sandwich(
    bodies: [&ConvexBody; 3],
    topology: Topology,
    dim: usize,
) -> Option<bool> {
    let outer: Option<Vec<Vec<Point>>> = bodies
        .iter()
        .map(|b| outer_cube_vertices(b, dim))
        .collect();
    if let Some(outer) = outer {
        let refs: Vec<&[Point]> = outer.iter().map(|v| v.as_slice()).collect();
        if hulls_common_point(&refs, dim).is_none() {
            return Some(false);
        }
    }
    // Inner witnesses are strictly interior, which covers both topologies;
    // raw polytopal bodies join with their own hull but only when the
    // topology is closed (their relative interior is not certified).
    let mut inner: Vec<Vec<Point>> = Vec::with_capacity(3);
    for b in bodies {
        match inner_strict_vertices(b) {
            Some(v) => inner.push(v),
            None => {
                if topology == Topology::Closed {
                    if let Some(Metric::Hull(v)) = metric(b) {
                        inner.push(v);
                        continue;
                    }
                }
                return None;
            }
        }
    }
    let refs: Vec<&[Point]> = inner.iter().map(|v| v.as_slice()).collect();
    if hulls_common_point(&refs, dim).is_some() {
        return Some(true);
    }
    None
}

pub(crate) fn polytopal_vertices(body: &ConvexBody) -> Vec<Point> {
    match metric(body) {
        Some(Metric::Hull(v)) => v,
        _ => panic!("not a polytopal body"),
    }
}

/// Relation of the ordered pair `(X, Y)`.
pub fn relation(
    x: &ConvexBody,
    y: &ConvexBody,
    topology: Topology,
) -> Result<RelationType, GeomError> {
    if !pair_intersects(x, y, topology)? {
        return Ok(RelationType::A);
    }
    if contains(x, y)? {
        return Ok(RelationType::B);
    }
    Ok(RelationType::C)
}

/// Relation of every ordered pair of bodies; pairs evaluate in parallel.
pub fn relation_matrix(arr: &Arrangement) -> Result<RelationMatrix, GeomError> {
    let labels = arr.labels();
    let mut pairs = Vec::new();
    for &i in &labels {
        for &j in &labels {
            if i != j {
                pairs.push((i, j));
            }
        }
    }
    let computed: Result<Vec<_>, GeomError> = pairs
        .par_iter()
        .map(|&(i, j)| {
            let rel = relation(arr.body(i).unwrap(), arr.body(j).unwrap(), arr.topology)?;
            Ok(((i, j), rel))
        })
        .collect();
    Ok(RelationMatrix {
        relations: computed?.into_iter().collect(),
    })
}

/// Rational lower bound on how deep `p` sits inside `body` (0 when it is
/// not strictly inside).
pub fn point_depth_lb(body: &ConvexBody, p: &Point) -> Scalar {
    match body {
        ConvexBody::Empty { .. } | ConvexBody::Segment { .. } => Scalar::zero(),
        ConvexBody::Interval { lo, hi } => {
            let x = &p.coords[0];
            let d = (x - lo).min(hi - x);
            if d.is_positive() {
                d
            } else {
                Scalar::zero()
            }
        }
        ConvexBody::Polygon { vertices } => {
            super::polygon::polygon_depth_lower_bound(vertices, p)
        }
        ConvexBody::Polytope3 { vertices } => match facets3(vertices) {
            None => Scalar::zero(),
            Some(facets) => {
                let mut best: Option<Scalar> = None;
                for f in facets {
                    let s = facet_slack(&f, p);
                    if !s.is_positive() {
                        return Scalar::zero();
                    }
                    let d = s / sqrt_upper(&f.a.norm_sq(), SQRT_BITS);
                    if best.as_ref().is_none_or(|b| d < *b) {
                        best = Some(d);
                    }
                }
                best.unwrap_or_else(Scalar::zero)
            }
        },
        ConvexBody::Disk { center, radius_sq } => {
            let d = sqrt_lower(radius_sq, SQRT_BITS)
                - sqrt_upper(&p.dist_sq(center), SQRT_BITS);
            if d.is_positive() {
                d
            } else {
                Scalar::zero()
            }
        }
        ConvexBody::Offset { core, radius } => {
            let d = radius
                - sqrt_upper(&dist_sq_point_hull(p, &core.seed_points()), SQRT_BITS);
            if d.is_positive() {
                d
            } else {
                Scalar::zero()
            }
        }
    }
}

/// Rational lower bound on the distance from `p` to `body`; `None` means
/// unconstrained (the body is empty).
pub fn point_dist_lb(body: &ConvexBody, p: &Point) -> Option<Scalar> {
    let m = metric(body)?;
    let d = match m {
        Metric::Hull(v) => sqrt_lower(&dist_sq_point_hull(p, &v), SQRT_BITS),
        Metric::Ball { center, radius_sq } => {
            sqrt_lower(&p.dist_sq(center), SQRT_BITS) - sqrt_upper(radius_sq, SQRT_BITS)
        }
        Metric::Sum { core, radius } => {
            sqrt_lower(&dist_sq_point_hull(p, &core), SQRT_BITS) - radius
        }
    };
    Some(if d.is_positive() { d } else { Scalar::zero() })
}

/// Rational lower bound on the gap between two bodies; `None` means one of
/// them is empty (an infinite gap).
pub fn body_gap_lb(x: &ConvexBody, y: &ConvexBody) -> Option<Scalar> {
    let mx = metric(x)?;
    let my = metric(y)?;
    let dim = x.dim();
    let d = match (&mx, &my) {
        (Metric::Hull(a), Metric::Hull(b)) => sqrt_lower(&dist_sq_hulls(a, b, dim), SQRT_BITS),
        (Metric::Hull(a), Metric::Ball { center, radius_sq })
        | (Metric::Ball { center, radius_sq }, Metric::Hull(a)) => {
            sqrt_lower(&dist_sq_point_hull(center, a), SQRT_BITS)
                - sqrt_upper(radius_sq, SQRT_BITS)
        }
        (Metric::Hull(a), Metric::Sum { core, radius })
        | (Metric::Sum { core, radius }, Metric::Hull(a)) => {
            sqrt_lower(&dist_sq_hulls(a, core, dim), SQRT_BITS) - *radius
        }
        (
            Metric::Ball {
                center: c1,
                radius_sq: s1,
            },
            Metric::Ball {
                center: c2,
                radius_sq: s2,
            },
        ) => {
            sqrt_lower(&c1.dist_sq(c2), SQRT_BITS)
                - sqrt_upper(s1, SQRT_BITS)
                - sqrt_upper(s2, SQRT_BITS)
        }
        (Metric::Ball { center, radius_sq }, Metric::Sum { core, radius })
        | (Metric::Sum { core, radius }, Metric::Ball { center, radius_sq }) => {
            sqrt_lower(&dist_sq_point_hull(center, core), SQRT_BITS)
                - sqrt_upper(radius_sq, SQRT_BITS)
                - *radius
        }
        (
            Metric::Sum {
                core: a,
                radius: r1,
            },
            Metric::Sum {
                core: b,
                radius: r2,
            },
        ) => sqrt_lower(&dist_sq_hulls(a, b, dim), SQRT_BITS) - *r1 - *r2,
    };
    Some(if d.is_positive() { d } else { Scalar::zero() })
}

/// A rational point in the interior of `X ∩ Y` together with a rational
/// lower bound on the radius of a ball around it inside both bodies.
/// `None` when no such ball can be certified.
pub fn deep_pair_point(x: &ConvexBody, y: &ConvexBody) -> Option<(Point, Scalar)> {
    if x.is_empty() || y.is_empty() {
        return None;
    }
    let dim = x.dim();
    // Exact fast paths where the intersection is itself constructible.
    if let (ConvexBody::Interval { lo: l1, hi: h1 }, ConvexBody::Interval { lo: l2, hi: h2 }) =
        (x, y)
    {
        let lo = l1.max(l2);
        let hi = h1.min(h2);
        if lo >= hi {
            return None;
        }
        let mid = (lo + hi) / crate::scalar::s_int(2);
        let r = (hi - lo) / crate::scalar::s_int(4);
        return Some((Point::d1(mid), r));
    }
    if let (ConvexBody::Polygon { vertices: va }, ConvexBody::Polygon { vertices: vb }) = (x, y) {
        let inter = super::polygon::polygon_intersection(va, vb)?;
        let (c, r) = super::polygon::chebyshev_center(&polygon_facets(&inter), 2)?;
        let half = r / crate::scalar::s_int(2);
        return Some((c, half));
    }
    // Generic path: search the segment between near-closest core points.
    let (ca, cb) = core_anchor_points(x, y, dim)?;
    let mut candidates: Vec<Point> = Vec::new();
    let mut denom = 2u64;
    while denom <= 1 << 12 {
        for k in 1..denom {
            if k % 2 == 1 {
                let t = crate::scalar::s_frac(k as i64, denom as i64);
                candidates.push(ca.lerp(&cb, &t));
            }
        }
        // Evaluate this refinement level before adding the next.
        let mut best: Option<(Point, Scalar)> = None;
        for p in &candidates {
            let d = point_depth_lb(x, p).min(point_depth_lb(y, p));
            if d.is_positive() && best.as_ref().is_none_or(|(_, b)| d > *b) {
                best = Some((p.clone(), d));
            }
        }
        if let Some((p, d)) = best {
            return Some((p, d / crate::scalar::s_int(2)));
        }
        denom *= 2;
    }
    None
}

/// Anchor points for the deep-point search: near-closest points of the two
/// cores (their midpoint region is where the intersection lives).
fn core_anchor_points(x: &ConvexBody, y: &ConvexBody, dim: usize) -> Option<(Point, Point)> {
    let core_of = |b: &ConvexBody| -> Vec<Point> {
        match metric(b) {
            Some(Metric::Hull(v)) => v,
            Some(Metric::Ball { center, .. }) => vec![center.clone()],
            Some(Metric::Sum { core, .. }) => core,
            None => vec![],
        }
    };
    let a = core_of(x);
    let b = core_of(y);
    if a.is_empty() || b.is_empty() {
        return None;
    }
    let (p, q) = closest_points_hulls(&a, &b, dim);
    Some((p, q))
}

/// A rational point of `X` at positive certified distance from `Y`,
/// together with min(depth in X, distance to Y) as the margin.
/// Points on the relative boundary of `X` are acceptable only when `X`
/// is lower-dimensional; otherwise strict interior is required.
pub fn witness_point_outside(x: &ConvexBody, y: &ConvexBody) -> Option<(Point, Scalar)> {
    if x.is_empty() {
        return None;
    }
    let mut candidates: Vec<Point> = Vec::new();
    match x {
        ConvexBody::Interval { lo, hi } => {
            for (num, den) in [(1i64, 2i64), (1, 4), (3, 4), (1, 8), (7, 8)] {
                let t = crate::scalar::s_frac(num, den);
                let one = Scalar::one();
                candidates.push(Point::d1(lo * (&one - &t) + hi * &t));
            }
        }
        ConvexBody::Segment { a, b } => {
            for (num, den) in [(1i64, 2i64), (1, 4), (3, 4), (1, 8), (7, 8)] {
                candidates.push(a.lerp(b, &crate::scalar::s_frac(num, den)));
            }
            candidates.push(a.clone());
            candidates.push(b.clone());
        }
        ConvexBody::Polygon { vertices } => {
            if let Some((c, _)) = super::polygon::chebyshev_center(&polygon_facets(vertices), 2)
            {
                for v in vertices {
                    for (num, den) in [(1i64, 8i64), (1, 4), (1, 2), (3, 4)] {
                        candidates.push(v.lerp(&c, &crate::scalar::s_frac(num, den)));
                    }
                }
                candidates.push(c);
            }
        }
        ConvexBody::Polytope3 { vertices } => {
            if let Some(facets) = facets3(vertices) {
                if let Some((c, _)) = super::polygon::chebyshev_center(&facets, 3) {
                    for v in vertices {
                        for (num, den) in [(1i64, 8i64), (1, 4), (1, 2), (3, 4)] {
                            candidates.push(v.lerp(&c, &crate::scalar::s_frac(num, den)));
                        }
                    }
                    candidates.push(c);
                }
            } else {
                // Lower-dimensional hull: its own points are the best we get.
                let vs = vertices;
                for i in 0..vs.len() {
                    candidates.push(vs[i].clone());
                    for j in i + 1..vs.len() {
                        candidates.push(vs[i].lerp(&vs[j], &crate::scalar::s_frac(1, 2)));
                    }
                }
            }
        }
        ConvexBody::Disk { center, radius_sq } => {
            let r = sqrt_lower(radius_sq, SQRT_BITS);
            for (dx, dy) in [(1i64, 0i64), (-1, 0), (0, 1), (0, -1)] {
                for (num, den) in [(1i64, 2i64), (3, 4), (7, 8)] {
                    let step = &r * crate::scalar::s_frac(num, den);
                    candidates.push(Point::d2(
                        &center.coords[0] + &step * crate::scalar::s_int(dx),
                        &center.coords[1] + &step * crate::scalar::s_int(dy),
                    ));
                }
            }
            candidates.push(center.clone());
        }
        ConvexBody::Offset { core, radius } => {
            for v in core.seed_points() {
                candidates.push(v.clone());
                // Push outward along axis directions by half the radius.
                for k in 0..v.dim() {
                    for sign in [1i64, -1] {
                        let mut c = v.coords.clone();
                        c[k] = &c[k]
                            + radius * crate::scalar::s_frac(sign, 2);
                        candidates.push(Point::new(c));
                    }
                }
            }
        }
        ConvexBody::Empty { .. } => {}
    }
    let lower_dim = matches!(
        x,
        ConvexBody::Segment { .. }
    ) || matches!(x, ConvexBody::Polytope3 { vertices } if facets3(vertices).is_none())
        || matches!(x, ConvexBody::Interval { lo, hi } if lo == hi);
    let mut best: Option<(Point, Scalar)> = None;
    for p in candidates {
        let inside = if lower_dim {
            point_membership(x, &p, false)
        } else {
            point_depth_lb(x, &p).is_positive()
        };
        if !inside {
            continue;
        }
        let Some(dist) = point_dist_lb(y, &p) else {
            // Empty other body: any interior point works, margin is depth.
            let depth = if lower_dim {
                Scalar::one()
            } else {
                point_depth_lb(x, &p)
            };
            return Some((p, depth));
        };
        if !dist.is_positive() {
            continue;
        }
        let margin = if lower_dim {
            dist.clone()
        } else {
            point_depth_lb(x, &p).min(dist)
        };
        if best.as_ref().is_none_or(|(_, b)| margin > *b) {
            best = Some((p, margin));
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{s_frac, s_int};

    fn disk(x: i64, y: i64, r_sq: i64) -> ConvexBody {
        ConvexBody::Disk {
            center: Point::d2(s_int(x), s_int(y)),
            radius_sq: s_int(r_sq),
        }
    }

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

    fn seg(ax: i64, ay: i64, bx: i64, by: i64) -> ConvexBody {
        ConvexBody::Segment {
            a: Point::d2(s_int(ax), s_int(ay)),
            b: Point::d2(s_int(bx), s_int(by)),
        }
    }

    #[test]
    fn disk_pairs() {
        // Far apart.
        assert!(!pair_intersects(&disk(0, 0, 1), &disk(3, 0, 1), Topology::Closed).unwrap());
        // Tangent: closed yes, open no.
        assert!(pair_intersects(&disk(0, 0, 1), &disk(2, 0, 1), Topology::Closed).unwrap());
        assert!(!pair_intersects(&disk(0, 0, 1), &disk(2, 0, 1), Topology::Open).unwrap());
        // Overlapping.
        assert!(pair_intersects(&disk(0, 0, 1), &disk(1, 0, 1), Topology::Open).unwrap());
    }

    #[test]
    fn segment_pairs() {
        // Spec example: (1,0)-(0,5) and (2,0)-(0,4) cross.
        let s1 = seg(1, 0, 0, 5);
        let s2 = seg(2, 0, 0, 4);
        assert!(pair_intersects(&s1, &s2, Topology::Closed).unwrap());
        assert!(pair_intersects(&s1, &s2, Topology::Open).unwrap());
        // Sharing only an endpoint: closed yes, relint no.
        let s3 = seg(0, 0, 1, 1);
        let s4 = seg(1, 1, 2, 0);
        assert!(pair_intersects(&s3, &s4, Topology::Closed).unwrap());
        assert!(!pair_intersects(&s3, &s4, Topology::Open).unwrap());
    }

    #[test]
    fn containments() {
        assert!(contains(&square(0, 4), &square(1, 2)).unwrap());
        assert!(contains(&square(0, 4), &square(0, 4)).unwrap());
        assert!(!contains(
            &disk(0, 0, 1),
            &ConvexBody::Polygon {
                vertices: vec![
                    Point::d2(s_int(0), s_int(0)),
                    Point::d2(s_int(2), s_int(0)),
                    Point::d2(s_int(0), s_int(2)),
                ]
            }
        )
        .unwrap());
        // Disk in disk.
        assert!(contains(&disk(0, 0, 9), &disk(1, 0, 1)).unwrap());
        assert!(!contains(&disk(0, 0, 9), &disk(3, 0, 1)).unwrap());
        // Disk inside a square: [0,4]^2 contains the unit disk at (2,2).
        assert!(contains(&square(0, 4), &disk(2, 2, 1)).unwrap());
        assert!(!contains(&square(0, 4), &disk(2, 2, 9)).unwrap());
        // Empty is contained in everything.
        let empty = ConvexBody::Empty { dim: 2 };
        assert!(contains(&square(0, 1), &empty).unwrap());
        assert!(!contains(&empty, &square(0, 1)).unwrap());
    }

    #[test]
    fn offset_relations() {
        let stad = |x0: i64, r: i64| ConvexBody::Offset {
            core: Box::new(seg(x0, 0, x0 + 2, 0)),
            radius: s_int(r),
        };
        // Cores 2 apart end to end, radii 1+1: tangent.
        assert!(pair_intersects(&stad(0, 1), &stad(4, 1), Topology::Closed).unwrap());
        assert!(!pair_intersects(&stad(0, 1), &stad(4, 1), Topology::Open).unwrap());
        // Wider radius swallows the other.
        let big = ConvexBody::Offset {
            core: Box::new(seg(0, 0, 2, 0)),
            radius: s_int(5),
        };
        assert!(contains(&big, &stad(0, 1)).unwrap());
        assert!(!contains(&stad(0, 1), &big).unwrap());
    }

    #[test]
    fn relations_examples() {
        assert_eq!(
            relation(&disk(0, 0, 1), &disk(5, 0, 1), Topology::Open).unwrap(),
            RelationType::A
        );
        assert_eq!(
            relation(&square(0, 4), &square(1, 2), Topology::Open).unwrap(),
            RelationType::B
        );
        assert_eq!(
            relation(&square(1, 2), &square(0, 4), Topology::Open).unwrap(),
            RelationType::C
        );
        assert_eq!(
            relation(&square(0, 4), &square(2, 6), Topology::Open).unwrap(),
            RelationType::C
        );
    }

    #[test]
    fn triples() {
        // Three unit squares all containing (1/2, 1/2).
        let a = square(0, 2);
        let b = ConvexBody::Polygon {
            vertices: vec![
                Point::d2(s_int(-1), s_int(-1)),
                Point::d2(s_int(1), s_int(-1)),
                Point::d2(s_int(1), s_int(1)),
                Point::d2(s_int(-1), s_int(1)),
            ],
        };
        let c = square(-1, 3);
        assert!(triple_intersects(&a, &b, &c, Topology::Closed).unwrap());
        assert!(triple_intersects(&a, &b, &c, Topology::Open).unwrap());
        // Disjoint third body.
        let far = square(10, 12);
        assert!(!triple_intersects(&a, &b, &far, Topology::Closed).unwrap());
        // Three disks sharing pairwise lenses but no common point.
        let d1 = disk(0, 0, 16);
        let d2 = disk(7, 0, 16);
        let d3 = ConvexBody::Disk {
            center: Point::d2(s_frac(7, 2), s_int(6)),
            radius_sq: s_int(16),
        };
        assert!(pair_intersects(&d1, &d2, Topology::Open).unwrap());
        assert!(pair_intersects(&d1, &d3, Topology::Open).unwrap());
        assert!(pair_intersects(&d2, &d3, Topology::Open).unwrap());
        assert!(!triple_intersects(&d1, &d2, &d3, Topology::Open).unwrap());
    }

    #[test]
    fn deep_points_and_witnesses() {
        let (p, r) = deep_pair_point(&square(0, 4), &square(2, 6)).unwrap();
        assert!(r.is_positive());
        assert!(point_membership(&square(0, 4), &p, true));
        assert!(point_membership(&square(2, 6), &p, true));

        let (p, r) = deep_pair_point(&disk(0, 0, 4), &disk(3, 0, 4)).unwrap();
        assert!(r.is_positive());
        assert!(p.dist_sq(&Point::d2(s_int(0), s_int(0))) < s_int(4));
        assert!(p.dist_sq(&Point::d2(s_int(3), s_int(0))) < s_int(4));

        let (w, m) = witness_point_outside(&square(0, 4), &square(2, 6)).unwrap();
        assert!(m.is_positive());
        assert!(point_membership(&square(0, 4), &w, true));
        assert!(!point_membership(&square(2, 6), &w, false));
    }

    #[test]
    fn membership_strictness() {
        let sq = square(0, 2);
        assert!(point_membership(&sq, &Point::d2(s_int(1), s_int(1)), true));
        assert!(point_membership(&sq, &Point::d2(s_int(0), s_int(1)), false));
        assert!(!point_membership(&sq, &Point::d2(s_int(0), s_int(1)), true));
        let s = seg(0, 0, 2, 2);
        assert!(point_membership(&s, &Point::d2(s_int(1), s_int(1)), true));
        assert!(!point_membership(&s, &Point::d2(s_int(0), s_int(0)), true));
        assert!(point_membership(&s, &Point::d2(s_int(0), s_int(0)), false));
    }
}
