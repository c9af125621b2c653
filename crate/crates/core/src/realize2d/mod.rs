//! Constructive 2D realizations: circle packings for planar code graphs,
//! segment arrangements for complete multipartite and nested-neighborhood
//! graphs, and the reductions between graph realizations and code
//! realizations.

pub mod packing;

pub use packing::{pack_planar, realize_planar, PackingResult};

use crate::code::{Graph, NeuralCode};
use crate::geom::boundary::boundary_free_point_excluding;
use crate::geom::predicates::{contains, deep_pair_point, pair_intersects, point_membership};
use crate::geom::{Arrangement, ConvexBody, GeomError, Point, Topology};
use crate::scalar::{s_frac, s_int, Scalar};
use crate::transforms::{choose_trim_epsilon, trim, TransformError};
use crate::verify::{compute_code_with_n, pair_common_point, VerifyError};
use num_traits::{One, Signed, Zero};
use std::collections::BTreeSet;

#[derive(Debug)]
pub enum RealizeError {
    NotPlanar,
    SnapFailed(String),
    NotNested,
    CodeMismatch,
    NotRealizable,
    Construction(String),
    Transform(TransformError),
    Geometry(GeomError),
    Verify(VerifyError),
}

impl std::fmt::Display for RealizeError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RealizeError::NotPlanar => write!(f, "graph is not planar"),
            RealizeError::SnapFailed(m) => write!(f, "snapping failed: {m}"),
            RealizeError::NotNested => write!(f, "neighborhoods are not nested prefixes"),
            RealizeError::CodeMismatch => {
                write!(f, "arrangement does not realize the expected code")
            }
            RealizeError::NotRealizable => write!(f, "code is not realizable"),
            RealizeError::Construction(m) => write!(f, "construction failed: {m}"),
            RealizeError::Transform(e) => write!(f, "{e}"),
            RealizeError::Geometry(e) => write!(f, "{e}"),
            RealizeError::Verify(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for RealizeError {}

impl From<TransformError> for RealizeError {
    fn from(e: TransformError) -> Self {
        RealizeError::Transform(e)
    }
}

impl From<GeomError> for RealizeError {
    fn from(e: GeomError) -> Self {
        RealizeError::Geometry(e)
    }
}

impl From<VerifyError> for RealizeError {
    fn from(e: VerifyError) -> Self {
        RealizeError::Verify(e)
    }
}

/// The complete multipartite graph with the given part sizes; labels run
/// part by part.
pub fn complete_multipartite_graph(parts: &[usize]) -> Graph {
    let n: usize = parts.iter().sum();
    let mut part_of = vec![0usize; n + 1];
    let mut v = 1;
    for (pi, &size) in parts.iter().enumerate() {
        for _ in 0..size {
            part_of[v] = pi;
            v += 1;
        }
    }
    let mut edges = BTreeSet::new();
    for a in 1..=n {
        for b in a + 1..=n {
            if part_of[a] != part_of[b] {
                edges.insert((a, b));
            }
        }
    }
    Graph { n, edges }
}

/// The graph of the nested-neighborhood construction: a complete core
/// `1..=n` plus attachments `n+s` adjacent to the prefix `1..=sizes[s-1]`.
pub fn nested_graph(n: usize, sizes: &[usize]) -> Graph {
    let mut g = Graph::complete(n);
    let mut edges = g.edges;
    for (s, &m) in sizes.iter().enumerate() {
        let u = n + s + 1;
        for v in 1..=m {
            edges.insert((v, u));
        }
    }
    g = Graph {
        n: n + sizes.len(),
        edges,
    };
    g
}

fn segment(ax: Scalar, ay: Scalar, bx: Scalar, by: Scalar) -> ConvexBody {
    ConvexBody::Segment {
        a: Point::d2(ax, ay),
        b: Point::d2(bx, by),
    }
}

/// Closed segment realization of the complete multipartite graph
/// `K_{parts}`: base segments with endpoints `(i, 0)` and `(0, k+1-i)`,
/// each replaced by parallel translates spaced closely enough that all
/// cross-part crossings survive and no three segments are concurrent
/// (verified exactly; the spacing halves on a failed check).
pub fn realize_complete_multipartite(parts: &[usize]) -> Result<Arrangement, RealizeError> {
    assert!(!parts.is_empty() && parts.iter().all(|&p| p > 0));
    let k = parts.len();
    let n: usize = parts.iter().sum();
    let base: Vec<(Point, Point)> = (1..=k)
        .map(|i| {
            (
                Point::d2(s_int(i as i64), s_int(0)),
                Point::d2(s_int(0), s_int((k + 1 - i) as i64)),
            )
        })
        .collect();
    // Minimum crossing-parameter slack over base pairs.
    let mut slack: Option<Scalar> = None;
    for i in 0..k {
        for j in i + 1..k {
            let (t1, t2) = segment_crossing_params(&base[i], &base[j]).ok_or_else(|| {
                RealizeError::Construction(format!(
                    "base segments {} and {} fail to cross",
                    i + 1,
                    j + 1
                ))
            })?;
            for t in [t1.clone(), t2.clone()] {
                let m = t.clone().min(Scalar::one() - t);
                if slack.as_ref().is_none_or(|s| m < *s) {
                    slack = Some(m);
                }
            }
        }
    }
    let mut tau = match slack {
        Some(s) => s / s_int((4 * n * n * k) as i64),
        None => Scalar::one(), // single part: no crossings to preserve
    };
    for _attempt in 0..40 {
        let arr = build_multipartite(parts, &base, &tau)?;
        if multipartite_checks(&arr, parts).is_ok() {
            return Ok(arr);
        }
        tau = tau / s_int(2);
    }
    Err(RealizeError::Construction(
        "could not certify a translate spacing".into(),
    ))
}

fn build_multipartite(
    parts: &[usize],
    base: &[(Point, Point)],
    tau: &Scalar,
) -> Result<Arrangement, RealizeError> {
    let mut bodies = Vec::new();
    let mut label = 1usize;
    for (i, &size) in parts.iter().enumerate() {
        for j in 0..size {
            let shift = tau * s_int(j as i64);
            let (a, b) = &base[i];
            bodies.push((
                label,
                segment(
                    &a.coords[0] + &shift,
                    a.coords[1].clone(),
                    &b.coords[0] + &shift,
                    b.coords[1].clone(),
                ),
            ));
            label += 1;
        }
    }
    Arrangement::new(2, Topology::Closed, bodies).map_err(RealizeError::Geometry)
}

/// Exact checks: same-part translates disjoint, cross-part pairs crossing
/// strictly in their interiors, and no point on three segments.
fn multipartite_checks(arr: &Arrangement, parts: &[usize]) -> Result<(), RealizeError> {
    let n = arr.bodies().len();
    let mut part_of = vec![0usize; n + 1];
    let mut v = 1;
    for (pi, &size) in parts.iter().enumerate() {
        for _ in 0..size {
            part_of[v] = pi;
            v += 1;
        }
    }
    for i in 1..=n {
        for j in i + 1..=n {
            let x = arr.body(i).unwrap();
            let y = arr.body(j).unwrap();
            if part_of[i] == part_of[j] {
                if pair_intersects(x, y, Topology::Closed)? {
                    return Err(RealizeError::Construction("translates touch".into()));
                }
            } else {
                if !pair_intersects(x, y, Topology::Open)? {
                    return Err(RealizeError::Construction(
                        "cross-part crossing lost".into(),
                    ));
                }
            }
        }
    }
    no_three_concurrent(arr)?;
    Ok(())
}

/// Exact concurrency test for segment arrangements: every pairwise crossing
/// point must avoid every third segment.
pub fn no_three_concurrent(arr: &Arrangement) -> Result<(), RealizeError> {
    let labels = arr.labels();
    for (ai, &i) in labels.iter().enumerate() {
        for &j in labels.iter().skip(ai + 1) {
            let x = arr.body(i).unwrap();
            let y = arr.body(j).unwrap();
            if !pair_intersects(x, y, Topology::Closed)? {
                continue;
            }
            let Some(p) = pair_common_point(x, y) else {
                continue;
            };
            for &m in &labels {
                if m != i && m != j && point_membership(arr.body(m).unwrap(), &p, false) {
                    return Err(RealizeError::Construction(format!(
                        "segments {i}, {j}, {m} are concurrent"
                    )));
                }
            }
        }
    }
    Ok(())
}

/// Crossing parameters `(t, u)` of two segments when they cross at a single
/// point strictly inside both; `None` otherwise.
fn segment_crossing_params(
    s1: &(Point, Point),
    s2: &(Point, Point),
) -> Option<(Scalar, Scalar)> {
    let d1 = s1.1.sub(&s1.0);
    let d2 = s2.1.sub(&s2.0);
    let det = &d1.coords[0] * &d2.coords[1] - &d1.coords[1] * &d2.coords[0];
    if det.is_zero() {
        return None;
    }
    let w = s2.0.sub(&s1.0);
    let t = (&w.coords[0] * &d2.coords[1] - &w.coords[1] * &d2.coords[0]) / &det;
    let u = (&w.coords[0] * &d1.coords[1] - &w.coords[1] * &d1.coords[0]) / &det;
    if t.is_positive() && t < Scalar::one() && u.is_positive() && u < Scalar::one() {
        Some((t, u))
    } else {
        None
    }
}

/// Closed segment realization of a complete core `K_n` with nested
/// attachment neighborhoods given as prefixes `{1..m}` of nondecreasing
/// sizes. The core segments in the largest neighborhood extend below the
/// x-axis and one horizontal segment per attachment crosses exactly its
/// neighborhood.
pub fn realize_nested(n: usize, neighborhoods: &[Vec<usize>]) -> Result<Arrangement, RealizeError> {
    assert!(n >= 1);
    let k = neighborhoods.len();
    let mut sizes = Vec::with_capacity(k);
    for nb in neighborhoods {
        let mut sorted = nb.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != nb.len() || sorted != (1..=sorted.len()).collect::<Vec<_>>() {
            return Err(RealizeError::NotNested);
        }
        if sorted.len() > n {
            return Err(RealizeError::NotNested);
        }
        sizes.push(sorted.len());
    }
    if sizes.windows(2).any(|w| w[0] > w[1]) {
        return Err(RealizeError::NotNested);
    }
    let r = sizes.last().copied().unwrap_or(0);
    let depth = s_int((k + 1) as i64);
    let mut bodies = Vec::new();
    for j in 1..=n {
        let top = Point::d2(s_int(0), s_int((n + 1 - j) as i64));
        let lower = if j <= r {
            // Extend through (j, 0) down to y = -(k+1), keeping the slope.
            let h = s_int((n + 1 - j) as i64);
            let t = (&h + &depth) / &h;
            Point::d2(s_int(j as i64) * &t, -depth.clone())
        } else {
            Point::d2(s_int(j as i64), s_int(0))
        };
        bodies.push((
            j,
            ConvexBody::Segment {
                a: top,
                b: lower,
            },
        ));
    }
    // Crossing x-coordinates of the extended segments at height -s.
    let x_at = |j: usize, s: usize| -> Scalar {
        let h = s_int((n + 1 - j) as i64);
        s_int(j as i64) * (&h + s_int(s as i64)) / &h
    };
    for (idx, &m) in sizes.iter().enumerate() {
        let s = idx + 1;
        let y = -s_int(s as i64);
        let (x_lo, x_hi) = if m == 0 {
            (s_int(-2), s_int(-1))
        } else {
            // Exact separation between included and excluded crossings.
            let max_in = (1..=m).map(|j| x_at(j, s)).max().unwrap();
            let x_hi = if m == r {
                max_in + Scalar::one()
            } else {
                let min_out = (m + 1..=r).map(|j| x_at(j, s)).min().unwrap();
                if max_in >= min_out {
                    return Err(RealizeError::Construction(
                        "crossing order violated".into(),
                    ));
                }
                (&max_in + &min_out) / s_int(2)
            };
            let min_in = (1..=m).map(|j| x_at(j, s)).min().unwrap();
            (min_in - Scalar::one(), x_hi)
        };
        bodies.push((n + s, segment(x_lo, y.clone(), x_hi, y)));
    }
    let arr = Arrangement::new(2, Topology::Closed, bodies).map_err(RealizeError::Geometry)?;
    no_three_concurrent(&arr)?;
    Ok(arr)
}

/// Turn a realization of the code's graph into a realization of the code
/// itself: bodies of neurons whose singleton the code lacks shrink into the
/// lens shared with their unique partner, or vanish entirely.
pub fn graph_to_code_realization(
    arr: &Arrangement,
    code: &NeuralCode,
) -> Result<Arrangement, RealizeError> {
    if !code.is_k_sparse(2) || !code.is_intersection_complete() {
        return Err(RealizeError::NotRealizable);
    }
    let n = code.n();
    let target = code.code_graph().full_code();
    let current = compute_code_with_n(arr, n)?;
    if current != target {
        return Err(RealizeError::CodeMismatch);
    }
    let supp: BTreeSet<u32> = code.word_masks().collect();
    let mut replaced: Vec<(usize, ConvexBody)> = Vec::new();
    let mut shared: Vec<(usize, usize)> = Vec::new();
    for i in 1..=n {
        let bit = 1u32 << (i - 1);
        if supp.contains(&bit) {
            continue;
        }
        let partners: Vec<usize> = (1..=n)
            .filter(|&j| j != i && supp.contains(&(bit | 1 << (j - 1))))
            .collect();
        match partners.len() {
            0 => replaced.push((i, ConvexBody::Empty { dim: arr.dim })),
            1 => {
                let j = partners[0];
                let j_missing = !supp.contains(&(1u32 << (j - 1)));
                if j_missing && j < i {
                    // The mutual case was already handled from j's side.
                    shared.push((i, j));
                    continue;
                }
                let x = arr.body(i).ok_or(RealizeError::CodeMismatch)?;
                let y = arr.body(j).ok_or(RealizeError::CodeMismatch)?;
                let (p, rho) = deep_pair_point(x, y).ok_or_else(|| {
                    RealizeError::Construction(format!(
                        "no ball in the lens of bodies {i} and {j}"
                    ))
                })?;
                let rho = crate::scalar::floor_pow2(&(rho / s_int(2)));
                replaced.push((i, ball_body(arr.dim, &p, &rho)));
                if j_missing {
                    shared.push((j, i));
                }
            }
            _ => {
                // Intersection-completeness would force the singleton.
                return Err(RealizeError::CodeMismatch);
            }
        }
    }
    let mut out = arr.clone();
    for (label, body) in &replaced {
        out = out.with_body(*label, body.clone());
    }
    // Mutually missing pairs share one body.
    for (i, j) in shared {
        let body = out.body(j).ok_or(RealizeError::CodeMismatch)?.clone();
        out = out.with_body(i, body);
    }
    let achieved = compute_code_with_n(&out, n)?;
    if achieved != *code {
        return Err(RealizeError::CodeMismatch);
    }
    Ok(out)
}

fn ball_body(dim: usize, center: &Point, radius: &Scalar) -> ConvexBody {
    match dim {
        1 => ConvexBody::Interval {
            lo: &center.coords[0] - radius,
            hi: &center.coords[0] + radius,
        },
        2 => ConvexBody::Disk {
            center: center.clone(),
            radius_sq: radius * radius,
        },
        _ => ConvexBody::Offset {
            core: Box::new(ConvexBody::Polytope3 {
                vertices: vec![center.clone()],
            }),
            radius: radius.clone(),
        },
    }
}

/// Turn an open realization of a code into a realization of its graph's
/// full code by regrowing each missing singleton: trim everything, then
/// plant a small ball on a free boundary point of the partner body.
pub fn code_to_graph_realization(arr: &Arrangement) -> Result<Arrangement, RealizeError> {
    if arr.topology != Topology::Open {
        return Err(RealizeError::Transform(TransformError::WrongTopology(
            "open",
        )));
    }
    let n = arr.max_label().max(1);
    let code = compute_code_with_n(arr, n)?;
    if !code.is_intersection_complete() {
        return Err(RealizeError::NotRealizable);
    }
    let target = code.code_graph().full_code();
    if code == target {
        return Ok(arr.clone());
    }
    let eps = choose_trim_epsilon(arr)? / s_int(2);
    let mut work = Arrangement::new(
        arr.dim,
        Topology::Open,
        arr.bodies()
            .iter()
            .map(|(l, b)| (*l, if b.is_empty() { b.clone() } else { trim(b, &eps) }))
            .collect(),
    )
    .map_err(RealizeError::Geometry)?;
    for _round in 0..n {
        let current = compute_code_with_n(&work, n)?;
        if current == target {
            return Ok(work);
        }
        let supp: BTreeSet<u32> = current.word_masks().collect();
        let mut progressed = false;
        for i in 1..=n {
            let bit = 1u32 << (i - 1);
            if supp.contains(&bit) {
                continue;
            }
            let partners: Vec<usize> = (1..=n)
                .filter(|&j| j != i && supp.contains(&(bit | 1 << (j - 1))))
                .collect();
            let [j] = partners[..] else { continue };
            let body_i = work.body(i).unwrap().clone();
            let body_j = work.body(j).unwrap().clone();
            let new_body = if contains(&body_i, &body_j)? && contains(&body_j, &body_i)? {
                // Equal bodies: replace the partner with an interior ball;
                // this neuron's own singleton appears in a later round.
                let (c, delta) = inner_ball(&body_i).ok_or_else(|| {
                    RealizeError::Construction(format!("no interior ball in body {i}"))
                })?;
                let delta = crate::scalar::floor_pow2(&(delta / s_int(2)));
                work = work.with_body(j, ball_body(arr.dim, &c, &delta));
                progressed = true;
                continue;
            } else {
                let (p, margin) = boundary_free_point_excluding(&work, j, &[i])
                    .map_err(RealizeError::Geometry)?;
                let rho = crate::scalar::floor_pow2(&match margin {
                    Some(m) => m / s_int(2),
                    None => default_radius(&work),
                });
                ball_body(arr.dim, &p, &rho)
            };
            work = work.with_body(i, new_body);
            progressed = true;
        }
        if !progressed {
            return Err(RealizeError::Construction(
                "no singleton could be regrown".into(),
            ));
        }
    }
    let current = compute_code_with_n(&work, n)?;
    if current == target {
        Ok(work)
    } else {
        Err(RealizeError::CodeMismatch)
    }
}

fn inner_ball(body: &ConvexBody) -> Option<(Point, Scalar)> {
    use crate::geom::polygon::{chebyshev_center, polygon_facets};
    match body {
        ConvexBody::Interval { lo, hi } if lo < hi => {
            Some((Point::d1((lo + hi) / s_int(2)), (hi - lo) / s_int(4)))
        }
        ConvexBody::Polygon { vertices } => {
            let (c, r) = chebyshev_center(&polygon_facets(vertices), 2)?;
            Some((c, r / s_int(2)))
        }
        ConvexBody::Polytope3 { vertices } => {
            let facets = crate::geom::hull3::facets3(vertices)?;
            let (c, r) = chebyshev_center(&facets, 3)?;
            Some((c, r / s_int(2)))
        }
        ConvexBody::Disk { center, radius_sq } => {
            let r = crate::scalar::sqrt_lower(radius_sq, 48);
            r.is_positive().then(|| (center.clone(), r / s_int(2)))
        }
        ConvexBody::Offset { core, radius } => {
            let anchor = core.seed_points().into_iter().next()?;
            Some((anchor, radius / s_int(2)))
        }
        _ => None,
    }
}

fn default_radius(arr: &Arrangement) -> Scalar {
    let d = arr.diameter_upper_bound();
    if d.is_positive() {
        d / s_int(8)
    } else {
        s_frac(1, 2)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::code::parse_code;
    use crate::verify::{compute_code, compute_code_with_n};

    #[test]
    fn k5_segments() {
        let arr = realize_complete_multipartite(&[1, 1, 1, 1, 1]).unwrap();
        let code = compute_code(&arr).unwrap();
        assert_eq!(code, Graph::complete(5).full_code());
        assert_eq!(code.len(), 16); // 1 + 5 + 10
    }

    #[test]
    fn k243_segments() {
        let arr = realize_complete_multipartite(&[2, 4, 3]).unwrap();
        let code = compute_code(&arr).unwrap();
        let expected = complete_multipartite_graph(&[2, 4, 3]).full_code();
        assert_eq!(code, expected);
        assert_eq!(code.len(), 36); // 1 + 9 + 26
    }

    #[test]
    fn k1_single_segment() {
        let arr = realize_complete_multipartite(&[1]).unwrap();
        let code = compute_code(&arr).unwrap();
        assert_eq!(code, parse_code("0,1").unwrap().code);
    }

    #[test]
    fn nested_fig7_instance() {
        let arr = realize_nested(5, &[vec![1], vec![1, 2], vec![1, 2, 3]]).unwrap();
        assert_eq!(arr.bodies().len(), 8);
        let code = compute_code(&arr).unwrap();
        let expected = nested_graph(5, &[1, 2, 3]).full_code();
        assert_eq!(code, expected);
    }

    #[test]
    fn nested_trivial_cases() {
        // No attachments: plain K_n.
        let arr = realize_nested(3, &[]).unwrap();
        assert_eq!(
            compute_code(&arr).unwrap(),
            Graph::complete(3).full_code()
        );
        // One vertex, one attachment: two crossing segments.
        let arr = realize_nested(1, &[vec![1]]).unwrap();
        assert_eq!(
            compute_code(&arr).unwrap(),
            Graph::new(2, [(1, 2)]).full_code()
        );
        // Non-prefix input.
        assert!(matches!(
            realize_nested(3, &[vec![2]]),
            Err(RealizeError::NotNested)
        ));
        assert!(matches!(
            realize_nested(3, &[vec![1, 2], vec![1]]),
            Err(RealizeError::NotNested)
        ));
    }

    #[test]
    fn graph_to_code_on_intervals() {
        // Fig. 1 code from a realization of the path graph 1-2-3.
        let path_arr = Arrangement::new(
            1,
            Topology::Open,
            vec![
                (1, ConvexBody::Interval { lo: s_int(0), hi: s_int(2) }),
                (2, ConvexBody::Interval { lo: s_int(1), hi: s_int(4) }),
                (3, ConvexBody::Interval { lo: s_int(3), hi: s_int(6) }),
            ],
        )
        .unwrap();
        let fig1 = parse_code("000,100,010,110,011").unwrap().code;
        let out = graph_to_code_realization(&path_arr, &fig1).unwrap();
        assert_eq!(compute_code_with_n(&out, 3).unwrap(), fig1);
    }

    #[test]
    fn graph_to_code_identity_when_all_singletons_present() {
        let arr = Arrangement::new(
            1,
            Topology::Open,
            vec![
                (1, ConvexBody::Interval { lo: s_int(0), hi: s_int(2) }),
                (2, ConvexBody::Interval { lo: s_int(1), hi: s_int(3) }),
            ],
        )
        .unwrap();
        let code = compute_code(&arr).unwrap();
        let out = graph_to_code_realization(&arr, &code).unwrap();
        assert_eq!(out, arr);
    }

    #[test]
    fn graph_to_code_deletes_unused_neuron() {
        let arr = Arrangement::new(
            1,
            Topology::Open,
            vec![(1, ConvexBody::Interval { lo: s_int(0), hi: s_int(1) })],
        )
        .unwrap();
        let trivial = parse_code("0").unwrap().code;
        let out = graph_to_code_realization(&arr, &trivial).unwrap();
        assert!(out.body(1).unwrap().is_empty());
        assert_eq!(compute_code_with_n(&out, 1).unwrap(), trivial);
    }

    #[test]
    fn code_to_graph_regrows_singleton() {
        // Fig. 1 realization: body 3 nested in body 2, singleton 3 missing.
        let arr = Arrangement::new(
            1,
            Topology::Open,
            vec![
                (1, ConvexBody::Interval { lo: s_int(0), hi: s_int(2) }),
                (2, ConvexBody::Interval { lo: s_int(1), hi: s_int(4) }),
                (3, ConvexBody::Interval { lo: s_int(2), hi: s_int(3) }),
            ],
        )
        .unwrap();
        let out = code_to_graph_realization(&arr).unwrap();
        let expected = parse_code("000,100,010,110,011")
            .unwrap()
            .code
            .code_graph()
            .full_code();
        assert_eq!(compute_code_with_n(&out, 3).unwrap(), expected);
    }

    #[test]
    fn code_to_graph_equal_bodies() {
        let arr = Arrangement::new(
            1,
            Topology::Open,
            vec![
                (1, ConvexBody::Interval { lo: s_int(0), hi: s_int(4) }),
                (2, ConvexBody::Interval { lo: s_int(0), hi: s_int(4) }),
            ],
        )
        .unwrap();
        let out = code_to_graph_realization(&arr).unwrap();
        let expected = Graph::new(2, [(1, 2)]).full_code();
        assert_eq!(compute_code_with_n(&out, 2).unwrap(), expected);
    }

    #[test]
    fn round_trip_graph_code_reductions() {
        let arr = Arrangement::new(
            1,
            Topology::Open,
            vec![
                (1, ConvexBody::Interval { lo: s_int(0), hi: s_int(2) }),
                (2, ConvexBody::Interval { lo: s_int(1), hi: s_int(4) }),
                (3, ConvexBody::Interval { lo: s_int(2), hi: s_int(3) }),
            ],
        )
        .unwrap();
        let code = compute_code(&arr).unwrap();
        let graph_arr = code_to_graph_realization(&arr).unwrap();
        let back = graph_to_code_realization(&graph_arr, &code).unwrap();
        assert_eq!(compute_code_with_n(&back, 3).unwrap(), code);
    }
}
