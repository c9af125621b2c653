//! Computing the code of an arrangement and certifying constructions.
//!
//! The exact path applies to arrangements without triple intersections:
//! the code is then the zero word, one word per intersecting pair, and a
//! singleton for every body not swallowed by a single other body (a convex
//! connected set covered by pairwise-disjoint traces would be disconnected,
//! so coverage by several bodies is impossible here). A sampling oracle
//! provides an independent one-sided cross-check: every word it emits is
//! backed by an exact rational witness point.

use crate::code::NeuralCode;
use crate::geom::predicates::{
    contains, deep_pair_point, hulls_common_point, metric, pair_intersects, point_membership,
    relation_matrix, relint_common_with_point, triple_intersects, witness_point_outside,
    Metric,
};
use crate::geom::{Arrangement, ConvexBody, GeomError, Point, RelationMatrix, Topology};
use crate::io;
use crate::scalar::{format_scalar, s_int, Scalar};
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use sha2::{Digest, Sha256};
use std::collections::BTreeSet;

#[derive(Debug, Clone, PartialEq)]
pub enum VerifyError {
    TripleIntersectionPresent(usize, usize, usize),
    Geometry(GeomError),
    LabelsExceedWidth { max_label: usize, n: usize },
}

impl std::fmt::Display for VerifyError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            VerifyError::TripleIntersectionPresent(i, j, k) => {
                write!(f, "bodies {i}, {j}, {k} share a point; the exact code path needs a 2-sparse arrangement")
            }
            VerifyError::Geometry(e) => write!(f, "{e}"),
            VerifyError::LabelsExceedWidth { max_label, n } => {
                write!(f, "body label {max_label} exceeds code width {n}")
            }
        }
    }
}

impl std::error::Error for VerifyError {}

impl From<GeomError> for VerifyError {
    fn from(e: GeomError) -> Self {
        VerifyError::Geometry(e)
    }
}

/// First triple of bodies (lexicographic by label) with a common point,
/// under the arrangement's topology.
pub fn has_triple_intersection(
    arr: &Arrangement,
) -> Result<Option<(usize, usize, usize)>, GeomError> {
    let labels = arr.labels();
    for (ai, &i) in labels.iter().enumerate() {
        for (bi, &j) in labels.iter().enumerate().skip(ai + 1) {
            for &k in labels.iter().skip(bi + 1) {
                if triple_intersects(
                    arr.body(i).unwrap(),
                    arr.body(j).unwrap(),
                    arr.body(k).unwrap(),
                    arr.topology,
                )? {
                    return Ok(Some((i, j, k)));
                }
            }
        }
    }
    Ok(None)
}

/// The code of the arrangement on `max_label` neurons.
pub fn compute_code(arr: &Arrangement) -> Result<NeuralCode, VerifyError> {
    compute_code_with_n(arr, arr.max_label().max(1))
}

/// The code of the arrangement on `n` neurons (labels beyond the body list
/// are neurons that never fire).
pub fn compute_code_with_n(arr: &Arrangement, n: usize) -> Result<NeuralCode, VerifyError> {
    if arr.max_label() > n {
        return Err(VerifyError::LabelsExceedWidth {
            max_label: arr.max_label(),
            n,
        });
    }
    if let Some((i, j, k)) = has_triple_intersection(arr)? {
        return Err(VerifyError::TripleIntersectionPresent(i, j, k));
    }
    let mut words: BTreeSet<u32> = BTreeSet::new();
    words.insert(0);
    let labels = arr.labels();
    // Pair words.
    for (ai, &i) in labels.iter().enumerate() {
        for &j in labels.iter().skip(ai + 1) {
            if pair_intersects(arr.body(i).unwrap(), arr.body(j).unwrap(), arr.topology)? {
                words.insert(1 << (i - 1) | 1 << (j - 1));
            }
        }
    }
    // Singleton words: body i fires alone somewhere iff it is nonempty and
    // no single other body contains it.
    for &i in &labels {
        let body = arr.body(i).unwrap();
        if body.is_empty() {
            continue;
        }
        let mut swallowed = false;
        for &j in &labels {
            if j != i && contains(arr.body(j).unwrap(), body)? {
                swallowed = true;
                break;
            }
        }
        if !swallowed {
            words.insert(1 << (i - 1));
        }
    }
    Ok(NeuralCode::new(n, words))
}

/// One-sided sampling oracle: a subset of the arrangement's code in which
/// every word is certified by exact membership of an explicit rational
/// witness point. Deterministic in `(budget, seed)`.
pub fn sample_code(arr: &Arrangement, budget: usize, seed: u64) -> NeuralCode {
    sample_code_with_n(arr, arr.max_label().max(1), budget, seed)
}

pub fn sample_code_with_n(
    arr: &Arrangement,
    n: usize,
    budget: usize,
    seed: u64,
) -> NeuralCode {
    let strict = arr.topology == Topology::Open;
    let labels = arr.labels();
    let boxes: Vec<(usize, &ConvexBody, Option<(Point, Point)>)> = labels
        .iter()
        .map(|&l| {
            let b = arr.body(l).unwrap();
            (l, b, b.bounding_box())
        })
        .collect();

    let exact_word = |p: &Point| -> u32 {
        let mut w = 0u32;
        for (l, b, bbox) in &boxes {
            let inside_box = match bbox {
                None => false,
                Some((lo, hi)) => (0..p.dim()).all(|k| {
                    p.coords[k] >= lo.coords[k] && p.coords[k] <= hi.coords[k]
                }),
            };
            if inside_box && point_membership(b, p, strict) {
                w |= 1 << (l - 1);
            }
        }
        w
    };

    let mut seeds: Vec<Point> = Vec::new();
    // Pairwise witness points, nudged into the overlap.
    for (ai, &i) in labels.iter().enumerate() {
        for &j in labels.iter().skip(ai + 1) {
            let x = arr.body(i).unwrap();
            let y = arr.body(j).unwrap();
            if let Ok(true) = pair_intersects(x, y, arr.topology) {
                if let Some(p) = pair_witness_point(x, y, arr.topology) {
                    seeds.push(p);
                }
            }
        }
    }
    // Body anchor points.
    for (_, b, _) in &boxes {
        for p in b.seed_points() {
            seeds.push(p);
        }
        if let Some((p, _)) = witness_nowhere(b) {
            seeds.push(p);
        }
    }
    // Random rational points in the bounding box (dyadic coordinates).
    if let Some((lo, hi)) = arr.bounding_box() {
        let dim = arr.dim;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let denom = s_int(1 << 20);
        // Stretch the box slightly so the zero region is sampled too.
        let pad = arr.diameter_upper_bound() / s_int(10);
        let lo: Vec<Scalar> = lo.coords.iter().map(|c| c - &pad).collect();
        let hi: Vec<Scalar> = hi.coords.iter().map(|c| c + &pad).collect();
        for _ in 0..budget {
            let coords: Vec<Scalar> = (0..dim)
                .map(|k| {
                    let t = s_int(rng.gen_range(0..=(1i64 << 20))) / &denom;
                    &lo[k] + (&hi[k] - &lo[k]) * t
                })
                .collect();
            seeds.push(Point::new(coords));
        }
    }

    let words: BTreeSet<u32> = seeds
        .par_iter()
        .map(|p| exact_word(p))
        .collect::<Vec<u32>>()
        .into_iter()
        .collect();
    let mut all = words;
    all.insert(0);
    NeuralCode::new(n, all)
}

/// A point of `X ∩ Y` (closed sense), when the intersection is nonempty.
pub fn pair_common_point(x: &ConvexBody, y: &ConvexBody) -> Option<Point> {
    let core_of = |b: &ConvexBody| -> Option<Vec<Point>> {
        match metric(b)? {
            Metric::Hull(v) => Some(v),
            Metric::Ball { center, .. } => Some(vec![center.clone()]),
            Metric::Sum { core, .. } => Some(core),
        }
    };
    let both_polytopal = matches!(metric(x), Some(Metric::Hull(_)))
        && matches!(metric(y), Some(Metric::Hull(_)));
    if both_polytopal {
        return pair_witness_point(x, y, Topology::Closed);
    }
    // With radii in play, a common core point is a common point; otherwise
    // walk the segment between the nearest core points with exact closed
    // membership.
    let ca = core_of(x)?;
    let cb = core_of(y)?;
    let dim = x.dim();
    if let Some(z) = crate::geom::distance::hull_common_point(&ca, &cb, dim) {
        return Some(z);
    }
    let (p, q) = crate::geom::distance::closest_points_hulls(&ca, &cb, dim);
    let mut denom = 2u64;
    while denom <= 1 << 12 {
        for k in 0..=denom {
            let t = crate::scalar::s_frac(k as i64, denom as i64);
            let z = p.lerp(&q, &t);
            if point_membership(x, &z, false) && point_membership(y, &z, false) {
                return Some(z);
            }
        }
        denom *= 2;
    }
    deep_pair_point(x, y).map(|(z, _)| z)
}

/// A rational point witnessing that the pair intersects, under the given
/// topology, when one can be constructed.
fn pair_witness_point(x: &ConvexBody, y: &ConvexBody, topology: Topology) -> Option<Point> {
    let both_polytopal = matches!(metric(x), Some(Metric::Hull(_)))
        && matches!(metric(y), Some(Metric::Hull(_)));
    if both_polytopal {
        let va = crate::geom::predicates::polytopal_vertices(x);
        let vb = crate::geom::predicates::polytopal_vertices(y);
        return match topology {
            Topology::Open => relint_common_with_point(&[&va, &vb], x.dim()).map(|(_, p)| p),
            Topology::Closed => hulls_common_point(&[&va, &vb], x.dim()),
        };
    }
    deep_pair_point(x, y).map(|(p, _)| p)
}

/// An interior point of a body on its own (used as a sampling anchor).
fn witness_nowhere(b: &ConvexBody) -> Option<(Point, Scalar)> {
    witness_point_outside(b, &ConvexBody::Empty { dim: b.dim() })
}

/// Margins recorded in a certificate. Values are rational lower bounds;
/// `None` means the quantity has no constraint in this arrangement (for
/// example, no disjoint pairs).
#[derive(Debug, Clone)]
pub struct Margins {
    /// Min gap between disjoint pairs.
    pub pair_gap: Option<Scalar>,
    /// Min overlap measure over intersecting pairs (barycentric slack for
    /// polytopal pairs, radial depth for disks and offsets).
    pub lens_depth: Option<Scalar>,
    /// Min certified distance from any pairwise intersection to the third
    /// body, over triples whose pairs all meet.
    pub triple_clearance: Option<Scalar>,
    /// Min margin witnessing each singleton word's body sticking out of
    /// every other body.
    pub singleton_margin: Option<Scalar>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CertMethod {
    Exact2Sparse,
    SampledOnly,
}

#[derive(Debug, Clone)]
pub struct CodeDiff {
    pub missing: Vec<String>,
    pub extra: Vec<String>,
}

#[derive(Debug)]
pub struct RealizationCertificate {
    pub digest: String,
    pub claimed: NeuralCode,
    pub computed: Option<NeuralCode>,
    pub sampled: NeuralCode,
    pub relations: Option<RelationMatrix>,
    pub margins: Margins,
    pub method: CertMethod,
    pub pass: bool,
    pub diff: Option<CodeDiff>,
    pub failure: Option<String>,
}

pub const SAMPLE_BUDGET: usize = 10_000;
pub const SAMPLE_SEED: u64 = 0xC0DE;

/// Certify that the arrangement realizes `claimed`: no triple intersections,
/// the exact code equals the claim, and the sampling oracle agrees.
pub fn certify(arr: &Arrangement, claimed: &NeuralCode) -> RealizationCertificate {
    let digest = arrangement_digest(arr);
    let n = claimed.n();
    let sampled = sample_code_with_n(arr, n, SAMPLE_BUDGET, SAMPLE_SEED);
    let mut failure = None;
    let computed = match compute_code_with_n(arr, n) {
        Ok(code) => Some(code),
        Err(e) => {
            failure = Some(e.to_string());
            None
        }
    };
    let relations = relation_matrix(arr).ok();
    let margins = compute_margins(arr, computed.as_ref());
    let method = if computed.is_some() {
        CertMethod::Exact2Sparse
    } else {
        CertMethod::SampledOnly
    };
    let mut diff = None;
    let pass = match &computed {
        None => false,
        Some(code) => {
            let sample_ok = sampled.word_masks().all(|w| claimed.contains_mask(w));
            if code == claimed && sample_ok {
                true
            } else {
                let missing: Vec<String> = claimed
                    .words()
                    .filter(|w| !code.contains_mask(w.bits))
                    .map(|w| w.to_string_width(n))
                    .collect();
                let extra: Vec<String> = code
                    .words()
                    .filter(|w| !claimed.contains_mask(w.bits))
                    .map(|w| w.to_string_width(n))
                    .collect();
                diff = Some(CodeDiff { missing, extra });
                false
            }
        }
    };
    RealizationCertificate {
        digest,
        claimed: claimed.clone(),
        computed,
        sampled,
        relations,
        margins,
        method,
        pass,
        diff,
        failure,
    }
}

pub fn arrangement_digest(arr: &Arrangement) -> String {
    let json = io::canonical_json(&io::arrangement_to_json(arr));
    let mut hasher = Sha256::new();
    hasher.update(json.as_bytes());
    let out = hasher.finalize();
    out.iter().map(|b| format!("{b:02x}")).collect()
}

fn compute_margins(arr: &Arrangement, code: Option<&NeuralCode>) -> Margins {
    use crate::geom::predicates::{body_gap_lb, relint_common};
    let labels = arr.labels();
    let mut pair_gap: Option<Scalar> = None;
    let mut lens_depth: Option<Scalar> = None;
    let mut min_in = |slot: &mut Option<Scalar>, v: Scalar| {
        if slot.as_ref().is_none_or(|m| v < *m) {
            *slot = Some(v);
        }
    };
    for (ai, &i) in labels.iter().enumerate() {
        for &j in labels.iter().skip(ai + 1) {
            let x = arr.body(i).unwrap();
            let y = arr.body(j).unwrap();
            if x.is_empty() || y.is_empty() {
                continue;
            }
            match pair_intersects(x, y, arr.topology) {
                Ok(true) => {
                    let depth = match (metric(x), metric(y)) {
                        (Some(Metric::Hull(a)), Some(Metric::Hull(b))) => {
                            relint_common(&[&a, &b], arr.dim).unwrap_or_else(Scalar::zero)
                        }
                        _ => deep_pair_point(x, y)
                            .map(|(_, r)| r)
                            .unwrap_or_else(Scalar::zero),
                    };
                    min_in(&mut lens_depth, depth);
                }
                Ok(false) => {
                    if let Some(g) = body_gap_lb(x, y) {
                        min_in(&mut pair_gap, g);
                    }
                }
                Err(_) => {}
            }
        }
    }
    // Triple clearances: for triples whose pairs all meet, a lower bound
    // on the distance from each pairwise lens to the third body. Triples
    // with a disjoint pair are covered by the pair gaps.
    let mut triple_clearance: Option<Scalar> = None;
    for (ai, &i) in labels.iter().enumerate() {
        for (bi, &j) in labels.iter().enumerate().skip(ai + 1) {
            for &k in labels.iter().skip(bi + 1) {
                let x = arr.body(i).unwrap();
                let y = arr.body(j).unwrap();
                let z = arr.body(k).unwrap();
                if x.is_empty() || y.is_empty() || z.is_empty() {
                    continue;
                }
                let pairs_meet = pair_intersects(x, y, arr.topology).unwrap_or(false)
                    && pair_intersects(x, z, arr.topology).unwrap_or(false)
                    && pair_intersects(y, z, arr.topology).unwrap_or(false);
                if !pairs_meet {
                    continue;
                }
                for (third, pa, pb) in [(x, y, z), (y, x, z), (z, x, y)] {
                    let c = crate::transforms::dist_to_pair_intersection(
                        third, pa, pb, arr.dim,
                    )
                    .unwrap_or_else(Scalar::zero);
                    min_in(&mut triple_clearance, c);
                }
            }
        }
    }
    // Singleton margins: for each singleton word, the body must stick out
    // of every other body.
    let mut singleton_margin: Option<Scalar> = None;
    if let Some(code) = code {
        for &i in &labels {
            if !code.contains_mask(1 << (i - 1)) {
                continue;
            }
            let body = arr.body(i).unwrap();
            for &j in &labels {
                if i == j || arr.body(j).unwrap().is_empty() {
                    continue;
                }
                if let Some((_, m)) = witness_point_outside(body, arr.body(j).unwrap()) {
                    min_in(&mut singleton_margin, m);
                }
            }
        }
    }
    Margins {
        pair_gap,
        lens_depth,
        triple_clearance,
        singleton_margin,
    }
}

pub fn certificate_to_json(cert: &RealizationCertificate) -> serde_json::Value {
    let margins = serde_json::json!({
        "pair_gap": cert.margins.pair_gap.as_ref().map(format_scalar),
        "lens_depth": cert.margins.lens_depth.as_ref().map(format_scalar),
        "triple_clearance": cert.margins.triple_clearance.as_ref().map(format_scalar),
        "singleton_margin": cert.margins.singleton_margin.as_ref().map(format_scalar),
    });
    let relations = cert.relations.as_ref().map(|m| {
        m.relations
            .iter()
            .map(|((i, j), r)| format!("{i},{j}:{r:?}"))
            .collect::<Vec<_>>()
    });
    serde_json::json!({
        "digest": cert.digest,
        "pass": cert.pass,
        "method": match cert.method {
            CertMethod::Exact2Sparse => "exact-2-sparse",
            CertMethod::SampledOnly => "sampled-only",
        },
        "claimed": io::code_to_json(&cert.claimed),
        "computed": cert.computed.as_ref().map(io::code_to_json),
        "sampled": io::code_to_json(&cert.sampled),
        "relations": relations,
        "margins": margins,
        "diff": cert.diff.as_ref().map(|d| serde_json::json!({
            "missing": d.missing,
            "extra": d.extra,
        })),
        "failure": cert.failure,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::code::parse_code;
    use crate::scalar::s_int;

    fn interval(lo: i64, hi: i64) -> ConvexBody {
        ConvexBody::Interval {
            lo: s_int(lo),
            hi: s_int(hi),
        }
    }

    fn fig1_intervals() -> Arrangement {
        Arrangement::new(
            1,
            Topology::Open,
            vec![
                (1, interval(0, 2)),
                (2, interval(1, 4)),
                (3, interval(2, 3)),
            ],
        )
        .unwrap()
    }

    #[test]
    fn fig1_interval_code() {
        let code = compute_code(&fig1_intervals()).unwrap();
        let expected = parse_code("000,100,010,110,011").unwrap().code;
        assert_eq!(code, expected);
    }

    #[test]
    fn closed_vs_open_interval_tangency() {
        // [0,2] and [2,3] share only the endpoint 2.
        let arr = Arrangement::new(
            1,
            Topology::Open,
            vec![(1, interval(0, 2)), (2, interval(2, 3))],
        )
        .unwrap();
        let code_open = compute_code(&arr).unwrap();
        assert!(!code_open.contains_mask(0b11));
        let code_closed = compute_code(&arr.with_topology(Topology::Closed)).unwrap();
        assert!(code_closed.contains_mask(0b11));
    }

    #[test]
    fn two_disjoint_disks() {
        let arr = Arrangement::new(
            2,
            Topology::Open,
            vec![
                (
                    1,
                    ConvexBody::Disk {
                        center: Point::d2(s_int(0), s_int(0)),
                        radius_sq: s_int(1),
                    },
                ),
                (
                    2,
                    ConvexBody::Disk {
                        center: Point::d2(s_int(5), s_int(0)),
                        radius_sq: s_int(1),
                    },
                ),
            ],
        )
        .unwrap();
        let code = compute_code(&arr).unwrap();
        assert_eq!(code, parse_code("00,10,01").unwrap().code);
    }

    #[test]
    fn triple_intersection_rejected() {
        let sq = |lo: i64, hi: i64| ConvexBody::Polygon {
            vertices: vec![
                Point::d2(s_int(lo), s_int(lo)),
                Point::d2(s_int(hi), s_int(lo)),
                Point::d2(s_int(hi), s_int(hi)),
                Point::d2(s_int(lo), s_int(hi)),
            ],
        };
        let arr = Arrangement::new(
            2,
            Topology::Open,
            vec![(1, sq(0, 3)), (2, sq(1, 4)), (3, sq(2, 5))],
        )
        .unwrap();
        assert_eq!(
            has_triple_intersection(&arr).unwrap(),
            Some((1, 2, 3))
        );
        assert!(matches!(
            compute_code(&arr),
            Err(VerifyError::TripleIntersectionPresent(1, 2, 3))
        ));
    }

    #[test]
    fn sampling_is_one_sided_and_finds_fat_regions() {
        let arr = fig1_intervals();
        let exact = compute_code(&arr).unwrap();
        let sampled = sample_code(&arr, 10_000, 7);
        for w in sampled.word_masks() {
            assert!(exact.contains_mask(w), "sampled word not in exact code");
        }
        // Regions here have width >= 1 in a box of size 4: all found.
        assert_eq!(sampled, exact);
        // Determinism.
        assert_eq!(sample_code(&arr, 1000, 42), sample_code(&arr, 1000, 42));
    }

    #[test]
    fn empty_arrangement_has_zero_word_only() {
        let arr = Arrangement::new(
            1,
            Topology::Open,
            vec![(1, ConvexBody::Empty { dim: 1 })],
        )
        .unwrap();
        let code = compute_code(&arr).unwrap();
        assert_eq!(code.len(), 1);
        let sampled = sample_code(&arr, 100, 3);
        assert_eq!(sampled.len(), 1);
    }

    #[test]
    fn certify_pass_and_fail() {
        let arr = fig1_intervals();
        let fig1 = parse_code("000,100,010,110,011").unwrap().code;
        let cert = certify(&arr, &fig1);
        assert!(cert.pass);
        assert_eq!(cert.method, CertMethod::Exact2Sparse);
        assert!(cert.margins.lens_depth.as_ref().unwrap().is_positive());

        let fig2 = parse_code("000,010,001,110,101").unwrap().code;
        let cert = certify(&arr, &fig2);
        assert!(!cert.pass);
        let diff = cert.diff.unwrap();
        assert!(diff.missing.contains(&"001".to_string()));
        assert!(diff.missing.contains(&"101".to_string()));
        assert!(diff.extra.contains(&"100".to_string()));
    }

    #[test]
    fn relation_determinacy_on_equal_matrices() {
        // Two different interval realizations with the same relations have
        // the same code.
        let a = fig1_intervals();
        let b = Arrangement::new(
            1,
            Topology::Open,
            vec![
                (1, interval(0, 10)),
                (2, interval(5, 30)),
                (3, interval(11, 20)),
            ],
        )
        .unwrap();
        let ra = relation_matrix(&a).unwrap();
        let rb = relation_matrix(&b).unwrap();
        assert_eq!(ra, rb);
        assert_eq!(compute_code(&a).unwrap(), compute_code(&b).unwrap());
    }
}
