//! Embedding-dimension bounds for 2-sparse codes: planarity of the code
//! graph, detection of the construction families, the full-subdivision
//! lower bound, exhaustive interval search in R^1, and the report that
//! assembles them.

pub mod embed;
pub mod interval;

pub use embed::{embed, ComponentEmbedding, Embedding};
pub use interval::{interval_search, MAX_SEARCH_NEURONS};

use crate::code::{CodeError, Graph, NeuralCode};
use crate::geom::Arrangement;
use std::collections::{BTreeMap, BTreeSet, VecDeque};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum KuratowskiKind {
    K5Subdivision,
    K33Subdivision,
}

#[derive(Debug, Clone)]
pub struct KuratowskiWitness {
    pub kind: KuratowskiKind,
    pub subgraph: Graph,
}

#[derive(Debug, Clone)]
pub enum Planarity {
    Planar(Vec<ComponentEmbedding>),
    NonPlanar(KuratowskiWitness),
}

/// Planarity with a certificate either way: face walks of an embedding, or
/// an edge-minimal nonplanar subgraph (a K5 or K33 subdivision).
pub fn is_planar(graph: &Graph) -> Planarity {
    match embed(graph) {
        Embedding::Planar(comps) => Planarity::Planar(comps),
        Embedding::NonPlanar => Planarity::NonPlanar(kuratowski_witness(graph)),
    }
}

/// Edge-minimal nonplanar subgraph by greedy deletion; the survivor is a
/// subdivision of K5 or K33, classified by its branch degrees.
fn kuratowski_witness(graph: &Graph) -> KuratowskiWitness {
    let mut g = graph.clone();
    loop {
        let mut shrunk = false;
        let edges: Vec<(usize, usize)> = g.edges.iter().copied().collect();
        for e in edges {
            let mut candidate = g.clone();
            candidate.edges.remove(&e);
            if !embed::is_planar(&candidate) {
                g = candidate;
                shrunk = true;
                break;
            }
        }
        if !shrunk {
            break;
        }
    }
    let branch: Vec<usize> = (1..=g.n)
        .map(|v| g.degree(v))
        .filter(|&d| d >= 3)
        .collect();
    let kind = if branch.len() == 5 && branch.iter().all(|&d| d == 4) {
        KuratowskiKind::K5Subdivision
    } else {
        debug_assert!(branch.len() == 6 && branch.iter().all(|&d| d == 3));
        KuratowskiKind::K33Subdivision
    };
    KuratowskiWitness { kind, subgraph: g }
}

/// If the graph is the full edge subdivision of some simple base graph,
/// return `(base, W)` where `W` is the set of subdividing vertices (all of
/// degree 2, one per base edge) and `base` keeps the original labels with
/// the `W` vertices isolated. When several `W` work, the largest is
/// returned, ties broken lexicographically.
pub fn detect_full_subdivision(graph: &Graph) -> Option<(Graph, Vec<usize>)> {
    if graph.edges.is_empty() {
        return None;
    }
    let mut w_total: Vec<usize> = Vec::new();
    for comp in graph.connected_components() {
        if comp.len() == 1 {
            continue; // isolated vertices stay in the base
        }
        // 2-color the component; bipartiteness is necessary.
        let mut color: BTreeMap<usize, bool> = BTreeMap::new();
        color.insert(comp[0], false);
        let mut queue = VecDeque::from([comp[0]]);
        while let Some(v) = queue.pop_front() {
            for w in graph.neighbors(v) {
                match color.get(&w) {
                    None => {
                        color.insert(w, !color[&v]);
                        queue.push_back(w);
                    }
                    Some(&c) if c == color[&v] => return None,
                    Some(_) => {}
                }
            }
        }
        let side = |which: bool| -> Vec<usize> {
            comp.iter()
                .copied()
                .filter(|v| color[v] == which)
                .collect()
        };
        let qualifies = |s: &[usize]| {
            !s.is_empty()
                && s.iter().all(|&v| graph.degree(v) == 2)
                // Distinct neighbor pairs keep the base simple.
                && {
                    let pairs: BTreeSet<(usize, usize)> = s
                        .iter()
                        .map(|&v| {
                            let nb = graph.neighbors(v);
                            (nb[0], nb[1])
                        })
                        .collect();
                    pairs.len() == s.len()
                }
        };
        let a = side(false);
        let b = side(true);
        let pick = match (qualifies(&a), qualifies(&b)) {
            (true, true) => {
                if a.len() != b.len() {
                    if a.len() > b.len() {
                        a
                    } else {
                        b
                    }
                } else if a <= b {
                    a
                } else {
                    b
                }
            }
            (true, false) => a,
            (false, true) => b,
            (false, false) => return None,
        };
        w_total.extend(pick);
    }
    // Cross-component neighbor pairs are disjoint vertex sets, so the base
    // stays simple globally.
    let mut base_edges = BTreeSet::new();
    for &w in &w_total {
        let nb = graph.neighbors(w);
        base_edges.insert((nb[0].min(nb[1]), nb[0].max(nb[1])));
    }
    w_total.sort_unstable();
    Some((
        Graph {
            n: graph.n,
            edges: base_edges,
        },
        w_total,
    ))
}

/// Parts of a complete multipartite graph (singleton parts allowed), or
/// `None`. The complement must be a disjoint union of cliques.
pub fn complete_multipartite_parts(graph: &Graph) -> Option<Vec<Vec<usize>>> {
    let n = graph.n;
    // Complement components.
    let mut comp_of = vec![usize::MAX; n + 1];
    let mut parts: Vec<Vec<usize>> = Vec::new();
    for v in 1..=n {
        if comp_of[v] != usize::MAX {
            continue;
        }
        let id = parts.len();
        let mut queue = VecDeque::from([v]);
        comp_of[v] = id;
        let mut part = Vec::new();
        while let Some(u) = queue.pop_front() {
            part.push(u);
            for w in 1..=n {
                if w != u && !graph.has_edge(u, w) && comp_of[w] == usize::MAX {
                    comp_of[w] = id;
                    queue.push_back(w);
                }
            }
        }
        part.sort_unstable();
        parts.push(part);
    }
    // Complement components must be independent in the graph, and all
    // cross-part pairs adjacent.
    for part in &parts {
        for (ai, &u) in part.iter().enumerate() {
            for &w in &part[ai + 1..] {
                if graph.has_edge(u, w) {
                    return None;
                }
            }
        }
    }
    for (pi, part) in parts.iter().enumerate() {
        for other in &parts[pi + 1..] {
            for &u in part {
                for &w in other {
                    if !graph.has_edge(u, w) {
                        return None;
                    }
                }
            }
        }
    }
    Some(parts)
}

/// A clique core plus independent vertices whose neighborhoods are nested
/// inside the core: `(core, attachments)` with attachments sorted by
/// neighborhood size. Brute force over bipartitions, so only attempted for
/// small graphs.
pub fn nested_family_split(graph: &Graph) -> Option<(Vec<usize>, Vec<(usize, Vec<usize>)>)> {
    let n = graph.n;
    if n > 16 {
        return None;
    }
    'mask: for mask in 0u32..(1 << n) {
        // mask bit v-1 set: v is an attachment.
        let core: Vec<usize> = (1..=n).filter(|v| mask >> (v - 1) & 1 == 0).collect();
        let attach: Vec<usize> = (1..=n).filter(|v| mask >> (v - 1) & 1 == 1).collect();
        if core.is_empty() && !attach.is_empty() {
            continue;
        }
        for (ai, &u) in core.iter().enumerate() {
            for &w in &core[ai + 1..] {
                if !graph.has_edge(u, w) {
                    continue 'mask;
                }
            }
        }
        for (ai, &u) in attach.iter().enumerate() {
            for &w in &attach[ai + 1..] {
                if graph.has_edge(u, w) {
                    continue 'mask;
                }
            }
        }
        let mut hoods: Vec<(usize, Vec<usize>)> = Vec::new();
        for &u in &attach {
            let nb = graph.neighbors(u);
            if nb.iter().any(|w| !core.contains(w)) {
                continue 'mask;
            }
            hoods.push((u, nb));
        }
        hoods.sort_by_key(|(_, nb)| nb.len());
        for pair in hoods.windows(2) {
            let (_, small) = &pair[0];
            let (_, large) = &pair[1];
            if !small.iter().all(|v| large.contains(v)) {
                continue 'mask;
            }
        }
        return Some((core, hoods));
    }
    None
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Criterion {
    IntersectionIncomplete,
    TrivialCode,
    IntervalRealization,
    HellyR1Obstruction,
    PlanarGraph,
    ConstructionFamily(&'static str),
    SubdivisionOfNonplanar,
    TheoremUpperBound3,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Bound {
    LowerAtLeast(u8),
    UpperAtMost(u8),
    Unrealizable,
}

#[derive(Debug, Clone)]
pub struct Reason {
    pub bound: Bound,
    pub criterion: Criterion,
}

/// Lower and upper bounds on the minimum embedding dimension, with one
/// machine-checkable reason per bound. `upper == None` means the code has
/// no open convex realization in any dimension.
#[derive(Debug)]
pub struct DimensionReport {
    pub realizable: bool,
    pub lower: u8,
    pub upper: Option<u8>,
    pub reasons: Vec<Reason>,
    pub interval_witness: Option<Arrangement>,
    pub subdivision_base: Option<Graph>,
    pub incompleteness_witness: Option<(u32, u32)>,
}

impl DimensionReport {
    pub fn exact_dimension(&self) -> Option<u8> {
        match self.upper {
            Some(u) if u == self.lower => Some(u),
            _ => None,
        }
    }
}

/// Assemble the dimension report for a 2-sparse code.
pub fn embedding_dimension(code: &NeuralCode) -> Result<DimensionReport, CodeError> {
    if !code.is_k_sparse(2) {
        return Err(CodeError::NotTwoSparse);
    }
    let mut reasons = Vec::new();
    if let Err((a, b)) = code.intersection_complete_witness() {
        reasons.push(Reason {
            bound: Bound::Unrealizable,
            criterion: Criterion::IntersectionIncomplete,
        });
        return Ok(DimensionReport {
            realizable: false,
            lower: 0,
            upper: None,
            reasons,
            interval_witness: None,
            subdivision_base: None,
            incompleteness_witness: Some((a, b)),
        });
    }
    if code.len() == 1 {
        reasons.push(Reason {
            bound: Bound::UpperAtMost(0),
            criterion: Criterion::TrivialCode,
        });
        return Ok(DimensionReport {
            realizable: true,
            lower: 0,
            upper: Some(0),
            reasons,
            interval_witness: None,
            subdivision_base: None,
            incompleteness_witness: None,
        });
    }
    let mut lower: u8 = 1; // a nontrivial code needs room for a nonzero word
    let mut upper: u8 = 3;
    reasons.push(Reason {
        bound: Bound::UpperAtMost(3),
        criterion: Criterion::TheoremUpperBound3,
    });
    let graph = code.code_graph();
    match embed(&graph) {
        Embedding::Planar(_) => {
            upper = upper.min(2);
            reasons.push(Reason {
                bound: Bound::UpperAtMost(2),
                criterion: Criterion::PlanarGraph,
            });
        }
        Embedding::NonPlanar => {
            if complete_multipartite_parts(&graph).is_some() {
                upper = upper.min(2);
                reasons.push(Reason {
                    bound: Bound::UpperAtMost(2),
                    criterion: Criterion::ConstructionFamily("complete-multipartite"),
                });
            } else if nested_family_split(&graph).is_some() {
                upper = upper.min(2);
                reasons.push(Reason {
                    bound: Bound::UpperAtMost(2),
                    criterion: Criterion::ConstructionFamily("nested-neighborhoods"),
                });
            }
        }
    }
    let mut interval_witness = None;
    match interval_search(code) {
        Ok(Some(arr)) => {
            upper = upper.min(1);
            reasons.push(Reason {
                bound: Bound::UpperAtMost(1),
                criterion: Criterion::IntervalRealization,
            });
            interval_witness = Some(arr);
        }
        Ok(None) => {
            lower = lower.max(2);
            reasons.push(Reason {
                bound: Bound::LowerAtLeast(2),
                criterion: Criterion::HellyR1Obstruction,
            });
        }
        Err(CodeError::TooManyNeurons(_)) => {}
        Err(e) => return Err(e),
    }
    let mut subdivision_base = None;
    if let Some((base, _w)) = detect_full_subdivision(&graph) {
        let base_nonplanar = !embed::is_planar(&base);
        let is_full_code = *code == graph.full_code();
        if base_nonplanar && is_full_code {
            lower = lower.max(3);
            reasons.push(Reason {
                bound: Bound::LowerAtLeast(3),
                criterion: Criterion::SubdivisionOfNonplanar,
            });
            subdivision_base = Some(base);
        }
    }
    debug_assert!(lower <= upper);
    Ok(DimensionReport {
        realizable: true,
        lower,
        upper: Some(upper),
        reasons,
        interval_witness,
        subdivision_base,
        incompleteness_witness: None,
    })
}

/// JSON rendering of a report, with reasons and embedded witnesses.
pub fn report_to_json(report: &DimensionReport) -> serde_json::Value {
    let reasons: Vec<serde_json::Value> = report
        .reasons
        .iter()
        .map(|r| {
            serde_json::json!({
                "bound": match &r.bound {
                    Bound::LowerAtLeast(d) => format!("lower>={d}"),
                    Bound::UpperAtMost(d) => format!("upper<={d}"),
                    Bound::Unrealizable => "upper=infinity".to_string(),
                },
                "criterion": format!("{:?}", r.criterion),
            })
        })
        .collect();
    serde_json::json!({
        "realizable": report.realizable,
        "lower": report.lower,
        "upper": report.upper.map(|u| serde_json::json!(u)).unwrap_or(serde_json::json!("infinity")),
        "reasons": reasons,
        "interval_witness": report.interval_witness.as_ref().map(crate::io::arrangement_to_json),
        "subdivision_base": report.subdivision_base.as_ref().map(|g| {
            serde_json::json!({
                "n": g.n,
                "edges": g.edges.iter().map(|&(a, b)| vec![a, b]).collect::<Vec<_>>(),
            })
        }),
        "incompleteness_witness": report.incompleteness_witness.map(|(a, b)| {
            vec![
                crate::code::mask_to_set(a).into_iter().collect::<Vec<_>>(),
                crate::code::mask_to_set(b).into_iter().collect::<Vec<_>>(),
            ]
        }),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::code::parse_code;

    #[test]
    fn planarity_witnesses() {
        match is_planar(&Graph::complete(4)) {
            Planarity::Planar(_) => {}
            _ => panic!("K4 is planar"),
        }
        match is_planar(&Graph::complete(5)) {
            Planarity::NonPlanar(w) => {
                assert_eq!(w.kind, KuratowskiKind::K5Subdivision);
                assert_eq!(w.subgraph.edges.len(), 10);
            }
            _ => panic!("K5 is not planar"),
        }
        let k33 = Graph::new(
            6,
            [
                (1, 4),
                (1, 5),
                (1, 6),
                (2, 4),
                (2, 5),
                (2, 6),
                (3, 4),
                (3, 5),
                (3, 6),
            ],
        );
        match is_planar(&k33) {
            Planarity::NonPlanar(w) => assert_eq!(w.kind, KuratowskiKind::K33Subdivision),
            _ => panic!("K33 is not planar"),
        }
    }

    #[test]
    fn subdivision_detection() {
        let (base, w) = detect_full_subdivision(&Graph::complete(5).full_subdivision())
            .expect("full subdivision of K5");
        assert_eq!(w.len(), 10);
        assert_eq!(base.edges, Graph::complete(5).edges);

        let path = Graph::new(3, [(1, 2), (2, 3)]);
        let (base, w) = detect_full_subdivision(&path).expect("path subdivides an edge");
        assert_eq!(w, vec![2]);
        assert_eq!(base.edges, std::collections::BTreeSet::from([(1, 3)]));

        assert!(detect_full_subdivision(&Graph::complete(3)).is_none());
    }

    #[test]
    fn multipartite_detection() {
        // K_{2,3}: parts {1,2} and {3,4,5}.
        let g = Graph::new(
            5,
            [
                (1, 3),
                (1, 4),
                (1, 5),
                (2, 3),
                (2, 4),
                (2, 5),
            ],
        );
        let parts = complete_multipartite_parts(&g).unwrap();
        assert_eq!(parts, vec![vec![1, 2], vec![3, 4, 5]]);
        assert_eq!(
            complete_multipartite_parts(&Graph::complete(4)).unwrap().len(),
            4
        );
        // P3 is K_{1,2}, but P4 is not complete multipartite.
        assert!(complete_multipartite_parts(&Graph::new(3, [(1, 2), (2, 3)])).is_some());
        assert!(
            complete_multipartite_parts(&Graph::new(4, [(1, 2), (2, 3), (3, 4)])).is_none()
        );
    }

    #[test]
    fn nested_detection() {
        // K3 core 1..3, u=4 attached to {1}, u=5 attached to {1,2}.
        let g = Graph::new(
            5,
            [(1, 2), (1, 3), (2, 3), (4, 1), (5, 1), (5, 2)],
        );
        let (core, hoods) = nested_family_split(&g).unwrap();
        // Splits are not unique; check validity rather than identity.
        for (ai, &u) in core.iter().enumerate() {
            for &w in &core[ai + 1..] {
                assert!(g.has_edge(u, w), "core must be a clique");
            }
        }
        for pair in hoods.windows(2) {
            assert!(pair[0].1.iter().all(|v| pair[1].1.contains(v)));
        }
        assert_eq!(core.len() + hoods.len(), 5);
        // Crossing neighborhoods fail.
        let bad = Graph::new(
            6,
            [(1, 2), (1, 3), (2, 3), (4, 1), (5, 2), (6, 3)],
        );
        assert!(nested_family_split(&bad).is_none());
    }

    #[test]
    fn report_fig1() {
        let code = parse_code("000,100,010,110,011").unwrap().code;
        let r = embedding_dimension(&code).unwrap();
        assert!(r.realizable);
        assert_eq!(r.lower, 1);
        assert_eq!(r.upper, Some(1));
        assert!(r.interval_witness.is_some());
    }

    #[test]
    fn report_fig2() {
        let code = parse_code("000,010,001,110,101").unwrap().code;
        let r = embedding_dimension(&code).unwrap();
        assert!(!r.realizable);
        assert_eq!(r.upper, None);
        let (a, b) = r.incompleteness_witness.unwrap();
        assert_eq!(a & b, 0b001);
    }

    #[test]
    fn report_k3_full_code() {
        let code = Graph::complete(3).full_code();
        let r = embedding_dimension(&code).unwrap();
        assert_eq!(r.lower, 2);
        assert_eq!(r.upper, Some(2));
    }

    #[test]
    fn report_trivial() {
        let code = parse_code("0000").unwrap().code;
        let r = embedding_dimension(&code).unwrap();
        assert_eq!((r.lower, r.upper), (0, Some(0)));
    }

    #[test]
    fn report_subdivided_k5() {
        let g = Graph::complete(5).full_subdivision();
        let code = g.full_code();
        let r = embedding_dimension(&code).unwrap();
        assert_eq!(r.lower, 3);
        assert_eq!(r.upper, Some(3));
        assert!(r.subdivision_base.is_some());
    }
}
