//! Planar embedding by incremental face insertion (the classic
//! Demoucron-Malgrange-Pertuiset scheme), organized per biconnected block
//! and glued at cut vertices. The embedder doubles as the planarity test:
//! a fragment with no admissible face certifies nonplanarity.
//!
//! Faces are cyclic vertex walks; over a connected component every directed
//! edge appears in exactly one walk, which is what the stellation step of
//! the circle packing needs.

use crate::code::Graph;
use std::collections::{BTreeMap, BTreeSet, VecDeque};

#[derive(Debug, Clone)]
pub struct ComponentEmbedding {
    pub vertices: Vec<usize>,
    /// Cyclic vertex walks; each directed edge of the component appears in
    /// exactly one face.
    pub faces: Vec<Vec<usize>>,
}

#[derive(Debug, Clone)]
pub enum Embedding {
    Planar(Vec<ComponentEmbedding>),
    NonPlanar,
}

/// Attempt a planar embedding of every connected component.
pub fn embed(graph: &Graph) -> Embedding {
    let mut out = Vec::new();
    for comp in graph.connected_components() {
        match embed_component(graph, &comp) {
            Some(e) => out.push(e),
            None => return Embedding::NonPlanar,
        }
    }
    Embedding::Planar(out)
}

pub fn is_planar(graph: &Graph) -> bool {
    matches!(embed(graph), Embedding::Planar(_))
}

fn embed_component(graph: &Graph, comp: &[usize]) -> Option<ComponentEmbedding> {
    if comp.len() == 1 {
        return Some(ComponentEmbedding {
            vertices: comp.to_vec(),
            faces: vec![vec![comp[0]]],
        });
    }
    let blocks = biconnected_blocks(graph, comp);
    // Embed each block on its own.
    let mut block_faces: Vec<Vec<Vec<usize>>> = Vec::new();
    for block in &blocks {
        if block.len() == 1 {
            // A bridge: single face walking the edge both ways.
            let (u, v) = block[0];
            block_faces.push(vec![vec![u, v]]);
        } else {
            block_faces.push(embed_biconnected(block)?);
        }
    }
    // Glue blocks at cut vertices, breadth-first over the block tree.
    let mut merged_faces: Vec<Vec<usize>> = Vec::new();
    let mut merged_vertices: BTreeSet<usize> = BTreeSet::new();
    let mut remaining: VecDeque<usize> = (0..blocks.len()).collect();
    let mut stall = 0;
    while let Some(bi) = remaining.pop_front() {
        let verts: BTreeSet<usize> = blocks[bi].iter().flat_map(|&(u, v)| [u, v]).collect();
        if merged_vertices.is_empty() {
            merged_faces = block_faces[bi].clone();
            merged_vertices = verts;
            stall = 0;
            continue;
        }
        let Some(&cut) = verts.intersection(&merged_vertices).next() else {
            remaining.push_back(bi);
            stall += 1;
            assert!(stall <= remaining.len(), "block tree is connected");
            continue;
        };
        stall = 0;
        // Splice the block's outer walk into a host face at the cut vertex.
        let host_idx = merged_faces
            .iter()
            .position(|f| f.contains(&cut))
            .expect("cut vertex lies on some merged face");
        let guest_idx = block_faces[bi]
            .iter()
            .position(|f| f.contains(&cut))
            .expect("cut vertex lies on some block face");
        let host = rotate_to(&merged_faces[host_idx], cut);
        let guest = rotate_to(&block_faces[bi][guest_idx], cut);
        let mut spliced = guest;
        spliced.extend(host);
        merged_faces[host_idx] = spliced;
        for (fi, f) in block_faces[bi].iter().enumerate() {
            if fi != guest_idx {
                merged_faces.push(f.clone());
            }
        }
        merged_vertices.extend(verts);
    }
    // Euler check: V - E + F = 2 for a connected planar graph.
    let edge_count: usize = merged_faces.iter().map(|f| f.len()).sum::<usize>() / 2;
    debug_assert_eq!(
        comp.len() + merged_faces.len(),
        edge_count + 2,
        "Euler characteristic"
    );
    Some(ComponentEmbedding {
        vertices: comp.to_vec(),
        faces: merged_faces,
    })
}

fn rotate_to(walk: &[usize], v: usize) -> Vec<usize> {
    let i = walk.iter().position(|&w| w == v).expect("vertex on walk");
    let mut out = Vec::with_capacity(walk.len());
    out.extend_from_slice(&walk[i..]);
    out.extend_from_slice(&walk[..i]);
    out
}

/// Biconnected blocks of the component, each as its edge list. Bridges come
/// out as single-edge blocks. Recursion depth is bounded by the vertex
/// count, which is small everywhere in this crate.
fn biconnected_blocks(graph: &Graph, comp: &[usize]) -> Vec<Vec<(usize, usize)>> {
    struct State<'a> {
        graph: &'a Graph,
        disc: BTreeMap<usize, usize>,
        low: BTreeMap<usize, usize>,
        stack: Vec<(usize, usize)>,
        blocks: Vec<Vec<(usize, usize)>>,
        time: usize,
    }
    fn dfs(st: &mut State, v: usize, parent: Option<usize>) {
        st.disc.insert(v, st.time);
        st.low.insert(v, st.time);
        st.time += 1;
        for w in st.graph.neighbors(v) {
            if Some(w) == parent {
                continue;
            }
            if let Some(&dw) = st.disc.get(&w) {
                if dw < st.disc[&v] {
                    st.stack.push((v, w));
                    let lv = st.low[&v].min(dw);
                    st.low.insert(v, lv);
                }
            } else {
                st.stack.push((v, w));
                dfs(st, w, Some(v));
                let lw = st.low[&w];
                if lw < st.low[&v] {
                    st.low.insert(v, lw);
                }
                if lw >= st.disc[&v] {
                    let mut block = Vec::new();
                    while let Some(&(a, b)) = st.stack.last() {
                        st.stack.pop();
                        block.push((a.min(b), a.max(b)));
                        if (a, b) == (v, w) {
                            break;
                        }
                    }
                    if !block.is_empty() {
                        block.sort_unstable();
                        block.dedup();
                        st.blocks.push(block);
                    }
                }
            }
        }
    }
    let mut st = State {
        graph,
        disc: BTreeMap::new(),
        low: BTreeMap::new(),
        stack: Vec::new(),
        blocks: Vec::new(),
        time: 0,
    };
    dfs(&mut st, comp[0], None);
    st.blocks
}

/// DMP embedding of one biconnected block (at least two edges), given by
/// its edge list. Returns the face walks or `None` when not planar.
fn embed_biconnected(edges: &[(usize, usize)]) -> Option<Vec<Vec<usize>>> {
    let mut adj: BTreeMap<usize, BTreeSet<usize>> = BTreeMap::new();
    for &(u, v) in edges {
        adj.entry(u).or_default().insert(v);
        adj.entry(v).or_default().insert(u);
    }
    let cycle = find_cycle(&adj)?;
    let mut faces: Vec<Vec<usize>> = vec![cycle.clone(), cycle.iter().rev().copied().collect()];
    let mut h_vertices: BTreeSet<usize> = cycle.iter().copied().collect();
    let mut h_edges: BTreeSet<(usize, usize)> = BTreeSet::new();
    for i in 0..cycle.len() {
        let a = cycle[i];
        let b = cycle[(i + 1) % cycle.len()];
        h_edges.insert((a.min(b), a.max(b)));
    }
    loop {
        let fragments = compute_fragments(&adj, &h_vertices, &h_edges);
        if fragments.is_empty() {
            return Some(faces);
        }
        // Admissible faces per fragment.
        let admissible: Vec<Vec<usize>> = fragments
            .iter()
            .map(|frag| {
                faces
                    .iter()
                    .enumerate()
                    .filter(|(_, f)| {
                        let fs: BTreeSet<usize> = f.iter().copied().collect();
                        frag.attachments.iter().all(|a| fs.contains(a))
                    })
                    .map(|(i, _)| i)
                    .collect()
            })
            .collect();
        if admissible.iter().any(|a| a.is_empty()) {
            return None;
        }
        let pick = admissible
            .iter()
            .position(|a| a.len() == 1)
            .unwrap_or(0);
        let face_idx = admissible[pick][0];
        let path = fragment_alpha_path(&adj, &fragments[pick], &h_vertices);
        // Split the face along the path.
        let face = faces[face_idx].clone();
        let s = path[0];
        let t = *path.last().unwrap();
        let si = face.iter().position(|&v| v == s).expect("s on face");
        let ti = face.iter().position(|&v| v == t).expect("t on face");
        let arc = |from: usize, to: usize| -> Vec<usize> {
            let mut out = Vec::new();
            let mut i = from;
            loop {
                out.push(face[i]);
                if i == to {
                    break;
                }
                i = (i + 1) % face.len();
            }
            out
        };
        let interior: Vec<usize> = path[1..path.len() - 1].to_vec();
        let mut face1 = arc(si, ti);
        face1.extend(interior.iter().rev());
        let mut face2 = arc(ti, si);
        face2.extend(interior.iter());
        faces[face_idx] = face1;
        faces.push(face2);
        for w in &path {
            h_vertices.insert(*w);
        }
        for pair in path.windows(2) {
            h_edges.insert((pair[0].min(pair[1]), pair[0].max(pair[1])));
        }
    }
}

struct Fragment {
    attachments: Vec<usize>,
    /// Interior vertices (empty for a chord).
    interior: BTreeSet<usize>,
    /// For a chord fragment, its two endpoints.
    chord: Option<(usize, usize)>,
}

fn compute_fragments(
    adj: &BTreeMap<usize, BTreeSet<usize>>,
    h_vertices: &BTreeSet<usize>,
    h_edges: &BTreeSet<(usize, usize)>,
) -> Vec<Fragment> {
    let mut fragments = Vec::new();
    // Chords.
    for (&u, nbrs) in adj {
        for &v in nbrs {
            if u < v
                && h_vertices.contains(&u)
                && h_vertices.contains(&v)
                && !h_edges.contains(&(u, v))
            {
                fragments.push(Fragment {
                    attachments: vec![u, v],
                    interior: BTreeSet::new(),
                    chord: Some((u, v)),
                });
            }
        }
    }
    // Components of the rest.
    let mut seen: BTreeSet<usize> = BTreeSet::new();
    for &start in adj.keys() {
        if h_vertices.contains(&start) || seen.contains(&start) {
            continue;
        }
        let mut comp = BTreeSet::new();
        let mut attach = BTreeSet::new();
        let mut queue = VecDeque::from([start]);
        seen.insert(start);
        while let Some(v) = queue.pop_front() {
            comp.insert(v);
            for &w in &adj[&v] {
                if h_vertices.contains(&w) {
                    attach.insert(w);
                } else if seen.insert(w) {
                    queue.push_back(w);
                }
            }
        }
        fragments.push(Fragment {
            attachments: attach.into_iter().collect(),
            interior: comp,
            chord: None,
        });
    }
    fragments
}

/// A path through the fragment between two distinct attachment vertices.
fn fragment_alpha_path(
    adj: &BTreeMap<usize, BTreeSet<usize>>,
    frag: &Fragment,
    h_vertices: &BTreeSet<usize>,
) -> Vec<usize> {
    if let Some((u, v)) = frag.chord {
        return vec![u, v];
    }
    let start = frag.attachments[0];
    let goal = frag.attachments[1];
    // BFS from start through the fragment interior to the goal.
    let mut prev: BTreeMap<usize, usize> = BTreeMap::new();
    let mut queue = VecDeque::new();
    for &w in &adj[&start] {
        if frag.interior.contains(&w) && !prev.contains_key(&w) {
            prev.insert(w, start);
            queue.push_back(w);
        }
    }
    while let Some(v) = queue.pop_front() {
        for &w in &adj[&v] {
            if w == goal {
                let mut path = vec![goal, v];
                let mut cur = v;
                while let Some(&p) = prev.get(&cur) {
                    path.push(p);
                    cur = p;
                    if p == start {
                        break;
                    }
                }
                path.reverse();
                return path;
            }
            if frag.interior.contains(&w) && !prev.contains_key(&w) {
                prev.insert(w, v);
                queue.push_back(w);
            }
        }
    }
    unreachable!("fragment connects two attachments in a biconnected graph")
}

fn find_cycle(adj: &BTreeMap<usize, BTreeSet<usize>>) -> Option<Vec<usize>> {
    fn dfs(
        adj: &BTreeMap<usize, BTreeSet<usize>>,
        v: usize,
        parent: Option<usize>,
        disc: &mut BTreeMap<usize, usize>,
        prev: &mut BTreeMap<usize, usize>,
    ) -> Option<Vec<usize>> {
        for &w in &adj[&v] {
            if Some(w) == parent {
                continue;
            }
            match disc.get(&w) {
                Some(&dw) if dw < disc[&v] => {
                    // Back edge to an ancestor: walk the tree path up.
                    let mut cycle = vec![v];
                    let mut cur = v;
                    while cur != w {
                        cur = prev[&cur];
                        cycle.push(cur);
                    }
                    cycle.reverse();
                    return Some(cycle);
                }
                Some(_) => {}
                None => {
                    disc.insert(w, disc[&v] + 1);
                    prev.insert(w, v);
                    if let Some(c) = dfs(adj, w, Some(v), disc, prev) {
                        return Some(c);
                    }
                }
            }
        }
        None
    }
    let &start = adj.keys().next()?;
    let mut disc = BTreeMap::from([(start, 0usize)]);
    let mut prev = BTreeMap::new();
    dfs(adj, start, None, &mut disc, &mut prev)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k(n: usize) -> Graph {
        Graph::complete(n)
    }

    #[test]
    fn small_planar_graphs_embed() {
        for g in [
            k(1),
            k(2),
            k(3),
            k(4),
            Graph::new(3, [(1, 2), (2, 3)]),
            Graph::new(6, [(1, 2), (2, 3), (3, 1), (4, 5)]),
            Graph::new(4, []),
        ] {
            assert!(is_planar(&g), "{g:?} should be planar");
        }
    }

    #[test]
    fn k5_and_k33_are_not_planar() {
        assert!(!is_planar(&k(5)));
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
        assert!(!is_planar(&k33));
    }

    #[test]
    fn faces_cover_each_directed_edge_once() {
        let g = Graph::new(5, [(1, 2), (2, 3), (3, 1), (3, 4), (4, 5), (5, 3), (1, 4)]);
        let Embedding::Planar(comps) = embed(&g) else {
            panic!("planar");
        };
        let mut directed: BTreeMap<(usize, usize), usize> = BTreeMap::new();
        for comp in &comps {
            for face in &comp.faces {
                let m = face.len();
                for i in 0..m {
                    *directed.entry((face[i], face[(i + 1) % m])).or_default() += 1;
                }
            }
        }
        for (&(u, v), &count) in &directed {
            assert_eq!(count, 1, "directed edge {u}->{v} seen {count} times");
            assert!(g.has_edge(u, v));
        }
        assert_eq!(directed.len(), 2 * g.edges.len());
    }

    #[test]
    fn tree_faces_walk_both_sides() {
        let g = Graph::new(4, [(1, 2), (2, 3), (2, 4)]);
        let Embedding::Planar(comps) = embed(&g) else {
            panic!("planar");
        };
        assert_eq!(comps.len(), 1);
        // One face whose walk has length 2 * edges.
        let total: usize = comps[0].faces.iter().map(|f| f.len()).sum();
        assert_eq!(total, 6);
    }

    #[test]
    fn max_planar_graph_embeds_with_triangles() {
        // The octahedron: 6 vertices, 12 edges, all faces triangles.
        let g = Graph::new(
            6,
            [
                (1, 2),
                (1, 3),
                (1, 4),
                (1, 5),
                (2, 3),
                (3, 4),
                (4, 5),
                (5, 2),
                (6, 2),
                (6, 3),
                (6, 4),
                (6, 5),
            ],
        );
        let Embedding::Planar(comps) = embed(&g) else {
            panic!("planar");
        };
        assert_eq!(comps[0].faces.len(), 8);
        assert!(comps[0].faces.iter().all(|f| f.len() == 3));
    }
}
