//! Neural codes and their combinatorics: parsing, supports, sparsity, the
//! simplicial complex and graph of a code, and the intersection-completeness
//! test that characterizes which 2-sparse codes are realizable.
//!
//! Neuron indices are 1-based everywhere in I/O and reports. Internally a
//! codeword is a bitmask with neuron `i` stored at bit `i - 1`.

use std::collections::BTreeSet;
use std::fmt;

pub const MAX_NEURONS: usize = 32;

/// A fixed-width firing pattern. Bit `i-1` set means neuron `i` fires.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Codeword {
    pub bits: u32,
}

impl Codeword {
    pub fn new(bits: u32) -> Self {
        Codeword { bits }
    }

    /// The set of firing neurons, as 1-based indices.
    pub fn support(&self) -> BTreeSet<usize> {
        mask_to_set(self.bits)
    }

    pub fn weight(&self) -> u32 {
        self.bits.count_ones()
    }

    pub fn to_string_width(&self, n: usize) -> String {
        (0..n)
            .map(|i| if self.bits >> i & 1 == 1 { '1' } else { '0' })
            .collect()
    }
}

impl fmt::Debug for Codeword {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Codeword({:b})", self.bits)
    }
}

pub fn mask_to_set(mask: u32) -> BTreeSet<usize> {
    (0..MAX_NEURONS)
        .filter(|i| mask >> i & 1 == 1)
        .map(|i| i + 1)
        .collect()
}

pub fn set_to_mask<'a>(set: impl IntoIterator<Item = &'a usize>) -> u32 {
    set.into_iter().fold(0u32, |m, &i| m | 1 << (i - 1))
}

/// A deduplicated set of codewords over `n` neurons. The all-zero word is
/// always present; construction inserts it when missing.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct NeuralCode {
    n: usize,
    words: BTreeSet<u32>,
}

impl NeuralCode {
    pub fn new(n: usize, words: impl IntoIterator<Item = u32>) -> Self {
        assert!(n <= MAX_NEURONS, "at most {MAX_NEURONS} neurons supported");
        let width_mask = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };
        let mut set: BTreeSet<u32> = words.into_iter().collect();
        for w in &set {
            assert!(w & !width_mask == 0, "codeword wider than {n} neurons");
        }
        set.insert(0);
        NeuralCode { n, words: set }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        false // the zero word is always present
    }

    pub fn words(&self) -> impl Iterator<Item = Codeword> + '_ {
        self.words.iter().map(|&b| Codeword::new(b))
    }

    pub fn word_masks(&self) -> impl Iterator<Item = u32> + '_ {
        self.words.iter().copied()
    }

    pub fn contains_mask(&self, mask: u32) -> bool {
        self.words.contains(&mask)
    }

    /// Family of supports of the codewords (always contains the empty set).
    pub fn support(&self) -> CodeSupport {
        CodeSupport {
            n: self.n,
            sets: self.words.clone(),
        }
    }

    /// True iff every codeword fires at most `k` neurons.
    pub fn is_k_sparse(&self, k: u32) -> bool {
        self.words.iter().all(|w| w.count_ones() <= k)
    }

    pub fn max_weight(&self) -> u32 {
        self.words.iter().map(|w| w.count_ones()).max().unwrap_or(0)
    }

    /// Checks closure of the support family under pairwise intersection.
    /// On failure returns one violating pair of supports (as masks).
    pub fn intersection_complete_witness(&self) -> Result<(), (u32, u32)> {
        for &a in &self.words {
            for &b in &self.words {
                if !self.words.contains(&(a & b)) {
                    return Err((a, b));
                }
            }
        }
        Ok(())
    }

    pub fn is_intersection_complete(&self) -> bool {
        self.intersection_complete_witness().is_ok()
    }

    /// Downward closure of the support family.
    pub fn simplicial_complex(&self) -> SimplicialComplex {
        let mut faces = BTreeSet::new();
        for &w in &self.words {
            insert_downward(&mut faces, w);
        }
        SimplicialComplex { n: self.n, faces }
    }

    /// Graph on `{1..n}` with an edge wherever a weight-2 support exists.
    pub fn code_graph(&self) -> Graph {
        let mut edges = BTreeSet::new();
        for &w in &self.words {
            if w.count_ones() == 2 {
                let i = w.trailing_zeros() as usize + 1;
                let j = (31 - w.leading_zeros()) as usize + 1;
                edges.insert((i, j));
            }
        }
        Graph { n: self.n, edges }
    }

    /// Whether the code has an open convex realization in some dimension.
    /// Only defined for 2-sparse codes.
    pub fn is_realizable(&self) -> Result<bool, CodeError> {
        if !self.is_k_sparse(2) {
            return Err(CodeError::NotTwoSparse);
        }
        Ok(self.is_intersection_complete())
    }

    /// Words rendered as binary strings, in canonical sorted order.
    pub fn word_strings(&self) -> Vec<String> {
        self.words
            .iter()
            .map(|&w| Codeword::new(w).to_string_width(self.n))
            .collect()
    }
}

impl fmt::Debug for NeuralCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "NeuralCode(n={}, {{{}}})", self.n, self.word_strings().join(","))
    }
}

impl fmt::Display for NeuralCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.word_strings().join(","))
    }
}

fn insert_downward(faces: &mut BTreeSet<u32>, face: u32) {
    if !faces.insert(face) {
        return;
    }
    let mut rest = face;
    while rest != 0 {
        let bit = rest & rest.wrapping_neg();
        insert_downward(faces, face & !bit);
        rest &= !bit;
    }
}

/// The family of supports of a code, including the empty set.
#[derive(Clone, PartialEq, Eq)]
pub struct CodeSupport {
    pub n: usize,
    pub sets: BTreeSet<u32>,
}

impl CodeSupport {
    pub fn contains(&self, mask: u32) -> bool {
        self.sets.contains(&mask)
    }

    pub fn as_index_sets(&self) -> Vec<BTreeSet<usize>> {
        self.sets.iter().map(|&m| mask_to_set(m)).collect()
    }
}

impl fmt::Debug for CodeSupport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let body = self
            .sets
            .iter()
            .map(|&m| {
                let idx: Vec<String> = mask_to_set(m).iter().map(|i| i.to_string()).collect();
                format!("{{{}}}", idx.join(","))
            })
            .collect::<Vec<_>>()
            .join(",");
        write!(f, "{{{body}}}")
    }
}

/// A family of subsets of `{1..n}` closed under taking subsets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicialComplex {
    pub n: usize,
    pub faces: BTreeSet<u32>,
}

impl SimplicialComplex {
    /// Faces of cardinality at most `k + 1`.
    pub fn skeleton(&self, k: u32) -> SimplicialComplex {
        SimplicialComplex {
            n: self.n,
            faces: self
                .faces
                .iter()
                .copied()
                .filter(|f| f.count_ones() <= k + 1)
                .collect(),
        }
    }

    pub fn is_downward_closed(&self) -> bool {
        self.faces.iter().all(|&f| {
            (0..MAX_NEURONS)
                .filter(|i| f >> i & 1 == 1)
                .all(|i| self.faces.contains(&(f & !(1 << i))))
        })
    }
}

/// Simple undirected graph on vertices `1..=n`, edges stored as ordered pairs.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Graph {
    pub n: usize,
    pub edges: BTreeSet<(usize, usize)>,
}

impl Graph {
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut set = BTreeSet::new();
        for (a, b) in edges {
            assert!(a != b, "loops are not allowed");
            assert!((1..=n).contains(&a) && (1..=n).contains(&b), "bad vertex");
            set.insert((a.min(b), a.max(b)));
        }
        Graph { n, edges: set }
    }

    pub fn complete(n: usize) -> Self {
        let mut edges = BTreeSet::new();
        for i in 1..=n {
            for j in i + 1..=n {
                edges.insert((i, j));
            }
        }
        Graph { n, edges }
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.edges.contains(&(a.min(b), a.max(b)))
    }

    pub fn degree(&self, v: usize) -> usize {
        self.edges.iter().filter(|&&(a, b)| a == v || b == v).count()
    }

    pub fn neighbors(&self, v: usize) -> Vec<usize> {
        let mut out: Vec<usize> = self
            .edges
            .iter()
            .filter_map(|&(a, b)| {
                if a == v {
                    Some(b)
                } else if b == v {
                    Some(a)
                } else {
                    None
                }
            })
            .collect();
        out.sort_unstable();
        out
    }

    /// The code whose support is exactly `{∅} ∪ vertices ∪ edges`: the code
    /// any realization of this graph must produce.
    pub fn full_code(&self) -> NeuralCode {
        let mut words = vec![0u32];
        for v in 1..=self.n {
            words.push(1 << (v - 1));
        }
        for &(a, b) in &self.edges {
            words.push(1 << (a - 1) | 1 << (b - 1));
        }
        NeuralCode::new(self.n, words)
    }

    /// Replace every edge `uv` by a length-2 path through a fresh vertex.
    pub fn full_subdivision(&self) -> Graph {
        let mut edges = BTreeSet::new();
        let mut next = self.n + 1;
        for &(a, b) in &self.edges {
            edges.insert((a, next));
            edges.insert((b.min(next), b.max(next)));
            next += 1;
        }
        Graph {
            n: self.n + self.edges.len(),
            edges,
        }
    }

    pub fn connected_components(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.n + 1];
        let mut comps = Vec::new();
        for start in 1..=self.n {
            if seen[start] {
                continue;
            }
            let mut stack = vec![start];
            let mut comp = Vec::new();
            seen[start] = true;
            while let Some(v) = stack.pop() {
                comp.push(v);
                for w in self.neighbors(v) {
                    if !seen[w] {
                        seen[w] = true;
                        stack.push(w);
                    }
                }
            }
            comp.sort_unstable();
            comps.push(comp);
        }
        comps
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph(n={}, edges={:?})", self.n, self.edges)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CodeError {
    RaggedWidth,
    NonBinaryCharacter(char),
    EmptyInput,
    NotTwoSparse,
    TooManyNeurons(usize),
}

impl fmt::Display for CodeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CodeError::RaggedWidth => write!(f, "codewords have unequal width"),
            CodeError::NonBinaryCharacter(c) => write!(f, "non-binary character {c:?}"),
            CodeError::EmptyInput => write!(f, "no codewords in input"),
            CodeError::NotTwoSparse => write!(f, "code is not 2-sparse"),
            CodeError::TooManyNeurons(n) => {
                write!(f, "{n} neurons exceeds the supported maximum")
            }
        }
    }
}

impl std::error::Error for CodeError {}

/// Result of parsing a code from text: the code plus a flag recording
/// whether the all-zero word had to be added.
#[derive(Debug)]
pub struct ParsedCode {
    pub code: NeuralCode,
    pub zero_word_added: bool,
}

/// Parse whitespace/comma-separated binary strings of equal width.
pub fn parse_code(text: &str) -> Result<ParsedCode, CodeError> {
    let tokens: Vec<&str> = text
        .split(|c: char| c.is_whitespace() || c == ',')
        .filter(|t| !t.is_empty())
        .collect();
    if tokens.is_empty() {
        return Err(CodeError::EmptyInput);
    }
    let n = tokens[0].len();
    if n > MAX_NEURONS {
        return Err(CodeError::TooManyNeurons(n));
    }
    let mut words = BTreeSet::new();
    for t in &tokens {
        if t.len() != n {
            return Err(CodeError::RaggedWidth);
        }
        let mut mask = 0u32;
        for (i, c) in t.chars().enumerate() {
            match c {
                '0' => {}
                '1' => mask |= 1 << i,
                other => return Err(CodeError::NonBinaryCharacter(other)),
            }
        }
        words.insert(mask);
    }
    let zero_word_added = !words.contains(&0);
    Ok(ParsedCode {
        code: NeuralCode::new(n, words),
        zero_word_added,
    })
}

/// Formats a code in the text format accepted by [`parse_code`].
pub fn format_code(code: &NeuralCode) -> String {
    code.word_strings().join(",")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fig1() -> NeuralCode {
        parse_code("000,100,010,110,011").unwrap().code
    }

    fn fig2() -> NeuralCode {
        parse_code("000,010,001,110,101").unwrap().code
    }

    #[test]
    fn parse_basics() {
        let c = fig1();
        assert_eq!(c.n(), 3);
        assert_eq!(c.len(), 5);

        let only_zero = parse_code("000").unwrap();
        assert_eq!(only_zero.code.len(), 1);
        assert!(!only_zero.zero_word_added);

        let added = parse_code("10,01").unwrap();
        assert!(added.zero_word_added);
        assert_eq!(added.code.len(), 3);

        assert_eq!(parse_code("10,1,0").unwrap_err(), CodeError::RaggedWidth);
        assert!(matches!(
            parse_code("10,2x"),
            Err(CodeError::NonBinaryCharacter(_))
        ));
        assert_eq!(parse_code("  ,").unwrap_err(), CodeError::EmptyInput);
    }

    #[test]
    fn supports() {
        // supp(101) = {1,3}, supp(111) = {1,2,3}.
        assert_eq!(
            Codeword::new(0b101).support(),
            BTreeSet::from([1usize, 3])
        );
        assert_eq!(
            Codeword::new(0b111).support(),
            BTreeSet::from([1usize, 2, 3])
        );
        assert_eq!(Codeword::new(0).support(), BTreeSet::new());

        // supp({000,101,110,111}) = {∅,{1,3},{1,2},{1,2,3}}.
        let c = parse_code("000,101,110,111").unwrap().code;
        let supp = c.support();
        assert_eq!(
            supp.sets,
            BTreeSet::from([0b000, 0b101, 0b011, 0b111])
        );

        // Fig. 1 code support: {∅,{1},{2},{1,2},{2,3}}.
        let s = fig1().support();
        assert_eq!(s.sets, BTreeSet::from([0b000, 0b001, 0b010, 0b011, 0b110]));
    }

    #[test]
    fn sparsity() {
        let c = parse_code("000,110,011").unwrap().code;
        assert!(c.is_k_sparse(2));
        let c = parse_code("111").unwrap().code;
        assert!(!c.is_k_sparse(2));
        let c = parse_code("0000,1000,0100,0010,0001,1110,1001,0101,0011")
            .unwrap()
            .code;
        assert!(!c.is_k_sparse(2));
        assert!(c.is_k_sparse(3));
    }

    #[test]
    fn intersection_completeness() {
        // Fig. 2: supports {1,2} and {1,3} meet in {1} which is missing.
        let c = fig2();
        let witness = c.intersection_complete_witness().unwrap_err();
        let (a, b) = witness;
        assert_eq!(a & b, 0b001);
        assert!(!c.contains_mask(0b001));

        assert!(fig1().is_intersection_complete());
        assert!(parse_code("000").unwrap().code.is_intersection_complete());
    }

    #[test]
    fn complexes_and_skeletons() {
        let c = parse_code("00,11").unwrap().code;
        let delta = c.simplicial_complex();
        assert_eq!(delta.faces, BTreeSet::from([0b00, 0b01, 0b10, 0b11]));
        assert!(delta.is_downward_closed());

        let delta1 = fig1().simplicial_complex();
        assert_eq!(
            delta1.faces,
            BTreeSet::from([0b000, 0b001, 0b010, 0b100, 0b011, 0b110])
        );

        // Dropping the 2-face of a complex keeps all edges.
        let mut faces = BTreeSet::new();
        insert_downward(&mut faces, 0b111);
        insert_downward(&mut faces, 0b1010);
        let delta = SimplicialComplex { n: 4, faces };
        let skel = delta.skeleton(1);
        assert!(!skel.faces.contains(&0b111));
        assert!(skel.faces.contains(&0b011));
        assert!(skel.faces.contains(&0b110));
        assert_eq!(delta.skeleton(9), delta);

        let single = parse_code("1").unwrap().code.simplicial_complex();
        assert_eq!(single.skeleton(0), single);
    }

    #[test]
    fn code_graphs() {
        let g = fig1().code_graph();
        assert_eq!(g.n, 3);
        assert_eq!(g.edges, BTreeSet::from([(1, 2), (2, 3)]));

        let g = parse_code("000").unwrap().code.code_graph();
        assert_eq!(g.n, 3);
        assert!(g.edges.is_empty());

        let g = parse_code("00,10,01,11").unwrap().code.code_graph();
        assert_eq!(g.edges, BTreeSet::from([(1, 2)]));
    }

    #[test]
    fn graph_full_codes() {
        let path = Graph::new(3, [(1, 2), (2, 3)]);
        let code = path.full_code();
        assert_eq!(
            code.support().sets,
            BTreeSet::from([0b000, 0b001, 0b010, 0b100, 0b011, 0b110])
        );

        let e2 = Graph::new(2, []);
        assert_eq!(
            e2.full_code().word_strings(),
            vec!["00".to_string(), "10".into(), "01".into()]
        );

        let k3 = Graph::complete(3);
        assert_eq!(k3.full_code().len(), 7);
    }

    #[test]
    fn realizability() {
        assert_eq!(fig2().is_realizable(), Ok(false));
        assert_eq!(fig1().is_realizable(), Ok(true));
        assert_eq!(parse_code("000").unwrap().code.is_realizable(), Ok(true));
        assert_eq!(
            parse_code("111").unwrap().code.is_realizable(),
            Err(CodeError::NotTwoSparse)
        );
    }

    #[test]
    fn subdivision() {
        let k3 = Graph::complete(3);
        let sub = k3.full_subdivision();
        assert_eq!(sub.n, 6);
        assert_eq!(sub.edges.len(), 6);
        for v in 4..=6 {
            assert_eq!(sub.degree(v), 2);
        }
    }

    #[test]
    fn graph_code_consistency_on_small_codes() {
        // For 2-sparse intersection-complete codes, the graph's full code
        // support contains the code's support.
        let c = fig1();
        let full = c.code_graph().full_code();
        for w in c.word_masks() {
            assert!(full.contains_mask(w) || w.count_ones() == 1);
        }
    }
}
