//! Exhaustive search for open-interval realizations on the line.
//!
//! Endpoint configurations are explored as weak orders: a depth-first walk
//! places batches of endpoints at successive coordinates, pruning any state
//! whose gap word or point word leaves the support family, and any state
//! that has already closed an interval some unrealized word still needs.

use crate::code::{CodeError, NeuralCode};
use crate::geom::{Arrangement, ConvexBody, Topology};
use crate::scalar::s_int;
use std::collections::BTreeSet;

pub const MAX_SEARCH_NEURONS: usize = 7;

/// An open-interval realization of the code, or `None` after exhausting all
/// endpoint weak orders. Neurons that never fire become `Empty` bodies.
/// The firing-neuron count is capped at [`MAX_SEARCH_NEURONS`].
pub fn interval_search(code: &NeuralCode) -> Result<Option<Arrangement>, CodeError> {
    if !code.is_k_sparse(2) {
        return Err(CodeError::NotTwoSparse);
    }
    let n = code.n();
    let firing: Vec<usize> = (1..=n)
        .filter(|i| code.word_masks().any(|w| w >> (i - 1) & 1 == 1))
        .collect();
    if firing.len() > MAX_SEARCH_NEURONS {
        return Err(CodeError::TooManyNeurons(firing.len()));
    }
    let supp: BTreeSet<u32> = code.word_masks().collect();
    let mut search = Search {
        firing: &firing,
        supp: &supp,
        avail_open: firing.iter().map(|&i| 1 << (i - 1)).fold(0u32, |m, b| m | b),
        open: 0,
        closed: 0,
        realized: BTreeSet::from([0u32]),
        positions: Vec::new(),
        solution: None,
    };
    search.dfs(0);
    let Some(events) = search.solution else {
        return Ok(None);
    };
    // Build intervals from the event positions.
    let mut lo = vec![None; n + 1];
    let mut hi = vec![None; n + 1];
    for (pos, batch) in events.iter().enumerate() {
        for ev in batch {
            match ev {
                Event::Open(i) => lo[*i] = Some(pos),
                Event::Close(i) => hi[*i] = Some(pos),
            }
        }
    }
    let bodies = (1..=n)
        .map(|i| {
            let body = match (lo[i], hi[i]) {
                (Some(a), Some(b)) => ConvexBody::Interval {
                    lo: s_int(a as i64),
                    hi: s_int(b as i64),
                },
                _ => ConvexBody::Empty { dim: 1 },
            };
            (i, body)
        })
        .collect();
    Ok(Some(
        Arrangement::new(1, Topology::Open, bodies).expect("intervals are valid"),
    ))
}

#[derive(Clone, Copy, Debug)]
enum Event {
    Open(usize),
    Close(usize),
}

struct Search<'a> {
    firing: &'a [usize],
    supp: &'a BTreeSet<u32>,
    /// Bitmask of neurons not yet opened.
    avail_open: u32,
    /// Bitmask of currently open neurons.
    open: u32,
    /// Bitmask of closed neurons.
    closed: u32,
    realized: BTreeSet<u32>,
    positions: Vec<Vec<Event>>,
    solution: Option<Vec<Vec<Event>>>,
}

impl Search<'_> {
    fn dfs(&mut self, depth: usize) -> bool {
        if self.solution.is_some() {
            return true;
        }
        if self.avail_open == 0 && self.open == 0 {
            if self.realized == *self.supp {
                self.solution = Some(self.positions.clone());
                return true;
            }
            return false;
        }
        if depth > 4 * self.firing.len() + 4 {
            return false;
        }
        // Batches: choose nonempty subsets of opens and closes placed at the
        // next coordinate. The next gap word must be a support member, and
        // so must the point word at the coordinate itself.
        let opens = mask_subsets(self.avail_open);
        let closes = mask_subsets(self.open);
        for &o in &opens {
            for &c in &closes {
                if o == 0 && c == 0 {
                    continue;
                }
                let point_word = self.open & !c;
                if !self.supp.contains(&point_word) {
                    continue;
                }
                let gap_word = point_word | o;
                if !self.supp.contains(&gap_word) {
                    continue;
                }
                // Any support word using a closed neuron must be realized.
                let new_closed = self.closed | c;
                if c != 0 && self.dooms_pending(new_closed) {
                    continue;
                }
                let mut batch = Vec::new();
                for i in self.firing {
                    let bit = 1 << (i - 1);
                    if o & bit != 0 {
                        batch.push(Event::Open(*i));
                    }
                    if c & bit != 0 {
                        batch.push(Event::Close(*i));
                    }
                }
                let saved_open = self.open;
                let saved_avail = self.avail_open;
                let saved_closed = self.closed;
                let newly: Vec<u32> = [point_word, gap_word]
                    .into_iter()
                    .filter(|w| self.realized.insert(*w))
                    .collect();
                self.open = gap_word;
                self.avail_open &= !o;
                self.closed = new_closed;
                self.positions.push(batch);
                if self.dfs(depth + 1) {
                    return true;
                }
                self.positions.pop();
                self.open = saved_open;
                self.avail_open = saved_avail;
                self.closed = saved_closed;
                for w in newly {
                    self.realized.remove(&w);
                }
            }
        }
        false
    }

    /// A support word is doomed when some member neuron is already closed
    /// and the word was never realized.
    fn dooms_pending(&self, closed: u32) -> bool {
        self.supp
            .iter()
            .any(|w| *w & closed != 0 && !self.realized.contains(w))
    }
}

/// All subsets of a bitmask (including the empty one).
fn mask_subsets(mask: u32) -> Vec<u32> {
    let mut out = vec![0u32];
    let mut s = mask;
    loop {
        if s == 0 {
            break;
        }
        out.push(s);
        s = (s - 1) & mask;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::code::{parse_code, Graph};
    use crate::verify::compute_code;

    #[test]
    fn fig1_code_is_interval_realizable() {
        let code = parse_code("000,100,010,110,011").unwrap().code;
        let arr = interval_search(&code).unwrap().expect("realizable on a line");
        assert_eq!(compute_code(&arr).unwrap(), code);
    }

    #[test]
    fn k3_full_code_is_not() {
        // Three pairwise-intersecting open intervals must share a point.
        let code = Graph::complete(3).full_code();
        assert!(interval_search(&code).unwrap().is_none());
    }

    #[test]
    fn trivial_code_realizes_with_empty_bodies() {
        let code = parse_code("000").unwrap().code;
        let arr = interval_search(&code).unwrap().expect("trivial");
        assert!(arr.bodies().iter().all(|(_, b)| b.is_empty()));
        assert_eq!(compute_code(&arr).unwrap(), code);
    }

    #[test]
    fn containment_code_realizes() {
        // supports {∅,{1},{2},{1,2},{2,3}}: body 3 nested in body 2.
        let code = parse_code("000,100,010,110,011").unwrap().code;
        let arr = interval_search(&code).unwrap().unwrap();
        let computed = compute_code(&arr).unwrap();
        assert_eq!(computed, code);
    }

    #[test]
    fn caps_firing_neurons() {
        let big = Graph::complete(8).full_code();
        assert!(matches!(
            interval_search(&big),
            Err(CodeError::TooManyNeurons(8))
        ));
    }

    #[test]
    fn exhaustive_agreement_on_two_neurons() {
        // All 2-sparse codes on 2 neurons: realizable on a line iff
        // intersection-complete (which they all are).
        for words in [
            vec![0b00u32],
            vec![0b00, 0b01],
            vec![0b00, 0b10],
            vec![0b00, 0b01, 0b10],
            vec![0b00, 0b01, 0b10, 0b11],
            vec![0b00, 0b11],
            vec![0b00, 0b01, 0b11],
        ] {
            let code = NeuralCode::new(2, words);
            let arr = interval_search(&code).unwrap();
            match arr {
                Some(a) => assert_eq!(compute_code(&a).unwrap(), code),
                None => panic!("all 2-neuron 2-sparse codes embed in R^1: {code:?}"),
            }
        }
    }
}
