//! Closed realizations of arbitrary graphs in R^3 on the moment curve, and
//! the full pipeline from a realizable 2-sparse code to a certified open
//! realization.
//!
//! Vertex `i` sits at `(i, i^2, i^3)`; the body of a vertex is the convex
//! hull of its point together with the midpoints toward its neighbors. Any
//! four curve points are affinely independent, which keeps non-adjacent
//! hulls apart and triples empty; rather than re-proving that, every
//! instance is certified exactly.

use crate::code::{Graph, NeuralCode};
use crate::geom::{Arrangement, ConvexBody, Point, Topology};
use crate::realize2d::{graph_to_code_realization, RealizeError};
use crate::scalar::{s_frac, s_int};
use crate::transforms::closed_to_open;
use crate::verify::compute_code_with_n;

/// Points `(i, i^2, i^3)` for `i = 1..=n`.
pub fn moment_points(n: usize) -> Vec<Point> {
    (1..=n as i64)
        .map(|i| Point::d3(s_int(i), s_int(i * i), s_int(i * i * i)))
        .collect()
}

/// Closed polytopal realization of the graph's full code in R^3, certified
/// before it is returned.
pub fn realize_graph_r3(graph: &Graph) -> Result<Arrangement, RealizeError> {
    let pts = moment_points(graph.n);
    let mut bodies = Vec::with_capacity(graph.n);
    for v in 1..=graph.n {
        let mut vertices = vec![pts[v - 1].clone()];
        for w in graph.neighbors(v) {
            vertices.push(pts[v - 1].lerp(&pts[w - 1], &s_frac(1, 2)));
        }
        bodies.push((v, ConvexBody::Polytope3 { vertices }));
    }
    let arr =
        Arrangement::new(3, Topology::Closed, bodies).map_err(RealizeError::Geometry)?;
    let code = compute_code_with_n(&arr, graph.n)?;
    if code != graph.full_code() {
        return Err(RealizeError::Construction(format!(
            "moment-curve construction failed its certificate for {graph:?}"
        )));
    }
    Ok(arr)
}

/// Certified open realization of a realizable 2-sparse code in R^3:
/// realize the code graph on the moment curve, convert to open sets, then
/// shrink away the singletons the code does not have.
pub fn realize_code_r3(code: &NeuralCode) -> Result<Arrangement, RealizeError> {
    if !code.is_k_sparse(2) || !code.is_intersection_complete() {
        return Err(RealizeError::NotRealizable);
    }
    let graph = code.code_graph();
    let closed = realize_graph_r3(&graph)?;
    let open = closed_to_open(&closed)?;
    let out = graph_to_code_realization(&open, code)?;
    let achieved = compute_code_with_n(&out, code.n())?;
    if achieved != *code {
        return Err(RealizeError::CodeMismatch);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::code::parse_code;
    use crate::scalar::Scalar;
    use num_traits::Zero;

    #[test]
    fn moment_point_values() {
        let pts = moment_points(3);
        assert_eq!(pts[0], Point::d3(s_int(1), s_int(1), s_int(1)));
        assert_eq!(pts[1], Point::d3(s_int(2), s_int(4), s_int(8)));
        assert_eq!(pts[2], Point::d3(s_int(3), s_int(9), s_int(27)));
    }

    #[test]
    fn any_four_moment_points_affinely_independent() {
        let pts = moment_points(12);
        let det3 = |a: &Point, b: &Point, c: &Point, d: &Point| -> Scalar {
            let u = b.sub(a);
            let v = c.sub(a);
            let w = d.sub(a);
            &u.coords[0] * (&v.coords[1] * &w.coords[2] - &v.coords[2] * &w.coords[1])
                - &u.coords[1] * (&v.coords[0] * &w.coords[2] - &v.coords[2] * &w.coords[0])
                + &u.coords[2] * (&v.coords[0] * &w.coords[1] - &v.coords[1] * &w.coords[0])
        };
        for a in 0..12 {
            for b in a + 1..12 {
                for c in b + 1..12 {
                    for d in c + 1..12 {
                        assert!(!det3(&pts[a], &pts[b], &pts[c], &pts[d]).is_zero());
                    }
                }
            }
        }
    }

    #[test]
    fn k3_realizes_with_pairwise_midpoint_touches() {
        let g = Graph::complete(3);
        let arr = realize_graph_r3(&g).unwrap();
        assert_eq!(
            compute_code_with_n(&arr, 3).unwrap(),
            g.full_code()
        );
    }

    #[test]
    fn edgeless_graph_gives_point_bodies() {
        let g = Graph::new(2, []);
        let arr = realize_graph_r3(&g).unwrap();
        assert_eq!(
            compute_code_with_n(&arr, 2).unwrap(),
            parse_code("00,10,01").unwrap().code
        );
    }

    #[test]
    fn fig1_code_in_r3() {
        let code = parse_code("000,100,010,110,011").unwrap().code;
        let arr = realize_code_r3(&code).unwrap();
        assert_eq!(arr.topology, Topology::Open);
        assert_eq!(compute_code_with_n(&arr, 3).unwrap(), code);
    }

    #[test]
    fn fig2_code_is_rejected() {
        let code = parse_code("000,010,001,110,101").unwrap().code;
        assert!(matches!(
            realize_code_r3(&code),
            Err(RealizeError::NotRealizable)
        ));
    }

    #[test]
    fn zero_code_gets_empty_bodies() {
        let code = parse_code("00").unwrap().code;
        let arr = realize_code_r3(&code).unwrap();
        assert!(arr.bodies().iter().all(|(_, b)| b.is_empty()));
        assert_eq!(compute_code_with_n(&arr, 2).unwrap(), code);
    }

    #[test]
    fn k4_full_code_round_trip() {
        let code = Graph::complete(4).full_code();
        let arr = realize_code_r3(&code).unwrap();
        assert_eq!(compute_code_with_n(&arr, 4).unwrap(), code);
    }
}
