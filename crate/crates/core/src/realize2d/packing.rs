//! Open-disk realizations of planar graphs by circle packing.
//!
//! Each connected component is embedded (face walks), every face is
//! stellated with a helper ring and hub so the result is a simple
//! triangulation that adds no edge between original vertices, and radii are
//! relaxed until every interior angle sum is 2π. Helper circles are
//! discarded, centers and radii are snapped to rationals, and all radii are
//! scaled by `1 + delta` so that exactly the tangent pairs overlap. The
//! final arrangement is certified exactly; on a failed certificate the
//! pipeline retries with a tighter residual and finer snapping.

use super::RealizeError;
use crate::classify::embed::{embed, Embedding};
use crate::code::Graph;
use crate::geom::{Arrangement, ConvexBody, Point, Topology};
use crate::scalar::{rational_round, s_int, sqrt_bounds, Scalar};
use crate::verify::compute_code_with_n;
use num_traits::{One, Signed, Zero};
use std::collections::BTreeMap;

#[derive(Debug)]
pub struct PackingResult {
    /// Solver centers of the original circles, keyed by vertex label
    /// (component grids already applied).
    pub centers: BTreeMap<usize, (f64, f64)>,
    pub radii: BTreeMap<usize, f64>,
    /// Worst interior angle-sum error across components.
    pub residual: f64,
    /// The certified rational arrangement (open disks).
    pub snapped: Arrangement,
    /// Min certified slack over the pair inequalities.
    pub margin: Scalar,
}

/// Open-disk realization of the full code of a planar graph.
pub fn realize_planar(graph: &Graph) -> Result<Arrangement, RealizeError> {
    Ok(pack_planar(graph)?.snapped)
}

pub fn pack_planar(graph: &Graph) -> Result<PackingResult, RealizeError> {
    assert!(graph.n >= 1);
    let comps = match embed(graph) {
        Embedding::Planar(c) => c,
        Embedding::NonPlanar => return Err(RealizeError::NotPlanar),
    };
    let mut centers = BTreeMap::new();
    let mut radii = BTreeMap::new();
    let mut residual: f64 = 0.0;
    let mut margin: Option<Scalar> = None;
    let mut bodies: Vec<(usize, ConvexBody)> = Vec::new();
    let mut x_cursor = Scalar::zero();
    for comp in &comps {
        let packed = pack_component(graph, comp)?;
        residual = residual.max(packed.residual);
        if let Some(m) = &packed.margin {
            if margin.as_ref().is_none_or(|cur| m < cur) {
                margin = Some(m.clone());
            }
        }
        // Grid placement: shift the component to the running x offset with
        // four diameters of separation.
        let (lo, hi) = packed.bounds();
        let width = &hi.0 - &lo.0;
        let shift_x = &x_cursor - &lo.0;
        let shift_y = -lo.1.clone();
        x_cursor = x_cursor + &width * s_int(5);
        for (label, (cx, cy, r)) in &packed.circles {
            let center = Point::d2(cx + &shift_x, cy + &shift_y);
            centers.insert(
                *label,
                (
                    crate::scalar::scalar_to_f64(&center.coords[0]),
                    crate::scalar::scalar_to_f64(&center.coords[1]),
                ),
            );
            radii.insert(*label, crate::scalar::scalar_to_f64(r));
            bodies.push((
                *label,
                ConvexBody::Disk {
                    center,
                    radius_sq: r * r,
                },
            ));
        }
    }
    bodies.sort_by_key(|(l, _)| *l);
    let snapped = Arrangement::new(2, Topology::Open, bodies).map_err(RealizeError::Geometry)?;
    // End-to-end certification against the graph's full code.
    let code = compute_code_with_n(&snapped, graph.n)?;
    if code != graph.full_code() {
        return Err(RealizeError::SnapFailed(
            "merged arrangement fails the full-code check".into(),
        ));
    }
    Ok(PackingResult {
        centers,
        radii,
        residual,
        snapped,
        margin: margin.unwrap_or_else(Scalar::one),
    })
}

struct PackedComponent {
    /// label -> (center_x, center_y, radius), rational, already scaled.
    circles: BTreeMap<usize, (Scalar, Scalar, Scalar)>,
    residual: f64,
    margin: Option<Scalar>,
}

impl PackedComponent {
    fn bounds(&self) -> ((Scalar, Scalar), (Scalar, Scalar)) {
        let mut lo: Option<(Scalar, Scalar)> = None;
        let mut hi: Option<(Scalar, Scalar)> = None;
        for (cx, cy, r) in self.circles.values() {
            let cand_lo = (cx - r, cy - r);
            let cand_hi = (cx + r, cy + r);
            lo = Some(match lo {
                None => cand_lo,
                Some((x, y)) => (x.min(cand_lo.0), y.min(cand_lo.1)),
            });
            hi = Some(match hi {
                None => cand_hi,
                Some((x, y)) => (x.max(cand_hi.0), y.max(cand_hi.1)),
            });
        }
        (lo.unwrap(), hi.unwrap())
    }
}

fn pack_component(
    graph: &Graph,
    comp: &crate::classify::embed::ComponentEmbedding,
) -> Result<PackedComponent, RealizeError> {
    if comp.vertices.len() == 1 {
        let mut circles = BTreeMap::new();
        circles.insert(
            comp.vertices[0],
            (Scalar::zero(), Scalar::zero(), Scalar::one()),
        );
        return Ok(PackedComponent {
            circles,
            residual: 0.0,
            margin: None,
        });
    }
    let tri = stellate(comp);
    let mut residual_target = 1e-12;
    let mut den_bits = 30u32;
    let mut last_err = String::new();
    for _attempt in 0..3 {
        let solved = thurston_solve(&tri, residual_target, 4_000_000);
        let Some((positions, residual)) = solved else {
            last_err = "radius iteration did not converge".into();
            residual_target *= 0.1;
            continue;
        };
        match snap_and_scale(graph, comp, &tri, &positions, den_bits) {
            Ok((circles, margin)) => {
                return Ok(PackedComponent {
                    circles,
                    residual,
                    margin: Some(margin),
                })
            }
            Err(e) => {
                last_err = e.to_string();
                residual_target *= 1e-2;
                den_bits += 10;
            }
        }
    }
    Err(RealizeError::SnapFailed(last_err))
}

struct Triangulation {
    /// Total vertex count: originals first, then helpers.
    count: usize,
    /// Original vertex labels, index-aligned with 0..labels.len().
    labels: Vec<usize>,
    /// Oriented triangles covering the sphere, except the outer face.
    triangles: Vec<[usize; 3]>,
    /// The removed outer face (all helpers).
    outer: [usize; 3],
}

/// Stellate every face walk with a helper ring of twice the walk length
/// plus a hub, producing a simple triangulation whose only
/// original-original edges are the component's own.
fn stellate(comp: &crate::classify::embed::ComponentEmbedding) -> Triangulation {
    let labels = comp.vertices.clone();
    let index: BTreeMap<usize, usize> = labels
        .iter()
        .enumerate()
        .map(|(i, &l)| (l, i))
        .collect();
    let mut count = labels.len();
    let mut triangles: Vec<[usize; 3]> = Vec::new();
    let mut outer: Option<[usize; 3]> = None;
    for walk in &comp.faces {
        let k = walk.len();
        debug_assert!(k >= 2);
        let ring: Vec<usize> = (0..2 * k).map(|i| count + i).collect();
        let hub = count + 2 * k;
        count += 2 * k + 1;
        for i in 0..k {
            let w0 = index[&walk[i]];
            let w1 = index[&walk[(i + 1) % k]];
            let r0 = ring[2 * i];
            let r1 = ring[2 * i + 1];
            let r2 = ring[(2 * i + 2) % (2 * k)];
            triangles.push([w0, w1, r0]);
            triangles.push([r0, w1, r1]);
            triangles.push([r1, w1, r2]);
        }
        for i in 0..2 * k {
            triangles.push([hub, ring[i], ring[(i + 1) % (2 * k)]]);
        }
        if outer.is_none() {
            outer = Some([hub, ring[0], ring[1]]);
        }
    }
    let outer = outer.expect("component has at least one face");
    let pos = triangles
        .iter()
        .position(|t| *t == outer)
        .expect("outer face is a fan triangle");
    triangles.swap_remove(pos);
    Triangulation {
        count,
        labels,
        triangles,
        outer,
    }
}

/// Radii relaxation with the uniform-neighbor update, then breadth-first
/// layout. Returns per-vertex (x, y, r) and the final residual.
fn thurston_solve(
    tri: &Triangulation,
    residual_target: f64,
    max_iters: usize,
) -> Option<(Vec<(f64, f64, f64)>, f64)> {
    let v = tri.count;
    let mut wedges: Vec<Vec<(usize, usize)>> = vec![Vec::new(); v];
    for t in &tri.triangles {
        let [a, b, c] = *t;
        wedges[a].push((b, c));
        wedges[b].push((c, a));
        wedges[c].push((a, b));
    }
    let boundary = tri.outer;
    let interior: Vec<usize> = (0..v).filter(|x| !boundary.contains(x)).collect();
    let mut r = vec![1.0f64; v];
    let angle = |rv: f64, ra: f64, rb: f64| -> f64 {
        let s = (ra / (rv + ra)) * (rb / (rv + rb));
        2.0 * s.sqrt().min(1.0).asin()
    };
    let mut residual = f64::INFINITY;
    let mut iters = 0usize;
    while iters < max_iters {
        residual = 0.0f64;
        for &vtx in &interior {
            let k = wedges[vtx].len() as f64;
            if k == 0.0 {
                continue;
            }
            let theta: f64 = wedges[vtx]
                .iter()
                .map(|&(a, b)| angle(r[vtx], r[a], r[b]))
                .sum();
            residual = residual.max((theta - std::f64::consts::TAU).abs());
            // Uniform neighbor model.
            let beta = (theta / (2.0 * k)).sin();
            let delta = (std::f64::consts::PI / k).sin();
            let r_hat = beta / (1.0 - beta) * r[vtx];
            let r_new = r_hat * (1.0 - delta) / delta;
            if r_new.is_finite() && r_new > 0.0 {
                r[vtx] = r_new;
            }
        }
        iters += interior.len().max(1);
        if residual < residual_target {
            break;
        }
    }
    if residual >= residual_target {
        return None;
    }
    // Layout by flipping triangles across shared edges.
    let mut pos: Vec<Option<(f64, f64)>> = vec![None; v];
    let t0 = tri.triangles[0];
    pos[t0[0]] = Some((0.0, 0.0));
    pos[t0[1]] = Some((r[t0[0]] + r[t0[1]], 0.0));
    let mut placed_tri = vec![false; tri.triangles.len()];
    let mut progress = true;
    while progress {
        progress = false;
        for (ti, t) in tri.triangles.iter().enumerate() {
            if placed_tri[ti] {
                continue;
            }
            let known: Vec<usize> = t.iter().copied().filter(|&x| pos[x].is_some()).collect();
            if known.len() < 2 {
                continue;
            }
            placed_tri[ti] = true;
            progress = true;
            if known.len() == 3 {
                continue;
            }
            let unknown = *t.iter().find(|x| pos[**x].is_none()).unwrap();
            let (u, w) = (known[0], known[1]);
            let (ux, uy) = pos[u].unwrap();
            let (wx, wy) = pos[w].unwrap();
            let du = r[u] + r[unknown];
            let dw = r[w] + r[unknown];
            let (ex, ey) = (wx - ux, wy - uy);
            let d2 = ex * ex + ey * ey;
            let d = d2.sqrt();
            if d <= 0.0 {
                return None;
            }
            let a = (du * du - dw * dw + d2) / (2.0 * d);
            let h2 = du * du - a * a;
            let h = h2.max(0.0).sqrt();
            // Two candidates; prefer the side consistent with the stored
            // orientation of the triangle.
            let base = (ux + a * ex / d, uy + a * ey / d);
            let c1 = (base.0 - h * ey / d, base.1 + h * ex / d);
            let c2 = (base.0 + h * ey / d, base.1 - h * ex / d);
            // The stored orientation of (t0, t1, t2) fixes the sign of the
            // cross product for (u, w, unknown) as they appear in t.
            let want_left = orientation_in_triangle(t, u, w);
            let cross = |c: (f64, f64)| ex * (c.1 - uy) - ey * (c.0 - ux);
            let choice = if (cross(c1) > 0.0) == want_left { c1 } else { c2 };
            pos[unknown] = Some(choice);
        }
    }
    if pos.iter().any(|p| p.is_none()) {
        return None;
    }
    let out: Vec<(f64, f64, f64)> = (0..v)
        .map(|i| {
            let (x, y) = pos[i].unwrap();
            (x, y, r[i])
        })
        .collect();
    Some((out, residual))
}

/// Does `unknown` sit to the left of `u -> w` according to the stored
/// orientation of the triangle? All stored triangles share one chirality,
/// so propagating it keeps the layout consistent.
fn orientation_in_triangle(t: &[usize; 3], u: usize, w: usize) -> bool {
    // The triangle (a, b, c) orients its directed edges a->b, b->c, c->a;
    // the third vertex lies to the left of each.
    let pairs = [(t[0], t[1]), (t[1], t[2]), (t[2], t[0])];
    pairs.contains(&(u, w))
}

type Circles = BTreeMap<usize, (Scalar, Scalar, Scalar)>;

/// Snap solver output to rationals, choose the overlap scale delta against
/// the snapped gaps, and certify all pair inequalities exactly.
fn snap_and_scale(
    graph: &Graph,
    comp: &crate::classify::embed::ComponentEmbedding,
    tri: &Triangulation,
    positions: &[(f64, f64, f64)],
    den_bits: u32,
) -> Result<(Circles, Scalar), RealizeError> {
    let originals = &tri.labels;
    let r_min = originals
        .iter()
        .enumerate()
        .map(|(i, _)| positions[i].2)
        .fold(f64::INFINITY, f64::min);
    if !(r_min.is_finite() && r_min > 0.0) {
        return Err(RealizeError::SnapFailed("non-positive radius".into()));
    }
    let max_den = ((1u64 << den_bits) as f64 / r_min).min(2f64.powi(60)) as u64;
    let mut snapped: BTreeMap<usize, (Scalar, Scalar, Scalar)> = BTreeMap::new();
    for (i, &label) in originals.iter().enumerate() {
        let (x, y, r) = positions[i];
        snapped.insert(
            label,
            (
                rational_round(x, max_den),
                rational_round(y, max_den),
                rational_round(r, max_den),
            ),
        );
    }
    // Exact snapped gap bounds per pair: lower and upper bounds on
    // dist - (r_i + r_j).
    let verts = &comp.vertices;
    let mut adj_ratio_lo: Option<Scalar> = None; // min over non-adjacent of gap/(ri+rj)
    let mut need_ratio: Option<Scalar> = None; // max over adjacent of gap/(ri+rj)
    for (ai, &i) in verts.iter().enumerate() {
        for &j in verts.iter().skip(ai + 1) {
            let (xi, yi, ri) = &snapped[&i];
            let (xj, yj, rj) = &snapped[&j];
            let d2 = {
                let dx = xi - xj;
                let dy = yi - yj;
                &dx * &dx + &dy * &dy
            };
            let (d_lo, d_hi) = sqrt_bounds(&d2, 96);
            let rsum = ri + rj;
            if graph.has_edge(i, j) {
                let need = (&d_hi - &rsum) / &rsum;
                if need_ratio.as_ref().is_none_or(|m| need > *m) {
                    need_ratio = Some(need);
                }
            } else {
                let avail = (&d_lo - &rsum) / &rsum;
                if !avail.is_positive() {
                    return Err(RealizeError::SnapFailed(format!(
                        "non-adjacent circles {i} and {j} have no certified gap"
                    )));
                }
                if adj_ratio_lo.as_ref().is_none_or(|m| avail < *m) {
                    adj_ratio_lo = Some(avail);
                }
            }
        }
    }
    let upper = adj_ratio_lo.unwrap_or_else(|| s_int(1));
    // Power of two keeps the scaled radii compact.
    let mut delta = crate::scalar::floor_pow2(&(&upper / s_int(4)));
    if let Some(need) = &need_ratio {
        if need.is_positive() {
            // Keep clearly above the requirement.
            let need2 = need * s_int(2);
            while delta < need2 {
                delta = &delta * s_int(2);
            }
            if &delta * s_int(2) > upper {
                return Err(RealizeError::SnapFailed(
                    "adjacent overlap requirement exceeds the non-adjacent budget".into(),
                ));
            }
        }
    }
    // Scale radii and certify; shrink delta while triples appear.
    for _ in 0..24 {
        let scale = Scalar::one() + &delta;
        let mut circles: Circles = BTreeMap::new();
        for (&label, (x, y, r)) in &snapped {
            circles.insert(label, (x.clone(), y.clone(), r * &scale));
        }
        match certify_component(graph, verts, &circles) {
            Ok(margin) => return Ok((circles, margin)),
            Err(e) => {
                if let Some(need) = &need_ratio {
                    if &delta / s_int(2) <= *need {
                        return Err(e);
                    }
                }
                delta = delta / s_int(2);
            }
        }
    }
    Err(RealizeError::SnapFailed(
        "delta search exhausted without a certificate".into(),
    ))
}

/// Exact pair and code certification of one component; returns the min
/// certified slack.
fn certify_component(
    graph: &Graph,
    verts: &[usize],
    circles: &Circles,
) -> Result<Scalar, RealizeError> {
    let mut margin: Option<Scalar> = None;
    for (ai, &i) in verts.iter().enumerate() {
        for &j in verts.iter().skip(ai + 1) {
            let (xi, yi, ri) = &circles[&i];
            let (xj, yj, rj) = &circles[&j];
            let d2 = {
                let dx = xi - xj;
                let dy = yi - yj;
                &dx * &dx + &dy * &dy
            };
            let (d_lo, d_hi) = sqrt_bounds(&d2, 96);
            let rsum = ri + rj;
            let slack = if graph.has_edge(i, j) {
                &rsum - &d_hi
            } else {
                &d_lo - &rsum
            };
            if !slack.is_positive() {
                return Err(RealizeError::SnapFailed(format!(
                    "pair ({i}, {j}) has no certified slack"
                )));
            }
            if margin.as_ref().is_none_or(|m| slack < *m) {
                margin = Some(slack);
            }
        }
    }
    // The component's code must be its full code; triples are checked by
    // the exact path inside compute_code.
    let bodies: Vec<(usize, ConvexBody)> = verts
        .iter()
        .map(|&l| {
            let (x, y, r) = &circles[&l];
            (
                l,
                ConvexBody::Disk {
                    center: Point::d2(x.clone(), y.clone()),
                    radius_sq: r * r,
                },
            )
        })
        .collect();
    let arr = Arrangement::new(2, Topology::Open, bodies).map_err(RealizeError::Geometry)?;
    let n_max = verts.iter().copied().max().unwrap();
    let code = compute_code_with_n(&arr, n_max)?;
    let mut expected_words: Vec<u32> = vec![0];
    for &v in verts {
        expected_words.push(1 << (v - 1));
    }
    for &(a, b) in &graph.edges {
        if verts.contains(&a) && verts.contains(&b) {
            expected_words.push(1 << (a - 1) | 1 << (b - 1));
        }
    }
    let expected = crate::code::NeuralCode::new(n_max, expected_words);
    if code != expected {
        return Err(RealizeError::SnapFailed(
            "component code mismatch after scaling".into(),
        ));
    }
    Ok(margin.unwrap_or_else(Scalar::one))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verify::compute_code_with_n;

    #[test]
    fn single_vertex() {
        let g = Graph::new(1, []);
        let arr = realize_planar(&g).unwrap();
        assert_eq!(
            compute_code_with_n(&arr, 1).unwrap(),
            g.full_code()
        );
    }

    #[test]
    fn single_edge() {
        let g = Graph::new(2, [(1, 2)]);
        let result = pack_planar(&g).unwrap();
        assert!(result.residual < 1e-12);
        assert!(result.margin.is_positive());
        assert_eq!(
            compute_code_with_n(&result.snapped, 2).unwrap(),
            g.full_code()
        );
    }

    #[test]
    fn triangle_k3() {
        let g = Graph::complete(3);
        let result = pack_planar(&g).unwrap();
        assert_eq!(
            compute_code_with_n(&result.snapped, 3).unwrap(),
            g.full_code()
        );
        assert_eq!(result.snapped.bodies().len(), 3);
    }

    #[test]
    fn disconnected_components() {
        let g = Graph::new(4, [(1, 2)]);
        let arr = realize_planar(&g).unwrap();
        assert_eq!(compute_code_with_n(&arr, 4).unwrap(), g.full_code());
    }

    #[test]
    fn path_and_star() {
        for g in [
            Graph::new(4, [(1, 2), (2, 3), (3, 4)]),
            Graph::new(5, [(1, 2), (1, 3), (1, 4), (1, 5)]),
        ] {
            let arr = realize_planar(&g).unwrap();
            assert_eq!(
                compute_code_with_n(&arr, g.n).unwrap(),
                g.full_code(),
                "packing failed for {g:?}"
            );
        }
    }

    #[test]
    fn k4_is_packable() {
        let g = Graph::complete(4);
        let arr = realize_planar(&g).unwrap();
        assert_eq!(compute_code_with_n(&arr, 4).unwrap(), g.full_code());
    }

    #[test]
    fn nonplanar_is_rejected() {
        assert!(matches!(
            realize_planar(&Graph::complete(5)),
            Err(RealizeError::NotPlanar)
        ));
    }
}
