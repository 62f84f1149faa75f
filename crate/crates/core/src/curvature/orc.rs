use crate::curvature::transport::min_transport_cost;
use crate::curvature::DEFAULT_TRANSPORT_GUARD;
use crate::error::{Error, Result};
use crate::graph::{EdgeRef, Graph, NodeId};
use crate::motifs::sorted_intersection_count;

/// Ollivier-Ricci curvature `1 - W1(μ_u, μ_v)` with `μ_x` uniform on the
/// open neighborhood of `x` and hop-distance ground cost.
pub fn orc_edge_reference(g: &Graph, e: EdgeRef) -> Result<f64> {
    orc_edge_reference_with_guard(g, e, DEFAULT_TRANSPORT_GUARD)
}

pub fn orc_edge_reference_with_guard(g: &Graph, e: EdgeRef, guard: usize) -> Result<f64> {
    g.require_edge(e)?;
    let (deg_u, deg_v) = (g.degree(e.u), g.degree(e.v));
    if deg_u > guard || deg_v > guard {
        return Err(Error::Capability {
            edge: e,
            deg_u,
            deg_v,
            guard,
        });
    }
    Ok(orc_unchecked(g, e))
}

pub(crate) fn orc_unchecked(g: &Graph, e: EdgeRef) -> f64 {
    let (nu, nv) = (g.neighbors(e.u), g.neighbors(e.v));
    let cost: Vec<Vec<u64>> = nu
        .iter()
        .map(|&x| nv.iter().map(|&y| hop_distance_near(g, x, y)).collect())
        .collect();
    // scale both uniform measures to integer mass deg(u)·deg(v)
    let supply = vec![nv.len() as u64; nu.len()];
    let demand = vec![nu.len() as u64; nv.len()];
    let total = (nu.len() * nv.len()) as f64;
    1.0 - min_transport_cost(&supply, &demand, &cost) as f64 / total
}

/// Distance between a neighbor of `u` and a neighbor of `v` for an edge
/// `(u, v)`; the path `x - u - v - y` caps it at 3.
fn hop_distance_near(g: &Graph, x: NodeId, y: NodeId) -> u64 {
    if x == y {
        0
    } else if g.has_edge(x, y) {
        1
    } else if sorted_intersection_count(g.neighbors(x), g.neighbors(y)) > 0 {
        2
    } else {
        3
    }
}
