//! Edge-local motif counts over sorted adjacency lists.
//!
//! For an edge `(u, v)` write `A = N(u) \ (N(v) ∪ {v})` and
//! `B = N(v) \ (N(u) ∪ {u})` for the exclusive neighborhoods. Triangles are
//! common neighbors. Quadrangles are edges `(p, q)` with `p ∈ A`, `q ∈ B`,
//! i.e. 4-cycles through the edge with neither chord present.

use serde::Serialize;

use crate::error::Result;
use crate::graph::{EdgeRef, Graph, NodeId};

/// Degrees and motif counts of one edge, with `m >= n` the sorted degrees.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct EdgeNeighborhoodProfile {
    pub deg_u: usize,
    pub deg_v: usize,
    pub m: usize,
    pub n: usize,
    pub triangles: usize,
    pub quadrangles: usize,
}

pub fn triangle_count(g: &Graph, e: EdgeRef) -> Result<usize> {
    g.require_edge(e)?;
    Ok(triangles_unchecked(g, e))
}

pub fn quadrangle_count(g: &Graph, e: EdgeRef) -> Result<usize> {
    g.require_edge(e)?;
    Ok(quadrangles_unchecked(g, e))
}

/// `|Ñ(u) Δ Ñ(v)|` with `Ñ(x) = N(x) ∪ {x}`.
pub fn closed_neighborhood_symmetric_difference(g: &Graph, e: EdgeRef) -> Result<usize> {
    g.require_edge(e)?;
    let (a, b) = exclusive_neighborhoods(g, e);
    Ok(a.len() + b.len())
}

/// Number of edges joining `Ñ(u) \ Ñ(v)` to `Ñ(v) \ Ñ(u)`.
pub fn bridging_set_size(g: &Graph, e: EdgeRef) -> Result<usize> {
    g.require_edge(e)?;
    let (a, b) = exclusive_neighborhoods(g, e);
    Ok(count_cross_edges(g, &a, &b))
}

pub fn edge_profile(g: &Graph, e: EdgeRef) -> Result<EdgeNeighborhoodProfile> {
    g.require_edge(e)?;
    Ok(profile_unchecked(g, e))
}

pub(crate) fn profile_unchecked(g: &Graph, e: EdgeRef) -> EdgeNeighborhoodProfile {
    let (deg_u, deg_v) = (g.degree(e.u), g.degree(e.v));
    EdgeNeighborhoodProfile {
        deg_u,
        deg_v,
        m: deg_u.max(deg_v),
        n: deg_u.min(deg_v),
        triangles: triangles_unchecked(g, e),
        quadrangles: quadrangles_unchecked(g, e),
    }
}

#[inline]
pub(crate) fn triangles_unchecked(g: &Graph, e: EdgeRef) -> usize {
    sorted_intersection_count(g.neighbors(e.u), g.neighbors(e.v))
}

pub(crate) fn quadrangles_unchecked(g: &Graph, e: EdgeRef) -> usize {
    let (a, b) = exclusive_neighborhoods(g, e);
    count_cross_edges(g, &a, &b)
}

/// `(N(u) \ Ñ(v), N(v) \ Ñ(u))`, both sorted.
pub(crate) fn exclusive_neighborhoods(g: &Graph, e: EdgeRef) -> (Vec<NodeId>, Vec<NodeId>) {
    let (nu, nv) = (g.neighbors(e.u), g.neighbors(e.v));
    (
        sorted_difference(nu, nv, e.v),
        sorted_difference(nv, nu, e.u),
    )
}

fn count_cross_edges(g: &Graph, a: &[NodeId], b: &[NodeId]) -> usize {
    if a.is_empty() || b.is_empty() {
        return 0;
    }
    a.iter()
        .map(|&p| sorted_intersection_count(g.neighbors(p), b))
        .sum()
}

pub(crate) fn sorted_intersection_count(a: &[NodeId], b: &[NodeId]) -> usize {
    let (mut i, mut j, mut count) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                count += 1;
                i += 1;
                j += 1;
            }
        }
    }
    count
}

/// Elements of `a` not in `b` and not equal to `skip`.
fn sorted_difference(a: &[NodeId], b: &[NodeId], skip: NodeId) -> Vec<NodeId> {
    let mut out = Vec::with_capacity(a.len());
    let mut j = 0;
    for &x in a {
        while j < b.len() && b[j] < x {
            j += 1;
        }
        if x != skip && (j >= b.len() || b[j] != x) {
            out.push(x);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;
    use crate::generators;

    fn e(a: u32, b: u32) -> EdgeRef {
        EdgeRef::from((a, b))
    }

    #[test]
    fn triangles_on_fixtures() {
        let k3 = generators::complete(3);
        let k4 = generators::complete(4);
        let c4 = generators::cycle(4);
        assert!(k3.edges().iter().all(|&x| triangle_count(&k3, x).unwrap() == 1));
        assert!(k4.edges().iter().all(|&x| triangle_count(&k4, x).unwrap() == 2));
        assert!(c4.edges().iter().all(|&x| triangle_count(&c4, x).unwrap() == 0));
    }

    #[test]
    fn quadrangles_on_fixtures() {
        let c4 = generators::cycle(4);
        let k4 = generators::complete(4);
        let tree = generators::path(6);
        assert!(c4.edges().iter().all(|&x| quadrangle_count(&c4, x).unwrap() == 1));
        assert!(k4.edges().iter().all(|&x| quadrangle_count(&k4, x).unwrap() == 0));
        assert!(tree.edges().iter().all(|&x| quadrangle_count(&tree, x).unwrap() == 0));
    }

    #[test]
    fn symmetric_difference_fixtures() {
        let k4 = generators::complete(4);
        let c4 = generators::cycle(4);
        let p3 = generators::path(3);
        assert_eq!(closed_neighborhood_symmetric_difference(&k4, e(0, 1)).unwrap(), 0);
        assert_eq!(closed_neighborhood_symmetric_difference(&c4, e(0, 1)).unwrap(), 2);
        assert_eq!(closed_neighborhood_symmetric_difference(&p3, e(0, 1)).unwrap(), 1);
    }

    #[test]
    fn bridging_fixtures() {
        let k4 = generators::complete(4);
        let c4 = generators::cycle(4);
        let barbell = generators::barbell(10);
        assert_eq!(bridging_set_size(&c4, e(0, 1)).unwrap(), 1);
        assert_eq!(bridging_set_size(&k4, e(0, 1)).unwrap(), 0);
        let bridge = generators::barbell_bridge(10);
        assert_eq!(bridging_set_size(&barbell, bridge).unwrap(), 0);
    }

    #[test]
    fn closing_a_path_creates_quadrangles() {
        let mut p4 = generators::path(4);
        p4.add_edge(NodeId(0), NodeId(3)).unwrap();
        for &x in p4.edges() {
            assert_eq!(quadrangle_count(&p4, x).unwrap(), 1);
        }
    }

    #[test]
    fn missing_edge_is_an_error() {
        let c4 = generators::cycle(4);
        for f in [
            triangle_count,
            quadrangle_count,
            closed_neighborhood_symmetric_difference,
            bridging_set_size,
        ] {
            assert!(matches!(f(&c4, e(0, 2)), Err(Error::EdgeNotFound(_))));
        }
    }

    #[test]
    fn profile_sorts_degrees() {
        let star = Graph::from_edges(4, [(0, 1), (0, 2), (0, 3)]).unwrap();
        let p = edge_profile(&star, e(0, 2)).unwrap();
        assert_eq!((p.deg_u, p.deg_v, p.m, p.n), (3, 1, 3, 1));
    }
}
