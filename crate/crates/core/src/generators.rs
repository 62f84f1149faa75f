//! Named fixtures and random graph models.

use crate::graph::{EdgeRef, Graph, NodeId};
use crate::rng::SeededRng;

fn build(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Graph {
    Graph::from_edges(n, edges.into_iter().map(|(a, b)| (a as u32, b as u32)))
        .expect("generator produced a self-loop")
}

pub fn complete(n: usize) -> Graph {
    build(n, (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))))
}

pub fn path(n: usize) -> Graph {
    build(n, (1..n).map(|i| (i - 1, i)))
}

/// Cycle on `n >= 3` nodes.
pub fn cycle(n: usize) -> Graph {
    assert!(n >= 3, "cycle needs at least 3 nodes");
    build(n, (0..n).map(|i| (i, (i + 1) % n)))
}

pub fn star(leaves: usize) -> Graph {
    build(leaves + 1, (1..=leaves).map(|i| (0, i)))
}

pub fn complete_bipartite(a: usize, b: usize) -> Graph {
    build(a + b, (0..a).flat_map(|x| (a..a + b).map(move |y| (x, y))))
}

/// Two copies of `K_k` on `0..k` and `k..2k`, joined by the edge `(k-1, k)`.
pub fn barbell(k: usize) -> Graph {
    assert!(k >= 2);
    let clique = |off: usize| (0..k).flat_map(move |a| (a + 1..k).map(move |b| (a + off, b + off)));
    build(2 * k, clique(0).chain(clique(k)).chain([(k - 1, k)]))
}

pub fn barbell_bridge(k: usize) -> EdgeRef {
    EdgeRef::new(NodeId::from(k - 1), NodeId::from(k)).unwrap()
}

/// Barbell with a second bridge `(k-2, k+1)`.
pub fn two_bridge_barbell(k: usize) -> Graph {
    assert!(k >= 3);
    let mut g = barbell(k);
    g.add_edge(NodeId::from(k - 2), NodeId::from(k + 1)).unwrap();
    g
}

/// Circulant `d`-regular graph: node `i` is joined to `i ± 1, ..., i ± d/2`,
/// plus the antipode `i + n/2` when `d` is odd (requires even `n`).
pub fn circulant_regular(n: usize, d: usize) -> Graph {
    assert!(d < n, "degree must be below the node count");
    assert!(d.is_multiple_of(2) || n.is_multiple_of(2), "odd degree needs an even node count");
    let mut edges = Vec::with_capacity(n * d / 2);
    for i in 0..n {
        for off in 1..=d / 2 {
            edges.push((i, (i + off) % n));
        }
        if d % 2 == 1 && i < n / 2 {
            edges.push((i, i + n / 2));
        }
    }
    build(n, edges)
}

/// Erdős–Rényi `G(n, p)` using geometric skips over the lower triangle,
/// so generation costs `O(n + |E|)`.
pub fn gnp(n: usize, p: f64, rng: &mut SeededRng) -> Graph {
    if p <= 0.0 || n < 2 {
        return Graph::with_nodes(n);
    }
    if p >= 1.0 {
        return complete(n);
    }
    let log_q = (1.0 - p).ln();
    let mut edges = Vec::new();
    let (mut v, mut w): (usize, i64) = (1, -1);
    while v < n {
        let r = rng.unit();
        w += 1 + ((1.0 - r).ln() / log_q).floor() as i64;
        while w >= v as i64 && v < n {
            w -= v as i64;
            v += 1;
        }
        if v < n {
            edges.push((w as usize, v));
        }
    }
    build(n, edges)
}

/// Random recursive tree: node `i` attaches to a uniform earlier node.
pub fn random_tree(n: usize, rng: &mut SeededRng) -> Graph {
    build(n, (1..n).map(|i| (rng.below(i), i)))
}
