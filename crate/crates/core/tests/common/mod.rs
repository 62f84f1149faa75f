//! Independent reference computations shared by the integration tests.
#![allow(dead_code)]

use std::collections::VecDeque;

use afrc::generators;
use afrc::rng::SeededRng;
use afrc::{EdgeRef, Graph, NodeId};
use minilp::{ComparisonOp, OptimizationDirection, Problem};
use nalgebra::DMatrix;

pub fn adjacency_matrix(g: &Graph) -> Vec<Vec<bool>> {
    let n = g.node_count();
    let mut a = vec![vec![false; n]; n];
    for e in g.edges() {
        a[e.u.index()][e.v.index()] = true;
        a[e.v.index()][e.u.index()] = true;
    }
    a
}

/// Triangles through `e` by scanning every third node.
pub fn brute_triangles(a: &[Vec<bool>], e: EdgeRef) -> usize {
    let (u, v) = (e.u.index(), e.v.index());
    (0..a.len()).filter(|&w| w != u && w != v && a[u][w] && a[v][w]).count()
}

/// 4-cycles `u - v - q - p - u` through `e` with neither diagonal present,
/// by scanning every ordered pair `(p, q)`.
pub fn brute_quadrangles(a: &[Vec<bool>], e: EdgeRef) -> usize {
    let (u, v) = (e.u.index(), e.v.index());
    let n = a.len();
    let mut count = 0;
    for p in 0..n {
        for q in 0..n {
            let distinct = p != q && p != u && p != v && q != u && q != v;
            if distinct && a[u][p] && a[v][q] && a[p][q] && !a[u][q] && !a[v][p] {
                count += 1;
            }
        }
    }
    count
}

pub fn bfs(g: &Graph, s: NodeId) -> Vec<Option<usize>> {
    let mut dist = vec![None; g.node_count()];
    dist[s.index()] = Some(0);
    let mut queue = VecDeque::from([s]);
    while let Some(x) = queue.pop_front() {
        let d = dist[x.index()].unwrap();
        for &y in g.neighbors(x) {
            if dist[y.index()].is_none() {
                dist[y.index()] = Some(d + 1);
                queue.push_back(y);
            }
        }
    }
    dist
}

/// Ollivier-Ricci curvature of `e` as a dense transport LP.
pub fn orc_lp(g: &Graph, e: EdgeRef) -> f64 {
    let (nu, nv) = (g.neighbors(e.u), g.neighbors(e.v));
    let (mu, mv) = (1.0 / nu.len() as f64, 1.0 / nv.len() as f64);
    let mut p = Problem::new(OptimizationDirection::Minimize);
    let mut vars = Vec::new();
    for &x in nu {
        let dist = bfs(g, x);
        let row: Vec<_> = nv
            .iter()
            .map(|&y| p.add_var(dist[y.index()].unwrap() as f64, (0.0, f64::INFINITY)))
            .collect();
        vars.push(row);
    }
    for row in &vars {
        let terms: Vec<_> = row.iter().map(|&v| (v, 1.0)).collect();
        p.add_constraint(terms.as_slice(), ComparisonOp::Eq, mu);
    }
    for j in 0..nv.len() {
        let terms: Vec<_> = vars.iter().map(|row| (row[j], 1.0)).collect();
        p.add_constraint(terms.as_slice(), ComparisonOp::Eq, mv);
    }
    1.0 - p.solve().expect("transport LP is feasible").objective()
}

/// Second-smallest Laplacian eigenvalue.
pub fn algebraic_connectivity(g: &Graph) -> f64 {
    let n = g.node_count();
    let mut l = DMatrix::<f64>::zeros(n, n);
    for e in g.edges() {
        let (a, b) = (e.u.index(), e.v.index());
        l[(a, b)] -= 1.0;
        l[(b, a)] -= 1.0;
        l[(a, a)] += 1.0;
        l[(b, b)] += 1.0;
    }
    let mut eig: Vec<f64> = l.symmetric_eigen().eigenvalues.iter().copied().collect();
    eig.sort_by(f64::total_cmp);
    eig[1]
}

/// The named fixtures: K3, K4, K5, C4, C5, P5, barbell, two-bridge barbell.
pub fn fixtures() -> Vec<(&'static str, Graph)> {
    vec![
        ("K3", generators::complete(3)),
        ("K4", generators::complete(4)),
        ("K5", generators::complete(5)),
        ("C4", generators::cycle(4)),
        ("C5", generators::cycle(5)),
        ("P5", generators::path(5)),
        ("barbell", generators::barbell(10)),
        ("two-bridge barbell", generators::two_bridge_barbell(10)),
    ]
}

/// `count` G(n, p) graphs with `n` in `[2, max_n]` and `p` in `[0.05, 0.6]`.
pub fn random_graphs(count: usize, max_n: usize, seed: u64) -> Vec<Graph> {
    let mut rng = SeededRng::new(seed);
    (0..count)
        .map(|_| {
            let n = 2 + rng.below(max_n - 1);
            let p = rng.uniform(0.05, 0.6);
            generators::gnp(n, p, &mut rng)
        })
        .collect()
}
