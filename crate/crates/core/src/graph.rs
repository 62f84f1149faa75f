//! Simple undirected graph with sorted adjacency sets.
//!
//! Nodes are dense `u32` indices. Every node carries the label it was
//! ingested under so that edge lists round-trip with their original names.
//! The canonical edge list (`u < v`, sorted lexicographically) is the index
//! space shared by every per-edge array in the crate.

use std::collections::{HashMap, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
#[repr(transparent)]
pub struct NodeId(pub u32);

impl NodeId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl From<usize> for NodeId {
    fn from(i: usize) -> Self {
        NodeId(i as u32)
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// An undirected edge in canonical orientation (`u < v`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct EdgeRef {
    pub u: NodeId,
    pub v: NodeId,
}

impl EdgeRef {
    /// Canonicalizes the pair. Returns `None` for a self-loop.
    pub fn new(a: impl Into<NodeId>, b: impl Into<NodeId>) -> Option<EdgeRef> {
        let (a, b) = (a.into(), b.into());
        match a.cmp(&b) {
            std::cmp::Ordering::Less => Some(EdgeRef { u: a, v: b }),
            std::cmp::Ordering::Greater => Some(EdgeRef { u: b, v: a }),
            std::cmp::Ordering::Equal => None,
        }
    }

    pub fn endpoints(self) -> (NodeId, NodeId) {
        (self.u, self.v)
    }
}

impl From<(u32, u32)> for EdgeRef {
    /// Panics on a self-loop; intended for literals in tests and fixtures.
    fn from((a, b): (u32, u32)) -> Self {
        EdgeRef::new(NodeId(a), NodeId(b)).expect("self-loop edge literal")
    }
}

impl fmt::Display for EdgeRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.u, self.v)
    }
}

#[derive(Clone, Debug, Default)]
pub struct Graph {
    adjacency: Vec<Vec<NodeId>>,
    edges: Vec<EdgeRef>,
    labels: Vec<String>,
    label_index: HashMap<String, NodeId>,
}

impl PartialEq for Graph {
    fn eq(&self, other: &Self) -> bool {
        self.labels == other.labels && self.edges == other.edges
    }
}

impl Eq for Graph {}

impl Graph {
    pub fn new() -> Self {
        Self::default()
    }

    /// `n` isolated nodes labelled `"0"`, `"1"`, ...
    pub fn with_nodes(n: usize) -> Self {
        let mut g = Graph::new();
        for i in 0..n {
            g.add_node(i.to_string());
        }
        g
    }

    /// Builds a graph on `n` numerically labelled nodes. Duplicate pairs
    /// collapse; self-loops are rejected.
    pub fn from_edges<I, E>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = E>,
        E: Into<(u32, u32)>,
    {
        let mut g = Graph::with_nodes(n);
        let mut pending = Vec::new();
        for e in edges {
            let (a, b) = e.into();
            let (a, b) = (NodeId(a), NodeId(b));
            g.check_node(a)?;
            g.check_node(b)?;
            pending.push(EdgeRef::new(a, b).ok_or(Error::SelfLoop(a))?);
        }
        g.rebuild_from(pending);
        Ok(g)
    }

    /// Returns the id for `label`, creating a node if it is new.
    pub fn add_node(&mut self, label: impl Into<String>) -> NodeId {
        let label = label.into();
        if let Some(&id) = self.label_index.get(&label) {
            return id;
        }
        let id = NodeId(self.labels.len() as u32);
        self.label_index.insert(label.clone(), id);
        self.labels.push(label);
        self.adjacency.push(Vec::new());
        id
    }

    #[inline]
    pub fn node_count(&self) -> usize {
        self.adjacency.len()
    }

    #[inline]
    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    /// Canonical edges, sorted by `(u, v)`.
    #[inline]
    pub fn edges(&self) -> &[EdgeRef] {
        &self.edges
    }

    pub fn nodes(&self) -> impl Iterator<Item = NodeId> + '_ {
        (0..self.node_count()).map(NodeId::from)
    }

    #[inline]
    pub fn neighbors(&self, u: NodeId) -> &[NodeId] {
        &self.adjacency[u.index()]
    }

    #[inline]
    pub fn degree(&self, u: NodeId) -> usize {
        self.adjacency[u.index()].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adjacency.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn label(&self, u: NodeId) -> &str {
        &self.labels[u.index()]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn node_by_label(&self, label: &str) -> Option<NodeId> {
        self.label_index.get(label).copied()
    }

    pub fn has_edge(&self, a: NodeId, b: NodeId) -> bool {
        if a.index() >= self.node_count() || b.index() >= self.node_count() {
            return false;
        }
        // probe the shorter list
        let (x, y) = if self.degree(a) <= self.degree(b) { (a, b) } else { (b, a) };
        self.adjacency[x.index()].binary_search(&y).is_ok()
    }

    pub fn contains(&self, e: EdgeRef) -> bool {
        self.has_edge(e.u, e.v)
    }

    /// Position of `e` in [`Graph::edges`].
    pub fn edge_index(&self, e: EdgeRef) -> Option<usize> {
        self.edges.binary_search(&e).ok()
    }

    pub(crate) fn require_edge(&self, e: EdgeRef) -> Result<()> {
        if self.contains(e) {
            Ok(())
        } else {
            Err(Error::EdgeNotFound(e))
        }
    }

    fn check_node(&self, u: NodeId) -> Result<()> {
        if u.index() < self.node_count() {
            Ok(())
        } else {
            Err(Error::NodeOutOfRange(u, self.node_count()))
        }
    }

    /// Inserts `{a, b}`. Returns `false` and leaves the graph untouched if the
    /// edge already exists.
    pub fn add_edge(&mut self, a: NodeId, b: NodeId) -> Result<bool> {
        self.check_node(a)?;
        self.check_node(b)?;
        let e = EdgeRef::new(a, b).ok_or(Error::SelfLoop(a))?;
        let pos = match self.edges.binary_search(&e) {
            Ok(_) => return Ok(false),
            Err(pos) => pos,
        };
        self.edges.insert(pos, e);
        insert_sorted(&mut self.adjacency[e.u.index()], e.v);
        insert_sorted(&mut self.adjacency[e.v.index()], e.u);
        Ok(true)
    }

    /// Deletes `e`. Returns `false` if it was absent.
    pub fn remove_edge(&mut self, e: EdgeRef) -> bool {
        let Ok(pos) = self.edges.binary_search(&e) else {
            return false;
        };
        self.edges.remove(pos);
        remove_sorted(&mut self.adjacency[e.u.index()], e.v);
        remove_sorted(&mut self.adjacency[e.v.index()], e.u);
        true
    }

    /// Applies a batch of insertions and deletions with a single rebuild.
    /// Insertions of existing edges and deletions of missing edges are
    /// ignored. Returns `(added, removed)`.
    pub fn apply_edits(&mut self, additions: &[EdgeRef], removals: &[EdgeRef]) -> (usize, usize) {
        let mut next: Vec<EdgeRef> = self.edges.clone();
        let before = next.len();
        next.extend(additions.iter().copied().filter(|e| {
            e.v.index() < self.node_count()
        }));
        next.sort_unstable();
        next.dedup();
        let added = next.len() - before;
        let mut dropped: Vec<EdgeRef> = removals.to_vec();
        dropped.sort_unstable();
        dropped.dedup();
        let with_additions = next.len();
        next.retain(|e| dropped.binary_search(e).is_err());
        let removed = with_additions - next.len();
        self.rebuild_from(next);
        (added, removed)
    }

    fn rebuild_from(&mut self, mut edges: Vec<EdgeRef>) {
        edges.sort_unstable();
        edges.dedup();
        for list in &mut self.adjacency {
            list.clear();
        }
        for e in &edges {
            self.adjacency[e.u.index()].push(e.v);
            self.adjacency[e.v.index()].push(e.u);
        }
        for list in &mut self.adjacency {
            list.sort_unstable();
        }
        self.edges = edges;
    }

    /// FNV-1a over the node count and canonical edge list. Used to detect
    /// per-edge data computed against a different edge set.
    pub fn fingerprint(&self) -> u64 {
        const OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
        const PRIME: u64 = 0x0000_0100_0000_01b3;
        let mut h = OFFSET;
        let mut feed = |x: u32| {
            for b in x.to_le_bytes() {
                h ^= b as u64;
                h = h.wrapping_mul(PRIME);
            }
        };
        feed(self.node_count() as u32);
        for e in &self.edges {
            feed(e.u.0);
            feed(e.v.0);
        }
        h
    }

    pub fn is_regular(&self) -> Option<usize> {
        let d = self.adjacency.first()?.len();
        self.adjacency.iter().all(|a| a.len() == d).then_some(d)
    }

    /// Hop distances from `source`, `None` for unreachable nodes. Stops
    /// expanding past `max_depth` when given.
    pub fn bfs_distances(&self, source: NodeId, max_depth: Option<usize>) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.node_count()];
        let mut queue = VecDeque::new();
        dist[source.index()] = Some(0);
        queue.push_back(source);
        while let Some(x) = queue.pop_front() {
            let dx = dist[x.index()].unwrap();
            if max_depth.is_some_and(|cap| dx >= cap) {
                continue;
            }
            for &y in self.neighbors(x) {
                if dist[y.index()].is_none() {
                    dist[y.index()] = Some(dx + 1);
                    queue.push_back(y);
                }
            }
        }
        dist
    }

    pub fn connected_components(&self) -> usize {
        let mut seen = vec![false; self.node_count()];
        let mut count = 0;
        let mut stack = Vec::new();
        for s in 0..self.node_count() {
            if seen[s] {
                continue;
            }
            count += 1;
            seen[s] = true;
            stack.push(NodeId::from(s));
            while let Some(x) = stack.pop() {
                for &y in self.neighbors(x) {
                    if !seen[y.index()] {
                        seen[y.index()] = true;
                        stack.push(y);
                    }
                }
            }
        }
        count
    }

    /// Largest finite hop distance, or `None` if the graph is disconnected
    /// or has no nodes.
    pub fn diameter(&self) -> Option<usize> {
        if self.node_count() == 0 {
            return None;
        }
        let mut best = 0;
        for s in self.nodes() {
            for d in self.bfs_distances(s, None) {
                best = best.max(d?);
            }
        }
        Some(best)
    }
}

fn insert_sorted(list: &mut Vec<NodeId>, x: NodeId) {
    if let Err(pos) = list.binary_search(&x) {
        list.insert(pos, x);
    }
}

fn remove_sorted(list: &mut Vec<NodeId>, x: NodeId) {
    if let Ok(pos) = list.binary_search(&x) {
        list.remove(pos);
    }
}
