//! Graph representation, edge-list parsing and subnetwork views.

use std::borrow::Cow;
use std::fmt::Write as _;
use std::io::BufRead;

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

pub type NodeId = usize;
pub type EdgeId = usize;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Edge {
    pub tail: NodeId,
    pub head: NodeId,
    pub weight: f64,
}

/// A weighted graph with stable node ids `0..n` and edge ids `0..m`.
///
/// Undirected edges are stored once; the adjacency lists expose them from both
/// endpoints, so removing one edge id removes the whole link.
#[derive(Debug, Clone, PartialEq)]
pub struct Graph {
    n: usize,
    directed: bool,
    edges: Vec<Edge>,
    adjacency: Vec<Vec<(EdgeId, NodeId)>>,
}

impl Graph {
    /// Builds a graph from `(tail, head, weight)` triples numbered in order.
    pub fn new<I>(n: usize, directed: bool, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (NodeId, NodeId, f64)>,
    {
        let mut list = Vec::new();
        for (i, (u, v, w)) in edges.into_iter().enumerate() {
            for x in [u, v] {
                if x >= n {
                    return Err(Error::InvalidId { kind: "node", id: x, limit: n });
                }
            }
            if u == v {
                return Err(Error::SelfLoop { line: i + 1, node: u });
            }
            if !(w.is_finite() && w >= 0.0) {
                return Err(Error::BadWeight { line: i + 1, weight: w.to_string() });
            }
            list.push(Edge { tail: u, head: v, weight: w });
        }
        Ok(Self::from_checked(n, directed, list))
    }

    /// Unit-weight convenience constructor.
    pub fn unweighted<I>(n: usize, directed: bool, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (NodeId, NodeId)>,
    {
        Self::new(n, directed, edges.into_iter().map(|(u, v)| (u, v, 1.0)))
    }

    fn from_checked(n: usize, directed: bool, edges: Vec<Edge>) -> Self {
        let mut adjacency = vec![Vec::new(); n];
        for (id, e) in edges.iter().enumerate() {
            adjacency[e.tail].push((id, e.head));
            if !directed {
                adjacency[e.head].push((id, e.tail));
            }
        }
        Graph { n, directed, edges, adjacency }
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn is_directed(&self) -> bool {
        self.directed
    }

    pub fn edge(&self, id: EdgeId) -> &Edge {
        &self.edges[id]
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// Outgoing `(edge id, neighbour)` pairs; both directions for undirected graphs.
    pub fn out_edges(&self, v: NodeId) -> &[(EdgeId, NodeId)] {
        &self.adjacency[v]
    }

    /// All edge ids joining `u` to `v` (either orientation when undirected).
    pub fn find_edges(&self, u: NodeId, v: NodeId) -> Vec<EdgeId> {
        if u >= self.n {
            return Vec::new();
        }
        self.adjacency[u].iter().filter(|&&(_, w)| w == v).map(|&(e, _)| e).collect()
    }

    pub fn is_unit_weight(&self) -> bool {
        self.edges.iter().all(|e| e.weight == 1.0)
    }

    /// Stable 64-bit fingerprint of `(n, directed, edges)`; containers record it
    /// so an oracle is never queried against a different graph.
    pub fn digest(&self) -> u64 {
        let mut h = Sha256::new();
        h.update((self.n as u64).to_le_bytes());
        h.update([self.directed as u8]);
        for e in &self.edges {
            h.update((e.tail as u64).to_le_bytes());
            h.update((e.head as u64).to_le_bytes());
            h.update(e.weight.to_bits().to_le_bytes());
        }
        let out = h.finalize();
        u64::from_le_bytes(out[..8].try_into().expect("digest is 32 bytes"))
    }

    /// Renders the graph in the edge-list format accepted by [`parse_edge_list`].
    pub fn to_edge_list(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "# n={} m={} directed={}", self.n, self.edges.len(), self.directed);
        for e in &self.edges {
            let _ = writeln!(s, "{} {} {}", e.tail, e.head, e.weight);
        }
        s
    }
}

/// Parses the `u v [w]` edge-list format. `#` lines and blank lines are ignored;
/// LF and CRLF line endings are both accepted.
pub fn parse_edge_list<R: BufRead>(reader: R, directed: bool) -> Result<Graph> {
    let mut edges = Vec::new();
    let mut max_id: Option<usize> = None;
    for (idx, line) in reader.lines().enumerate() {
        let lineno = idx + 1;
        let line = line?;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if !(2..=3).contains(&fields.len()) {
            return Err(Error::Parse {
                line: lineno,
                msg: format!("expected \"u v\" or \"u v w\", got {} fields", fields.len()),
            });
        }
        let node = |s: &str| {
            s.parse::<usize>().map_err(|_| Error::Parse {
                line: lineno,
                msg: format!("bad node id {s:?}"),
            })
        };
        let u = node(fields[0])?;
        let v = node(fields[1])?;
        let w = match fields.get(2) {
            Some(s) => s.parse::<f64>().map_err(|_| Error::Parse {
                line: lineno,
                msg: format!("bad weight {s:?}"),
            })?,
            None => 1.0,
        };
        if u == v {
            return Err(Error::SelfLoop { line: lineno, node: u });
        }
        if !(w.is_finite() && w >= 0.0) {
            return Err(Error::BadWeight { line: lineno, weight: fields[2].to_string() });
        }
        max_id = Some(max_id.map_or(u.max(v), |m| m.max(u).max(v)));
        edges.push(Edge { tail: u, head: v, weight: w });
    }
    let n = max_id.map_or(0, |m| m + 1);
    Ok(Graph::from_checked(n, directed, edges))
}

pub fn parse_edge_list_str(text: &str, directed: bool) -> Result<Graph> {
    parse_edge_list(text.as_bytes(), directed)
}

/// A set of failed edges and nodes. Both lists are kept sorted and
/// duplicate-free.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct FailureSet {
    pub edges: Vec<EdgeId>,
    pub nodes: Vec<NodeId>,
}

impl FailureSet {
    pub fn new(mut edges: Vec<EdgeId>, mut nodes: Vec<NodeId>) -> Self {
        edges.sort_unstable();
        edges.dedup();
        nodes.sort_unstable();
        nodes.dedup();
        FailureSet { edges, nodes }
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn of_edges(edges: impl IntoIterator<Item = EdgeId>) -> Self {
        Self::new(edges.into_iter().collect(), Vec::new())
    }

    pub fn of_nodes(nodes: impl IntoIterator<Item = NodeId>) -> Self {
        Self::new(Vec::new(), nodes.into_iter().collect())
    }

    pub fn len(&self) -> usize {
        self.edges.len() + self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty() && self.nodes.is_empty()
    }

    /// Checks every id against `g`.
    pub fn validate(&self, g: &Graph) -> Result<()> {
        if let Some(&e) = self.edges.iter().find(|&&e| e >= g.edge_count()) {
            return Err(Error::InvalidId { kind: "edge", id: e, limit: g.edge_count() });
        }
        if let Some(&v) = self.nodes.iter().find(|&&v| v >= g.node_count()) {
            return Err(Error::InvalidId { kind: "node", id: v, limit: g.node_count() });
        }
        Ok(())
    }
}

/// Weight of a hop-bounded (or unbounded) shortest path plus the number of
/// edges on one witnessing path. Unreachable is the [`HopDistance::INFINITE`]
/// sentinel, never a large finite number.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HopDistance {
    pub value: f64,
    pub hops: Option<u32>,
}

impl HopDistance {
    pub const INFINITE: HopDistance = HopDistance { value: f64::INFINITY, hops: None };
    pub const ZERO: HopDistance = HopDistance { value: 0.0, hops: Some(0) };

    pub fn new(value: f64, hops: u32) -> Self {
        HopDistance { value, hops: Some(hops) }
    }

    pub fn is_finite(&self) -> bool {
        self.hops.is_some()
    }
}

/// `G` minus a set of removed edges and nodes, without copying `G`.
///
/// An edge is present iff its own bit is clear and neither endpoint is removed.
#[derive(Debug, Clone)]
pub struct SubnetworkView<'g> {
    base: &'g Graph,
    removed_edges: Cow<'g, FixedBitSet>,
    removed_nodes: Cow<'g, FixedBitSet>,
}

impl<'g> SubnetworkView<'g> {
    pub fn full(base: &'g Graph) -> Self {
        SubnetworkView {
            base,
            removed_edges: Cow::Owned(FixedBitSet::with_capacity(base.edge_count())),
            removed_nodes: Cow::Owned(FixedBitSet::with_capacity(base.node_count())),
        }
    }

    /// View with the given removal bit-vectors (borrowed, so tree leaves can be
    /// viewed without copying their sets).
    pub fn new(
        base: &'g Graph,
        removed_edges: Cow<'g, FixedBitSet>,
        removed_nodes: Cow<'g, FixedBitSet>,
    ) -> Self {
        debug_assert_eq!(removed_edges.len(), base.edge_count());
        debug_assert_eq!(removed_nodes.len(), base.node_count());
        SubnetworkView { base, removed_edges, removed_nodes }
    }

    /// `G − F`.
    pub fn without_failures(base: &'g Graph, failures: &FailureSet) -> Result<Self> {
        Self::full(base).minus(failures)
    }

    /// This view with `failures` additionally removed.
    pub fn minus(&self, failures: &FailureSet) -> Result<SubnetworkView<'g>> {
        failures.validate(self.base)?;
        let mut edges = self.removed_edges.clone().into_owned();
        let mut nodes = self.removed_nodes.clone().into_owned();
        for &e in &failures.edges {
            edges.insert(e);
        }
        for &v in &failures.nodes {
            nodes.insert(v);
        }
        Ok(SubnetworkView::new(self.base, Cow::Owned(edges), Cow::Owned(nodes)))
    }

    pub fn base(&self) -> &'g Graph {
        self.base
    }

    pub fn node_count(&self) -> usize {
        self.base.node_count()
    }

    pub fn removed_edges(&self) -> &FixedBitSet {
        &self.removed_edges
    }

    pub fn removed_nodes(&self) -> &FixedBitSet {
        &self.removed_nodes
    }

    #[inline]
    pub fn node_present(&self, v: NodeId) -> bool {
        !self.removed_nodes.contains(v)
    }

    #[inline]
    pub fn edge_present(&self, e: EdgeId) -> bool {
        if self.removed_edges.contains(e) {
            return false;
        }
        let edge = self.base.edge(e);
        self.node_present(edge.tail) && self.node_present(edge.head)
    }

    /// Present outgoing `(edge id, neighbour, weight)` triples of `v`.
    pub fn out_edges(&self, v: NodeId) -> impl Iterator<Item = (EdgeId, NodeId, f64)> + '_ {
        let alive = self.node_present(v);
        self.base
            .out_edges(v)
            .iter()
            .filter(move |&&(e, w)| alive && !self.removed_edges.contains(e) && self.node_present(w))
            .map(move |&(e, w)| (e, w, self.base.edge(e).weight))
    }

    /// Ids of all present edges in increasing order.
    pub fn present_edges(&self) -> impl Iterator<Item = EdgeId> + '_ {
        (0..self.base.edge_count()).filter(move |&e| self.edge_present(e))
    }

    pub fn present_edge_count(&self) -> usize {
        self.present_edges().count()
    }
}
