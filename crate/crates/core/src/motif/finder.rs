//! Exact minimum-weight motif search at desk scale.
//!
//! Motifs are compared by `(weight sum, ascending weight vector)`. Edge weights
//! are distinct, so distinct edge sets have distinct weight vectors and the
//! order is total. Since it depends only on the edge set, the minimum over a
//! view is still the minimum over any sub-view that contains it.

use std::cmp::Ordering;

use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{EdgeId, NodeId, SubnetworkView};
use crate::rng;

pub const PATH_MAX_NODES: usize = 64;
pub const PATH_MAX_K: usize = 10;
pub const CLIQUE_MAX_NODES: usize = 40;
pub const CLIQUE_MAX_K: usize = 6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MotifKind {
    /// Simple path with `k` edges.
    Path,
    /// Clique on `k` nodes.
    Clique,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MotifSpec {
    pub kind: MotifKind,
    pub k: usize,
}

impl MotifSpec {
    pub fn new(kind: MotifKind, k: usize) -> Result<Self> {
        if k < 2 {
            return Err(Error::InvalidParams(format!("motif size k must be at least 2, got {k}")));
        }
        Ok(MotifSpec { kind, k })
    }

    pub fn path(k: usize) -> Result<Self> {
        Self::new(MotifKind::Path, k)
    }

    pub fn clique(k: usize) -> Result<Self> {
        Self::new(MotifKind::Clique, k)
    }

    /// Number of edges of one instance.
    pub fn edge_budget(&self) -> usize {
        match self.kind {
            MotifKind::Path => self.k,
            MotifKind::Clique => self.k * (self.k - 1) / 2,
        }
    }

    /// Rejects instances beyond the exhaustive finder's reach.
    pub fn check_caps(&self, n: usize, directed: bool) -> Result<()> {
        let (max_n, max_k) = match self.kind {
            MotifKind::Path => (PATH_MAX_NODES, PATH_MAX_K),
            MotifKind::Clique => (CLIQUE_MAX_NODES, CLIQUE_MAX_K),
        };
        if n > max_n {
            return Err(Error::CapExceeded { what: "motif finder nodes", required: n as u128, allowed: max_n as u128 });
        }
        if self.k > max_k {
            return Err(Error::CapExceeded { what: "motif size k", required: self.k as u128, allowed: max_k as u128 });
        }
        if directed && self.kind == MotifKind::Clique {
            return Err(Error::InvalidParams("cliques are defined on undirected graphs".into()));
        }
        Ok(())
    }
}

/// Distinct tie-breaking weights: a permutation of `1..=m` over edge ids.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TieBreakWeights {
    weights: Vec<u32>,
}

impl TieBreakWeights {
    /// Uniformly random permutation drawn from `seed`.
    pub fn random(m: usize, seed: u64) -> Self {
        let mut weights: Vec<u32> = (1..=m as u32).collect();
        weights.shuffle(&mut rng::stream(seed, &[rng::tag::MOTIF_WEIGHTS]));
        TieBreakWeights { weights }
    }

    /// `weights[e]` is the weight of edge `e`; must be a permutation of `1..=m`.
    pub fn from_vec(weights: Vec<u32>) -> Result<Self> {
        let mut seen = vec![false; weights.len() + 1];
        for &w in &weights {
            let w = w as usize;
            if w == 0 || w > weights.len() || seen[w] {
                return Err(Error::InvalidParams("tie-break weights must be a permutation of 1..=m".into()));
            }
            seen[w] = true;
        }
        Ok(TieBreakWeights { weights })
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn get(&self, e: EdgeId) -> u32 {
        self.weights[e]
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.weights
    }

    /// Ordering key of an edge set.
    pub fn key(&self, edges: &[EdgeId]) -> MotifKey {
        let mut ws: Vec<u32> = edges.iter().map(|&e| self.weights[e]).collect();
        ws.sort_unstable();
        MotifKey { sum: ws.iter().map(|&w| w as u64).sum(), sorted: ws }
    }
}

/// Total order on motifs: weight sum, then ascending weight vector.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct MotifKey {
    sum: u64,
    sorted: Vec<u32>,
}

impl MotifKey {
    pub fn sum(&self) -> u64 {
        self.sum
    }
}

/// The minimum instance of `spec` in `view`, as a sorted list of edge ids.
pub fn find_min_weight_motif(
    view: &SubnetworkView<'_>,
    spec: MotifSpec,
    weights: &TieBreakWeights,
) -> Result<Option<Vec<EdgeId>>> {
    let g = view.base();
    spec.check_caps(g.node_count(), g.is_directed())?;
    if weights.len() != g.edge_count() {
        return Err(Error::InvalidParams("tie-break weights do not match the graph".into()));
    }
    let budget = spec.edge_budget();
    let present: Vec<EdgeId> = view.present_edges().collect();
    if present.len() < budget {
        return Ok(None);
    }
    let mut best = match spec.kind {
        MotifKind::Path => PathSearch::run(view, spec.k, weights, &present),
        MotifKind::Clique => clique_search(view, spec.k, weights),
    };
    if let Some(edges) = best.as_mut() {
        edges.sort_unstable();
    }
    Ok(best)
}

struct PathSearch<'a, 'g> {
    view: &'a SubnetworkView<'g>,
    k: usize,
    weights: &'a TieBreakWeights,
    /// `cheapest[r]`: sum of the `r` smallest weights present; a lower bound on
    /// the weight of any `r` remaining edges.
    cheapest: Vec<u64>,
    stack: Vec<EdgeId>,
    visited: u64,
    best: Option<(MotifKey, Vec<EdgeId>)>,
}

impl<'a, 'g> PathSearch<'a, 'g> {
    fn run(view: &'a SubnetworkView<'g>, k: usize, weights: &'a TieBreakWeights, present: &[EdgeId]) -> Option<Vec<EdgeId>> {
        let mut ws: Vec<u64> = present.iter().map(|&e| weights.get(e) as u64).collect();
        ws.sort_unstable();
        let mut cheapest = vec![0u64; k + 1];
        for r in 1..=k {
            cheapest[r] = cheapest[r - 1] + ws[r - 1];
        }
        let mut search = PathSearch { view, k, weights, cheapest, stack: Vec::with_capacity(k), visited: 0, best: None };
        for s in 0..view.node_count() {
            if view.node_present(s) {
                search.visited = 1 << s;
                search.extend(s, 0);
            }
        }
        search.best.map(|(_, edges)| edges)
    }

    fn extend(&mut self, at: NodeId, partial: u64) {
        let depth = self.stack.len();
        if depth == self.k {
            let key = self.weights.key(&self.stack);
            if self.best.as_ref().is_none_or(|(b, _)| key.cmp(b) == Ordering::Less) {
                self.best = Some((key, self.stack.clone()));
            }
            return;
        }
        if let Some((b, _)) = &self.best {
            if partial + self.cheapest[self.k - depth] > b.sum {
                return;
            }
        }
        let next: Vec<(EdgeId, NodeId)> = self.view.out_edges(at).map(|(e, v, _)| (e, v)).collect();
        for (e, v) in next {
            if self.visited & (1 << v) != 0 {
                continue;
            }
            self.visited |= 1 << v;
            self.stack.push(e);
            self.extend(v, partial + self.weights.get(e) as u64);
            self.stack.pop();
            self.visited &= !(1 << v);
        }
    }
}

fn clique_search(view: &SubnetworkView<'_>, k: usize, weights: &TieBreakWeights) -> Option<Vec<EdgeId>> {
    let n = view.node_count();
    // lightest present edge between each pair
    let mut pair = vec![None::<(EdgeId, u32)>; n * n];
    let mut adj = vec![0u64; n];
    for e in view.present_edges() {
        let edge = view.base().edge(e);
        let w = weights.get(e);
        for (a, b) in [(edge.tail, edge.head), (edge.head, edge.tail)] {
            let slot = &mut pair[a * n + b];
            if slot.is_none_or(|(_, cur)| w < cur) {
                *slot = Some((e, w));
            }
            adj[a] |= 1 << b;
        }
    }
    let mut best: Option<(MotifKey, Vec<EdgeId>)> = None;
    let mut chosen = Vec::with_capacity(k);
    grow_clique(&adj, &pair, n, k, weights, !0u64 >> (64 - n.max(1)), 0, &mut chosen, &mut best);
    best.map(|(_, edges)| edges)
}

#[allow(clippy::too_many_arguments)]
fn grow_clique(
    adj: &[u64],
    pair: &[Option<(EdgeId, u32)>],
    n: usize,
    k: usize,
    weights: &TieBreakWeights,
    candidates: u64,
    partial: u64,
    chosen: &mut Vec<NodeId>,
    best: &mut Option<(MotifKey, Vec<EdgeId>)>,
) {
    if chosen.len() == k {
        let mut edges = Vec::with_capacity(k * (k - 1) / 2);
        for (i, &a) in chosen.iter().enumerate() {
            for &b in &chosen[i + 1..] {
                edges.push(pair[a * n + b].expect("clique pair is adjacent").0);
            }
        }
        let key = weights.key(&edges);
        if best.as_ref().is_none_or(|(b, _)| key < *b) {
            *best = Some((key, edges));
        }
        return;
    }
    if (candidates.count_ones() as usize) < k - chosen.len() {
        return;
    }
    if let Some((b, _)) = best {
        if partial > b.sum {
            return;
        }
    }
    let mut rest = candidates;
    while rest != 0 {
        let v = rest.trailing_zeros() as usize;
        rest &= rest - 1;
        let added: u64 = chosen.iter().map(|&u| pair[u * n + v].expect("adjacent").1 as u64).sum();
        chosen.push(v);
        // only higher-numbered nodes, so each clique is visited once
        grow_clique(adj, pair, n, k, weights, rest & adj[v], partial + added, chosen, best);
        chosen.pop();
    }
}
