//! Fixed-parameter sensitivity oracles for `k`-paths and `k`-cliques.
//!
//! The trees have the same shape as the covering trees, but each node `y`
//! with parent `x` also carries a survivor set `S_y` and a boundary set
//! `B_y = S_x ∩ A_y` (the root uses `S_x = E`). To build `y`, a number of
//! rounds each sample `I ⊆ A_y`, run the exact finder on the edge set
//! `S_x \ I`, and collect what it returns; `S_y` is the union of the collected
//! motifs. Leaves keep the collected motifs themselves.
//!
//! A query walks each tree, stepping into the first child `y` with
//! `F ∩ S_x ⊆ B_y`, and at the leaf it reaches returns the first stored motif
//! that avoids `F`.
//!
//! Round counts use `max(1, ceil(4^f alpha^(h - depth) ln h))` for every node,
//! the root included (exponent `h`). Sampling probability for `I` is
//! `p^(h - depth) / 2`.
//!
//! # Container layout (`MTF1`)
//!
//! ```text
//! "MTF1"            4 bytes magic
//! version           u32 (= 1)
//! kind              u8  (0 = path, 1 = clique)
//! k, f, n           u32 × 3
//! c                 f64
//! h, K, alpha       u32 × 3
//! p                 f64
//! m                 u32
//! seed              u64
//! graph digest      u64
//! weights           m × u32
//! K × { sub-seed u64,
//!       nodes_per_tree × { rounds u32, A, B, S (bit-vectors over m),
//!                          leaves only: count u32,
//!                                       count × { multiplicity u32, budget × edge u32 } } }
//! ```

mod finder;

use std::borrow::Cow;
use std::collections::BTreeMap;

use fixedbitset::FixedBitSet;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use finder::{
    find_min_weight_motif, MotifKey, MotifKind, MotifSpec, TieBreakWeights, CLIQUE_MAX_K, CLIQUE_MAX_NODES,
    PATH_MAX_K, PATH_MAX_NODES,
};

use crate::codec::{Reader, Writer};
use crate::error::{Error, Result};
use crate::graph::{EdgeId, FailureSet, Graph, SubnetworkView};
use crate::rpc::{ceil_slack, TreeShape};
use crate::rng;

pub const MOTIF_MAGIC: &[u8; 4] = b"MTF1";
const MOTIF_VERSION: u32 = 1;

/// Upper bound on exact finder calls during one build.
pub const DEFAULT_MAX_FINDER_CALLS: u128 = 5_000_000;

/// Rounded parameters, computed from the edge budget `b` of the motif:
/// `h = max(1, ceil(sqrt(f ln(b/f))))`, `alpha = max(2, ceil((b/f)^(f/h)))`,
/// `p = (f/b)^(1/h)`, `K = ceil(c 8^h f ln n)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MotifParams {
    pub spec: MotifSpec,
    pub f: usize,
    pub n: usize,
    pub c: f64,
    #[serde(rename = "h")]
    pub height: usize,
    #[serde(rename = "K")]
    pub tree_count: usize,
    #[serde(rename = "alpha")]
    pub branching: usize,
    #[serde(rename = "p")]
    pub keep_probability: f64,
}

pub fn compute_motif_params(spec: MotifSpec, f: usize, n: usize, c: f64) -> Result<MotifParams> {
    if f < 1 {
        return Err(Error::InvalidParams("f must be at least 1".into()));
    }
    if n < 2 {
        return Err(Error::InvalidParams(format!("n must be at least 2, got {n}")));
    }
    if !(c.is_finite() && c > 0.0) {
        return Err(Error::InvalidParams(format!("c must be positive, got {c}")));
    }
    let b = spec.edge_budget();
    if b < 2 * f {
        return Err(Error::InvalidParams(format!("edge budget {b} must be at least 2f = {}", 2 * f)));
    }
    let ff = f as f64;
    let ratio = b as f64 / ff;
    let height = (ceil_slack((ff * ratio.ln()).sqrt()) as usize).max(1);
    let h = height as f64;
    let branching = (ceil_slack(ratio.powf(ff / h)) as usize).max(2);
    let keep_probability = ratio.powf(-1.0 / h);
    let tree_count = (ceil_slack(c * 8f64.powf(h) * ff * (n as f64).ln()) as usize).max(1);
    Ok(MotifParams { spec, f, n, c, height, tree_count, branching, keep_probability })
}

impl MotifParams {
    pub fn shape(&self) -> TreeShape {
        TreeShape::new(self.branching, self.height)
    }

    pub fn nodes_per_tree(&self) -> usize {
        self.shape().node_count()
    }

    pub fn work_bound(&self) -> usize {
        self.tree_count * self.branching * self.height
    }

    /// `max(1, ceil(4^f alpha^(h - depth) ln h))`.
    pub fn rounds_at(&self, depth: usize) -> usize {
        let h = self.height as f64;
        let raw = 4f64.powi(self.f as i32) * (self.branching as f64).powi((self.height - depth) as i32) * h.ln();
        (ceil_slack(raw) as usize).max(1)
    }

    /// Per-edge probability of the round sample `I` at `depth`.
    pub fn sample_probability(&self, depth: usize) -> f64 {
        self.keep_probability.powi((self.height - depth) as i32) / 2.0
    }

    /// Finder calls of a whole build.
    pub fn finder_calls(&self) -> u128 {
        let per_tree: u128 = (0..=self.height)
            .map(|r| (self.branching as u128).pow(r as u32) * self.rounds_at(r) as u128)
            .sum();
        per_tree * self.tree_count as u128
    }

    /// Notes about parameter choices outside the asymptotic regime.
    pub fn warnings(&self) -> Vec<String> {
        let b = self.spec.edge_budget();
        let mut out = Vec::new();
        if b < 4 * self.f {
            out.push(format!(
                "edge budget {b} is close to 2f = {}; the high-probability analysis assumes f much smaller than log k",
                2 * self.f
            ));
        }
        out
    }
}

/// One distinct motif in a leaf collection and how many rounds found it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StoredMotif {
    pub edges: Vec<EdgeId>,
    pub multiplicity: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MotifNode {
    removed: FixedBitSet,
    boundary: FixedBitSet,
    survivors: FixedBitSet,
    rounds: u32,
    collection: Option<Vec<StoredMotif>>,
}

impl MotifNode {
    /// `A_y`.
    pub fn removed(&self) -> &FixedBitSet {
        &self.removed
    }

    /// `B_y = S_parent ∩ A_y`.
    pub fn boundary(&self) -> &FixedBitSet {
        &self.boundary
    }

    /// `S_y`.
    pub fn survivors(&self) -> &FixedBitSet {
        &self.survivors
    }

    pub fn rounds(&self) -> usize {
        self.rounds as usize
    }

    /// Stored motifs; `Some` exactly at leaves.
    pub fn collection(&self) -> Option<&[StoredMotif]> {
        self.collection.as_deref()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MotifTree {
    nodes: Vec<MotifNode>,
}

impl MotifTree {
    pub fn node(&self, id: usize) -> &MotifNode {
        &self.nodes[id]
    }

    pub fn nodes(&self) -> &[MotifNode] {
        &self.nodes
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MotifOracle {
    params: MotifParams,
    seed: u64,
    graph_digest: u64,
    edge_count: usize,
    weights: TieBreakWeights,
    sub_seeds: Vec<u64>,
    trees: Vec<MotifTree>,
}

/// JSON query answer.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MotifAnswer {
    pub found: bool,
    pub edges: Option<Vec<EdgeId>>,
    pub tree: Option<usize>,
    pub leaf: Option<usize>,
    pub nodes_touched: usize,
    pub leaves_scanned: usize,
}

pub fn build_motif_oracle(g: &Graph, spec: MotifSpec, f: usize, c: f64, seed: u64) -> Result<MotifOracle> {
    let params = compute_motif_params(spec, f, g.node_count(), c)?;
    build_motif_oracle_with_params(g, &params, seed, DEFAULT_MAX_FINDER_CALLS)
}

/// Builds `K` trees. Tree `i` uses sub-seed `(seed, tree-tag, i)`; node `j`
/// draws `A_j` from `(sub, j, 0)` and round `q`'s sample from `(sub, j, 1 + q)`.
pub fn build_motif_oracle_with_params(
    g: &Graph,
    params: &MotifParams,
    seed: u64,
    max_finder_calls: u128,
) -> Result<MotifOracle> {
    params.spec.check_caps(g.node_count(), g.is_directed())?;
    if params.n != g.node_count() {
        return Err(Error::InvalidParams(format!(
            "parameters computed for n = {}, graph has {} nodes",
            params.n,
            g.node_count()
        )));
    }
    let calls = params.finder_calls();
    if calls > max_finder_calls {
        return Err(Error::CapExceeded { what: "motif finder calls", required: calls, allowed: max_finder_calls });
    }
    let weights = TieBreakWeights::random(g.edge_count(), seed);
    let sub_seeds: Vec<u64> = (0..params.tree_count)
        .map(|i| rng::derive(seed, &[rng::tag::MOTIF_TREE, i as u64]))
        .collect();
    let trees = sub_seeds
        .par_iter()
        .map(|&sub| build_tree(g, params, &weights, sub))
        .collect::<Result<Vec<_>>>()?;
    Ok(MotifOracle {
        params: params.clone(),
        seed,
        graph_digest: g.digest(),
        edge_count: g.edge_count(),
        weights,
        sub_seeds,
        trees,
    })
}

fn build_tree(g: &Graph, params: &MotifParams, weights: &TieBreakWeights, sub_seed: u64) -> Result<MotifTree> {
    let m = g.edge_count();
    let shape = params.shape();
    let mut everything = FixedBitSet::with_capacity(m);
    everything.insert_range(..);
    let no_nodes = FixedBitSet::with_capacity(g.node_count());
    let mut nodes: Vec<MotifNode> = Vec::with_capacity(shape.node_count());
    for j in 0..shape.node_count() {
        let depth = shape.depth(j);
        let (parent_removed, parent_survivors) = match shape.parent(j) {
            Some(x) => (&nodes[x].removed, &nodes[x].survivors),
            None => (&everything, &everything),
        };
        let removed = if j == 0 {
            everything.clone()
        } else {
            let mut stream = rng::stream(sub_seed, &[j as u64, 0]);
            let mut set = FixedBitSet::with_capacity(m);
            for e in parent_removed.ones() {
                if stream.gen_bool(params.keep_probability) {
                    set.insert(e);
                }
            }
            set
        };
        let mut boundary = parent_survivors.clone();
        boundary.intersect_with(&removed);

        let rounds = params.rounds_at(depth);
        let q = params.sample_probability(depth);
        let mut found: BTreeMap<Vec<EdgeId>, u32> = BTreeMap::new();
        for round in 0..rounds {
            let mut stream = rng::stream(sub_seed, &[j as u64, 1 + round as u64]);
            // view edge set S_x \ I, i.e. removed = complement(S_x) ∪ I
            let mut gone = parent_survivors.clone();
            gone.toggle_range(..);
            for e in removed.ones() {
                if stream.gen_bool(q) {
                    gone.insert(e);
                }
            }
            let view = SubnetworkView::new(g, Cow::Owned(gone), Cow::Borrowed(&no_nodes));
            if let Some(motif) = find_min_weight_motif(&view, params.spec, weights)? {
                *found.entry(motif).or_insert(0) += 1;
            }
        }
        let mut survivors = FixedBitSet::with_capacity(m);
        for motif in found.keys() {
            for &e in motif {
                survivors.insert(e);
            }
        }
        let collection = shape.is_leaf(j).then(|| {
            found.into_iter().map(|(edges, multiplicity)| StoredMotif { edges, multiplicity }).collect()
        });
        nodes.push(MotifNode { removed, boundary, survivors, rounds: rounds as u32, collection });
    }
    Ok(MotifTree { nodes })
}

fn failure_subset(failures: &[EdgeId], within: &FixedBitSet, of: &FixedBitSet) -> bool {
    failures.iter().filter(|&&e| within.contains(e)).all(|&e| of.contains(e))
}

impl MotifOracle {
    pub fn params(&self) -> &MotifParams {
        &self.params
    }

    pub fn spec(&self) -> MotifSpec {
        self.params.spec
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn graph_digest(&self) -> u64 {
        self.graph_digest
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn weights(&self) -> &TieBreakWeights {
        &self.weights
    }

    pub fn trees(&self) -> &[MotifTree] {
        &self.trees
    }

    pub fn sub_seeds(&self) -> &[u64] {
        &self.sub_seeds
    }

    pub fn shape(&self) -> TreeShape {
        self.params.shape()
    }

    pub fn check_graph(&self, g: &Graph) -> Result<()> {
        if g.digest() != self.graph_digest {
            return Err(Error::InvalidParams("graph does not match the one the oracle was built on".into()));
        }
        Ok(())
    }

    pub fn check_failures(&self, failures: &FailureSet) -> Result<()> {
        if !failures.nodes.is_empty() {
            return Err(Error::FailureKind("motif oracles support edge failures only".into()));
        }
        if failures.len() > self.params.f {
            return Err(Error::TooManyFailures { got: failures.len(), max: self.params.f });
        }
        if let Some(&e) = failures.edges.iter().find(|&&e| e >= self.edge_count) {
            return Err(Error::InvalidId { kind: "edge", id: e, limit: self.edge_count });
        }
        Ok(())
    }

    /// Node reached in `tree` by the descent for `failures`, with the number of
    /// child tests spent; `None` if the tree is abandoned.
    fn descend(&self, tree: &MotifTree, failures: &[EdgeId], touched: &mut usize) -> Option<usize> {
        let shape = self.shape();
        let mut x = 0;
        while !shape.is_leaf(x) {
            let s_x = &tree.nodes[x].survivors;
            let mut next = None;
            for y in shape.children(x) {
                *touched += 1;
                if failure_subset(failures, s_x, &tree.nodes[y].boundary) {
                    next = Some(y);
                    break;
                }
            }
            x = next?;
        }
        Some(x)
    }

    pub fn query(&self, failures: &FailureSet) -> Result<MotifAnswer> {
        self.check_failures(failures)?;
        let f = &failures.edges;
        let mut answer = MotifAnswer { found: false, edges: None, tree: None, leaf: None, nodes_touched: 0, leaves_scanned: 0 };
        for (t, tree) in self.trees.iter().enumerate() {
            let Some(leaf) = self.descend(tree, f, &mut answer.nodes_touched) else {
                continue;
            };
            answer.leaves_scanned += 1;
            let stored = tree.nodes[leaf].collection.as_deref().unwrap_or_default();
            if let Some(hit) = stored.iter().find(|m| m.edges.iter().all(|e| f.binary_search(e).is_err())) {
                answer.found = true;
                answer.edges = Some(hit.edges.clone());
                answer.tree = Some(t);
                answer.leaf = Some(leaf);
                return Ok(answer);
            }
        }
        Ok(answer)
    }

    /// The audit target: the minimum-weight motif of `G − F`.
    pub fn audit_target(&self, g: &Graph, failures: &FailureSet) -> Result<Option<Vec<EdgeId>>> {
        self.check_graph(g)?;
        let view = SubnetworkView::without_failures(g, failures)?;
        find_min_weight_motif(&view, self.params.spec, &self.weights)
    }

    /// Evaluates the well-behaved conditions along each tree's descent for
    /// `failures` against `target`.
    pub fn well_behaved_audit(&self, failures: &FailureSet, target: Option<&[EdgeId]>) -> Result<AuditReport> {
        self.check_failures(failures)?;
        let f = &failures.edges;
        let shape = self.shape();
        let budget = self.params.spec.edge_budget() as f64;
        let mut trees = Vec::with_capacity(self.trees.len());
        for tree in &self.trees {
            let mut steps = Vec::with_capacity(shape.height + 1);
            let mut x = 0;
            let mut everything = FixedBitSet::with_capacity(self.edge_count);
            everything.insert_range(..);
            let reached_leaf = loop {
                let node = &tree.nodes[x];
                let depth = shape.depth(x);
                let parent_survivors = match shape.parent(x) {
                    Some(px) => &tree.nodes[px].survivors,
                    None => &everything,
                };
                let p1 = failure_subset(f, parent_survivors, &node.removed);
                let (p2, p3) = match target {
                    None => (None, None),
                    Some(t) => {
                        let inside = t.iter().filter(|&&e| node.removed.contains(e)).count() as f64;
                        let p2 = inside <= self.params.keep_probability.powi(depth as i32) * budget + 1e-9;
                        let p3 = match &node.collection {
                            Some(c) => c.iter().any(|m| m.edges == t),
                            None => t.iter().all(|&e| node.survivors.contains(e)),
                        };
                        (Some(p2), Some(p3))
                    }
                };
                steps.push(AuditStep { node: x, depth, p1, p2, p3 });
                if shape.is_leaf(x) {
                    break true;
                }
                let mut next = None;
                for y in shape.children(x) {
                    if failure_subset(f, &node.survivors, &tree.nodes[y].boundary) {
                        next = Some(y);
                        break;
                    }
                }
                match next {
                    Some(y) => x = y,
                    None => break false,
                }
            };
            trees.push(TreeAudit { steps, reached_leaf });
        }
        Ok(AuditReport { target: target.map(<[EdgeId]>::to_vec), trees })
    }

    /// Whether `F ∩ S_x ⊆ B_y` and `F ∩ S_x ⊆ A_y` agree on every edge of every tree.
    pub fn descent_tests_agree(&self, failures: &[EdgeId]) -> bool {
        let shape = self.shape();
        self.trees.iter().all(|tree| {
            (1..shape.node_count()).all(|y| {
                let x = shape.parent(y).expect("non-root");
                let s_x = &tree.nodes[x].survivors;
                failure_subset(failures, s_x, &tree.nodes[y].boundary) == failure_subset(failures, s_x, &tree.nodes[y].removed)
            })
        })
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut w = Writer::new();
        let p = &self.params;
        w.bytes(MOTIF_MAGIC);
        w.u32(MOTIF_VERSION);
        w.u8(match p.spec.kind {
            MotifKind::Path => 0,
            MotifKind::Clique => 1,
        });
        w.len_u32(p.spec.k);
        w.len_u32(p.f);
        w.len_u32(p.n);
        w.f64(p.c);
        w.len_u32(p.height);
        w.len_u32(p.tree_count);
        w.len_u32(p.branching);
        w.f64(p.keep_probability);
        w.len_u32(self.edge_count);
        w.u64(self.seed);
        w.u64(self.graph_digest);
        for &wt in self.weights.as_slice() {
            w.u32(wt);
        }
        for (tree, &sub) in self.trees.iter().zip(&self.sub_seeds) {
            w.u64(sub);
            for node in &tree.nodes {
                w.u32(node.rounds);
                w.bitset(&node.removed);
                w.bitset(&node.boundary);
                w.bitset(&node.survivors);
                if let Some(c) = &node.collection {
                    w.len_u32(c.len());
                    for m in c {
                        w.u32(m.multiplicity);
                        for &e in &m.edges {
                            w.len_u32(e);
                        }
                    }
                }
            }
        }
        w.finish()
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        let mut r = Reader::new(bytes);
        r.magic(MOTIF_MAGIC)?;
        let version = r.u32()?;
        if version != MOTIF_VERSION {
            return Err(Error::Format(format!("unsupported MTF1 version {version}")));
        }
        let kind = match r.u8()? {
            0 => MotifKind::Path,
            1 => MotifKind::Clique,
            other => return Err(Error::Format(format!("unknown motif kind {other}"))),
        };
        let spec = MotifSpec::new(kind, r.usize()?).map_err(|e| Error::Format(e.to_string()))?;
        let f = r.usize()?;
        let n = r.usize()?;
        let c = r.f64()?;
        let height = r.usize()?;
        let tree_count = r.usize()?;
        let branching = r.usize()?;
        let keep_probability = r.f64()?;
        if branching < 2 || height == 0 || height > 64 {
            return Err(Error::Format("implausible tree shape".into()));
        }
        let params = MotifParams { spec, f, n, c, height, tree_count, branching, keep_probability };
        let m = r.usize()?;
        let seed = r.u64()?;
        let graph_digest = r.u64()?;
        let weights = (0..m).map(|_| r.u32()).collect::<Result<Vec<_>>>()?;
        let weights = TieBreakWeights::from_vec(weights).map_err(|e| Error::Format(e.to_string()))?;
        let shape = params.shape();
        let budget = spec.edge_budget();
        let mut sub_seeds = Vec::with_capacity(tree_count);
        let mut trees = Vec::with_capacity(tree_count);
        for _ in 0..tree_count {
            sub_seeds.push(r.u64()?);
            let mut nodes = Vec::with_capacity(shape.node_count());
            for j in 0..shape.node_count() {
                let rounds = r.u32()?;
                let removed = r.bitset(m)?;
                let boundary = r.bitset(m)?;
                let survivors = r.bitset(m)?;
                let collection = if shape.is_leaf(j) {
                    let count = r.usize()?;
                    let mut c = Vec::with_capacity(count.min(1 << 16));
                    for _ in 0..count {
                        let multiplicity = r.u32()?;
                        let edges = (0..budget).map(|_| r.usize()).collect::<Result<Vec<_>>>()?;
                        if edges.iter().any(|&e| e >= m) {
                            return Err(Error::Format("stored motif edge out of range".into()));
                        }
                        c.push(StoredMotif { edges, multiplicity });
                    }
                    Some(c)
                } else {
                    None
                };
                nodes.push(MotifNode { removed, boundary, survivors, rounds, collection });
            }
            trees.push(MotifTree { nodes });
        }
        r.expect_end()?;
        Ok(MotifOracle { params, seed, graph_digest, edge_count: m, weights, sub_seeds, trees })
    }

    pub fn sidecar(&self) -> serde_json::Value {
        let shape = self.shape();
        let rounds: Vec<usize> = (0..=shape.height).map(|r| self.params.rounds_at(r)).collect();
        let stored: usize = self
            .trees
            .iter()
            .flat_map(|t| t.nodes.iter())
            .filter_map(|n| n.collection.as_ref().map(Vec::len))
            .sum();
        serde_json::json!({
            "format": "MTF1",
            "version": MOTIF_VERSION,
            "params": self.params,
            "edge_budget": self.params.spec.edge_budget(),
            "seed": self.seed,
            "graph_digest": format!("{:016x}", self.graph_digest),
            "counts": {
                "trees": self.trees.len(),
                "nodes_per_tree": shape.node_count(),
                "leaves_per_tree": shape.leaf_count(),
                "rounds_by_depth": rounds,
                "finder_calls": self.params.finder_calls() as u64,
                "stored_motifs": stored,
            },
            "warnings": self.params.warnings(),
        })
    }
}

/// Conditions at one node of a descent. `p2` and `p3` are `None` without a
/// target. At internal nodes `p3` checks `E(P) ⊆ S_y`, as collections are only
/// kept at leaves.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AuditStep {
    pub node: usize,
    pub depth: usize,
    pub p1: bool,
    pub p2: Option<bool>,
    pub p3: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TreeAudit {
    pub steps: Vec<AuditStep>,
    pub reached_leaf: bool,
}

impl TreeAudit {
    /// Every visited node satisfies P1 to P3 and the walk ends at a leaf.
    pub fn well_behaved(&self) -> bool {
        self.reached_leaf && self.steps.iter().all(|s| s.p1 && s.p2 != Some(false) && s.p3 != Some(false))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AuditReport {
    /// `None` reports "no target": `G − F` has no motif.
    pub target: Option<Vec<EdgeId>>,
    pub trees: Vec<TreeAudit>,
}
