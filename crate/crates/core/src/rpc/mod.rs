//! `(L, f)`-replacement path coverings built from sampling trees.
//!
//! Each of the `K` trees has height `h` and branching `alpha`. The root removes
//! every element (edge or node, depending on [`FailureMode`]); a child keeps
//! each element of its parent's removed-set independently with probability
//! `p`. The subnetworks stored at the leaves form the covering. A query walks
//! every tree from the root, always stepping into the lowest-indexed child
//! whose removed-set contains the whole failure set, and collects the leaves
//! it reaches.
//!
//! # Container layout (`RPC1`)
//!
//! All integers little-endian.
//!
//! ```text
//! "RPC1"            4 bytes magic
//! version           u32 (= 1)
//! mode              u8  (0 = edges, 1 = nodes)
//! f, L, n           u32 × 3
//! c                 f64
//! h, K, alpha       u32 × 3
//! p                 f64
//! universe          u32  (m in edge mode, n in node mode)
//! seed              u64
//! graph digest      u64
//! K × { sub-seed u64, nodes_per_tree × bit-vector(universe) }
//! ```
//!
//! Nodes are in BFS order; see [`TreeShape`]. Bit-vectors use the layout from
//! [`crate::codec`].

mod baseline;
mod params;
mod tree;

use std::borrow::Cow;

use fixedbitset::FixedBitSet;
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

pub use baseline::{build_wy_baseline, wy_subnetwork_count, WyBaseline, WyQueryResult, DEFAULT_MAX_SUBNETWORKS};
pub use params::{compute_params, FailureMode, RpcParams, BOOST, DEFAULT_C};
pub(crate) use params::ceil_slack;
pub use tree::{SamplingTree, TreeShape};

use crate::codec::{Reader, Writer};
use crate::error::{Error, Result};
use crate::graph::{FailureSet, Graph, NodeId, SubnetworkView};
use crate::paths::{hop_bounded_distance, same_distance};
use crate::rng;

pub const RPC_MAGIC: &[u8; 4] = b"RPC1";
const RPC_VERSION: u32 = 1;

/// A leaf of one tree in a family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct LeafRef {
    pub tree: usize,
    pub node: usize,
}

/// Output of [`RpcFamily::query`]: the leaves forming `𝒢_F` plus work counters.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct QueryResult {
    pub leaves: Vec<LeafRef>,
    /// Child nodes whose removed-set was tested.
    pub nodes_touched: usize,
    pub trees_abandoned: usize,
}

/// Result of checking the covering property for one `(F, s, t)` triple.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum Coverage {
    Covered { leaf: LeafRef },
    NotCovered,
    /// `G − F` has no `s`-`t` path with at most `L` edges.
    NotApplicable,
}

impl Coverage {
    pub fn is_covered(&self) -> bool {
        matches!(self, Coverage::Covered { .. })
    }
}

/// The `K` sampling trees of a covering.
#[derive(Debug, Clone, PartialEq)]
pub struct RpcFamily {
    params: RpcParams,
    seed: u64,
    universe: usize,
    graph_digest: u64,
    sub_seeds: Vec<u64>,
    trees: Vec<SamplingTree>,
}

/// Builds the `K` trees. Tree `i` draws node `j` from the stream
/// `(seed, tree-tag, i) → j`, so the result is independent of scheduling.
pub fn build_family(g: &Graph, params: &RpcParams, seed: u64) -> Result<RpcFamily> {
    if params.n != g.node_count() {
        return Err(Error::InvalidParams(format!(
            "parameters computed for n = {}, graph has {} nodes",
            params.n,
            g.node_count()
        )));
    }
    let universe = match params.mode {
        FailureMode::Edges => g.edge_count(),
        FailureMode::Nodes => g.node_count(),
    };
    let shape = TreeShape::new(params.branching, params.height);
    let sub_seeds: Vec<u64> = (0..params.tree_count)
        .map(|i| rng::derive(seed, &[rng::tag::RPC_TREE, i as u64]))
        .collect();
    let trees = sub_seeds
        .par_iter()
        .map(|&sub| build_tree(shape, universe, params.keep_probability, sub))
        .collect();
    Ok(RpcFamily {
        params: params.clone(),
        seed,
        universe,
        graph_digest: g.digest(),
        sub_seeds,
        trees,
    })
}

fn build_tree(shape: TreeShape, universe: usize, keep: f64, sub_seed: u64) -> SamplingTree {
    let mut removed = Vec::with_capacity(shape.node_count());
    let mut root = FixedBitSet::with_capacity(universe);
    root.insert_range(..);
    removed.push(root);
    for node in 1..shape.node_count() {
        let parent = &removed[shape.parent(node).expect("non-root")];
        let mut stream = rng::stream(sub_seed, &[node as u64]);
        let mut set = FixedBitSet::with_capacity(universe);
        for e in parent.ones() {
            if stream.gen_bool(keep) {
                set.insert(e);
            }
        }
        removed.push(set);
    }
    SamplingTree { shape, removed }
}

impl RpcFamily {
    pub fn params(&self) -> &RpcParams {
        &self.params
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn trees(&self) -> &[SamplingTree] {
        &self.trees
    }

    pub fn sub_seeds(&self) -> &[u64] {
        &self.sub_seeds
    }

    /// Number of elements a removed-set ranges over (m or n).
    pub fn universe(&self) -> usize {
        self.universe
    }

    pub fn graph_digest(&self) -> u64 {
        self.graph_digest
    }

    pub fn shape(&self) -> TreeShape {
        TreeShape::new(self.params.branching, self.params.height)
    }

    pub fn removed_set(&self, leaf: LeafRef) -> &FixedBitSet {
        self.trees[leaf.tree].removed(leaf.node)
    }

    /// Every leaf of every tree, tree-major.
    pub fn all_leaves(&self) -> impl Iterator<Item = LeafRef> + '_ {
        let shape = self.shape();
        (0..self.trees.len())
            .flat_map(move |tree| (shape.first_leaf()..shape.node_count()).map(move |node| LeafRef { tree, node }))
    }

    /// Checks size, kind and ids of a failure set against this family.
    pub fn check_failures(&self, failures: &FailureSet) -> Result<()> {
        if failures.len() > self.params.f {
            return Err(Error::TooManyFailures { got: failures.len(), max: self.params.f });
        }
        let ids = match self.params.mode {
            FailureMode::Edges if !failures.nodes.is_empty() => {
                return Err(Error::FailureKind("edge-failure family cannot answer node failures".into()))
            }
            FailureMode::Nodes if !failures.edges.is_empty() => {
                return Err(Error::FailureKind("node-failure family cannot answer edge failures".into()))
            }
            FailureMode::Edges => &failures.edges,
            FailureMode::Nodes => &failures.nodes,
        };
        if let Some(&id) = ids.iter().find(|&&id| id >= self.universe) {
            let kind = if self.params.mode == FailureMode::Edges { "edge" } else { "node" };
            return Err(Error::InvalidId { kind, id, limit: self.universe });
        }
        Ok(())
    }

    fn failure_ids<'a>(&self, failures: &'a FailureSet) -> &'a [usize] {
        match self.params.mode {
            FailureMode::Edges => &failures.edges,
            FailureMode::Nodes => &failures.nodes,
        }
    }

    /// Leaves of all trees reached by the leftmost-first descent for `failures`.
    pub fn query(&self, failures: &FailureSet) -> Result<QueryResult> {
        self.check_failures(failures)?;
        let ids = self.failure_ids(failures);
        let shape = self.shape();
        let mut out = QueryResult { leaves: Vec::new(), nodes_touched: 0, trees_abandoned: 0 };
        'trees: for (t, tree) in self.trees.iter().enumerate() {
            let mut x = 0;
            while !shape.is_leaf(x) {
                let mut next = None;
                for y in shape.children(x) {
                    out.nodes_touched += 1;
                    let set = tree.removed(y);
                    if ids.iter().all(|&e| set.contains(e)) {
                        next = Some(y);
                        break;
                    }
                }
                match next {
                    Some(y) => x = y,
                    None => {
                        out.trees_abandoned += 1;
                        continue 'trees;
                    }
                }
            }
            out.leaves.push(LeafRef { tree: t, node: x });
        }
        Ok(out)
    }

    /// The subnetwork `G − A_leaf`, borrowing the leaf's removed-set.
    pub fn leaf_view<'a>(&'a self, g: &'a Graph, leaf: LeafRef) -> SubnetworkView<'a> {
        let set = self.removed_set(leaf);
        match self.params.mode {
            FailureMode::Edges => SubnetworkView::new(
                g,
                Cow::Borrowed(set),
                Cow::Owned(FixedBitSet::with_capacity(g.node_count())),
            ),
            FailureMode::Nodes => SubnetworkView::new(
                g,
                Cow::Owned(FixedBitSet::with_capacity(g.edge_count())),
                Cow::Borrowed(set),
            ),
        }
    }

    fn check_graph(&self, g: &Graph) -> Result<()> {
        let universe = match self.params.mode {
            FailureMode::Edges => g.edge_count(),
            FailureMode::Nodes => g.node_count(),
        };
        if g.node_count() != self.params.n || universe != self.universe {
            return Err(Error::InvalidParams("graph does not match the family".into()));
        }
        Ok(())
    }

    /// Whether some leaf of `𝒢_F` keeps an `s`-`t` path with at most `L` edges
    /// whose weight equals the `L`-hop distance in `G − F`.
    pub fn covers(&self, g: &Graph, failures: &FailureSet, s: NodeId, t: NodeId) -> Result<Coverage> {
        self.check_graph(g)?;
        let result = self.query(failures)?;
        if failures.nodes.contains(&s) || failures.nodes.contains(&t) {
            return Ok(Coverage::NotApplicable);
        }
        let damaged = SubnetworkView::without_failures(g, failures)?;
        let target = hop_bounded_distance(&damaged, s, t, self.params.max_hops)?;
        if !target.is_finite() {
            return Ok(Coverage::NotApplicable);
        }
        for &leaf in &result.leaves {
            let view = self.leaf_view(g, leaf);
            if !(view.node_present(s) && view.node_present(t)) {
                continue;
            }
            let d = hop_bounded_distance(&view, s, t, self.params.max_hops)?;
            if d.is_finite() && same_distance(d.value, target.value) {
                return Ok(Coverage::Covered { leaf });
            }
        }
        Ok(Coverage::NotCovered)
    }

    /// Serializes the family into the `RPC1` container.
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut w = Writer::new();
        self.encode(&mut w);
        w.finish()
    }

    pub(crate) fn encode(&self, w: &mut Writer) {
        let p = &self.params;
        w.bytes(RPC_MAGIC);
        w.u32(RPC_VERSION);
        w.u8(p.mode.code());
        w.len_u32(p.f);
        w.len_u32(p.max_hops);
        w.len_u32(p.n);
        w.f64(p.c);
        w.len_u32(p.height);
        w.len_u32(p.tree_count);
        w.len_u32(p.branching);
        w.f64(p.keep_probability);
        w.len_u32(self.universe);
        w.u64(self.seed);
        w.u64(self.graph_digest);
        for (tree, &sub) in self.trees.iter().zip(&self.sub_seeds) {
            w.u64(sub);
            for set in &tree.removed {
                w.bitset(set);
            }
        }
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        let mut r = Reader::new(bytes);
        let family = Self::decode(&mut r)?;
        r.expect_end()?;
        Ok(family)
    }

    pub(crate) fn decode(r: &mut Reader<'_>) -> Result<Self> {
        r.magic(RPC_MAGIC)?;
        let version = r.u32()?;
        if version != RPC_VERSION {
            return Err(Error::Format(format!("unsupported RPC1 version {version}")));
        }
        let mode = FailureMode::from_code(r.u8()?)?;
        let f = r.usize()?;
        let max_hops = r.usize()?;
        let n = r.usize()?;
        let c = r.f64()?;
        let height = r.usize()?;
        let tree_count = r.usize()?;
        let branching = r.usize()?;
        let keep_probability = r.f64()?;
        if branching < 2 || height == 0 || height > 64 {
            return Err(Error::Format("implausible tree shape".into()));
        }
        let params = RpcParams { f, max_hops, n, c, height, tree_count, branching, keep_probability, mode };
        let universe = r.usize()?;
        let seed = r.u64()?;
        let graph_digest = r.u64()?;
        let shape = TreeShape::new(branching, height);
        let mut sub_seeds = Vec::with_capacity(tree_count);
        let mut trees = Vec::with_capacity(tree_count);
        for _ in 0..tree_count {
            sub_seeds.push(r.u64()?);
            let removed = (0..shape.node_count()).map(|_| r.bitset(universe)).collect::<Result<Vec<_>>>()?;
            trees.push(SamplingTree { shape, removed });
        }
        Ok(RpcFamily { params, seed, universe, graph_digest, sub_seeds, trees })
    }

    /// JSON sidecar describing the container.
    pub fn sidecar(&self) -> serde_json::Value {
        serde_json::json!({
            "format": "RPC1",
            "version": RPC_VERSION,
            "params": self.params,
            "seed": self.seed,
            "graph_digest": format!("{:016x}", self.graph_digest),
            "counts": {
                "trees": self.trees.len(),
                "nodes_per_tree": self.params.nodes_per_tree(),
                "leaves_per_tree": self.params.leaves_per_tree(),
                "total_leaves": self.params.total_leaves(),
                "universe": self.universe,
                "bytes": self.params.family_bytes(self.universe) as u64,
            }
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators;

    fn family(g: &Graph, f: usize, l: usize, seed: u64) -> RpcFamily {
        let p = compute_params(f, l, g.node_count(), DEFAULT_C, FailureMode::Edges).unwrap();
        build_family(g, &p, seed).unwrap()
    }

    #[test]
    fn degenerate_keep_probabilities() {
        let g = generators::gnp(12, 0.4, 1, 3);
        let base = compute_params(1, 4, 12, 1.0, FailureMode::Edges).unwrap();
        let all = build_family(&g, &base.clone().with_keep_probability(1.0), 5).unwrap();
        for tree in all.trees() {
            for node in 0..tree.node_count() {
                assert_eq!(tree.removed(node).count_ones(..), g.edge_count());
            }
        }
        let none = build_family(&g, &base.with_keep_probability(0.0), 5).unwrap();
        for tree in none.trees() {
            for node in 1..tree.node_count() {
                assert_eq!(tree.removed(node).count_ones(..), 0);
            }
        }
    }

    #[test]
    fn empty_failure_set_reaches_leftmost_leaves() {
        let g = generators::gnp(20, 0.3, 1, 9);
        let fam = family(&g, 1, 8, 3);
        let r = fam.query(&FailureSet::empty()).unwrap();
        assert_eq!(r.leaves.len(), fam.params().tree_count);
        let first = fam.shape().first_leaf();
        assert!(r.leaves.iter().all(|l| l.node == first));
        assert_eq!(r.trees_abandoned, 0);
        assert_eq!(r.nodes_touched, fam.params().tree_count * fam.params().height);
    }

    #[test]
    fn abandoned_tree_when_no_child_keeps_the_failure() {
        let g = generators::gnp(30, 0.2, 1, 11);
        let fam = family(&g, 1, 8, 7);
        let shape = fam.shape();
        // find a (tree, edge) pair where no depth-1 child kept the edge
        let (tree, edge) = fam
            .trees()
            .iter()
            .enumerate()
            .find_map(|(t, tree)| {
                (0..g.edge_count())
                    .find(|&e| shape.children(0).all(|y| !tree.removed(y).contains(e)))
                    .map(|e| (t, e))
            })
            .expect("some tree drops some edge at every depth-1 child");
        let r = fam.query(&FailureSet::of_edges([edge])).unwrap();
        assert!(r.trees_abandoned >= 1);
        assert!(r.leaves.iter().all(|l| l.tree != tree));
    }

    #[test]
    fn rejects_bad_failure_sets() {
        let g = generators::cycle(6);
        let fam = family(&g, 1, 4, 1);
        assert!(matches!(fam.query(&FailureSet::of_edges([0, 1])), Err(Error::TooManyFailures { got: 2, max: 1 })));
        assert!(matches!(fam.query(&FailureSet::of_nodes([0])), Err(Error::FailureKind(_))));
        assert!(matches!(fam.query(&FailureSet::of_edges([6])), Err(Error::InvalidId { .. })));
        let p = compute_params(1, 4, 6, 4.0, FailureMode::Nodes).unwrap();
        let nodes = build_family(&g, &p, 1).unwrap();
        assert!(matches!(nodes.query(&FailureSet::of_edges([0])), Err(Error::FailureKind(_))));
        assert!(nodes.query(&FailureSet::of_nodes([3])).is_ok());
    }

    #[test]
    fn covers_trivial_cases() {
        let g = generators::path(6);
        let fam = family(&g, 1, 4, 2);
        assert!(fam.covers(&g, &FailureSet::empty(), 2, 2).unwrap().is_covered());
        // path cut in the middle: 0 and 5 are disconnected
        assert_eq!(fam.covers(&g, &FailureSet::of_edges([2]), 0, 5).unwrap(), Coverage::NotApplicable);
        // 0..5 needs 5 hops > L
        assert_eq!(fam.covers(&g, &FailureSet::empty(), 0, 5).unwrap(), Coverage::NotApplicable);
    }

    #[test]
    fn container_round_trip() {
        let g = generators::gnp(15, 0.3, 1, 4);
        let fam = family(&g, 2, 6, 99);
        let bytes = fam.to_bytes();
        assert_eq!(&bytes[..4], RPC_MAGIC);
        let back = RpcFamily::from_bytes(&bytes).unwrap();
        assert_eq!(back, fam);
        assert_eq!(back.to_bytes(), bytes);
        assert!(RpcFamily::from_bytes(&bytes[..bytes.len() - 1]).is_err());
    }

    #[test]
    fn parallel_build_is_reproducible() {
        let g = generators::gnp(25, 0.25, 1, 8);
        assert_eq!(family(&g, 1, 8, 42), family(&g, 1, 8, 42));
        assert_ne!(family(&g, 1, 8, 42).to_bytes(), family(&g, 1, 8, 43).to_bytes());
    }
}
