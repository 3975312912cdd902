//! `L`-hop distance sensitivity oracle.
//!
//! Every leaf subnetwork of a sampling-tree covering gets a hop-bounded
//! all-pairs table. A query collects `𝒢_F` with the tree walk and returns the
//! minimum of the stored `(s, t)` entries. The answer is never below the true
//! distance in `G − F` (each leaf is a subgraph of `G − F`), and equals it
//! w.h.p. whenever `G − F` has a shortest `s`-`t` path with at most `L` edges.
//!
//! # Container layout (`RPC1` + `TBL1`)
//!
//! The family's `RPC1` container (see [`crate::rpc`]) followed by
//!
//! ```text
//! "TBL1"     4 bytes
//! n          u32
//! count      u32  (= K · alpha^h, tree-major leaf order)
//! count × { n² × f64 value, n² × u32 hops (u32::MAX = unreachable) }
//! ```

use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::codec::{Reader, Writer};
use crate::error::{Error, Result};
use crate::graph::{EdgeId, FailureSet, Graph, HopDistance, NodeId};
use crate::paths::{all_pairs_hop_bounded, diameter, hop_bounded_path};
use crate::rpc::{build_family, compute_params, FailureMode, LeafRef, RpcFamily, RpcParams};

pub use crate::paths::DistanceTable;

pub const TABLE_MAGIC: &[u8; 4] = b"TBL1";
pub const DEFAULT_MAX_BYTES: u128 = 1 << 30;

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct DsoBuildStats {
    pub build_ms: u64,
    pub leaf_tables: usize,
    pub table_bytes: u64,
    /// Diameter used to pick `L`, for bounded-diameter oracles.
    pub diameter: Option<usize>,
    pub warnings: Vec<String>,
}

/// Answer to one distance query.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DsoAnswer {
    pub distance: HopDistance,
    /// Leaf whose table produced the minimum.
    pub witness_leaf: Option<LeafRef>,
    pub leaves_scanned: usize,
    pub nodes_touched: usize,
    /// `𝒢_F` was empty, so the infinite answer is a covering miss rather than
    /// a disconnection.
    pub covering_empty: bool,
}

#[derive(Debug, Clone)]
pub struct HopDso {
    family: RpcFamily,
    tables: Vec<DistanceTable>,
    stats: DsoBuildStats,
}

impl PartialEq for HopDso {
    fn eq(&self, other: &Self) -> bool {
        self.family == other.family && self.tables == other.tables
    }
}

/// Edge-failure oracle with parameters from [`compute_params`].
pub fn build_dso(g: &Graph, f: usize, max_hops: usize, c: f64, seed: u64, max_bytes: u128) -> Result<HopDso> {
    let params = compute_params(f, max_hops, g.node_count(), c, FailureMode::Edges)?;
    build_dso_with_params(g, &params, seed, max_bytes)
}

/// Oracle over a family with explicit parameters (either failure mode).
pub fn build_dso_with_params(g: &Graph, params: &RpcParams, seed: u64, max_bytes: u128) -> Result<HopDso> {
    let n = g.node_count();
    let required = params.total_leaves() as u128 * DistanceTable::bytes_for(n);
    if required > max_bytes {
        return Err(Error::CapExceeded { what: "distance tables", required, allowed: max_bytes });
    }
    let start = Instant::now();
    let mut warnings = Vec::new();
    if params.max_hops >= n {
        let msg = format!("L = {} >= n = {n}: leaf tables degenerate to unbounded APSP", params.max_hops);
        log::warn!("{msg}");
        warnings.push(msg);
    }
    let family = build_family(g, params, seed)?;
    let leaves: Vec<LeafRef> = family.all_leaves().collect();
    let tables = leaves
        .par_iter()
        .map(|&leaf| all_pairs_hop_bounded(&family.leaf_view(g, leaf), params.max_hops))
        .collect::<Vec<_>>();
    let stats = DsoBuildStats {
        build_ms: start.elapsed().as_millis() as u64,
        leaf_tables: tables.len(),
        table_bytes: required as u64,
        diameter: None,
        warnings,
    };
    Ok(HopDso { family, tables, stats })
}

/// General (hop-unbounded) oracle for a connected, undirected, unweighted
/// graph of diameter `D`: any `G − F` that stays connected has diameter at most
/// `(f + 1) · D`, so that is the hop cutoff.
pub fn build_bounded_diameter_dso(g: &Graph, f: usize, c: f64, seed: u64, max_bytes: u128) -> Result<HopDso> {
    if g.is_directed() {
        return Err(Error::InvalidParams("bounded-diameter oracle needs an undirected graph".into()));
    }
    if !g.is_unit_weight() {
        return Err(Error::InvalidParams("bounded-diameter oracle needs unit weights".into()));
    }
    let d = diameter(g)?;
    let max_hops = (f + 1) * d;
    let mut dso = build_dso(g, f, max_hops, c, seed, max_bytes)?;
    dso.stats.diameter = Some(d);
    Ok(dso)
}

/// Hop cutoff `(f + 1) · D` used by [`build_bounded_diameter_dso`].
pub fn bounded_diameter_cutoff(g: &Graph, f: usize) -> Result<usize> {
    Ok((f + 1) * diameter(g)?)
}

impl HopDso {
    pub fn family(&self) -> &RpcFamily {
        &self.family
    }

    pub fn params(&self) -> &RpcParams {
        self.family.params()
    }

    pub fn stats(&self) -> &DsoBuildStats {
        &self.stats
    }

    pub fn tables(&self) -> &[DistanceTable] {
        &self.tables
    }

    pub fn node_count(&self) -> usize {
        self.params().n
    }

    fn leaf_index(&self, leaf: LeafRef) -> usize {
        let shape = self.family.shape();
        leaf.tree * shape.leaf_count() + (leaf.node - shape.first_leaf())
    }

    pub fn table(&self, leaf: LeafRef) -> &DistanceTable {
        &self.tables[self.leaf_index(leaf)]
    }

    fn check_pair(&self, s: NodeId, t: NodeId, failures: &FailureSet) -> Result<()> {
        let n = self.node_count();
        for v in [s, t] {
            if v >= n {
                return Err(Error::InvalidId { kind: "node", id: v, limit: n });
            }
            if failures.nodes.contains(&v) {
                return Err(Error::InvalidParams(format!("query endpoint {v} is in the failure set")));
            }
        }
        Ok(())
    }

    /// Minimum stored `(s, t)` distance over the leaves of `𝒢_F`.
    pub fn query(&self, s: NodeId, t: NodeId, failures: &FailureSet) -> Result<DsoAnswer> {
        self.check_pair(s, t, failures)?;
        let result = self.family.query(failures)?;
        let mut answer = self.min_over(s, t, &result.leaves);
        answer.nodes_touched = result.nodes_touched;
        Ok(answer)
    }

    /// Minimum stored `(s, t)` entry over an explicit set of leaves.
    pub fn min_over(&self, s: NodeId, t: NodeId, leaves: &[LeafRef]) -> DsoAnswer {
        let mut best = HopDistance::INFINITE;
        let mut witness = None;
        for &leaf in leaves {
            let d = self.table(leaf).get(s, t);
            if d.value < best.value {
                best = d;
                witness = Some(leaf);
            }
        }
        DsoAnswer {
            distance: best,
            witness_leaf: witness,
            leaves_scanned: leaves.len(),
            nodes_touched: 0,
            covering_empty: leaves.is_empty(),
        }
    }

    /// Edge ids of a path realizing the query answer, recomputed inside the
    /// witnessing leaf.
    pub fn witness_path(&self, g: &Graph, s: NodeId, t: NodeId, failures: &FailureSet) -> Result<Option<Vec<EdgeId>>> {
        let answer = self.query(s, t, failures)?;
        match answer.witness_leaf {
            None => Ok(None),
            Some(leaf) => hop_bounded_path(&self.family.leaf_view(g, leaf), s, t, self.params().max_hops),
        }
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut w = Writer::new();
        self.family.encode(&mut w);
        w.bytes(TABLE_MAGIC);
        w.len_u32(self.node_count());
        w.len_u32(self.tables.len());
        for table in &self.tables {
            for &v in table.raw_values() {
                w.f64(v);
            }
            for &h in table.raw_hops() {
                w.u32(h);
            }
        }
        w.finish()
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        let mut r = Reader::new(bytes);
        let family = RpcFamily::decode(&mut r)?;
        r.magic(TABLE_MAGIC)?;
        let n = r.usize()?;
        let count = r.usize()?;
        if n != family.params().n || count != family.params().total_leaves() {
            return Err(Error::Format("table block does not match the family".into()));
        }
        let cells = n * n;
        let mut tables = Vec::with_capacity(count);
        for _ in 0..count {
            let values = (0..cells).map(|_| r.f64()).collect::<Result<Vec<_>>>()?;
            let hops = (0..cells).map(|_| r.u32()).collect::<Result<Vec<_>>>()?;
            tables.push(DistanceTable::from_raw(n, values, hops));
        }
        r.expect_end()?;
        let stats = DsoBuildStats {
            leaf_tables: tables.len(),
            table_bytes: (count as u128 * DistanceTable::bytes_for(n)) as u64,
            ..Default::default()
        };
        Ok(HopDso { family, tables, stats })
    }

    pub fn sidecar(&self) -> serde_json::Value {
        let mut v = self.family.sidecar();
        v["format"] = "RPC1+TBL1".into();
        v["tables"] = serde_json::json!({
            "count": self.tables.len(),
            "bytes": self.stats.table_bytes,
        });
        v
    }
}
