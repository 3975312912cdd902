//! Work and size counters for the sampling-tree covering against the flat
//! baseline on identical failure sets.

use std::time::Instant;

use rand::seq::index;
use serde::Serialize;

use crate::error::Result;
use crate::graph::{FailureSet, Graph};
use crate::rng;
use crate::rpc::{build_family, build_wy_baseline, compute_params, wy_subnetwork_count, FailureMode, RpcParams};

#[derive(Debug, Clone, Serialize)]
pub struct BenchRow {
    pub query: usize,
    pub failures: String,
    /// Child tests spent by the tree walk.
    pub tree_nodes_touched: usize,
    /// `|𝒢_F|` for the trees.
    pub tree_leaves: usize,
    pub tree_work_bound: usize,
    /// Subnetworks inspected by the baseline (always all of them).
    pub baseline_scanned: usize,
    pub baseline_matching: usize,
    pub tree_query_us: u64,
    pub baseline_query_us: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct BenchReport {
    pub params: RpcParams,
    pub seed: u64,
    pub tree_subnetworks: usize,
    pub tree_build_ms: u64,
    /// `ceil(c f L^f ln n)`.
    pub baseline_predicted: u64,
    pub baseline_subnetworks: usize,
    pub baseline_build_ms: u64,
    pub rows: Vec<BenchRow>,
}

impl BenchReport {
    /// Every row scans the whole baseline and stays within the tree work bound.
    pub fn counters_hold(&self) -> bool {
        self.rows.iter().all(|r| {
            r.baseline_scanned == self.baseline_subnetworks && r.tree_nodes_touched <= r.tree_work_bound
        })
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        for row in &self.rows {
            w.serialize(row).map_err(|e| crate::Error::Format(e.to_string()))?;
        }
        let bytes = w.into_inner().map_err(|e| crate::Error::Format(e.to_string()))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }
}

/// Builds both coverings of `g` for edge failures and runs `queries` uniform
/// `f`-edge failure sets through each.
pub fn bench_trees_vs_baseline(
    g: &Graph,
    f: usize,
    max_hops: usize,
    c: f64,
    seed: u64,
    queries: usize,
    max_subnetworks: u128,
) -> Result<BenchReport> {
    let params = compute_params(f, max_hops, g.node_count(), c, FailureMode::Edges)?;
    let start = Instant::now();
    let family = build_family(g, &params, seed)?;
    let tree_build_ms = start.elapsed().as_millis() as u64;
    let start = Instant::now();
    let baseline = build_wy_baseline(g, f, max_hops, c, seed, max_subnetworks)?;
    let baseline_build_ms = start.elapsed().as_millis() as u64;

    let mut rows = Vec::with_capacity(queries);
    for q in 0..queries {
        let mut stream = rng::stream(seed, &[rng::tag::TRIAL, q as u64]);
        let k = f.min(g.edge_count());
        let mut ids = index::sample(&mut stream, g.edge_count(), k).into_vec();
        ids.sort_unstable();
        let failures = FailureSet::of_edges(ids);
        let t0 = Instant::now();
        let tree = family.query(&failures)?;
        let tree_query_us = t0.elapsed().as_micros() as u64;
        let t0 = Instant::now();
        let flat = baseline.query(&failures)?;
        let baseline_query_us = t0.elapsed().as_micros() as u64;
        rows.push(BenchRow {
            query: q,
            failures: failures.edges.iter().map(|e| e.to_string()).collect::<Vec<_>>().join(" "),
            tree_nodes_touched: tree.nodes_touched,
            tree_leaves: tree.leaves.len(),
            tree_work_bound: params.work_bound(),
            baseline_scanned: flat.scanned,
            baseline_matching: flat.matching.len(),
            tree_query_us,
            baseline_query_us,
        });
    }
    Ok(BenchReport {
        tree_subnetworks: params.total_leaves(),
        params,
        seed,
        tree_build_ms,
        baseline_predicted: wy_subnetwork_count(f, max_hops, g.node_count(), c) as u64,
        baseline_subnetworks: baseline.len(),
        baseline_build_ms,
        rows,
    })
}
