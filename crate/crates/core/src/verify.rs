//! Brute-force ground truth and seeded trial drivers.
//!
//! The brute oracles share no code with the oracles they check: distances come
//! from a plain layered Bellman-Ford over the edge list, motifs from direct
//! enumeration.

use std::time::Instant;

use itertools::Itertools;
use rand::seq::index;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::dso::{build_bounded_diameter_dso, build_dso_with_params, HopDso, DEFAULT_MAX_BYTES};
use crate::error::{Error, Result};
use crate::generators::GeneratorSpec;
use crate::graph::{EdgeId, FailureSet, Graph, HopDistance, NodeId};
use crate::motif::{build_motif_oracle, MotifKind, MotifOracle, MotifSpec};
use crate::paths::{hop_bounded_distance, same_distance};
use crate::rng;
use crate::rpc::{build_family, compute_params, FailureMode, RpcFamily, DEFAULT_C};

fn edge_alive(g: &Graph, failures: &FailureSet, e: EdgeId) -> bool {
    let edge = g.edge(e);
    failures.edges.binary_search(&e).is_err()
        && failures.nodes.binary_search(&edge.tail).is_err()
        && failures.nodes.binary_search(&edge.head).is_err()
}

/// Exact distance from `s` to `t` in `G − F` over paths with at most
/// `max_hops` edges (`None`: unbounded). `hops` is the fewest edges among
/// paths of that weight.
pub fn brute_distance(g: &Graph, failures: &FailureSet, s: NodeId, t: NodeId, max_hops: Option<usize>) -> HopDistance {
    let n = g.node_count();
    if failures.nodes.contains(&s) || failures.nodes.contains(&t) {
        return HopDistance::INFINITE;
    }
    if s == t {
        return HopDistance::ZERO;
    }
    let limit = max_hops.unwrap_or(n.saturating_sub(1)).min(n.saturating_sub(1));
    let alive: Vec<EdgeId> = (0..g.edge_count()).filter(|&e| edge_alive(g, failures, e)).collect();
    let mut layer = vec![f64::INFINITY; n];
    layer[s] = 0.0;
    let mut at_t = Vec::with_capacity(limit + 1);
    at_t.push(layer[t]);
    for _ in 0..limit {
        let mut next = layer.clone();
        for &e in &alive {
            let edge = g.edge(e);
            let mut relax = |a: NodeId, b: NodeId| {
                let cand = layer[a] + edge.weight;
                if cand < next[b] {
                    next[b] = cand;
                }
            };
            relax(edge.tail, edge.head);
            if !g.is_directed() {
                relax(edge.head, edge.tail);
            }
        }
        layer = next;
        at_t.push(layer[t]);
    }
    let best = at_t[limit];
    if best.is_infinite() {
        return HopDistance::INFINITE;
    }
    let hops = at_t.iter().position(|&d| d == best).expect("best value occurs") as u32;
    HopDistance::new(best, hops)
}

/// Whether `G − F` contains an instance of `spec` (edge failures only matter
/// for paths through failed nodes, which are skipped too).
pub fn brute_has_motif(g: &Graph, failures: &FailureSet, spec: MotifSpec) -> Result<bool> {
    spec.check_caps(g.node_count(), g.is_directed())?;
    let n = g.node_count();
    let mut adj = vec![Vec::new(); n];
    let mut linked = vec![false; n * n];
    for e in (0..g.edge_count()).filter(|&e| edge_alive(g, failures, e)) {
        let edge = g.edge(e);
        adj[edge.tail].push(edge.head);
        linked[edge.tail * n + edge.head] = true;
        if !g.is_directed() {
            adj[edge.head].push(edge.tail);
            linked[edge.head * n + edge.tail] = true;
        }
    }
    Ok(match spec.kind {
        MotifKind::Path => {
            fn walk(adj: &[Vec<NodeId>], at: NodeId, left: usize, on: &mut [bool]) -> bool {
                if left == 0 {
                    return true;
                }
                for &v in &adj[at] {
                    if !on[v] {
                        on[v] = true;
                        let hit = walk(adj, v, left - 1, on);
                        on[v] = false;
                        if hit {
                            return true;
                        }
                    }
                }
                false
            }
            let mut on = vec![false; n];
            (0..n).any(|s| {
                on[s] = true;
                let hit = walk(&adj, s, spec.k, &mut on);
                on[s] = false;
                hit
            })
        }
        MotifKind::Clique => (0..n)
            .combinations(spec.k)
            .any(|set| set.iter().tuple_combinations().all(|(&a, &b)| linked[a * n + b])),
    })
}

/// Whether `edges` is an instance of `spec` in `G − F`.
pub fn validate_motif(g: &Graph, failures: &FailureSet, spec: MotifSpec, edges: &[EdgeId]) -> bool {
    if edges.len() != spec.edge_budget() || !edges.iter().all_unique() {
        return false;
    }
    if !edges.iter().all(|&e| e < g.edge_count() && edge_alive(g, failures, e)) {
        return false;
    }
    match spec.kind {
        MotifKind::Path => is_simple_path(g, edges),
        MotifKind::Clique => {
            let nodes: Vec<NodeId> = edges.iter().flat_map(|&e| [g.edge(e).tail, g.edge(e).head]).sorted().dedup().collect();
            if nodes.len() != spec.k {
                return false;
            }
            let pairs: Vec<(NodeId, NodeId)> = edges
                .iter()
                .map(|&e| {
                    let edge = g.edge(e);
                    (edge.tail.min(edge.head), edge.tail.max(edge.head))
                })
                .sorted()
                .collect();
            pairs.iter().all_unique()
        }
    }
}

fn is_simple_path(g: &Graph, edges: &[EdgeId]) -> bool {
    let mut degree = std::collections::HashMap::<NodeId, usize>::new();
    for &e in edges {
        let edge = g.edge(e);
        *degree.entry(edge.tail).or_default() += 1;
        *degree.entry(edge.head).or_default() += 1;
    }
    if degree.len() != edges.len() + 1 || degree.values().any(|&d| d > 2) {
        return false;
    }
    // walk from a start node, consuming edges; a simple path uses each once
    let start = if g.is_directed() {
        let heads: Vec<NodeId> = edges.iter().map(|&e| g.edge(e).head).collect();
        match edges.iter().map(|&e| g.edge(e).tail).find(|v| !heads.contains(v)) {
            Some(v) => v,
            None => return false,
        }
    } else {
        match degree.iter().find(|&(_, &d)| d == 1) {
            Some((&v, _)) => v,
            None => return false,
        }
    };
    let mut used = vec![false; edges.len()];
    let mut at = start;
    for _ in 0..edges.len() {
        let step = edges.iter().enumerate().find(|&(i, &e)| {
            let edge = g.edge(e);
            !used[i] && (edge.tail == at || (!g.is_directed() && edge.head == at))
        });
        match step {
            Some((i, &e)) => {
                used[i] = true;
                let edge = g.edge(e);
                at = if edge.tail == at { edge.head } else { edge.tail };
            }
            None => return false,
        }
    }
    true
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OracleKind {
    /// Covering check: some leaf of `𝒢_F` keeps the `L`-hop distance.
    Rpc,
    /// `L`-hop distance oracle against brute `L`-hop distances.
    Dso,
    /// Bounded-diameter oracle, exhaustive over connected `f`-edge failures.
    BoundedDso,
    Motif,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BuilderConfig {
    pub oracle: OracleKind,
    pub graph: GeneratorSpec,
    pub f: usize,
    #[serde(rename = "L")]
    pub max_hops: Option<usize>,
    pub motif: Option<MotifSpec>,
    pub c: f64,
    pub seed: u64,
    pub mode: FailureMode,
}

impl BuilderConfig {
    pub fn new(oracle: OracleKind, graph: GeneratorSpec, f: usize) -> Self {
        BuilderConfig { oracle, graph, f, max_hops: None, motif: None, c: DEFAULT_C, seed: 42, mode: FailureMode::Edges }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialConfig {
    /// Number of applicable instances to check (ignored by exhaustive runs).
    pub trials: usize,
    pub seed: u64,
    /// Required success rate.
    pub tolerance: f64,
}

impl Default for TrialConfig {
    fn default() -> Self {
        TrialConfig { trials: 500, seed: 42, tolerance: 0.99 }
    }
}

/// One failing or violating instance.
#[derive(Debug, Clone, PartialEq, Serialize, PartialOrd)]
pub struct FailureInstance {
    pub failures: Vec<usize>,
    pub s: Option<NodeId>,
    pub t: Option<NodeId>,
    pub oracle: Option<f64>,
    pub truth: Option<f64>,
    pub note: &'static str,
}

#[derive(Debug, Clone, Serialize)]
pub struct TrialReport {
    pub config: serde_json::Value,
    /// Checked instances; `successes + failure_instances.len() == trials`.
    pub trials: usize,
    pub successes: usize,
    pub failure_instances: Vec<FailureInstance>,
    /// Sampled instances outside the claim (no `L`-hop path, disconnected).
    pub not_applicable: usize,
    /// Deterministic guarantees broken, applicable or not.
    pub hard_violations: usize,
    pub hard_instances: Vec<FailureInstance>,
    pub max_nodes_touched: usize,
    pub work_bound: usize,
    pub seed: u64,
    pub tolerance: f64,
    pub wall_time_ms: u64,
}

impl TrialReport {
    fn new(config: serde_json::Value, trial: &TrialConfig, work_bound: usize) -> Self {
        TrialReport {
            config,
            trials: 0,
            successes: 0,
            failure_instances: Vec::new(),
            not_applicable: 0,
            hard_violations: 0,
            hard_instances: Vec::new(),
            max_nodes_touched: 0,
            work_bound,
            seed: trial.seed,
            tolerance: trial.tolerance,
            wall_time_ms: 0,
        }
    }

    /// Success rate over checked instances; 1 for an empty report.
    pub fn success_rate(&self) -> f64 {
        if self.trials == 0 {
            1.0
        } else {
            self.successes as f64 / self.trials as f64
        }
    }

    pub fn passed(&self) -> bool {
        self.hard_violations == 0 && self.success_rate() >= self.tolerance && self.max_nodes_touched <= self.work_bound
    }

    fn record(&mut self, ok: bool, instance: impl FnOnce() -> FailureInstance) {
        self.trials += 1;
        if ok {
            self.successes += 1;
        } else {
            self.failure_instances.push(instance());
        }
    }

    fn hard(&mut self, instance: FailureInstance) {
        self.hard_violations += 1;
        self.hard_instances.push(instance);
    }

    fn finish(mut self, start: Instant) -> Self {
        let order = |a: &FailureInstance, b: &FailureInstance| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal);
        self.failure_instances.sort_by(order);
        self.hard_instances.sort_by(order);
        self.wall_time_ms = start.elapsed().as_millis() as u64;
        self
    }
}

fn finite(d: HopDistance) -> Option<f64> {
    d.is_finite().then_some(d.value)
}

/// Exactly `f` distinct elements out of `0..universe`, avoiding `exclude`.
fn sample_failures(stream: &mut impl Rng, universe: usize, f: usize, exclude: &[usize]) -> Option<Vec<usize>> {
    let pool: Vec<usize> = (0..universe).filter(|x| !exclude.contains(x)).collect();
    if pool.len() < f {
        return None;
    }
    let mut picked: Vec<usize> = index::sample(stream, pool.len(), f).into_iter().map(|i| pool[i]).collect();
    picked.sort_unstable();
    Some(picked)
}

fn sample_triple(g: &Graph, f: usize, mode: FailureMode, stream: &mut impl Rng) -> Option<(NodeId, NodeId, FailureSet)> {
    let n = g.node_count();
    let s = stream.gen_range(0..n);
    let t = (s + stream.gen_range(1..n)) % n;
    let failures = match mode {
        FailureMode::Edges => FailureSet::of_edges(sample_failures(stream, g.edge_count(), f, &[])?),
        FailureMode::Nodes => FailureSet::of_nodes(sample_failures(stream, n, f, &[s, t])?),
    };
    Some((s, t, failures))
}

fn failure_ids(failures: &FailureSet) -> Vec<usize> {
    failures.edges.iter().chain(&failures.nodes).copied().collect()
}

/// Draws triples until `trial.trials` of them have a finite `L`-hop distance
/// in `G − F`, giving up after 50 attempts per requested trial.
fn for_each_triple(
    g: &Graph,
    f: usize,
    mode: FailureMode,
    max_hops: usize,
    trial: &TrialConfig,
    report: &mut TrialReport,
    mut check: impl FnMut(&mut TrialReport, NodeId, NodeId, &FailureSet, HopDistance) -> Result<()>,
) -> Result<()> {
    let mut applicable = 0;
    for attempt in 0..trial.trials.saturating_mul(50) {
        if applicable == trial.trials {
            break;
        }
        let mut stream = rng::stream(trial.seed, &[rng::tag::TRIAL, attempt as u64]);
        let Some((s, t, failures)) = sample_triple(g, f, mode, &mut stream) else {
            break;
        };
        let truth = brute_distance(g, &failures, s, t, Some(max_hops));
        if truth.is_finite() {
            applicable += 1;
        } else {
            report.not_applicable += 1;
        }
        check(report, s, t, &failures, truth)?;
    }
    Ok(())
}

/// Coverage trial of a built family: for applicable triples some leaf of
/// `𝒢_F` must keep the exact `L`-hop distance; every returned leaf must
/// remove all of `F`.
pub fn rpc_trial(g: &Graph, family: &RpcFamily, trial: &TrialConfig, config: serde_json::Value) -> Result<TrialReport> {
    let start = Instant::now();
    let params = family.params().clone();
    let mut report = TrialReport::new(config, trial, params.work_bound());
    for_each_triple(g, params.f, params.mode, params.max_hops, trial, &mut report, |report, s, t, failures, truth| {
        let result = family.query(failures)?;
        report.max_nodes_touched = report.max_nodes_touched.max(result.nodes_touched);
        let ids = failure_ids(failures);
        let instance = |oracle: Option<f64>, note| FailureInstance {
            failures: ids.clone(),
            s: Some(s),
            t: Some(t),
            oracle,
            truth: finite(truth),
            note,
        };
        if result.leaves.iter().any(|&leaf| !ids.iter().all(|&x| family.removed_set(leaf).contains(x))) {
            report.hard(instance(None, "leaf does not remove F"));
        }
        if !truth.is_finite() {
            return Ok(());
        }
        let mut best = f64::INFINITY;
        for &leaf in &result.leaves {
            let view = family.leaf_view(g, leaf);
            if view.node_present(s) && view.node_present(t) {
                best = best.min(hop_bounded_distance(&view, s, t, params.max_hops)?.value);
            }
        }
        if best < truth.value && !same_distance(best, truth.value) {
            report.hard(instance(Some(best), "leaf distance below G - F"));
        }
        let ok = best.is_finite() && same_distance(best, truth.value);
        report.record(ok, || instance(best.is_finite().then_some(best), "not covered"));
        Ok(())
    })?;
    Ok(report.finish(start))
}

/// Distance trial: answers never below brute `L`-hop distances, equal on
/// applicable triples.
pub fn dso_trial(g: &Graph, dso: &HopDso, trial: &TrialConfig, config: serde_json::Value) -> Result<TrialReport> {
    let start = Instant::now();
    let params = dso.params().clone();
    let mut report = TrialReport::new(config, trial, params.work_bound());
    for_each_triple(g, params.f, params.mode, params.max_hops, trial, &mut report, |report, s, t, failures, truth| {
        let answer = dso.query(s, t, failures)?;
        report.max_nodes_touched = report.max_nodes_touched.max(answer.nodes_touched);
        let got = answer.distance;
        let instance = |note| FailureInstance {
            failures: failure_ids(failures),
            s: Some(s),
            t: Some(t),
            oracle: finite(got),
            truth: finite(truth),
            note,
        };
        if got.value < truth.value && !same_distance(got.value, truth.value) {
            report.hard(instance("answer below true distance"));
        }
        if truth.is_finite() {
            let ok = got.is_finite() && same_distance(got.value, truth.value);
            report.record(ok, || instance("overestimate"));
        }
        Ok(())
    })?;
    Ok(report.finish(start))
}

/// Exhaustive bounded-diameter trial: every `f`-edge failure set leaving `G`
/// connected, every ordered pair `s ≠ t`, against unbounded brute distances.
pub fn bounded_dso_trial(g: &Graph, dso: &HopDso, trial: &TrialConfig, config: serde_json::Value) -> Result<TrialReport> {
    let start = Instant::now();
    let params = dso.params().clone();
    let n = g.node_count();
    let mut report = TrialReport::new(config, trial, params.work_bound());
    for combo in (0..g.edge_count()).combinations(params.f) {
        let failures = FailureSet::of_edges(combo);
        let truths: Vec<Vec<HopDistance>> =
            (0..n).map(|s| (0..n).map(|t| brute_distance(g, &failures, s, t, None)).collect()).collect();
        if truths.iter().flatten().any(|d| !d.is_finite()) {
            report.not_applicable += 1;
            continue;
        }
        for (s, row) in truths.iter().enumerate() {
            for t in (0..n).filter(|&t| t != s) {
                let answer = dso.query(s, t, &failures)?;
                report.max_nodes_touched = report.max_nodes_touched.max(answer.nodes_touched);
                let (got, truth) = (answer.distance, row[t]);
                let instance = |note| FailureInstance {
                    failures: failures.edges.clone(),
                    s: Some(s),
                    t: Some(t),
                    oracle: finite(got),
                    truth: finite(truth),
                    note,
                };
                if got.value < truth.value && !same_distance(got.value, truth.value) {
                    report.hard(instance("answer below true distance"));
                }
                report.record(got.is_finite() && same_distance(got.value, truth.value), || instance("overestimate"));
            }
        }
    }
    Ok(report.finish(start))
}

/// Motif trial over `trial.trials` uniform `f`-edge failure sets. Returned
/// motifs must be valid in `G − F`; a miss counts as a false negative.
pub fn motif_trial(g: &Graph, oracle: &MotifOracle, trial: &TrialConfig, config: serde_json::Value) -> Result<TrialReport> {
    let start = Instant::now();
    let params = oracle.params().clone();
    let spec = params.spec;
    let mut report = TrialReport::new(config, trial, params.work_bound());
    for i in 0..trial.trials {
        let mut stream = rng::stream(trial.seed, &[rng::tag::TRIAL, i as u64]);
        let Some(ids) = sample_failures(&mut stream, g.edge_count(), params.f, &[]) else {
            break;
        };
        let failures = FailureSet::of_edges(ids);
        let answer = oracle.query(&failures)?;
        report.max_nodes_touched = report.max_nodes_touched.max(answer.nodes_touched);
        let truth = brute_has_motif(g, &failures, spec)?;
        let instance = |note| FailureInstance {
            failures: failures.edges.clone(),
            s: None,
            t: None,
            oracle: Some(answer.found as u8 as f64),
            truth: Some(truth as u8 as f64),
            note,
        };
        if let Some(edges) = &answer.edges {
            if !validate_motif(g, &failures, spec, edges) {
                report.hard(instance("invalid motif returned"));
            }
        }
        if answer.found && !truth {
            report.hard(instance("false positive"));
        }
        report.record(answer.found == truth, || instance(if truth { "false negative" } else { "false positive" }));
    }
    Ok(report.finish(start))
}

/// Generates the graph, builds the configured oracle and runs its trial.
pub fn run_coverage_trial(builder: &BuilderConfig, trial: &TrialConfig) -> Result<TrialReport> {
    let g = builder.graph.generate(builder.seed);
    run_coverage_trial_on(&g, builder, trial)
}

/// As [`run_coverage_trial`] on a given graph (`builder.graph` is only echoed).
pub fn run_coverage_trial_on(g: &Graph, builder: &BuilderConfig, trial: &TrialConfig) -> Result<TrialReport> {
    let config = serde_json::json!({ "builder": builder, "trial": trial });
    let need_hops = || builder.max_hops.ok_or_else(|| Error::InvalidParams("L is required".into()));
    match builder.oracle {
        OracleKind::Rpc => {
            let params = compute_params(builder.f, need_hops()?, g.node_count(), builder.c, builder.mode)?;
            let family = build_family(g, &params, builder.seed)?;
            rpc_trial(g, &family, trial, config)
        }
        OracleKind::Dso => {
            let params = compute_params(builder.f, need_hops()?, g.node_count(), builder.c, builder.mode)?;
            let dso = build_dso_with_params(g, &params, builder.seed, DEFAULT_MAX_BYTES)?;
            dso_trial(g, &dso, trial, config)
        }
        OracleKind::BoundedDso => {
            let dso = build_bounded_diameter_dso(g, builder.f, builder.c, builder.seed, DEFAULT_MAX_BYTES)?;
            bounded_dso_trial(g, &dso, trial, config)
        }
        OracleKind::Motif => {
            let spec = builder.motif.ok_or_else(|| Error::InvalidParams("motif spec is required".into()))?;
            let oracle = build_motif_oracle(g, spec, builder.f, builder.c, builder.seed)?;
            motif_trial(g, &oracle, trial, config)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators;
    use crate::paths::unbounded_distance;
    use crate::graph::SubnetworkView;

    #[test]
    fn brute_distance_examples() {
        let tri = generators::complete(3);
        assert_eq!(brute_distance(&tri, &FailureSet::empty(), 0, 1, Some(2)), HopDistance::new(1.0, 1));
        let cut = FailureSet::of_edges(tri.find_edges(0, 1));
        assert_eq!(brute_distance(&tri, &cut, 0, 1, Some(2)), HopDistance::new(2.0, 2));
        assert!(!brute_distance(&tri, &cut, 0, 1, Some(1)).is_finite());
        let all = FailureSet::of_edges(0..3);
        assert!(!brute_distance(&tri, &all, 0, 2, None).is_finite());
        assert_eq!(brute_distance(&tri, &all, 2, 2, None), HopDistance::ZERO);
    }

    #[test]
    fn brute_distance_agrees_with_dijkstra_without_failures() {
        let g = generators::gnp(20, 0.2, 5, 11);
        let view = SubnetworkView::full(&g);
        for s in 0..20 {
            for t in 0..20 {
                let a = brute_distance(&g, &FailureSet::empty(), s, t, None);
                let b = unbounded_distance(&view, s, t).unwrap();
                assert_eq!(a.is_finite(), b.is_finite());
                if a.is_finite() {
                    assert!(same_distance(a.value, b.value));
                    assert_eq!(a.hops, b.hops);
                }
            }
        }
    }

    #[test]
    fn brute_motif_examples() {
        let k4 = generators::complete(4);
        let c4 = MotifSpec::clique(4).unwrap();
        assert!(brute_has_motif(&k4, &FailureSet::empty(), c4).unwrap());
        assert!(!brute_has_motif(&k4, &FailureSet::of_edges([2]), c4).unwrap());
        let p5 = generators::path(5);
        assert!(brute_has_motif(&p5, &FailureSet::empty(), MotifSpec::path(4).unwrap()).unwrap());
        assert!(!brute_has_motif(&p5, &FailureSet::of_edges([1]), MotifSpec::path(3).unwrap()).unwrap());
    }

    #[test]
    fn motif_validation() {
        let p5 = generators::path(5);
        let spec = MotifSpec::path(3).unwrap();
        assert!(validate_motif(&p5, &FailureSet::empty(), spec, &[0, 1, 2]));
        assert!(!validate_motif(&p5, &FailureSet::empty(), spec, &[0, 1, 3]));
        assert!(!validate_motif(&p5, &FailureSet::of_edges([1]), spec, &[0, 1, 2]));
        assert!(!validate_motif(&p5, &FailureSet::empty(), spec, &[0, 1]));
        let c4 = generators::cycle(4);
        assert!(!validate_motif(&c4, &FailureSet::empty(), MotifSpec::path(4).unwrap(), &[0, 1, 2, 3]));
        let k4 = generators::complete(4);
        let tri = MotifSpec::clique(3).unwrap();
        assert!(validate_motif(&k4, &FailureSet::empty(), tri, &[0, 1, 3]));
        assert!(!validate_motif(&k4, &FailureSet::empty(), tri, &[0, 1, 2]));
        let star = Graph::unweighted(4, true, [(0, 1), (1, 2), (3, 2)]).unwrap();
        assert!(validate_motif(&star, &FailureSet::empty(), MotifSpec::path(2).unwrap(), &[0, 1]));
        assert!(!validate_motif(&star, &FailureSet::empty(), MotifSpec::path(2).unwrap(), &[1, 2]));
    }

    #[test]
    fn empty_trial() {
        let mut b = BuilderConfig::new(OracleKind::Rpc, GeneratorSpec::Cycle { n: 6 }, 1);
        b.max_hops = Some(4);
        let t = TrialConfig { trials: 0, ..Default::default() };
        let r = run_coverage_trial(&b, &t).unwrap();
        assert_eq!((r.trials, r.successes, r.failure_instances.len()), (0, 0, 0));
        assert!(r.passed());
    }

    #[test]
    fn small_trials_pass() {
        let mut b = BuilderConfig::new(OracleKind::Dso, GeneratorSpec::Gnp { n: 12, p: 0.3, max_weight: 3 }, 1);
        b.max_hops = Some(4);
        let t = TrialConfig { trials: 50, ..Default::default() };
        let r = run_coverage_trial(&b, &t).unwrap();
        assert_eq!(r.successes + r.failure_instances.len(), r.trials);
        assert_eq!(r.hard_violations, 0);
        assert!(r.passed(), "{r:?}");

        let mut b = BuilderConfig::new(OracleKind::Motif, GeneratorSpec::Petersen, 1);
        b.motif = Some(MotifSpec::path(3).unwrap());
        b.c = 1.0;
        let r = run_coverage_trial(&b, &TrialConfig { trials: 20, tolerance: 0.9, ..Default::default() }).unwrap();
        assert_eq!(r.hard_violations, 0);
        assert_eq!(r.trials, 20);
    }
}
