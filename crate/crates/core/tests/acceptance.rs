//! Acceptance suite: one line per criterion, nonzero exit if any fails.
//!
//! Every randomized criterion uses seed 42. Run with
//! `cargo test -p ftoracle --test acceptance`.

use std::time::{Duration, Instant};

use ftoracle::bench::bench_trees_vs_baseline;
use ftoracle::dso::{build_bounded_diameter_dso, build_dso, HopDso, DEFAULT_MAX_BYTES};
use ftoracle::generators::{self, GeneratorSpec};
use ftoracle::graph::EdgeId;
use ftoracle::motif::{build_motif_oracle, find_min_weight_motif, MotifOracle, MotifSpec, TieBreakWeights};
use ftoracle::rng;
use ftoracle::rpc::{build_family, compute_params, FailureMode, RpcFamily, DEFAULT_MAX_SUBNETWORKS};
use ftoracle::verify::{
    bounded_dso_trial, brute_has_motif, dso_trial, motif_trial, rpc_trial, validate_motif, TrialConfig, TrialReport,
};
use ftoracle::{FailureSet, Graph, SubnetworkView};
use itertools::Itertools;
use rand::seq::index;
use rand::Rng;

const SEED: u64 = 42;

struct Outcome {
    pass: bool,
    detail: String,
}

impl Outcome {
    fn new(pass: bool, detail: impl Into<String>) -> Self {
        Outcome { pass, detail: detail.into() }
    }
}

/// Work counters from criteria 2 to 5, checked by criterion 6.
#[derive(Default)]
struct WorkLog {
    queries: usize,
    over_bound: usize,
}

impl WorkLog {
    fn add(&mut self, touched: usize, bound: usize) {
        self.queries += 1;
        self.over_bound += (touched > bound) as usize;
    }

    fn report(&mut self, r: &TrialReport) {
        self.queries += r.trials + r.not_applicable;
        self.over_bound += (r.max_nodes_touched > r.work_bound) as usize;
    }
}

fn timed(limit: Duration, body: impl FnOnce() -> Outcome) -> Outcome {
    let start = Instant::now();
    let mut out = body();
    let took = start.elapsed();
    if took > limit {
        out.pass = false;
    }
    out.detail = format!("{} [{:.2?} / limit {:.0?}]", out.detail, took, limit);
    out
}

fn z(hits: usize, samples: usize, p: f64) -> f64 {
    (hits as f64 / samples as f64 - p) / (p * (1.0 - p) / samples as f64).sqrt()
}

fn criterion_1() -> Outcome {
    let params = compute_params(1, 16, 1000, 4.0, FailureMode::Edges).unwrap();
    let shape_ok = params.height == 2 && params.branching == 4 && params.keep_probability == 0.25 && params.tree_count == 70;
    let g = generators::gnm(1000, 3000, 1, SEED);
    let fam = build_family(&g, &params, SEED).unwrap();
    let counts_ok = fam.trees().len() == 70
        && fam.trees().iter().all(|t| t.node_count() == 21 && t.leaves().len() == 16);
    let leaf = fam.shape().first_leaf();
    let hits: usize = fam.trees().iter().map(|t| t.removed(leaf).count_ones(..)).sum();
    let samples = 70 * g.edge_count();
    let zs = z(hits, samples, 1.0 / 16.0);
    Outcome::new(
        shape_ok && counts_ok && zs.abs() <= 3.0,
        format!(
            "h={} alpha={} p={} K={}; 21 nodes/16 leaves per tree: {counts_ok}; leaf marginal {:.5} vs 1/16 (z={zs:.2})",
            params.height, params.branching, params.keep_probability, params.tree_count, hits as f64 / samples as f64
        ),
    )
}

fn criterion_2(work: &mut WorkLog) -> Outcome {
    let g = generators::gnm(30, 90, 1, SEED);
    let params = compute_params(2, 8, 30, 4.0, FailureMode::Edges).unwrap();
    let fam = build_family(&g, &params, SEED).unwrap();
    let mut violations = 0;
    let mut leaves = 0;
    for i in 0..1000u64 {
        let mut stream = rng::stream(SEED, &[rng::tag::TRIAL, i]);
        let f = FailureSet::of_edges(index::sample(&mut stream, g.edge_count(), 2).into_vec());
        let r = fam.query(&f).unwrap();
        work.add(r.nodes_touched, params.work_bound());
        for &leaf in &r.leaves {
            leaves += 1;
            if !f.edges.iter().all(|&e| fam.removed_set(leaf).contains(e)) {
                violations += 1;
            }
        }
    }
    Outcome::new(violations == 0, format!("1000 failure sets, {leaves} leaves returned, {violations} violations"))
}

fn er_graph() -> Graph {
    GeneratorSpec::Gnp { n: 30, p: 0.15, max_weight: 5 }.generate(SEED)
}

const CONFIGS: [(usize, usize); 4] = [(1, 4), (2, 4), (1, 6), (2, 6)];

fn trial() -> TrialConfig {
    TrialConfig { trials: 500, seed: SEED, tolerance: 0.99 }
}

fn criterion_3(work: &mut WorkLog) -> Outcome {
    let g = er_graph();
    let mut pass = true;
    let mut parts = Vec::new();
    for (f, l) in CONFIGS {
        let params = compute_params(f, l, g.node_count(), 4.0, FailureMode::Edges).unwrap();
        let fam = build_family(&g, &params, SEED).unwrap();
        let r = rpc_trial(&g, &fam, &trial(), serde_json::json!({"f": f, "L": l})).unwrap();
        work.report(&r);
        pass &= r.trials == 500 && r.passed();
        parts.push(format!("f={f},L={l}: {}/{} covered, hard {}", r.successes, r.trials, r.hard_violations));
    }
    Outcome::new(pass, parts.join("; "))
}

fn criterion_4(work: &mut WorkLog) -> Outcome {
    let g = er_graph();
    let mut pass = true;
    let mut parts = Vec::new();
    for (f, l) in CONFIGS {
        let dso = build_dso(&g, f, l, 4.0, SEED, DEFAULT_MAX_BYTES).unwrap();
        let r = dso_trial(&g, &dso, &trial(), serde_json::json!({"f": f, "L": l})).unwrap();
        work.report(&r);
        pass &= r.trials == 500 && r.passed();
        parts.push(format!(
            "f={f},L={l}: {}/{} exact, {} without L-hop path, {} below truth",
            r.successes, r.trials, r.not_applicable, r.hard_violations
        ));
    }
    Outcome::new(pass, parts.join("; "))
}

fn criterion_5(work: &mut WorkLog) -> Outcome {
    let mut pass = true;
    let mut parts = Vec::new();
    for (name, g) in [("6-cycle", generators::cycle(6)), ("4x4 grid", generators::grid(4, 4))] {
        let dso = build_bounded_diameter_dso(&g, 1, 4.0, SEED, DEFAULT_MAX_BYTES).unwrap();
        let cfg = TrialConfig { trials: 0, seed: SEED, tolerance: 0.99 };
        let r = bounded_dso_trial(&g, &dso, &cfg, serde_json::json!({"graph": name})).unwrap();
        work.report(&r);
        pass &= r.trials > 0 && r.passed();
        parts.push(format!(
            "{name} (L={}): {}/{} exact, {} below truth",
            dso.params().max_hops,
            r.successes,
            r.trials,
            r.hard_violations
        ));
    }
    Outcome::new(pass, parts.join("; "))
}

fn criterion_6(work: &WorkLog) -> Outcome {
    let g = generators::gnm(30, 90, 1, SEED);
    let mut pass = work.over_bound == 0 && work.queries > 0;
    let mut parts = vec![format!("{} queries from criteria 2-5, {} over K*alpha*h", work.queries, work.over_bound)];
    for (f, l) in [(1, 4), (2, 8)] {
        let b = bench_trees_vs_baseline(&g, f, l, 4.0, SEED, 200, DEFAULT_MAX_SUBNETWORKS).unwrap();
        let max_touched = b.rows.iter().map(|r| r.tree_nodes_touched).max().unwrap_or(0);
        pass &= b.counters_hold() && b.baseline_subnetworks as u64 == b.baseline_predicted;
        parts.push(format!(
            "f={f},L={l}: baseline scans {} = ceil(4 f L^f ln n) each query, trees touch <= {max_touched} (bound {})",
            b.baseline_subnetworks,
            b.params.work_bound()
        ));
    }
    Outcome::new(pass, parts.join("; "))
}

fn criterion_7() -> Outcome {
    let cases: Vec<(&str, Graph, MotifSpec)> = vec![
        ("P5 3-path", generators::path(5), MotifSpec::path(3).unwrap()),
        ("P5 4-path", generators::path(5), MotifSpec::path(4).unwrap()),
        ("K5 3-path", generators::complete(5), MotifSpec::path(3).unwrap()),
        ("K5 4-path", generators::complete(5), MotifSpec::path(4).unwrap()),
        ("K5 3-clique", generators::complete(5), MotifSpec::clique(3).unwrap()),
        ("K5 4-clique", generators::complete(5), MotifSpec::clique(4).unwrap()),
        ("Petersen 3-path", generators::petersen(), MotifSpec::path(3).unwrap()),
        ("Petersen 4-path", generators::petersen(), MotifSpec::path(4).unwrap()),
    ];
    let mut violations = 0;
    let mut returned = 0;
    for (_, g, spec) in &cases {
        let o = build_motif_oracle(g, *spec, 1, 4.0, SEED).unwrap();
        for i in 0..200u64 {
            let mut stream = rng::stream(SEED, &[rng::tag::TRIAL, i]);
            let f = FailureSet::of_edges([stream.gen_range(0..g.edge_count())]);
            if let Some(edges) = o.query(&f).unwrap().edges {
                returned += 1;
                violations += !validate_motif(g, &f, *spec, &edges) as usize;
            }
        }
    }
    Outcome::new(violations == 0, format!("{} graph/motif cases x 200 failure sets, {returned} motifs returned, {violations} invalid", cases.len()))
}

fn criterion_8() -> Outcome {
    let cfg = TrialConfig { trials: 300, seed: SEED, tolerance: 0.95 };
    let mut pass = true;
    let mut parts = Vec::new();
    // two fixed n = 16 graphs where a single failure can remove every motif
    let fragile_path = Graph::unweighted(16, false, (0..5).map(|i| (i, i + 1)).chain([(7, 8), (9, 10), (11, 12)])).unwrap();
    let fragile_clique = Graph::unweighted(16, false, [(0, 1), (1, 2), (2, 0)].into_iter().chain((3..15).map(|i| (i, i + 1)))).unwrap();
    let cases = [
        ("4-path", "G(16, 0.2)", MotifSpec::path(4).unwrap(), generators::gnp(16, 0.2, 1, SEED)),
        ("4-path", "P6 + matching", MotifSpec::path(4).unwrap(), fragile_path),
        ("3-clique", "G(16, 0.2)", MotifSpec::clique(3).unwrap(), generators::gnp(16, 0.2, 1, SEED)),
        ("3-clique", "triangle + P13", MotifSpec::clique(3).unwrap(), fragile_clique),
    ];
    for (name, graph_name, spec, g) in cases {
        let o = build_motif_oracle(&g, spec, 1, 4.0, SEED).unwrap();
        let r = motif_trial(&g, &o, &cfg, serde_json::json!({"motif": name})).unwrap();
        let false_positives = r.failure_instances.iter().filter(|x| x.note == "false positive").count();
        let negatives = r.failure_instances.len() - false_positives;
        let present = (0..300u64)
            .filter(|&i| {
                let mut stream = rng::stream(SEED, &[rng::tag::TRIAL, i]);
                let e = index::sample(&mut stream, g.edge_count(), 1).index(0);
                brute_has_motif(&g, &FailureSet::of_edges([e]), spec).unwrap()
            })
            .count();
        pass &= present > 0;
        pass &= r.trials == 300 && r.passed() && false_positives == 0;
        parts.push(format!(
            "{name} on {graph_name} m={}: motif present in {present}; {}/{} agree, {negatives} false negatives, {false_positives} false positives, {} hard",
            g.edge_count(),
            r.successes,
            r.trials,
            r.hard_violations
        ));
    }
    Outcome::new(pass, parts.join("; "))
}

/// Minimum motif by exhaustive enumeration of edge subsets.
fn brute_min_motif(view: &SubnetworkView<'_>, spec: MotifSpec, w: &TieBreakWeights) -> Option<Vec<EdgeId>> {
    let g = view.base();
    let present: Vec<EdgeId> = view.present_edges().collect();
    let removed: Vec<EdgeId> = (0..g.edge_count()).filter(|e| !present.contains(e)).collect();
    let absent = FailureSet::of_edges(removed);
    present
        .into_iter()
        .combinations(spec.edge_budget())
        .filter(|c| validate_motif(g, &absent, spec, c))
        .min_by_key(|c| w.key(c))
}

fn criterion_9() -> Outcome {
    let mut pairs = 0;
    let mut violations = 0;
    let mut brute_mismatch = 0;
    let mut attempt = 0u64;
    while pairs < 200 && attempt < 2000 {
        attempt += 1;
        let mut stream = rng::stream(SEED, &[rng::tag::TRIAL, 9, attempt]);
        let spec = if attempt.is_multiple_of(2) { MotifSpec::path(3 + (attempt % 3) as usize).unwrap() } else { MotifSpec::clique(3).unwrap() };
        let g = generators::gnp(10, 0.45, 1, attempt);
        if g.edge_count() == 0 {
            continue;
        }
        let w = TieBreakWeights::random(g.edge_count(), attempt);
        let outer: Vec<EdgeId> = (0..g.edge_count()).filter(|_| stream.gen_bool(0.2)).collect();
        let view = SubnetworkView::without_failures(&g, &FailureSet::of_edges(outer)).unwrap();
        let Some(best) = find_min_weight_motif(&view, spec, &w).unwrap() else {
            continue;
        };
        if brute_min_motif(&view, spec, &w).as_ref() != Some(&best) {
            brute_mismatch += 1;
        }
        let inner: Vec<EdgeId> = view.present_edges().filter(|e| !best.contains(e) && stream.gen_bool(0.3)).collect();
        let sub = view.minus(&FailureSet::of_edges(inner)).unwrap();
        pairs += 1;
        if find_min_weight_motif(&sub, spec, &w).unwrap().as_ref() != Some(&best) {
            violations += 1;
        }
    }
    Outcome::new(
        pairs == 200 && violations == 0 && brute_mismatch == 0,
        format!("{pairs} (view, sub-view) pairs, {violations} changed outputs, {brute_mismatch} disagreements with enumeration"),
    )
}

fn criterion_10() -> Outcome {
    let g = er_graph();
    let mut ok = true;
    let mut checked = Vec::new();

    let params = compute_params(2, 6, g.node_count(), 4.0, FailureMode::Edges).unwrap();
    let a = build_family(&g, &params, SEED).unwrap();
    let b = build_family(&g, &params, SEED).unwrap();
    let back = RpcFamily::from_bytes(&a.to_bytes()).unwrap();
    ok &= a.to_bytes() == b.to_bytes() && back.to_bytes() == a.to_bytes();
    let nodes = compute_params(2, 6, g.node_count(), 4.0, FailureMode::Nodes).unwrap();
    let na = build_family(&g, &nodes, SEED).unwrap();
    ok &= na.to_bytes() == build_family(&g, &nodes, SEED).unwrap().to_bytes();
    checked.push("rpc");

    let da = build_dso(&g, 1, 4, 4.0, SEED, DEFAULT_MAX_BYTES).unwrap();
    let db = build_dso(&g, 1, 4, 4.0, SEED, DEFAULT_MAX_BYTES).unwrap();
    let dback = HopDso::from_bytes(&da.to_bytes()).unwrap();
    ok &= da.to_bytes() == db.to_bytes() && dback.to_bytes() == da.to_bytes();
    checked.push("dso");

    let grid = generators::grid(4, 4);
    let ba = build_bounded_diameter_dso(&grid, 1, 4.0, SEED, DEFAULT_MAX_BYTES).unwrap();
    let bb = build_bounded_diameter_dso(&grid, 1, 4.0, SEED, DEFAULT_MAX_BYTES).unwrap();
    ok &= ba.to_bytes() == bb.to_bytes();
    checked.push("bounded dso");

    let p5 = generators::path(5);
    let spec = MotifSpec::path(3).unwrap();
    let ma = build_motif_oracle(&p5, spec, 1, 4.0, SEED).unwrap();
    let mb = build_motif_oracle(&p5, spec, 1, 4.0, SEED).unwrap();
    let mback = MotifOracle::from_bytes(&ma.to_bytes()).unwrap();
    ok &= ma.to_bytes() == mb.to_bytes() && mback.to_bytes() == ma.to_bytes();
    checked.push("motif");

    let mut answers = 0;
    let mut differ = 0;
    for i in 0..200u64 {
        let mut stream = rng::stream(SEED, &[rng::tag::TRIAL, 10, i]);
        let f = FailureSet::of_edges(index::sample(&mut stream, g.edge_count(), 2).into_vec());
        let (s, t) = (stream.gen_range(0..30), stream.gen_range(0..30));
        differ += (a.query(&f).unwrap() != back.query(&f).unwrap()) as usize;
        let f1 = FailureSet::of_edges([f.edges[0]]);
        let (x, y) = (da.query(s, t, &f1).unwrap(), dback.query(s, t, &f1).unwrap());
        differ += (x != y || x.distance.value.to_bits() != y.distance.value.to_bits()) as usize;
        let pf = FailureSet::of_edges([i as usize % p5.edge_count()]);
        differ += (ma.query(&pf).unwrap() != mback.query(&pf).unwrap()) as usize;
        answers += 3;
    }
    ok &= differ == 0;
    Outcome::new(ok, format!("byte-identical rebuilds for {}; {answers} answers after round trip, {differ} differ", checked.join(", ")))
}

fn main() {
    let mut work = WorkLog::default();
    let results = vec![
        ("structural exactness", timed(Duration::from_secs(1), criterion_1)),
        ("exclusion soundness", timed(Duration::from_secs(10), || criterion_2(&mut work))),
        ("rpc coverage", timed(Duration::from_secs(120), || criterion_3(&mut work))),
        ("dso equivalence", timed(Duration::from_secs(120), || criterion_4(&mut work))),
        ("bounded-diameter dso", timed(Duration::from_secs(60), || criterion_5(&mut work))),
        ("query work bound", timed(Duration::from_secs(10), || criterion_6(&work))),
        ("motif soundness", timed(Duration::from_secs(30), criterion_7)),
        ("motif completeness", timed(Duration::from_secs(180), criterion_8)),
        ("inheritance", timed(Duration::from_secs(10), criterion_9)),
        ("reproducibility", timed(Duration::from_secs(30), criterion_10)),
    ];
    let mut failed = 0;
    for (i, (name, out)) in results.iter().enumerate() {
        println!("criterion {:>2} {:<22} {}  {}", i + 1, name, if out.pass { "PASS" } else { "FAIL" }, out.detail);
        failed += !out.pass as usize;
    }
    println!("acceptance: {} passed, {failed} failed", results.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
