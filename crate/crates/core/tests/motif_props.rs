use ftoracle::generators;
use ftoracle::graph::EdgeId;
use ftoracle::motif::{build_motif_oracle, find_min_weight_motif, MotifOracle, MotifSpec, TieBreakWeights};
use ftoracle::verify::validate_motif;
use ftoracle::{FailureSet, SubnetworkView};
use proptest::prelude::*;

fn spec_strategy() -> impl Strategy<Value = MotifSpec> {
    prop_oneof![(2usize..6).prop_map(|k| MotifSpec::path(k).unwrap()), (3usize..5).prop_map(|k| MotifSpec::clique(k).unwrap())]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn finder_output_is_valid_and_inherited(seed in any::<u64>(), spec in spec_strategy(), drop in proptest::collection::vec(any::<usize>(), 0..8)) {
        let g = generators::gnp(11, 0.45, 1, seed);
        prop_assume!(g.edge_count() > 0);
        let w = TieBreakWeights::random(g.edge_count(), seed);
        let full = SubnetworkView::full(&g);
        let Some(best) = find_min_weight_motif(&full, spec, &w).unwrap() else {
            return Ok(());
        };
        prop_assert!(validate_motif(&g, &FailureSet::empty(), spec, &best));
        let removed: Vec<EdgeId> = drop.iter().map(|d| d % g.edge_count()).filter(|e| !best.contains(e)).collect();
        let sub = full.minus(&FailureSet::of_edges(removed.clone())).unwrap();
        prop_assert_eq!(find_min_weight_motif(&sub, spec, &w).unwrap(), Some(best.clone()));
        // anything found after removing part of the minimum is valid and no lighter
        let cut = full.minus(&FailureSet::of_edges([best[0]])).unwrap();
        if let Some(other) = find_min_weight_motif(&cut, spec, &w).unwrap() {
            prop_assert!(validate_motif(&g, &FailureSet::of_edges([best[0]]), spec, &other));
            prop_assert!(w.key(&other) > w.key(&best));
        }
    }
}

fn chain_properties(o: &MotifOracle) {
    let shape = o.shape();
    let budget = o.spec().edge_budget();
    for tree in o.trees() {
        for y in 1..shape.node_count() {
            let x = shape.parent(y).unwrap();
            let (px, ny) = (tree.node(x), tree.node(y));
            assert!(ny.survivors().is_subset(px.survivors()));
            assert!(ny.boundary().is_subset(px.survivors()));
            let mut b = px.survivors().clone();
            b.intersect_with(ny.removed());
            assert_eq!(&b, ny.boundary());
            if let Some(c) = ny.collection() {
                for m in c {
                    assert_eq!(m.edges.len(), budget);
                    assert!(m.multiplicity >= 1);
                    let mut chain = Some(x);
                    while let Some(z) = chain {
                        assert!(m.edges.iter().all(|&e| tree.node(z).survivors().contains(e)));
                        chain = shape.parent(z);
                    }
                }
            }
        }
    }
}

#[test]
fn chains_on_p5_and_petersen() {
    let p5 = generators::path(5);
    let o = build_motif_oracle(&p5, MotifSpec::path(3).unwrap(), 1, 4.0, 42).unwrap();
    chain_properties(&o);
    for e in 0..p5.edge_count() {
        assert!(o.descent_tests_agree(&[e]));
    }
    let pet = generators::petersen();
    let o = build_motif_oracle(&pet, MotifSpec::path(4).unwrap(), 1, 1.0, 42).unwrap();
    chain_properties(&o);
    for e in 0..pet.edge_count() {
        assert!(o.descent_tests_agree(&[e]));
    }
}

#[test]
fn audit_trail_replays_from_container() {
    let g = generators::path(5);
    let o = build_motif_oracle(&g, MotifSpec::path(3).unwrap(), 1, 4.0, 42).unwrap();
    let back = MotifOracle::from_bytes(&o.to_bytes()).unwrap();
    for e in 0..g.edge_count() {
        let f = FailureSet::of_edges([e]);
        let target = o.audit_target(&g, &f).unwrap();
        let a = o.well_behaved_audit(&f, target.as_deref()).unwrap();
        // independent replay of the descent and conditions from the decoded oracle
        let shape = back.shape();
        for (tree, audit) in back.trees().iter().zip(&a.trees) {
            let mut x = 0;
            for step in &audit.steps {
                assert_eq!(step.node, x);
                let node = tree.node(x);
                if let Some(t) = &target {
                    let inside = t.iter().filter(|&&e| node.removed().contains(e)).count() as f64;
                    let bound = back.params().keep_probability.powi(shape.depth(x) as i32) * 3.0;
                    assert_eq!(step.p2, Some(inside <= bound + 1e-9));
                }
                if shape.is_leaf(x) {
                    break;
                }
                let parent_s = node.survivors();
                x = match shape.children(x).find(|&y| f.edges.iter().filter(|&&e| parent_s.contains(e)).all(|&e| tree.node(y).removed().contains(e))) {
                    Some(y) => y,
                    None => break,
                };
            }
        }
        assert_eq!(back.well_behaved_audit(&f, target.as_deref()).unwrap(), a);
        assert_eq!(back.query(&f).unwrap(), o.query(&f).unwrap());
    }
}
