//! Flat baseline covering: independent copies of `G`, each dropping every edge
//! with probability `1/L`. Finding the copies that avoid `F` requires a full
//! scan; the bench compares that scan against the tree query.

use fixedbitset::FixedBitSet;
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::ceil_slack;
use crate::error::{Error, Result};
use crate::graph::{FailureSet, Graph};
use crate::rng;

pub const DEFAULT_MAX_SUBNETWORKS: u128 = 1_000_000;

/// `ceil(c · f · L^f · ln n)`.
pub fn wy_subnetwork_count(f: usize, max_hops: usize, n: usize, c: f64) -> u128 {
    let x = c * f as f64 * (max_hops as f64).powi(f as i32) * (n as f64).ln();
    ceil_slack(x).max(1.0) as u128
}

#[derive(Debug, Clone, PartialEq)]
pub struct WyBaseline {
    pub f: usize,
    pub max_hops: usize,
    pub c: f64,
    pub seed: u64,
    removed: Vec<FixedBitSet>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WyQueryResult {
    /// Indices of copies whose removed-set contains all of `F`.
    pub matching: Vec<usize>,
    pub scanned: usize,
}

pub fn build_wy_baseline(
    g: &Graph,
    f: usize,
    max_hops: usize,
    c: f64,
    seed: u64,
    max_subnetworks: u128,
) -> Result<WyBaseline> {
    if f < 1 || max_hops < 1 || g.node_count() < 2 || !(c.is_finite() && c > 0.0) {
        return Err(Error::InvalidParams(format!(
            "baseline needs f >= 1, L >= 1, n >= 2, c > 0 (got f={f}, L={max_hops}, n={}, c={c})",
            g.node_count()
        )));
    }
    let count = wy_subnetwork_count(f, max_hops, g.node_count(), c);
    if count > max_subnetworks {
        return Err(Error::CapExceeded {
            what: "baseline subnetworks",
            required: count,
            allowed: max_subnetworks,
        });
    }
    let drop = 1.0 / max_hops as f64;
    let m = g.edge_count();
    let removed = (0..count as u64)
        .into_par_iter()
        .map(|i| {
            let mut stream = rng::stream(seed, &[rng::tag::WY_BASELINE, i]);
            let mut set = FixedBitSet::with_capacity(m);
            for e in 0..m {
                if stream.gen_bool(drop) {
                    set.insert(e);
                }
            }
            set
        })
        .collect();
    Ok(WyBaseline { f, max_hops, c, seed, removed })
}

impl WyBaseline {
    pub fn len(&self) -> usize {
        self.removed.len()
    }

    pub fn is_empty(&self) -> bool {
        self.removed.is_empty()
    }

    pub fn removed(&self, i: usize) -> &FixedBitSet {
        &self.removed[i]
    }

    /// Scans every copy for those avoiding all edge failures.
    pub fn query(&self, failures: &FailureSet) -> Result<WyQueryResult> {
        if failures.len() > self.f {
            return Err(Error::TooManyFailures { got: failures.len(), max: self.f });
        }
        if !failures.nodes.is_empty() {
            return Err(Error::FailureKind("baseline supports edge failures only".into()));
        }
        let matching = self
            .removed
            .iter()
            .enumerate()
            .filter(|(_, set)| failures.edges.iter().all(|&e| set.contains(e)))
            .map(|(i, _)| i)
            .collect();
        Ok(WyQueryResult { matching, scanned: self.removed.len() })
    }
}
