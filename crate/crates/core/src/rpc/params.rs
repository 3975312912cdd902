use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `e / (e − 1)`, the per-level boost factor for the tree count.
pub const BOOST: f64 = std::f64::consts::E / (std::f64::consts::E - 1.0);

/// Default for the constant `c` in the tree count.
pub const DEFAULT_C: f64 = 4.0;

/// `ceil` that ignores floating-point noise just above an integer, so that
/// e.g. `8^(2/3)` rounds to 4 rather than 5.
pub(crate) fn ceil_slack(x: f64) -> f64 {
    (x - 1e-9 * x.abs().max(1.0)).ceil()
}

/// What the tree nodes remove: links or nodes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FailureMode {
    Edges,
    Nodes,
}

impl FailureMode {
    pub(crate) fn code(self) -> u8 {
        match self {
            FailureMode::Edges => 0,
            FailureMode::Nodes => 1,
        }
    }

    pub(crate) fn from_code(c: u8) -> Result<Self> {
        match c {
            0 => Ok(FailureMode::Edges),
            1 => Ok(FailureMode::Nodes),
            _ => Err(Error::Format(format!("unknown failure mode {c}"))),
        }
    }
}

/// Sampling-tree parameters after rounding.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RpcParams {
    /// Sensitivity: maximum number of failures per query.
    pub f: usize,
    /// Hop cutoff.
    #[serde(rename = "L")]
    pub max_hops: usize,
    pub n: usize,
    pub c: f64,
    #[serde(rename = "h")]
    pub height: usize,
    #[serde(rename = "K")]
    pub tree_count: usize,
    #[serde(rename = "alpha")]
    pub branching: usize,
    /// Probability that a child keeps each element of its parent's removed-set.
    #[serde(rename = "p")]
    pub keep_probability: f64,
    pub mode: FailureMode,
}

impl RpcParams {
    /// Replaces the sampling probability. Only meant for degenerate-case tests
    /// (`p = 0` or `p = 1`); the rounding invariants no longer hold afterwards.
    pub fn with_keep_probability(mut self, p: f64) -> Self {
        assert!((0.0..=1.0).contains(&p), "probability out of range");
        self.keep_probability = p;
        self
    }

    pub fn nodes_per_tree(&self) -> usize {
        (0..=self.height).map(|r| self.branching.pow(r as u32)).sum()
    }

    pub fn leaves_per_tree(&self) -> usize {
        self.branching.pow(self.height as u32)
    }

    pub fn total_leaves(&self) -> usize {
        self.tree_count * self.leaves_per_tree()
    }

    /// Worst-case number of child tests per query, `K · alpha · h`.
    pub fn work_bound(&self) -> usize {
        self.tree_count * self.branching * self.height
    }

    /// Removal probability of a fixed element at a leaf, `p^h`.
    pub fn leaf_marginal(&self) -> f64 {
        self.keep_probability.powi(self.height as i32)
    }

    /// Bit-vector bytes of a whole family over a universe of `universe` elements.
    pub fn family_bytes(&self, universe: usize) -> u128 {
        (self.tree_count as u128) * (self.nodes_per_tree() as u128) * (universe.div_ceil(8) as u128)
    }
}

/// Rounded parameters for sensitivity `f`, hop cutoff `max_hops` and `n` nodes:
/// `h = max(1, ceil(sqrt(f ln L)))`, `alpha = max(2, ceil(L^(f/h)))`,
/// `p = L^(-1/h)`, `K = ceil(c (e/(e-1))^h f ln n)`.
pub fn compute_params(f: usize, max_hops: usize, n: usize, c: f64, mode: FailureMode) -> Result<RpcParams> {
    if f < 1 {
        return Err(Error::InvalidParams("f must be at least 1".into()));
    }
    if max_hops < 2 {
        return Err(Error::InvalidParams(format!("L must be at least 2, got {max_hops}")));
    }
    if n < 2 {
        return Err(Error::InvalidParams(format!("n must be at least 2, got {n}")));
    }
    if !(c.is_finite() && c > 0.0) {
        return Err(Error::InvalidParams(format!("c must be positive, got {c}")));
    }
    if f >= max_hops {
        return Err(Error::InvalidParams(format!("f = {f} must be smaller than L = {max_hops}")));
    }
    let (ff, l) = (f as f64, max_hops as f64);
    let height = (ceil_slack((ff * l.ln()).sqrt()) as usize).max(1);
    let h = height as f64;
    let branching = (ceil_slack(l.powf(ff / h)) as usize).max(2);
    let keep_probability = l.powf(-1.0 / h);
    let tree_count = (ceil_slack(c * BOOST.powf(h) * ff * (n as f64).ln()) as usize).max(1);
    Ok(RpcParams {
        f,
        max_hops,
        n,
        c,
        height,
        tree_count,
        branching,
        keep_probability,
        mode,
    })
}
