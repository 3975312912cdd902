//! Seeded graph generators for trials and benches.
//!
//! Every generator is undirected. Random generators use the single stream
//! `rng::stream(seed, [GENERATOR, kind])` and consume it in the order given
//! below, so a `(generator, arguments, seed)` triple always yields the same
//! graph.
//!
//! * `gnp` (kind 0): for each pair `u < v` in lexicographic order draw a
//!   uniform `f64`; the pair becomes an edge if it is below `p`, and if
//!   `max_weight > 1` one more draw `1..=max_weight` gives its weight.
//! * `gnm` (kind 1): `m` distinct pair indices are sampled without
//!   replacement from the lexicographic pair enumeration and sorted; weights
//!   are then drawn in edge order as for `gnp`.

use rand::seq::index;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::rng;

fn weight(stream: &mut impl Rng, max_weight: u32) -> f64 {
    if max_weight > 1 {
        stream.gen_range(1..=max_weight) as f64
    } else {
        1.0
    }
}

/// Erdős–Rényi `G(n, p)` with integer weights in `1..=max_weight`.
pub fn gnp(n: usize, p: f64, max_weight: u32, seed: u64) -> Graph {
    let mut stream = rng::stream(seed, &[rng::tag::GENERATOR, 0]);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in (u + 1)..n {
            if stream.gen::<f64>() < p {
                edges.push((u, v, weight(&mut stream, max_weight)));
            }
        }
    }
    Graph::new(n, false, edges).expect("generated edges are valid")
}

/// Uniform graph with exactly `m` edges.
pub fn gnm(n: usize, m: usize, max_weight: u32, seed: u64) -> Graph {
    let pairs = n * n.saturating_sub(1) / 2;
    assert!(m <= pairs, "too many edges requested");
    let mut stream = rng::stream(seed, &[rng::tag::GENERATOR, 1]);
    let mut picked = index::sample(&mut stream, pairs, m).into_vec();
    picked.sort_unstable();
    let mut edges = Vec::with_capacity(m);
    for idx in picked {
        let (u, v) = unrank_pair(n, idx);
        edges.push((u, v, weight(&mut stream, max_weight)));
    }
    Graph::new(n, false, edges).expect("generated edges are valid")
}

fn unrank_pair(n: usize, mut idx: usize) -> (usize, usize) {
    for u in 0..n {
        let row = n - u - 1;
        if idx < row {
            return (u, u + 1 + idx);
        }
        idx -= row;
    }
    unreachable!("pair index out of range")
}

pub fn path(n: usize) -> Graph {
    Graph::unweighted(n, false, (1..n).map(|i| (i - 1, i))).unwrap()
}

pub fn cycle(n: usize) -> Graph {
    Graph::unweighted(n, false, (0..n).map(|i| (i, (i + 1) % n))).unwrap()
}

pub fn complete(n: usize) -> Graph {
    Graph::unweighted(n, false, (0..n).flat_map(|u| ((u + 1)..n).map(move |v| (u, v)))).unwrap()
}

/// Star with centre 0 and `leaves` leaves.
pub fn star(leaves: usize) -> Graph {
    Graph::unweighted(leaves + 1, false, (1..=leaves).map(|v| (0, v))).unwrap()
}

/// `rows × cols` grid, node `r · cols + c`.
pub fn grid(rows: usize, cols: usize) -> Graph {
    let id = |r: usize, c: usize| r * cols + c;
    let mut edges = Vec::new();
    for r in 0..rows {
        for c in 0..cols {
            if c + 1 < cols {
                edges.push((id(r, c), id(r, c + 1)));
            }
            if r + 1 < rows {
                edges.push((id(r, c), id(r + 1, c)));
            }
        }
    }
    Graph::unweighted(rows * cols, false, edges).unwrap()
}

/// Outer 5-cycle 0..5, inner pentagram 5..10, spokes `(i, i + 5)`.
pub fn petersen() -> Graph {
    let mut edges = Vec::new();
    for i in 0..5 {
        edges.push((i, (i + 1) % 5));
        edges.push((i, i + 5));
        edges.push((5 + i, 5 + (i + 2) % 5));
    }
    Graph::unweighted(10, false, edges).unwrap()
}

/// Textual generator spec, e.g. `gnp:30:0.15:5`, `gnm:30:90`, `cycle:6`,
/// `grid:4:4`, `path:5`, `complete:5`, `star:4`, `petersen`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum GeneratorSpec {
    Gnp { n: usize, p: f64, max_weight: u32 },
    Gnm { n: usize, m: usize, max_weight: u32 },
    Cycle { n: usize },
    Path { n: usize },
    Complete { n: usize },
    Star { leaves: usize },
    Grid { rows: usize, cols: usize },
    Petersen,
}

impl GeneratorSpec {
    pub fn generate(&self, seed: u64) -> Graph {
        match *self {
            GeneratorSpec::Gnp { n, p, max_weight } => gnp(n, p, max_weight, seed),
            GeneratorSpec::Gnm { n, m, max_weight } => gnm(n, m, max_weight, seed),
            GeneratorSpec::Cycle { n } => cycle(n),
            GeneratorSpec::Path { n } => path(n),
            GeneratorSpec::Complete { n } => complete(n),
            GeneratorSpec::Star { leaves } => star(leaves),
            GeneratorSpec::Grid { rows, cols } => grid(rows, cols),
            GeneratorSpec::Petersen => petersen(),
        }
    }
}

impl std::str::FromStr for GeneratorSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        let bad = || Error::InvalidParams(format!("bad generator spec {s:?}"));
        let num = |i: usize| parts.get(i).ok_or_else(bad)?.parse::<usize>().map_err(|_| bad());
        let weight = |i: usize| match parts.get(i) {
            Some(w) => w.parse::<u32>().map_err(|_| bad()),
            None => Ok(1),
        };
        let spec = match parts[0] {
            "gnp" => GeneratorSpec::Gnp {
                n: num(1)?,
                p: parts.get(2).ok_or_else(bad)?.parse().map_err(|_| bad())?,
                max_weight: weight(3)?,
            },
            "gnm" => GeneratorSpec::Gnm { n: num(1)?, m: num(2)?, max_weight: weight(3)? },
            "cycle" => GeneratorSpec::Cycle { n: num(1)? },
            "path" => GeneratorSpec::Path { n: num(1)? },
            "complete" => GeneratorSpec::Complete { n: num(1)? },
            "star" => GeneratorSpec::Star { leaves: num(1)? },
            "grid" => GeneratorSpec::Grid { rows: num(1)?, cols: num(2)? },
            "petersen" => GeneratorSpec::Petersen,
            _ => return Err(bad()),
        };
        Ok(spec)
    }
}
