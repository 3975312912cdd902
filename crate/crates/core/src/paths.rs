//! Exact shortest-path primitives on subnetwork views.
//!
//! Hop-bounded distances come from a hop-layered Bellman-Ford dynamic program:
//! layer `l` holds the best weight over walks of at most `l` edges, and only
//! nodes that improved in layer `l-1` are relaxed in layer `l`. With
//! non-negative weights the optimum is always attained by a simple path, so the
//! result is the exact `L`-hop distance even when the globally shortest path
//! needs more than `L` edges.

use std::cmp::Ordering;
use std::collections::{BinaryHeap, VecDeque};

use crate::error::{Error, Result};
use crate::graph::{EdgeId, Graph, HopDistance, NodeId, SubnetworkView};

/// Hop-bounded distances from `s` to every node.
pub fn hop_bounded_from(view: &SubnetworkView<'_>, s: NodeId, max_hops: usize) -> Result<Vec<HopDistance>> {
    check_endpoint(view, s)?;
    Ok(layered(view, s, max_hops, None))
}

/// Minimum weight over `s`-`t` paths with at most `max_hops` edges.
pub fn hop_bounded_distance(
    view: &SubnetworkView<'_>,
    s: NodeId,
    t: NodeId,
    max_hops: usize,
) -> Result<HopDistance> {
    check_endpoint(view, s)?;
    check_endpoint(view, t)?;
    if s == t {
        return Ok(HopDistance::ZERO);
    }
    Ok(layered(view, s, max_hops, None)[t])
}

/// Edge ids of one minimizing `s`-`t` path with at most `max_hops` edges, in
/// order from `s`. `None` when no such path exists.
pub fn hop_bounded_path(
    view: &SubnetworkView<'_>,
    s: NodeId,
    t: NodeId,
    max_hops: usize,
) -> Result<Option<Vec<EdgeId>>> {
    check_endpoint(view, s)?;
    check_endpoint(view, t)?;
    let mut parents = Vec::new();
    let dist = layered(view, s, max_hops, Some(&mut parents));
    if !dist[t].is_finite() {
        return Ok(None);
    }
    let mut path = Vec::new();
    let (mut v, mut layer) = (t, parents.len());
    while layer > 0 {
        if let Some((u, e)) = parents[layer - 1][v] {
            path.push(e);
            v = u;
        }
        layer -= 1;
    }
    debug_assert_eq!(v, s);
    path.reverse();
    Ok(Some(path))
}

type ParentLayer = Vec<Option<(NodeId, EdgeId)>>;

fn layered(
    view: &SubnetworkView<'_>,
    s: NodeId,
    max_hops: usize,
    mut parents: Option<&mut Vec<ParentLayer>>,
) -> Vec<HopDistance> {
    let n = view.node_count();
    let mut cur = vec![HopDistance::INFINITE; n];
    cur[s] = HopDistance::ZERO;
    let mut frontier = vec![s];
    let mut in_next = vec![false; n];
    for _ in 0..max_hops {
        if frontier.is_empty() {
            break;
        }
        let mut next = cur.clone();
        let mut layer_parents = parents.as_ref().map(|_| vec![None; n]);
        let mut changed = Vec::new();
        for &u in &frontier {
            let base = cur[u];
            let hops = base.hops.expect("frontier nodes are reachable");
            for (e, v, w) in view.out_edges(u) {
                let cand = base.value + w;
                if cand < next[v].value {
                    next[v] = HopDistance::new(cand, hops + 1);
                    if let Some(lp) = layer_parents.as_mut() {
                        lp[v] = Some((u, e));
                    }
                    if !in_next[v] {
                        in_next[v] = true;
                        changed.push(v);
                    }
                }
            }
        }
        for &v in &changed {
            in_next[v] = false;
        }
        if let (Some(p), Some(lp)) = (parents.as_mut(), layer_parents) {
            p.push(lp);
        }
        cur = next;
        frontier = changed;
    }
    cur
}

fn check_endpoint(view: &SubnetworkView<'_>, v: NodeId) -> Result<()> {
    if v >= view.node_count() {
        return Err(Error::InvalidId { kind: "node", id: v, limit: view.node_count() });
    }
    if !view.node_present(v) {
        return Err(Error::RemovedEndpoint(v));
    }
    Ok(())
}

/// Equality of path weights up to rounding in the last bits; infinities are
/// equal only to themselves.
pub fn same_distance(a: f64, b: f64) -> bool {
    if a == b {
        return true;
    }
    if !(a.is_finite() && b.is_finite()) {
        return false;
    }
    (a - b).abs() <= 1e-9 * a.abs().max(b.abs()).max(1.0)
}

/// Dense `n × n` matrix of [`HopDistance`] values for one subnetwork.
///
/// Hop counts are stored next to the weights; `u32::MAX` encodes "no path".
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceTable {
    n: usize,
    values: Vec<f64>,
    hops: Vec<u32>,
}

impl DistanceTable {
    pub(crate) const NO_HOPS: u32 = u32::MAX;

    pub fn unreachable(n: usize) -> Self {
        DistanceTable { n, values: vec![f64::INFINITY; n * n], hops: vec![Self::NO_HOPS; n * n] }
    }

    pub(crate) fn from_raw(n: usize, values: Vec<f64>, hops: Vec<u32>) -> Self {
        debug_assert_eq!(values.len(), n * n);
        debug_assert_eq!(hops.len(), n * n);
        DistanceTable { n, values, hops }
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, s: NodeId, t: NodeId) -> HopDistance {
        let i = s * self.n + t;
        match self.hops[i] {
            Self::NO_HOPS => HopDistance::INFINITE,
            h => HopDistance::new(self.values[i], h),
        }
    }

    fn set(&mut self, s: NodeId, t: NodeId, d: HopDistance) {
        let i = s * self.n + t;
        self.values[i] = d.value;
        self.hops[i] = d.hops.unwrap_or(Self::NO_HOPS);
    }

    pub(crate) fn raw_values(&self) -> &[f64] {
        &self.values
    }

    pub(crate) fn raw_hops(&self) -> &[u32] {
        &self.hops
    }

    /// Heap bytes used by one table of `n` nodes.
    pub fn bytes_for(n: usize) -> u128 {
        (n as u128) * (n as u128) * 12
    }
}

/// Hop-bounded all-pairs table. Rows and columns of removed nodes are infinite,
/// their diagonal included.
pub fn all_pairs_hop_bounded(view: &SubnetworkView<'_>, max_hops: usize) -> DistanceTable {
    let n = view.node_count();
    let mut table = DistanceTable::unreachable(n);
    for s in 0..n {
        if !view.node_present(s) {
            continue;
        }
        for (t, d) in layered(view, s, max_hops, None).into_iter().enumerate() {
            if d.is_finite() {
                table.set(s, t, d);
            }
        }
    }
    table
}

#[derive(Clone, Copy, PartialEq)]
struct HeapEntry {
    dist: f64,
    hops: u32,
    node: NodeId,
}

impl Eq for HeapEntry {}

impl Ord for HeapEntry {
    fn cmp(&self, other: &Self) -> Ordering {
        // min-heap on (dist, hops)
        other
            .dist
            .total_cmp(&self.dist)
            .then_with(|| other.hops.cmp(&self.hops))
            .then_with(|| other.node.cmp(&self.node))
    }
}

impl PartialOrd for HeapEntry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Dijkstra from `s` ordering by `(weight, hops)`, so each reported hop count
/// is the fewest edges among all shortest paths.
pub fn unbounded_from(view: &SubnetworkView<'_>, s: NodeId) -> Result<Vec<HopDistance>> {
    check_endpoint(view, s)?;
    let n = view.node_count();
    let mut best = vec![HopDistance::INFINITE; n];
    let mut done = vec![false; n];
    let mut heap = BinaryHeap::new();
    best[s] = HopDistance::ZERO;
    heap.push(HeapEntry { dist: 0.0, hops: 0, node: s });
    while let Some(HeapEntry { dist, hops, node: u }) = heap.pop() {
        if done[u] {
            continue;
        }
        done[u] = true;
        for (_, v, w) in view.out_edges(u) {
            if done[v] {
                continue;
            }
            let cand = HopDistance::new(dist + w, hops + 1);
            let cur = best[v];
            let better = match cand.value.total_cmp(&cur.value) {
                Ordering::Less => true,
                Ordering::Equal => cand.hops < cur.hops || cur.hops.is_none(),
                Ordering::Greater => false,
            };
            if better {
                best[v] = cand;
                heap.push(HeapEntry { dist: cand.value, hops: hops + 1, node: v });
            }
        }
    }
    Ok(best)
}

/// Exact shortest-path distance in the view.
pub fn unbounded_distance(view: &SubnetworkView<'_>, s: NodeId, t: NodeId) -> Result<HopDistance> {
    check_endpoint(view, t)?;
    Ok(unbounded_from(view, s)?[t])
}

/// Hop diameter of a connected undirected graph, ignoring weights.
pub fn diameter(g: &Graph) -> Result<usize> {
    if g.is_directed() {
        return Err(Error::InvalidParams("diameter is defined for undirected graphs only".into()));
    }
    let n = g.node_count();
    let mut dist = vec![usize::MAX; n];
    let mut queue = VecDeque::new();
    let mut best = 0;
    for s in 0..n {
        dist.iter_mut().for_each(|d| *d = usize::MAX);
        dist[s] = 0;
        queue.push_back(s);
        let mut seen = 1;
        while let Some(u) = queue.pop_front() {
            for &(_, v) in g.out_edges(u) {
                if dist[v] == usize::MAX {
                    dist[v] = dist[u] + 1;
                    best = best.max(dist[v]);
                    seen += 1;
                    queue.push_back(v);
                }
            }
        }
        if seen != n {
            return Err(Error::Disconnected);
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::FailureSet;

    fn triangle() -> Graph {
        // a=0, b=1, c=2; edge 0 is (a,b)
        Graph::unweighted(3, false, [(0, 1), (1, 2), (0, 2)]).unwrap()
    }

    fn cycle(n: usize) -> Graph {
        Graph::unweighted(n, false, (0..n).map(|i| (i, (i + 1) % n))).unwrap()
    }

    #[test]
    fn identity_is_zero() {
        let g = triangle();
        let v = SubnetworkView::full(&g);
        for l in [0, 1, 5] {
            assert_eq!(hop_bounded_distance(&v, 1, 1, l).unwrap(), HopDistance::ZERO);
        }
    }

    #[test]
    fn triangle_detour_needs_two_hops() {
        let g = triangle();
        let v = SubnetworkView::without_failures(&g, &FailureSet::of_edges([0])).unwrap();
        assert_eq!(hop_bounded_distance(&v, 0, 1, 2).unwrap(), HopDistance::new(2.0, 2));
        assert_eq!(hop_bounded_distance(&v, 0, 1, 1).unwrap(), HopDistance::INFINITE);
        assert_eq!(hop_bounded_path(&v, 0, 1, 2).unwrap(), Some(vec![2, 1]));
        assert_eq!(hop_bounded_path(&v, 0, 1, 1).unwrap(), None);
    }

    #[test]
    fn removed_endpoint_is_an_error() {
        let g = triangle();
        let v = SubnetworkView::without_failures(&g, &FailureSet::of_nodes([2])).unwrap();
        assert!(matches!(hop_bounded_distance(&v, 2, 0, 3), Err(Error::RemovedEndpoint(2))));
        assert!(matches!(unbounded_distance(&v, 0, 2), Err(Error::RemovedEndpoint(2))));
    }

    #[test]
    fn apsp_empty_view() {
        let g = cycle(4);
        let v = SubnetworkView::without_failures(&g, &FailureSet::of_edges(0..4)).unwrap();
        let t = all_pairs_hop_bounded(&v, 3);
        for s in 0..4 {
            for u in 0..4 {
                let want = if s == u { HopDistance::ZERO } else { HopDistance::INFINITE };
                assert_eq!(t.get(s, u), want);
            }
        }
    }

    #[test]
    fn apsp_complete_and_cycle() {
        let g = triangle();
        let t = all_pairs_hop_bounded(&SubnetworkView::full(&g), 2);
        for s in 0..3 {
            for u in 0..3 {
                assert_eq!(t.get(s, u).value, if s == u { 0.0 } else { 1.0 });
            }
        }
        let g = cycle(4);
        let t = all_pairs_hop_bounded(&SubnetworkView::full(&g), 1);
        assert_eq!(t.get(0, 1), HopDistance::new(1.0, 1));
        assert_eq!(t.get(0, 3), HopDistance::new(1.0, 1));
        assert_eq!(t.get(0, 2), HopDistance::INFINITE);
        assert_eq!(t.get(1, 3), HopDistance::INFINITE);
    }

    #[test]
    fn apsp_removed_rows_are_infinite() {
        let g = triangle();
        let v = SubnetworkView::without_failures(&g, &FailureSet::of_nodes([1])).unwrap();
        let t = all_pairs_hop_bounded(&v, 2);
        assert_eq!(t.get(1, 1), HopDistance::INFINITE);
        assert_eq!(t.get(0, 1), HopDistance::INFINITE);
        assert_eq!(t.get(0, 2), HopDistance::new(1.0, 1));
    }

    #[test]
    fn dijkstra_cases() {
        let g = Graph::unweighted(4, false, [(0, 1), (2, 3)]).unwrap();
        assert_eq!(unbounded_distance(&SubnetworkView::full(&g), 0, 3).unwrap(), HopDistance::INFINITE);
        let g = Graph::unweighted(3, false, [(0, 1), (1, 2)]).unwrap();
        assert_eq!(unbounded_distance(&SubnetworkView::full(&g), 0, 2).unwrap(), HopDistance::new(2.0, 2));
        let g = Graph::new(3, false, [(0, 1, 5.0), (0, 2, 1.0), (2, 1, 1.0)]).unwrap();
        assert_eq!(unbounded_distance(&SubnetworkView::full(&g), 0, 1).unwrap(), HopDistance::new(2.0, 2));
    }

    #[test]
    fn dijkstra_prefers_fewer_hops_on_ties() {
        let g = Graph::new(3, false, [(0, 1, 2.0), (0, 2, 1.0), (2, 1, 1.0)]).unwrap();
        assert_eq!(unbounded_distance(&SubnetworkView::full(&g), 0, 1).unwrap(), HopDistance::new(2.0, 1));
    }

    #[test]
    fn hop_bound_beats_weight_shortest() {
        // 0-1-2-3 cheap, 0-3 expensive: 1 hop must take the direct edge
        let g = Graph::new(4, true, [(0, 1, 1.0), (1, 2, 1.0), (2, 3, 1.0), (0, 3, 10.0)]).unwrap();
        let v = SubnetworkView::full(&g);
        assert_eq!(hop_bounded_distance(&v, 0, 3, 1).unwrap(), HopDistance::new(10.0, 1));
        assert_eq!(hop_bounded_distance(&v, 0, 3, 2).unwrap(), HopDistance::new(10.0, 1));
        assert_eq!(hop_bounded_distance(&v, 0, 3, 3).unwrap(), HopDistance::new(3.0, 3));
        assert_eq!(hop_bounded_distance(&v, 3, 0, 3).unwrap(), HopDistance::INFINITE);
    }

    #[test]
    fn diameters() {
        let k4 = Graph::unweighted(4, false, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
        assert_eq!(diameter(&k4).unwrap(), 1);
        let p5 = Graph::unweighted(5, false, (0..4).map(|i| (i, i + 1))).unwrap();
        assert_eq!(diameter(&p5).unwrap(), 4);
        assert_eq!(diameter(&cycle(6)).unwrap(), 3);
        let split = Graph::unweighted(4, false, [(0, 1), (2, 3)]).unwrap();
        assert!(matches!(diameter(&split), Err(Error::Disconnected)));
    }
}
