use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::ops::Add;

use crate::problems::GraphInstance;

/// Arc cost type for label-setting search; values must be non-negative.
pub trait PathCost: Copy + Add<Output = Self> + PartialOrd {
    fn zero() -> Self;
}

impl PathCost for f64 {
    fn zero() -> Self {
        0.0
    }
}

/// Lexicographically ordered pair of criteria.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct LexCost(pub f64, pub f64);

impl Add for LexCost {
    type Output = LexCost;

    fn add(self, rhs: LexCost) -> LexCost {
        LexCost(self.0 + rhs.0, self.1 + rhs.1)
    }
}

impl PathCost for LexCost {
    fn zero() -> Self {
        LexCost(0.0, 0.0)
    }
}

struct Label<C> {
    cost: C,
    node: usize,
}

impl<C: PartialOrd> PartialEq for Label<C> {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl<C: PartialOrd> Eq for Label<C> {}

impl<C: PartialOrd> PartialOrd for Label<C> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<C: PartialOrd> Ord for Label<C> {
    // Reversed: BinaryHeap is a max-heap and we pop the cheapest label first.
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .cost
            .partial_cmp(&self.cost)
            .unwrap_or(Ordering::Equal)
            .then(other.node.cmp(&self.node))
    }
}

/// Dijkstra from `source` to `target` with arc costs from `cost`.
///
/// Returns the arcs of a simple path in travel order and its cost, or `None` when
/// `target` is unreachable. Among equal-cost predecessors the smallest arc index
/// wins.
pub fn shortest_path_by<C: PathCost>(
    graph: &GraphInstance,
    source: usize,
    target: usize,
    cost: impl Fn(usize) -> C,
) -> Option<(Vec<usize>, C)> {
    let n = graph.node_count();
    let mut dist: Vec<Option<C>> = vec![None; n];
    let mut pred: Vec<usize> = vec![usize::MAX; n];
    let mut settled = vec![false; n];
    let mut heap = BinaryHeap::new();
    dist[source] = Some(C::zero());
    heap.push(Label {
        cost: C::zero(),
        node: source,
    });
    while let Some(Label { cost: d, node: u }) = heap.pop() {
        if settled[u] {
            continue;
        }
        settled[u] = true;
        if u == target {
            break;
        }
        for &(arc, v) in graph.neighbours(u) {
            if settled[v] {
                continue;
            }
            let candidate = d + cost(arc);
            match dist[v] {
                Some(old) if candidate > old => {}
                Some(old) if candidate == old => {
                    if arc < pred[v] {
                        pred[v] = arc;
                    }
                }
                _ => {
                    dist[v] = Some(candidate);
                    pred[v] = arc;
                    heap.push(Label {
                        cost: candidate,
                        node: v,
                    });
                }
            }
        }
    }
    let total = dist[target]?;
    let mut arcs = Vec::new();
    let mut v = target;
    while v != source {
        let a = pred[v];
        arcs.push(a);
        v = graph.arcs()[a].other(v);
    }
    arcs.reverse();
    Some((arcs, total))
}

/// Distances from `source` to every node, `None` where unreachable.
pub fn distances_from(graph: &GraphInstance, source: usize, cost: impl Fn(usize) -> f64) -> Vec<Option<f64>> {
    let n = graph.node_count();
    let mut dist: Vec<Option<f64>> = vec![None; n];
    let mut settled = vec![false; n];
    let mut heap = BinaryHeap::new();
    dist[source] = Some(0.0);
    heap.push(Label { cost: 0.0, node: source });
    while let Some(Label { cost: d, node: u }) = heap.pop() {
        if settled[u] {
            continue;
        }
        settled[u] = true;
        for &(arc, v) in graph.neighbours(u) {
            let candidate = d + cost(arc);
            if dist[v].is_none_or(|old| candidate < old) {
                dist[v] = Some(candidate);
                heap.push(Label { cost: candidate, node: v });
            }
        }
    }
    dist
}
