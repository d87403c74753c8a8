use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::model::{BinarySolution, NominalCosts};
use crate::problems::{check_costs, shortest_path_by, CombinatorialProblem};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Arc {
    pub tail: usize,
    pub head: usize,
}

impl Arc {
    pub fn new(tail: usize, head: usize) -> Self {
        Arc { tail, head }
    }

    /// The endpoint opposite to `v`.
    pub fn other(&self, v: usize) -> usize {
        if v == self.head {
            self.tail
        } else {
            self.head
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GraphKind {
    /// Simple `source`–`target` paths.
    ShortestPath {
        source: usize,
        target: usize,
        directed: bool,
    },
    /// Spanning trees of an undirected graph.
    SpanningTree,
}

/// Graph problem; solutions are incidence vectors over the arcs.
#[derive(Debug, Clone)]
pub struct GraphInstance {
    node_count: usize,
    arcs: Vec<Arc>,
    nominal: NominalCosts,
    kind: GraphKind,
    adjacency: Vec<Vec<(usize, usize)>>,
}

impl PartialEq for GraphInstance {
    fn eq(&self, other: &Self) -> bool {
        self.node_count == other.node_count
            && self.arcs == other.arcs
            && self.nominal == other.nominal
            && self.kind == other.kind
    }
}

impl GraphInstance {
    pub fn new(
        node_count: usize,
        arcs: Vec<Arc>,
        nominal: NominalCosts,
        kind: GraphKind,
    ) -> Result<Self> {
        if nominal.len() != arcs.len() {
            return Err(Error::Usage(format!(
                "{} arcs but {} costs",
                arcs.len(),
                nominal.len()
            )));
        }
        if node_count == 0 {
            return Err(Error::Domain("graph needs at least one node".into()));
        }
        if let Some((i, a)) = arcs
            .iter()
            .enumerate()
            .find(|(_, a)| a.tail >= node_count || a.head >= node_count)
        {
            return Err(Error::Domain(format!(
                "arc {i} ({} → {}) references a node ≥ {node_count}",
                a.tail, a.head
            )));
        }
        let directed = matches!(kind, GraphKind::ShortestPath { directed: true, .. });
        let mut adjacency = vec![Vec::new(); node_count];
        for (i, a) in arcs.iter().enumerate() {
            adjacency[a.tail].push((i, a.head));
            if !directed && a.tail != a.head {
                adjacency[a.head].push((i, a.tail));
            }
        }
        let graph = GraphInstance {
            node_count,
            arcs,
            nominal,
            kind,
            adjacency,
        };
        match kind {
            GraphKind::ShortestPath { source, target, .. } => {
                if source >= node_count || target >= node_count {
                    return Err(Error::Domain(format!(
                        "terminals ({source}, {target}) out of range"
                    )));
                }
                if source == target {
                    return Err(Error::Domain("source and target coincide".into()));
                }
                if !graph.reachable_from(source)[target] {
                    return Err(Error::Infeasible(format!("no path from {source} to {target}")));
                }
            }
            GraphKind::SpanningTree => {
                if graph.reachable_from(0).iter().any(|r| !r) {
                    return Err(Error::Infeasible("graph is not connected".into()));
                }
            }
        }
        Ok(graph)
    }

    pub fn shortest_path(
        node_count: usize,
        arcs: Vec<Arc>,
        nominal: NominalCosts,
        source: usize,
        target: usize,
    ) -> Result<Self> {
        GraphInstance::new(
            node_count,
            arcs,
            nominal,
            GraphKind::ShortestPath {
                source,
                target,
                directed: true,
            },
        )
    }

    pub fn spanning_tree(node_count: usize, edges: Vec<Arc>, nominal: NominalCosts) -> Result<Self> {
        GraphInstance::new(node_count, edges, nominal, GraphKind::SpanningTree)
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn arcs(&self) -> &[Arc] {
        &self.arcs
    }

    pub fn kind(&self) -> GraphKind {
        self.kind
    }

    pub fn terminals(&self) -> Option<(usize, usize)> {
        match self.kind {
            GraphKind::ShortestPath { source, target, .. } => Some((source, target)),
            GraphKind::SpanningTree => None,
        }
    }

    pub fn is_directed(&self) -> bool {
        matches!(self.kind, GraphKind::ShortestPath { directed: true, .. })
    }

    /// `(arc, neighbour)` pairs leaving `v`; both directions for undirected graphs.
    pub fn neighbours(&self, v: usize) -> &[(usize, usize)] {
        &self.adjacency[v]
    }

    /// Same topology and kind with a different cost vector.
    pub fn with_nominal(&self, nominal: NominalCosts) -> Result<Self> {
        if nominal.len() != self.arcs.len() {
            return Err(Error::Usage("cost vector length does not match arc count".into()));
        }
        Ok(GraphInstance {
            nominal,
            ..self.clone()
        })
    }

    fn reachable_from(&self, start: usize) -> Vec<bool> {
        let mut seen = vec![false; self.node_count];
        let mut queue = VecDeque::from([start]);
        seen[start] = true;
        while let Some(u) = queue.pop_front() {
            for &(_, v) in &self.adjacency[u] {
                if !seen[v] {
                    seen[v] = true;
                    queue.push_back(v);
                }
            }
        }
        seen
    }

    fn kruskal(&self, costs: &[f64]) -> Result<(BinarySolution, f64)> {
        let mut order: Vec<usize> = (0..self.arcs.len()).collect();
        order.sort_by(|&a, &b| costs[a].total_cmp(&costs[b]).then(a.cmp(&b)));
        let mut dsu = DisjointSets::new(self.node_count);
        let mut tree = BinarySolution::empty(self.arcs.len());
        let mut value = 0.0;
        let mut picked = 0;
        for e in order {
            let a = self.arcs[e];
            if dsu.union(a.tail, a.head) {
                tree.set(e, true);
                value += costs[e];
                picked += 1;
                if picked + 1 == self.node_count {
                    break;
                }
            }
        }
        if picked + 1 != self.node_count {
            return Err(Error::Infeasible("graph is not connected".into()));
        }
        Ok((tree, value))
    }

    fn is_simple_path(&self, x: &BinarySolution, source: usize, target: usize) -> bool {
        let selected = x.ones();
        if selected.is_empty() {
            return false;
        }
        if selected.iter().any(|&e| self.arcs[e].tail == self.arcs[e].head) {
            return false;
        }
        let mut degree = vec![0usize; self.node_count];
        let mut indegree = vec![0usize; self.node_count];
        for &e in &selected {
            let a = self.arcs[e];
            degree[a.tail] += 1;
            if self.is_directed() {
                indegree[a.head] += 1;
            } else {
                degree[a.head] += 1;
            }
        }
        if self.is_directed() {
            let ok = (0..self.node_count).all(|v| {
                let (out, inn) = (degree[v], indegree[v]);
                if v == source {
                    out == 1 && inn == 0
                } else if v == target {
                    out == 0 && inn == 1
                } else {
                    out == inn && out <= 1
                }
            });
            if !ok {
                return false;
            }
        } else {
            let ok = (0..self.node_count).all(|v| {
                if v == source || v == target {
                    degree[v] == 1
                } else {
                    degree[v] == 0 || degree[v] == 2
                }
            });
            if !ok {
                return false;
            }
        }
        // Walk from the source; a simple path consumes every selected arc.
        let mut used = vec![false; self.arcs.len()];
        let mut v = source;
        let mut steps = 0;
        while v != target {
            let next = self.adjacency[v]
                .iter()
                .find(|&&(e, _)| x.get(e) && !used[e])
                .copied();
            let Some((e, w)) = next else {
                return false;
            };
            used[e] = true;
            steps += 1;
            v = w;
        }
        steps == selected.len()
    }

    fn enumerate_paths(
        &self,
        source: usize,
        target: usize,
        limit: usize,
    ) -> Result<Vec<BinarySolution>> {
        // Nodes that can still reach the target prune dead branches.
        let mut reaches_target = vec![false; self.node_count];
        reaches_target[target] = true;
        let mut reverse: Vec<Vec<usize>> = vec![Vec::new(); self.node_count];
        for (v, list) in self.adjacency.iter().enumerate() {
            for &(_, w) in list {
                reverse[w].push(v);
            }
        }
        let mut queue = VecDeque::from([target]);
        while let Some(u) = queue.pop_front() {
            for &v in &reverse[u] {
                if !reaches_target[v] {
                    reaches_target[v] = true;
                    queue.push_back(v);
                }
            }
        }

        struct Search<'a> {
            graph: &'a GraphInstance,
            target: usize,
            limit: usize,
            reaches_target: Vec<bool>,
            on_path: Vec<bool>,
            current: BinarySolution,
            out: Vec<BinarySolution>,
        }

        impl Search<'_> {
            fn visit(&mut self, u: usize) -> Result<()> {
                if u == self.target {
                    if self.out.len() == self.limit {
                        return Err(Error::Capacity {
                            what: "simple s–t paths".into(),
                            limit: self.limit,
                        });
                    }
                    self.out.push(self.current.clone());
                    return Ok(());
                }
                self.on_path[u] = true;
                for &(e, w) in self.graph.neighbours(u) {
                    if self.on_path[w] || !self.reaches_target[w] {
                        continue;
                    }
                    self.current.set(e, true);
                    let r = self.visit(w);
                    self.current.set(e, false);
                    r?;
                }
                self.on_path[u] = false;
                Ok(())
            }
        }

        let mut search = Search {
            graph: self,
            target,
            limit,
            reaches_target,
            on_path: vec![false; self.node_count],
            current: BinarySolution::empty(self.arcs.len()),
            out: Vec::new(),
        };
        search.visit(source)?;
        Ok(search.out)
    }

    fn enumerate_trees(&self, limit: usize) -> Result<Vec<BinarySolution>> {
        struct Search<'a> {
            graph: &'a GraphInstance,
            limit: usize,
            chosen: BinarySolution,
            out: Vec<BinarySolution>,
        }

        impl Search<'_> {
            /// Deleting `from` onward must leave chosen ∪ remaining spanning.
            fn still_spanning(&self, from: usize) -> bool {
                let g = self.graph;
                let mut dsu = DisjointSets::new(g.node_count);
                let mut comps = g.node_count;
                for (e, a) in g.arcs.iter().enumerate() {
                    if (self.chosen.get(e) || e >= from) && dsu.union(a.tail, a.head) {
                        comps -= 1;
                    }
                }
                comps == 1
            }

            fn visit(&mut self, e: usize, dsu: &DisjointSets, picked: usize) -> Result<()> {
                let g = self.graph;
                if picked + 1 == g.node_count {
                    if self.out.len() == self.limit {
                        return Err(Error::Capacity {
                            what: "spanning trees".into(),
                            limit: self.limit,
                        });
                    }
                    self.out.push(self.chosen.clone());
                    return Ok(());
                }
                if e == g.arcs.len() {
                    return Ok(());
                }
                let a = g.arcs[e];
                // Contract: take the edge unless it closes a cycle.
                if dsu.find(a.tail) != dsu.find(a.head) {
                    let mut merged = dsu.clone();
                    merged.union(a.tail, a.head);
                    self.chosen.set(e, true);
                    let r = self.visit(e + 1, &merged, picked + 1);
                    self.chosen.set(e, false);
                    r?;
                }
                // Delete: skip the edge if the rest still spans.
                if self.still_spanning(e + 1) {
                    self.visit(e + 1, dsu, picked)?;
                }
                Ok(())
            }
        }

        let mut search = Search {
            graph: self,
            limit,
            chosen: BinarySolution::empty(self.arcs.len()),
            out: Vec::new(),
        };
        search.visit(0, &DisjointSets::new(self.node_count), 0)?;
        Ok(search.out)
    }
}

impl CombinatorialProblem for GraphInstance {
    fn dimension(&self) -> usize {
        self.arcs.len()
    }

    fn nominal(&self) -> &NominalCosts {
        &self.nominal
    }

    fn solve_nominal(&self, costs: &[f64]) -> Result<(BinarySolution, f64)> {
        check_costs(costs, self.arcs.len())?;
        match self.kind {
            GraphKind::ShortestPath { source, target, .. } => {
                let (arcs, value) = shortest_path_by(self, source, target, |e| costs[e])
                    .ok_or_else(|| {
                        Error::Infeasible(format!("no path from {source} to {target}"))
                    })?;
                Ok((BinarySolution::from_indices(self.arcs.len(), arcs), value))
            }
            GraphKind::SpanningTree => self.kruskal(costs),
        }
    }

    fn is_feasible(&self, x: &BinarySolution) -> bool {
        if x.len() != self.arcs.len() {
            return false;
        }
        match self.kind {
            GraphKind::ShortestPath { source, target, .. } => {
                self.is_simple_path(x, source, target)
            }
            GraphKind::SpanningTree => {
                if x.count() + 1 != self.node_count {
                    return false;
                }
                let mut dsu = DisjointSets::new(self.node_count);
                x.ones()
                    .into_iter()
                    .all(|e| dsu.union(self.arcs[e].tail, self.arcs[e].head))
            }
        }
    }

    fn enumerate_solutions(&self, limit: usize) -> Result<Vec<BinarySolution>> {
        match self.kind {
            GraphKind::ShortestPath { source, target, .. } => {
                self.enumerate_paths(source, target, limit)
            }
            GraphKind::SpanningTree => self.enumerate_trees(limit),
        }
    }
}

#[derive(Debug, Clone)]
pub(crate) struct DisjointSets {
    parent: Vec<usize>,
}

impl DisjointSets {
    pub(crate) fn new(n: usize) -> Self {
        DisjointSets {
            parent: (0..n).collect(),
        }
    }

    pub(crate) fn find(&self, mut v: usize) -> usize {
        while self.parent[v] != v {
            v = self.parent[v];
        }
        v
    }

    /// Merges the sets of `a` and `b`; `false` if they were already joined.
    pub(crate) fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent[hi] = lo;
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn costs(v: &[f64]) -> NominalCosts {
        NominalCosts::new(v.to_vec()).unwrap()
    }

    pub(crate) fn parallel_edges() -> GraphInstance {
        GraphInstance::shortest_path(
            2,
            vec![Arc::new(0, 1), Arc::new(0, 1)],
            costs(&[4.0, 5.0]),
            0,
            1,
        )
        .unwrap()
    }

    fn triangle() -> GraphInstance {
        GraphInstance::spanning_tree(
            3,
            vec![Arc::new(0, 1), Arc::new(1, 2), Arc::new(0, 2)],
            costs(&[1.0, 1.0, 1.0]),
        )
        .unwrap()
    }

    #[test]
    fn parallel_edges_nominal() {
        let g = parallel_edges();
        let (x, v) = g.solve_nominal(&[4.0, 5.0]).unwrap();
        assert_eq!(x.ones(), vec![0]);
        assert_eq!(v, 4.0);
        assert_eq!(g.enumerate_solutions(10).unwrap().len(), 2);
    }

    #[test]
    fn equal_cost_paths_prefer_lower_arc_index() {
        let g = parallel_edges();
        let (x, _) = g.solve_nominal(&[5.0, 5.0]).unwrap();
        assert_eq!(x.ones(), vec![0]);
    }

    #[test]
    fn triangle_tree() {
        let g = triangle();
        let (x, v) = g.solve_nominal(&[1.0, 1.0, 1.0]).unwrap();
        assert_eq!(x.ones(), vec![0, 1]);
        assert_eq!(v, 2.0);
        let trees = g.enumerate_solutions(10).unwrap();
        assert_eq!(trees.len(), 3);
        assert!(trees.iter().all(|t| g.is_feasible(t)));
    }

    #[test]
    fn complete_graph_tree_count_matches_cayley() {
        let n = 6;
        let mut edges = Vec::new();
        for a in 0..n {
            for b in a + 1..n {
                edges.push(Arc::new(a, b));
            }
        }
        let m = edges.len();
        let g = GraphInstance::spanning_tree(n, edges, costs(&vec![1.0; m])).unwrap();
        assert_eq!(g.enumerate_solutions(10_000).unwrap().len(), 6usize.pow(4));
        assert!(matches!(g.enumerate_solutions(100), Err(Error::Capacity { .. })));
    }

    #[test]
    fn walk_with_cycle_is_not_a_simple_path() {
        // 0 → 1 → 2 → 1 is impossible in a DAG; use 0→1, 1→2, 2→1, 1→3.
        let g = GraphInstance::shortest_path(
            4,
            vec![Arc::new(0, 1), Arc::new(1, 2), Arc::new(2, 1), Arc::new(1, 3)],
            costs(&[1.0; 4]),
            0,
            3,
        )
        .unwrap();
        let walk = BinarySolution::from_indices(4, [0, 1, 2, 3]);
        assert!(!g.is_feasible(&walk));
        assert!(g.is_feasible(&BinarySolution::from_indices(4, [0, 3])));
        // Path plus a disjoint cycle is rejected too.
        let g = GraphInstance::shortest_path(
            4,
            vec![Arc::new(0, 1), Arc::new(2, 3), Arc::new(3, 2)],
            costs(&[1.0; 3]),
            0,
            1,
        )
        .unwrap();
        assert!(!g.is_feasible(&BinarySolution::from_indices(3, [0, 1, 2])));
    }

    #[test]
    fn undirected_paths() {
        let g = GraphInstance::new(
            3,
            vec![Arc::new(1, 0), Arc::new(2, 1), Arc::new(0, 2)],
            costs(&[1.0, 1.0, 5.0]),
            GraphKind::ShortestPath {
                source: 0,
                target: 2,
                directed: false,
            },
        )
        .unwrap();
        let (x, v) = g.solve_nominal(&[1.0, 1.0, 5.0]).unwrap();
        assert_eq!(x.ones(), vec![0, 1]);
        assert_eq!(v, 2.0);
        assert_eq!(g.enumerate_solutions(10).unwrap().len(), 2);
        assert!(g.is_feasible(&BinarySolution::from_indices(3, [2])));
    }

    #[test]
    fn unreachable_target_is_infeasible() {
        let r = GraphInstance::shortest_path(3, vec![Arc::new(0, 1)], costs(&[1.0]), 0, 2);
        assert!(matches!(r, Err(Error::Infeasible(_))));
        let r = GraphInstance::spanning_tree(3, vec![Arc::new(0, 1)], costs(&[1.0]));
        assert!(matches!(r, Err(Error::Infeasible(_))));
    }

    #[test]
    fn dijkstra_handles_zero_costs() {
        let g = GraphInstance::shortest_path(
            3,
            vec![Arc::new(0, 1), Arc::new(1, 2), Arc::new(0, 2)],
            costs(&[0.0, 0.0, 0.0]),
            0,
            2,
        )
        .unwrap();
        let (x, v) = g.solve_nominal(&[0.0, 0.0, 0.0]).unwrap();
        assert_eq!(v, 0.0);
        assert!(g.is_feasible(&x));
    }
}
