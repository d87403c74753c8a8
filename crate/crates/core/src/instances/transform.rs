use crate::error::{Error, Result};
use crate::model::{BinarySolution, NominalCosts};
use crate::problems::{Arc, GraphInstance, GraphKind};

/// Single-criterion instance whose distinguished path has one regret piece per
/// extreme efficient path of a bicriteria instance.
#[derive(Debug, Clone)]
pub struct BicriteriaTransform {
    pub graph: GraphInstance,
    /// Path through every linking arc and every middle arc.
    pub x: BinarySolution,
    /// Indices of the linking arcs of cost `big_m`.
    pub m_arcs: Vec<usize>,
    pub big_m: f64,
    /// For original arc `e`, the indices of its three replacement arcs.
    pub replaced: Vec<[usize; 3]>,
}

/// Replaces every arc `e = (u, v)` by `u → i(e) → j(e) → v` with costs
/// `aₑ − bₑ/2`, `bₑ/2` and `0`, then chains `s → i(e₁)`, `j(e₁) → i(e₂)`, ...,
/// `j(e_m) → t` with cost `M = 1 + 2·Σ(aₑ + bₑ)`.
///
/// New nodes are `i(e) = |V| + 2e` and `j(e) = |V| + 2e + 1`. Arc `e` becomes
/// arcs `3e`, `3e+1`, `3e+2`; the linking arcs follow.
pub fn transform_bicriteria(graph: &GraphInstance, a: &[f64], b: &[f64]) -> Result<BicriteriaTransform> {
    let GraphKind::ShortestPath { source, target, directed: true } = graph.kind() else {
        return Err(Error::Usage("transformation needs a directed shortest path instance".into()));
    };
    let m = graph.arcs().len();
    if a.len() != m || b.len() != m {
        return Err(Error::Usage(format!(
            "criteria have {} and {} entries, graph has {m} arcs",
            a.len(),
            b.len()
        )));
    }
    for e in 0..m {
        if !(a[e] > 0.0 && b[e] >= 0.0 && 2.0 * a[e] >= b[e] && a[e].is_finite()) {
            return Err(Error::Domain(format!(
                "arc {e} needs a > 0 and 0 ≤ b ≤ 2a, got a={}, b={}",
                a[e], b[e]
            )));
        }
    }
    let v = graph.node_count();
    let big_m = 1.0 + 2.0 * a.iter().zip(b).map(|(x, y)| x + y).sum::<f64>();
    let (first, second) = (|e: usize| v + 2 * e, |e: usize| v + 2 * e + 1);

    let mut arcs = Vec::with_capacity(4 * m + 1);
    let mut costs = Vec::with_capacity(4 * m + 1);
    let mut replaced = Vec::with_capacity(m);
    for (e, arc) in graph.arcs().iter().enumerate() {
        replaced.push([arcs.len(), arcs.len() + 1, arcs.len() + 2]);
        arcs.push(Arc::new(arc.tail, first(e)));
        costs.push(a[e] - b[e] / 2.0);
        arcs.push(Arc::new(first(e), second(e)));
        costs.push(b[e] / 2.0);
        arcs.push(Arc::new(second(e), arc.head));
        costs.push(0.0);
    }
    let mut m_arcs = Vec::with_capacity(m + 1);
    let mut prev = source;
    for e in 0..m {
        m_arcs.push(arcs.len());
        arcs.push(Arc::new(prev, first(e)));
        costs.push(big_m);
        prev = second(e);
    }
    m_arcs.push(arcs.len());
    arcs.push(Arc::new(prev, target));
    costs.push(big_m);

    let n_arcs = arcs.len();
    let out = GraphInstance::shortest_path(v + 2 * m, arcs, NominalCosts::new(costs)?, source, target)?;
    let x = BinarySolution::from_indices(
        n_arcs,
        m_arcs.iter().copied().chain(replaced.iter().map(|r| r[1])),
    );
    Ok(BicriteriaTransform {
        graph: out,
        x,
        m_arcs,
        big_m,
        replaced,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::WeightFunction;
    use crate::problems::CombinatorialProblem;
    use crate::regret::{bicriteria_extreme_count, compute_val};

    fn graph(n: usize, arcs: &[(usize, usize)], t: usize) -> GraphInstance {
        let arcs: Vec<Arc> = arcs.iter().map(|&(u, v)| Arc::new(u, v)).collect();
        let k = arcs.len();
        GraphInstance::shortest_path(n, arcs, NominalCosts::new(vec![1.0; k]).unwrap(), 0, t).unwrap()
    }

    #[test]
    fn single_edge() {
        let t = transform_bicriteria(&graph(2, &[(0, 1)], 1), &[1.0], &[1.0]).unwrap();
        assert_eq!(&t.graph.nominal().values()[..3], &[0.5, 0.5, 0.0]);
        assert_eq!(t.big_m, 5.0);
        assert_eq!(t.m_arcs, vec![3, 4]);
        assert_eq!(t.x.ones(), vec![1, 3, 4]);
        assert!(t.graph.is_feasible(&t.x));
    }

    #[test]
    fn parallel_edges_match_extreme_count() {
        let g = graph(2, &[(0, 1), (0, 1)], 1);
        let (a, b) = ([1.0, 2.0], [2.0, 1.0]);
        let t = transform_bicriteria(&g, &a, &b).unwrap();
        let r = compute_val(&t.graph.clone().into(), &t.x, &WeightFunction::uniform()).unwrap();
        assert_eq!(r.segment_starts().len(), 2);
        assert_eq!(bicriteria_extreme_count(&g, &a, &b).unwrap(), 2);
        assert!(r.witnesses.iter().all(|y| t.m_arcs.iter().all(|&e| !y.get(e))));
    }

    #[test]
    fn rejects_violated_preconditions() {
        let g = graph(2, &[(0, 1)], 1);
        assert!(matches!(transform_bicriteria(&g, &[0.0], &[0.0]), Err(Error::Domain(_))));
        assert!(matches!(transform_bicriteria(&g, &[1.0], &[3.0]), Err(Error::Domain(_))));
    }
}
