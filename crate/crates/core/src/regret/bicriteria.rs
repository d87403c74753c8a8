use crate::error::{Error, Result};
use crate::problems::{shortest_path_by, GraphInstance, GraphKind, LexCost};

/// Extreme supported outcomes `(aᵗy, bᵗy)` of the bicriteria shortest path
/// problem, ordered by increasing first criterion.
///
/// Runs the dichotomic weighted-sum search: the two lexicographic optima are
/// found first, then each pair of adjacent outcomes is probed with the weights
/// normal to the segment joining them.
pub fn bicriteria_extreme_points(
    graph: &GraphInstance,
    a: &[f64],
    b: &[f64],
) -> Result<Vec<(f64, f64)>> {
    let GraphKind::ShortestPath { source, target, .. } = graph.kind() else {
        return Err(Error::Usage("bicriteria search needs a shortest path instance".into()));
    };
    let m = graph.arcs().len();
    for (name, v) in [("a", a), ("b", b)] {
        if v.len() != m {
            return Err(Error::Usage(format!(
                "criterion {name} has {} entries, graph has {m} arcs",
                v.len()
            )));
        }
        if v.iter().any(|c| !(c.is_finite() && *c >= 0.0)) {
            return Err(Error::Domain(format!("criterion {name} must be finite and ≥ 0")));
        }
    }
    let unreachable = || Error::Infeasible("no s-t path".into());
    let outcome = |arcs: &[usize]| {
        arcs.iter()
            .fold((0.0, 0.0), |(x, y), &e| (x + a[e], y + b[e]))
    };

    let (first, _) =
        shortest_path_by(graph, source, target, |e| LexCost(a[e], b[e])).ok_or_else(unreachable)?;
    let (last, _) =
        shortest_path_by(graph, source, target, |e| LexCost(b[e], a[e])).ok_or_else(unreachable)?;
    let p = outcome(&first);
    let q = outcome(&last);
    let mut points = vec![p];
    if q != p {
        let mut stack = vec![(p, q)];
        let mut inner = Vec::new();
        while let Some((p, q)) = stack.pop() {
            let (wa, wb) = (p.1 - q.1, q.0 - p.0);
            let (path, _) = shortest_path_by(graph, source, target, |e| wa * a[e] + wb * b[e])
                .ok_or_else(unreachable)?;
            let r = outcome(&path);
            let edge_value = wa * p.0 + wb * p.1;
            if wa * r.0 + wb * r.1 < edge_value - 1e-9 * (1.0 + edge_value.abs()) {
                inner.push(r);
                stack.push((p, r));
                stack.push((r, q));
            }
        }
        points.extend(inner);
        points.push(q);
        points.sort_by(|u, v| u.0.total_cmp(&v.0));
    }
    Ok(points)
}

/// Number of extreme efficient s-t paths found by the weighted-sum search.
pub fn bicriteria_extreme_count(graph: &GraphInstance, a: &[f64], b: &[f64]) -> Result<usize> {
    Ok(bicriteria_extreme_points(graph, a, b)?.len())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::NominalCosts;
    use crate::problems::Arc;

    fn graph(n: usize, arcs: &[(usize, usize)], t: usize) -> GraphInstance {
        GraphInstance::shortest_path(
            n,
            arcs.iter().map(|&(u, v)| Arc::new(u, v)).collect(),
            NominalCosts::new(vec![1.0; arcs.len()]).unwrap(),
            0,
            t,
        )
        .unwrap()
    }

    #[test]
    fn parallel_edges_have_two_extremes() {
        let g = graph(2, &[(0, 1), (0, 1)], 1);
        assert_eq!(bicriteria_extreme_count(&g, &[1.0, 2.0], &[2.0, 1.0]).unwrap(), 2);
    }

    #[test]
    fn single_path_has_one() {
        let g = graph(3, &[(0, 1), (1, 2)], 2);
        assert_eq!(bicriteria_extreme_count(&g, &[1.0, 2.0], &[3.0, 1.0]).unwrap(), 1);
    }

    #[test]
    fn supported_but_not_extreme_points_are_skipped() {
        // Outcomes (0,4), (2,2), (4,0), (3,3): (2,2) is on the hull edge, (3,3) dominated.
        let g = graph(2, &[(0, 1); 4], 1);
        let a = [0.0, 2.0, 4.0, 3.0];
        let b = [4.0, 2.0, 0.0, 3.0];
        assert_eq!(bicriteria_extreme_points(&g, &a, &b).unwrap(), vec![(0.0, 4.0), (4.0, 0.0)]);
        let b = [4.0, 1.0, 0.0, 3.0];
        assert_eq!(bicriteria_extreme_count(&g, &a, &b).unwrap(), 3);
    }

    #[test]
    fn rejects_bad_input() {
        let g = graph(2, &[(0, 1)], 1);
        assert!(matches!(bicriteria_extreme_count(&g, &[1.0], &[]), Err(Error::Usage(_))));
        assert!(matches!(bicriteria_extreme_count(&g, &[-1.0], &[1.0]), Err(Error::Domain(_))));
    }
}
