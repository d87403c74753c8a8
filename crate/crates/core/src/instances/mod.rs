//! Seeded instance generators and the JSON instance format.

mod io;
mod transform;

pub use io::{from_json_str, load_instance, save_instance, to_json_string, InstanceDocument, FORMAT_VERSION};
pub use transform::{transform_bicriteria, BicriteriaTransform};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::NominalCosts;
use crate::problems::{Arc, GraphInstance};
use crate::rng::SplitMix64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CostType {
    /// Integers uniform on `[1, 100]`.
    A,
    /// Integers uniform on `[1, 30]` or on `[70, 100]`, each with probability 1/2.
    B,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum GeneratorKind {
    /// `layers + 1` node layers of `width` nodes between source and sink.
    Layered { layers: usize, width: usize, costs: CostType },
    /// Two disjoint paths of `length` inner nodes plus `round(density·length)` diagonals.
    TwoPath { length: usize, density: f64 },
    /// A random layered bicriteria instance passed through [`transform_bicriteria`].
    BicriteriaTransform { layers: usize, width: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeneratorConfig {
    #[serde(flatten)]
    pub kind: GeneratorKind,
    pub seed: u64,
}

impl GeneratorConfig {
    pub fn validate(&self) -> Result<()> {
        match self.kind {
            GeneratorKind::Layered { layers, width, .. }
            | GeneratorKind::BicriteriaTransform { layers, width } => {
                if layers == 0 || width == 0 {
                    return Err(Error::Domain(format!(
                        "layered graphs need N ≥ 1 and k ≥ 1, got N={layers}, k={width}"
                    )));
                }
            }
            GeneratorKind::TwoPath { length, density } => {
                if length < 2 || !(0.0..=1.0).contains(&density) {
                    return Err(Error::Domain(format!(
                        "two-path graphs need L ≥ 2 and 0 ≤ d ≤ 1, got L={length}, d={density}"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn generate(&self) -> Result<GraphInstance> {
        self.validate()?;
        match self.kind {
            GeneratorKind::Layered { layers, width, costs } => gen_layered(layers, width, costs, self.seed),
            GeneratorKind::TwoPath { length, density } => gen_twopath(length, density, self.seed),
            GeneratorKind::BicriteriaTransform { layers, width } => {
                let (graph, a, b) = gen_bicriteria_layered(layers, width, self.seed)?;
                Ok(transform_bicriteria(&graph, &a, &b)?.graph)
            }
        }
    }
}

fn layered_arcs(layers: usize, width: usize) -> (usize, Vec<Arc>) {
    let node = |layer: usize, j: usize| 1 + layer * width + j;
    let t = (layers + 1) * width + 1;
    let mut arcs = Vec::with_capacity(layers * width * width + 2 * width);
    arcs.extend((0..width).map(|j| Arc::new(0, node(0, j))));
    for l in 0..layers {
        for u in 0..width {
            for v in 0..width {
                arcs.push(Arc::new(node(l, u), node(l + 1, v)));
            }
        }
    }
    arcs.extend((0..width).map(|j| Arc::new(node(layers, j), t)));
    (t + 1, arcs)
}

/// Complete layered DAG: source `0`, layer `l` node `j` at `1 + l·k + j`, sink last.
///
/// Arcs are ordered source arcs, then layer by layer (tail-major), then sink arcs;
/// costs are drawn in that order.
pub fn gen_layered(layers: usize, width: usize, costs: CostType, seed: u64) -> Result<GraphInstance> {
    GeneratorConfig {
        kind: GeneratorKind::Layered { layers, width, costs },
        seed,
    }
    .validate()?;
    let (nodes, arcs) = layered_arcs(layers, width);
    let mut rng = SplitMix64::new(seed);
    let nominal = (0..arcs.len())
        .map(|_| match costs {
            CostType::A => rng.range_inclusive(1, 100) as f64,
            CostType::B => {
                if rng.coin() {
                    rng.range_inclusive(1, 30) as f64
                } else {
                    rng.range_inclusive(70, 100) as f64
                }
            }
        })
        .collect();
    GraphInstance::shortest_path(nodes, arcs, NominalCosts::new(nominal)?, 0, nodes - 1)
}

/// Number of diagonals `round(d·L)` with halves rounded up.
///
/// The product is first rounded to six decimals so that e.g. `0.05·50` counts as
/// exactly 2.5.
pub fn diagonal_count(length: usize, density: f64) -> usize {
    let v = ((density * length as f64) * 1e6).round() / 1e6;
    (v + 0.5).floor() as usize
}

const DIAGONAL_ATTEMPTS: usize = 100;

/// Two disjoint s-t paths linked by forward diagonals.
///
/// Nodes: `s = 0`, first path `1..=L`, second path `L+1..=2L`, `t = 2L+1`. Arcs:
/// the first path, the second path, then diagonals. A diagonal leaves position
/// `i` (uniform on `1..L`) of a uniformly chosen path and enters position
/// `i + δ` of the other one, with `P(δ) ∝ (3/4)(1/4)^(δ−1)` for `δ ≤ L − i`; its
/// cost is the sum of `δ` uniform draws from `[1, 100]`. A diagonal that already
/// exists is redrawn up to 100 times before being kept.
pub fn gen_twopath(length: usize, density: f64, seed: u64) -> Result<GraphInstance> {
    GeneratorConfig {
        kind: GeneratorKind::TwoPath { length, density },
        seed,
    }
    .validate()?;
    let l = length;
    let t = 2 * l + 1;
    let pos = |second: bool, i: usize| if second { l + i } else { i };
    let mut rng = SplitMix64::new(seed);
    let mut arcs = Vec::new();
    let mut nominal = Vec::new();
    for second in [false, true] {
        let mut prev = 0;
        for i in 1..=l {
            arcs.push(Arc::new(prev, pos(second, i)));
            prev = pos(second, i);
        }
        arcs.push(Arc::new(prev, t));
    }
    for _ in 0..arcs.len() {
        nominal.push(rng.range_inclusive(1, 100) as f64);
    }

    let mut existing = std::collections::HashSet::new();
    for _ in 0..diagonal_count(l, density) {
        let mut arc = Arc::new(0, 0);
        let mut span = 0;
        for _ in 0..DIAGONAL_ATTEMPTS {
            let second = rng.coin();
            let i = rng.range_inclusive(1, (l - 1) as u64) as usize;
            span = geometric_offset(&mut rng, l - i);
            arc = Arc::new(pos(second, i), pos(!second, i + span));
            if !existing.contains(&(arc.tail, arc.head)) {
                break;
            }
        }
        existing.insert((arc.tail, arc.head));
        arcs.push(arc);
        nominal.push((0..span).map(|_| rng.range_inclusive(1, 100) as f64).sum());
    }
    GraphInstance::shortest_path(t + 1, arcs, NominalCosts::new(nominal)?, 0, t)
}

/// Draws `δ ∈ 1..=max` with probability proportional to `(3/4)(1/4)^(δ−1)`.
fn geometric_offset(rng: &mut SplitMix64, max: usize) -> usize {
    let weights: Vec<f64> = (0..max).map(|k| 0.75 * 0.25f64.powi(k as i32)).collect();
    let total: f64 = weights.iter().sum();
    let mut u = rng.next_f64() * total;
    for (k, w) in weights.iter().enumerate() {
        if u < *w {
            return k + 1;
        }
        u -= w;
    }
    max
}

/// Random layered bicriteria instance with `a` uniform on `[1, 100]` and `b`
/// uniform on `[0, 2a]`, all integral.
pub fn gen_bicriteria_layered(
    layers: usize,
    width: usize,
    seed: u64,
) -> Result<(GraphInstance, Vec<f64>, Vec<f64>)> {
    GeneratorConfig {
        kind: GeneratorKind::BicriteriaTransform { layers, width },
        seed,
    }
    .validate()?;
    let (nodes, arcs) = layered_arcs(layers, width);
    let mut rng = SplitMix64::new(seed);
    let mut a = Vec::with_capacity(arcs.len());
    let mut b = Vec::with_capacity(arcs.len());
    for _ in 0..arcs.len() {
        let ae = rng.range_inclusive(1, 100);
        a.push(ae as f64);
        b.push(rng.range_inclusive(0, 2 * ae) as f64);
    }
    let graph = GraphInstance::shortest_path(nodes, arcs, NominalCosts::new(a.clone())?, 0, nodes - 1)?;
    Ok((graph, a, b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problems::CombinatorialProblem;

    #[test]
    fn layered_sizes() {
        for (n, k, nodes, edges) in [(5, 5, 32, 135), (1, 1, 4, 3), (55, 20, 1122, 22040)] {
            let g = gen_layered(n, k, CostType::A, 1).unwrap();
            assert_eq!((g.node_count(), g.arcs().len()), (nodes, edges));
        }
    }

    #[test]
    fn layered_costs_follow_type() {
        let g = gen_layered(3, 4, CostType::A, 9).unwrap();
        assert!(g.nominal().values().iter().all(|&c| (1.0..=100.0).contains(&c) && c.fract() == 0.0));
        let g = gen_layered(3, 4, CostType::B, 9).unwrap();
        let v = g.nominal().values();
        assert!(v.iter().all(|&c| (1.0..=30.0).contains(&c) || (70.0..=100.0).contains(&c)));
        assert!(v.iter().any(|&c| c <= 30.0) && v.iter().any(|&c| c >= 70.0));
    }

    #[test]
    fn layered_paths_have_fixed_length() {
        let g = gen_layered(2, 2, CostType::A, 3).unwrap();
        let paths = g.enumerate_solutions(1000).unwrap();
        assert_eq!(paths.len(), 8);
        assert!(paths.iter().all(|p| p.count() == 4));
    }

    #[test]
    fn twopath_sizes() {
        assert_eq!(diagonal_count(50, 0.05), 3);
        assert_eq!(diagonal_count(850, 0.15), 128);
        assert_eq!(diagonal_count(150, 0.10), 15);
        for (l, d, nodes, edges) in [(50, 0.05, 102, 105), (850, 0.15, 1702, 1830)] {
            let g = gen_twopath(l, d, 4).unwrap();
            assert_eq!((g.node_count(), g.arcs().len()), (nodes, edges));
        }
        let g = gen_twopath(2, 0.0, 1).unwrap();
        assert_eq!((g.node_count(), g.arcs().len()), (6, 6));
        assert_eq!(g.enumerate_solutions(10).unwrap().len(), 2);
    }

    #[test]
    fn twopath_diagonals_go_forward_across() {
        let l = 40;
        let g = gen_twopath(l, 1.0, 17).unwrap();
        for (e, arc) in g.arcs().iter().enumerate().skip(2 * (l + 1)) {
            let (pi, i) = if arc.tail <= l { (0, arc.tail) } else { (1, arc.tail - l) };
            let (pj, j) = if arc.head <= l { (0, arc.head) } else { (1, arc.head - l) };
            assert!(i >= 1 && pi != pj && j > i && j <= l, "arc {e}: {arc:?}");
            let c = g.nominal().values()[e];
            assert!(c >= (j - i) as f64 && c <= 100.0 * (j - i) as f64);
        }
    }

    #[test]
    fn generation_is_deterministic() {
        let a = gen_twopath(50, 0.1, 5).unwrap();
        assert_eq!(a, gen_twopath(50, 0.1, 5).unwrap());
        assert_ne!(a.nominal(), gen_twopath(50, 0.1, 6).unwrap().nominal());
        let cfg = GeneratorConfig {
            kind: GeneratorKind::Layered { layers: 2, width: 3, costs: CostType::B },
            seed: 8,
        };
        assert_eq!(cfg.generate().unwrap(), gen_layered(2, 3, CostType::B, 8).unwrap());
    }

    #[test]
    fn offsets_favour_short_diagonals() {
        let mut rng = SplitMix64::new(2);
        let n = 40_000;
        let ones = (0..n).filter(|_| geometric_offset(&mut rng, 10) == 1).count();
        let p = ones as f64 / n as f64;
        assert!((p - 0.75 / (1.0 - 0.25f64.powi(10))).abs() < 0.01, "{p}");
        assert_eq!(geometric_offset(&mut rng, 1), 1);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(gen_layered(0, 3, CostType::A, 1).is_err());
        assert!(gen_twopath(1, 0.1, 1).is_err());
        assert!(gen_twopath(5, 1.5, 1).is_err());
    }
}
