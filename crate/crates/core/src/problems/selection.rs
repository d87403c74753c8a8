use crate::error::{Error, Result};
use crate::model::{BinarySolution, NominalCosts};
use crate::problems::{check_costs, CombinatorialProblem};

/// Choose exactly `p` of `n` items.
#[derive(Debug, Clone, PartialEq)]
pub struct SelectionInstance {
    p: usize,
    nominal: NominalCosts,
}

impl SelectionInstance {
    pub fn new(p: usize, nominal: NominalCosts) -> Result<Self> {
        let n = nominal.len();
        if p == 0 || p > n {
            return Err(Error::Domain(format!("selection needs 1 ≤ p ≤ n, got p={p}, n={n}")));
        }
        Ok(SelectionInstance { p, nominal })
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn n(&self) -> usize {
        self.nominal.len()
    }
}

fn binomial(n: usize, k: usize) -> u128 {
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

impl CombinatorialProblem for SelectionInstance {
    fn dimension(&self) -> usize {
        self.nominal.len()
    }

    fn nominal(&self) -> &NominalCosts {
        &self.nominal
    }

    fn solve_nominal(&self, costs: &[f64]) -> Result<(BinarySolution, f64)> {
        check_costs(costs, self.n())?;
        let mut order: Vec<usize> = (0..self.n()).collect();
        order.sort_by(|&a, &b| costs[a].total_cmp(&costs[b]).then(a.cmp(&b)));
        let chosen = &order[..self.p];
        let value = chosen.iter().map(|&i| costs[i]).sum();
        Ok((BinarySolution::from_indices(self.n(), chosen.iter().copied()), value))
    }

    fn is_feasible(&self, x: &BinarySolution) -> bool {
        x.len() == self.n() && x.count() == self.p
    }

    fn enumerate_solutions(&self, limit: usize) -> Result<Vec<BinarySolution>> {
        let (n, p) = (self.n(), self.p);
        let total = binomial(n, p);
        if total > limit as u128 {
            return Err(Error::Capacity {
                what: format!("C({n}, {p}) = {total} selections"),
                limit,
            });
        }
        let mut out = Vec::with_capacity(total as usize);
        let mut idx: Vec<usize> = (0..p).collect();
        loop {
            out.push(BinarySolution::from_indices(n, idx.iter().copied()));
            // Advance to the next combination in lexicographic order.
            let Some(pos) = (0..p).rev().find(|&i| idx[i] < n - p + i) else {
                break;
            };
            idx[pos] += 1;
            for j in pos + 1..p {
                idx[j] = idx[j - 1] + 1;
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn inst(p: usize, c: &[f64]) -> SelectionInstance {
        SelectionInstance::new(p, NominalCosts::new(c.to_vec()).unwrap()).unwrap()
    }

    #[test]
    fn picks_cheapest_with_index_tie_break() {
        let s = inst(2, &[3.0, 1.0, 4.0, 1.0]);
        let (x, v) = s.solve_nominal(&[3.0, 1.0, 4.0, 1.0]).unwrap();
        assert_eq!(x.ones(), vec![1, 3]);
        assert_eq!(v, 2.0);
    }

    #[test]
    fn feasibility_is_cardinality() {
        let s = inst(2, &[1.0; 4]);
        assert!(s.is_feasible(&BinarySolution::from_indices(4, [0, 1])));
        assert!(!s.is_feasible(&BinarySolution::from_indices(4, [0])));
    }

    #[test]
    fn enumerates_all_subsets() {
        let s = inst(2, &[1.0; 4]);
        let all = s.enumerate_solutions(100).unwrap();
        assert_eq!(all.len(), 6);
        assert!(all.iter().all(|x| s.is_feasible(x)));
        let s = inst(3, &[1.0; 10]);
        assert_eq!(s.enumerate_solutions(120).unwrap().len(), 120);
        assert!(matches!(s.enumerate_solutions(119), Err(Error::Capacity { .. })));
    }

    #[test]
    fn rejects_bad_cardinality() {
        assert!(SelectionInstance::new(0, NominalCosts::new(vec![1.0]).unwrap()).is_err());
        assert!(SelectionInstance::new(2, NominalCosts::new(vec![1.0]).unwrap()).is_err());
    }
}
