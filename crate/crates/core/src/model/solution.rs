use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

/// Incidence vector of a combinatorial solution over the ground set.
///
/// Ordering is lexicographic on the incidence vector with `false < true`; it is the
/// tie-break used wherever two solutions are otherwise indistinguishable.
/// Serialized as a string of `0`/`1` characters.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub struct BinarySolution {
    bits: Vec<bool>,
}

impl BinarySolution {
    pub fn new(bits: Vec<bool>) -> Self {
        BinarySolution { bits }
    }

    pub fn empty(n: usize) -> Self {
        BinarySolution {
            bits: vec![false; n],
        }
    }

    /// Builds a solution of length `n` with the given elements selected.
    pub fn from_indices(n: usize, indices: impl IntoIterator<Item = usize>) -> Self {
        let mut bits = vec![false; n];
        for i in indices {
            bits[i] = true;
        }
        BinarySolution { bits }
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn get(&self, i: usize) -> bool {
        self.bits[i]
    }

    pub fn set(&mut self, i: usize, value: bool) {
        self.bits[i] = value;
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    /// Indices of the selected elements, ascending.
    pub fn ones(&self) -> Vec<usize> {
        self.bits
            .iter()
            .enumerate()
            .filter_map(|(i, &b)| b.then_some(i))
            .collect()
    }

    pub fn count(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    pub fn dot(&self, costs: &[f64]) -> f64 {
        debug_assert_eq!(costs.len(), self.bits.len());
        self.bits
            .iter()
            .zip(costs)
            .filter(|(&b, _)| b)
            .map(|(_, &c)| c)
            .sum()
    }
}

impl fmt::Display for BinarySolution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.bits {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl FromStr for BinarySolution {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        s.chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(format!("unexpected character {other:?} in a 0/1 string")),
            })
            .collect::<Result<Vec<_>, _>>()
            .map(BinarySolution::new)
    }
}

impl From<BinarySolution> for String {
    fn from(x: BinarySolution) -> String {
        x.to_string()
    }
}

impl TryFrom<String> for BinarySolution {
    type Error = String;

    fn try_from(s: String) -> Result<Self, String> {
        s.parse()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn indices_round_trip() {
        let x = BinarySolution::from_indices(5, [4, 1]);
        assert_eq!(x.ones(), vec![1, 4]);
        assert_eq!(x.count(), 2);
        assert_eq!(x.to_string(), "01001");
        assert_eq!(x.dot(&[1.0, 2.0, 3.0, 4.0, 5.0]), 7.0);
    }

    #[test]
    fn ordering_is_lexicographic() {
        let a = BinarySolution::from_indices(3, [2]);
        let b = BinarySolution::from_indices(3, [1]);
        assert!(a < b);
    }

    #[test]
    fn string_round_trip() {
        let x = BinarySolution::from_indices(4, [1, 3]);
        assert_eq!(x.to_string(), "0101");
        assert_eq!("0101".parse::<BinarySolution>().unwrap(), x);
        assert_eq!(serde_json::to_string(&x).unwrap(), "\"0101\"");
        assert!("01x".parse::<BinarySolution>().is_err());
    }
}
