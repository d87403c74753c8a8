//! Core domain types: cost scenarios, uncertainty ranges, weight functions and
//! regret profiles.

mod envelope;
mod solution;
mod weight;

pub use envelope::{upper_envelope, AffinePiece, ProfileSegment, RegretProfile};
pub use solution::BinarySolution;
pub use weight::{weight_moments, WeightFunction};

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Breakpoints closer than this are treated as the same λ.
pub const EPS_LAMBDA: f64 = 1e-9;

/// Allowed mismatch of adjacent profile pieces at a shared breakpoint.
pub fn continuity_tolerance(value: f64) -> f64 {
    1e-6 * (1.0 + value.abs())
}

/// Nominal scenario `ĉ ≥ 0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct NominalCosts(Vec<f64>);

impl NominalCosts {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if let Some((i, v)) = values
            .iter()
            .enumerate()
            .find(|(_, v)| !(v.is_finite() && **v >= 0.0))
        {
            return Err(Error::Domain(format!(
                "nominal cost {i} must be finite and non-negative, got {v}"
            )));
        }
        Ok(NominalCosts(values))
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn total(&self) -> f64 {
        self.0.iter().sum()
    }
}

impl TryFrom<Vec<f64>> for NominalCosts {
    type Error = Error;

    fn try_from(values: Vec<f64>) -> Result<Self> {
        NominalCosts::new(values)
    }
}

impl From<NominalCosts> for Vec<f64> {
    fn from(c: NominalCosts) -> Self {
        c.0
    }
}

impl AsRef<[f64]> for NominalCosts {
    fn as_ref(&self) -> &[f64] {
        &self.0
    }
}

/// Range `Λ = [lo, hi]` of uncertainty sizes, `0 ≤ lo ≤ hi`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LambdaInterval {
    lo: f64,
    hi: f64,
}

impl LambdaInterval {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite() && 0.0 <= lo && lo <= hi) {
            return Err(Error::Domain(format!(
                "invalid uncertainty range [{lo}, {hi}]; need 0 ≤ lo ≤ hi"
            )));
        }
        Ok(LambdaInterval { lo, hi })
    }

    pub fn unit() -> Self {
        LambdaInterval { lo: 0.0, hi: 1.0 }
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    pub fn is_degenerate(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains(&self, lambda: f64) -> bool {
        self.lo - EPS_LAMBDA <= lambda && lambda <= self.hi + EPS_LAMBDA
    }

    /// Interval uncertainty needs `(1−λ)ĉ ≥ 0`, i.e. `Λ ⊆ [0, 1]`.
    pub fn require_interval_shape(&self) -> Result<()> {
        if self.hi > 1.0 {
            return Err(Error::Domain(format!(
                "interval uncertainty requires Λ ⊆ [0, 1], got [{}, {}]",
                self.lo, self.hi
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum UncertaintyShape {
    /// `𝒰(λ) = ∏ [(1−λ)ĉᵢ, (1+λ)ĉᵢ]`.
    IntervalRelative,
    /// `𝒰(λ) = { ĉ + Cξ : ‖ξ‖₂ ≤ λ }` with `C` of shape `n × m`.
    Ellipsoid(DMatrix<f64>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct UncertaintySpec {
    shape: UncertaintyShape,
    nominal: NominalCosts,
    lambda_range: LambdaInterval,
}

impl UncertaintySpec {
    pub fn new(
        shape: UncertaintyShape,
        nominal: NominalCosts,
        lambda_range: LambdaInterval,
    ) -> Result<Self> {
        match &shape {
            UncertaintyShape::IntervalRelative => lambda_range.require_interval_shape()?,
            UncertaintyShape::Ellipsoid(c) => {
                if c.nrows() != nominal.len() {
                    return Err(Error::Domain(format!(
                        "ellipsoid matrix has {} rows but there are {} costs",
                        c.nrows(),
                        nominal.len()
                    )));
                }
            }
        }
        Ok(UncertaintySpec {
            shape,
            nominal,
            lambda_range,
        })
    }

    pub fn shape(&self) -> &UncertaintyShape {
        &self.shape
    }

    pub fn nominal(&self) -> &NominalCosts {
        &self.nominal
    }

    pub fn lambda_range(&self) -> LambdaInterval {
        self.lambda_range
    }
}

/// Worst-case regret scenario for `x` at size `λ`: `(1+λ)ĉᵢ` on selected
/// elements, `(1−λ)ĉᵢ` elsewhere.
pub fn effective_cost(x: &BinarySolution, lambda: f64, nominal: &[f64]) -> Result<Vec<f64>> {
    if !(0.0..=1.0).contains(&lambda) {
        return Err(Error::Domain(format!(
            "uncertainty size λ={lambda} outside [0, 1]"
        )));
    }
    if x.len() != nominal.len() {
        return Err(Error::Usage(format!(
            "solution has {} entries but there are {} costs",
            x.len(),
            nominal.len()
        )));
    }
    Ok(effective_cost_unchecked(x, lambda, nominal))
}

pub(crate) fn effective_cost_unchecked(x: &BinarySolution, lambda: f64, nominal: &[f64]) -> Vec<f64> {
    nominal
        .iter()
        .zip(x.bits())
        .map(|(&c, &b)| if b { (1.0 + lambda) * c } else { (1.0 - lambda) * c })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn effective_cost_cases() {
        let nominal = [10.0, 10.0];
        let x = BinarySolution::from_indices(2, [0]);
        let c = effective_cost(&x, 0.3, &nominal).unwrap();
        assert!((c[0] - 13.0).abs() < 1e-12);
        assert!((c[1] - 7.0).abs() < 1e-12);
        assert_eq!(effective_cost(&x, 0.0, &nominal).unwrap(), nominal.to_vec());
    }

    #[test]
    fn effective_cost_rejects_out_of_range() {
        let x = BinarySolution::empty(1);
        assert!(matches!(effective_cost(&x, 1.5, &[1.0]), Err(Error::Domain(_))));
        assert!(matches!(effective_cost(&x, -0.1, &[1.0]), Err(Error::Domain(_))));
        assert!(matches!(effective_cost(&x, 0.5, &[1.0, 2.0]), Err(Error::Usage(_))));
    }

    #[test]
    fn nominal_costs_must_be_non_negative() {
        assert!(NominalCosts::new(vec![1.0, -1.0]).is_err());
        assert!(NominalCosts::new(vec![f64::NAN]).is_err());
        assert!(NominalCosts::new(vec![0.0, 3.0]).is_ok());
    }

    #[test]
    fn interval_shape_rejects_ranges_beyond_one() {
        let r = LambdaInterval::new(0.0, 1.5).unwrap();
        let spec = UncertaintySpec::new(
            UncertaintyShape::IntervalRelative,
            NominalCosts::new(vec![1.0]).unwrap(),
            r,
        );
        assert!(matches!(spec, Err(Error::Domain(_))));
        assert!(LambdaInterval::new(0.6, 0.2).is_err());
    }

    proptest! {
        #[test]
        fn effective_cost_is_non_negative(
            costs in proptest::collection::vec(0.0f64..100.0, 1..20),
            mask in proptest::collection::vec(any::<bool>(), 20),
            lambda in 0.0f64..=1.0,
        ) {
            let x = BinarySolution::new(mask[..costs.len()].to_vec());
            let c = effective_cost(&x, lambda, &costs).unwrap();
            prop_assert!(c.iter().all(|&v| v >= 0.0));
        }
    }
}
