use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::LambdaInterval;

/// Piecewise-linear weight `w: Λ → ℝ₊`, linearly interpolated between breakpoints.
///
/// The first breakpoint is `Λ.lo` and the last is `Λ.hi`. A single breakpoint
/// describes a degenerate range `Λ = {λ}` whose integrals are all zero.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<(f64, f64)>", into = "Vec<(f64, f64)>")]
pub struct WeightFunction {
    points: Vec<(f64, f64)>,
}

impl WeightFunction {
    pub fn new(points: Vec<(f64, f64)>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::Domain("weight function needs at least one breakpoint".into()));
        }
        for &(lambda, w) in &points {
            if !lambda.is_finite() || !w.is_finite() {
                return Err(Error::Domain(format!(
                    "non-finite weight breakpoint ({lambda}, {w})"
                )));
            }
            if w < 0.0 {
                return Err(Error::Domain(format!("negative weight {w} at λ={lambda}")));
            }
        }
        if points[0].0 < 0.0 {
            return Err(Error::Domain(format!(
                "uncertainty sizes must be non-negative, got λ={}",
                points[0].0
            )));
        }
        if let Some(pair) = points.windows(2).find(|p| p[1].0 <= p[0].0) {
            return Err(Error::Domain(format!(
                "weight breakpoints must be strictly increasing in λ ({} then {})",
                pair[0].0, pair[1].0
            )));
        }
        if points.iter().all(|&(_, w)| w == 0.0) {
            return Err(Error::Domain("weight function is identically zero".into()));
        }
        Ok(WeightFunction { points })
    }

    /// `w ≡ 1` on `[0, 1]`.
    pub fn uniform() -> Self {
        WeightFunction {
            points: vec![(0.0, 1.0), (1.0, 1.0)],
        }
    }

    pub fn constant(range: LambdaInterval, value: f64) -> Result<Self> {
        if range.is_degenerate() {
            WeightFunction::new(vec![(range.lo(), value)])
        } else {
            WeightFunction::new(vec![(range.lo(), value), (range.hi(), value)])
        }
    }

    pub fn breakpoints(&self) -> &[(f64, f64)] {
        &self.points
    }

    pub fn range(&self) -> LambdaInterval {
        let lo = self.points[0].0;
        let hi = self.points[self.points.len() - 1].0;
        LambdaInterval::new(lo, hi).expect("validated at construction")
    }

    /// Value at `lambda`; zero outside the range.
    pub fn eval(&self, lambda: f64) -> f64 {
        let pts = &self.points;
        if pts.len() == 1 {
            return if lambda == pts[0].0 { pts[0].1 } else { 0.0 };
        }
        if lambda < pts[0].0 || lambda > pts[pts.len() - 1].0 {
            return 0.0;
        }
        let k = pts.partition_point(|&(l, _)| l <= lambda).clamp(1, pts.len() - 1);
        interpolate(pts[k - 1], pts[k], lambda)
    }

    /// Multiplies every weight by `factor > 0`.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        if !(factor > 0.0 && factor.is_finite()) {
            return Err(Error::Domain(format!("scale factor must be positive, got {factor}")));
        }
        WeightFunction::new(self.points.iter().map(|&(l, w)| (l, w * factor)).collect())
    }

    /// `(∫ₐᵇ w, ∫ₐᵇ λ·w)`, exact per linear segment.
    pub fn moments(&self, a: f64, b: f64) -> Result<(f64, f64)> {
        if !(a.is_finite() && b.is_finite()) {
            return Err(Error::Domain(format!("non-finite integration bounds [{a}, {b}]")));
        }
        if a > b {
            return Err(Error::Domain(format!("integration bounds reversed: a={a} > b={b}")));
        }
        let range = self.range();
        let slack = 1e-12 * (1.0 + range.hi().abs());
        if a < range.lo() - slack || b > range.hi() + slack {
            return Err(Error::Domain(format!(
                "[{a}, {b}] is not contained in the weight range [{}, {}]",
                range.lo(),
                range.hi()
            )));
        }
        let (a, b) = (a.max(range.lo()), b.min(range.hi()));
        let mut m0 = 0.0;
        let mut m1 = 0.0;
        for seg in self.points.windows(2) {
            let (p, q) = (seg[0], seg[1]);
            let u = a.max(p.0);
            let v = b.min(q.0);
            if v <= u {
                continue;
            }
            let wu = interpolate(p, q, u);
            let wv = interpolate(p, q, v);
            let h = v - u;
            m0 += 0.5 * h * (wu + wv);
            // Simpson is exact for the quadratic λ·w(λ).
            m1 += h / 6.0 * (u * (2.0 * wu + wv) + v * (wu + 2.0 * wv));
        }
        Ok((m0, m1))
    }

    /// `∫_Λ w`.
    pub fn total_mass(&self) -> f64 {
        let r = self.range();
        self.moments(r.lo(), r.hi()).map(|m| m.0).unwrap_or(0.0)
    }

    /// Weighted centroid `∫λw / ∫w` of `[a, b]`, or `None` when `w` has no mass there.
    pub fn centroid(&self, a: f64, b: f64) -> Result<Option<f64>> {
        let (m0, m1) = self.moments(a, b)?;
        if m0 > 0.0 {
            Ok(Some((m1 / m0).clamp(a, b)))
        } else {
            Ok(None)
        }
    }
}

fn interpolate(p: (f64, f64), q: (f64, f64), lambda: f64) -> f64 {
    let t = (lambda - p.0) / (q.0 - p.0);
    p.1 + (q.1 - p.1) * t
}

impl TryFrom<Vec<(f64, f64)>> for WeightFunction {
    type Error = Error;

    fn try_from(points: Vec<(f64, f64)>) -> Result<Self> {
        WeightFunction::new(points)
    }
}

impl From<WeightFunction> for Vec<(f64, f64)> {
    fn from(w: WeightFunction) -> Self {
        w.points
    }
}

/// `(m0, m1) = (∫ₐᵇ w dλ, ∫ₐᵇ λ w dλ)`.
pub fn weight_moments(w: &WeightFunction, a: f64, b: f64) -> Result<(f64, f64)> {
    w.moments(a, b)
}
