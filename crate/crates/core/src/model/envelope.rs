use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::model::{continuity_tolerance, BinarySolution, LambdaInterval, EPS_LAMBDA};

/// Affine function `λ ↦ slope·λ + intercept` defined by a regret witness.
#[derive(Debug, Clone, PartialEq)]
pub struct AffinePiece {
    pub slope: f64,
    pub intercept: f64,
    pub witness: BinarySolution,
}

impl AffinePiece {
    pub fn new(slope: f64, intercept: f64, witness: BinarySolution) -> Self {
        AffinePiece {
            slope,
            intercept,
            witness,
        }
    }

    /// The regret function `c(x,λ)ᵗ(x − y)` of `owner` against `witness`.
    ///
    /// Elements where `x` and `y` disagree contribute `ĉᵢ` to the slope; the
    /// intercept is the nominal cost difference `ĉᵗx − ĉᵗy`.
    pub fn regret_line(owner: &BinarySolution, witness: BinarySolution, nominal: &[f64]) -> Self {
        let mut slope = 0.0;
        let mut intercept = 0.0;
        for (i, &c) in nominal.iter().enumerate() {
            match (owner.get(i), witness.get(i)) {
                (true, false) => {
                    slope += c;
                    intercept += c;
                }
                (false, true) => {
                    slope += c;
                    intercept -= c;
                }
                _ => {}
            }
        }
        AffinePiece::new(slope, intercept, witness)
    }

    pub fn eval(&self, lambda: f64) -> f64 {
        self.slope * lambda + self.intercept
    }

    /// Abscissa where two non-parallel pieces meet.
    pub fn intersection(&self, other: &AffinePiece) -> Option<f64> {
        let ds = self.slope - other.slope;
        if ds == 0.0 {
            return None;
        }
        let x = (other.intercept - self.intercept) / ds;
        x.is_finite().then_some(x)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProfileSegment {
    pub lo: f64,
    pub hi: f64,
    pub piece: AffinePiece,
}

/// Convex piecewise-linear function over a λ-range, stored as consecutive segments.
#[derive(Debug, Clone, PartialEq)]
pub struct RegretProfile {
    segments: Vec<ProfileSegment>,
    owner: Option<BinarySolution>,
}

impl RegretProfile {
    pub fn from_segments(segments: Vec<ProfileSegment>) -> Result<Self> {
        if segments.is_empty() {
            return Err(Error::Usage("a profile needs at least one segment".into()));
        }
        Ok(RegretProfile {
            segments,
            owner: None,
        })
    }

    pub fn with_owner(mut self, owner: BinarySolution) -> Self {
        self.owner = Some(owner);
        self
    }

    pub fn owner(&self) -> Option<&BinarySolution> {
        self.owner.as_ref()
    }

    pub fn segments(&self) -> &[ProfileSegment] {
        &self.segments
    }

    pub fn range(&self) -> LambdaInterval {
        let lo = self.segments[0].lo;
        let hi = self.segments[self.segments.len() - 1].hi;
        LambdaInterval::new(lo, hi).expect("profile range is ordered")
    }

    /// Breakpoints strictly inside the range.
    pub fn interior_breakpoints(&self) -> Vec<f64> {
        self.segments[1..].iter().map(|s| s.lo).collect()
    }

    pub fn witnesses(&self) -> impl Iterator<Item = &BinarySolution> {
        self.segments.iter().map(|s| &s.piece.witness)
    }

    pub fn max_slope(&self) -> f64 {
        self.segments
            .iter()
            .map(|s| s.piece.slope.abs())
            .fold(0.0, f64::max)
    }

    /// Value at `lambda`, extrapolating the boundary pieces outside the range.
    pub fn eval(&self, lambda: f64) -> f64 {
        let k = self
            .segments
            .partition_point(|s| s.hi < lambda)
            .min(self.segments.len() - 1);
        self.segments[k].piece.eval(lambda)
    }

    /// Checks partition, continuity and convexity; returns a description of the
    /// first violation.
    pub fn validate(&self) -> std::result::Result<(), String> {
        for s in &self.segments {
            if s.hi < s.lo {
                return Err(format!("segment [{}, {}] is reversed", s.lo, s.hi));
            }
        }
        if self.segments.len() > 1 && self.segments.iter().any(|s| s.hi <= s.lo) {
            return Err("empty segment in a multi-segment profile".into());
        }
        for pair in self.segments.windows(2) {
            let (a, b) = (&pair[0], &pair[1]);
            if a.hi != b.lo {
                return Err(format!("gap between {} and {}", a.hi, b.lo));
            }
            let (va, vb) = (a.piece.eval(a.hi), b.piece.eval(b.lo));
            if (va - vb).abs() > continuity_tolerance(va) {
                return Err(format!("discontinuity at λ={}: {va} vs {vb}", a.hi));
            }
            if b.piece.slope < a.piece.slope {
                return Err(format!(
                    "slopes decrease at λ={}: {} then {}",
                    a.hi, a.piece.slope, b.piece.slope
                ));
            }
        }
        Ok(())
    }
}

/// Tie order among pieces of equal slope: larger intercept first, then smaller witness.
fn piece_order(a: &AffinePiece, b: &AffinePiece) -> Ordering {
    a.slope
        .total_cmp(&b.slope)
        .then(b.intercept.total_cmp(&a.intercept))
        .then_with(|| a.witness.cmp(&b.witness))
}

/// `true` if `mid` never strictly exceeds `max(left, right)` on the real line.
/// Slopes satisfy `left < mid < right`.
fn is_redundant(left: &AffinePiece, mid: &AffinePiece, right: &AffinePiece) -> bool {
    (left.intercept - right.intercept) * (mid.slope - left.slope)
        <= (left.intercept - mid.intercept) * (right.slope - left.slope)
}

fn best_at(pieces: &[AffinePiece], lambda: f64) -> &AffinePiece {
    pieces
        .iter()
        .min_by(|a, b| {
            b.eval(lambda)
                .total_cmp(&a.eval(lambda))
                .then_with(|| a.witness.cmp(&b.witness))
        })
        .expect("non-empty")
}

/// Pointwise maximum of `pieces` over `range` as a [`RegretProfile`].
///
/// Slope-sorted sweep that discards dominated lines, then clips the hull to
/// `range`; segments shorter than [`EPS_LAMBDA`] are merged into their neighbours.
pub fn upper_envelope(pieces: &[AffinePiece], range: LambdaInterval) -> Result<RegretProfile> {
    if pieces.is_empty() {
        return Err(Error::Usage("upper envelope of an empty set of pieces".into()));
    }
    let (lo, hi) = (range.lo(), range.hi());
    if hi - lo <= EPS_LAMBDA {
        let best = best_at(pieces, 0.5 * (lo + hi)).clone();
        return RegretProfile::from_segments(vec![ProfileSegment { lo, hi, piece: best }]);
    }

    let mut sorted: Vec<&AffinePiece> = pieces.iter().collect();
    sorted.sort_by(|a, b| piece_order(a, b));
    sorted.dedup_by(|later, earlier| later.slope == earlier.slope);

    let mut hull: Vec<&AffinePiece> = Vec::with_capacity(sorted.len());
    for p in sorted {
        while hull.len() >= 2 && is_redundant(hull[hull.len() - 2], hull[hull.len() - 1], p) {
            hull.pop();
        }
        hull.push(p);
    }

    // Clip to the range, dropping pieces whose share is shorter than EPS_LAMBDA.
    let mut kept: Vec<&AffinePiece> = hull;
    loop {
        let bounds = segment_bounds(&kept, lo, hi);
        let before = kept.len();
        let mut next = Vec::with_capacity(before);
        for (i, p) in kept.iter().enumerate() {
            if bounds[i + 1] - bounds[i] > EPS_LAMBDA {
                next.push(*p);
            }
        }
        if next.is_empty() {
            next.push(best_at(pieces, 0.5 * (lo + hi)));
        }
        let done = next.len() == before;
        kept = next;
        if done {
            break;
        }
    }

    let bounds = segment_bounds(&kept, lo, hi);
    let segments = kept
        .iter()
        .enumerate()
        .map(|(i, p)| ProfileSegment {
            lo: bounds[i],
            hi: bounds[i + 1],
            piece: (*p).clone(),
        })
        .collect();
    RegretProfile::from_segments(segments)
}

fn segment_bounds(lines: &[&AffinePiece], lo: f64, hi: f64) -> Vec<f64> {
    let mut bounds = Vec::with_capacity(lines.len() + 1);
    bounds.push(lo);
    for pair in lines.windows(2) {
        let prev = *bounds.last().unwrap();
        let x = pair[0].intersection(pair[1]).unwrap_or(prev);
        bounds.push(x.clamp(prev, hi));
    }
    bounds.push(hi);
    bounds
}
