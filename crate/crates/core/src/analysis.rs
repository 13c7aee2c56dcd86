//! Closed-form thresholds, the first-moment exponent and the phase classifier.
//!
//! Densities are measured in units of `log d / d`: a point `(x, y)` stands for
//! `|I ∩ L| = x (log d / d) n` and `|I ∩ R| = y (log d / d) n`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::balance::check_gamma;
use crate::error::{invalid, Result};

/// Tolerance on the boundary equalities of [`classify_phase`].
pub const PHASE_TOLERANCE: f64 = 1e-12;

/// `1 / (2γ(1 − γ))`: the density of the largest γ-balanced independent set.
pub fn existence_threshold(gamma: f64) -> Result<f64> {
    check_gamma(gamma)?;
    Ok(1.0 / (2.0 * gamma * (1.0 - gamma)))
}

/// `1 / (2γ)`: the density reached by local algorithms.
pub fn algorithmic_threshold(gamma: f64) -> Result<f64> {
    check_gamma(gamma)?;
    Ok(1.0 / (2.0 * gamma))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sign {
    Negative,
    Zero,
    Positive,
}

impl Sign {
    fn of(x: f64) -> Self {
        if x.abs() <= 1e-15 {
            Sign::Zero
        } else if x < 0.0 {
            Sign::Negative
        } else {
            Sign::Positive
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Negative => "negative",
            Sign::Zero => "zero",
            Sign::Positive => "positive",
        })
    }
}

/// The exponent `lim (1/2n) log E[Y_f]` for `f = c log d / d`, where `Y_f`
/// counts γ-balanced independent sets of size `2nf`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExponentReport {
    pub c: f64,
    pub d: f64,
    pub gamma: f64,
    /// `c (1 − 2γ(1 − γ) c)`, the coefficient of `log² d / d`.
    pub leading_coefficient: f64,
    pub value: f64,
    pub sign: Sign,
}

impl ExponentReport {
    /// The full exponent at another `d`.
    pub fn exponent_at(&self, d: f64) -> Result<f64> {
        exponent_value(self.c, d, self.gamma)
    }
}

fn exponent_value(c: f64, d: f64, gamma: f64) -> Result<f64> {
    check_gamma(gamma)?;
    if !(c.is_finite() && c > 0.0) {
        return Err(invalid("c", format!("must be positive, got {c}")));
    }
    if !(d.is_finite() && d > 1.0) {
        return Err(invalid("d", format!("must exceed 1, got {d}")));
    }
    let f = c * d.ln() / d;
    let (a, b) = (gamma * f, (1.0 - gamma) * f);
    if 2.0 * b >= 1.0 {
        return Err(invalid("c", format!("2(1-gamma)f = {} must be below 1", 2.0 * b)));
    }
    Ok(-a * (2.0 * a).ln() - (0.5 - a) * (-2.0 * a).ln_1p() - b * (2.0 * b).ln() - (0.5 - b) * (-2.0 * b).ln_1p()
        - 2.0 * gamma * (1.0 - gamma) * f * f * d)
}

pub fn first_moment_exponent(c: f64, d: f64, gamma: f64) -> Result<ExponentReport> {
    let value = exponent_value(c, d, gamma)?;
    Ok(ExponentReport {
        c,
        d,
        gamma,
        leading_coefficient: c * (1.0 - 2.0 * gamma * (1.0 - gamma) * c),
        value,
        sign: Sign::of(value),
    })
}

/// Smallest `d` (to relative precision `1e-9`) from which the exponent stays
/// negative, for `c` above the existence threshold. Found by doubling, then
/// bisection on the sign.
pub fn d_min(c: f64, gamma: f64) -> Result<f64> {
    let threshold = existence_threshold(gamma)?;
    if c.is_nan() || c <= threshold {
        return Err(invalid("c", format!("must exceed the existence threshold {threshold}, got {c}")));
    }
    let negative = |d: f64| matches!(exponent_value(c, d, gamma), Ok(v) if v < 0.0);
    let mut lo = 1.0 + 1e-9;
    let mut hi = 2.0;
    while !negative(hi) {
        lo = hi;
        hi *= 2.0;
        if hi > 1e300 {
            return Err(invalid("c", "exponent never turns negative"));
        }
    }
    // Past the last positive sample the exponent is eventually negative; make
    // sure no sign change hides between hi and the asymptotic regime.
    let mut probe = hi;
    while probe < 1e12 {
        probe *= 2.0;
        if !negative(probe) {
            lo = probe;
            hi = probe * 2.0;
            while !negative(hi) {
                lo = hi;
                hi *= 2.0;
            }
            probe = hi;
        }
    }
    while hi - lo > 1e-9 * hi {
        let mid = 0.5 * (lo + hi);
        if negative(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhasePoint {
    pub x: f64,
    pub y: f64,
}

impl PhasePoint {
    pub fn new(x: f64, y: f64) -> Result<Self> {
        if !(x.is_finite() && x >= 0.0) {
            return Err(invalid("x", format!("must be a finite non-negative number, got {x}")));
        }
        if !(y.is_finite() && y >= 0.0) {
            return Err(invalid("y", format!("must be a finite non-negative number, got {y}")));
        }
        Ok(Self { x, y })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Phase {
    Easy,
    Hard,
    Nonexistent,
    Boundary,
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Phase::Easy => "EASY",
            Phase::Hard => "HARD",
            Phase::Nonexistent => "NONEXISTENT",
            Phase::Boundary => "BOUNDARY",
        })
    }
}

/// EASY below `min(x, y) = 1`; above it NONEXISTENT where `x + y < xy` and
/// HARD where `x + y > xy`. Points within [`PHASE_TOLERANCE`] of `x = 1`,
/// `y = 1` or `x + y = xy` are BOUNDARY, unless already EASY.
pub fn classify_phase(point: PhasePoint) -> Phase {
    let PhasePoint { x, y } = point;
    let tol = PHASE_TOLERANCE;
    if x < 1.0 - tol || y < 1.0 - tol {
        return Phase::Easy;
    }
    if (x - 1.0).abs() <= tol || (y - 1.0).abs() <= tol {
        return Phase::Boundary;
    }
    let gap = x + y - x * y;
    if gap.abs() <= tol {
        Phase::Boundary
    } else if gap < 0.0 {
        Phase::Nonexistent
    } else {
        Phase::Hard
    }
}

/// Operating point of the degree-1 polynomial:
/// `(1 − ε, (1 − ε) d^ε / log d)`.
pub fn predicted_easy_point(epsilon: f64, d: f64) -> Result<PhasePoint> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(invalid("epsilon", format!("must lie in (0, 1), got {epsilon}")));
    }
    if !(d.is_finite() && d > 1.0) {
        return Err(invalid("d", format!("must exceed 1, got {d}")));
    }
    PhasePoint::new(1.0 - epsilon, (1.0 - epsilon) * d.powf(epsilon) / d.ln())
}
