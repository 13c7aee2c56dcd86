//! The γ-balance condition `| |I∩L| − γ|I| | < 1` on side counts.

use crate::error::{invalid, Result};

pub(crate) fn check_gamma(gamma: f64) -> Result<()> {
    if gamma > 0.0 && gamma <= 0.5 {
        Ok(())
    } else {
        Err(invalid("gamma", format!("must lie in (0, 1/2], got {gamma}")))
    }
}

/// Strict inequality, evaluated exactly as written.
#[inline]
pub fn is_balanced_counts(count_l: usize, count_r: usize, gamma: f64) -> bool {
    let total = (count_l + count_r) as f64;
    (count_l as f64 - gamma * total).abs() < 1.0
}

/// The largest `(a', b')` with `a' ≤ count_l`, `b' ≤ count_r` that is
/// γ-balanced. At the optimum one side is always kept whole; when both choices
/// reach the same total the `R` side is kept whole.
pub fn trim_counts(count_l: usize, count_r: usize, gamma: f64) -> (usize, usize) {
    for total in (0..=count_l + count_r).rev() {
        let keep_r = (total.saturating_sub(count_r), count_r.min(total));
        let keep_l = (count_l.min(total), total.saturating_sub(count_l.min(total)));
        for (a, b) in [keep_r, keep_l] {
            if a <= count_l && b <= count_r && a + b == total && is_balanced_counts(a, b, gamma) {
                return (a, b);
            }
        }
        // Neither side whole: scan the integers near γ·total.
        let centre = (gamma * total as f64).floor() as i64;
        for a in (centre - 1).max(0)..=(centre + 2) {
            let a = a as usize;
            if a <= count_l && a <= total && total - a <= count_r && is_balanced_counts(a, total - a, gamma) {
                return (a, total - a);
            }
        }
    }
    (0, 0)
}
