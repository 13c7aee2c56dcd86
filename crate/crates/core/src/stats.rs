//! Small summary statistics shared by the Monte Carlo drivers.

use serde::{Deserialize, Serialize};

/// Two-sided 99% normal quantile, used for every reported confidence interval.
pub const Z_99: f64 = 2.575_829_303_548_901;

/// Sample mean with its unbiased variance and standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeanEstimate {
    pub samples: usize,
    pub mean: f64,
    /// Unbiased sample variance; 0 for fewer than two samples.
    pub variance: f64,
    pub stderr: f64,
}

impl MeanEstimate {
    pub fn from_samples(xs: &[f64]) -> Self {
        let k = xs.len();
        if k == 0 {
            return Self {
                samples: 0,
                mean: f64::NAN,
                variance: f64::NAN,
                stderr: f64::NAN,
            };
        }
        let mean = xs.iter().sum::<f64>() / k as f64;
        let variance = if k > 1 {
            xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (k - 1) as f64
        } else {
            0.0
        };
        Self {
            samples: k,
            mean,
            variance,
            stderr: (variance / k as f64).sqrt(),
        }
    }

    /// Half-width of the normal-approximation interval at 99%.
    pub fn ci99(&self) -> f64 {
        Z_99 * self.stderr
    }
}

/// Wilson score interval for a binomial proportion.
pub fn wilson_interval(successes: usize, trials: usize, z: f64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let k = trials as f64;
    let p = successes as f64 / k;
    let z2 = z * z;
    let denom = 1.0 + z2 / k;
    let centre = (p + z2 / (2.0 * k)) / denom;
    let half = z * (p * (1.0 - p) / k + z2 / (4.0 * k * k)).sqrt() / denom;
    ((centre - half).max(0.0), (centre + half).min(1.0))
}
