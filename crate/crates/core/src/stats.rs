//! Small statistics helpers shared by the measure modules.

use serde::{Deserialize, Serialize};

/// One histogram bin, density normalized so that `Σ density · width = 1`
/// over every sample (samples outside the range still count in the total).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Bin {
    pub left: f64,
    pub right: f64,
    pub density: f64,
}

/// Fixed-width histogram over `[lo, hi)`; the last bin is closed on the right.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Histogram {
    pub bins: Vec<Bin>,
    pub samples: usize,
}

impl Histogram {
    pub fn new(values: &[f64], lo: f64, hi: f64, width: f64) -> Self {
        assert!(hi > lo && width > 0.0, "invalid histogram range");
        let n_bins = ((hi - lo) / width).round().max(1.0) as usize;
        let mut counts = vec![0usize; n_bins];
        for &v in values {
            if v < lo || v > hi || !v.is_finite() {
                continue;
            }
            let k = (((v - lo) / width) as usize).min(n_bins - 1);
            counts[k] += 1;
        }
        let total = values.len().max(1) as f64;
        let bins = counts
            .into_iter()
            .enumerate()
            .map(|(k, c)| Bin {
                left: lo + k as f64 * width,
                right: lo + (k + 1) as f64 * width,
                density: c as f64 / (total * width),
            })
            .collect();
        Self {
            bins,
            samples: values.len(),
        }
    }

    /// `Σ density · width`.
    pub fn integral(&self) -> f64 {
        self.bins.iter().map(|b| b.density * (b.right - b.left)).sum()
    }
}

/// Mean and standard error of independent samples.
///
/// The standard error is the sample standard deviation over `√n`; it is NaN
/// when fewer than two samples exist.
pub fn mean_and_stderr(values: &[f64]) -> (f64, f64) {
    let n = values.len();
    if n == 0 {
        return (f64::NAN, f64::NAN);
    }
    let mean = values.iter().sum::<f64>() / n as f64;
    if n < 2 {
        return (mean, f64::NAN);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
    (mean, (var / n as f64).sqrt())
}

/// Least-squares line `y = slope · x + intercept`.
pub fn linear_fit(x: &[f64], y: &[f64]) -> (f64, f64) {
    assert_eq!(x.len(), y.len());
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    let slope = sxy / sxx;
    (slope, my - slope * mx)
}
