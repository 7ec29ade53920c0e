use crate::error::{Error, Result};
use crate::stats::LN_2PI;

/// Density floor keeping log-density ratios finite far from the sample.
const DENSITY_FLOOR: f64 = 1e-300;

/// Minimum sample size for a usable estimate.
const MIN_SAMPLE: usize = 50;

/// Gaussian-kernel density estimate over a one-dimensional sample.
///
/// Bandwidth follows Silverman's rule, `0.9 * min(sd, iqr/1.34) * n^(-1/5)`.
#[derive(Debug, Clone)]
pub struct Kde1D {
    sample: Vec<f64>, // sorted
    bandwidth: f64,
}

impl Kde1D {
    pub fn build(sample: &[f64]) -> Result<Self> {
        if sample.len() < MIN_SAMPLE {
            return Err(Error::Estimation(format!(
                "sample too small for density estimation: {} < {MIN_SAMPLE}",
                sample.len()
            )));
        }
        if sample.iter().any(|x| !x.is_finite()) {
            return Err(Error::Estimation("sample contains non-finite values".into()));
        }
        let mut sorted = sample.to_vec();
        sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());

        let n = sorted.len() as f64;
        let mean = sorted.iter().sum::<f64>() / n;
        let sd = (sorted.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1.0)).sqrt();
        let iqr = quantile(&sorted, 0.75) - quantile(&sorted, 0.25);
        let spread = sd.min(iqr / 1.34);
        if !(spread > 0.0) {
            return Err(Error::Estimation("sample has zero spread".into()));
        }
        let bandwidth = 0.9 * spread * n.powf(-0.2);
        Ok(Self { sample: sorted, bandwidth })
    }

    pub fn bandwidth(&self) -> f64 {
        self.bandwidth
    }

    pub fn len(&self) -> usize {
        self.sample.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sample.is_empty()
    }

    /// Sample range widened by `k` bandwidths on each side.
    pub fn support(&self, k: f64) -> (f64, f64) {
        (
            self.sample[0] - k * self.bandwidth,
            self.sample[self.sample.len() - 1] + k * self.bandwidth,
        )
    }

    /// Log density at `x`, floored at `ln(1e-300)`.
    pub fn log_pdf(&self, x: f64) -> f64 {
        let h = self.bandwidth;
        // nearest sample point bounds the dominant kernel term
        let idx = self.sample.partition_point(|&v| v < x);
        let mut z_min = f64::INFINITY;
        if idx < self.sample.len() {
            z_min = z_min.min((self.sample[idx] - x).abs() / h);
        }
        if idx > 0 {
            z_min = z_min.min((x - self.sample[idx - 1]).abs() / h);
        }
        // kernels with z^2 - z_min^2 > 1500 underflow relative to the
        // dominant term, so restrict to a window around x
        let w = h * (z_min * z_min + 1500.0).sqrt();
        let lo = self.sample.partition_point(|&v| v < x - w);
        let hi = self.sample.partition_point(|&v| v <= x + w);
        let shift = -0.5 * z_min * z_min;
        let mut acc = 0.0;
        for &v in &self.sample[lo..hi] {
            let z = (x - v) / h;
            acc += (-0.5 * z * z - shift).exp();
        }
        let log_pdf = shift + acc.ln() - (self.sample.len() as f64 * h).ln() - 0.5 * LN_2PI;
        log_pdf.max(DENSITY_FLOOR.ln())
    }

    pub fn pdf(&self, x: f64) -> f64 {
        self.log_pdf(x).exp()
    }
}

/// Linearly interpolated sample quantile (type 7) of a sorted slice.
fn quantile(sorted: &[f64], p: f64) -> f64 {
    let n = sorted.len();
    let pos = p * (n - 1) as f64;
    let lo = pos.floor() as usize;
    let frac = pos - lo as f64;
    if lo + 1 < n {
        sorted[lo] * (1.0 - frac) + sorted[lo + 1] * frac
    } else {
        sorted[n - 1]
    }
}
