use crate::generative::Hypothesis;
use crate::lr::ModelTag;

use super::TruthColumn;

/// Models compared against the exact specific-source likelihood ratio.
const COMPARED: [ModelTag; 6] = [
    ModelTag::LrCs,
    ModelTag::SlrCs,
    ModelTag::SlrSsEs,
    ModelTag::SlrSsEu,
    ModelTag::SlrAsy,
    ModelTag::Frstat,
];

/// Agreement statistics of one model against `lr_ss` over one truth column.
/// Records whose value field is an infinity/underflow marker are excluded
/// and counted.
#[derive(Debug, Clone)]
pub struct ModelSummary {
    pub model: ModelTag,
    pub truth: Hypothesis,
    pub n_used: usize,
    pub n_excluded: usize,
    /// Fraction of records where the model exceeds `lr_ss`.
    pub fraction_overestimating: f64,
    /// Fraction with `lr_ss < 1` while the model exceeds 1.
    pub fraction_misleading_high: f64,
    /// Fraction with `lr_ss > 1` while the model is below 1.
    pub fraction_misleading_low: f64,
    pub median_abs_log10_gap: f64,
    /// Spearman rank correlation of the log10 values.
    pub rank_correlation: f64,
}

/// Summarize every compared model over one truth column.
pub fn summarize(column: &TruthColumn) -> Vec<ModelSummary> {
    COMPARED
        .iter()
        .map(|&model| {
            let pairs: Vec<(f64, f64)> = column
                .records
                .iter()
                .filter(|r| !r.lr_ss.is_marked() && !r.by_model(model).is_marked())
                .map(|r| (r.lr_ss.log10_value, r.by_model(model).log10_value))
                .collect();
            let n_used = pairs.len();
            let n_excluded = column.records.len() - n_used;
            let nf = n_used as f64;
            let over = pairs.iter().filter(|(ss, m)| m > ss).count() as f64 / nf;
            let high = pairs.iter().filter(|(ss, m)| *ss < 0.0 && *m > 0.0).count() as f64 / nf;
            let low = pairs.iter().filter(|(ss, m)| *ss > 0.0 && *m < 0.0).count() as f64 / nf;
            let mut gaps: Vec<f64> = pairs.iter().map(|(ss, m)| (m - ss).abs()).collect();
            ModelSummary {
                model,
                truth: column.truth,
                n_used,
                n_excluded,
                fraction_overestimating: over,
                fraction_misleading_high: high,
                fraction_misleading_low: low,
                median_abs_log10_gap: median(&mut gaps),
                rank_correlation: spearman(&pairs),
            }
        })
        .collect()
}

fn median(values: &mut [f64]) -> f64 {
    if values.is_empty() {
        return f64::NAN;
    }
    values.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = values.len();
    if n % 2 == 1 {
        values[n / 2]
    } else {
        0.5 * (values[n / 2 - 1] + values[n / 2])
    }
}

/// Average ranks (ties shared), then Pearson correlation of the ranks.
fn spearman(pairs: &[(f64, f64)]) -> f64 {
    if pairs.len() < 2 {
        return f64::NAN;
    }
    let xr = ranks(pairs.iter().map(|p| p.0));
    let yr = ranks(pairs.iter().map(|p| p.1));
    pearson(&xr, &yr)
}

fn ranks(values: impl Iterator<Item = f64>) -> Vec<f64> {
    let vals: Vec<f64> = values.collect();
    let mut idx: Vec<usize> = (0..vals.len()).collect();
    idx.sort_by(|&a, &b| vals[a].partial_cmp(&vals[b]).unwrap());
    let mut out = vec![0.0; vals.len()];
    let mut i = 0;
    while i < idx.len() {
        let mut j = i;
        while j + 1 < idx.len() && vals[idx[j + 1]] == vals[idx[i]] {
            j += 1;
        }
        let shared = (i + j) as f64 / 2.0 + 1.0;
        for &k in &idx[i..=j] {
            out[k] = shared;
        }
        i = j + 1;
    }
    out
}

fn pearson(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        let (dx, dy) = (a - mx, b - my);
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    sxy / (sxx * syy).sqrt()
}

impl std::fmt::Display for ModelSummary {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{:>9} vs LR_SS [truth {}]: used {} (excluded {}), P(model > LR_SS) = {:.3}, \
             misleading high/low = {:.3}/{:.3}, median |log10 gap| = {:.4}, rank corr = {:.4}",
            self.model.as_str(),
            match self.truth {
                Hypothesis::H0 => "H0_SS",
                Hypothesis::H1 => "H1_SS",
            },
            self.n_used,
            self.n_excluded,
            self.fraction_overestimating,
            self.fraction_misleading_high,
            self.fraction_misleading_low,
            self.median_abs_log10_gap,
            self.rank_correlation,
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_helpers() {
        assert_eq!(ranks([3.0, 1.0, 2.0].into_iter()), vec![3.0, 1.0, 2.0]);
        assert_eq!(ranks([1.0, 1.0, 2.0].into_iter()), vec![1.5, 1.5, 3.0]);
        let x = [1.0, 2.0, 3.0, 4.0];
        let y = [2.0, 4.0, 6.0, 8.0];
        assert!((pearson(&x, &y) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn median_of_even_and_odd() {
        assert_eq!(median(&mut [3.0, 1.0, 2.0]), 2.0);
        assert_eq!(median(&mut [4.0, 1.0, 2.0, 3.0]), 2.5);
    }
}
