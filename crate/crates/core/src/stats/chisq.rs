use crate::error::{require, Error, Result};
use crate::stats::{RngStream, LN_2PI};
use statrs::function::gamma::{gamma_lr, gamma_ur, ln_gamma};

/// Default relative truncation tolerance for the noncentral series.
const SERIES_TOL: f64 = 1e-15;

/// Law of `scale * X` where `X` follows a chi-squared distribution with one
/// degree of freedom and noncentrality `lambda`.
///
/// This is the distribution of `(A - B)^2` for independent normals `A`, `B`:
/// with `A - B ~ N(m, v)` the squared difference is `v * chisq1(m^2 / v)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaledChiSq1 {
    scale: f64,
    noncentrality: f64,
}

impl ScaledChiSq1 {
    pub fn new(scale: f64, noncentrality: f64) -> Result<Self> {
        require(scale.is_finite() && scale > 0.0, || {
            format!("chi-squared scale must be > 0, got {scale}")
        })?;
        require(noncentrality.is_finite() && noncentrality >= 0.0, || {
            format!("noncentrality must be >= 0, got {noncentrality}")
        })?;
        Ok(Self { scale, noncentrality })
    }

    /// Law of `(A - B)^2` when `A - B ~ N(mean_diff, var_diff)`.
    pub fn of_squared_difference(mean_diff: f64, var_diff: f64) -> Result<Self> {
        Self::new(var_diff, mean_diff * mean_diff / var_diff)
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn noncentrality(&self) -> f64 {
        self.noncentrality
    }

    /// Log density at `x > 0`. The density diverges as `x^(-1/2)` at the
    /// origin, so `x <= 0` is a domain error; ratio operations that need the
    /// `x -> 0` limit handle it analytically (see the score-based models).
    pub fn log_pdf(&self, x: f64) -> Result<f64> {
        self.log_pdf_with_tol(x, SERIES_TOL)
    }

    /// `log_pdf` with an explicit series truncation tolerance. Exposed so the
    /// truncation-robustness property can be checked; use [`Self::log_pdf`]
    /// otherwise.
    pub fn log_pdf_with_tol(&self, x: f64, tol: f64) -> Result<f64> {
        if !(x > 0.0) {
            return Err(Error::Domain(format!(
                "chi-squared density requires x > 0, got {x}"
            )));
        }
        let y = x / self.scale;
        Ok(noncentral_chisq1_log_pdf(y, self.noncentrality, tol) - self.scale.ln())
    }

    /// P(X <= x). Zero at the support boundary `x = 0`.
    pub fn cdf(&self, x: f64) -> Result<f64> {
        self.tail(x, Tail::Lower)
    }

    /// Survival function P(X > x), computed from the upper incomplete gamma
    /// series directly so values near 0 keep full relative precision.
    pub fn sf(&self, x: f64) -> Result<f64> {
        self.tail(x, Tail::Upper)
    }

    fn tail(&self, x: f64, tail: Tail) -> Result<f64> {
        if !(x >= 0.0) {
            return Err(Error::Domain(format!(
                "chi-squared cdf requires x >= 0, got {x}"
            )));
        }
        if x == 0.0 {
            return Ok(match tail {
                Tail::Lower => 0.0,
                Tail::Upper => 1.0,
            });
        }
        let y = x / self.scale;
        Ok(noncentral_chisq1_tail(y, self.noncentrality, tail))
    }

    /// Draw one variate: `scale * (Z + sqrt(lambda))^2` with `Z` standard normal.
    pub fn sample(&self, stream: &mut RngStream) -> f64 {
        let z = stream.standard_normal() + self.noncentrality.sqrt();
        self.scale * z * z
    }
}

#[derive(Clone, Copy)]
enum Tail {
    Lower,
    Upper,
}

/// Running log-sum-exp accumulator.
struct LogSum {
    max: f64,
    shifted: f64,
}

impl LogSum {
    fn new() -> Self {
        Self { max: f64::NEG_INFINITY, shifted: 0.0 }
    }

    fn add(&mut self, log_term: f64) {
        if log_term == f64::NEG_INFINITY {
            return;
        }
        if log_term <= self.max {
            self.shifted += (log_term - self.max).exp();
        } else {
            self.shifted = self.shifted * (self.max - log_term).exp() + 1.0;
            self.max = log_term;
        }
    }

    fn total(&self) -> f64 {
        if self.max == f64::NEG_INFINITY {
            f64::NEG_INFINITY
        } else {
            self.max + self.shifted.ln()
        }
    }
}

/// Log of the k-th Poisson-mixture term of the noncentral chi-squared(1) pdf:
/// Poisson(k; lambda/2) weight times the central chi-squared(1 + 2k) density.
fn log_series_term(k: u64, y: f64, half_lambda: f64) -> f64 {
    let kf = k as f64;
    let log_weight = if k == 0 {
        -half_lambda
    } else {
        -half_lambda + kf * half_lambda.ln() - ln_gamma(kf + 1.0)
    };
    let half_df = kf + 0.5;
    let log_density =
        (half_df - 1.0) * y.ln() - 0.5 * y - half_df * std::f64::consts::LN_2 - ln_gamma(half_df);
    log_weight + log_density
}

/// Noncentral chi-squared(1) log density via the Poisson-mixture series.
///
/// Terms are accumulated in log space starting from the weight mode
/// `k ~ lambda/2` and walking outward in both directions; the term sequence
/// is unimodal in k, so each walk stops once terms are both decreasing and
/// below `tol` relative to the running sum.
fn noncentral_chisq1_log_pdf(y: f64, lambda: f64, tol: f64) -> f64 {
    debug_assert!(y > 0.0);
    if lambda == 0.0 {
        // central chi-squared(1): y^(-1/2) e^(-y/2) / sqrt(2 pi)
        return -0.5 * y.ln() - 0.5 * y - 0.5 * LN_2PI;
    }
    let half_lambda = 0.5 * lambda;
    let log_tol = tol.ln();
    let mut sum = LogSum::new();

    let k0 = half_lambda.floor() as u64;
    // upward walk, including k0
    let mut prev = f64::NEG_INFINITY;
    let mut k = k0;
    loop {
        let lt = log_series_term(k, y, half_lambda);
        sum.add(lt);
        if lt < prev && lt - sum.total() < log_tol {
            break;
        }
        prev = lt;
        k += 1;
    }
    // downward walk
    if k0 > 0 {
        prev = f64::NEG_INFINITY;
        let mut k = k0 - 1;
        loop {
            let lt = log_series_term(k, y, half_lambda);
            sum.add(lt);
            if (lt < prev && lt - sum.total() < log_tol) || k == 0 {
                break;
            }
            prev = lt;
            k -= 1;
        }
    }
    sum.total()
}

/// Noncentral chi-squared(1) lower/upper tail probability: the same Poisson
/// mixture with regularized incomplete-gamma factors per term.
fn noncentral_chisq1_tail(y: f64, lambda: f64, tail: Tail) -> f64 {
    debug_assert!(y > 0.0);
    let half_y = 0.5 * y;
    let gamma_tail = |k: u64| {
        let a = k as f64 + 0.5;
        match tail {
            Tail::Lower => gamma_lr(a, half_y),
            Tail::Upper => gamma_ur(a, half_y),
        }
    };
    if lambda == 0.0 {
        return gamma_tail(0).clamp(0.0, 1.0);
    }
    let half_lambda = 0.5 * lambda;
    let log_weight = |k: u64| {
        if k == 0 {
            -half_lambda
        } else {
            -half_lambda + (k as f64) * half_lambda.ln() - ln_gamma(k as f64 + 1.0)
        }
    };

    let term_at = |k: u64| log_weight(k).exp() * gamma_tail(k);

    let k0 = half_lambda.floor() as u64;
    let mut total = 0.0f64;
    let mut prev = f64::NEG_INFINITY;
    let mut k = k0;
    loop {
        let term = term_at(k);
        total += term;
        if term < prev && term < SERIES_TOL * total {
            break;
        }
        prev = term;
        k += 1;
    }
    if k0 > 0 {
        prev = f64::NEG_INFINITY;
        let mut k = k0 - 1;
        loop {
            let term = term_at(k);
            total += term;
            if (term < prev && term < SERIES_TOL * total) || k == 0 {
                break;
            }
            prev = term;
            k -= 1;
        }
    }
    total.clamp(0.0, 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    /// Independent oracle for the noncentral chi-squared(1) density: the law
    /// of (Z + sqrt(lambda))^2 gives pdf(y) = [phi(sqrt(y) - sqrt(lambda))
    /// + phi(sqrt(y) + sqrt(lambda))] / (2 sqrt(y)).
    fn oracle_pdf(y: f64, lambda: f64, scale: f64) -> f64 {
        oracle_log_pdf(y, lambda, scale).exp()
    }

    /// The same oracle in log space so extreme tails stay representable.
    fn oracle_log_pdf(y: f64, lambda: f64, scale: f64) -> f64 {
        let u = y / scale;
        let r = u.sqrt();
        let d = lambda.sqrt();
        let (a, b) = (-0.5 * (r - d) * (r - d), -0.5 * (r + d) * (r + d));
        let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
        hi + (lo - hi).exp().ln_1p() - 0.5 * LN_2PI - (2.0 * r).ln() - scale.ln()
    }

    #[test]
    fn rejects_invalid_parameters_and_domain() {
        assert!(ScaledChiSq1::new(0.0, 0.0).is_err());
        assert!(ScaledChiSq1::new(-1.0, 0.0).is_err());
        assert!(ScaledChiSq1::new(1.0, -0.1).is_err());
        let law = ScaledChiSq1::new(1.0, 0.0).unwrap();
        assert!(matches!(law.log_pdf(0.0), Err(Error::Domain(_))));
        assert!(matches!(law.log_pdf(-1.0), Err(Error::Domain(_))));
        assert!(matches!(law.cdf(-0.5), Err(Error::Domain(_))));
    }

    #[test]
    fn central_pdf_matches_quadrature_oracle_value() {
        // frozen from the closed-form/quadrature oracle: chisq1 pdf at 1
        let law = ScaledChiSq1::new(1.0, 0.0).unwrap();
        assert_relative_eq!(
            law.log_pdf(1.0).unwrap(),
            -1.418_938_533_204_672_7,
            max_relative = 1e-14
        );
    }

    #[test]
    fn scale_is_a_change_of_variables() {
        let scaled = ScaledChiSq1::new(3.5, 0.0).unwrap();
        let unit = ScaledChiSq1::new(1.0, 0.0).unwrap();
        for x in [0.01, 0.3, 1.0, 4.2, 19.0] {
            assert_relative_eq!(
                scaled.log_pdf(x).unwrap(),
                unit.log_pdf(x / 3.5).unwrap() - 3.5f64.ln(),
                epsilon = 1e-12
            );
        }
    }

    #[test]
    fn noncentral_pdf_matches_closed_form_oracle() {
        // frozen: lambda=4, scale=1 at x=3 from the cosh/quadrature oracle
        let law = ScaledChiSq1::new(1.0, 4.0).unwrap();
        assert_relative_eq!(
            law.log_pdf(3.0).unwrap().exp(),
            0.111_212_670_209_688_15,
            max_relative = 1e-12
        );
        for (scale, lambda) in [(1.0, 0.5), (2.0, 4.0), (0.3, 17.0), (5.0, 120.0), (1.0, 9e4)] {
            let law = ScaledChiSq1::new(scale, lambda).unwrap();
            for q in [0.1, 0.5, 1.0, 2.0] {
                // probe around the bulk of the law
                let x = scale * (1.0 + lambda) * q;
                assert_relative_eq!(
                    law.log_pdf(x).unwrap(),
                    oracle_log_pdf(x, lambda, scale),
                    epsilon = 1e-10,
                    max_relative = 1e-12
                );
            }
        }
    }

    #[test]
    fn noncentral_pdf_matches_simulation_histogram() {
        // lambda=4, scale=1: empirical histogram of (Z+2)^2, 10^7 draws
        let law = ScaledChiSq1::new(1.0, 4.0).unwrap();
        let mut oracle = crate::stats::rng::test_support::BoxMuller::new(0xc0ffee);
        let n = 10_000_000u64;
        let edges: Vec<f64> = (0..=60).map(|i| i as f64 * 0.4).collect();
        let mut counts = vec![0u64; edges.len() - 1];
        for _ in 0..n {
            let z = oracle.next() + 2.0;
            let x = z * z;
            if x < 24.0 {
                counts[(x / 0.4) as usize] += 1;
            }
        }
        let mut sup_dev: f64 = 0.0;
        // skip the first bin, where the integrable x^(-1/2) singularity makes
        // any pointwise density incomparable to a bin average
        for (i, &c) in counts.iter().enumerate().skip(1) {
            let (lo, hi) = (edges[i], edges[i + 1]);
            let f = |x: f64| law.log_pdf(x).unwrap().exp();
            let bin_avg = (f(lo) + 4.0 * f(0.5 * (lo + hi)) + f(hi)) / 6.0;
            let emp = c as f64 / (n as f64 * 0.4);
            sup_dev = sup_dev.max((emp - bin_avg).abs());
        }
        // Monte Carlo noise at n=10^7 with 0.4-wide bins
        assert!(sup_dev < 1e-3, "sup deviation {sup_dev}");
    }

    #[test]
    fn zero_noncentrality_equals_central_law_pointwise() {
        let nc = ScaledChiSq1::new(2.0, 0.0).unwrap();
        for i in 1..=1000 {
            let x = i as f64 * 0.02;
            let central = -0.5 * (x / 2.0).ln() - 0.5 * (x / 2.0) - 0.5 * LN_2PI - 2.0f64.ln();
            assert!((nc.log_pdf(x).unwrap() - central).abs() < 1e-10);
        }
    }

    #[test]
    fn truncation_tolerance_is_slack() {
        // widening the truncation tolerance tenfold moves no log density by
        // more than 1e-12
        for (scale, lambda) in [(1.0, 1.0), (3.0, 25.0), (0.5, 400.0)] {
            let law = ScaledChiSq1::new(scale, lambda).unwrap();
            for i in 1..=50 {
                let x = scale * (1.0 + lambda) * (i as f64 / 25.0);
                let tight = law.log_pdf_with_tol(x, 1e-15).unwrap();
                let loose = law.log_pdf_with_tol(x, 1e-14).unwrap();
                assert!((tight - loose).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn cdf_boundary_and_monotonicity() {
        let law = ScaledChiSq1::new(1.7, 6.0).unwrap();
        assert_eq!(law.cdf(0.0).unwrap(), 0.0);
        assert_eq!(law.sf(0.0).unwrap(), 1.0);
        let mut prev = 0.0;
        for i in 1..=1000 {
            let x = i as f64 * 0.05;
            let c = law.cdf(x).unwrap();
            assert!(c >= prev, "cdf not monotone at {x}");
            prev = c;
        }
        assert!(prev > 0.99, "cdf should approach 1, got {prev}");
    }

    #[test]
    fn cdf_at_central_median_is_half() {
        // median of chisq1 located by bisection against the quadrature oracle
        let oracle_cdf = |x: f64| {
            crate::stats::simpson(|t| 2.0 * t * oracle_pdf(t * t, 0.0, 1.0), 1e-12, x.sqrt(), 20_000)
        };
        let (mut lo, mut hi) = (0.1, 1.0);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if oracle_cdf(mid) < 0.5 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let median = 0.5 * (lo + hi);
        assert_relative_eq!(median, 0.454_936_423_119_572_75, max_relative = 1e-9);
        let law = ScaledChiSq1::new(1.0, 0.0).unwrap();
        assert!((law.cdf(median).unwrap() - 0.5).abs() < 1e-9);
    }

    #[test]
    fn cdf_plus_sf_is_one() {
        for (scale, lambda) in [(1.0, 0.0), (2.0, 3.0), (0.2, 40.0)] {
            let law = ScaledChiSq1::new(scale, lambda).unwrap();
            for i in 1..=40 {
                let x = scale * (1.0 + lambda) * (i as f64 / 10.0);
                let s = law.cdf(x).unwrap() + law.sf(x).unwrap();
                assert!((s - 1.0).abs() < 1e-12, "cdf+sf = {s} at x={x}");
            }
        }
    }
}
