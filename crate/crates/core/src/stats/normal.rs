use crate::error::{require, Error, Result};
use crate::stats::{RngStream, LN_2PI};

/// Univariate normal law N(mean, variance).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormalLaw {
    mean: f64,
    variance: f64,
}

impl NormalLaw {
    pub fn new(mean: f64, variance: f64) -> Result<Self> {
        require(mean.is_finite(), || format!("normal mean must be finite, got {mean}"))?;
        require(variance.is_finite() && variance > 0.0, || {
            format!("normal variance must be > 0, got {variance}")
        })?;
        Ok(Self { mean, variance })
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    pub fn variance(&self) -> f64 {
        self.variance
    }

    pub fn log_pdf(&self, x: f64) -> f64 {
        let d = x - self.mean;
        -0.5 * (LN_2PI + self.variance.ln()) - d * d / (2.0 * self.variance)
    }

    pub fn pdf(&self, x: f64) -> f64 {
        self.log_pdf(x).exp()
    }

    pub fn cdf(&self, x: f64) -> f64 {
        let z = (x - self.mean) / (2.0 * self.variance).sqrt();
        0.5 * statrs::function::erf::erfc(-z)
    }

    pub fn sample(&self, stream: &mut RngStream) -> f64 {
        self.mean + self.variance.sqrt() * stream.standard_normal()
    }
}

/// Bivariate normal law with a 2x2 symmetric positive semi-definite covariance.
///
/// Construction admits singular covariances (they arise in degenerate limits);
/// density evaluation requires strict positive definiteness.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BivariateNormalLaw {
    mean: [f64; 2],
    cov: [[f64; 2]; 2],
}

impl BivariateNormalLaw {
    pub fn new(mean: [f64; 2], cov: [[f64; 2]; 2]) -> Result<Self> {
        require(mean.iter().all(|m| m.is_finite()), || "bivariate mean must be finite".into())?;
        require(cov.iter().flatten().all(|c| c.is_finite()), || {
            "covariance entries must be finite".into()
        })?;
        if cov[0][1] != cov[1][0] {
            return Err(Error::Parameter(format!(
                "covariance must be symmetric, got off-diagonals {} and {}",
                cov[0][1], cov[1][0]
            )));
        }
        require(cov[0][0] > 0.0 && cov[1][1] > 0.0, || {
            "covariance diagonal entries must be > 0".into()
        })?;
        if cov[0][1] * cov[0][1] > cov[0][0] * cov[1][1] {
            return Err(Error::Parameter(
                "covariance must be positive semi-definite (off-diagonal^2 <= product of diagonals)"
                    .into(),
            ));
        }
        Ok(Self { mean, cov })
    }

    pub fn mean(&self) -> [f64; 2] {
        self.mean
    }

    pub fn covariance(&self) -> [[f64; 2]; 2] {
        self.cov
    }

    pub fn det(&self) -> f64 {
        self.cov[0][0] * self.cov[1][1] - self.cov[0][1] * self.cov[1][0]
    }

    /// Log density at `x`. Fails on singular covariance.
    pub fn log_pdf(&self, x: [f64; 2]) -> Result<f64> {
        let det = self.det();
        if det <= 0.0 {
            return Err(Error::Degenerate(format!(
                "singular covariance (determinant {det}); density undefined"
            )));
        }
        let d0 = x[0] - self.mean[0];
        let d1 = x[1] - self.mean[1];
        // quadratic form with the explicit 2x2 inverse
        let q = (self.cov[1][1] * d0 * d0 - 2.0 * self.cov[0][1] * d0 * d1
            + self.cov[0][0] * d1 * d1)
            / det;
        Ok(-LN_2PI - 0.5 * det.ln() - 0.5 * q)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn rejects_bad_variance() {
        assert!(NormalLaw::new(0.0, 0.0).is_err());
        assert!(NormalLaw::new(0.0, -1.0).is_err());
        assert!(NormalLaw::new(f64::NAN, 1.0).is_err());
    }

    #[test]
    fn unit_density_at_zero_for_variance_one_over_2pi() {
        // 1/(2*pi) variance makes the normalization constant exactly 1
        let law = NormalLaw::new(0.0, 1.0 / (2.0 * std::f64::consts::PI)).unwrap();
        assert_relative_eq!(law.log_pdf(0.0), 0.0, epsilon = 1e-14);
    }

    #[test]
    fn peak_density_is_inverse_sqrt_2piv() {
        for v in [0.5, 1.0, 7.3] {
            let law = NormalLaw::new(2.0, v).unwrap();
            assert_relative_eq!(
                law.pdf(2.0),
                1.0 / (2.0 * std::f64::consts::PI * v).sqrt(),
                max_relative = 1e-14
            );
        }
    }

    #[test]
    fn pdf_matches_quadrature_and_histogram_oracle() {
        // frozen from the quadrature oracle: N(1; 0, 2)
        let law = NormalLaw::new(0.0, 2.0).unwrap();
        assert_relative_eq!(law.pdf(1.0), 0.219_695_644_733_861_2, max_relative = 1e-14);
        assert_relative_eq!(law.log_pdf(1.0), -1.515_512_123_484_645_4, max_relative = 1e-14);

        // 10^7-sample histogram oracle on an independent generator path
        let mut oracle = crate::stats::rng::test_support::BoxMuller::new(0x5eed);
        let (x, half) = (1.0, 0.005);
        let n = 10_000_000u64;
        let mut hits = 0u64;
        for _ in 0..n {
            let z = oracle.next() * 2.0f64.sqrt();
            if (z - x).abs() < half {
                hits += 1;
            }
        }
        let density = hits as f64 / (n as f64 * 2.0 * half);
        assert!(
            (density - law.pdf(1.0)).abs() < 3e-3,
            "histogram oracle {density} vs pdf {}",
            law.pdf(1.0)
        );
    }

    #[test]
    fn bivariate_independence_factorizes() {
        let law = BivariateNormalLaw::new([1.0, -2.0], [[2.0, 0.0], [0.0, 3.0]]).unwrap();
        let mx = NormalLaw::new(1.0, 2.0).unwrap();
        let my = NormalLaw::new(-2.0, 3.0).unwrap();
        for (x, y) in [(0.0, 0.0), (1.5, -2.5), (-3.0, 4.0)] {
            assert_relative_eq!(
                law.log_pdf([x, y]).unwrap(),
                mx.log_pdf(x) + my.log_pdf(y),
                epsilon = 1e-12
            );
        }
    }

    #[test]
    fn bivariate_peak_density() {
        // det = 12*11 - 100 = 32
        let law = BivariateNormalLaw::new([10.0, 10.0], [[12.0, 10.0], [10.0, 11.0]]).unwrap();
        assert_relative_eq!(
            law.log_pdf([10.0, 10.0]).unwrap().exp(),
            0.028_134_884_879_909_565,
            max_relative = 1e-13
        );
    }

    #[test]
    fn bivariate_rejects_asymmetry_and_negative_definite() {
        assert!(BivariateNormalLaw::new([0.0, 0.0], [[1.0, 0.2], [0.3, 1.0]]).is_err());
        assert!(BivariateNormalLaw::new([0.0, 0.0], [[1.0, 2.0], [2.0, 1.0]]).is_err());
        assert!(BivariateNormalLaw::new([0.0, 0.0], [[-1.0, 0.0], [0.0, 1.0]]).is_err());
    }

    #[test]
    fn singular_covariance_is_degenerate_for_density() {
        let law = BivariateNormalLaw::new([0.0, 0.0], [[1.0, 1.0], [1.0, 1.0]]).unwrap();
        assert!(matches!(law.log_pdf([0.0, 0.0]), Err(Error::Degenerate(_))));
    }
}
