//! Score-based likelihood-ratio models for the squared-difference score.
//!
//! Each model pairs two sampling distributions of the score — scaled
//! (non)central chi-squared(1) laws induced by the generative models — and
//! reports the density ratio at the observed score. The squared-difference
//! score of two normals `A - B ~ N(m, v)` follows `v * chisq1(m^2 / v)`,
//! which is where every law below comes from.
//!
//! A score of exactly zero sits on the laws' common `x^(-1/2)` singularity;
//! ratios there return the analytic limit
//! `sqrt(s_den / s_num) * exp((l_den - l_num) / 2)` and are flagged.

use crate::error::{Error, Result};
use crate::generative::{
    CommonSourceParams, EvidencePair, ModelParams, SourceLabel, SpecificSourceParams,
    TwoSuspectParams,
};
use crate::lr::{self, LrResult, ModelTag};
use crate::stats::{NormalLaw, RngStream, ScaledChiSq1};

const LN_10: f64 = std::f64::consts::LN_10;

/// Score functions mapping an object pair to the real line.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScoreFunction {
    /// `(a - b)^2`: symmetric, nonnegative, and a valid kernel.
    SquaredDifference,
}

impl ScoreFunction {
    pub fn descriptor(&self) -> &'static str {
        match self {
            ScoreFunction::SquaredDifference => "squared difference",
        }
    }
}

/// Evaluate a score function.
pub fn score(a: f64, b: f64, f: ScoreFunction) -> f64 {
    match f {
        ScoreFunction::SquaredDifference => (a - b) * (a - b),
    }
}

fn squared_difference(pair: &EvidencePair) -> f64 {
    score(pair.trace(), pair.control(), ScoreFunction::SquaredDifference)
}

/// Which object, if any, is held fixed while building a score sampling
/// distribution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Anchoring {
    None,
    ControlAnchored(f64),
    TraceAnchored(f64),
}

/// A pair of score sampling laws addressing two hypotheses, together with
/// the parameters and anchoring that produced them.
#[derive(Debug, Clone)]
pub struct SlrContext {
    pub params: ModelParams,
    pub anchoring: Anchoring,
    pub numerator: ScaledChiSq1,
    pub denominator: ScaledChiSq1,
}

impl SlrContext {
    /// Density ratio at `score_value`; the exact zero score returns the
    /// analytic limit, flagged.
    pub fn evaluate(
        &self,
        score_value: f64,
        model: ModelTag,
        hypotheses: &'static str,
    ) -> Result<LrResult> {
        if score_value < 0.0 {
            return Err(Error::Domain(format!(
                "scores are nonnegative, got {score_value}"
            )));
        }
        if score_value == 0.0 {
            return Ok(LrResult::from_ln(self.zero_score_limit_ln(), model, hypotheses)
                .flag_limit());
        }
        let ln = self.numerator.log_pdf(score_value)? - self.denominator.log_pdf(score_value)?;
        Ok(LrResult::from_ln(ln, model, hypotheses))
    }

    /// Natural log of the `score -> 0` ratio limit: the ratio of the laws'
    /// leading `x^(-1/2)` coefficients times their noncentrality factors.
    fn zero_score_limit_ln(&self) -> f64 {
        0.5 * (self.denominator.scale().ln() - self.numerator.scale().ln())
            + 0.5 * (self.denominator.noncentrality() - self.numerator.noncentrality())
    }
}

/// Common-source score laws: central chi-squared with scales
/// `var_u1 + var_u2` (same source) and `var_u1 + var_u2 + 2 var_d`
/// (different sources).
pub fn slr_cs_context(p: &CommonSourceParams) -> Result<SlrContext> {
    Ok(SlrContext {
        params: ModelParams::CommonSource(*p),
        anchoring: Anchoring::None,
        numerator: ScaledChiSq1::new(p.var_u1 + p.var_u2, 0.0)?,
        denominator: ScaledChiSq1::new(p.var_u1 + p.var_u2 + 2.0 * p.var_d, 0.0)?,
    })
}

/// Common-source score-based likelihood ratio at the pair's score.
pub fn slr_cs(pair: &EvidencePair, p: &CommonSourceParams) -> Result<LrResult> {
    slr_cs_context(p)?.evaluate(squared_difference(pair), ModelTag::SlrCs, "H0_CS vs H1_CS")
}

/// Suspect-centred score laws conditioned on the observed control `e_s`:
/// `e_u - e_s ~ N(mu_d - e_s, var_u)` under H0 and
/// `N(mu - e_s, var_d + var_u)` under H1.
pub fn slr_ss_es_context(e_s: f64, p: &SpecificSourceParams) -> Result<SlrContext> {
    Ok(SlrContext {
        params: ModelParams::SpecificSource(*p),
        anchoring: Anchoring::ControlAnchored(e_s),
        numerator: ScaledChiSq1::of_squared_difference(p.mu_d - e_s, p.var_u)?,
        denominator: ScaledChiSq1::of_squared_difference(p.mu - e_s, p.var_u + p.var_d)?,
    })
}

/// Suspect-centred score-based likelihood ratio conditioned on the control.
pub fn slr_ss_es(pair: &EvidencePair, p: &SpecificSourceParams) -> Result<LrResult> {
    slr_ss_es_context(pair.control(), p)?.evaluate(
        squared_difference(pair),
        ModelTag::SlrSsEs,
        "H0_SS vs H1_SS",
    )
}

/// Unconditioned suspect-centred score laws, with the control resampled from
/// the named source for every comparison:
/// trace and control both from the named source gives
/// `e_u - e_s ~ N(0, var_u + var_s)`; a population trace against a fresh
/// named-source control gives `N(mu - mu_d, var_d + var_u + var_s)`.
pub fn slr_ss_es_unconditioned_context(p: &SpecificSourceParams) -> Result<SlrContext> {
    Ok(SlrContext {
        params: ModelParams::SpecificSource(*p),
        anchoring: Anchoring::None,
        numerator: ScaledChiSq1::of_squared_difference(0.0, p.var_u + p.var_s)?,
        denominator: ScaledChiSq1::of_squared_difference(
            p.mu - p.mu_d,
            p.var_d + p.var_u + p.var_s,
        )?,
    })
}

/// Unconditioned suspect-centred score-based likelihood ratio.
///
/// The two laws are derived rather than quoted, so before use they are
/// re-validated here against this module's own Monte Carlo path: `n_mc`
/// scores are simulated per hypothesis through the resampling recipe and
/// tested against the closed-form CDFs (Kolmogorov-Smirnov at the 0.1%
/// level). Requires `n_mc >= 10_000`.
pub fn slr_ss_es_unconditioned(
    pair: &EvidencePair,
    p: &SpecificSourceParams,
    n_mc: usize,
    stream: &RngStream,
) -> Result<LrResult> {
    if n_mc < 10_000 {
        return Err(Error::Config(format!(
            "Monte Carlo validation needs n_mc >= 10000, got {n_mc}"
        )));
    }
    let ctx = slr_ss_es_unconditioned_context(p)?;

    let mut h0_stream = stream.derive(0);
    let mut h0_scores: Vec<f64> = (0..n_mc)
        .map(|_| {
            let trace = p.mu_d + p.var_u.sqrt() * h0_stream.standard_normal();
            let control = p.mu_d + p.var_s.sqrt() * h0_stream.standard_normal();
            score(trace, control, ScoreFunction::SquaredDifference)
        })
        .collect();
    let mut h1_stream = stream.derive(1);
    let mut h1_scores: Vec<f64> = (0..n_mc)
        .map(|_| {
            let d = p.var_d.sqrt() * h1_stream.standard_normal();
            let trace = p.mu + d + p.var_u.sqrt() * h1_stream.standard_normal();
            let control = p.mu_d + p.var_s.sqrt() * h1_stream.standard_normal();
            score(trace, control, ScoreFunction::SquaredDifference)
        })
        .collect();

    let crit = crate::stats::ks_critical_value(n_mc, 0.001);
    for (name, scores, law) in [
        ("numerator", &mut h0_scores, &ctx.numerator),
        ("denominator", &mut h1_scores, &ctx.denominator),
    ] {
        let d = crate::stats::ks_statistic(scores, |x| law.cdf(x).unwrap_or(f64::NAN));
        if !(d < crit) {
            return Err(Error::Estimation(format!(
                "closed-form {name} law failed Monte Carlo validation (KS {d:.5} >= {crit:.5})"
            )));
        }
    }

    ctx.evaluate(squared_difference(pair), ModelTag::SlrSsEs, "H0_SS vs H1_SS")
}

/// Trace-centred score-based likelihood ratio plus its diagnostic.
#[derive(Debug, Clone, Copy)]
pub struct TraceCentredSlr {
    /// Equal to the exact specific-source likelihood ratio (shared path).
    pub result: LrResult,
    /// Ratio of the two identical score laws at the observed score;
    /// identically one.
    pub diagnostic_score_ratio: f64,
}

/// Trace-centred score laws conditioned on `e_u`: the control comes from the
/// named source under both hypotheses, so both laws are
/// `var_s * chisq1((e_u - mu_d)^2 / var_s)`.
pub fn slr_ss_eu_context(e_u: f64, p: &SpecificSourceParams) -> Result<SlrContext> {
    Ok(SlrContext {
        params: ModelParams::SpecificSource(*p),
        anchoring: Anchoring::TraceAnchored(e_u),
        numerator: ScaledChiSq1::of_squared_difference(e_u - p.mu_d, p.var_s)?,
        denominator: ScaledChiSq1::of_squared_difference(e_u - p.mu_d, p.var_s)?,
    })
}

/// Trace-centred score-based likelihood ratio. The score-density ratio is
/// computed explicitly from the two (identical) conditional laws and must be
/// one; the surviving factor is exactly the specific-source likelihood
/// ratio, evaluated through the same code path as [`lr::lr_ss`].
pub fn slr_ss_eu(pair: &EvidencePair, p: &SpecificSourceParams) -> Result<TraceCentredSlr> {
    let ctx = slr_ss_eu_context(pair.trace(), p)?;
    let s = squared_difference(pair);
    let diagnostic_score_ratio = if s == 0.0 {
        1.0
    } else {
        (ctx.numerator.log_pdf(s)? - ctx.denominator.log_pdf(s)?).exp()
    };
    let exact = lr::lr_ss(pair, p)?;
    let result = LrResult {
        model: ModelTag::SlrSsEu,
        ..exact
    };
    Ok(TraceCentredSlr { result, diagnostic_score_ratio })
}

/// Asymmetric score-based likelihood ratio: the density-ratio factor plus
/// the uncancelled evidence-term ratio, kept separate.
#[derive(Debug, Clone, Copy)]
pub struct AsymmetricSlr {
    /// First factor of the model: suspect-anchored numerator over
    /// trace-anchored population denominator.
    pub result: LrResult,
    /// log10 of the uncancelled second factor
    /// `f(e_s | H0_SS) / f(e_u | H1_CS)`; reported separately because the
    /// two factors do not refer to the same evidence.
    pub uncancelled_log10: f64,
}

/// Asymmetric score laws: the numerator is the control-anchored H0 law; the
/// denominator is the law of the score between the fixed trace `e_u` and a
/// control drawn from a random population source,
/// `e_u - e ~ N(e_u - mu, var_d + var_s)`.
pub fn slr_asym_context(pair: &EvidencePair, p: &SpecificSourceParams) -> Result<SlrContext> {
    Ok(SlrContext {
        params: ModelParams::SpecificSource(*p),
        anchoring: Anchoring::TraceAnchored(pair.trace()),
        numerator: ScaledChiSq1::of_squared_difference(p.mu_d - pair.control(), p.var_u)?,
        denominator: ScaledChiSq1::of_squared_difference(
            pair.trace() - p.mu,
            p.var_d + p.var_s,
        )?,
    })
}

/// Asymmetric score-based likelihood ratio.
pub fn slr_asym(pair: &EvidencePair, p: &SpecificSourceParams) -> Result<AsymmetricSlr> {
    let ctx = slr_asym_context(pair, p)?;
    let result =
        ctx.evaluate(squared_difference(pair), ModelTag::SlrAsy, "H0_SS vs H1_CS")?;
    let control_density = NormalLaw::new(p.mu_d, p.var_s)?.log_pdf(pair.control());
    let trace_density = NormalLaw::new(p.mu, p.var_d + p.var_u)?.log_pdf(pair.trace());
    Ok(AsymmetricSlr {
        result,
        uncancelled_log10: (control_density - trace_density) / LN_10,
    })
}

/// Tail-probability ratio at the observed score, using the control-anchored
/// laws: `alpha = P(score > observed | H0)`, `beta = P(score <= observed | H1)`,
/// reported as `beta / alpha`. A vanishing `alpha` yields the infinity
/// marker. The orientation is fixed by this definition and the harness
/// reports the statistic only comparatively.
pub fn frstat_ratio(pair: &EvidencePair, p: &SpecificSourceParams) -> Result<LrResult> {
    let ctx = slr_ss_es_context(pair.control(), p)?;
    let s = squared_difference(pair);
    let alpha = ctx.numerator.sf(s)?;
    let beta = ctx.denominator.cdf(s)?;
    if alpha == 0.0 {
        return Ok(LrResult {
            value: f64::INFINITY,
            log10_value: f64::INFINITY,
            model: ModelTag::Frstat,
            hypotheses: "H0_SS vs H1_SS",
            limit: false,
            extrapolated: false,
        });
    }
    Ok(LrResult::from_value(beta / alpha, ModelTag::Frstat, "H0_SS vs H1_SS"))
}

/// Suspect-centred score-based likelihood ratio in the two-suspect problem,
/// anchored on the control object of the source named by `anchored_on`. The
/// anchored source's hypothesis is considered first (numerator).
pub fn slr_two_suspect_anchored(
    e_u: f64,
    anchor: f64,
    anchored_on: SourceLabel,
    p: &TwoSuspectParams,
) -> Result<LrResult> {
    let (mu_first, mu_second, hypotheses) = match anchored_on {
        SourceLabel::A => (p.mu_a, p.mu_b, "HA vs HB"),
        SourceLabel::B => (p.mu_b, p.mu_a, "HB vs HA"),
    };
    let ctx = SlrContext {
        params: ModelParams::CommonSource(CommonSourceParams::new(
            0.0,
            0.0,
            p.var_u,
            p.var_u,
        )?),
        anchoring: Anchoring::ControlAnchored(anchor),
        numerator: ScaledChiSq1::of_squared_difference(mu_first - anchor, p.var_u)?,
        denominator: ScaledChiSq1::of_squared_difference(mu_second - anchor, p.var_u)?,
    };
    ctx.evaluate(
        score(e_u, anchor, ScoreFunction::SquaredDifference),
        ModelTag::SlrSsEs,
        hypotheses,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generative::{Hypothesis, Scenario};
    use approx::assert_relative_eq;

    fn pair(trace: f64, control: f64) -> EvidencePair {
        EvidencePair::new(trace, control, Scenario::SpecificSource, Hypothesis::H0)
    }

    fn experiment_a() -> SpecificSourceParams {
        SpecificSourceParams::new(10.0, 10.0, 9.0, 2.0, 1.0).unwrap()
    }

    #[test]
    fn score_basics() {
        assert_eq!(score(3.0, 3.0, ScoreFunction::SquaredDifference), 0.0);
        assert_eq!(score(0.0, 2.0, ScoreFunction::SquaredDifference), 4.0);
        let mut s = RngStream::new(5, 0);
        for _ in 0..1000 {
            let (a, b) = (s.uniform(-50.0, 50.0), s.uniform(-50.0, 50.0));
            assert_eq!(
                score(a, b, ScoreFunction::SquaredDifference),
                score(b, a, ScoreFunction::SquaredDifference)
            );
        }
    }

    #[test]
    fn slr_cs_is_one_without_source_effect() {
        let p = CommonSourceParams::new(10.0, 0.0, 2.0, 1.0).unwrap();
        for (a, b) in [(9.0, 11.0), (0.0, 1.0), (10.0, 30.0)] {
            let r = slr_cs(&pair(a, b), &p).unwrap();
            assert_relative_eq!(r.value, 1.0, max_relative = 1e-12);
        }
    }

    #[test]
    fn slr_cs_score_zero_limit() {
        let p = CommonSourceParams::new(10.0, 10.0, 2.0, 2.0).unwrap();
        let r = slr_cs(&pair(7.0, 7.0), &p).unwrap();
        assert!(r.limit);
        assert_relative_eq!(r.value, 6f64.sqrt(), max_relative = 1e-12);
    }

    #[test]
    fn slr_cs_sign_flips_at_the_law_crossing() {
        // SLR > 1 iff score < t*, the crossing point of the two central laws
        let p = CommonSourceParams::new(10.0, 10.0, 2.0, 1.0).unwrap();
        let (s0, s1) = (p.var_u1 + p.var_u2, p.var_u1 + p.var_u2 + 2.0 * p.var_d);
        let t_star = (s1 / s0).ln() / (1.0 / s0 - 1.0 / s1);
        for i in 1..200 {
            let s = i as f64 * 0.25;
            let ctx = slr_cs_context(&p).unwrap();
            let r = ctx.evaluate(s, ModelTag::SlrCs, "H0_CS vs H1_CS").unwrap();
            assert_eq!(r.value > 1.0, s < t_star, "at score {s}");
        }
    }

    #[test]
    fn slr_ss_es_reduces_to_central_laws_at_matching_anchor() {
        let mut p = experiment_a();
        p.mu_d = 10.0;
        let ctx = slr_ss_es_context(10.0, &p).unwrap();
        assert_eq!(ctx.numerator.noncentrality(), 0.0);
        assert_eq!(ctx.denominator.noncentrality(), 0.0);
    }

    #[test]
    fn slr_ss_es_is_one_when_laws_coincide() {
        let p = SpecificSourceParams::new(10.0, 0.0, 10.0, 2.0, 1.0).unwrap();
        let r = slr_ss_es(&pair(9.2, 10.5), &p).unwrap();
        assert_relative_eq!(r.value, 1.0, max_relative = 1e-12);
    }

    #[test]
    fn trace_centred_equals_exact_lr_and_diagnostic_is_one() {
        let p = experiment_a();
        let mut s = RngStream::new(21, 0);
        for _ in 0..500 {
            let pr = crate::generative::sample_ss_pair(&p, Hypothesis::H1, &mut s);
            let t = slr_ss_eu(&pr, &p).unwrap();
            let exact = lr::lr_ss(&pr, &p).unwrap();
            assert_eq!(t.result.value.to_bits(), exact.value.to_bits());
            assert_eq!(t.result.log10_value.to_bits(), exact.log10_value.to_bits());
            assert!((t.diagnostic_score_ratio - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn trace_centred_shares_the_lr_ss_example_value() {
        let p = SpecificSourceParams::new(10.0, 10.0, 0.0, 2.0, 1.0).unwrap();
        let t = slr_ss_eu(&pair(0.0, 1.0), &p).unwrap();
        assert_relative_eq!(t.result.value, 157.992_316_370_924_59, max_relative = 1e-12);
    }

    #[test]
    fn unconditioned_limits() {
        let p = SpecificSourceParams::new(10.0, 1e-12, 10.0, 2.0, 1.0).unwrap();
        let stream = RngStream::new(33, 0);
        let r = slr_ss_es_unconditioned(&pair(9.4, 10.1), &p, 10_000, &stream).unwrap();
        assert_relative_eq!(r.value, 1.0, max_relative = 1e-6);

        // vanishing control variance collapses onto the conditioned laws at
        // e_s = mu_d
        let p = SpecificSourceParams::new(10.0, 10.0, 9.0, 2.0, 1e-12).unwrap();
        let unc = slr_ss_es_unconditioned_context(&p).unwrap();
        let cond = slr_ss_es_context(p.mu_d, &p).unwrap();
        assert_relative_eq!(unc.numerator.scale(), cond.numerator.scale(), epsilon = 1e-11);
        assert_relative_eq!(
            unc.denominator.scale(),
            cond.denominator.scale(),
            epsilon = 1e-11
        );
        assert_relative_eq!(
            unc.denominator.noncentrality(),
            cond.denominator.noncentrality(),
            max_relative = 1e-10
        );
    }

    #[test]
    fn unconditioned_rejects_small_n_mc() {
        let p = experiment_a();
        let stream = RngStream::new(33, 0);
        assert!(matches!(
            slr_ss_es_unconditioned(&pair(9.0, 9.0), &p, 100, &stream),
            Err(Error::Config(_))
        ));
    }

    #[test]
    fn asym_first_factor_is_one_for_identical_laws() {
        // mu_d = mu, var_d -> 0, var_s = var_u makes numerator and
        // denominator coincide whenever e_s = e_u
        let p = SpecificSourceParams::new(10.0, 0.0, 10.0, 2.0, 2.0).unwrap();
        for x in [8.0, 10.0, 12.5] {
            let a = slr_asym(&pair(x, x), &p).unwrap();
            assert_relative_eq!(a.result.value, 1.0, max_relative = 1e-12);
        }
    }

    #[test]
    fn asym_reports_uncancelled_factor_separately() {
        let p = experiment_a();
        let pr = pair(8.0, 9.5);
        let a = slr_asym(&pr, &p).unwrap();
        let expected = (NormalLaw::new(9.0, 1.0).unwrap().log_pdf(9.5)
            - NormalLaw::new(10.0, 12.0).unwrap().log_pdf(8.0))
            / LN_10;
        assert_relative_eq!(a.uncancelled_log10, expected, epsilon = 1e-12);
        // the reported ratio is the first factor alone
        let ctx = slr_asym_context(&pr, &p).unwrap();
        let s = (pr.trace() - pr.control()).powi(2);
        let ln = ctx.numerator.log_pdf(s).unwrap() - ctx.denominator.log_pdf(s).unwrap();
        assert_relative_eq!(a.result.log10_value, ln / LN_10, epsilon = 1e-12);
    }

    #[test]
    fn frstat_is_one_where_tails_cross() {
        let p = experiment_a();
        let e_s = 9.3;
        let ctx = slr_ss_es_context(e_s, &p).unwrap();
        // locate the score where alpha = beta by bisection
        let f = |s: f64| ctx.denominator.cdf(s).unwrap() - ctx.numerator.sf(s).unwrap();
        let (mut lo, mut hi) = (1e-9, 400.0);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if f(mid) < 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let crossing = 0.5 * (lo + hi);
        let e_u = e_s + crossing.sqrt();
        let r = frstat_ratio(&pair(e_u, e_s), &p).unwrap();
        assert_relative_eq!(r.value, 1.0, max_relative = 1e-9);
    }

    #[test]
    fn frstat_vanishes_with_the_score() {
        let p = experiment_a();
        let e_s = 9.0; // lambda_H0 = 0 at this anchor
        let r = frstat_ratio(&pair(e_s + 1e-8, e_s), &p).unwrap();
        assert!(r.value < 1e-6);
        let zero = frstat_ratio(&pair(e_s, e_s), &p).unwrap();
        assert_eq!(zero.value, 0.0);
        assert!(zero.is_marked());
    }

    #[test]
    fn anchored_two_suspect_laws_share_the_anchor_score_scale() {
        let p = TwoSuspectParams::new(0.0, 1.0, 4.0, 1.0, 1.0).unwrap();
        // trace midway between well-separated sources supports both anchored
        // models' first hypotheses at once
        let a = slr_two_suspect_anchored(2.0, 0.0, SourceLabel::A, &p).unwrap();
        let b = slr_two_suspect_anchored(2.0, 4.0, SourceLabel::B, &p).unwrap();
        assert!(a.value > 1.0 && b.value > 1.0);
        assert!((a.value * b.value - 1.0).abs() > 0.1);
    }
}
