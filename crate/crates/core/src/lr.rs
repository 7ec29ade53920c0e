//! Exact likelihood ratios with known parameters.
//!
//! Ratios are formed as differences of log densities and exponentiated, so a
//! ratio whose magnitude exceeds the double range is still carried faithfully
//! through its log10 value; the `value` field then holds an explicit
//! infinity/underflow marker instead of a clamped number.

use crate::error::Result;
use crate::generative::{
    cs_joint_law, ss_trace_marginal, CommonSourceParams, EvidencePair, Hypothesis,
    SpecificSourceParams, TwoSuspectParams,
};
use crate::stats::NormalLaw;

const LN_10: f64 = std::f64::consts::LN_10;

/// The model that produced a likelihood-ratio value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelTag {
    LrCs,
    LrSs,
    LrAb,
    SlrCs,
    SlrSsEs,
    SlrSsEu,
    SlrAsy,
    Frstat,
}

impl ModelTag {
    pub fn as_str(&self) -> &'static str {
        match self {
            ModelTag::LrCs => "LR_CS",
            ModelTag::LrSs => "LR_SS",
            ModelTag::LrAb => "LR_AB",
            ModelTag::SlrCs => "SLR_CS",
            ModelTag::SlrSsEs => "SLR_SS_ES",
            ModelTag::SlrSsEu => "SLR_SS_EU",
            ModelTag::SlrAsy => "SLR_ASY",
            ModelTag::Frstat => "FRSTAT",
        }
    }
}

impl std::fmt::Display for ModelTag {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A likelihood-ratio (or score-based ratio) value with its log10, the model
/// that produced it and the hypothesis pair it addresses.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LrResult {
    pub value: f64,
    pub log10_value: f64,
    pub model: ModelTag,
    pub hypotheses: &'static str,
    /// The value is an analytic score-zero limit rather than a density ratio.
    pub limit: bool,
    /// The value comes from a kernel density evaluated outside its support.
    pub extrapolated: bool,
}

impl LrResult {
    /// Build from a natural-log ratio.
    pub fn from_ln(ln_ratio: f64, model: ModelTag, hypotheses: &'static str) -> Self {
        Self::from_log10(ln_ratio / LN_10, model, hypotheses)
    }

    /// Build from a log10 ratio; `value` saturates to the infinity marker
    /// (or underflows to zero) outside the double range.
    pub fn from_log10(log10_value: f64, model: ModelTag, hypotheses: &'static str) -> Self {
        Self {
            value: 10f64.powf(log10_value),
            log10_value,
            model,
            hypotheses,
            limit: false,
            extrapolated: false,
        }
    }

    /// Build from a plain ratio value (used where tail probabilities are
    /// already linear).
    pub fn from_value(value: f64, model: ModelTag, hypotheses: &'static str) -> Self {
        Self {
            value,
            log10_value: value.log10(),
            model,
            hypotheses,
            limit: false,
            extrapolated: false,
        }
    }

    pub fn flag_limit(mut self) -> Self {
        self.limit = true;
        self
    }

    pub fn flag_extrapolated(mut self) -> Self {
        self.extrapolated = true;
        self
    }

    /// True when the value left the representable positive range and the
    /// serialized field is a marker (`inf`, or an underflowed zero) rather
    /// than a usable ratio.
    pub fn is_marked(&self) -> bool {
        !(self.value.is_finite() && self.value > 0.0)
    }
}

/// Common-source likelihood ratio: joint density under the same-source law
/// over the joint density under the different-sources law at
/// `(trace, control)`.
pub fn lr_cs(pair: &EvidencePair, p: &CommonSourceParams) -> Result<LrResult> {
    let x = [pair.trace(), pair.control()];
    let h0 = cs_joint_law(p, Hypothesis::H0)?;
    let h1 = cs_joint_law(p, Hypothesis::H1)?;
    let ln = h0.log_pdf(x)? - h1.log_pdf(x)?;
    Ok(LrResult::from_ln(ln, ModelTag::LrCs, "H0_CS vs H1_CS"))
}

/// Specific-source likelihood ratio. The joint ratio reduces to the ratio of
/// the trace marginals because the control marginal is hypothesis-invariant;
/// it is computed from the marginals directly so that cancellation is
/// structural, and the control coordinate cannot affect the result.
pub fn lr_ss(pair: &EvidencePair, p: &SpecificSourceParams) -> Result<LrResult> {
    let e_u = pair.trace();
    let h0 = ss_trace_marginal(p, Hypothesis::H0)?;
    let h1 = ss_trace_marginal(p, Hypothesis::H1)?;
    let ln = h0.log_pdf(e_u) - h1.log_pdf(e_u);
    Ok(LrResult::from_ln(ln, ModelTag::LrSs, "H0_SS vs H1_SS"))
}

/// Two-suspect likelihood ratio `f(e_u | HA) / f(e_u | HB)`; the control
/// densities cancel because both controls are observed under both hypotheses.
/// Reciprocity holds exactly: swapping the order inverts the ratio.
pub fn lr_two_suspect(e_u: f64, p: &TwoSuspectParams) -> Result<LrResult> {
    let fa = NormalLaw::new(p.mu_a, p.var_u)?;
    let fb = NormalLaw::new(p.mu_b, p.var_u)?;
    let ln = fa.log_pdf(e_u) - fb.log_pdf(e_u);
    Ok(LrResult::from_ln(ln, ModelTag::LrAb, "HA vs HB"))
}

/// `lr_two_suspect` with the hypotheses considered in the opposite order.
pub fn lr_two_suspect_reversed(e_u: f64, p: &TwoSuspectParams) -> Result<LrResult> {
    let fa = NormalLaw::new(p.mu_a, p.var_u)?;
    let fb = NormalLaw::new(p.mu_b, p.var_u)?;
    let ln = fb.log_pdf(e_u) - fa.log_pdf(e_u);
    Ok(LrResult::from_ln(ln, ModelTag::LrAb, "HB vs HA"))
}
