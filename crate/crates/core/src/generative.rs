//! Generative models for the common-source and specific-source scenarios.
//!
//! Sampling follows the hierarchical random-effects construction (draw the
//! source effect, then the object effects) rather than Cholesky draws from
//! the joint law, so the data-generating story stays testable against the
//! closed-form joints.

use crate::error::{require, Result};
use crate::stats::{BivariateNormalLaw, NormalLaw, RngStream};

/// Which inference scenario a piece of evidence belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scenario {
    CommonSource,
    SpecificSource,
}

/// Competing hypotheses; `H0` is the same-source / prosecution proposition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Hypothesis {
    H0,
    H1,
}

impl Hypothesis {
    /// Scenario-qualified label used in serialized records.
    pub fn label(&self, scenario: Scenario) -> &'static str {
        match (scenario, self) {
            (Scenario::CommonSource, Hypothesis::H0) => "H0_CS",
            (Scenario::CommonSource, Hypothesis::H1) => "H1_CS",
            (Scenario::SpecificSource, Hypothesis::H0) => "H0_SS",
            (Scenario::SpecificSource, Hypothesis::H1) => "H1_SS",
        }
    }
}

/// The two named sources of the coherence argument.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SourceLabel {
    A,
    B,
}

/// Truth options for the two-suspect generative model.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TwoSuspectHypothesis {
    /// The trace originates from source A.
    HA,
    /// The trace originates from source B.
    HB,
}

/// Parameters of the common-source generative model: population mean,
/// between-source variance and the within-source variances of the two traces.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CommonSourceParams {
    pub mu: f64,
    pub var_d: f64,
    pub var_u1: f64,
    pub var_u2: f64,
}

impl CommonSourceParams {
    pub fn new(mu: f64, var_d: f64, var_u1: f64, var_u2: f64) -> Result<Self> {
        require(mu.is_finite(), || "mu must be finite".into())?;
        require(var_d.is_finite() && var_d >= 0.0, || {
            format!("var_d must be >= 0, got {var_d}")
        })?;
        for (name, v) in [("var_u1", var_u1), ("var_u2", var_u2)] {
            require(v.is_finite() && v > 0.0, || format!("{name} must be > 0, got {v}"))?;
        }
        Ok(Self { mu, var_d, var_u1, var_u2 })
    }
}

/// Parameters of the specific-source generative model: population mean and
/// between-source variance, plus the mean of the named source and the
/// within-source variances of trace and control material.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpecificSourceParams {
    pub mu: f64,
    pub var_d: f64,
    pub mu_d: f64,
    pub var_u: f64,
    pub var_s: f64,
}

impl SpecificSourceParams {
    pub fn new(mu: f64, var_d: f64, mu_d: f64, var_u: f64, var_s: f64) -> Result<Self> {
        require(mu.is_finite() && mu_d.is_finite(), || "means must be finite".into())?;
        require(var_d.is_finite() && var_d >= 0.0, || {
            format!("var_d must be >= 0, got {var_d}")
        })?;
        for (name, v) in [("var_u", var_u), ("var_s", var_s)] {
            require(v.is_finite() && v > 0.0, || format!("{name} must be > 0, got {v}"))?;
        }
        Ok(Self { mu, var_d, mu_d, var_u, var_s })
    }

    /// Common-source reading of the same evidence: `e_u1 = e_u`,
    /// `e_u2 = e_s`, `var_u1 = var_u`, `var_u2 = var_s`.
    pub fn to_common_source(&self) -> CommonSourceParams {
        CommonSourceParams {
            mu: self.mu,
            var_d: self.var_d,
            var_u1: self.var_u,
            var_u2: self.var_s,
        }
    }
}

/// Parameters of the two-suspect problem: two named sources and the
/// within-source variance of the trace.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoSuspectParams {
    pub mu_a: f64,
    pub var_a: f64,
    pub mu_b: f64,
    pub var_b: f64,
    pub var_u: f64,
}

impl TwoSuspectParams {
    pub fn new(mu_a: f64, var_a: f64, mu_b: f64, var_b: f64, var_u: f64) -> Result<Self> {
        require(mu_a.is_finite() && mu_b.is_finite(), || "means must be finite".into())?;
        for (name, v) in [("var_a", var_a), ("var_b", var_b), ("var_u", var_u)] {
            require(v.is_finite() && v > 0.0, || format!("{name} must be > 0, got {v}"))?;
        }
        Ok(Self { mu_a, var_a, mu_b, var_b, var_u })
    }
}

/// Model parameters for either scenario.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ModelParams {
    CommonSource(CommonSourceParams),
    SpecificSource(SpecificSourceParams),
}

/// A sampled trace/control value pair with its provenance recorded at
/// sampling time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvidencePair {
    trace: f64,
    control: f64,
    scenario: Scenario,
    truth: Hypothesis,
}

impl EvidencePair {
    pub fn new(trace: f64, control: f64, scenario: Scenario, truth: Hypothesis) -> Self {
        Self { trace, control, scenario, truth }
    }

    pub fn trace(&self) -> f64 {
        self.trace
    }

    pub fn control(&self) -> f64 {
        self.control
    }

    pub fn scenario(&self) -> Scenario {
        self.scenario
    }

    pub fn truth(&self) -> Hypothesis {
        self.truth
    }
}

/// Joint law of `(e_u1, e_u2)` in the common-source scenario.
///
/// Under H0 the traces share one source effect, giving off-diagonal
/// covariance `var_d`; under H1 the off-diagonal is zero.
pub fn cs_joint_law(p: &CommonSourceParams, h: Hypothesis) -> Result<BivariateNormalLaw> {
    let off = match h {
        Hypothesis::H0 => p.var_d,
        Hypothesis::H1 => 0.0,
    };
    BivariateNormalLaw::new(
        [p.mu, p.mu],
        [[p.var_d + p.var_u1, off], [off, p.var_d + p.var_u2]],
    )
}

/// Joint law of `(e_u, e_s)` in the specific-source scenario. The control
/// marginal is the same under both hypotheses; only the trace marginal moves.
pub fn ss_joint_law(p: &SpecificSourceParams, h: Hypothesis) -> Result<BivariateNormalLaw> {
    match h {
        Hypothesis::H0 => BivariateNormalLaw::new(
            [p.mu_d, p.mu_d],
            [[p.var_u, 0.0], [0.0, p.var_s]],
        ),
        Hypothesis::H1 => BivariateNormalLaw::new(
            [p.mu, p.mu_d],
            [[p.var_d + p.var_u, 0.0], [0.0, p.var_s]],
        ),
    }
}

/// Draw a common-source pair hierarchically: source effects first, then
/// object effects.
pub fn sample_cs_pair(
    p: &CommonSourceParams,
    h: Hypothesis,
    stream: &mut RngStream,
) -> EvidencePair {
    let sd_d = p.var_d.sqrt();
    let (d1, d2) = match h {
        Hypothesis::H0 => {
            let d = sd_d * stream.standard_normal();
            (d, d)
        }
        Hypothesis::H1 => (sd_d * stream.standard_normal(), sd_d * stream.standard_normal()),
    };
    let u1 = p.var_u1.sqrt() * stream.standard_normal();
    let u2 = p.var_u2.sqrt() * stream.standard_normal();
    EvidencePair::new(p.mu + d1 + u1, p.mu + d2 + u2, Scenario::CommonSource, h)
}

/// Draw a specific-source pair hierarchically. The control always comes from
/// the named source; under H1 the trace comes from a random population source.
pub fn sample_ss_pair(
    p: &SpecificSourceParams,
    h: Hypothesis,
    stream: &mut RngStream,
) -> EvidencePair {
    let trace = match h {
        Hypothesis::H0 => p.mu_d + p.var_u.sqrt() * stream.standard_normal(),
        Hypothesis::H1 => {
            let d = p.var_d.sqrt() * stream.standard_normal();
            p.mu + d + p.var_u.sqrt() * stream.standard_normal()
        }
    };
    let control = p.mu_d + p.var_s.sqrt() * stream.standard_normal();
    EvidencePair::new(trace, control, Scenario::SpecificSource, h)
}

/// Draw a pair under either scenario's generative model.
pub fn sample_pair(p: &ModelParams, h: Hypothesis, stream: &mut RngStream) -> EvidencePair {
    match p {
        ModelParams::CommonSource(cs) => sample_cs_pair(cs, h, stream),
        ModelParams::SpecificSource(ss) => sample_ss_pair(ss, h, stream),
    }
}

/// Draw `(e_u, e_a, e_b)` under the two-suspect model: both controls are
/// always observed, and the trace comes from the source named by `truth`.
pub fn sample_two_suspect(
    p: &TwoSuspectParams,
    truth: TwoSuspectHypothesis,
    stream: &mut RngStream,
) -> (f64, f64, f64) {
    let e_a = p.mu_a + p.var_a.sqrt() * stream.standard_normal();
    let e_b = p.mu_b + p.var_b.sqrt() * stream.standard_normal();
    let mu_u = match truth {
        TwoSuspectHypothesis::HA => p.mu_a,
        TwoSuspectHypothesis::HB => p.mu_b,
    };
    let e_u = mu_u + p.var_u.sqrt() * stream.standard_normal();
    (e_u, e_a, e_b)
}

/// Marginal law of the trace in the specific-source scenario.
pub fn ss_trace_marginal(p: &SpecificSourceParams, h: Hypothesis) -> Result<NormalLaw> {
    match h {
        Hypothesis::H0 => NormalLaw::new(p.mu_d, p.var_u),
        Hypothesis::H1 => NormalLaw::new(p.mu, p.var_d + p.var_u),
    }
}

/// Marginal law of the control in the specific-source scenario
/// (hypothesis-invariant).
pub fn ss_control_marginal(p: &SpecificSourceParams) -> Result<NormalLaw> {
    NormalLaw::new(p.mu_d, p.var_s)
}
