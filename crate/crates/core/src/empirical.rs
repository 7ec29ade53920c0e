//! Empirical sampling distributions of scores.
//!
//! Each recipe mirrors one of the thought experiments behind the score-based
//! models: sample sources and objects, compare, and collect the scores. The
//! resulting samples back kernel density estimates used to validate the
//! closed-form laws and to emulate data-driven practice.

use crate::error::{Error, Result};
use crate::generative::{Hypothesis, ModelParams, Scenario};
use crate::lr::{LrResult, ModelTag};
use crate::slr::{score, Anchoring, ScoreFunction};
use crate::stats::{Kde1D, RngStream};
use rayon::prelude::*;

/// Pairs processed per derived stream; results are ordered by pair index
/// regardless of scheduling.
const CHUNK: usize = 4096;

/// One score-sampling recipe: scenario, hypothesis, anchoring and size.
///
/// Control-anchored H0/H1 sampling supports both a fixed anchor value and a
/// control resampled for every pair (`resample_control`), matching the
/// conditioned and unconditioned suspect-centred models.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThoughtExperiment {
    pub scenario: Scenario,
    pub hypothesis: Hypothesis,
    pub anchoring: Anchoring,
    pub resample_control: bool,
    /// Distinct sources the recipe draws from, recorded for bookkeeping.
    pub n_sources: usize,
    pub n_pairs: usize,
}

impl ThoughtExperiment {
    pub fn new(
        scenario: Scenario,
        hypothesis: Hypothesis,
        anchoring: Anchoring,
        resample_control: bool,
        n_pairs: usize,
    ) -> Result<Self> {
        if n_pairs < 50 {
            return Err(Error::Config(format!(
                "thought experiments need n_pairs >= 50, got {n_pairs}"
            )));
        }
        match anchoring {
            Anchoring::ControlAnchored(v) | Anchoring::TraceAnchored(v) if !v.is_finite() => {
                return Err(Error::Config("anchoring value must be finite".into()));
            }
            _ => {}
        }
        let n_sources = match (scenario, hypothesis, anchoring) {
            // one random source per pair
            (Scenario::CommonSource, Hypothesis::H0, Anchoring::None) => n_pairs,
            // two random sources per pair
            (Scenario::CommonSource, Hypothesis::H1, Anchoring::None) => 2 * n_pairs,
            // random population control compared to the fixed trace
            (Scenario::CommonSource, Hypothesis::H1, Anchoring::TraceAnchored(_)) => n_pairs,
            // the named source only
            (Scenario::SpecificSource, _, Anchoring::ControlAnchored(_))
            | (Scenario::SpecificSource, Hypothesis::H0, Anchoring::None)
            | (Scenario::SpecificSource, _, Anchoring::TraceAnchored(_)) => 1,
            // population trace against named-source control
            (Scenario::SpecificSource, Hypothesis::H1, Anchoring::None) => n_pairs,
            _ => {
                return Err(Error::Config(format!(
                    "unsupported recipe: {scenario:?}/{hypothesis:?}/{anchoring:?}"
                )))
            }
        };
        Ok(Self { scenario, hypothesis, anchoring, resample_control, n_sources, n_pairs })
    }
}

/// Scores produced by one thought experiment, with the stream identity that
/// generated them.
#[derive(Debug, Clone)]
pub struct ScoreSample {
    pub scores: Vec<f64>,
    pub experiment: ThoughtExperiment,
    pub root_seed: u64,
    pub stream_id: u64,
}

impl ScoreSample {
    /// Serialize as `index,score` CSV with LF line endings.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("index,score\n");
        for (i, s) in self.scores.iter().enumerate() {
            out.push_str(&format!("{i},{}\n", crate::experiments::format_full(*s)));
        }
        out
    }
}

/// Run one thought experiment: generate `n_pairs` scores through the cited
/// sampling recipe. Pairs are processed in fixed-size chunks, each on a
/// stream derived from `stream`'s identity, so the output is deterministic
/// and independent of scheduling.
pub fn run_thought_experiment(
    t: &ThoughtExperiment,
    p: &ModelParams,
    stream: &RngStream,
) -> Result<ScoreSample> {
    let recipe = Recipe::resolve(t, p)?;
    let n = t.n_pairs;
    let mut scores = vec![0.0f64; n];
    scores
        .par_chunks_mut(CHUNK)
        .enumerate()
        .for_each(|(chunk_id, chunk)| {
            let mut s = stream.derive(chunk_id as u64);
            for slot in chunk.iter_mut() {
                *slot = recipe.draw(&mut s);
            }
        });
    Ok(ScoreSample {
        scores,
        experiment: *t,
        root_seed: stream.root_seed(),
        stream_id: stream.stream_id(),
    })
}

/// A resolved sampling recipe, pairing the experiment description with the
/// matching parameter set.
enum Recipe {
    /// Same random source per pair: `mu + d + u1` vs `mu + d + u2`.
    CsSameSource { mu: f64, sd_d: f64, sd_u1: f64, sd_u2: f64 },
    /// Two random sources per pair.
    CsDifferentSources { mu: f64, sd_d: f64, sd_u1: f64, sd_u2: f64 },
    /// Random population control (`mu + d + u2`) against the fixed trace.
    CsPopulationVsFixedTrace { mu: f64, sd_d: f64, sd_u2: f64, e_u: f64 },
    /// Named-source trace against the control (fixed or resampled).
    SsSuspectTrace { mu_d: f64, sd_u: f64, control: ControlDraw },
    /// Population trace against the control (fixed or resampled).
    SsPopulationTrace { mu: f64, sd_d: f64, sd_u: f64, control: ControlDraw },
    /// Named-source control against the fixed trace (same law under both
    /// hypotheses).
    SsSuspectControlVsFixedTrace { mu_d: f64, sd_s: f64, e_u: f64 },
}

enum ControlDraw {
    Fixed(f64),
    Resampled { mu_d: f64, sd_s: f64 },
}

impl ControlDraw {
    fn draw(&self, s: &mut RngStream) -> f64 {
        match self {
            ControlDraw::Fixed(v) => *v,
            ControlDraw::Resampled { mu_d, sd_s } => mu_d + sd_s * s.standard_normal(),
        }
    }
}

impl Recipe {
    fn resolve(t: &ThoughtExperiment, p: &ModelParams) -> Result<Recipe> {
        match (t.scenario, p) {
            (Scenario::CommonSource, ModelParams::CommonSource(cs)) => {
                let (mu, sd_d) = (cs.mu, cs.var_d.sqrt());
                let (sd_u1, sd_u2) = (cs.var_u1.sqrt(), cs.var_u2.sqrt());
                match (t.hypothesis, t.anchoring) {
                    (Hypothesis::H0, Anchoring::None) => {
                        Ok(Recipe::CsSameSource { mu, sd_d, sd_u1, sd_u2 })
                    }
                    (Hypothesis::H1, Anchoring::None) => {
                        Ok(Recipe::CsDifferentSources { mu, sd_d, sd_u1, sd_u2 })
                    }
                    (Hypothesis::H1, Anchoring::TraceAnchored(e_u)) => {
                        Ok(Recipe::CsPopulationVsFixedTrace { mu, sd_d, sd_u2, e_u })
                    }
                    _ => Err(Error::Config(format!(
                        "no common-source recipe for {:?}/{:?}",
                        t.hypothesis, t.anchoring
                    ))),
                }
            }
            (Scenario::SpecificSource, ModelParams::SpecificSource(ss)) => {
                let (sd_d, sd_u, sd_s) = (ss.var_d.sqrt(), ss.var_u.sqrt(), ss.var_s.sqrt());
                let control = |anchor: Anchoring| match anchor {
                    Anchoring::ControlAnchored(e_s) if !t.resample_control => {
                        ControlDraw::Fixed(e_s)
                    }
                    _ => ControlDraw::Resampled { mu_d: ss.mu_d, sd_s },
                };
                match (t.hypothesis, t.anchoring) {
                    (Hypothesis::H0, a @ (Anchoring::ControlAnchored(_) | Anchoring::None)) => {
                        Ok(Recipe::SsSuspectTrace { mu_d: ss.mu_d, sd_u, control: control(a) })
                    }
                    (Hypothesis::H1, a @ (Anchoring::ControlAnchored(_) | Anchoring::None)) => {
                        Ok(Recipe::SsPopulationTrace {
                            mu: ss.mu,
                            sd_d,
                            sd_u,
                            control: control(a),
                        })
                    }
                    (_, Anchoring::TraceAnchored(e_u)) => {
                        Ok(Recipe::SsSuspectControlVsFixedTrace { mu_d: ss.mu_d, sd_s, e_u })
                    }
                }
            }
            _ => Err(Error::Config(
                "scenario does not match the supplied parameter family".into(),
            )),
        }
    }

    fn draw(&self, s: &mut RngStream) -> f64 {
        let sq = |a: f64, b: f64| score(a, b, ScoreFunction::SquaredDifference);
        match self {
            Recipe::CsSameSource { mu, sd_d, sd_u1, sd_u2 } => {
                let d = sd_d * s.standard_normal();
                let a = mu + d + sd_u1 * s.standard_normal();
                let b = mu + d + sd_u2 * s.standard_normal();
                sq(a, b)
            }
            Recipe::CsDifferentSources { mu, sd_d, sd_u1, sd_u2 } => {
                let a = mu + sd_d * s.standard_normal() + sd_u1 * s.standard_normal();
                let b = mu + sd_d * s.standard_normal() + sd_u2 * s.standard_normal();
                sq(a, b)
            }
            Recipe::CsPopulationVsFixedTrace { mu, sd_d, sd_u2, e_u } => {
                let control = mu + sd_d * s.standard_normal() + sd_u2 * s.standard_normal();
                sq(*e_u, control)
            }
            Recipe::SsSuspectTrace { mu_d, sd_u, control } => {
                let trace = mu_d + sd_u * s.standard_normal();
                let c = control.draw(s);
                sq(trace, c)
            }
            Recipe::SsPopulationTrace { mu, sd_d, sd_u, control } => {
                let trace = mu + sd_d * s.standard_normal() + sd_u * s.standard_normal();
                let c = control.draw(s);
                sq(trace, c)
            }
            Recipe::SsSuspectControlVsFixedTrace { mu_d, sd_s, e_u } => {
                let c = mu_d + sd_s * s.standard_normal();
                sq(*e_u, c)
            }
        }
    }
}

/// Kernel-density score ratio built from a matched pair of score samples.
pub struct EmpiricalSlr {
    h0: Kde1D,
    h1: Kde1D,
    model: ModelTag,
    hypotheses: &'static str,
}

impl EmpiricalSlr {
    /// Build from samples of the same recipe under H0 and H1. The samples
    /// must agree on scenario, anchoring and control mode.
    pub fn new(h0_sample: &ScoreSample, h1_sample: &ScoreSample) -> Result<Self> {
        let (a, b) = (&h0_sample.experiment, &h1_sample.experiment);
        if a.hypothesis != Hypothesis::H0 || b.hypothesis != Hypothesis::H1 {
            return Err(Error::Config(
                "empirical ratio needs an H0 sample and an H1 sample, in that order".into(),
            ));
        }
        if a.scenario != b.scenario
            || !anchoring_matches(a.anchoring, b.anchoring)
            || a.resample_control != b.resample_control
        {
            return Err(Error::Config(
                "H0 and H1 samples come from different recipes".into(),
            ));
        }
        let (model, hypotheses) = match (a.scenario, a.anchoring) {
            (Scenario::CommonSource, Anchoring::None) => (ModelTag::SlrCs, "H0_CS vs H1_CS"),
            (Scenario::SpecificSource, Anchoring::ControlAnchored(_))
            | (Scenario::SpecificSource, Anchoring::None) => {
                (ModelTag::SlrSsEs, "H0_SS vs H1_SS")
            }
            (Scenario::SpecificSource, Anchoring::TraceAnchored(_)) => {
                (ModelTag::SlrSsEu, "H0_SS vs H1_SS")
            }
            _ => return Err(Error::Config("no empirical model for this recipe".into())),
        };
        Ok(Self {
            h0: Kde1D::build(&h0_sample.scores)?,
            h1: Kde1D::build(&h1_sample.scores)?,
            model,
            hypotheses,
        })
    }

    /// Ratio of the two kernel density estimates at `score_value`. Scores
    /// beyond six bandwidths outside both samples' ranges carry an
    /// extrapolation flag.
    pub fn evaluate(&self, score_value: f64) -> LrResult {
        let ln = self.h0.log_pdf(score_value) - self.h1.log_pdf(score_value);
        let result = LrResult::from_ln(ln, self.model, self.hypotheses);
        let (lo0, hi0) = self.h0.support(6.0);
        let (lo1, hi1) = self.h1.support(6.0);
        let inside =
            (score_value >= lo0 && score_value <= hi0) || (score_value >= lo1 && score_value <= hi1);
        if inside {
            result
        } else {
            result.flag_extrapolated()
        }
    }

    pub fn h0_kde(&self) -> &Kde1D {
        &self.h0
    }

    pub fn h1_kde(&self) -> &Kde1D {
        &self.h1
    }
}

fn anchoring_matches(a: Anchoring, b: Anchoring) -> bool {
    matches!(
        (a, b),
        (Anchoring::None, Anchoring::None)
            | (Anchoring::ControlAnchored(_), Anchoring::ControlAnchored(_))
            | (Anchoring::TraceAnchored(_), Anchoring::TraceAnchored(_))
    )
}

/// One-shot empirical score ratio from a matched sample pair.
pub fn empirical_slr(
    score_value: f64,
    h0_sample: &ScoreSample,
    h1_sample: &ScoreSample,
) -> Result<LrResult> {
    Ok(EmpiricalSlr::new(h0_sample, h1_sample)?.evaluate(score_value))
}
