use crate::error::Result;
use crate::generative::{
    sample_two_suspect, SourceLabel, TwoSuspectHypothesis, TwoSuspectParams,
};
use crate::lr::{lr_two_suspect, lr_two_suspect_reversed};
use crate::slr::slr_two_suspect_anchored;
use crate::stats::RngStream;

/// Search space for the incoherence hunt: both source means are drawn from
/// `mean_range`, all three variances from `var_range`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParameterBox {
    pub mean_range: (f64, f64),
    pub var_range: (f64, f64),
}

impl Default for ParameterBox {
    /// The documented search box: means in `[-5, 5]`, variances in
    /// `[0.1, 5]`.
    fn default() -> Self {
        Self { mean_range: (-5.0, 5.0), var_range: (0.1, 5.0) }
    }
}

/// One case where both anchored suspect-centred ratios exceed one: the same
/// evidence supports both mutually exclusive propositions, so the two
/// anchorings cannot be reciprocal.
#[derive(Debug, Clone, Copy)]
pub struct IncoherenceWitness {
    pub trial: u64,
    pub truth: TwoSuspectHypothesis,
    pub params: TwoSuspectParams,
    pub e_u: f64,
    pub e_a: f64,
    pub e_b: f64,
    /// Anchored on the control from source A (HA considered first).
    pub slr_anchored_a: f64,
    /// Anchored on the control from source B (HB considered first).
    pub slr_anchored_b: f64,
    /// Sanity column: deviation of the exact two-suspect reciprocity product
    /// from one on the same trial.
    pub exact_reciprocity_gap: f64,
}

/// Sample parameter sets and evidence from `space` and collect every trial
/// on which the A-anchored and B-anchored suspect-centred score ratios both
/// exceed one. The exact likelihood ratio is evaluated on every trial as a
/// reciprocity sanity check and its gap is reported on each witness.
pub fn incoherence_search(
    space: &ParameterBox,
    n_trials: u64,
    seed: u64,
) -> Result<Vec<IncoherenceWitness>> {
    let mut witnesses = Vec::new();
    for trial in 0..n_trials {
        let mut s = RngStream::new(seed, trial);
        let (lo_m, hi_m) = space.mean_range;
        let (lo_v, hi_v) = space.var_range;
        let params = TwoSuspectParams::new(
            s.uniform(lo_m, hi_m),
            s.uniform(lo_v, hi_v),
            s.uniform(lo_m, hi_m),
            s.uniform(lo_v, hi_v),
            s.uniform(lo_v, hi_v),
        )?;
        let truth = if s.uniform(0.0, 1.0) < 0.5 {
            TwoSuspectHypothesis::HA
        } else {
            TwoSuspectHypothesis::HB
        };
        let (e_u, e_a, e_b) = sample_two_suspect(&params, truth, &mut s);

        let fwd = lr_two_suspect(e_u, &params)?;
        let rev = lr_two_suspect_reversed(e_u, &params)?;
        let exact_reciprocity_gap = (fwd.value * rev.value - 1.0).abs();
        debug_assert!(exact_reciprocity_gap < 1e-9 || !fwd.value.is_finite());

        let a = slr_two_suspect_anchored(e_u, e_a, SourceLabel::A, &params)?;
        let b = slr_two_suspect_anchored(e_u, e_b, SourceLabel::B, &params)?;
        if a.value > 1.0 && b.value > 1.0 {
            witnesses.push(IncoherenceWitness {
                trial,
                truth,
                params,
                e_u,
                e_a,
                e_b,
                slr_anchored_a: a.value,
                slr_anchored_b: b.value,
                exact_reciprocity_gap,
            });
        }
    }
    Ok(witnesses)
}
