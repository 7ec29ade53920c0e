//! Seeded simulation harnesses and their serialized records.
//!
//! A configuration runs the specific-source generative model for both truth
//! hypotheses, evaluates every likelihood-ratio and score-based model on each
//! sampled pair, and reports per-model summary statistics against the exact
//! specific-source likelihood ratio.

mod incoherence;
mod projection;
mod summary;

pub use incoherence::{incoherence_search, IncoherenceWitness, ParameterBox};
pub use projection::{projection_demo, scalar_projection, ProjectionDemo, ProjectionPanel};
pub use summary::{summarize, ModelSummary};

use crate::error::Result;
use crate::generative::{sample_ss_pair, EvidencePair, Hypothesis, Scenario, SpecificSourceParams};
use crate::lr::{lr_cs, lr_ss, LrResult, ModelTag};
use crate::slr::{frstat_ratio, slr_asym, slr_cs, slr_ss_es, slr_ss_eu};
use crate::stats::RngStream;
use rayon::prelude::*;

/// Which model pair a configuration is about; every record carries all
/// models regardless, the comparison picks the default plotting pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Comparison {
    CsVsSs,
    SlrCsVsSs,
    SlrEsVsSs,
    AsyVsSs,
    All,
}

impl Comparison {
    /// Record column plotted against `lr_ss` for this comparison
    /// (`All` defaults to the common-source column).
    pub fn y_column(&self) -> &'static str {
        match self {
            Comparison::CsVsSs | Comparison::All => "lr_cs",
            Comparison::SlrCsVsSs => "slr_cs",
            Comparison::SlrEsVsSs => "slr_ss_es",
            Comparison::AsyVsSs => "slr_asym",
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Comparison::CsVsSs => "cs_vs_ss",
            Comparison::SlrCsVsSs => "slr_cs_vs_ss",
            Comparison::SlrEsVsSs => "slr_es_vs_ss",
            Comparison::AsyVsSs => "asy_vs_ss",
            Comparison::All => "all",
        }
    }
}

/// One named simulation configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub name: String,
    pub params: SpecificSourceParams,
    pub n_reps: usize,
    pub comparison: Comparison,
    pub seed: u64,
}

impl ExperimentConfig {
    pub fn new(
        name: impl Into<String>,
        params: SpecificSourceParams,
        n_reps: usize,
        comparison: Comparison,
        seed: u64,
    ) -> Result<Self> {
        if n_reps < 1 {
            return Err(crate::error::Error::Config("n_reps must be >= 1".into()));
        }
        Ok(Self { name: name.into(), params, n_reps, comparison, seed })
    }

    /// Configuration A: common control-source characteristics with some
    /// variance (`mu_d = 9`, `var_s = 1`).
    pub fn config_a(seed: u64) -> Self {
        Self {
            name: "A".into(),
            params: SpecificSourceParams::new(10.0, 10.0, 9.0, 2.0, 1.0).unwrap(),
            n_reps: 1000,
            comparison: Comparison::CsVsSs,
            seed,
        }
    }

    /// Configuration B: rare control-source characteristics (`mu_d = 0`),
    /// same variance.
    pub fn config_b(seed: u64) -> Self {
        Self {
            name: "B".into(),
            params: SpecificSourceParams::new(10.0, 10.0, 0.0, 2.0, 1.0).unwrap(),
            n_reps: 1000,
            comparison: Comparison::CsVsSs,
            seed,
        }
    }

    /// Configuration C: common characteristics with virtually no control
    /// variance (`var_s = 1e-5`).
    pub fn config_c(seed: u64) -> Self {
        Self {
            name: "C".into(),
            params: SpecificSourceParams::new(10.0, 10.0, 9.0, 2.0, 1e-5).unwrap(),
            n_reps: 1000,
            comparison: Comparison::CsVsSs,
            seed,
        }
    }
}

/// All model evaluations for one sampled pair.
#[derive(Debug, Clone)]
pub struct ExperimentRecord {
    pub rep_id: u64,
    pub truth: Hypothesis,
    pub e_u: f64,
    pub e_s: f64,
    pub lr_ss: LrResult,
    pub lr_cs: LrResult,
    pub slr_cs: LrResult,
    pub slr_ss_es: LrResult,
    pub slr_ss_eu: LrResult,
    pub slr_asym: LrResult,
    pub frstat: LrResult,
}

impl ExperimentRecord {
    pub fn column(&self, name: &str) -> Option<&LrResult> {
        match name {
            "lr_ss" => Some(&self.lr_ss),
            "lr_cs" => Some(&self.lr_cs),
            "slr_cs" => Some(&self.slr_cs),
            "slr_ss_es" => Some(&self.slr_ss_es),
            "slr_ss_eu" => Some(&self.slr_ss_eu),
            "slr_asym" => Some(&self.slr_asym),
            "frstat" => Some(&self.frstat),
            _ => None,
        }
    }

    pub fn by_model(&self, model: ModelTag) -> &LrResult {
        match model {
            ModelTag::LrSs => &self.lr_ss,
            ModelTag::LrCs => &self.lr_cs,
            ModelTag::SlrCs => &self.slr_cs,
            ModelTag::SlrSsEs => &self.slr_ss_es,
            ModelTag::SlrSsEu => &self.slr_ss_eu,
            ModelTag::SlrAsy => &self.slr_asym,
            ModelTag::Frstat => &self.frstat,
            ModelTag::LrAb => &self.lr_ss,
        }
    }
}

/// Records for one truth column of a configuration, ordered by `rep_id`.
#[derive(Debug, Clone)]
pub struct TruthColumn {
    pub truth: Hypothesis,
    pub records: Vec<ExperimentRecord>,
}

/// The complete output of one configuration run.
#[derive(Debug, Clone)]
pub struct ConfigRun {
    pub config: ExperimentConfig,
    pub columns: Vec<TruthColumn>,
    pub summaries: Vec<ModelSummary>,
}

/// Run a configuration: for every replicate and both truth hypotheses,
/// sample a pair under the specific-source model and evaluate every model
/// with the common-source identification `e_u1 = e_u`, `e_u2 = e_s`,
/// `var_u1 = var_u`, `var_u2 = var_s`. Replicates use per-replicate streams,
/// so output is deterministic regardless of thread count.
pub fn run_config(c: &ExperimentConfig) -> Result<ConfigRun> {
    let p = c.params;
    let per_rep: Vec<(ExperimentRecord, ExperimentRecord)> = (0..c.n_reps as u64)
        .into_par_iter()
        .map(|rep| {
            let mut stream = RngStream::new(c.seed, rep);
            let h0_pair = sample_ss_pair(&p, Hypothesis::H0, &mut stream);
            let h1_pair = sample_ss_pair(&p, Hypothesis::H1, &mut stream);
            let h0 = evaluate_record(rep, &h0_pair, &p)?;
            let h1 = evaluate_record(rep, &h1_pair, &p)?;
            Ok((h0, h1))
        })
        .collect::<Result<_>>()?;

    let mut columns = vec![
        TruthColumn { truth: Hypothesis::H0, records: Vec::with_capacity(c.n_reps) },
        TruthColumn { truth: Hypothesis::H1, records: Vec::with_capacity(c.n_reps) },
    ];
    for (h0, h1) in per_rep {
        columns[0].records.push(h0);
        columns[1].records.push(h1);
    }
    let summaries = columns.iter().flat_map(|col| summarize(col)).collect();
    Ok(ConfigRun { config: c.clone(), columns, summaries })
}

/// Evaluate every model on one sampled pair.
pub fn evaluate_record(
    rep_id: u64,
    pair: &EvidencePair,
    p: &SpecificSourceParams,
) -> Result<ExperimentRecord> {
    let cs = p.to_common_source();
    Ok(ExperimentRecord {
        rep_id,
        truth: pair.truth(),
        e_u: pair.trace(),
        e_s: pair.control(),
        lr_ss: lr_ss(pair, p)?,
        lr_cs: lr_cs(pair, &cs)?,
        slr_cs: slr_cs(pair, &cs)?,
        slr_ss_es: slr_ss_es(pair, p)?,
        slr_ss_eu: slr_ss_eu(pair, p)?.result,
        slr_asym: slr_asym(pair, p)?.result,
        frstat: frstat_ratio(pair, p)?,
    })
}

/// Exact CSV header of serialized experiment records.
pub const CSV_HEADER: &str = "rep_id,truth,e_u,e_s,lr_ss,lr_cs,slr_cs,slr_ss_es,slr_ss_eu,slr_asym,frstat";

/// Format a float with 17 significant digits (full double precision);
/// non-finite values serialize as explicit markers (`inf`, `-inf`).
pub fn format_full(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else if v.is_infinite() {
        if v > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        "nan".into()
    }
}

/// Serialize one truth column as CSV (UTF-8, LF line endings, full
/// precision).
pub fn records_to_csv(records: &[ExperimentRecord]) -> String {
    let mut out = String::with_capacity(records.len() * 200);
    out.push_str(CSV_HEADER);
    out.push('\n');
    for r in records {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{},{}\n",
            r.rep_id,
            r.truth.label(Scenario::SpecificSource),
            format_full(r.e_u),
            format_full(r.e_s),
            format_full(r.lr_ss.value),
            format_full(r.lr_cs.value),
            format_full(r.slr_cs.value),
            format_full(r.slr_ss_es.value),
            format_full(r.slr_ss_eu.value),
            format_full(r.slr_asym.value),
            format_full(r.frstat.value),
        ));
    }
    out
}
