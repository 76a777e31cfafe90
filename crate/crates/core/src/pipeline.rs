//! End-to-end analysis: canonical phones, alignment, per-group matrices,
//! baseline subtraction, then both pattern analyses.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::align::{align, Alignment, EditCounts, Weights};
use crate::confusion::{ConfusionCounts, ConfusionPercent, GroupKey, Proficiency, L1};
use crate::error::{Error, Result};
use crate::g2p::{g2p, Mode};
use crate::manifest::UtteranceRecord;
use crate::patterns::{
    common_analysis, l1_dependence_scan, ChiSquareResult, CommonAnalysis, ScanConfig, SkippedTest,
};
use crate::phoneset::PhoneSeq;
use crate::stats::StarLevels;

pub const REPORT_SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PipelineConfig {
    pub weights: Weights,
    pub scan: ScanConfig,
    /// Error patterns kept per low-accuracy phone in the common analysis.
    pub common_top_k: usize,
    /// Restrict learner records to one proficiency tier.
    pub proficiency: Option<Proficiency>,
    #[serde(skip)]
    pub g2p_mode: Mode,
    pub seed: Option<u64>,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            weights: Weights::default(),
            scan: ScanConfig::default(),
            common_top_k: 3,
            proficiency: None,
            g2p_mode: Mode::Lenient,
            seed: None,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GroupSummary {
    pub group: GroupKey,
    pub utterances: usize,
    pub canonical_phones: usize,
    pub substitutions: usize,
    pub deletions: usize,
    pub insertions: usize,
    pub per: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GroupMatrices {
    pub group: GroupKey,
    pub normalized: ConfusionPercent,
    /// After native baseline subtraction; absent without native data.
    pub adjusted: Option<ConfusionPercent>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunMetadata {
    pub weights: Weights,
    pub min_support: u64,
    pub common_top_k: usize,
    pub scan_k: usize,
    pub star_levels: StarLevels,
    pub bonferroni: bool,
    pub seed: Option<u64>,
    pub proficiency: Option<Proficiency>,
    pub baseline_subtracted: bool,
    pub notes: Vec<String>,
    pub warnings: Vec<String>,
    pub skipped: Vec<SkippedTest>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub schema_version: u32,
    pub metadata: RunMetadata,
    pub summaries: Vec<GroupSummary>,
    pub matrices: Vec<GroupMatrices>,
    pub common: CommonAnalysis,
    pub dependence: Vec<ChiSquareResult>,
}

impl AnalysisReport {
    pub fn matrices_for(&self, l1: L1) -> Option<&GroupMatrices> {
        self.matrices.iter().find(|m| m.group.group() == l1)
    }
}

struct Scored {
    l1: L1,
    alignment: Alignment,
    warnings: Vec<String>,
}

fn canonical_for(r: &UtteranceRecord, mode: Mode) -> Result<(PhoneSeq, Vec<String>)> {
    if let Some(c) = &r.canonical {
        return Ok((c.clone(), Vec::new()));
    }
    let text = r.text.as_deref().unwrap_or_default();
    let out = g2p(text, mode)?;
    let warnings = out
        .warnings
        .into_iter()
        .map(|w| format!("{}: {w}", r.id))
        .collect();
    Ok((out.phones, warnings))
}

fn score(records: &[&UtteranceRecord], config: &PipelineConfig) -> Result<Vec<Scored>> {
    records
        .par_iter()
        .map(|r| {
            let (canonical, warnings) = canonical_for(r, config.g2p_mode)?;
            Ok(Scored {
                l1: r.l1,
                alignment: align(&canonical, &r.realized, &config.weights),
                warnings,
            })
        })
        .collect()
}

#[derive(Default)]
struct GroupAcc {
    counts: ConfusionCounts,
    edits: EditCounts,
    utterances: usize,
}

impl GroupAcc {
    fn add(&mut self, a: &Alignment) {
        self.counts.accumulate(a);
        self.edits += a.counts();
        self.utterances += 1;
    }

    fn summary(&self, group: GroupKey) -> GroupSummary {
        let n = self.edits.reference_len();
        GroupSummary {
            group,
            utterances: self.utterances,
            canonical_phones: n,
            substitutions: self.edits.substitutions,
            deletions: self.edits.deletions,
            insertions: self.edits.insertions,
            per: (n > 0).then(|| self.edits.errors() as f64 / n as f64),
        }
    }
}

/// Runs the full analysis. Records whose L1 is `NATIVE` are treated as
/// baseline data wherever they appear.
pub fn run_pipeline(
    records: &[UtteranceRecord],
    native_records: &[UtteranceRecord],
    config: &PipelineConfig,
) -> Result<AnalysisReport> {
    config.weights.validate()?;
    let mut notes = Vec::new();

    let learners: Vec<&UtteranceRecord> = records
        .iter()
        .filter(|r| r.l1.is_learner())
        .filter(|r| config.proficiency.is_none() || r.proficiency == config.proficiency)
        .collect();
    let natives: Vec<&UtteranceRecord> = records
        .iter()
        .chain(native_records)
        .filter(|r| r.l1 == L1::Native)
        .collect();
    if native_records.iter().any(|r| r.l1 != L1::Native) {
        notes.push("non-native records in the native set were ignored".into());
    }

    let mut warnings = Vec::new();
    let mut by_group: BTreeMap<L1, GroupAcc> = BTreeMap::new();
    for s in score(&learners, config)? {
        by_group.entry(s.l1).or_default().add(&s.alignment);
        warnings.extend(s.warnings);
    }
    let mut native = GroupAcc::default();
    for s in score(&natives, config)? {
        native.add(&s.alignment);
        warnings.extend(s.warnings);
    }

    if by_group.values().all(|g| g.counts.canonical_total() == 0) {
        return Err(Error::EmptyCorpus);
    }

    let key = |l1| GroupKey::new(l1, config.proficiency).expect("learner groups accept proficiency");
    let baseline = (native.utterances > 0 && native.counts.canonical_total() > 0)
        .then(|| native.counts.normalize());
    if baseline.is_none() {
        notes.push("no baseline subtraction: native set is empty".into());
    }

    let mut all = GroupAcc::default();
    let mut summaries = Vec::new();
    let mut matrices = Vec::new();
    for (&l1, acc) in &by_group {
        all.counts.merge_from(&acc.counts);
        all.edits += acc.edits;
        all.utterances += acc.utterances;
        summaries.push(acc.summary(key(l1)));
    }
    summaries.push(all.summary(key(L1::All)));
    if native.utterances > 0 {
        summaries.push(native.summary(GroupKey::l1(L1::Native)));
    }

    let mut adjusted_learners = Vec::new();
    for (&l1, acc) in by_group.iter().chain(std::iter::once((&L1::All, &all))) {
        let normalized = acc.counts.normalize();
        let adjusted = baseline.as_ref().map(|b| normalized.subtract_baseline(b));
        if l1.is_learner() {
            adjusted_learners.push((key(l1), adjusted.clone().unwrap_or_else(|| normalized.clone())));
        }
        matrices.push(GroupMatrices {
            group: key(l1),
            normalized,
            adjusted,
        });
    }
    if let Some(b) = &baseline {
        matrices.push(GroupMatrices {
            group: GroupKey::l1(L1::Native),
            normalized: b.clone(),
            adjusted: None,
        });
    }

    let common = common_analysis(&adjusted_learners, config.common_top_k, config.scan.min_support);

    let group_counts: Vec<(GroupKey, ConfusionCounts)> = by_group
        .iter()
        .map(|(&l1, acc)| (key(l1), acc.counts.clone()))
        .collect();
    let (dependence, skipped) = if group_counts.len() >= 2 {
        let outcome = l1_dependence_scan(&group_counts, baseline.as_ref(), &config.scan)?;
        (outcome.results, outcome.skipped)
    } else {
        notes.push("dependence scan skipped: fewer than two learner groups".into());
        (Vec::new(), Vec::new())
    };

    Ok(AnalysisReport {
        schema_version: REPORT_SCHEMA_VERSION,
        metadata: RunMetadata {
            weights: config.weights,
            min_support: config.scan.min_support,
            common_top_k: config.common_top_k,
            scan_k: config.scan.k,
            star_levels: config.scan.stars,
            bonferroni: config.scan.bonferroni,
            seed: config.seed,
            proficiency: config.proficiency,
            baseline_subtracted: baseline.is_some(),
            notes,
            warnings,
            skipped,
        },
        summaries,
        matrices,
        common,
        dependence,
    })
}
