//! The two error-pattern analyses.
//!
//! Common patterns: per group, take the phones whose accuracy is below that
//! group's mean accuracy, list the top few error cells of each, and keep the
//! (canonical, realized) pairs every group shares.
//!
//! L1 dependence: for each canonical row, the `k` realizations most often
//! observed across all groups are tested per group with a 2x2 chi-square
//! test against the pooled remaining groups.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::confusion::{ConfusionCounts, ConfusionPercent, GroupKey};
use crate::error::{Error, Result};
use crate::phoneset::{Phone, Token, AXIS_LEN, PHONE_COUNT};
use crate::stats::{chi2_pvalue, chi2_statistic, ContingencyTable, StarLevels};

/// A (canonical, realized) cell with its frequency in percent.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ErrorPattern {
    pub canonical: Token,
    pub realized: Token,
    pub frequency: f64,
    pub count: u64,
}

impl ErrorPattern {
    pub fn key(&self) -> (Token, Token) {
        (self.canonical, self.realized)
    }

    /// Accuracy entries (canonical = realized) only show up in dependence
    /// results.
    pub fn is_error(&self) -> bool {
        self.canonical != self.realized
    }
}

fn row_is_supported(m: &ConfusionPercent, row: usize, min_support: u64) -> bool {
    m.is_supported(row) && m.support(row) >= min_support
}

/// Diagonal values of every sufficiently supported phone row.
pub fn phone_accuracies(m: &ConfusionPercent, min_support: u64) -> BTreeMap<Phone, f64> {
    (0..PHONE_COUNT)
        .filter(|&r| row_is_supported(m, r, min_support))
        .map(|r| (Phone::from_index(r).unwrap(), m.cell(r, r)))
        .collect()
}

/// Phones whose accuracy is strictly below the unweighted mean accuracy of
/// the supported phones in `m`.
pub fn low_accuracy_phones(m: &ConfusionPercent, min_support: u64) -> Result<BTreeSet<Phone>> {
    let acc = phone_accuracies(m, min_support);
    low_accuracy_from(&acc)
}

pub(crate) fn low_accuracy_from(acc: &BTreeMap<Phone, f64>) -> Result<BTreeSet<Phone>> {
    if acc.is_empty() {
        return Err(Error::EmptyMatrix);
    }
    let mean = acc.values().sum::<f64>() / acc.len() as f64;
    Ok(acc
        .iter()
        .filter(|(_, &a)| a < mean)
        .map(|(&p, _)| p)
        .collect())
}

/// The `k` largest non-zero off-diagonal cells of `phone`'s row, the
/// deletion column included. Ties go to the earlier axis position.
pub fn top_error_patterns(
    m: &ConfusionPercent,
    phone: Phone,
    k: usize,
    min_support: u64,
) -> Result<Vec<ErrorPattern>> {
    let r = phone.index();
    if !row_is_supported(m, r, min_support) {
        return Err(Error::UnsupportedRow(phone));
    }
    let mut cells: Vec<usize> = (0..AXIS_LEN)
        .filter(|&c| c != r && m.cell(r, c) > 0.0)
        .collect();
    cells.sort_by(|&x, &y| m.cell(r, y).total_cmp(&m.cell(r, x)).then(x.cmp(&y)));
    Ok(cells
        .into_iter()
        .take(k)
        .map(|c| ErrorPattern {
            canonical: Token::Phone(phone),
            realized: Token::from_axis_index(c).unwrap(),
            frequency: m.cell(r, c),
            count: m.counts().cell(r, c),
        })
        .collect())
}

/// Patterns present in every list. Frequency is the mean over lists and
/// count the sum; output is in axis order.
pub fn common_patterns(lists: &[Vec<ErrorPattern>]) -> Vec<ErrorPattern> {
    let Some((first, rest)) = lists.split_first() else {
        return Vec::new();
    };
    let mut out: Vec<ErrorPattern> = Vec::new();
    let mut seen = BTreeSet::new();
    for p in first {
        if !seen.insert(p.key()) {
            continue;
        }
        let matches: Option<Vec<&ErrorPattern>> = rest
            .iter()
            .map(|list| list.iter().find(|q| q.key() == p.key()))
            .collect();
        if let Some(matches) = matches {
            let n = (matches.len() + 1) as f64;
            out.push(ErrorPattern {
                canonical: p.canonical,
                realized: p.realized,
                frequency: (p.frequency + matches.iter().map(|q| q.frequency).sum::<f64>()) / n,
                count: p.count + matches.iter().map(|q| q.count).sum::<u64>(),
            });
        }
    }
    out.sort_by_key(|p| (p.canonical, p.realized));
    out
}

/// Per-group outcome of the common-pattern analysis.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GroupPatterns {
    pub group: GroupKey,
    pub mean_accuracy: Option<f64>,
    pub low_accuracy: Vec<Phone>,
    pub patterns: Vec<ErrorPattern>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CommonAnalysis {
    pub per_group: Vec<GroupPatterns>,
    pub common: Vec<ErrorPattern>,
}

/// Runs the full common-pattern analysis over one matrix per group.
pub fn common_analysis(
    matrices: &[(GroupKey, ConfusionPercent)],
    top_k: usize,
    min_support: u64,
) -> CommonAnalysis {
    let per_group: Vec<GroupPatterns> = matrices
        .iter()
        .map(|(group, m)| {
            let acc = phone_accuracies(m, min_support);
            let mean_accuracy =
                (!acc.is_empty()).then(|| acc.values().sum::<f64>() / acc.len() as f64);
            let low = low_accuracy_from(&acc).unwrap_or_default();
            let patterns = low
                .iter()
                .flat_map(|&p| top_error_patterns(m, p, top_k, min_support).unwrap_or_default())
                .collect();
            GroupPatterns {
                group: *group,
                mean_accuracy,
                low_accuracy: low.into_iter().collect(),
                patterns,
            }
        })
        .collect();
    let lists: Vec<Vec<ErrorPattern>> = per_group.iter().map(|g| g.patterns.clone()).collect();
    CommonAnalysis {
        common: common_patterns(&lists),
        per_group,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Direction {
    AboveAverage,
    BelowAverage,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChiSquareResult {
    pub pattern: ErrorPattern,
    pub group: GroupKey,
    pub group_frequency: f64,
    pub average_frequency: f64,
    pub table: ContingencyTable,
    pub statistic: f64,
    pub df: u32,
    pub p: f64,
    /// Bonferroni-adjusted p, when correction is enabled.
    pub p_adjusted: Option<f64>,
    pub stars: String,
    pub direction: Direction,
}

impl ChiSquareResult {
    /// p used for the star rating.
    pub fn effective_p(&self) -> f64 {
        self.p_adjusted.unwrap_or(self.p)
    }

    /// True when the group does worse than average: more of an error, or
    /// less of a correct realization.
    pub fn is_harmful(&self) -> bool {
        matches!(
            (self.pattern.is_error(), self.direction),
            (true, Direction::AboveAverage) | (false, Direction::BelowAverage)
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SkipReason {
    InsufficientSupport,
    DegenerateTable,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SkippedTest {
    pub group: GroupKey,
    pub canonical: Token,
    pub realized: Option<Token>,
    pub reason: SkipReason,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScanConfig {
    pub k: usize,
    pub min_support: u64,
    pub stars: StarLevels,
    pub bonferroni: bool,
}

impl Default for ScanConfig {
    fn default() -> Self {
        ScanConfig {
            k: 4,
            min_support: crate::confusion::DEFAULT_MIN_SUPPORT,
            stars: StarLevels::default(),
            bonferroni: false,
        }
    }
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct ScanOutcome {
    pub results: Vec<ChiSquareResult>,
    pub skipped: Vec<SkippedTest>,
}

impl ScanOutcome {
    pub fn significant(&self) -> impl Iterator<Item = &ChiSquareResult> {
        self.results.iter().filter(|r| !r.stars.is_empty())
    }
}

/// Chi-square scan of every (group, canonical row, top-k realization).
///
/// Tests run on raw counts. Reported frequencies come from each group's
/// percent matrix after subtracting `baseline` when one is given.
pub fn l1_dependence_scan(
    groups: &[(GroupKey, ConfusionCounts)],
    baseline: Option<&ConfusionPercent>,
    config: &ScanConfig,
) -> Result<ScanOutcome> {
    if groups.len() < 2 {
        return Err(Error::InsufficientGroups(groups.len()));
    }
    let pooled = groups
        .iter()
        .fold(ConfusionCounts::new(), |acc, (_, m)| acc.merge(m));
    let reported: Vec<ConfusionPercent> = groups
        .iter()
        .map(|(_, m)| {
            let p = m.normalize();
            match baseline {
                Some(b) => p.subtract_baseline(b),
                None => p,
            }
        })
        .collect();

    let mut out = ScanOutcome::default();
    for r in 0..AXIS_LEN {
        let mut cols: Vec<usize> = (0..AXIS_LEN)
            .filter(|&c| pooled.cell(r, c) > 0)
            .collect();
        if cols.is_empty() {
            continue;
        }
        cols.sort_by(|&x, &y| pooled.cell(r, y).cmp(&pooled.cell(r, x)).then(x.cmp(&y)));
        cols.truncate(config.k);
        let canonical = Token::from_axis_index(r).unwrap();
        let pooled_total = pooled.row_total(r);

        let supporting: Vec<usize> = (0..groups.len())
            .filter(|&g| reported[g].is_supported(r))
            .collect();

        for (g, (group, counts)) in groups.iter().enumerate() {
            let n_target = counts.row_total(r);
            let n_other = pooled_total - n_target;
            if n_target < config.min_support.max(1) || n_other < config.min_support.max(1) {
                out.skipped.push(SkippedTest {
                    group: *group,
                    canonical,
                    realized: None,
                    reason: SkipReason::InsufficientSupport,
                });
                continue;
            }
            for &c in &cols {
                let hit = counts.cell(r, c);
                let other_hit = pooled.cell(r, c) - hit;
                let table = ContingencyTable::new(hit, n_target - hit, other_hit, n_other - other_hit);
                let realized = Token::from_axis_index(c).unwrap();
                let Ok(statistic) = chi2_statistic(&table) else {
                    out.skipped.push(SkippedTest {
                        group: *group,
                        canonical,
                        realized: Some(realized),
                        reason: SkipReason::DegenerateTable,
                    });
                    continue;
                };
                let group_frequency = reported[g].cell(r, c);
                let average_frequency = supporting
                    .iter()
                    .map(|&h| reported[h].cell(r, c))
                    .sum::<f64>()
                    / supporting.len() as f64;
                let above = if group_frequency != average_frequency {
                    group_frequency > average_frequency
                } else {
                    hit as f64 / n_target as f64 > other_hit as f64 / n_other as f64
                };
                let p = chi2_pvalue(statistic);
                out.results.push(ChiSquareResult {
                    pattern: ErrorPattern {
                        canonical,
                        realized,
                        frequency: group_frequency,
                        count: hit,
                    },
                    group: *group,
                    group_frequency,
                    average_frequency,
                    table,
                    statistic,
                    df: 1,
                    p,
                    p_adjusted: None,
                    stars: String::new(),
                    direction: if above {
                        Direction::AboveAverage
                    } else {
                        Direction::BelowAverage
                    },
                });
            }
        }
    }

    let tests = out.results.len() as f64;
    for r in &mut out.results {
        if config.bonferroni {
            r.p_adjusted = Some((r.p * tests).min(1.0));
        }
        r.stars = config.stars.stars(r.effective_p()).to_string();
    }
    out.results.sort_by(|a, b| {
        a.group
            .cmp(&b.group)
            .then(a.pattern.canonical.cmp(&b.pattern.canonical))
            .then(a.p.total_cmp(&b.p))
            .then(a.pattern.realized.cmp(&b.pattern.realized))
    });
    Ok(out)
}
