//! Confusion matrices over the phone axes plus the `*` row and column.
//!
//! Rows are canonical tokens (the `*` row counts insertions), columns are
//! realized tokens (the `*` column counts deletions).

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::align::Alignment;
use crate::error::Error;
use crate::phoneset::{Token, AXIS_LEN, PHONE_COUNT};

const STAR: usize = PHONE_COUNT;

/// Minimum observations for a row to enter the analyses.
pub const DEFAULT_MIN_SUPPORT: u64 = 30;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum L1 {
    ZH,
    VI,
    JP,
    TA,
    EN,
    #[serde(rename = "NATIVE")]
    Native,
    #[serde(rename = "ALL")]
    All,
}

impl L1 {
    /// The five learner groups, in reporting order.
    pub const LEARNERS: [L1; 5] = [L1::ZH, L1::VI, L1::JP, L1::TA, L1::EN];

    pub fn code(self) -> &'static str {
        match self {
            L1::ZH => "ZH",
            L1::VI => "VI",
            L1::JP => "JP",
            L1::TA => "TA",
            L1::EN => "EN",
            L1::Native => "NATIVE",
            L1::All => "ALL",
        }
    }

    pub fn is_learner(self) -> bool {
        !matches!(self, L1::Native | L1::All)
    }
}

impl FromStr for L1 {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        Ok(match s {
            "ZH" => L1::ZH,
            "VI" => L1::VI,
            "JP" => L1::JP,
            "TA" => L1::TA,
            "EN" => L1::EN,
            "NATIVE" => L1::Native,
            "ALL" => L1::All,
            other => return Err(Error::UnknownGroup(other.to_string())),
        })
    }
}

impl fmt::Display for L1 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Proficiency {
    Beginner,
    Intermediate,
    Advanced,
}

impl FromStr for Proficiency {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "beginner" => Ok(Proficiency::Beginner),
            "intermediate" => Ok(Proficiency::Intermediate),
            "advanced" => Ok(Proficiency::Advanced),
            other => Err(Error::Parse(format!("unknown proficiency {other:?}"))),
        }
    }
}

impl fmt::Display for Proficiency {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Proficiency::Beginner => "beginner",
            Proficiency::Intermediate => "intermediate",
            Proficiency::Advanced => "advanced",
        })
    }
}

/// Which speakers a matrix describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GroupKey {
    l1: L1,
    proficiency: Option<Proficiency>,
}

impl GroupKey {
    pub fn new(l1: L1, proficiency: Option<Proficiency>) -> Result<Self, Error> {
        if l1 == L1::Native && proficiency.is_some() {
            return Err(Error::Parse("native group takes no proficiency filter".into()));
        }
        Ok(GroupKey { l1, proficiency })
    }

    pub fn l1(l1: L1) -> Self {
        GroupKey {
            l1,
            proficiency: None,
        }
    }

    pub fn group(&self) -> L1 {
        self.l1
    }

    pub fn proficiency(&self) -> Option<Proficiency> {
        self.proficiency
    }
}

impl fmt::Display for GroupKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.proficiency {
            Some(p) => write!(f, "{}/{}", self.l1, p),
            None => write!(f, "{}", self.l1),
        }
    }
}

/// Raw (canonical, realized) counts.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfusionCounts {
    counts: Vec<u64>,
}

impl Default for ConfusionCounts {
    fn default() -> Self {
        ConfusionCounts {
            counts: vec![0; AXIS_LEN * AXIS_LEN],
        }
    }
}

impl fmt::Debug for ConfusionCounts {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ConfusionCounts")
            .field("total", &self.counts.iter().sum::<u64>())
            .finish()
    }
}

impl ConfusionCounts {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, row: Token, col: Token) -> u64 {
        self.counts[row.axis_index() * AXIS_LEN + col.axis_index()]
    }

    pub fn cell(&self, row: usize, col: usize) -> u64 {
        self.counts[row * AXIS_LEN + col]
    }

    pub fn row(&self, row: usize) -> &[u64] {
        &self.counts[row * AXIS_LEN..(row + 1) * AXIS_LEN]
    }

    /// Observations of the canonical token `row` (for `*`, insertions).
    pub fn row_total(&self, row: usize) -> u64 {
        self.row(row).iter().sum()
    }

    pub fn add(&mut self, row: Token, col: Token, n: u64) {
        debug_assert!(!(row == Token::Star && col == Token::Star));
        self.counts[row.axis_index() * AXIS_LEN + col.axis_index()] += n;
    }

    pub fn accumulate(&mut self, alignment: &Alignment) {
        // Delete lands in the `*` column and Insert in the `*` row because
        // EditOp already carries `*` on the missing side.
        for op in &alignment.ops {
            self.add(op.canonical(), op.realized(), 1);
        }
    }

    pub fn merge(mut self, other: &ConfusionCounts) -> ConfusionCounts {
        self.merge_from(other);
        self
    }

    pub fn merge_from(&mut self, other: &ConfusionCounts) {
        for (a, b) in self.counts.iter_mut().zip(&other.counts) {
            *a += b;
        }
    }

    /// Cell-wise `self - other`; `other` must be a sub-count of `self`.
    pub fn subtract(&self, other: &ConfusionCounts) -> ConfusionCounts {
        ConfusionCounts {
            counts: self
                .counts
                .iter()
                .zip(&other.counts)
                .map(|(a, b)| a.checked_sub(*b).expect("subtracting a non-subset count matrix"))
                .collect(),
        }
    }

    /// Canonical phone occurrences (every row except `*`).
    pub fn canonical_total(&self) -> u64 {
        (0..PHONE_COUNT).map(|r| self.row_total(r)).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.iter().all(|&c| c == 0)
    }

    pub fn normalize(&self) -> ConfusionPercent {
        let mut values = vec![0.0; AXIS_LEN * AXIS_LEN];
        let mut support = vec![0; AXIS_LEN];
        for r in 0..AXIS_LEN {
            let total = self.row_total(r);
            support[r] = total;
            if total == 0 {
                continue;
            }
            for c in 0..AXIS_LEN {
                values[r * AXIS_LEN + c] = 100.0 * self.cell(r, c) as f64 / total as f64;
            }
        }
        ConfusionPercent {
            values,
            support,
            counts: self.clone(),
        }
    }
}

/// Row-normalized percentages. Keeps the counts it came from so reported
/// frequencies can be traced back to observations.
#[derive(Clone, PartialEq, Serialize, Deserialize)]
pub struct ConfusionPercent {
    values: Vec<f64>,
    support: Vec<u64>,
    counts: ConfusionCounts,
}

impl fmt::Debug for ConfusionPercent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ConfusionPercent")
            .field("support", &self.support)
            .finish()
    }
}

impl ConfusionPercent {
    /// Builds a percent matrix from explicit rows; mainly for fixtures and
    /// parsed files. `values` is row-major over the 41 axes.
    pub fn from_parts(values: Vec<f64>, support: Vec<u64>) -> Result<Self, Error> {
        if values.len() != AXIS_LEN * AXIS_LEN || support.len() != AXIS_LEN {
            return Err(Error::Parse("matrix shape must be 41 x 41".into()));
        }
        Ok(ConfusionPercent {
            values,
            support,
            counts: ConfusionCounts::default(),
        })
    }

    pub fn get(&self, row: Token, col: Token) -> f64 {
        self.values[row.axis_index() * AXIS_LEN + col.axis_index()]
    }

    pub fn cell(&self, row: usize, col: usize) -> f64 {
        self.values[row * AXIS_LEN + col]
    }

    pub fn row(&self, row: usize) -> &[f64] {
        &self.values[row * AXIS_LEN..(row + 1) * AXIS_LEN]
    }

    pub fn support(&self, row: usize) -> u64 {
        self.support[row]
    }

    pub fn is_supported(&self, row: usize) -> bool {
        self.support[row] > 0
    }

    pub fn counts(&self) -> &ConfusionCounts {
        &self.counts
    }

    pub fn row_sum(&self, row: usize) -> f64 {
        self.row(row).iter().sum()
    }

    /// Removes the native speakers' error mass from a learner matrix.
    ///
    /// Off-diagonal cells become `max(0, learner - native)` and the diagonal
    /// absorbs the difference so each row still sums to 100. The `*` row has
    /// no diagonal; it is re-normalized to 100 if any mass is left.
    pub fn subtract_baseline(&self, native: &ConfusionPercent) -> ConfusionPercent {
        let mut out = self.clone();
        for r in 0..AXIS_LEN {
            if !self.is_supported(r) {
                continue;
            }
            let mut off_sum = 0.0;
            for c in 0..AXIS_LEN {
                if c == r {
                    continue;
                }
                let v = (self.cell(r, c) - native.cell(r, c)).max(0.0);
                out.values[r * AXIS_LEN + c] = v;
                off_sum += v;
            }
            if r == STAR {
                let row = &mut out.values[r * AXIS_LEN..(r + 1) * AXIS_LEN];
                if off_sum > 0.0 {
                    row.iter_mut().for_each(|v| *v *= 100.0 / off_sum);
                } else {
                    row.iter_mut().for_each(|v| *v = 0.0);
                }
            } else {
                out.values[r * AXIS_LEN + r] = 100.0 - off_sum;
            }
        }
        out
    }
}
