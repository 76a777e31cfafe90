//! Weighted edit-distance alignment of canonical against realized phones.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::phoneset::{Phone, Token};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EditKind {
    Correct,
    Substitute,
    Insert,
    Delete,
}

/// One aligned position. Use the constructors; they uphold the
/// `*`-placement rules.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct EditOp {
    kind: EditKind,
    canonical: Token,
    realized: Token,
}

impl EditOp {
    /// `Correct` when the phones match, `Substitute` otherwise.
    pub fn matched(canonical: Phone, realized: Phone) -> Self {
        let kind = if canonical == realized {
            EditKind::Correct
        } else {
            EditKind::Substitute
        };
        EditOp {
            kind,
            canonical: canonical.into(),
            realized: realized.into(),
        }
    }

    pub fn delete(canonical: Phone) -> Self {
        EditOp {
            kind: EditKind::Delete,
            canonical: canonical.into(),
            realized: Token::Star,
        }
    }

    pub fn insert(realized: Phone) -> Self {
        EditOp {
            kind: EditKind::Insert,
            canonical: Token::Star,
            realized: realized.into(),
        }
    }

    pub fn kind(&self) -> EditKind {
        self.kind
    }

    pub fn canonical(&self) -> Token {
        self.canonical
    }

    pub fn realized(&self) -> Token {
        self.realized
    }
}

impl fmt::Display for EditOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = match self.kind {
            EditKind::Correct => "C",
            EditKind::Substitute => "S",
            EditKind::Insert => "I",
            EditKind::Delete => "D",
        };
        write!(f, "{tag}:{}->{}", self.canonical, self.realized)
    }
}

/// Edit costs. Correct is always free.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Weights {
    pub substitute: u32,
    pub insert: u32,
    pub delete: u32,
}

impl Default for Weights {
    /// sclite's defaults.
    fn default() -> Self {
        Weights {
            substitute: 4,
            insert: 3,
            delete: 3,
        }
    }
}

impl Weights {
    pub fn new(substitute: u32, insert: u32, delete: u32) -> Result<Self> {
        let w = Weights {
            substitute,
            insert,
            delete,
        };
        w.validate()?;
        Ok(w)
    }

    pub fn validate(&self) -> Result<()> {
        if self.substitute == 0 || self.insert == 0 || self.delete == 0 {
            return Err(Error::Parse("edit weights must be positive".into()));
        }
        if self.substitute >= self.insert + self.delete {
            return Err(Error::Parse(
                "substitute weight must be below insert + delete".into(),
            ));
        }
        Ok(())
    }

    pub fn cost(&self, kind: EditKind) -> u32 {
        match kind {
            EditKind::Correct => 0,
            EditKind::Substitute => self.substitute,
            EditKind::Insert => self.insert,
            EditKind::Delete => self.delete,
        }
    }
}

impl std::str::FromStr for Weights {
    type Err = Error;

    /// Parses `sub=4,ins=3,del=3`; omitted keys keep their defaults.
    fn from_str(s: &str) -> Result<Self> {
        let mut w = Weights::default();
        for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (key, value) = part
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("bad weight {part:?}")))?;
            let value: u32 = value
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad weight value in {part:?}")))?;
            match key.trim() {
                "sub" => w.substitute = value,
                "ins" => w.insert = value,
                "del" => w.delete = value,
                other => return Err(Error::Parse(format!("unknown weight key {other:?}"))),
            }
        }
        w.validate()?;
        Ok(w)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Alignment {
    pub ops: Vec<EditOp>,
    pub cost: u32,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct EditCounts {
    pub correct: usize,
    pub substitutions: usize,
    pub insertions: usize,
    pub deletions: usize,
}

impl EditCounts {
    pub fn errors(&self) -> usize {
        self.substitutions + self.insertions + self.deletions
    }

    /// Number of canonical phones covered.
    pub fn reference_len(&self) -> usize {
        self.correct + self.substitutions + self.deletions
    }
}

impl std::ops::AddAssign for EditCounts {
    fn add_assign(&mut self, o: Self) {
        self.correct += o.correct;
        self.substitutions += o.substitutions;
        self.insertions += o.insertions;
        self.deletions += o.deletions;
    }
}

impl Alignment {
    pub fn counts(&self) -> EditCounts {
        let mut c = EditCounts::default();
        for op in &self.ops {
            match op.kind {
                EditKind::Correct => c.correct += 1,
                EditKind::Substitute => c.substitutions += 1,
                EditKind::Insert => c.insertions += 1,
                EditKind::Delete => c.deletions += 1,
            }
        }
        c
    }

    /// Canonical side with `*` removed.
    pub fn canonical(&self) -> Vec<Phone> {
        self.ops.iter().filter_map(|op| op.canonical.phone()).collect()
    }

    /// Realized side with `*` removed.
    pub fn realized(&self) -> Vec<Phone> {
        self.ops.iter().filter_map(|op| op.realized.phone()).collect()
    }
}

/// Minimum-cost alignment. On equal cost the backtrace prefers, per cell,
/// correct, then substitute, then delete, then insert.
pub fn align(canonical: &[Phone], realized: &[Phone], w: &Weights) -> Alignment {
    let n = canonical.len();
    let m = realized.len();
    let cols = m + 1;
    let mut dp = vec![0u32; (n + 1) * cols];
    for j in 1..=m {
        dp[j] = dp[j - 1] + w.insert;
    }
    for i in 1..=n {
        dp[i * cols] = dp[(i - 1) * cols] + w.delete;
        for j in 1..=m {
            let sub = if canonical[i - 1] == realized[j - 1] {
                0
            } else {
                w.substitute
            };
            let diag = dp[(i - 1) * cols + j - 1] + sub;
            let up = dp[(i - 1) * cols + j] + w.delete;
            let left = dp[i * cols + j - 1] + w.insert;
            dp[i * cols + j] = diag.min(up).min(left);
        }
    }

    let mut ops = Vec::with_capacity(n.max(m));
    let (mut i, mut j) = (n, m);
    while i > 0 || j > 0 {
        let here = dp[i * cols + j];
        if i > 0 && j > 0 {
            let sub = if canonical[i - 1] == realized[j - 1] {
                0
            } else {
                w.substitute
            };
            if dp[(i - 1) * cols + j - 1] + sub == here {
                ops.push(EditOp::matched(canonical[i - 1], realized[j - 1]));
                i -= 1;
                j -= 1;
                continue;
            }
        }
        if i > 0 && dp[(i - 1) * cols + j] + w.delete == here {
            ops.push(EditOp::delete(canonical[i - 1]));
            i -= 1;
        } else {
            ops.push(EditOp::insert(realized[j - 1]));
            j -= 1;
        }
    }
    ops.reverse();
    Alignment {
        ops,
        cost: dp[n * cols + m],
    }
}

/// Phone error rate: (S + D + I) / N over all alignments.
pub fn per<'a>(alignments: impl IntoIterator<Item = &'a Alignment>) -> Result<f64> {
    let mut total = EditCounts::default();
    for a in alignments {
        total += a.counts();
    }
    if total.reference_len() == 0 {
        return Err(Error::EmptyCorpus);
    }
    Ok(total.errors() as f64 / total.reference_len() as f64)
}
