//! Pearson chi-square test of independence on 2x2 tables.

use serde::{Deserialize, Serialize};
use statrs::function::erf::erfc;

use crate::error::{Error, Result};

/// Rows: target group, pooled other groups. Columns: realization equals the
/// tested phone, realization differs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContingencyTable {
    pub target_hit: u64,
    pub target_miss: u64,
    pub other_hit: u64,
    pub other_miss: u64,
}

impl ContingencyTable {
    pub fn new(target_hit: u64, target_miss: u64, other_hit: u64, other_miss: u64) -> Self {
        ContingencyTable {
            target_hit,
            target_miss,
            other_hit,
            other_miss,
        }
    }

    pub fn total(&self) -> u64 {
        self.target_hit + self.target_miss + self.other_hit + self.other_miss
    }

    fn marginals(&self) -> [u64; 4] {
        [
            self.target_hit + self.target_miss,
            self.other_hit + self.other_miss,
            self.target_hit + self.other_hit,
            self.target_miss + self.other_miss,
        ]
    }

    pub fn is_degenerate(&self) -> bool {
        self.marginals().contains(&0)
    }
}

/// N(ad - bc)^2 / ((a+b)(c+d)(a+c)(b+d)), without continuity correction.
pub fn chi2_statistic(t: &ContingencyTable) -> Result<f64> {
    if t.is_degenerate() {
        return Err(Error::DegenerateTable);
    }
    let [r1, r2, c1, c2] = t.marginals().map(|m| m as f64);
    let a = t.target_hit as f64;
    let b = t.target_miss as f64;
    let c = t.other_hit as f64;
    let d = t.other_miss as f64;
    let n = a + b + c + d;
    // Scale by N before dividing by each marginal so large tables stay finite.
    let diff = a * d - b * c;
    Ok(n * (diff / r1) * (diff / r2) / c1 / c2)
}

/// Upper-tail probability of chi-square with one degree of freedom.
pub fn chi2_pvalue(statistic: f64) -> f64 {
    if statistic <= 0.0 {
        return 1.0;
    }
    erfc((statistic / 2.0).sqrt()).clamp(0.0, 1.0)
}

/// Significance thresholds for the star notation, strictest last.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StarLevels(pub [f64; 3]);

impl Default for StarLevels {
    fn default() -> Self {
        StarLevels([0.05, 0.01, 0.001])
    }
}

impl StarLevels {
    pub fn stars(&self, p: f64) -> &'static str {
        let [one, two, three] = self.0;
        if p < three {
            "***"
        } else if p < two {
            "**"
        } else if p < one {
            "*"
        } else {
            ""
        }
    }
}

impl std::str::FromStr for StarLevels {
    type Err = Error;

    /// Parses `.05,.01,.001`.
    fn from_str(s: &str) -> Result<Self> {
        let parsed: Vec<f64> = s
            .split(',')
            .map(|v| v.trim().parse::<f64>())
            .collect::<Result<_, _>>()
            .map_err(|_| Error::Parse(format!("bad star levels {s:?}")))?;
        match parsed[..] {
            [a, b, c] if 0.0 < c && c < b && b < a && a < 1.0 => Ok(StarLevels([a, b, c])),
            _ => Err(Error::Parse(format!(
                "star levels must be three decreasing probabilities, got {s:?}"
            ))),
        }
    }
}
