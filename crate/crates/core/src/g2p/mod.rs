//! Canonical phone sequences from Hangul text.
//!
//! Text is decomposed into jamo, each whitespace-delimited word runs through
//! the rule cascade in [`rules`], and the surface syllables are mapped onto
//! the phone inventory. The last step applies the two allophone rules: a
//! singleton syllable-initial /l/ becomes the tap `r`, and coda stops become
//! unreleased `p> t> k>`.
//!
//! Morphologically conditioned rules (palatalization, ㄴ-insertion, irregular
//! stems) are not applied.

mod jamo;
mod rules;

use serde::Serialize;

pub use jamo::{compose, decompose, Decomposition, JamoSyllable, Mode};
pub use rules::{Rule, RuleStep, TracePosition};

use crate::error::Result;
use crate::phoneset::{ph, Phone, PhoneSeq};
use rules::{coda_symbol, onset_symbol, vowel_symbol, Syl};

/// Ordered record of every rule application for one input.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct RuleTrace {
    pub steps: Vec<RuleStep>,
}

/// A realized syllable of the output, in phones.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PhoneSyllable {
    pub onset: Option<Phone>,
    pub nucleus: Phone,
    pub coda: Option<Phone>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct G2pOutput {
    pub phones: PhoneSeq,
    pub trace: RuleTrace,
    /// Output syllables per word, for structural checks.
    pub words: Vec<Vec<PhoneSyllable>>,
    pub warnings: Vec<String>,
}

/// Converts Hangul text to its canonical phone sequence.
pub fn g2p(text: &str, mode: Mode) -> Result<G2pOutput> {
    let decomposition = decompose(text, mode)?;
    let mut steps = Vec::new();
    let surface: Vec<Vec<Syl>> = decomposition
        .words
        .iter()
        .enumerate()
        .map(|(w, word)| rules::cascade(word, w, &mut steps))
        .collect();
    let (phones, words) = realize(&surface, &mut steps);
    Ok(G2pOutput {
        phones,
        trace: RuleTrace { steps },
        words,
        warnings: decomposition.warnings,
    })
}

/// Surface syllables after the cascade, without allophony. Applying this to
/// its own output is a no-op.
pub fn surface_form(word: &[JamoSyllable]) -> Vec<JamoSyllable> {
    rules::cascade(word, 0, &mut Vec::new())
        .into_iter()
        .map(Syl::to_jamo)
        .collect()
}

fn plain_phones(word: &[Syl]) -> Vec<(Option<&'static str>, &'static str, Option<&'static str>)> {
    word.iter()
        .map(|s| {
            (
                s.onset.map(onset_symbol),
                vowel_symbol(s.medial),
                s.coda.map(|(c, _)| coda_symbol(c)),
            )
        })
        .collect()
}

fn realize(surface: &[Vec<Syl>], steps: &mut Vec<RuleStep>) -> (PhoneSeq, Vec<Vec<PhoneSyllable>>) {
    let mut phones = PhoneSeq::default();
    let mut words = Vec::with_capacity(surface.len());
    for word in surface {
        let mut out = Vec::with_capacity(word.len());
        let mut prev_coda: Option<&str> = None;
        for (onset, vowel, coda) in plain_phones(word) {
            let onset = onset.map(|o| {
                let o = if o == "l" && prev_coda != Some("l") {
                    steps.push(allophone_step(Rule::Tap, phones.len(), "l", "r"));
                    "r"
                } else {
                    o
                };
                let p = ph(o);
                phones.push(p);
                p
            });
            let nucleus = ph(vowel);
            phones.push(nucleus);
            let coda_phone = coda.map(|c| {
                let released = match c {
                    "p" => Some("p>"),
                    "t" => Some("t>"),
                    "k" => Some("k>"),
                    _ => None,
                };
                let c = match released {
                    Some(r) => {
                        steps.push(allophone_step(Rule::UnreleasedCoda, phones.len(), c, r));
                        r
                    }
                    None => c,
                };
                let p = ph(c);
                phones.push(p);
                p
            });
            prev_coda = coda;
            out.push(PhoneSyllable {
                onset,
                nucleus,
                coda: coda_phone,
            });
        }
        words.push(out);
    }
    (phones, words)
}

fn allophone_step(rule: Rule, index: usize, before: &str, after: &str) -> RuleStep {
    RuleStep {
        rule,
        position: TracePosition::Phone { index },
        before: before.to_string(),
        after: after.to_string(),
    }
}

impl RuleTrace {
    /// Re-applies the recorded steps to `text`: syllable rewrites first, then
    /// the plain jamo-to-phone mapping, then the phone rewrites.
    pub fn replay(&self, text: &str, mode: Mode) -> Result<PhoneSeq> {
        let mut words = decompose(text, mode)?.words;
        for step in &self.steps {
            if let TracePosition::Syllable { word, index } = step.position {
                let after: Vec<JamoSyllable> = step
                    .after
                    .chars()
                    .map(|c| JamoSyllable::from_char(c).expect("trace holds Hangul"))
                    .collect();
                let target = &mut words[word];
                debug_assert_eq!(compose(&target[index..index + after.len()]), step.before);
                target[index..index + after.len()].copy_from_slice(&after);
            }
        }
        let mut symbols: Vec<&str> = Vec::new();
        for word in &words {
            let syls: Vec<Syl> = word.iter().copied().map(Syl::from_jamo).collect();
            for (onset, vowel, coda) in plain_phones(&syls) {
                symbols.extend(onset);
                symbols.push(vowel);
                symbols.extend(coda);
            }
        }
        for step in &self.steps {
            if let TracePosition::Phone { index } = step.position {
                debug_assert_eq!(symbols[index], step.before);
                symbols[index] = &step.after;
            }
        }
        Ok(symbols.into_iter().map(ph).collect())
    }
}

impl std::fmt::Display for RuleTrace {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for step in &self.steps {
            let pos = match step.position {
                TracePosition::Syllable { word, index } => format!("w{word}:s{index}"),
                TracePosition::Phone { index } => format!("p{index}"),
            };
            writeln!(
                f,
                "{:<20} {:<8} {} -> {}",
                step.rule.as_str(),
                pos,
                step.before,
                step.after
            )?;
        }
        Ok(())
    }
}
