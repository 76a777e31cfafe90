//! Precomposed Hangul syllable arithmetic.

use std::fmt;

use crate::error::{Error, Result};

pub const SYLLABLE_BASE: u32 = 0xAC00;
pub const INITIAL_COUNT: u8 = 19;
pub const MEDIAL_COUNT: u8 = 21;
pub const FINAL_COUNT: u8 = 28;
const SYLLABLE_COUNT: u32 = INITIAL_COUNT as u32 * MEDIAL_COUNT as u32 * FINAL_COUNT as u32;

/// Index of ㅇ in the initial table (a silent onset).
pub const SILENT_INITIAL: u8 = 11;

/// One precomposed syllable split into its jamo indices.
/// `final_` is 0 when there is no coda.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct JamoSyllable {
    pub initial: u8,
    pub medial: u8,
    pub final_: u8,
}

impl JamoSyllable {
    pub fn new(initial: u8, medial: u8, final_: u8) -> Option<Self> {
        (initial < INITIAL_COUNT && medial < MEDIAL_COUNT && final_ < FINAL_COUNT).then_some(
            JamoSyllable {
                initial,
                medial,
                final_,
            },
        )
    }

    pub fn from_char(c: char) -> Option<Self> {
        let offset = (c as u32).checked_sub(SYLLABLE_BASE)?;
        if offset >= SYLLABLE_COUNT {
            return None;
        }
        let final_ = (offset % FINAL_COUNT as u32) as u8;
        let medial = ((offset / FINAL_COUNT as u32) % MEDIAL_COUNT as u32) as u8;
        let initial = (offset / (FINAL_COUNT as u32 * MEDIAL_COUNT as u32)) as u8;
        Some(JamoSyllable {
            initial,
            medial,
            final_,
        })
    }

    pub fn to_char(self) -> char {
        let code = SYLLABLE_BASE
            + (self.initial as u32 * MEDIAL_COUNT as u32 + self.medial as u32) * FINAL_COUNT as u32
            + self.final_ as u32;
        char::from_u32(code).expect("jamo indices are range-checked")
    }
}

impl fmt::Display for JamoSyllable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_char())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Mode {
    /// Any character outside precomposed Hangul and whitespace is an error.
    Strict,
    /// Such characters are dropped with a warning.
    #[default]
    Lenient,
}

/// Hangul text split into whitespace-delimited words of syllables.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Decomposition {
    pub words: Vec<Vec<JamoSyllable>>,
    pub warnings: Vec<String>,
}

impl Decomposition {
    pub fn syllables(&self) -> impl Iterator<Item = &JamoSyllable> {
        self.words.iter().flatten()
    }
}

pub fn decompose(text: &str, mode: Mode) -> Result<Decomposition> {
    let mut out = Decomposition::default();
    let mut word = Vec::new();
    for (offset, ch) in text.char_indices() {
        if ch.is_whitespace() {
            if !word.is_empty() {
                out.words.push(std::mem::take(&mut word));
            }
        } else if let Some(syl) = JamoSyllable::from_char(ch) {
            word.push(syl);
        } else {
            match mode {
                Mode::Strict => return Err(Error::NonHangulInput { ch, offset }),
                Mode::Lenient => out
                    .warnings
                    .push(format!("dropped non-Hangul character {ch:?} at offset {offset}")),
            }
        }
    }
    if !word.is_empty() {
        out.words.push(word);
    }
    Ok(out)
}

/// Renders syllables back to a Hangul string.
pub fn compose(syllables: &[JamoSyllable]) -> String {
    syllables.iter().map(|s| s.to_char()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decompose_han() {
        // U+D55C: offset 0x295C = 10588 = (18*21 + 0)*28 + 4
        let d = decompose("한", Mode::Strict).unwrap();
        assert_eq!(d.words, vec![vec![JamoSyllable::new(18, 0, 4).unwrap()]]);
    }

    #[test]
    fn decompose_ga() {
        let d = decompose("가", Mode::Strict).unwrap();
        assert_eq!(d.words, vec![vec![JamoSyllable::new(0, 0, 0).unwrap()]]);
    }

    #[test]
    fn strict_rejects_latin() {
        assert!(matches!(
            decompose("ab", Mode::Strict),
            Err(Error::NonHangulInput { ch: 'a', offset: 0 })
        ));
    }

    #[test]
    fn lenient_drops_and_warns() {
        let d = decompose("학교. 가!", Mode::Lenient).unwrap();
        assert_eq!(d.words.len(), 2);
        assert_eq!(compose(&d.words[0]), "학교");
        assert_eq!(compose(&d.words[1]), "가");
        assert_eq!(d.warnings.len(), 2);
    }

    #[test]
    fn whitespace_splits_words() {
        let d = decompose("  나무 \t 바다\n", Mode::Strict).unwrap();
        assert_eq!(d.words.len(), 2);
    }

    #[test]
    fn block_edges() {
        assert_eq!(JamoSyllable::from_char('\u{ABFF}'), None);
        assert_eq!(JamoSyllable::from_char('\u{D7A4}'), None);
        let last = JamoSyllable::from_char('\u{D7A3}').unwrap();
        assert_eq!((last.initial, last.medial, last.final_), (18, 20, 27));
        // compatibility jamo are not syllables
        assert_eq!(JamoSyllable::from_char('ㄱ'), None);
    }

    #[test]
    fn every_syllable_round_trips() {
        for code in SYLLABLE_BASE..SYLLABLE_BASE + SYLLABLE_COUNT {
            let c = char::from_u32(code).unwrap();
            let s = JamoSyllable::from_char(c).unwrap();
            assert_eq!(s.to_char(), c);
        }
    }
}
