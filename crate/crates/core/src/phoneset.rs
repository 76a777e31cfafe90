//! The closed 40-phone Korean inventory and its ASCII symbol table.
//!
//! Axis order (used for every matrix and file): consonants, coda stops,
//! tap, monophthongs, diphthongs. The insertion/deletion marker `*` is not a
//! phone; it only exists as [`Token::Star`] and always sorts last.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Error;

/// Symbol used for insertion (row) and deletion (column) in files and reports.
pub const STAR_SYMBOL: &str = "*";

/// Number of phones in the inventory.
pub const PHONE_COUNT: usize = 40;

/// Number of matrix axes: every phone plus the `*` slot.
pub const AXIS_LEN: usize = PHONE_COUNT + 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PhoneKind {
    Consonant,
    Vowel,
    CodaAllophone,
    TapAllophone,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MannerClass {
    Plain,
    Tense,
    Aspirated,
    Nasal,
    Liquid,
    FricativePlain,
    FricativeTense,
    Glottal,
    Monophthong,
    Diphthong,
    CodaStop,
    Tap,
}

struct PhoneInfo {
    symbol: &'static str,
    ipa: &'static str,
    kind: PhoneKind,
    manner: MannerClass,
}

const fn info(
    symbol: &'static str,
    ipa: &'static str,
    kind: PhoneKind,
    manner: MannerClass,
) -> PhoneInfo {
    PhoneInfo {
        symbol,
        ipa,
        kind,
        manner,
    }
}

use MannerClass as M;
use PhoneKind as K;

static TABLE: [PhoneInfo; PHONE_COUNT] = [
    info("p", "p", K::Consonant, M::Plain),
    info("pp", "p͈", K::Consonant, M::Tense),
    info("ph", "pʰ", K::Consonant, M::Aspirated),
    info("t", "t", K::Consonant, M::Plain),
    info("tt", "t͈", K::Consonant, M::Tense),
    info("th", "tʰ", K::Consonant, M::Aspirated),
    info("k", "k", K::Consonant, M::Plain),
    info("kk", "k͈", K::Consonant, M::Tense),
    info("kh", "kʰ", K::Consonant, M::Aspirated),
    info("s", "s", K::Consonant, M::FricativePlain),
    info("ss", "s͈", K::Consonant, M::FricativeTense),
    info("c", "tɕ", K::Consonant, M::Plain),
    info("cc", "t͈ɕ", K::Consonant, M::Tense),
    info("ch", "tɕʰ", K::Consonant, M::Aspirated),
    info("h", "h", K::Consonant, M::Glottal),
    info("m", "m", K::Consonant, M::Nasal),
    info("n", "n", K::Consonant, M::Nasal),
    info("ng", "ŋ", K::Consonant, M::Nasal),
    info("l", "l", K::Consonant, M::Liquid),
    info("p>", "p̚", K::CodaAllophone, M::CodaStop),
    info("t>", "t̚", K::CodaAllophone, M::CodaStop),
    info("k>", "k̚", K::CodaAllophone, M::CodaStop),
    info("r", "ɾ", K::TapAllophone, M::Tap),
    info("a", "a", K::Vowel, M::Monophthong),
    info("eo", "ʌ", K::Vowel, M::Monophthong),
    info("o", "o", K::Vowel, M::Monophthong),
    info("u", "u", K::Vowel, M::Monophthong),
    info("eu", "ɯ", K::Vowel, M::Monophthong),
    info("i", "i", K::Vowel, M::Monophthong),
    info("ae", "ɛ", K::Vowel, M::Monophthong),
    info("ya", "ja", K::Vowel, M::Diphthong),
    info("yeo", "jʌ", K::Vowel, M::Diphthong),
    info("yo", "jo", K::Vowel, M::Diphthong),
    info("yu", "ju", K::Vowel, M::Diphthong),
    info("yae", "jɛ", K::Vowel, M::Diphthong),
    info("wa", "wa", K::Vowel, M::Diphthong),
    info("wo", "wʌ", K::Vowel, M::Diphthong),
    info("wae", "wɛ", K::Vowel, M::Diphthong),
    info("wi", "wi", K::Vowel, M::Diphthong),
    info("ui", "ɰi", K::Vowel, M::Diphthong),
];

/// One phone of the inventory. Internally an index into the axis order, so
/// `Ord` follows the matrix axes.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Phone(u8);

impl Phone {
    /// Phone at axis position `index`, if it is within the inventory.
    pub fn from_index(index: usize) -> Option<Phone> {
        (index < PHONE_COUNT).then_some(Phone(index as u8))
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub fn symbol(self) -> &'static str {
        self.info().symbol
    }

    pub fn ipa(self) -> &'static str {
        self.info().ipa
    }

    pub fn kind(self) -> PhoneKind {
        self.info().kind
    }

    pub fn manner(self) -> MannerClass {
        self.info().manner
    }

    pub fn is_vowel(self) -> bool {
        self.kind() == PhoneKind::Vowel
    }

    fn info(self) -> &'static PhoneInfo {
        &TABLE[self.0 as usize]
    }
}

impl fmt::Debug for Phone {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Phone({})", self.symbol())
    }
}

impl fmt::Display for Phone {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

impl FromStr for Phone {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_phone(s)
    }
}

impl Serialize for Phone {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(self.symbol())
    }
}

impl<'de> Deserialize<'de> for Phone {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        parse_phone(&s).map_err(serde::de::Error::custom)
    }
}

/// Looks a phone up by its ASCII symbol.
pub fn parse_phone(symbol: &str) -> Result<Phone, Error> {
    TABLE
        .iter()
        .position(|p| p.symbol == symbol)
        .map(|i| Phone(i as u8))
        .ok_or_else(|| Error::UnknownPhone(symbol.to_string()))
}

/// Every phone in axis order.
pub fn inventory() -> impl ExactSizeIterator<Item = Phone> + Clone {
    (0..PHONE_COUNT as u8).map(Phone)
}

/// A matrix axis entry: a phone or the insertion/deletion marker.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Token {
    Phone(Phone),
    Star,
}

impl Token {
    pub fn axis_index(self) -> usize {
        match self {
            Token::Phone(p) => p.index(),
            Token::Star => PHONE_COUNT,
        }
    }

    pub fn from_axis_index(index: usize) -> Option<Token> {
        match index {
            PHONE_COUNT => Some(Token::Star),
            i => Phone::from_index(i).map(Token::Phone),
        }
    }

    pub fn phone(self) -> Option<Phone> {
        match self {
            Token::Phone(p) => Some(p),
            Token::Star => None,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Token::Phone(p) => p.symbol(),
            Token::Star => STAR_SYMBOL,
        }
    }

    pub fn parse(symbol: &str) -> Result<Token, Error> {
        if symbol == STAR_SYMBOL {
            Ok(Token::Star)
        } else {
            parse_phone(symbol).map(Token::Phone)
        }
    }
}

impl From<Phone> for Token {
    fn from(p: Phone) -> Self {
        Token::Phone(p)
    }
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

impl Serialize for Token {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(self.symbol())
    }
}

impl<'de> Deserialize<'de> for Token {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        Token::parse(&s).map_err(serde::de::Error::custom)
    }
}

/// Every axis token (40 phones, then `*`).
pub fn axis() -> impl ExactSizeIterator<Item = Token> + Clone {
    (0..AXIS_LEN).map(|i| Token::from_axis_index(i).unwrap())
}

/// An ordered phone sequence. Never contains `*`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct PhoneSeq(Vec<Phone>);

impl PhoneSeq {
    pub fn new(phones: Vec<Phone>) -> Self {
        PhoneSeq(phones)
    }

    /// Parses whitespace-separated phone symbols.
    pub fn parse(text: &str) -> Result<Self, Error> {
        text.split_whitespace()
            .map(parse_phone)
            .collect::<Result<Vec<_>, _>>()
            .map(PhoneSeq)
    }

    pub fn phones(&self) -> &[Phone] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn push(&mut self, phone: Phone) {
        self.0.push(phone);
    }

    pub fn into_vec(self) -> Vec<Phone> {
        self.0
    }
}

impl fmt::Display for PhoneSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, p) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            f.write_str(p.symbol())?;
        }
        Ok(())
    }
}

impl From<Vec<Phone>> for PhoneSeq {
    fn from(v: Vec<Phone>) -> Self {
        PhoneSeq(v)
    }
}

impl FromIterator<Phone> for PhoneSeq {
    fn from_iter<I: IntoIterator<Item = Phone>>(iter: I) -> Self {
        PhoneSeq(iter.into_iter().collect())
    }
}

impl std::ops::Deref for PhoneSeq {
    type Target = [Phone];

    fn deref(&self) -> &[Phone] {
        &self.0
    }
}

/// Shorthand for tests and fixtures: parse a symbol known to be valid.
///
/// Panics on unknown symbols.
pub fn ph(symbol: &str) -> Phone {
    parse_phone(symbol).unwrap_or_else(|_| panic!("unknown phone symbol {symbol:?}"))
}
