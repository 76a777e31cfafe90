//! Synthetic realized sequences from a per-phone categorical error model.
//!
//! Every random draw comes from a ChaCha8 stream keyed by `(seed, stream)`,
//! so the value of draw `n` on a stream does not depend on what any other
//! stream or thread did. Utterance `i` of a corpus always uses stream `i`.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::align::{align, Weights};
use crate::confusion::{ConfusionCounts, ConfusionPercent};
use crate::error::{Error, Result};
use crate::g2p::{g2p, Mode};
use crate::phoneset::{parse_phone, Phone, PhoneSeq, Token};

const MASS_TOLERANCE: f64 = 1e-12;

/// Seed offset for canonical corpus generation, so the canonical and
/// realized draws of an utterance never share a stream.
const CORPUS_SEED_SALT: u64 = 0x9E37_79B9_7F4A_7C15;

#[derive(Debug, Clone, PartialEq)]
pub struct ErrorModel {
    /// Non-identity outcomes per canonical phone; `Token::Star` is deletion.
    substitution: BTreeMap<Phone, Vec<(Token, f64)>>,
    insertion_rate: f64,
    insertion: Vec<(Phone, f64)>,
    seed: u64,
}

impl ErrorModel {
    /// Every phone realized as itself, no insertions.
    pub fn identity(seed: u64) -> Self {
        ErrorModel {
            substitution: BTreeMap::new(),
            insertion_rate: 0.0,
            insertion: Vec::new(),
            seed,
        }
    }

    /// Adds (or replaces) the probability that `from` is realized as `to`.
    pub fn with_outcome(mut self, from: Phone, to: Token, probability: f64) -> Self {
        let outcomes = self.substitution.entry(from).or_default();
        outcomes.retain(|(t, _)| *t != to);
        outcomes.push((to, probability));
        outcomes.sort_by_key(|(t, _)| *t);
        self
    }

    pub fn with_insertions(mut self, rate: f64, dist: Vec<(Phone, f64)>) -> Self {
        self.insertion_rate = rate;
        self.insertion = dist;
        self
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn insertion_rate(&self) -> f64 {
        self.insertion_rate
    }

    pub fn insertion_distribution(&self) -> &[(Phone, f64)] {
        &self.insertion
    }

    /// Planted probability of `from -> to`; the identity outcome gets the
    /// remaining mass.
    pub fn probability(&self, from: Phone, to: Token) -> f64 {
        let outcomes = self.substitution.get(&from).map(Vec::as_slice).unwrap_or(&[]);
        if to == Token::Phone(from) {
            1.0 - outcomes.iter().map(|(_, p)| p).sum::<f64>()
        } else {
            outcomes
                .iter()
                .find(|(t, _)| *t == to)
                .map_or(0.0, |(_, p)| *p)
        }
    }

    /// Planted non-identity outcomes, in (phone, token) order.
    pub fn planted(&self) -> impl Iterator<Item = (Phone, Token, f64)> + '_ {
        self.substitution
            .iter()
            .flat_map(|(&from, outs)| outs.iter().map(move |&(to, p)| (from, to, p)))
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidModel(msg));
        for (from, outcomes) in &self.substitution {
            let mut mass = 0.0;
            for (to, p) in outcomes {
                if *to == Token::Phone(*from) {
                    return bad(format!("{from} -> {to} is the identity outcome"));
                }
                if !(p.is_finite() && *p >= 0.0) {
                    return bad(format!("{from} -> {to} has probability {p}"));
                }
                mass += p;
            }
            if mass > 1.0 + MASS_TOLERANCE {
                return bad(format!("outcomes of {from} sum to {mass} > 1"));
            }
        }
        if !(0.0..1.0).contains(&self.insertion_rate) {
            return bad(format!("insertion rate {} outside [0, 1)", self.insertion_rate));
        }
        if self.insertion_rate > 0.0 || !self.insertion.is_empty() {
            if self.insertion.iter().any(|(_, p)| !(p.is_finite() && *p >= 0.0)) {
                return bad("negative insertion probability".into());
            }
            let mass: f64 = self.insertion.iter().map(|(_, p)| p).sum();
            if (mass - 1.0).abs() > MASS_TOLERANCE {
                return bad(format!("insertion distribution sums to {mass}"));
            }
        }
        Ok(())
    }

    /// Parses the plain-text model format:
    ///
    /// ```text
    /// seed = 42
    /// insertion-rate = 0.02
    /// insert r = 0.8
    /// insert eu = 0.2
    /// sub l n = 0.20
    /// sub t> * = 0.15
    /// ```
    pub fn parse(text: &str) -> Result<Self> {
        let mut model = ErrorModel::identity(0);
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap().trim();
            if line.is_empty() {
                continue;
            }
            let err = |msg: &str| Error::InvalidModel(format!("line {}: {msg}: {raw:?}", n + 1));
            let (key, value) = line.split_once('=').ok_or_else(|| err("expected key = value"))?;
            let value = value.trim();
            let key: Vec<&str> = key.split_whitespace().collect();
            let prob = || value.parse::<f64>().map_err(|_| err("bad number"));
            match key[..] {
                ["seed"] => model.seed = value.parse().map_err(|_| err("bad seed"))?,
                ["insertion-rate"] => model.insertion_rate = prob()?,
                ["insert", phone] => {
                    let phone = parse_phone(phone).map_err(|_| err("unknown phone"))?;
                    model.insertion.push((phone, prob()?));
                }
                ["sub", from, to] => {
                    let from = parse_phone(from).map_err(|_| err("unknown phone"))?;
                    let to = Token::parse(to).map_err(|_| err("unknown phone"))?;
                    model = model.with_outcome(from, to, prob()?);
                }
                _ => return Err(err("unknown key")),
            }
        }
        model.validate()?;
        Ok(model)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        writeln!(out, "seed = {}", self.seed).unwrap();
        writeln!(out, "insertion-rate = {}", self.insertion_rate).unwrap();
        for (phone, p) in &self.insertion {
            writeln!(out, "insert {phone} = {p}").unwrap();
        }
        for (from, to, p) in self.planted() {
            writeln!(out, "sub {from} {to} = {p}").unwrap();
        }
        out
    }
}

fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

fn pick<T: Copy>(items: &[(T, f64)], u: f64) -> Option<T> {
    let mut acc = 0.0;
    for &(item, p) in items {
        acc += p;
        if u < acc {
            return Some(item);
        }
    }
    None
}

/// Draws a realized sequence for `canonical` on stream `stream`.
pub fn sample(canonical: &[Phone], model: &ErrorModel, stream: u64) -> Result<PhoneSeq> {
    model.validate()?;
    Ok(sample_valid(canonical, model, stream))
}

fn sample_valid(canonical: &[Phone], model: &ErrorModel, stream: u64) -> PhoneSeq {
    let mut rng = stream_rng(model.seed, stream);
    let mut out = PhoneSeq::default();
    let maybe_insert = |rng: &mut ChaCha8Rng, out: &mut PhoneSeq| {
        let u: f64 = rng.random();
        if u < model.insertion_rate {
            let v: f64 = rng.random();
            // Fall back to the last entry if rounding leaves v above the mass.
            let phone = pick(&model.insertion, v).unwrap_or(model.insertion.last().unwrap().0);
            out.push(phone);
        }
    };
    maybe_insert(&mut rng, &mut out);
    for &phone in canonical {
        let u: f64 = rng.random();
        let outcome = model
            .substitution
            .get(&phone)
            .and_then(|outs| pick(outs, u))
            .unwrap_or(Token::Phone(phone));
        if let Token::Phone(p) = outcome {
            out.push(p);
        }
        maybe_insert(&mut rng, &mut out);
    }
    out
}

/// Where canonical sequences come from.
#[derive(Debug, Clone, PartialEq)]
pub enum CorpusSource {
    /// Phones drawn uniformly from `alphabet`, `utterance_len` per utterance.
    Uniform {
        alphabet: Vec<Phone>,
        utterance_len: usize,
    },
    /// Utterances drawn uniformly from a list of phone sequences.
    Words(Vec<PhoneSeq>),
}

/// A small set of everyday words used for realistic canonical corpora.
pub const BUNDLED_WORDS: &[&str] = &[
    "학교", "국물", "좋다", "바다", "나무", "사람", "한국어", "선생님", "친구", "음식",
    "겨울", "여름", "읽다", "많이", "같이", "입학", "신라", "설날", "종로", "부엌",
    "꽃", "옷장", "값이", "닭고기", "앉아요", "괜찮아요", "의자", "회사", "병원", "약국",
    "도서관", "지하철", "비행기", "컴퓨터", "전화", "시간", "감사합니다", "미안합니다", "어디", "무엇",
    "노래", "운동", "가족", "아버지", "어머니", "동생", "우리", "하늘", "바람", "사랑",
    "물", "불", "눈", "코", "입", "귀", "손", "발", "머리", "얼굴",
    "빨리", "천천히", "깨끗하다", "따뜻하다", "쓰다", "찌개", "딸기", "토끼", "포도", "치마",
];

impl CorpusSource {
    pub fn uniform(utterance_len: usize) -> Self {
        CorpusSource::Uniform {
            alphabet: crate::phoneset::inventory().collect(),
            utterance_len,
        }
    }

    /// G2P output of [`BUNDLED_WORDS`].
    pub fn bundled_words() -> Self {
        CorpusSource::Words(
            BUNDLED_WORDS
                .iter()
                .map(|w| g2p(w, Mode::Strict).expect("bundled words are Hangul").phones)
                .collect(),
        )
    }

    /// Canonical utterances totalling at least `tokens` phones (exactly
    /// `tokens` for the uniform source).
    pub fn generate(&self, tokens: usize, seed: u64) -> Vec<PhoneSeq> {
        let seed = seed ^ CORPUS_SEED_SALT;
        let mut out = Vec::new();
        let mut total = 0usize;
        let mut stream = 0u64;
        while total < tokens {
            let mut rng = stream_rng(seed, stream);
            stream += 1;
            let utt: PhoneSeq = match self {
                CorpusSource::Uniform {
                    alphabet,
                    utterance_len,
                } => {
                    let len = (*utterance_len).max(1).min(tokens - total);
                    (0..len)
                        .map(|_| alphabet[rng.random_range(0..alphabet.len())])
                        .collect()
                }
                CorpusSource::Words(words) => {
                    if words.iter().all(|w| w.is_empty()) {
                        break;
                    }
                    words[rng.random_range(0..words.len())].clone()
                }
            };
            total += utt.len();
            out.push(utt);
        }
        out
    }
}

/// Samples, aligns and accumulates a synthetic corpus of `tokens` canonical
/// phones, returning the recovered matrix.
pub fn recover(
    model: &ErrorModel,
    tokens: usize,
    source: &CorpusSource,
    weights: &Weights,
) -> Result<ConfusionPercent> {
    Ok(recover_counts(model, tokens, source, weights)?.normalize())
}

pub fn recover_counts(
    model: &ErrorModel,
    tokens: usize,
    source: &CorpusSource,
    weights: &Weights,
) -> Result<ConfusionCounts> {
    model.validate()?;
    if tokens == 0 {
        return Err(Error::EmptyCorpus);
    }
    let corpus = source.generate(tokens, model.seed);
    Ok(corpus
        .par_iter()
        .enumerate()
        .fold(ConfusionCounts::new, |mut acc, (i, canonical)| {
            let realized = sample_valid(canonical, model, i as u64);
            acc.accumulate(&align(canonical, &realized, weights));
            acc
        })
        .reduce(ConfusionCounts::new, |a, b| a.merge(&b)))
}
