//! Shared fixtures and oracles for the integration tests.
#![allow(dead_code)]

use l2k::align::Weights;
use l2k::confusion::{ConfusionCounts, ConfusionPercent, GroupKey, L1};
use l2k::manifest::UtteranceRecord;
use l2k::phoneset::{inventory, ph, Phone, PhoneSeq, Token, AXIS_LEN};
use l2k::simulator::{recover_counts, sample, CorpusSource, ErrorModel};

/// Hangul words with their expected phones. Produced by
/// `tests/oracle/reference_g2p.py` and frozen here.
pub const G2P_FIXTURES: &[(&str, &str)] = &[
    ("바다", "p a t a"),
    ("학교", "h a k> kk yo"),
    ("국물", "k u ng m u l"),
    ("좋다", "c o th a"),
    ("국이", "k u k i"),
    ("가", "k a"),
    ("나무", "n a m u"),
    ("사람", "s a r a m"),
    ("닭", "t a k>"),
    ("읽다", "i k> tt a"),
    ("앉아", "a n c a"),
    ("닭이", "t a l k i"),
    ("읽어", "i l k eo"),
    ("넓다", "n eo l tt a"),
    ("값", "k a p>"),
    ("없다", "eo p> tt a"),
    ("값이", "k a p> ss i"),
    ("놓고", "n o kh o"),
    ("좋아", "c o a"),
    ("입학", "i ph a k>"),
    ("많다", "m a n th a"),
    ("싫어", "s i r eo"),
    ("축하", "ch u kh a"),
    ("옷이", "o s i"),
    ("꽃이", "kk o ch i"),
    ("식당", "s i k> tt a ng"),
    ("잡지", "c a p> cc i"),
    ("듣기", "t eu t> kk i"),
    ("합니다", "h a m n i t a"),
    ("받는", "p a n n eu n"),
    ("앞문", "a m m u n"),
    ("신라", "s i l l a"),
    ("설날", "s eo l l a l"),
    ("칼날", "kh a l l a l"),
    ("종로", "c o ng n o"),
    ("국립", "k u ng n i p>"),
    ("심리", "s i m n i"),
    ("부엌", "p u eo k>"),
    ("낮", "n a t>"),
    ("앞", "a p>"),
    ("밖", "p a k>"),
    ("옷", "o t>"),
    ("다리", "t a r i"),
    ("물", "m u l"),
    ("달라", "t a l l a"),
    ("의자", "ui c a"),
    ("회사", "h wae s a"),
    ("몫", "m o k>"),
    ("삶", "s a m"),
    ("여덟", "yeo t eo l"),
    ("젊다", "c eo m t a"),
    ("밝다", "p a k> tt a"),
    ("흙", "h eu k>"),
    ("않네", "a n n ae"),
];

/// Reference contingency tables as (a, b, c, d, statistic, p), computed with
/// `scipy.stats.chi2_contingency(correction=False)` by
/// `tests/oracle/reference_chi2.py`.
pub const CHI2_TABLES: &[(u64, u64, u64, u64, f64, f64)] = &[
    (10, 20, 20, 10, 6.666666666666667, 0.009823274507519235),
    (5, 5, 5, 5, 0.0, 1.0),
    (1, 99, 10, 90, 7.792207792207792, 0.005247203739115639),
    (500, 1500, 560, 7440, 547.043180954793, 5.536324441127557e-121),
    (464, 1536, 1200, 6800, 77.55979624981545, 1.287645887815704e-18),
    (12, 3, 7, 25, 14.326938439849622, 0.0001536503388808623),
    (30, 70, 45, 55, 4.8, 0.028459736916310638),
    (1000, 9000, 950, 9050, 1.420555437175936, 0.23331200248621),
    (2, 48, 40, 60, 21.42857142857143, 3.672575114265626e-06),
    (123, 4567, 890, 12345, 109.28015003928799, 1.4089619656430038e-25),
];

/// Upper-tail chi-square(1) probabilities from `scipy.stats.chi2.sf`.
pub const CHI2_SF: &[(f64, f64)] = &[
    (3.841459, 0.04999999465319563),
    (6.6667, 0.009823090776702492),
    (0.0, 1.0),
    (0.5, 0.47950012218695337),
    (1.0, 0.31731050786291115),
    (2.705543454095, 0.10000000000002623),
    (3.841458820694, 0.05000000000000363),
    (6.634896601021, 0.010000000000001192),
    (10.0, 0.001565402258002549),
    (10.827566170663, 0.0009999999999998576),
    (25.0, 5.733031437583875e-07),
    (60.0, 9.485737571073857e-15),
];

pub fn seq(s: &str) -> PhoneSeq {
    PhoneSeq::parse(s).unwrap()
}

pub fn tok(s: &str) -> Token {
    Token::parse(s).unwrap()
}

/// Minimum edit cost by plain top-down recursion over suffixes, memoized.
pub fn oracle_cost(a: &[Phone], b: &[Phone], w: &Weights) -> u32 {
    fn go(
        a: &[Phone],
        b: &[Phone],
        w: &Weights,
        memo: &mut Vec<Option<u32>>,
        cols: usize,
    ) -> u32 {
        let key = a.len() * cols + b.len();
        if let Some(v) = memo[key] {
            return v;
        }
        let v = match (a.split_first(), b.split_first()) {
            (None, None) => 0,
            (Some((_, ra)), None) => w.delete + go(ra, b, w, memo, cols),
            (None, Some((_, rb))) => w.insert + go(a, rb, w, memo, cols),
            (Some((x, ra)), Some((y, rb))) => {
                let diag = if x == y { 0 } else { w.substitute } + go(ra, rb, w, memo, cols);
                let del = w.delete + go(ra, b, w, memo, cols);
                let ins = w.insert + go(a, rb, w, memo, cols);
                diag.min(del).min(ins)
            }
        };
        memo[key] = Some(v);
        v
    }
    let cols = b.len() + 1;
    let mut memo = vec![None; (a.len() + 1) * cols];
    go(a, b, w, &mut memo, cols)
}

/// Calls `f(labels)` for every restricted growth string of length `len`
/// using at most `max_labels` labels: each string is the first-occurrence
/// relabeling of a class of sequences equal up to renaming.
pub fn for_each_rgs(len: usize, max_labels: u8, f: &mut impl FnMut(&[u8])) {
    fn rec(buf: &mut Vec<u8>, len: usize, used: u8, max: u8, f: &mut impl FnMut(&[u8])) {
        if buf.len() == len {
            f(buf);
            return;
        }
        for l in 0..(used + 1).min(max) {
            buf.push(l);
            rec(buf, len, used.max(l + 1), max, f);
            buf.pop();
        }
    }
    rec(&mut Vec::with_capacity(len), len, 0, max_labels, f);
}

/// The ten phones used by the uniform simulator corpora.
pub fn sim_alphabet() -> Vec<Phone> {
    ["l", "t>", "th", "u", "wi", "a", "i", "n", "t", "eu"]
        .into_iter()
        .map(ph)
        .collect()
}

/// Planted rates for the round-trip check: all between 5% and 25%, plus a
/// 2% insertion rate.
pub fn roundtrip_model(seed: u64) -> ErrorModel {
    ErrorModel::identity(seed)
        .with_outcome(ph("l"), tok("n"), 0.20)
        .with_outcome(ph("t>"), Token::Star, 0.15)
        .with_outcome(ph("th"), tok("t"), 0.10)
        .with_outcome(ph("u"), tok("eu"), 0.25)
        .with_outcome(ph("wi"), tok("i"), 0.05)
        .with_insertions(0.02, vec![(ph("r"), 0.8), (ph("eu"), 0.2)])
}

/// Largest deviation in percentage points between planted and recovered
/// cells, split into (substitution/deletion, insertion).
pub fn planted_deviation(model: &ErrorModel, m: &ConfusionPercent) -> (f64, f64) {
    let sub = model
        .planted()
        .map(|(from, to, p)| (m.get(Token::Phone(from), to) - 100.0 * p).abs())
        .fold(0.0, f64::max);
    let ins = model
        .insertion_distribution()
        .iter()
        .map(|&(to, p)| (m.get(Token::Star, Token::Phone(to)) - 100.0 * p).abs())
        .fold(0.0, f64::max);
    (sub, ins)
}

pub fn learner_key(l1: L1) -> GroupKey {
    GroupKey::new(l1, None).unwrap()
}

/// Synthetic records for one group: canonical phones from the uniform
/// simulator corpus, realized phones sampled from `model`.
pub fn synthetic_records(l1: L1, model: &ErrorModel, tokens: usize) -> Vec<UtteranceRecord> {
    let source = CorpusSource::Uniform {
        alphabet: sim_alphabet(),
        utterance_len: 8,
    };
    source
        .generate(tokens, model.seed())
        .into_iter()
        .enumerate()
        .map(|(i, canonical)| UtteranceRecord {
            id: format!("{}-{i}", l1.code()),
            l1,
            proficiency: None,
            text: None,
            realized: sample(&canonical, model, i as u64).unwrap(),
            canonical: Some(canonical),
        })
        .collect()
}

/// Group models for planted-pattern recovery: th→t in every learner group
/// and an l→n excess in VI only.
pub fn planted_group_model(l1: L1, seed: u64) -> ErrorModel {
    let base = ErrorModel::identity(seed)
        .with_outcome(ph("th"), tok("t"), 0.20)
        .with_outcome(ph("l"), tok("n"), 0.05)
        .with_outcome(ph("u"), tok("eu"), 0.03)
        .with_outcome(ph("a"), tok("eo"), 0.02);
    if l1 == L1::VI {
        base.with_outcome(ph("l"), tok("n"), 0.25)
    } else {
        base
    }
}

pub fn native_model(seed: u64) -> ErrorModel {
    ErrorModel::identity(seed)
        .with_outcome(ph("a"), tok("eo"), 0.02)
        .with_outcome(ph("u"), tok("eu"), 0.01)
}

/// Every phone has three error outcomes (two substitutions and deletion)
/// at fixed small rates; used identically for all groups.
pub fn null_model(seed: u64) -> ErrorModel {
    let phones: Vec<Phone> = inventory().collect();
    let n = phones.len();
    let mut m = ErrorModel::identity(seed).with_insertions(0.01, vec![(ph("eu"), 0.6), (ph("r"), 0.4)]);
    for (i, &p) in phones.iter().enumerate() {
        m = m
            .with_outcome(p, Token::Phone(phones[(i + 1) % n]), 0.04)
            .with_outcome(p, Token::Phone(phones[(i + 7) % n]), 0.03)
            .with_outcome(p, Token::Star, 0.02);
    }
    m
}

/// Per-group raw counts of `null_model` over a uniform full-inventory
/// corpus, one seed per group.
pub fn null_group_counts(base_seed: u64, tokens: usize) -> Vec<(GroupKey, ConfusionCounts)> {
    L1::LEARNERS
        .iter()
        .enumerate()
        .map(|(g, &l1)| {
            let model = null_model(base_seed + g as u64);
            let counts = recover_counts(
                &model,
                tokens,
                &CorpusSource::uniform(8),
                &Weights::default(),
            )
            .unwrap();
            (learner_key(l1), counts)
        })
        .collect()
}

/// Row sums of every supported row deviate from 100 by at most this much.
pub fn max_row_sum_error(m: &ConfusionPercent) -> f64 {
    (0..AXIS_LEN)
        .filter(|&r| m.is_supported(r))
        .map(|r| (m.row_sum(r) - 100.0).abs())
        .fold(0.0, f64::max)
}
