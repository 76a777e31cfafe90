//! The pronunciation rule cascade over one word of syllables.
//!
//! Every stage walks the syllable boundaries left to right. Stages only
//! touch the coda of syllable `i` and the onset of syllable `i + 1`, so
//! running each stage over the whole word is the same as running the full
//! cascade boundary by boundary.

use serde::Serialize;

use super::jamo::{JamoSyllable, SILENT_INITIAL};

/// Consonant letters in initial-table order. `Ng` is ㅇ, which only
/// surfaces as a coda; as an onset it means "no consonant".
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Cons {
    G,
    Gg,
    N,
    D,
    Dd,
    R,
    M,
    B,
    Bb,
    S,
    Ss,
    Ng,
    J,
    Jj,
    Ch,
    K,
    T,
    P,
    H,
}

use Cons::*;

const INITIALS: [Cons; 19] = [G, Gg, N, D, Dd, R, M, B, Bb, S, Ss, Ng, J, Jj, Ch, K, T, P, H];

type Coda = (Cons, Option<Cons>);

const FINALS: [Option<Coda>; 28] = [
    None,
    Some((G, None)),
    Some((Gg, None)),
    Some((G, Some(S))),
    Some((N, None)),
    Some((N, Some(J))),
    Some((N, Some(H))),
    Some((D, None)),
    Some((R, None)),
    Some((R, Some(G))),
    Some((R, Some(M))),
    Some((R, Some(B))),
    Some((R, Some(S))),
    Some((R, Some(T))),
    Some((R, Some(P))),
    Some((R, Some(H))),
    Some((M, None)),
    Some((B, None)),
    Some((B, Some(S))),
    Some((S, None)),
    Some((Ss, None)),
    Some((Ng, None)),
    Some((J, None)),
    Some((Ch, None)),
    Some((K, None)),
    Some((T, None)),
    Some((P, None)),
    Some((H, None)),
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Rule {
    ComplexCoda,
    HRule,
    Liaison,
    Tensification,
    LiquidNasalization,
    Nasalization,
    Lateralization,
    Neutralization,
    Tap,
    UnreleasedCoda,
}

impl Rule {
    pub fn as_str(self) -> &'static str {
        match self {
            Rule::ComplexCoda => "complex-coda",
            Rule::HRule => "h-rule",
            Rule::Liaison => "liaison",
            Rule::Tensification => "tensification",
            Rule::LiquidNasalization => "liquid-nasalization",
            Rule::Nasalization => "nasalization",
            Rule::Lateralization => "lateralization",
            Rule::Neutralization => "neutralization",
            Rule::Tap => "tap",
            Rule::UnreleasedCoda => "unreleased-coda",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct Syl {
    pub onset: Option<Cons>,
    pub medial: u8,
    pub coda: Option<Coda>,
    /// Set when ㄼ reduced to ㄹ; it still tensifies a following obstruent.
    tensing: bool,
}

impl Syl {
    pub fn from_jamo(j: JamoSyllable) -> Self {
        let onset = match INITIALS[j.initial as usize] {
            Ng => None,
            c => Some(c),
        };
        Syl {
            onset,
            medial: j.medial,
            coda: FINALS[j.final_ as usize],
            tensing: false,
        }
    }

    pub fn to_jamo(self) -> JamoSyllable {
        let initial = match self.onset {
            None => SILENT_INITIAL,
            Some(c) => INITIALS.iter().position(|&x| x == c).unwrap() as u8,
        };
        let final_ = FINALS
            .iter()
            .position(|&f| f == self.coda)
            .unwrap_or_else(|| panic!("coda {:?} has no final jamo", self.coda)) as u8;
        JamoSyllable::new(initial, self.medial, final_).unwrap()
    }

    fn single_coda(&self) -> Option<Cons> {
        match self.coda {
            Some((c, None)) => Some(c),
            _ => None,
        }
    }
}

fn is_obstruent(c: Cons) -> bool {
    matches!(c, G | Gg | K | D | Dd | T | B | Bb | P | S | Ss | J | Jj | Ch)
}

fn tense(c: Cons) -> Option<Cons> {
    match c {
        G => Some(Gg),
        D => Some(Dd),
        B => Some(Bb),
        S => Some(Ss),
        J => Some(Jj),
        _ => None,
    }
}

/// Aspirate produced when a coda obstruent meets onset ㅎ.
fn aspirate_by_place(c: Cons) -> Cons {
    match c {
        G | Gg | K => K,
        J => Ch,
        B | Bb | P => P,
        _ => T,
    }
}

fn nasal_by_place(c: Cons) -> Cons {
    match c {
        G | Gg | K => Ng,
        B | Bb | P => M,
        _ => N,
    }
}

fn neutralize(c: Cons) -> Cons {
    match c {
        Gg | K => G,
        S | Ss | J | Jj | Ch | T | Dd | H => D,
        P | Bb => B,
        other => other,
    }
}

/// Surviving consonant of a complex coda before a consonant or word end.
fn reduce_complex(first: Cons, second: Cons) -> Cons {
    match (first, second) {
        (R, G) => G,
        (R, M) => M,
        (R, P) => B,
        _ => first,
    }
}

/// One recorded rule application.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RuleStep {
    pub rule: Rule,
    pub position: TracePosition,
    pub before: String,
    pub after: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum TracePosition {
    /// Syllable window starting at `index` within word `word`.
    Syllable { word: usize, index: usize },
    /// Index into the flattened output phone sequence.
    Phone { index: usize },
}

fn render(syls: &[Syl]) -> String {
    syls.iter().map(|s| s.to_jamo().to_char()).collect()
}

fn stage(
    syls: &mut [Syl],
    word: usize,
    rule: Rule,
    trace: &mut Vec<RuleStep>,
    f: impl Fn(&mut Syl, Option<&mut Syl>),
) {
    for i in 0..syls.len() {
        let end = (i + 2).min(syls.len());
        let before = render(&syls[i..end]);
        let (head, tail) = syls.split_at_mut(i + 1);
        f(&mut head[i], tail.first_mut());
        let after = render(&syls[i..end]);
        if before != after {
            trace.push(RuleStep {
                rule,
                position: TracePosition::Syllable { word, index: i },
                before,
                after,
            });
        }
    }
}

fn complex_coda(cur: &mut Syl, next: Option<&mut Syl>) {
    let Some((first, Some(second))) = cur.coda else {
        return;
    };
    if second == H {
        return;
    }
    match next {
        Some(n) if n.onset.is_none() => {
            cur.coda = Some((first, None));
            n.onset = Some(second);
        }
        Some(n) if n.onset == Some(H) => {}
        _ => {
            cur.coda = Some((reduce_complex(first, second), None));
            cur.tensing = (first, second) == (R, B);
        }
    }
}

fn h_rule(cur: &mut Syl, next: Option<&mut Syl>) {
    let Some((first, second)) = cur.coda else {
        return;
    };
    if first == H || second == Some(H) {
        let rest = if first == H { None } else { Some(first) };
        let single = |c: Option<Cons>| c.map(|c| (c, None));
        match next {
            Some(n) => match n.onset {
                None => cur.coda = single(rest),
                Some(o @ (G | D | J)) => {
                    cur.coda = single(rest);
                    n.onset = Some(aspirate_by_place(o));
                }
                Some(S) => {
                    cur.coda = single(rest);
                    n.onset = Some(Ss);
                }
                Some(N) => cur.coda = single(rest.or(Some(N))),
                Some(_) => cur.coda = single(rest),
            },
            None => cur.coda = single(rest.or(Some(D))),
        }
        return;
    }
    let Some(n) = next else {
        return;
    };
    if n.onset != Some(H) {
        return;
    }
    match second {
        None if is_obstruent(first) => {
            cur.coda = None;
            n.onset = Some(aspirate_by_place(first));
        }
        None => {}
        Some(_) if is_obstruent(first) => {
            cur.coda = None;
            n.onset = Some(aspirate_by_place(first));
        }
        Some(s) if is_obstruent(s) => {
            cur.coda = Some((first, None));
            n.onset = Some(aspirate_by_place(s));
        }
        Some(s) => cur.coda = Some((reduce_complex(first, s), None)),
    }
}

fn liaison(cur: &mut Syl, next: Option<&mut Syl>) {
    if let (Some(c), Some(n)) = (cur.single_coda(), next) {
        if c != Ng && n.onset.is_none() {
            cur.coda = None;
            n.onset = Some(c);
        }
    }
}

fn tensification(cur: &mut Syl, next: Option<&mut Syl>) {
    let trigger = cur.tensing || cur.single_coda().is_some_and(is_obstruent);
    cur.tensing = false;
    if let (true, Some(n)) = (trigger, next) {
        if let Some(t) = n.onset.and_then(tense) {
            n.onset = Some(t);
        }
    }
}

fn liquid_nasalization(cur: &mut Syl, next: Option<&mut Syl>) {
    if let (Some(c), Some(n)) = (cur.single_coda(), next) {
        if n.onset == Some(R) && (c == M || c == Ng || is_obstruent(c)) {
            n.onset = Some(N);
        }
    }
}

fn nasalization(cur: &mut Syl, next: Option<&mut Syl>) {
    if let (Some(c), Some(n)) = (cur.single_coda(), next) {
        if is_obstruent(c) && matches!(n.onset, Some(N | M)) {
            cur.coda = Some((nasal_by_place(c), None));
        }
    }
}

fn lateralization(cur: &mut Syl, next: Option<&mut Syl>) {
    if let (Some(c), Some(n)) = (cur.single_coda(), next) {
        match (c, n.onset) {
            (N, Some(R)) => cur.coda = Some((R, None)),
            (R, Some(N)) => n.onset = Some(R),
            _ => {}
        }
    }
}

fn neutralization(cur: &mut Syl, _next: Option<&mut Syl>) {
    if let Some(c) = cur.single_coda() {
        cur.coda = Some((neutralize(c), None));
    }
}

type Stage = fn(&mut Syl, Option<&mut Syl>);

/// Runs the cascade on one word, recording each change.
pub(crate) fn cascade(word: &[JamoSyllable], word_index: usize, trace: &mut Vec<RuleStep>) -> Vec<Syl> {
    let mut syls: Vec<Syl> = word.iter().copied().map(Syl::from_jamo).collect();
    let stages: [(Rule, Stage); 8] = [
        (Rule::ComplexCoda, complex_coda),
        (Rule::HRule, h_rule),
        (Rule::Liaison, liaison),
        (Rule::Tensification, tensification),
        (Rule::LiquidNasalization, liquid_nasalization),
        (Rule::Nasalization, nasalization),
        (Rule::Lateralization, lateralization),
        (Rule::Neutralization, neutralization),
    ];
    for (rule, f) in stages {
        stage(&mut syls, word_index, rule, trace, f);
    }
    syls
}

pub(crate) fn onset_symbol(c: Cons) -> &'static str {
    match c {
        G => "k",
        Gg => "kk",
        N => "n",
        D => "t",
        Dd => "tt",
        R => "l",
        M => "m",
        B => "p",
        Bb => "pp",
        S => "s",
        Ss => "ss",
        Ng => unreachable!("ㅇ onset is silent"),
        J => "c",
        Jj => "cc",
        Ch => "ch",
        K => "kh",
        T => "th",
        P => "ph",
        H => "h",
    }
}

/// Plain coda symbol before allophony; only the seven neutralized codas
/// can reach this point.
pub(crate) fn coda_symbol(c: Cons) -> &'static str {
    match c {
        G => "k",
        N => "n",
        D => "t",
        R => "l",
        M => "m",
        B => "p",
        Ng => "ng",
        other => unreachable!("coda {other:?} survived neutralization"),
    }
}

pub(crate) fn vowel_symbol(medial: u8) -> &'static str {
    const VOWELS: [&str; 21] = [
        "a", "ae", "ya", "yae", "eo", "ae", "yeo", "yae", "o", "wa", "wae", "wae", "yo", "u", "wo",
        "wae", "wi", "yu", "eu", "ui", "i",
    ];
    VOWELS[medial as usize]
}
