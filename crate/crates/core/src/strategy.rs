//! Deterministic classical strategies for the standard and binary RAC, their
//! exact evaluation, and exhaustive searches over them.
//!
//! Words are indexed `0..d^n` in base `d` with `a_0` as the most significant
//! digit, so index order is lexicographic order on dit strings. Encoding
//! tables are compared lexicographically in the same word order.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::Serialize;

use crate::combinatorics::TaskParams;
use crate::error::{Error, Result};
use crate::exact::ExactRational;
use crate::payoff::PayoffConfig;

/// Largest number of words (`d^n`) a strategy table may cover.
pub const MAX_WORDS: u64 = 100_000_000;
/// Cap on the number of encodings enumerated by exhaustive searches.
pub const MAX_ENCODINGS: u64 = 100_000_000;
/// Cap on the number of standard decodings enumerated in joint search.
pub const MAX_DECODINGS: u64 = 10_000;
/// Cap on encoding × decoding pairs in joint search.
pub const MAX_JOINT_PAIRS: u64 = 1_000_000_000;

fn word_count(params: TaskParams) -> Result<usize> {
    match params.word_count() {
        Some(w) if w <= MAX_WORDS => Ok(w as usize),
        _ => Err(Error::CapExceeded {
            what: "word count d^n",
            count: params.word_count_big().to_string(),
            cap: MAX_WORDS,
        }),
    }
}

/// `base^exp` if it does not exceed `cap`.
fn bounded_pow(base: u64, exp: u64, cap: u64) -> Option<u64> {
    let mut acc: u64 = 1;
    for _ in 0..exp {
        acc = acc.checked_mul(base)?;
        if acc > cap {
            return None;
        }
    }
    Some(acc)
}

fn cap_error(what: &'static str, base: usize, exp: usize, cap: u64) -> Error {
    Error::CapExceeded {
        what,
        count: format!("{base}^{exp}"),
        cap,
    }
}

/// Alice's input `a_0 … a_{n-1}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct DitString {
    letters: Vec<usize>,
    #[serde(skip)]
    d: usize,
}

impl DitString {
    pub fn new(letters: Vec<usize>, d: usize) -> Result<Self> {
        if letters.is_empty() {
            return Err(Error::InvalidParams("dit string must not be empty".into()));
        }
        if let Some(&bad) = letters.iter().find(|&&l| l >= d) {
            return Err(Error::InvalidLabel { label: bad, d });
        }
        Ok(DitString { letters, d })
    }

    pub fn from_index(mut index: usize, params: TaskParams) -> Self {
        let d = params.d();
        let mut letters = vec![0; params.n()];
        for slot in letters.iter_mut().rev() {
            *slot = index % d;
            index /= d;
        }
        DitString { letters, d }
    }

    pub fn index(&self) -> usize {
        self.letters.iter().fold(0, |acc, &l| acc * self.d + l)
    }

    pub fn letters(&self) -> &[usize] {
        &self.letters
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }
}

/// All words of a task, in index order.
pub fn all_words(params: TaskParams) -> Result<impl Iterator<Item = DitString>> {
    let w = word_count(params)?;
    Ok((0..w).map(move |i| DitString::from_index(i, params)))
}

/// Most frequent letter; ties go to the smallest letter.
pub fn majority_encoding(a: &DitString) -> usize {
    let mut counts = vec![0usize; a.d()];
    for &l in a.letters() {
        counts[l] += 1;
    }
    // max_by_key keeps the last maximum, so scan from the top letter down.
    (0..a.d()).rev().max_by_key(|&m| counts[m]).unwrap_or(0)
}

/// A total map from words to messages.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EncodingStrategy {
    #[serde(skip)]
    params: TaskParams,
    table: Vec<usize>,
}

impl EncodingStrategy {
    pub fn new(params: TaskParams, table: Vec<usize>) -> Result<Self> {
        let w = word_count(params)?;
        if table.len() != w {
            return Err(Error::DimensionMismatch(format!(
                "encoding table has {} entries, expected d^n = {w}",
                table.len()
            )));
        }
        if let Some(&bad) = table.iter().find(|&&m| m >= params.d()) {
            return Err(Error::InvalidLabel {
                label: bad,
                d: params.d(),
            });
        }
        Ok(EncodingStrategy { params, table })
    }

    pub fn from_fn(params: TaskParams, mut f: impl FnMut(&DitString) -> usize) -> Result<Self> {
        let table = all_words(params)?.map(|a| f(&a)).collect();
        EncodingStrategy::new(params, table)
    }

    pub fn majority(params: TaskParams) -> Result<Self> {
        EncodingStrategy::from_fn(params, majority_encoding)
    }

    pub fn constant(params: TaskParams, message: usize) -> Result<Self> {
        EncodingStrategy::from_fn(params, |_| message)
    }

    /// Sends the letter at `position` verbatim.
    pub fn letter(params: TaskParams, position: usize) -> Result<Self> {
        if position >= params.n() {
            return Err(Error::InvalidIndex {
                index: position,
                lower: 0,
                upper: params.n() - 1,
            });
        }
        EncodingStrategy::from_fn(params, |a| a.letters()[position])
    }

    pub fn params(&self) -> TaskParams {
        self.params
    }

    pub fn table(&self) -> &[usize] {
        &self.table
    }

    pub fn encode(&self, a: &DitString) -> usize {
        self.table[a.index()]
    }
}

/// Bob's maps `D_y: m -> b`, one per query index `y`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StandardDecoding {
    #[serde(skip)]
    d: usize,
    maps: Vec<Vec<usize>>,
}

impl StandardDecoding {
    pub fn new(params: TaskParams, maps: Vec<Vec<usize>>) -> Result<Self> {
        if maps.len() != params.n() {
            return Err(Error::DimensionMismatch(format!(
                "{} decoding maps for n = {}",
                maps.len(),
                params.n()
            )));
        }
        for map in &maps {
            if map.len() != params.d() {
                return Err(Error::DimensionMismatch(format!(
                    "decoding map of length {} for d = {}",
                    map.len(),
                    params.d()
                )));
            }
            if let Some(&bad) = map.iter().find(|&&b| b >= params.d()) {
                return Err(Error::InvalidLabel {
                    label: bad,
                    d: params.d(),
                });
            }
        }
        Ok(StandardDecoding {
            d: params.d(),
            maps,
        })
    }

    pub fn identity(params: TaskParams) -> Self {
        StandardDecoding {
            d: params.d(),
            maps: vec![(0..params.d()).collect(); params.n()],
        }
    }

    pub fn decode(&self, y: usize, message: usize) -> usize {
        self.maps[y][message]
    }

    pub fn maps(&self) -> &[Vec<usize>] {
        &self.maps
    }

    pub fn is_identity(&self) -> bool {
        self.maps
            .iter()
            .all(|map| map.iter().enumerate().all(|(m, &b)| m == b))
    }
}

/// Bob's binary answer: `Yes` is `G = 0`, `No` is `G = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Guess {
    Yes,
    No,
}

impl Guess {
    pub fn g(self) -> u8 {
        match self {
            Guess::Yes => 0,
            Guess::No => 1,
        }
    }
}

impl Serialize for Guess {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_u8(self.g())
    }
}

/// Answers `G(m, y, k)` for every message, query index and candidate letter.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BinaryDecodingTable {
    #[serde(skip)]
    params: TaskParams,
    answers: Vec<Guess>,
}

impl BinaryDecodingTable {
    pub fn from_fn(params: TaskParams, mut f: impl FnMut(usize, usize, usize) -> Guess) -> Self {
        let (d, n) = (params.d(), params.n());
        let mut answers = Vec::with_capacity(d * n * d);
        for m in 0..d {
            for y in 0..n {
                for k in 0..d {
                    answers.push(f(m, y, k));
                }
            }
        }
        BinaryDecodingTable { params, answers }
    }

    pub fn constant(params: TaskParams, guess: Guess) -> Self {
        BinaryDecodingTable::from_fn(params, |_, _, _| guess)
    }

    pub fn get(&self, message: usize, y: usize, k: usize) -> Guess {
        let (d, n) = (self.params.d(), self.params.n());
        self.answers[(message * n + y) * d + k]
    }

    pub fn params(&self) -> TaskParams {
        self.params
    }
}

/// Counts of `a_y = k` among the words mapped to each message.
struct ConditionalCounts {
    d: usize,
    n: usize,
    /// indexed `(m * n + y) * d + k`
    hits: Vec<u64>,
    /// words sent as each message
    totals: Vec<u64>,
}

impl ConditionalCounts {
    fn new(params: TaskParams) -> Self {
        let (d, n) = (params.d(), params.n());
        ConditionalCounts {
            d,
            n,
            hits: vec![0; d * n * d],
            totals: vec![0; d],
        }
    }

    fn of(encoding: &EncodingStrategy) -> Self {
        let params = encoding.params();
        let mut counts = ConditionalCounts::new(params);
        for (w, &m) in encoding.table().iter().enumerate() {
            counts.add(&DitString::from_index(w, params), m);
        }
        counts
    }

    fn add(&mut self, a: &DitString, m: usize) {
        self.totals[m] += 1;
        for (y, &l) in a.letters().iter().enumerate() {
            self.hits[(m * self.n + y) * self.d + l] += 1;
        }
    }

    fn remove(&mut self, a: &DitString, m: usize) {
        self.totals[m] -= 1;
        for (y, &l) in a.letters().iter().enumerate() {
            self.hits[(m * self.n + y) * self.d + l] -= 1;
        }
    }

    fn hits(&self, m: usize, y: usize, k: usize) -> u64 {
        self.hits[(m * self.n + y) * self.d + k]
    }
}

fn check_same_params(a: TaskParams, b: TaskParams) -> Result<()> {
    if a != b {
        return Err(Error::DimensionMismatch(format!(
            "strategy components disagree: (d={}, n={}) vs (d={}, n={})",
            a.d(),
            a.n(),
            b.d(),
            b.n()
        )));
    }
    Ok(())
}

fn check_config(params: TaskParams, cfg: &PayoffConfig) -> Result<()> {
    if cfg.d() != params.d() {
        return Err(Error::DimensionMismatch(format!(
            "payoff config has d = {}, task has d = {}",
            cfg.d(),
            params.d()
        )));
    }
    Ok(())
}

fn ratio(num: u64, den: u64) -> ExactRational {
    BigRational::new(num.into(), den.into())
}

/// Exact success probability `(1/(n d^n)) Σ_{a,y} [D_y(E(a)) = a_y]`.
pub fn evaluate_standard_strategy(
    encoding: &EncodingStrategy,
    decoding: &StandardDecoding,
) -> Result<ExactRational> {
    let params = encoding.params();
    if decoding.maps.len() != params.n() || decoding.d != params.d() {
        return Err(Error::DimensionMismatch(format!(
            "decoding for (d={}, n={}) used with (d={}, n={})",
            decoding.d,
            decoding.maps.len(),
            params.d(),
            params.n()
        )));
    }
    let mut hits = 0u64;
    for (w, &m) in encoding.table().iter().enumerate() {
        let a = DitString::from_index(w, params);
        hits += a
            .letters()
            .iter()
            .enumerate()
            .filter(|&(y, &l)| decoding.decode(y, m) == l)
            .count() as u64;
    }
    Ok(ratio(
        hits,
        encoding.table().len() as u64 * params.n() as u64,
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SearchMode {
    /// All encodings, Bob outputs the received message.
    IdentityDecoding,
    /// All encodings paired with all decodings.
    Joint,
}

#[derive(Debug, Clone, Serialize)]
pub struct StandardOptimum {
    #[serde(skip)]
    pub value: ExactRational,
    pub encoding: EncodingStrategy,
    pub decoding: StandardDecoding,
}

/// Optimal standard RAC value over deterministic strategies.
///
/// With identity decoding the objective `Σ_a #{y : a_y = E(a)}` is a sum of
/// independent per-word terms, so maximizing each word separately gives the
/// optimum over all `d^(d^n)` encodings; the search is capped at
/// `d^n · d ≤ 10^8` word/message pairs. The witness picks the smallest
/// maximizing message per word, which makes it the lexicographically smallest
/// optimal table.
///
/// Joint mode enumerates every decoding and every encoding literally.
pub fn brute_force_standard(params: TaskParams, mode: SearchMode) -> Result<StandardOptimum> {
    match mode {
        SearchMode::IdentityDecoding => identity_optimum(params),
        SearchMode::Joint => joint_optimum(params),
    }
}

fn identity_optimum(params: TaskParams) -> Result<StandardOptimum> {
    let (d, n) = (params.d(), params.n());
    let words = params
        .word_count()
        .filter(|w| w.checked_mul(d as u64).is_some_and(|p| p <= MAX_ENCODINGS))
        .ok_or_else(|| Error::CapExceeded {
            what: "word/message pairs d^n * d",
            count: format!("{}^{} * {}", d, n, d),
            cap: MAX_ENCODINGS,
        })? as usize;
    let mut table = Vec::with_capacity(words);
    let mut hits = 0u64;
    let mut tally = vec![0u64; d];
    for w in 0..words {
        tally.iter_mut().for_each(|t| *t = 0);
        for &l in DitString::from_index(w, params).letters() {
            tally[l] += 1;
        }
        let mut best = 0;
        for m in 1..d {
            if tally[m] > tally[best] {
                best = m;
            }
        }
        hits += tally[best];
        table.push(best);
    }
    Ok(StandardOptimum {
        value: ratio(hits, words as u64 * n as u64),
        encoding: EncodingStrategy::new(params, table)?,
        decoding: StandardDecoding::identity(params),
    })
}

/// Odometer over `len` digits in `0..base`, least significant digit last.
/// Calls `on_change(position, old, new)` for every digit it rewrites and
/// returns false after the final state.
fn odometer_step(
    digits: &mut [usize],
    base: usize,
    mut on_change: impl FnMut(usize, usize, usize),
) -> bool {
    for pos in (0..digits.len()).rev() {
        let old = digits[pos];
        if old + 1 < base {
            digits[pos] = old + 1;
            on_change(pos, old, old + 1);
            return true;
        }
        digits[pos] = 0;
        on_change(pos, old, 0);
    }
    false
}

fn joint_optimum(params: TaskParams) -> Result<StandardOptimum> {
    let (d, n) = (params.d(), params.n());
    let words = word_count(params)?;
    let encodings = bounded_pow(d as u64, words as u64, MAX_ENCODINGS)
        .ok_or_else(|| cap_error("encodings d^(d^n)", d, words, MAX_ENCODINGS))?;
    let decodings = bounded_pow(d as u64, (n * d) as u64, MAX_DECODINGS)
        .ok_or_else(|| cap_error("decodings d^(n d)", d, n * d, MAX_DECODINGS))?;
    if encodings.saturating_mul(decodings) > MAX_JOINT_PAIRS {
        return Err(Error::CapExceeded {
            what: "encoding/decoding pairs",
            count: format!("{encodings} * {decodings}"),
            cap: MAX_JOINT_PAIRS,
        });
    }

    let letters: Vec<Vec<usize>> = (0..words)
        .map(|w| DitString::from_index(w, params).letters().to_vec())
        .collect();
    let mut dec_digits = vec![0usize; n * d];
    let mut score = vec![0u64; words * d];
    let mut best: Option<(u64, Vec<usize>, Vec<usize>)> = None;

    loop {
        // score[w * d + m] = #{y : D_y(m) = a_y}
        for (w, a) in letters.iter().enumerate() {
            for m in 0..d {
                score[w * d + m] = a
                    .iter()
                    .enumerate()
                    .filter(|&(y, &l)| dec_digits[y * d + m] == l)
                    .count() as u64;
            }
        }
        let mut table = vec![0usize; words];
        let mut total: u64 = (0..words).map(|w| score[w * d]).sum();
        loop {
            if best.as_ref().is_none_or(|(b, _, _)| total > *b) {
                best = Some((total, table.clone(), dec_digits.clone()));
            }
            let more = odometer_step(&mut table, d, |w, old, new| {
                total = total - score[w * d + old] + score[w * d + new];
            });
            if !more {
                break;
            }
        }
        if !odometer_step(&mut dec_digits, d, |_, _, _| {}) {
            break;
        }
    }

    let (hits, table, dec) = best.expect("at least one strategy pair");
    Ok(StandardOptimum {
        value: ratio(hits, words as u64 * n as u64),
        encoding: EncodingStrategy::new(params, table)?,
        decoding: StandardDecoding::new(params, dec.chunks(d).map(<[usize]>::to_vec).collect())?,
    })
}

/// Exact best-response answers to an encoding.
///
/// `G(m, y, k) = 0` iff `t_yes · p(a_y = k | m, y) ≥ p(a_y ≠ k | m, y)`, ties
/// going to YES. Messages the encoding never sends are answered NO; no input
/// reaches them, so the choice does not affect the payoff.
pub fn best_response_binary_decoding(
    encoding: &EncodingStrategy,
    cfg: &PayoffConfig,
) -> Result<BinaryDecodingTable> {
    let params = encoding.params();
    check_config(params, cfg)?;
    let counts = ConditionalCounts::of(encoding);
    let t_yes = cfg.t_yes();
    Ok(BinaryDecodingTable::from_fn(params, |m, y, k| {
        let total = counts.totals[m];
        if total == 0 {
            return Guess::No;
        }
        let hits = counts.hits(m, y, k);
        let yes = t_yes * BigRational::from_integer(hits.into());
        let no = BigRational::from_integer((total - hits).into());
        if yes >= no {
            Guess::Yes
        } else {
            Guess::No
        }
    }))
}

/// Exact normalized binary RAC payoff
/// `(1/(n d^n t_d)) Σ_{a,y,k} (t_yes [G=0, a_y=k] + [G=1, a_y≠k])`.
pub fn evaluate_binary_strategy(
    encoding: &EncodingStrategy,
    decoding: &BinaryDecodingTable,
    cfg: &PayoffConfig,
) -> Result<ExactRational> {
    let params = encoding.params();
    check_same_params(params, decoding.params())?;
    check_config(params, cfg)?;
    let counts = ConditionalCounts::of(encoding);
    let (d, n) = (params.d(), params.n());
    let (mut yes_hits, mut no_hits) = (0u64, 0u64);
    for m in 0..d {
        for y in 0..n {
            for k in 0..d {
                let hits = counts.hits(m, y, k);
                match decoding.get(m, y, k) {
                    Guess::Yes => yes_hits += hits,
                    Guess::No => no_hits += counts.totals[m] - hits,
                }
            }
        }
    }
    let raw = cfg.t_yes() * BigRational::from_integer(yes_hits.into())
        + BigRational::from_integer(no_hits.into());
    let inputs = BigRational::from_integer((encoding.table().len() as u64 * n as u64).into());
    Ok(raw / (inputs * cfg.t_d()))
}

#[derive(Debug, Clone, Serialize)]
pub struct BinaryOptimum {
    #[serde(skip)]
    pub value: ExactRational,
    pub encoding: EncodingStrategy,
}

/// `t_yes = num/den` as machine integers for the exhaustive inner loop.
fn small_fraction(q: &ExactRational) -> Result<(i128, i128)> {
    let limit = BigInt::from(1u64 << 62);
    if q.numer() > &limit || q.denom() > &limit {
        return Err(Error::InvalidParams(
            "t_yes numerator/denominator too large for exhaustive search".into(),
        ));
    }
    Ok((
        q.numer().to_i128().unwrap_or_default(),
        q.denom().to_i128().unwrap_or_default(),
    ))
}

/// Optimal binary RAC payoff over all deterministic encodings, each paired
/// with its exact best-response decoding. Since the decoding decomposes per
/// `(m, y, k)`, this is the optimum over all deterministic strategy pairs.
///
/// The witness is the lexicographically smallest optimal encoding table.
pub fn brute_force_binary(params: TaskParams, cfg: &PayoffConfig) -> Result<BinaryOptimum> {
    check_config(params, cfg)?;
    let (d, n) = (params.d(), params.n());
    let words = word_count(params)?;
    bounded_pow(d as u64, words as u64, MAX_ENCODINGS)
        .ok_or_else(|| cap_error("encodings d^(d^n)", d, words, MAX_ENCODINGS))?;
    let (num, den) = small_fraction(cfg.t_yes())?;

    let strings: Vec<DitString> = (0..words)
        .map(|w| DitString::from_index(w, params))
        .collect();
    let mut table = vec![0usize; words];
    let mut counts = ConditionalCounts::new(params);
    for a in &strings {
        counts.add(a, 0);
    }

    // Best-response payoff of message m, scaled by den: Σ_{y,k} max(num·c, den·(t − c)).
    let message_score = |counts: &ConditionalCounts, m: usize| -> i128 {
        let total = counts.totals[m] as i128;
        if total == 0 {
            return 0;
        }
        let mut s = 0i128;
        for y in 0..n {
            for k in 0..d {
                let c = counts.hits(m, y, k) as i128;
                s += (num * c).max(den * (total - c));
            }
        }
        s
    };

    let mut scores: Vec<i128> = (0..d).map(|m| message_score(&counts, m)).collect();
    let mut total: i128 = scores.iter().sum();
    let mut best = (total, table.clone());
    loop {
        let more = odometer_step(&mut table, d, |w, old, new| {
            counts.remove(&strings[w], old);
            counts.add(&strings[w], new);
            for m in [old, new] {
                let s = message_score(&counts, m);
                total += s - scores[m];
                scores[m] = s;
            }
        });
        if !more {
            break;
        }
        if total > best.0 {
            best = (total, table.clone());
        }
    }

    let denominator =
        BigRational::from_integer((den * words as i128 * n as i128).into()) * cfg.t_d();
    Ok(BinaryOptimum {
        value: BigRational::from_integer(best.0.into()) / denominator,
        encoding: EncodingStrategy::new(params, best.1)?,
    })
}

fn shannon_bits(weights: impl Iterator<Item = u64>, total: u64) -> f64 {
    if total == 0 {
        return 0.0;
    }
    let t = total as f64;
    weights
        .filter(|&w| w > 0)
        .map(|w| {
            let p = w as f64 / t;
            -p * p.log2()
        })
        .sum()
}

/// Left side of the information-causality inequality for a deterministic
/// encoding under uniform inputs: `n log2 d − Σ_i Σ_m p(m) H(a_i | m)`, in bits.
/// Conditional distributions are counted exactly; only the logarithms are
/// floating point.
pub fn information_causality_lhs(encoding: &EncodingStrategy) -> f64 {
    let params = encoding.params();
    let (d, n) = (params.d(), params.n());
    let counts = ConditionalCounts::of(encoding);
    let words = encoding.table().len() as f64;
    let mut conditional = 0.0;
    for m in 0..d {
        let total = counts.totals[m];
        if total == 0 {
            continue;
        }
        let p_m = total as f64 / words;
        for y in 0..n {
            conditional += p_m * shannon_bits((0..d).map(|k| counts.hits(m, y, k)), total);
        }
    }
    n as f64 * (d as f64).log2() - conditional
}
