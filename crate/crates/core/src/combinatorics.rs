//! Letter-count profiles (weak compositions) of dit strings and the exact
//! classical value of the standard d-dimensional RAC built on them.
//!
//! A word `a_0 … a_{n-1}` over the alphabet `{0, …, d-1}` is summarized by its
//! composition `(n_0, …, n_{d-1})`, where `n_j` counts occurrences of letter
//! `j`. There are `C(n+d-1, d-1)` compositions and each stands for
//! `n!/(n_0!⋯n_{d-1}!)` words.

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::ExactRational;

/// Default upper bound on the number of compositions a routine may enumerate.
pub const DEFAULT_COMPOSITION_CAP: u64 = 1_000_000;

/// Alphabet size `d` and word length `n` of a random access code.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct TaskParams {
    d: usize,
    n: usize,
}

impl TaskParams {
    pub fn new(d: usize, n: usize) -> Result<Self> {
        if d < 2 {
            return Err(Error::InvalidParams(format!(
                "d must be at least 2, got {d}"
            )));
        }
        if n < 1 {
            return Err(Error::InvalidParams(format!(
                "n must be at least 1, got {n}"
            )));
        }
        Ok(TaskParams { d, n })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `d^n`, if it fits in a `u64`.
    pub fn word_count(&self) -> Option<u64> {
        (self.d as u64).checked_pow(u32::try_from(self.n).ok()?)
    }

    pub fn word_count_big(&self) -> BigUint {
        num_traits::pow(BigUint::from(self.d), self.n)
    }
}

/// Letter counts `(n_0, …, n_{d-1})` of a word of length `n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct Composition(Vec<usize>);

impl Composition {
    pub fn new(counts: Vec<usize>, params: TaskParams) -> Result<Self> {
        if counts.len() != params.d() {
            return Err(Error::DimensionMismatch(format!(
                "composition has {} parts, expected d = {}",
                counts.len(),
                params.d()
            )));
        }
        let total: usize = counts.iter().sum();
        if total != params.n() {
            return Err(Error::InvalidParams(format!(
                "composition sums to {total}, expected n = {}",
                params.n()
            )));
        }
        Ok(Composition(counts))
    }

    /// Builds a composition without a target `n`; the length must be at least 2.
    pub fn from_counts(counts: Vec<usize>) -> Result<Self> {
        let n = counts.iter().sum();
        Composition::new(counts.clone(), TaskParams::new(counts.len(), n)?)
    }

    pub fn counts(&self) -> &[usize] {
        &self.0
    }

    pub fn n(&self) -> usize {
        self.0.iter().sum()
    }

    pub fn d(&self) -> usize {
        self.0.len()
    }

    pub fn max_count(&self) -> usize {
        self.0.iter().copied().max().unwrap_or(0)
    }
}

/// Walks compositions in lexicographically decreasing order, starting at
/// `(n, 0, …, 0)` and ending at `(0, …, 0, n)`.
///
/// Each step costs O(1): the cursor tracks the positions of nonzero parts, of
/// which there are at most `n`.
#[derive(Debug, Clone)]
pub struct CompositionCursor {
    counts: Vec<usize>,
    support: Vec<usize>,
}

impl CompositionCursor {
    pub fn new(params: TaskParams) -> Self {
        let mut counts = vec![0; params.d()];
        counts[0] = params.n();
        CompositionCursor {
            counts,
            support: vec![0],
        }
    }

    pub fn counts(&self) -> &[usize] {
        &self.counts
    }

    /// Indices of nonzero parts, increasing.
    pub fn support(&self) -> &[usize] {
        &self.support
    }

    /// Moves to the next composition; returns false once exhausted.
    pub fn advance(&mut self) -> bool {
        let last_slot = self.counts.len() - 1;
        let mut tail = 0;
        if self.support.last() == Some(&last_slot) {
            tail = self.counts[last_slot];
            self.counts[last_slot] = 0;
            self.support.pop();
        }
        let Some(&i) = self.support.last() else {
            // Everything sat in the last slot: that was the final composition.
            self.counts[last_slot] = tail;
            self.support.push(last_slot);
            return false;
        };
        self.counts[i] -= 1;
        if self.counts[i] == 0 {
            self.support.pop();
        }
        self.counts[i + 1] = tail + 1;
        self.support.push(i + 1);
        true
    }
}

/// Owning iterator over [`Composition`]s; see [`CompositionCursor`] for order.
#[derive(Debug, Clone)]
pub struct Compositions {
    cursor: CompositionCursor,
    started: bool,
    done: bool,
}

impl Compositions {
    pub fn new(params: TaskParams) -> Self {
        Compositions {
            cursor: CompositionCursor::new(params),
            started: false,
            done: false,
        }
    }
}

impl Iterator for Compositions {
    type Item = Composition;

    fn next(&mut self) -> Option<Composition> {
        if self.done {
            return None;
        }
        if self.started && !self.cursor.advance() {
            self.done = true;
            return None;
        }
        self.started = true;
        Some(Composition(self.cursor.counts().to_vec()))
    }
}

/// `C(n+d-1, d-1)`, the number of compositions of `n` into `d` parts.
pub fn composition_count(params: TaskParams) -> BigUint {
    binomial(params.n() + params.d() - 1, params.n())
}

pub fn binomial(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for j in 1..=k {
        acc *= n - k + j;
        acc /= j;
    }
    acc
}

fn check_cap(params: TaskParams, cap: u64) -> Result<()> {
    let count = composition_count(params);
    if count > BigUint::from(cap) {
        return Err(Error::CapExceeded {
            what: "composition count",
            count: count.to_string(),
            cap,
        });
    }
    Ok(())
}

/// Every composition for `params`, in lexicographically decreasing order.
pub fn enumerate_compositions(params: TaskParams, cap: u64) -> Result<Vec<Composition>> {
    check_cap(params, cap)?;
    Ok(Compositions::new(params).collect())
}

/// `n!/(n_0!⋯n_{d-1}!)`.
pub fn multinomial(c: &Composition) -> BigUint {
    multinomial_of(c.counts())
}

fn multinomial_of(counts: &[usize]) -> BigUint {
    if let Some(m) = multinomial_u128(counts) {
        return BigUint::from(m);
    }
    let mut acc = BigUint::one();
    let mut seen = 0usize;
    for &c in counts {
        for j in 1..=c {
            seen += 1;
            acc *= seen;
            acc /= j;
        }
    }
    acc
}

/// Product of running binomials; every intermediate is an integer.
fn multinomial_u128(counts: &[usize]) -> Option<u128> {
    let mut acc: u128 = 1;
    let mut seen: u128 = 0;
    for &c in counts {
        for j in 1..=c as u128 {
            seen += 1;
            acc = acc.checked_mul(seen)? / j;
        }
    }
    Some(acc)
}

/// Sums `multinomial(c) * weight(c)` over all compositions.
///
/// `weight` sees the counts slice and the indices of its nonzero entries.
pub(crate) fn weighted_multinomial_sum(
    params: TaskParams,
    cap: u64,
    mut weight: impl FnMut(&[usize], &[usize]) -> u128,
) -> Result<BigUint> {
    check_cap(params, cap)?;
    let mut cursor = CompositionCursor::new(params);
    let mut total = BigUint::zero();
    let mut partial: u128 = 0;
    let mut scratch = Vec::with_capacity(params.n());
    loop {
        let counts = cursor.counts();
        let support = cursor.support();
        scratch.clear();
        scratch.extend(support.iter().map(|&i| counts[i]));
        let w = weight(counts, support);
        let term = multinomial_u128(&scratch).and_then(|m| m.checked_mul(w));
        match term.and_then(|t| partial.checked_add(t)) {
            Some(sum) => partial = sum,
            None => {
                total += BigUint::from(partial);
                partial = 0;
                total += multinomial_of(&scratch) * BigUint::from(w);
            }
        }
        if !cursor.advance() {
            break;
        }
    }
    total += BigUint::from(partial);
    Ok(total)
}

/// Exact classical success probability of the standard d-dimensional RAC:
/// `(1/(n d^n)) Σ_c multinomial(c)·max(c)`.
pub fn standard_rac_classical_value(params: TaskParams, cap: u64) -> Result<ExactRational> {
    let hits = weighted_multinomial_sum(params, cap, |counts, support| {
        support.iter().map(|&i| counts[i]).max().unwrap_or(0) as u128
    })?;
    let inputs = params.word_count_big() * BigUint::from(params.n());
    Ok(BigRational::new(hits.into(), inputs.into()))
}

/// Closed form `(d+1)/(2d)` of the standard RAC value at `n = 2`.
pub fn standard_rac_value_n2(d: usize) -> Result<ExactRational> {
    if d < 2 {
        return Err(Error::InvalidParams(format!(
            "d must be at least 2, got {d}"
        )));
    }
    Ok(BigRational::new((d + 1).into(), (2 * d).into()))
}

/// Convenience: the composition count as `u64`, if it fits.
pub fn composition_count_u64(params: TaskParams) -> Option<u64> {
    composition_count(params).to_u64()
}
