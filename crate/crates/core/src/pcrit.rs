//! Entropy analysis of Bob's posterior in the binary RAC and the scan for the
//! smallest `p_crit` at which the single-YES (majority) strategy has the
//! largest entropy at every attainable payoff.
//!
//! Bob's posterior over the queried dit is modelled as a step distribution:
//! `x` letters at probability `p` (the ones he answers YES to) and the other
//! `d - x` sharing the remainder evenly. For a fixed `p_crit` the payoff `T`
//! determines `p` for each `x`, so every `x` gives an entropy curve `H^x(T)`.
//! The scan raises `p_crit` until `Δ_i(T) = H^1(T) - H^i(T)` is positive on
//! `[T_0, T_1^i]` for every `i` in `2..=ceil(d/2)`. Larger `i` mirror smaller
//! ones because the entropy is invariant under `x -> d - x`.
//!
//! All entropies are in bits.

use serde::Serialize;

use crate::error::{Error, Result, Side};
use crate::exact::{format_sig, serialize_sig};
use crate::payoff::PayoffConfig;

/// Slack when checking a probability against its admissible interval, so
/// that `p_from_t` at a range endpoint is not rejected for rounding.
pub const DOMAIN_TOLERANCE: f64 = 1e-12;
/// `Δ_i` must exceed this to count as positive.
pub const SIGN_GUARD: f64 = 1e-12;
/// Uniform grid points per `Δ_i` range.
pub const DEFAULT_GRID_SIZE: usize = 1001;
/// The local refinement grid is this many times finer than the coarse one.
pub const REFINEMENT_FACTOR: usize = 100;
pub const DEFAULT_EPSILON: f64 = 1e-5;

/// `x` entries at probability `p`, `d - x` entries at `(1 - x p)/(d - x)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepDistribution {
    d: usize,
    x: usize,
    p: f64,
}

impl StepDistribution {
    /// A step distribution whose `x` high entries are at least `1/d`,
    /// i.e. `p ∈ [1/d, 1/x]`.
    pub fn new(d: usize, x: usize, p: f64) -> Result<Self> {
        check_x(d, x)?;
        let (lower, upper) = (1.0 / d as f64, 1.0 / x as f64);
        let p = clamp_to(p, lower, upper, "p")?;
        Ok(StepDistribution { d, x, p })
    }

    /// The same multiset of probabilities read with the `d - x` low entries
    /// as the step. The result has its step below `1/d`.
    pub fn complement(&self) -> Self {
        StepDistribution {
            d: self.d,
            x: self.d - self.x,
            p: self.low(),
        }
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn x(&self) -> usize {
        self.x
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn low(&self) -> f64 {
        ((1.0 - self.x as f64 * self.p) / (self.d - self.x) as f64).max(0.0)
    }

    /// All `d` probabilities, high entries first.
    pub fn probabilities(&self) -> Vec<f64> {
        let mut v = vec![self.p; self.x];
        v.resize(self.d, self.low());
        v
    }
}

fn check_x(d: usize, x: usize) -> Result<()> {
    if d < 2 || x < 1 || x >= d {
        return Err(Error::InvalidIndex {
            index: x,
            lower: 1,
            upper: d.saturating_sub(1),
        });
    }
    Ok(())
}

fn clamp_to(value: f64, lower: f64, upper: f64, quantity: &'static str) -> Result<f64> {
    if value.is_nan() || value < lower - DOMAIN_TOLERANCE {
        return Err(Error::Domain {
            quantity,
            value,
            lower,
            upper,
            side: Side::Below,
        });
    }
    if value > upper + DOMAIN_TOLERANCE {
        return Err(Error::Domain {
            quantity,
            value,
            lower,
            upper,
            side: Side::Above,
        });
    }
    Ok(value.clamp(lower, upper))
}

fn xlog2x(v: f64) -> f64 {
    if v <= 0.0 {
        0.0
    } else {
        v * v.log2()
    }
}

/// `H^x = −x p log2 p − (1 − x p) log2((1 − x p)/(d − x))`.
pub fn entropy_step(sd: &StepDistribution) -> f64 {
    let x = sd.x as f64;
    let mass_high = x * sd.p;
    let mass_low = (1.0 - mass_high).max(0.0);
    let low = sd.low();
    let high_term = if sd.p > 0.0 {
        mass_high * sd.p.log2()
    } else {
        0.0
    };
    let low_term = if low > 0.0 {
        mass_low * low.log2()
    } else {
        0.0
    };
    -high_term - low_term
}

/// Shannon entropy of an explicit distribution, in bits.
pub fn shannon_entropy(probabilities: &[f64]) -> f64 {
    -probabilities.iter().map(|&p| xlog2x(p)).sum::<f64>()
}

/// Normalized payoff `T = (x [t_yes p − (1 − p)] + d − 1)/t_d` of a step
/// posterior.
pub fn payoff_step(sd: &StepDistribution, cfg: &PayoffConfig) -> Result<f64> {
    if cfg.d() != sd.d {
        return Err(Error::DimensionMismatch(format!(
            "payoff config has d = {}, distribution has d = {}",
            cfg.d(),
            sd.d
        )));
    }
    let t_yes = cfg.t_yes_f64();
    let bracket = t_yes * sd.p - (1.0 - sd.p);
    Ok((sd.x as f64 * bracket + (sd.d - 1) as f64) / cfg.t_d_f64())
}

/// The high probability `p` at which an `x`-step posterior reaches payoff `t`:
/// `p = (T + p_crit [d (T − 1) − 2T + x + 1])/x`, required to lie in `[1/d, 1/x]`.
pub fn p_from_t(t: f64, x: usize, d: usize, p_crit: f64) -> Result<f64> {
    check_x(d, x)?;
    let p = raw_p_from_t(t, x, d, p_crit);
    clamp_to(p, 1.0 / d as f64, 1.0 / x as f64, "p")
}

fn raw_p_from_t(t: f64, x: usize, d: usize, p_crit: f64) -> f64 {
    let df = d as f64;
    (t + p_crit * (df * (t - 1.0) - 2.0 * t + x as f64 + 1.0)) / x as f64
}

/// `T_0 = (1 + (d−2) d p_crit)/(d + (d−2) d p_crit)`, the payoff of the
/// uniform posterior; lower end of every `Δ_i` range.
pub fn t_lower(d: usize, p_crit: f64) -> f64 {
    let df = d as f64;
    let s = (df - 2.0) * df * p_crit;
    (1.0 + s) / (df + s)
}

/// `T_1^{x=i} = (1 + p_crit (d − i − 1))/(1 + (d − 2) p_crit)`, the payoff at
/// `p = 1/i`; upper end of the `Δ_i` range.
pub fn t_upper(d: usize, p_crit: f64, i: usize) -> Result<f64> {
    check_x(d, i)?;
    let df = d as f64;
    Ok((1.0 + p_crit * (df - i as f64 - 1.0)) / (1.0 + (df - 2.0) * p_crit))
}

/// Entropy of the `x`-step posterior at payoff `t`, if `p` is admissible.
pub fn entropy_at(t: f64, x: usize, d: usize, p_crit: f64) -> Option<f64> {
    let p = p_from_t(t, x, d, p_crit).ok()?;
    Some(entropy_step(&StepDistribution { d, x, p }))
}

/// `Δ_i(T) = H^1(T) − H^i(T)`; `None` when either posterior is inadmissible.
pub fn delta_i(t: f64, d: usize, p_crit: f64, i: usize) -> Option<f64> {
    Some(entropy_at(t, 1, d, p_crit)? - entropy_at(t, i, d, p_crit)?)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DeltaMinimum {
    /// Smallest sampled value and the (smallest) `T` attaining it.
    Found { value: f64, at: f64 },
    /// `T_0 ≥ T_1^{x=i}`.
    EmptyRange,
    /// Every sample had an inadmissible posterior.
    Undefined,
}

/// Range `[T_0, T_1^{x=i}]`, or `None` when empty.
fn delta_range(d: usize, p_crit: f64, i: usize) -> Result<Option<(f64, f64)>> {
    let lo = t_lower(d, p_crit);
    let hi = t_upper(d, p_crit, i)?;
    Ok((lo < hi).then_some((lo, hi)))
}

/// Coarse uniform grid over `[lo, hi]` (both endpoints included), then a grid
/// `REFINEMENT_FACTOR` times finer over one coarse cell either side of the
/// best coarse sample. Samples are visited in increasing `T`; `visit` returns
/// false to stop early. Returns the running minimum.
fn scan_delta(
    d: usize,
    p_crit: f64,
    i: usize,
    lo: f64,
    hi: f64,
    grid_size: usize,
    mut visit: impl FnMut(f64) -> bool,
) -> Option<(f64, f64)> {
    let steps = grid_size - 1;
    let h = (hi - lo) / steps as f64;
    let sample = |j: usize| if j == steps { hi } else { lo + h * j as f64 };

    let mut best: Option<(f64, f64, usize)> = None;
    for j in 0..=steps {
        let t = sample(j);
        let Some(v) = delta_i(t, d, p_crit, i) else {
            continue;
        };
        if best.is_none_or(|(b, _, _)| v < b) {
            best = Some((v, t, j));
        }
        if !visit(v) {
            return best.map(|(v, t, _)| (v, t));
        }
    }
    let (mut min_v, mut min_t, j) = best?;

    let a = sample(j.saturating_sub(1));
    let b = sample((j + 1).min(steps));
    let fine_steps = 2 * REFINEMENT_FACTOR;
    let fine_h = (b - a) / fine_steps as f64;
    for f in 0..=fine_steps {
        let t = if f == fine_steps {
            b
        } else {
            a + fine_h * f as f64
        };
        let Some(v) = delta_i(t, d, p_crit, i) else {
            continue;
        };
        if v < min_v || (v == min_v && t < min_t) {
            min_v = v;
            min_t = t;
        }
        if !visit(v) {
            break;
        }
    }
    Some((min_v, min_t))
}

/// Minimum of `Δ_i` over `[T_0, T_1^{x=i}]`: both endpoints, a uniform
/// interior grid of `grid_size` points and one local refinement around the
/// best grid point. Inadmissible samples are skipped.
pub fn min_delta_over_range(
    d: usize,
    p_crit: f64,
    i: usize,
    grid_size: usize,
) -> Result<DeltaMinimum> {
    if grid_size < 3 {
        return Err(Error::InvalidParams(format!(
            "grid_size must be at least 3, got {grid_size}"
        )));
    }
    let Some((lo, hi)) = delta_range(d, p_crit, i)? else {
        return Ok(DeltaMinimum::EmptyRange);
    };
    Ok(
        match scan_delta(d, p_crit, i, lo, hi, grid_size, |_| true) {
            Some((value, at)) => DeltaMinimum::Found { value, at },
            None => DeltaMinimum::Undefined,
        },
    )
}

/// Whether the minimum of `Δ_i` clears [`SIGN_GUARD`]. Empty or undefined
/// ranges impose no constraint. Stops at the first failing sample; the
/// verdict matches [`min_delta_over_range`] because the refinement is only
/// reached when every coarse sample passed, in which case the refinement
/// window is the same.
pub fn delta_range_passes(d: usize, p_crit: f64, i: usize, grid_size: usize) -> Result<bool> {
    let Some((lo, hi)) = delta_range(d, p_crit, i)? else {
        return Ok(true);
    };
    let mut ok = true;
    scan_delta(d, p_crit, i, lo, hi, grid_size, |v| {
        ok = v > SIGN_GUARD;
        ok
    });
    Ok(ok)
}

/// Indices checked by the scan: `2..=ceil(d/2)`.
pub fn checked_indices(d: usize) -> std::ops::RangeInclusive<usize> {
    2..=d.div_ceil(2)
}

/// Whether every `Δ_i`, `i ∈ 2..=ceil(d/2)`, is positive at this `p_crit`.
pub fn p_crit_passes(d: usize, p_crit: f64, grid_size: usize) -> Result<bool> {
    for i in checked_indices(d) {
        if !delta_range_passes(d, p_crit, i, grid_size)? {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Debug, Clone, Serialize)]
pub struct PcritResult {
    pub d: usize,
    #[serde(serialize_with = "serialize_sig")]
    pub epsilon: f64,
    #[serde(serialize_with = "serialize_sig")]
    pub p_crit: f64,
    #[serde(serialize_with = "serialize_sig")]
    pub t_yes: f64,
    /// Number of p_crit values tried.
    pub steps: u64,
}

/// Smallest `p_crit = 1/d + k ε` (`k ≥ 1`) at which every `Δ_i` is positive.
///
/// Candidates are computed as `1/d + k ε` rather than by repeated addition.
pub fn find_pcrit(d: usize, epsilon: f64) -> Result<PcritResult> {
    find_pcrit_with_grid(d, epsilon, DEFAULT_GRID_SIZE)
}

pub fn find_pcrit_with_grid(d: usize, epsilon: f64, grid_size: usize) -> Result<PcritResult> {
    if d < 3 {
        return Err(Error::InvalidParams(format!(
            "p_crit scan needs d >= 3, got {d}"
        )));
    }
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::InvalidParams(format!(
            "epsilon must lie in (0, 1), got {epsilon}"
        )));
    }
    if grid_size < 3 {
        return Err(Error::InvalidParams(format!(
            "grid_size must be at least 3, got {grid_size}"
        )));
    }
    let start = 1.0 / d as f64;
    let mut k: u64 = 0;
    loop {
        k += 1;
        let p_crit = start + k as f64 * epsilon;
        if p_crit >= 1.0 {
            return Err(Error::NoSolution { d, epsilon });
        }
        if p_crit_passes(d, p_crit, grid_size)? {
            return Ok(PcritResult {
                d,
                epsilon,
                p_crit,
                t_yes: (1.0 - p_crit) / p_crit,
                steps: k,
            });
        }
    }
}

/// One row of the `H` versus `T` curve family.
#[derive(Debug, Clone, PartialEq)]
pub struct CurvePoint {
    pub t: f64,
    /// `H^x` for each requested `x`, `None` outside `[T_0, T_1^x]` or when the
    /// posterior is inadmissible.
    pub entropies: Vec<Option<f64>>,
    /// Whether `t` is `T_0` or `T_1^x` for each requested `x`.
    pub limits: Vec<bool>,
}

#[derive(Debug, Clone)]
pub struct CurveTable {
    pub d: usize,
    pub p_crit: f64,
    pub xs: Vec<usize>,
    pub points: Vec<CurvePoint>,
}

/// Samples `H^x(T)` for each `x` over `[T_0, max_x T_1^x]`.
///
/// Rows are a uniform grid of `samples` points plus one row for every range
/// limit, sorted by `T`. A curve is only filled in on its own range.
pub fn emit_curves(d: usize, p_crit: f64, xs: &[usize], samples: usize) -> Result<CurveTable> {
    if samples < 2 {
        return Err(Error::InvalidParams(format!(
            "samples must be at least 2, got {samples}"
        )));
    }
    if xs.is_empty() {
        return Err(Error::InvalidParams("no x values requested".into()));
    }
    if !(p_crit > 0.0 && p_crit < 1.0) {
        return Err(Error::InvalidParams(format!(
            "p_crit must lie in (0, 1), got {p_crit}"
        )));
    }
    let lo = t_lower(d, p_crit);
    let uppers = xs
        .iter()
        .map(|&x| t_upper(d, p_crit, x))
        .collect::<Result<Vec<_>>>()?;
    let hi = uppers.iter().copied().fold(lo, f64::max);

    let mut ts: Vec<f64> = (0..samples)
        .map(|j| {
            if j + 1 == samples {
                hi
            } else {
                lo + (hi - lo) * j as f64 / (samples - 1) as f64
            }
        })
        .collect();
    ts.push(lo);
    ts.extend(uppers.iter().copied().filter(|&u| u > lo));
    ts.sort_by(f64::total_cmp);
    ts.dedup();

    let points = ts
        .into_iter()
        .map(|t| {
            let entropies = xs
                .iter()
                .zip(&uppers)
                .map(|(&x, &u)| {
                    if t < lo || t > u {
                        None
                    } else {
                        entropy_at(t, x, d, p_crit)
                    }
                })
                .collect();
            let limits = uppers.iter().map(|&u| t == lo || t == u).collect();
            CurvePoint {
                t,
                entropies,
                limits,
            }
        })
        .collect();

    Ok(CurveTable {
        d,
        p_crit,
        xs: xs.to_vec(),
        points,
    })
}

impl CurveTable {
    /// CSV with header `T,H_x1,…,limit_x1,…`; empty cells for undefined
    /// entropies, `1` in `limit_x<i>` on rows at `T_0` or `T_1^{x=i}`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("T");
        for x in &self.xs {
            out.push_str(&format!(",H_x{x}"));
        }
        for x in &self.xs {
            out.push_str(&format!(",limit_x{x}"));
        }
        out.push('\n');
        for pt in &self.points {
            out.push_str(&format_sig(pt.t));
            for h in &pt.entropies {
                out.push(',');
                if let Some(h) = h {
                    out.push_str(&format_sig(*h));
                }
            }
            for &l in &pt.limits {
                out.push_str(if l { ",1" } else { ",0" });
            }
            out.push('\n');
        }
        out
    }

    /// Column index of `x` in this table.
    pub fn column(&self, x: usize) -> Option<usize> {
        self.xs.iter().position(|&v| v == x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const LOG2_8: f64 = 3.0;

    fn sd(d: usize, x: usize, p: f64) -> StepDistribution {
        StepDistribution::new(d, x, p).unwrap()
    }

    #[test]
    fn entropy_examples() {
        for d in 2..10 {
            assert!((entropy_step(&sd(d, 1, 1.0 / d as f64)) - (d as f64).log2()).abs() < 1e-12);
            assert_eq!(entropy_step(&sd(d, 1, 1.0)), 0.0);
        }
        assert!((entropy_step(&sd(4, 2, 0.5)) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn entropy_matches_explicit_distribution() {
        let s = sd(7, 3, 0.2);
        assert!((entropy_step(&s) - shannon_entropy(&s.probabilities())).abs() < 1e-12);
    }

    #[test]
    fn step_domain_errors_report_side() {
        match StepDistribution::new(8, 2, 0.6) {
            Err(Error::Domain {
                side: Side::Above, ..
            }) => {}
            other => panic!("{other:?}"),
        }
        match StepDistribution::new(8, 2, 0.1) {
            Err(Error::Domain {
                side: Side::Below, ..
            }) => {}
            other => panic!("{other:?}"),
        }
        assert!(StepDistribution::new(8, 0, 0.5).is_err());
        assert!(StepDistribution::new(8, 8, 0.1).is_err());
    }

    #[test]
    fn payoff_examples() {
        let cfg = PayoffConfig::from_p_crit(8, 0.18495).unwrap();
        assert!((payoff_step(&sd(8, 1, 1.0), &cfg).unwrap() - 1.0).abs() < 1e-12);
        let pc = cfg.p_crit_f64();
        for x in 1..=4 {
            let v = payoff_step(&sd(8, x, pc.max(1.0 / 8.0)), &cfg).unwrap();
            assert!((v - 7.0 / cfg.t_d_f64()).abs() < 1e-12, "x={x}");
        }
        let t0 = payoff_step(&sd(8, 1, 1.0 / 8.0), &cfg).unwrap();
        assert!((t0 - t_lower(8, 0.18495)).abs() < 1e-12);
        assert!((t0 - 0.58525).abs() < 1e-5);
    }

    #[test]
    fn range_limits() {
        for pc in [0.1, 0.3, 0.7] {
            assert!((t_lower(2, pc) - 0.5).abs() < 1e-15);
        }
        assert!((t_lower(8, 0.18495) - 0.58525).abs() < 1e-5);
        assert!((t_lower(3, 1.0 / 3.0) - 0.5).abs() < 1e-15);

        for d in 3..12 {
            let pc = 0.2;
            let last = t_upper(d, pc, d - 1).unwrap();
            assert!((last - 1.0 / (1.0 + (d as f64 - 2.0) * pc)).abs() < 1e-15);
            assert!((t_upper(d, pc, 1).unwrap() - 1.0).abs() < 1e-15);
        }
        assert!((t_upper(8, 0.18495, 2).unwrap() - 0.91233).abs() < 1e-5);
        assert!(matches!(
            t_upper(8, 0.2, 8),
            Err(Error::InvalidIndex { .. })
        ));
        assert!(matches!(
            t_upper(8, 0.2, 0),
            Err(Error::InvalidIndex { .. })
        ));
    }

    #[test]
    fn p_from_t_hits_range_limits() {
        let (d, pc) = (8, 0.18495);
        let t0 = t_lower(d, pc);
        assert!((p_from_t(t0, 1, d, pc).unwrap() - 1.0 / 8.0).abs() < 1e-12);
        for i in 1..d {
            let t1 = t_upper(d, pc, i).unwrap();
            assert!((p_from_t(t1, i, d, pc).unwrap() - 1.0 / i as f64).abs() < 1e-12);
        }
        let cfg = PayoffConfig::from_p_crit(d, pc).unwrap();
        let p = p_from_t(0.7, 1, d, pc).unwrap();
        assert!((payoff_step(&sd(d, 1, p), &cfg).unwrap() - 0.7).abs() < 1e-9);
        assert!(matches!(
            p_from_t(0.3, 1, d, pc),
            Err(Error::Domain {
                side: Side::Below,
                ..
            })
        ));
        assert!(matches!(
            p_from_t(0.99, 2, d, pc),
            Err(Error::Domain {
                side: Side::Above,
                ..
            })
        ));
    }

    #[test]
    fn delta_at_lower_limit_is_nonnegative() {
        for pc in [0.14, 0.16, 0.18495, 0.3] {
            let t0 = t_lower(8, pc);
            assert!((entropy_at(t0, 1, 8, pc).unwrap() - LOG2_8).abs() < 1e-12);
            for i in 2..=4 {
                if let Some(v) = delta_i(t0, 8, pc, i) {
                    assert!(v >= -1e-12);
                }
            }
        }
    }

    #[test]
    fn delta_sign_at_reference_parameters() {
        for i in 2..=4 {
            match min_delta_over_range(8, 0.18495, i, DEFAULT_GRID_SIZE).unwrap() {
                DeltaMinimum::Found { value, .. } => assert!(value > 0.0, "i={i}: {value}"),
                other => panic!("i={i}: {other:?}"),
            }
        }
        let negative = (2..=4).any(|i| {
            matches!(
                min_delta_over_range(8, 0.14, i, DEFAULT_GRID_SIZE).unwrap(),
                DeltaMinimum::Found { value, .. } if value <= 0.0
            )
        });
        assert!(negative);
    }

    #[test]
    fn qubit_has_nothing_to_check() {
        assert!(checked_indices(2).is_empty());
        assert!(p_crit_passes(2, 0.3, DEFAULT_GRID_SIZE).unwrap());
        assert!(find_pcrit(2, 1e-3).is_err());
    }

    #[test]
    fn min_delta_rejects_tiny_grid() {
        assert!(min_delta_over_range(8, 0.2, 2, 2).is_err());
    }

    #[test]
    fn early_exit_agrees_with_full_minimum() {
        for d in [3, 5, 8, 10] {
            for k in 0..60 {
                let pc = 1.0 / d as f64 + 0.004 * k as f64;
                for i in checked_indices(d) {
                    let full = match min_delta_over_range(d, pc, i, 201).unwrap() {
                        DeltaMinimum::Found { value, .. } => value > SIGN_GUARD,
                        _ => true,
                    };
                    assert_eq!(
                        full,
                        delta_range_passes(d, pc, i, 201).unwrap(),
                        "d={d} pc={pc} i={i}"
                    );
                }
            }
        }
    }

    #[test]
    fn scan_d3_is_near_one_third() {
        let r = find_pcrit(3, 1e-5).unwrap();
        assert!((r.p_crit - 0.33340).abs() < 2e-4, "{r:?}");
        assert!((r.t_yes - (1.0 - r.p_crit) / r.p_crit).abs() < 1e-12);
        // Minimal up to epsilon.
        assert!(!p_crit_passes(3, r.p_crit - r.epsilon, DEFAULT_GRID_SIZE).unwrap());
    }

    #[test]
    fn ranges_are_nonempty_along_the_scan() {
        for d in 3..=10 {
            let eps = 1e-3;
            let stop = find_pcrit(d, eps).unwrap().p_crit;
            let mut k = 1;
            loop {
                let pc = 1.0 / d as f64 + k as f64 * eps;
                if pc > stop {
                    break;
                }
                for i in checked_indices(d) {
                    assert!(
                        t_lower(d, pc) < t_upper(d, pc, i).unwrap(),
                        "d={d} pc={pc} i={i}"
                    );
                }
                k += 1;
            }
        }
    }

    #[test]
    fn curves_start_at_maximal_entropy() {
        for d in [3, 8, 12] {
            let table = emit_curves(d, 0.2, &[1, 2], 50).unwrap();
            let first = &table.points[0];
            assert!((first.t - t_lower(d, 0.2)).abs() < 1e-15);
            assert!((first.entropies[0].unwrap() - (d as f64).log2()).abs() < 1e-12);
            assert!(first.limits.iter().all(|&l| l));
        }
    }

    #[test]
    fn curve_csv_layout() {
        let table = emit_curves(8, 0.18495, &[1, 2, 3, 4], 11).unwrap();
        let csv = table.to_csv();
        let mut lines = csv.lines();
        assert_eq!(
            lines.next().unwrap(),
            "T,H_x1,H_x2,H_x3,H_x4,limit_x1,limit_x2,limit_x3,limit_x4"
        );
        // 11 grid rows, T_0 and T_1^{x=1} coincide with grid ends, plus T_1 for x=2,3,4.
        assert_eq!(table.points.len(), 14);
        assert!(lines.all(|l| l.split(',').count() == 9));
        let marked: usize = table
            .points
            .iter()
            .map(|p| p.limits.iter().filter(|&&l| l).count())
            .sum();
        assert_eq!(marked, 4 + 4);
    }

    #[test]
    fn curves_reject_bad_input() {
        assert!(emit_curves(8, 0.2, &[1], 1).is_err());
        assert!(emit_curves(8, 0.2, &[], 10).is_err());
        assert!(emit_curves(8, 0.2, &[8], 10).is_err());
        assert!(emit_curves(8, 1.2, &[1], 10).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn complement_has_equal_entropy(d in 2usize..40, xf in 0.0f64..1.0, pf in 0.0f64..=1.0) {
            let x = 1 + ((d - 1) as f64 * xf) as usize % (d - 1);
            let lo = 1.0 / d as f64;
            let hi = 1.0 / x as f64;
            let s = sd(d, x, lo + (hi - lo) * pf);
            let c = s.complement();
            prop_assert_eq!(c.x(), d - x);
            let mut a = s.probabilities();
            let mut b = c.probabilities();
            a.sort_by(f64::total_cmp);
            b.sort_by(f64::total_cmp);
            for (u, v) in a.iter().zip(&b) {
                prop_assert!((u - v).abs() < 1e-12);
            }
            prop_assert!((entropy_step(&s) - entropy_step(&c)).abs() < 1e-9);
        }

        #[test]
        fn p_from_t_round_trips_payoff(
            d in 3usize..30,
            xf in 0.0f64..1.0,
            pcf in 0.0f64..1.0,
            tf in 0.0f64..=1.0,
        ) {
            let x = 1 + ((d - 1) as f64 * xf) as usize % (d - 1);
            let pc = 0.01 + 0.9 * pcf;
            let cfg = PayoffConfig::from_p_crit(d, pc).unwrap();
            // T range of the x-step: p from 1/d to 1/x.
            let t_at = |p: f64| payoff_step(&StepDistribution { d, x, p }, &cfg).unwrap();
            let (a, b) = (t_at(1.0 / d as f64), t_at(1.0 / x as f64));
            let t = a + (b - a) * tf;
            let p = p_from_t(t, x, d, pc).unwrap();
            prop_assert!((payoff_step(&sd(d, x, p), &cfg).unwrap() - t).abs() < 1e-9);
        }

        #[test]
        fn entropy_bounded_by_log_d(d in 2usize..64, xf in 0.0f64..1.0, pf in 0.0f64..=1.0) {
            let x = 1 + ((d - 1) as f64 * xf) as usize % (d - 1);
            let lo = 1.0 / d as f64;
            let p = lo + (1.0 / x as f64 - lo) * pf;
            let h = entropy_step(&sd(d, x, p));
            prop_assert!(h <= (d as f64).log2() + 1e-9);
            prop_assert!(h >= -1e-12);
            if pf > 1e-3 {
                prop_assert!(h < (d as f64).log2());
            }
        }
    }
}
