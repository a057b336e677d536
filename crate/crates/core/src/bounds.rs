//! Classical and quantum average payoffs of the binary RAC.
//!
//! The classical values are exact rationals. The `n = 2` quantum value and the
//! quantum-classical gap involve `√d` and are computed in double precision.

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::combinatorics::{
    composition_count, standard_rac_classical_value, standard_rac_value_n2,
    weighted_multinomial_sum, TaskParams,
};
use crate::error::{Error, Result};
use crate::exact::{serialize_opt_sig, to_f64, ExactRational, RationalValue};
use crate::payoff::PayoffConfig;

fn check_d(cfg: &PayoffConfig, d: usize) -> Result<()> {
    if cfg.d() != d {
        return Err(Error::DimensionMismatch(format!(
            "payoff config has d = {}, requested d = {d}",
            cfg.d()
        )));
    }
    Ok(())
}

fn int(v: impl Into<num_bigint::BigInt>) -> ExactRational {
    BigRational::from_integer(v.into())
}

/// `(1/(n d^n t_d)) Σ_c multinomial(c)·[max(c)(t_yes + 1) + n(d − 2)]`.
pub fn binary_rac_classical_value(
    params: TaskParams,
    cfg: &PayoffConfig,
    cap: u64,
) -> Result<ExactRational> {
    check_d(cfg, params.d())?;
    let (d, n) = (params.d(), params.n());
    let max_sum = weighted_multinomial_sum(params, cap, |counts, support| {
        support.iter().map(|&i| counts[i]).max().unwrap_or(0) as u128
    })?;
    // Σ_c multinomial(c) over the same compositions.
    let words = weighted_multinomial_sum(params, cap, |_, _| 1)?;

    let t1 = cfg.t_yes() + ExactRational::one();
    let numerator = t1 * int(max_sum) + int(words.clone()) * int(n * (d - 2));
    let denominator = int(words * BigUint::from(n)) * cfg.t_d();
    Ok(numerator / denominator)
}

/// Maps a standard RAC success probability to the binary RAC payoff of the
/// same encoding: `((t_yes + 1) t_s + d − 2)/t_d`.
pub fn binary_from_standard(
    t_standard: &ExactRational,
    d: usize,
    cfg: &PayoffConfig,
) -> Result<ExactRational> {
    check_d(cfg, d)?;
    if t_standard < &ExactRational::zero() || t_standard > &ExactRational::one() {
        return Err(Error::InvalidParams(format!(
            "standard value {} outside [0, 1]",
            crate::exact::fraction_string(t_standard)
        )));
    }
    Ok(((cfg.t_yes() + ExactRational::one()) * t_standard + int(d - 2)) / cfg.t_d())
}

/// Float version of [`binary_from_standard`], for irrational arguments.
pub fn binary_from_standard_f64(t_standard: f64, cfg: &PayoffConfig) -> f64 {
    ((cfg.t_yes_f64() + 1.0) * t_standard + (cfg.d() as f64 - 2.0)) / cfg.t_d_f64()
}

/// `[t_yes + 1 + d(2d + t_yes − 3)]/(2d t_d)`.
pub fn binary_classical_n2(cfg: &PayoffConfig) -> ExactRational {
    let d = cfg.d();
    let t = cfg.t_yes();
    let numerator = t + ExactRational::one() + int(d) * (int(2 * d) + t - int(3));
    numerator / (int(2 * d) * cfg.t_d())
}

/// `[t_yes + 1 + √d(2d + t_yes − 3)]/(2√d t_d)`.
pub fn binary_quantum_n2(cfg: &PayoffConfig) -> f64 {
    let d = cfg.d() as f64;
    let t = cfg.t_yes_f64();
    let s = d.sqrt();
    (t + 1.0 + s * (2.0 * d + t - 3.0)) / (2.0 * s * cfg.t_d_f64())
}

/// `(t_yes + 1)(√d − 1)/(2d t_d)`.
pub fn quantum_classical_gap(cfg: &PayoffConfig) -> f64 {
    let d = cfg.d() as f64;
    (cfg.t_yes_f64() + 1.0) * (d.sqrt() - 1.0) / (2.0 * d * cfg.t_d_f64())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundProvenance {
    /// Sum over all letter-count profiles.
    Enumerated,
    /// `n = 2` closed forms; enumeration was over the cap.
    ClosedFormN2,
}

#[derive(Debug, Clone, Serialize)]
pub struct BoundReport {
    pub d: usize,
    pub n: usize,
    pub t_yes: RationalValue,
    pub classical_standard: RationalValue,
    pub classical_binary: RationalValue,
    #[serde(serialize_with = "serialize_opt_sig")]
    pub quantum_binary_n2: Option<f64>,
    #[serde(serialize_with = "serialize_opt_sig")]
    pub gap: Option<f64>,
    pub provenance: BoundProvenance,
    #[serde(skip)]
    pub classical_binary_exact: ExactRational,
}

/// Classical standard and binary values for `params`, plus the quantum value
/// and gap when `n = 2`. Falls back to the `n = 2` closed forms when the
/// composition count exceeds `cap`.
pub fn bound_report(params: TaskParams, cfg: &PayoffConfig, cap: u64) -> Result<BoundReport> {
    check_d(cfg, params.d())?;
    let (d, n) = (params.d(), params.n());
    let over_cap = composition_count(params) > BigUint::from(cap);
    let (standard, binary, provenance) = if over_cap && n == 2 {
        let s = standard_rac_value_n2(d)?;
        (s, binary_classical_n2(cfg), BoundProvenance::ClosedFormN2)
    } else {
        (
            standard_rac_classical_value(params, cap)?,
            binary_rac_classical_value(params, cfg, cap)?,
            BoundProvenance::Enumerated,
        )
    };
    let (quantum, gap) = if n == 2 {
        (
            Some(binary_quantum_n2(cfg)),
            Some(quantum_classical_gap(cfg)),
        )
    } else {
        (None, None)
    };
    Ok(BoundReport {
        d,
        n,
        t_yes: RationalValue::from(cfg.t_yes()),
        classical_standard: RationalValue::from(&standard),
        classical_binary: RationalValue::from(&binary),
        quantum_binary_n2: quantum,
        gap,
        provenance,
        classical_binary_exact: binary,
    })
}

impl BoundReport {
    pub fn classical_binary_f64(&self) -> f64 {
        to_f64(&self.classical_binary_exact)
    }
}
