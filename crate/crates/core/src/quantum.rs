//! Pure-state simulation of the two-dit qudit protocol.
//!
//! Alice sends a superposition of the computational state `|a0⟩` and the
//! Fourier state `|ā1⟩`. Bob, asked about `a_y = k`, measures the projector
//! onto `|k⟩` (`y = 0`) or `|k̄⟩` (`y = 1`) and answers YES on that outcome.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::payoff::PayoffConfig;

/// Norm tolerance for states and measurement vectors.
pub const NORM_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct QuantumState {
    amplitudes: Vec<Complex64>,
}

fn norm_sqr(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum()
}

fn check_label(label: usize, d: usize) -> Result<()> {
    if d < 2 {
        return Err(Error::InvalidParams(format!(
            "d must be at least 2, got {d}"
        )));
    }
    if label >= d {
        return Err(Error::InvalidLabel { label, d });
    }
    Ok(())
}

/// `exp(2πi m/d)` with the exponent reduced mod `d` first.
fn root_of_unity(m: usize, d: usize) -> Complex64 {
    Complex64::from_polar(1.0, 2.0 * PI * (m % d) as f64 / d as f64)
}

impl QuantumState {
    /// Wraps `amplitudes`, which must already have unit norm.
    pub fn new(amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.len() < 2 {
            return Err(Error::InvalidParams(
                "state needs at least 2 amplitudes".into(),
            ));
        }
        let n = norm_sqr(&amplitudes).sqrt();
        if (n - 1.0).abs() > NORM_TOLERANCE {
            return Err(Error::InvalidParams(format!("state norm {n} is not 1")));
        }
        Ok(QuantumState { amplitudes })
    }

    /// Rescales a nonzero vector to unit norm.
    pub fn normalized(mut amplitudes: Vec<Complex64>) -> Result<Self> {
        let n = norm_sqr(&amplitudes).sqrt();
        if n == 0.0 || !n.is_finite() {
            return Err(Error::InvalidParams(
                "cannot normalize a zero vector".into(),
            ));
        }
        for z in &mut amplitudes {
            *z /= n;
        }
        QuantumState::new(amplitudes)
    }

    /// `|label⟩`.
    pub fn basis(label: usize, d: usize) -> Result<Self> {
        check_label(label, d)?;
        let mut v = vec![Complex64::new(0.0, 0.0); d];
        v[label] = Complex64::new(1.0, 0.0);
        Ok(QuantumState { amplitudes: v })
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        norm_sqr(&self.amplitudes).sqrt()
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &QuantumState) -> Result<Complex64> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch(format!(
                "states of dimension {} and {}",
                self.dim(),
                other.dim()
            )));
        }
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }
}

/// `|label̄⟩ = (1/√d) Σ_j ω^{j·label} |j⟩`, `ω = exp(2πi/d)`.
pub fn fourier_vector(label: usize, d: usize) -> Result<QuantumState> {
    check_label(label, d)?;
    let s = 1.0 / (d as f64).sqrt();
    Ok(QuantumState {
        amplitudes: (0..d).map(|j| root_of_unity(j * label, d) * s).collect(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum StateConvention {
    /// `|a0⟩ + e^{−2πi a0 a1/d} |ā1⟩`: the cross term `⟨a0|·⟩` of the Fourier
    /// branch is the real number `1/√d` for every input.
    #[default]
    PhaseAligned,
    /// `|a0⟩ + (1/√d) Σ_j ω^{j a1} |a1 + j⟩`, normalized by its actual norm.
    Unaligned,
}

/// Prepared state and its squared norm before normalization.
#[derive(Debug, Clone)]
pub struct PreparedState {
    pub state: QuantumState,
    pub raw_norm_sqr: f64,
}

/// Alice's state for input `(a0, a1)` in the phase-aligned convention.
pub fn prepare_state(a0: usize, a1: usize, d: usize) -> Result<QuantumState> {
    Ok(prepare_state_with(a0, a1, d, StateConvention::PhaseAligned)?.state)
}

pub fn prepare_state_with(
    a0: usize,
    a1: usize,
    d: usize,
    convention: StateConvention,
) -> Result<PreparedState> {
    check_label(a0, d)?;
    check_label(a1, d)?;
    let mut v = vec![Complex64::new(0.0, 0.0); d];
    v[a0] += 1.0;
    let s = 1.0 / (d as f64).sqrt();
    match convention {
        StateConvention::PhaseAligned => {
            // e^{−2πi a0 a1/d} ω^{j a1} = ω^{(j + d − a0) a1}.
            for (j, z) in v.iter_mut().enumerate() {
                *z += root_of_unity((j + d - a0) * a1, d) * s;
            }
        }
        StateConvention::Unaligned => {
            for j in 0..d {
                v[(a1 + j) % d] += root_of_unity(j * a1, d) * s;
            }
        }
    }
    let raw_norm_sqr = norm_sqr(&v);
    Ok(PreparedState {
        state: QuantumState::normalized(v)?,
        raw_norm_sqr,
    })
}

/// Two-outcome projective measurement `{|v⟩⟨v|, 1 − |v⟩⟨v|}`; the projector
/// outcome is `G = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectiveBinaryMeasurement {
    vector: QuantumState,
}

impl ProjectiveBinaryMeasurement {
    pub fn new(vector: QuantumState) -> Self {
        ProjectiveBinaryMeasurement { vector }
    }

    pub fn vector(&self) -> &QuantumState {
        &self.vector
    }

    /// Entry `(r, c)` of `|v⟩⟨v|`.
    pub fn projector_entry(&self, r: usize, c: usize) -> Complex64 {
        let v = self.vector.amplitudes();
        v[r] * v[c].conj()
    }
}

/// Bob's measurement for question `(y, k)`: `|k⟩⟨k|` for `y = 0`,
/// `|k̄⟩⟨k̄|` for `y = 1`.
pub fn measurement(y: usize, k: usize, d: usize) -> Result<ProjectiveBinaryMeasurement> {
    let vector = match y {
        0 => QuantumState::basis(k, d)?,
        1 => fourier_vector(k, d)?,
        _ => {
            return Err(Error::InvalidIndex {
                index: y,
                lower: 0,
                upper: 1,
            })
        }
    };
    Ok(ProjectiveBinaryMeasurement { vector })
}

/// `p(G = 0) = |⟨v|ψ⟩|²`.
pub fn born_probability(state: &QuantumState, meas: &ProjectiveBinaryMeasurement) -> Result<f64> {
    Ok(meas.vector.inner(state)?.norm_sqr().clamp(0.0, 1.0))
}

fn check_dim(d: usize) -> Result<()> {
    if d < 2 {
        return Err(Error::InvalidParams(format!(
            "d must be at least 2, got {d}"
        )));
    }
    Ok(())
}

/// `p(G = 0 | a0, a1, y, k)` for every input, in `(a0, a1, y, k)` order.
#[derive(Debug, Clone)]
pub struct ProtocolStatistics {
    pub d: usize,
    pub convention: StateConvention,
    /// Indexed `((a0 d + a1) 2 + y) d + k`.
    pub p_yes: Vec<f64>,
}

impl ProtocolStatistics {
    pub fn get(&self, a0: usize, a1: usize, y: usize, k: usize) -> f64 {
        self.p_yes[((a0 * self.d + a1) * 2 + y) * self.d + k]
    }
}

pub fn protocol_statistics(d: usize, convention: StateConvention) -> Result<ProtocolStatistics> {
    check_dim(d)?;
    let meas: Vec<Vec<ProjectiveBinaryMeasurement>> = (0..2)
        .map(|y| (0..d).map(|k| measurement(y, k, d)).collect::<Result<_>>())
        .collect::<Result<_>>()?;
    let mut p_yes = Vec::with_capacity(2 * d * d * d);
    for a0 in 0..d {
        for a1 in 0..d {
            let psi = prepare_state_with(a0, a1, d, convention)?.state;
            for row in &meas {
                for m in row {
                    p_yes.push(born_probability(&psi, m)?);
                }
            }
        }
    }
    Ok(ProtocolStatistics {
        d,
        convention,
        p_yes,
    })
}

/// Average over `(a0, a1, y)` of the probability that Bob's YES outcome fires
/// on the correct question `k = a_y`. Equals `1/2 + 1/(2√d)`.
pub fn quantum_guess_probability(d: usize) -> Result<f64> {
    let stats = protocol_statistics(d, StateConvention::PhaseAligned)?;
    let mut sum = 0.0;
    for a0 in 0..d {
        for a1 in 0..d {
            sum += stats.get(a0, a1, 0, a0) + stats.get(a0, a1, 1, a1);
        }
    }
    Ok(sum / (2 * d * d) as f64)
}

/// Binary RAC payoff of the protocol:
/// `(1/(2 d² t_d)) Σ_{a0,a1,y,k} (t_yes p(G=0)[k = a_y] + p(G=1)[k ≠ a_y])`.
pub fn simulate_binary_payoff(d: usize, cfg: &PayoffConfig) -> Result<f64> {
    simulate_binary_payoff_with(d, cfg, StateConvention::PhaseAligned)
}

pub fn simulate_binary_payoff_with(
    d: usize,
    cfg: &PayoffConfig,
    convention: StateConvention,
) -> Result<f64> {
    if cfg.d() != d {
        return Err(Error::DimensionMismatch(format!(
            "payoff config has d = {}, requested d = {d}",
            cfg.d()
        )));
    }
    let stats = protocol_statistics(d, convention)?;
    Ok(payoff_of(&stats, cfg))
}

pub(crate) fn payoff_of(stats: &ProtocolStatistics, cfg: &PayoffConfig) -> f64 {
    let d = stats.d;
    let t_yes = cfg.t_yes_f64();
    let mut sum = 0.0;
    for a0 in 0..d {
        for a1 in 0..d {
            let a = [a0, a1];
            for (y, &target) in a.iter().enumerate() {
                for k in 0..d {
                    let p0 = stats.get(a0, a1, y, k);
                    sum += if k == target { t_yes * p0 } else { 1.0 - p0 };
                }
            }
        }
    }
    sum / (2.0 * (d * d) as f64 * cfg.t_d_f64())
}
