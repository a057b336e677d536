use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{self, ExactRational, RationalValue};

/// Payoff parameters of the binary RAC.
///
/// A correct YES (`G = 0`, `a_y = k`) earns `t_yes`, a correct NO earns 1.
/// Averages are normalized by `t_d = t_yes + d - 1`, the best possible total
/// over the `d` questions about one dit. Answering YES is worthwhile exactly
/// when the posterior of `a_y = k` reaches `p_crit = 1/(t_yes + 1)`.
///
/// `t_yes` is held as an exact rational so that classical bounds stay exact.
#[derive(Debug, Clone, PartialEq)]
pub struct PayoffConfig {
    d: usize,
    t_yes: ExactRational,
}

impl PayoffConfig {
    pub fn new(d: usize, t_yes: ExactRational) -> Result<Self> {
        if d < 2 {
            return Err(Error::InvalidParams(format!(
                "d must be at least 2, got {d}"
            )));
        }
        if t_yes <= BigRational::zero() {
            return Err(Error::InvalidParams(format!(
                "t_yes must be positive, got {}",
                exact::fraction_string(&t_yes)
            )));
        }
        Ok(PayoffConfig { d, t_yes })
    }

    /// Parses `t_yes` exactly from a decimal or fraction string.
    pub fn from_decimal(d: usize, t_yes: &str) -> Result<Self> {
        PayoffConfig::new(d, exact::parse_exact(t_yes)?)
    }

    /// Uses the shortest decimal that round-trips `t_yes`.
    pub fn from_f64(d: usize, t_yes: f64) -> Result<Self> {
        PayoffConfig::new(d, exact::from_f64_decimal(t_yes)?)
    }

    /// `t_yes = (1 - p_crit)/p_crit`, carried as the exact value of the
    /// double produced by that expression.
    pub fn from_p_crit(d: usize, p_crit: f64) -> Result<Self> {
        if !(p_crit > 0.0 && p_crit < 1.0) {
            return Err(Error::InvalidParams(format!(
                "p_crit must lie in (0, 1), got {p_crit}"
            )));
        }
        PayoffConfig::new(d, exact::from_f64_binary((1.0 - p_crit) / p_crit)?)
    }

    pub fn with_d(&self, d: usize) -> Result<Self> {
        PayoffConfig::new(d, self.t_yes.clone())
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn t_yes(&self) -> &ExactRational {
        &self.t_yes
    }

    pub fn t_yes_f64(&self) -> f64 {
        exact::to_f64(&self.t_yes)
    }

    pub fn t_d(&self) -> ExactRational {
        &self.t_yes + BigRational::from_integer((self.d - 1).into())
    }

    pub fn t_d_f64(&self) -> f64 {
        self.t_yes_f64() + (self.d - 1) as f64
    }

    pub fn p_crit(&self) -> ExactRational {
        (&self.t_yes + BigRational::one()).recip()
    }

    pub fn p_crit_f64(&self) -> f64 {
        1.0 / (self.t_yes_f64() + 1.0)
    }

    pub fn summary(&self) -> PayoffSummary {
        PayoffSummary {
            d: self.d,
            t_yes: RationalValue::from(&self.t_yes),
            t_d: RationalValue::from(&self.t_d()),
            p_crit: RationalValue::from(&self.p_crit()),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct PayoffSummary {
    pub d: usize,
    pub t_yes: RationalValue,
    pub t_d: RationalValue,
    pub p_crit: RationalValue,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derived_quantities() {
        let cfg = PayoffConfig::from_decimal(3, "2").unwrap();
        assert_eq!(cfg.t_d(), BigRational::from_integer(4.into()));
        assert_eq!(cfg.p_crit(), BigRational::new(1.into(), 3.into()));
        assert_eq!(cfg.t_d_f64(), 4.0);
    }

    #[test]
    fn round_trips_p_crit() {
        for &pc in &[0.18495, 0.33340, 0.11180, 0.5, 0.01] {
            let cfg = PayoffConfig::from_p_crit(8, pc).unwrap();
            assert!((cfg.t_yes_f64() - (1.0 - pc) / pc).abs() < 1e-12);
            assert!((cfg.p_crit_f64() - pc).abs() < 1e-12);
            assert!(cfg.t_d_f64() > 7.0);
        }
    }

    #[test]
    fn rejects_bad_configs() {
        assert!(PayoffConfig::from_decimal(1, "2").is_err());
        assert!(PayoffConfig::from_decimal(3, "0").is_err());
        assert!(PayoffConfig::from_decimal(3, "-1").is_err());
        assert!(PayoffConfig::from_p_crit(3, 1.0).is_err());
        assert!(PayoffConfig::from_p_crit(3, 0.0).is_err());
    }
}
