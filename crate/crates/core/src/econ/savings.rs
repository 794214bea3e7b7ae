//! Savings rules `s(w, R)` of the young.

use std::fmt;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{require_positive, Error, Result};

/// A user-supplied savings function.
///
/// Implementors may override the partial derivatives; the defaults are
/// central finite differences with step `1e-6·max(1, |x|)`.
pub trait SavingsFunction: fmt::Debug + Send + Sync {
    fn savings(&self, wage: f64, rate: f64) -> f64;

    fn d_wage(&self, wage: f64, rate: f64) -> f64 {
        let step = fd_step(wage).min(0.5 * wage);
        (self.savings(wage + step, rate) - self.savings(wage - step, rate)) / (2.0 * step)
    }

    fn d_rate(&self, wage: f64, rate: f64) -> f64 {
        let step = fd_step(rate).min(0.5 * rate);
        (self.savings(wage, rate + step) - self.savings(wage, rate - step)) / (2.0 * step)
    }
}

fn fd_step(x: f64) -> f64 {
    1e-6 * x.abs().max(1.0)
}

/// Savings as a function of wage and gross interest rate.
#[derive(Debug, Clone)]
pub enum SavingsRule {
    /// `s = β w`, from `U = (1−β) ln c_y + β ln c_o`.
    LogUtility {
        beta: f64,
    },
    Custom(Arc<dyn SavingsFunction>),
}

impl SavingsRule {
    pub fn log_utility(beta: f64) -> Result<Self> {
        let rule = SavingsRule::LogUtility { beta };
        rule.validate()?;
        Ok(rule)
    }

    pub fn custom(f: impl SavingsFunction + 'static) -> Self {
        SavingsRule::Custom(Arc::new(f))
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            SavingsRule::LogUtility { beta } if !(beta > 0.0 && beta < 1.0) => Err(Error::Domain {
                what: "beta",
                requirement: "in (0, 1)",
                value: beta,
            }),
            _ => Ok(()),
        }
    }

    pub fn beta(&self) -> Option<f64> {
        match *self {
            SavingsRule::LogUtility { beta } => Some(beta),
            SavingsRule::Custom(_) => None,
        }
    }

    /// `s(w, R)` for `w > 0`, `R > 0`.
    pub fn eval(&self, wage: f64, rate: f64) -> Result<f64> {
        require_positive("wage w", wage)?;
        require_positive("interest rate R", rate)?;
        Ok(self.eval_unchecked(wage, rate))
    }

    pub(crate) fn eval_unchecked(&self, wage: f64, rate: f64) -> f64 {
        match self {
            SavingsRule::LogUtility { beta } => beta * wage,
            SavingsRule::Custom(f) => f.savings(wage, rate),
        }
    }

    /// `(s_w, s_R)` at `(w, R)`.
    pub fn partials(&self, wage: f64, rate: f64) -> (f64, f64) {
        match self {
            SavingsRule::LogUtility { beta } => (*beta, 0.0),
            SavingsRule::Custom(f) => (f.d_wage(wage, rate), f.d_rate(wage, rate)),
        }
    }

    /// Samples `n` points `(w, R)` log-uniformly on `[1e-3, 1e3]²` and checks
    /// `0 ≤ s ≤ w`, `s_w > 0` and `s_R ≥ 0` at each.
    pub fn validate_samples(&self, n: usize, seed: u64) -> SavingsValidation {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut violations = Vec::new();
        for _ in 0..n {
            let wage = 10f64.powf(rng.random_range(-3.0..3.0));
            let rate = 10f64.powf(rng.random_range(-3.0..3.0));
            let s = self.eval_unchecked(wage, rate);
            let (sw, sr) = self.partials(wage, rate);
            let mut push = |kind| {
                violations.push(SavingsViolation {
                    wage,
                    rate,
                    savings: s,
                    kind,
                })
            };
            if !(s >= 0.0 && s <= wage) {
                push(SavingsViolationKind::OutOfBounds);
            }
            if !(sw > 0.0) {
                push(SavingsViolationKind::NotIncreasingInWage);
            }
            // finite differences carry O(step²) noise
            if !(sr >= -1e-9 * wage.max(1.0)) {
                push(SavingsViolationKind::DecreasingInRate);
            }
        }
        SavingsValidation {
            samples: n,
            violations,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SavingsViolationKind {
    OutOfBounds,
    NotIncreasingInWage,
    DecreasingInRate,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SavingsViolation {
    pub wage: f64,
    pub rate: f64,
    pub savings: f64,
    pub kind: SavingsViolationKind,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SavingsValidation {
    pub samples: usize,
    pub violations: Vec<SavingsViolation>,
}

impl SavingsValidation {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// CRRA with relative risk aversion `γ ≤ 1` and discount `δ`:
    /// `s = w / (1 + δ^{-1/γ} R^{1 − 1/γ})`.
    #[derive(Debug)]
    struct Crra {
        gamma: f64,
        delta: f64,
    }

    impl SavingsFunction for Crra {
        fn savings(&self, wage: f64, rate: f64) -> f64 {
            let ratio = self.delta.powf(-1.0 / self.gamma) * rate.powf(1.0 - 1.0 / self.gamma);
            wage / (1.0 + ratio)
        }
    }

    #[derive(Debug)]
    struct Spendthrift;

    impl SavingsFunction for Spendthrift {
        fn savings(&self, wage: f64, _rate: f64) -> f64 {
            1.5 * wage
        }
    }

    #[test]
    fn log_rule_is_beta_w() {
        let rule = SavingsRule::log_utility(0.5).unwrap();
        assert_eq!(rule.eval(2.0, 5.0).unwrap(), 1.0);
        assert_eq!(rule.eval(2.0, 0.1).unwrap(), 1.0);
    }

    #[test]
    fn zero_wage_is_domain_error() {
        let rule = SavingsRule::log_utility(0.5).unwrap();
        assert!(matches!(rule.eval(0.0, 1.0), Err(Error::Domain { .. })));
        assert!(matches!(rule.eval(1.0, -1.0), Err(Error::Domain { .. })));
    }

    #[test]
    fn beta_outside_unit_interval_rejected() {
        assert!(SavingsRule::log_utility(0.0).is_err());
        assert!(SavingsRule::log_utility(1.0).is_err());
    }

    #[test]
    fn sampler_accepts_valid_rules() {
        assert!(SavingsRule::log_utility(0.3)
            .unwrap()
            .validate_samples(1000, 7)
            .passed());
        let crra = SavingsRule::custom(Crra {
            gamma: 0.7,
            delta: 0.9,
        });
        let report = crra.validate_samples(1000, 7);
        assert!(report.passed(), "{:?}", report.violations.first());
    }

    #[test]
    fn sampler_reports_bound_violation() {
        let report = SavingsRule::custom(Spendthrift).validate_samples(1000, 11);
        assert_eq!(report.samples, 1000);
        assert_eq!(report.violations.len(), 1000);
        assert!(report
            .violations
            .iter()
            .all(|v| v.kind == SavingsViolationKind::OutOfBounds));
    }

    #[test]
    fn finite_difference_partials_match_closed_form() {
        let crra = Crra {
            gamma: 0.5,
            delta: 0.8,
        };
        let (w, r) = (1.3, 1.1);
        // s = w / (1 + c R^{-1}), c = δ^{-2}
        let c = 0.8f64.powi(-2);
        let sw = 1.0 / (1.0 + c / r);
        let sr = w * c / (r * r) / (1.0 + c / r).powi(2);
        assert!((crra.d_wage(w, r) - sw).abs() < 1e-8);
        assert!((crra.d_rate(w, r) - sr).abs() < 1e-8);
    }
}
