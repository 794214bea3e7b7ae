//! Model primitives: technology, savings, dividends, and the capital map
//! `k_{t+1} = g(k_t, p_t)` defined implicitly by asset-market clearing
//! `G x + p = s(w(k), f'(x))`.

mod dividends;
mod savings;
pub mod tech;

pub use dividends::DividendSpec;
pub use savings::{
    SavingsFunction, SavingsRule, SavingsValidation, SavingsViolation, SavingsViolationKind,
};
pub use tech::{ProductionTech, TechEval};

use crate::error::{require_positive, Error, Result};
use crate::root;

/// Upper capital bound used to approximate `f'(∞)`.
pub const K_MAX: f64 = 1e9;

/// Residual tolerance for the implicit capital map under custom savings.
pub const TOL_RES: f64 = 1e-10;

/// Lower end of the bracket for the implicit capital map.
const X_FLOOR: f64 = 1e-12;

/// One economy: growth, technology, savings, dividends and initial capital,
/// all in detrended (per-capita) units.
#[derive(Debug, Clone)]
pub struct EconomyConfig {
    /// Gross population growth `G`.
    pub growth: f64,
    pub tech: ProductionTech,
    pub savings: SavingsRule,
    pub dividends: DividendSpec,
    pub k0: f64,
}

/// State `ξ = (k, p, d)` of the detrended system.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StateVector {
    pub k: f64,
    pub p: f64,
    pub d: f64,
}

/// Outcome of solving for next-period capital.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CapitalStep {
    Next(f64),
    /// Savings cannot carry both positive capital and the asset.
    NoSolution,
}

impl CapitalStep {
    pub fn value(self) -> Option<f64> {
        match self {
            CapitalStep::Next(x) => Some(x),
            CapitalStep::NoSolution => None,
        }
    }
}

impl EconomyConfig {
    pub fn new(
        growth: f64,
        tech: ProductionTech,
        savings: SavingsRule,
        dividends: DividendSpec,
        k0: f64,
    ) -> Result<Self> {
        let cfg = EconomyConfig {
            growth,
            tech,
            savings,
            dividends,
            k0,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    /// Log-utility economy.
    pub fn log_utility(
        growth: f64,
        tech: ProductionTech,
        beta: f64,
        dividends: DividendSpec,
        k0: f64,
    ) -> Result<Self> {
        Self::new(growth, tech, SavingsRule::log_utility(beta)?, dividends, k0)
    }

    pub fn validate(&self) -> Result<()> {
        require_positive("G", self.growth)?;
        require_positive("k0", self.k0)?;
        self.tech.validate()?;
        self.savings.validate()?;
        self.dividends.validate(self.growth)?;
        let r_inf = self.tech.rate(K_MAX)?;
        if !(r_inf < self.growth) {
            return Err(Error::InvalidParameter(format!(
                "f'(k_max) = {r_inf} must be below G = {} (paths would diverge)",
                self.growth
            )));
        }
        Ok(())
    }

    pub fn with_k0(&self, k0: f64) -> Self {
        EconomyConfig { k0, ..self.clone() }
    }

    pub fn with_dividends(&self, dividends: DividendSpec) -> Self {
        EconomyConfig {
            dividends,
            ..self.clone()
        }
    }

    /// Largest asset price savings at capital `k` can finance:
    /// `β w(k)` under log utility, `f(k)` otherwise.
    pub fn price_ceiling(&self, k: f64) -> Result<f64> {
        match self.savings.beta() {
            Some(beta) => Ok(beta * self.tech.wage(k)?),
            None => self.tech.eval(k).map(|e| e.f),
        }
    }

    /// `Φ(x, k, p) = G x + p − s(f(k) − k f'(k), f'(x))`.
    pub fn capital_residual(&self, x: f64, k: f64, p: f64) -> Result<f64> {
        let w = self.tech.wage(k)?;
        let r = self.tech.rate(x)?;
        Ok(self.growth * x + p - self.savings.eval_unchecked(w, r))
    }

    /// Solves `Φ(x, k, p) = 0` for `x = g(k, p) > 0`.
    ///
    /// Log utility has the closed form `(β w(k) − p) / G`. Custom rules are
    /// bisected on `[1e-12, f(k)/G]`, where `Φ` is increasing in `x`.
    /// Slightly negative `p` is accepted so that rounding near zero prices
    /// does not abort a trajectory.
    pub fn solve_g(&self, k: f64, p: f64) -> Result<CapitalStep> {
        if !p.is_finite() {
            return Err(Error::Domain {
                what: "price p",
                requirement: "finite",
                value: p,
            });
        }
        let w = self.tech.wage(k)?;
        match &self.savings {
            SavingsRule::LogUtility { beta } => {
                let x = (beta * w - p) / self.growth;
                Ok(if x > 0.0 {
                    CapitalStep::Next(x)
                } else {
                    CapitalStep::NoSolution
                })
            }
            SavingsRule::Custom(_) => {
                let g = self.growth;
                let phi = |x: f64| {
                    // rate() cannot fail for x in the bracket
                    let r = self.tech.rate(x).unwrap_or(f64::INFINITY);
                    g * x + p - self.savings.eval_unchecked(w, r)
                };
                let hi = self.tech.eval(k)?.f / g;
                if !(hi > X_FLOOR) || phi(X_FLOOR) >= 0.0 || phi(hi) < 0.0 {
                    return Ok(CapitalStep::NoSolution);
                }
                let x = match root::bisect(phi, X_FLOOR, hi) {
                    Ok(x) => x,
                    Err(_) => return Ok(CapitalStep::NoSolution),
                };
                if phi(x).abs() <= TOL_RES {
                    Ok(CapitalStep::Next(x))
                } else {
                    Ok(CapitalStep::NoSolution)
                }
            }
        }
    }

    /// Inverse of the capital step: the `k > 0` with `g(k, p) = k_next`,
    /// i.e. `s(w(k), f'(k_next)) = G k_next + p`. `None` when no capital
    /// stock up to `K_MAX` saves enough.
    ///
    /// Savings rise with the wage and the wage with `k`, so the gap is
    /// monotone; it is bisected in `ln k` and then polished in `k`.
    pub fn previous_capital(&self, k_next: f64, p: f64) -> Result<Option<f64>> {
        let target = self.growth * k_next + p;
        if !(target > 0.0) {
            return Ok(None);
        }
        let rate = self.tech.rate(k_next)?;
        let gap = |k: f64| match self.tech.wage(k) {
            Ok(w) => self.savings.eval_unchecked(w, rate) - target,
            Err(_) => f64::NAN,
        };
        let (ln_lo, ln_hi) = (-700.0, K_MAX.ln());
        if gap(ln_hi.exp()) < 0.0 {
            return Ok(None);
        }
        let ln_k = root::bisect(|x| gap(x.exp()), ln_lo, ln_hi)?;
        let k = ln_k.exp();
        let (lo, hi) = (k * (1.0 - 1e-12), k * (1.0 + 1e-12));
        Ok(Some(root::bisect(gap, lo, hi).unwrap_or(k)))
    }
}
