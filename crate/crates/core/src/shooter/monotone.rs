use std::fmt;

use crate::dynamics::{self, Trajectory, TrajectoryRecord};
use crate::econ::EconomyConfig;
use crate::error::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MonotoneQuantity {
    Capital,
    Price,
    Rate,
    Wage,
    Bubble,
}

impl fmt::Display for MonotoneQuantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MonotoneQuantity::Capital => "k_t > k_t'",
            MonotoneQuantity::Price => "p_t < p_t'",
            MonotoneQuantity::Rate => "R_t < R_t'",
            MonotoneQuantity::Wage => "w_t > w_t'",
            MonotoneQuantity::Bubble => "b_t < b_t'",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MonotoneViolation {
    pub t: usize,
    pub quantity: MonotoneQuantity,
    pub low: f64,
    pub high: f64,
}

/// Comparison of the paths started at `p0 < p0'`.
#[derive(Debug, Clone, PartialEq)]
pub struct MonotonicityReport {
    /// `p0 == p0'`: the paths coincide and nothing is compared.
    pub degenerate: bool,
    /// Periods `t ≥ 1` compared.
    pub compared: usize,
    /// Whether fundamental values were available for the bubble ordering.
    pub bubbles_compared: bool,
    pub violations: Vec<MonotoneViolation>,
}

impl MonotonicityReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn first(&self) -> Option<&MonotoneViolation> {
        self.violations.first()
    }
}

/// Iterates both prices for `horizon` periods and checks
/// `k_t > k_t'`, `p_t < p_t'`, `R_t < R_t'`, `w_t > w_t'` for every `t ≥ 1`
/// where both paths are feasible with nonnegative prices, and `b_t < b_t'`
/// when fundamental values can be computed.
pub fn monotonicity_check(
    cfg: &EconomyConfig,
    p0: f64,
    p0_prime: f64,
    horizon: usize,
) -> Result<MonotonicityReport> {
    let (lo, hi) = if p0 <= p0_prime {
        (p0, p0_prime)
    } else {
        (p0_prime, p0)
    };
    if lo == hi {
        return Ok(MonotonicityReport {
            degenerate: true,
            compared: 0,
            bubbles_compared: false,
            violations: Vec::new(),
        });
    }
    let a = dynamics::iterate(cfg, lo, horizon)?;
    let b = dynamics::iterate(cfg, hi, horizon)?;
    let common = a
        .records
        .iter()
        .zip(&b.records)
        .take_while(|(x, y)| x.p >= 0.0 && y.p >= 0.0)
        .count();

    let mut violations = Vec::new();
    let mut push = |t, quantity, low, high| {
        violations.push(MonotoneViolation {
            t,
            quantity,
            low,
            high,
        })
    };
    for (x, y) in a.records[1..common].iter().zip(&b.records[1..common]) {
        if !(x.k > y.k) {
            push(x.t, MonotoneQuantity::Capital, x.k, y.k);
        }
        if !(x.p < y.p) {
            push(x.t, MonotoneQuantity::Price, x.p, y.p);
        }
        if !(x.rate < y.rate) {
            push(x.t, MonotoneQuantity::Rate, x.rate, y.rate);
        }
        if !(x.wage > y.wage) {
            push(x.t, MonotoneQuantity::Wage, x.wage, y.wage);
        }
    }

    let mut bubbles_compared = false;
    if common >= 2 {
        let tail = cfg.dividends.tail_ratio(cfg.growth);
        let prefix = |tr: &Trajectory| Trajectory {
            records: tr.records[..common].to_vec(),
            termination: tr.termination,
            growth: tr.growth,
        };
        let (mut ta, mut tb) = (prefix(&a), prefix(&b));
        if dynamics::attach_fundamental_value(&mut ta, tail).is_ok()
            && dynamics::attach_fundamental_value(&mut tb, tail).is_ok()
        {
            bubbles_compared = true;
            let bubble = |r: &TrajectoryRecord| r.b.unwrap_or(f64::NAN);
            for (x, y) in ta.records[1..].iter().zip(&tb.records[1..]) {
                if !(bubble(x) < bubble(y)) {
                    push(x.t, MonotoneQuantity::Bubble, bubble(x), bubble(y));
                }
            }
        }
    }

    Ok(MonotonicityReport {
        degenerate: false,
        compared: common.saturating_sub(1),
        bubbles_compared,
        violations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::econ::{DividendSpec, ProductionTech};

    fn cfg() -> EconomyConfig {
        EconomyConfig::log_utility(
            1.0,
            ProductionTech::perturbed(0.25, 2.0 / 3.0, 23.0 / 6.0).unwrap(),
            0.5,
            DividendSpec::geometric(1e-5, 0.95),
            0.8,
        )
        .unwrap()
    }

    #[test]
    fn ordered_prices_give_ordered_paths() {
        let rep = monotonicity_check(&cfg(), 0.02, 0.03, 100).unwrap();
        assert!(!rep.degenerate);
        assert!(rep.compared >= 1);
        assert!(rep.passed(), "{:?}", rep.first());
    }

    #[test]
    fn equal_prices_are_degenerate() {
        let rep = monotonicity_check(&cfg(), 0.02, 0.02, 100).unwrap();
        assert!(rep.degenerate && rep.passed() && rep.compared == 0);
    }
}
