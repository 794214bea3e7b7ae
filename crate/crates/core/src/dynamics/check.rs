use super::Trajectory;
use crate::econ::EconomyConfig;
use crate::error::Result;

/// Relative slack on the feasibility inequalities.
const FEASIBILITY_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FeasibilityKind {
    /// `G k_{t+1} > f(k_t)`.
    CapitalExceedsOutput,
    /// `p_t > f(k_t)`.
    PriceExceedsOutput,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FeasibilityViolation {
    pub t: usize,
    pub kind: FeasibilityKind,
    pub lhs: f64,
    pub output: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct FeasibilityReport {
    pub checked: usize,
    pub violations: Vec<FeasibilityViolation>,
}

impl FeasibilityReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn first(&self) -> Option<&FeasibilityViolation> {
        self.violations.first()
    }
}

/// Checks `G k_{t+1} ≤ f(k_t)` and `p_t ≤ f(k_t)` on every record, with
/// `f(k) = w + k R` taken from the stored columns.
pub fn check_feasibility_bound(traj: &Trajectory) -> FeasibilityReport {
    let g = traj.growth;
    let mut report = FeasibilityReport {
        checked: traj.records.len(),
        violations: Vec::new(),
    };
    for (i, r) in traj.records.iter().enumerate() {
        let output = r.wage + r.k * r.rate;
        let limit = output * (1.0 + FEASIBILITY_SLACK);
        if r.p > limit {
            report.violations.push(FeasibilityViolation {
                t: r.t,
                kind: FeasibilityKind::PriceExceedsOutput,
                lhs: r.p,
                output,
            });
        }
        if let Some(next) = traj.records.get(i + 1) {
            if g * next.k > limit {
                report.violations.push(FeasibilityViolation {
                    t: r.t,
                    kind: FeasibilityKind::CapitalExceedsOutput,
                    lhs: g * next.k,
                    output,
                });
            }
        }
    }
    report
}

/// Largest per-period residuals of the equilibrium system on a stored path.
///
/// Each residual is normalized by the largest term in its equation:
/// market clearing `|G k_{t+1} + p_t − s(w_t, R_{t+1})| / max(G k_{t+1}, |p_t|, s)`
/// and the price recursion `|p_t − (R_t/G) p_{t−1} + d_t| / max(|p_t|, (R_t/G)|p_{t−1}|, d_t)`.
/// The latter is the no-arbitrage identity `p_{t−1} = (G/R_t)(p_t + d_t)`
/// rescaled.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ResidualReport {
    pub max_capital: f64,
    pub max_price: f64,
    pub worst_capital_t: usize,
    pub worst_price_t: usize,
    pub periods: usize,
}

impl ResidualReport {
    pub fn max(&self) -> f64 {
        self.max_capital.max(self.max_price)
    }
}

fn rel(diff: f64, scale: f64) -> f64 {
    if scale > 0.0 {
        diff.abs() / scale
    } else {
        diff.abs()
    }
}

pub fn verify_equilibrium(cfg: &EconomyConfig, traj: &Trajectory) -> Result<ResidualReport> {
    let g = cfg.growth;
    let mut rep = ResidualReport {
        periods: traj.records.len(),
        ..Default::default()
    };
    for w in traj.records.windows(2) {
        let (a, b) = (w[0], w[1]);
        let s = cfg.savings.eval(cfg.tech.wage(a.k)?, cfg.tech.rate(b.k)?)?;
        let cap = rel(g * b.k + a.p - s, (g * b.k).max(a.p.abs()).max(s));
        if cap > rep.max_capital {
            rep.max_capital = cap;
            rep.worst_capital_t = a.t;
        }
        let carried = b.rate / g * a.p;
        let price = rel(b.p - carried + b.d, b.p.abs().max(carried.abs()).max(b.d));
        if price > rep.max_price {
            rep.max_price = price;
            rep.worst_price_t = b.t;
        }
    }
    Ok(rep)
}

/// Result of re-deriving a stored path along its stable directions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StableReproduction {
    /// `max_t |k̂_t − k_t| / k_t` with `k̂` iterated forward through
    /// `g(k̂_t, p_t)` from the first record.
    pub max_capital: f64,
    /// `max_t |p̂_t − p_t| / max(p_t, d_{t+1})` with `p̂` iterated backward
    /// through `p̂_{t−1} = (G/R̂_t)(p̂_t + d_t)` from the last record.
    pub max_price: f64,
}

impl StableReproduction {
    pub fn max(&self) -> f64 {
        self.max_capital.max(self.max_price)
    }
}

/// Re-derives a stored path without running the price recursion forward.
///
/// On paths where `R_t/G` stays well above one the forward price recursion
/// amplifies rounding by `Π R_t/G`, so re-iterating the full system
/// forward cannot reproduce a stored path for long. Capital is stable
/// forward and prices are stable backward, so each is reproduced in its
/// own stable direction using the stored values of the other.
pub fn reproduce_stable(cfg: &EconomyConfig, traj: &Trajectory) -> Result<StableReproduction> {
    let recs = &traj.records;
    let n = recs.len();
    let g = cfg.growth;
    let mut out = StableReproduction {
        max_capital: 0.0,
        max_price: 0.0,
    };
    if n < 2 {
        return Ok(out);
    }
    let mut rates = vec![recs[0].rate; n];
    let mut k_hat = recs[0].k;
    for t in 1..n {
        k_hat = cfg
            .solve_g(k_hat, recs[t - 1].p)?
            .value()
            .unwrap_or(f64::NAN);
        let dev = rel(k_hat - recs[t].k, recs[t].k);
        out.max_capital = out
            .max_capital
            .max(if dev.is_nan() { f64::INFINITY } else { dev });
        if !(k_hat > 0.0) {
            return Ok(out);
        }
        rates[t] = cfg.tech.rate(k_hat)?;
    }
    let mut p_hat = recs[n - 1].p;
    for t in (1..n).rev() {
        p_hat = g / rates[t] * (p_hat + recs[t].d);
        let prev = &recs[t - 1];
        let dev = rel(p_hat - prev.p, prev.p.abs().max(recs[t].d));
        out.max_price = out.max_price.max(dev);
    }
    Ok(out)
}

/// Re-derives a stored path by iterating the whole system backward from its
/// last record: `p̂_{t−1} = (G/R̂_t)(p̂_t + d_t)` and `k̂_{t−1}` from
/// [`EconomyConfig::previous_capital`].
///
/// This is the stable direction on paths where capital and prices both
/// collapse, such as the constructed counterexample: there `R_t/G → ∞`
/// shrinks price errors backward, and the wage elasticity term does the
/// same for capital. Near a saddle use [`reproduce_stable`] instead.
pub fn reproduce_backward(cfg: &EconomyConfig, traj: &Trajectory) -> Result<StableReproduction> {
    let recs = &traj.records;
    let n = recs.len();
    let g = cfg.growth;
    let mut out = StableReproduction {
        max_capital: 0.0,
        max_price: 0.0,
    };
    if n < 2 {
        return Ok(out);
    }
    let (mut k_hat, mut p_hat) = (recs[n - 1].k, recs[n - 1].p);
    for t in (1..n).rev() {
        p_hat = g / cfg.tech.rate(k_hat)? * (p_hat + recs[t].d);
        let prev = &recs[t - 1];
        k_hat = match cfg.previous_capital(k_hat, p_hat)? {
            Some(k) => k,
            None => {
                out.max_capital = f64::INFINITY;
                return Ok(out);
            }
        };
        out.max_capital = out.max_capital.max(rel(k_hat - prev.k, prev.k));
        out.max_price = out
            .max_price
            .max(rel(p_hat - prev.p, prev.p.abs().max(recs[t].d)));
    }
    Ok(out)
}
