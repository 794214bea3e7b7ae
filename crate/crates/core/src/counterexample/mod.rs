//! A bubbleless equilibrium with `R_t → ∞` although dividends decay more
//! slowly than the bubbleless interest rate.
//!
//! For Cobb-Douglas technology and log utility, any sequence `x_t > ρ` with
//! `x_t + ρ/x_{t+1} ≥ 1 + ρ` generates an equilibrium through
//!
//! ```text
//! k_{t+1} = Aα k_t^α / (G x_t)
//! p_t     = (Aα/ρ) k_t^α − G k_{t+1}
//! d_{t+1} = (Aα/G) k_{t+1}^{α−1} p_t − p_{t+1}
//! ```
//!
//! With `x_t = C σ^t` capital collapses geometrically. Adding `θ h(k)` to
//! the technology and `βθ k/(1+k)` to the price leaves the capital path
//! unchanged, and the implied dividends `d^θ` are eventually positive and
//! decay at `σ^{(1−2α)/(1−α)}`, above the bubbleless rate `R_θ/G`.

mod premises;
mod rates;

pub use premises::{verify_counterexample_premises, PremiseCheck, PremiseReport};
pub use rates::{asymptotic_rates, AsymptoticDiagnostics, FitWindow};

use std::io;

use crate::dynamics::{Termination, Trajectory, TrajectoryRecord};
use crate::econ::{DividendSpec, EconomyConfig, ProductionTech};
use crate::error::{Error, Result};
use crate::export;

/// Default horizon.
pub const DEFAULT_HORIZON: usize = 1000;
/// Largest admissible relative residual of `k_{t+1} = g_θ(k_t, p^θ_t)`.
pub const CAPITAL_RESIDUAL_TOL: f64 = 1e-9;

/// Parameters of the construction. `Default` gives `G = 1`, `A = 1/4`,
/// `α = 2/3`, `β = 1/2`, `θ = 23/6`, `C = 5`, `σ = 1.01`, `k0 = 0.01`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CounterexampleParams {
    pub growth: f64,
    pub scale: f64,
    pub alpha: f64,
    pub beta: f64,
    pub theta: f64,
    pub c: f64,
    pub sigma: f64,
    pub k0: f64,
}

impl Default for CounterexampleParams {
    fn default() -> Self {
        CounterexampleParams {
            growth: 1.0,
            scale: 0.25,
            alpha: 2.0 / 3.0,
            beta: 0.5,
            theta: 23.0 / 6.0,
            c: 5.0,
            sigma: 1.01,
            k0: 0.01,
        }
    }
}

impl CounterexampleParams {
    pub fn rho(&self) -> f64 {
        crate::steady::rho(self.alpha, self.beta)
    }

    pub fn x_spec(&self) -> Result<XSequenceSpec> {
        XSequenceSpec::new(self.c, self.sigma, self.rho())
    }

    /// `σ^{(1−2α)/(1−α)}`, the asymptotic decay of `d^θ`.
    pub fn dividend_decay(&self) -> f64 {
        self.sigma
            .powf((1.0 - 2.0 * self.alpha) / (1.0 - self.alpha))
    }

    pub fn tech(&self) -> Result<ProductionTech> {
        ProductionTech::perturbed(self.scale, self.alpha, self.theta)
    }

    fn validate(&self) -> Result<()> {
        crate::error::require_positive("G", self.growth)?;
        crate::error::require_positive("k0", self.k0)?;
        crate::econ::SavingsRule::log_utility(self.beta)?;
        self.tech()?;
        Ok(())
    }
}

/// `x_t = C σ^t` with `ρ = α/(β(1−α))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct XSequenceSpec {
    pub c: f64,
    pub sigma: f64,
    pub rho: f64,
}

/// Which of the two admissibility inequalities failed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum XInequality {
    /// `x_t > ρ`.
    AboveRho,
    /// `x_t + ρ/x_{t+1} ≥ 1 + ρ`.
    Cumulative,
}

impl XSequenceSpec {
    /// Requires `C ≥ 1 + ρ` (up to a few ulps, since `ρ` itself is
    /// rounded) and `σ > 1`.
    pub fn new(c: f64, sigma: f64, rho: f64) -> Result<Self> {
        crate::error::require_positive("rho", rho)?;
        if !(sigma > 1.0 && sigma.is_finite()) {
            return Err(Error::InvalidSpec(format!("sigma = {sigma} must exceed 1")));
        }
        let floor = 1.0 + rho;
        if !(c >= floor * (1.0 - 4.0 * f64::EPSILON) && c.is_finite()) {
            return Err(Error::InvalidSpec(format!(
                "C = {c} must be at least 1 + rho = {floor}"
            )));
        }
        Ok(XSequenceSpec { c, sigma, rho })
    }

    pub fn x(&self, t: usize) -> f64 {
        self.c * self.sigma.powi(t as i32)
    }

    pub fn ln_x(&self, t: usize) -> f64 {
        self.c.ln() + t as f64 * self.sigma.ln()
    }

    /// First `t ≤ horizon` where an admissibility inequality fails.
    pub fn first_violation(&self, horizon: usize) -> Option<(usize, XInequality)> {
        // relative slack for the rounding in ρ and in x_t
        let slack = 8.0 * f64::EPSILON;
        for t in 0..=horizon {
            let (x, x_next) = (self.x(t), self.x(t + 1));
            if !(x > self.rho) {
                return Some((t, XInequality::AboveRho));
            }
            if !(x + self.rho / x_next >= (1.0 + self.rho) * (1.0 - slack)) {
                return Some((t, XInequality::Cumulative));
            }
        }
        None
    }
}

/// One period of the constructed path.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CounterexampleRecord {
    pub t: usize,
    pub k: f64,
    /// Cobb-Douglas price `p_t`.
    pub p: f64,
    /// Cobb-Douglas dividend `d_t`; undefined at `t = 0`.
    pub d: Option<f64>,
    pub p_theta: f64,
    /// `d^θ_t`; undefined at `t = 0`.
    pub d_theta: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CounterexamplePath {
    pub params: CounterexampleParams,
    pub records: Vec<CounterexampleRecord>,
    /// `k_{T+1}`, needed for the last price.
    pub k_terminal: f64,
    /// First period from which `d^θ` stays positive; set by
    /// [`build_perturbed`].
    pub t0: Option<usize>,
    /// Largest relative residual of `k_{t+1} = g_θ(k_t, p^θ_t)`.
    pub max_capital_residual: f64,
}

/// Builds `(k_t, p_t, d_t)` for `t = 0..=horizon` from `x_t = C σ^t`.
///
/// `params.theta` is ignored here; `p_theta` and `d_theta` are copies of
/// the Cobb-Douglas values until [`build_perturbed`] runs.
pub fn build_x_path(params: &CounterexampleParams, horizon: usize) -> Result<CounterexamplePath> {
    params.validate()?;
    let spec = params.x_spec()?;
    if let Some((t, which)) = spec.first_violation(horizon) {
        return Err(Error::InvalidSpec(format!(
            "x-sequence inequality {which:?} fails at t = {t}"
        )));
    }
    let (a, alpha, g) = (params.scale, params.alpha, params.growth);
    let aa = a * alpha;
    let rho = spec.rho;

    let mut k = Vec::with_capacity(horizon + 2);
    k.push(params.k0);
    for t in 0..=horizon {
        let kt = k[t];
        k.push(aa * kt.powf(alpha) / (g * spec.x(t)));
    }
    let p: Vec<f64> = (0..=horizon)
        .map(|t| aa / rho * k[t].powf(alpha) - g * k[t + 1])
        .collect();
    let mut records = Vec::with_capacity(horizon + 1);
    for t in 0..=horizon {
        let d = (t > 0).then(|| aa / g * k[t].powf(alpha - 1.0) * p[t - 1] - p[t]);
        if !(p[t] > 0.0 && k[t + 1] > 0.0) || d.is_some_and(|d| d < 0.0) {
            return Err(Error::InvalidSpec(format!(
                "construction leaves the admissible region at t = {t}"
            )));
        }
        records.push(CounterexampleRecord {
            t,
            k: k[t],
            p: p[t],
            d,
            p_theta: p[t],
            d_theta: d,
        });
    }
    Ok(CounterexamplePath {
        params: *params,
        records,
        k_terminal: k[horizon + 1],
        t0: None,
        max_capital_residual: 0.0,
    })
}

/// `k_{t+1}` from the product formula, evaluated in logs:
/// `ln k_{t+1} = μ_t ln(Aα/G) + α^{t+1} ln k0 − μ_t ln C − ν_t ln σ`.
pub fn closed_form_k(params: &CounterexampleParams, t: usize) -> f64 {
    closed_form_ln_k(params, t).exp()
}

pub fn closed_form_ln_k(params: &CounterexampleParams, t: usize) -> f64 {
    let alpha = params.alpha;
    let (mu, nu) = exponent_accumulators(alpha, t);
    let a_pow = alpha.powi(t as i32 + 1);
    mu * (params.scale * alpha / params.growth).ln() + a_pow * params.k0.ln()
        - mu * params.c.ln()
        - nu * params.sigma.ln()
}

/// `(μ_t, ν_t)` with `μ_t = Σ_{j≤t} α^j = (1 − α^{t+1})/(1 − α)` and
/// `ν_t = Σ_{j≤t} (t−j) α^j = t/(1−α) − α(1 − α^t)/(1−α)²`.
pub fn exponent_accumulators(alpha: f64, t: usize) -> (f64, f64) {
    let om = 1.0 - alpha;
    let mu = (1.0 - alpha.powi(t as i32 + 1)) / om;
    let nu = t as f64 / om - alpha * (1.0 - alpha.powi(t as i32)) / (om * om);
    (mu, nu)
}

/// Adds `p^θ_t = p_t + βθ k_t/(1+k_t)` and
/// `d^θ_t = (f_θ'(k_t)/G) p^θ_{t−1} − p^θ_t`, locates `t0` and records the
/// capital-map residual under the perturbed technology.
pub fn build_perturbed(path: &CounterexamplePath, theta: f64) -> Result<CounterexamplePath> {
    let mut params = path.params;
    params.theta = theta;
    let tech = params.tech()?;
    let (beta, g) = (params.beta, params.growth);
    let mut out = path.clone();
    out.params = params;

    for r in out.records.iter_mut() {
        r.p_theta = r.p + beta * theta * r.k / (1.0 + r.k);
    }
    for t in 1..out.records.len() {
        let rate = tech.rate(out.records[t].k)?;
        let d = rate / g * out.records[t - 1].p_theta - out.records[t].p_theta;
        out.records[t].d_theta = Some(d);
    }

    let n = out.records.len();
    let mut t0 = None;
    for t in (1..n).rev() {
        match out.records[t].d_theta {
            Some(d) if d > 0.0 => t0 = Some(t),
            _ => break,
        }
    }
    out.t0 = Some(t0.ok_or(Error::T0NotFound { scanned: n - 1 })?);

    let mut worst: f64 = 0.0;
    for t in 0..n {
        let r = out.records[t];
        let k_next = out.records.get(t + 1).map_or(out.k_terminal, |n| n.k);
        let g_theta = (beta * tech.wage(r.k)? - r.p_theta) / g;
        worst = worst.max((g_theta - k_next).abs() / k_next);
    }
    out.max_capital_residual = worst;
    Ok(out)
}

/// `build_x_path` followed by `build_perturbed` with `params.theta`.
pub fn construct(params: &CounterexampleParams, horizon: usize) -> Result<CounterexamplePath> {
    build_perturbed(&build_x_path(params, horizon)?, params.theta)
}

impl CounterexamplePath {
    fn t0_or_err(&self) -> Result<usize> {
        self.t0
            .ok_or_else(|| Error::InvalidParameter("perturbed path not built (t0 unknown)".into()))
    }

    /// The perturbed economy started at `t0`: capital `k_{t0}` and explicit
    /// dividends `d^θ_t`, `t ≥ t0`, extrapolated at `σ^{(1−2α)/(1−α)}`.
    pub fn economy(&self) -> Result<EconomyConfig> {
        let t0 = self.t0_or_err()?;
        let values = self.records[t0..]
            .iter()
            .map(|r| r.d_theta.unwrap_or(0.0))
            .collect();
        EconomyConfig::log_utility(
            self.params.growth,
            self.params.tech()?,
            self.params.beta,
            DividendSpec::Explicit {
                start: t0,
                values,
                tail_ratio: self.params.dividend_decay(),
            },
            self.records[t0].k,
        )
    }

    /// `(k_t, p^θ_t, d^θ_t)` for `t ≥ t0` as a trajectory of the perturbed
    /// economy.
    pub fn to_trajectory(&self) -> Result<Trajectory> {
        let t0 = self.t0_or_err()?;
        let tech = self.params.tech()?;
        let mut records = Vec::with_capacity(self.records.len() - t0);
        for r in &self.records[t0..] {
            records.push(TrajectoryRecord {
                t: r.t,
                k: r.k,
                p: r.p_theta,
                d: r.d_theta.unwrap_or(0.0),
                rate: tech.rate(r.k)?,
                wage: tech.wage(r.k)?,
                v: None,
                b: None,
            });
        }
        Ok(Trajectory {
            records,
            termination: Termination::Horizon,
            growth: self.params.growth,
        })
    }

    /// CSV `t,k,p,d,R,w,v,b,p_theta,d_theta`.
    ///
    /// `k, p, d` are the Cobb-Douglas path, `R, w` are under the perturbed
    /// technology, and `v, b = p_theta − v` are the fundamental value and
    /// bubble of the perturbed equilibrium (from `t0` on, given `valued`).
    pub fn write_csv<W: io::Write>(&self, out: W, valued: Option<&Trajectory>) -> io::Result<()> {
        let tech = self.params.tech().map_err(io::Error::other)?;
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["t", "k", "p", "d", "R", "w", "v", "b", "p_theta", "d_theta"])?;
        for r in &self.records {
            let val = valued.and_then(|tr| {
                let first = tr.records.first()?.t;
                tr.records.get(r.t.checked_sub(first)?)
            });
            let rate = tech.rate(r.k).map_err(io::Error::other)?;
            let wage = tech.wage(r.k).map_err(io::Error::other)?;
            w.write_record([
                r.t.to_string(),
                export::num(r.k),
                export::num(r.p),
                export::opt(r.d),
                export::num(rate),
                export::num(wage),
                export::opt(val.and_then(|v| v.v)),
                export::opt(val.and_then(|v| v.b)),
                export::num(r.p_theta),
                export::opt(r.d_theta),
            ])?;
        }
        w.flush()
    }
}
