//! Forward iteration of the detrended equilibrium system
//!
//! ```text
//! k_{t+1} = g(k_t, p_t)
//! p_t     = (f'(k_t) / G) p_{t−1} − d_t
//! ```
//!
//! together with fundamental values, the bubble decomposition and the
//! residual and feasibility checks used on stored paths.

mod check;
mod value;

pub use check::{
    check_feasibility_bound, reproduce_backward, reproduce_stable, verify_equilibrium,
    FeasibilityKind, FeasibilityReport, FeasibilityViolation, ResidualReport, StableReproduction,
};
pub use value::{attach_fundamental_value, fundamental_value, FundamentalValue};

use std::io;

use crate::econ::{CapitalStep, EconomyConfig};
use crate::error::Result;
use crate::export;

/// Step size below which a path counts as converged.
pub const TOL_CONV: f64 = 1e-12;
/// Truncation tolerance for fundamental values.
pub const TOL_V: f64 = 1e-10;
/// Prices below this are treated as negative; rounding noise above it is not.
pub const PRICE_FLOOR: f64 = -1e-12;

/// One period of a detrended path.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrajectoryRecord {
    pub t: usize,
    pub k: f64,
    pub p: f64,
    pub d: f64,
    /// `R_t = f'(k_t)`.
    pub rate: f64,
    /// `w_t = f(k_t) − k_t f'(k_t)`.
    pub wage: f64,
    /// Fundamental value, once computed.
    pub v: Option<f64>,
    /// Bubble `p − v`, once computed.
    pub b: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Termination {
    Horizon,
    /// `g(k_{t−1}, p_{t−1})` has no positive solution.
    CapitalNonpositive {
        t: usize,
    },
    /// `p_t < −1e-12`.
    PriceNegative {
        t: usize,
        p: f64,
    },
    /// Step below `TOL_CONV` with dividends below `TOL_CONV`.
    Converged {
        k: f64,
        p: f64,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub records: Vec<TrajectoryRecord>,
    pub termination: Termination,
    pub growth: f64,
}

impl Trajectory {
    pub fn last(&self) -> &TrajectoryRecord {
        self.records
            .last()
            .expect("trajectory has at least one record")
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    /// Builds records from stored `(t, k, p, d)` columns, recomputing `R`
    /// and `w` from the technology.
    pub fn from_columns(
        cfg: &EconomyConfig,
        t: &[usize],
        k: &[f64],
        p: &[f64],
        d: &[f64],
    ) -> Result<Self> {
        let mut records = Vec::with_capacity(t.len());
        for i in 0..t.len() {
            records.push(record(cfg, t[i], k[i], p[i], d[i])?);
        }
        Ok(Trajectory {
            records,
            termination: Termination::Horizon,
            growth: cfg.growth,
        })
    }

    /// CSV with header `t,k,p,d,R,w,v,b`; missing values are empty fields.
    pub fn write_csv<W: io::Write>(&self, out: W) -> io::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["t", "k", "p", "d", "R", "w", "v", "b"])?;
        for r in &self.records {
            w.write_record([
                r.t.to_string(),
                export::num(r.k),
                export::num(r.p),
                export::num(r.d),
                export::num(r.rate),
                export::num(r.wage),
                export::opt(r.v),
                export::opt(r.b),
            ])?;
        }
        w.flush()
    }
}

fn record(cfg: &EconomyConfig, t: usize, k: f64, p: f64, d: f64) -> Result<TrajectoryRecord> {
    Ok(TrajectoryRecord {
        t,
        k,
        p,
        d,
        rate: cfg.tech.rate(k)?,
        wage: cfg.tech.wage(k)?,
        v: None,
        b: None,
    })
}

/// Iterates `horizon` periods from `(cfg.k0, p0)`, starting at the first
/// period of the dividend process.
pub fn iterate(cfg: &EconomyConfig, p0: f64, horizon: usize) -> Result<Trajectory> {
    iterate_from(cfg, cfg.dividends.start(), cfg.k0, p0, horizon)
}

/// Iterates `horizon` periods from state `(k, p)` at period `t_start`.
///
/// Each step computes `k_{t+1}` from `(k_t, p_t)`, then `R_{t+1}`, then
/// `p_{t+1}`. The run stops early on the first infeasible state or once the
/// path has converged; the offending state is not recorded.
pub fn iterate_from(
    cfg: &EconomyConfig,
    t_start: usize,
    k: f64,
    p: f64,
    horizon: usize,
) -> Result<Trajectory> {
    let g = cfg.growth;
    let mut records = Vec::with_capacity(horizon.min(1 << 16) + 1);
    let d = cfg.dividends.detrended(t_start, g);
    records.push(record(cfg, t_start, k, p, d)?);
    let mut termination = Termination::Horizon;

    for step in 0..horizon {
        let cur = records[step];
        let t = cur.t + 1;
        let k_next = match cfg.solve_g(cur.k, cur.p)? {
            CapitalStep::Next(x) if x.is_finite() => x,
            _ => {
                termination = Termination::CapitalNonpositive { t };
                break;
            }
        };
        let rate = cfg.tech.rate(k_next)?;
        let d_next = cfg.dividends.detrended(t, g);
        let p_next = rate / g * cur.p - d_next;
        if p_next.is_nan() || p_next == f64::INFINITY {
            termination = Termination::CapitalNonpositive { t: t + 1 };
            break;
        }
        if p_next < PRICE_FLOOR {
            termination = Termination::PriceNegative { t, p: p_next };
            break;
        }
        records.push(TrajectoryRecord {
            t,
            k: k_next,
            p: p_next,
            d: d_next,
            rate,
            wage: cfg.tech.wage(k_next)?,
            v: None,
            b: None,
        });
        let step_size = (k_next - cur.k).abs().max((p_next - cur.p).abs());
        if step_size < TOL_CONV && d_next < TOL_CONV {
            termination = Termination::Converged {
                k: k_next,
                p: p_next,
            };
            break;
        }
    }
    Ok(Trajectory {
        records,
        termination,
        growth: g,
    })
}
