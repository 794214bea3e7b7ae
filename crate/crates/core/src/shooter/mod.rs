//! Saddle-path shooting for the equilibrium initial price.
//!
//! Along any feasible path, a higher `p0` means lower capital and a higher
//! price in every later period. Paths started too high run out of savings
//! for capital; paths started too low reach a negative price. The
//! equilibrium price is the boundary between the two and is found by
//! bisection, with the ordering checked at every step rather than assumed.
//!
//! The bubbly steady state is a saddle with unstable root `λ2 > 1`, so even
//! the best `f64` price leaves the steady state after a few hundred
//! periods. [`shoot`] therefore rebuilds the path in segments: every
//! `anchor_every` periods the price is re-solved from the current capital
//! stock by the same bisection. The correction at each seam is of the order
//! of the bisection resolution, far below the residual tolerance.

mod longrun;
mod monotone;
mod omega;

pub use longrun::{classify_longrun, LongRunCase};
pub use monotone::{monotonicity_check, MonotoneQuantity, MonotoneViolation, MonotonicityReport};
pub use omega::{
    lower_boundary_k0, monotone_in_k0, probe_omega, BoundaryEstimate, KMonotonicity, OmegaGrid,
    OmegaProbe,
};

use std::fmt;

use crate::dynamics::{self, Termination, Trajectory, PRICE_FLOOR};
use crate::econ::{CapitalStep, DividendSpec, EconomyConfig};
use crate::error::{Error, Result};
use crate::steady::{self, BubblyState};

/// Outcome of a single trial price.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ShotClass {
    /// Savings could not finance positive capital at period `t`.
    TooHigh {
        t: usize,
    },
    /// Price fell below zero at period `t`.
    TooLow {
        t: usize,
    },
    /// Ended within tolerance of `(k*, p*)`.
    ConvergedBubbly {
        k: f64,
        p: f64,
    },
    /// Ended within tolerance of a bubbleless steady state.
    ConvergedBubbleless {
        k: f64,
    },
    Undecided {
        horizon: usize,
    },
}

impl ShotClass {
    /// Sides of the bisection: prices classified low raise the lower end.
    fn is_low(&self) -> bool {
        matches!(
            self,
            ShotClass::TooLow { .. } | ShotClass::ConvergedBubbleless { .. }
        )
    }
}

impl fmt::Display for ShotClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ShotClass::TooHigh { t } => write!(f, "too high (capital nonpositive at t = {t})"),
            ShotClass::TooLow { t } => write!(f, "too low (price negative at t = {t})"),
            ShotClass::ConvergedBubbly { k, p } => {
                write!(f, "converged to the bubbly steady state (k = {k}, p = {p})")
            }
            ShotClass::ConvergedBubbleless { k } => {
                write!(f, "converged to a bubbleless steady state (k = {k})")
            }
            ShotClass::Undecided { horizon } => write!(f, "undecided at horizon {horizon}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShotOutcome {
    pub p0: f64,
    pub class: ShotClass,
    /// Horizon the decision was reached at.
    pub horizon: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShootOptions {
    /// Length of the returned equilibrium path.
    pub horizon: usize,
    /// First horizon for trial prices; doubled while undecided.
    pub trial_horizon: usize,
    pub max_horizon: usize,
    /// Bracket width at which bisection stops, relative to the upper end.
    pub tol_p0_rel: f64,
    /// Convergence tolerance relative to `max(1, k*, p*)`.
    pub tol_bubbly_rel: f64,
    /// Segment length between price re-solves.
    pub anchor_every: usize,
}

impl Default for ShootOptions {
    fn default() -> Self {
        ShootOptions {
            horizon: 2000,
            trial_horizon: 1000,
            max_horizon: 20_000,
            tol_p0_rel: 1e-14,
            tol_bubbly_rel: 1e-6,
            anchor_every: 50,
        }
    }
}

/// Steady states and tolerances used to classify path endings.
#[derive(Debug, Clone, PartialEq)]
pub struct Targets {
    pub bubbly: BubblyState,
    pub bubbleless: Vec<f64>,
    /// Absolute convergence tolerance, `tol_bubbly_rel·max(1, k*, p*)`.
    pub tol: f64,
}

impl Targets {
    pub fn new(cfg: &EconomyConfig, tol_rel: f64) -> Result<Self> {
        let bubbly = steady::bubbly_steady_state(cfg)?.ok_or(Error::NoBubblySteadyState)?;
        let bubbleless = steady::bubbleless_steady_states(cfg)?
            .into_iter()
            .map(|s| s.k)
            .collect();
        Ok(Targets {
            bubbly,
            bubbleless,
            tol: tol_rel * 1f64.max(bubbly.k).max(bubbly.p),
        })
    }

    /// `‖(k, p) − (k*, p*)‖∞`.
    pub fn distance(&self, k: f64, p: f64) -> f64 {
        (k - self.bubbly.k).abs().max((p - self.bubbly.p).abs())
    }

    /// Classifies a feasible end state.
    pub fn classify_state(&self, k: f64, p: f64, horizon: usize) -> ShotClass {
        if self.distance(k, p) < self.tol {
            return ShotClass::ConvergedBubbly { k, p };
        }
        if p.abs() < self.tol {
            if let Some(&kb) = self
                .bubbleless
                .iter()
                .find(|&&kb| (k - kb).abs() < self.tol * kb.max(1.0))
            {
                return ShotClass::ConvergedBubbleless { k: kb };
            }
        }
        ShotClass::Undecided { horizon }
    }
}

enum TrialEnd {
    CapitalNonpositive(usize),
    PriceNegative(usize),
    Horizon { k: f64, p: f64 },
}

/// Iterates `(k, p)` only, without building records.
fn trial(
    cfg: &EconomyConfig,
    t_start: usize,
    k0: f64,
    p0: f64,
    horizon: usize,
) -> Result<TrialEnd> {
    let g = cfg.growth;
    let (mut k, mut p) = (k0, p0);
    for t in t_start + 1..=t_start + horizon {
        k = match cfg.solve_g(k, p)? {
            CapitalStep::Next(x) if x.is_finite() => x,
            _ => return Ok(TrialEnd::CapitalNonpositive(t)),
        };
        p = cfg.tech.rate(k)? / g * p - cfg.dividends.detrended(t, g);
        if p.is_nan() || p == f64::INFINITY {
            return Ok(TrialEnd::CapitalNonpositive(t + 1));
        }
        if p < PRICE_FLOOR {
            return Ok(TrialEnd::PriceNegative(t));
        }
    }
    Ok(TrialEnd::Horizon { k, p })
}

/// Classifies `p0` at state `k` in period `t_start`, doubling the horizon
/// while the ending is undecided or still at the bubbly steady state.
fn classify_at(
    cfg: &EconomyConfig,
    targets: &Targets,
    t_start: usize,
    k: f64,
    p0: f64,
    opts: &ShootOptions,
) -> Result<ShotOutcome> {
    let mut horizon = opts.trial_horizon.min(opts.max_horizon).max(1);
    loop {
        let class = match trial(cfg, t_start, k, p0, horizon)? {
            TrialEnd::CapitalNonpositive(t) => ShotClass::TooHigh { t },
            TrialEnd::PriceNegative(t) => ShotClass::TooLow { t },
            // Dividends decay to the scale of the rounding floor long before a
            // low path reaches a bubbleless state, so its price can stay within
            // PRICE_FLOOR of zero while being negative.
            TrialEnd::Horizon { p, .. } if p < 0.0 => ShotClass::TooLow {
                t: t_start + horizon,
            },
            TrialEnd::Horizon { k, p } => targets.classify_state(k, p, horizon),
        };
        // With dividends still flowing, a bubbleless limit is only a phase:
        // the price keeps falling behind the dividends and turns negative.
        let settled = match class {
            ShotClass::TooHigh { .. } | ShotClass::TooLow { .. } => true,
            ShotClass::ConvergedBubbleless { .. } => {
                cfg.dividends.detrended(t_start + horizon, cfg.growth) == 0.0
            }
            _ => false,
        };
        if settled || horizon >= opts.max_horizon {
            return Ok(ShotOutcome { p0, class, horizon });
        }
        horizon = (horizon * 2).min(opts.max_horizon);
    }
}

/// Classifies a trial initial price for `cfg` (state `cfg.k0`).
pub fn classify_p0(cfg: &EconomyConfig, p0: f64, opts: &ShootOptions) -> Result<ShotOutcome> {
    let targets = Targets::new(cfg, opts.tol_bubbly_rel)?;
    classify_at(cfg, &targets, cfg.dividends.start(), cfg.k0, p0, opts)
}

/// Final bracket of a price bisection.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bisection {
    pub p0: f64,
    pub lo: ShotOutcome,
    pub hi: ShotOutcome,
    pub iterations: usize,
    /// Whether any interior trial classified high.
    pub hi_moved: bool,
}

fn bisect_price(
    cfg: &EconomyConfig,
    targets: &Targets,
    t_start: usize,
    k: f64,
    opts: &ShootOptions,
) -> Result<Bisection> {
    let p_hi = cfg.price_ceiling(k)?;
    let tol = opts.tol_p0_rel * p_hi;
    let mut lo = classify_at(cfg, targets, t_start, k, 0.0, opts)?;
    let mut hi = classify_at(cfg, targets, t_start, k, p_hi, opts)?;
    if let ShotClass::ConvergedBubbly { .. } = lo.class {
        return Ok(Bisection {
            p0: 0.0,
            lo,
            hi: lo,
            iterations: 0,
            hi_moved: false,
        });
    }
    if !lo.class.is_low() || !matches!(hi.class, ShotClass::TooHigh { .. }) {
        return Err(Error::Bracket {
            lower_p0: lo.p0,
            lower: lo.class,
            upper_p0: hi.p0,
            upper: hi.class,
        });
    }
    let mut iterations = 0;
    let mut hi_moved = false;
    while hi.p0 - lo.p0 > tol {
        let mid = lo.p0 + 0.5 * (hi.p0 - lo.p0);
        if mid <= lo.p0 || mid >= hi.p0 {
            break;
        }
        iterations += 1;
        let out = classify_at(cfg, targets, t_start, k, mid, opts)?;
        match out.class {
            ShotClass::TooHigh { .. } => {
                hi = out;
                hi_moved = true;
            }
            c if c.is_low() => lo = out,
            ShotClass::ConvergedBubbly { .. } => {
                return Ok(Bisection {
                    p0: mid,
                    lo: out,
                    hi: out,
                    iterations,
                    hi_moved: true,
                })
            }
            _ => {
                return Err(Error::Inconclusive {
                    p0: mid,
                    horizon: out.horizon,
                })
            }
        }
    }
    Ok(Bisection {
        p0: lo.p0 + 0.5 * (hi.p0 - lo.p0),
        lo,
        hi,
        iterations,
        hi_moved,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ShootResult {
    pub p0: f64,
    /// Bisection bracket at `t = 0`.
    pub bracket: Bisection,
    /// Bracket width target, `tol_p0_rel·p_hi`.
    pub tol_p0: f64,
    pub trajectory: Trajectory,
    pub steady: BubblyState,
    /// Classification of the end of `trajectory`.
    pub class: ShotClass,
    /// `‖(k_T, p_T) − (k*, p*)‖∞`.
    pub final_distance: f64,
    pub reanchors: usize,
    /// Largest relative price correction at a seam.
    pub max_seam_jump: f64,
}

/// Finds the equilibrium initial price of `cfg` and the re-anchored path.
///
/// Needs a bubbly steady state and zero or geometric dividends.
pub fn shoot(cfg: &EconomyConfig, opts: &ShootOptions) -> Result<ShootResult> {
    cfg.validate()?;
    if !matches!(
        cfg.dividends,
        DividendSpec::Zero | DividendSpec::Geometric { .. }
    ) {
        return Err(Error::InvalidParameter(
            "shooting needs zero or geometric dividends".into(),
        ));
    }
    let targets = Targets::new(cfg, opts.tol_bubbly_rel)?;
    shoot_with(cfg, &targets, opts)
}

pub(crate) fn shoot_with(
    cfg: &EconomyConfig,
    targets: &Targets,
    opts: &ShootOptions,
) -> Result<ShootResult> {
    let t_start = cfg.dividends.start();
    let bracket = bisect_price(cfg, targets, t_start, cfg.k0, opts)?;
    let tol_p0 = opts.tol_p0_rel * cfg.price_ceiling(cfg.k0)?;
    let (trajectory, reanchors, max_seam_jump) =
        equilibrium_path(cfg, targets, t_start, cfg.k0, bracket.p0, opts)?;
    let last = *trajectory.last();
    let class = match trajectory.termination {
        Termination::CapitalNonpositive { t } => ShotClass::TooHigh { t },
        Termination::PriceNegative { t, .. } => ShotClass::TooLow { t },
        _ => targets.classify_state(last.k, last.p, trajectory.len() - 1),
    };
    if !bracket.hi_moved && !matches!(class, ShotClass::ConvergedBubbly { .. }) {
        // every interior trial went negative: no price keeps the asset alive
        return Err(Error::Bracket {
            lower_p0: 0.0,
            lower: ShotClass::TooLow { t: t_start },
            upper_p0: bracket.lo.p0,
            upper: bracket.lo.class,
        });
    }
    Ok(ShootResult {
        p0: bracket.p0,
        bracket,
        tol_p0,
        final_distance: targets.distance(last.k, last.p),
        trajectory,
        steady: targets.bubbly,
        class,
        reanchors,
        max_seam_jump,
    })
}

/// Builds the path from `(k0, p0)` in segments, re-solving the price from
/// the current capital at the end of every segment.
fn equilibrium_path(
    cfg: &EconomyConfig,
    targets: &Targets,
    t_start: usize,
    k0: f64,
    p0: f64,
    opts: &ShootOptions,
) -> Result<(Trajectory, usize, f64)> {
    let seg_len = opts.anchor_every.max(2);
    let max_reanchors = 4 * opts.horizon / seg_len + 16;
    let mut records: Vec<dynamics::TrajectoryRecord> = Vec::with_capacity(opts.horizon + 1);
    let mut termination = Termination::Horizon;
    let (mut t, mut k, mut p) = (t_start, k0, p0);
    let mut reanchors = 0;
    let mut max_jump: f64 = 0.0;

    loop {
        let done = t - t_start;
        let remaining = opts.horizon - done;
        let seg = dynamics::iterate_from(cfg, t, k, p, seg_len.min(remaining))?;
        let skip = usize::from(!records.is_empty());
        let mut seg_records = seg.records;
        let ended = match seg.termination {
            Termination::Converged { .. } => {
                termination = seg.termination;
                true
            }
            Termination::Horizon => done + seg_records.len() > opts.horizon,
            other => {
                // left the saddle inside the segment: keep its first half
                let m = seg_records.len();
                if m <= 2 || reanchors >= max_reanchors {
                    records.extend_from_slice(&seg_records[skip.min(m)..]);
                    termination = other;
                    break;
                }
                seg_records.truncate(m / 2);
                false
            }
        };
        records.extend_from_slice(&seg_records[skip..]);
        if ended || reanchors >= max_reanchors {
            break;
        }
        let last = *records.last().expect("segment has records");
        let re = bisect_price(cfg, targets, last.t, last.k, opts)?;
        let jump = (re.p0 - last.p).abs() / last.p.abs().max(last.d).max(f64::MIN_POSITIVE);
        max_jump = max_jump.max(jump);
        records.last_mut().expect("segment has records").p = re.p0;
        reanchors += 1;
        (t, k, p) = (last.t, last.k, re.p0);
    }
    Ok((
        Trajectory {
            records,
            termination,
            growth: cfg.growth,
        },
        reanchors,
        max_jump,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::econ::ProductionTech;

    fn calibrated(d0: f64, k0: Option<f64>) -> EconomyConfig {
        let base = EconomyConfig::log_utility(
            1.0,
            ProductionTech::perturbed(0.25, 2.0 / 3.0, 23.0 / 6.0).unwrap(),
            0.5,
            DividendSpec::geometric(d0, 0.95),
            1.0,
        )
        .unwrap();
        let k_star = steady::bubbly_steady_state(&base).unwrap().unwrap().k;
        base.with_k0(k0.unwrap_or(k_star))
    }

    #[test]
    fn steady_state_is_its_own_equilibrium() {
        let cfg = calibrated(0.0, None);
        let res = shoot(&cfg, &ShootOptions::default()).unwrap();
        let ss = res.steady;
        assert!((res.p0 - ss.p).abs() < 1e-12, "{} vs {}", res.p0, ss.p);
        for r in &res.trajectory.records {
            assert!((r.k - ss.k).abs() < 1e-12 && (r.p - ss.p).abs() < 1e-12);
        }
        assert!(matches!(res.class, ShotClass::ConvergedBubbly { .. }));
    }

    #[test]
    fn small_dividend_converges() {
        let cfg = calibrated(1e-6, None);
        let res = shoot(&cfg, &ShootOptions::default()).unwrap();
        assert!(res.bracket.hi.p0 - res.bracket.lo.p0 < 1e-12);
        assert!(res.final_distance < 1e-6);
        let at_500 = res
            .trajectory
            .records
            .iter()
            .find(|r| r.t == 500)
            .or(res.trajectory.records.last())
            .unwrap();
        assert!((res.steady.k - at_500.k).abs() < 1e-6 && (at_500.p - res.steady.p).abs() < 1e-6);
        let rep = dynamics::verify_equilibrium(&cfg, &res.trajectory).unwrap();
        assert!(rep.max() < 1e-9, "{rep:?}");
        assert!(res.max_seam_jump < 1e-9);
    }

    #[test]
    fn neighbouring_prices_leave_the_saddle() {
        let cfg = calibrated(1e-6, None);
        let opts = ShootOptions::default();
        let res = shoot(&cfg, &opts).unwrap();
        let up = classify_p0(&cfg, res.p0 + 10.0 * res.tol_p0, &opts).unwrap();
        let down = classify_p0(&cfg, res.p0 - 10.0 * res.tol_p0, &opts).unwrap();
        assert!(
            matches!(up.class, ShotClass::TooHigh { .. }),
            "{}",
            up.class
        );
        assert!(
            matches!(down.class, ShotClass::TooLow { .. }),
            "{}",
            down.class
        );
    }

    #[test]
    fn huge_dividend_with_tiny_capital_has_no_bubbly_path() {
        let cfg = calibrated(1e3, Some(1e-4));
        match shoot(&cfg, &ShootOptions::default()) {
            Err(Error::Bracket { lower, upper, .. }) => {
                assert!(matches!(lower, ShotClass::TooLow { .. }));
                assert!(matches!(upper, ShotClass::TooLow { .. }));
            }
            other => panic!("expected a bracket error, got {other:?}"),
        }
    }

    #[test]
    fn missing_bubbly_state_is_an_error() {
        let cfg = EconomyConfig::log_utility(
            1.0,
            ProductionTech::cobb_douglas(0.25, 2.0 / 3.0).unwrap(),
            0.5,
            DividendSpec::geometric(1e-6, 0.95),
            0.01,
        )
        .unwrap();
        assert_eq!(
            shoot(&cfg, &ShootOptions::default()).unwrap_err(),
            Error::NoBubblySteadyState
        );
    }
}
