use rayon::prelude::*;

use super::{shoot_with, ShootOptions, ShotClass, Targets};
use crate::econ::{DividendSpec, EconomyConfig};
use crate::error::{Error, Result};

/// Initial conditions `(k0, D0)` to probe.
#[derive(Debug, Clone, PartialEq)]
pub struct OmegaGrid {
    pub k0: Vec<f64>,
    pub d0: Vec<f64>,
}

impl OmegaGrid {
    /// `n_k` values of `k0` spaced linearly over `[0.1, 2]·k*` and `n_d`
    /// values of `D0` spaced logarithmically over `[1e-8, 1e-1]·p*`.
    pub fn around(k_star: f64, p_star: f64, n_k: usize, n_d: usize) -> Self {
        OmegaGrid {
            k0: linspace(0.1 * k_star, 2.0 * k_star, n_k),
            d0: logspace(1e-8 * p_star, 1e-1 * p_star, n_d),
        }
    }

    pub fn len(&self) -> usize {
        self.k0.len() * self.d0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Points in `D0`-major order: all `k0` for the first `D0`, then the next.
    pub fn points(&self) -> Vec<(f64, f64)> {
        self.d0
            .iter()
            .flat_map(|&d| self.k0.iter().map(move |&k| (k, d)))
            .collect()
    }
}

fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![a],
        _ => (0..n)
            .map(|i| a + (b - a) * i as f64 / (n - 1) as f64)
            .collect(),
    }
}

fn logspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    linspace(a.ln(), b.ln(), n)
        .into_iter()
        .map(f64::exp)
        .collect()
}

/// Result of shooting from one initial condition.
#[derive(Debug, Clone, PartialEq)]
pub struct OmegaProbe {
    pub k0: f64,
    pub d0: f64,
    /// The equilibrium path found converges to `(k*, p*)`. This reads
    /// "shooting found a convergent path" as membership, which relies on
    /// the equilibrium being unique.
    pub in_omega: bool,
    pub p0_star: Option<f64>,
    /// `‖(k_T, p_T) − (k*, p*)‖∞` at the end of the path, if one was built.
    pub final_dist: Option<f64>,
    /// Length of the path the verdict rests on.
    pub horizon: usize,
    pub class: Option<ShotClass>,
    pub error: Option<Error>,
}

fn probe_one(
    cfg: &EconomyConfig,
    targets: &Targets,
    k0: f64,
    d0: f64,
    opts: &ShootOptions,
) -> OmegaProbe {
    let gd = cfg.dividends.growth().unwrap_or(0.0);
    let mut probe = OmegaProbe {
        k0,
        d0,
        in_omega: false,
        p0_star: None,
        final_dist: None,
        horizon: opts.horizon,
        class: None,
        error: None,
    };
    let point = EconomyConfig {
        k0,
        dividends: DividendSpec::geometric(d0, gd),
        ..cfg.clone()
    };
    match shoot_with(&point, targets, opts) {
        Ok(res) => {
            probe.in_omega = matches!(res.class, ShotClass::ConvergedBubbly { .. })
                && res.final_distance < targets.tol;
            probe.p0_star = Some(res.p0);
            probe.final_dist = Some(res.final_distance);
            probe.horizon = res.trajectory.len() - 1;
            probe.class = Some(res.class);
        }
        Err(e) => probe.error = Some(e),
    }
    probe
}

/// Shoots from every grid point of `grid`, using `cfg` for everything
/// except `k0` and `D0`. Errors at single points are recorded in the probe.
///
/// `jobs > 1` spreads the points over that many threads; the output order
/// is the grid order either way.
pub fn probe_omega(
    cfg: &EconomyConfig,
    grid: &OmegaGrid,
    opts: &ShootOptions,
    jobs: usize,
) -> Result<Vec<OmegaProbe>> {
    let gd = cfg.dividends.growth().ok_or_else(|| {
        Error::InvalidParameter("the Omega probe needs geometric dividends (Gd)".into())
    })?;
    let base = cfg.with_dividends(DividendSpec::geometric(0.0, gd));
    let targets = Targets::new(&base, opts.tol_bubbly_rel)?;
    let points = grid.points();
    let run = |&(k, d): &(f64, f64)| probe_one(&base, &targets, k, d, opts);
    if jobs <= 1 {
        return Ok(points.iter().map(run).collect());
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| Error::InvalidParameter(format!("thread pool: {e}")))?;
    Ok(pool.install(|| points.par_iter().map(run).collect()))
}

/// Upward closure and ordering of `p0*` along `k0` at one `D0`.
#[derive(Debug, Clone, PartialEq)]
pub struct KMonotonicity {
    pub d0: f64,
    /// `in_omega` never switches from true back to false as `k0` rises.
    pub upward_closed: bool,
    /// `p0*` strictly increases in `k0` across the points in `Ω`.
    pub p0_increasing: bool,
    /// Points in `Ω`.
    pub members: usize,
}

/// Checks the probes at one `D0` (taken in ascending `k0`).
pub fn monotone_in_k0(probes: &[OmegaProbe]) -> KMonotonicity {
    let mut sorted: Vec<&OmegaProbe> = probes.iter().collect();
    sorted.sort_by(|a, b| a.k0.total_cmp(&b.k0));
    let flags: Vec<bool> = sorted.iter().map(|p| p.in_omega).collect();
    let upward_closed = flags.windows(2).all(|w| !w[0] || w[1]);
    let prices: Vec<f64> = sorted
        .iter()
        .filter(|p| p.in_omega)
        .filter_map(|p| p.p0_star)
        .collect();
    KMonotonicity {
        d0: sorted.first().map_or(f64::NAN, |p| p.d0),
        upward_closed,
        p0_increasing: prices.windows(2).all(|w| w[1] > w[0]),
        members: prices.len(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BoundaryEstimate {
    /// `Ω` membership switches inside `(below, above)`.
    Between { below: f64, above: f64 },
    /// Already in `Ω` at the lower end of the search range.
    BelowRange { k_lo: f64 },
    /// Not in `Ω` even at the upper end.
    AboveRange { k_hi: f64 },
}

/// Estimates `inf{k0 : (k0, D0) ∈ Ω}` by bisection on the membership
/// indicator over `[k_lo, k_hi]`, stopping at relative width `rel_tol`.
/// Points where shooting is inconclusive count as outside `Ω`.
pub fn lower_boundary_k0(
    cfg: &EconomyConfig,
    d0: f64,
    k_lo: f64,
    k_hi: f64,
    opts: &ShootOptions,
    rel_tol: f64,
) -> Result<BoundaryEstimate> {
    let gd = cfg.dividends.growth().ok_or_else(|| {
        Error::InvalidParameter("the Omega probe needs geometric dividends (Gd)".into())
    })?;
    let base = cfg.with_dividends(DividendSpec::geometric(0.0, gd));
    let targets = Targets::new(&base, opts.tol_bubbly_rel)?;
    let member = |k: f64| probe_one(&base, &targets, k, d0, opts).in_omega;
    if !member(k_hi) {
        return Ok(BoundaryEstimate::AboveRange { k_hi });
    }
    if member(k_lo) {
        return Ok(BoundaryEstimate::BelowRange { k_lo });
    }
    let (mut below, mut above) = (k_lo, k_hi);
    while above - below > rel_tol * above {
        let mid = 0.5 * (below + above);
        if member(mid) {
            above = mid;
        } else {
            below = mid;
        }
    }
    Ok(BoundaryEstimate::Between { below, above })
}
