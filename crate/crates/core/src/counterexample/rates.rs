use super::{exponent_accumulators, CounterexamplePath};
use crate::error::{Error, Result};

/// Minimum number of points in a fit window.
pub const MIN_FIT_POINTS: usize = 50;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FitWindow {
    /// Last 25% of the path, at least 50 points.
    #[default]
    TrailingQuarter,
    /// Last `n` points.
    Trailing(usize),
}

impl FitWindow {
    fn len(self, path_len: usize) -> usize {
        match self {
            FitWindow::TrailingQuarter => (path_len / 4).max(MIN_FIT_POINTS),
            FitWindow::Trailing(n) => n,
        }
    }
}

/// Fitted and theoretical geometric decay of the constructed path.
#[derive(Debug, Clone, PartialEq)]
pub struct AsymptoticDiagnostics {
    /// First and last period of the fit window.
    pub window: (usize, usize),
    /// `μ_t`, `ν_t` at the last period.
    pub mu: f64,
    pub nu: f64,
    /// `k_{t+1} ~ C_k σ^{−(t+1)/(1−α)}`.
    pub c_k: f64,
    /// `p_t ~ C_p σ^{−αt/(1−α)}`.
    pub c_p: f64,
    /// Fitted per-period factors `exp(slope of ln x_t)`.
    pub k_factor: f64,
    pub p_factor: f64,
    pub p_theta_factor: f64,
    pub d_theta_factor: f64,
    /// `σ^{−1/(1−α)}`.
    pub k_theory: f64,
    /// `σ^{−α/(1−α)}`, shared by `p` and `p^θ`.
    pub p_theory: f64,
    /// `σ^{(1−2α)/(1−α)}`.
    pub d_theta_theory: f64,
    /// First periods from which `k`, `p^θ`, `d^θ` are strictly decreasing
    /// through the end of the path.
    pub k_monotone_from: Option<usize>,
    pub p_theta_monotone_from: Option<usize>,
    pub d_theta_monotone_from: Option<usize>,
}

/// Least-squares slope of `ln y` against `t`.
fn log_slope(series: &'static str, ts: &[usize], ys: &[f64]) -> Result<f64> {
    let n = ts.len() as f64;
    let mut logs = Vec::with_capacity(ts.len());
    for (&t, &y) in ts.iter().zip(ys) {
        if !(y > 0.0) {
            return Err(Error::FitDomain { series, t });
        }
        logs.push(y.ln());
    }
    let t_mean = ts.iter().map(|&t| t as f64).sum::<f64>() / n;
    let y_mean = logs.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx) = (0.0, 0.0);
    for (&t, &ly) in ts.iter().zip(&logs) {
        let dt = t as f64 - t_mean;
        sxy += dt * (ly - y_mean);
        sxx += dt * dt;
    }
    Ok(sxy / sxx)
}

fn monotone_from(ts: &[usize], ys: &[f64]) -> Option<usize> {
    let n = ys.len();
    if n == 0 {
        return None;
    }
    let mut i = n - 1;
    while i > 0 && ys[i] < ys[i - 1] {
        i -= 1;
    }
    (i < n - 1).then(|| ts[i])
}

/// Fits geometric decay factors of `k, p, p^θ, d^θ` over a trailing window.
pub fn asymptotic_rates(
    path: &CounterexamplePath,
    window: FitWindow,
) -> Result<AsymptoticDiagnostics> {
    let n = path.records.len();
    let w = window.len(n);
    if w < 2 || n < 2 * w {
        return Err(Error::InvalidParameter(format!(
            "path of {n} periods is too short for a fit window of {w}"
        )));
    }
    let recs = &path.records[n - w..];
    let ts: Vec<usize> = recs.iter().map(|r| r.t).collect();
    let col = |f: fn(&super::CounterexampleRecord) -> f64| recs.iter().map(f).collect::<Vec<_>>();
    let ks = col(|r| r.k);
    let ps = col(|r| r.p);
    let pts = col(|r| r.p_theta);
    let dts = col(|r| r.d_theta.unwrap_or(f64::NAN));

    let prm = &path.params;
    let (alpha, sigma) = (prm.alpha, prm.sigma);
    let om = 1.0 - alpha;
    let t_last = ts[w - 1];
    let (mu, nu) = exponent_accumulators(alpha, t_last);
    let c_k = (prm.scale * alpha / prm.growth).powf(1.0 / om)
        * prm.c.powf(-1.0 / om)
        * sigma.powf(1.0 / (om * om));
    let c_p = prm.scale * alpha / prm.rho() * c_k.powf(alpha);

    let all_ts: Vec<usize> = path.records.iter().map(|r| r.t).collect();
    let all =
        |f: fn(&super::CounterexampleRecord) -> f64| path.records.iter().map(f).collect::<Vec<_>>();
    let d_all = all(|r| r.d_theta.unwrap_or(f64::NEG_INFINITY));

    Ok(AsymptoticDiagnostics {
        window: (ts[0], t_last),
        mu,
        nu,
        c_k,
        c_p,
        k_factor: log_slope("k", &ts, &ks)?.exp(),
        p_factor: log_slope("p", &ts, &ps)?.exp(),
        p_theta_factor: log_slope("p_theta", &ts, &pts)?.exp(),
        d_theta_factor: log_slope("d_theta", &ts, &dts)?.exp(),
        k_theory: sigma.powf(-1.0 / om),
        p_theory: sigma.powf(-alpha / om),
        d_theta_theory: prm.dividend_decay(),
        k_monotone_from: monotone_from(&all_ts, &all(|r| r.k)),
        p_theta_monotone_from: monotone_from(&all_ts, &all(|r| r.p_theta)),
        d_theta_monotone_from: monotone_from(&all_ts[1..], &d_all[1..]),
    })
}
