use std::fmt;

use super::CounterexampleParams;
use crate::econ::{DividendSpec, EconomyConfig};
use crate::error::{Error, Result};
use crate::steady;

#[derive(Debug, Clone, PartialEq)]
pub struct PremiseCheck {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

/// Itemized check of the construction's hypotheses.
#[derive(Debug, Clone, PartialEq)]
pub struct PremiseReport {
    /// Bubbleless steady state of the perturbed economy, if one exists.
    pub k_theta: Option<f64>,
    /// `R_θ = f_θ'(k_θ*)`.
    pub r_theta: Option<f64>,
    pub rho: f64,
    /// `σ^{(1−2α)/(1−α)}`.
    pub dividend_decay: f64,
    /// `G_d = G σ^{(1−2α)/(1−α)}`.
    pub gd: f64,
    pub checks: Vec<PremiseCheck>,
}

impl PremiseReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &PremiseCheck> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

impl fmt::Display for PremiseReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            let mark = if c.passed { "ok  " } else { "FAIL" };
            writeln!(f, "{mark} {}: {}", c.name, c.detail)?;
        }
        Ok(())
    }
}

/// Checks `θ > 0`, `R_θ < G`, `C ≥ 1 + ρ`, `σ > 1`,
/// `σ^{(1−2α)/(1−α)} ∈ (R_θ/G, 1)` and `G_d ∈ (R_θ, G)`.
///
/// `α ≤ 1/2` is rejected outright: dividends would not decay.
pub fn verify_counterexample_premises(params: &CounterexampleParams) -> Result<PremiseReport> {
    if !(params.alpha > 0.5 && params.alpha < 1.0) {
        return Err(Error::Domain {
            what: "alpha",
            requirement: "in (1/2, 1)",
            value: params.alpha,
        });
    }
    params.validate()?;
    let g = params.growth;
    let rho = params.rho();
    let decay = params.dividend_decay();
    let gd = g * decay;

    let cfg = EconomyConfig::log_utility(
        g,
        params.tech()?,
        params.beta,
        DividendSpec::Zero,
        params.k0,
    )?;
    let ss = steady::bubbleless_steady_states(&cfg)?;
    let k_theta = ss.first().map(|s| s.k);
    let r_theta = ss.first().map(|s| s.rate);

    let mut checks = Vec::new();
    let mut push = |name, passed, detail: String| {
        checks.push(PremiseCheck {
            name,
            passed,
            detail,
        })
    };
    push(
        "theta > 0",
        params.theta > 0.0,
        format!("theta = {}", params.theta),
    );
    match r_theta {
        Some(r) => push(
            "R_theta < G",
            r < g,
            format!(
                "k_theta* = {}, R_theta = {r}, G = {g}",
                k_theta.unwrap_or(f64::NAN)
            ),
        ),
        None => push("R_theta < G", false, "no bubbleless steady state".into()),
    }
    let floor = 1.0 + rho;
    push(
        "C >= 1 + rho",
        params.c >= floor * (1.0 - 4.0 * f64::EPSILON),
        format!("C = {}, 1 + rho = {floor}", params.c),
    );
    push(
        "sigma > 1",
        params.sigma > 1.0,
        format!("sigma = {}", params.sigma),
    );
    let r_over_g = r_theta.map_or(f64::NAN, |r| r / g);
    push(
        "sigma^((1-2a)/(1-a)) in (R_theta/G, 1)",
        decay > r_over_g && decay < 1.0,
        format!("{decay} vs R_theta/G = {r_over_g}"),
    );
    let r = r_theta.unwrap_or(f64::NAN);
    push(
        "Gd in (R_theta, G)",
        gd > r && gd < g,
        format!("Gd = {gd}, R_theta = {r}, G = {g}"),
    );

    Ok(PremiseReport {
        k_theta,
        r_theta,
        rho,
        dividend_decay: decay,
        gd,
        checks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn calibrated_premises_pass() {
        let rep = verify_counterexample_premises(&CounterexampleParams::default()).unwrap();
        assert!(rep.passed(), "{rep}");
        assert!((rep.r_theta.unwrap() - 0.9071).abs() < 5e-5);
        assert!((rep.k_theta.unwrap() - 1.0).abs() < 1e-12);
        assert!((rep.gd - 0.9901).abs() < 1e-4);
    }

    #[test]
    fn small_theta_fails_rate_premise() {
        let p = CounterexampleParams {
            theta: 0.1,
            ..Default::default()
        };
        let rep = verify_counterexample_premises(&p).unwrap();
        assert!(!rep.passed());
        let fail: Vec<_> = rep.failures().map(|c| c.name).collect();
        assert!(fail.contains(&"R_theta < G"), "{fail:?}");
        assert!(rep.r_theta.unwrap() > 1.0);
    }

    #[test]
    fn sigma_one_fails() {
        let p = CounterexampleParams {
            sigma: 1.0,
            ..Default::default()
        };
        let rep = verify_counterexample_premises(&p).unwrap();
        assert!(rep.failures().any(|c| c.name == "sigma > 1"));
    }

    #[test]
    fn low_alpha_rejected() {
        let p = CounterexampleParams {
            alpha: 0.4,
            ..Default::default()
        };
        assert!(matches!(
            verify_counterexample_premises(&p),
            Err(Error::Domain { what: "alpha", .. })
        ));
    }
}
