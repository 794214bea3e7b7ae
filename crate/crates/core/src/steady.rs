//! Steady states and the local saddle structure around the bubbly steady
//! state.
//!
//! The bubbleless set `𝒦 = {k > 0 : k = g(k, 0)}` can hold several points
//! for general savings rules, so it is found by a log-spaced grid scan with
//! bisection on every sign change. The bubbly steady state `(k*, p*)` is
//! pinned by the golden rule `f'(k*) = G` and market clearing
//! `k* = g(k*, p*)`.
//!
//! Linearizing `ξ_{t+1} = φ(ξ_t)` with `ξ = (k, p, d)` at `(k*, p*, 0)`
//! gives a block upper-triangular Jacobian
//!
//! ```text
//!     | g_k               g_p                 0      |
//! J = | (f''/G) g_k p*    (f''/G) g_p p* + 1  −Gd/G  |
//!     | 0                 0                   Gd/G   |
//! ```
//!
//! whose upper block has characteristic polynomial
//! `q(λ) = λ² − (g_k + (f''/G) g_p p* + 1) λ + g_k`. Since `q(0) = g_k > 0`
//! and `q(1) = −(f''/G) g_p p* < 0`, one root lies in `(0, 1)` and one above
//! `1`: two stable directions for the two predetermined variables `(k, d)`
//! and one unstable direction for the jump variable `p`.

use std::fmt;

use crate::econ::{CapitalStep, EconomyConfig, SavingsRule, K_MAX};
use crate::error::{Error, Result};
use crate::root;

/// Left end of all steady-state brackets.
pub const K_FLOOR: f64 = 1e-10;
/// Initial right end for the golden-rule bracket; expanded up to `K_MAX`.
pub const K_BRACKET_HI: f64 = 1e6;
/// Grid size for the bubbleless scan.
pub const SCAN_POINTS: usize = 10_000;
/// `|q(1)|` below this is flagged as numerically sensitive.
pub const Q1_SENSITIVITY: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BubblelessState {
    pub k: f64,
    /// Bubbleless interest rate `f'(k)`.
    pub rate: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BubblyState {
    pub k: f64,
    pub p: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SteadyStateReport {
    pub bubbleless: Vec<BubblelessState>,
    pub bubbly: Option<BubblyState>,
    /// `R/G = α / (β(1−α))` of the Cobb-Douglas/log core; `None` for custom
    /// savings.
    pub rho: Option<f64>,
}

/// `ρ = α / (β (1 − α))`.
pub fn rho(alpha: f64, beta: f64) -> f64 {
    alpha / (beta * (1.0 - alpha))
}

fn bubbleless_gap(cfg: &EconomyConfig, k: f64) -> f64 {
    match cfg.solve_g(k, 0.0) {
        Ok(CapitalStep::Next(x)) => k - x,
        // no positive successor: capital collapses, so g(k, 0) < k
        _ => k,
    }
}

/// All `k ∈ [1e-10, 1e9]` with `k = g(k, 0)`, ascending.
///
/// Log utility with plain Cobb-Douglas uses the closed form
/// `k = (β A (1−α) / G)^{1/(1−α)}`.
pub fn bubbleless_steady_states(cfg: &EconomyConfig) -> Result<Vec<BubblelessState>> {
    cfg.validate()?;
    let tech = &cfg.tech;
    if let (
        SavingsRule::LogUtility { beta },
        crate::econ::ProductionTech::CobbDouglas { scale, alpha },
    ) = (&cfg.savings, tech)
    {
        let k = (beta * scale * (1.0 - alpha) / cfg.growth).powf(1.0 / (1.0 - alpha));
        return Ok(vec![BubblelessState {
            k,
            rate: tech.rate(k)?,
        }]);
    }
    let brackets = root::scan_sign_changes(|k| bubbleless_gap(cfg, k), K_FLOOR, K_MAX, SCAN_POINTS);
    let mut out = Vec::with_capacity(brackets.len());
    for (a, b) in brackets {
        let k = if a == b {
            a
        } else {
            root::bisect(|k| bubbleless_gap(cfg, k), a, b)?
        };
        out.push(BubblelessState {
            k,
            rate: tech.rate(k)?,
        });
    }
    Ok(out)
}

/// Golden-rule capital `k*` solving `f'(k*) = G`.
pub fn golden_rule_capital(cfg: &EconomyConfig) -> Result<f64> {
    let g = cfg.growth;
    let gap = |k: f64| cfg.tech.rate(k).map(|r| r - g).unwrap_or(f64::NAN);
    if !(gap(K_FLOOR) > 0.0) {
        return Err(Error::NoRoot {
            what: "f'(k) = G",
            lo: K_FLOOR,
            hi: K_BRACKET_HI,
        });
    }
    let mut hi = K_BRACKET_HI;
    while gap(hi) > 0.0 {
        if hi >= K_MAX {
            return Err(Error::NoRoot {
                what: "f'(k) = G",
                lo: K_FLOOR,
                hi,
            });
        }
        hi = (hi * 10.0).min(K_MAX);
    }
    root::bisect(gap, K_FLOOR, hi)
}

/// Bubbly steady state `(k*, p*)`, or `None` when `p* ≤ 0`.
///
/// Because `f'(k*) = G`, market clearing gives
/// `p* = s(w(k*), G) − G k*` for any savings rule.
pub fn bubbly_steady_state(cfg: &EconomyConfig) -> Result<Option<BubblyState>> {
    cfg.validate()?;
    let k = golden_rule_capital(cfg)?;
    let w = cfg.tech.wage(k)?;
    let r = cfg.tech.rate(k)?;
    let p = cfg.savings.eval_unchecked(w, r) - cfg.growth * k;
    Ok((p > 0.0).then_some(BubblyState { k, p }))
}

pub fn steady_state_report(cfg: &EconomyConfig) -> Result<SteadyStateReport> {
    let bubbleless = bubbleless_steady_states(cfg)?;
    let bubbly = match bubbly_steady_state(cfg) {
        Ok(b) => b,
        Err(Error::NoRoot { .. }) => None,
        Err(e) => return Err(e),
    };
    let rho = cfg.savings.beta().map(|beta| rho(cfg.tech.alpha(), beta));
    Ok(SteadyStateReport {
        bubbleless,
        bubbly,
        rho,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SaddleClass {
    /// Two stable eigenvalues, one unstable.
    Saddle,
    Other,
}

impl fmt::Display for SaddleClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SaddleClass::Saddle => f.write_str("saddle (2 stable, 1 unstable)"),
            SaddleClass::Other => f.write_str("other"),
        }
    }
}

/// Linearization at the bubbly steady state.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralReport {
    pub steady: BubblyState,
    pub dividend_growth: f64,
    pub g_k: f64,
    pub g_p: f64,
    pub fsecond: f64,
    pub jacobian: [[f64; 3]; 3],
    /// Roots of `q`, `lambda1 ≤ lambda2`.
    pub lambda1: f64,
    pub lambda2: f64,
    /// `Gd / G`.
    pub lambda3: f64,
    pub q0: f64,
    pub q1: f64,
    /// Real roots of the full 3×3 characteristic polynomial, ascending.
    pub char_roots: Vec<f64>,
    pub classification: SaddleClass,
    /// `|q(1)| < 1e-8`: the sign test is at the mercy of rounding.
    pub sensitive: bool,
}

impl SpectralReport {
    /// `q(λ) = λ² − (J00 + J11) λ + det(upper block)`.
    pub fn q(&self, lambda: f64) -> f64 {
        let j = &self.jacobian;
        let tr = j[0][0] + j[1][1];
        let det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
        lambda * lambda - tr * lambda + det
    }

    pub fn stable_count(&self) -> usize {
        [self.lambda1, self.lambda2, self.lambda3]
            .iter()
            .filter(|l| l.abs() < 1.0)
            .count()
    }
}

/// Partial derivatives `(g_k, g_p)` at `(k, p)`.
///
/// Log utility: `g_k = β(−k f''(k))/G`, `g_p = −1/G`. Custom savings:
/// central differences with steps `1e-7·max(1, k)` and `1e-7·max(1, p)`.
pub fn capital_map_partials(cfg: &EconomyConfig, k: f64, p: f64) -> Result<(f64, f64)> {
    if let Some(beta) = cfg.savings.beta() {
        let fsecond = cfg.tech.eval(k)?.fsecond;
        return Ok((beta * (-k * fsecond) / cfg.growth, -1.0 / cfg.growth));
    }
    let g = |k: f64, p: f64| -> Result<f64> {
        cfg.solve_g(k, p)?.value().ok_or(Error::NoRoot {
            what: "g(k, p) for a finite difference",
            lo: k,
            hi: p,
        })
    };
    let hk = 1e-7 * k.max(1.0);
    let hp = 1e-7 * p.max(1.0);
    let g_k = (g(k + hk, p)? - g(k - hk, p)?) / (2.0 * hk);
    let g_p = (g(k, p + hp)? - g(k, p - hp)?) / (2.0 * hp);
    Ok((g_k, g_p))
}

/// Builds `J` at `(k*, p*, 0)` and classifies its spectrum.
///
/// Requires geometric dividends (for `Gd`) and a bubbly steady state.
pub fn spectral_analysis(cfg: &EconomyConfig) -> Result<SpectralReport> {
    let gd = cfg.dividends.growth().ok_or_else(|| {
        Error::InvalidParameter("spectral analysis needs geometric dividends".into())
    })?;
    let steady = bubbly_steady_state(cfg)?.ok_or(Error::NoBubblySteadyState)?;
    let g = cfg.growth;
    let (g_k, g_p) = capital_map_partials(cfg, steady.k, steady.p)?;
    let fsecond = cfg.tech.eval(steady.k)?.fsecond;
    let lambda3 = gd / g;
    let j10 = fsecond / g * g_k * steady.p;
    let j11 = fsecond / g * g_p * steady.p + 1.0;
    let jacobian = [[g_k, g_p, 0.0], [j10, j11, -lambda3], [0.0, 0.0, lambda3]];

    // upper block: λ² − b λ + c, with c = g_k after cancellation
    let b = g_k + j11;
    let c = g_k * j11 - g_p * j10;
    let disc = b * b - 4.0 * c;
    let (lambda1, lambda2) = if disc >= 0.0 {
        let big = 0.5 * (b + b.signum() * disc.sqrt());
        let small = if big != 0.0 { c / big } else { 0.0 };
        if small <= big {
            (small, big)
        } else {
            (big, small)
        }
    } else {
        (f64::NAN, f64::NAN)
    };

    let q0 = c;
    let q1 = 1.0 - b + c;
    let char_roots = characteristic_roots(&jacobian);
    let classification = if q0 > 0.0
        && q1 < 0.0
        && 0.0 < lambda1
        && lambda1 < 1.0
        && lambda2 > 1.0
        && 0.0 < lambda3
        && lambda3 < 1.0
    {
        SaddleClass::Saddle
    } else {
        SaddleClass::Other
    };
    Ok(SpectralReport {
        steady,
        dividend_growth: gd,
        g_k,
        g_p,
        fsecond,
        jacobian,
        lambda1,
        lambda2,
        lambda3,
        q0,
        q1,
        char_roots,
        classification,
        sensitive: q1.abs() < Q1_SENSITIVITY,
    })
}

/// Real roots of `det(λI − J)` for a general 3×3 matrix.
pub fn characteristic_roots(j: &[[f64; 3]; 3]) -> Vec<f64> {
    let tr = j[0][0] + j[1][1] + j[2][2];
    let minors = j[0][0] * j[1][1] - j[0][1] * j[1][0] + j[0][0] * j[2][2] - j[0][2] * j[2][0]
        + j[1][1] * j[2][2]
        - j[1][2] * j[2][1];
    let det = j[0][0] * (j[1][1] * j[2][2] - j[1][2] * j[2][1])
        - j[0][1] * (j[1][0] * j[2][2] - j[1][2] * j[2][0])
        + j[0][2] * (j[1][0] * j[2][1] - j[1][1] * j[2][0]);
    root::cubic_real_roots(-tr, minors, -det)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::econ::{DividendSpec, ProductionTech, SavingsFunction};

    fn calibrated_cfg(dividends: DividendSpec) -> EconomyConfig {
        EconomyConfig::log_utility(
            1.0,
            ProductionTech::perturbed(0.25, 2.0 / 3.0, 23.0 / 6.0).unwrap(),
            0.5,
            dividends,
            1.0,
        )
        .unwrap()
    }

    fn cd_cfg() -> EconomyConfig {
        EconomyConfig::log_utility(
            1.0,
            ProductionTech::cobb_douglas(0.25, 2.0 / 3.0).unwrap(),
            0.5,
            DividendSpec::Zero,
            1.0,
        )
        .unwrap()
    }

    #[test]
    fn cobb_douglas_bubbleless_closed_form() {
        let ss = bubbleless_steady_states(&cd_cfg()).unwrap();
        assert_eq!(ss.len(), 1);
        assert!((ss[0].k - 1.0 / 13824.0).abs() < 1e-18);
        assert!((ss[0].rate - 4.0).abs() < 1e-12);
        let gap = bubbleless_gap(&cd_cfg(), ss[0].k);
        assert!(gap.abs() < 1e-10);
    }

    #[test]
    fn perturbed_bubbleless_at_unit_capital() {
        let ss = bubbleless_steady_states(&calibrated_cfg(DividendSpec::Zero)).unwrap();
        assert_eq!(ss.len(), 1);
        assert!((ss[0].k - 1.0).abs() < 1e-12);
        assert!((ss[0].rate - 0.9071).abs() < 5e-5);
        assert!(bubbleless_gap(&calibrated_cfg(DividendSpec::Zero), ss[0].k).abs() < 1e-10);
    }

    #[test]
    fn large_theta_asymptotics() {
        let cfg = EconomyConfig::log_utility(
            1.0,
            ProductionTech::perturbed(0.25, 2.0 / 3.0, 1e6).unwrap(),
            0.5,
            DividendSpec::Zero,
            1.0,
        )
        .unwrap();
        let ss = bubbleless_steady_states(&cfg).unwrap();
        assert_eq!(ss.len(), 1);
        let approx = 0.5 * 1e6;
        assert!((ss[0].k / approx - 1.0).abs() < 0.01, "k = {}", ss[0].k);
        assert!(bubbleless_gap(&cfg, ss[0].k).abs() <= 1e-10 * ss[0].k);
    }

    #[test]
    fn cobb_douglas_has_no_bubbly_state() {
        // k* = (Aα/G)^{1/(1−α)} = (1/6)³ and p* = β A(1−α) k*^α − k* < 0
        let k_star = (1.0f64 / 6.0).powi(3);
        assert!((golden_rule_capital(&cd_cfg()).unwrap() - k_star).abs() < 1e-15);
        let p_star = 0.5 * 0.25 / 3.0 * k_star.powf(2.0 / 3.0) - k_star;
        assert!(p_star < 0.0);
        assert_eq!(bubbly_steady_state(&cd_cfg()).unwrap(), None);
    }

    #[test]
    fn perturbed_bubbly_state() {
        let cfg = calibrated_cfg(DividendSpec::Zero);
        let b = bubbly_steady_state(&cfg).unwrap().unwrap();
        assert!(b.k > 0.0 && b.k < 1.0);
        assert!(b.p > 0.0);
        assert!((cfg.tech.rate(b.k).unwrap() - 1.0).abs() < 1e-10);
        let next = cfg.solve_g(b.k, b.p).unwrap().value().unwrap();
        assert!((next - b.k).abs() < 1e-10);
        // independent route: p* from the technology formulas directly
        let (a, al, th) = (0.25, 2.0 / 3.0, 23.0 / 6.0);
        let p_direct = 0.5 * (a * (1.0 - al) * b.k.powf(al) + th * b.k / (1.0 + b.k)) - b.k;
        assert!((p_direct - b.p).abs() < 1e-14);
    }

    #[test]
    fn golden_rule_unbracketable() {
        let cfg = EconomyConfig::log_utility(
            1e6,
            ProductionTech::cobb_douglas(0.25, 0.5).unwrap(),
            0.5,
            DividendSpec::Zero,
            1.0,
        )
        .unwrap();
        // f'(1e-10) = 0.125·1e5 < 1e6
        assert!(matches!(
            bubbly_steady_state(&cfg),
            Err(Error::NoRoot { .. })
        ));
        let report = steady_state_report(&cfg).unwrap();
        assert!(report.bubbly.is_none());
    }

    #[test]
    fn saddle_at_calibrated_technology() {
        let rep = spectral_analysis(&calibrated_cfg(DividendSpec::geometric(1e-6, 0.95))).unwrap();
        assert_eq!(rep.lambda3, 0.95);
        assert!(rep.q0 > 0.0 && rep.q1 < 0.0);
        assert!(0.0 < rep.lambda1 && rep.lambda1 < 1.0 && rep.lambda2 > 1.0);
        assert_eq!(rep.classification, SaddleClass::Saddle);
        assert_eq!(rep.stable_count(), 2);
        assert!(!rep.sensitive);
        assert!((rep.lambda1 * rep.lambda2 - rep.g_k).abs() < 1e-10);
        // sign pattern
        let j = rep.jacobian;
        assert!(j[0][0] > 0.0 && j[0][1] < 0.0 && j[1][0] < 0.0);
        assert_eq!(j[2][2], 0.95);
        assert!(rep.q(rep.lambda1).abs() < 1e-12 && rep.q(rep.lambda2).abs() < 1e-12);
        // full characteristic roots
        assert_eq!(rep.char_roots.len(), 3);
        let mut block = vec![rep.lambda1, rep.lambda2, rep.lambda3];
        block.sort_by(f64::total_cmp);
        for (a, b) in rep.char_roots.iter().zip(&block) {
            assert!((a - b).abs() < 1e-8);
        }
    }

    #[test]
    fn lambda3_is_dividend_ratio() {
        let rep = spectral_analysis(&calibrated_cfg(DividendSpec::geometric(1e-6, 0.5))).unwrap();
        assert_eq!(rep.lambda3, 0.5);
    }

    #[test]
    fn spectral_needs_geometric_dividends() {
        assert!(matches!(
            spectral_analysis(&calibrated_cfg(DividendSpec::Zero)),
            Err(Error::InvalidParameter(_))
        ));
    }

    #[derive(Debug)]
    struct Crra;

    impl SavingsFunction for Crra {
        fn savings(&self, wage: f64, rate: f64) -> f64 {
            // unit discount factor, risk aversion 0.6
            let ratio = rate.powf(1.0 - 1.0 / 0.6);
            wage / (1.0 + ratio)
        }
    }

    #[test]
    fn custom_savings_steady_states_and_saddle() {
        let cfg = EconomyConfig::new(
            1.0,
            ProductionTech::perturbed(0.25, 2.0 / 3.0, 23.0 / 6.0).unwrap(),
            crate::econ::SavingsRule::custom(Crra),
            DividendSpec::geometric(1e-6, 0.95),
            1.0,
        )
        .unwrap();
        let report = steady_state_report(&cfg).unwrap();
        assert!(!report.bubbleless.is_empty());
        for s in &report.bubbleless {
            let next = cfg.solve_g(s.k, 0.0).unwrap().value().unwrap();
            assert!((next - s.k).abs() < 1e-10);
        }
        let b = report.bubbly.expect("bubbly steady state");
        let next = cfg.solve_g(b.k, b.p).unwrap().value().unwrap();
        assert!((next - b.k).abs() < 1e-10);
        let rep = spectral_analysis(&cfg).unwrap();
        assert_eq!(rep.classification, SaddleClass::Saddle);
        // implicit-function partials as an independent check of the differences
        let e = cfg.tech.eval(b.k).unwrap();
        let (sw, sr) = cfg.savings.partials(cfg.tech.wage(b.k).unwrap(), 1.0);
        let phi_x = 1.0 - sr * e.fsecond;
        assert!((rep.g_k - (-sw * b.k * e.fsecond / phi_x)).abs() < 1e-5);
        assert!((rep.g_p - (-1.0 / phi_x)).abs() < 1e-5);
    }
}
