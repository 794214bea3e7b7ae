use anyhow::Result;
use olg_bubbles::econ::DividendSpec;
use olg_bubbles::exact::{self, Rational64};
use olg_bubbles::steady::steady_state_report;

use crate::config::RunConfig;
use crate::report::{out_dir, write_file, Report};

const MAX_DENOMINATOR: i64 = 1000;

pub fn run(cfg: &RunConfig) -> Result<()> {
    let economy = cfg.economy()?.with_dividends(DividendSpec::Zero);
    let report = steady_state_report(&economy)?;

    let mut rep = Report::new();
    rep.section("technology")
        .kv(
            "kind",
            if cfg.theta == 0.0 {
                "Cobb-Douglas"
            } else {
                "perturbed"
            },
        )
        .num("A", cfg.scale)
        .num("alpha", cfg.alpha)
        .num("theta", cfg.theta)
        .num("beta", cfg.beta)
        .num("G", cfg.growth);
    rep.section("bubbleless");
    rep.kv("count", report.bubbleless.len());
    for (i, s) in report.bubbleless.iter().enumerate() {
        rep.num(&format!("k[{i}]"), s.k)
            .num(&format!("R[{i}]"), s.rate)
            .kv(
                &format!("R[{i}] vs G"),
                if s.rate < cfg.growth {
                    "below"
                } else {
                    "at or above"
                },
            );
    }
    rep.section("bubbly");
    match report.bubbly {
        Some(b) => {
            rep.num("k_star", b.k).num("p_star", b.p);
        }
        None => {
            rep.kv("bubbly", "none");
        }
    }
    rep.section("parameters").opt("rho", report.rho);

    let frac = |x: f64| exact::as_fraction(x, MAX_DENOMINATOR);
    if let (Some(alpha), Some(beta)) = (frac(cfg.alpha), frac(cfg.beta)) {
        rep.kv("rho_exact", exact::rho(alpha, beta))
            .kv("C_min_exact", exact::minimal_c(alpha, beta));
        if let (Some(g), Some(a)) = (frac(cfg.growth), frac(cfg.scale)) {
            rep.kv(
                "theta_for_unit_steady_state",
                exact::theta_for_unit_steady_state(g, a, alpha, beta),
            );
        }
    }
    let calibrated = frac(cfg.alpha) == Some(Rational64::new(2, 3))
        && frac(cfg.beta) == Some(Rational64::new(1, 2))
        && cfg.growth == 1.0;
    if calibrated {
        let value = match (frac(cfg.scale), frac(cfg.theta)) {
            (Some(a), Some(t)) => {
                let v = a / Rational64::from_integer(6) + t / Rational64::from_integer(4);
                format!("{v} (exact)")
            }
            _ => olg_bubbles::export::num(cfg.scale / 6.0 + cfg.theta / 4.0),
        };
        rep.kv("A/6 + theta/4", value);
    }

    let text = rep.finish(cfg);
    write_file(&out_dir(cfg)?, "steady_report.txt", text.as_bytes())?;
    print!("{text}");
    Ok(())
}
