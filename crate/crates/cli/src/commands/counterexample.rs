use anyhow::Result;
use olg_bubbles::counterexample::{
    asymptotic_rates, construct, verify_counterexample_premises, CounterexampleParams, FitWindow,
    DEFAULT_HORIZON,
};
use olg_bubbles::dynamics::{
    attach_fundamental_value, check_feasibility_bound, reproduce_backward,
};
use olg_bubbles::shooter::classify_longrun;
use olg_bubbles::steady::steady_state_report;

use crate::config::RunConfig;
use crate::report::{create_file, out_dir, write_file, Report};
use crate::svg::{Chart, Series};
use crate::UsageError;

pub fn params(cfg: &RunConfig) -> CounterexampleParams {
    CounterexampleParams {
        growth: cfg.growth,
        scale: cfg.scale,
        alpha: cfg.alpha,
        beta: cfg.beta,
        theta: cfg.theta,
        c: cfg.c,
        sigma: cfg.sigma,
        k0: cfg.k0.unwrap_or(0.01),
    }
}

pub fn run(cfg: &RunConfig) -> Result<()> {
    let params = params(cfg);
    let premises = verify_counterexample_premises(&params)?;
    if !premises.passed() {
        eprint!("{premises}");
        let failed: Vec<&str> = premises.failures().map(|c| c.name).collect();
        return Err(UsageError(format!("premises fail: {}", failed.join("; "))).into());
    }
    let horizon = cfg.horizon.unwrap_or(DEFAULT_HORIZON);
    let path = construct(&params, horizon)?;
    let diag = asymptotic_rates(&path, FitWindow::TrailingQuarter)?;
    let economy = path.economy()?;
    let mut traj = path.to_trajectory()?;
    let fv = attach_fundamental_value(&mut traj, params.dividend_decay())?;
    let backward = reproduce_backward(&economy, &traj)?;
    let feasibility = check_feasibility_bound(&traj);
    let longrun = classify_longrun(&traj, &steady_state_report(&economy)?, cfg.tol_bubbly);

    let (worst_t, worst_b) = traj
        .records
        .iter()
        .map(|r| (r.t, r.b.unwrap_or(0.0).abs()))
        .fold((0, 0.0), |acc, x| if x.1 > acc.1 { x } else { acc });
    let max_bound = fv.tail_bound.iter().copied().fold(0.0, f64::max);

    let dir = out_dir(cfg)?;
    let (csv_path, file) = create_file(&dir, "counterexample.csv")?;
    path.write_csv(file, Some(&traj))?;

    let col = |f: fn(&olg_bubbles::counterexample::CounterexampleRecord) -> Option<f64>| {
        path.records
            .iter()
            .filter_map(|r| f(r).map(|y| (r.t as f64, y)))
            .collect::<Vec<_>>()
    };
    let chart = Chart {
        title: "Bubbleless equilibrium with exploding interest rates".into(),
        x_label: "t".into(),
        y_label: "level (log scale)".into(),
        log_y: true,
        series: vec![
            Series::new("k", col(|r| Some(r.k))),
            Series::new("p_theta", col(|r| Some(r.p_theta))),
            Series::new("d_theta", col(|r| r.d_theta)),
        ],
    };
    let svg_path = write_file(&dir, "counterexample.svg", chart.render().as_bytes())?;

    let t0 = path.t0.unwrap_or(0);
    let mut rep = Report::new();
    rep.section("premises").raw(&premises.to_string());
    rep.section("steady state")
        .opt("k_theta", premises.k_theta)
        .opt("R_theta", premises.r_theta)
        .num("rho", premises.rho)
        .num("dividend_decay", premises.dividend_decay)
        .num("Gd", premises.gd)
        .num("G", params.growth);
    rep.section("path")
        .kv("horizon", horizon)
        .kv("t0", t0)
        .num("k_t0", path.records[t0].k)
        .num("max_capital_residual", path.max_capital_residual)
        .num("backward_reproduction_capital", backward.max_capital)
        .num("backward_reproduction_price", backward.max_price)
        .kv(
            "feasibility",
            if feasibility.passed() {
                format!("passed ({} periods)", feasibility.checked)
            } else {
                format!("FAILED ({} violations)", feasibility.violations.len())
            },
        );
    let pair = |fit: f64, theory: f64| {
        format!(
            "{} (theory {}, gap {})",
            olg_bubbles::export::num(fit),
            olg_bubbles::export::num(theory),
            olg_bubbles::export::num((fit - theory).abs())
        )
    };
    rep.section("asymptotics")
        .kv("window", format!("{}..={}", diag.window.0, diag.window.1))
        .kv("k_factor", pair(diag.k_factor, diag.k_theory))
        .kv("p_factor", pair(diag.p_factor, diag.p_theory))
        .kv("p_theta_factor", pair(diag.p_theta_factor, diag.p_theory))
        .kv(
            "d_theta_factor",
            pair(diag.d_theta_factor, diag.d_theta_theory),
        )
        .kv("k_decreasing_from", fmt_from(diag.k_monotone_from))
        .kv(
            "p_theta_decreasing_from",
            fmt_from(diag.p_theta_monotone_from),
        )
        .kv(
            "d_theta_decreasing_from",
            fmt_from(diag.d_theta_monotone_from),
        );
    rep.section("fundamental value")
        .num("max_abs_bubble", worst_b)
        .kv("max_abs_bubble_t", worst_t)
        .num("max_truncation_bound", max_bound)
        .kv("long_run", longrun);
    rep.section("files")
        .kv("csv", csv_path.display())
        .kv("svg", svg_path.display());
    let text = rep.finish(cfg);
    write_file(&dir, "counterexample_report.txt", text.as_bytes())?;
    print!("{text}");
    Ok(())
}

fn fmt_from(t: Option<usize>) -> String {
    t.map_or_else(|| "never".into(), |t| t.to_string())
}
