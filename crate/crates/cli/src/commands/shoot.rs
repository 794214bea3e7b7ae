use anyhow::{Context, Result};
use olg_bubbles::dynamics::{
    attach_fundamental_value, check_feasibility_bound, verify_equilibrium,
};
use olg_bubbles::econ::DividendSpec;
use olg_bubbles::export::{num, opt};
use olg_bubbles::shooter::{
    classify_longrun, monotone_in_k0, probe_omega, shoot, OmegaGrid, OmegaProbe, ShootOptions,
};
use olg_bubbles::steady::{bubbly_steady_state, spectral_analysis, steady_state_report};
use olg_bubbles::Error;

use super::stability::spectral_section;
use crate::config::RunConfig;
use crate::report::{create_file, out_dir, write_file, Report};
use crate::svg::{Chart, Series};

pub fn options(cfg: &RunConfig) -> ShootOptions {
    ShootOptions {
        horizon: cfg.horizon.unwrap_or(ShootOptions::default().horizon),
        tol_p0_rel: cfg.tol_p0,
        tol_bubbly_rel: cfg.tol_bubbly,
        anchor_every: cfg.anchor_every,
        ..ShootOptions::default()
    }
}

pub fn run(cfg: &RunConfig) -> Result<()> {
    let base = cfg.economy()?;
    let steady = bubbly_steady_state(&base.with_dividends(DividendSpec::Zero))?
        .ok_or(Error::NoBubblySteadyState)?;
    let economy = base.with_k0(cfg.k0.unwrap_or(steady.k));
    let opts = options(cfg);
    let mut res = shoot(&economy, &opts)
        .context("no equilibrium path converging to the bubbly steady state was bracketed")?;

    let value = attach_fundamental_value(
        &mut res.trajectory,
        economy.dividends.tail_ratio(economy.growth),
    );
    let residuals = verify_equilibrium(&economy, &res.trajectory)?;
    let feasibility = check_feasibility_bound(&res.trajectory);
    let longrun = classify_longrun(
        &res.trajectory,
        &steady_state_report(&economy)?,
        cfg.tol_bubbly,
    );
    let spectral = spectral_analysis(&economy)?;

    let dir = out_dir(cfg)?;
    let (csv_path, file) = create_file(&dir, "shoot.csv")?;
    res.trajectory.write_csv(file)?;

    let ts = |f: fn(&olg_bubbles::dynamics::TrajectoryRecord) -> f64| {
        res.trajectory
            .records
            .iter()
            .map(|r| (r.t as f64, f(r)))
            .collect::<Vec<_>>()
    };
    let chart = Chart {
        title: format!(
            "Saddle path from k0 = {}, D0 = {}",
            num(economy.k0),
            num(cfg.d0)
        ),
        x_label: "t".into(),
        y_label: "level".into(),
        log_y: false,
        series: vec![Series::new("k", ts(|r| r.k)), Series::new("p", ts(|r| r.p))],
    };
    let svg_path = write_file(&dir, "shoot.svg", chart.render().as_bytes())?;

    let mut rep = Report::new();
    rep.section("shoot")
        .num("k0", economy.k0)
        .num("D0", cfg.d0)
        .num("Gd", cfg.gd)
        .num("k_star", res.steady.k)
        .num("p_star", res.steady.p)
        .num("p0_star", res.p0)
        .num("bracket_lo", res.bracket.lo.p0)
        .kv("bracket_lo_class", res.bracket.lo.class)
        .num("bracket_hi", res.bracket.hi.p0)
        .kv("bracket_hi_class", res.bracket.hi.class)
        .num("bracket_width", res.bracket.hi.p0 - res.bracket.lo.p0)
        .num("tol_p0", res.tol_p0)
        .kv("bisection_iterations", res.bracket.iterations)
        .kv("horizon", res.trajectory.last().t)
        .kv("classification", res.class)
        .num("final_distance", res.final_distance)
        .kv("long_run", longrun)
        .kv("reanchors", res.reanchors)
        .num("max_seam_jump", res.max_seam_jump);
    rep.section("checks")
        .num("max_capital_residual", residuals.max_capital)
        .kv("worst_capital_t", residuals.worst_capital_t)
        .num("max_price_residual", residuals.max_price)
        .kv("worst_price_t", residuals.worst_price_t)
        .kv(
            "feasibility",
            if feasibility.passed() {
                format!("passed ({} periods)", feasibility.checked)
            } else {
                format!("FAILED ({} violations)", feasibility.violations.len())
            },
        );
    match &value {
        Ok(fv) => {
            let b_end = res.trajectory.last().b.unwrap_or(f64::NAN);
            rep.num("bubble_at_horizon", b_end).num(
                "max_truncation_bound",
                fv.tail_bound.iter().copied().fold(0.0, f64::max),
            );
        }
        Err(e) => {
            rep.kv("fundamental_value", format!("not computed: {e}"));
        }
    }
    spectral_section(&mut rep, &spectral);

    if let Some((nk, nd)) = cfg.omega_grid {
        let grid = OmegaGrid::around(steady.k, steady.p, nk, nd);
        let probes = probe_omega(&base, &grid, &opts, cfg.jobs)?;
        let omega_path = write_omega(&dir, &probes)?;
        rep.section("omega")
            .kv("grid", format!("{nk}x{nd}"))
            .kv("points", probes.len())
            .kv("in_omega", probes.iter().filter(|p| p.in_omega).count())
            .kv("csv", omega_path.display());
        for row in probes.chunks(nk) {
            let m = monotone_in_k0(row);
            rep.kv(
                &format!("D0 {}", num(m.d0)),
                format!(
                    "members {}/{}, upward_closed {}, p0_increasing {}",
                    m.members,
                    row.len(),
                    m.upward_closed,
                    m.p0_increasing
                ),
            );
        }
    }
    rep.section("files")
        .kv("csv", csv_path.display())
        .kv("svg", svg_path.display());
    let text = rep.finish(cfg);
    write_file(&dir, "shoot_report.txt", text.as_bytes())?;
    print!("{text}");
    Ok(())
}

fn write_omega(dir: &std::path::Path, probes: &[OmegaProbe]) -> Result<std::path::PathBuf> {
    let (path, file) = create_file(dir, "omega.csv")?;
    let mut w = csv::Writer::from_writer(file);
    w.write_record(["k0", "D0", "in_omega", "p0_star", "final_dist", "horizon"])?;
    for p in probes {
        w.write_record([
            num(p.k0),
            num(p.d0),
            p.in_omega.to_string(),
            opt(p.p0_star),
            opt(p.final_dist),
            p.horizon.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(path)
}
