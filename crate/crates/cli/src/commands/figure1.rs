use std::thread;

use anyhow::Result;
use olg_bubbles::econ::ProductionTech;
use olg_bubbles::export::num;

use crate::config::RunConfig;
use crate::report::{out_dir, write_file, Report};
use crate::svg::{Chart, Series};

pub const POINTS: usize = 401;
pub const K_MAX: f64 = 2.0;

/// `f(k)` on `POINTS` evenly spaced points of `[0, K_MAX]`, with `f(0) = 0`.
pub fn tabulate(tech: &ProductionTech, jobs: usize) -> Result<Vec<(f64, f64)>> {
    let ks: Vec<f64> = (0..POINTS)
        .map(|i| K_MAX * i as f64 / (POINTS - 1) as f64)
        .collect();
    let eval =
        |k: f64| -> Result<(f64, f64)> { Ok((k, if k == 0.0 { 0.0 } else { tech.output(k)? })) };
    let chunk = POINTS.div_ceil(jobs.max(1));
    let parts: Vec<Result<Vec<(f64, f64)>>> = thread::scope(|s| {
        let handles: Vec<_> = ks
            .chunks(chunk)
            .map(|c| s.spawn(move || c.iter().map(|&k| eval(k)).collect()))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("figure worker panicked"))
            .collect()
    });
    let mut rows = Vec::with_capacity(POINTS);
    for part in parts {
        rows.extend(part?);
    }
    Ok(rows)
}

pub fn run(cfg: &RunConfig) -> Result<()> {
    let tech = cfg.tech()?;
    let rows = tabulate(&tech, cfg.jobs)?;
    let dir = out_dir(cfg)?;

    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["k", "f"])?;
    for &(k, f) in &rows {
        w.write_record([num(k), num(f)])?;
    }
    let csv_path = write_file(&dir, "figure1.csv", &w.into_inner()?)?;

    let name = if cfg.theta == 0.0 {
        format!("f(k) = {} k^{}", num(cfg.scale), num(cfg.alpha))
    } else {
        format!(
            "f(k) = {} k^{} + {} k ln(1 + 1/k)",
            num(cfg.scale),
            num(cfg.alpha),
            num(cfg.theta)
        )
    };
    let chart = Chart {
        title: name.clone(),
        x_label: "k".into(),
        y_label: "f(k)".into(),
        log_y: false,
        series: vec![Series::new("f", rows.clone())],
    };
    let svg_path = write_file(&dir, "figure1.svg", chart.render().as_bytes())?;

    let mut rep = Report::new();
    rep.section("figure1")
        .kv("technology", &name)
        .kv("points", rows.len())
        .num("f(1)", rows[(POINTS - 1) / 2].1)
        .num("f(2)", rows[POINTS - 1].1)
        .kv("csv", csv_path.display())
        .kv("svg", svg_path.display());
    print!("{}", rep.finish(cfg));
    Ok(())
}
