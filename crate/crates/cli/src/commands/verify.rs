use std::path::Path;

use anyhow::{Context, Result};
use olg_bubbles::dynamics::{check_feasibility_bound, verify_equilibrium, Trajectory};
use olg_bubbles::econ::DividendSpec;
use olg_bubbles::export::num;

use crate::config::RunConfig;
use crate::report::Report;
use crate::{CheckFailure, UsageError};

/// Residual tolerance for a path to pass.
pub const TOL: f64 = 1e-9;

struct Columns {
    t: Vec<usize>,
    k: Vec<f64>,
    p: Vec<f64>,
    d: Vec<f64>,
    /// Counterexample file: `p_theta, d_theta` were used.
    perturbed: bool,
}

fn field(s: &str, name: &str, row: usize) -> Result<f64> {
    if s.trim().is_empty() {
        return Ok(0.0);
    }
    s.trim()
        .parse()
        .map_err(|_| UsageError(format!("row {row}: {name} = {s:?} is not a number")).into())
}

fn read(path: &Path) -> Result<Columns> {
    let mut r =
        csv::Reader::from_path(path).with_context(|| format!("opening {}", path.display()))?;
    let headers = r.headers()?.clone();
    let find = |name: &str| headers.iter().position(|h| h.trim() == name);
    let perturbed = find("p_theta").is_some() && find("d_theta").is_some();
    let (pn, dn) = if perturbed {
        ("p_theta", "d_theta")
    } else {
        ("p", "d")
    };
    let need = |name: &str| {
        find(name).ok_or_else(|| UsageError(format!("{} has no {name} column", path.display())))
    };
    let (ti, ki, pi, di) = (need("t")?, need("k")?, need(pn)?, need(dn)?);
    let mut cols = Columns {
        t: Vec::new(),
        k: Vec::new(),
        p: Vec::new(),
        d: Vec::new(),
        perturbed,
    };
    for (i, rec) in r.records().enumerate() {
        let rec = rec.map_err(|e| UsageError(format!("{}: {e}", path.display())))?;
        let row = i + 2;
        let t = rec[ti]
            .trim()
            .parse()
            .map_err(|_| UsageError(format!("row {row}: t = {:?} is not a period", &rec[ti])))?;
        cols.t.push(t);
        cols.k.push(field(&rec[ki], "k", row)?);
        cols.p.push(field(&rec[pi], pn, row)?);
        cols.d.push(field(&rec[di], dn, row)?);
    }
    if cols.t.len() < 2 {
        return Err(UsageError(format!("{} needs at least two rows", path.display())).into());
    }
    Ok(cols)
}

/// First row of the final run of positive dividends.
fn final_positive_run(d: &[f64]) -> usize {
    let mut i = d.len();
    while i > 0 && d[i - 1] > 0.0 {
        i -= 1;
    }
    i.min(d.len() - 1)
}

pub fn run(cfg: &RunConfig, input: &Path) -> Result<()> {
    let cols = read(input)?;
    let from = if cols.perturbed {
        final_positive_run(&cols.d)
    } else {
        0
    };
    let economy = cfg.economy()?.with_dividends(DividendSpec::Zero);
    let traj = Trajectory::from_columns(
        &economy,
        &cols.t[from..],
        &cols.k[from..],
        &cols.p[from..],
        &cols.d[from..],
    )?;
    let residuals = verify_equilibrium(&economy, &traj)?;
    let feasibility = check_feasibility_bound(&traj);

    let mut rep = Report::new();
    rep.section("verify-path")
        .kv("input", input.display())
        .kv(
            "columns",
            if cols.perturbed {
                "t,k,p_theta,d_theta"
            } else {
                "t,k,p,d"
            },
        )
        .kv(
            "periods",
            format!("{}..={}", traj.records[0].t, traj.last().t),
        )
        .num("max_capital_residual", residuals.max_capital)
        .kv("worst_capital_t", residuals.worst_capital_t)
        .num("max_price_residual", residuals.max_price)
        .kv("worst_price_t", residuals.worst_price_t)
        .num("tolerance", TOL);
    match feasibility.first() {
        None => rep.kv(
            "feasibility",
            format!("passed ({} periods)", feasibility.checked),
        ),
        Some(v) => rep.kv(
            "feasibility",
            format!(
                "FAILED at t = {} ({:?}: {} > {})",
                v.t,
                v.kind,
                num(v.lhs),
                num(v.output)
            ),
        ),
    };
    let ok = residuals.max() <= TOL && feasibility.passed();
    rep.kv("verdict", if ok { "pass" } else { "FAIL" });
    print!("{}", rep.finish(cfg));
    if ok {
        Ok(())
    } else {
        Err(CheckFailure(format!(
            "path fails verification (residual {}, feasibility {})",
            num(residuals.max()),
            if feasibility.passed() {
                "passed"
            } else {
                "failed"
            }
        ))
        .into())
    }
}
