//! Run configuration: defaults, a flat `key = value` file, command-line
//! overrides, and a canonical rendering that parses back to the same values.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use olg_bubbles::econ::{DividendSpec, EconomyConfig, ProductionTech, SavingsRule};
use olg_bubbles::export::num;

use crate::UsageError;

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub scale: f64,
    pub alpha: f64,
    pub beta: f64,
    pub theta: f64,
    pub growth: f64,
    pub gd: f64,
    pub d0: f64,
    /// Unset: 0.01 for the counterexample, `k*` for shooting.
    pub k0: Option<f64>,
    pub c: f64,
    pub sigma: f64,
    pub horizon: Option<usize>,
    pub jobs: usize,
    pub omega_grid: Option<(usize, usize)>,
    pub tol_p0: f64,
    pub tol_bubbly: f64,
    pub anchor_every: usize,
    pub out: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            scale: 0.25,
            alpha: 2.0 / 3.0,
            beta: 0.5,
            theta: 23.0 / 6.0,
            growth: 1.0,
            gd: 0.95,
            d0: 1e-6,
            k0: None,
            c: 5.0,
            sigma: 1.01,
            horizon: None,
            jobs: 1,
            omega_grid: None,
            tol_p0: 1e-14,
            tol_bubbly: 1e-6,
            anchor_every: 50,
            out: None,
        }
    }
}

pub const KEYS: &[&str] = &[
    "A",
    "alpha",
    "beta",
    "theta",
    "G",
    "Gd",
    "D0",
    "k0",
    "C",
    "sigma",
    "horizon",
    "jobs",
    "omega_grid",
    "tol_p0",
    "tol_bubbly",
    "anchor_every",
    "out",
];

/// Parses a decimal number or a fraction `a/b`.
pub fn parse_number(s: &str) -> std::result::Result<f64, String> {
    let s = s.trim();
    let value = match s.split_once('/') {
        Some((a, b)) => {
            let a: f64 = a
                .trim()
                .parse()
                .map_err(|_| format!("not a number: {s:?}"))?;
            let b: f64 = b
                .trim()
                .parse()
                .map_err(|_| format!("not a number: {s:?}"))?;
            a / b
        }
        None => s.parse().map_err(|_| format!("not a number: {s:?}"))?,
    };
    if value.is_finite() {
        Ok(value)
    } else {
        Err(format!("not a finite number: {s:?}"))
    }
}

/// Parses `NKxND`, e.g. `20x20`.
pub fn parse_grid(s: &str) -> std::result::Result<(usize, usize), String> {
    let bad = || format!("grid must look like 20x20, got {s:?}");
    let (a, b) = s.trim().split_once(['x', 'X']).ok_or_else(bad)?;
    let nk = a.trim().parse().map_err(|_| bad())?;
    let nd = b.trim().parse().map_err(|_| bad())?;
    Ok((nk, nd))
}

fn parse_count(s: &str) -> std::result::Result<usize, String> {
    s.trim()
        .parse()
        .map_err(|_| format!("not a nonnegative integer: {s:?}"))
}

impl RunConfig {
    /// Sets one key from its textual value.
    pub fn set(&mut self, key: &str, value: &str) -> std::result::Result<(), String> {
        match key {
            "A" => self.scale = parse_number(value)?,
            "alpha" => self.alpha = parse_number(value)?,
            "beta" => self.beta = parse_number(value)?,
            "theta" => self.theta = parse_number(value)?,
            "G" => self.growth = parse_number(value)?,
            "Gd" => self.gd = parse_number(value)?,
            "D0" => self.d0 = parse_number(value)?,
            "k0" => self.k0 = Some(parse_number(value)?),
            "C" => self.c = parse_number(value)?,
            "sigma" => self.sigma = parse_number(value)?,
            "horizon" => self.horizon = Some(parse_count(value)?),
            "jobs" => self.jobs = parse_count(value)?,
            "omega_grid" => self.omega_grid = Some(parse_grid(value)?),
            "tol_p0" => self.tol_p0 = parse_number(value)?,
            "tol_bubbly" => self.tol_bubbly = parse_number(value)?,
            "anchor_every" => self.anchor_every = parse_count(value)?,
            "out" => self.out = Some(PathBuf::from(value.trim())),
            _ => return Err(format!("unknown key {key:?} (known: {})", KEYS.join(", "))),
        }
        Ok(())
    }

    /// Applies `key = value` lines on top of `self`. Blank lines and `#`
    /// comments are skipped.
    pub fn merge_str(&mut self, text: &str) -> Result<()> {
        for (i, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(UsageError(format!(
                    "line {}: expected key = value, got {line:?}",
                    i + 1
                ))
                .into());
            };
            self.set(key.trim(), value)
                .map_err(|e| UsageError(format!("line {}: {e}", i + 1)))?;
        }
        Ok(())
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        let mut cfg = RunConfig::default();
        cfg.merge_str(&text)
            .with_context(|| format!("in config {}", path.display()))?;
        Ok(cfg)
    }

    /// Canonical `key = value` text; numbers use the shortest exact
    /// decimal, so parsing it back gives an identical configuration.
    pub fn render(&self) -> String {
        let mut s = String::from("# resolved config\n");
        let mut line = |k: &str, v: String| writeln!(s, "{k} = {v}").unwrap();
        line("A", num(self.scale));
        line("alpha", num(self.alpha));
        line("beta", num(self.beta));
        line("theta", num(self.theta));
        line("G", num(self.growth));
        line("Gd", num(self.gd));
        line("D0", num(self.d0));
        if let Some(k0) = self.k0 {
            line("k0", num(k0));
        }
        line("C", num(self.c));
        line("sigma", num(self.sigma));
        if let Some(h) = self.horizon {
            line("horizon", h.to_string());
        }
        line("jobs", self.jobs.to_string());
        if let Some((nk, nd)) = self.omega_grid {
            line("omega_grid", format!("{nk}x{nd}"));
        }
        line("tol_p0", num(self.tol_p0));
        line("tol_bubbly", num(self.tol_bubbly));
        line("anchor_every", self.anchor_every.to_string());
        if let Some(out) = &self.out {
            line("out", out.display().to_string());
        }
        s
    }

    /// `θ = 0` is plain Cobb-Douglas.
    pub fn tech(&self) -> Result<ProductionTech> {
        let tech = if self.theta == 0.0 {
            ProductionTech::cobb_douglas(self.scale, self.alpha)
        } else {
            ProductionTech::perturbed(self.scale, self.alpha, self.theta)
        };
        tech.map_err(|e| UsageError(e.to_string()).into())
    }

    /// Log-utility economy with geometric dividends `D0·Gd^t` started at
    /// `k0` (1 when unset).
    pub fn economy(&self) -> Result<EconomyConfig> {
        EconomyConfig::log_utility(
            self.growth,
            self.tech()?,
            self.beta,
            DividendSpec::geometric(self.d0, self.gd),
            self.k0.unwrap_or(1.0),
        )
        .map_err(|e| UsageError(e.to_string()).into())
    }

    /// Checks every value against the invariants of the types it feeds.
    pub fn validate(&self) -> Result<()> {
        self.economy()?;
        SavingsRule::log_utility(self.beta).map_err(|e| UsageError(e.to_string()))?;
        let positive = [
            ("C", self.c),
            ("sigma", self.sigma),
            ("tol_p0", self.tol_p0),
            ("tol_bubbly", self.tol_bubbly),
        ];
        for (name, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                bail!(UsageError(format!(
                    "{name} must be positive and finite, got {v}"
                )));
            }
        }
        if let Some(k0) = self.k0 {
            if !(k0 > 0.0 && k0.is_finite()) {
                bail!(UsageError(format!(
                    "k0 must be positive and finite, got {k0}"
                )));
            }
        }
        if self.horizon == Some(0) {
            bail!(UsageError("horizon must be at least 1".into()));
        }
        if self.jobs == 0 {
            bail!(UsageError("jobs must be at least 1".into()));
        }
        if self.anchor_every == 0 {
            bail!(UsageError("anchor_every must be at least 1".into()));
        }
        if let Some((nk, nd)) = self.omega_grid {
            if nk == 0 || nd == 0 {
                bail!(UsageError(format!("omega grid {nk}x{nd} is empty")));
            }
        }
        Ok(())
    }
}
