use thiserror::Error;

use crate::shooter::ShotClass;

/// Errors raised by the library.
///
/// Recoverable numerical outcomes (a capital step with no positive solution,
/// a trajectory that leaves the feasible region) are *not* errors; they are
/// reported through [`crate::econ::CapitalStep`] and
/// [`crate::dynamics::Termination`].
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{what} must be {requirement}, got {value}")]
    Domain {
        what: &'static str,
        requirement: &'static str,
        value: f64,
    },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("no root of {what} bracketed in [{lo}, {hi}]")]
    NoRoot {
        what: &'static str,
        lo: f64,
        hi: f64,
    },

    #[error("fundamental-value tail is not summable (discount ratio {ratio} >= 1)")]
    TailNotSummable { ratio: f64 },

    #[error("invalid x-sequence: {0}")]
    InvalidSpec(String),

    #[error("dividends never stay positive up to t = {scanned}")]
    T0NotFound { scanned: usize },

    #[error("cannot fit a log-rate: {series} is nonpositive at t = {t}")]
    FitDomain { series: &'static str, t: usize },

    #[error("economy has no bubbly steady state")]
    NoBubblySteadyState,

    #[error(
        "shooting bracket invalid: p0 = {lower_p0} gives {lower}, p0 = {upper_p0} gives {upper}"
    )]
    Bracket {
        lower_p0: f64,
        lower: ShotClass,
        upper_p0: f64,
        upper: ShotClass,
    },

    #[error("shot at p0 = {p0} still undecided at horizon {horizon}")]
    Inconclusive { p0: f64, horizon: usize },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn require_positive(what: &'static str, value: f64) -> Result<()> {
    if value > 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain {
            what,
            requirement: "positive and finite",
            value,
        })
    }
}
