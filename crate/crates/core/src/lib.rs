//! Overlapping-generations economy with capital and a dividend-paying
//! asset.
//!
//! Young agents save out of wages; savings finance next period's capital
//! and the asset. All quantities are detrended by population growth `G`.
//! The crate covers
//!
//! - the primitives and the implicit capital map `k_{t+1} = g(k_t, p_t)`
//!   ([`econ`]),
//! - forward iteration, fundamental values and path checks ([`dynamics`]),
//! - a constructed bubbleless equilibrium with exploding interest rates
//!   although dividends decay slower than the bubbleless rate
//!   ([`counterexample`]),
//! - steady states and the saddle structure of the bubbly steady state
//!   ([`steady`]),
//! - saddle-path shooting, long-run classification and probes of the set of
//!   initial conditions converging to the bubbly steady state ([`shooter`]).
//!
//! ```
//! use olg_bubbles::econ::{DividendSpec, EconomyConfig, ProductionTech};
//! use olg_bubbles::steady;
//!
//! let cfg = EconomyConfig::log_utility(
//!     1.0,
//!     ProductionTech::perturbed(0.25, 2.0 / 3.0, 23.0 / 6.0)?,
//!     0.5,
//!     DividendSpec::geometric(1e-6, 0.95),
//!     1.0,
//! )?;
//! let report = steady::spectral_analysis(&cfg)?;
//! assert_eq!(report.classification, steady::SaddleClass::Saddle);
//! # Ok::<(), olg_bubbles::Error>(())
//! ```

// `!(x > 0.0)` is used throughout to reject NaN along with nonpositive values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod counterexample;
pub mod dynamics;
pub mod econ;
mod error;
pub mod exact;
pub mod export;
pub mod root;
pub mod shooter;
pub mod steady;

pub use error::{Error, Result};

#[cfg(doctest)]
#[doc = include_str!("../../../README.md")]
mod readme {}

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/model.md")]
    mod model {}
    #[doc = include_str!("../../../book/src/dynamics.md")]
    mod dynamics {}
    #[doc = include_str!("../../../book/src/counterexample.md")]
    mod counterexample {}
    #[doc = include_str!("../../../book/src/steady_states.md")]
    mod steady_states {}
    #[doc = include_str!("../../../book/src/shooting.md")]
    mod shooting {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
