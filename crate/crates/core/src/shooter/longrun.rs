use std::fmt;

use crate::dynamics::Trajectory;
use crate::steady::SteadyStateReport;

/// Long-run behaviour of an equilibrium path, witnessed at a finite horizon.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LongRunCase {
    /// Price dies out while `R_t > G` from period `from` on.
    Bubbleless {
        from: usize,
    },
    /// `(k_t, p_t)` approaches `(k, 0)` with `k` a bubbleless steady state.
    AsymptoticallyBubbleless {
        k: f64,
    },
    /// `(k_t, p_t)` approaches `(k*, p*)`.
    AsymptoticallyBubbly,
    Undecided,
}

impl fmt::Display for LongRunCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LongRunCase::Bubbleless { from } => {
                write!(f, "bubbleless (p -> 0, R > G from t = {from})")
            }
            LongRunCase::AsymptoticallyBubbleless { k } => {
                write!(f, "asymptotically bubbleless (k -> {k}, p -> 0)")
            }
            LongRunCase::AsymptoticallyBubbly => f.write_str("asymptotically bubbly"),
            LongRunCase::Undecided => f.write_str("undecided"),
        }
    }
}

/// Classifies the tail of `traj`, checking convergence to `(k*, p*)`
/// first, then to a bubbleless steady state, then the bubbleless pattern.
///
/// `tol_rel` scales with `max(1, k*, p*)` (or `max(1, k)` for bubbleless
/// states). The bubbleless pattern needs `R_t > G` from some period in the
/// first three quarters of the path on, prices falling over the last
/// quarter, and a final price below `1e-3` of the path maximum.
pub fn classify_longrun(
    traj: &Trajectory,
    report: &SteadyStateReport,
    tol_rel: f64,
) -> LongRunCase {
    let n = traj.records.len();
    if n < 4 {
        return LongRunCase::Undecided;
    }
    let last = traj.records[n - 1];
    if let Some(b) = report.bubbly {
        let tol = tol_rel * 1f64.max(b.k).max(b.p);
        if (last.k - b.k).abs().max((last.p - b.p).abs()) < tol {
            return LongRunCase::AsymptoticallyBubbly;
        }
    }
    if last.p.abs() < tol_rel {
        if let Some(s) = report
            .bubbleless
            .iter()
            .find(|s| (last.k - s.k).abs() < tol_rel * s.k.max(1.0))
        {
            return LongRunCase::AsymptoticallyBubbleless { k: s.k };
        }
    }
    let g = traj.growth;
    let mut from = n;
    while from > 0 && traj.records[from - 1].rate > g {
        from -= 1;
    }
    let tail = &traj.records[n - n / 4 - 1..];
    let falling = tail.windows(2).all(|w| w[1].p < w[0].p);
    let p_max = traj.records.iter().map(|r| r.p).fold(0.0, f64::max);
    if from < n && from <= 3 * n / 4 && falling && last.p < 1e-3 * p_max {
        return LongRunCase::Bubbleless {
            from: traj.records[from].t,
        };
    }
    LongRunCase::Undecided
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::counterexample::{construct, CounterexampleParams};
    use crate::dynamics::iterate;
    use crate::econ::{DividendSpec, EconomyConfig, ProductionTech};
    use crate::steady::steady_state_report;

    #[test]
    fn counterexample_is_bubbleless_with_exploding_rates() {
        let path = construct(&CounterexampleParams::default(), 1000).unwrap();
        let cfg = path.economy().unwrap();
        let traj = path.to_trajectory().unwrap();
        let report = steady_state_report(&cfg).unwrap();
        match classify_longrun(&traj, &report, 1e-6) {
            LongRunCase::Bubbleless { from } => assert!(from <= 1000),
            other => panic!("{other}"),
        }
    }

    #[test]
    fn diamond_path_is_asymptotically_bubbleless() {
        // ρ = (1/3) / (0.6·2/3) < 1
        let cfg = EconomyConfig::log_utility(
            1.0,
            ProductionTech::cobb_douglas(1.0, 1.0 / 3.0).unwrap(),
            0.6,
            DividendSpec::Zero,
            0.05,
        )
        .unwrap();
        let traj = iterate(&cfg, 0.0, 200).unwrap();
        let report = steady_state_report(&cfg).unwrap();
        let k_ss = report.bubbleless[0].k;
        assert_eq!(
            classify_longrun(&traj, &report, 1e-6),
            LongRunCase::AsymptoticallyBubbleless { k: k_ss }
        );
    }
}
