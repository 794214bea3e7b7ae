use olg_bubbles::counterexample::{
    asymptotic_rates, build_x_path, construct, verify_counterexample_premises,
    CounterexampleParams, FitWindow, DEFAULT_HORIZON,
};
use olg_bubbles::dynamics::{
    attach_fundamental_value, check_feasibility_bound, iterate, reproduce_backward,
    reproduce_stable, verify_equilibrium, Trajectory,
};
use olg_bubbles::econ::{DividendSpec, EconomyConfig, ProductionTech};
use olg_bubbles::shooter::{
    classify_longrun, classify_p0, lower_boundary_k0, monotonicity_check, probe_omega, shoot,
    BoundaryEstimate, LongRunCase, OmegaGrid, ShootOptions, ShotClass,
};
use olg_bubbles::steady::{bubbly_steady_state, steady_state_report, BubblyState};
use olg_bubbles::Error;

fn economy(d0: f64, k0: f64) -> EconomyConfig {
    EconomyConfig::log_utility(
        1.0,
        ProductionTech::perturbed(0.25, 2.0 / 3.0, 23.0 / 6.0).unwrap(),
        0.5,
        DividendSpec::geometric(d0, 0.95),
        k0,
    )
    .unwrap()
}

fn steady() -> BubblyState {
    bubbly_steady_state(&economy(0.0, 1.0)).unwrap().unwrap()
}

/// Largest relative gap between the first `n` records of two paths.
fn forward_gap(a: &Trajectory, b: &[(f64, f64)], n: usize) -> f64 {
    a.records
        .iter()
        .zip(b)
        .take(n)
        .map(|(r, &(k, p))| ((r.k - k).abs() / k).max((r.p - p).abs() / p))
        .fold(0.0, f64::max)
}

#[test]
fn counterexample_premises_hold() {
    let rep = verify_counterexample_premises(&CounterexampleParams::default()).unwrap();
    assert!(rep.passed(), "{rep}");
    assert!((rep.r_theta.unwrap() - 0.9071).abs() < 5e-5);
    assert!((rep.dividend_decay - 0.9901).abs() < 1e-4);
}

#[test]
fn counterexample_path_reproduces_backward() {
    let path = construct(&CounterexampleParams::default(), DEFAULT_HORIZON).unwrap();
    let cfg = path.economy().unwrap();
    let traj = path.to_trajectory().unwrap();
    let rs = reproduce_backward(&cfg, &traj).unwrap();
    assert!(rs.max() < 1e-8, "{rs:?}");
    // forward, capital errors grow by roughly α x_t / ρ per period
    let fwd = reproduce_stable(&cfg, &traj).unwrap();
    assert!(fwd.max_capital > 1.0, "{fwd:?}");
}

#[test]
fn counterexample_forward_prefix() {
    let params = CounterexampleParams::default();
    let path = construct(&params, 200).unwrap();
    let cfg = path.economy().unwrap();
    let t0 = path.t0.unwrap();
    let stored: Vec<(f64, f64)> = path.records[t0..]
        .iter()
        .map(|r| (r.k, r.p_theta))
        .collect();
    let traj = iterate(&cfg, stored[0].1, stored.len() - 1).unwrap();
    assert!(forward_gap(&traj, &stored, 5) < 1e-8);
}

#[test]
fn cobb_douglas_path_round_trips() {
    let params = CounterexampleParams::default();
    let x = build_x_path(&params, 200).unwrap();
    let ds: Vec<f64> = x.records[1..].iter().map(|r| r.d.unwrap()).collect();
    let cfg = EconomyConfig::log_utility(
        1.0,
        ProductionTech::cobb_douglas(0.25, 2.0 / 3.0).unwrap(),
        0.5,
        DividendSpec::Explicit {
            start: 1,
            values: ds.clone(),
            tail_ratio: params.dividend_decay(),
        },
        x.records[1].k,
    )
    .unwrap();
    let stored: Vec<(f64, f64)> = x.records[1..].iter().map(|r| (r.k, r.p)).collect();
    let ks: Vec<f64> = stored.iter().map(|s| s.0).collect();
    let ps: Vec<f64> = stored.iter().map(|s| s.1).collect();
    let ts: Vec<usize> = (1..=200).collect();
    let traj = Trajectory::from_columns(&cfg, &ts, &ks, &ps, &ds).unwrap();
    assert_eq!(traj.len(), 200);
    let rs = reproduce_backward(&cfg, &traj).unwrap();
    assert!(rs.max() < 1e-8, "{rs:?}");
    let fwd = iterate(&cfg, stored[0].1, 199).unwrap();
    assert!(forward_gap(&fwd, &stored, 10) < 1e-8);
}

#[test]
fn counterexample_tail_decays_monotonically() {
    let path = construct(&CounterexampleParams::default(), DEFAULT_HORIZON).unwrap();
    let diag = asymptotic_rates(&path, FitWindow::TrailingQuarter).unwrap();
    for from in [
        diag.k_monotone_from,
        diag.p_theta_monotone_from,
        diag.d_theta_monotone_from,
    ] {
        assert!(from.is_some_and(|t| t < DEFAULT_HORIZON / 2), "{diag:?}");
    }
    let report = steady_state_report(&path.economy().unwrap()).unwrap();
    let case = classify_longrun(&path.to_trajectory().unwrap(), &report, 1e-6);
    assert!(matches!(case, LongRunCase::Bubbleless { .. }), "{case}");
}

#[test]
fn steady_start_without_dividends_is_constant() {
    let ss = steady();
    let res = shoot(&economy(0.0, ss.k), &ShootOptions::default()).unwrap();
    assert!((res.p0 - ss.p).abs() <= 1e-12);
    for r in &res.trajectory.records {
        assert!((r.k - ss.k).abs() < 1e-12 && (r.p - ss.p).abs() < 1e-12);
    }
}

#[test]
fn small_dividend_converges_by_500() {
    let ss = steady();
    let cfg = economy(1e-6, ss.k);
    let opts = ShootOptions {
        horizon: 500,
        ..ShootOptions::default()
    };
    let res = shoot(&cfg, &opts).unwrap();
    assert!(res.bracket.hi.p0 - res.bracket.lo.p0 < 1e-12);
    assert!(res.final_distance < 1e-6);
    assert!(res.trajectory.last().t <= 500);
    assert!(verify_equilibrium(&cfg, &res.trajectory).unwrap().max() < 1e-9);
    assert!(check_feasibility_bound(&res.trajectory).passed());
    let report = steady_state_report(&cfg).unwrap();
    assert_eq!(
        classify_longrun(&res.trajectory, &report, 1e-6),
        LongRunCase::AsymptoticallyBubbly
    );
}

#[test]
fn shot_path_carries_a_bubble() {
    let ss = steady();
    let cfg = economy(1e-4, 0.8 * ss.k);
    let mut res = shoot(&cfg, &ShootOptions::default()).unwrap();
    let fv = attach_fundamental_value(&mut res.trajectory, 0.95).unwrap();
    let n = res.trajectory.len();
    for (r, bound) in res.trajectory.records.iter().zip(&fv.tail_bound) {
        assert!(r.b.unwrap() >= -bound);
    }
    let tail_min = res.trajectory.records[n - n / 4..]
        .iter()
        .map(|r| r.b.unwrap())
        .fold(f64::INFINITY, f64::min);
    assert!(tail_min > 0.5 * ss.p, "{tail_min}");
}

#[test]
fn equilibrium_price_is_a_knife_edge() {
    let ss = steady();
    let opts = ShootOptions::default();
    for (d0, k_mult) in [(1e-8, 1.0), (1e-6, 0.5), (1e-4, 1.5), (1e-3, 0.3)] {
        let cfg = economy(d0, k_mult * ss.k);
        let res = shoot(&cfg, &opts).unwrap();
        let step = 10.0 * res.tol_p0;
        let up = classify_p0(&cfg, res.p0 + step, &opts).unwrap();
        let down = classify_p0(&cfg, res.p0 - step, &opts).unwrap();
        assert!(
            matches!(up.class, ShotClass::TooHigh { .. }),
            "D0 = {d0}: {}",
            up.class
        );
        assert!(
            matches!(down.class, ShotClass::TooLow { .. }),
            "D0 = {d0}: {}",
            down.class
        );
        assert!(verify_equilibrium(&cfg, &res.trajectory).unwrap().max() < 1e-9);
    }
}

#[test]
fn huge_dividend_with_tiny_capital_is_outside_omega() {
    let cfg = economy(1e3, 1e-6);
    match shoot(&cfg, &ShootOptions::default()) {
        Err(Error::Bracket { .. }) => {}
        Ok(res) => assert!(!matches!(res.class, ShotClass::ConvergedBubbly { .. })),
        Err(e) => panic!("unexpected error {e}"),
    }
}

#[test]
fn neighbourhood_of_the_steady_state_is_in_omega() {
    let ss = steady();
    let grid = OmegaGrid {
        k0: [0.96, 0.98, 1.0, 1.02, 1.04]
            .iter()
            .map(|m| m * ss.k)
            .collect(),
        d0: vec![1e-8, 1e-6, 0.99e-4],
    };
    let probes = probe_omega(&economy(0.0, 1.0), &grid, &ShootOptions::default(), 2).unwrap();
    assert_eq!(probes.len(), 15);
    for p in &probes {
        assert!(p.in_omega, "{p:?}");
        assert!(p.final_dist.unwrap() < 1e-6);
    }
}

#[test]
fn probe_order_does_not_depend_on_jobs() {
    let ss = steady();
    let grid = OmegaGrid::around(ss.k, ss.p, 4, 3);
    let base = economy(0.0, 1.0);
    let opts = ShootOptions::default();
    let serial = probe_omega(&base, &grid, &opts, 1).unwrap();
    let parallel = probe_omega(&base, &grid, &opts, 4).unwrap();
    assert_eq!(serial, parallel);
}

#[test]
fn lower_boundary_of_omega() {
    let ss = steady();
    let est = lower_boundary_k0(
        &economy(0.0, 1.0),
        0.8,
        0.1 * ss.k,
        2.0 * ss.k,
        &ShootOptions::default(),
        1e-3,
    )
    .unwrap();
    match est {
        BoundaryEstimate::Between { below, above } => {
            assert!(below < above && above - below <= 1e-3 * above);
            // the 20-point grid puts the switch between 0.6 k* and 0.7 k*
            assert!(below > 0.6 * ss.k && above < 0.7 * ss.k, "{below} {above}");
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn ordered_prices_order_bubbles() {
    let ss = steady();
    let cfg = economy(1e-4, ss.k);
    let res = shoot(&cfg, &ShootOptions::default()).unwrap();
    let rep = monotonicity_check(&cfg, 0.5 * res.p0, res.p0, 200).unwrap();
    assert!(rep.passed(), "{:?}", rep.first());
    assert!(rep.compared > 10);
}
