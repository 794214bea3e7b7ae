use super::Trajectory;
use crate::error::{Error, Result};

/// Detrended fundamental values along a path, with a per-period bound on the
/// error from truncating the dividend sum at the end of the path.
#[derive(Debug, Clone, PartialEq)]
pub struct FundamentalValue {
    pub v: Vec<f64>,
    /// `|v_t − true v_t| ≤ tail_bound[t]`.
    pub tail_bound: Vec<f64>,
}

/// `v_t = Σ_{s≥1} d_{t+s} Π_{j=1..s} G/R_{t+j}`.
///
/// Computed backward through `v_t = (G/R_{t+1}) (v_{t+1} + d_{t+1})`, which
/// sums the recorded terms exactly. Past the last record `T` dividends are
/// extrapolated by `tail_ratio` per period and rates frozen at `R_T`,
/// giving `v_T ≈ d_T r / (1 − r)` with `r = tail_ratio·G/R_T`. The
/// certificate replaces `R_T` by the smallest rate over the last quarter of
/// the path; it is discounted backward with the same factors.
pub fn fundamental_value(traj: &Trajectory, tail_ratio: f64) -> Result<FundamentalValue> {
    let n = traj.records.len();
    if n == 0 {
        return Ok(FundamentalValue {
            v: Vec::new(),
            tail_bound: Vec::new(),
        });
    }
    let g = traj.growth;
    if let Some(bad) = traj.records.iter().find(|r| !(r.rate > 0.0)) {
        return Err(Error::Domain {
            what: "interest rate on a valued path",
            requirement: "positive",
            value: bad.rate,
        });
    }
    let last = traj.records[n - 1];
    let mut v = vec![0.0; n];
    let mut bound = vec![0.0; n];
    if last.d > 0.0 && tail_ratio > 0.0 {
        let r_min = traj.records[n - 1 - (n - 1) / 4..]
            .iter()
            .map(|r| r.rate)
            .fold(f64::INFINITY, f64::min);
        let r_max = tail_ratio * g / r_min;
        if r_max >= 1.0 {
            return Err(Error::TailNotSummable { ratio: r_max });
        }
        let r_est = tail_ratio * g / last.rate;
        v[n - 1] = last.d * r_est / (1.0 - r_est);
        bound[n - 1] = last.d * r_max / (1.0 - r_max);
    }
    for t in (0..n - 1).rev() {
        let next = traj.records[t + 1];
        let disc = g / next.rate;
        v[t] = disc * (v[t + 1] + next.d);
        bound[t] = disc * bound[t + 1];
    }
    Ok(FundamentalValue {
        v,
        tail_bound: bound,
    })
}

/// Fills `v` and `b = p − v` on every record.
pub fn attach_fundamental_value(
    traj: &mut Trajectory,
    tail_ratio: f64,
) -> Result<FundamentalValue> {
    let fv = fundamental_value(traj, tail_ratio)?;
    for (r, v) in traj.records.iter_mut().zip(&fv.v) {
        r.v = Some(*v);
        r.b = Some(r.p - v);
    }
    Ok(fv)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{Termination, TrajectoryRecord};

    fn path(rate: f64, ds: &[f64]) -> Trajectory {
        Trajectory {
            records: ds
                .iter()
                .enumerate()
                .map(|(t, &d)| TrajectoryRecord {
                    t,
                    k: 1.0,
                    p: 0.0,
                    d,
                    rate,
                    wage: 1.0,
                    v: None,
                    b: None,
                })
                .collect(),
            termination: Termination::Horizon,
            growth: 1.0,
        }
    }

    #[test]
    fn zero_dividends_have_zero_value() {
        let fv = fundamental_value(&path(1.1, &[0.0; 20]), 0.9).unwrap();
        assert!(fv.v.iter().all(|v| *v == 0.0));
        assert!(fv.tail_bound.iter().all(|b| *b == 0.0));
    }

    #[test]
    fn geometric_series_oracle() {
        let (d0, gamma, rate): (f64, f64, f64) = (0.3, 0.9, 1.2);
        let ds: Vec<f64> = (0..60).map(|t| d0 * gamma.powi(t)).collect();
        let fv = fundamental_value(&path(rate, &ds), gamma).unwrap();
        let q = gamma / rate;
        let want = d0 * q / (1.0 - q);
        assert!((fv.v[0] - want).abs() < 1e-10, "{} vs {want}", fv.v[0]);
        assert!(fv.tail_bound[0] < 1e-5);
    }

    #[test]
    fn divergent_tail_rejected() {
        let err = fundamental_value(&path(0.8, &[1.0; 10]), 0.9).unwrap_err();
        assert!(matches!(err, Error::TailNotSummable { .. }));
    }

    #[test]
    fn bubble_column_attached() {
        let mut traj = path(1.2, &[0.1; 8]);
        for r in traj.records.iter_mut() {
            r.p = 1.0;
        }
        attach_fundamental_value(&mut traj, 0.5).unwrap();
        let r = traj.records[0];
        assert_eq!(r.b.unwrap(), 1.0 - r.v.unwrap());
    }
}
