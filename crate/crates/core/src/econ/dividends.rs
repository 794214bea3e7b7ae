use crate::error::{Error, Result};

/// Dividend process, stated in detrended units `d_t = D_t / G^t`.
#[derive(Debug, Clone, PartialEq)]
pub enum DividendSpec {
    Zero,
    /// `D_t = D0·Gd^t`, so `d_t = D0·(Gd/G)^t`.
    Geometric {
        d0: f64,
        growth: f64,
    },
    /// Stored prefix `values[i] = d_{start+i}`, extrapolated past the end by
    /// the declared per-period ratio. Zero before `start`.
    Explicit {
        start: usize,
        values: Vec<f64>,
        tail_ratio: f64,
    },
}

impl DividendSpec {
    pub fn geometric(d0: f64, growth: f64) -> Self {
        DividendSpec::Geometric { d0, growth }
    }

    pub fn validate(&self, g: f64) -> Result<()> {
        match self {
            DividendSpec::Zero => Ok(()),
            DividendSpec::Geometric { d0, growth } => {
                if !(*d0 >= 0.0 && d0.is_finite()) {
                    return Err(Error::Domain {
                        what: "D0",
                        requirement: "nonnegative and finite",
                        value: *d0,
                    });
                }
                if !(*growth > 0.0 && *growth < g) {
                    return Err(Error::Domain {
                        what: "Gd",
                        requirement: "in (0, G)",
                        value: *growth,
                    });
                }
                Ok(())
            }
            DividendSpec::Explicit {
                values, tail_ratio, ..
            } => {
                if let Some(bad) = values.iter().find(|d| !(**d >= 0.0 && d.is_finite())) {
                    return Err(Error::Domain {
                        what: "explicit dividend",
                        requirement: "nonnegative and finite",
                        value: *bad,
                    });
                }
                if values.is_empty() {
                    return Err(Error::InvalidParameter(
                        "explicit dividend sequence is empty".into(),
                    ));
                }
                if !(*tail_ratio >= 0.0 && *tail_ratio < 1.0) {
                    return Err(Error::Domain {
                        what: "dividend tail ratio",
                        requirement: "in [0, 1)",
                        value: *tail_ratio,
                    });
                }
                Ok(())
            }
        }
    }

    /// First period of the process (the period a trajectory starts in).
    pub fn start(&self) -> usize {
        match self {
            DividendSpec::Explicit { start, .. } => *start,
            _ => 0,
        }
    }

    /// Detrended dividend `d_t`.
    pub fn detrended(&self, t: usize, g: f64) -> f64 {
        match self {
            DividendSpec::Zero => 0.0,
            DividendSpec::Geometric { d0, growth } => d0 * (growth / g).powi(t as i32),
            DividendSpec::Explicit {
                start,
                values,
                tail_ratio,
            } => {
                if t < *start {
                    return 0.0;
                }
                let i = t - start;
                match values.get(i) {
                    Some(d) => *d,
                    None => {
                        let last = values.len() - 1;
                        values[last] * tail_ratio.powi((i - last) as i32)
                    }
                }
            }
        }
    }

    /// Asymptotic per-period decay of `d_t`.
    pub fn tail_ratio(&self, g: f64) -> f64 {
        match self {
            DividendSpec::Zero => 0.0,
            DividendSpec::Geometric { growth, .. } => growth / g,
            DividendSpec::Explicit { tail_ratio, .. } => *tail_ratio,
        }
    }

    /// `Gd` for a geometric process.
    pub fn growth(&self) -> Option<f64> {
        match self {
            DividendSpec::Geometric { growth, .. } => Some(*growth),
            _ => None,
        }
    }
}
