//! Per-capita production technologies.

use crate::error::{require_positive, Error, Result};

/// Per-capita production function `f(k) = F(k, 1)`.
///
/// `Perturbed` adds `θ·h(k)` with `h(k) = k·ln(1 + 1/k)` to a Cobb-Douglas
/// core. The perturbation is invisible near `k = 0` (it grows slower than
/// `k^α`) but lowers the bubbleless interest rate at moderate `k`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ProductionTech {
    CobbDouglas { scale: f64, alpha: f64 },
    Perturbed { scale: f64, alpha: f64, theta: f64 },
}

/// `f`, `f'` and `f''` at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TechEval {
    pub f: f64,
    pub fprime: f64,
    pub fsecond: f64,
}

impl ProductionTech {
    pub fn cobb_douglas(scale: f64, alpha: f64) -> Result<Self> {
        let tech = ProductionTech::CobbDouglas { scale, alpha };
        tech.validate()?;
        Ok(tech)
    }

    pub fn perturbed(scale: f64, alpha: f64, theta: f64) -> Result<Self> {
        let tech = ProductionTech::Perturbed {
            scale,
            alpha,
            theta,
        };
        tech.validate()?;
        Ok(tech)
    }

    pub fn validate(&self) -> Result<()> {
        require_positive("A", self.scale())?;
        let alpha = self.alpha();
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(Error::Domain {
                what: "alpha",
                requirement: "in (0, 1)",
                value: alpha,
            });
        }
        let theta = self.theta();
        if !(theta >= 0.0 && theta.is_finite()) {
            return Err(Error::Domain {
                what: "theta",
                requirement: "nonnegative and finite",
                value: theta,
            });
        }
        Ok(())
    }

    pub fn scale(&self) -> f64 {
        match *self {
            ProductionTech::CobbDouglas { scale, .. } | ProductionTech::Perturbed { scale, .. } => {
                scale
            }
        }
    }

    pub fn alpha(&self) -> f64 {
        match *self {
            ProductionTech::CobbDouglas { alpha, .. } | ProductionTech::Perturbed { alpha, .. } => {
                alpha
            }
        }
    }

    /// Perturbation weight; zero for plain Cobb-Douglas.
    pub fn theta(&self) -> f64 {
        match *self {
            ProductionTech::CobbDouglas { .. } => 0.0,
            ProductionTech::Perturbed { theta, .. } => theta,
        }
    }

    /// Evaluates `f(k)`, `f'(k)`, `f''(k)` for `k > 0`.
    pub fn eval(&self, k: f64) -> Result<TechEval> {
        check_capital(k)?;
        let (a, alpha) = (self.scale(), self.alpha());
        let ka = k.powf(alpha);
        let mut out = TechEval {
            f: a * ka,
            fprime: a * alpha * ka / k,
            fsecond: a * alpha * (alpha - 1.0) * ka / k / k,
        };
        if let ProductionTech::Perturbed { theta, .. } = *self {
            out.f += theta * h(k);
            out.fprime += theta * h_prime(k);
            out.fsecond += theta * h_second(k);
        }
        Ok(out)
    }

    /// `f(k)` for `k ≥ 0`, using the limit `f(0⁺) = 0`.
    pub fn output(&self, k: f64) -> Result<f64> {
        if k == 0.0 {
            return Ok(0.0);
        }
        Ok(self.eval(k)?.f)
    }

    /// Gross interest rate `R = f'(k)`.
    pub fn rate(&self, k: f64) -> Result<f64> {
        check_capital(k)?;
        let (a, alpha) = (self.scale(), self.alpha());
        let mut r = a * alpha * k.powf(alpha - 1.0);
        if let ProductionTech::Perturbed { theta, .. } = *self {
            r += theta * h_prime(k);
        }
        Ok(r)
    }

    /// Wage `w = f(k) − k f'(k)`, evaluated in closed form per technology
    /// (`h − k h' = k/(1+k)` for the perturbation) to avoid cancellation.
    pub fn wage(&self, k: f64) -> Result<f64> {
        check_capital(k)?;
        let (a, alpha) = (self.scale(), self.alpha());
        let mut w = a * (1.0 - alpha) * k.powf(alpha);
        if let ProductionTech::Perturbed { theta, .. } = *self {
            w += theta * k / (1.0 + k);
        }
        Ok(w)
    }
}

fn check_capital(k: f64) -> Result<()> {
    if k > 0.0 && k.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain {
            what: "capital k",
            requirement: "positive and finite",
            value: k,
        })
    }
}

/// `h(k) = k·ln(1 + 1/k)`.
///
/// Increases from `h(0⁺) = 0` to `h(∞) = 1`. For very small `k` the product
/// is formed as `k·(ln(1+k) − ln k)` so that `1/k` never overflows.
pub fn h(k: f64) -> f64 {
    if k < 1e-12 {
        k * (k.ln_1p() - k.ln())
    } else {
        k * (1.0 / k).ln_1p()
    }
}

/// `h'(k) = ln(1 + 1/k) − 1/(1 + k)`.
///
/// For `k > 100` the two terms agree to leading order, so the difference is
/// summed as the series `Σ_{n≥2} (−1)ⁿ (n−1)/n · zⁿ` in `z = 1/k`.
pub fn h_prime(k: f64) -> f64 {
    if k > 100.0 {
        let z = 1.0 / k;
        let mut zn = z * z;
        let mut sum = 0.0;
        for n in 2..=14 {
            let nf = n as f64;
            let term = (nf - 1.0) / nf * zn;
            sum += if n % 2 == 0 { term } else { -term };
            zn *= z;
        }
        sum
    } else if k < 1e-12 {
        k.ln_1p() - k.ln() - 1.0 / (1.0 + k)
    } else {
        (1.0 / k).ln_1p() - 1.0 / (1.0 + k)
    }
}

/// `h''(k) = −1 / (k (1+k)²)`.
pub fn h_second(k: f64) -> f64 {
    -1.0 / (k * (1.0 + k) * (1.0 + k))
}
