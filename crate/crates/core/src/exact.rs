//! Exact rational versions of the parameter identities, for checks that
//! must not depend on rounding.

pub use num_rational::Rational64;

/// `ρ = α / (β (1 − α))`.
pub fn rho(alpha: Rational64, beta: Rational64) -> Rational64 {
    alpha / (beta * (Rational64::from_integer(1) - alpha))
}

/// Smallest admissible level `C = 1 + ρ` of the x-sequence.
pub fn minimal_c(alpha: Rational64, beta: Rational64) -> Rational64 {
    Rational64::from_integer(1) + rho(alpha, beta)
}

/// `θ` that puts the bubbleless steady state of the perturbed log economy
/// at `k = 1`: from `G = β (A(1−α) + θ/2)`, `θ = 2 (G/β − A(1−α))`.
pub fn theta_for_unit_steady_state(
    growth: Rational64,
    scale: Rational64,
    alpha: Rational64,
    beta: Rational64,
) -> Rational64 {
    let one = Rational64::from_integer(1);
    Rational64::from_integer(2) * (growth / beta - scale * (one - alpha))
}

/// The fraction `n/d` with the smallest `d ≤ max_den` whose `f64` value is
/// exactly `x`. Recovers `2/3` from `2.0 / 3.0`.
pub fn as_fraction(x: f64, max_den: i64) -> Option<Rational64> {
    if !x.is_finite() {
        return None;
    }
    (1..=max_den).find_map(|d| {
        let n = (x * d as f64).round();
        (n.abs() < 9e15 && n / d as f64 == x).then(|| Rational64::new(n as i64, d))
    })
}
