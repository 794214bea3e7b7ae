//! Number formatting for CSV output.

/// Shortest decimal text that parses back to the same `f64` (at most 17
/// significant digits). Non-finite values print as `NaN`, `inf`, `-inf`.
pub fn num(x: f64) -> String {
    if x.is_finite() {
        ryu::Buffer::new().format_finite(x).to_owned()
    } else if x.is_nan() {
        "NaN".to_owned()
    } else if x > 0.0 {
        "inf".to_owned()
    } else {
        "-inf".to_owned()
    }
}

/// `num` for present values, empty field otherwise.
pub fn opt(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}
