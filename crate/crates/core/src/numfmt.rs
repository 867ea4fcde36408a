//! Deterministic float formatting for reports and traces.

/// Formats `x` as the shortest decimal that round-trips after rounding
/// to 12 significant digits. Plain notation only, so the output is a
/// valid JSON number token and stable across platforms.
pub fn sig12(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    debug_assert!(x.is_finite());
    let rounded: f64 = format!("{x:.11e}").parse().unwrap_or(x);
    format!("{rounded}")
}
