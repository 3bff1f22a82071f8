//! Number formatting shared by the CSV writers.

/// Fixed-point decimal rendering with `digits` significant digits.
///
/// ```
/// assert_eq!(dicka::io::format_sig(0.123456789012345, 12), "0.123456789012");
/// assert_eq!(dicka::io::format_sig(1.0, 12), "1.00000000000");
/// assert_eq!(dicka::io::format_sig(0.0, 12), "0");
/// ```
pub fn format_sig(x: f64, digits: usize) -> String {
    if x == 0.0 || !x.is_finite() {
        return if x == 0.0 { "0".to_string() } else { x.to_string() };
    }
    let magnitude = x.abs().log10().floor() as i64;
    let decimals = (digits as i64 - 1 - magnitude).max(0) as usize;
    let mut s = format!("{x:.decimals$}");
    // rounding may have carried into a new leading digit (9.99… -> 10.0…)
    let rounded: f64 = s.parse().unwrap_or(x);
    if rounded.abs() >= 10f64.powi(magnitude as i32 + 1) && decimals > 0 {
        let fewer = decimals - 1;
        s = format!("{x:.fewer$}");
    }
    if s.starts_with("-0") && s.trim_start_matches(['-', '0', '.']).is_empty() {
        s.remove(0);
    }
    s
}
