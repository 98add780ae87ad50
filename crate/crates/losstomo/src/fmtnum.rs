//! Shared numeric rendering for CSV output: 12 significant digits.

/// Render `v` with 12 significant digits in plain decimal notation.
pub(crate) fn sig12(v: f64) -> String {
    if v == 0.0 {
        return "0".into();
    }
    if !v.is_finite() {
        return format!("{v}");
    }
    let exp = v.abs().log10().floor() as i32;
    let decimals = (11 - exp).clamp(0, 17) as usize;
    format!("{v:.decimals$}")
}
