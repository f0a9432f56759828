//! Number rendering for CSV output.

pub const SIG_DIGITS: usize = 12;

/// Render `x` with exactly [`SIG_DIGITS`] significant digits.
///
/// Fixed notation for magnitudes in `[1e-5, 1e12)`, scientific otherwise.
pub fn sig(x: f64) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    if x == 0.0 {
        return format!("{:.*}", SIG_DIGITS - 1, 0.0);
    }
    // Round first so the exponent reflects the rounded value (0.9999999999999 -> 1.00000000000).
    let sci = format!("{:.*e}", SIG_DIGITS - 1, x);
    let exp: i32 = sci[sci.find('e').expect("exponent") + 1..].parse().expect("integer exponent");
    if !(-5..12).contains(&exp) {
        return sci;
    }
    let decimals = (SIG_DIGITS as i32 - 1 - exp).max(0) as usize;
    format!("{x:.decimals$}")
}
