//! Locale-independent significant-digit formatting for CSV and summary
//! output: fixed notation in a middle range, exponent notation outside it,
//! trailing zeros trimmed. Deterministic for a given input.

/// Format x with `sig` significant digits, in the style of printf %g: fixed
/// notation when the decimal exponent is in [-4, sig), exponent notation
/// otherwise.
pub fn fmt_sig(x: f64, sig: usize) -> String {
    assert!(sig >= 1, "need at least one significant digit");
    if x == 0.0 {
        return "0".to_string();
    }
    if x.is_nan() {
        return "nan".to_string();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf" } else { "-inf" }.to_string();
    }
    // Exponent after rounding to the requested digits, so values that round
    // up across a power of ten land in the right branch.
    let sci = format!("{:.*e}", sig - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("float e-format always has an exponent");
    let exp: i32 = exp.parse().expect("float exponent is an integer");
    if exp >= -4 && exp < sig as i32 {
        let decimals = (sig as i32 - 1 - exp).max(0) as usize;
        trim_fraction(format!("{x:.decimals$}"))
    } else {
        let m = trim_fraction(mantissa.to_string());
        format!("{m}e{exp}")
    }
}

fn trim_fraction(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}
