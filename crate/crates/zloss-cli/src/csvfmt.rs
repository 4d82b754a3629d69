//! Deterministic CSV float formatting: 9 significant digits, `%g`-style
//! presentation, `.` decimal separator regardless of locale.

const SIG_DIGITS: i32 = 9;

/// Formats with 9 significant digits, trimming trailing zeros. Values whose
/// decimal exponent falls outside [-4, 9) switch to scientific notation.
pub fn fmt_g9(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    // Exponent of the value after rounding to 9 significant digits.
    let sci = format!("{:.*e}", (SIG_DIGITS - 1) as usize, x);
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("exponent");

    if (-4..SIG_DIGITS).contains(&exp) {
        let decimals = (SIG_DIGITS - 1 - exp).max(0) as usize;
        trim_fraction(&format!("{x:.decimals$}"))
    } else {
        format!("{}e{}", trim_fraction(mantissa), exp)
    }
}

fn trim_fraction(s: &str) -> String {
    if !s.contains('.') {
        return s.to_string();
    }
    let t = s.trim_end_matches('0').trim_end_matches('.');
    t.to_string()
}

/// Joins fields with commas and a trailing newline. Fields are expected to be
/// comma- and quote-free (the writers here only emit numbers, identifiers,
/// and booleans).
pub fn csv_line(fields: &[String]) -> String {
    let mut line = fields.join(",");
    line.push('\n');
    line
}
