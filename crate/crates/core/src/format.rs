//! `%g`-style float formatting.

/// Formats `x` with `digits` significant digits, `%g` style: fixed notation
/// for decimal exponents in `[-4, digits)`, scientific otherwise, trailing
/// zeros removed.
pub fn format_significant(x: f64, digits: usize) -> String {
    let digits = digits.max(1);
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{:.*e}", digits - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -4 || exp >= digits as i32 {
        format!(
            "{}e{}{:02}",
            trim_zeros(mantissa),
            if exp < 0 { '-' } else { '+' },
            exp.abs()
        )
    } else {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{:.*}", decimals, x)).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

#[cfg(test)]
mod tests {
    use super::format_significant as g;

    #[test]
    fn matches_printf_g() {
        // Expected strings are C's "%.12g".
        assert_eq!(g(0.0, 12), "0");
        assert_eq!(g(1.0, 12), "1");
        assert_eq!(g(-2.5, 12), "-2.5");
        assert_eq!(g(1.0 / 3.0, 12), "0.333333333333");
        assert_eq!(g(2.0f64.sqrt() * 1e-3, 12), "0.00141421356237");
        assert_eq!(g(1.234e-7, 12), "1.234e-07");
        assert_eq!(g(123456789012345.0, 12), "1.23456789012e+14");
        assert_eq!(g(100.0, 12), "100");
        assert_eq!(g(f64::NEG_INFINITY, 12), "-inf");
        assert_eq!(g(1.7320508075688772, 12), "1.73205080757");
    }
}
