//! `%g`-style number formatting for CSV outputs.

/// Formats `x` with `digits` significant digits, trailing zeros trimmed,
/// switching to exponent notation outside `[1e-5, 10^digits)` like C's `%g`.
pub fn sig(x: f64, digits: usize) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let digits = digits.max(1);
    // Exponent after rounding to `digits` significant digits.
    let sci = format!("{:.*e}", digits - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -5 || exp >= digits as i32 {
        format!("{}e{}", trim_zeros(mantissa), exp)
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
    use super::sig;

    #[test]
    fn matches_printf_g() {
        assert_eq!(sig(0.0, 9), "0");
        assert_eq!(sig(0.11, 9), "0.11");
        assert_eq!(sig(0.5, 9), "0.5");
        assert_eq!(sig(1.0, 9), "1");
        assert_eq!(sig(0.123456789123, 9), "0.123456789");
        assert_eq!(sig(-0.000123456789123, 9), "-0.000123456789");
        assert_eq!(sig(1.5e-7, 9), "1.5e-7");
        assert_eq!(sig(123456789012.0, 9), "1.23456789e11");
        assert_eq!(sig(0.99999999999, 9), "1");
        assert_eq!(sig(2.0 / 3.0, 12), "0.666666666667");
    }
}
