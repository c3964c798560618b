//! CSV number formatting.

/// Formats like C's `%.9g`: nine significant digits, trailing zeros trimmed,
/// scientific notation for exponents below −5 or at least 9. Always uses `.`
/// as the decimal point.
pub fn fmt_sig(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{x:.8e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent in {:e} output");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-5..9).contains(&exp) {
        format!("{}e{exp}", trim_zeros(mantissa))
    } else {
        trim_zeros(&format!("{x:.*}", (8 - exp) as usize)).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

pub fn fmt_opt(x: Option<f64>) -> String {
    x.map(fmt_sig).unwrap_or_default()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn significant_digits() {
        assert_eq!(fmt_sig(0.0), "0");
        assert_eq!(fmt_sig(1.0), "1");
        assert_eq!(fmt_sig(1.100_647_815_750_103_6), "1.10064782");
        assert_eq!(fmt_sig(-0.697_684_131_234), "-0.697684131");
        assert_eq!(fmt_sig(123_456_789.4), "123456789");
        assert_eq!(fmt_sig(1_234_567_891.0), "1.23456789e9");
        assert_eq!(fmt_sig(1.5e-7), "1.5e-7");
        assert_eq!(fmt_sig(2.5e-5), "0.000025");
        assert_eq!(fmt_sig(9.999_999_999_9), "10");
        assert_eq!(fmt_opt(None), "");
    }
}
