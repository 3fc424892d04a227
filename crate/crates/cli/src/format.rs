/// `printf("%.*g")`: `digits` significant digits, trailing zeros removed,
/// scientific notation outside `[1e-5, 10^digits)`.
pub fn general(x: f64, digits: usize) -> String {
    if !x.is_finite() {
        return if x.is_nan() {
            "nan".into()
        } else if x > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        };
    }
    if x == 0.0 {
        return "0".into();
    }
    let digits = digits.max(1);
    // Round first so the exponent reflects the printed mantissa.
    let sci = format!("{:.*e}", digits - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -5 || exp >= digits as i32 {
        let mantissa = trim_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{mantissa}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{x:.decimals$}")).to_string()
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
    use super::general;

    #[test]
    fn matches_printf() {
        assert_eq!(general(-8.0, 12), "-8");
        assert_eq!(general(0.0, 12), "0");
        assert_eq!(general(-123.456789012345, 12), "-123.456789012");
        assert_eq!(general(1.0 / 3.0, 12), "0.333333333333");
        assert_eq!(general(1.5e-7, 12), "1.5e-07");
        assert_eq!(general(2.5e15, 12), "2.5e+15");
        assert_eq!(general(999999999999.9, 12), "1e+12");
        assert_eq!(general(0.0001, 3), "0.0001");
        assert_eq!(general(f64::NEG_INFINITY, 12), "-inf");
    }
}
