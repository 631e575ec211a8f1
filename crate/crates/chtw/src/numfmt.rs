//! Fixed decimal formatting for data files: 12 significant digits, trailing
//! zeros trimmed, scientific notation outside a sane decimal range. Keeps
//! trace and plot files byte-stable across runs and platforms.

const SIG_DIGITS: usize = 12;

/// Formats with 12 significant digits, `%g`-style.
pub fn fmt_sig(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if x.is_nan() {
        return "nan".to_string();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf" } else { "-inf" }.to_string();
    }

    // Round to 12 significant digits via scientific notation, then parse the
    // normalized mantissa/exponent back out. Rust's formatter handles the
    // carry (9.99... -> 1.0e+1) for us.
    let sci = format!("{:.*e}", SIG_DIGITS - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("exponent");
    let negative = mantissa.starts_with('-');
    let digits: String = mantissa.chars().filter(|c| c.is_ascii_digit()).collect();
    let digits = digits.trim_end_matches('0');
    let digits = if digits.is_empty() { "0" } else { digits };

    let mut out = String::new();
    if negative {
        out.push('-');
    }
    if exp >= -4 && exp < SIG_DIGITS as i32 {
        // decimal form: place the point after exp+1 leading digits
        let point = exp + 1;
        if point <= 0 {
            out.push_str("0.");
            for _ in 0..-point {
                out.push('0');
            }
            out.push_str(digits);
        } else if (point as usize) >= digits.len() {
            out.push_str(digits);
            for _ in 0..(point as usize - digits.len()) {
                out.push('0');
            }
        } else {
            out.push_str(&digits[..point as usize]);
            out.push('.');
            out.push_str(&digits[point as usize..]);
        }
    } else {
        out.push_str(&digits[..1]);
        if digits.len() > 1 {
            out.push('.');
            out.push_str(&digits[1..]);
        }
        out.push('e');
        out.push_str(&exp.to_string());
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plain_decimals() {
        assert_eq!(fmt_sig(0.0), "0");
        assert_eq!(fmt_sig(-0.0), "0");
        assert_eq!(fmt_sig(2.0), "2");
        assert_eq!(fmt_sig(-3.5), "-3.5");
        assert_eq!(fmt_sig(0.25), "0.25");
        assert_eq!(fmt_sig(1000.0), "1000");
        assert_eq!(fmt_sig(0.0001), "0.0001");
    }

    #[test]
    fn twelve_significant_digits() {
        assert_eq!(fmt_sig(1.0 / 3.0), "0.333333333333");
        assert_eq!(fmt_sig(2.0 / 3.0), "0.666666666667");
        assert_eq!(fmt_sig(123456789012345.0), "1.23456789012e14");
    }

    #[test]
    fn scientific_range() {
        assert_eq!(fmt_sig(1e-7), "1e-7");
        assert_eq!(fmt_sig(2.5e-5), "2.5e-5");
        assert_eq!(fmt_sig(1e12), "1e12");
        assert_eq!(fmt_sig(99999999999.0), "99999999999");
    }

    #[test]
    fn rounding_carry() {
        assert_eq!(fmt_sig(0.9999999999999), "1");
        assert_eq!(fmt_sig(9.99999999999999e-5), "0.0001");
    }

    #[test]
    fn non_finite() {
        assert_eq!(fmt_sig(f64::NAN), "nan");
        assert_eq!(fmt_sig(f64::INFINITY), "inf");
        assert_eq!(fmt_sig(f64::NEG_INFINITY), "-inf");
    }
}
