//! Fixed 17-significant-digit decimal rendering, the `%.17g` convention.
//!
//! Every finite `f64` survives a print/parse/print cycle unchanged.

/// Formats `v` with 17 significant digits, trailing zeros removed, switching
/// to exponent notation outside `1e-5 <= |v| < 1e17`.
pub fn fmt17(v: f64) -> String {
    if v.is_nan() {
        return "nan".into();
    }
    if v.is_infinite() {
        return if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if v == 0.0 {
        return if v.is_sign_negative() {
            "-0".into()
        } else {
            "0".into()
        };
    }
    let sci = format!("{:.16e}", v);
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..17).contains(&exp) {
        let decimals = (16 - exp).max(0) as usize;
        trim_zeros(format!("{:.*}", decimals, v))
    } else {
        let m = trim_zeros(mantissa.to_string());
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{m}e{sign}{:02}", exp.abs())
    }
}

fn trim_zeros(s: String) -> String {
    if !s.contains('.') {
        return s;
    }
    let t = s.trim_end_matches('0').trim_end_matches('.');
    t.to_string()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn known_renderings() {
        assert_eq!(fmt17(1.0), "1");
        assert_eq!(fmt17(0.8660254037844386), "0.8660254037844386");
        assert_eq!(fmt17(-0.5), "-0.5");
        assert_eq!(fmt17(0.1), "0.10000000000000001");
        assert_eq!(fmt17(1e-7), "9.9999999999999995e-08");
        assert_eq!(fmt17(2.5e20), "2.5e+20");
        assert_eq!(fmt17(123456.0), "123456");
    }

    proptest! {
        #[test]
        fn print_parse_print_is_stable(v in proptest::num::f64::NORMAL | proptest::num::f64::SUBNORMAL) {
            let s = fmt17(v);
            let back: f64 = s.parse().unwrap();
            prop_assert_eq!(back, v);
            prop_assert_eq!(fmt17(back), s);
        }
    }
}
