//! Number formatting shared by every table the CLI prints.

use qcorr::coherence::Bound;

/// C's `%.12g`: 12 significant digits, trailing zeros dropped, exponent
/// form outside `1e-4 ≤ |x| < 1e12`.
pub fn g12(x: f64) -> String {
    const PRECISION: i32 = 12;
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return if x.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    // the exponent after rounding to PRECISION digits decides the style
    let sci = format!("{:.*e}", (PRECISION - 1) as usize, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-4..PRECISION).contains(&exp) {
        let mantissa = trim_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{mantissa}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (PRECISION - 1 - exp).max(0) as usize;
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

pub fn bound_cell(b: Bound) -> String {
    match b {
        Bound::Value(v) => g12(v),
        other => other.to_string(),
    }
}

pub fn optional_cell(v: Option<f64>) -> String {
    v.map_or_else(|| "n.a.".to_string(), g12)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matches_printf() {
        let cases = [
            (0.5, "0.5"),
            (1.0, "1"),
            (0.125, "0.125"),
            (1.0 / 3.0, "0.333333333333"),
            (2.0 / 3.0, "0.666666666667"),
            (11.0, "11"),
            (std::f64::consts::PI, "3.14159265359"),
            (1e-5, "1e-05"),
            (1.5e-7, "1.5e-07"),
            (0.0001, "0.0001"),
            (123456789012.0, "123456789012"),
            (1234567890123.0, "1.23456789012e+12"),
            (-0.25, "-0.25"),
            (0.0, "0"),
            (999999999999.5, "1e+12"),
            (0.99999999999999, "1"),
        ];
        for (x, want) in cases {
            assert_eq!(g12(x), want, "{x}");
        }
    }
}
