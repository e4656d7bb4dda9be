//! `%.17g`-style float formatting: 17 significant digits, fixed or
//! scientific notation by the C `%g` rules, trailing zeros stripped. Output
//! is a pure function of the bit pattern, so CSV files are byte-identical
//! across runs.

pub fn g17(x: f64) -> String {
    if x.is_nan() {
        return "nan".to_string();
    }
    if x.is_infinite() {
        return if x < 0.0 { "-inf" } else { "inf" }.to_string();
    }
    if x == 0.0 {
        return if x.is_sign_negative() { "-0" } else { "0" }.to_string();
    }
    let neg = x < 0.0;
    // round to 17 significant digits first; notation is chosen from the
    // exponent of the rounded value, as %g does
    let formatted = format!("{:.16e}", x.abs());
    let (mantissa, exp_str) = formatted.split_once('e').expect("e-format");
    let exp: i32 = exp_str.parse().expect("exponent");
    let digits: String = mantissa.chars().filter(|c| c.is_ascii_digit()).collect();
    debug_assert_eq!(digits.len(), 17);

    let body = if (-4..17).contains(&exp) {
        if exp >= 0 {
            let split = exp as usize + 1;
            let frac = digits[split..].trim_end_matches('0');
            if frac.is_empty() {
                digits[..split].to_string()
            } else {
                format!("{}.{}", &digits[..split], frac)
            }
        } else {
            let zeros = "0".repeat((-exp - 1) as usize);
            let frac = format!("{zeros}{digits}");
            format!("0.{}", frac.trim_end_matches('0'))
        }
    } else {
        let frac = digits[1..].trim_end_matches('0');
        let mantissa = if frac.is_empty() {
            digits[..1].to_string()
        } else {
            format!("{}.{}", &digits[..1], frac)
        };
        format!(
            "{mantissa}e{}{:02}",
            if exp < 0 { '-' } else { '+' },
            exp.abs()
        )
    };
    if neg {
        format!("-{body}")
    } else {
        body
    }
}
