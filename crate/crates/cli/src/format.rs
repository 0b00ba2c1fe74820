//! Locale-independent number formatting.

/// `x` with 12 significant digits and trailing zeros kept, as C's `%#.12g`.
pub fn g12(x: f64) -> String {
    const DIGITS: i32 = 12;
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let sci = format!("{:.*e}", (DIGITS - 1) as usize, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    if x == 0.0 || (-4..DIGITS).contains(&exp) {
        let decimals = if x == 0.0 { DIGITS - 1 } else { DIGITS - 1 - exp };
        let fixed = format!("{:.*}", decimals as usize, x);
        if decimals == 0 {
            fixed + "."
        } else {
            fixed
        }
    } else {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{mantissa}e{sign}{:02}", exp.abs())
    }
}
