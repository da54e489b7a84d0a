//! Number rendering matching the reference tables.
//!
//! Every printed cell is the value rounded to six significant digits and then
//! cut (not rounded) to the column's decimals. A probability whose
//! six-digit form is 1 prints as `1.`. Bounds below `1e-5` print with a
//! single leading digit, `3e-7`.

/// Significant digits kept before truncation.
const SIGNIFICANT: usize = 6;

/// Bounds at or above this print in fixed notation.
const FIXED_BOUND_MIN: f64 = 1e-5;

/// Digits and decimal exponent of `|x|` rounded to `sig` significant digits,
/// so that `|x| ≈ d0.d1d2… × 10^exp`.
fn significant_digits(x: f64, sig: usize) -> (Vec<u8>, i32) {
    let s = format!("{:.*e}", sig - 1, x.abs());
    let (mantissa, exp) = s.split_once('e').expect("exponent form");
    let digits = mantissa
        .bytes()
        .filter(u8::is_ascii_digit)
        .map(|b| b - b'0')
        .collect();
    (digits, exp.parse().expect("integer exponent"))
}

fn digits_to_fixed(digits: &[u8], exp: i32, decimals: usize, negative: bool) -> String {
    let mut int_part = String::new();
    let mut frac = String::new();
    if exp >= 0 {
        let e = exp as usize;
        for i in 0..=e {
            int_part.push((b'0' + digits.get(i).copied().unwrap_or(0)) as char);
        }
        frac.extend(digits.iter().skip(e + 1).map(|&d| (b'0' + d) as char));
    } else {
        int_part.push('0');
        frac.extend(std::iter::repeat_n('0', (-exp - 1) as usize));
        frac.extend(digits.iter().map(|&d| (b'0' + d) as char));
    }
    while frac.len() < decimals {
        frac.push('0');
    }
    frac.truncate(decimals);
    let sign = if negative && (int_part.bytes().chain(frac.bytes()).any(|b| b != b'0')) {
        "-"
    } else {
        ""
    };
    if decimals == 0 {
        format!("{sign}{int_part}")
    } else {
        format!("{sign}{int_part}.{frac}")
    }
}

/// Six significant digits, then truncated to `decimals` places.
pub fn table_fixed(x: f64, decimals: usize) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    if x == 0.0 {
        return digits_to_fixed(&[0], 0, decimals, false);
    }
    let (digits, exp) = significant_digits(x, SIGNIFICANT);
    digits_to_fixed(&digits, exp, decimals, x < 0.0)
}

/// A probability with five decimals, `1.` when it is 1 to six digits.
pub fn table_probability(x: f64) -> String {
    let (digits, exp) = significant_digits(x, SIGNIFICANT);
    if x > 0.0 && exp >= 0 && digits[0] >= 1 {
        return "1.".to_string();
    }
    table_fixed(x, 5)
}

/// An error bound: five decimals when at least `1e-5`, otherwise one
/// truncated digit in exponent form.
pub fn table_bound(x: f64) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    if x == 0.0 {
        return "0".to_string();
    }
    let (digits, exp) = significant_digits(x, SIGNIFICANT);
    let rounded: f64 = format!("{:.*e}", SIGNIFICANT - 1, x.abs())
        .parse()
        .unwrap_or(x.abs());
    if rounded >= FIXED_BOUND_MIN {
        return table_fixed(x, 5);
    }
    let sign = if x < 0.0 { "-" } else { "" };
    format!("{sign}{}e{exp}", digits[0])
}
