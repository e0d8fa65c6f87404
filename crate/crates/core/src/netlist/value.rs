/// Parses a number in plain (`0.5`), scientific (`1e3`) or suffixed (`10f`,
/// `1meg`) form. Suffixes are case-insensitive; anything after the suffix is
/// rejected.
pub fn parse_value(token: &str) -> Result<f64, String> {
    let bytes = token.as_bytes();
    let mut i = 0;
    if i < bytes.len() && (bytes[i] == b'+' || bytes[i] == b'-') {
        i += 1;
    }
    let digits_start = i;
    while i < bytes.len() && bytes[i].is_ascii_digit() {
        i += 1;
    }
    let mut mantissa_digits = i - digits_start;
    if i < bytes.len() && bytes[i] == b'.' {
        i += 1;
        let frac_start = i;
        while i < bytes.len() && bytes[i].is_ascii_digit() {
            i += 1;
        }
        mantissa_digits += i - frac_start;
    }
    if mantissa_digits == 0 {
        return Err(format!("malformed number '{token}'"));
    }
    let mantissa_end = i;
    let mut exponent: i32 = 0;
    if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
        let mut j = i + 1;
        if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
            j += 1;
        }
        let exp_start = j;
        while j < bytes.len() && bytes[j].is_ascii_digit() {
            j += 1;
        }
        if j > exp_start {
            exponent = token[i + 1..j]
                .parse()
                .map_err(|_| format!("malformed exponent in '{token}'"))?;
            i = j;
        }
    }
    let shift = match token[i..].to_ascii_lowercase().as_str() {
        "" => 0,
        "f" => -15,
        "p" => -12,
        "n" => -9,
        "u" => -6,
        "m" => -3,
        "k" => 3,
        "meg" => 6,
        "g" => 9,
        other => return Err(format!("malformed number '{token}': unexpected suffix '{other}'")),
    };
    // Re-parse with the combined exponent so "10f" is exactly 1e-14.
    let value: f64 = format!("{}e{}", &token[..mantissa_end], exponent.saturating_add(shift))
        .parse()
        .map_err(|_| format!("malformed number '{token}'"))?;
    if value.is_finite() {
        Ok(value)
    } else {
        Err(format!("number '{token}' is not finite"))
    }
}
