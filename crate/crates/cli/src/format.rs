//! Number formatting shared by every command: 9 significant digits.

const SIG_DIGITS: i32 = 9;

/// `x` rounded to 9 significant digits, trailing zeros dropped.
pub fn sig(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let exp = x.abs().log10().floor() as i32;
    if !(-5..9).contains(&exp) {
        return format!("{:.*e}", (SIG_DIGITS - 1) as usize, x);
    }
    let decimals = (SIG_DIGITS - 1 - exp).max(0) as usize;
    let mut s = format!("{x:.decimals$}");
    if s.contains('.') {
        s = s.trim_end_matches('0').trim_end_matches('.').to_string();
    }
    if s == "-0" {
        s = "0".into();
    }
    s
}

pub fn list(values: &[f64]) -> String {
    let parts: Vec<String> = values.iter().map(|&v| sig(v)).collect();
    format!("[{}]", parts.join(", "))
}

pub fn indices(values: &[usize]) -> String {
    let parts: Vec<String> = values.iter().map(|v| v.to_string()).collect();
    format!("{{{}}}", parts.join(","))
}
