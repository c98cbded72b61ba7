use std::f64::consts::PI;

/// Largest power-of-two denominator rendered symbolically.
const PI_DENOMINATOR: i64 = 16;

/// Renders radians as a `pi` fraction when the value is a multiple of
/// `pi/16`, otherwise as a decimal with 12 significant digits.
pub fn render_angle(theta: f64) -> String {
    let m = theta / PI * PI_DENOMINATOR as f64;
    let nearest = m.round();
    if (m - nearest).abs() <= 1e-12 * m.abs().max(1.0) {
        return pi_fraction(nearest as i64);
    }
    decimal(theta)
}

fn pi_fraction(numerator: i64) -> String {
    if numerator == 0 {
        return "0".into();
    }
    let g = gcd(numerator.unsigned_abs(), PI_DENOMINATOR as u64) as i64;
    let (num, den) = (numerator / g, PI_DENOMINATOR / g);
    let sign = if num < 0 { "-" } else { "" };
    let head = match num.abs() {
        1 => format!("{sign}pi"),
        k => format!("{sign}{k}*pi"),
    };
    if den == 1 {
        head
    } else {
        format!("{head}/{den}")
    }
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn decimal(x: f64) -> String {
    let exp = x.abs().log10().floor() as i32;
    if !(-5..12).contains(&exp) {
        let s = format!("{x:.11e}");
        let (mantissa, e) = s.split_once('e').expect("exponent form");
        return format!("{}e{e}", trim_zeros(mantissa));
    }
    let prec = (11 - exp).max(0) as usize;
    trim_zeros(&format!("{x:.prec$}")).to_string()
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// Parses a literal angle: a decimal number or a `pi` expression such as
/// `pi/2`, `-3*pi/4` or `0.25*pi`.
pub fn parse_angle(s: &str) -> Option<f64> {
    let s = s.trim();
    if let Ok(v) = s.parse::<f64>() {
        return v.is_finite().then_some(v);
    }
    super::parser::eval_expression(s).filter(|v| v.is_finite())
}
