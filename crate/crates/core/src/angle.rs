//! Helpers for angles on the circle T = R / 2πZ.

use std::f64::consts::PI;

pub const TAU: f64 = 2.0 * PI;

/// Reduce an angle to `[0, 2π)`.
#[inline]
pub fn wrap(psi: f64) -> f64 {
    let r = psi.rem_euclid(TAU);
    // rem_euclid can round up to exactly TAU for tiny negative inputs
    if r >= TAU {
        0.0
    } else {
        r
    }
}

/// Reduce an angle to `(-π, π]`.
#[inline]
pub fn wrap_signed(psi: f64) -> f64 {
    let r = wrap(psi);
    if r > PI {
        r - TAU
    } else {
        r
    }
}

/// Length of the shorter arc between two angles.
#[inline]
pub fn circular_distance(a: f64, b: f64) -> f64 {
    wrap_signed(a - b).abs()
}

/// Minimum circular separation between any two of the given angles.
///
/// Returns `TAU` for fewer than two angles.
pub fn min_separation(angles: &[f64]) -> f64 {
    if angles.len() < 2 {
        return TAU;
    }
    let mut sorted: Vec<f64> = angles.iter().map(|&a| wrap(a)).collect();
    sorted.sort_by(f64::total_cmp);
    let mut best = sorted[0] + TAU - sorted[sorted.len() - 1];
    for w in sorted.windows(2) {
        best = best.min(w[1] - w[0]);
    }
    best
}

/// Parse an angle written as a decimal or as a rational multiple of π,
/// e.g. `0.5`, `pi`, `-pi/3`, `5pi/6`, `2*pi`, `3.5pi/4`.
pub fn parse_angle(text: &str) -> Option<f64> {
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let s = s.to_ascii_lowercase();
    if s.is_empty() {
        return None;
    }
    let Some(pos) = s.find("pi").or_else(|| s.find('π')) else {
        return s.parse::<f64>().ok().filter(|v| v.is_finite());
    };
    let marker_len = if s[pos..].starts_with("pi") { 2 } else { 'π'.len_utf8() };
    let coef_text = s[..pos].trim_end_matches('*');
    let coef = match coef_text {
        "" | "+" => 1.0,
        "-" => -1.0,
        c => c.parse::<f64>().ok()?,
    };
    let rest = &s[pos + marker_len..];
    let den = if rest.is_empty() {
        1.0
    } else {
        let d = rest.strip_prefix('/')?.parse::<f64>().ok()?;
        if d == 0.0 {
            return None;
        }
        d
    };
    let v = coef * PI / den;
    v.is_finite().then_some(v)
}

/// Parse a comma-separated list of angles.
pub fn parse_angle_list(text: &str) -> Option<Vec<f64>> {
    text.split(',').map(parse_angle).collect()
}
