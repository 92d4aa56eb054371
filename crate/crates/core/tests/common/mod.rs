#![allow(dead_code)]

use num_complex::Complex64;
use rootadj_core::{hexagon_from_lines, HexagonConfig, Line, Tolerances};

pub fn tol() -> Tolerances {
    Tolerances::default()
}

/// Geodesic through `p` with tangent direction `u`.
pub fn through(p: Complex64, u: Complex64) -> Line {
    if u.re.abs() < 1e-14 {
        return Line::new(p.re, f64::INFINITY);
    }
    let d = p.re + p.im * u.im / u.re;
    let r = (p - d).norm();
    Line::new(d - r, d + r)
}

/// HHH configuration with `L = (-1, 1)` and `L_B = (-e^(2u), e^(2u))`, where
/// `L_A` meets the square-root line `|z| = e^u` at `angle`, at the point of
/// argument `theta`.
pub fn crossing(u: f64, theta: f64, angle: f64) -> HexagonConfig {
    let p = Complex64::from_polar(u.exp(), theta);
    let tangent = Complex64::i() * p / p.norm();
    let l_a = through(p, tangent * Complex64::from_polar(1.0, angle));
    let r = (2.0 * u).exp();
    hexagon_from_lines(Line::new(-1.0, 1.0), l_a, Line::new(-r, r), &tol()).unwrap()
}
