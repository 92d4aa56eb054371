//! Constructed stopping configurations, one per class, given by their
//! half-turn lines `L`, `L_A`, `L_B` with `A = H_L H_{L_A}`, `B = H_L H_{L_B}`.

use std::f64::consts::PI;

use crate::error::Result;
use crate::geodesic::{reflection_product, Line};
use crate::hexagon::{hexagon_from_lines, HexagonConfig, StoppingTag};
use crate::moebius::IsometryMatrix;
use crate::tolerance::Tolerances;

const INF: f64 = f64::INFINITY;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Fixture {
    pub tag: StoppingTag,
    pub l: Line,
    pub l_a: Line,
    pub l_b: Line,
}

impl Fixture {
    pub fn generators(&self) -> (IsometryMatrix, IsometryMatrix) {
        (
            reflection_product(&self.l, &self.l_a),
            reflection_product(&self.l, &self.l_b),
        )
    }

    pub fn hexagon(&self, tol: &Tolerances) -> Result<HexagonConfig> {
        hexagon_from_lines(self.l, self.l_a, self.l_b, tol)
    }
}

/// The line through `scale * i` making angle `phi` with the vertical.
fn tilted(scale: f64, phi: f64) -> Line {
    Line::new(-scale * (phi / 2.0).tan(), scale / (phi / 2.0).tan())
}

fn fixture(tag: StoppingTag, l: Line, l_a: Line, l_b: Line) -> Fixture {
    Fixture { tag, l, l_a, l_b }
}

/// The fixture of the given class.
pub fn stopping_fixture(tag: StoppingTag) -> Fixture {
    use StoppingTag::*;
    let vertical = Line::new(0.0, INF);
    // B elliptic of order 3: L_B crosses L at i with angle pi/3
    let l_b3 = tilted(1.0, PI / 3.0);
    let b3_end = 1.0 / (PI / 6.0).tan();
    match tag {
        HHH => fixture(
            tag,
            Line::new(-0.5, 0.5),
            Line::new(-3.0, -1.0),
            Line::new(1.0, 3.0),
        ),
        HPH => fixture(
            tag,
            Line::new(-1.0, 1.0),
            Line::new(-5.0, -2.0),
            Line::new(1.0, 4.0),
        ),
        PPH => fixture(
            tag,
            Line::new(-1.0, 1.0),
            Line::new(-3.0, -1.0),
            Line::new(1.0, 3.0),
        ),
        PPP => fixture(
            tag,
            Line::new(0.0, 1.0),
            Line::new(0.0, INF),
            Line::new(1.0, INF),
        ),
        HEH => fixture(tag, vertical, Line::new(3.0, 6.0), l_b3),
        HEP => fixture(tag, vertical, Line::new(b3_end, 5.0), l_b3),
        PEH => fixture(tag, vertical, Line::new(3.0, INF), l_b3),
        PEP => fixture(tag, vertical, Line::new(b3_end, INF), l_b3),
        EEH => fixture(tag, vertical, tilted(10.0, 3.0 * PI / 4.0), l_b3),
        EEP => {
            let c = (PI / 4.0).cos();
            let a = 3f64.sqrt() * (1.0 + c) / (1.0 - c);
            fixture(tag, vertical, Line::new(-a, b3_end), l_b3)
        }
        EEE => {
            // triangle with angles pi/4 at A, pi/3 at B and at A^-1 B
            let (alpha, beta, gamma) = (PI / 4.0, PI / 3.0, PI / 3.0);
            let c = (gamma.cos() + alpha.cos() * beta.cos()) / (alpha.sin() * beta.sin());
            let h = c + (c * c - 1.0).sqrt();
            fixture(tag, vertical, tilted(h, 3.0 * PI / 4.0), l_b3)
        }
    }
}

pub fn all_fixtures() -> Vec<Fixture> {
    StoppingTag::ALL.into_iter().map(stopping_fixture).collect()
}

/// A configuration of three mutually exterior semicircles built from six
/// increasing reals, with `roles` choosing which circle plays `L`, `L_A`, `L_B`.
pub fn hhh_from_endpoints(xs: [f64; 6], roles: [usize; 3]) -> Fixture {
    let circles = [
        Line::new(xs[0], xs[1]),
        Line::new(xs[2], xs[3]),
        Line::new(xs[4], xs[5]),
    ];
    fixture(
        StoppingTag::HHH,
        circles[roles[0]],
        circles[roles[1]],
        circles[roles[2]],
    )
}
