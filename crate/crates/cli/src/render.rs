//! SVG pictures in the disc model.

use std::fmt::Write;

use num_complex::Complex64;
use rootadj_core::{GeneralizedGeodesic, HexagonConfig, Line, Point, RootLineFan};

/// A geodesic drawn in the unit disc, in picture coordinates (y down).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DiscArc {
    Diameter {
        from: (f64, f64),
        to: (f64, f64),
    },
    Circle {
        from: (f64, f64),
        to: (f64, f64),
        center: (f64, f64),
        radius: f64,
    },
}

fn picture(z: Complex64) -> (f64, f64) {
    (z.re, -z.im)
}

/// The arc of the circle orthogonal to the unit circle through the images
/// of the line's endpoints.
pub fn disc_arc(line: &Line) -> DiscArc {
    let (u, v) = (line.p.to_circle(), line.q.to_circle());
    let (from, to) = (picture(u), picture(v));
    let dot = u.re * v.re + u.im * v.im;
    if 1.0 + dot < 1e-9 {
        return DiscArc::Diameter { from, to };
    }
    let c = (u + v) / (1.0 + dot);
    let radius = (c.norm_sqr() - 1.0).max(0.0).sqrt();
    DiscArc::Circle {
        from,
        to,
        center: picture(c),
        radius,
    }
}

fn num(x: f64) -> String {
    let s = format!("{x:.6}");
    if s == "-0.000000" {
        "0.000000".into()
    } else {
        s
    }
}

fn path(out: &mut String, class: &str, arc: &DiscArc) {
    let d = match *arc {
        DiscArc::Diameter { from, to } => format!(
            "M {} {} L {} {}",
            num(from.0),
            num(from.1),
            num(to.0),
            num(to.1)
        ),
        DiscArc::Circle {
            from,
            to,
            center,
            radius,
        } => {
            let cross =
                (from.0 - center.0) * (to.1 - center.1) - (from.1 - center.1) * (to.0 - center.0);
            let sweep = if cross > 0.0 { 1 } else { 0 };
            format!(
                "M {} {} A {} {} 0 0 {} {} {}",
                num(from.0),
                num(from.1),
                num(radius),
                num(radius),
                sweep,
                num(to.0),
                num(to.1)
            )
        }
    };
    writeln!(out, r#"  <path class="{class}" d="{d}"/>"#).unwrap();
}

fn marker(out: &mut String, class: &str, p: Point) {
    let (x, y) = picture(p.to_disc());
    writeln!(
        out,
        r#"  <circle class="{class}" cx="{}" cy="{}" r="0.015"/>"#,
        num(x),
        num(y)
    )
    .unwrap();
}

const STYLE: &str = "    .disc { fill: none; stroke: #000; stroke-width: 0.005; }
    .axis { fill: none; stroke: #1f5fbf; stroke-width: 0.008; }
    .half-turn { fill: none; stroke: #bf3f1f; stroke-width: 0.008; }
    .fan { fill: none; stroke: #3f9f3f; stroke-width: 0.005; stroke-dasharray: 0.02 0.01; }
    .vertex { fill: #000; }
    .ideal { fill: #fff; stroke: #000; stroke-width: 0.004; }
    .fixed { fill: #bf3f1f; }
";

/// Renders the hexagon sides, its vertices and optionally a root-line fan.
/// Axis sides, half-turn sides and fan lines use three stroke classes.
pub fn render_svg(h: &HexagonConfig, fan: Option<&RootLineFan>) -> String {
    let mut out = String::new();
    out.push_str(concat!(
        r#"<?xml version="1.0" encoding="UTF-8"?>"#,
        "\n",
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" viewBox="-1.05 -1.05 2.1 2.1">"#,
        "\n  <style>\n"
    ));
    out.push_str(STYLE);
    out.push_str("  </style>\n");
    out.push_str("  <circle class=\"disc\" cx=\"0\" cy=\"0\" r=\"1\"/>\n");
    for (i, side) in h.sides.iter().enumerate() {
        let class = if i % 2 == 0 { "axis" } else { "half-turn" };
        match side {
            GeneralizedGeodesic::Proper { .. } => {
                path(&mut out, class, &disc_arc(&side.as_line().unwrap()))
            }
            GeneralizedGeodesic::BoundaryPoint { p } => marker(&mut out, "ideal", Point::Ideal(*p)),
            GeneralizedGeodesic::InteriorPoint { z } => {
                marker(&mut out, "fixed", Point::Interior(*z))
            }
        }
    }
    if let Some(fan) = fan {
        for fl in &fan.lines {
            path(&mut out, "fan", &disc_arc(&fl.line));
        }
    }
    for (i, v) in h.vertices.iter().enumerate() {
        if !(h.sides[i].is_proper() && h.sides[(i + 1) % 6].is_proper()) {
            continue;
        }
        match v.point() {
            Some(p @ Point::Interior(_)) => marker(&mut out, "vertex", p),
            Some(p @ Point::Ideal(_)) => marker(&mut out, "ideal", p),
            None => {}
        }
    }
    out.push_str("</svg>\n");
    out
}
