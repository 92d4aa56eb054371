//! Geodesics of the upper half-plane, half-turns (reflections) and incidence.
//!
//! Every proper geodesic is handled through its reflection matrix, a
//! traceless real matrix of determinant -1 acting by `z -> (a zbar + b)/(c zbar + d)`.
//! Products of two such matrices are ordinary isometries, which keeps the
//! point at infinity free of special cases in most predicates.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::moebius::{axis_of, classify, max_abs, ElementClass, IsometryMatrix};
use crate::tolerance::Tolerances;

/// A point of the boundary circle R u {inf}.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Boundary {
    Finite(f64),
    Infinity,
}

impl Boundary {
    /// Image on the unit circle under the Cayley map z -> (z - i)/(z + i).
    pub fn to_circle(self) -> Complex64 {
        match self {
            Boundary::Infinity => Complex64::new(1.0, 0.0),
            Boundary::Finite(x) => {
                let z = Complex64::new(x, 0.0);
                (z - Complex64::i()) / (z + Complex64::i())
            }
        }
    }

    pub fn chordal(self, other: Boundary) -> f64 {
        (self.to_circle() - other.to_circle()).norm()
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, Boundary::Infinity)
    }

    pub fn finite(self) -> Option<f64> {
        match self {
            Boundary::Finite(x) => Some(x),
            Boundary::Infinity => None,
        }
    }
}

impl From<f64> for Boundary {
    fn from(x: f64) -> Self {
        if x.is_infinite() {
            Boundary::Infinity
        } else {
            Boundary::Finite(x)
        }
    }
}

impl Serialize for Boundary {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Boundary::Finite(x) => s.serialize_f64(*x),
            Boundary::Infinity => s.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for Boundary {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Str(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(x) => Ok(Boundary::Finite(x)),
            Raw::Str(s) if s == "inf" => Ok(Boundary::Infinity),
            Raw::Str(s) => Err(serde::de::Error::custom(format!(
                "expected a number or \"inf\", got {s:?}"
            ))),
        }
    }
}

/// A point of the closed hyperbolic plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Point {
    Interior(Complex64),
    Ideal(Boundary),
}

impl Point {
    /// Image in the unit disc under the Cayley map.
    pub fn to_disc(self) -> Complex64 {
        match self {
            Point::Ideal(b) => b.to_circle(),
            Point::Interior(z) => (z - Complex64::i()) / (z + Complex64::i()),
        }
    }

    pub fn is_ideal(self) -> bool {
        matches!(self, Point::Ideal(_))
    }

    /// Hyperbolic distance for interior points; chordal gap on the boundary
    /// circle when both are ideal; infinite otherwise.
    pub fn gap(self, other: Point) -> f64 {
        match (self, other) {
            (Point::Interior(a), Point::Interior(b)) => hyperbolic_distance(a, b),
            (Point::Ideal(a), Point::Ideal(b)) => a.chordal(b),
            _ => f64::INFINITY,
        }
    }
}

#[derive(Serialize)]
#[serde(tag = "type", rename_all = "snake_case")]
enum PointRepr {
    Interior { re: f64, im: f64 },
    Ideal { p: Boundary },
}

impl Serialize for Point {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match *self {
            Point::Interior(z) => PointRepr::Interior { re: z.re, im: z.im },
            Point::Ideal(p) => PointRepr::Ideal { p },
        }
        .serialize(s)
    }
}

pub fn hyperbolic_distance(a: Complex64, b: Complex64) -> f64 {
    let num = (a - b).norm_sqr();
    (1.0 + num / (2.0 * a.im * b.im)).acosh()
}

/// A proper geodesic, a boundary point (improper geodesic) or an interior
/// point (the "axis" of an elliptic).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GeneralizedGeodesic {
    /// Oriented from `p` to `q`.
    Proper {
        p: Boundary,
        q: Boundary,
    },
    BoundaryPoint {
        p: Boundary,
    },
    InteriorPoint {
        z: Complex64,
    },
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
enum GeodesicRepr {
    Proper { p: Boundary, q: Boundary },
    Boundary { p: Boundary },
    Interior { re: f64, im: f64 },
}

impl Serialize for GeneralizedGeodesic {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match *self {
            GeneralizedGeodesic::Proper { p, q } => GeodesicRepr::Proper { p, q },
            GeneralizedGeodesic::BoundaryPoint { p } => GeodesicRepr::Boundary { p },
            GeneralizedGeodesic::InteriorPoint { z } => {
                GeodesicRepr::Interior { re: z.re, im: z.im }
            }
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for GeneralizedGeodesic {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        Ok(match GeodesicRepr::deserialize(d)? {
            GeodesicRepr::Proper { p, q } => GeneralizedGeodesic::Proper { p, q },
            GeodesicRepr::Boundary { p } => GeneralizedGeodesic::BoundaryPoint { p },
            GeodesicRepr::Interior { re, im } => {
                if im <= 0.0 {
                    return Err(serde::de::Error::custom("interior point needs im > 0"));
                }
                GeneralizedGeodesic::InteriorPoint {
                    z: Complex64::new(re, im),
                }
            }
        })
    }
}

impl GeneralizedGeodesic {
    pub fn proper(p: impl Into<Boundary>, q: impl Into<Boundary>) -> Self {
        GeneralizedGeodesic::Proper {
            p: p.into(),
            q: q.into(),
        }
    }

    pub fn as_line(&self) -> Option<Line> {
        match *self {
            GeneralizedGeodesic::Proper { p, q } => Some(Line { p, q }),
            _ => None,
        }
    }

    pub fn as_point(&self) -> Option<Point> {
        match *self {
            GeneralizedGeodesic::Proper { .. } => None,
            GeneralizedGeodesic::BoundaryPoint { p } => Some(Point::Ideal(p)),
            GeneralizedGeodesic::InteriorPoint { z } => Some(Point::Interior(z)),
        }
    }

    pub fn is_proper(&self) -> bool {
        matches!(self, GeneralizedGeodesic::Proper { .. })
    }
}

/// An oriented proper geodesic from `p` to `q`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Line {
    pub p: Boundary,
    pub q: Boundary,
}

impl From<Line> for GeneralizedGeodesic {
    fn from(l: Line) -> Self {
        GeneralizedGeodesic::Proper { p: l.p, q: l.q }
    }
}

impl Line {
    pub fn new(p: impl Into<Boundary>, q: impl Into<Boundary>) -> Self {
        Self {
            p: p.into(),
            q: q.into(),
        }
    }

    pub fn reversed(self) -> Self {
        Self {
            p: self.q,
            q: self.p,
        }
    }

    /// Reflection matrix, determinant -1 and trace 0.
    pub fn reflection(&self) -> [f64; 4] {
        match (self.p, self.q) {
            (Boundary::Finite(x), Boundary::Infinity)
            | (Boundary::Infinity, Boundary::Finite(x)) => [-1.0, 2.0 * x, 0.0, 1.0],
            (Boundary::Finite(p), Boundary::Finite(q)) => {
                let m = 0.5 * (p + q);
                let s = 2.0 / (q - p).abs();
                [m * s, -p * q * s, s, -m * s]
            }
            (Boundary::Infinity, Boundary::Infinity) => [f64::NAN; 4],
        }
    }

    /// Orientation-preserving map sending `p` to 0 and `q` to infinity.
    pub fn standardizer(&self) -> IsometryMatrix {
        let m = match (self.p, self.q) {
            (Boundary::Finite(p), Boundary::Infinity) => [1.0, -p, 0.0, 1.0],
            (Boundary::Infinity, Boundary::Finite(q)) => [0.0, -1.0, 1.0, -q],
            (Boundary::Finite(p), Boundary::Finite(q)) => {
                let sg = if p > q { 1.0 } else { -1.0 };
                [sg, -sg * p, 1.0, -q]
            }
            (Boundary::Infinity, Boundary::Infinity) => [1.0, 0.0, 0.0, 1.0],
        };
        IsometryMatrix::new(m[0], m[1], m[2], m[3]).expect("distinct endpoints")
    }

    /// Signed hyperbolic distance from `z` to the line; positive to the
    /// right of the direction of travel from `p` to `q`.
    pub fn signed_distance(&self, z: Complex64) -> f64 {
        let w = self.standardizer().apply(z);
        (w.re / w.im).asinh()
    }

    /// Side of an ideal point: +1 right, -1 left, 0 for the endpoints
    /// themselves (within `eps` chordal).
    pub fn side_of_boundary(&self, x: Boundary, eps: f64) -> i8 {
        if x.chordal(self.p) < eps || x.chordal(self.q) < eps {
            return 0;
        }
        match self.standardizer().apply_boundary(x) {
            Boundary::Finite(w) if w > 0.0 => 1,
            Boundary::Finite(w) if w < 0.0 => -1,
            _ => 0,
        }
    }

    /// Side of an arbitrary point with a closed band of width `eps`.
    pub fn side_of(&self, pt: Point, eps: f64) -> i8 {
        match pt {
            Point::Ideal(x) => self.side_of_boundary(x, eps),
            Point::Interior(z) => {
                let d = self.signed_distance(z);
                if d.abs() < eps {
                    0
                } else if d > 0.0 {
                    1
                } else {
                    -1
                }
            }
        }
    }

    /// Point of the line at arclength parameter `u` (u = 0 at the point
    /// mapped to `i` by the standardizer, increasing toward `q`).
    pub fn point_at(&self, u: f64) -> Complex64 {
        self.standardizer()
            .inverse()
            .apply(Complex64::new(0.0, u.exp()))
    }

    /// Arclength parameter of a point on (or the foot of a point near) the line.
    pub fn parameter_of(&self, z: Complex64) -> f64 {
        self.standardizer().apply(z).norm().ln()
    }

    /// Parameter of a point or an endpoint (+-inf).
    pub fn parameter_of_point(&self, pt: Point, eps: f64) -> f64 {
        match pt {
            Point::Interior(z) => self.parameter_of(z),
            Point::Ideal(x) => {
                if x.chordal(self.q) < eps {
                    f64::INFINITY
                } else if x.chordal(self.p) < eps {
                    f64::NEG_INFINITY
                } else {
                    f64::NAN
                }
            }
        }
    }

    pub fn same_as(&self, other: &Line, eps: f64) -> bool {
        (self.p.chordal(other.p) < eps && self.q.chordal(other.q) < eps)
            || (self.p.chordal(other.q) < eps && self.q.chordal(other.p) < eps)
    }

    pub fn has_endpoint(&self, x: Boundary, eps: f64) -> bool {
        self.p.chordal(x) < eps || self.q.chordal(x) < eps
    }

    pub fn contains(&self, pt: Point, eps: f64) -> bool {
        match pt {
            Point::Ideal(x) => self.has_endpoint(x, eps),
            Point::Interior(z) => self.signed_distance(z).abs() < eps,
        }
    }
}

/// Reflection across a proper geodesic.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HalfTurn {
    pub line: Line,
}

impl HalfTurn {
    pub fn new(line: Line) -> Self {
        Self { line }
    }
}

pub fn half_turn_apply(h: &HalfTurn, z: Complex64) -> Complex64 {
    let [a, b, c, d] = h.line.reflection();
    let w = z.conj();
    (w * a + b) / (w * c + d)
}

fn mat_mul(x: [f64; 4], y: [f64; 4]) -> [f64; 4] {
    [
        x[0] * y[0] + x[1] * y[2],
        x[0] * y[1] + x[1] * y[3],
        x[2] * y[0] + x[3] * y[2],
        x[2] * y[1] + x[3] * y[3],
    ]
}

fn product_matrix(x: [f64; 4], y: [f64; 4]) -> IsometryMatrix {
    let m = mat_mul(x, y);
    IsometryMatrix::new(m[0], m[1], m[2], m[3]).unwrap_or(IsometryMatrix::IDENTITY)
}

/// Matrix of `H1 o H2`.
pub fn compose_half_turns(
    h1: &HalfTurn,
    h2: &HalfTurn,
    tol: &Tolerances,
) -> Result<IsometryMatrix> {
    if h1.line.same_as(&h2.line, tol.vertex) {
        return Err(Error::CoincidentLines);
    }
    Ok(product_matrix(h1.line.reflection(), h2.line.reflection()))
}

/// Product matrix of reflections in two lines, without the coincidence check.
pub(crate) fn reflection_product(l1: &Line, l2: &Line) -> IsometryMatrix {
    product_matrix(l1.reflection(), l2.reflection())
}

/// The geodesic `X` with `H_L o g = H_X`, i.e. `g = H_L H_X`.
pub fn involution_line(l: &Line, g: &IsometryMatrix, tol: &Tolerances) -> Result<Line> {
    let n = mat_mul(l.reflection(), g.entries());
    let scale = max_abs(n).max(1.0);
    let defect = (n[0] + n[3]).abs() / scale;
    if defect > tol.alg.max(1e-9) * 10.0 {
        return Err(Error::NotAnInvolution { defect });
    }
    // fixed points solve c x^2 - 2a x - b = 0; det(n) = -1 gives the
    // discriminant without cancellation
    let (a, b, c) = (0.5 * (n[0] - n[3]), n[1], n[2]);
    let tau = 0.5 * (n[0] + n[3]);
    let sq = (1.0 + tau * tau).sqrt();
    let q = a + a.signum() * sq;
    if c.abs() <= 1e-15 * scale {
        return Ok(Line::new(-b / (2.0 * a), Boundary::Infinity));
    }
    Ok(Line::new(q / c, -b / q))
}

/// Result of intersecting two generalized geodesics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum IntersectionResult {
    InteriorPoint { z: Complex64 },
    SharedEnd { p: Boundary },
    Empty { distance: f64 },
}

impl IntersectionResult {
    pub fn is_empty(&self) -> bool {
        matches!(self, IntersectionResult::Empty { .. })
    }

    /// The common point, if any.
    pub fn point(&self) -> Option<Point> {
        match *self {
            IntersectionResult::InteriorPoint { z } => Some(Point::Interior(z)),
            IntersectionResult::SharedEnd { p } => Some(Point::Ideal(p)),
            IntersectionResult::Empty { .. } => None,
        }
    }
}

#[derive(Serialize)]
#[serde(tag = "type", rename_all = "snake_case")]
enum IntersectionRepr {
    InteriorPoint { re: f64, im: f64 },
    SharedEnd { p: Boundary },
    Empty { distance: Option<f64> },
}

impl Serialize for IntersectionResult {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match *self {
            IntersectionResult::InteriorPoint { z } => {
                IntersectionRepr::InteriorPoint { re: z.re, im: z.im }
            }
            IntersectionResult::SharedEnd { p } => IntersectionRepr::SharedEnd { p },
            IntersectionResult::Empty { distance } => IntersectionRepr::Empty {
                distance: distance.is_finite().then_some(distance),
            },
        }
        .serialize(s)
    }
}

/// Intersection of two proper lines with the crossing angle (in (0, pi/2])
/// when they cross.
pub fn intersect_lines(l1: &Line, l2: &Line, tol: &Tolerances) -> IntersectionResult {
    for &x in &[l1.p, l1.q] {
        if l2.has_endpoint(x, tol.vertex) {
            return IntersectionResult::SharedEnd { p: x };
        }
    }
    let m = reflection_product(l1, l2);
    let tr = m.trace().abs();
    if tr >= 2.0 {
        IntersectionResult::Empty {
            distance: (tr / 2.0).acosh(),
        }
    } else {
        match axis_of(&m, tol) {
            Ok(GeneralizedGeodesic::InteriorPoint { z }) => IntersectionResult::InteriorPoint { z },
            _ => IntersectionResult::Empty { distance: 0.0 },
        }
    }
}

/// Angle in [0, pi/2] between two lines that cross.
pub fn crossing_angle(l1: &Line, l2: &Line) -> f64 {
    let tr = reflection_product(l1, l2).trace().abs();
    (tr / 2.0).min(1.0).acos()
}

pub fn intersect(
    g1: &GeneralizedGeodesic,
    g2: &GeneralizedGeodesic,
    tol: &Tolerances,
) -> IntersectionResult {
    use GeneralizedGeodesic as G;
    match (*g1, *g2) {
        (G::Proper { p: a, q: b }, G::Proper { p: c, q: d }) => {
            intersect_lines(&Line::new(a, b), &Line::new(c, d), tol)
        }
        (G::Proper { p, q }, other) | (other, G::Proper { p, q }) => {
            let line = Line::new(p, q);
            match other {
                G::BoundaryPoint { p: x } => {
                    if line.has_endpoint(x, tol.vertex) {
                        IntersectionResult::SharedEnd { p: x }
                    } else {
                        IntersectionResult::Empty {
                            distance: f64::INFINITY,
                        }
                    }
                }
                G::InteriorPoint { z } => {
                    let d = line.signed_distance(z).abs();
                    if d < tol.vertex {
                        IntersectionResult::InteriorPoint { z }
                    } else {
                        IntersectionResult::Empty { distance: d }
                    }
                }
                G::Proper { .. } => unreachable!(),
            }
        }
        (G::BoundaryPoint { p: x }, G::BoundaryPoint { p: y }) => {
            if x.chordal(y) < tol.vertex {
                IntersectionResult::SharedEnd { p: x }
            } else {
                IntersectionResult::Empty {
                    distance: f64::INFINITY,
                }
            }
        }
        (G::InteriorPoint { z }, G::InteriorPoint { z: w }) => {
            let d = hyperbolic_distance(z, w);
            if d < tol.vertex {
                IntersectionResult::InteriorPoint { z }
            } else {
                IntersectionResult::Empty { distance: d }
            }
        }
        _ => IntersectionResult::Empty {
            distance: f64::INFINITY,
        },
    }
}

/// The geodesic through two distinct points of the closed plane, oriented
/// from `a` to `b`.
pub fn line_through(a: Point, b: Point, tol: &Tolerances) -> Result<Line> {
    let line = match (a, b) {
        (Point::Ideal(x), Point::Ideal(y)) => {
            if x.chordal(y) < tol.vertex {
                return Err(Error::NoPerpendicular);
            }
            return Ok(Line::new(x, y));
        }
        (Point::Interior(z), Point::Interior(w)) => {
            if hyperbolic_distance(z, w) < tol.vertex {
                return Err(Error::NoPerpendicular);
            }
            let scale = 1.0 + z.norm().max(w.norm());
            if (z.re - w.re).abs() < 1e-13 * scale {
                Line::new(z.re, f64::INFINITY)
            } else {
                let c = (w.norm_sqr() - z.norm_sqr()) / (2.0 * (w.re - z.re));
                let r = (z - c).norm();
                Line::new(c - r, c + r)
            }
        }
        (Point::Interior(z), Point::Ideal(x)) | (Point::Ideal(x), Point::Interior(z)) => match x {
            Boundary::Infinity => Line::new(z.re, f64::INFINITY),
            Boundary::Finite(p) => {
                let scale = 1.0 + z.norm().max(p.abs());
                if (z.re - p).abs() < 1e-13 * scale {
                    Line::new(p, f64::INFINITY)
                } else {
                    let c = (z.norm_sqr() - p * p) / (2.0 * (z.re - p));
                    let other = 2.0 * c - p;
                    Line::new(p, other)
                }
            }
        },
    };
    Ok(orient_by(line, a, b, tol))
}

/// Orients `line` so that `a` comes before `b`.
fn orient_by(line: Line, a: Point, b: Point, tol: &Tolerances) -> Line {
    let ta = position_on(&line, a, tol);
    let tb = position_on(&line, b, tol);
    if ta > tb {
        line.reversed()
    } else {
        line
    }
}

/// Parameter along `line` of a point lying on it, or of the foot of a line
/// crossing it.
fn position_on(line: &Line, pt: Point, tol: &Tolerances) -> f64 {
    line.parameter_of_point(pt, tol.vertex)
}

fn foot_on(line: &Line, g: &GeneralizedGeodesic, tol: &Tolerances) -> f64 {
    match *g {
        GeneralizedGeodesic::Proper { p, q } => {
            match intersect_lines(line, &Line::new(p, q), tol) {
                IntersectionResult::InteriorPoint { z } => line.parameter_of(z),
                _ => f64::NAN,
            }
        }
        GeneralizedGeodesic::BoundaryPoint { p } => position_on(line, Point::Ideal(p), tol),
        GeneralizedGeodesic::InteriorPoint { z } => line.parameter_of(z),
    }
}

/// The unique proper geodesic perpendicular to (or, for point inputs,
/// through) both inputs, oriented from `g1` toward `g2`.
pub fn common_perpendicular(
    g1: &GeneralizedGeodesic,
    g2: &GeneralizedGeodesic,
    tol: &Tolerances,
) -> Result<Line> {
    use GeneralizedGeodesic as G;
    let line = match (*g1, *g2) {
        (G::Proper { p: a, q: b }, G::Proper { p: c, q: d }) => {
            let (l1, l2) = (Line::new(a, b), Line::new(c, d));
            match intersect_lines(&l1, &l2, tol) {
                IntersectionResult::Empty { .. } => {}
                _ => return Err(Error::NotDisjoint),
            }
            let m = reflection_product(&l1, &l2);
            let fp = m.boundary_fixed_points();
            match fp.as_slice() {
                [x, y] => Line::new(*x, *y),
                _ => return Err(Error::NumericalDegeneracy("no common perpendicular".into())),
            }
        }
        (G::Proper { p, q }, other) | (other, G::Proper { p, q }) => {
            let line = Line::new(p, q);
            let pt = other.as_point().expect("point variant");
            if line.contains(pt, tol.vertex) {
                return Err(Error::NotDisjoint);
            }
            let ht = HalfTurn::new(line);
            let mirror = match pt {
                Point::Interior(z) => Point::Interior(half_turn_apply(&ht, z)),
                Point::Ideal(x) => Point::Ideal(reflect_boundary(&line, x)),
            };
            line_through(pt, mirror, tol)?
        }
        (a, b) => {
            let (pa, pb) = (a.as_point().unwrap(), b.as_point().unwrap());
            if pa.gap(pb) < tol.vertex {
                return Err(Error::NoPerpendicular);
            }
            line_through(pa, pb, tol)?
        }
    };
    let (fa, fb) = (foot_on(&line, g1, tol), foot_on(&line, g2, tol));
    Ok(if fa > fb { line.reversed() } else { line })
}

pub fn reflect_boundary(line: &Line, x: Boundary) -> Boundary {
    let [a, b, c, d] = line.reflection();
    crate::moebius::mobius_boundary(a, b, c, d, x)
}

/// Three pairwise non-crossing geodesics bound a region iff none separates
/// the other two.
pub fn bounds_region(g1: &Line, g2: &Line, g3: &Line, tol: &Tolerances) -> bool {
    let lines = [*g1, *g2, *g3];
    for i in 0..3 {
        for j in (i + 1)..3 {
            if let IntersectionResult::InteriorPoint { .. } =
                intersect_lines(&lines[i], &lines[j], tol)
            {
                return false;
            }
            if lines[i].same_as(&lines[j], tol.vertex) {
                return false;
            }
        }
    }
    !any_separates(&lines, tol)
}

fn any_separates(lines: &[Line; 3], tol: &Tolerances) -> bool {
    (0..3).any(|i| {
        let mut seen = 0i8;
        for (j, other) in lines.iter().enumerate() {
            if j == i {
                continue;
            }
            for x in [other.p, other.q] {
                let s = lines[i].side_of_boundary(x, tol.vertex);
                if s == 0 {
                    continue;
                }
                if seen != 0 && s != seen {
                    return true;
                }
                seen = s;
            }
        }
        false
    })
}

/// Direction (as an angle in the tangent plane, measured in the disc chart
/// centred at `at`) of the geodesic from `at` toward `toward`.
pub fn direction(at: Complex64, toward: Point) -> f64 {
    let shift = |w: Complex64| (w - at.re) / at.im;
    let w = match toward {
        Point::Interior(z) => {
            let s = shift(z);
            (s - Complex64::i()) / (s + Complex64::i())
        }
        Point::Ideal(Boundary::Infinity) => Complex64::new(1.0, 0.0),
        Point::Ideal(Boundary::Finite(x)) => {
            let s = shift(Complex64::new(x, 0.0));
            (s - Complex64::i()) / (s + Complex64::i())
        }
    };
    w.arg()
}

/// Unsigned angle in [0, pi] at `at` between the geodesics toward `u` and `v`.
pub fn angle_at(at: Complex64, u: Point, v: Point) -> f64 {
    let mut d = (direction(at, u) - direction(at, v)).abs();
    if d > PI {
        d = 2.0 * PI - d;
    }
    d
}

/// Classification of `H_{l1} H_{l2}`.
pub fn product_class(l1: &Line, l2: &Line, tol: &Tolerances) -> ElementClass {
    classify(&reflection_product(l1, l2), tol)
}
