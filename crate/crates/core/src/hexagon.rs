//! The axis/half-turn hexagon of a generator pair and the recognizer for the
//! eleven discrete stopping configurations.

use std::f64::consts::PI;
use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::geodesic::{
    angle_at, common_perpendicular, intersect, intersect_lines, involution_line,
    reflection_product, GeneralizedGeodesic, IntersectionResult, Line, Point,
};
use crate::moebius::{axis_of, classify, is_primitive_with, ElementClass, IsometryMatrix, Kind};
use crate::tolerance::Tolerances;

/// Index of each side in [`HexagonConfig::sides`].
pub const AX_A: usize = 0;
pub const SIDE_L: usize = 1;
pub const AX_B: usize = 2;
pub const SIDE_LB: usize = 3;
pub const AX_AINV_B: usize = 4;
pub const SIDE_LA: usize = 5;

pub const SIDE_NAMES: [&str; 6] = ["Ax_A", "L", "Ax_B", "L_B", "Ax_AinvB", "L_A"];

/// The hexagon with sides `(Ax_A, L, Ax_B, L_B, Ax_{A^-1 B}, L_A)`.
///
/// Every proper side is oriented along the boundary traversal, so side `i`
/// runs from vertex `i - 1` to vertex `i`, where vertex `i` is the incidence
/// of sides `i` and `i + 1`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HexagonConfig {
    #[serde(serialize_with = "ser_generators")]
    pub generators: [IsometryMatrix; 2],
    #[serde(serialize_with = "ser_sides")]
    pub sides: [GeneralizedGeodesic; 6],
    #[serde(serialize_with = "ser_vertices")]
    pub vertices: [IntersectionResult; 6],
    /// Classes of `A`, `B` and `A^-1 B`.
    pub classes: [ElementClass; 3],
    /// True when the hexagon lies to the right of the oriented line `L`.
    pub right_of_l: bool,
}

fn ser_generators<S: Serializer>(
    g: &[IsometryMatrix; 2],
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    #[derive(Serialize)]
    struct Pair<'a> {
        #[serde(rename = "A")]
        a: &'a IsometryMatrix,
        #[serde(rename = "B")]
        b: &'a IsometryMatrix,
    }
    Pair { a: &g[0], b: &g[1] }.serialize(s)
}

fn ser_sides<S: Serializer>(
    sides: &[GeneralizedGeodesic; 6],
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    #[derive(Serialize)]
    struct Side<'a> {
        name: &'a str,
        geodesic: &'a GeneralizedGeodesic,
    }
    let v: Vec<Side> = sides
        .iter()
        .zip(SIDE_NAMES)
        .map(|(g, name)| Side { name, geodesic: g })
        .collect();
    v.serialize(s)
}

fn ser_vertices<S: Serializer>(
    vs: &[IntersectionResult; 6],
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    #[derive(Serialize)]
    struct Vertex<'a> {
        between: [&'a str; 2],
        incidence: &'a IntersectionResult,
    }
    let v: Vec<Vertex> = vs
        .iter()
        .enumerate()
        .map(|(i, r)| Vertex {
            between: [SIDE_NAMES[i], SIDE_NAMES[(i + 1) % 6]],
            incidence: r,
        })
        .collect();
    v.serialize(s)
}

impl HexagonConfig {
    pub fn a(&self) -> IsometryMatrix {
        self.generators[0]
    }

    pub fn b(&self) -> IsometryMatrix {
        self.generators[1]
    }

    pub fn a_inv_b(&self) -> IsometryMatrix {
        self.generators[0].inverse() * self.generators[1]
    }

    fn line(&self, i: usize) -> Line {
        self.sides[i].as_line().expect("half-turn sides are proper")
    }

    /// The core geodesic `L`, oriented from `Ax_A` toward `Ax_B`.
    pub fn l(&self) -> Line {
        self.line(SIDE_L)
    }

    pub fn l_a(&self) -> Line {
        self.line(SIDE_LA)
    }

    pub fn l_b(&self) -> Line {
        self.line(SIDE_LB)
    }

    pub fn vertex(&self, i: usize) -> Point {
        self.vertices[i % 6].point().expect("adjacent sides meet")
    }

    /// `v_{A cap L_A}`.
    pub fn v_a_la(&self) -> Point {
        self.vertex(SIDE_LA)
    }

    /// `v_{L_A cap A^-1 B}`.
    pub fn v_la_ainv_b(&self) -> Point {
        self.vertex(AX_AINV_B)
    }

    /// Number of axis sides that degenerate to a point.
    pub fn degenerate_axis_count(&self) -> usize {
        [AX_A, AX_B, AX_AINV_B]
            .iter()
            .filter(|&&i| !self.sides[i].is_proper())
            .count()
    }

    /// Largest of the three reconstruction defects
    /// `|H_L H_{L_A} - A|`, `|H_L H_{L_B} - B|`, `|H_{L_A} H_{L_B} - A^-1 B|`.
    pub fn reconstruction_error(&self) -> f64 {
        let (l, la, lb) = (self.l(), self.l_a(), self.l_b());
        let ea = reflection_product(&l, &la).dist_mod_sign(&self.a());
        let eb = reflection_product(&l, &lb).dist_mod_sign(&self.b());
        let et = reflection_product(&la, &lb).dist_mod_sign(&self.a_inv_b());
        ea.max(eb).max(et)
    }
}

/// Builds the hexagon of `(A, B)`: `L` is the common perpendicular of the
/// axes, `L_A` and `L_B` the lines with `A = H_L H_{L_A}`, `B = H_L H_{L_B}`.
pub fn build_hexagon(
    a: &IsometryMatrix,
    b: &IsometryMatrix,
    tol: &Tolerances,
) -> Result<HexagonConfig> {
    let ax_a = axis_of(a, tol)?;
    let ax_b = axis_of(b, tol)?;
    match intersect(&ax_a, &ax_b, tol) {
        IntersectionResult::InteriorPoint { .. } => return Err(Error::IntersectingAxes),
        IntersectionResult::SharedEnd { .. } => return Err(Error::ElementaryGroup),
        IntersectionResult::Empty { .. } => {}
    }
    let l = common_perpendicular(&ax_a, &ax_b, tol)?;
    let la = involution_line(&l, a, tol)?;
    let lb = involution_line(&l, b, tol)?;
    assemble([*a, *b], l, la, lb, tol)
}

/// Builds the hexagon directly from the three half-turn lines, with
/// `A = H_L H_{L_A}` and `B = H_L H_{L_B}`.
pub fn hexagon_from_lines(l: Line, la: Line, lb: Line, tol: &Tolerances) -> Result<HexagonConfig> {
    let a = reflection_product(&l, &la);
    let b = reflection_product(&l, &lb);
    assemble([a, b], l, la, lb, tol)
}

/// Axis side of `H_{l1} H_{l2}` computed from the lines themselves, oriented
/// from `l1` toward `l2`.
fn axis_side(l1: &Line, l2: &Line, tol: &Tolerances) -> Result<GeneralizedGeodesic> {
    Ok(match intersect_lines(l1, l2, tol) {
        IntersectionResult::InteriorPoint { z } => GeneralizedGeodesic::InteriorPoint { z },
        IntersectionResult::SharedEnd { p } => GeneralizedGeodesic::BoundaryPoint { p },
        IntersectionResult::Empty { .. } => {
            common_perpendicular(&(*l1).into(), &(*l2).into(), tol)?.into()
        }
    })
}

fn orient_between(line: Line, from: Point, to: Point, tol: &Tolerances) -> Result<Line> {
    let s = line.parameter_of_point(from, tol.vertex);
    let t = line.parameter_of_point(to, tol.vertex);
    if s.is_nan() || t.is_nan() || s == t {
        return Err(Error::GeometryViolation(
            "side endpoints do not lie on the side".into(),
        ));
    }
    Ok(if s > t { line.reversed() } else { line })
}

fn assemble(
    generators: [IsometryMatrix; 2],
    l: Line,
    la: Line,
    lb: Line,
    tol: &Tolerances,
) -> Result<HexagonConfig> {
    if l.same_as(&la, tol.vertex) || l.same_as(&lb, tol.vertex) || la.same_as(&lb, tol.vertex) {
        return Err(Error::ElementaryGroup);
    }
    let mut sides = [
        axis_side(&la, &l, tol)?,
        l.into(),
        axis_side(&l, &lb, tol)?,
        lb.into(),
        axis_side(&lb, &la, tol)?,
        la.into(),
    ];
    let mut vertices = [IntersectionResult::Empty { distance: 0.0 }; 6];
    for i in 0..6 {
        vertices[i] = intersect(&sides[i], &sides[(i + 1) % 6], tol);
        if vertices[i].is_empty() {
            return Err(Error::GeometryViolation(format!(
                "{} and {} do not meet",
                SIDE_NAMES[i],
                SIDE_NAMES[(i + 1) % 6]
            )));
        }
    }
    let pt = |i: usize| vertices[i % 6].point().expect("checked above");
    for i in [SIDE_L, SIDE_LB, SIDE_LA] {
        let line = sides[i].as_line().expect("proper");
        sides[i] = orient_between(line, pt(i + 5), pt(i), tol)?.into();
    }
    let l = sides[SIDE_L].as_line().expect("proper");
    let signs: Vec<i8> = (2..6).map(|i| l.side_of(pt(i), tol.vertex)).collect();
    let right_of_l = signs.iter().any(|&s| s > 0) && signs.iter().all(|&s| s >= 0);
    let [a, b] = generators;
    let classes = [
        classify(&a, tol),
        classify(&b, tol),
        classify(&(a.inverse() * b), tol),
    ];
    Ok(HexagonConfig {
        generators,
        sides,
        vertices,
        classes,
        right_of_l,
    })
}

/// The eleven cyclic classes of type triples.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StoppingTag {
    HHH,
    HPH,
    PPH,
    PPP,
    HEH,
    HEP,
    PEH,
    PEP,
    EEH,
    EEP,
    EEE,
}

impl StoppingTag {
    pub const ALL: [StoppingTag; 11] = [
        StoppingTag::HHH,
        StoppingTag::HPH,
        StoppingTag::PPH,
        StoppingTag::PPP,
        StoppingTag::HEH,
        StoppingTag::HEP,
        StoppingTag::PEH,
        StoppingTag::PEP,
        StoppingTag::EEH,
        StoppingTag::EEP,
        StoppingTag::EEE,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            StoppingTag::HHH => "HHH",
            StoppingTag::HPH => "HPH",
            StoppingTag::PPH => "PPH",
            StoppingTag::PPP => "PPP",
            StoppingTag::HEH => "HEH",
            StoppingTag::HEP => "HEP",
            StoppingTag::PEH => "PEH",
            StoppingTag::PEP => "PEP",
            StoppingTag::EEH => "EEH",
            StoppingTag::EEP => "EEP",
            StoppingTag::EEE => "EEE",
        }
    }

    /// The tag whose letters are a cyclic rotation of `kinds`.
    pub fn from_kinds(kinds: [Kind; 3]) -> Option<StoppingTag> {
        (0..3).find_map(|r| {
            let s: String = (0..3).map(|i| kinds[(i + r) % 3].letter()).collect();
            Self::ALL.into_iter().find(|t| t.as_str() == s)
        })
    }
}

impl fmt::Display for StoppingTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl Serialize for StoppingTag {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Shape {
    Hexagon,
    Pentagon,
    Quadrilateral,
    Triangle,
}

impl Shape {
    pub fn from_degenerate_count(n: usize) -> Shape {
        match n {
            0 => Shape::Hexagon,
            1 => Shape::Pentagon,
            2 => Shape::Quadrilateral,
            _ => Shape::Triangle,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct StoppingClass {
    pub tag: StoppingTag,
    /// Types of `(A, B, A^-1 B)` in this order.
    #[serde(serialize_with = "ser_ordered")]
    pub ordered: [Kind; 3],
    pub shape: Shape,
}

fn ser_ordered<S: Serializer>(k: &[Kind; 3], s: S) -> std::result::Result<S::Ok, S::Error> {
    let txt: String = k.iter().map(|k| k.letter()).collect();
    s.serialize_str(&txt)
}

/// Why a hexagon is not a discrete stopping configuration.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "reason", rename_all = "snake_case")]
pub enum NotStopping {
    IdentityElement {
        which: String,
    },
    NonConvex {
        side: String,
    },
    InfiniteOrderElliptic {
        which: String,
    },
    NonPrimitiveElliptic {
        which: String,
        order: u64,
    },
    VertexAngle {
        which: String,
        angle: f64,
        expected: f64,
    },
}

impl fmt::Display for NotStopping {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NotStopping::IdentityElement { which } => write!(f, "{which} is the identity"),
            NotStopping::NonConvex { side } => write!(f, "non-convex at side {side}"),
            NotStopping::InfiniteOrderElliptic { which } => {
                write!(f, "{which} is elliptic of infinite order")
            }
            NotStopping::NonPrimitiveElliptic { which, order } => {
                write!(f, "{which} is a non-primitive elliptic of order {order}")
            }
            NotStopping::VertexAngle {
                which,
                angle,
                expected,
            } => {
                write!(
                    f,
                    "interior angle {angle} at the fixed point of {which}, expected {expected}"
                )
            }
        }
    }
}

const GENERATOR_NAMES: [&str; 3] = ["A", "B", "A^-1 B"];

/// Recognizes the discrete stopping configurations: the hexagon must be
/// convex and every elliptic among `A`, `B`, `A^-1 B` must be primitive with
/// interior angle `pi / order` at its fixed point.
pub fn classify_stopping(
    h: &HexagonConfig,
    tol: &Tolerances,
) -> std::result::Result<StoppingClass, NotStopping> {
    let kinds = h.classes.map(|c| c.kind());
    if let Some(i) = kinds.iter().position(|&k| k == Kind::I) {
        return Err(NotStopping::IdentityElement {
            which: GENERATOR_NAMES[i].into(),
        });
    }
    check_convex(h, tol)?;
    // fixed point of A sits where L_A meets L, etc.
    let axis_index = [AX_A, AX_B, AX_AINV_B];
    for (i, class) in h.classes.iter().enumerate() {
        if let ElementClass::Elliptic { finite_order, .. } = class {
            let which = GENERATOR_NAMES[i].to_string();
            let Some(order) = *finite_order else {
                return Err(NotStopping::InfiniteOrderElliptic { which });
            };
            if !is_primitive_with(class, tol).unwrap_or(false) {
                return Err(NotStopping::NonPrimitiveElliptic { which, order });
            }
            let side = axis_index[i];
            let Some(Point::Interior(z)) = h.sides[side].as_point() else {
                return Err(NotStopping::NonConvex {
                    side: SIDE_NAMES[side].into(),
                });
            };
            let angle = angle_at(z, h.vertex(side + 1), h.vertex(side + 4));
            let expected = PI / order as f64;
            if (angle - expected).abs() > tol.vertex.max(1e-9) {
                return Err(NotStopping::VertexAngle {
                    which,
                    angle,
                    expected,
                });
            }
        }
    }
    Ok(StoppingClass {
        tag: StoppingTag::from_kinds(kinds).expect("every H/P/E triple has a tag"),
        ordered: kinds,
        shape: Shape::from_degenerate_count(h.degenerate_axis_count()),
    })
}

fn check_convex(h: &HexagonConfig, tol: &Tolerances) -> std::result::Result<(), NotStopping> {
    let mut orientation = 0i8;
    for (i, side) in h.sides.iter().enumerate() {
        let Some(line) = side.as_line() else { continue };
        let fail = || NotStopping::NonConvex {
            side: SIDE_NAMES[i].into(),
        };
        let mut seen = 0i8;
        for j in 0..6 {
            let s = line.side_of(h.vertex(j), tol.vertex);
            if s == 0 {
                continue;
            }
            if seen != 0 && s != seen {
                return Err(fail());
            }
            seen = s;
        }
        if seen == 0 || (orientation != 0 && seen != orientation) {
            return Err(fail());
        }
        orientation = seen;
    }
    Ok(())
}

/// Re-roots the hexagon at `(B^-1, B^-1 A)`, `k` times. One step permutes the
/// type triple `(A, B, A^-1 B)` cyclically and shifts the sides by two.
/// Generators are recomputed from the half-turn lines.
pub fn cyclic_rotate(h: &HexagonConfig, k: i64) -> HexagonConfig {
    let k = k.rem_euclid(3) as usize;
    if k == 0 {
        return h.clone();
    }
    let shift = 2 * k;
    let mut out = HexagonConfig {
        generators: h.generators,
        sides: std::array::from_fn(|i| h.sides[(i + shift) % 6]),
        vertices: std::array::from_fn(|i| h.vertices[(i + shift) % 6]),
        classes: std::array::from_fn(|i| h.classes[(i + k) % 3]),
        right_of_l: h.right_of_l,
    };
    let (l, la, lb) = (out.l(), out.l_a(), out.l_b());
    out.generators = [reflection_product(&l, &la), reflection_product(&l, &lb)];
    out
}
