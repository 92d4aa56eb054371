//! Root-line fans and discreteness verdicts for adjoining a root or a
//! rational power of one generator of a stopping pair.

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geodesic::{
    hyperbolic_distance, intersect_lines, involution_line, reflection_product, GeneralizedGeodesic,
    IntersectionResult, Line, Point,
};
use crate::hexagon::{build_hexagon, classify_stopping, HexagonConfig, AX_AINV_B};
use crate::moebius::{
    classify, elliptic_rotation, gcd, is_primitive_with, ElementClass, IsometryMatrix, Kind,
};
use crate::tolerance::Tolerances;

/// Which generator receives the root.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Role {
    A,
    B,
}

impl Role {
    pub fn other(self) -> Role {
        match self {
            Role::A => Role::B,
            Role::B => Role::A,
        }
    }
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Role::A => "A",
            Role::B => "B",
        })
    }
}

/// The hexagon seen from the rooted generator `X`, with `Y` the other one.
#[derive(Debug, Clone)]
struct Frame {
    x: IsometryMatrix,
    y: IsometryMatrix,
    class_x: ElementClass,
    class_y: ElementClass,
    class_t: ElementClass,
    l: Line,
    l_x: Line,
    l_y: Line,
    ax_t: GeneralizedGeodesic,
    /// Endpoints of the L segment: at `Ax_X`, then at `Ax_Y`.
    l_ends: [Point; 2],
    /// `L cap Ax_Y`, `Ax_Y cap L_Y`, `L_Y cap Ax_{X^-1 Y}`, `Ax_{X^-1 Y} cap L_X`.
    w: [Point; 4],
}

fn frame(h: &HexagonConfig, role: Role) -> Frame {
    let v = |i: usize| h.vertex(i);
    match role {
        Role::A => Frame {
            x: h.a(),
            y: h.b(),
            class_x: h.classes[0],
            class_y: h.classes[1],
            class_t: h.classes[2],
            l: h.l(),
            l_x: h.l_a(),
            l_y: h.l_b(),
            ax_t: h.sides[AX_AINV_B],
            l_ends: [v(0), v(1)],
            w: [v(1), v(2), v(3), v(4)],
        },
        Role::B => Frame {
            x: h.b(),
            y: h.a(),
            class_x: h.classes[1],
            class_y: h.classes[0],
            class_t: h.classes[2],
            l: h.l(),
            l_x: h.l_b(),
            l_y: h.l_a(),
            ax_t: h.sides[AX_AINV_B],
            l_ends: [v(1), v(0)],
            w: [v(0), v(5), v(4), v(3)],
        },
    }
}

/// Where a fan line leaves the hexagon.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ExitTag {
    InteriorAxY,
    InteriorLY,
    InteriorAxXinvY,
    #[serde(rename = "VertexAxY_LY")]
    VertexAxYLY,
    #[serde(rename = "VertexLY_AxXinvY")]
    VertexLYAxXinvY,
    /// The line is `L_X` itself.
    Closure,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExitSide {
    pub tag: ExitTag,
    pub boundary_vertex: bool,
    pub borderline: bool,
}

/// Side of `pt` relative to `line`, with a flag for points inside the
/// borderline band but outside the snapping radius.
fn side_with_margin(line: &Line, pt: Point, tol: &Tolerances) -> (i8, bool) {
    let s = line.side_of(pt, tol.vertex);
    let near = match pt {
        Point::Interior(z) => line.signed_distance(z).abs() < tol.borderline(),
        Point::Ideal(x) => x.chordal(line.p).min(x.chordal(line.q)) < tol.borderline(),
    };
    (s, s != 0 && near)
}

/// Classifies where `line`, entering through `Ax_X`, leaves the hexagon.
pub fn exit_side(h: &HexagonConfig, role: Role, line: &Line, tol: &Tolerances) -> Result<ExitSide> {
    exit_in_frame(&frame(h, role), line, tol)
}

fn exit_in_frame(f: &Frame, line: &Line, tol: &Tolerances) -> Result<ExitSide> {
    if line.same_as(&f.l_x, tol.vertex) {
        return Ok(match f.ax_t {
            GeneralizedGeodesic::Proper { .. } => ExitSide {
                tag: ExitTag::Closure,
                boundary_vertex: false,
                borderline: false,
            },
            _ => ExitSide {
                tag: ExitTag::VertexLYAxXinvY,
                boundary_vertex: f.w[2].is_ideal(),
                borderline: false,
            },
        });
    }
    let mut signs = [0i8; 4];
    let mut borderline = false;
    for (i, w) in f.w.iter().enumerate() {
        let (s, near) = side_with_margin(line, *w, tol);
        signs[i] = s;
        borderline |= near;
    }
    let vertex = |tag, i: usize| ExitSide {
        tag,
        boundary_vertex: f.w[i].is_ideal(),
        borderline,
    };
    if signs[1] == 0 {
        return Ok(vertex(ExitTag::VertexAxYLY, 1));
    }
    if signs[2] == 0 {
        return Ok(vertex(ExitTag::VertexLYAxXinvY, 2));
    }
    if signs[0] == 0 {
        return Err(Error::GeometryViolation(
            "fan line passes through a vertex of L".into(),
        ));
    }
    if signs[3] == 0 {
        return Err(Error::GeometryViolation(
            "fan line passes through a vertex of L_X".into(),
        ));
    }
    if signs[0] == signs[3] {
        return Err(Error::GeometryViolation(
            "fan line does not separate L from L_X inside the hexagon".into(),
        ));
    }
    let tag = if signs[1] != signs[0] {
        ExitTag::InteriorAxY
    } else if signs[2] != signs[0] {
        ExitTag::InteriorLY
    } else {
        ExitTag::InteriorAxXinvY
    };
    Ok(ExitSide {
        tag,
        boundary_vertex: false,
        borderline,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FanLine {
    pub s: u64,
    pub line: Line,
    pub exit: ExitSide,
}

/// The lines `L_{X^{s/n}}` with `X^{s/n} = H_L H_{L_{X^{s/n}}}`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RootLineFan {
    #[serde(skip)]
    pub base: HexagonConfig,
    pub role: Role,
    pub n: u64,
    pub lines: Vec<FanLine>,
    /// Consecutive exponents `(s, s + 1)` whose lines leave through
    /// different sides.
    pub splitting: Vec<(u64, u64)>,
}

/// The line `L_{X^t}`, exactly `L_X` at `t = 1`.
fn power_line(f: &Frame, num: u64, den: u64, tol: &Tolerances) -> Result<Line> {
    if num == den {
        return Ok(f.l_x);
    }
    let t = num as f64 / den as f64;
    let g = x_power(f, t, tol)?;
    involution_line(&f.l, &g, tol)
}

/// `X^t`, turning a half-turn rotation toward the hexagon interior.
fn x_power(f: &Frame, t: f64, tol: &Tolerances) -> Result<IsometryMatrix> {
    if let ElementClass::Elliptic { rotation_angle, .. } = f.class_x {
        if (rotation_angle.abs() - std::f64::consts::PI).abs() < 1e-9 {
            let probe = elliptic_rotation(&f.x, 0.5 * rotation_angle, tol)?;
            let line = involution_line(&f.l, &probe, tol)?;
            let (s0, s3) = (
                line.side_of(f.w[0], tol.vertex),
                line.side_of(f.w[3], tol.vertex),
            );
            let sign = if s0 * s3 < 0 { 1.0 } else { -1.0 };
            return elliptic_rotation(&f.x, sign * rotation_angle * t, tol);
        }
    }
    f.x.real_power(t, tol)
}

fn stopping_check(h: &HexagonConfig, tol: &Tolerances) -> Result<()> {
    classify_stopping(h, tol)
        .map(|_| ())
        .map_err(|e| Error::NotStoppingInput(e.to_string()))
}

pub fn root_line_fan(
    h: &HexagonConfig,
    role: Role,
    s_max: u64,
    n: u64,
    tol: &Tolerances,
) -> Result<RootLineFan> {
    if n == 0 || s_max == 0 || s_max > n {
        return Err(Error::InvalidArgument(format!(
            "need 1 <= s_max <= n, got s_max={s_max}, n={n}"
        )));
    }
    stopping_check(h, tol)?;
    let f = frame(h, role);
    let mut lines = Vec::with_capacity(s_max as usize);
    for s in 1..=s_max {
        let line = power_line(&f, s, n, tol)?;
        let exit = exit_in_frame(&f, &line, tol)?;
        lines.push(FanLine { s, line, exit });
    }
    let splitting = lines
        .windows(2)
        .filter(|p| p[0].exit.tag != p[1].exit.tag)
        .map(|p| (p[0].s, p[1].s))
        .collect();
    Ok(RootLineFan {
        base: h.clone(),
        role,
        n,
        lines,
        splitting,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Outcome {
    DiscreteFree,
    DiscreteNotFree,
    NotDiscrete,
    NeedsEllipticAlgorithm,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Flag {
    /// An incidence was decided inside the borderline band.
    Borderline { detail: String },
    /// A rotation angle was near-rational beyond the denominator bound.
    UnresolvedOrder { ratio: f64 },
    /// Records which reading of the elliptic `X^-1 Y` clause was applied.
    IeReading { reading: IeReading },
}

/// Two incompatible statements of the clause for elliptic `X^-1 Y`: the
/// general formulation asks every fan line to meet `Ax_Y`, the n-th root
/// section asks every fan line to miss `Ax_Y`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IeReading {
    #[default]
    GeneralFormulation,
    NthRootSection,
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct AdjoinOptions {
    pub ie_reading: IeReading,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Verdict {
    pub outcome: Outcome,
    pub clause: String,
    pub flags: Vec<Flag>,
    /// Generators `(A', B')` of the adjoined group, in the original roles.
    /// Always present for `NeedsEllipticAlgorithm`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reduced_pair: Option<[IsometryMatrix; 2]>,
    /// Half-turn lines bounding a fundamental region for the adjoined group
    /// (together with their index-two extension).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<[Line; 3]>,
    /// Elliptic products whose primitivity the verdict relies on.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub elliptics: Vec<IsometryMatrix>,
}

impl Verdict {
    fn new(outcome: Outcome, clause: impl Into<String>) -> Self {
        Verdict {
            outcome,
            clause: clause.into(),
            flags: Vec::new(),
            reduced_pair: None,
            certificate: None,
            elliptics: Vec::new(),
        }
    }

    pub fn is_borderline(&self) -> bool {
        self.flags
            .iter()
            .any(|f| matches!(f, Flag::Borderline { .. }))
    }
}

/// `s = w n + r`.
pub fn reduce_rational_power(s: u64, n: u64) -> (u64, u64) {
    (s / n, s % n)
}

fn role_pair(role: Role, rooted: IsometryMatrix, other: IsometryMatrix) -> [IsometryMatrix; 2] {
    match role {
        Role::A => [rooted, other],
        Role::B => [other, rooted],
    }
}

fn has_elliptic(classes: &[ElementClass]) -> bool {
    classes.iter().any(|c| c.kind() == Kind::E)
}

/// Decides `<X^{s/n}, Y>` for `s <= n` with the default clause reading.
pub fn decide_adjoin(
    h: &HexagonConfig,
    role: Role,
    s: u64,
    n: u64,
    tol: &Tolerances,
) -> Result<Verdict> {
    decide_adjoin_with(h, role, s, n, tol, &AdjoinOptions::default())
}

/// Midpoint of the segment of `line` between two of its points.
fn segment_midpoint(line: &Line, a: Point, b: Point, tol: &Tolerances) -> Complex64 {
    let ta = line.parameter_of_point(a, tol.vertex);
    let tb = line.parameter_of_point(b, tol.vertex);
    let u = match (ta.is_finite(), tb.is_finite()) {
        (true, true) => 0.5 * (ta + tb),
        (true, false) => ta + tb.signum(),
        (false, true) => tb + ta.signum(),
        (false, false) => 0.0,
    };
    line.point_at(u)
}

struct Crossing {
    product: IsometryMatrix,
    at_vertex: bool,
}

pub fn decide_adjoin_with(
    h: &HexagonConfig,
    role: Role,
    s: u64,
    n: u64,
    tol: &Tolerances,
    opts: &AdjoinOptions,
) -> Result<Verdict> {
    if s == 0 || n == 0 {
        return Err(Error::InvalidArgument(
            "root exponent must be positive".into(),
        ));
    }
    stopping_check(h, tol)?;
    let g = gcd(s, n);
    let (s, n) = (s / g, n / g);
    if s > n {
        return Err(Error::InvalidArgument(format!(
            "{s}/{n} exceeds one; reduce the power first"
        )));
    }
    let f = frame(h, role);
    let base_classes = [f.class_x, f.class_y, f.class_t];
    let not_free = has_elliptic(&[f.class_x, f.class_y]);
    if s == n {
        let outcome = if has_elliptic(&base_classes) {
            Outcome::DiscreteNotFree
        } else {
            Outcome::DiscreteFree
        };
        let mut v = Verdict::new(outcome, "base-identity");
        v.reduced_pair = Some(role_pair(role, f.x, f.y));
        return Ok(v);
    }

    let z_gen = x_power(&f, s as f64 / n as f64, tol)?;
    let pair = role_pair(role, z_gen, f.y);
    // rungs sit at multiples of the smallest positive power of X in <X^{s/n}>
    let step = match f.class_x {
        ElementClass::Elliptic {
            finite_order: Some(q),
            ..
        } => gcd(s, q),
        _ => s,
    };
    let rung_count = n.div_ceil(step);
    let mut rungs = Vec::with_capacity(rung_count as usize + 1);
    rungs.push(f.l);
    for k in 1..=rung_count {
        rungs.push(power_line(&f, k * step, n, tol)?);
    }

    let mut flags = Vec::new();
    let mut crossings = Vec::new();
    let mut boundary_vertex = false;
    let near = |a: Point, b: Point| a.gap(b);
    for (k, r) in rungs.iter().enumerate().skip(1) {
        let end_gap = [r.p, r.q]
            .iter()
            .flat_map(|&x| [x.chordal(f.l_y.p), x.chordal(f.l_y.q)])
            .fold(f64::INFINITY, f64::min);
        if end_gap >= tol.vertex && end_gap < tol.borderline() {
            flags.push(Flag::Borderline {
                detail: format!("rung {k} nearly shares an end with L_Y"),
            });
        }
        match intersect_lines(r, &f.l_y, tol) {
            IntersectionResult::Empty { distance } => {
                if distance < tol.borderline() && end_gap >= tol.borderline() {
                    flags.push(Flag::Borderline {
                        detail: format!("rung {k} nearly touches L_Y"),
                    });
                }
            }
            IntersectionResult::SharedEnd { p } => {
                if [f.w[1], f.w[2]]
                    .iter()
                    .any(|&w| near(w, Point::Ideal(p)) < tol.vertex)
                {
                    boundary_vertex = true;
                }
            }
            IntersectionResult::InteriorPoint { z } => {
                let mut at_vertex = false;
                for w in [f.w[1], f.w[2]] {
                    if let Point::Interior(wz) = w {
                        let d = hyperbolic_distance(z, wz);
                        at_vertex |= d < tol.vertex;
                        if d >= tol.vertex && d < tol.borderline() {
                            flags.push(Flag::Borderline {
                                detail: format!("rung {k} crosses L_Y next to a vertex"),
                            });
                        }
                    }
                }
                crossings.push(Crossing {
                    product: reflection_product(r, &f.l_y),
                    at_vertex,
                });
            }
        }
    }

    let t_elliptic = f.class_t.kind() == Kind::E;
    if t_elliptic {
        flags.push(Flag::IeReading {
            reading: opts.ie_reading,
        });
    }
    let mut v = if crossings.is_empty() {
        free_side(&f, &rungs, s, n, not_free, boundary_vertex, tol)?
    } else {
        crossing_verdict(&f, &crossings, &mut flags, opts, tol)
    };
    if t_elliptic
        && opts.ie_reading == IeReading::NthRootSection
        && v.outcome != Outcome::NotDiscrete
    {
        // every fan line inside the hexagon must miss Ax_Y
        let inside = (1..rung_count).filter(|&k| k * step < n);
        let mut meets = false;
        for k in inside {
            let e = exit_in_frame(&f, &rungs[k as usize], tol)?;
            meets |= matches!(e.tag, ExitTag::InteriorAxY | ExitTag::VertexAxYLY);
        }
        v = if meets {
            Verdict::new(Outcome::NeedsEllipticAlgorithm, "Thm7.1-E")
        } else {
            Verdict {
                clause: "Thm7.1-E".into(),
                ..v
            }
        };
    }
    v.flags.extend(flags);
    v.reduced_pair = Some(pair);
    Ok(v)
}

fn clause_prefix(f: &Frame) -> &'static str {
    match f.class_x.kind() {
        Kind::P => "Thm8.2-III-",
        Kind::E => "Thm8.2-IV-",
        _ => "Thm8.2-",
    }
}

/// No rung crosses `L_Y`: two consecutive rungs and `L_Y` bound a region.
fn free_side(
    f: &Frame,
    rungs: &[Line],
    s: u64,
    n: u64,
    not_free: bool,
    boundary_vertex: bool,
    tol: &Tolerances,
) -> Result<Verdict> {
    let p_l = Point::Interior(segment_midpoint(&f.l, f.l_ends[0], f.l_ends[1], tol));
    let p_y = Point::Interior(segment_midpoint(&f.l_y, f.w[1], f.w[2], tol));
    let mut certificate = None;
    for k in 1..rungs.len() {
        let sl = rungs[k].side_of(p_l, tol.vertex);
        let sy = rungs[k].side_of(p_y, tol.vertex);
        if sl != 0 && sl == sy {
            certificate = Some([rungs[k - 1], rungs[k], f.l_y]);
            break;
        }
    }
    let Some(certificate) = certificate else {
        return Err(Error::GeometryViolation(
            "L_Y is not enclosed by the rungs".into(),
        ));
    };
    let inner = if boundary_vertex {
        "II-boundary-vertex".to_string()
    } else {
        match f.class_t.kind() {
            Kind::P => "IP".into(),
            Kind::E => "IE".into(),
            _ => {
                let first = power_line(f, s, n, tol)?;
                match exit_in_frame(f, &first, tol)?.tag {
                    ExitTag::InteriorAxXinvY => "IH-1".into(),
                    _ => "IH-2".into(),
                }
            }
        }
    };
    let outcome = if not_free {
        Outcome::DiscreteNotFree
    } else {
        Outcome::DiscreteFree
    };
    let mut v = Verdict::new(outcome, format!("{}{}", clause_prefix(f), inner));
    v.certificate = Some(certificate);
    Ok(v)
}

/// Some rung crosses `L_Y` in the interior, producing an elliptic.
fn crossing_verdict(
    f: &Frame,
    crossings: &[Crossing],
    flags: &mut Vec<Flag>,
    opts: &AdjoinOptions,
    tol: &Tolerances,
) -> Verdict {
    let mut worst = Outcome::DiscreteNotFree;
    let mut primitive_all = true;
    let mut infinite = false;
    let mut off_vertex = false;
    for c in crossings {
        off_vertex |= !c.at_vertex;
        let class = classify(&c.product, tol);
        let ElementClass::Elliptic { finite_order, .. } = class else {
            continue;
        };
        match is_primitive_with(&class, tol) {
            Ok(true) => {}
            Ok(false) if finite_order.is_some() => {
                primitive_all = false;
                worst = worst_of(worst, Outcome::NeedsEllipticAlgorithm);
            }
            Ok(false) => {
                infinite = true;
                primitive_all = false;
                worst = Outcome::NotDiscrete;
            }
            Err(Error::UnresolvedOrder { ratio }) => {
                flags.push(Flag::UnresolvedOrder { ratio });
                infinite = true;
                primitive_all = false;
                worst = Outcome::NotDiscrete;
            }
            Err(_) => {
                primitive_all = false;
                worst = worst_of(worst, Outcome::NeedsEllipticAlgorithm);
            }
        }
    }
    let t_elliptic = f.class_t.kind() == Kind::E;
    if t_elliptic
        && off_vertex
        && worst == Outcome::DiscreteNotFree
        && opts.ie_reading == IeReading::GeneralFormulation
    {
        let mut v = Verdict::new(Outcome::NeedsEllipticAlgorithm, "Thm8.2-IE-elliptic-case");
        v.elliptics = crossings.iter().map(|c| c.product).collect();
        return v;
    }
    let clause = if crossings.iter().all(|c| c.at_vertex) {
        "Thm8.2-II-interior-vertex"
    } else if infinite {
        "Thm8.1-3-infinite-order"
    } else if primitive_all {
        "Thm8.1-3-primitive"
    } else {
        "Thm8.1-3-nonprimitive"
    };
    let mut v = Verdict::new(worst, clause);
    v.elliptics = crossings.iter().map(|c| c.product).collect();
    v
}

fn worst_of(a: Outcome, b: Outcome) -> Outcome {
    let rank = |o: Outcome| match o {
        Outcome::DiscreteFree => 0,
        Outcome::DiscreteNotFree => 1,
        Outcome::NeedsEllipticAlgorithm => 2,
        Outcome::NotDiscrete => 3,
    };
    if rank(b) > rank(a) {
        b
    } else {
        a
    }
}

/// Decides `<X^{s/n}, Y>` for any positive `s/n`; powers above one are
/// rebuilt on `(X^w, Y)` with the remaining root `r/n`.
pub fn decide_rational_power(
    h: &HexagonConfig,
    role: Role,
    s: u64,
    n: u64,
    tol: &Tolerances,
) -> Result<Verdict> {
    decide_rational_power_with(h, role, s, n, tol, &AdjoinOptions::default())
}

pub fn decide_rational_power_with(
    h: &HexagonConfig,
    role: Role,
    s: u64,
    n: u64,
    tol: &Tolerances,
    opts: &AdjoinOptions,
) -> Result<Verdict> {
    if s == 0 || n == 0 {
        return Err(Error::InvalidArgument(
            "root exponent must be positive".into(),
        ));
    }
    let g = gcd(s, n);
    let (s, n) = (s / g, n / g);
    if s <= n {
        return decide_adjoin_with(h, role, s, n, tol, opts);
    }
    stopping_check(h, tol)?;
    let (w, r) = reduce_rational_power(s, n);
    let (a, b) = match role {
        Role::A => (h.a().powi(w as i64), h.b()),
        Role::B => (h.a(), h.b().powi(w as i64)),
    };
    let h2 = build_hexagon(&a, &b, tol)?;
    if r == 0 {
        stopping_check(&h2, tol)?;
        let outcome = if has_elliptic(&h2.classes) {
            Outcome::DiscreteNotFree
        } else {
            Outcome::DiscreteFree
        };
        let mut v = Verdict::new(outcome, "Thm8.3-inherited");
        v.reduced_pair = Some([a, b]);
        return Ok(v);
    }
    decide_adjoin_with(&h2, role, r, n, tol, opts)
}
