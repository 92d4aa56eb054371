//! Orientation-preserving isometries of the upper half-plane as 2x2 real
//! matrices modulo sign.

use std::f64::consts::PI;
use std::fmt;
use std::ops::Mul;

use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::geodesic::{Boundary, GeneralizedGeodesic};
use crate::tolerance::Tolerances;

/// Largest denominator accepted when recognizing a rotation angle as a
/// rational multiple of 2pi.
pub const MAX_ORDER_DENOMINATOR: u64 = 1_000_000;

/// An element of PSL(2,R), stored as the determinant-one lift with
/// non-negative trace (or, for trace zero, first nonzero entry positive).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IsometryMatrix {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl IsometryMatrix {
    pub const IDENTITY: Self = Self {
        a: 1.0,
        b: 0.0,
        c: 0.0,
        d: 1.0,
    };

    /// Builds a matrix from arbitrary entries with positive determinant,
    /// scaling to determinant one and choosing the sign representative.
    pub fn new(a: f64, b: f64, c: f64, d: f64) -> Result<Self> {
        let det = a * d - b * c;
        if !det.is_finite() || ![a, b, c, d].iter().all(|x| x.is_finite()) {
            return Err(Error::InvalidArgument("non-finite matrix entry".into()));
        }
        if det <= 0.0 {
            return Err(Error::InvalidArgument(format!(
                "determinant must be positive, got {det}"
            )));
        }
        let s = if (det - 1.0).abs() <= 4.0 * f64::EPSILON {
            1.0
        } else {
            det.sqrt()
        };
        Ok(Self::raw(a / s, b / s, c / s, d / s).canonical())
    }

    /// Assumes determinant one; only fixes the sign representative.
    pub(crate) fn raw(a: f64, b: f64, c: f64, d: f64) -> Self {
        Self { a, b, c, d }
    }

    fn canonical(self) -> Self {
        let tr = self.a + self.d;
        let flip = if tr.abs() > 1e-12 {
            tr < 0.0
        } else {
            let first = [self.a, self.b, self.c, self.d]
                .into_iter()
                .find(|x| x.abs() > 1e-300)
                .unwrap_or(1.0);
            first < 0.0
        };
        if flip {
            Self::raw(-self.a, -self.b, -self.c, -self.d)
        } else {
            self
        }
    }

    /// Renormalizes the determinant (guards against drift in long products).
    pub(crate) fn renormalized(self) -> Self {
        let det = self.det();
        if det > 0.0 {
            let s = det.sqrt();
            Self::raw(self.a / s, self.b / s, self.c / s, self.d / s).canonical()
        } else {
            self.canonical()
        }
    }

    pub fn entries(&self) -> [f64; 4] {
        [self.a, self.b, self.c, self.d]
    }

    pub fn det(&self) -> f64 {
        self.a * self.d - self.b * self.c
    }

    pub fn trace(&self) -> f64 {
        self.a + self.d
    }

    pub fn inverse(&self) -> Self {
        Self::raw(self.d, -self.b, -self.c, self.a).canonical()
    }

    /// Integer power by repeated squaring.
    pub fn powi(&self, k: i64) -> Self {
        let mut base = if k < 0 { self.inverse() } else { *self };
        let mut e = k.unsigned_abs();
        let mut acc = Self::IDENTITY;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            e >>= 1;
        }
        acc
    }

    /// Max-entry distance modulo the global sign.
    pub fn dist_mod_sign(&self, other: &Self) -> f64 {
        let minus = max_abs([
            self.a - other.a,
            self.b - other.b,
            self.c - other.c,
            self.d - other.d,
        ]);
        let plus = max_abs([
            self.a + other.a,
            self.b + other.b,
            self.c + other.c,
            self.d + other.d,
        ]);
        minus.min(plus)
    }

    pub fn approx_eq(&self, other: &Self, eps: f64) -> bool {
        self.dist_mod_sign(other) < eps
    }

    /// Distance from the identity modulo sign.
    pub fn identity_defect(&self) -> f64 {
        self.dist_mod_sign(&Self::IDENTITY)
    }

    pub fn is_identity(&self, tol: &Tolerances) -> bool {
        self.identity_defect() < tol.alg
    }

    pub fn conjugate_by(&self, t: &Self) -> Self {
        *t * *self * t.inverse()
    }

    /// Action on a point of the closed upper half-plane.
    pub fn apply(&self, z: Complex64) -> Complex64 {
        (z * self.a + self.b) / (z * self.c + self.d)
    }

    /// Action on the boundary circle R u {inf}.
    pub fn apply_boundary(&self, x: Boundary) -> Boundary {
        mobius_boundary(self.a, self.b, self.c, self.d, x)
    }

    /// Fixed points on the boundary, as roots of c x^2 + (d - a) x - b = 0.
    /// Returns an empty vector for elliptic elements.
    pub fn boundary_fixed_points(&self) -> Vec<Boundary> {
        real_fixed_points(self.a, self.b, self.c, self.d)
    }

    /// Real power `self^t` along the one-parameter subgroup through `self`
    /// (positive multiplier branch for hyperbolics, principal angle for
    /// elliptics).
    pub fn real_power(&self, t: f64, tol: &Tolerances) -> Result<Self> {
        match classify(self, tol) {
            ElementClass::Identity => Err(Error::IdentityInput),
            ElementClass::Elliptic { rotation_angle, .. } => {
                elliptic_rotation(self, rotation_angle * t, tol)
            }
            ElementClass::Parabolic => {
                let m = self.canonical();
                let r = Self::raw(t * m.a - (t - 1.0), t * m.b, t * m.c, t * m.d - (t - 1.0));
                check_power(r.renormalized())
            }
            ElementClass::Hyperbolic { .. } => {
                let m = self.canonical();
                let ell = (m.trace() / 2.0).acosh();
                let sh = ell.sinh();
                if sh < tol.alg {
                    return Err(Error::NumericalDegeneracy(
                        "multiplier too close to one".into(),
                    ));
                }
                let p = (t * ell).sinh() / sh;
                let q = ((t - 1.0) * ell).sinh() / sh;
                let r = Self::raw(p * m.a - q, p * m.b, p * m.c, p * m.d - q);
                check_power(r.renormalized())
            }
        }
    }
}

fn check_power(r: IsometryMatrix) -> Result<IsometryMatrix> {
    if r.entries().iter().all(|x| x.is_finite()) && (r.det() - 1.0).abs() < 1e-6 {
        Ok(r)
    } else {
        Err(Error::NumericalDegeneracy(
            "power is ill-conditioned".into(),
        ))
    }
}

/// Rotation about the fixed point of the elliptic `m` by `angle`, using the
/// same sign convention as [`ElementClass::Elliptic`].
pub fn elliptic_rotation(
    m: &IsometryMatrix,
    angle: f64,
    tol: &Tolerances,
) -> Result<IsometryMatrix> {
    let ElementClass::Elliptic { rotation_angle, .. } = classify(m, tol) else {
        return Err(Error::InvalidArgument("not elliptic".into()));
    };
    let m = m.canonical();
    let half = rotation_angle / 2.0;
    let (s, c) = half.sin_cos();
    // m = cos(half) I + sin(half) J with J^2 = -I
    let j = [(m.a - c) / s, m.b / s, m.c / s, (m.d - c) / s];
    let (s2, c2) = (angle / 2.0).sin_cos();
    let r = IsometryMatrix::raw(c2 + s2 * j[0], s2 * j[1], s2 * j[2], c2 + s2 * j[3]);
    Ok(r.renormalized())
}

impl Mul for IsometryMatrix {
    type Output = IsometryMatrix;

    fn mul(self, o: IsometryMatrix) -> IsometryMatrix {
        IsometryMatrix::raw(
            self.a * o.a + self.b * o.c,
            self.a * o.b + self.b * o.d,
            self.c * o.a + self.d * o.c,
            self.c * o.b + self.d * o.d,
        )
        .canonical()
    }
}

impl fmt::Display for IsometryMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{}, {}], [{}, {}]]", self.a, self.b, self.c, self.d)
    }
}

impl Serialize for IsometryMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.entries().serialize(s)
    }
}

impl<'de> Deserialize<'de> for IsometryMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let [a, b, c, e] = <[f64; 4]>::deserialize(d)?;
        IsometryMatrix::new(a, b, c, e).map_err(serde::de::Error::custom)
    }
}

pub(crate) fn max_abs<const N: usize>(xs: [f64; N]) -> f64 {
    xs.into_iter().fold(0.0, |m, x| m.max(x.abs()))
}

pub(crate) fn mobius_boundary(a: f64, b: f64, c: f64, d: f64, x: Boundary) -> Boundary {
    match x {
        Boundary::Infinity => {
            if c == 0.0 {
                Boundary::Infinity
            } else {
                Boundary::Finite(a / c)
            }
        }
        Boundary::Finite(x) => {
            let den = c * x + d;
            if den == 0.0 {
                Boundary::Infinity
            } else {
                Boundary::Finite((a * x + b) / den)
            }
        }
    }
}

/// Real fixed points of x -> (a x + b)/(c x + d).
pub(crate) fn real_fixed_points(a: f64, b: f64, c: f64, d: f64) -> Vec<Boundary> {
    let scale = max_abs([a, b, c, d]).max(1e-300);
    // c x^2 + (d - a) x - b = 0
    let qb = d - a;
    let qc = -b;
    if c.abs() <= 1e-15 * scale {
        if qb.abs() <= 1e-15 * scale {
            return vec![Boundary::Infinity];
        }
        return vec![Boundary::Finite(-qc / qb), Boundary::Infinity];
    }
    let disc = qb * qb - 4.0 * c * qc;
    if disc < -1e-15 * scale * scale {
        return Vec::new();
    }
    let sq = disc.max(0.0).sqrt();
    if sq == 0.0 {
        return vec![Boundary::Finite(-qb / (2.0 * c))];
    }
    let sgn = if qb >= 0.0 { 1.0 } else { -1.0 };
    let q = -0.5 * (qb + sgn * sq);
    let r1 = q / c;
    let r2 = if q != 0.0 { qc / q } else { -r1 };
    vec![Boundary::Finite(r1), Boundary::Finite(r2)]
}

/// Geometric type tag.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Kind {
    H,
    P,
    E,
    I,
}

impl Kind {
    pub fn letter(self) -> char {
        match self {
            Kind::H => 'H',
            Kind::P => 'P',
            Kind::E => 'E',
            Kind::I => 'I',
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum ElementClass {
    Hyperbolic {
        translation_length: f64,
    },
    Parabolic,
    /// `rotation_angle` lies in (-pi, pi]. Positive angles are those of the
    /// lift `cos(t) I + sin(t) J` with `J` having positive lower-left entry.
    Elliptic {
        rotation_angle: f64,
        finite_order: Option<u64>,
    },
    Identity,
}

impl ElementClass {
    pub fn kind(&self) -> Kind {
        match self {
            ElementClass::Hyperbolic { .. } => Kind::H,
            ElementClass::Parabolic => Kind::P,
            ElementClass::Elliptic { .. } => Kind::E,
            ElementClass::Identity => Kind::I,
        }
    }
}

pub fn classify(m: &IsometryMatrix, tol: &Tolerances) -> ElementClass {
    let m = m.canonical();
    if m.is_identity(tol) {
        return ElementClass::Identity;
    }
    let tr = m.trace().abs();
    if tr > 2.0 + tol.cls {
        ElementClass::Hyperbolic {
            translation_length: 2.0 * (tr / 2.0).acosh(),
        }
    } else if tr < 2.0 - tol.cls {
        let mut angle = 2.0 * (tr / 2.0).min(1.0).acos();
        if m.c < 0.0 && angle < PI - 1e-15 {
            angle = -angle;
        }
        let finite_order = rotation_order(angle, tol).unwrap_or_default();
        ElementClass::Elliptic {
            rotation_angle: angle,
            finite_order,
        }
    } else {
        ElementClass::Parabolic
    }
}

/// Outcome of continued-fraction recognition of a real number as p/q.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RationalFit {
    pub numerator: u64,
    pub denominator: u64,
    /// |q x - p|: how far `q` applications of the rotation miss a full turn,
    /// measured in turns.
    pub residual: f64,
}

/// Scans continued-fraction convergents of `x` with denominator at most
/// `max_den` and returns the first whose residual `|q x - p|` is below
/// `tol`, or the best one seen.
pub fn best_rational(x: f64, max_den: u64, tol: f64) -> (Option<RationalFit>, RationalFit) {
    let x = x.abs();
    let (mut p0, mut q0, mut p1, mut q1) = (0u64, 1u64, 1u64, 0u64);
    let mut rest = x;
    let mut best = RationalFit {
        numerator: x.round() as u64,
        denominator: 1,
        residual: (x - x.round()).abs(),
    };
    for _ in 0..64 {
        let a = rest.floor();
        if a > 1e12 {
            break;
        }
        let a = a as u64;
        let p2 = a.saturating_mul(p1).saturating_add(p0);
        let q2 = a.saturating_mul(q1).saturating_add(q0);
        if q2 > max_den {
            break;
        }
        let fit = RationalFit {
            numerator: p2,
            denominator: q2,
            residual: (q2 as f64 * x - p2 as f64).abs(),
        };
        if fit.residual < best.residual {
            best = fit;
        }
        if fit.residual < tol {
            return (Some(fit), best);
        }
        (p0, q0, p1, q1) = (p1, q1, p2, q2);
        let frac = rest - rest.floor();
        if frac < 1e-300 {
            break;
        }
        rest = 1.0 / frac;
    }
    (None, best)
}

/// Order of a rotation by `angle`, if `angle / 2pi` is recognized as
/// rational. Near-misses within ten times the tolerance are unresolved.
pub fn rotation_order(angle: f64, tol: &Tolerances) -> Result<Option<u64>> {
    let ratio = (angle / (2.0 * PI)).abs();
    let (fit, best) = best_rational(ratio, MAX_ORDER_DENOMINATOR, tol.alg);
    match fit {
        Some(f) if f.numerator == 0 => Ok(None),
        Some(f) => Ok(Some(f.denominator)),
        None if best.residual < 10.0 * tol.alg => Err(Error::UnresolvedOrder { ratio }),
        None => Ok(None),
    }
}

/// Geometric primitivity: the rotation is a minimal one (angle +-2pi/k,
/// k >= 2) in the cyclic group it generates.
pub fn is_primitive_with(e: &ElementClass, tol: &Tolerances) -> Result<bool> {
    let ElementClass::Elliptic { rotation_angle, .. } = *e else {
        return Err(Error::InvalidArgument(
            "primitivity needs an elliptic".into(),
        ));
    };
    let ratio = (rotation_angle / (2.0 * PI)).abs();
    let (fit, best) = best_rational(ratio, MAX_ORDER_DENOMINATOR, tol.alg);
    match fit {
        Some(f) => Ok(f.numerator == 1 && f.denominator >= 2),
        None if best.residual < 10.0 * tol.alg => Err(Error::UnresolvedOrder { ratio }),
        None => Ok(false),
    }
}

pub fn is_primitive(e: &ElementClass) -> Result<bool> {
    is_primitive_with(e, &Tolerances::default())
}

pub fn nth_root(m: &IsometryMatrix, n: u32, tol: &Tolerances) -> Result<IsometryMatrix> {
    if n == 0 {
        return Err(Error::InvalidArgument("root index must be positive".into()));
    }
    m.real_power(1.0 / n as f64, tol)
}

/// `nth_root(m, n)^s` after reducing s/n to lowest terms.
pub fn rational_power(
    m: &IsometryMatrix,
    s: u32,
    n: u32,
    tol: &Tolerances,
) -> Result<IsometryMatrix> {
    if s == 0 || n == 0 {
        return Err(Error::InvalidArgument(
            "exponent parts must be positive".into(),
        ));
    }
    let g = gcd(s as u64, n as u64) as u32;
    let (s, n) = (s / g, n / g);
    let root = nth_root(m, n, tol)?;
    Ok(root.powi(s as i64).renormalized())
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Traceless matrix whose fixed points are the ends of an axis; normalized so
/// the largest entry has magnitude one.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LineMatrixRep {
    pub m: [f64; 4],
    /// Factor the raw matrix was divided by.
    pub scale: f64,
}

impl LineMatrixRep {
    fn from_raw(m: [f64; 4]) -> Result<Self> {
        let scale = max_abs(m);
        if scale < 1e-300 {
            return Err(Error::DegenerateLineMatrix);
        }
        Ok(Self {
            m: m.map(|x| x / scale),
            scale,
        })
    }

    pub fn trace(&self) -> f64 {
        self.m[0] + self.m[3]
    }

    /// Trace of the product `self * other`.
    pub fn trace_product(&self, o: &Self) -> f64 {
        self.m[0] * o.m[0] + self.m[1] * o.m[2] + self.m[2] * o.m[1] + self.m[3] * o.m[3]
    }

    pub fn fixed_points(&self) -> Vec<Boundary> {
        let [a, b, c, d] = self.m;
        real_fixed_points(a, b, c, d)
    }
}

pub fn line_matrix(m: &IsometryMatrix, tol: &Tolerances) -> Result<LineMatrixRep> {
    if m.is_identity(tol) {
        return Err(Error::DegenerateLineMatrix);
    }
    let m = m.canonical();
    let raw = if m.trace().abs() < tol.alg {
        // rotation by pi: m itself is traceless and fixes the same point
        [m.a, m.b, m.c, m.d]
    } else {
        [m.a - m.d, 2.0 * m.b, 2.0 * m.c, m.d - m.a]
    };
    if max_abs(raw) < tol.alg {
        return Err(Error::DegenerateLineMatrix);
    }
    LineMatrixRep::from_raw(raw)
}

/// Perpendicularity of axes through the vanishing of `tr(L_g L_f)`; also
/// meaningful for improper axes (parabolic fixed points).
pub fn axes_perpendicular(
    f: &IsometryMatrix,
    g: &IsometryMatrix,
    tol: &Tolerances,
) -> Result<bool> {
    let lf = line_matrix(f, tol)?;
    let lg = line_matrix(g, tol)?;
    // identical axes are excluded
    let same =
        lf.m.iter()
            .zip(lg.m.iter())
            .all(|(x, y)| (x - y).abs() < tol.geo)
            || lf
                .m
                .iter()
                .zip(lg.m.iter())
                .all(|(x, y)| (x + y).abs() < tol.geo);
    if same {
        return Ok(false);
    }
    Ok(lg.trace_product(&lf).abs() < tol.geo)
}

pub fn axis_of(m: &IsometryMatrix, tol: &Tolerances) -> Result<GeneralizedGeodesic> {
    match classify(m, tol) {
        ElementClass::Identity => Err(Error::IdentityInput),
        ElementClass::Hyperbolic { .. } => {
            let fp = m.boundary_fixed_points();
            if fp.len() != 2 {
                return Err(Error::NumericalDegeneracy(
                    "hyperbolic without two fixed points".into(),
                ));
            }
            // orient from repelling to attracting fixed point
            let (rep, att) = order_fixed_points(m, fp[0], fp[1]);
            Ok(GeneralizedGeodesic::Proper { p: rep, q: att })
        }
        ElementClass::Parabolic => {
            let m = m.canonical();
            let p = if m.c.abs() <= 1e-12 * max_abs(m.entries()) {
                Boundary::Infinity
            } else {
                Boundary::Finite((m.a - m.d) / (2.0 * m.c))
            };
            Ok(GeneralizedGeodesic::BoundaryPoint { p })
        }
        ElementClass::Elliptic { .. } => {
            let m = m.canonical();
            let tr = m.trace();
            let im = (4.0 - tr * tr).max(0.0).sqrt() / (2.0 * m.c.abs());
            let re = (m.a - m.d) / (2.0 * m.c);
            Ok(GeneralizedGeodesic::InteriorPoint {
                z: Complex64::new(re, im),
            })
        }
    }
}

/// Orders the two fixed points of a hyperbolic as (repelling, attracting).
fn order_fixed_points(m: &IsometryMatrix, x: Boundary, y: Boundary) -> (Boundary, Boundary) {
    // derivative at a finite fixed point x is 1/(c x + d)^2; < 1 means attracting
    let m = m.canonical();
    let attracting = |p: Boundary| match p {
        Boundary::Infinity => m.a.abs() > m.d.abs(),
        Boundary::Finite(x) => (m.c * x + m.d).abs() > 1.0,
    };
    if attracting(x) && !attracting(y) {
        (y, x)
    } else {
        (x, y)
    }
}
