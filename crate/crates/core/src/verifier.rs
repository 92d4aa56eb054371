//! Independent checks: region-bounding certificates for half-turn triples,
//! word searches for non-discreteness witnesses, a trace-reducing Nielsen
//! driver and a cross-checker for verdicts.

use std::f64::consts::PI;

use serde::Serialize;

use crate::adjoin::{Outcome, Verdict};
use crate::error::{Error, Result};
use crate::geodesic::{angle_at, intersect_lines, IntersectionResult, Line, Point};
use crate::hexagon::{build_hexagon, classify_stopping};
use crate::moebius::{
    best_rational, classify, is_primitive_with, ElementClass, IsometryMatrix, Kind,
    MAX_ORDER_DENOMINATOR,
};
use crate::tolerance::Tolerances;

/// A fundamental region for the group generated by three half-turns.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegionCertificate {
    pub lines: [Line; 3],
    /// Side of each line on which the region lies (+1 right, -1 left).
    pub sides: [i8; 3],
    /// True when no two lines cross in the interior.
    pub free: bool,
    /// Orders of the rotations at interior vertices of the region.
    pub vertex_orders: Vec<u64>,
}

/// Certifies that the three half-turns generate a discrete group: some
/// choice of half-planes gives a region to which every line contributes a
/// side, and every interior crossing is a vertex of angle `pi / k`.
pub fn certify_region_free(
    g1: &Line,
    g2: &Line,
    g3: &Line,
    tol: &Tolerances,
) -> Option<RegionCertificate> {
    let lines = [*g1, *g2, *g3];
    for i in 0..3 {
        for j in (i + 1)..3 {
            if lines[i].same_as(&lines[j], tol.vertex) {
                return None;
            }
        }
    }
    let meets: [[IntersectionResult; 3]; 3] = std::array::from_fn(|i| {
        std::array::from_fn(|j| intersect_lines(&lines[i], &lines[j], tol))
    });
    for mask in 0..8u8 {
        let sides: [i8; 3] = std::array::from_fn(|i| if mask >> i & 1 == 0 { 1 } else { -1 });
        if let Some(orders) = region_for(&lines, &meets, sides, tol) {
            return Some(RegionCertificate {
                lines,
                sides,
                free: orders.is_empty(),
                vertex_orders: orders,
            });
        }
    }
    None
}

fn region_for(
    lines: &[Line; 3],
    meets: &[[IntersectionResult; 3]; 3],
    sides: [i8; 3],
    tol: &Tolerances,
) -> Option<Vec<u64>> {
    // each line keeps a segment of positive length inside the other half-planes
    for i in 0..3 {
        let (mut lo, mut hi) = (f64::NEG_INFINITY, f64::INFINITY);
        for j in (0..3).filter(|&j| j != i) {
            match meets[i][j] {
                IntersectionResult::InteriorPoint { z } => {
                    let u = lines[i].parameter_of(z);
                    let probe = Point::Interior(lines[i].point_at(u + 1.0));
                    if lines[j].side_of(probe, 0.0) == sides[j] {
                        lo = lo.max(u);
                    } else {
                        hi = hi.min(u);
                    }
                }
                _ => {
                    let probe = Point::Interior(lines[i].point_at(0.0));
                    if lines[j].side_of(probe, 0.0) != sides[j] {
                        return None;
                    }
                }
            }
        }
        if hi - lo <= tol.vertex {
            return None;
        }
    }
    let mut orders = Vec::new();
    for (i, j, k) in [(0, 1, 2), (0, 2, 1), (1, 2, 0)] {
        let IntersectionResult::InteriorPoint { z } = meets[i][j] else {
            continue;
        };
        let s = lines[k].side_of(Point::Interior(z), tol.vertex);
        if s != sides[k] {
            return None;
        }
        let ray = |a: usize, b: usize| {
            let u = lines[a].parameter_of(z);
            let fwd = lines[a].point_at(u + 1.0);
            if lines[b].side_of(Point::Interior(fwd), 0.0) == sides[b] {
                Point::Interior(fwd)
            } else {
                Point::Interior(lines[a].point_at(u - 1.0))
            }
        };
        let angle = angle_at(z, ray(i, j), ray(j, i));
        let m = (PI / angle).round();
        if m < 2.0 || (angle - PI / m).abs() > tol.vertex {
            return None;
        }
        orders.push(m as u64);
    }
    Some(orders)
}

/// One letter of a word: generator index and exponent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Letter {
    pub generator: usize,
    pub exponent: i64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WordWitness {
    /// Freely reduced, with runs of the same generator merged.
    pub word: Vec<Letter>,
    pub matrix: IsometryMatrix,
    /// Distance to the identity, or the irrationality residual of the
    /// rotation angle.
    pub defect: f64,
}

pub const WORD_BUDGET: u64 = 10_000_000;

/// Number of freely reduced words of length 1..=max_len on `k` generators.
fn word_count(k: usize, max_len: usize) -> u64 {
    let letters = 2 * k as u64;
    let mut total = 0u64;
    let mut layer = letters;
    for _ in 0..max_len {
        total = total.saturating_add(layer);
        layer = layer.saturating_mul(letters.saturating_sub(1));
    }
    total
}

fn merge_letters(word: &[(usize, i64)]) -> Vec<Letter> {
    let mut out: Vec<Letter> = Vec::new();
    for &(g, e) in word {
        match out.last_mut() {
            Some(last) if last.generator == g => last.exponent += e,
            _ => out.push(Letter {
                generator: g,
                exponent: e,
            }),
        }
    }
    out
}

/// Raw word: (generator, +1 or -1) per letter.
type RawWord = Vec<(usize, i64)>;
type Visitor<'a> = &'a mut dyn FnMut(&[(usize, i64)], &IsometryMatrix) -> bool;

/// Visits freely reduced words in breadth-first order (by length, then by
/// letter order `g0, g0^-1, g1, ...`) until `visit` returns true.
fn enumerate_words(
    gens: &[IsometryMatrix],
    max_len: usize,
    visit: Visitor,
) -> Result<Option<(RawWord, IsometryMatrix)>> {
    let count = word_count(gens.len(), max_len);
    if count > WORD_BUDGET {
        return Err(Error::BudgetExceeded {
            words: count,
            budget: WORD_BUDGET,
        });
    }
    let letters: Vec<(usize, i64, IsometryMatrix)> = gens
        .iter()
        .enumerate()
        .flat_map(|(i, g)| [(i, 1, *g), (i, -1, g.inverse())])
        .collect();
    let mut word = Vec::with_capacity(max_len);
    for len in 1..=max_len {
        if let Some(m) = walk(&letters, len, &mut word, IsometryMatrix::IDENTITY, visit) {
            return Ok(Some((word, m)));
        }
    }
    Ok(None)
}

fn walk(
    letters: &[(usize, i64, IsometryMatrix)],
    remaining: usize,
    word: &mut RawWord,
    acc: IsometryMatrix,
    visit: Visitor,
) -> Option<IsometryMatrix> {
    if remaining == 0 {
        return visit(word, &acc).then_some(acc);
    }
    for &(g, e, m) in letters {
        if let Some(&(pg, pe)) = word.last() {
            if pg == g && pe == -e {
                continue;
            }
        }
        word.push((g, e));
        let next = (acc * m).renormalized();
        if let Some(found) = walk(letters, remaining - 1, word, next, visit) {
            return Some(found);
        }
        word.pop();
    }
    None
}

/// First freely reduced word within `delta` of the identity (modulo sign).
pub fn near_identity_search(
    gens: &[IsometryMatrix],
    max_len: usize,
    delta: f64,
) -> Result<Option<WordWitness>> {
    if max_len > 12 {
        return Err(Error::InvalidArgument("max_len is limited to 12".into()));
    }
    let found = enumerate_words(gens, max_len, &mut |_, m| m.identity_defect() < delta)?;
    Ok(found.map(|(w, m)| WordWitness {
        word: merge_letters(&w),
        defect: m.identity_defect(),
        matrix: m,
    }))
}

/// First word that is elliptic with a rotation angle not recognized as a
/// rational multiple of `2 pi`.
pub fn infinite_order_elliptic_witness(
    gens: &[IsometryMatrix],
    max_len: usize,
    tol: &Tolerances,
) -> Result<Option<WordWitness>> {
    if max_len > 10 {
        return Err(Error::InvalidArgument("max_len is limited to 10".into()));
    }
    let mut residual = 0.0;
    let found = enumerate_words(gens, max_len, &mut |_, m| match classify(m, tol) {
        // rounding in long products blurs parabolics into tiny rotations
        _ if 2.0 - m.trace().abs() < trace_noise(m, tol) => false,
        ElementClass::Elliptic {
            rotation_angle,
            finite_order: None,
        } => {
            let (fit, best) =
                best_rational(rotation_angle / (2.0 * PI), MAX_ORDER_DENOMINATOR, tol.alg);
            if fit.is_none() && best.residual >= 10.0 * tol.alg {
                residual = best.residual;
                true
            } else {
                false
            }
        }
        _ => false,
    })?;
    Ok(found.map(|(w, m)| WordWitness {
        word: merge_letters(&w),
        matrix: m,
        defect: residual,
    }))
}

fn trace_noise(m: &IsometryMatrix, tol: &Tolerances) -> f64 {
    let norm2: f64 = m.entries().iter().map(|x| x * x).sum();
    tol.cls.max(1e-12 * norm2)
}

/// Evaluates a word in the generators.
pub fn evaluate_word(gens: &[IsometryMatrix], word: &[Letter]) -> IsometryMatrix {
    word.iter().fold(IsometryMatrix::IDENTITY, |acc, l| {
        (acc * gens[l.generator].powi(l.exponent)).renormalized()
    })
}

/// One Nielsen move: generator `replaced` becomes `P Q^{+-1}` where `Q` is
/// the other generator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Move {
    pub replaced: usize,
    pub inverse: bool,
}

impl Move {
    pub fn apply(&self, pair: [IsometryMatrix; 2]) -> [IsometryMatrix; 2] {
        let q = pair[1 - self.replaced];
        let q = if self.inverse { q.inverse() } else { q };
        let mut out = pair;
        out[self.replaced] = (pair[self.replaced] * q).renormalized();
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct FEntry {
    pub count: u64,
    /// Set when the entry stands for a primitive-power replacement of an
    /// elliptic rather than a run of Nielsen moves.
    pub primitive_power: bool,
}

/// Record of a reduction: the moves in order and their run lengths.
#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct FSequence {
    pub entries: Vec<FEntry>,
    pub moves: Vec<Move>,
}

impl FSequence {
    fn push(&mut self, m: Move) {
        match (self.moves.last(), self.entries.last_mut()) {
            (Some(prev), Some(e)) if *prev == m && !e.primitive_power => e.count += 1,
            _ => self.entries.push(FEntry {
                count: 1,
                primitive_power: false,
            }),
        }
        self.moves.push(m);
    }

    pub fn counts(&self) -> Vec<u64> {
        self.entries.iter().map(|e| e.count).collect()
    }

    pub fn replay(&self, pair: [IsometryMatrix; 2]) -> [IsometryMatrix; 2] {
        self.moves.iter().fold(pair, |p, m| m.apply(p))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ReductionStatus {
    Stopped,
    NeedsElliptic,
    NotFreeEvidence,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Reduction {
    pub pair: [IsometryMatrix; 2],
    pub fsequence: FSequence,
    pub status: ReductionStatus,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<WordWitness>,
}

fn is_stopping(pair: &[IsometryMatrix; 2], tol: &Tolerances) -> bool {
    build_hexagon(&pair[0], &pair[1], tol)
        .map(|h| classify_stopping(&h, tol).is_ok())
        .unwrap_or(false)
}

/// Trace-minimizing Nielsen reduction: with `P` the generator of larger
/// `|trace|` and `Q` the other, replace `P` by whichever of `P Q`, `P Q^-1`
/// has the smaller `|trace|`, while the largest `|trace|` strictly drops.
/// A witness refers to the returned pair.
pub fn nielsen_trace_reduce(
    a: &IsometryMatrix,
    b: &IsometryMatrix,
    max_iter: usize,
    tol: &Tolerances,
) -> Result<Reduction> {
    for g in [a, b] {
        if classify(g, tol).kind() != Kind::H {
            return Err(Error::InvalidArgument(
                "both generators must be hyperbolic".into(),
            ));
        }
    }
    if let Err(e @ (Error::IntersectingAxes | Error::ElementaryGroup)) = build_hexagon(a, b, tol) {
        return Err(e);
    }
    let mut pair = [*a, *b];
    let mut fseq = FSequence::default();
    let done = |pair, fsequence, status, witness| Reduction {
        pair,
        fsequence,
        status,
        witness,
    };
    for _ in 0..=max_iter {
        if is_stopping(&pair, tol) {
            return Ok(done(pair, fseq, ReductionStatus::Stopped, None));
        }
        if fseq.moves.len() >= max_iter {
            break;
        }
        let tr = [pair[0].trace().abs(), pair[1].trace().abs()];
        let big = if tr[1] > tr[0] { 1 } else { 0 };
        let candidates = [
            Move {
                replaced: big,
                inverse: false,
            },
            Move {
                replaced: big,
                inverse: true,
            },
        ];
        let (mv, next) = candidates
            .iter()
            .map(|m| (*m, m.apply(pair)))
            .fold(
                None::<(Move, [IsometryMatrix; 2])>,
                |best, (m, p)| match best {
                    Some((_, bp)) if bp[big].trace().abs() <= p[big].trace().abs() => best,
                    _ => Some((m, p)),
                },
            )
            .expect("two candidates");
        let new_max = next[0].trace().abs().max(next[1].trace().abs());
        let fresh = next[big];
        match classify(&fresh, tol) {
            ElementClass::Identity => {
                fseq.push(mv);
                let witness = WordWitness {
                    word: vec![Letter {
                        generator: big,
                        exponent: 1,
                    }],
                    matrix: fresh,
                    defect: fresh.identity_defect(),
                };
                return Ok(done(
                    next,
                    fseq,
                    ReductionStatus::NotFreeEvidence,
                    Some(witness),
                ));
            }
            ElementClass::Elliptic { rotation_angle, .. } => {
                fseq.push(mv);
                let (_, best) =
                    best_rational(rotation_angle / (2.0 * PI), MAX_ORDER_DENOMINATOR, tol.alg);
                let witness = WordWitness {
                    word: vec![Letter {
                        generator: big,
                        exponent: 1,
                    }],
                    matrix: fresh,
                    defect: best.residual,
                };
                return Ok(done(
                    next,
                    fseq,
                    ReductionStatus::NeedsElliptic,
                    Some(witness),
                ));
            }
            _ => {}
        }
        if new_max >= tr[0].max(tr[1]) {
            break;
        }
        fseq.push(mv);
        pair = next;
    }
    Ok(done(pair, fseq, ReductionStatus::Inconclusive, None))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckStatus {
    Agreement,
    Disagreement,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub status: CheckStatus,
    pub detail: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<RegionCertificate>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<WordWitness>,
}

impl Report {
    fn new(status: CheckStatus, detail: impl Into<String>) -> Self {
        Report {
            status,
            detail: detail.into(),
            certificate: None,
            witness: None,
        }
    }
}

pub const CHECK_MAX_LEN: usize = 8;
pub const CHECK_DELTA: f64 = 1e-3;
const ELLIPTIC_SEARCH_LEN: usize = 6;

/// Half-turn lines of a verdict: its certificate, or the hexagon lines of
/// the adjoined pair.
fn verdict_lines(v: &Verdict, pair: &[IsometryMatrix; 2], tol: &Tolerances) -> Option<[Line; 3]> {
    if let Some(c) = v.certificate {
        return Some(c);
    }
    let h = build_hexagon(&pair[0], &pair[1], tol).ok()?;
    Some([h.l(), h.l_a(), h.l_b()])
}

fn elliptic_problem(g: &IsometryMatrix, tol: &Tolerances) -> Option<String> {
    let class = classify(g, tol);
    if class.kind() != Kind::E {
        return None;
    }
    match is_primitive_with(&class, tol) {
        Ok(true) => None,
        Ok(false) => Some(match class {
            ElementClass::Elliptic {
                finite_order: Some(q),
                ..
            } => format!("elliptic of order {q} is not primitive"),
            _ => "elliptic of infinite order".into(),
        }),
        Err(e) => Some(e.to_string()),
    }
}

/// Checks a verdict against independent evidence on the adjoined group.
/// `generators` stands in for the adjoined pair when the verdict carries none.
pub fn cross_check(v: &Verdict, generators: &[IsometryMatrix; 2], tol: &Tolerances) -> Report {
    let pair = v.reduced_pair.unwrap_or(*generators);
    if v.is_borderline() {
        return Report::new(CheckStatus::Inconclusive, "verdict is tolerance-sensitive");
    }
    let region =
        verdict_lines(v, &pair, tol).and_then(|[a, b, c]| certify_region_free(&a, &b, &c, tol));
    match v.outcome {
        Outcome::DiscreteFree => {
            let Some(cert) = region else {
                return match infinite_order_elliptic_witness(&pair, ELLIPTIC_SEARCH_LEN, tol) {
                    Ok(Some(w)) => {
                        let mut r =
                            Report::new(CheckStatus::Disagreement, "infinite-order elliptic word");
                        r.witness = Some(w);
                        r
                    }
                    _ => Report::new(CheckStatus::Inconclusive, "no region certificate found"),
                };
            };
            if !cert.free {
                let mut r = Report::new(CheckStatus::Disagreement, "region has rotation vertices");
                r.certificate = Some(cert);
                return r;
            }
            match near_identity_search(&pair, CHECK_MAX_LEN, CHECK_DELTA) {
                Ok(Some(w)) => {
                    let mut r = Report::new(CheckStatus::Disagreement, "word near the identity");
                    r.certificate = Some(cert);
                    r.witness = Some(w);
                    r
                }
                Ok(None) => {
                    let mut r = Report::new(
                        CheckStatus::Agreement,
                        "free region certified, no short relation",
                    );
                    r.certificate = Some(cert);
                    r
                }
                Err(e) => Report::new(CheckStatus::Inconclusive, e.to_string()),
            }
        }
        Outcome::DiscreteNotFree => {
            let mut checked: Vec<IsometryMatrix> = v.elliptics.clone();
            checked.extend([
                pair[0],
                pair[1],
                (pair[0].inverse() * pair[1]).renormalized(),
            ]);
            if let Some(p) = checked.iter().find_map(|g| elliptic_problem(g, tol)) {
                return Report::new(CheckStatus::Disagreement, p);
            }
            if !checked.iter().any(|g| classify(g, tol).kind() == Kind::E) {
                return Report::new(CheckStatus::Disagreement, "no elliptic element found");
            }
            match infinite_order_elliptic_witness(&pair, ELLIPTIC_SEARCH_LEN, tol) {
                Ok(Some(w)) => {
                    let mut r =
                        Report::new(CheckStatus::Disagreement, "infinite-order elliptic word");
                    r.witness = Some(w);
                    r
                }
                Ok(None) => {
                    let mut r = Report::new(
                        CheckStatus::Agreement,
                        "elliptics have finite primitive order",
                    );
                    r.certificate = region;
                    r
                }
                Err(e) => Report::new(CheckStatus::Inconclusive, e.to_string()),
            }
        }
        Outcome::NotDiscrete => {
            if let Some(cert) = region {
                let mut r = Report::new(CheckStatus::Disagreement, "region certificate found");
                r.certificate = Some(cert);
                return r;
            }
            match infinite_order_elliptic_witness(&pair, ELLIPTIC_SEARCH_LEN, tol) {
                Ok(Some(w)) => {
                    let mut r = Report::new(CheckStatus::Agreement, "infinite-order elliptic word");
                    r.witness = Some(w);
                    r
                }
                Ok(None) => match v.elliptics.iter().find_map(|g| elliptic_problem(g, tol)) {
                    Some(p) => Report::new(CheckStatus::Agreement, p),
                    None => Report::new(CheckStatus::Inconclusive, "no witness found"),
                },
                Err(e) => Report::new(CheckStatus::Inconclusive, e.to_string()),
            }
        }
        Outcome::NeedsEllipticAlgorithm => {
            let mut r = Report::new(CheckStatus::Inconclusive, "elliptic case left open");
            if let Ok(Some(w)) = infinite_order_elliptic_witness(&pair, ELLIPTIC_SEARCH_LEN, tol) {
                r.detail = "infinite-order elliptic word: not discrete".into();
                r.witness = Some(w);
            }
            r
        }
    }
}
