use std::f64::consts::PI;

use num_complex::Complex64;
use rootadj_core::fixtures::{all_fixtures, stopping_fixture};
use rootadj_core::hexagon::{AX_A, AX_AINV_B, AX_B, SIDE_L, SIDE_LA, SIDE_LB};
use rootadj_core::*;

mod common;

use common::{crossing, through, tol};

fn hhh() -> HexagonConfig {
    stopping_fixture(StoppingTag::HHH).hexagon(&tol()).unwrap()
}

/// Side indices `(Ax_Y, L_Y, Ax_{X^-1 Y}, L_X, Ax_X)` for the rooted role.
fn side_roles(role: Role) -> [usize; 5] {
    match role {
        Role::A => [AX_B, SIDE_LB, AX_AINV_B, SIDE_LA, AX_A],
        Role::B => [AX_A, SIDE_LA, AX_AINV_B, SIDE_LB, AX_B],
    }
}

/// Sides whose segment the line crosses strictly between its end vertices.
fn crossed_segments(h: &HexagonConfig, line: &Line) -> Vec<usize> {
    let t = tol();
    let mut out = Vec::new();
    for j in 0..6 {
        let Some(side) = h.sides[j].as_line() else {
            continue;
        };
        let IntersectionResult::InteriorPoint { z } = intersect_lines(line, &side, &t) else {
            continue;
        };
        let u0 = side.parameter_of_point(h.vertex((j + 5) % 6), 1e-9);
        let u1 = side.parameter_of_point(h.vertex(j), 1e-9);
        let u = side.parameter_of(z);
        let (lo, hi) = if u0 < u1 { (u0, u1) } else { (u1, u0) };
        if u > lo + 1e-6 && u < hi - 1e-6 {
            out.push(j);
        }
    }
    out
}

#[test]
fn reduce_rational_power_examples() {
    assert_eq!(reduce_rational_power(5, 2), (2, 1));
    assert_eq!(reduce_rational_power(7, 3), (2, 1));
    assert_eq!(reduce_rational_power(6, 3), (2, 0));
}

#[test]
fn pure_power_is_inherited() {
    let t = tol();
    let v = decide_rational_power(&hhh(), Role::B, 6, 3, &t).unwrap();
    assert_eq!(v.outcome, Outcome::DiscreteFree);
    assert_eq!(v.clause, "Thm8.3-inherited");
}

#[test]
fn identity_root_keeps_the_group() {
    let t = tol();
    let v = decide_adjoin(&hhh(), Role::A, 1, 1, &t).unwrap();
    assert_eq!(v.outcome, Outcome::DiscreteFree);
    let heh = stopping_fixture(StoppingTag::HEH).hexagon(&t).unwrap();
    let v = decide_adjoin(&heh, Role::B, 1, 1, &t).unwrap();
    assert_eq!(v.outcome, Outcome::DiscreteNotFree);
    assert!(!v.clause.is_empty());
}

#[test]
fn fan_of_length_one_closes_on_l_x() {
    let t = tol();
    for f in all_fixtures() {
        let h = f.hexagon(&t).unwrap();
        for role in [Role::A, Role::B] {
            let fan = root_line_fan(&h, role, 1, 1, &t).unwrap();
            let l_x = if role == Role::A { h.l_a() } else { h.l_b() };
            assert!(fan.lines[0].line.same_as(&l_x, 1e-12));
            // with a point axis L_X ends at the vertex it shares with L_Y
            let expected = if h.sides[AX_AINV_B].is_proper() {
                ExitTag::Closure
            } else {
                ExitTag::VertexLYAxXinvY
            };
            assert_eq!(fan.lines[0].exit.tag, expected, "{} {role}", f.tag);
        }
    }
}

#[test]
fn square_root_line_bisects_the_axis_segment() {
    let t = tol();
    let h = hhh();
    let fan = root_line_fan(&h, Role::B, 2, 2, &t).unwrap();
    let ax_b = h.sides[AX_B].as_line().unwrap();
    let foot = |l: &Line| match intersect_lines(l, &ax_b, &t) {
        IntersectionResult::InteriorPoint { z } => z,
        other => panic!("no foot: {other:?}"),
    };
    let (f0, f1, f2) = (foot(&h.l()), foot(&fan.lines[0].line), foot(&h.l_b()));
    let (d1, d2) = (hyperbolic_distance(f0, f1), hyperbolic_distance(f1, f2));
    assert!((d1 - d2).abs() < 1e-8, "{d1} vs {d2}");
    assert!(d1 > 0.0);
}

#[test]
fn parabolic_fan_passes_through_the_fixed_point() {
    let t = tol();
    let h = stopping_fixture(StoppingTag::PPP).hexagon(&t).unwrap();
    let Some(Point::Ideal(x)) = h.sides[AX_A].as_point() else {
        panic!("A should have a boundary point axis");
    };
    let fan = root_line_fan(&h, Role::A, 3, 3, &t).unwrap();
    for fl in &fan.lines {
        assert!(fl.line.has_endpoint(x, 1e-9), "{:?}", fl.line);
    }
}

#[test]
fn fan_algebra_matches_rational_powers() {
    let t = tol();
    for f in all_fixtures() {
        let h = f.hexagon(&t).unwrap();
        for role in [Role::A, Role::B] {
            let x = if role == Role::A { h.a() } else { h.b() };
            for n in [2u64, 3, 5] {
                let Ok(fan) = root_line_fan(&h, role, n, n, &t) else {
                    continue;
                };
                for fl in &fan.lines {
                    let g = compose_half_turns(&HalfTurn::new(h.l()), &HalfTurn::new(fl.line), &t)
                        .unwrap();
                    // (H_L H_line)^n = X^s
                    let lhs = g.powi(n as i64);
                    let rhs = x.powi(fl.s as i64);
                    assert!(
                        lhs.dist_mod_sign(&rhs) < 1e-8,
                        "{} {role} s={} n={n}",
                        f.tag,
                        fl.s
                    );
                    if classify(&x, &t).kind() != Kind::E {
                        let p = rational_power(&x, fl.s as u32, n as u32, &t).unwrap();
                        assert!(g.dist_mod_sign(&p) < 1e-9);
                    }
                }
            }
        }
    }
}

#[test]
fn exit_tags_agree_with_segment_intersections() {
    let t = tol();
    for role in [Role::A, Role::B] {
        let h = hhh();
        let [ax_y, l_y, ax_t, l_x, ax_x] = side_roles(role);
        for n in [2u64, 3, 5, 8] {
            let fan = root_line_fan(&h, role, n - 1, n, &t).unwrap();
            for fl in &fan.lines {
                let crossed = crossed_segments(&h, &fl.line);
                for forbidden in [SIDE_L, l_x] {
                    assert!(!crossed.contains(&forbidden));
                }
                let exits: Vec<usize> = crossed.iter().copied().filter(|&j| j != ax_x).collect();
                let expected = match fl.exit.tag {
                    ExitTag::InteriorAxY => ax_y,
                    ExitTag::InteriorLY => l_y,
                    ExitTag::InteriorAxXinvY => ax_t,
                    other => panic!("unexpected vertex exit {other:?}"),
                };
                assert_eq!(exits, vec![expected], "{role} s={} n={n}", fl.s);
            }
        }
    }
}

#[test]
fn line_through_ideal_vertex_is_a_boundary_vertex_exit() {
    let t = tol();
    let h = stopping_fixture(StoppingTag::PPP).hexagon(&t).unwrap();
    // B parabolic; the vertex where L_A meets Ax_{A^-1 B} is ideal
    let v = h.v_la_ainv_b();
    assert!(v.is_ideal());
    let fixed = h.sides[AX_B].as_point().unwrap();
    let line = line_through(fixed, v, &t).unwrap();
    let e = exit_side(&h, Role::B, &line, &t).unwrap();
    assert_eq!(e.tag, ExitTag::VertexLYAxXinvY);
    assert!(e.boundary_vertex);
}

#[test]
fn hhh_square_root_clause_follows_the_exit() {
    let t = tol();
    let h = hhh();
    for role in [Role::A, Role::B] {
        let fan = root_line_fan(&h, role, 1, 2, &t).unwrap();
        let v = decide_adjoin(&h, role, 1, 2, &t).unwrap();
        assert_eq!(v.outcome, Outcome::DiscreteFree);
        let expected = match fan.lines[0].exit.tag {
            ExitTag::InteriorAxXinvY => "Thm8.2-IH-1",
            ExitTag::InteriorAxY => "Thm8.2-IH-2",
            other => panic!("unexpected exit {other:?}"),
        };
        assert_eq!(v.clause, expected);
        let [a, b, c] = v.certificate.unwrap();
        let cert = certify_region_free(&a, &b, &c, &t).unwrap();
        assert!(cert.free);
    }
}

fn crossing_order(h: &HexagonConfig, line: &Line) -> Option<u64> {
    let t = tol();
    let product = compose_half_turns(&HalfTurn::new(*line), &HalfTurn::new(h.l_a()), &t).unwrap();
    match classify(&product, &t) {
        ElementClass::Elliptic { finite_order, .. } => finite_order,
        _ => None,
    }
}

#[test]
fn primitive_crossing_through_l_y_is_discrete_not_free() {
    let t = tol();
    let h = crossing(1.5, 15.0 * PI / 80.0, PI / 3.0);
    assert_eq!(classify_stopping(&h, &t).unwrap().tag, StoppingTag::HHH);
    let fan = root_line_fan(&h, Role::B, 1, 2, &t).unwrap();
    assert_eq!(fan.lines[0].exit.tag, ExitTag::InteriorLY);
    assert_eq!(
        crossed_segments(&h, &fan.lines[0].line),
        vec![AX_B, SIDE_LA]
    );
    assert_eq!(crossing_order(&h, &fan.lines[0].line), Some(3));
    let v = decide_adjoin(&h, Role::B, 1, 2, &t).unwrap();
    assert_eq!(v.outcome, Outcome::DiscreteNotFree);
    assert_eq!(v.clause, "Thm8.1-3-primitive");
}

#[test]
fn crossing_at_a_seventh_is_discrete_not_free() {
    let t = tol();
    // L_A meets the square-root line outside the hexagon, at pi / 7
    let h = crossing(1.0, PI / 20.0, PI / 7.0);
    assert_eq!(classify_stopping(&h, &t).unwrap().tag, StoppingTag::HHH);
    let fan = root_line_fan(&h, Role::B, 1, 2, &t).unwrap();
    let product = compose_half_turns(
        &HalfTurn::new(fan.lines[0].line),
        &HalfTurn::new(h.l_a()),
        &t,
    )
    .unwrap();
    let ElementClass::Elliptic {
        rotation_angle,
        finite_order,
    } = classify(&product, &t)
    else {
        panic!("crossing product should be elliptic");
    };
    assert!((rotation_angle.abs() - 2.0 * PI / 7.0).abs() < 1e-9);
    assert_eq!(finite_order, Some(7));
    let v = decide_adjoin(&h, Role::B, 1, 2, &t).unwrap();
    assert_eq!(v.outcome, Outcome::DiscreteNotFree);
    assert_eq!(v.clause, "Thm8.1-3-primitive");
    assert_eq!(v.elliptics.len(), 1);
}

/// HHH configuration where `L_{B^{2/3}}` passes through the vertex of `L_A`
/// and `Ax_{A^-1 B}`, meeting `L_A` at `2 pi / 7`.
fn vertex_crossing() -> HexagonConfig {
    let t = tol();
    let rho = 0.6f64.exp();
    let build = |th: f64| {
        let p = Complex64::from_polar(rho, th);
        let tangent = Complex64::i() * p / rho;
        let ua = tangent * Complex64::from_polar(1.0, 2.0 * PI / 7.0);
        let l_a = through(p, ua);
        let ax_t = through(p, ua * Complex64::i());
        let rb = (ax_t.p.finite().unwrap() * ax_t.q.finite().unwrap()).sqrt();
        (rb.ln() - 0.9, l_a, Line::new(-rb, rb))
    };
    let (mut lo, mut hi) = (0.15, 0.3);
    assert!(build(lo).0 * build(hi).0 < 0.0);
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if build(lo).0 * build(mid).0 <= 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let (_, l_a, l_b) = build(lo);
    hexagon_from_lines(Line::new(-1.0, 1.0), l_a, l_b, &t).unwrap()
}

#[test]
fn non_primitive_vertex_rotation_needs_the_elliptic_algorithm() {
    let t = tol();
    let h = vertex_crossing();
    assert_eq!(classify_stopping(&h, &t).unwrap().tag, StoppingTag::HHH);
    let v = decide_adjoin(&h, Role::B, 2, 3, &t).unwrap();
    assert_eq!(v.outcome, Outcome::NeedsEllipticAlgorithm);
    assert_eq!(v.clause, "Thm8.2-II-interior-vertex");
    let e = classify(&v.elliptics[0], &t);
    assert!(!is_primitive(&e).unwrap());
    assert!(v.reduced_pair.is_some());
}

#[test]
fn needs_elliptic_carries_a_pair() {
    let t = tol();
    let h = stopping_fixture(StoppingTag::EEE).hexagon(&t).unwrap();
    let v = decide_adjoin(&h, Role::A, 1, 2, &t).unwrap();
    assert_eq!(v.outcome, Outcome::NeedsEllipticAlgorithm);
    assert!(v.reduced_pair.is_some());
    assert!(v.flags.contains(&Flag::IeReading {
        reading: IeReading::GeneralFormulation
    }));
}

#[test]
fn elliptic_clause_reading_is_switchable() {
    let t = tol();
    let h = stopping_fixture(StoppingTag::EEE).hexagon(&t).unwrap();
    let opts = AdjoinOptions {
        ie_reading: IeReading::NthRootSection,
    };
    let v = decide_adjoin_with(&h, Role::A, 1, 2, &t, &opts).unwrap();
    assert!(
        v.clause.starts_with("Thm7.1") || v.outcome == Outcome::NotDiscrete,
        "{v:?}"
    );
    assert!(v.flags.contains(&Flag::IeReading {
        reading: IeReading::NthRootSection
    }));
}

#[test]
fn elliptic_root_is_never_free() {
    let t = tol();
    for f in all_fixtures() {
        let h = f.hexagon(&t).unwrap();
        for role in [Role::A, Role::B] {
            let x = if role == Role::A { h.a() } else { h.b() };
            if classify(&x, &t).kind() != Kind::E {
                continue;
            }
            for (s, n) in [(1, 2), (1, 3), (2, 3)] {
                let v = decide_adjoin(&h, role, s, n, &t).unwrap();
                assert_ne!(v.outcome, Outcome::DiscreteFree, "{} {role} {s}/{n}", f.tag);
            }
        }
    }
}

#[test]
fn powers_above_one_reduce() {
    let t = tol();
    let h = hhh();
    for role in [Role::A, Role::B] {
        let v = decide_rational_power(&h, role, 5, 2, &t).unwrap();
        let (a, b) = match role {
            Role::A => (h.a().powi(2), h.b()),
            Role::B => (h.a(), h.b().powi(2)),
        };
        let h2 = build_hexagon(&a, &b, &t).unwrap();
        let w = decide_adjoin(&h2, role, 1, 2, &t).unwrap();
        assert_eq!(v.outcome, w.outcome);
    }
    assert!(matches!(
        decide_adjoin(&h, Role::A, 5, 2, &t),
        Err(Error::InvalidArgument(_))
    ));
}

#[test]
fn non_stopping_input_is_rejected() {
    let t = tol();
    let h = hexagon_from_lines(
        Line::new(-1.0, 1.0),
        Line::new(-3.0, -2.0),
        Line::new(-0.5, 0.5),
        &t,
    )
    .unwrap();
    assert!(matches!(
        decide_adjoin(&h, Role::A, 1, 2, &t),
        Err(Error::NotStoppingInput(_))
    ));
}

#[test]
fn verdict_json_shape() {
    let t = tol();
    let v = decide_adjoin(&hhh(), Role::B, 1, 2, &t).unwrap();
    let j = serde_json::to_value(&v).unwrap();
    assert_eq!(j["outcome"], "DiscreteFree");
    assert_eq!(j["clause"], "Thm8.2-IH-1");
    assert!(j["flags"].as_array().unwrap().is_empty());
    assert!(j.get("reduced_pair").is_some());
}
