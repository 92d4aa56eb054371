use std::f64::consts::PI;

use rootadj_core::fixtures::{all_fixtures, stopping_fixture};
use rootadj_core::*;

mod common;

use common::{crossing, tol};

const INF: f64 = f64::INFINITY;

fn half_turns(l1: Line, l2: Line) -> IsometryMatrix {
    compose_half_turns(&HalfTurn::new(l1), &HalfTurn::new(l2), &tol()).unwrap()
}

/// Line through `i` making angle `phi` with the vertical.
fn tilted(phi: f64) -> Line {
    Line::new(-(phi / 2.0).tan(), 1.0 / (phi / 2.0).tan())
}

/// Rotation by `theta` about `i`, built directly.
fn rotation(theta: f64) -> IsometryMatrix {
    let (s, c) = (theta / 2.0).sin_cos();
    IsometryMatrix::new(c, s, -s, c).unwrap()
}

#[test]
fn region_triple_is_certified_free() {
    let t = tol();
    let c = certify_region_free(
        &Line::new(-3.0, -1.0),
        &Line::new(-0.5, 0.5),
        &Line::new(1.0, 3.0),
        &t,
    )
    .unwrap();
    assert!(c.free);
    assert!(c.vertex_orders.is_empty());
}

#[test]
fn ideal_contacts_are_certified_free() {
    let t = tol();
    let c = certify_region_free(
        &Line::new(0.0, 1.0),
        &Line::new(1.0, 2.0),
        &Line::new(2.0, 3.0),
        &t,
    )
    .unwrap();
    assert!(c.free);
}

#[test]
fn crossing_at_primitive_angle_is_certified_not_free() {
    let t = tol();
    let (l1, l2, l3) = (Line::new(0.0, INF), tilted(PI / 5.0), Line::new(4.0, 6.0));
    let c = certify_region_free(&l1, &l2, &l3, &t).unwrap();
    assert!(!c.free);
    assert_eq!(c.vertex_orders, vec![5]);
    let class = classify(&half_turns(l1, l2), &t);
    assert!(is_primitive(&class).unwrap());
    assert!(matches!(
        class,
        ElementClass::Elliptic {
            finite_order: Some(5),
            ..
        }
    ));
}

#[test]
fn crossing_at_non_primitive_angle_is_not_certified() {
    let t = tol();
    let (l1, l2, l3) = (
        Line::new(0.0, INF),
        tilted(2.0 * PI / 5.0),
        Line::new(4.0, 6.0),
    );
    assert!(certify_region_free(&l1, &l2, &l3, &t).is_none());
    assert!(!is_primitive(&classify(&half_turns(l1, l2), &t)).unwrap());
}

#[test]
fn separating_line_is_not_certified() {
    let t = tol();
    assert!(certify_region_free(
        &Line::new(-3.0, -2.0),
        &Line::new(-1.0, 1.0),
        &Line::new(-0.5, 0.5),
        &t
    )
    .is_none());
}

#[test]
fn certified_triples_have_no_short_relations() {
    let t = tol();
    for f in all_fixtures() {
        let Some(c) = certify_region_free(&f.l, &f.l_a, &f.l_b, &t) else {
            continue;
        };
        if !c.free {
            continue;
        }
        let (a, b) = f.generators();
        assert!(
            near_identity_search(&[a, b], 8, 1e-3).unwrap().is_none(),
            "{}",
            f.tag
        );
        assert!(
            infinite_order_elliptic_witness(&[a, b], 6, &t)
                .unwrap()
                .is_none(),
            "{}",
            f.tag
        );
    }
}

#[test]
fn rotation_by_one_radian_returns_near_identity() {
    let delta = 0.15;
    let w = near_identity_search(&[rotation(1.0)], 12, delta)
        .unwrap()
        .unwrap();
    // oracle: first k with k radians within delta of a full turn
    let k = (1..=12)
        .find(|&k| rotation(k as f64).identity_defect() < delta)
        .unwrap();
    assert_eq!(w.word.len(), 1);
    assert_eq!(w.word[0].exponent.unsigned_abs(), k);
    assert!(w.defect < delta);
    assert!(evaluate_word(&[rotation(1.0)], &w.word).dist_mod_sign(&w.matrix) < 1e-9);
}

#[test]
fn near_identity_generator_is_a_length_one_word() {
    let m = IsometryMatrix::new(1.0, 1e-5, 0.0, 1.0).unwrap();
    let w = near_identity_search(
        &[IsometryMatrix::new(2.0, 0.0, 0.0, 0.5).unwrap(), m],
        4,
        1e-3,
    )
    .unwrap()
    .unwrap();
    assert_eq!(
        w.word,
        vec![Letter {
            generator: 1,
            exponent: 1
        }]
    );
}

#[test]
fn word_budget_is_enforced() {
    let g = rotation(0.3);
    assert!(matches!(
        near_identity_search(&[g; 4], 12, 1e-3),
        Err(Error::BudgetExceeded { .. })
    ));
    assert!(matches!(
        near_identity_search(&[g], 13, 1e-3),
        Err(Error::InvalidArgument(_))
    ));
    assert!(matches!(
        infinite_order_elliptic_witness(&[g], 11, &tol()),
        Err(Error::InvalidArgument(_))
    ));
}

#[test]
fn irrational_crossing_is_a_length_one_witness() {
    let t = tol();
    let e = half_turns(Line::new(0.0, INF), tilted(1.0));
    let w = infinite_order_elliptic_witness(&[e], 3, &t)
        .unwrap()
        .unwrap();
    assert_eq!(w.word.len(), 1);
    assert_eq!(w.word[0].exponent.abs(), 1);
    assert!(w.defect > 0.0);
}

#[test]
fn golden_crossing_yields_a_witness_at_the_product() {
    let t = tol();
    // L_A meets the square-root line at pi (1 - g), g the golden ratio conjugate
    let golden = (5f64.sqrt() - 1.0) / 2.0;
    let h = crossing(1.5, 15.0 * PI / 80.0, PI * (1.0 - golden));
    let fan = root_line_fan(&h, Role::B, 1, 2, &t).unwrap();
    assert_eq!(fan.lines[0].exit.tag, ExitTag::InteriorLY);
    let v = decide_adjoin(&h, Role::B, 1, 2, &t).unwrap();
    assert_eq!(v.outcome, Outcome::NotDiscrete);
    let pair = v.reduced_pair.unwrap();
    let w = infinite_order_elliptic_witness(&pair, 4, &t)
        .unwrap()
        .unwrap();
    // B^{1/2} A^{-1} or a conjugate: one letter of each generator
    assert_eq!(w.word.len(), 2);
    let ElementClass::Elliptic { rotation_angle, .. } = classify(&w.matrix, &t) else {
        panic!("witness must be elliptic");
    };
    let turns = rotation_angle.abs() / (2.0 * PI);
    assert!((turns - (1.0 - golden)).abs() < 1e-9 || (turns - golden).abs() < 1e-9);
}

#[test]
fn stopping_pair_needs_no_moves() {
    let t = tol();
    let (a, b) = stopping_fixture(StoppingTag::HHH).generators();
    let r = nielsen_trace_reduce(&a, &b, 20, &t).unwrap();
    assert_eq!(r.status, ReductionStatus::Stopped);
    assert!(r.fsequence.moves.is_empty());
    assert_eq!(r.pair, [a, b]);
}

#[test]
fn one_move_recovers_the_stopping_pair() {
    let t = tol();
    let (c, d) = stopping_fixture(StoppingTag::HHH).generators();
    let start = [c, c * d];
    let r = nielsen_trace_reduce(&start[0], &start[1], 20, &t).unwrap();
    assert_eq!(r.status, ReductionStatus::Stopped);
    assert_eq!(r.fsequence.counts(), vec![1]);
    let replayed = r.fsequence.replay(start);
    for i in 0..2 {
        assert!(replayed[i].dist_mod_sign(&r.pair[i]) < 1e-12);
    }
    // the result is (C, D) up to conjugation by C
    assert!(r.pair[0].dist_mod_sign(&c) < 1e-9);
    assert!(
        r.pair[1].dist_mod_sign(&d.conjugate_by(&c)) < 1e-9 || r.pair[1].dist_mod_sign(&d) < 1e-9
    );
}

#[test]
fn irrational_product_stops_as_elliptic() {
    let t = tol();
    let l = Line::new(-4.0, -3.0);
    let (a, b) = (
        half_turns(l, Line::new(0.0, INF)),
        half_turns(l, tilted(1.0)),
    );
    let r = nielsen_trace_reduce(&a, &b, 20, &t).unwrap();
    assert_eq!(r.status, ReductionStatus::NeedsElliptic);
    let w = r.witness.unwrap();
    assert!(matches!(
        classify(&w.matrix, &t),
        ElementClass::Elliptic {
            finite_order: None,
            ..
        }
    ));
    let replayed = r.fsequence.replay([a, b]);
    assert!(evaluate_word(&replayed, &w.word).dist_mod_sign(&w.matrix) < 1e-9);
}

#[test]
fn reduction_rejects_crossing_axes() {
    let t = tol();
    let a = IsometryMatrix::new(2.0, 0.0, 0.0, 0.5).unwrap();
    let (c, s) = (2f64.cosh(), 2f64.sinh());
    let b = IsometryMatrix::new(c, s, s, c).unwrap();
    assert!(matches!(
        nielsen_trace_reduce(&a, &b, 10, &t),
        Err(Error::IntersectingAxes)
    ));
}

#[test]
fn square_root_verdict_agrees() {
    let t = tol();
    let h = stopping_fixture(StoppingTag::HHH).hexagon(&t).unwrap();
    let v = decide_adjoin(&h, Role::B, 1, 2, &t).unwrap();
    let r = cross_check(&v, &[h.a(), h.b()], &t);
    assert_eq!(r.status, CheckStatus::Agreement, "{}", r.detail);
    assert!(r.certificate.is_some());
}

#[test]
fn flipped_verdict_disagrees() {
    let t = tol();
    let h = stopping_fixture(StoppingTag::HHH).hexagon(&t).unwrap();
    let mut v = decide_adjoin(&h, Role::B, 1, 2, &t).unwrap();
    v.outcome = Outcome::NotDiscrete;
    assert_eq!(
        cross_check(&v, &[h.a(), h.b()], &t).status,
        CheckStatus::Disagreement
    );
    let mut v = decide_adjoin(&h, Role::B, 1, 3, &t).unwrap();
    assert_eq!(v.outcome, Outcome::NotDiscrete);
    v.outcome = Outcome::DiscreteFree;
    assert_eq!(
        cross_check(&v, &[h.a(), h.b()], &t).status,
        CheckStatus::Disagreement
    );
}

#[test]
fn borderline_verdict_is_inconclusive() {
    let t = tol();
    let h = stopping_fixture(StoppingTag::HHH).hexagon(&t).unwrap();
    let mut v = decide_adjoin(&h, Role::B, 1, 2, &t).unwrap();
    v.flags.push(Flag::Borderline {
        detail: "forced".into(),
    });
    assert_eq!(
        cross_check(&v, &[h.a(), h.b()], &t).status,
        CheckStatus::Inconclusive
    );
}

#[test]
fn fixture_verdicts_agree() {
    let t = tol();
    for f in all_fixtures() {
        let h = f.hexagon(&t).unwrap();
        for role in [Role::A, Role::B] {
            for (s, n) in [(1, 1), (1, 2), (1, 3), (2, 3)] {
                let v = decide_adjoin(&h, role, s, n, &t).unwrap();
                if v.is_borderline() || v.outcome == Outcome::NeedsEllipticAlgorithm {
                    continue;
                }
                let r = cross_check(&v, &[h.a(), h.b()], &t);
                assert_eq!(
                    r.status,
                    CheckStatus::Agreement,
                    "{} {role} {s}/{n}: {}",
                    f.tag,
                    r.detail
                );
            }
        }
    }
}
