use proptest::prelude::*;
use rootadj_core::fixtures::hhh_from_endpoints;
use rootadj_core::*;

mod common;

use common::tol;

/// Six increasing reals from positive gaps.
fn endpoints() -> impl Strategy<Value = [f64; 6]> {
    (-5.0f64..5.0, prop::array::uniform6(0.2f64..3.0)).prop_map(|(start, gaps)| {
        let mut xs = [0.0; 6];
        let mut x = start;
        for (i, g) in gaps.iter().enumerate() {
            x += g;
            xs[i] = x;
        }
        xs
    })
}

fn roles() -> impl Strategy<Value = [usize; 3]> {
    prop::sample::select(vec![
        [0, 1, 2],
        [0, 2, 1],
        [1, 0, 2],
        [1, 2, 0],
        [2, 0, 1],
        [2, 1, 0],
    ])
}

fn moebius() -> impl Strategy<Value = IsometryMatrix> {
    (-2.0f64..2.0, -2.0f64..2.0, 0.3f64..3.0).prop_map(|(shift, tilt, scale)| {
        // z -> scale * z + shift, then a rotation about i
        let (s, c) = (tilt / 2.0).sin_cos();
        let r = IsometryMatrix::new(c, s, -s, c).unwrap();
        let a = IsometryMatrix::new(scale.sqrt(), shift / scale.sqrt(), 0.0, 1.0 / scale.sqrt())
            .unwrap();
        a * r
    })
}

fn moved(g: &IsometryMatrix, l: &Line) -> Line {
    Line::new(g.apply_boundary(l.p), g.apply_boundary(l.q))
}

/// Rotation turns of every elliptic in the verdict sit far from the
/// recognition threshold: either a small denominator fits exactly, or no
/// denominator up to 10^6 comes close.
fn robust(v: &Verdict) -> bool {
    v.elliptics.iter().all(|e| {
        let x = (e.trace().abs() / 2.0).min(1.0).acos() / std::f64::consts::PI;
        let (mut h0, mut h1, mut k0, mut k1) = (0.0f64, 1.0f64, 1.0f64, 0.0f64);
        let mut r = x;
        loop {
            let a = r.floor();
            let (h, k) = (a * h1 + h0, a * k1 + k0);
            if k > 1e6 {
                return true;
            }
            let res = (k * x - h).abs();
            if res < 1e-6 {
                return k <= 1e3 && res < 1e-9;
            }
            (h0, h1, k0, k1) = (h1, h, k1, k);
            if (r - a).abs() < 1e-15 {
                return true;
            }
            r = 1.0 / (r - a);
        }
    })
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn exterior_triples_are_stopping_hhh(xs in endpoints(), r in roles()) {
        let t = tol();
        let f = hhh_from_endpoints(xs, r);
        let h = f.hexagon(&t).unwrap();
        let c = classify_stopping(&h, &t).unwrap();
        prop_assert_eq!(c.tag, StoppingTag::HHH);
        prop_assert_eq!(c.shape, Shape::Hexagon);
        let norm = |m: IsometryMatrix| m.entries().iter().map(|x| x * x).sum::<f64>().sqrt();
        prop_assert!(h.reconstruction_error() < 1e-12 * (1.0 + norm(h.a()) * norm(h.b())));
    }

    #[test]
    fn region_certificate_is_symmetric(xs in endpoints(), r in roles(), g in moebius()) {
        let t = tol();
        let f = hhh_from_endpoints(xs, [0, 1, 2]);
        let lines = [f.l, f.l_a, f.l_b];
        let base = certify_region_free(&lines[0], &lines[1], &lines[2], &t);
        prop_assert!(base.as_ref().is_some_and(|c| c.free));
        let p = certify_region_free(&lines[r[0]], &lines[r[1]], &lines[r[2]], &t);
        prop_assert_eq!(p.is_some(), base.is_some());
        let moved_lines = lines.map(|l| moved(&g, &l));
        let c = certify_region_free(&moved_lines[0], &moved_lines[1], &moved_lines[2], &t);
        prop_assert!(c.is_some_and(|c| c.free));
    }

    #[test]
    fn rotation_is_periodic_and_permutes_types(xs in endpoints(), k in -6i64..6) {
        let t = tol();
        let h = hhh_from_endpoints(xs, [1, 0, 2]).hexagon(&t).unwrap();
        let r = cyclic_rotate(&h, k);
        let back = cyclic_rotate(&r, 3 - k.rem_euclid(3));
        for i in 0..2 {
            prop_assert!(back.generators[i].dist_mod_sign(&h.generators[i]) < 1e-8);
        }
        prop_assert_eq!(back.sides, h.sides);
        prop_assert!(classify_stopping(&r, &t).is_ok());
    }

    #[test]
    fn fan_feet_are_equally_spaced(xs in endpoints(), n in 2u64..7) {
        let t = tol();
        let h = hhh_from_endpoints(xs, [1, 0, 2]).hexagon(&t).unwrap();
        let ax = h.sides[rootadj_core::hexagon::AX_B].as_line().unwrap();
        let fan = root_line_fan(&h, Role::B, n, n, &t).unwrap();
        let foot = |l: &Line| match intersect_lines(l, &ax, &t) {
            IntersectionResult::InteriorPoint { z } => Some(z),
            _ => None,
        };
        let mut feet = vec![foot(&h.l()).unwrap()];
        for fl in &fan.lines {
            feet.push(foot(&fl.line).unwrap());
        }
        let step = hyperbolic_distance(feet[0], feet[1]);
        for w in feet.windows(2) {
            prop_assert!((hyperbolic_distance(w[0], w[1]) - step).abs() < 1e-8);
        }
        let total = hyperbolic_distance(feet[0], feet[n as usize]);
        prop_assert!((total - n as f64 * step).abs() < 1e-7);
    }

    #[test]
    fn outcome_survives_rotation(xs in endpoints(), n in 2u64..5) {
        let t = tol();
        let h = hhh_from_endpoints(xs, [1, 0, 2]).hexagon(&t).unwrap();
        let base_b = decide_adjoin(&h, Role::B, 1, n, &t).unwrap();
        let base_a = decide_adjoin(&h, Role::A, 1, n, &t).unwrap();
        if !base_a.is_borderline() && !base_b.is_borderline() {
            // <B^{1/n}, A> = <(B^-1)^{1/n}, B^-1 A>
            let r1 = decide_adjoin(&cyclic_rotate(&h, 1), Role::A, 1, n, &t).unwrap();
            prop_assume!(robust(&r1) && robust(&base_b));
            prop_assert_eq!(r1.outcome, base_b.outcome);
            // <A^{1/n}, B> = <(A^-1)^{1/n}, A^-1 B>
            let r2 = decide_adjoin(&cyclic_rotate(&h, 2), Role::B, 1, n, &t).unwrap();
            prop_assume!(robust(&r2) && robust(&base_a));
            prop_assert_eq!(r2.outcome, base_a.outcome);
        }
    }

    #[test]
    fn nielsen_reduction_undoes_expansion(xs in endpoints(), moves in prop::collection::vec((0usize..2, any::<bool>()), 1..5)) {
        let t = tol();
        let (c, d) = hhh_from_endpoints(xs, [1, 0, 2]).generators();
        let mut pair = [c, d];
        for (i, inv) in moves {
            let q = if inv { pair[1 - i].inverse() } else { pair[1 - i] };
            pair[i] = pair[i] * q;
        }
        let r = nielsen_trace_reduce(&pair[0], &pair[1], 50, &t);
        // expansions can produce crossing axes, which the reduction rejects
        prop_assume!(r.is_ok());
        let r = r.unwrap();
        let replayed = r.fsequence.replay(pair);
        for i in 0..2 {
            prop_assert!(replayed[i].dist_mod_sign(&r.pair[i]) < 1e-12);
        }
        let mut current = pair;
        let mut max_tr = current[0].trace().abs().max(current[1].trace().abs());
        for m in &r.fsequence.moves {
            current = m.apply(current);
            let next = current[0].trace().abs().max(current[1].trace().abs());
            if r.status == ReductionStatus::Stopped {
                prop_assert!(next <= max_tr + 1e-9);
            }
            max_tr = next;
        }
        let total: u64 = r.fsequence.counts().iter().sum();
        prop_assert_eq!(total as usize, r.fsequence.moves.len());
    }

    #[test]
    fn words_evaluate_to_their_matrices(xs in endpoints(), len in 1usize..5) {
        let t = tol();
        let (a, b) = hhh_from_endpoints(xs, [1, 0, 2]).generators();
        let w = near_identity_search(&[a, b], len, f64::INFINITY).unwrap().unwrap();
        prop_assert_eq!(w.word.len(), 1);
        prop_assert!(evaluate_word(&[a, b], &w.word).dist_mod_sign(&w.matrix) < 1e-9);
        prop_assert!(infinite_order_elliptic_witness(&[a, b], len, &t).unwrap().is_none());
    }
}
