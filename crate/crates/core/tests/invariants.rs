//! Property tests for the cross-module invariants.

mod common;

use std::sync::Arc;

use causal_loops::emfield::{
    em_cochain, gauge_shift, smeared_field, stokes_check, surface_integral, Curve,
    GaugeFunctionFamily, QuadratureConfig, ScalarFunction,
};
use causal_loops::geometry::{DoubleCone, FourVector, PoincareElement, Tri};
use causal_loops::holonomy::{
    apply_gauge, cochain_from_rep, connection_axiom_defect, connection_from_rep,
    frame_change_gauge, mock_lattice_cochain, rep_from_cochain, Cochain, Connection, GaugeFamily,
    LoopRepresentation, UnitaryValue,
};
use causal_loops::loopgroup::{is_local, Letter, LoopWord, Path, PathFrameSystem, Word};
use causal_loops::simplex::{
    homotopy_identity_check, AffineSimplex, Chain, RationalPoint, TestFunctionTag,
};
use common::*;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn tag() -> TestFunctionTag {
    TestFunctionTag::bump(1, 0.05).unwrap()
}

fn arb_rational_chain() -> impl Strategy<Value = (Chain<RationalPoint>, RationalPoint)> {
    (1usize..=3).prop_flat_map(|n| {
        let vertex = prop::array::uniform4(-3i64..=3).prop_map(RationalPoint::from_integers);
        let term = (-3i64..=3, prop::collection::vec(vertex.clone(), n + 1));
        (prop::collection::vec(term, 1..=6), vertex).prop_map(|(terms, z)| {
            let mut chain = Chain::new();
            for (k, v) in terms {
                chain
                    .add_term(k, AffineSimplex::new(v, tag()).unwrap())
                    .unwrap();
            }
            (chain, z)
        })
    })
}

/// Letters over four fixed points (including degenerate ones), so cancellations are common.
fn arb_letter() -> impl Strategy<Value = Letter> {
    let pts = [
        FourVector::new(0.0, 0.0, 0.0, 0.0),
        FourVector::new(0.1, 1.0, 0.0, 0.0),
        FourVector::new(0.0, 1.0, 1.0, 0.0),
        FourVector::new(0.2, 0.0, 1.0, 0.5),
    ];
    (0usize..4, 0usize..4, any::<bool>()).prop_map(move |(i, j, inv)| {
        Letter::from_parts(
            AffineSimplex::new(vec![pts[i], pts[j]], tag()).unwrap(),
            inv,
        )
        .unwrap()
    })
}

fn arb_path() -> impl Strategy<Value = Path> {
    let pts = [
        FourVector::new(0.0, 0.0, 0.0, 0.0),
        FourVector::new(0.1, 1.0, 0.0, 0.0),
        FourVector::new(0.0, 1.0, 1.0, 0.0),
        FourVector::new(0.2, 0.0, 1.0, 0.5),
    ];
    prop::collection::vec(0usize..4, 2..10).prop_map(move |idx| {
        let v: Vec<FourVector> = idx.iter().map(|&i| pts[i]).collect();
        Path::polyline(&v, &tag()).unwrap()
    })
}

fn sorted_hulls(w: &Word) -> Vec<Vec<[u64; 4]>> {
    let mut hulls: Vec<Vec<[u64; 4]>> = w
        .support()
        .iter()
        .map(|b| {
            let mut h: Vec<[u64; 4]> = b.hull.iter().map(|v| v.0.map(f64::to_bits)).collect();
            h.sort();
            h
        })
        .collect();
    hulls.sort();
    hulls.dedup();
    hulls
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn boundary_squares_to_zero((chain, _) in arb_rational_chain()) {
        if chain.dim().unwrap_or(0) >= 2 {
            prop_assert!(chain.boundary().unwrap().boundary().unwrap().is_empty());
        }
    }

    #[test]
    fn cone_is_contracting_homotopy((chain, z) in arb_rational_chain()) {
        prop_assume!(!chain.is_empty());
        prop_assert!(homotopy_identity_check(&z, &chain).unwrap());
    }

    #[test]
    fn reduce_matches_rescanning_oracle(letters in prop::collection::vec(arb_letter(), 0..12)) {
        let w = Word::from_letters(letters.clone());
        let r = w.reduce();
        let expect = naive_reduce(&letters);
        prop_assert_eq!(r.letters(), expect.as_slice());
        prop_assert_eq!(r.reduce(), r.clone());
        prop_assert!(r.is_reduced());
        prop_assert!(w.then(&w.inverse()).reduce().is_empty());
    }

    #[test]
    fn reduction_keeps_endpoints(p in arb_path()) {
        let r = p.reduce();
        prop_assert_eq!(r.start(), p.start());
        prop_assert_eq!(r.end(), p.end());
    }

    #[test]
    fn support_is_covariant(letters in prop::collection::vec(arb_letter(), 0..8), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = poincare(&mut rng, 2.0);
        let w = Word::from_letters(letters);
        let moved: Word = w.poincare_act(&p);
        let mapped: Vec<_> = w.support().iter().map(|b| b.transformed(&p)).collect();
        let mut expect: Vec<Vec<[u64; 4]>> = mapped
            .iter()
            .map(|b| {
                let mut h: Vec<[u64; 4]> = b.hull.iter().map(|v| v.0.map(f64::to_bits)).collect();
                h.sort();
                h
            })
            .collect();
        expect.sort();
        expect.dedup();
        prop_assert_eq!(sorted_hulls(&moved), expect);
        // The reduced word's support is among the letters' supports.
        let all = sorted_hulls(&w);
        for h in sorted_hulls(&w.reduce()) {
            prop_assert!(all.contains(&h));
        }
    }

    #[test]
    fn locality_is_covariant(letters in prop::collection::vec(arb_letter(), 1..6), seed in any::<u64>(), radius in 2.0f64..6.0) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let o = DoubleCone::new(FourVector::new(0.1, 0.5, 0.5, 0.2), radius).unwrap();
        let w = Word::from_letters(letters);
        if is_local(&w, &o) == Tri::True {
            // Boosts inflate the certified support by ‖L‖, so only "not False" is guaranteed.
            let p = poincare(&mut rng, 2.0);
            prop_assert_ne!(is_local(&w.poincare_act(&p), &o.transformed(&p)), Tri::False);
            let t = PoincareElement::translation(vector(&mut rng, 3.0));
            prop_assert_ne!(is_local(&w.poincare_act(&t), &o.transformed(&t)), Tri::False);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn mock_round_trips_and_gauges(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let w: Arc<dyn Cochain> = Arc::new(
            mock_lattice_cochain(DoubleCone::new(FourVector::ZERO, 2.0).unwrap(), 1.0, 2).unwrap(),
        );
        let lambda: Arc<dyn LoopRepresentation> = Arc::new(rep_from_cochain(w.clone()));
        let w2 = cochain_from_rep(lambda.clone());
        let t = tag();
        let c = triangle(&mut rng, FourVector::ZERO, 1.0, &t);
        prop_assert!(w2.eval(&c).unwrap().distance(&w.eval(&c).unwrap()).unwrap() <= 1e-12);

        let pts: Vec<FourVector> = (0..4).map(|_| vector(&mut rng, 1.0)).collect();
        let closed = [pts.clone(), vec![pts[0]]].concat();
        let p = Path::polyline(&closed, &t).unwrap();
        let l2 = rep_from_cochain(Arc::new(w2));
        let value = lambda.eval_loop(&p).unwrap();
        prop_assert!(l2.eval_loop(&p).unwrap().distance(&value).unwrap() <= 1e-12);

        // Reduction invariance on p · q q̄.
        let q = Path::polyline(&[pts[0], pts[2], pts[1], pts[0]], &t).unwrap();
        let padded = Path::new(p.word().then(q.word()).then(q.inverse().word())).unwrap();
        prop_assert!(lambda.eval_loop(&padded).unwrap().distance(&value).unwrap() <= 1e-12);
        prop_assert!(lambda.eval_loop(&padded.reduce()).unwrap().distance(&value).unwrap() <= 1e-12);

        // Loop restoration and frame change between the Euclidean and a detour frame.
        let a = p.start();
        let frames_p = PathFrameSystem::Euclidean;
        let frames_q = PathFrameSystem::detour(FourVector::new(0.25, 0.0, 0.5, 0.0));
        let u_p: Arc<dyn Connection> = Arc::new(connection_from_rep(lambda.clone(), frames_p.clone()));
        let u_q = connection_from_rep(lambda.clone(), frames_q.clone());
        prop_assert!(u_p.eval_path(&a, &p).unwrap().distance(&value).unwrap() <= 1e-12);
        let g: Arc<dyn GaugeFamily> = Arc::new(frame_change_gauge(lambda.clone(), frames_p, frames_q));
        prop_assert_eq!(g.eval(&a, &a).unwrap(), UnitaryValue::identity(&w.shape()));
        let gauged = apply_gauge(u_p.clone(), g.clone()).unwrap();
        let b = AffineSimplex::new(vec![pts[1], pts[3]], t.clone()).unwrap();
        prop_assert!(gauged.eval(&a, &b).unwrap().distance(&u_q.eval(&a, &b).unwrap()).unwrap() <= 1e-12);
        prop_assert!(connection_axiom_defect(&gauged, &a, std::slice::from_ref(&b)).unwrap() <= 1e-12);
        // u^g_a(p) = g_a(a) u_a(p) g_a(a)*.
        let ga = g.eval(&a, &a).unwrap();
        let conj = ga.mul(&u_p.eval_path(&a, &p).unwrap()).unwrap().mul(&ga.adjoint()).unwrap();
        prop_assert!(gauged.eval_path(&a, &p).unwrap().distance(&conj).unwrap() <= 1e-12);
        // Loop words multiply.
        let lw = LoopWord::new(vec![p.clone(), q.clone()]).unwrap();
        let prod = lambda.eval_loop(&q).unwrap().mul(&value).unwrap();
        prop_assert!(lambda.eval(&lw).unwrap().distance(&prod).unwrap() <= 1e-12);
    }

    #[test]
    fn mock_causal_and_covariant(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = mock_lattice_cochain(DoubleCone::new(FourVector::ZERO, 2.0).unwrap(), 1.0, 3).unwrap();
        let t = tag();
        let left = triangle(&mut rng, FourVector::new(0.0, -1.5, 0.0, 0.0), 0.4, &t);
        let right = triangle(&mut rng, FourVector::new(0.0, 1.5, 0.0, 0.0), 0.4, &t);
        let cl = m.cells_touched(&left).unwrap();
        let cr = m.cells_touched(&right).unwrap();
        prop_assume!(cl.iter().all(|j| !cr.contains(j)));
        prop_assert_eq!(m.eval(&left).unwrap().commutator_norm(&m.eval(&right).unwrap()).unwrap(), 0.0);
        let shift = PoincareElement::translation(FourVector::new(rng.random_range(-1.0..1.0), 1.0, 0.3, -0.2));
        if let Some((lhs, rhs)) = m.covariance_pair(&shift, &left).unwrap() {
            prop_assert!(lhs.distance(&rhs).unwrap() <= 1e-12);
        }
    }

    #[test]
    fn em_field_identities(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let tag = gaussian_tag();
        let cfg = QuadratureConfig::new(16).unwrap();
        for model in [constant_model(&mut rng), linear_model(&mut rng), plane_wave_model(&mut rng)] {
            let y = vector(&mut rng, 1.0);
            let f = smeared_field(&model, &tag, &y).unwrap();
            for m in 0..4 {
                for n in 0..4 {
                    prop_assert_eq!(f[m][n], -f[n][m]);
                }
            }
            let c = triangle(&mut rng, FourVector::ZERO, 1.0, &tag);
            let s = surface_integral(&model, &c, &cfg).unwrap();
            prop_assert_eq!(surface_integral(&model, &c.opposite().unwrap(), &cfg).unwrap(), -s);
            let z = vector(&mut rng, 1.0);
            prop_assert!(stokes_check(&model, &tag, &z, &c, &QuadratureConfig::new(32).unwrap()).unwrap() <= 1e-10);
            let g = GaugeFunctionFamily::new(ScalarFunction::Polynomial {
                coeffs: vec![rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0), rng.random_range(-0.3..0.3)],
            })
            .unwrap();
            let pts: Vec<FourVector> = (0..3).map(|_| vector(&mut rng, 1.0)).collect();
            let closed = Curve::polyline(vec![pts[0], pts[1], pts[2], pts[0]]).unwrap();
            let r = gauge_shift(&model, &tag, &g, &z, &closed, &cfg).unwrap();
            prop_assert!((r.shifted - r.original).abs() <= 1e-9);
        }
        let w = em_cochain(&plane_wave_model(&mut rng), &cfg).unwrap();
        let c = triangle(&mut rng, FourVector::ZERO, 1.0, &tag);
        prop_assert_eq!(w.eval(&c.opposite().unwrap()).unwrap(), w.eval(&c).unwrap().adjoint());
    }
}

use rand::Rng;
