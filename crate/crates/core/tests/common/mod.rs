//! Generators and brute-force oracles shared by the integration tests.
#![allow(dead_code)]

use causal_loops::emfield::{Bivector, FieldModel, ZERO_BIVECTOR};
use causal_loops::geometry::{FourVector, LorentzMatrix, PoincareElement};
use causal_loops::loopgroup::{Letter, Word};
use causal_loops::simplex::{AffineSimplex, TestFunctionTag};
use rand::Rng;

/// Leftmost-first rescanning reduction: delete the first degenerate letter or adjacent
/// cancelling pair, then start over.
pub fn naive_reduce(letters: &[Letter]) -> Vec<Letter> {
    let mut w = letters.to_vec();
    'outer: loop {
        for i in 0..w.len() {
            if w[i].is_degenerate() {
                w.remove(i);
                continue 'outer;
            }
            if i + 1 < w.len()
                && w[i].canonical_simplex() == w[i + 1].canonical_simplex()
                && w[i].is_inverted() != w[i + 1].is_inverted()
            {
                w.drain(i..i + 2);
                continue 'outer;
            }
        }
        return w;
    }
}

pub fn word(letters: Vec<Letter>) -> Word {
    Word::from_letters(letters)
}

pub fn vector<R: Rng>(rng: &mut R, scale: f64) -> FourVector {
    FourVector(std::array::from_fn(|_| rng.random_range(-scale..scale)))
}

pub fn gaussian_tag() -> TestFunctionTag {
    TestFunctionTag::gaussian_axes(7, [0.1, 0.12, 0.08, 0.1]).unwrap()
}

pub fn triangle<R: Rng>(
    rng: &mut R,
    center: FourVector,
    scale: f64,
    tag: &TestFunctionTag,
) -> AffineSimplex {
    let v = (0..3).map(|_| center + vector(rng, scale)).collect();
    AffineSimplex::new(v, tag.clone()).unwrap()
}

pub fn segment<R: Rng>(rng: &mut R, scale: f64, tag: &TestFunctionTag) -> AffineSimplex {
    AffineSimplex::new(vec![vector(rng, scale), vector(rng, scale)], tag.clone()).unwrap()
}

/// Product of random rotations and boosts with total rapidity at most `max_rapidity`.
pub fn lorentz<R: Rng>(rng: &mut R, max_rapidity: f64) -> LorentzMatrix {
    let mut l = LorentzMatrix::identity();
    let boosts = rng.random_range(1..=2);
    for _ in 0..3 {
        l = l * LorentzMatrix::rotation(rng.random_range(1..=3), rng.random_range(-3.0..3.0))
            .unwrap();
    }
    for _ in 0..boosts {
        let eta = rng.random_range(-max_rapidity..max_rapidity) / boosts as f64;
        l = l * LorentzMatrix::boost(rng.random_range(1..=3), eta).unwrap();
        l = l * LorentzMatrix::rotation(rng.random_range(1..=3), rng.random_range(-3.0..3.0))
            .unwrap();
    }
    l
}

pub fn poincare<R: Rng>(rng: &mut R, max_rapidity: f64) -> PoincareElement {
    PoincareElement::new(vector(rng, 1.0), lorentz(rng, max_rapidity))
}

pub fn antisymmetric<R: Rng>(rng: &mut R, scale: f64) -> Bivector {
    let mut c = ZERO_BIVECTOR;
    for m in 0..4 {
        for n in m + 1..4 {
            let v = rng.random_range(-scale..scale);
            c[m][n] = v;
            c[n][m] = -v;
        }
    }
    c
}

pub fn constant_model<R: Rng>(rng: &mut R) -> FieldModel {
    FieldModel::constant(antisymmetric(rng, 1.0)).unwrap()
}

pub fn linear_model<R: Rng>(rng: &mut R) -> FieldModel {
    let t: [Bivector; 4] = std::array::from_fn(|_| {
        std::array::from_fn(|_| std::array::from_fn(|_| rng.random_range(-1.0..1.0)))
    });
    FieldModel::linear_from_potential(antisymmetric(rng, 1.0), t).unwrap()
}

pub fn plane_wave_model<R: Rng>(rng: &mut R) -> FieldModel {
    let eps = std::array::from_fn(|_| rng.random_range(-1.0..1.0));
    let k = std::array::from_fn(|_| rng.random_range(-1.5..1.5));
    FieldModel::plane_wave(eps, k, rng.random_range(0.0..std::f64::consts::TAU)).unwrap()
}

/// `max_{μν} |a − b|`.
pub fn bivector_distance(a: &Bivector, b: &Bivector) -> f64 {
    let mut worst: f64 = 0.0;
    for m in 0..4 {
        for n in 0..4 {
            worst = worst.max((a[m][n] - b[m][n]).abs());
        }
    }
    worst
}
