//! Random inputs for the checks. Everything is drawn from the per-check generator.

use causal_loops::geometry::{FourVector, LorentzMatrix, PoincareElement};
use causal_loops::loopgroup::Path;
use causal_loops::simplex::{AffineSimplex, Chain, RationalPoint, TestFunctionTag};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub type Rng64 = ChaCha8Rng;

pub fn vector(rng: &mut Rng64, scale: f64) -> FourVector {
    FourVector(std::array::from_fn(|_| rng.random_range(-scale..scale)))
}

pub fn simplex(
    rng: &mut Rng64,
    dim: usize,
    center: FourVector,
    scale: f64,
    tag: &TestFunctionTag,
) -> AffineSimplex {
    let v = (0..=dim).map(|_| center + vector(rng, scale)).collect();
    AffineSimplex::new(v, tag.clone()).expect("dimension is at most 3")
}

pub fn triangle(rng: &mut Rng64, scale: f64, tag: &TestFunctionTag) -> AffineSimplex {
    simplex(rng, 2, FourVector::ZERO, scale, tag)
}

pub fn segment(rng: &mut Rng64, scale: f64, tag: &TestFunctionTag) -> AffineSimplex {
    simplex(rng, 1, FourVector::ZERO, scale, tag)
}

/// Rotations interleaved with boosts of total rapidity below `max_rapidity`.
pub fn lorentz(rng: &mut Rng64, max_rapidity: f64) -> LorentzMatrix {
    let rotation = |rng: &mut Rng64| {
        LorentzMatrix::rotation(rng.random_range(1..=3), rng.random_range(-3.2..3.2))
            .expect("axis in range")
    };
    let mut l = rotation(rng);
    let boosts = rng.random_range(1..=2);
    for _ in 0..boosts {
        let eta = if max_rapidity > 0.0 {
            rng.random_range(-max_rapidity..max_rapidity) / boosts as f64
        } else {
            0.0
        };
        l = l
            * LorentzMatrix::boost(rng.random_range(1..=3), eta).expect("axis in range")
            * rotation(rng);
    }
    l
}

pub fn poincare(rng: &mut Rng64, max_rapidity: f64, scale: f64) -> PoincareElement {
    PoincareElement::new(vector(rng, scale), lorentz(rng, max_rapidity))
}

/// A closed polyline through `k ≥ 2` random points.
pub fn closed_polyline(rng: &mut Rng64, k: usize, scale: f64, tag: &TestFunctionTag) -> Path {
    let mut pts: Vec<FourVector> = (0..k).map(|_| vector(rng, scale)).collect();
    pts.push(pts[0]);
    Path::polyline(&pts, tag).expect("nonempty polyline")
}

pub fn rational_point(rng: &mut Rng64) -> RationalPoint {
    RationalPoint::from_integers(std::array::from_fn(|_| rng.random_range(-4..=4)))
}

/// Up to six terms with coefficients in `[−3, 3]`.
pub fn rational_chain(rng: &mut Rng64, dim: usize, tag: &TestFunctionTag) -> Chain<RationalPoint> {
    let mut chain = Chain::new();
    for _ in 0..rng.random_range(1..=6) {
        let v = (0..=dim).map(|_| rational_point(rng)).collect();
        let s = AffineSimplex::new(v, tag.clone()).expect("dimension is at most 3");
        chain
            .add_term(rng.random_range(-3..=3), s)
            .expect("all terms share a dimension");
    }
    chain
}
