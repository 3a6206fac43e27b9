//! Affine smearing simplices, integer chains, the cone construction and support bounds.
//!
//! Vertices are generic so the combinatorial identities can be checked over exact
//! rationals while quadrature runs on `f64` points. Everything is keyed by an exact
//! total order on vertices and tags; no tolerance enters chain arithmetic.

mod form;
mod tag;

pub(crate) use form::surface_bivector;
pub use form::{simplex_form, FormValue, SimplexForm};
pub use tag::{TestFunctionKind, TestFunctionTag, GAUSSIAN_CUTOFF};

use num_rational::Rational64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::geometry::{ball_containment, DoubleCone, FourVector, PoincareElement, Tri};

/// A point type usable as a simplex vertex.
pub trait Vertex: Clone + fmt::Debug + Send + Sync + 'static {
    /// Exact total order; equal keys mean identical points.
    fn key_cmp(&self, other: &Self) -> Ordering;
    fn to_four_vector(&self) -> FourVector;
}

impl Vertex for FourVector {
    fn key_cmp(&self, other: &Self) -> Ordering {
        self.0
            .iter()
            .zip(other.0.iter())
            .map(|(a, b)| a.total_cmp(b))
            .find(|o| o.is_ne())
            .unwrap_or(Ordering::Equal)
    }

    fn to_four_vector(&self) -> FourVector {
        *self
    }
}

/// A point with exact rational coordinates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RationalPoint(pub [Rational64; 4]);

impl RationalPoint {
    pub fn from_integers(x: [i64; 4]) -> Self {
        RationalPoint(x.map(Rational64::from_integer))
    }
}

impl Vertex for RationalPoint {
    fn key_cmp(&self, other: &Self) -> Ordering {
        self.cmp(other)
    }

    fn to_four_vector(&self) -> FourVector {
        FourVector(self.0.map(|q| *q.numer() as f64 / *q.denom() as f64))
    }
}

/// Ordered vertices `(s₀, …, sₙ)` with a test function; parametrized by
/// `s₀ + Σ tᵢ (sᵢ − s₀)` over the standard simplex.
#[derive(Clone, Debug)]
pub struct AffineSimplex<V: Vertex = FourVector> {
    vertices: Vec<V>,
    tag: TestFunctionTag,
}

/// A 0-simplex, used for poles and path endpoints.
pub type Point = AffineSimplex<FourVector>;

impl<V: Vertex> AffineSimplex<V> {
    pub fn new(vertices: Vec<V>, tag: TestFunctionTag) -> Result<Self> {
        if vertices.is_empty() {
            return Err(Error::UnsupportedDimension(0));
        }
        Ok(AffineSimplex { vertices, tag })
    }

    pub fn point(v: V, tag: TestFunctionTag) -> Self {
        AffineSimplex {
            vertices: vec![v],
            tag,
        }
    }

    pub fn dim(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn vertices(&self) -> &[V] {
        &self.vertices
    }

    pub fn vertex(&self, i: usize) -> &V {
        &self.vertices[i]
    }

    pub fn tag(&self) -> &TestFunctionTag {
        &self.tag
    }

    pub fn is_degenerate(&self) -> bool {
        let v = &self.vertices;
        (0..v.len()).any(|i| (i + 1..v.len()).any(|j| v[i].key_cmp(&v[j]).is_eq()))
    }

    /// `∂ᵢ`: drop vertex i.
    pub fn face(&self, i: usize) -> Result<Self> {
        let n = self.dim();
        if n == 0 || i > n {
            return Err(Error::FaceOutOfRange { index: i, dim: n });
        }
        let mut vertices = self.vertices.clone();
        vertices.remove(i);
        Ok(AffineSimplex {
            vertices,
            tag: self.tag.clone(),
        })
    }

    /// `Σ (−1)ⁱ ∂ᵢ`.
    pub fn boundary(&self) -> Result<Chain<V>> {
        let n = self.dim();
        if n == 0 {
            return Err(Error::UnsupportedDimension(0));
        }
        let mut chain = Chain::new();
        for i in 0..=n {
            let sign = if i % 2 == 0 { 1 } else { -1 };
            chain.add_term(sign, self.face(i)?)?;
        }
        Ok(chain)
    }

    /// Orientation reversal: `(b₁,b₀)` for segments, `(c₀,c₂,c₁)` for triangles.
    pub fn opposite(&self) -> Result<Self> {
        let mut vertices = self.vertices.clone();
        match self.dim() {
            1 => vertices.swap(0, 1),
            2 => vertices.swap(1, 2),
            n => return Err(Error::UnsupportedDimension(n)),
        }
        Ok(AffineSimplex {
            vertices,
            tag: self.tag.clone(),
        })
    }

    /// `hᶻ(s) = (z, s₀, …, sₙ)`, keeping the tag.
    pub fn cone(&self, z: &V) -> Self {
        let mut vertices = Vec::with_capacity(self.vertices.len() + 1);
        vertices.push(z.clone());
        vertices.extend(self.vertices.iter().cloned());
        AffineSimplex {
            vertices,
            tag: self.tag.clone(),
        }
    }

    pub fn same_point(&self, other: &Self) -> bool {
        self.dim() == 0 && other.dim() == 0 && self == other
    }
}

impl AffineSimplex<FourVector> {
    /// `φ(t) = s₀ + Σ tᵢ (sᵢ − s₀)`.
    pub fn eval(&self, t: &[f64]) -> FourVector {
        let s0 = self.vertices[0];
        let mut x = s0;
        for (ti, si) in t.iter().zip(&self.vertices[1..]) {
            x += (*si - s0).scale(*ti);
        }
        x
    }

    pub fn poincare_act(&self, p: &PoincareElement) -> Self {
        AffineSimplex {
            vertices: self.vertices.iter().map(|v| p.apply(v)).collect(),
            tag: self.tag.rotated(&p.lorentz),
        }
    }

    pub fn support_ball(&self) -> SupportBall {
        SupportBall {
            hull: self.vertices.clone(),
            eps: self.tag.effective_radius(),
        }
    }
}

impl<V: Vertex> PartialEq for AffineSimplex<V> {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other).is_eq()
    }
}

impl<V: Vertex> Eq for AffineSimplex<V> {}

impl<V: Vertex> PartialOrd for AffineSimplex<V> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<V: Vertex> Ord for AffineSimplex<V> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.vertices
            .len()
            .cmp(&other.vertices.len())
            .then_with(|| self.tag.cmp(&other.tag))
            .then_with(|| {
                self.vertices
                    .iter()
                    .zip(&other.vertices)
                    .map(|(a, b)| a.key_cmp(b))
                    .find(|o| o.is_ne())
                    .unwrap_or(Ordering::Equal)
            })
    }
}

#[derive(Serialize, Deserialize)]
struct SimplexRepr {
    n: usize,
    vertices: Vec<FourVector>,
    tag: TestFunctionTag,
}

impl Serialize for AffineSimplex<FourVector> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        SimplexRepr {
            n: self.dim(),
            vertices: self.vertices.clone(),
            tag: self.tag.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for AffineSimplex<FourVector> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let r = SimplexRepr::deserialize(d)?;
        if r.vertices.len() != r.n + 1 {
            return Err(D::Error::custom("vertex count does not match n"));
        }
        if !r.vertices.iter().all(FourVector::is_finite) {
            return Err(D::Error::custom("non-finite vertex"));
        }
        r.tag.validate().map_err(D::Error::custom)?;
        Ok(AffineSimplex {
            vertices: r.vertices,
            tag: r.tag,
        })
    }
}

/// Convex hull of the vertices inflated by `eps`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SupportBall {
    pub hull: Vec<FourVector>,
    pub eps: f64,
}

impl SupportBall {
    /// Image under `P`; the radius grows by `‖L‖₂` since boosts are not Euclidean isometries.
    pub fn transformed(&self, p: &PoincareElement) -> SupportBall {
        SupportBall {
            hull: self.hull.iter().map(|v| p.apply(v)).collect(),
            eps: self.eps * p.lorentz.spectral_norm(),
        }
    }

    /// The double cone is convex, so checking the inflated vertices suffices.
    pub fn containment(&self, o: &DoubleCone) -> Tri {
        self.hull.iter().fold(Tri::True, |acc, v| {
            acc.and(ball_containment(v, self.eps, o))
        })
    }

    /// Certifies that every point of one inflated hull is spacelike to every point of the
    /// other, by projecting onto the spatial direction between the hull centroids.
    ///
    /// The test is sufficient only, so failure gives `Unknown` rather than `False`.
    pub fn causally_disjoint(&self, other: &SupportBall) -> Tri {
        let centroid = |h: &[FourVector]| {
            h.iter()
                .fold(FourVector::ZERO, |acc, v| acc + *v)
                .scale(1.0 / h.len() as f64)
        };
        let axis = centroid(&other.hull) - centroid(&self.hull);
        let len = axis.spatial_norm();
        if self.hull.is_empty() || other.hull.is_empty() || len == 0.0 {
            return Tri::Unknown;
        }
        let n = [axis[1] / len, axis[2] / len, axis[3] / len];
        let mut spatial = f64::INFINITY;
        let mut temporal: f64 = 0.0;
        for x in &self.hull {
            for y in &other.hull {
                let d = *y - *x;
                spatial = spatial.min(n[0] * d[1] + n[1] * d[2] + n[2] * d[3]);
                temporal = temporal.max(d[0].abs());
            }
        }
        let margin = spatial - temporal - 2.0 * (self.eps + other.eps);
        if margin > crate::geometry::TOL {
            Tri::True
        } else {
            Tri::Unknown
        }
    }
}

pub fn support_ball(s: &AffineSimplex) -> SupportBall {
    s.support_ball()
}

/// Finite integer combination of simplices of one dimension, in canonical form.
#[derive(Clone, Debug)]
pub struct Chain<V: Vertex = FourVector> {
    terms: BTreeMap<AffineSimplex<V>, i64>,
    dim: Option<usize>,
}

impl<V: Vertex> PartialEq for Chain<V> {
    fn eq(&self, other: &Self) -> bool {
        self.terms == other.terms
    }
}

impl<V: Vertex> Eq for Chain<V> {}

impl<V: Vertex> Default for Chain<V> {
    fn default() -> Self {
        Chain {
            terms: BTreeMap::new(),
            dim: None,
        }
    }
}

impl<V: Vertex> Chain<V> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_simplex(s: AffineSimplex<V>) -> Self {
        let mut c = Self::new();
        c.dim = Some(s.dim());
        c.terms.insert(s, 1);
        c
    }

    /// Empty chains have no dimension and combine with anything.
    pub fn dim(&self) -> Option<usize> {
        if self.terms.is_empty() {
            None
        } else {
            self.dim
        }
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &AffineSimplex<V>)> {
        self.terms.iter().map(|(s, c)| (*c, s))
    }

    pub fn coefficient(&self, s: &AffineSimplex<V>) -> i64 {
        self.terms.get(s).copied().unwrap_or(0)
    }

    pub fn add_term(&mut self, coef: i64, s: AffineSimplex<V>) -> Result<()> {
        if coef == 0 {
            return Ok(());
        }
        match self.dim() {
            Some(d) if d != s.dim() => {
                return Err(Error::ChainDimension {
                    expected: d,
                    found: s.dim(),
                })
            }
            _ => self.dim = Some(s.dim()),
        }
        let total = self.coefficient(&s) + coef;
        if total == 0 {
            self.terms.remove(&s);
        } else {
            self.terms.insert(s, total);
        }
        Ok(())
    }

    pub fn add(&self, other: &Chain<V>) -> Result<Chain<V>> {
        let mut out = self.clone();
        for (c, s) in other.terms() {
            out.add_term(c, s.clone())?;
        }
        Ok(out)
    }

    pub fn scale(&self, k: i64) -> Chain<V> {
        if k == 0 {
            return Chain::new();
        }
        Chain {
            terms: self.terms.iter().map(|(s, c)| (s.clone(), c * k)).collect(),
            dim: self.dim,
        }
    }

    pub fn neg(&self) -> Chain<V> {
        self.scale(-1)
    }

    pub fn boundary(&self) -> Result<Chain<V>> {
        let mut out = Chain::new();
        for (c, s) in self.terms() {
            out = out.add(&s.boundary()?.scale(c))?;
        }
        Ok(out)
    }

    pub fn cone(&self, z: &V) -> Chain<V> {
        Chain {
            terms: self.terms.iter().map(|(s, c)| (s.cone(z), *c)).collect(),
            dim: self.dim.map(|d| d + 1),
        }
    }

    /// Canonical form in the oriented quotient, where `s∘π = sign(π) s` and degenerate
    /// simplices vanish. Orientation identities such as `∂s̄ = −∂s` hold here.
    pub fn oriented(&self) -> Chain<V> {
        let mut out = Chain::new();
        for (c, s) in self.terms() {
            if s.is_degenerate() {
                continue;
            }
            let mut v = s.vertices.clone();
            let mut sign = 1;
            // Insertion sort, counting transpositions.
            for i in 1..v.len() {
                let mut j = i;
                while j > 0 && v[j - 1].key_cmp(&v[j]).is_gt() {
                    v.swap(j - 1, j);
                    sign = -sign;
                    j -= 1;
                }
            }
            let sorted = AffineSimplex {
                vertices: v,
                tag: s.tag.clone(),
            };
            out.add_term(sign * c, sorted).expect("uniform dimension");
        }
        out
    }
}

impl Chain<FourVector> {
    pub fn poincare_act(&self, p: &PoincareElement) -> Chain<FourVector> {
        let mut out = Chain::new();
        for (c, s) in self.terms() {
            out.add_term(c, s.poincare_act(p))
                .expect("uniform dimension");
        }
        out
    }
}

#[derive(Serialize, Deserialize)]
struct TermRepr {
    coef: i64,
    simplex: AffineSimplex<FourVector>,
}

impl Serialize for Chain<FourVector> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let terms: Vec<TermRepr> = self
            .terms()
            .map(|(coef, simplex)| TermRepr {
                coef,
                simplex: simplex.clone(),
            })
            .collect();
        terms.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Chain<FourVector> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let terms = Vec::<TermRepr>::deserialize(d)?;
        let mut chain = Chain::new();
        for t in terms {
            chain
                .add_term(t.coef, t.simplex)
                .map_err(D::Error::custom)?;
        }
        Ok(chain)
    }
}

pub fn face<V: Vertex>(s: &AffineSimplex<V>, i: usize) -> Result<AffineSimplex<V>> {
    s.face(i)
}

pub fn opposite<V: Vertex>(s: &AffineSimplex<V>) -> Result<AffineSimplex<V>> {
    s.opposite()
}

/// Checks `∂hᶻφ + hᶻ∂φ = φ` exactly. Needs a nonempty chain of dimension ≥ 1.
pub fn homotopy_identity_check<V: Vertex>(z: &V, phi: &Chain<V>) -> Result<bool> {
    match phi.dim() {
        None => return Err(Error::UnsupportedDimension(0)),
        Some(0) => return Err(Error::UnsupportedDimension(0)),
        _ => {}
    }
    let lhs = phi.cone(z).boundary()?.add(&phi.boundary()?.cone(z))?;
    Ok(lhs == *phi)
}
