//! Minkowski space with signature (+,−,−,−), the restricted Poincaré group and double cones.
//!
//! Double cones are stored as a radius plus the Poincaré frame that carries the standard
//! cone `{|x⁰| + ‖x⃗‖ < r}` onto them, so `P·o` is exact and causal relations between cones
//! are frame independent by construction.

use nalgebra::Matrix4;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::ops::{Add, AddAssign, Index, IndexMut, Mul, Neg, Sub};

use crate::error::{Error, Result};

/// Absolute tolerance for scalar comparisons.
pub const TOL: f64 = 1e-12;

pub const METRIC: [f64; 4] = [1.0, -1.0, -1.0, -1.0];

/// Three-valued answer for predicates that are only certified away from a boundary band.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Tri {
    True,
    False,
    Unknown,
}

impl Tri {
    /// Conservative reading: only a certified yes counts.
    pub fn is_true(self) -> bool {
        self == Tri::True
    }

    pub fn and(self, other: Tri) -> Tri {
        match (self, other) {
            (Tri::False, _) | (_, Tri::False) => Tri::False,
            (Tri::True, Tri::True) => Tri::True,
            _ => Tri::Unknown,
        }
    }

    fn from_margin(margin: f64) -> Tri {
        if margin > TOL {
            Tri::True
        } else if margin < -TOL {
            Tri::False
        } else {
            Tri::Unknown
        }
    }
}

/// Contravariant components x^0..x^3.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FourVector(pub [f64; 4]);

impl FourVector {
    pub const ZERO: FourVector = FourVector([0.0; 4]);

    pub const fn new(x0: f64, x1: f64, x2: f64, x3: f64) -> Self {
        FourVector([x0, x1, x2, x3])
    }

    pub fn basis(mu: usize) -> Self {
        let mut x = [0.0; 4];
        x[mu] = 1.0;
        FourVector(x)
    }

    /// Covariant components x_μ = g_{μν} x^ν.
    pub fn lower(&self) -> [f64; 4] {
        let x = self.0;
        [x[0], -x[1], -x[2], -x[3]]
    }

    pub fn dot(&self, other: &FourVector) -> f64 {
        inner(self, other)
    }

    pub fn square(&self) -> f64 {
        inner(self, self)
    }

    pub fn spatial_norm(&self) -> f64 {
        let x = self.0;
        (x[1] * x[1] + x[2] * x[2] + x[3] * x[3]).sqrt()
    }

    pub fn euclidean_norm(&self) -> f64 {
        self.0.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|v| v.is_finite())
    }

    pub fn scale(&self, s: f64) -> Self {
        FourVector(self.0.map(|v| v * s))
    }
}

impl Index<usize> for FourVector {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

impl IndexMut<usize> for FourVector {
    fn index_mut(&mut self, i: usize) -> &mut f64 {
        &mut self.0[i]
    }
}

impl Add for FourVector {
    type Output = FourVector;
    fn add(self, o: FourVector) -> FourVector {
        FourVector(std::array::from_fn(|i| self.0[i] + o.0[i]))
    }
}

impl AddAssign for FourVector {
    fn add_assign(&mut self, o: FourVector) {
        *self = *self + o;
    }
}

impl Sub for FourVector {
    type Output = FourVector;
    fn sub(self, o: FourVector) -> FourVector {
        FourVector(std::array::from_fn(|i| self.0[i] - o.0[i]))
    }
}

impl Neg for FourVector {
    type Output = FourVector;
    fn neg(self) -> FourVector {
        FourVector(self.0.map(|v| -v))
    }
}

impl Mul<FourVector> for f64 {
    type Output = FourVector;
    fn mul(self, x: FourVector) -> FourVector {
        x.scale(self)
    }
}

impl fmt::Display for FourVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let x = self.0;
        write!(f, "({}, {}, {}, {})", x[0], x[1], x[2], x[3])
    }
}

/// x^μ g_{μν} y^ν
pub fn inner(x: &FourVector, y: &FourVector) -> f64 {
    x.0[0] * y.0[0] - x.0[1] * y.0[1] - x.0[2] * y.0[2] - x.0[3] * y.0[3]
}

pub fn spacelike_separated(x: &FourVector, y: &FourVector) -> bool {
    (*x - *y).square() < 0.0
}

/// Element of the restricted Lorentz group. Serialized as a row-major 4×4 array.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "[[f64; 4]; 4]", into = "[[f64; 4]; 4]")]
pub struct LorentzMatrix(Matrix4<f64>);

impl LorentzMatrix {
    pub fn identity() -> Self {
        LorentzMatrix(Matrix4::identity())
    }

    /// Validates `LᵀgL = g`, `det L > 0` and `L⁰₀ ≥ 1`.
    pub fn from_matrix(m: Matrix4<f64>) -> Result<Self> {
        if m.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("Lorentz matrix"));
        }
        let defect = lorentz_defect(&m);
        // Relative slack: entries of a rapidity-η boost are O(e^η).
        let scale = m.abs().max().powi(2).max(1.0);
        if defect > TOL * scale || m.determinant() <= 0.0 || m[(0, 0)] < 1.0 - TOL * scale {
            return Err(Error::NotLorentz { defect });
        }
        Ok(LorentzMatrix(m))
    }

    pub fn boost(axis: usize, rapidity: f64) -> Result<Self> {
        if !(1..=3).contains(&axis) {
            return Err(Error::AxisOutOfRange(axis));
        }
        if !rapidity.is_finite() {
            return Err(Error::NonFinite("rapidity"));
        }
        let (ch, sh) = (rapidity.cosh(), rapidity.sinh());
        let mut m = Matrix4::identity();
        m[(0, 0)] = ch;
        m[(axis, axis)] = ch;
        m[(0, axis)] = sh;
        m[(axis, 0)] = sh;
        Ok(LorentzMatrix(m))
    }

    /// Rotation by `angle` about spatial `axis`.
    pub fn rotation(axis: usize, angle: f64) -> Result<Self> {
        if !(1..=3).contains(&axis) {
            return Err(Error::AxisOutOfRange(axis));
        }
        if !angle.is_finite() {
            return Err(Error::NonFinite("angle"));
        }
        let (i, j) = match axis {
            1 => (2, 3),
            2 => (3, 1),
            _ => (1, 2),
        };
        let (c, s) = (angle.cos(), angle.sin());
        let mut m = Matrix4::identity();
        m[(i, i)] = c;
        m[(j, j)] = c;
        m[(i, j)] = -s;
        m[(j, i)] = s;
        Ok(LorentzMatrix(m))
    }

    pub fn matrix(&self) -> &Matrix4<f64> {
        &self.0
    }

    /// L⁻¹ = g Lᵀ g.
    pub fn inverse(&self) -> Self {
        let mut m = self.0.transpose();
        for i in 0..4 {
            for j in 0..4 {
                m[(i, j)] *= METRIC[i] * METRIC[j];
            }
        }
        LorentzMatrix(m)
    }

    pub fn apply(&self, x: &FourVector) -> FourVector {
        let m = &self.0;
        FourVector(std::array::from_fn(|i| {
            m[(i, 0)] * x.0[0] + m[(i, 1)] * x.0[1] + m[(i, 2)] * x.0[2] + m[(i, 3)] * x.0[3]
        }))
    }

    pub fn is_identity(&self) -> bool {
        self.0 == Matrix4::identity()
    }

    /// Largest singular value.
    pub fn spectral_norm(&self) -> f64 {
        spectral_norm(&self.0)
    }

    /// max |LᵀgL − g| entrywise.
    pub fn defect(&self) -> f64 {
        lorentz_defect(&self.0)
    }
}

pub(crate) fn spectral_norm(m: &Matrix4<f64>) -> f64 {
    if *m == Matrix4::identity() {
        return 1.0;
    }
    m.singular_values().max()
}

fn lorentz_defect(m: &Matrix4<f64>) -> f64 {
    let g = Matrix4::from_diagonal(&METRIC.into());
    (m.transpose() * g * m - g).abs().max()
}

impl Mul for LorentzMatrix {
    type Output = LorentzMatrix;
    fn mul(self, o: LorentzMatrix) -> LorentzMatrix {
        LorentzMatrix(self.0 * o.0)
    }
}

impl TryFrom<[[f64; 4]; 4]> for LorentzMatrix {
    type Error = Error;
    fn try_from(rows: [[f64; 4]; 4]) -> Result<Self> {
        LorentzMatrix::from_matrix(Matrix4::from_fn(|i, j| rows[i][j]))
    }
}

impl From<LorentzMatrix> for [[f64; 4]; 4] {
    fn from(l: LorentzMatrix) -> Self {
        std::array::from_fn(|i| std::array::from_fn(|j| l.0[(i, j)]))
    }
}

/// (x, L): y ↦ x + L y.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PoincareElement {
    pub translation: FourVector,
    pub lorentz: LorentzMatrix,
}

impl PoincareElement {
    pub fn new(translation: FourVector, lorentz: LorentzMatrix) -> Self {
        PoincareElement {
            translation,
            lorentz,
        }
    }

    pub fn identity() -> Self {
        Self::new(FourVector::ZERO, LorentzMatrix::identity())
    }

    pub fn translation(x: FourVector) -> Self {
        Self::new(x, LorentzMatrix::identity())
    }

    pub fn lorentz(l: LorentzMatrix) -> Self {
        Self::new(FourVector::ZERO, l)
    }

    pub fn apply(&self, y: &FourVector) -> FourVector {
        self.translation + self.lorentz.apply(y)
    }

    /// (x,L)(x',L') = (x + Lx', LL')
    pub fn compose(&self, other: &PoincareElement) -> PoincareElement {
        PoincareElement::new(
            self.translation + self.lorentz.apply(&other.translation),
            self.lorentz * other.lorentz,
        )
    }

    pub fn inverse(&self) -> PoincareElement {
        let li = self.lorentz.inverse();
        PoincareElement::new(-li.apply(&self.translation), li)
    }

    pub fn is_identity(&self) -> bool {
        self.translation == FourVector::ZERO && self.lorentz.is_identity()
    }
}

impl Mul for PoincareElement {
    type Output = PoincareElement;
    fn mul(self, o: PoincareElement) -> PoincareElement {
        self.compose(&o)
    }
}

pub fn poincare_apply(p: &PoincareElement, y: &FourVector) -> FourVector {
    p.apply(y)
}

/// The image of `{|x⁰| + ‖x⃗‖ < radius}` under `frame`. The centre is `frame.translation`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ConeRepr", into = "ConeRepr")]
pub struct DoubleCone {
    frame: PoincareElement,
    radius: f64,
}

#[derive(Serialize, Deserialize)]
struct ConeRepr {
    center: FourVector,
    radius: f64,
    #[serde(default = "LorentzMatrix::identity")]
    lorentz: LorentzMatrix,
}

impl TryFrom<ConeRepr> for DoubleCone {
    type Error = Error;
    fn try_from(r: ConeRepr) -> Result<Self> {
        DoubleCone::with_frame(PoincareElement::new(r.center, r.lorentz), r.radius)
    }
}

impl From<DoubleCone> for ConeRepr {
    fn from(o: DoubleCone) -> Self {
        ConeRepr {
            center: o.frame.translation,
            radius: o.radius,
            lorentz: o.frame.lorentz,
        }
    }
}

impl DoubleCone {
    /// Time-axis aligned cone.
    pub fn new(center: FourVector, radius: f64) -> Result<Self> {
        Self::with_frame(PoincareElement::translation(center), radius)
    }

    pub fn with_frame(frame: PoincareElement, radius: f64) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::InvalidRadius(radius));
        }
        if !frame.translation.is_finite() {
            return Err(Error::NonFinite("cone centre"));
        }
        Ok(DoubleCone { frame, radius })
    }

    pub fn center(&self) -> FourVector {
        self.frame.translation
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn frame(&self) -> &PoincareElement {
        &self.frame
    }

    /// Past and future tips.
    pub fn apexes(&self) -> (FourVector, FourVector) {
        let r = self.radius;
        (
            self.frame.apply(&FourVector::new(-r, 0.0, 0.0, 0.0)),
            self.frame.apply(&FourVector::new(r, 0.0, 0.0, 0.0)),
        )
    }

    pub fn contains(&self, x: &FourVector) -> bool {
        let local = self.frame.inverse().apply(x);
        local[0].abs() + local.spatial_norm() < self.radius
    }

    pub fn transformed(&self, p: &PoincareElement) -> DoubleCone {
        DoubleCone {
            frame: p.compose(&self.frame),
            radius: self.radius,
        }
    }

    /// Half-width of the cone's extent along coordinate axis `mu`.
    pub fn half_extent(&self, mu: usize) -> f64 {
        // Support function of the standard diamond along row μ of L.
        let m = self.frame.lorentz.matrix();
        let spatial = (m[(mu, 1)].powi(2) + m[(mu, 2)].powi(2) + m[(mu, 3)].powi(2)).sqrt();
        self.radius * m[(mu, 0)].abs().max(spatial)
    }
}

/// Whether every point of `o1` is spacelike to every point of `o2`.
///
/// Two double cones are causally disjoint iff neither future tip lies in the open future
/// of the other's past tip. The margin `‖d⃗‖ − d⁰` of `d = q₂ − p₁` is evaluated in the
/// frame of `o1`, which reduces to `‖Δc⃗‖ − |Δc⁰| − r₁ − r₂` for axis-aligned pairs.
/// Results within [`TOL`] of the light cone are `Unknown`.
pub fn cones_causally_disjoint(o1: &DoubleCone, o2: &DoubleCone) -> Tri {
    let to_o1 = o1.frame.inverse();
    let rel = to_o1.compose(&o2.frame);
    if rel.lorentz.is_identity() {
        let d = rel.translation;
        return Tri::from_margin(d.spatial_norm() - d[0].abs() - o1.radius - o2.radius);
    }
    let (p1, q1) = o1.apexes();
    let (p2, q2) = o2.apexes();
    let margin = |future: FourVector, past: FourVector| {
        let d = to_o1.apply(&future) - to_o1.apply(&past);
        d.spatial_norm() - d[0]
    };
    Tri::from_margin(margin(q2, p1).min(margin(q1, p2)))
}

/// Whether the closed Euclidean ball `B_eps(center)` lies in `o`.
///
/// In the cone's frame the ball becomes an ellipsoid inside a ball of radius
/// `eps·‖L⁻¹‖₂`, and `|x⁰| + ‖x⃗‖ ≤ √2 ‖x‖` bounds the diamond norm. A centre outside
/// the cone is `False`; a ball that the bound cannot place inside is `Unknown`.
pub fn ball_containment(center: &FourVector, eps: f64, o: &DoubleCone) -> Tri {
    let local = o.frame.inverse().apply(center);
    let s = local[0].abs() + local.spatial_norm();
    if s >= o.radius {
        return Tri::False;
    }
    let eps_local = eps * o.frame.lorentz.spectral_norm();
    if s + std::f64::consts::SQRT_2 * eps_local < o.radius {
        Tri::True
    } else {
        Tri::Unknown
    }
}

pub fn ball_in_cone(center: &FourVector, eps: f64, o: &DoubleCone) -> bool {
    ball_containment(center, eps, o).is_true()
}
