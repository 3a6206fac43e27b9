//! Unitary values: U(1) phases and tensor products of small unitaries.

use nalgebra::{DMatrix, Schur};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ValueShape {
    Phase,
    /// Local dimensions of the tensor factors.
    Tensor(Vec<usize>),
}

impl ValueShape {
    pub fn total_dim(&self) -> usize {
        match self {
            ValueShape::Phase => 1,
            ValueShape::Tensor(dims) => dims.iter().product(),
        }
    }
}

/// `Phase(θ)` is `e^{iθ}`; `Tensor` is the Kronecker product of its factors.
///
/// Phases keep the unreduced angle so products are exact sums.
#[derive(Debug, Clone, PartialEq)]
pub enum UnitaryValue {
    Phase(f64),
    Tensor(Vec<CMatrix>),
}

impl UnitaryValue {
    pub fn identity(shape: &ValueShape) -> Self {
        match shape {
            ValueShape::Phase => UnitaryValue::Phase(0.0),
            ValueShape::Tensor(dims) => {
                UnitaryValue::Tensor(dims.iter().map(|d| CMatrix::identity(*d, *d)).collect())
            }
        }
    }

    pub fn shape(&self) -> ValueShape {
        match self {
            UnitaryValue::Phase(_) => ValueShape::Phase,
            UnitaryValue::Tensor(f) => ValueShape::Tensor(f.iter().map(|m| m.nrows()).collect()),
        }
    }

    pub fn mul(&self, other: &UnitaryValue) -> Result<UnitaryValue> {
        match (self, other) {
            (UnitaryValue::Phase(a), UnitaryValue::Phase(b)) => Ok(UnitaryValue::Phase(a + b)),
            (UnitaryValue::Tensor(a), UnitaryValue::Tensor(b)) => {
                check_shapes(a, b)?;
                Ok(UnitaryValue::Tensor(
                    a.iter().zip(b).map(|(x, y)| factor_mul(x, y)).collect(),
                ))
            }
            _ => Err(Error::DimensionMismatch),
        }
    }

    pub fn adjoint(&self) -> UnitaryValue {
        match self {
            UnitaryValue::Phase(a) => UnitaryValue::Phase(-a),
            UnitaryValue::Tensor(f) => {
                UnitaryValue::Tensor(f.iter().map(|m| m.adjoint()).collect())
            }
        }
    }

    /// Operator-norm distance `‖U − V‖`.
    ///
    /// Computed as `max |λ − 1|` over the spectrum of `V*U`, which is unitary; for tensor
    /// values the spectrum is the set of products of factor eigenvalues. Equal factors
    /// contribute exactly nothing.
    pub fn distance(&self, other: &UnitaryValue) -> Result<f64> {
        match (self, other) {
            (UnitaryValue::Phase(a), UnitaryValue::Phase(b)) => {
                Ok(2.0 * (0.5 * (a - b)).sin().abs())
            }
            (UnitaryValue::Tensor(a), UnitaryValue::Tensor(b)) => {
                check_shapes(a, b)?;
                let w: Vec<CMatrix> = a
                    .iter()
                    .zip(b)
                    .map(|(u, v)| {
                        if u == v {
                            CMatrix::identity(u.nrows(), u.ncols())
                        } else {
                            factor_mul(&v.adjoint(), u)
                        }
                    })
                    .collect();
                Ok(distance_to_identity(&w))
            }
            _ => Err(Error::DimensionMismatch),
        }
    }

    /// `‖UV − VU‖`; exactly zero when the factors commute bitwise.
    pub fn commutator_norm(&self, other: &UnitaryValue) -> Result<f64> {
        match (self, other) {
            (UnitaryValue::Phase(_), UnitaryValue::Phase(_)) => Ok(0.0),
            (UnitaryValue::Tensor(a), UnitaryValue::Tensor(b)) => {
                check_shapes(a, b)?;
                let ab: Vec<CMatrix> = a.iter().zip(b).map(|(x, y)| factor_mul(x, y)).collect();
                let ba: Vec<CMatrix> = a.iter().zip(b).map(|(x, y)| factor_mul(y, x)).collect();
                if ab == ba {
                    return Ok(0.0);
                }
                // ‖UV − VU‖ = ‖(UV)(VU)* − 𝟙‖ by unitary invariance.
                let w: Vec<CMatrix> = ab.iter().zip(&ba).map(|(x, y)| x * y.adjoint()).collect();
                Ok(distance_to_identity(&w))
            }
            _ => Err(Error::DimensionMismatch),
        }
    }

    /// `max |UU* − 𝟙|` entrywise over factors.
    pub fn unitarity_defect(&self) -> f64 {
        match self {
            UnitaryValue::Phase(t) => {
                if t.is_finite() {
                    0.0
                } else {
                    f64::INFINITY
                }
            }
            UnitaryValue::Tensor(f) => f
                .iter()
                .map(|m| {
                    let d = m * m.adjoint() - CMatrix::identity(m.nrows(), m.ncols());
                    d.iter().fold(0.0, |acc: f64, z| acc.max(z.norm()))
                })
                .fold(0.0, f64::max),
        }
    }

    /// Kronecker product of the factors (first factor most significant).
    pub fn dense(&self) -> CMatrix {
        match self {
            UnitaryValue::Phase(t) => CMatrix::from_element(1, 1, Complex64::from_polar(1.0, *t)),
            UnitaryValue::Tensor(f) => f
                .iter()
                .fold(CMatrix::identity(1, 1), |acc, m| acc.kronecker(m)),
        }
    }
}

fn check_shapes(a: &[CMatrix], b: &[CMatrix]) -> Result<()> {
    if a.len() != b.len() || a.iter().zip(b).any(|(x, y)| x.shape() != y.shape()) {
        return Err(Error::DimensionMismatch);
    }
    Ok(())
}

fn is_identity(m: &CMatrix) -> bool {
    m.is_square()
        && m.iter().enumerate().all(|(k, z)| {
            *z == if k % (m.nrows() + 1) == 0 {
                Complex64::ONE
            } else {
                Complex64::ZERO
            }
        })
}

/// Product that is bitwise exact when either side is the identity.
fn factor_mul(a: &CMatrix, b: &CMatrix) -> CMatrix {
    if is_identity(a) {
        b.clone()
    } else if is_identity(b) {
        a.clone()
    } else {
        a * b
    }
}

fn eigenvalues(m: &CMatrix) -> Vec<Complex64> {
    if is_identity(m) {
        return vec![Complex64::ONE; m.nrows()];
    }
    let schur = Schur::new(m.clone());
    let (_, t) = schur.unpack();
    (0..m.nrows()).map(|i| t[(i, i)]).collect()
}

fn distance_to_identity(factors: &[CMatrix]) -> f64 {
    let mut products = vec![Complex64::ONE];
    for f in factors {
        let ev = eigenvalues(f);
        if ev.iter().all(|z| *z == Complex64::ONE) {
            continue;
        }
        products = products
            .iter()
            .flat_map(|p| ev.iter().map(move |e| p * e))
            .collect();
    }
    products
        .iter()
        .map(|z| (z - Complex64::ONE).norm())
        .fold(0.0, f64::max)
}
