//! A noncommutative lattice cochain: one qudit per slab of space along x¹.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use super::unitary::{CMatrix, UnitaryValue, ValueShape};
use super::{Cochain, CovarianceGroup};
use crate::error::{Error, Result};
use crate::geometry::{DoubleCone, PoincareElement};
use crate::simplex::{surface_bivector, AffineSimplex};

/// Largest total tensor dimension a mock may allocate.
pub const MAX_TENSOR_DIM: usize = 1 << 10;

/// `w(c) = ⊗_cells exp(i(α₁X + α₂Z))`, where `α₁`, `α₂` are the fractions of the signed area
/// bivector of `c` lying in each cell, contracted with `σ⁰¹ + σ²³` and `σ⁰² + σ³¹`.
///
/// Cells are slabs `[lo + j·cell, lo + (j+1)·cell)` along x¹ covering the region's extent
/// on that axis. Parts of a simplex outside the covered range are ignored. For qudits
/// `X` and `Z` are the Hermitian parts of the clock and shift matrices.
#[derive(Debug, Clone)]
pub struct MockLatticeCochain {
    region: DoubleCone,
    cell_size: f64,
    qudit_dim: usize,
    strength: f64,
    lo: f64,
    n_cells: usize,
    x_op: DMatrix<f64>,
    z_op: DMatrix<f64>,
}

pub fn mock_lattice_cochain(
    region: DoubleCone,
    cell_size: f64,
    qudit_dim: usize,
) -> Result<MockLatticeCochain> {
    MockLatticeCochain::new(region, cell_size, qudit_dim)
}

impl MockLatticeCochain {
    pub fn new(region: DoubleCone, cell_size: f64, qudit_dim: usize) -> Result<Self> {
        if !(cell_size > 0.0 && cell_size.is_finite()) {
            return Err(Error::InvalidModel(format!(
                "cell size must be positive, got {cell_size}"
            )));
        }
        if qudit_dim < 2 {
            return Err(Error::InvalidModel(format!(
                "qudit dimension must be at least 2, got {qudit_dim}"
            )));
        }
        let h = region.half_extent(1);
        let n_cells = ((2.0 * h / cell_size).ceil() as usize).max(1);
        let too_large = Error::RegionTooLarge {
            needed: n_cells,
            dim: qudit_dim,
            max: MAX_TENSOR_DIM,
        };
        let total = u32::try_from(n_cells)
            .ok()
            .and_then(|n| qudit_dim.checked_pow(n))
            .ok_or_else(|| too_large.clone())?;
        if total > MAX_TENSOR_DIM {
            return Err(too_large);
        }
        let d = qudit_dim;
        let x_op = DMatrix::from_fn(d, d, |i, j| {
            if (i + 1) % d == j || (j + 1) % d == i {
                if d == 2 {
                    1.0
                } else {
                    0.5
                }
            } else {
                0.0
            }
        });
        let z_op = DMatrix::from_fn(d, d, |i, j| {
            if i == j {
                (std::f64::consts::TAU * i as f64 / d as f64).cos()
            } else {
                0.0
            }
        });
        Ok(MockLatticeCochain {
            region,
            cell_size,
            qudit_dim,
            strength: 1.0,
            lo: region.center()[1] - h,
            n_cells,
            x_op,
            z_op,
        })
    }

    /// Scales every angle; the default is 1.
    pub fn with_strength(mut self, strength: f64) -> Result<Self> {
        if !strength.is_finite() {
            return Err(Error::NonFinite("mock strength"));
        }
        self.strength = strength;
        Ok(self)
    }

    pub fn region(&self) -> &DoubleCone {
        &self.region
    }

    pub fn cell_size(&self) -> f64 {
        self.cell_size
    }

    pub fn n_cells(&self) -> usize {
        self.n_cells
    }

    pub fn qudit_dim(&self) -> usize {
        self.qudit_dim
    }

    /// `[lo, hi)` along x¹ covered by the cells.
    pub fn extent(&self) -> (f64, f64) {
        (self.lo, self.lo + self.n_cells as f64 * self.cell_size)
    }

    /// Per-cell `(α₁, α₂)`; cells the simplex does not reach get exact zeros.
    pub fn angles(&self, c: &AffineSimplex) -> Result<Vec<(f64, f64)>> {
        if c.dim() != 2 {
            return Err(Error::UnsupportedDimension(c.dim()));
        }
        let mut out = vec![(0.0, 0.0); self.n_cells];
        let s = surface_bivector(c);
        let a1 = s[0][1] + s[2][3];
        let a2 = s[0][2] + s[3][1];
        if a1 == 0.0 && a2 == 0.0 {
            return Ok(out);
        }
        for (j, frac) in self.cell_fractions(c) {
            let k = frac * self.strength;
            out[j] = (k * a1, k * a2);
        }
        Ok(out)
    }

    /// Indices of cells holding a nonzero share of the simplex's area.
    pub fn cells_touched(&self, c: &AffineSimplex) -> Result<Vec<usize>> {
        Ok(self
            .angles(c)?
            .iter()
            .enumerate()
            .filter(|(_, a)| **a != (0.0, 0.0))
            .map(|(j, _)| j)
            .collect())
    }

    fn cell_index(&self, x1: f64) -> Option<usize> {
        let j = ((x1 - self.lo) / self.cell_size).floor();
        (j >= 0.0 && j < self.n_cells as f64).then_some(j as usize)
    }

    /// Area fraction of the triangle in each cell it meets, through the distribution of x¹
    /// over the triangle (piecewise quadratic between the sorted vertex heights).
    fn cell_fractions(&self, c: &AffineSimplex) -> Vec<(usize, f64)> {
        let mut h: [f64; 3] = std::array::from_fn(|i| c.vertex(i)[1]);
        h.sort_by(f64::total_cmp);
        let [h0, h1, h2] = h;
        if h0 == h2 {
            return self
                .cell_index(h0)
                .map(|j| vec![(j, 1.0)])
                .unwrap_or_default();
        }
        let cdf = |s: f64| {
            if s <= h0 {
                0.0
            } else if s >= h2 {
                1.0
            } else if s <= h1 {
                (s - h0).powi(2) / ((h2 - h0) * (h1 - h0))
            } else {
                1.0 - (h2 - s).powi(2) / ((h2 - h0) * (h2 - h1))
            }
        };
        let first = ((h0 - self.lo) / self.cell_size).floor().max(0.0);
        let last = ((h2 - self.lo) / self.cell_size)
            .floor()
            .min(self.n_cells as f64 - 1.0);
        if first > last {
            return Vec::new();
        }
        (first as usize..=last as usize)
            .filter_map(|j| {
                let a = self.lo + j as f64 * self.cell_size;
                let frac = cdf(a + self.cell_size) - cdf(a);
                (frac > 0.0).then_some((j, frac))
            })
            .collect()
    }

    /// `exp(i(a X + b Z))`, normalised so that negated angles give the exact adjoint.
    fn cell_unitary(&self, a: f64, b: f64) -> CMatrix {
        let d = self.qudit_dim;
        if a == 0.0 && b == 0.0 {
            return CMatrix::identity(d, d);
        }
        if a < 0.0 || (a == 0.0 && b < 0.0) {
            return self.cell_unitary(-a, -b).adjoint();
        }
        if d == 2 {
            let r = a.hypot(b);
            let (co, si) = (r.cos(), r.sin() / r);
            let i = Complex64::i();
            return CMatrix::from_row_slice(
                2,
                2,
                &[co + i * si * b, i * si * a, i * si * a, co - i * si * b],
            );
        }
        let eig = SymmetricEigen::new(&self.x_op * a + &self.z_op * b);
        let v = eig.eigenvectors.map(|x| Complex64::new(x, 0.0));
        let phases =
            CMatrix::from_diagonal(&eig.eigenvalues.map(|l| Complex64::from_polar(1.0, l)));
        &v * phases * v.adjoint()
    }

    /// Lattice shift `k` if `p` is a pure translation by `k` cells along x¹ (up to 1e-9).
    fn lattice_shift(&self, p: &PoincareElement) -> Option<i64> {
        if !p.lorentz.is_identity() {
            return None;
        }
        let k = p.translation[1] / self.cell_size;
        ((k - k.round()).abs() < 1e-9).then_some(k.round() as i64)
    }

    fn inside(&self, c: &AffineSimplex) -> bool {
        let (lo, hi) = self.extent();
        c.vertices().iter().all(|v| v[1] >= lo && v[1] < hi)
    }
}

impl Cochain for MockLatticeCochain {
    fn shape(&self) -> ValueShape {
        ValueShape::Tensor(vec![self.qudit_dim; self.n_cells])
    }

    fn eval(&self, c: &AffineSimplex) -> Result<UnitaryValue> {
        Ok(UnitaryValue::Tensor(
            self.angles(c)?
                .into_iter()
                .map(|(a, b)| self.cell_unitary(a, b))
                .collect(),
        ))
    }

    fn covariance(&self) -> CovarianceGroup {
        CovarianceGroup::LatticeTranslations {
            axis: 1,
            spacing: self.cell_size,
        }
    }

    /// `U(P)` permutes the cells; defined when both `c` and `Pc` lie inside the lattice.
    fn covariance_pair(
        &self,
        p: &PoincareElement,
        c: &AffineSimplex,
    ) -> Result<Option<(UnitaryValue, UnitaryValue)>> {
        let Some(k) = self.lattice_shift(p) else {
            return Ok(None);
        };
        let moved = c.poincare_act(p);
        if !self.inside(c) || !self.inside(&moved) {
            return Ok(None);
        }
        let UnitaryValue::Tensor(factors) = self.eval(c)? else {
            unreachable!("mock values are tensors")
        };
        let d = self.qudit_dim;
        let mut shifted = vec![CMatrix::identity(d, d); self.n_cells];
        for (j, f) in factors.into_iter().enumerate() {
            let target = j as i64 + k;
            if (0..self.n_cells as i64).contains(&target) {
                shifted[target as usize] = f;
            } else if f != CMatrix::identity(d, d) {
                return Ok(None);
            }
        }
        Ok(Some((UnitaryValue::Tensor(shifted), self.eval(&moved)?)))
    }
}
