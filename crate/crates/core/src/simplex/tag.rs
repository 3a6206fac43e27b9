//! Test functions attached to smearing simplices.

use nalgebra::{Matrix4, Vector4};
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::f64::consts::PI;
use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::geometry::{FourVector, LorentzMatrix};
use crate::quadrature::{gauss_hermite, gauss_legendre};

type Profile = Box<dyn Fn(&[f64; 4]) -> f64>;

/// Effective support radius of a Gaussian, in standard deviations.
pub const GAUSSIAN_CUTOFF: f64 = 6.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TestFunctionKind {
    /// Standard mollifier `exp(−1/(1−‖x/eps‖²))` supported in the Euclidean ball of radius eps.
    Bump { eps: f64 },
    /// Product of centred normals with the given per-axis standard deviations.
    Gaussian { widths: [f64; 4] },
}

/// A test function `f_M(x) = f(M⁻¹x)` with `∫f = normalization`.
///
/// `transform` records the Lorentz rotations applied by the Poincaré action; translations
/// never touch the tag. Identity for cancellation and chain merging is `(id, kind, normalization, transform)`
/// compared bitwise.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TestFunctionTag {
    pub id: u64,
    #[serde(flatten)]
    pub kind: TestFunctionKind,
    #[serde(default = "unit")]
    pub normalization: f64,
    #[serde(
        default = "LorentzMatrix::identity",
        skip_serializing_if = "LorentzMatrix::is_identity"
    )]
    pub transform: LorentzMatrix,
}

fn unit() -> f64 {
    1.0
}

impl TestFunctionTag {
    pub fn bump(id: u64, eps: f64) -> Result<Self> {
        Self::from_kind(id, TestFunctionKind::Bump { eps })
    }

    pub fn gaussian(id: u64, width: f64) -> Result<Self> {
        Self::from_kind(id, TestFunctionKind::Gaussian { widths: [width; 4] })
    }

    pub fn gaussian_axes(id: u64, widths: [f64; 4]) -> Result<Self> {
        Self::from_kind(id, TestFunctionKind::Gaussian { widths })
    }

    fn from_kind(id: u64, kind: TestFunctionKind) -> Result<Self> {
        let tag = TestFunctionTag {
            id,
            kind,
            normalization: 1.0,
            transform: LorentzMatrix::identity(),
        };
        tag.validate()?;
        Ok(tag)
    }

    pub fn with_normalization(mut self, normalization: f64) -> Result<Self> {
        self.normalization = normalization;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        let ok = match self.kind {
            TestFunctionKind::Bump { eps } => eps > 0.0 && eps.is_finite(),
            TestFunctionKind::Gaussian { widths } => {
                widths.iter().all(|w| *w > 0.0 && w.is_finite())
            }
        };
        if !ok {
            return Err(Error::InvalidTag(format!(
                "non-positive radius or width in {:?}",
                self.kind
            )));
        }
        if !self.normalization.is_finite() {
            return Err(Error::InvalidTag("non-finite normalization".into()));
        }
        Ok(())
    }

    pub fn kind_name(&self) -> &'static str {
        match self.kind {
            TestFunctionKind::Bump { .. } => "bump",
            TestFunctionKind::Gaussian { .. } => "gaussian",
        }
    }

    /// Radius of a Euclidean ball about the origin containing the (effective) support.
    pub fn effective_radius(&self) -> f64 {
        let base = match self.kind {
            TestFunctionKind::Bump { eps } => eps,
            TestFunctionKind::Gaussian { widths } => {
                GAUSSIAN_CUTOFF * widths.iter().copied().fold(0.0, f64::max)
            }
        };
        base * self.transform.spectral_norm()
    }

    /// The tag of `f_L`, i.e. `x ↦ f(L⁻¹x)` composed with the existing transform.
    pub fn rotated(&self, l: &LorentzMatrix) -> Self {
        if l.is_identity() {
            return self.clone();
        }
        TestFunctionTag {
            transform: *l * self.transform,
            ..self.clone()
        }
    }

    /// Covariance `M diag(w²) Mᵀ` of a Gaussian tag.
    pub fn gaussian_covariance(&self) -> Option<Matrix4<f64>> {
        match self.kind {
            TestFunctionKind::Gaussian { widths } => {
                let m = self.transform.matrix();
                let d = Matrix4::from_diagonal(&Vector4::from(widths.map(|w| w * w)));
                Some(m * d * m.transpose())
            }
            TestFunctionKind::Bump { .. } => None,
        }
    }

    pub fn density(&self, x: &FourVector) -> f64 {
        let u = self.transform.inverse().apply(x);
        match self.kind {
            TestFunctionKind::Bump { eps } => {
                let rho2 = u.euclidean_norm().powi(2) / (eps * eps);
                if rho2 >= 1.0 {
                    return 0.0;
                }
                self.normalization * (-1.0 / (1.0 - rho2)).exp() / (eps.powi(4) * bump_mass())
            }
            TestFunctionKind::Gaussian { widths } => {
                let mut q = 0.0;
                let mut norm = 1.0;
                for mu in 0..4 {
                    q += (u[mu] / widths[mu]).powi(2);
                    norm *= (2.0 * PI).sqrt() * widths[mu];
                }
                self.normalization * (-0.5 * q).exp() / norm
            }
        }
    }

    /// Points and weights with `Σ w g(x) ≈ ∫ g(x) f(x) dx`; weights sum to `normalization`.
    ///
    /// Gaussians use a tensor Gauss-Hermite rule. Bumps use tensor Gauss-Legendre on the
    /// bounding box weighted by the mollifier profile and renormalized, which is a
    /// consistent discretization rather than a spectrally accurate one.
    pub fn smearing_rule(&self, order: usize) -> Result<Vec<(FourVector, f64)>> {
        let m = self.transform;
        let (nodes, weights, profile): (Vec<f64>, Vec<f64>, Profile) = match self.kind {
            TestFunctionKind::Gaussian { .. } => {
                let r = gauss_hermite(order)?;
                (r.nodes, r.weights, Box::new(|_: &[f64; 4]| 1.0))
            }
            TestFunctionKind::Bump { .. } => {
                let r = gauss_legendre(order)?;
                let nodes = r.nodes.iter().map(|t| 2.0 * t - 1.0).collect();
                let weights = r.weights.iter().map(|w| 2.0 * w).collect();
                let profile = |u: &[f64; 4]| {
                    let rho2: f64 = u.iter().map(|v| v * v).sum();
                    if rho2 >= 1.0 {
                        0.0
                    } else {
                        (-1.0 / (1.0 - rho2)).exp()
                    }
                };
                (nodes, weights, Box::new(profile))
            }
        };
        let scale: [f64; 4] = match self.kind {
            TestFunctionKind::Gaussian { widths } => widths,
            TestFunctionKind::Bump { eps } => [eps; 4],
        };
        let n = nodes.len();
        let mut out = Vec::with_capacity(n.pow(4));
        for i in 0..n.pow(4) {
            let idx = [i % n, (i / n) % n, (i / n / n) % n, i / n / n / n];
            let unit = idx.map(|k| nodes[k]);
            let w = idx.iter().map(|&k| weights[k]).product::<f64>() * profile(&unit);
            if w == 0.0 {
                continue;
            }
            let u = FourVector(std::array::from_fn(|mu| unit[mu] * scale[mu]));
            out.push((m.apply(&u), w));
        }
        let total: f64 = out.iter().map(|p| p.1).sum();
        for p in &mut out {
            p.1 *= self.normalization / total;
        }
        Ok(out)
    }

    fn identity_key(&self) -> [u64; 23] {
        let mut k = [0u64; 23];
        k[0] = self.id;
        match self.kind {
            TestFunctionKind::Bump { eps } => {
                k[1] = 0;
                k[2] = eps.to_bits();
            }
            TestFunctionKind::Gaussian { widths } => {
                k[1] = 1;
                for (i, w) in widths.iter().enumerate() {
                    k[2 + i] = w.to_bits();
                }
            }
        }
        k[6] = self.normalization.to_bits();
        for (i, v) in self.transform.matrix().iter().enumerate() {
            k[7 + i] = v.to_bits();
        }
        k
    }
}

/// `∫_{‖x‖<1} exp(−1/(1−‖x‖²)) d⁴x = 2π² ∫₀¹ exp(−1/(1−ρ²)) ρ³ dρ`.
fn bump_mass() -> f64 {
    static MASS: OnceLock<f64> = OnceLock::new();
    *MASS.get_or_init(|| {
        let rule = gauss_legendre(80).expect("positive order");
        let radial: f64 = rule
            .iter()
            .map(|(r, w)| w * (-1.0 / (1.0 - r * r)).exp() * r.powi(3))
            .sum();
        2.0 * PI * PI * radial
    })
}

impl PartialEq for TestFunctionTag {
    fn eq(&self, other: &Self) -> bool {
        self.identity_key() == other.identity_key()
    }
}

impl Eq for TestFunctionTag {}

impl PartialOrd for TestFunctionTag {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for TestFunctionTag {
    fn cmp(&self, other: &Self) -> Ordering {
        self.identity_key().cmp(&other.identity_key())
    }
}

impl std::hash::Hash for TestFunctionTag {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.identity_key().hash(state);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_parameters() {
        assert!(TestFunctionTag::bump(0, 0.0).is_err());
        assert!(TestFunctionTag::bump(0, -1.0).is_err());
        assert!(TestFunctionTag::gaussian_axes(0, [1.0, 1.0, f64::NAN, 1.0]).is_err());
    }

    #[test]
    fn densities_integrate_to_normalization() {
        // Oracle: midpoint rule on a fine 4D grid, independent of the radial formula.
        let bump = TestFunctionTag::bump(1, 0.5)
            .unwrap()
            .with_normalization(2.0)
            .unwrap();
        let n: usize = 28;
        let h = 1.0 / n as f64;
        let mut s = 0.0;
        for i in 0..n.pow(4) {
            let idx = [i % n, (i / n) % n, (i / n / n) % n, i / n / n / n];
            let x = FourVector(idx.map(|k| -0.5 + (k as f64 + 0.5) * h));
            s += bump.density(&x) * h.powi(4);
        }
        assert!((s - 2.0).abs() < 2e-3, "{s}");
        assert_eq!(bump.density(&FourVector::new(0.5, 0.0, 0.0, 0.0)), 0.0);
    }

    #[test]
    fn smearing_rules_reproduce_moments() {
        let l = LorentzMatrix::boost(1, 0.6).unwrap();
        let g = TestFunctionTag::gaussian_axes(2, [0.1, 0.2, 0.15, 0.3])
            .unwrap()
            .rotated(&l);
        let rule = g.smearing_rule(4).unwrap();
        let sigma = g.gaussian_covariance().unwrap();
        let mass: f64 = rule.iter().map(|p| p.1).sum();
        assert!((mass - 1.0).abs() < 1e-14);
        for a in 0..4 {
            let first: f64 = rule.iter().map(|(x, w)| w * x[a]).sum();
            assert!(first.abs() < 1e-14);
            for b in 0..4 {
                let second: f64 = rule.iter().map(|(x, w)| w * x[a] * x[b]).sum();
                assert!((second - sigma[(a, b)]).abs() < 1e-13);
            }
        }
        let bump = TestFunctionTag::bump(3, 0.2).unwrap();
        let rule = bump.smearing_rule(6).unwrap();
        assert!(rule.iter().all(|(x, _)| x.euclidean_norm() < 0.2));
        let first: f64 = rule.iter().map(|(x, w)| w * x[2]).sum();
        assert!(first.abs() < 1e-15);
    }

    #[test]
    fn rotation_changes_identity_and_radius() {
        let tag = TestFunctionTag::bump(7, 0.1).unwrap();
        assert_eq!(tag.rotated(&LorentzMatrix::identity()), tag);
        let l = LorentzMatrix::boost(2, 1.0).unwrap();
        let r = tag.rotated(&l);
        assert_ne!(r, tag);
        assert!((r.effective_radius() - 0.1 * 1.0f64.exp()).abs() < 1e-12);
    }

    #[test]
    fn json_shape() {
        let tag = TestFunctionTag::gaussian(4, 0.25).unwrap();
        let s = serde_json::to_string(&tag).unwrap();
        assert_eq!(
            s,
            r#"{"id":4,"kind":"gaussian","widths":[0.25,0.25,0.25,0.25],"normalization":1.0}"#
        );
        let back: TestFunctionTag =
            serde_json::from_str(r#"{"id":9,"kind":"bump","eps":0.5}"#).unwrap();
        assert_eq!(back, TestFunctionTag::bump(9, 0.5).unwrap());
    }
}
