use crate::error::{Error, Result};
use crate::geometry::FourVector;
use crate::quadrature::{gauss_legendre, triangle_rule};

use super::AffineSimplex;

/// Value of the smeared volume element at a point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FormValue {
    Scalar(f64),
    Vector([f64; 4]),
    /// Antisymmetric; entry (μ, ν) is the σ^{μν} component.
    Bivector([[f64; 4]; 4]),
}

impl FormValue {
    pub fn max_abs(&self) -> f64 {
        match self {
            FormValue::Scalar(v) => v.abs(),
            FormValue::Vector(v) => v.iter().fold(0.0, |m, x| m.max(x.abs())),
            FormValue::Bivector(b) => b.iter().flatten().fold(0.0, |m, x| m.max(x.abs())),
        }
    }
}

/// `χ[f]^{α…}(x) = ∫_{Δn} f(x − χ(t)) χ^{α…} dⁿt` for affine χ, where the Jacobian is constant.
#[derive(Debug, Clone)]
pub struct SimplexForm {
    simplex: AffineSimplex,
    jacobian: FormValue,
    nodes: Vec<(FourVector, f64)>,
}

impl SimplexForm {
    pub fn dim(&self) -> usize {
        self.simplex.dim()
    }

    pub fn jacobian(&self) -> FormValue {
        self.jacobian
    }

    pub fn support_radius(&self) -> f64 {
        self.simplex.tag().effective_radius()
    }

    pub fn eval(&self, x: &FourVector) -> FormValue {
        let tag = self.simplex.tag();
        let s: f64 = self
            .nodes
            .iter()
            .map(|(p, w)| w * tag.density(&(*x - *p)))
            .sum();
        match self.jacobian {
            FormValue::Scalar(j) => FormValue::Scalar(s * j),
            FormValue::Vector(j) => FormValue::Vector(j.map(|v| s * v)),
            FormValue::Bivector(j) => FormValue::Bivector(j.map(|row| row.map(|v| s * v))),
        }
    }

    /// Single component for the multi-index `alpha` (length n).
    pub fn component(&self, x: &FourVector, alpha: &[usize]) -> Result<f64> {
        let wrong = || Error::UnsupportedDimension(alpha.len());
        match (self.eval(x), alpha) {
            (FormValue::Scalar(v), []) => Ok(v),
            (FormValue::Vector(v), [a]) => v.get(*a).copied().ok_or_else(wrong),
            (FormValue::Bivector(b), [a, c]) if *a < 4 && *c < 4 => Ok(b[*a][*c]),
            _ => Err(wrong()),
        }
    }
}

/// Builds the form of `s` with a Gauss-Legendre rule of `order` points per axis.
pub fn simplex_form(s: &AffineSimplex, order: usize) -> Result<SimplexForm> {
    if order == 0 {
        return Err(Error::QuadratureOrder { min: 1, found: 0 });
    }
    let v = s.vertices();
    let (jacobian, nodes) = match s.dim() {
        0 => (FormValue::Scalar(1.0), vec![(v[0], 1.0)]),
        1 => {
            let d = v[1] - v[0];
            let rule = gauss_legendre(order)?;
            (
                FormValue::Vector(d.0),
                rule.iter().map(|(t, w)| (s.eval(&[t]), w)).collect(),
            )
        }
        2 => {
            let rule = triangle_rule(order)?;
            (
                FormValue::Bivector(surface_bivector(s)),
                rule.iter().map(|(t, w)| (s.eval(t), *w)).collect(),
            )
        }
        n => return Err(Error::UnsupportedDimension(n)),
    };
    Ok(SimplexForm {
        simplex: s.clone(),
        jacobian,
        nodes,
    })
}

/// `σ^{μν} = Δ₁^μ Δ₂^ν − Δ₁^ν Δ₂^μ` with `Δᵢ = vᵢ − v₀`.
pub(crate) fn surface_bivector(s: &AffineSimplex) -> [[f64; 4]; 4] {
    let v = s.vertices();
    let (d1, d2) = (v[1] - v[0], v[2] - v[0]);
    std::array::from_fn(|m| std::array::from_fn(|n| d1[m] * d2[n] - d1[n] * d2[m]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simplex::TestFunctionTag;

    fn tri(v: [[f64; 4]; 3], tag: &TestFunctionTag) -> AffineSimplex {
        AffineSimplex::new(v.iter().map(|x| FourVector(*x)).collect(), tag.clone()).unwrap()
    }

    #[test]
    fn point_form_is_shifted_density() {
        let tag = TestFunctionTag::gaussian(1, 0.3).unwrap();
        let a = FourVector::new(0.1, 0.2, 0.3, 0.4);
        let f = simplex_form(&AffineSimplex::point(a, tag.clone()), 4).unwrap();
        let x = FourVector::new(0.0, 0.5, 0.1, 0.2);
        assert_eq!(f.eval(&x), FormValue::Scalar(tag.density(&(x - a))));
    }

    #[test]
    fn degenerate_forms_vanish() {
        let tag = TestFunctionTag::bump(1, 0.5).unwrap();
        let s = tri(
            [
                [0.0, 0.0, 0.0, 0.0],
                [1.0, 0.0, 0.0, 0.0],
                [1.0, 0.0, 0.0, 0.0],
            ],
            &tag,
        );
        let f = simplex_form(&s, 5).unwrap();
        for k in 0..100 {
            let t = k as f64 / 100.0;
            let x = FourVector::new(t, 0.2 * t, -0.1, 0.05);
            assert_eq!(f.eval(&x).max_abs(), 0.0);
        }
    }

    #[test]
    fn bivector_is_constant_antisymmetric_and_flips() {
        let tag = TestFunctionTag::bump(1, 0.5).unwrap();
        let s = tri(
            [
                [0.0, 0.0, 0.0, 0.0],
                [1.0, 0.0, 0.0, 0.0],
                [0.0, 1.0, 0.0, 0.0],
            ],
            &tag,
        );
        let b = surface_bivector(&s);
        assert_eq!(b[0][1], 1.0);
        assert_eq!(b[1][0], -1.0);
        let flipped = surface_bivector(&s.opposite().unwrap());
        for m in 0..4 {
            for n in 0..4 {
                assert_eq!(flipped[m][n], -b[m][n]);
                assert_eq!(b[m][n], -b[n][m]);
            }
        }
    }

    #[test]
    fn segment_form_integrates_to_displacement() {
        // ∫ χ[f]^α(x) d⁴x = (∫f) (s₁ − s₀)^α; oracle is the midpoint rule.
        let tag = TestFunctionTag::gaussian(1, 0.15).unwrap();
        let s = AffineSimplex::new(
            vec![
                FourVector::new(0.0, 0.0, 0.0, 0.0),
                FourVector::new(0.2, 0.1, 0.0, 0.0),
            ],
            tag,
        )
        .unwrap();
        let f = simplex_form(&s, 8).unwrap();
        let n = 22;
        let h = 2.0 / n as f64;
        let mut acc = [0.0; 4];
        for i in 0..n * n {
            let (a, b) = (i % n, i / n);
            // Integrate out x², x³ analytically: the Gaussian factors there integrate to one.
            let x = FourVector::new(
                -0.9 + (a as f64 + 0.5) * h,
                -0.95 + (b as f64 + 0.5) * h,
                0.0,
                0.0,
            );
            if let FormValue::Vector(v) = f.eval(&x) {
                let marginal = 2.0 * std::f64::consts::PI * 0.15 * 0.15;
                for mu in 0..4 {
                    acc[mu] += v[mu] * h * h * marginal;
                }
            }
        }
        assert!((acc[0] - 0.2).abs() < 1e-3, "{acc:?}");
        assert!((acc[1] - 0.1).abs() < 1e-3);
        assert_eq!(acc[2], 0.0);
    }

    #[test]
    fn rejects_unsupported() {
        let tag = TestFunctionTag::bump(1, 0.5).unwrap();
        let v = vec![FourVector::ZERO; 4];
        let s = AffineSimplex::new(v, tag).unwrap();
        assert_eq!(
            simplex_form(&s, 3).unwrap_err(),
            Error::UnsupportedDimension(3)
        );
    }
}
