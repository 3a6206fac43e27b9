use serde::{Deserialize, Serialize};

use super::model::{Bivector, FieldModel, SmearedField};
use crate::error::{Error, Result};
use crate::geometry::{FourVector, PoincareElement};
use crate::loopgroup::Path;
use crate::quadrature::{gauss_legendre, triangle_rule, Rule1d};
use crate::simplex::{surface_bivector, AffineSimplex, Chain, TestFunctionTag};

/// Quadrature orders. `order` drives the homotopy, curve and surface rules alike;
/// `smearing_order` is the per-axis order of the rule used to smear gauge functions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuadratureConfig {
    pub order: usize,
    #[serde(default = "default_smearing_order")]
    pub smearing_order: usize,
}

fn default_smearing_order() -> usize {
    4
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig {
            order: 32,
            smearing_order: default_smearing_order(),
        }
    }
}

impl QuadratureConfig {
    pub fn new(order: usize) -> Result<Self> {
        let cfg = QuadratureConfig {
            order,
            ..Default::default()
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.order < 2 {
            return Err(Error::QuadratureOrder {
                min: 2,
                found: self.order,
            });
        }
        if self.smearing_order < 1 {
            return Err(Error::QuadratureOrder {
                min: 1,
                found: self.smearing_order,
            });
        }
        Ok(())
    }
}

/// Rules built once from a [`QuadratureConfig`].
#[derive(Debug, Clone)]
pub(crate) struct Integrator {
    line: Rule1d,
    /// Each node `(a, b)` is also used as `(b, a)`, so a triangle and its opposite are
    /// sampled at the same points.
    surface: Vec<([f64; 2], f64)>,
}

impl Integrator {
    pub(crate) fn new(cfg: &QuadratureConfig) -> Result<Self> {
        cfg.validate()?;
        Ok(Integrator {
            line: gauss_legendre(cfg.order)?,
            surface: triangle_rule(cfg.order)?,
        })
    }

    /// `A^z_ν(y) = ∫₀¹ t (y−z)^μ F̃_{μν}(z + t(y−z)) dt`.
    pub(crate) fn potential(
        &self,
        field: &SmearedField,
        z: &FourVector,
        y: &FourVector,
    ) -> [f64; 4] {
        let d = *y - *z;
        let mut a = [0.0; 4];
        if d == FourVector::ZERO {
            return a;
        }
        for (t, w) in self.line.iter() {
            let f = field.eval(&(*z + d.scale(t)));
            for nu in 0..4 {
                let contracted: f64 = (0..4).map(|mu| d[mu] * f[mu][nu]).sum();
                a[nu] += w * t * contracted;
            }
        }
        a
    }

    /// `∫₀¹ A^z_ν(a + s(b−a)) (b−a)^ν ds`.
    pub(crate) fn segment_integral(
        &self,
        field: &SmearedField,
        z: &FourVector,
        a: &FourVector,
        b: &FourVector,
    ) -> f64 {
        let d = *b - *a;
        if d == FourVector::ZERO {
            return 0.0;
        }
        self.line
            .iter()
            .map(|(s, w)| {
                let pot = self.potential(field, z, &(*a + d.scale(s)));
                w * (0..4).map(|nu| pot[nu] * d[nu]).sum::<f64>()
            })
            .sum()
    }

    /// `½ ∫_{Δ₂} F̃_{μν}(σ(t)) σ^{μν} d²t`.
    pub(crate) fn surface(&self, field: &SmearedField, c: &AffineSimplex) -> f64 {
        let sigma = surface_bivector(c);
        if sigma.iter().flatten().all(|x| *x == 0.0) {
            return 0.0;
        }
        let v = c.vertices();
        let (v0, d1, d2) = (v[0], v[1] - v[0], v[2] - v[0]);
        let point = |a: f64, b: f64| {
            FourVector(std::array::from_fn(|mu| v0[mu] + (a * d1[mu] + b * d2[mu])))
        };
        let contract = |f: Bivector| -> f64 {
            let mut acc = 0.0;
            for m in 0..4 {
                for n in 0..4 {
                    acc += f[m][n] * sigma[m][n];
                }
            }
            acc
        };
        let total: f64 = self
            .surface
            .iter()
            .map(|([a, b], w)| {
                let g1 = contract(field.eval(&point(*a, *b)));
                let g2 = contract(field.eval(&point(*b, *a)));
                0.5 * w * (g1 + g2)
            })
            .sum();
        0.5 * total
    }
}

/// A piecewise-affine curve through the listed points.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<FourVector>", into = "Vec<FourVector>")]
pub struct Curve {
    points: Vec<FourVector>,
}

impl TryFrom<Vec<FourVector>> for Curve {
    type Error = Error;
    fn try_from(points: Vec<FourVector>) -> Result<Self> {
        Curve::polyline(points)
    }
}

impl From<Curve> for Vec<FourVector> {
    fn from(c: Curve) -> Self {
        c.points
    }
}

impl Curve {
    pub fn polyline(points: Vec<FourVector>) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::EmptyCurve);
        }
        if !points.iter().all(FourVector::is_finite) {
            return Err(Error::NonFinite("curve point"));
        }
        Ok(Curve { points })
    }

    pub fn segment(a: FourVector, b: FourVector) -> Result<Self> {
        Self::polyline(vec![a, b])
    }

    /// `v₀ → v₁ → v₂ → v₀`, the oriented boundary of a triangle.
    pub fn triangle_boundary(c: &AffineSimplex) -> Result<Self> {
        if c.dim() != 2 {
            return Err(Error::UnsupportedDimension(c.dim()));
        }
        let v = c.vertices();
        Self::polyline(vec![v[0], v[1], v[2], v[0]])
    }

    pub fn from_path(p: &Path) -> Result<Self> {
        let mut points = vec![p.letters()[0].start_vertex()];
        points.extend(p.letters().iter().map(|l| l.end_vertex()));
        Self::polyline(points)
    }

    pub fn points(&self) -> &[FourVector] {
        &self.points
    }

    pub fn start(&self) -> FourVector {
        self.points[0]
    }

    pub fn end(&self) -> FourVector {
        *self.points.last().expect("at least two points")
    }

    pub fn is_closed(&self) -> bool {
        self.start() == self.end()
    }

    pub fn reversed(&self) -> Curve {
        Curve {
            points: self.points.iter().rev().copied().collect(),
        }
    }

    pub fn segments(&self) -> impl Iterator<Item = (FourVector, FourVector)> + '_ {
        self.points.windows(2).map(|w| (w[0], w[1]))
    }
}

/// `F⟨σ_c, f⟩` with `f` the simplex's own test function.
pub fn surface_integral(
    model: &FieldModel,
    c: &AffineSimplex,
    cfg: &QuadratureConfig,
) -> Result<f64> {
    surface_integral_with(model, c.tag(), c, cfg)
}

/// `F⟨σ_c, f⟩` for an explicit test function.
pub fn surface_integral_with(
    model: &FieldModel,
    tag: &TestFunctionTag,
    c: &AffineSimplex,
    cfg: &QuadratureConfig,
) -> Result<f64> {
    if c.dim() != 2 {
        return Err(Error::UnsupportedDimension(c.dim()));
    }
    Ok(Integrator::new(cfg)?.surface(&SmearedField::new(model, tag)?, c))
}

/// `Σ kᵢ F⟨σ_{cᵢ}, fᵢ⟩` over a 2-chain.
pub fn chain_surface_integral(
    model: &FieldModel,
    chain: &Chain,
    cfg: &QuadratureConfig,
) -> Result<f64> {
    if let Some(d) = chain.dim().filter(|d| *d != 2) {
        return Err(Error::ChainDimension {
            expected: 2,
            found: d,
        });
    }
    let integ = Integrator::new(cfg)?;
    let mut total = 0.0;
    for (k, s) in chain.terms() {
        total += k as f64 * integ.surface(&SmearedField::new(model, s.tag())?, s);
    }
    Ok(total)
}

/// Covariant components `A^z_μ(y, f)`.
pub fn potential(
    model: &FieldModel,
    tag: &TestFunctionTag,
    z: &FourVector,
    y: &FourVector,
    cfg: &QuadratureConfig,
) -> Result<[f64; 4]> {
    Ok(Integrator::new(cfg)?.potential(&SmearedField::new(model, tag)?, z, y))
}

/// `A^z⟨γ, f⟩ = Σ_segments ∫ A^z_ν(γ(s)) γ̇^ν ds`.
pub fn line_integral(
    model: &FieldModel,
    tag: &TestFunctionTag,
    z: &FourVector,
    curve: &Curve,
    cfg: &QuadratureConfig,
) -> Result<f64> {
    let integ = Integrator::new(cfg)?;
    let field = SmearedField::new(model, tag)?;
    Ok(curve
        .segments()
        .map(|(a, b)| integ.segment_integral(&field, z, &a, &b))
        .sum())
}

/// `|A^z⟨∂σ, f⟩ − F⟨σ, f⟩|`.
pub fn stokes_check(
    model: &FieldModel,
    tag: &TestFunctionTag,
    z: &FourVector,
    sigma: &AffineSimplex,
    cfg: &QuadratureConfig,
) -> Result<f64> {
    let integ = Integrator::new(cfg)?;
    let field = SmearedField::new(model, tag)?;
    let line: f64 = Curve::triangle_boundary(sigma)?
        .segments()
        .map(|(a, b)| integ.segment_integral(&field, z, &a, &b))
        .sum();
    Ok((line - integ.surface(&field, sigma)).abs())
}

/// `|A^z⟨γ, f⟩ − F⟨hᶻγ, f⟩|` for a segment `γ`.
pub fn cone_check(
    model: &FieldModel,
    tag: &TestFunctionTag,
    z: &FourVector,
    gamma: &AffineSimplex,
    cfg: &QuadratureConfig,
) -> Result<f64> {
    if gamma.dim() != 1 {
        return Err(Error::UnsupportedDimension(gamma.dim()));
    }
    let integ = Integrator::new(cfg)?;
    let field = SmearedField::new(model, tag)?;
    let (a, b) = (*gamma.vertex(0), *gamma.vertex(1));
    let line = integ.segment_integral(&field, z, &a, &b);
    Ok((line - integ.surface(&field, &gamma.cone(z))).abs())
}

/// `max_μ |A^z_μ(y, f) − L^δ_μ A′^{Pz}_δ(Py, f_L)|`, where `A′` is the potential of the
/// pushed-forward field.
pub fn covariance_check(
    model: &FieldModel,
    tag: &TestFunctionTag,
    z: &FourVector,
    y: &FourVector,
    p: &PoincareElement,
    cfg: &QuadratureConfig,
) -> Result<f64> {
    let integ = Integrator::new(cfg)?;
    let a = integ.potential(&SmearedField::new(model, tag)?, z, y);
    let moved = SmearedField::new(&model.pushforward(p), &tag.rotated(&p.lorentz))?;
    let a_prime = integ.potential(&moved, &p.apply(z), &p.apply(y));
    let l = p.lorentz.matrix();
    Ok((0..4)
        .map(|mu| (a[mu] - (0..4).map(|d| l[(d, mu)] * a_prime[d]).sum::<f64>()).abs())
        .fold(0.0, f64::max))
}

/// `|F⟨c₁⟩ − F⟨c₂⟩|` for 2-chains with the same oriented boundary.
pub fn boundary_independence_check(
    model: &FieldModel,
    c1: &Chain,
    c2: &Chain,
    cfg: &QuadratureConfig,
) -> Result<f64> {
    if c1.boundary()?.oriented() != c2.boundary()?.oriented() {
        return Err(Error::BoundaryMismatch);
    }
    Ok((chain_surface_integral(model, c1, cfg)? - chain_surface_integral(model, c2, cfg)?).abs())
}

/// Largest cyclic sum `∂_σF̃_{μν} + ∂_μF̃_{νσ} + ∂_νF̃_{σμ}` by central differences.
pub fn closedness_residual(
    model: &FieldModel,
    tag: &TestFunctionTag,
    y: &FourVector,
    step: f64,
) -> Result<f64> {
    let field = SmearedField::new(model, tag)?;
    let grad: [Bivector; 4] = std::array::from_fn(|s| {
        let h = FourVector::basis(s).scale(step);
        let (fp, fm) = (field.eval(&(*y + h)), field.eval(&(*y - h)));
        std::array::from_fn(|m| std::array::from_fn(|n| (fp[m][n] - fm[m][n]) / (2.0 * step)))
    });
    let mut worst: f64 = 0.0;
    for s in 0..4 {
        for m in 0..4 {
            for n in 0..4 {
                worst = worst.max((grad[s][m][n] + grad[m][n][s] + grad[n][s][m]).abs());
            }
        }
    }
    Ok(worst)
}

/// Largest `|∂_μA^z_ν − ∂_νA^z_μ − F̃_{μν}|` at `y` by central differences.
pub fn primitivity_residual(
    model: &FieldModel,
    tag: &TestFunctionTag,
    z: &FourVector,
    y: &FourVector,
    cfg: &QuadratureConfig,
    step: f64,
) -> Result<f64> {
    let integ = Integrator::new(cfg)?;
    let field = SmearedField::new(model, tag)?;
    // grad[μ][ν] = ∂_μ A_ν
    let grad: [[f64; 4]; 4] = std::array::from_fn(|mu| {
        let h = FourVector::basis(mu).scale(step);
        let ap = integ.potential(&field, z, &(*y + h));
        let am = integ.potential(&field, z, &(*y - h));
        std::array::from_fn(|nu| (ap[nu] - am[nu]) / (2.0 * step))
    });
    let f = field.eval(y);
    let mut worst: f64 = 0.0;
    for m in 0..4 {
        for n in 0..4 {
            worst = worst.max((grad[m][n] - grad[n][m] - f[m][n]).abs());
        }
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::emfield::model::ZERO_BIVECTOR;
    use crate::geometry::LorentzMatrix;

    fn f01() -> Bivector {
        let mut c = ZERO_BIVECTOR;
        c[0][1] = 1.0;
        c[1][0] = -1.0;
        c
    }

    fn bump() -> TestFunctionTag {
        TestFunctionTag::bump(1, 0.1).unwrap()
    }

    fn gauss() -> TestFunctionTag {
        TestFunctionTag::gaussian(2, 0.15).unwrap()
    }

    fn tri(v: [[f64; 4]; 3], tag: TestFunctionTag) -> AffineSimplex {
        AffineSimplex::new(v.iter().map(|x| FourVector(*x)).collect(), tag).unwrap()
    }

    fn cfg(order: usize) -> QuadratureConfig {
        QuadratureConfig::new(order).unwrap()
    }

    fn plane_wave() -> FieldModel {
        FieldModel::plane_wave([0.3, -1.0, 0.5, 0.2], [1.2, 0.4, -0.7, 0.9], 0.4).unwrap()
    }

    fn linear() -> FieldModel {
        let mut t = [ZERO_BIVECTOR; 4];
        t[0][1][2] = 1.0;
        t[2][0][3] = -0.5;
        t[3][1][1] = 0.7;
        t[1][0][0] = 0.3;
        FieldModel::linear_from_potential(f01(), t).unwrap()
    }

    #[test]
    fn config_validation() {
        assert_eq!(
            QuadratureConfig::new(1),
            Err(Error::QuadratureOrder { min: 2, found: 1 })
        );
        let c: QuadratureConfig = serde_json::from_str(r#"{"order": 8}"#).unwrap();
        assert_eq!(c.smearing_order, 4);
    }

    #[test]
    fn constant_surface_examples() {
        let m = FieldModel::constant(f01()).unwrap();
        let c = tri(
            [[0.0; 4], [1.0, 0.0, 0.0, 0.0], [0.0, 1.0, 0.0, 0.0]],
            bump(),
        );
        let v = surface_integral(&m, &c, &cfg(4)).unwrap();
        assert!((v - 0.5).abs() < 1e-15);
        let deg = tri(
            [[0.0; 4], [1.0, 0.0, 0.0, 0.0], [1.0, 0.0, 0.0, 0.0]],
            bump(),
        );
        assert_eq!(surface_integral(&m, &deg, &cfg(4)).unwrap(), 0.0);
    }

    #[test]
    fn orientation_is_exact() {
        let c = tri(
            [
                [0.1, 0.2, -0.3, 0.0],
                [0.9, 0.1, 0.4, 0.2],
                [0.2, 0.8, 0.1, -0.5],
            ],
            gauss(),
        );
        for m in [plane_wave(), linear()] {
            let v = surface_integral(&m, &c, &cfg(8)).unwrap();
            assert_eq!(
                surface_integral(&m, &c.opposite().unwrap(), &cfg(8)).unwrap(),
                -v
            );
        }
    }

    #[test]
    fn potential_examples() {
        let m = FieldModel::constant(f01()).unwrap();
        let z = FourVector::new(0.3, 0.1, 0.0, 0.2);
        let a = potential(&m, &bump(), &z, &z, &cfg(4)).unwrap();
        assert_eq!(a, [0.0; 4]);
        // A_ν = ½ (y−z)^μ F_{μν}.
        let a = potential(&m, &bump(), &z, &(z + FourVector::basis(1)), &cfg(4)).unwrap();
        assert!((a[0] + 0.5).abs() < 1e-15 && a[1] == 0.0);
        let a = potential(&m, &bump(), &z, &(z + FourVector::basis(0)), &cfg(4)).unwrap();
        assert!((a[1] - 0.5).abs() < 1e-15 && a[0] == 0.0);
    }

    #[test]
    fn line_integral_examples() {
        let m = FieldModel::constant(f01()).unwrap();
        let z = FourVector::new(0.0, 0.2, 0.1, 0.0);
        let point = Curve::segment(z, z).unwrap();
        assert_eq!(
            line_integral(&m, &bump(), &z, &point, &cfg(4)).unwrap(),
            0.0
        );
        let radial = Curve::segment(z, z + FourVector::basis(1)).unwrap();
        assert!(
            line_integral(&m, &bump(), &z, &radial, &cfg(4))
                .unwrap()
                .abs()
                < 1e-15
        );
        let c = Curve::polyline(vec![
            FourVector::new(0.4, 0.0, 1.0, 0.0),
            FourVector::new(-0.2, 1.0, 0.5, 0.3),
            FourVector::new(0.0, 0.3, 0.0, 1.0),
        ])
        .unwrap();
        let pw = plane_wave();
        let fwd = line_integral(&pw, &gauss(), &z, &c, &cfg(16)).unwrap();
        let back = line_integral(&pw, &gauss(), &z, &c.reversed(), &cfg(16)).unwrap();
        assert!((fwd + back).abs() < 1e-14);
        assert_eq!(Curve::polyline(vec![z]), Err(Error::EmptyCurve));
    }

    #[test]
    fn stokes_and_cone() {
        let z = FourVector::new(0.2, -0.4, 0.3, 0.1);
        let sigma = tri(
            [
                [0.1, 0.2, -0.3, 0.0],
                [0.9, 0.1, 0.4, 0.2],
                [0.2, 0.8, 0.1, -0.5],
            ],
            gauss(),
        );
        let gamma = AffineSimplex::new(
            vec![
                FourVector::new(0.5, 0.5, 0.0, 0.0),
                FourVector::new(-0.3, 0.1, 0.7, 0.4),
            ],
            gauss(),
        )
        .unwrap();
        for (m, tol) in [
            (FieldModel::constant(f01()).unwrap(), 1e-13),
            (linear(), 1e-12),
            (plane_wave(), 1e-12),
        ] {
            assert!(
                stokes_check(&m, &gauss(), &z, &sigma, &cfg(32)).unwrap() < tol,
                "{}",
                m.name()
            );
            assert!(
                cone_check(&m, &gauss(), &z, &gamma, &cfg(32)).unwrap() < tol,
                "{}",
                m.name()
            );
        }
        let deg = tri([[0.1, 0.2, -0.3, 0.0]; 3], gauss());
        assert_eq!(
            stokes_check(&plane_wave(), &gauss(), &z, &deg, &cfg(8)).unwrap(),
            0.0
        );
        let loop_at_z = AffineSimplex::new(vec![z, z], gauss()).unwrap();
        assert_eq!(
            cone_check(&plane_wave(), &gauss(), &z, &loop_at_z, &cfg(8)).unwrap(),
            0.0
        );
    }

    #[test]
    fn covariance_under_poincare() {
        let z = FourVector::new(0.2, -0.4, 0.3, 0.1);
        let y = FourVector::new(-0.5, 0.6, 0.2, 0.9);
        let tag = TestFunctionTag::gaussian_axes(3, [0.1, 0.2, 0.15, 0.05]).unwrap();
        let boost =
            LorentzMatrix::boost(3, 2.0).unwrap() * LorentzMatrix::rotation(2, 1.1).unwrap();
        let ps = [
            PoincareElement::identity(),
            PoincareElement::translation(FourVector::new(1.0, -2.0, 0.5, 0.3)),
            PoincareElement::new(FourVector::new(0.3, 0.0, -1.0, 0.2), boost),
        ];
        for m in [FieldModel::constant(f01()).unwrap(), linear(), plane_wave()] {
            for p in &ps {
                let r = covariance_check(&m, &tag, &z, &y, p, &cfg(32)).unwrap();
                assert!(r < 1e-11, "{} {r}", m.name());
            }
        }
        assert_eq!(
            covariance_check(&plane_wave(), &tag, &z, &y, &ps[0], &cfg(8)).unwrap(),
            0.0
        );
    }

    #[test]
    fn boundary_independence() {
        let (v0, v1, v2) = (
            FourVector::new(0.1, 0.2, -0.3, 0.0),
            FourVector::new(0.9, 0.1, 0.4, 0.2),
            FourVector::new(0.2, 0.8, 0.1, -0.5),
        );
        let c = AffineSimplex::new(vec![v0, v1, v2], gauss()).unwrap();
        let cyc = AffineSimplex::new(vec![v1, v2, v0], gauss()).unwrap();
        let (ch, ch_cyc) = (Chain::from_simplex(c.clone()), Chain::from_simplex(cyc));
        let cst = FieldModel::constant(f01()).unwrap();
        assert_eq!(
            boundary_independence_check(&cst, &ch, &ch, &cfg(4)).unwrap(),
            0.0
        );
        assert!(boundary_independence_check(&cst, &ch, &ch_cyc, &cfg(4)).unwrap() < 1e-15);
        let z = FourVector::new(-0.4, 0.3, 0.2, 0.6);
        let coned = c.boundary().unwrap().cone(&z);
        assert!(boundary_independence_check(&plane_wave(), &ch, &coned, &cfg(32)).unwrap() < 1e-12);
        let other = Chain::from_simplex(AffineSimplex::new(vec![v0, v1, z], gauss()).unwrap());
        assert_eq!(
            boundary_independence_check(&cst, &ch, &other, &cfg(4)),
            Err(Error::BoundaryMismatch)
        );
    }

    #[test]
    fn finite_difference_identities() {
        let z = FourVector::new(0.2, -0.4, 0.3, 0.1);
        let y = FourVector::new(-0.5, 0.6, 0.2, 0.9);
        for m in [linear(), plane_wave()] {
            assert!(closedness_residual(&m, &gauss(), &y, 1e-4).unwrap() < 1e-8);
            assert!(primitivity_residual(&m, &gauss(), &z, &y, &cfg(32), 1e-4).unwrap() < 1e-7);
        }
    }
}
