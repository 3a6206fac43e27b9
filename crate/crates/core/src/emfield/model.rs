use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{FourVector, LorentzMatrix, PoincareElement};
use crate::simplex::{TestFunctionKind, TestFunctionTag};

/// Covariant components `F_{μν}` of a 2-form.
pub type Bivector = [[f64; 4]; 4];

pub const ZERO_BIVECTOR: Bivector = [[0.0; 4]; 4];

/// A classical closed 2-form on Minkowski space.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
#[allow(clippy::large_enum_variant)]
pub enum FieldModel {
    Constant {
        c: Bivector,
    },
    /// `F_{μν}(y) = C_{μν} + D_{μν,ρ} y^ρ` with `slope[μ][ν][ρ] = D_{μν,ρ}`.
    Linear {
        c: Bivector,
        slope: [Bivector; 4],
    },
    /// The field of `A_μ(y) = ε_μ cos(k·y + φ)`, with `ε` covariant and `k` contravariant.
    PlaneWave {
        amplitude: [f64; 4],
        wave_vector: [f64; 4],
        #[serde(default)]
        phase: f64,
    },
    Superposition {
        terms: Vec<FieldModel>,
    },
}

fn antisymmetry_defect(c: &Bivector) -> f64 {
    let mut worst: f64 = 0.0;
    for m in 0..4 {
        for n in 0..4 {
            worst = worst.max((c[m][n] + c[n][m]).abs());
        }
    }
    worst
}

/// Exactly antisymmetric part; a no-op on exactly antisymmetric input.
fn antisymmetrize(mut c: Bivector) -> Bivector {
    for m in 0..4 {
        c[m][m] = 0.0;
        for n in m + 1..4 {
            let v = 0.5 * (c[m][n] - c[n][m]);
            c[m][n] = v;
            c[n][m] = -v;
        }
    }
    c
}

fn max_abs(c: &Bivector) -> f64 {
    c.iter().flatten().fold(0.0, |m, x| m.max(x.abs()))
}

fn all_finite<'a>(xs: impl IntoIterator<Item = &'a f64>) -> bool {
    xs.into_iter().all(|x| x.is_finite())
}

/// `Λᵀ C Λ` for a covariant 2-tensor.
fn congruence(c: &Bivector, lambda: &LorentzMatrix) -> Bivector {
    let l = lambda.matrix();
    std::array::from_fn(|m| {
        std::array::from_fn(|n| {
            let mut acc = 0.0;
            for a in 0..4 {
                for b in 0..4 {
                    acc += l[(a, m)] * c[a][b] * l[(b, n)];
                }
            }
            acc
        })
    })
}

impl FieldModel {
    pub fn constant(c: Bivector) -> Result<Self> {
        let m = FieldModel::Constant { c };
        m.validate()?;
        Ok(m)
    }

    pub fn linear(c: Bivector, slope: [Bivector; 4]) -> Result<Self> {
        let m = FieldModel::Linear { c, slope };
        m.validate()?;
        Ok(m)
    }

    /// The linear field of `A_ν(y) = ½ T_{ν,ρσ} y^ρ y^σ` plus a constant part, which is
    /// closed by construction: `D_{μν,σ} = T_{ν,μσ} − T_{μ,νσ}` for `T` symmetric in `ρσ`.
    pub fn linear_from_potential(c: Bivector, t: [Bivector; 4]) -> Result<Self> {
        let sym = |nu: usize, r: usize, s: usize| 0.5 * (t[nu][r][s] + t[nu][s][r]);
        let slope: [Bivector; 4] = std::array::from_fn(|mu| {
            std::array::from_fn(|nu| std::array::from_fn(|s| sym(nu, mu, s) - sym(mu, nu, s)))
        });
        // Stored as slope[μ][ν][ρ].
        Self::linear(c, slope)
    }

    pub fn plane_wave(amplitude: [f64; 4], wave_vector: [f64; 4], phase: f64) -> Result<Self> {
        let m = FieldModel::PlaneWave {
            amplitude,
            wave_vector,
            phase,
        };
        m.validate()?;
        Ok(m)
    }

    pub fn name(&self) -> &'static str {
        match self {
            FieldModel::Constant { .. } => "constant",
            FieldModel::Linear { .. } => "linear",
            FieldModel::PlaneWave { .. } => "plane_wave",
            FieldModel::Superposition { .. } => "superposition",
        }
    }

    /// Finite parameters, antisymmetry, and for linear models the cyclic identity
    /// `D_{μν,σ} + D_{νσ,μ} + D_{σμ,ν} = 0`, all to a relative 1e-12.
    pub fn validate(&self) -> Result<()> {
        const REL: f64 = 1e-12;
        match self {
            FieldModel::Constant { c } => {
                if !all_finite(c.iter().flatten()) {
                    return Err(Error::NonFinite("field model"));
                }
                if antisymmetry_defect(c) > REL * max_abs(c).max(1.0) {
                    return Err(Error::InvalidModel(
                        "constant part is not antisymmetric".into(),
                    ));
                }
            }
            FieldModel::Linear { c, slope } => {
                FieldModel::Constant { c: *c }.validate()?;
                if !all_finite(slope.iter().flatten().flatten()) {
                    return Err(Error::NonFinite("field model"));
                }
                let scale = slope.iter().map(max_abs).fold(1.0, f64::max);
                for rho in 0..4 {
                    let d: Bivector =
                        std::array::from_fn(|m| std::array::from_fn(|n| slope[m][n][rho]));
                    if antisymmetry_defect(&d) > REL * scale {
                        return Err(Error::InvalidModel("slope is not antisymmetric".into()));
                    }
                }
                for m in 0..4 {
                    for n in 0..4 {
                        for s in 0..4 {
                            let cyc = slope[m][n][s] + slope[n][s][m] + slope[s][m][n];
                            if cyc.abs() > REL * scale {
                                return Err(Error::InvalidModel(format!(
                                    "slope is not closed: cyclic sum {cyc:e} at ({m},{n},{s})"
                                )));
                            }
                        }
                    }
                }
            }
            FieldModel::PlaneWave {
                amplitude,
                wave_vector,
                phase,
            } => {
                if !all_finite(amplitude.iter().chain(wave_vector).chain([phase])) {
                    return Err(Error::NonFinite("field model"));
                }
            }
            FieldModel::Superposition { terms } => {
                for t in terms {
                    t.validate()?;
                }
            }
        }
        Ok(())
    }

    /// `F_{μν}(y)`.
    pub fn field(&self, y: &FourVector) -> Bivector {
        let mut out = ZERO_BIVECTOR;
        self.accumulate_with(y, 1.0, &|_| 1.0, &mut out);
        antisymmetrize(out)
    }

    /// Adds `scale · F(y)` with plane waves damped by `damping(k̃)`.
    fn accumulate_with(
        &self,
        y: &FourVector,
        scale: f64,
        damping: &dyn Fn(&[f64; 4]) -> f64,
        out: &mut Bivector,
    ) {
        match self {
            FieldModel::Constant { c } => {
                for m in 0..4 {
                    for n in 0..4 {
                        out[m][n] += scale * c[m][n];
                    }
                }
            }
            FieldModel::Linear { c, slope } => {
                for m in 0..4 {
                    for n in 0..4 {
                        let d = &slope[m][n];
                        let lin = d[0] * y[0] + d[1] * y[1] + d[2] * y[2] + d[3] * y[3];
                        out[m][n] += scale * (c[m][n] + lin);
                    }
                }
            }
            FieldModel::PlaneWave {
                amplitude,
                wave_vector,
                phase,
            } => {
                let k = FourVector(*wave_vector);
                let k_low = k.lower();
                let s = -scale * damping(&k_low) * (k.dot(y) + phase).sin();
                for m in 0..4 {
                    for n in 0..4 {
                        out[m][n] += s * (k_low[m] * amplitude[n] - k_low[n] * amplitude[m]);
                    }
                }
            }
            FieldModel::Superposition { terms } => {
                for t in terms {
                    t.accumulate_with(y, scale, damping, out);
                }
            }
        }
    }

    fn has_plane_wave(&self) -> bool {
        match self {
            FieldModel::PlaneWave { .. } => true,
            FieldModel::Superposition { terms } => terms.iter().any(FieldModel::has_plane_wave),
            _ => false,
        }
    }

    /// The field `F′` with `F′(Py) = Λᵀ F(y) Λ`, `Λ = L⁻¹`, so that the potential of `F′`
    /// with pole `Pz` is the transported potential of `F` with pole `z`.
    pub fn pushforward(&self, p: &PoincareElement) -> FieldModel {
        let lambda = p.lorentz.inverse();
        let lm = lambda.matrix();
        match self {
            FieldModel::Constant { c } => FieldModel::Constant {
                c: congruence(c, &lambda),
            },
            FieldModel::Linear { c, slope } => {
                // F(y) = C + D·y with y = Λ(y′ − x).
                let lx = lambda.apply(&p.translation);
                let mut shifted = *c;
                for m in 0..4 {
                    for n in 0..4 {
                        shifted[m][n] -= (0..4).map(|r| slope[m][n][r] * lx[r]).sum::<f64>();
                    }
                }
                let d_rho: [Bivector; 4] = std::array::from_fn(|r| {
                    std::array::from_fn(|m| std::array::from_fn(|n| slope[m][n][r]))
                });
                let d_rho_t: [Bivector; 4] =
                    std::array::from_fn(|r| congruence(&d_rho[r], &lambda));
                let slope_new: [Bivector; 4] = std::array::from_fn(|m| {
                    std::array::from_fn(|n| {
                        std::array::from_fn(|s| (0..4).map(|r| lm[(r, s)] * d_rho_t[r][m][n]).sum())
                    })
                });
                FieldModel::Linear {
                    c: congruence(&shifted, &lambda),
                    slope: slope_new,
                }
            }
            FieldModel::PlaneWave {
                amplitude,
                wave_vector,
                phase,
            } => {
                let eps: [f64; 4] =
                    std::array::from_fn(|n| (0..4).map(|a| lm[(a, n)] * amplitude[a]).sum());
                let k = p.lorentz.apply(&FourVector(*wave_vector));
                FieldModel::PlaneWave {
                    amplitude: eps,
                    wave_vector: k.0,
                    phase: phase - k.dot(&p.translation),
                }
            }
            FieldModel::Superposition { terms } => FieldModel::Superposition {
                terms: terms.iter().map(|t| t.pushforward(p)).collect(),
            },
        }
    }
}

/// A field convolved with a test function, `F̃(y) = ∫ f(u) F(y + u) d⁴u`.
///
/// All supported tags are even, so constant and linear parts only pick up the tag's
/// normalization. Plane waves need a Gaussian tag, for which the convolution multiplies the
/// amplitude by `exp(−½ k̃ᵀ Σ k̃)`.
#[derive(Debug, Clone)]
pub struct SmearedField {
    model: FieldModel,
    normalization: f64,
    covariance: Option<nalgebra::Matrix4<f64>>,
}

impl SmearedField {
    pub fn new(model: &FieldModel, tag: &TestFunctionTag) -> Result<Self> {
        model.validate()?;
        tag.validate()?;
        if model.has_plane_wave() && matches!(tag.kind, TestFunctionKind::Bump { .. }) {
            return Err(Error::UnsupportedSmearing {
                model: "plane_wave",
                tag: "bump",
            });
        }
        Ok(SmearedField {
            model: model.clone(),
            normalization: tag.normalization,
            covariance: tag.gaussian_covariance(),
        })
    }

    pub fn model(&self) -> &FieldModel {
        &self.model
    }

    pub fn eval(&self, y: &FourVector) -> Bivector {
        let damping = |k: &[f64; 4]| match &self.covariance {
            Some(s) => {
                let k = nalgebra::Vector4::from(*k);
                (-0.5 * k.dot(&(s * k))).exp()
            }
            None => 1.0,
        };
        let mut out = ZERO_BIVECTOR;
        self.model
            .accumulate_with(y, self.normalization, &damping, &mut out);
        antisymmetrize(out)
    }
}

pub fn smeared_field(
    model: &FieldModel,
    tag: &TestFunctionTag,
    y: &FourVector,
) -> Result<Bivector> {
    Ok(SmearedField::new(model, tag)?.eval(y))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f01() -> Bivector {
        let mut c = ZERO_BIVECTOR;
        c[0][1] = 1.0;
        c[1][0] = -1.0;
        c
    }

    /// Oracle: `∂_μ A_ν − ∂_ν A_μ` by central differences of `A_μ = ε_μ cos(k·y + φ)`.
    fn plane_wave_fd(eps: [f64; 4], k: [f64; 4], phase: f64, y: FourVector) -> Bivector {
        let kv = FourVector(k);
        let a = |x: FourVector, n: usize| eps[n] * (kv.dot(&x) + phase).cos();
        let h = 1e-5;
        std::array::from_fn(|m| {
            std::array::from_fn(|n| {
                let e = FourVector::basis(m).scale(h);
                let f = FourVector::basis(n).scale(h);
                (a(y + e, n) - a(y - e, n) - a(y + f, m) + a(y - f, m)) / (2.0 * h)
            })
        })
    }

    #[test]
    fn plane_wave_field_is_curl() {
        let (eps, k, phase) = ([0.3, -1.0, 0.5, 0.2], [1.2, 0.4, -0.7, 0.9], 0.4);
        let m = FieldModel::plane_wave(eps, k, phase).unwrap();
        let y = FourVector::new(0.2, -0.5, 1.0, 0.3);
        let f = m.field(&y);
        let oracle = plane_wave_fd(eps, k, phase, y);
        for a in 0..4 {
            for b in 0..4 {
                assert!((f[a][b] - oracle[a][b]).abs() < 1e-8, "{a}{b}");
                assert_eq!(f[a][b], -f[b][a]);
            }
        }
    }

    #[test]
    fn smearing_constant_and_gaussian_damping() {
        let c = FieldModel::constant(f01()).unwrap();
        let tag = TestFunctionTag::bump(1, 0.3).unwrap();
        assert_eq!(
            smeared_field(&c, &tag, &FourVector::new(5.0, 1.0, 0.0, 2.0)).unwrap(),
            f01()
        );
        let zero = FieldModel::constant(ZERO_BIVECTOR).unwrap();
        assert_eq!(
            smeared_field(&zero, &tag, &FourVector::ZERO).unwrap(),
            ZERO_BIVECTOR
        );

        let (eps, k) = ([0.0, 1.0, 0.0, 0.0], [1.0, 0.0, 2.0, 0.0]);
        let pw = FieldModel::plane_wave(eps, k, 0.1).unwrap();
        assert!(matches!(
            smeared_field(&pw, &tag, &FourVector::ZERO),
            Err(Error::UnsupportedSmearing { .. })
        ));
        let widths = [0.1, 0.2, 0.3, 0.4];
        let g = TestFunctionTag::gaussian_axes(2, widths).unwrap();
        let y = FourVector::new(0.3, 0.1, -0.2, 0.5);
        let smeared = smeared_field(&pw, &g, &y).unwrap();
        // Per-axis damping exp(−½ Σ w_μ² k_μ²).
        let damp = (-0.5f64 * (0.01 * 1.0 + 0.09 * 4.0)).exp();
        let bare = pw.field(&y);
        // Oracle: the same convolution by Gauss-Hermite quadrature.
        let rule = g.smearing_rule(12).unwrap();
        let mut quad = ZERO_BIVECTOR;
        for (u, w) in &rule {
            let f = pw.field(&(y + *u));
            for a in 0..4 {
                for b in 0..4 {
                    quad[a][b] += w * f[a][b];
                }
            }
        }
        for a in 0..4 {
            for b in 0..4 {
                assert!((smeared[a][b] - damp * bare[a][b]).abs() < 1e-15);
                assert!((smeared[a][b] - quad[a][b]).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn linear_smearing_matches_quadrature() {
        let mut t = [ZERO_BIVECTOR; 4];
        t[0][1][2] = 1.0;
        t[2][0][3] = -0.5;
        t[3][1][1] = 0.7;
        let m = FieldModel::linear_from_potential(f01(), t).unwrap();
        let tag = TestFunctionTag::gaussian(1, 0.2)
            .unwrap()
            .rotated(&LorentzMatrix::boost(1, 0.5).unwrap());
        let y = FourVector::new(1.0, 0.5, -0.3, 0.2);
        let smeared = smeared_field(&m, &tag, &y).unwrap();
        let mut quad = ZERO_BIVECTOR;
        for (u, w) in tag.smearing_rule(3).unwrap() {
            let f = m.field(&(y + u));
            for a in 0..4 {
                for b in 0..4 {
                    quad[a][b] += w * f[a][b];
                }
            }
        }
        for a in 0..4 {
            for b in 0..4 {
                assert!((smeared[a][b] - quad[a][b]).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn validation() {
        let mut bad = f01();
        bad[1][0] = 0.5;
        assert!(FieldModel::constant(bad).is_err());
        let mut slope = [ZERO_BIVECTOR; 4];
        // D_{01,2} alone violates the cyclic identity.
        slope[0][1][2] = 1.0;
        slope[1][0][2] = -1.0;
        assert!(matches!(
            FieldModel::linear(f01(), slope),
            Err(Error::InvalidModel(_))
        ));
        assert!(FieldModel::plane_wave([f64::NAN, 0.0, 0.0, 0.0], [1.0; 4], 0.0).is_err());
    }

    #[test]
    fn pushforward_transports_field() {
        let mut t = [ZERO_BIVECTOR; 4];
        t[1][0][2] = 0.8;
        t[3][3][0] = -0.4;
        let models = [
            FieldModel::constant(f01()).unwrap(),
            FieldModel::linear_from_potential(f01(), t).unwrap(),
            FieldModel::plane_wave([0.3, -1.0, 0.5, 0.2], [1.2, 0.4, -0.7, 0.9], 0.4).unwrap(),
        ];
        let l = LorentzMatrix::boost(2, 1.3).unwrap() * LorentzMatrix::rotation(1, 0.6).unwrap();
        let p = PoincareElement::new(FourVector::new(0.5, -1.0, 0.25, 2.0), l);
        let y = FourVector::new(0.1, 0.7, -0.4, 0.3);
        let lambda = l.inverse();
        for m in models {
            let pushed = m.pushforward(&p);
            pushed.validate().unwrap();
            let lhs = pushed.field(&p.apply(&y));
            let rhs = congruence(&m.field(&y), &lambda);
            for a in 0..4 {
                for b in 0..4 {
                    assert!((lhs[a][b] - rhs[a][b]).abs() < 1e-11, "{} {a}{b}", m.name());
                }
            }
        }
    }

    #[test]
    fn serde_round_trip() {
        let m = FieldModel::Superposition {
            terms: vec![
                FieldModel::constant(f01()).unwrap(),
                FieldModel::plane_wave([0.0, 1.0, 0.0, 0.0], [1.0, 0.0, 0.0, 1.0], 0.0).unwrap(),
            ],
        };
        let s = serde_json::to_string(&m).unwrap();
        assert!(s.contains("\"kind\":\"superposition\""));
        assert_eq!(serde_json::from_str::<FieldModel>(&s).unwrap(), m);
        let pw: FieldModel = serde_json::from_str(
            r#"{"kind":"plane_wave","amplitude":[0,1,0,0],"wave_vector":[1,1,0,0]}"#,
        )
        .unwrap();
        assert_eq!(
            pw,
            FieldModel::plane_wave([0.0, 1.0, 0.0, 0.0], [1.0, 1.0, 0.0, 0.0], 0.0).unwrap()
        );
    }
}
