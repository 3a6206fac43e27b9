use serde::{Deserialize, Serialize};

use super::integrals::{Curve, Integrator, QuadratureConfig};
use super::model::{FieldModel, SmearedField};
use crate::error::{Error, Result};
use crate::geometry::FourVector;
use crate::simplex::TestFunctionTag;

/// A smooth function of one real variable.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ScalarFunction {
    /// `Σ cₖ sᵏ`.
    Polynomial { coeffs: Vec<f64> },
    /// `amplitude · sin(frequency · s + phase)`.
    Sine {
        amplitude: f64,
        frequency: f64,
        #[serde(default)]
        phase: f64,
    },
}

impl ScalarFunction {
    pub fn zero() -> Self {
        ScalarFunction::Polynomial { coeffs: Vec::new() }
    }

    pub fn value(&self, s: f64) -> f64 {
        match self {
            ScalarFunction::Polynomial { coeffs } => {
                coeffs.iter().rev().fold(0.0, |acc, c| acc * s + c)
            }
            ScalarFunction::Sine {
                amplitude,
                frequency,
                phase,
            } => amplitude * (frequency * s + phase).sin(),
        }
    }

    pub fn derivative(&self, s: f64) -> f64 {
        match self {
            ScalarFunction::Polynomial { coeffs } => coeffs
                .iter()
                .enumerate()
                .skip(1)
                .rev()
                .fold(0.0, |acc, (k, c)| acc * s + k as f64 * c),
            ScalarFunction::Sine {
                amplitude,
                frequency,
                phase,
            } => amplitude * frequency * (frequency * s + phase).cos(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let ok = match self {
            ScalarFunction::Polynomial { coeffs } => coeffs.iter().all(|c| c.is_finite()),
            ScalarFunction::Sine {
                amplitude,
                frequency,
                phase,
            } => amplitude.is_finite() && frequency.is_finite() && phase.is_finite(),
        };
        if ok {
            Ok(())
        } else {
            Err(Error::NonFinite("gauge function"))
        }
    }
}

/// `gᶻ(y) = g((y − z)²)`, smeared as `gᶻ(y, f) = ∫ f(u) g((y + u − z)²) d⁴u`.
///
/// Smearing uses the tag's fixed quadrature rule, and the gradient is taken through the
/// same rule, so `∫ ∂gᶻ·γ̇` and the boundary term agree up to the curve quadrature only.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GaugeFunctionFamily {
    pub base: ScalarFunction,
}

impl GaugeFunctionFamily {
    pub fn new(base: ScalarFunction) -> Result<Self> {
        base.validate()?;
        Ok(GaugeFunctionFamily { base })
    }

    /// Unsmeared `gᶻ(y)`.
    pub fn value(&self, z: &FourVector, y: &FourVector) -> f64 {
        self.base.value((*y - *z).square())
    }

    pub fn smeared(
        &self,
        tag: &TestFunctionTag,
        z: &FourVector,
        y: &FourVector,
        cfg: &QuadratureConfig,
    ) -> Result<f64> {
        Ok(SmearedGauge::new(self, tag, cfg)?.value(z, y))
    }
}

/// A gauge family with a precomputed smearing rule.
pub(crate) struct SmearedGauge<'a> {
    family: &'a GaugeFunctionFamily,
    rule: Vec<(FourVector, f64)>,
}

impl<'a> SmearedGauge<'a> {
    pub(crate) fn new(
        family: &'a GaugeFunctionFamily,
        tag: &TestFunctionTag,
        cfg: &QuadratureConfig,
    ) -> Result<Self> {
        cfg.validate()?;
        tag.validate()?;
        Ok(SmearedGauge {
            family,
            rule: tag.smearing_rule(cfg.smearing_order)?,
        })
    }

    pub(crate) fn value(&self, z: &FourVector, y: &FourVector) -> f64 {
        let d = *y - *z;
        self.rule
            .iter()
            .map(|(u, w)| w * self.family.base.value((d + *u).square()))
            .sum()
    }

    /// Covariant gradient `∂_μ gᶻ(y, f) = ∫ f(u) g′((x)²) 2x_μ`, `x = y + u − z`.
    pub(crate) fn gradient(&self, z: &FourVector, y: &FourVector) -> [f64; 4] {
        let d = *y - *z;
        let mut g = [0.0; 4];
        for (u, w) in &self.rule {
            let x = d + *u;
            let x_low = x.lower();
            let dg = self.family.base.derivative(x.square());
            for mu in 0..4 {
                g[mu] += w * dg * 2.0 * x_low[mu];
            }
        }
        g
    }
}

/// Line integrals before and after the gauge shift `A ↦ A + dgᶻ`, and the boundary term
/// `gᶻ(γ(1), f) − gᶻ(γ(0), f)` their difference should equal.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GaugeShift {
    pub original: f64,
    pub shifted: f64,
    pub boundary: f64,
}

impl GaugeShift {
    /// `|shifted − original − boundary|`.
    pub fn residual(&self) -> f64 {
        (self.shifted - self.original - self.boundary).abs()
    }
}

pub fn gauge_shift(
    model: &FieldModel,
    tag: &TestFunctionTag,
    g: &GaugeFunctionFamily,
    z: &FourVector,
    curve: &Curve,
    cfg: &QuadratureConfig,
) -> Result<GaugeShift> {
    let integ = Integrator::new(cfg)?;
    let field = SmearedField::new(model, tag)?;
    let gauge = SmearedGauge::new(g, tag, cfg)?;
    let rule = crate::quadrature::gauss_legendre(cfg.order)?;
    let mut original = 0.0;
    let mut shifted = 0.0;
    for (a, b) in curve.segments() {
        let d = b - a;
        if d == FourVector::ZERO {
            continue;
        }
        for (s, w) in rule.iter() {
            let y = a + d.scale(s);
            let pot = integ.potential(&field, z, &y);
            let grad = gauge.gradient(z, &y);
            let (mut p, mut q) = (0.0, 0.0);
            for nu in 0..4 {
                p += pot[nu] * d[nu];
                q += (pot[nu] + grad[nu]) * d[nu];
            }
            original += w * p;
            shifted += w * q;
        }
    }
    let boundary = gauge.value(z, &curve.end()) - gauge.value(z, &curve.start());
    Ok(GaugeShift {
        original,
        shifted,
        boundary,
    })
}
