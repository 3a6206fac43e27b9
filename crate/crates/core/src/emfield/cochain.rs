use super::gauge::{GaugeFunctionFamily, SmearedGauge};
use super::integrals::{Integrator, QuadratureConfig};
use super::model::{FieldModel, SmearedField};
use crate::error::{Error, Result};
use crate::geometry::PoincareElement;
use crate::holonomy::{
    Cochain, Connection, CovarianceGroup, GaugeFamily, UnitaryValue, ValueShape,
};
use crate::simplex::{AffineSimplex, Point};

fn check_pole(pole: &Point, s: &AffineSimplex) -> Result<()> {
    if pole.dim() != 0 {
        return Err(Error::UnsupportedDimension(pole.dim()));
    }
    if pole.tag() != s.tag() {
        return Err(Error::TagMismatch);
    }
    Ok(())
}

/// `wᵉᵐ(c) = exp(i F⟨σ_c, f⟩)`, smeared with each simplex's own test function.
#[derive(Debug, Clone)]
pub struct EmCochain {
    model: FieldModel,
    cfg: QuadratureConfig,
    integ: Integrator,
}

pub fn em_cochain(model: &FieldModel, cfg: &QuadratureConfig) -> Result<EmCochain> {
    model.validate()?;
    Ok(EmCochain {
        model: model.clone(),
        cfg: *cfg,
        integ: Integrator::new(cfg)?,
    })
}

impl EmCochain {
    pub fn model(&self) -> &FieldModel {
        &self.model
    }

    /// `F⟨σ_c, f⟩` itself.
    pub fn flux(&self, c: &AffineSimplex) -> Result<f64> {
        if c.dim() != 2 {
            return Err(Error::UnsupportedDimension(c.dim()));
        }
        Ok(self
            .integ
            .surface(&SmearedField::new(&self.model, c.tag())?, c))
    }
}

impl Cochain for EmCochain {
    fn shape(&self) -> ValueShape {
        ValueShape::Phase
    }

    fn eval(&self, c: &AffineSimplex) -> Result<UnitaryValue> {
        Ok(UnitaryValue::Phase(self.flux(c)?))
    }

    fn covariance(&self) -> CovarianceGroup {
        CovarianceGroup::Poincare
    }

    /// Phases commute with `U(P)`, so the pair is `(w_F(c), w_{P_*F}(Pc))`.
    fn covariance_pair(
        &self,
        p: &PoincareElement,
        c: &AffineSimplex,
    ) -> Result<Option<(UnitaryValue, UnitaryValue)>> {
        let moved = em_cochain(&self.model.pushforward(p), &self.cfg)?;
        Ok(Some((self.eval(c)?, moved.eval(&c.poincare_act(p))?)))
    }
}

/// `uᵖᵒᵗ_a(b) = exp(i A^{a₀}⟨r_b, f⟩)`, with the pole at the point of `a`.
#[derive(Debug, Clone)]
pub struct PotConnection {
    model: FieldModel,
    integ: Integrator,
}

pub fn pot_connection(model: &FieldModel, cfg: &QuadratureConfig) -> Result<PotConnection> {
    model.validate()?;
    Ok(PotConnection {
        model: model.clone(),
        integ: Integrator::new(cfg)?,
    })
}

impl Connection for PotConnection {
    fn shape(&self) -> ValueShape {
        ValueShape::Phase
    }

    fn eval(&self, pole: &Point, b: &AffineSimplex) -> Result<UnitaryValue> {
        check_pole(pole, b)?;
        if b.dim() != 1 {
            return Err(Error::UnsupportedDimension(b.dim()));
        }
        let field = SmearedField::new(&self.model, b.tag())?;
        Ok(UnitaryValue::Phase(self.integ.segment_integral(
            &field,
            pole.vertex(0),
            b.vertex(0),
            b.vertex(1),
        )))
    }
}

/// `gᵘ_a(a′) = exp(i g^{a₀}(a′₀, f))`.
#[derive(Debug, Clone)]
pub struct LiftedGauge {
    family: GaugeFunctionFamily,
    cfg: QuadratureConfig,
}

pub fn gauge_lift(g: &GaugeFunctionFamily, cfg: &QuadratureConfig) -> Result<LiftedGauge> {
    g.base.validate()?;
    cfg.validate()?;
    Ok(LiftedGauge {
        family: g.clone(),
        cfg: *cfg,
    })
}

impl GaugeFamily for LiftedGauge {
    fn shape(&self) -> ValueShape {
        ValueShape::Phase
    }

    fn eval(&self, pole: &Point, point: &Point) -> Result<UnitaryValue> {
        check_pole(pole, point)?;
        if point.dim() != 0 {
            return Err(Error::UnsupportedDimension(point.dim()));
        }
        let g = SmearedGauge::new(&self.family, point.tag(), &self.cfg)?;
        Ok(UnitaryValue::Phase(
            g.value(pole.vertex(0), point.vertex(0)),
        ))
    }
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::emfield::gauge::{gauge_shift, ScalarFunction};
    use crate::emfield::integrals::Curve;
    use crate::geometry::{FourVector, LorentzMatrix};
    use crate::holonomy::{apply_gauge, connection_from_rep, rep_from_cochain, LoopRepresentation};
    use crate::loopgroup::{Path, PathFrameSystem};
    use crate::simplex::TestFunctionTag;

    fn gauss() -> TestFunctionTag {
        TestFunctionTag::gaussian(2, 0.15).unwrap()
    }

    fn pw() -> FieldModel {
        FieldModel::plane_wave([0.3, -1.0, 0.5, 0.2], [1.2, 0.4, -0.7, 0.9], 0.4).unwrap()
    }

    fn seg(a: FourVector, b: FourVector) -> AffineSimplex {
        AffineSimplex::new(vec![a, b], gauss()).unwrap()
    }

    #[test]
    fn em_cochain_axioms() {
        let w = em_cochain(&pw(), &QuadratureConfig::new(16).unwrap()).unwrap();
        let c = AffineSimplex::new(
            vec![
                FourVector::new(0.1, 0.2, -0.3, 0.0),
                FourVector::new(0.9, 0.1, 0.4, 0.2),
                FourVector::new(0.2, 0.8, 0.1, -0.5),
            ],
            gauss(),
        )
        .unwrap();
        let v = w.eval(&c).unwrap();
        assert_eq!(w.eval(&c.opposite().unwrap()).unwrap(), v.adjoint());
        let deg =
            AffineSimplex::new(vec![*c.vertex(0), *c.vertex(1), *c.vertex(0)], gauss()).unwrap();
        assert_eq!(w.eval(&deg).unwrap(), UnitaryValue::Phase(0.0));
        let p = PoincareElement::new(
            FourVector::new(0.3, 0.0, 1.0, -0.2),
            LorentzMatrix::boost(2, 1.0).unwrap(),
        );
        let (lhs, rhs) = w.covariance_pair(&p, &c).unwrap().unwrap();
        assert!(lhs.distance(&rhs).unwrap() < 1e-12);
    }

    #[test]
    fn euclidean_em_connection_is_potential_connection() {
        let cfg = QuadratureConfig::new(32).unwrap();
        let w: Arc<dyn Cochain> = Arc::new(em_cochain(&pw(), &cfg).unwrap());
        let lambda: Arc<dyn LoopRepresentation> = Arc::new(rep_from_cochain(w));
        let u_em = connection_from_rep(lambda, PathFrameSystem::Euclidean);
        let u_pot = pot_connection(&pw(), &cfg).unwrap();
        let a = AffineSimplex::point(FourVector::new(0.2, -0.1, 0.3, 0.0), gauss());
        let b = seg(
            FourVector::new(0.5, 0.4, 0.0, 0.1),
            FourVector::new(-0.3, 0.2, 0.6, -0.4),
        );
        let d = u_em
            .eval(&a, &b)
            .unwrap()
            .distance(&u_pot.eval(&a, &b).unwrap())
            .unwrap();
        assert!(d < 1e-12, "{d}");
        let e = seg(*b.vertex(0), *b.vertex(0));
        assert_eq!(u_pot.eval(&a, &e).unwrap(), UnitaryValue::Phase(0.0));
        let back = u_pot.eval(&a, &b.opposite().unwrap()).unwrap();
        assert!(
            back.distance(&u_pot.eval(&a, &b).unwrap().adjoint())
                .unwrap()
                < 1e-14
        );
    }

    #[test]
    fn lifted_gauge_shifts_by_boundary_phase() {
        let cfg = QuadratureConfig::new(32).unwrap();
        let g = GaugeFunctionFamily::new(ScalarFunction::Sine {
            amplitude: 0.7,
            frequency: 1.3,
            phase: 0.2,
        })
        .unwrap();
        let u: Arc<dyn Connection> = Arc::new(pot_connection(&pw(), &cfg).unwrap());
        let lifted = Arc::new(gauge_lift(&g, &cfg).unwrap());
        let ug = apply_gauge(u.clone(), lifted).unwrap();
        let z = FourVector::new(0.2, -0.1, 0.3, 0.0);
        let a = AffineSimplex::point(z, gauss());
        let (p0, p1) = (
            FourVector::new(0.5, 0.4, 0.0, 0.1),
            FourVector::new(-0.3, 0.2, 0.6, -0.4),
        );
        let b = seg(p0, p1);
        let shift = gauge_shift(
            &pw(),
            &gauss(),
            &g,
            &z,
            &Curve::segment(p0, p1).unwrap(),
            &cfg,
        )
        .unwrap();
        let expect = UnitaryValue::Phase(shift.original + shift.boundary);
        assert!(ug.eval(&a, &b).unwrap().distance(&expect).unwrap() < 1e-12);
        let p2 = FourVector::new(0.0, 0.0, -0.5, 0.3);
        let lp = Path::polyline(&[z, p0, p1, p2, z], &gauss()).unwrap();
        let d = ug
            .eval_path(&a, &lp)
            .unwrap()
            .distance(&u.eval_path(&a, &lp).unwrap())
            .unwrap();
        assert!(d < 1e-12);
    }

    #[test]
    fn pole_and_component_checks() {
        let cfg = QuadratureConfig::new(4).unwrap();
        let u = pot_connection(&pw(), &cfg).unwrap();
        let other =
            AffineSimplex::point(FourVector::ZERO, TestFunctionTag::gaussian(9, 0.1).unwrap());
        let b = seg(FourVector::ZERO, FourVector::basis(1));
        assert_eq!(u.eval(&other, &b), Err(Error::TagMismatch));
        let bump = AffineSimplex::new(
            vec![FourVector::ZERO, FourVector::basis(1)],
            TestFunctionTag::bump(1, 0.1).unwrap(),
        )
        .unwrap();
        let bump_pole =
            AffineSimplex::point(FourVector::ZERO, TestFunctionTag::bump(1, 0.1).unwrap());
        assert!(matches!(
            u.eval(&bump_pole, &bump),
            Err(Error::UnsupportedSmearing { .. })
        ));
    }
}
