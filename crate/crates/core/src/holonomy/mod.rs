//! Unitary 2-cochains, loop representations and connection systems, with the constructive
//! correspondences between them and gauge transformations.
//!
//! Evaluators are trait objects behind `Arc`, so correspondences compose freely:
//! `cochain_from_rep(rep_from_cochain(w))` is itself a cochain.

mod mock;
mod unitary;
mod verify;

pub use mock::{mock_lattice_cochain, MockLatticeCochain, MAX_TENSOR_DIM};
pub use unitary::{CMatrix, UnitaryValue, ValueShape};
pub use verify::{verify_cochain, CochainScenario, VerificationRecord};

use serde::{Deserialize, Serialize};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::geometry::PoincareElement;
use crate::loopgroup::{path_boundary, LoopWord, Path, PathFrameSystem};
use crate::simplex::{AffineSimplex, Point};

/// The subgroup of the Poincaré group a cochain is covariant under.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CovarianceGroup {
    Poincare,
    /// Integer multiples of `spacing` along coordinate `axis`, plus free translations
    /// along the other coordinates.
    LatticeTranslations {
        axis: usize,
        spacing: f64,
    },
    Unspecified,
}

pub trait Cochain: Send + Sync {
    fn shape(&self) -> ValueShape;

    fn eval(&self, c: &AffineSimplex) -> Result<UnitaryValue>;

    fn covariance(&self) -> CovarianceGroup {
        CovarianceGroup::Unspecified
    }

    /// `(U(P) w(c) U(P)*, w(Pc))`, or `None` when `P` (or `Pc`) lies outside the declared
    /// group or modelled region.
    fn covariance_pair(
        &self,
        _p: &PoincareElement,
        _c: &AffineSimplex,
    ) -> Result<Option<(UnitaryValue, UnitaryValue)>> {
        Ok(None)
    }
}

pub trait LoopRepresentation: Send + Sync {
    fn shape(&self) -> ValueShape;

    /// Value on a single loop.
    fn eval_loop(&self, p: &Path) -> Result<UnitaryValue>;

    /// Value on a product of loops `pₙ ⋯ p₁`.
    fn eval(&self, w: &LoopWord) -> Result<UnitaryValue> {
        let mut acc = UnitaryValue::identity(&self.shape());
        for p in w.factors() {
            acc = self.eval_loop(p)?.mul(&acc)?;
        }
        Ok(acc)
    }
}

pub trait Connection: Send + Sync {
    fn shape(&self) -> ValueShape;

    /// `u_a(b)` for a pole `a` and a 1-simplex `b` of the same component.
    fn eval(&self, pole: &Point, b: &AffineSimplex) -> Result<UnitaryValue>;

    /// `u_a(bₙ ⋯ b₁) = u_a(bₙ) ⋯ u_a(b₁)`.
    fn eval_path(&self, pole: &Point, p: &Path) -> Result<UnitaryValue> {
        let mut acc = UnitaryValue::identity(&self.shape());
        for l in p.letters() {
            acc = self.eval(pole, &l.oriented())?.mul(&acc)?;
        }
        Ok(acc)
    }
}

pub trait GaugeFamily: Send + Sync {
    fn shape(&self) -> ValueShape;

    /// `g_a(a′)`.
    fn eval(&self, pole: &Point, point: &Point) -> Result<UnitaryValue>;
}

fn same_component(pole: &Point, s: &AffineSimplex) -> Result<()> {
    if pole.dim() != 0 {
        return Err(Error::UnsupportedDimension(pole.dim()));
    }
    if pole.tag() != s.tag() {
        return Err(Error::TagMismatch);
    }
    Ok(())
}

/// The cochain with every value 𝟙.
pub struct TrivialCochain(pub ValueShape);

impl Cochain for TrivialCochain {
    fn shape(&self) -> ValueShape {
        self.0.clone()
    }

    fn eval(&self, c: &AffineSimplex) -> Result<UnitaryValue> {
        if c.dim() != 2 {
            return Err(Error::UnsupportedDimension(c.dim()));
        }
        Ok(UnitaryValue::identity(&self.0))
    }

    fn covariance(&self) -> CovarianceGroup {
        CovarianceGroup::Poincare
    }

    fn covariance_pair(
        &self,
        p: &PoincareElement,
        c: &AffineSimplex,
    ) -> Result<Option<(UnitaryValue, UnitaryValue)>> {
        Ok(Some((self.eval(c)?, self.eval(&c.poincare_act(p))?)))
    }
}

/// `λ^w(p) = w(hᵃ(bₙ)) ⋯ w(hᵃ(b₁))` for a loop `p = bₙ ⋯ b₁` over `a`.
pub struct CochainRepresentation {
    w: Arc<dyn Cochain>,
}

pub fn rep_from_cochain(w: Arc<dyn Cochain>) -> CochainRepresentation {
    CochainRepresentation { w }
}

impl LoopRepresentation for CochainRepresentation {
    fn shape(&self) -> ValueShape {
        self.w.shape()
    }

    fn eval_loop(&self, p: &Path) -> Result<UnitaryValue> {
        if !p.is_loop() {
            return Err(Error::NotALoop);
        }
        let a = p.start();
        let mut acc = UnitaryValue::identity(&self.shape());
        for l in p.letters() {
            let coned = l.oriented().cone(a.vertex(0));
            acc = self.w.eval(&coned)?.mul(&acc)?;
        }
        Ok(acc)
    }
}

/// `w^λ(c) = λ(𝝏c)`.
pub struct RepresentationCochain {
    lambda: Arc<dyn LoopRepresentation>,
}

pub fn cochain_from_rep(lambda: Arc<dyn LoopRepresentation>) -> RepresentationCochain {
    RepresentationCochain { lambda }
}

impl Cochain for RepresentationCochain {
    fn shape(&self) -> ValueShape {
        self.lambda.shape()
    }

    fn eval(&self, c: &AffineSimplex) -> Result<UnitaryValue> {
        self.lambda.eval(&path_boundary(c)?)
    }
}

/// `u_a(b) = λ(p_{(a,∂₀b)} b p̄_{(a,∂₁b)})`: go out along the frame to `∂₁b`, across `b`,
/// and back along the frame from `∂₀b`.
pub struct RepresentationConnection {
    lambda: Arc<dyn LoopRepresentation>,
    frames: PathFrameSystem,
}

pub fn connection_from_rep(
    lambda: Arc<dyn LoopRepresentation>,
    frames: PathFrameSystem,
) -> RepresentationConnection {
    RepresentationConnection { lambda, frames }
}

impl RepresentationConnection {
    /// The loop whose value is `u_a(b)`.
    pub fn transport_loop(&self, pole: &Point, b: &AffineSimplex) -> Result<Path> {
        same_component(pole, b)?;
        if b.dim() != 1 {
            return Err(Error::UnsupportedDimension(b.dim()));
        }
        let out = self.frames.frame(pole, &b.face(1)?)?.inverse();
        let back = self.frames.frame(pole, &b.face(0)?)?;
        let across = Path::from_letters(vec![crate::loopgroup::Letter::new(b.clone())?])?;
        let w = out.word().then(across.word()).then(back.word());
        Path::new(w)
    }
}

impl Connection for RepresentationConnection {
    fn shape(&self) -> ValueShape {
        self.lambda.shape()
    }

    fn eval(&self, pole: &Point, b: &AffineSimplex) -> Result<UnitaryValue> {
        let l = self.transport_loop(pole, b)?;
        self.lambda.eval_loop(&l)
    }
}

/// `λ^u(pₙ ⋯ p₁) = u_{aₙ}(pₙ) ⋯ u_{a₁}(p₁)` over the stored loop factorization.
pub struct ConnectionRepresentation {
    u: Arc<dyn Connection>,
}

pub fn rep_from_connection(u: Arc<dyn Connection>) -> ConnectionRepresentation {
    ConnectionRepresentation { u }
}

impl LoopRepresentation for ConnectionRepresentation {
    fn shape(&self) -> ValueShape {
        self.u.shape()
    }

    fn eval_loop(&self, p: &Path) -> Result<UnitaryValue> {
        if !p.is_loop() {
            return Err(Error::NotALoop);
        }
        self.u.eval_path(&p.start(), p)
    }
}

/// `u^g_a(b) = g_a(∂₀b) u_a(b) g_a(∂₁b)*`.
pub struct GaugedConnection {
    u: Arc<dyn Connection>,
    g: Arc<dyn GaugeFamily>,
}

pub fn apply_gauge(u: Arc<dyn Connection>, g: Arc<dyn GaugeFamily>) -> Result<GaugedConnection> {
    if u.shape() != g.shape() {
        return Err(Error::DimensionMismatch);
    }
    Ok(GaugedConnection { u, g })
}

impl Connection for GaugedConnection {
    fn shape(&self) -> ValueShape {
        self.u.shape()
    }

    fn eval(&self, pole: &Point, b: &AffineSimplex) -> Result<UnitaryValue> {
        if b.dim() != 1 {
            return Err(Error::UnsupportedDimension(b.dim()));
        }
        let end = self.g.eval(pole, &b.face(0)?)?;
        let start = self.g.eval(pole, &b.face(1)?)?;
        end.mul(&self.u.eval(pole, b)?)?.mul(&start.adjoint())
    }
}

/// `g_a(a′) = λ(q_{(a,a′)} p̄_{(a,a′)})`; carries `u^λ_P` to `u^λ_Q`.
pub struct FrameChangeGauge {
    lambda: Arc<dyn LoopRepresentation>,
    from: PathFrameSystem,
    to: PathFrameSystem,
}

pub fn frame_change_gauge(
    lambda: Arc<dyn LoopRepresentation>,
    from: PathFrameSystem,
    to: PathFrameSystem,
) -> FrameChangeGauge {
    FrameChangeGauge { lambda, from, to }
}

impl GaugeFamily for FrameChangeGauge {
    fn shape(&self) -> ValueShape {
        self.lambda.shape()
    }

    fn eval(&self, pole: &Point, point: &Point) -> Result<UnitaryValue> {
        let p = self.from.frame(pole, point)?;
        let q = self.to.frame(pole, point)?;
        let l = Path::new(p.inverse().word().then(q.word()))?;
        self.lambda.eval_loop(&l)
    }
}

/// `t_a(a′) = u_a(p_{(a,a′)})`, the intertwiner between `u` and `u^{λ^u}_P`.
pub struct FrameTransport {
    u: Arc<dyn Connection>,
    frames: PathFrameSystem,
}

pub fn frame_transport(u: Arc<dyn Connection>, frames: PathFrameSystem) -> FrameTransport {
    FrameTransport { u, frames }
}

impl GaugeFamily for FrameTransport {
    fn shape(&self) -> ValueShape {
        self.u.shape()
    }

    fn eval(&self, pole: &Point, point: &Point) -> Result<UnitaryValue> {
        self.u.eval_path(pole, &self.frames.frame(pole, point)?)
    }
}

/// `‖t_a(∂₀b) u_a(b) t_a(∂₁b)* − u′_a(b)‖`: zero when `t` intertwines `u` and `u′` at `(a, b)`.
pub fn equivalence_defect(
    t: &dyn GaugeFamily,
    u: &dyn Connection,
    u_prime: &dyn Connection,
    pole: &Point,
    b: &AffineSimplex,
) -> Result<f64> {
    let lhs = t
        .eval(pole, &b.face(0)?)?
        .mul(&u.eval(pole, b)?)?
        .mul(&t.eval(pole, &b.face(1)?)?.adjoint())?;
    lhs.distance(&u_prime.eval(pole, b)?)
}

/// Largest violation of `u_a(b̄) = u_a(b)*` and `u_a(e_a) = 𝟙` over the samples.
pub fn connection_axiom_defect(
    u: &dyn Connection,
    pole: &Point,
    segments: &[AffineSimplex],
) -> Result<f64> {
    let mut worst: f64 = 0.0;
    let id = UnitaryValue::identity(&u.shape());
    worst = worst.max(
        u.eval(
            pole,
            &AffineSimplex::new(vec![*pole.vertex(0); 2], pole.tag().clone())?,
        )?
        .distance(&id)?,
    );
    for b in segments {
        let fwd = u.eval(pole, b)?;
        let back = u.eval(pole, &b.opposite()?)?;
        worst = worst.max(back.distance(&fwd.adjoint())?);
        let e = AffineSimplex::new(vec![*b.vertex(0); 2], b.tag().clone())?;
        worst = worst.max(u.eval(pole, &e)?.distance(&id)?);
    }
    Ok(worst)
}
