//! The check registry. Each check draws its inputs from its own generator and returns one
//! record per parameter point.

mod emfield;
mod geometry;
mod holonomy;
mod loopgroup;
mod simplex;

use causal_loops::emfield::FieldModel;
use causal_loops::simplex::TestFunctionTag;
use serde_json::Value;

use crate::config::ScenarioConfig;
use crate::report::{Params, Record};
use crate::sample::Rng64;

macro_rules! params {
    ($($k:literal => $v:expr),* $(,)?) => {{
        #[allow(unused_mut)]
        let mut p = $crate::report::Params::new();
        $(p.insert($k.to_string(), serde_json::json!($v));)*
        p
    }};
}
pub(crate) use params;

pub type CheckFn = fn(&Ctx, &mut Rng64) -> Vec<Record>;

/// `(samples, max_residual)`, or why the check could not be evaluated.
pub type Measured = Result<(usize, f64), Box<dyn std::error::Error + Send + Sync>>;

pub struct CheckSpec {
    pub name: &'static str,
    pub module: &'static str,
    pub description: &'static str,
    pub run: CheckFn,
}

pub const SUITES: [&str; 5] = ["geometry", "simplex", "loopgroup", "holonomy", "emfield"];

pub static REGISTRY: &[CheckSpec] = &[
    CheckSpec {
        name: "poincare_group_law",
        module: "geometry",
        description: "(P₁P₂)y = P₁(P₂y) and P⁻¹Py = y",
        run: geometry::group_law,
    },
    CheckSpec {
        name: "lorentz_invariance",
        module: "geometry",
        description: "Lorentz matrices preserve the Minkowski product",
        run: geometry::lorentz_invariance,
    },
    CheckSpec {
        name: "cone_disjointness",
        module: "geometry",
        description: "points of certified causally disjoint double cones are spacelike separated",
        run: geometry::cone_disjointness,
    },
    CheckSpec {
        name: "boundary_squared",
        module: "simplex",
        description: "∂∂ = 0 on rational chains (count of failures)",
        run: simplex::boundary_squared,
    },
    CheckSpec {
        name: "homotopy_identity",
        module: "simplex",
        description: "∂hᶻ + hᶻ∂ = id on rational chains (count of failures)",
        run: simplex::homotopy_identity,
    },
    CheckSpec {
        name: "face_covariance",
        module: "simplex",
        description: "faces commute with the Poincaré action",
        run: simplex::face_covariance,
    },
    CheckSpec {
        name: "word_reduction",
        module: "loopgroup",
        description: "reduce agrees with a rescanning oracle (count of failures)",
        run: loopgroup::word_reduction,
    },
    CheckSpec {
        name: "word_inverse",
        module: "loopgroup",
        description: "w·w⁻¹ reduces to the identity (count of failures)",
        run: loopgroup::word_inverse,
    },
    CheckSpec {
        name: "support_covariance",
        module: "loopgroup",
        description: "supp(Pw) = P supp(w) as hulls",
        run: loopgroup::support_covariance,
    },
    CheckSpec {
        name: "locality_covariance",
        module: "loopgroup",
        description: "locality in O carries over to PO (count of failures)",
        run: loopgroup::locality_covariance,
    },
    CheckSpec {
        name: "cochain_axioms",
        module: "holonomy",
        description: "adjoint, degeneracy, causality and covariance of each cochain",
        run: holonomy::cochain_axioms,
    },
    CheckSpec {
        name: "round_trip_cochain",
        module: "holonomy",
        description: "cochain → representation → cochain is the identity",
        run: holonomy::round_trip_cochain,
    },
    CheckSpec {
        name: "round_trip_representation",
        module: "holonomy",
        description: "representation → cochain → representation is the identity",
        run: holonomy::round_trip_representation,
    },
    CheckSpec {
        name: "loop_restoration",
        module: "holonomy",
        description: "the connection of a representation restores it on loops",
        run: holonomy::loop_restoration,
    },
    CheckSpec {
        name: "frame_change",
        module: "holonomy",
        description: "the frame-change gauge carries one frame's connection to another's",
        run: holonomy::frame_change,
    },
    CheckSpec {
        name: "gauge_axioms",
        module: "holonomy",
        description: "gauged connections keep u(b̄) = u(b)* and u(e) = 1",
        run: holonomy::gauge_axioms,
    },
    CheckSpec {
        name: "mock_causality",
        module: "holonomy",
        description: "mock values on cell-disjoint, causally disjoint simplices commute",
        run: holonomy::mock_causality,
    },
    CheckSpec {
        name: "stokes",
        module: "emfield",
        description: "A^z⟨∂σ⟩ = F⟨σ⟩",
        run: emfield::stokes,
    },
    CheckSpec {
        name: "cone",
        module: "emfield",
        description: "A^z⟨γ⟩ = F⟨hᶻγ⟩",
        run: emfield::cone,
    },
    CheckSpec {
        name: "primitivity",
        module: "emfield",
        description: "finite-difference curl of A^z reproduces F",
        run: emfield::primitivity,
    },
    CheckSpec {
        name: "closedness",
        module: "emfield",
        description: "cyclic sum of ∂F vanishes",
        run: emfield::closedness,
    },
    CheckSpec {
        name: "covariance",
        module: "emfield",
        description: "potential covariance with a moving pole",
        run: emfield::covariance,
    },
    CheckSpec {
        name: "gauge_closed",
        module: "emfield",
        description: "closed line integrals are gauge invariant",
        run: emfield::gauge_closed,
    },
    CheckSpec {
        name: "gauge_open",
        module: "emfield",
        description: "open line integrals shift by the boundary term",
        run: emfield::gauge_open,
    },
    CheckSpec {
        name: "boundary_independence",
        module: "emfield",
        description: "F⟨c⟩ = F⟨hᶻ∂c⟩",
        run: emfield::boundary_independence,
    },
    CheckSpec {
        name: "em_pot_equivalence",
        module: "emfield",
        description: "Euclidean-frame em connection equals the potential connection",
        run: emfield::em_pot_equivalence,
    },
    CheckSpec {
        name: "em_frame_equivalence",
        module: "emfield",
        description: "frame change and frame transport relate em connections of two frames",
        run: emfield::em_frame_equivalence,
    },
    CheckSpec {
        name: "quadrature_convergence",
        module: "emfield",
        description: "largest increase of the Stokes residual along the configured orders",
        run: emfield::quadrature_convergence,
    },
];

pub fn find(name: &str) -> Option<&'static CheckSpec> {
    REGISTRY.iter().find(|c| c.name == name)
}

/// Check names of a suite; `all` is every registered check.
pub fn suite(name: &str) -> Option<Vec<&'static str>> {
    if name == "all" {
        Some(REGISTRY.iter().map(|c| c.name).collect())
    } else if SUITES.contains(&name) {
        Some(
            REGISTRY
                .iter()
                .filter(|c| c.module == name)
                .map(|c| c.name)
                .collect(),
        )
    } else {
        None
    }
}

/// What a check sees: the scenario and its own name.
pub struct Ctx<'a> {
    pub cfg: &'a ScenarioConfig,
    pub check: &'static str,
}

impl Ctx<'_> {
    /// Runs `f`, which returns `(samples, max_residual)`, and turns the outcome into a record.
    pub fn record(
        &self,
        params: Params,
        default_tolerance: f64,
        f: impl FnOnce() -> Measured,
    ) -> Record {
        let tol = self.cfg.tolerance(self.check, default_tolerance);
        match f() {
            Ok((n, m)) => Record::measured(self.check, params, n, m, tol),
            Err(e) => Record::failed(self.check, params, tol, e.to_string()),
        }
    }

    pub fn samples(&self) -> usize {
        self.cfg.samples
    }

    pub fn scale(&self) -> f64 {
        self.cfg.simplex_scale
    }

    /// Models labelled `index:kind`.
    pub fn models(&self) -> impl Iterator<Item = (Value, &FieldModel)> {
        self.cfg
            .field_models
            .iter()
            .enumerate()
            .map(|(i, m)| (Value::from(format!("{i}:{}", m.name())), m))
    }

    /// Tags labelled `index:kind`.
    pub fn tags(&self) -> impl Iterator<Item = (Value, &TestFunctionTag)> {
        self.cfg
            .tags
            .iter()
            .enumerate()
            .map(|(i, t)| (Value::from(format!("{i}:{}", t.kind_name())), t))
    }

    /// The finest configured quadrature order, used where a single order is needed.
    pub fn order(&self) -> usize {
        self.cfg
            .quadrature_orders
            .iter()
            .copied()
            .max()
            .unwrap_or(32)
    }
}

/// Closed-form models are checked at 1e-10, oscillatory ones at 1e-8.
pub fn model_tolerance(m: &FieldModel) -> f64 {
    match m {
        FieldModel::Constant { .. } | FieldModel::Linear { .. } => 1e-10,
        _ => 1e-8,
    }
}

/// `max_{a∈A} min_{b∈B} |a − b|`, symmetrized.
pub fn hausdorff(
    a: &[causal_loops::geometry::FourVector],
    b: &[causal_loops::geometry::FourVector],
) -> f64 {
    let one_way = |a: &[causal_loops::geometry::FourVector],
                   b: &[causal_loops::geometry::FourVector]| {
        a.iter()
            .map(|x| {
                b.iter()
                    .map(|y| (*x - *y).euclidean_norm())
                    .fold(f64::INFINITY, f64::min)
            })
            .fold(0.0, f64::max)
    };
    one_way(a, b).max(one_way(b, a))
}
