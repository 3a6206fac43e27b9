//! Sampled checks of the cochain axioms.

use serde::{Deserialize, Serialize};

use super::unitary::UnitaryValue;
use super::Cochain;
use crate::error::Result;
use crate::geometry::{PoincareElement, Tri};
use crate::simplex::AffineSimplex;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationRecord {
    pub check: String,
    pub samples: usize,
    pub max_violation: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl VerificationRecord {
    pub fn new(
        check: impl Into<String>,
        samples: usize,
        max_violation: f64,
        tolerance: f64,
    ) -> Self {
        VerificationRecord {
            check: check.into(),
            samples,
            max_violation,
            tolerance,
            pass: max_violation <= tolerance,
        }
    }
}

/// Inputs for [`verify_cochain`].
#[derive(Debug, Clone, Default)]
pub struct CochainScenario {
    pub simplices: Vec<AffineSimplex>,
    /// Candidate causally disjoint pairs; only pairs whose supports are certified disjoint
    /// are counted.
    pub disjoint_pairs: Vec<(AffineSimplex, AffineSimplex)>,
    /// Group elements to test covariance with; elements outside the declared group are skipped.
    pub group_elements: Vec<PoincareElement>,
    pub tolerance: f64,
}

/// Degenerate copies of `c`: each vertex repeated in place of the next.
fn degenerations(c: &AffineSimplex) -> Vec<AffineSimplex> {
    let v = c.vertices();
    [[0, 0, 2], [0, 1, 1], [0, 1, 0]]
        .iter()
        .filter_map(|idx| {
            AffineSimplex::new(idx.iter().map(|&i| v[i]).collect(), c.tag().clone()).ok()
        })
        .collect()
}

/// Maximal violations of `w(c̄) = w(c)*`, `w(degenerate) = 𝟙`, commutation on causally
/// disjoint supports, and covariance under the declared group.
pub fn verify_cochain(
    w: &dyn Cochain,
    scenario: &CochainScenario,
) -> Result<Vec<VerificationRecord>> {
    let tol = scenario.tolerance;
    let id = UnitaryValue::identity(&w.shape());

    let mut adjoint: f64 = 0.0;
    let mut degenerate: f64 = 0.0;
    let mut n_degenerate = 0;
    for c in &scenario.simplices {
        let value = w.eval(c)?;
        adjoint = adjoint.max(w.eval(&c.opposite()?)?.distance(&value.adjoint())?);
        for d in degenerations(c) {
            degenerate = degenerate.max(w.eval(&d)?.distance(&id)?);
            n_degenerate += 1;
        }
    }

    let mut causal: f64 = 0.0;
    let mut n_causal = 0;
    for (a, b) in &scenario.disjoint_pairs {
        if a.support_ball().causally_disjoint(&b.support_ball()) != Tri::True {
            continue;
        }
        causal = causal.max(w.eval(a)?.commutator_norm(&w.eval(b)?)?);
        n_causal += 1;
    }

    let mut covariance: f64 = 0.0;
    let mut n_covariance = 0;
    for p in &scenario.group_elements {
        for c in &scenario.simplices {
            if let Some((lhs, rhs)) = w.covariance_pair(p, c)? {
                covariance = covariance.max(lhs.distance(&rhs)?);
                n_covariance += 1;
            }
        }
    }

    Ok(vec![
        VerificationRecord::new("adjoint", scenario.simplices.len(), adjoint, tol),
        VerificationRecord::new("degeneracy", n_degenerate, degenerate, tol),
        VerificationRecord::new("causality", n_causal, causal, tol),
        VerificationRecord::new("covariance", n_covariance, covariance, tol),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{DoubleCone, FourVector};
    use crate::holonomy::{mock_lattice_cochain, TrivialCochain, ValueShape};
    use crate::simplex::TestFunctionTag;

    fn tri(v: [[f64; 4]; 3]) -> AffineSimplex {
        let tag = TestFunctionTag::bump(1, 0.01).unwrap();
        AffineSimplex::new(v.iter().map(|x| FourVector(*x)).collect(), tag).unwrap()
    }

    fn scenario() -> CochainScenario {
        let left = tri([
            [0.0, -1.9, 0.0, 0.0],
            [0.2, -1.2, 0.1, 0.0],
            [0.1, -1.5, 0.6, 0.2],
        ]);
        let right = tri([
            [0.0, 1.2, 0.0, 0.0],
            [0.2, 1.9, 0.1, 0.0],
            [0.1, 1.5, 0.6, 0.2],
        ]);
        let mid = tri([
            [0.3, -0.4, 0.1, 0.0],
            [0.9, 0.6, -0.2, 0.4],
            [0.0, 0.1, 0.8, -0.3],
        ]);
        CochainScenario {
            simplices: vec![left.clone(), right.clone(), mid],
            disjoint_pairs: vec![(left, right)],
            group_elements: vec![
                PoincareElement::translation(FourVector::new(0.1, 1.0, 0.0, -0.3)),
                PoincareElement::translation(FourVector::new(0.0, -1.0, 0.2, 0.0)),
            ],
            tolerance: 1e-12,
        }
    }

    #[test]
    fn trivial_cochain_has_no_violations() {
        let records = verify_cochain(&TrivialCochain(ValueShape::Phase), &scenario()).unwrap();
        assert!(
            records.iter().all(|r| r.pass && r.max_violation == 0.0),
            "{records:?}"
        );
    }

    #[test]
    fn mock_is_exact() {
        let m =
            mock_lattice_cochain(DoubleCone::new(FourVector::ZERO, 2.0).unwrap(), 1.0, 2).unwrap();
        let records = verify_cochain(&m, &scenario()).unwrap();
        for r in &records {
            assert!(r.pass, "{r:?}");
            assert!(r.samples > 0, "{r:?}");
        }
        assert_eq!(records[0].max_violation, 0.0);
        assert_eq!(records[2].max_violation, 0.0);
    }

    /// `w(c̄) := w(c)`: forgets orientation.
    struct Broken;

    impl Cochain for Broken {
        fn shape(&self) -> ValueShape {
            ValueShape::Phase
        }
        fn eval(&self, c: &AffineSimplex) -> Result<UnitaryValue> {
            let v = c.vertices();
            let (d1, d2) = (v[1] - v[0], v[2] - v[0]);
            Ok(UnitaryValue::Phase((d1[0] * d2[1] - d1[1] * d2[0]).abs()))
        }
    }

    #[test]
    fn broken_cochain_is_reported() {
        let records = verify_cochain(&Broken, &scenario()).unwrap();
        let adjoint = &records[0];
        assert_eq!(adjoint.check, "adjoint");
        assert!(!adjoint.pass && adjoint.max_violation > 0.0);
        let json = serde_json::to_value(adjoint).unwrap();
        assert_eq!(json["check"], "adjoint");
        assert_eq!(json["pass"], false);
    }
}
