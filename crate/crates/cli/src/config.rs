use std::collections::BTreeMap;

use causal_loops::emfield::{FieldModel, ZERO_BIVECTOR};
use causal_loops::simplex::TestFunctionTag;
use serde::{Deserialize, Serialize};

use crate::checks;
use crate::error::CliError;

/// How Poincaré elements are sampled: `count` elements, each with total rapidity at most
/// `max_rapidity`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PoincareSampling {
    pub count: usize,
    pub max_rapidity: f64,
}

/// Lattice parameters for the matrix-valued mock cochain: a double cone of `radius` at the
/// origin cut into slabs of width `cell_size`, one qudit of dimension `qudit_dim` each.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MockConfig {
    pub radius: f64,
    pub cell_size: f64,
    pub qudit_dim: usize,
}

/// A verification scenario. Every field has a default, so `{}` is a valid config.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ScenarioConfig {
    pub seed: u64,
    pub quadrature_orders: Vec<usize>,
    pub field_models: Vec<FieldModel>,
    pub tags: Vec<TestFunctionTag>,
    pub poincare: PoincareSampling,
    /// Coordinate scale of sampled simplices and poles.
    pub simplex_scale: f64,
    /// Samples per record for checks that are not driven by `poincare.count`.
    pub samples: usize,
    pub mock: MockConfig,
    pub checks: Vec<String>,
    /// Per-check tolerance overrides.
    pub tolerances: BTreeMap<String, f64>,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        let mut c = ZERO_BIVECTOR;
        for (m, n, v) in [(0, 1, 0.7), (0, 3, -0.4), (1, 2, 0.5), (2, 3, 0.9)] {
            c[m][n] = v;
            c[n][m] = -v;
        }
        let mut t = [ZERO_BIVECTOR; 4];
        for (rho, mu, nu, v) in [
            (0, 1, 2, 0.6),
            (1, 0, 3, -0.3),
            (2, 2, 1, 0.8),
            (3, 3, 0, 0.4),
            (1, 1, 1, 0.2),
        ] {
            t[rho][mu][nu] = v;
        }
        ScenarioConfig {
            seed: 0,
            quadrature_orders: vec![32],
            field_models: vec![
                FieldModel::constant(c).expect("valid default"),
                FieldModel::linear_from_potential(c, t).expect("valid default"),
                FieldModel::plane_wave([0.4, -0.8, 0.5, 0.3], [1.2, 0.6, -0.9, 0.4], 0.3)
                    .expect("valid default"),
            ],
            tags: vec![
                TestFunctionTag::gaussian_axes(1, [0.1, 0.12, 0.08, 0.1]).expect("valid default")
            ],
            poincare: PoincareSampling {
                count: 20,
                max_rapidity: 2.0,
            },
            simplex_scale: 1.0,
            samples: 50,
            mock: MockConfig {
                radius: 4.0,
                cell_size: 1.0,
                qudit_dim: 2,
            },
            checks: Vec::new(),
            tolerances: BTreeMap::new(),
        }
    }
}

impl ScenarioConfig {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        let cfg: ScenarioConfig =
            serde_json::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let bad = |msg: String| Err(CliError::Config(msg));
        for name in self.checks.iter().chain(self.tolerances.keys()) {
            if checks::find(name).is_none() {
                return Err(CliError::UnknownCheck(name.clone()));
            }
        }
        if let Some((name, tol)) = self
            .tolerances
            .iter()
            .find(|(_, t)| !(t.is_finite() && **t > 0.0))
        {
            return bad(format!("tolerance for {name} must be positive, got {tol}"));
        }
        if self.quadrature_orders.is_empty() {
            return bad("quadrature_orders is empty".into());
        }
        if let Some(o) = self.quadrature_orders.iter().find(|o| **o < 2) {
            return bad(format!("quadrature order must be at least 2, got {o}"));
        }
        if self.field_models.is_empty() || self.tags.is_empty() {
            return bad("field_models and tags must be nonempty".into());
        }
        for m in &self.field_models {
            m.validate().map_err(|e| CliError::Config(e.to_string()))?;
        }
        for t in &self.tags {
            t.validate().map_err(|e| CliError::Config(e.to_string()))?;
        }
        if self.poincare.count == 0
            || !(self.poincare.max_rapidity >= 0.0 && self.poincare.max_rapidity.is_finite())
        {
            return bad("poincare needs count ≥ 1 and a finite, nonnegative max_rapidity".into());
        }
        if !(self.simplex_scale > 0.0 && self.simplex_scale.is_finite()) {
            return bad(format!(
                "simplex_scale must be positive, got {}",
                self.simplex_scale
            ));
        }
        if self.samples == 0 {
            return bad("samples must be at least 1".into());
        }
        let m = &self.mock;
        if !(m.radius > 0.0 && m.cell_size > 0.0 && m.radius.is_finite() && m.cell_size.is_finite())
            || m.qudit_dim < 2
        {
            return bad("mock needs positive radius and cell_size and qudit_dim ≥ 2".into());
        }
        Ok(())
    }

    pub fn tolerance(&self, check: &str, default: f64) -> f64 {
        self.tolerances.get(check).copied().unwrap_or(default)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_object_is_the_default() {
        let cfg = ScenarioConfig::from_json("{}").unwrap();
        assert_eq!(cfg.seed, 0);
        assert_eq!(cfg.field_models.len(), 3);
        assert!(cfg.checks.is_empty());
    }

    #[test]
    fn rejects_bad_configs() {
        for text in [
            r#"{"checks": ["no_such_check"]}"#,
            r#"{"tolerances": {"stokes": 0.0}}"#,
            r#"{"quadrature_orders": [1]}"#,
            r#"{"simplex_scale": -1}"#,
            r#"{"unknown_field": 3}"#,
            r#"{"seed": "x"}"#,
            r#"{"tags": []}"#,
        ] {
            assert!(ScenarioConfig::from_json(text).is_err(), "{text}");
        }
        assert!(matches!(
            ScenarioConfig::from_json(r#"{"checks": ["nope"]}"#),
            Err(CliError::UnknownCheck(_))
        ));
    }

    #[test]
    fn default_round_trips() {
        let cfg = ScenarioConfig::default();
        let text = serde_json::to_string(&cfg).unwrap();
        let back = ScenarioConfig::from_json(&text).unwrap();
        assert_eq!(serde_json::to_string(&back).unwrap(), text);
    }
}
