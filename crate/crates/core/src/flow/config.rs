use serde::{Deserialize, Serialize};

use super::FlowError;

/// Integration and monitoring parameters. Times and tolerances are `f64`
/// whatever scalar the state uses.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FlowConfig {
    /// Nominal step.
    pub dt: f64,
    pub t_max: f64,
    /// Rescale after every accepted step so `Σ r_i` stays at its initial value.
    pub normalize: bool,
    /// Converged once the curvature spread drops strictly below this; zero
    /// disables the test.
    pub tol_converge: f64,
    /// Collapse threshold for `min r_i / Σ r_j`.
    pub delta_collapse: f64,
    /// Floor on the normalized nondegeneracy quadratic.
    pub q_min: f64,
    /// Accepted steps between recorded trajectory samples.
    pub sample_every: usize,
    pub max_halvings: u32,
    /// Seed for randomized initial radii.
    pub seed: u64,
}

impl Default for FlowConfig {
    fn default() -> Self {
        Self {
            dt: 1e-3,
            t_max: 100.0,
            normalize: true,
            tol_converge: 1e-8,
            delta_collapse: 1e-6,
            q_min: 1e-12,
            sample_every: 1,
            max_halvings: 40,
            seed: 0,
        }
    }
}

impl FlowConfig {
    /// Checks everything that does not depend on the complex.
    pub fn validate(&self) -> Result<(), FlowError> {
        let bad = |what: &str| Err(FlowError::Config(what.to_string()));
        if !(self.dt.is_finite() && self.dt > 0.0) {
            return bad("dt must be positive");
        }
        if !(self.t_max.is_finite() && self.t_max >= 0.0) {
            return bad("t_max must be non-negative");
        }
        if !(self.tol_converge >= 0.0) {
            return bad("tol_converge must be non-negative");
        }
        if !(self.delta_collapse > 0.0 && self.delta_collapse < 1.0) {
            return bad("delta_collapse must lie in (0, 1)");
        }
        if !(self.q_min > 0.0 && self.q_min.is_finite()) {
            return bad("q_min must be positive");
        }
        if self.sample_every == 0 {
            return bad("sample_every must be at least 1");
        }
        Ok(())
    }

    /// `validate` plus `δ < 1/n`.
    pub fn validate_for(&self, n_vertices: usize) -> Result<(), FlowError> {
        self.validate()?;
        if self.delta_collapse * n_vertices as f64 >= 1.0 {
            return Err(FlowError::Config(format!(
                "delta_collapse must be below 1/{n_vertices} for {n_vertices} vertices"
            )));
        }
        Ok(())
    }

    pub fn from_json(text: &str) -> Result<Self, FlowError> {
        let cfg: Self = serde_json::from_str(text).map_err(|e| FlowError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data serializes")
    }
}
