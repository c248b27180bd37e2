//! Run configuration, read from TOML. Unknown keys are rejected.

use persuasion::equilibrium::KnifeEdge;
use persuasion::model::ModelParams;
use persuasion::simulate::{NoJumpUpdate, SimConfig};
use persuasion::verify::VerifyOptions;
use persuasion::Params;
use serde::{Deserialize, Serialize};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    pub schema_version: u32,
    #[serde(default = "baseline")]
    pub model: Params,
    #[serde(default)]
    pub solve: SolveSection,
    #[serde(default)]
    pub simulation: SimulationSection,
    #[serde(default)]
    pub verify: VerifySection,
    #[serde(default)]
    pub sweep: SweepSection,
    #[serde(default)]
    pub frontier: FrontierSection,
}

fn baseline() -> Params {
    ModelParams::symmetric(1.0, 0.01, 0.6)
}

impl Default for Config {
    fn default() -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            model: baseline(),
            solve: SolveSection::default(),
            simulation: SimulationSection::default(),
            verify: VerifySection::default(),
            sweep: SweepSection::default(),
            frontier: FrontierSection::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SolveSection {
    pub knife_edge: KnifeEdge,
    /// Number of beliefs in the exported value table.
    pub grid: usize,
}

impl Default for SolveSection {
    fn default() -> Self {
        Self { knife_edge: KnifeEdge::Direct, grid: 1001 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SimulationSection {
    pub p0: f64,
    pub dt: f64,
    pub paths: usize,
    pub seed: u64,
    pub max_time: f64,
    pub update: NoJumpUpdate,
}

impl Default for SimulationSection {
    fn default() -> Self {
        let s = SimConfig::default();
        Self { p0: 0.3, dt: s.dt, paths: s.paths, seed: s.seed, max_time: s.max_time, update: s.update }
    }
}

impl SimulationSection {
    pub fn sim_config(&self) -> SimConfig {
        SimConfig { dt: self.dt, paths: self.paths, seed: self.seed, max_time: self.max_time, update: self.update }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct VerifySection {
    pub hjb_points: usize,
    pub hjb_tol: f64,
    pub search_beliefs: usize,
    pub search_grid: usize,
    pub flow_tol: f64,
}

impl Default for VerifySection {
    fn default() -> Self {
        let v = VerifyOptions::default();
        Self {
            hjb_points: v.hjb_points,
            hjb_tol: v.hjb_tol,
            search_beliefs: v.search_beliefs,
            search_grid: v.search_grid,
            flow_tol: v.flow_tol,
        }
    }
}

impl VerifySection {
    pub fn options(&self) -> VerifyOptions {
        VerifyOptions {
            hjb_points: self.hjb_points,
            hjb_tol: self.hjb_tol,
            search_beliefs: self.search_beliefs,
            search_grid: self.search_grid,
            flow_tol: self.flow_tol,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SweepSection {
    pub p0: f64,
    pub costs: Vec<f64>,
}

impl Default for SweepSection {
    fn default() -> Self {
        Self { p0: 0.3, costs: vec![1e-2, 1e-3, 1e-4, 1e-5] }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct FrontierSection {
    pub p0: f64,
    pub c: f64,
    /// Targets to trace; when empty, `points` evenly spaced targets above
    /// `max(p0, phat)` are used.
    pub p_star: Vec<f64>,
    pub points: usize,
}

impl Default for FrontierSection {
    fn default() -> Self {
        Self { p0: 0.3, c: 1e-4, p_star: Vec::new(), points: 41 }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("config parse error: {0}")]
    Parse(#[from] toml::de::Error),
    #[error("unsupported schema_version {0}, expected {SCHEMA_VERSION}")]
    Schema(u32),
    #[error("config invalid: {0}")]
    Invalid(String),
}

impl Config {
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let c: Config = toml::from_str(text)?;
        if c.schema_version != SCHEMA_VERSION {
            return Err(ConfigError::Schema(c.schema_version));
        }
        Ok(c)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serialises")
    }

    /// Checks ranges that the model's own validation does not cover.
    pub fn check(&self) -> Result<(), ConfigError> {
        self.model.validate().map_err(|e| ConfigError::Invalid(e.to_string()))?;
        let unit = |x: f64, name: &str| {
            if (0.0..=1.0).contains(&x) {
                Ok(())
            } else {
                Err(ConfigError::Invalid(format!("{name} must lie in [0, 1]")))
            }
        };
        unit(self.simulation.p0, "simulation.p0")?;
        unit(self.sweep.p0, "sweep.p0")?;
        unit(self.frontier.p0, "frontier.p0")?;
        let positive = |x: &f64| x.is_finite() && *x > 0.0;
        if !self.sweep.costs.iter().all(positive) || !positive(&self.frontier.c) {
            return Err(ConfigError::Invalid("attention costs must be positive".into()));
        }
        if self.solve.grid < 2|| self.verify.search_grid < 2 || self.verify.search_beliefs < 2 {
            return Err(ConfigError::Invalid("grids need at least two points".into()));
        }
        Ok(())
    }
}
