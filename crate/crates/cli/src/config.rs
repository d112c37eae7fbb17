//! Recipe files: a `[scenario]` section describing the system and an
//! optional `[sweep]` section describing what to vary.
//!
//! ```toml
//! [scenario]
//! t = 6
//! r = 4
//! e = 4
//! snr_db = 10.0
//!
//! [scenario.bob]
//! spacing = 0.8
//! aoa_deg = 30.0
//! ras_deg = 10.0
//!
//! [sweep]
//! variable = "snr_db"
//! grid = { start = -5.0, stop = 30.0, step = 2.5 }
//! s1 = [1, 2, 3, 4]
//! methods = ["exact", "monte-carlo"]
//! trials = 100000
//! seed = 2019
//! ```

use std::path::Path;
use std::str::FromStr;

use ansec::corr::CorrelationSpec;
use ansec::rate::{Method, SystemConfig};
use serde::Deserialize;

use crate::error::{CliError, CliResult};
use crate::sweep::{SweepSpec, Variable};

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RecipeFile {
    pub scenario: ScenarioSection,
    pub sweep: Option<SweepSection>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioSection {
    pub t: usize,
    pub r: usize,
    pub e: usize,
    #[serde(default = "default_snr_db")]
    pub snr_db: f64,
    #[serde(default = "default_s1")]
    pub s1: usize,
    #[serde(default = "default_true")]
    pub eve_corr_known: bool,
    #[serde(default)]
    pub bob: ArraySection,
    #[serde(default)]
    pub eve: ArraySection,
}

/// Array geometry; antenna counts come from the scenario.
#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArraySection {
    #[serde(default = "default_spacing")]
    pub spacing: f64,
    #[serde(default = "default_aoa")]
    pub aoa_deg: f64,
    #[serde(default = "default_ras")]
    pub ras_deg: f64,
}

impl Default for ArraySection {
    fn default() -> Self {
        ArraySection {
            spacing: default_spacing(),
            aoa_deg: default_aoa(),
            ras_deg: default_ras(),
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum GridSection {
    List(Vec<f64>),
    Range { start: f64, stop: f64, step: f64 },
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSection {
    pub variable: String,
    pub grid: GridSection,
    pub s1: Vec<usize>,
    pub methods: Vec<String>,
    #[serde(default = "default_trials")]
    pub trials: usize,
    #[serde(default)]
    pub seed: u64,
}

fn default_snr_db() -> f64 {
    10.0
}
fn default_s1() -> usize {
    1
}
fn default_true() -> bool {
    true
}
fn default_spacing() -> f64 {
    0.8
}
fn default_aoa() -> f64 {
    30.0
}
fn default_ras() -> f64 {
    10.0
}
fn default_trials() -> usize {
    100_000
}

impl ScenarioSection {
    pub fn to_config(&self) -> CliResult<SystemConfig> {
        let spec =
            |a: usize, s: &ArraySection| CorrelationSpec::new(a, s.spacing, s.aoa_deg, s.ras_deg);
        let config = SystemConfig {
            t: self.t,
            r: self.r,
            e: self.e,
            power: ansec::rate::db_to_linear(self.snr_db),
            s1: self.s1,
            bob: spec(self.r, &self.bob),
            eve: spec(self.e, &self.eve),
            eve_corr_known: self.eve_corr_known,
        };
        config
            .validate()
            .map_err(|e| CliError::Config(e.to_string()))?;
        Ok(config)
    }
}

impl GridSection {
    pub fn values(&self) -> CliResult<Vec<f64>> {
        match *self {
            GridSection::List(ref v) => Ok(v.clone()),
            GridSection::Range { start, stop, step } => {
                if !(step > 0.0) || !(stop >= start) {
                    return Err(CliError::Config(format!(
                        "bad grid range {start}..{stop} step {step}"
                    )));
                }
                // count from the span so that accumulated rounding never drops the end point
                let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
                Ok((0..count).map(|i| start + i as f64 * step).collect())
            }
        }
    }
}

impl SweepSection {
    pub fn to_spec(&self, base: SystemConfig) -> CliResult<SweepSpec> {
        let variable = Variable::from_str(&self.variable)?;
        let methods = self
            .methods
            .iter()
            .map(|m| Method::from_str(m).map_err(|e| CliError::Config(e.to_string())))
            .collect::<CliResult<Vec<_>>>()?;
        let spec = SweepSpec {
            variable,
            grid: self.grid.values()?,
            s1_values: self.s1.clone(),
            base,
            trials: self.trials,
            seed: self.seed,
            methods,
        };
        spec.validate()?;
        Ok(spec)
    }
}

pub fn load_recipe(path: &Path) -> CliResult<RecipeFile> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Read {
        path: path.display().to_string(),
        source,
    })?;
    toml::from_str(&text).map_err(|source| CliError::Parse {
        path: path.display().to_string(),
        source,
    })
}
