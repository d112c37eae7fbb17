//! One-dimensional parameter sweeps and their CSV form.

use std::io::Write;
use std::str::FromStr;
use std::time::Instant;

use ansec::an_scheme::monte_carlo_secrecy;
use ansec::channel::RngStream;
use ansec::numerics::QuadratureSpec;
use ansec::rate::{
    approx_ergodic_secrecy_rate, db_to_linear, ExactRateModel, Method, SystemConfig,
};
use rayon::prelude::*;

use crate::error::{CliError, CliResult};

pub const CSV_HEADER: [&str; 7] = [
    "variable",
    "value",
    "s1",
    "method",
    "rate_bits",
    "stderr",
    "wall_ms",
];

/// Smallest Monte Carlo run a sweep accepts.
pub const MIN_SWEEP_TRIALS: usize = 1000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Variable {
    SnrDb,
    RAntennas,
    DBob,
    DEve,
    AoaBob,
    AoaEve,
    RasBob,
    RasEve,
}

impl Variable {
    pub const ALL: [Variable; 8] = [
        Variable::SnrDb,
        Variable::RAntennas,
        Variable::DBob,
        Variable::DEve,
        Variable::AoaBob,
        Variable::AoaEve,
        Variable::RasBob,
        Variable::RasEve,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            Variable::SnrDb => "snr_db",
            Variable::RAntennas => "r_antennas",
            Variable::DBob => "d_bob",
            Variable::DEve => "d_eve",
            Variable::AoaBob => "aoa_bob",
            Variable::AoaEve => "aoa_eve",
            Variable::RasBob => "ras_bob",
            Variable::RasEve => "ras_eve",
        }
    }

    fn is_integer(&self) -> bool {
        matches!(self, Variable::RAntennas)
    }

    /// `base` with this variable set to `value`.
    pub fn apply(&self, base: &SystemConfig, value: f64) -> ansec::Result<SystemConfig> {
        let mut c = *base;
        match self {
            Variable::SnrDb => c.power = db_to_linear(value),
            Variable::RAntennas => {
                if value < 1.0 || value.fract() != 0.0 {
                    return Err(ansec::Error::Config(format!(
                        "antenna count {value} is not a positive integer"
                    )));
                }
                c.r = value as usize;
                c.bob = c.bob.with_antennas(c.r);
            }
            Variable::DBob => c.bob.spacing = value,
            Variable::DEve => c.eve.spacing = value,
            Variable::AoaBob => c.bob.mean_aoa_deg = value,
            Variable::AoaEve => c.eve.mean_aoa_deg = value,
            Variable::RasBob => c.bob.ras_deg = value,
            Variable::RasEve => c.eve.ras_deg = value,
        }
        Ok(c)
    }
}

impl FromStr for Variable {
    type Err = CliError;
    fn from_str(s: &str) -> CliResult<Self> {
        Variable::ALL
            .into_iter()
            .find(|v| v.as_str() == s)
            .ok_or_else(|| CliError::Config(format!("unknown sweep variable '{s}'")))
    }
}

#[derive(Debug, Clone)]
pub struct SweepSpec {
    pub variable: Variable,
    pub grid: Vec<f64>,
    pub s1_values: Vec<usize>,
    pub base: SystemConfig,
    pub trials: usize,
    pub seed: u64,
    pub methods: Vec<Method>,
}

impl SweepSpec {
    pub fn validate(&self) -> CliResult<()> {
        if self.grid.is_empty() {
            return Err(CliError::Config("grid is empty".into()));
        }
        if self.grid.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(CliError::Config("grid must be strictly increasing".into()));
        }
        if self.s1_values.is_empty() || self.s1_values.contains(&0) {
            return Err(CliError::Config(
                "s1 values must be nonempty and >= 1".into(),
            ));
        }
        if self.methods.is_empty() {
            return Err(CliError::Config("no methods selected".into()));
        }
        if self.methods.contains(&Method::MonteCarlo) && self.trials < MIN_SWEEP_TRIALS {
            return Err(CliError::Config(format!(
                "{} trials is below the minimum {MIN_SWEEP_TRIALS}",
                self.trials
            )));
        }
        if self.variable.is_integer() && self.grid.iter().any(|v| v.fract() != 0.0 || *v < 1.0) {
            return Err(CliError::Config(
                "antenna grid must hold positive integers".into(),
            ));
        }
        Ok(())
    }

    pub fn row_count(&self) -> usize {
        self.grid.len() * self.s1_values.len() * self.methods.len()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub variable: Variable,
    pub value: f64,
    pub s1: usize,
    pub method: Method,
    /// `NaN` when `error` is set.
    pub rate: f64,
    /// Present for Monte Carlo rows only.
    pub stderr: Option<f64>,
    pub wall_ms: u64,
    pub error: Option<&'static str>,
}

impl SweepRow {
    fn failed(&self) -> bool {
        self.error.is_some()
    }
}

/// Runs every `(grid point, s1, method)` combination. Points run in
/// parallel on the current rayon pool; rows come back in grid order, then
/// `s1` order, then method order. Monte Carlo at point `i` with split `s1`
/// draws from `RngStream::derived(seed, i, s1)`, so the output depends only on
/// the sweep definition. With `timing` off every `wall_ms` is 0, keeping the
/// CSV byte-stable.
pub fn run_sweep(spec: &SweepSpec, quad: &QuadratureSpec, timing: bool) -> Vec<SweepRow> {
    spec.grid
        .par_iter()
        .enumerate()
        .map(|(i, &value)| run_point(spec, i, value, quad, timing))
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect()
}

fn run_point(
    spec: &SweepSpec,
    index: usize,
    value: f64,
    quad: &QuadratureSpec,
    timing: bool,
) -> Vec<SweepRow> {
    let config = spec.variable.apply(&spec.base, value).map(|c| c.with_s1(1));
    // the exact model only depends on the point, so it is shared by every s1
    let model = if spec.methods.contains(&Method::Exact) {
        Some(
            config
                .as_ref()
                .map_err(Clone::clone)
                .and_then(ExactRateModel::new),
        )
    } else {
        None
    };
    let mut rows = Vec::with_capacity(spec.s1_values.len() * spec.methods.len());
    for &s1 in &spec.s1_values {
        for &method in &spec.methods {
            let start = Instant::now();
            let outcome = config.clone().and_then(|c| {
                let c = c.with_s1(s1);
                c.validate()?;
                match method {
                    Method::Exact => {
                        let model = model
                            .as_ref()
                            .expect("built when exact is selected")
                            .as_ref()
                            .map_err(Clone::clone)?;
                        model
                            .breakdown(s1, c.rho(), quad)
                            .map(|b| (b.secrecy_rate, None))
                    }
                    Method::Approx => {
                        approx_ergodic_secrecy_rate(&c, quad).map(|b| (b.secrecy_rate, None))
                    }
                    Method::MonteCarlo => {
                        let stream = RngStream::derived(spec.seed, index as u64, s1 as u64);
                        monte_carlo_secrecy(&c, spec.trials, stream)
                            .map(|m| (m.mean, Some(m.stderr)))
                    }
                }
            });
            let wall_ms = if timing {
                start.elapsed().as_millis() as u64
            } else {
                0
            };
            let (rate, stderr, error) = match outcome {
                Ok((rate, stderr)) => (rate, stderr, None),
                Err(e) => (f64::NAN, None, Some(e.tag())),
            };
            rows.push(SweepRow {
                variable: spec.variable,
                value,
                s1,
                method,
                rate,
                stderr,
                wall_ms,
                error,
            });
        }
    }
    rows
}

pub fn any_failed(rows: &[SweepRow]) -> bool {
    rows.iter().any(SweepRow::failed)
}

/// `x` in positional notation with nine significant digits.
pub fn sig9(x: f64) -> String {
    if !x.is_finite() {
        return "NaN".into();
    }
    if x == 0.0 {
        return "0.00000000".into();
    }
    let magnitude = x.abs().log10().floor() as i32;
    if magnitude < -12 {
        return format!("{x:.8e}");
    }
    format!("{:.*}", (8 - magnitude).max(0) as usize, x)
}

fn format_value(variable: Variable, value: f64) -> String {
    if variable.is_integer() {
        format!("{}", value as i64)
    } else {
        format!("{value}")
    }
}

/// Writes the fixed header and one record per row. Failed rows carry `NaN`
/// in `rate_bits` and `error:<tag>` in `stderr`.
pub fn write_csv<W: Write>(rows: &[SweepRow], out: W) -> CliResult<()> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    w.write_record(CSV_HEADER)?;
    for row in rows {
        let stderr = match (row.error, row.stderr) {
            (Some(tag), _) => format!("error:{tag}"),
            (None, Some(se)) => sig9(se),
            (None, None) => String::new(),
        };
        w.write_record([
            row.variable.as_str().to_string(),
            format_value(row.variable, row.value),
            row.s1.to_string(),
            row.method.as_str().to_string(),
            sig9(row.rate),
            stderr,
            row.wall_ms.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}
