//! Theory against simulation, one row per message split.

use std::fmt;

use ansec::an_scheme::monte_carlo_secrecy;
use ansec::channel::RngStream;
use ansec::numerics::QuadratureSpec;
use ansec::rate::{exact_ergodic_secrecy_rate, SystemConfig};

use crate::error::{CliError, CliResult};

/// Smallest Monte Carlo run accepted for validation.
pub const MIN_VALIDATION_TRIALS: usize = 10_000;

/// Largest accepted `|z|`.
pub const Z_LIMIT: f64 = 3.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ValidationRow {
    pub s1: usize,
    /// `C_H + C_H3 − C_H4` before the clamp.
    pub exact: f64,
    pub mc_mean: f64,
    pub mc_stderr: f64,
    pub z: f64,
    pub clamp_frequency: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ValidationReport {
    pub trials: usize,
    pub rows: Vec<ValidationRow>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.rows.iter().all(|r| r.pass)
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "s1  exact_bits    mc_bits      stderr      z        clamped  result"
        )?;
        for r in &self.rows {
            writeln!(
                f,
                "{:<3} {:<12.6} {:<12.6} {:<11.3e} {:<8.3} {:<8.5} {}",
                r.s1,
                r.exact,
                r.mc_mean,
                r.mc_stderr,
                r.z,
                r.clamp_frequency,
                if r.pass { "pass" } else { "FAIL" }
            )?;
        }
        write!(
            f,
            "{} trials per split: {}",
            self.trials,
            if self.passed() {
                "all pass"
            } else {
                "mismatch"
            }
        )
    }
}

/// Compares the exact unclamped rate with the simulated mean of `C_m − C_w`
/// for every `s1 = 1..=min(t, r)`. Split `s1` simulates from
/// `RngStream::derived(seed, 0, s1)`.
pub fn validate(
    config: &SystemConfig,
    trials: usize,
    seed: u64,
    quad: &QuadratureSpec,
) -> CliResult<ValidationReport> {
    validate_against(config, config, trials, seed, quad)
}

/// As [`validate`], but simulating `simulated` while the theory uses
/// `theory`. With two different systems this is a negative control.
///
/// The quadrature tolerance joins the Monte Carlo standard error in the
/// denominator of `z`, so vanishing rates (`ρ → 0`) compare cleanly.
pub fn validate_against(
    theory: &SystemConfig,
    simulated: &SystemConfig,
    trials: usize,
    seed: u64,
    quad: &QuadratureSpec,
) -> CliResult<ValidationReport> {
    if trials < MIN_VALIDATION_TRIALS {
        return Err(CliError::Config(format!(
            "validation needs at least {MIN_VALIDATION_TRIALS} trials"
        )));
    }
    theory.with_s1(1).validate()?;
    simulated.with_s1(1).validate()?;
    let mut rows = Vec::new();
    for s1 in 1..=theory.n() {
        let exact = exact_ergodic_secrecy_rate(&theory.with_s1(s1), quad)?.unclamped();
        let mc = monte_carlo_secrecy(
            &simulated.with_s1(s1),
            trials,
            RngStream::derived(seed, 0, s1 as u64),
        )?;
        let spread = (mc.unclamped_stderr.powi(2) + quad.tolerance.powi(2)).sqrt();
        let z = (exact - mc.unclamped_mean) / spread;
        rows.push(ValidationRow {
            s1,
            exact,
            mc_mean: mc.unclamped_mean,
            mc_stderr: mc.unclamped_stderr,
            z,
            clamp_frequency: mc.clamp_frequency,
            pass: z.abs() <= Z_LIMIT,
        });
    }
    Ok(ValidationReport { trials, rows })
}

/// The negative-control partner of `config`: Eve's array replaced by a
/// strongly correlated one (`d = 0.1`), far from what the theory assumes.
pub fn corrupted_eve(config: &SystemConfig) -> SystemConfig {
    let mut c = *config;
    c.eve.spacing = 0.1;
    c.eve_corr_known = true;
    c
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn vanishing_power_passes_trivially() {
        let cfg = SystemConfig::reference().with_snr_db(-100.0);
        let report = validate(&cfg, MIN_VALIDATION_TRIALS, 1, &QuadratureSpec::default()).unwrap();
        assert!(report.passed(), "{report}");
        assert!(report
            .rows
            .iter()
            .all(|r| r.exact.abs() < 1e-6 && r.mc_mean.abs() < 1e-6));
    }

    #[test]
    fn corrupted_eve_is_flagged() {
        let cfg = SystemConfig::reference();
        let report = validate_against(
            &cfg,
            &corrupted_eve(&cfg),
            20_000,
            2,
            &QuadratureSpec::default(),
        )
        .unwrap();
        assert!(!report.passed());
        assert!(report.rows.iter().all(|r| r.z.abs() > Z_LIMIT), "{report}");
    }

    #[test]
    fn too_few_trials_is_a_config_error() {
        let err = validate(
            &SystemConfig::reference(),
            100,
            1,
            &QuadratureSpec::default(),
        )
        .unwrap_err();
        assert!(matches!(err, CliError::Config(_)));
    }
}
