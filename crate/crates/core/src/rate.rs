//! Ergodic secrecy rate of the artificial-noise scheme: exact (through the
//! eigenvalue marginals), approximate (Jensen-type closed form) and
//! asymptotic pieces, plus the search over the message/noise split.
//!
//! With `ρ = P/t`, `s2 = t − s1` and `n1 = min(s2, e)`:
//!
//! ```text
//! R_s = [C_H(R_r; b = t, η = s1) + C_H3(R_e; b = s2, η = n1) − C_H4(R_e; b = t, η = e)]⁺
//! ```

use crate::corr::{
    build_correlation, determinant, principal_minor_sums, CorrelationMatrix, CorrelationSpec,
};
use crate::error::{Error, Result};
use crate::numerics::gamma::digamma_int;
use crate::numerics::quad::QuadratureSpec;
use crate::wishart::WishartModel;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemConfig {
    /// Transmit antennas.
    pub t: usize,
    /// Bob's receive antennas.
    pub r: usize,
    /// Eve's receive antennas.
    pub e: usize,
    /// Total transmit power `P` (linear, unit noise variance).
    pub power: f64,
    /// Message streams; the remaining `t − s1` carry artificial noise.
    pub s1: usize,
    pub bob: CorrelationSpec,
    pub eve: CorrelationSpec,
    /// When false, Eve is assumed uncorrelated (`R_e = I`), the worst case.
    pub eve_corr_known: bool,
}

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

impl SystemConfig {
    /// `t = 6`, `r = e = 4`, both sides at `d = 0.8, θ̄ = 30°, δ = 10°`, 10 dB, `s1 = 2`.
    pub fn reference() -> Self {
        SystemConfig {
            t: 6,
            r: 4,
            e: 4,
            power: db_to_linear(10.0),
            s1: 2,
            bob: CorrelationSpec::reference(4),
            eve: CorrelationSpec::reference(4),
            eve_corr_known: true,
        }
    }

    pub fn with_snr_db(mut self, db: f64) -> Self {
        self.power = db_to_linear(db);
        self
    }

    pub fn with_s1(mut self, s1: usize) -> Self {
        self.s1 = s1;
        self
    }

    pub fn snr_db(&self) -> f64 {
        10.0 * self.power.log10()
    }

    pub fn s2(&self) -> usize {
        self.t.saturating_sub(self.s1)
    }

    pub fn rho(&self) -> f64 {
        self.power / self.t as f64
    }

    /// `min(t, r)`.
    pub fn n(&self) -> usize {
        self.t.min(self.r)
    }

    pub fn validate(&self) -> Result<()> {
        if self.t == 0 || self.r == 0 {
            return Err(Error::Config("t and r must be >= 1".into()));
        }
        if self.t <= self.e {
            return Err(Error::Config(format!(
                "t = {} must exceed e = {}",
                self.t, self.e
            )));
        }
        if self.s1 == 0 || self.s1 > self.n() {
            return Err(Error::Config(format!(
                "s1 = {} outside 1..={}",
                self.s1,
                self.n()
            )));
        }
        if !(self.power > 0.0 && self.power.is_finite()) {
            return Err(Error::Config(format!(
                "power {} must be positive",
                self.power
            )));
        }
        if self.bob.antennas != self.r {
            return Err(Error::Config(format!(
                "Bob correlation has {} antennas, r = {}",
                self.bob.antennas, self.r
            )));
        }
        if self.e > 0 && self.eve.antennas != self.e {
            return Err(Error::Config(format!(
                "Eve correlation has {} antennas, e = {}",
                self.eve.antennas, self.e
            )));
        }
        self.bob
            .validate()
            .map_err(|e| Error::Config(format!("Bob correlation: {e}")))?;
        if self.e > 0 {
            self.eve
                .validate()
                .map_err(|e| Error::Config(format!("Eve correlation: {e}")))?;
        }
        Ok(())
    }

    pub fn bob_correlation(&self) -> Result<CorrelationMatrix> {
        build_correlation(&self.bob)
    }

    /// Eve's correlation as used by both theory and simulation: identity when
    /// it is not known, `None` without an eavesdropper.
    pub fn eve_correlation(&self) -> Result<Option<CorrelationMatrix>> {
        match (self.e, self.eve_corr_known) {
            (0, _) => Ok(None),
            (e, false) => Ok(Some(CorrelationMatrix::identity(e))),
            (_, true) => build_correlation(&self.eve).map(Some),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    Exact,
    Approx,
    MonteCarlo,
}

impl Method {
    pub fn as_str(&self) -> &'static str {
        match self {
            Method::Exact => "exact",
            Method::Approx => "approx",
            Method::MonteCarlo => "monte-carlo",
        }
    }
}

impl std::str::FromStr for Method {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(Method::Exact),
            "approx" => Ok(Method::Approx),
            "monte-carlo" | "mc" => Ok(Method::MonteCarlo),
            other => Err(Error::Config(format!("unknown method '{other}'"))),
        }
    }
}

/// The three ergodic terms and their clamped combination, in bits/s/Hz.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateBreakdown {
    pub c_main_ergodic: f64,
    pub c_h3: f64,
    pub c_h4: f64,
    pub secrecy_rate: f64,
    pub method: Method,
}

impl RateBreakdown {
    fn new(c_main_ergodic: f64, c_h3: f64, c_h4: f64, method: Method) -> Self {
        let secrecy_rate = (c_main_ergodic + c_h3 - c_h4).max(0.0);
        RateBreakdown {
            c_main_ergodic,
            c_h3,
            c_h4,
            secrecy_rate,
            method,
        }
    }

    /// `C_H + C_H3 − C_H4` before the clamp.
    pub fn unclamped(&self) -> f64 {
        self.c_main_ergodic + self.c_h3 - self.c_h4
    }
}

/// Eigenvalue laws behind the exact rate of one configuration, kept so that
/// several powers or splits can reuse them.
#[derive(Debug)]
pub struct ExactRateModel {
    t: usize,
    e: usize,
    bob: WishartModel,
    eve_corr: Option<CorrelationMatrix>,
    /// `H4 = He U`: `(a = e, b = t)`.
    h4: Option<WishartModel>,
}

impl ExactRateModel {
    pub fn new(config: &SystemConfig) -> Result<Self> {
        config.validate()?;
        let bob = WishartModel::from_correlation(&config.bob_correlation()?, config.t)?;
        let eve_corr = config.eve_correlation()?;
        let h4 = eve_corr
            .as_ref()
            .map(|r| WishartModel::from_correlation(r, config.t))
            .transpose()?;
        Ok(ExactRateModel {
            t: config.t,
            e: config.e,
            bob,
            eve_corr,
            h4,
        })
    }

    pub fn bob(&self) -> &WishartModel {
        &self.bob
    }

    /// Exact rate for `s1` message streams at `ρ = P/t`.
    pub fn breakdown(&self, s1: usize, rho: f64, quad: &QuadratureSpec) -> Result<RateBreakdown> {
        let s2 = self.t - s1;
        let c_main = self.bob.capacity(rho, s1, quad)?;
        let (c_h3, c_h4) = match (&self.eve_corr, &self.h4) {
            (Some(r), Some(h4)) => {
                let c_h3 = if s2 == 0 {
                    0.0
                } else {
                    // H3 = He Z: (a = e, b = s2), summed over all n1 = min(s2, e) eigenvalues
                    WishartModel::from_correlation(r, s2)?.capacity(rho, s2.min(self.e), quad)?
                };
                (c_h3, h4.capacity(rho, self.e, quad)?)
            }
            _ => (0.0, 0.0),
        };
        Ok(RateBreakdown::new(c_main, c_h3, c_h4, Method::Exact))
    }
}

pub fn exact_ergodic_secrecy_rate(
    config: &SystemConfig,
    quad: &QuadratureSpec,
) -> Result<RateBreakdown> {
    ExactRateModel::new(config)?.breakdown(config.s1, config.rho(), quad)
}

/// `log2(1 + Σ_{k=1}^{e} ρ^k ϱ_k ∏_{i<k}(m − i))`.
fn jensen_log_det(rho: f64, varrho: &[f64], m: usize) -> f64 {
    let mut total = 1.0;
    let mut falling = 1.0;
    for (k, &v) in varrho.iter().enumerate() {
        falling *= m as f64 - k as f64;
        total += rho.powi(k as i32 + 1) * falling * v;
    }
    total.log2()
}

/// `[χ1 + χ2]⁺` with `χ1 = Σ_{i≤s1} log2(1 + ρ E[λ_i(HH†)])` and `χ2` the
/// log-ratio of the Jensen forms of the two wiretap terms, using
/// `m1 = max(e, s2)` for the noise term.
pub fn approx_ergodic_secrecy_rate(
    config: &SystemConfig,
    quad: &QuadratureSpec,
) -> Result<RateBreakdown> {
    config.validate()?;
    let rho = config.rho();
    let bob = WishartModel::from_correlation(&config.bob_correlation()?, config.t)?;
    let mut chi1 = 0.0;
    for i in 1..=config.s1 {
        chi1 += (rho * bob.mean(i, quad)?).log2_1p();
    }
    let (h3, h4) = match config.eve_correlation()? {
        None => (0.0, 0.0),
        Some(r) => {
            let varrho = principal_minor_sums(&r);
            let m1 = config.e.max(config.s2());
            (
                jensen_log_det(rho, &varrho, m1),
                jensen_log_det(rho, &varrho, config.t),
            )
        }
    };
    Ok(RateBreakdown::new(chi1, h3, h4, Method::Approx))
}

trait Log2OnePlus {
    fn log2_1p(self) -> f64;
}

impl Log2OnePlus for f64 {
    fn log2_1p(self) -> f64 {
        self.ln_1p() / std::f64::consts::LN_2
    }
}

/// Large-system limit of `E[λ_1(HH†/t)]` for `r/t → c`:
/// `σ1 (1 + c/(σ1 − 1))` above the threshold `σ1 > 1 + √c`, else `(1 + √c)²`.
pub fn asymptotic_largest_eigen_mean(c: f64, sigma1: f64) -> Result<f64> {
    if !(c > 0.0 && c < 1.0) {
        return Err(Error::Domain(format!("ratio c = {c} outside (0, 1)")));
    }
    if !(sigma1 > 0.0) {
        return Err(Error::Domain(format!("sigma1 = {sigma1} must be positive")));
    }
    let threshold = 1.0 + c.sqrt();
    if sigma1 > threshold {
        Ok(sigma1 * (1.0 + c / (sigma1 - 1.0)))
    } else {
        Ok(threshold * threshold)
    }
}

/// Closed-form `χ1` for `s1 = n = min(t, r)`:
/// `n log2 ρ + ħ + log2 det R_r`, with `ħ = log2 ∏_{i<n}(m − i)` when
/// `ρ m ≥ 1` (the average eigenvalue of `HH†` is `m`) and
/// `ħ = Σ_{i<n} ψ(m − i) / ln 2` otherwise.
pub fn chi1_high_low_snr(config: &SystemConfig) -> Result<f64> {
    config.validate()?;
    let n = config.n();
    if config.s1 != n {
        return Err(Error::Domain(format!(
            "closed form needs s1 = n = {n}, got {}",
            config.s1
        )));
    }
    let m = config.t.max(config.r);
    let rho = config.rho();
    let hbar = if rho * m as f64 >= 1.0 {
        (0..n).map(|i| ((m - i) as f64).log2()).sum::<f64>()
    } else {
        (0..n).map(|i| digamma_int((m - i) as u32)).sum::<f64>() / std::f64::consts::LN_2
    };
    let det = determinant(&config.bob_correlation()?);
    Ok(n as f64 * rho.log2() + hbar + det.log2())
}

#[derive(Debug, Clone, PartialEq)]
pub struct S1Search {
    pub s1_star: usize,
    /// Exact rate for `s1 = 1..=min(t, r)`.
    pub rates: Vec<f64>,
}

/// Exhaustive search over `s1 = 1..=min(t, r)`; ties go to the smaller `s1`.
pub fn search_best_s1(template: &SystemConfig, quad: &QuadratureSpec) -> Result<S1Search> {
    let model = ExactRateModel::new(&template.with_s1(1))?;
    let rates = (1..=template.n())
        .map(|s1| {
            model
                .breakdown(s1, template.rho(), quad)
                .map(|b| b.secrecy_rate)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut s1_star = 1;
    for (i, &r) in rates.iter().enumerate() {
        if r > rates[s1_star - 1] {
            s1_star = i + 1;
        }
    }
    Ok(S1Search { s1_star, rates })
}
