//! Artificial-noise precoding for one channel realization.
//!
//! The transmitter diagonalizes `H†H = U Λ U†` and sends the message on the
//! `s1` strongest eigenvectors `B` and artificial noise on the rest `Z`, so
//! `HZ` is orthogonal to `HB` and Bob removes the noise by projecting on `HB`.

use nalgebra::DVector;
use num_complex::Complex64;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

use crate::channel::{sample_realization, ChannelRealization, RngStream};
use crate::error::{Error, Result};
use crate::numerics::linalg::{hermitian_eig, log2det_identity_plus, CMatrix};
use crate::rate::SystemConfig;

/// Eigenvalues below this fraction of the largest one count as zero.
const RANK_TOL: f64 = 1e-10;

#[derive(Debug, Clone)]
pub struct PrecoderPair {
    /// `t × s1` message precoder.
    pub b: CMatrix,
    /// `t × s2` artificial-noise precoder.
    pub z: CMatrix,
    /// Eigenvalues of `H†H`, descending.
    pub eigvals: Vec<f64>,
}

impl PrecoderPair {
    pub fn s1(&self) -> usize {
        self.b.ncols()
    }

    pub fn s2(&self) -> usize {
        self.z.ncols()
    }

    /// `U = [B, Z]`.
    pub fn unitary(&self) -> CMatrix {
        let t = self.b.nrows();
        let mut u = CMatrix::zeros(t, t);
        u.columns_mut(0, self.s1()).copy_from(&self.b);
        u.columns_mut(self.s1(), self.s2()).copy_from(&self.z);
        u
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CapacityTerms {
    pub c_main: f64,
    pub c_wiretap: f64,
    pub secrecy: f64,
}

pub fn build_precoders(h: &CMatrix, s1: usize) -> Result<PrecoderPair> {
    let (r, t) = h.shape();
    if s1 == 0 || s1 > r.min(t) {
        return Err(Error::Domain(format!("s1 = {s1} outside 1..={}", r.min(t))));
    }
    let eig = hermitian_eig(&(h.adjoint() * h))?;
    let floor = RANK_TOL * eig.values[0].max(f64::MIN_POSITIVE);
    let rank = eig.values.iter().filter(|&&v| v > floor).count();
    if s1 > rank {
        return Err(Error::Rank {
            requested: s1,
            rank,
        });
    }
    Ok(PrecoderPair {
        b: eig.vectors.columns(0, s1).into_owned(),
        z: eig.vectors.columns(s1, t - s1).into_owned(),
        eigvals: eig.values.iter().map(|&v| v.max(0.0)).collect(),
    })
}

/// `C_m = Σ_{i≤s1} log2(1 + ρ λ_i)`.
pub fn main_capacity(pair: &PrecoderPair, rho: f64) -> f64 {
    pair.eigvals[..pair.s1()]
        .iter()
        .map(|&l| (rho * l).ln_1p())
        .sum::<f64>()
        / std::f64::consts::LN_2
}

/// `C_m = log2 det(I_r + ρ (HB)(HB)†)`.
pub fn main_capacity_det(h: &CMatrix, b: &CMatrix, rho: f64) -> f64 {
    log2det_identity_plus(&(h * b), rho)
}

/// Eve's MMSE rate with the noise treated as interference:
/// `log2 det(I + ρ He He†) − log2 det(I + ρ He Z Z† He†)`.
pub fn wiretap_capacity(he: &CMatrix, pair: &PrecoderPair, rho: f64) -> Result<f64> {
    let (e, t) = he.shape();
    if e == 0 {
        return Ok(0.0);
    }
    if t <= e {
        return Err(Error::Config(format!(
            "t = {t} must exceed e = {e} for the noise to stay hidden from Eve"
        )));
    }
    // He U (He U)† = He He† because U is unitary
    let full = log2det_identity_plus(he, rho);
    let noise = if pair.s2() == 0 {
        0.0
    } else {
        log2det_identity_plus(&(he * &pair.z), rho)
    };
    Ok((full - noise).max(0.0))
}

/// Bob's projection `(HB)† y`, which removes anything sent along `Z`.
pub fn preprocess_receive(y: &DVector<Complex64>, h: &CMatrix, b: &CMatrix) -> DVector<Complex64> {
    (h * b).adjoint() * y
}

pub fn capacity_terms(real: &ChannelRealization, s1: usize, rho: f64) -> Result<CapacityTerms> {
    let pair = build_precoders(&real.h, s1)?;
    let c_main = main_capacity(&pair, rho);
    let c_wiretap = wiretap_capacity(&real.he, &pair, rho)?;
    Ok(CapacityTerms {
        c_main,
        c_wiretap,
        secrecy: (c_main - c_wiretap).max(0.0),
    })
}

/// Monte Carlo estimate of the ergodic secrecy rate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    pub trials: usize,
    /// Mean of `[C_m − C_w]⁺`.
    pub mean: f64,
    pub stderr: f64,
    /// Mean of `C_m − C_w` without the clamp, i.e. `E[C_m] − E[C_w]`.
    pub unclamped_mean: f64,
    pub unclamped_stderr: f64,
    pub main_mean: f64,
    pub wiretap_mean: f64,
    /// Fraction of trials with `C_w > C_m`.
    pub clamp_frequency: f64,
}

/// Trials per independently seeded block.
pub const MC_BLOCK: usize = 1000;

#[derive(Debug, Clone, Copy, Default)]
struct BlockSums {
    count: usize,
    clamped: f64,
    clamped_sq: f64,
    diff: f64,
    diff_sq: f64,
    main: f64,
    wiretap: f64,
    clamps: usize,
}

impl BlockSums {
    fn merge(mut self, o: &BlockSums) -> BlockSums {
        self.count += o.count;
        self.clamped += o.clamped;
        self.clamped_sq += o.clamped_sq;
        self.diff += o.diff;
        self.diff_sq += o.diff_sq;
        self.main += o.main;
        self.wiretap += o.wiretap;
        self.clamps += o.clamps;
        self
    }
}

fn mean_and_stderr(sum: f64, sum_sq: f64, n: usize) -> (f64, f64) {
    let nf = n as f64;
    let mean = sum / nf;
    if n < 2 {
        return (mean, f64::NAN);
    }
    let var = ((sum_sq - nf * mean * mean) / (nf - 1.0)).max(0.0);
    (mean, (var / nf).sqrt())
}

/// Runs `trials` independent `(H, He)` draws in blocks of [`MC_BLOCK`], block
/// `j` drawing from `stream.child(j)`. Blocks are reduced in index order, so
/// the result does not depend on how many threads ran them.
pub fn monte_carlo_secrecy(
    config: &SystemConfig,
    trials: usize,
    stream: RngStream,
) -> Result<McEstimate> {
    config.validate()?;
    if trials == 0 {
        return Err(Error::Domain("at least one trial is required".into()));
    }
    let bob = config.bob_correlation()?;
    let eve = config.eve_correlation()?;
    let rho = config.rho();
    let blocks = trials.div_ceil(MC_BLOCK);

    let run_block = |j: usize| -> Result<BlockSums> {
        let mut rng = stream.child(j as u64).rng();
        let count = MC_BLOCK.min(trials - j * MC_BLOCK);
        let mut s = BlockSums {
            count,
            ..Default::default()
        };
        for _ in 0..count {
            let real = sample_realization(&bob, eve.as_ref(), config.t, &mut rng);
            let c = capacity_terms(&real, config.s1, rho)?;
            let d = c.c_main - c.c_wiretap;
            s.clamped += c.secrecy;
            s.clamped_sq += c.secrecy * c.secrecy;
            s.diff += d;
            s.diff_sq += d * d;
            s.main += c.c_main;
            s.wiretap += c.c_wiretap;
            s.clamps += usize::from(d < 0.0);
        }
        Ok(s)
    };

    #[cfg(feature = "parallel")]
    let sums: Vec<Result<BlockSums>> = (0..blocks).into_par_iter().map(run_block).collect();
    #[cfg(not(feature = "parallel"))]
    let sums: Vec<Result<BlockSums>> = (0..blocks).map(run_block).collect();

    let mut total = BlockSums::default();
    for s in sums {
        total = total.merge(&s?);
    }
    let n = total.count;
    let (mean, stderr) = mean_and_stderr(total.clamped, total.clamped_sq, n);
    let (unclamped_mean, unclamped_stderr) = mean_and_stderr(total.diff, total.diff_sq, n);
    Ok(McEstimate {
        trials: n,
        mean,
        stderr,
        unclamped_mean,
        unclamped_stderr,
        main_mean: total.main / n as f64,
        wiretap_mean: total.wiretap / n as f64,
        clamp_frequency: total.clamps as f64 / n as f64,
    })
}
