//! Receiver-side spatial correlation of a uniform linear array.
//!
//! For antennas `u, v` with normalized spacing `d`, mean angle of arrival `θ̄`
//! and angular spread `δ` (Gaussian AoA, spread used as a standard deviation
//! in radians):
//!
//! ```text
//! R[u,v] = exp(-j·2π·d·(u-v)·cos θ̄) · exp(-½·(2π·d·δ·(u-v)·sin θ̄)²)
//! ```

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numerics::linalg::{det_complex, hermitian_eig, hermitian_sqrt, CMatrix};

/// Relative eigenvalue gap below which the spectrum is spread apart before it
/// is handed to the eigenvalue distributions (they divide by `∏(σ_i - σ_j)`).
pub const EPS_GAP: f64 = 1e-6;

/// Smallest eigenvalue, relative to the array size, still accepted as
/// positive definite.
const SINGULAR_TOL: f64 = 1e-13;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorrelationSpec {
    pub antennas: usize,
    /// Element spacing in wavelengths.
    pub spacing: f64,
    /// Mean angle of arrival, degrees.
    pub mean_aoa_deg: f64,
    /// Receive angle spread, degrees.
    pub ras_deg: f64,
}

impl CorrelationSpec {
    pub fn new(antennas: usize, spacing: f64, mean_aoa_deg: f64, ras_deg: f64) -> Self {
        CorrelationSpec {
            antennas,
            spacing,
            mean_aoa_deg,
            ras_deg,
        }
    }

    /// `d = 0.8, θ̄ = 30°, δ = 10°`, the reference scenario used throughout.
    pub fn reference(antennas: usize) -> Self {
        Self::new(antennas, 0.8, 30.0, 10.0)
    }

    pub fn with_antennas(mut self, antennas: usize) -> Self {
        self.antennas = antennas;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.antennas == 0 {
            return Err(Error::Domain("antenna count must be >= 1".into()));
        }
        if !(self.spacing > 0.0) || !self.spacing.is_finite() {
            return Err(Error::Domain(format!(
                "spacing {} must be positive",
                self.spacing
            )));
        }
        if !(self.mean_aoa_deg > 0.0 && self.mean_aoa_deg < 180.0) {
            return Err(Error::Domain(format!(
                "mean AoA {}° outside (0°, 180°)",
                self.mean_aoa_deg
            )));
        }
        if !(self.ras_deg >= 0.0) || !self.ras_deg.is_finite() {
            return Err(Error::Domain(format!(
                "angle spread {}° must be >= 0",
                self.ras_deg
            )));
        }
        Ok(())
    }

    /// Entry `(u, v)`; only the index difference matters.
    pub fn entry(&self, lag: i64) -> Complex64 {
        let theta = self.mean_aoa_deg.to_radians();
        let delta = self.ras_deg.to_radians();
        let k = 2.0 * std::f64::consts::PI * self.spacing * lag as f64;
        let phase = Complex64::from_polar(1.0, -k * theta.cos());
        let spread = k * delta * theta.sin();
        phase * (-0.5 * spread * spread).exp()
    }
}

/// Hermitian positive-definite correlation matrix with unit diagonal.
#[derive(Debug, Clone)]
pub struct CorrelationMatrix {
    entries: CMatrix,
    sqrt: CMatrix,
    spectrum: Vec<f64>,
    eigenvalues: Vec<f64>,
    regularized: bool,
}

impl CorrelationMatrix {
    pub fn identity(antennas: usize) -> Self {
        let entries = CMatrix::identity(antennas, antennas);
        let spectrum = vec![1.0; antennas];
        let (eigenvalues, regularized) = regularize(&spectrum);
        CorrelationMatrix {
            sqrt: entries.clone(),
            entries,
            spectrum,
            eigenvalues,
            regularized,
        }
    }

    /// Wrap an arbitrary Hermitian positive-definite matrix with unit diagonal.
    pub fn from_entries(entries: CMatrix) -> Result<Self> {
        let a = entries.nrows();
        if a == 0 || !entries.is_square() {
            return Err(Error::Domain(
                "correlation matrix must be square and non-empty".into(),
            ));
        }
        if (0..a).any(|u| (entries[(u, u)] - Complex64::new(1.0, 0.0)).norm() > 1e-12) {
            return Err(Error::Contract(
                "correlation matrix must have unit diagonal".into(),
            ));
        }
        let eig = hermitian_eig(&entries)?;
        let smallest = *eig.values.last().unwrap();
        if smallest <= SINGULAR_TOL * a as f64 {
            return Err(Error::Degenerate(format!(
                "correlation matrix is numerically singular (smallest eigenvalue {smallest:e})"
            )));
        }
        let sqrt = hermitian_sqrt(&entries)?;
        let (eigenvalues, regularized) = regularize(&eig.values);
        Ok(CorrelationMatrix {
            entries,
            sqrt,
            spectrum: eig.values,
            eigenvalues,
            regularized,
        })
    }

    pub fn antennas(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> &CMatrix {
        &self.entries
    }

    /// Principal square root `R^{1/2}`.
    pub fn sqrt(&self) -> &CMatrix {
        &self.sqrt
    }

    /// Descending eigenvalues of the matrix as built.
    pub fn spectrum(&self) -> &[f64] {
        &self.spectrum
    }

    /// Descending eigenvalues with strictly separated values; equal to
    /// [`spectrum`](Self::spectrum) unless [`is_regularized`](Self::is_regularized).
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn is_regularized(&self) -> bool {
        self.regularized
    }
}

pub fn build_correlation(spec: &CorrelationSpec) -> Result<CorrelationMatrix> {
    spec.validate()?;
    let a = spec.antennas;
    let mut entries = CMatrix::from_fn(a, a, |u, v| spec.entry(u as i64 - v as i64));
    for u in 0..a {
        entries[(u, u)] = Complex64::new(1.0, 0.0);
    }
    CorrelationMatrix::from_entries(entries)
}

fn regularize(spectrum: &[f64]) -> (Vec<f64>, bool) {
    let needs = spectrum.windows(2).any(|w| w[0] - w[1] < EPS_GAP * w[0]);
    if needs {
        (spread_spectrum(spectrum, EPS_GAP), true)
    } else {
        (spectrum.to_vec(), false)
    }
}

/// `σ_i ← σ_i · (1 + (a - i)·eps)` for a descending spectrum, rescaled to
/// keep the trace. Ties become relative gaps of about `eps`.
pub fn spread_spectrum(spectrum: &[f64], eps: f64) -> Vec<f64> {
    let a = spectrum.len();
    let trace: f64 = spectrum.iter().sum();
    let mut spread: Vec<f64> = spectrum
        .iter()
        .enumerate()
        .map(|(i, &s)| s * (1.0 + (a - 1 - i) as f64 * eps))
        .collect();
    let scale = trace / spread.iter().sum::<f64>();
    spread.iter_mut().for_each(|s| *s *= scale);
    spread
}

pub fn largest_eigenvalue(r: &CorrelationMatrix) -> f64 {
    r.spectrum[0]
}

pub fn determinant(r: &CorrelationMatrix) -> f64 {
    r.spectrum.iter().product()
}

/// `ϱ_k`: the sum of all `k × k` principal minors, for `k = 1..=a`.
pub fn principal_minor_sums(r: &CorrelationMatrix) -> Vec<f64> {
    let a = r.antennas();
    let mut sums = vec![0.0; a];
    // every non-empty subset of 1..=a, as a bitmask
    for mask in 1u32..(1 << a) {
        let idx: Vec<usize> = (0..a).filter(|&i| mask & (1 << i) != 0).collect();
        let k = idx.len();
        let sub = CMatrix::from_fn(k, k, |i, j| r.entries[(idx[i], idx[j])]);
        sums[k - 1] += det_complex(&sub).re;
    }
    sums
}

/// Entrywise (Schur) product.
pub fn schur_product(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.component_mul(b)
}

/// Real modulus matrix `|R[u,v]|`, handy for plotting.
pub fn modulus(r: &CorrelationMatrix) -> DMatrix<f64> {
    r.entries.map(|z| z.norm())
}
