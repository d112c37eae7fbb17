//! Correlated Rayleigh channel sampling (Kronecker model, receive side only).

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::corr::CorrelationMatrix;
use crate::numerics::linalg::CMatrix;

/// Identifies one independent random stream: `(seed, stream_id)` always
/// reproduces the same sequence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RngStream {
    pub seed: u64,
    pub stream_id: u64,
}

impl RngStream {
    pub fn new(seed: u64, stream_id: u64) -> Self {
        RngStream { seed, stream_id }
    }

    /// Stream for one `(sweep point, trial block)` pair.
    pub fn derived(seed: u64, sweep_index: u64, block_index: u64) -> Self {
        RngStream {
            seed,
            stream_id: stream_id(sweep_index, block_index),
        }
    }

    /// A sub-stream of this one, e.g. for the blocks of a single Monte Carlo run.
    pub fn child(&self, index: u64) -> Self {
        RngStream {
            seed: self.seed,
            stream_id: splitmix64(self.stream_id ^ splitmix64(index)),
        }
    }

    pub fn rng(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(self.stream_id);
        rng
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn stream_id(sweep_index: u64, block_index: u64) -> u64 {
    splitmix64(splitmix64(sweep_index) ^ block_index.rotate_left(32))
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChannelRealization {
    /// Main channel, `r × t`.
    pub h: CMatrix,
    /// Wiretap channel, `e × t`.
    pub he: CMatrix,
}

/// `rows × cols` matrix with i.i.d. `CN(0, 1)` entries.
pub fn sample_iid_cn<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> CMatrix {
    let normal = Normal::new(0.0, std::f64::consts::FRAC_1_SQRT_2).expect("finite std-dev");
    let mut m = CMatrix::zeros(rows, cols);
    // column-major fill, real part first
    for z in m.iter_mut() {
        let re = normal.sample(rng);
        let im = normal.sample(rng);
        *z = Complex64::new(re, im);
    }
    m
}

/// `R^{1/2} W` with `W` an `a × t` i.i.d. `CN(0, 1)` matrix.
pub fn sample_channel<R: Rng + ?Sized>(corr: &CorrelationMatrix, t: usize, rng: &mut R) -> CMatrix {
    let w = sample_iid_cn(corr.antennas(), t, rng);
    corr.sqrt() * w
}

/// Main and wiretap channels drawn in that order from the same generator.
pub fn sample_realization<R: Rng + ?Sized>(
    bob: &CorrelationMatrix,
    eve: Option<&CorrelationMatrix>,
    t: usize,
    rng: &mut R,
) -> ChannelRealization {
    let h = sample_channel(bob, t, rng);
    let he = match eve {
        Some(r) => sample_channel(r, t, rng),
        None => CMatrix::zeros(0, t),
    };
    ChannelRealization { h, he }
}

/// Haar-distributed `t × f` matrix with orthonormal columns: QR of a Gaussian
/// matrix with the phases of `diag(R)` moved into `Q`.
pub fn haar_isometry<R: Rng + ?Sized>(t: usize, f: usize, rng: &mut R) -> CMatrix {
    assert!(t >= f && f >= 1, "need t >= f >= 1");
    let g = sample_iid_cn(t, f, rng);
    let qr = g.qr();
    let mut q = qr.q();
    let r = qr.r();
    for c in 0..f {
        let d = r[(c, c)];
        let phase = if d.norm() > 0.0 {
            d / d.norm()
        } else {
            Complex64::new(1.0, 0.0)
        };
        q.column_mut(c).iter_mut().for_each(|z| *z *= phase);
    }
    q
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InvarianceReport {
    /// Largest entrywise deviation of the empirical covariance from `R`.
    pub max_cov_error: f64,
}

fn max_deviation(acc: &CMatrix, count: f64, corr: &CorrelationMatrix) -> f64 {
    (acc.unscale(count) - corr.entries())
        .iter()
        .fold(0.0, |m, z| m.max(z.norm()))
}

/// Empirical `E[G G†] / f` for `G = He F` with a fresh `He ~ CN(0, R ⊗ I_t)`
/// and a fresh Haar `F` (`t × f`) per trial, compared to `R`.
pub fn verify_unitary_invariance<R: Rng + ?Sized>(
    corr: &CorrelationMatrix,
    t: usize,
    f: usize,
    trials: usize,
    rng: &mut R,
) -> InvarianceReport {
    let e = corr.antennas();
    let mut acc = CMatrix::zeros(e, e);
    for _ in 0..trials {
        let he = sample_channel(corr, t, rng);
        let unitary = haar_isometry(t, f, rng);
        let g = he * unitary;
        acc += &g * g.adjoint();
    }
    InvarianceReport {
        max_cov_error: max_deviation(&acc, (trials * f) as f64, corr),
    }
}

/// As [`verify_unitary_invariance`] but with one fixed `F` for all trials.
pub fn verify_unitary_invariance_fixed<R: Rng + ?Sized>(
    corr: &CorrelationMatrix,
    unitary: &CMatrix,
    trials: usize,
    rng: &mut R,
) -> InvarianceReport {
    let (t, f) = unitary.shape();
    let e = corr.antennas();
    let mut acc = CMatrix::zeros(e, e);
    for _ in 0..trials {
        let g = sample_channel(corr, t, rng) * unitary;
        acc += &g * g.adjoint();
    }
    InvarianceReport {
        max_cov_error: max_deviation(&acc, (trials * f) as f64, corr),
    }
}

/// Reference error of sampling `CN(0, R ⊗ I_f)` directly.
pub fn direct_sampling_error<R: Rng + ?Sized>(
    corr: &CorrelationMatrix,
    f: usize,
    trials: usize,
    rng: &mut R,
) -> InvarianceReport {
    let e = corr.antennas();
    let mut acc = CMatrix::zeros(e, e);
    for _ in 0..trials {
        let g = sample_channel(corr, f, rng);
        acc += &g * g.adjoint();
    }
    InvarianceReport {
        max_cov_error: max_deviation(&acc, (trials * f) as f64, corr),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corr::{build_correlation, CorrelationSpec};
    use crate::numerics::linalg::max_abs;

    #[test]
    fn unit_power_entries() {
        let mut rng = RngStream::new(1, 0).rng();
        let m = sample_iid_cn(1000, 1000, &mut rng);
        let p = m.iter().map(|z| z.norm_sqr()).sum::<f64>() / 1e6;
        assert!((p - 1.0).abs() < 0.01, "{p}");
        let re_var = m.iter().map(|z| z.re * z.re).sum::<f64>() / 1e6;
        assert!((re_var - 0.5).abs() < 0.01);
    }

    #[test]
    fn deterministic_streams() {
        let s = RngStream::new(42, 7);
        assert_eq!(
            sample_iid_cn(3, 4, &mut s.rng()),
            sample_iid_cn(3, 4, &mut s.rng())
        );
        let other = RngStream::new(42, 8);
        assert_ne!(
            sample_iid_cn(3, 4, &mut s.rng()),
            sample_iid_cn(3, 4, &mut other.rng())
        );
        assert_ne!(stream_id(0, 1), stream_id(1, 0));
        assert_ne!(s.child(0), s.child(1));
    }

    #[test]
    fn column_covariance_is_identity() {
        let mut rng = RngStream::new(2, 0).rng();
        let mut acc = CMatrix::zeros(4, 4);
        let n = 100_000;
        for _ in 0..n {
            let v = sample_iid_cn(4, 1, &mut rng);
            acc += &v * v.adjoint();
        }
        let cov = acc.unscale(n as f64);
        assert!(max_abs(&(cov - CMatrix::identity(4, 4))) < 0.05);
    }

    #[test]
    fn kronecker_covariance() {
        let r = build_correlation(&CorrelationSpec::reference(4)).unwrap();
        let mut rng = RngStream::new(3, 0).rng();
        let mut acc = CMatrix::zeros(4, 4);
        let n = 100_000;
        for _ in 0..n {
            let h = sample_channel(&r, 6, &mut rng);
            acc += &h * h.adjoint();
        }
        let cov = acc.unscale(6.0 * n as f64);
        assert!(max_abs(&(cov - r.entries())) < 0.05);
    }

    #[test]
    fn scalar_rayleigh() {
        let r = build_correlation(&CorrelationSpec::reference(1)).unwrap();
        let mut rng = RngStream::new(4, 0).rng();
        let n = 1_000_000;
        let p: f64 = (0..n)
            .map(|_| sample_channel(&r, 1, &mut rng)[(0, 0)].norm_sqr())
            .sum::<f64>()
            / n as f64;
        assert!((p - 1.0).abs() < 0.01);
    }

    #[test]
    fn identity_correlation_matches_iid() {
        let r = crate::corr::CorrelationMatrix::identity(3);
        let s = RngStream::new(5, 1);
        assert_eq!(
            sample_channel(&r, 4, &mut s.rng()),
            sample_iid_cn(3, 4, &mut s.rng())
        );
    }

    #[test]
    fn haar_columns_are_orthonormal() {
        let mut rng = RngStream::new(6, 0).rng();
        for f in 1..=6 {
            let q = haar_isometry(6, f, &mut rng);
            assert_eq!(q.shape(), (6, f));
            assert!(max_abs(&(q.adjoint() * &q - CMatrix::identity(f, f))) < 1e-12);
        }
    }

    #[test]
    fn coordinate_selection_equals_direct_sampling() {
        // He·[e_1..e_f] consumes the same draws as sampling e×t and keeping f columns,
        // so compare against direct sampling of the truncated matrix.
        let r = build_correlation(&CorrelationSpec::reference(4)).unwrap();
        let f = CMatrix::identity(6, 3);
        let s = RngStream::new(9, 0);
        let fixed = verify_unitary_invariance_fixed(&r, &f, 2000, &mut s.rng());
        let mut rng = s.rng();
        let mut acc = CMatrix::zeros(4, 4);
        for _ in 0..2000 {
            let g = sample_channel(&r, 6, &mut rng).columns(0, 3).into_owned();
            acc += &g * g.adjoint();
        }
        let direct = max_deviation(&acc, 6000.0, &r);
        assert!((fixed.max_cov_error - direct).abs() < 1e-12);
    }

    #[test]
    fn identity_correlation_invariance() {
        let r = crate::corr::CorrelationMatrix::identity(4);
        let rep = verify_unitary_invariance(&r, 6, 3, 100_000, &mut RngStream::new(10, 0).rng());
        assert!(rep.max_cov_error < 0.05);
    }

    #[test]
    fn error_shrinks_with_trials() {
        let r = build_correlation(&CorrelationSpec::reference(4)).unwrap();
        let mean_err = |trials: usize| -> f64 {
            (0..8)
                .map(|k| {
                    verify_unitary_invariance(&r, 6, 3, trials, &mut RngStream::new(11, k).rng())
                        .max_cov_error
                })
                .sum::<f64>()
                / 8.0
        };
        let coarse = mean_err(1_000);
        let fine = mean_err(16_000);
        // ideal ratio is 4
        assert!(
            coarse / fine > 2.5 && coarse / fine < 6.5,
            "{coarse} {fine}"
        );
    }
}
