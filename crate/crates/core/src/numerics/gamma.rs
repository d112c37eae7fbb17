//! Integer-order incomplete gamma functions.
//!
//! Only integer orders are needed by the eigenvalue distributions, so both
//! functions use finite (or rapidly convergent positive) sums instead of the
//! general series / continued-fraction machinery.

use crate::error::{Error, Result};

/// Largest `n` for which `n!` is finite in `f64`.
const MAX_FACTORIAL: u32 = 170;

/// `n!` as a float. Exact for `n <= 22`.
pub fn factorial(n: u32) -> f64 {
    assert!(n <= MAX_FACTORIAL, "{n}! overflows f64");
    (2..=n).fold(1.0, |acc, k| acc * k as f64)
}

/// `ln(n!)`.
pub fn ln_factorial(n: u32) -> f64 {
    if n <= MAX_FACTORIAL {
        factorial(n).ln()
    } else {
        (2..=n).map(|k| (k as f64).ln()).sum()
    }
}

fn check_domain(eps: i64, x: f64) -> Result<u32> {
    if eps < 1 {
        return Err(Error::Domain(format!(
            "gamma order must be >= 1, got {eps}"
        )));
    }
    if !(x >= 0.0) {
        return Err(Error::Domain(format!(
            "gamma argument must be >= 0, got {x}"
        )));
    }
    Ok(eps as u32)
}

/// Regularized upper function `Q(eps, x) = Γ(eps, x) / (eps-1)!`
/// `= e^{-x} Σ_{k<eps} x^k / k!`.
pub(crate) fn upper_regularized(eps: u32, x: f64) -> f64 {
    if x == 0.0 {
        return 1.0;
    }
    if x < 700.0 {
        let mut term = (-x).exp();
        let mut sum = term;
        for k in 1..eps {
            term *= x / k as f64;
            sum += term;
        }
        sum
    } else {
        let lx = x.ln();
        (0..eps)
            .map(|k| (-x + k as f64 * lx - ln_factorial(k)).exp())
            .sum()
    }
}

/// Regularized lower function `P(eps, x) = γ(eps, x) / (eps-1)!`.
///
/// Below `x = eps + 1` the tail series `e^{-x} Σ_{k>=eps} x^k / k!` is used,
/// which avoids the cancellation in `1 - Q` for small arguments.
pub(crate) fn lower_regularized(eps: u32, x: f64) -> f64 {
    if x == 0.0 {
        return 0.0;
    }
    if x < eps as f64 + 1.0 {
        let mut term = (-x + eps as f64 * x.ln() - ln_factorial(eps)).exp();
        let mut sum = 0.0;
        let mut k = eps;
        while term > f64::MIN_POSITIVE {
            sum += term;
            if term <= sum * 1e-17 {
                break;
            }
            k += 1;
            term *= x / k as f64;
        }
        sum
    } else {
        1.0 - upper_regularized(eps, x)
    }
}

/// Upper incomplete gamma `Γ(eps, x) = ∫_x^∞ e^{-z} z^{eps-1} dz` for integer `eps >= 1`.
pub fn upper_incomplete_gamma(eps: i64, x: f64) -> Result<f64> {
    let eps = check_domain(eps, x)?;
    Ok(factorial(eps - 1) * upper_regularized(eps, x))
}

/// Lower incomplete gamma `γ(eps, x) = ∫_0^x e^{-z} z^{eps-1} dz` for integer `eps >= 1`.
pub fn lower_incomplete_gamma(eps: i64, x: f64) -> Result<f64> {
    let eps = check_domain(eps, x)?;
    Ok(factorial(eps - 1) * lower_regularized(eps, x))
}

/// Digamma at a positive integer: `ψ(k) = -γ_E + Σ_{i=1}^{k-1} 1/i`.
pub fn digamma_int(k: u32) -> f64 {
    assert!(k >= 1, "digamma_int needs k >= 1");
    -EULER_GAMMA + (1..k).map(|i| 1.0 / i as f64).sum::<f64>()
}

pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
