//! Ordered-eigenvalue marginals of a receive-correlated central complex
//! Wishart matrix `W = R^{1/2} X X† R^{1/2}`, with `X` an `a × b` matrix of
//! i.i.d. `CN(0, 1)` entries and `R` having eigenvalues `σ_1 > … > σ_a`.
//!
//! With `n = min(a, b)`, the cdf of the `k`-th largest eigenvalue is
//!
//! ```text
//! F_k(x) = K⁻¹ Σ_{i=1}^{k} Σ_{μ ∈ P(i)} det[G, Ψ(μ, i; x)]
//! ```
//!
//! where the `i`-th term is the probability that exactly `i - 1` eigenvalues
//! exceed `x`. `G` holds `σ_u^{j-1}` for `j = 1..a-n` and column `c` of `Ψ`
//! holds `σ_u^{a-n+c-1}` times the upper (`c` in the first run of `μ`) or
//! lower incomplete gamma function of order `b - n + c` at `x / σ_u`.
//! `K = ∏_{i<j≤a}(σ_i - σ_j) · ∏_{i≤n}(b - i)!`, and the determinant carries
//! the orientation sign `(-1)^{a(a-1)/2}` relative to it.
//!
//! Evaluation divides by the Vandermonde product of `σ`, so nearly equal
//! eigenvalues cost precision. When the spectrum is that tight the
//! determinants are evaluated in multiprecision arithmetic instead.

use std::collections::HashMap;
use std::sync::Mutex;

use nalgebra::DMatrix;

use crate::corr::CorrelationMatrix;
use crate::error::{Error, Result};
use crate::numerics::gamma::{factorial, lower_incomplete_gamma, upper_incomplete_gamma};
use crate::numerics::mp::{Arith, F64Arith, MpArith};
use crate::numerics::perm::enumerate_permutations;
use crate::numerics::quad::{
    integrate_piecewise, integrate_semi_infinite, QuadratureSpec, Transform,
};

/// Smallest accepted relative gap `(σ_i - σ_{i+1}) / σ_i`.
pub const MIN_RELATIVE_GAP: f64 = 1e-8;

/// Round-off allowance below zero for densities and outside `[0, 1]` for cdfs.
pub const NEGATIVE_TOL: f64 = 1e-9;

/// Predicted bits of cancellation the `f64` path may lose before switching to
/// multiprecision. The prediction overstates the measured loss, so this keeps
/// `f64` results within about `1e-10`.
const F64_BUDGET_BITS: f64 = 24.0;

#[derive(Debug, Clone, PartialEq)]
pub struct WishartParams {
    a: usize,
    b: usize,
    sigma: Vec<f64>,
}

impl WishartParams {
    /// `sigma` must be strictly descending and positive; its length is `a`.
    pub fn new(sigma: Vec<f64>, b: usize) -> Result<Self> {
        if sigma.is_empty() || b == 0 {
            return Err(Error::Domain("Wishart dimensions must be >= 1".into()));
        }
        if sigma.iter().any(|&s| !(s > 0.0 && s.is_finite())) {
            return Err(Error::Domain(
                "correlation eigenvalues must be positive".into(),
            ));
        }
        for w in sigma.windows(2) {
            if !((w[0] - w[1]) / w[0] >= MIN_RELATIVE_GAP) {
                return Err(Error::Degenerate(format!(
                    "eigenvalues {} and {} are not separated by a relative gap of {MIN_RELATIVE_GAP:e}",
                    w[0], w[1]
                )));
            }
        }
        Ok(WishartParams {
            a: sigma.len(),
            b,
            sigma,
        })
    }

    pub fn from_correlation(r: &CorrelationMatrix, b: usize) -> Result<Self> {
        Self::new(r.eigenvalues().to_vec(), b)
    }

    pub fn a(&self) -> usize {
        self.a
    }

    pub fn b(&self) -> usize {
        self.b
    }

    pub fn n(&self) -> usize {
        self.a.min(self.b)
    }

    pub fn m(&self) -> usize {
        self.a.max(self.b)
    }

    pub fn sigma(&self) -> &[f64] {
        &self.sigma
    }

    /// Predicted bits lost to the Vandermonde division,
    /// `Σ_{i<j} log2(σ_1 / (σ_i - σ_j))`. Close eigenvalues and a spectrum
    /// spanning many decades both cost precision.
    pub fn cancellation_bits(&self) -> f64 {
        let s = &self.sigma;
        let mut bits = 0.0;
        for i in 0..self.a {
            for j in i + 1..self.a {
                bits += (s[0] / (s[i] - s[j])).log2();
            }
        }
        bits
    }
}

/// `K = ∏_{i<j≤a}(σ_i - σ_j) · ∏_{i=1}^{n}(b - i)!`, always positive.
pub fn normalization_k(params: &WishartParams) -> f64 {
    let s = &params.sigma;
    let mut k = 1.0;
    for i in 0..params.a {
        for j in i + 1..params.a {
            k *= s[i] - s[j];
        }
    }
    (1..=params.n()).fold(k, |acc, i| acc * factorial((params.b - i) as u32))
}

/// `a × (a - n)` block with entries `σ_u^{j-1}`; no columns when `b ≥ a`.
pub fn build_g(params: &WishartParams) -> DMatrix<f64> {
    let cols = params.a - params.n();
    DMatrix::from_fn(params.a, cols, |u, j| params.sigma[u].powi(j as i32))
}

/// Checks that `mu` is a permutation of `1..=n` made of two ascending runs
/// split before position `i`, and returns the first-run membership mask.
fn head_mask(params: &WishartParams, mu: &[usize], i: usize) -> Result<Vec<bool>> {
    let n = params.n();
    if mu.len() != n || i == 0 || i > n {
        return Err(Error::Contract(format!(
            "permutation of length {} with split {i} for n = {n}",
            mu.len()
        )));
    }
    let mut seen = vec![false; n + 1];
    for &v in mu {
        if v == 0 || v > n || seen[v] {
            return Err(Error::Contract(format!(
                "{mu:?} is not a permutation of 1..={n}"
            )));
        }
        seen[v] = true;
    }
    let ascending = |run: &[usize]| run.windows(2).all(|w| w[0] < w[1]);
    if !ascending(&mu[..i - 1]) || !ascending(&mu[i - 1..]) {
        return Err(Error::Contract(format!(
            "{mu:?} is not two ascending runs split at {i}"
        )));
    }
    let mut mask = vec![false; n];
    for &v in &mu[..i - 1] {
        mask[v - 1] = true;
    }
    Ok(mask)
}

fn check_x(x: f64) -> Result<()> {
    if x >= 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!(
            "eigenvalue argument {x} must be finite and >= 0"
        )))
    }
}

/// `a × n` matrix `Ψ` with entry `(u, c)` equal to
/// `σ_u^{a-n+c-1} Γ(b-n+c, x/σ_u)` for `c` in the first run of `mu`, and the
/// lower function `γ` otherwise.
pub fn build_psi(params: &WishartParams, mu: &[usize], i: usize, x: f64) -> Result<DMatrix<f64>> {
    check_x(x)?;
    let mask = head_mask(params, mu, i)?;
    let (a, b, n) = (params.a as i64, params.b as i64, params.n() as i64);
    let mut psi = DMatrix::zeros(params.a, params.n());
    for u in 0..params.a {
        let s = params.sigma[u];
        for c in 1..=n {
            let scale = s.powi((a - n + c - 1) as i32);
            let order = b - n + c;
            let g = if mask[c as usize - 1] {
                upper_incomplete_gamma(order, x / s)?
            } else {
                lower_incomplete_gamma(order, x / s)?
            };
            psi[(u, c as usize - 1)] = scale * g;
        }
    }
    Ok(psi)
}

/// `Ψ` with column `j` replaced by its `x`-derivative
/// `∓σ_u^{a-b-1} e^{-x/σ_u} x^{b-n+j-1}` (minus for an upper column).
pub fn build_omega(
    params: &WishartParams,
    mu: &[usize],
    i: usize,
    j: usize,
    x: f64,
) -> Result<DMatrix<f64>> {
    let mut omega = build_psi(params, mu, i, x)?;
    let n = params.n();
    if j == 0 || j > n {
        return Err(Error::Contract(format!("column {j} outside 1..={n}")));
    }
    let upper = head_mask(params, mu, i)?[j - 1];
    let power = (params.b - n + j - 1) as i32;
    for u in 0..params.a {
        let s = params.sigma[u];
        let d = s.powi(params.a as i32 - params.b as i32 - 1) * (-x / s).exp() * x.powi(power);
        omega[(u, j - 1)] = if upper { -d } else { d };
    }
    Ok(omega)
}

/// Per-`x` building blocks shared by every `k`: `exceed[i-1]` is the
/// probability that exactly `i - 1` eigenvalues exceed `x`, and `density[i-1]`
/// its derivative in `x`.
#[derive(Debug, Clone, PartialEq)]
pub struct OrderTerms {
    pub exceed: Vec<f64>,
    pub density: Vec<f64>,
}

impl OrderTerms {
    pub fn cdf(&self, k: usize) -> f64 {
        self.exceed[..k].iter().sum()
    }

    pub fn pdf(&self, k: usize) -> f64 {
        self.density[..k].iter().sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Precision {
    Double,
    /// Multiprecision with the given mantissa bits.
    Multi(usize),
}

impl Precision {
    pub fn for_params(params: &WishartParams) -> Self {
        let lost = params.cancellation_bits();
        if lost <= F64_BUDGET_BITS {
            Precision::Double
        } else {
            // headroom for the 53-bit result and the interpolation in t
            let bits = (lost + 128.0).ceil() as usize;
            Precision::Multi(bits.div_ceil(32) * 32)
        }
    }
}

/// Evaluator for every ordered-eigenvalue marginal of one Wishart law.
/// Multiprecision evaluations are memoized per `x`.
#[derive(Debug)]
pub struct WishartModel {
    params: WishartParams,
    /// First-run masks over columns `1..=n`, grouped by split `i = 1..=n`.
    heads: Vec<Vec<Vec<bool>>>,
    precision: Precision,
    cache: Mutex<HashMap<u64, OrderTerms>>,
}

const CACHE_LIMIT: usize = 1 << 18;

impl WishartModel {
    pub fn new(params: WishartParams) -> Self {
        let precision = Precision::for_params(&params);
        let n = params.n();
        let heads = (1..=n)
            .map(|i| {
                enumerate_permutations(n, i)
                    .expect("split within 1..=n")
                    .head_masks()
                    .map(|mask| mask[1..].to_vec())
                    .collect()
            })
            .collect();
        WishartModel {
            params,
            heads,
            precision,
            cache: Mutex::new(HashMap::new()),
        }
    }

    pub fn from_correlation(r: &CorrelationMatrix, b: usize) -> Result<Self> {
        Ok(Self::new(WishartParams::from_correlation(r, b)?))
    }

    pub fn with_precision(mut self, precision: Precision) -> Self {
        self.precision = precision;
        self
    }

    pub fn params(&self) -> &WishartParams {
        &self.params
    }

    pub fn precision(&self) -> Precision {
        self.precision
    }

    /// Upper integration limit `σ_1 (b + 10√b + 40)`.
    pub fn x_max(&self) -> f64 {
        let b = self.params.b as f64;
        self.params.sigma[0] * (b + 10.0 * b.sqrt() + 40.0)
    }

    pub fn terms(&self, x: f64) -> Result<OrderTerms> {
        self.terms_upto(x, self.params.n())
    }

    /// Order terms for `i = 1..=upto` only (the multiprecision path always
    /// computes and caches all of them).
    fn terms_upto(&self, x: f64, upto: usize) -> Result<OrderTerms> {
        check_x(x)?;
        match self.precision {
            Precision::Double => Ok(evaluate(&F64Arith, &self.params, &self.heads[..upto], x)),
            Precision::Multi(bits) => {
                let key = x.to_bits();
                if let Some(t) = self.cache.lock().expect("cache lock").get(&key) {
                    return Ok(t.clone());
                }
                let t = evaluate_interpolated(&MpArith::new(bits), &self.params, x);
                let mut cache = self.cache.lock().expect("cache lock");
                if cache.len() >= CACHE_LIMIT {
                    cache.clear();
                }
                cache.insert(key, t.clone());
                Ok(t)
            }
        }
    }

    fn check_k(&self, k: usize) -> Result<()> {
        let n = self.params.n();
        if k == 0 || k > n {
            return Err(Error::Domain(format!(
                "eigenvalue index {k} outside 1..={n}"
            )));
        }
        Ok(())
    }

    pub fn pdf(&self, k: usize, x: f64) -> Result<f64> {
        self.check_k(k)?;
        clamp_pdf(self.terms(x)?.pdf(k))
    }

    pub fn cdf(&self, k: usize, x: f64) -> Result<f64> {
        self.check_k(k)?;
        let v = self.terms(x)?.cdf(k);
        if !(-NEGATIVE_TOL..=1.0 + NEGATIVE_TOL).contains(&v) {
            return Err(Error::Integrity(format!(
                "cdf value {v:e} outside [0, 1] at x = {x}"
            )));
        }
        Ok(v.clamp(0.0, 1.0))
    }

    /// Graded breakpoints: `0`, then doubling from `10⁻³ σ_a` up to
    /// [`x_max`](Self::x_max), so narrow densities of weak eigenvalues are
    /// resolved as well as the long tail of strong ones.
    pub fn breakpoints(&self) -> Vec<f64> {
        let x_max = self.x_max();
        let mut breaks = vec![0.0];
        let mut x = 1e-3 * self.params.sigma[self.params.a - 1];
        while x < x_max {
            breaks.push(x);
            x *= 2.0;
        }
        breaks.push(x_max);
        breaks
    }

    /// `∫ g(x) · Σ_{k∈ks} f_k(x) dx`, rejecting negative densities on the way.
    fn integrate_weighted(
        &self,
        ks: &[usize],
        g: impl Fn(f64) -> f64,
        quad: &QuadratureSpec,
    ) -> Result<f64> {
        let upto = ks.iter().copied().max().unwrap_or(1);
        let failure: Mutex<Option<Error>> = Mutex::new(None);
        let integrand = |x: f64| -> f64 {
            let terms = match self.terms_upto(x, upto) {
                Ok(t) => t,
                Err(e) => {
                    failure.lock().expect("error slot").get_or_insert(e);
                    return 0.0;
                }
            };
            let mut total = 0.0;
            for &k in ks {
                let f = terms.pdf(k);
                if f < -NEGATIVE_TOL {
                    failure
                        .lock()
                        .expect("error slot")
                        .get_or_insert(Error::Integrity(format!(
                            "density {f:e} < 0 for k = {k} at x = {x}"
                        )));
                }
                total += f;
            }
            total * g(x)
        };
        let value = match quad.transform {
            Transform::Truncate(None) => integrate_piecewise(integrand, &self.breakpoints(), quad),
            _ => integrate_semi_infinite(integrand, quad),
        };
        if let Some(e) = failure.into_inner().expect("error slot") {
            return Err(e);
        }
        value
    }

    /// `E[g(λ_k)] = ∫ g(x) f_k(x) dx`.
    pub fn expectation(
        &self,
        k: usize,
        g: impl Fn(f64) -> f64,
        quad: &QuadratureSpec,
    ) -> Result<f64> {
        self.check_k(k)?;
        self.integrate_weighted(&[k], g, quad)
    }

    pub fn mean(&self, k: usize, quad: &QuadratureSpec) -> Result<f64> {
        self.expectation(k, |x| x, quad)
    }

    /// `Σ_{k=1}^{η} ∫ log2(1 + ρx) f_k(x) dx`.
    pub fn capacity(&self, rho: f64, eta: usize, quad: &QuadratureSpec) -> Result<f64> {
        self.check_k(eta)?;
        if !(rho > 0.0 && rho.is_finite()) {
            return Err(Error::Domain(format!("rho = {rho} must be positive")));
        }
        let ks: Vec<usize> = (1..=eta).collect();
        self.integrate_weighted(&ks, |x| (rho * x).ln_1p() / std::f64::consts::LN_2, quad)
    }
}

fn clamp_pdf(v: f64) -> Result<f64> {
    if v < -NEGATIVE_TOL || v.is_nan() {
        return Err(Error::Integrity(format!("density value {v:e} is negative")));
    }
    Ok(v.max(0.0))
}

/// All order terms at `x`, using regularized gamma functions so that the
/// factorials of `K` cancel column by column:
/// `F = Σ det[G, Ψ̃] / ∏_{i<j}(σ_j - σ_i)`.
/// Matrix entries at one `x`: rows are indexed by `u = 1..=a`.
struct Entries<T> {
    /// `[G]_{u,j} = σ_u^{j-1}`.
    g: Vec<Vec<T>>,
    upper: Vec<Vec<T>>,
    lower: Vec<Vec<T>>,
    /// `d/dx` of the lower entries (the negated derivative of the upper ones).
    dens: Vec<Vec<T>>,
    /// `∏_{i<j≤a}(σ_j - σ_i)`, the determinant of `[σ_u^{j-1}]_{a×a}`.
    vandermonde: T,
}

fn entries<A: Arith>(ar: &A, params: &WishartParams, x: f64) -> Entries<A::T> {
    let (a, b, n) = (params.a, params.b, params.n());
    let g_cols = a - n;
    let sigma: Vec<A::T> = params.sigma.iter().map(|&s| ar.num(s)).collect();
    let xv = ar.num(x);

    let mut g = Vec::with_capacity(a);
    let mut upper = Vec::with_capacity(a);
    let mut lower = Vec::with_capacity(a);
    let mut dens = Vec::with_capacity(a);
    for s in &sigma {
        let y = ar.div(&xv, s);
        // w_k = e^{-y} y^k / k!
        let mut w = ar.exp(&ar.neg(&y));
        let mut partial = ar.num(0.0);
        let mut w_at = Vec::with_capacity(b);
        let mut sum_below = Vec::with_capacity(b + 1);
        sum_below.push(partial.clone());
        for k in 0..b {
            w_at.push(w.clone());
            partial = ar.add(&partial, &w);
            sum_below.push(partial.clone());
            w = ar.div(&ar.mul(&w, &y), &ar.num((k + 1) as f64));
        }
        // Below y = b + 1 the lower entries are summed from the tail series
        // rather than as a difference, which would cancel as y → 0.
        let tail_above = (ar.to_f64(&y) < (b + 1) as f64).then(|| {
            let mut tail = ar.num(0.0);
            let mut k = b;
            loop {
                tail = ar.add(&tail, &w);
                if ar.to_f64(&w) <= ar.to_f64(&tail) * ar.unit_roundoff() {
                    break;
                }
                k += 1;
                w = ar.div(&ar.mul(&w, &y), &ar.num(k as f64));
            }
            // tail_from[k] = Σ_{j≥k} w_j for k = 0..=b
            let mut tail_from = vec![tail; b + 1];
            for k in (0..b).rev() {
                tail_from[k] = ar.add(&tail_from[k + 1], &w_at[k]);
            }
            tail_from
        });
        g.push(
            (0..g_cols)
                .map(|j| ar.powi(s, j as i32))
                .collect::<Vec<_>>(),
        );
        let (mut up, mut lo, mut de) = (
            Vec::with_capacity(n),
            Vec::with_capacity(n),
            Vec::with_capacity(n),
        );
        for c in 1..=n {
            let order = b - n + c;
            let scale = ar.powi(s, (a - n + c - 1) as i32);
            let q = ar.mul(&scale, &sum_below[order]);
            lo.push(match &tail_above {
                Some(tail_from) => ar.mul(&scale, &tail_from[order]),
                None => ar.sub(&scale, &q),
            });
            up.push(q);
            let d_scale = ar.powi(s, (a - n + c) as i32 - 2);
            de.push(ar.mul(&d_scale, &w_at[order - 1]));
        }
        upper.push(up);
        lower.push(lo);
        dens.push(de);
    }
    let mut vandermonde = ar.num(1.0);
    for i in 0..a {
        for j in i + 1..a {
            vandermonde = ar.mul(&vandermonde, &ar.sub(&sigma[j], &sigma[i]));
        }
    }
    Entries {
        g,
        upper,
        lower,
        dens,
        vandermonde,
    }
}

/// Row `u` of `[G, col_1, …, col_n]`.
fn assemble<T: Clone>(e: &Entries<T>, u: usize, col: impl Fn(usize) -> T) -> Vec<T> {
    let mut row = e.g[u].clone();
    row.extend((0..e.upper[u].len()).map(col));
    row
}

/// Sums determinants over every head mask: `p_i` over subsets of size
/// `i - 1`, and the column-wise derivative for `q_i`.
fn evaluate<A: Arith>(
    ar: &A,
    params: &WishartParams,
    heads: &[Vec<Vec<bool>>],
    x: f64,
) -> OrderTerms {
    let (a, n) = (params.a, params.n());
    let g_cols = a - n;
    let e = entries(ar, params, x);
    let mut exceed = Vec::with_capacity(heads.len());
    let mut density = Vec::with_capacity(heads.len());
    for masks in heads {
        let mut p = ar.num(0.0);
        let mut q = ar.num(0.0);
        for mask in masks {
            let base: Vec<Vec<A::T>> = (0..a)
                .map(|u| {
                    assemble(&e, u, |c| {
                        if mask[c] {
                            e.upper[u][c].clone()
                        } else {
                            e.lower[u][c].clone()
                        }
                    })
                })
                .collect();
            for c in 0..n {
                let mut m = base.clone();
                for u in 0..a {
                    m[u][g_cols + c] = if mask[c] {
                        ar.neg(&e.dens[u][c])
                    } else {
                        e.dens[u][c].clone()
                    };
                }
                q = ar.add(&q, &ar.det(m));
            }
            p = ar.add(&p, &ar.det(base));
        }
        exceed.push(ar.to_f64(&ar.div(&p, &e.vandermonde)));
        density.push(ar.to_f64(&ar.div(&q, &e.vandermonde)));
    }
    OrderTerms { exceed, density }
}

/// Same result as [`evaluate`] for all `i = 1..=n`, from far fewer
/// determinants. By multilinearity `A(t) = det[G, lower + t·upper]` has
/// `p_i` as its `t^{i-1}` coefficient, and with `E(t)` the sum over `c` of
/// `A(t)` with column `c` replaced by the derivative entries, `q_i` is the
/// `t^{i-1}` coefficient of `(1 - t) E(t)`. Both polynomials are recovered by
/// interpolation at `t = 0, 1, …, n`, which costs a few bits that the caller
/// must budget for.
fn evaluate_interpolated<A: Arith>(ar: &A, params: &WishartParams, x: f64) -> OrderTerms {
    let (a, n) = (params.a, params.n());
    let g_cols = a - n;
    let e = entries(ar, params, x);
    let mut a_values = Vec::with_capacity(n + 1);
    let mut e_values = Vec::with_capacity(n);
    for j in 0..=n {
        let t = ar.num(j as f64);
        let base: Vec<Vec<A::T>> = (0..a)
            .map(|u| {
                assemble(&e, u, |c| {
                    ar.add(&e.lower[u][c], &ar.mul(&t, &e.upper[u][c]))
                })
            })
            .collect();
        if j < n {
            let mut sum = ar.num(0.0);
            for c in 0..n {
                let mut m = base.clone();
                for u in 0..a {
                    m[u][g_cols + c] = e.dens[u][c].clone();
                }
                sum = ar.add(&sum, &ar.det(m));
            }
            e_values.push(sum);
        }
        a_values.push(ar.det(base));
    }
    let a_coef = monomial_coefficients(ar, a_values);
    let e_coef = monomial_coefficients(ar, e_values);
    let exceed = (0..n)
        .map(|i| ar.to_f64(&ar.div(&a_coef[i], &e.vandermonde)))
        .collect();
    let density = (0..n)
        .map(|i| {
            let q = if i == 0 {
                e_coef[0].clone()
            } else {
                ar.sub(&e_coef[i], &e_coef[i - 1])
            };
            ar.to_f64(&ar.div(&q, &e.vandermonde))
        })
        .collect();
    OrderTerms { exceed, density }
}

/// Monomial coefficients of the polynomial through `(j, values[j])`,
/// `j = 0..len`, via Newton divided differences.
fn monomial_coefficients<A: Arith>(ar: &A, mut values: Vec<A::T>) -> Vec<A::T> {
    let len = values.len();
    for j in 1..len {
        for i in (j..len).rev() {
            values[i] = ar.div(&ar.sub(&values[i], &values[i - 1]), &ar.num(j as f64));
        }
    }
    // expand c_0 + t(c_1 + (t - 1)(c_2 + …)) from the innermost factor out
    let mut poly = vec![values[len - 1].clone()];
    for i in (0..len - 1).rev() {
        let shift = ar.num(i as f64);
        let mut next = vec![ar.num(0.0); poly.len() + 1];
        for (k, c) in poly.iter().enumerate() {
            next[k + 1] = ar.add(&next[k + 1], c);
            next[k] = ar.sub(&next[k], &ar.mul(&shift, c));
        }
        next[0] = ar.add(&next[0], &values[i]);
        poly = next;
    }
    poly
}

/// The `k`-th largest eigenvalue of one Wishart law.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenvalueDensity {
    pub params: WishartParams,
    pub k: usize,
}

impl EigenvalueDensity {
    pub fn new(params: WishartParams, k: usize) -> Result<Self> {
        if k == 0 || k > params.n() {
            return Err(Error::Domain(format!(
                "eigenvalue index {k} outside 1..={}",
                params.n()
            )));
        }
        Ok(EigenvalueDensity { params, k })
    }
}

pub fn eigenvalue_pdf(density: &EigenvalueDensity, x: f64) -> Result<f64> {
    WishartModel::new(density.params.clone()).pdf(density.k, x)
}

pub fn eigenvalue_cdf(density: &EigenvalueDensity, x: f64) -> Result<f64> {
    WishartModel::new(density.params.clone()).cdf(density.k, x)
}

/// Sum of the ergodic capacities of the `eta` strongest eigenchannels of
/// `R^{1/2} X` with `X` of width `b`.
pub fn eigenchannel_capacity(
    r: &CorrelationMatrix,
    b: usize,
    rho: f64,
    eta: usize,
    quad: &QuadratureSpec,
) -> Result<f64> {
    WishartModel::from_correlation(r, b)?.capacity(rho, eta, quad)
}

/// `(x, f_k(x))` pairs on a uniform grid over `[0, x_hi]`.
pub fn pdf_table(
    model: &WishartModel,
    k: usize,
    x_hi: f64,
    points: usize,
) -> Result<Vec<(f64, f64)>> {
    if points < 2 || !(x_hi > 0.0) {
        return Err(Error::Domain(
            "pdf table needs >= 2 points and a positive range".into(),
        ));
    }
    (0..points)
        .map(|i| {
            let x = x_hi * i as f64 / (points - 1) as f64;
            Ok((x, model.pdf(k, x)?))
        })
        .collect()
}
