//! Scalar back-ends for determinant sums that may need more than 53 bits.

use std::cell::RefCell;

use astro_float::{BigFloat, Consts, RoundingMode, Sign, Word};

/// The few operations the eigenvalue evaluator needs, over either `f64` or a
/// multiprecision float.
pub(crate) trait Arith {
    type T: Clone;
    fn num(&self, x: f64) -> Self::T;
    fn add(&self, a: &Self::T, b: &Self::T) -> Self::T;
    fn sub(&self, a: &Self::T, b: &Self::T) -> Self::T;
    fn mul(&self, a: &Self::T, b: &Self::T) -> Self::T;
    fn div(&self, a: &Self::T, b: &Self::T) -> Self::T;
    fn exp(&self, a: &Self::T) -> Self::T;
    fn to_f64(&self, a: &Self::T) -> f64;
    /// Relative spacing of representable numbers near 1.
    fn unit_roundoff(&self) -> f64;

    fn neg(&self, a: &Self::T) -> Self::T {
        self.sub(&self.num(0.0), a)
    }

    /// `a^k` for any integer `k`.
    fn powi(&self, a: &Self::T, k: i32) -> Self::T {
        let mut acc = self.num(1.0);
        for _ in 0..k.unsigned_abs() {
            acc = self.mul(&acc, a);
        }
        if k < 0 {
            self.div(&self.num(1.0), &acc)
        } else {
            acc
        }
    }

    /// Determinant by Gaussian elimination with partial pivoting; `m` is
    /// row-major and consumed.
    fn det(&self, mut m: Vec<Vec<Self::T>>) -> Self::T {
        let n = m.len();
        let mut det = self.num(1.0);
        for col in 0..n {
            let pivot = (col..n)
                .max_by(|&i, &j| {
                    self.to_f64(&m[i][col])
                        .abs()
                        .total_cmp(&self.to_f64(&m[j][col]).abs())
                })
                .unwrap();
            if self.to_f64(&m[pivot][col]) == 0.0 {
                return self.num(0.0);
            }
            if pivot != col {
                m.swap(pivot, col);
                det = self.neg(&det);
            }
            det = self.mul(&det, &m[col][col]);
            for row in col + 1..n {
                let factor = self.div(&m[row][col], &m[col][col]);
                for c in col + 1..n {
                    let t = self.mul(&factor, &m[col][c]);
                    m[row][c] = self.sub(&m[row][c], &t);
                }
            }
        }
        det
    }
}

pub(crate) struct F64Arith;

impl Arith for F64Arith {
    type T = f64;
    fn unit_roundoff(&self) -> f64 {
        f64::EPSILON / 2.0
    }
    fn num(&self, x: f64) -> f64 {
        x
    }
    fn add(&self, a: &f64, b: &f64) -> f64 {
        a + b
    }
    fn sub(&self, a: &f64, b: &f64) -> f64 {
        a - b
    }
    fn mul(&self, a: &f64, b: &f64) -> f64 {
        a * b
    }
    fn div(&self, a: &f64, b: &f64) -> f64 {
        a / b
    }
    fn exp(&self, a: &f64) -> f64 {
        a.exp()
    }
    fn to_f64(&self, a: &f64) -> f64 {
        *a
    }
}

/// Binary floating point with `bits` of mantissa.
pub(crate) struct MpArith {
    bits: usize,
}

const RM: RoundingMode = RoundingMode::ToEven;

thread_local! {
    static CONSTS: RefCell<Consts> = RefCell::new(Consts::new().expect("constant cache"));
}

impl MpArith {
    pub(crate) fn new(bits: usize) -> Self {
        MpArith { bits }
    }
}

impl Arith for MpArith {
    type T = BigFloat;
    fn unit_roundoff(&self) -> f64 {
        (-(self.bits as f64)).exp2().max(1e-300)
    }
    fn num(&self, x: f64) -> BigFloat {
        BigFloat::from_f64(x, self.bits)
    }
    fn add(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.add(b, self.bits, RM)
    }
    fn sub(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.sub(b, self.bits, RM)
    }
    fn mul(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.mul(b, self.bits, RM)
    }
    fn div(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.div(b, self.bits, RM)
    }
    fn exp(&self, a: &BigFloat) -> BigFloat {
        CONSTS.with(|cc| a.exp(self.bits, RM, &mut cc.borrow_mut()))
    }
    fn to_f64(&self, a: &BigFloat) -> f64 {
        big_to_f64(a)
    }
}

fn big_to_f64(a: &BigFloat) -> f64 {
    if a.is_nan() {
        return f64::NAN;
    }
    if a.is_inf_pos() {
        return f64::INFINITY;
    }
    if a.is_inf_neg() {
        return f64::NEG_INFINITY;
    }
    let Some((words, _, sign, exponent, _)) = a.as_raw_parts() else {
        return f64::NAN;
    };
    let word_bits = (std::mem::size_of::<Word>() * 8) as i32;
    // most significant words come last; two or three are enough for 53 bits
    let take = words.len().min((128 / word_bits as usize).max(2));
    let mut mantissa = 0.0f64;
    for &w in words.iter().rev().take(take) {
        mantissa = mantissa * 2f64.powi(word_bits) + w as f64;
    }
    if mantissa == 0.0 {
        return 0.0;
    }
    // value = 0.m × 2^exponent, with m spanning `take` words
    let shift = exponent - word_bits * take as i32;
    let v = scale_pow2(mantissa, shift);
    if sign == Sign::Neg {
        -v
    } else {
        v
    }
}

/// `x · 2^k` without intermediate overflow.
fn scale_pow2(mut x: f64, mut k: i32) -> f64 {
    while k > 1000 {
        x *= 2f64.powi(1000);
        k -= 1000;
    }
    while k < -1000 {
        x *= 2f64.powi(-1000);
        k += 1000;
    }
    x * 2f64.powi(k)
}
