//! Reference constants as rational approximations with error far below
//! `1e-40`: Riemann zeta values, double zeta values and pi.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::sync::OnceLock;

const CUTOFF: u64 = 30;
const TERMS: usize = 26;

fn int(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

fn inv_pow(n: u64, s: u32) -> BigRational {
    BigRational::new(BigInt::one(), num_traits::pow(BigInt::from(n), s as usize))
}

/// `B_0, B_1, ..., B_{2 TERMS}` with `B_1 = -1/2`.
fn bernoulli() -> &'static [BigRational] {
    static CELL: OnceLock<Vec<BigRational>> = OnceLock::new();
    CELL.get_or_init(|| {
        let n = 2 * TERMS + 1;
        let mut b = vec![BigRational::zero(); n];
        b[0] = BigRational::one();
        for m in 1..n {
            let mut acc = BigRational::zero();
            let mut binom = BigInt::one();
            for k in 0..m {
                acc += BigRational::from_integer(binom.clone()) * b[k].clone();
                binom = binom * BigInt::from((m + 1 - k) as u64) / BigInt::from((k + 1) as u64);
            }
            b[m] = -acc / int(m as i64 + 1);
        }
        b
    })
}

fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

/// `sum_{n >= start} n^{-s}` for real exponent `s > 1` given as an integer,
/// by Euler-Maclaurin at the starting point.
fn tail_sum(start: u64, s: u32) -> BigRational {
    let b = bernoulli();
    let mut total = inv_pow(start, s - 1) / int(s as i64 - 1);
    total += inv_pow(start, s) / int(2);
    // rising factorial s (s+1) ... (s+2k-2)
    let mut rising = BigInt::from(s);
    for k in 1..=TERMS {
        if k > 1 {
            rising *= BigInt::from(s as u64 + 2 * k as u64 - 3) * BigInt::from(s as u64 + 2 * k as u64 - 2);
        }
        let term = b[2 * k].clone() / BigRational::from_integer(factorial(2 * k as u64))
            * BigRational::from_integer(rising.clone())
            * inv_pow(start, s + 2 * k as u32 - 1);
        total += term;
    }
    total
}

/// Rational approximation of `zeta(s)` for `s >= 2`.
pub fn zeta_rational(s: u32) -> BigRational {
    assert!(s >= 2, "zeta(s) needs s >= 2");
    let mut total = BigRational::zero();
    for n in 1..CUTOFF {
        total += inv_pow(n, s);
    }
    total + tail_sum(CUTOFF, s)
}

pub fn zeta(s: u32) -> f64 {
    zeta_rational(s).to_f64().unwrap_or(f64::NAN)
}

/// Rational approximation of `zeta(a, b) = sum_{m > n >= 1} m^{-a} n^{-b}`
/// for `a >= 2`, `b >= 1`.
pub fn zeta2_rational(a: u32, b: u32) -> BigRational {
    assert!(a >= 2 && b >= 1, "zeta2(a, b) needs a >= 2 and b >= 1");
    let za = zeta_rational(a);
    let mut partial = BigRational::zero();
    let mut total = BigRational::zero();
    for n in 1..CUTOFF {
        partial += inv_pow(n, a);
        total += inv_pow(n, b) * (za.clone() - partial.clone());
    }
    // sum_{n >= CUTOFF} n^{-b} sum_{m > n} m^{-a}, with the inner tail
    // expanded asymptotically: T(n) = n^{1-a}/(a-1) - n^{-a}/2 + sum_k c_k n^{-a-2k+1}
    let bern = bernoulli();
    total += tail_sum(CUTOFF, a + b - 1) / int(a as i64 - 1);
    total -= tail_sum(CUTOFF, a + b) / int(2);
    let mut rising = BigInt::from(a);
    for k in 1..=TERMS / 2 {
        if k > 1 {
            rising *= BigInt::from(a as u64 + 2 * k as u64 - 3) * BigInt::from(a as u64 + 2 * k as u64 - 2);
        }
        let c = bern[2 * k].clone() / BigRational::from_integer(factorial(2 * k as u64)) * BigRational::from_integer(rising.clone());
        total += c * tail_sum(CUTOFF, a + b + 2 * k as u32 - 1);
    }
    total
}

pub fn zeta2(a: u32, b: u32) -> f64 {
    zeta2_rational(a, b).to_f64().unwrap_or(f64::NAN)
}

fn arctan_inv(x: u64, digits: usize) -> BigRational {
    let eps = BigRational::new(BigInt::one(), num_traits::pow(BigInt::from(10), digits));
    let x2 = BigInt::from(x) * BigInt::from(x);
    let mut power = BigRational::new(BigInt::one(), BigInt::from(x));
    let mut total = BigRational::zero();
    let mut k = 0i64;
    while power.abs() > eps {
        let term = power.clone() / int(2 * k + 1);
        if k % 2 == 0 {
            total += term;
        } else {
            total -= term;
        }
        power /= BigRational::from_integer(x2.clone());
        k += 1;
    }
    total
}

/// Rational approximation of pi by Machin's formula.
pub fn pi_rational() -> BigRational {
    static CELL: OnceLock<BigRational> = OnceLock::new();
    CELL.get_or_init(|| int(16) * arctan_inv(5, 60) - int(4) * arctan_inv(239, 60)).clone()
}

/// Decimal expansion of `x` truncated to `digits` places.
pub fn to_decimal(x: &BigRational, digits: usize) -> String {
    let scale = num_traits::pow(BigInt::from(10), digits);
    let scaled = (x.abs() * BigRational::from_integer(scale.clone())).round().to_integer();
    let (int_part, frac) = scaled.div_rem(&scale);
    let sign = if x.is_negative() { "-" } else { "" };
    format!("{sign}{int_part}.{:0>width$}", frac.to_string(), width = digits)
}
