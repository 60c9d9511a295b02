//! Pointwise evaluation of canonical forms in the exterior algebra over an
//! arbitrary field of scalars.

use super::{shuffle_sign, FormSpec};
use crate::error::{Error, Result};
use crate::poly::LinearFormMatrix;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::collections::HashMap;
use std::ops::{Add, Mul, Neg, Sub};

/// Field operations needed by the numeric exterior algebra.
pub trait Scalar: Clone + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> + Neg<Output = Self> {
    fn zero() -> Self;
    fn one() -> Self;
    fn from_i128(v: i128) -> Self;
    fn inv(&self) -> Option<Self>;
    fn magnitude(&self) -> f64;
}

impl Scalar for f64 {
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn from_i128(v: i128) -> Self {
        v as f64
    }
    fn inv(&self) -> Option<Self> {
        (*self != 0.0 && self.is_finite()).then(|| 1.0 / self)
    }
    fn magnitude(&self) -> f64 {
        self.abs()
    }
}

impl Scalar for BigRational {
    fn zero() -> Self {
        <BigRational as Zero>::zero()
    }
    fn one() -> Self {
        <BigRational as One>::one()
    }
    fn from_i128(v: i128) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }
    fn inv(&self) -> Option<Self> {
        (!Zero::is_zero(self)).then(|| self.recip())
    }
    fn magnitude(&self) -> f64 {
        use num_traits::ToPrimitive;
        self.abs().to_f64().unwrap_or(f64::INFINITY)
    }
}

type Mat<S> = Vec<Vec<S>>;

fn mat_mul<S: Scalar>(a: &Mat<S>, b: &Mat<S>) -> Mat<S> {
    let n = a.len();
    let mut c = vec![vec![S::zero(); n]; n];
    for i in 0..n {
        for k in 0..n {
            let aik = a[i][k].clone();
            if aik.magnitude() == 0.0 {
                continue;
            }
            for j in 0..n {
                c[i][j] = c[i][j].clone() + aik.clone() * b[k][j].clone();
            }
        }
    }
    c
}

fn invert<S: Scalar>(a: &Mat<S>) -> Option<Mat<S>> {
    let n = a.len();
    let mut m: Mat<S> = a.clone();
    let mut inv: Mat<S> = (0..n).map(|i| (0..n).map(|j| if i == j { S::one() } else { S::zero() }).collect()).collect();
    for c in 0..n {
        let p = (c..n).max_by(|&x, &y| m[x][c].magnitude().total_cmp(&m[y][c].magnitude()))?;
        let pivot_inv = m[p][c].inv()?;
        m.swap(p, c);
        inv.swap(p, c);
        for j in 0..n {
            m[c][j] = m[c][j].clone() * pivot_inv.clone();
            inv[c][j] = inv[c][j].clone() * pivot_inv.clone();
        }
        for r in 0..n {
            if r == c || m[r][c].magnitude() == 0.0 {
                continue;
            }
            let f = m[r][c].clone();
            for j in 0..n {
                m[r][j] = m[r][j].clone() - f.clone() * m[c][j].clone();
                inv[r][j] = inv[r][j].clone() - f.clone() * inv[c][j].clone();
            }
        }
    }
    Some(inv)
}

/// Coefficients of `omega^n` on every `n`-subset of the given local
/// one-form matrices `a[j] = X^{-1} dX/dx_j`.
fn power_coefficients<S: Scalar>(a: &[Mat<S>], n: usize) -> HashMap<u32, S> {
    let mut level: HashMap<u32, Mat<S>> = a.iter().enumerate().map(|(j, m)| (1u32 << j, m.clone())).collect();
    for _ in 1..n {
        let mut next: HashMap<u32, Mat<S>> = HashMap::new();
        for (&set, g) in &level {
            for (j, aj) in a.iter().enumerate() {
                if set >> j & 1 == 1 {
                    continue;
                }
                let mut prod = mat_mul(g, aj);
                if (set >> (j + 1)).count_ones() % 2 == 1 {
                    prod = prod.into_iter().map(|r| r.into_iter().map(|x| -x).collect()).collect();
                }
                match next.get_mut(&(set | 1 << j)) {
                    Some(acc) => {
                        for (ra, rp) in acc.iter_mut().zip(prod) {
                            for (x, y) in ra.iter_mut().zip(rp) {
                                *x = x.clone() + y;
                            }
                        }
                    }
                    None => {
                        next.insert(set | 1 << j, prod);
                    }
                }
            }
        }
        level = next;
    }
    level
        .into_iter()
        .map(|(set, g)| {
            let tr = (0..g.len()).fold(S::zero(), |acc, i| acc + g[i][i].clone());
            (set, tr)
        })
        .collect()
}

fn wedge_coefficients<S: Scalar>(a: &[Mat<S>], degrees: &[usize]) -> HashMap<u32, S> {
    let mut acc: Option<HashMap<u32, S>> = None;
    for &n in degrees {
        let p = power_coefficients(a, n);
        acc = Some(match acc {
            None => p,
            Some(w) => {
                let mut out: HashMap<u32, S> = HashMap::new();
                for (&sa, va) in &w {
                    for (&sb, vb) in &p {
                        if sa & sb != 0 {
                            continue;
                        }
                        let mut t = va.clone() * vb.clone();
                        if shuffle_sign(sa, sb) < 0 {
                            t = -t;
                        }
                        let e = out.entry(sa | sb).or_insert_with(S::zero);
                        *e = e.clone() + t;
                    }
                }
                out
            }
        });
    }
    acc.unwrap_or_default()
}

/// All coefficients of `omega^{n_1} ^ ...` at a point, keyed by bitmasks
/// over the variables of `x`; `chart` variables are held fixed.
pub fn canonical_form_coefficients<S: Scalar>(
    x: &LinearFormMatrix,
    degrees: &[usize],
    point: &[S],
    fixed: &[usize],
) -> Result<HashMap<u32, S>> {
    let nv = x.n_vars();
    if point.len() != nv {
        return Err(Error::Dimension(format!("point has {} coordinates for {} variables", point.len(), nv)));
    }
    let m = x.size();
    let xm: Mat<S> = (0..m)
        .map(|i| {
            (0..m)
                .map(|j| {
                    x.entry(i, j).terms().fold(S::zero(), |acc, (mono, c)| {
                        let mut t = S::from_i128(c);
                        for (v, pv) in point.iter().enumerate() {
                            for _ in 0..crate::poly::mono_exp(mono, v) {
                                t = t * pv.clone();
                            }
                        }
                        acc + t
                    })
                })
                .collect()
        })
        .collect();
    let inv = invert(&xm).ok_or(Error::SingularPoint)?;
    let active: Vec<usize> = (0..nv).filter(|v| !fixed.contains(v)).collect();
    let a: Vec<Mat<S>> = active
        .iter()
        .map(|&j| {
            let d: Mat<S> = x.derivative_matrix(j).into_iter().map(|r| r.into_iter().map(S::from_i128).collect()).collect();
            mat_mul(&inv, &d)
        })
        .collect();
    let local = wedge_coefficients(&a, degrees);
    Ok(local
        .into_iter()
        .map(|(set, v)| {
            let global = (0..active.len()).filter(|&i| set >> i & 1 == 1).fold(0u32, |acc, i| acc | 1 << active[i]);
            (global, v)
        })
        .collect())
}

fn chart_point<S: Scalar>(nv: usize, point: &[S]) -> Result<Vec<S>> {
    match point.len() {
        l if l + 1 == nv => {
            let mut p = point.to_vec();
            p.push(S::one());
            Ok(p)
        }
        l if l == nv => Ok(point.to_vec()),
        l => Err(Error::Dimension(format!("point has {l} coordinates for {nv} variables"))),
    }
}

fn chart_coefficient<S: Scalar>(x: &LinearFormMatrix, spec: &FormSpec, point: &[S]) -> Result<S> {
    let nv = x.n_vars();
    if nv == 0 || spec.degree() != nv - 1 {
        return Err(Error::DegreeMismatch(format!("form of degree {} on {} variables", spec.degree(), nv)));
    }
    let p = chart_point(nv, point)?;
    let coeffs = canonical_form_coefficients(x, spec.degrees(), &p, &[nv - 1])?;
    let top = (1u32 << (nv - 1)) - 1;
    Ok(coeffs.get(&top).cloned().unwrap_or_else(S::zero))
}

/// Coefficient of `dx_1 ^ ... ^ dx_{N-1}` of the form in the chart where the
/// last variable is fixed. `point` lists either the first `N-1` coordinates
/// (the last is then 1) or all `N`.
pub fn canonical_form_numeric(x: &LinearFormMatrix, spec: &FormSpec, point: &[f64]) -> Result<f64> {
    chart_coefficient(x, spec, point)
}

/// Exact rational version of [`canonical_form_numeric`].
pub fn canonical_form_numeric_exact(x: &LinearFormMatrix, spec: &FormSpec, point: &[BigRational]) -> Result<BigRational> {
    chart_coefficient(x, spec, point)
}
