//! Exact integer polynomials in up to 16 variables, matrices of linear
//! forms, and graph polynomials.

mod graph_poly;
mod matrix;

pub use graph_poly::{contraction_deletion_split, cycle_basis, divergent_subgraphs, graph_polynomial, laplacian, CycleBasis};
pub(crate) use matrix::det_rational;
pub use matrix::{det_poly, LinearFormMatrix};

use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use std::collections::BTreeMap;
use std::fmt;

/// Maximum number of variables of a [`Poly`].
pub const MAX_VARS: usize = 16;

/// Exponent vector packed one byte per variable, variable 0 in the most
/// significant byte so that integer order is lexicographic order.
pub type Monomial = u128;

fn shift(i: usize) -> u32 {
    8 * (MAX_VARS - 1 - i) as u32
}

pub fn mono_var(i: usize) -> Monomial {
    1u128 << shift(i)
}

pub fn mono_exp(m: Monomial, i: usize) -> u32 {
    ((m >> shift(i)) & 0xff) as u32
}

pub fn mono_degree(m: Monomial) -> u32 {
    m.to_be_bytes().iter().map(|&b| b as u32).sum()
}

fn mono_divides(d: Monomial, m: Monomial) -> bool {
    let (a, b) = (d.to_be_bytes(), m.to_be_bytes());
    a.iter().zip(&b).all(|(x, y)| x <= y)
}

/// Sparse polynomial with `i128` coefficients; the zero polynomial has no
/// terms.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Poly {
    terms: BTreeMap<Monomial, i128>,
}

impl Poly {
    pub fn zero() -> Poly {
        Poly::default()
    }

    pub fn one() -> Poly {
        Poly::constant(1)
    }

    pub fn constant(c: i128) -> Poly {
        let mut p = Poly::zero();
        if c != 0 {
            p.terms.insert(0, c);
        }
        p
    }

    pub fn var(i: usize) -> Poly {
        assert!(i < MAX_VARS, "variable index {i} exceeds {MAX_VARS}");
        Poly::term(mono_var(i), 1)
    }

    pub fn term(m: Monomial, c: i128) -> Poly {
        let mut p = Poly::zero();
        if c != 0 {
            p.terms.insert(m, c);
        }
        p
    }

    /// Multilinear monomial `prod x_i` for `i` in `vars`.
    pub fn product_of(vars: &[usize]) -> Poly {
        Poly::term(vars.iter().map(|&i| mono_var(i)).sum(), 1)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (Monomial, i128)> + '_ {
        self.terms.iter().map(|(&m, &c)| (m, c))
    }

    pub fn coefficient(&self, m: Monomial) -> i128 {
        self.terms.get(&m).copied().unwrap_or(0)
    }

    fn add_term(&mut self, m: Monomial, c: i128) {
        if c == 0 {
            return;
        }
        let e = self.terms.entry(m).or_insert(0);
        *e = e.checked_add(c).expect("polynomial coefficient overflow");
        if *e == 0 {
            self.terms.remove(&m);
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let mut r = self.clone();
        for (m, c) in other.terms() {
            r.add_term(m, c);
        }
        r
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        let mut r = self.clone();
        for (m, c) in other.terms() {
            r.add_term(m, -c);
        }
        r
    }

    pub fn add_assign_scaled(&mut self, other: &Poly, s: i128) {
        for (m, c) in other.terms() {
            self.add_term(m, c.checked_mul(s).expect("polynomial coefficient overflow"));
        }
    }

    pub fn scale(&self, s: i128) -> Poly {
        let mut r = Poly::zero();
        r.add_assign_scaled(self, s);
        r
    }

    pub fn neg(&self) -> Poly {
        self.scale(-1)
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut r = Poly::zero();
        for (m1, c1) in self.terms() {
            for (m2, c2) in other.terms() {
                r.add_term(m1 + m2, c1.checked_mul(c2).expect("polynomial coefficient overflow"));
            }
        }
        r
    }

    pub fn pow(&self, k: u32) -> Poly {
        (0..k).fold(Poly::one(), |acc, _| acc.mul(self))
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|&m| mono_degree(m)).max()
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut ds = self.terms.keys().map(|&m| mono_degree(m));
        match ds.next() {
            None => true,
            Some(d) => ds.all(|x| x == d),
        }
    }

    pub fn is_multilinear(&self) -> bool {
        self.terms.keys().all(|&m| m.to_be_bytes().iter().all(|&b| b <= 1))
    }

    /// One more than the largest variable index occurring.
    pub fn num_vars_used(&self) -> usize {
        (0..MAX_VARS).rev().find(|&i| self.terms.keys().any(|&m| mono_exp(m, i) > 0)).map_or(0, |i| i + 1)
    }

    /// Exact quotient `self / d`, or `None` when `d` does not divide `self`.
    pub fn div_exact(&self, d: &Poly) -> Option<Poly> {
        let (&lm, &lc) = d.terms.iter().next_back()?;
        let mut r = self.clone();
        let mut q = Poly::zero();
        while let Some((&m, &c)) = r.terms.iter().next_back() {
            if !mono_divides(lm, m) || c % lc != 0 {
                return None;
            }
            let (qm, qc) = (m - lm, c / lc);
            for (dm, dc) in d.terms() {
                r.add_term(qm + dm, -qc.checked_mul(dc).expect("polynomial coefficient overflow"));
            }
            q.add_term(qm, qc);
        }
        Some(q)
    }

    /// Partial derivative with respect to variable `i`.
    pub fn derivative(&self, i: usize) -> Poly {
        let mut r = Poly::zero();
        for (m, c) in self.terms() {
            let e = mono_exp(m, i);
            if e > 0 {
                r.add_term(m - mono_var(i), c * e as i128);
            }
        }
        r
    }

    /// Sets variable `i` to zero.
    pub fn restrict_zero(&self, i: usize) -> Poly {
        Poly { terms: self.terms.iter().filter(|(&m, _)| mono_exp(m, i) == 0).map(|(&m, &c)| (m, c)).collect() }
    }

    /// Sets variable `i` to one.
    pub fn restrict_one(&self, i: usize) -> Poly {
        let mut r = Poly::zero();
        for (m, c) in self.terms() {
            let e = mono_exp(m, i) as u128;
            r.add_term(m - e * mono_var(i), c);
        }
        r
    }

    /// Renames variable `i` to `map[i]`.
    pub fn remap_vars(&self, map: &[usize]) -> Poly {
        let mut r = Poly::zero();
        for (m, c) in self.terms() {
            let mut nm: Monomial = 0;
            for (i, &j) in map.iter().enumerate() {
                nm += mono_exp(m, i) as u128 * mono_var(j);
            }
            r.add_term(nm, c);
        }
        r
    }

    pub fn eval_f64(&self, x: &[f64]) -> f64 {
        let mut total = 0.0;
        for (m, c) in self.terms() {
            let mut t = c as f64;
            for (i, &xi) in x.iter().enumerate().take(MAX_VARS) {
                let e = mono_exp(m, i);
                if e > 0 {
                    t *= xi.powi(e as i32);
                }
            }
            total += t;
        }
        total
    }

    pub fn eval_rational(&self, x: &[BigRational]) -> BigRational {
        let mut total = BigRational::zero();
        for (m, c) in self.terms() {
            let mut t = BigRational::from_integer(BigInt::from(c));
            for (i, xi) in x.iter().enumerate().take(MAX_VARS) {
                let e = mono_exp(m, i);
                if e > 0 {
                    t *= num_traits::pow(xi.clone(), e as usize);
                }
            }
            total += t;
        }
        total
    }

    /// Exponent vector of a monomial over `n` variables.
    pub fn exponents(m: Monomial, n: usize) -> Vec<u32> {
        (0..n).map(|i| mono_exp(m, i)).collect()
    }

    /// `(coefficient, 1-based variable ids with multiplicity)` pairs in
    /// lexicographic order of the id lists.
    pub fn to_list(&self) -> Vec<(i128, Vec<usize>)> {
        let mut out: Vec<(i128, Vec<usize>)> = self
            .terms()
            .map(|(m, c)| {
                let ids = (0..MAX_VARS).flat_map(|i| std::iter::repeat(i + 1).take(mono_exp(m, i) as usize)).collect();
                (c, ids)
            })
            .collect();
        out.sort_by(|a, b| a.1.cmp(&b.1));
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(self.to_list().into_iter().map(|(c, ids)| serde_json::json!([c.to_string(), ids])).collect())
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (k, (c, ids)) in self.to_list().into_iter().enumerate() {
            let mut factors: Vec<String> = Vec::new();
            let mut i = 0;
            while i < ids.len() {
                let j = ids[i..].iter().take_while(|&&v| v == ids[i]).count();
                factors.push(if j == 1 { format!("x{}", ids[i]) } else { format!("x{}^{}", ids[i], j) });
                i += j;
            }
            let mag = c.unsigned_abs();
            let body = match (mag, factors.is_empty()) {
                (_, true) => mag.to_string(),
                (1, false) => factors.join("*"),
                _ => format!("{}*{}", mag, factors.join("*")),
            };
            match (k, c < 0) {
                (0, false) => write!(f, "{body}")?,
                (0, true) => write!(f, "-{body}")?,
                (_, false) => write!(f, " + {body}")?,
                (_, true) => write!(f, " - {body}")?,
            }
        }
        Ok(())
    }
}

/// Checks that a polynomial uses at most `n` variables and that `n` fits.
pub(crate) fn check_vars(n: usize) -> Result<()> {
    if n > MAX_VARS {
        Err(Error::TooManyVariables(n, MAX_VARS))
    } else {
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(i: usize) -> Poly {
        Poly::var(i)
    }

    #[test]
    fn arithmetic_and_display() {
        let p = x(0).add(&x(1)).mul(&x(2));
        assert_eq!(p.to_string(), "x1*x3 + x2*x3");
        assert_eq!(p.sub(&p), Poly::zero());
        assert_eq!(x(0).pow(2).scale(-3).to_string(), "-3*x1^2");
        assert!(p.is_homogeneous() && p.is_multilinear());
    }

    #[test]
    fn exact_division() {
        let a = x(0).add(&x(1));
        let b = x(0).sub(&x(2).scale(2));
        let prod = a.mul(&b).mul(&a);
        assert_eq!(prod.div_exact(&a).unwrap(), a.mul(&b));
        assert!(prod.div_exact(&x(3)).is_none());
        assert!(x(0).div_exact(&x(0).add(&Poly::one())).is_none());
    }

    #[test]
    fn restriction_and_remap() {
        let p = x(0).mul(&x(1)).add(&x(2));
        assert_eq!(p.restrict_zero(0), x(2));
        assert_eq!(p.restrict_one(0), x(1).add(&x(2)));
        assert_eq!(p.remap_vars(&[2, 1, 0]), x(2).mul(&x(1)).add(&x(0)));
        assert_eq!(p.derivative(0), x(1));
    }
}
