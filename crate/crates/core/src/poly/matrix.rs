use super::{check_vars, Poly};
use crate::error::{Error, Result};
use num_rational::BigRational;

/// Square matrix whose entries are integer polynomials of degree at most one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearFormMatrix {
    n_vars: usize,
    entries: Vec<Vec<Poly>>,
}

impl LinearFormMatrix {
    pub fn new(entries: Vec<Vec<Poly>>, n_vars: usize) -> Result<LinearFormMatrix> {
        check_vars(n_vars)?;
        let m = entries.len();
        for row in &entries {
            if row.len() != m {
                return Err(Error::Dimension("matrix is not square".into()));
            }
            for p in row {
                if p.degree().unwrap_or(0) > 1 {
                    return Err(Error::Dimension(format!("entry {p} has degree above one")));
                }
                if p.num_vars_used() > n_vars {
                    return Err(Error::Dimension(format!("entry {p} uses more than {n_vars} variables")));
                }
            }
        }
        Ok(LinearFormMatrix { n_vars, entries })
    }

    /// Generic matrix: diagonal `x1..xn`, then the off-diagonal entries in
    /// row-major order.
    pub fn generic(n: usize) -> Result<LinearFormMatrix> {
        let mut entries = vec![vec![Poly::zero(); n]; n];
        let mut next = n;
        for (i, row) in entries.iter_mut().enumerate() {
            row[i] = Poly::var(i);
        }
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    entries[i][j] = Poly::var(next);
                    next += 1;
                }
            }
        }
        LinearFormMatrix::new(entries, n * n)
    }

    /// Generic symmetric matrix: diagonal `x1..xn`, then the upper triangle
    /// in row-major order.
    pub fn symmetric_generic(n: usize) -> Result<LinearFormMatrix> {
        let mut entries = vec![vec![Poly::zero(); n]; n];
        let mut next = n;
        for (i, row) in entries.iter_mut().enumerate() {
            row[i] = Poly::var(i);
        }
        for i in 0..n {
            for j in i + 1..n {
                entries[i][j] = Poly::var(next);
                entries[j][i] = Poly::var(next);
                next += 1;
            }
        }
        LinearFormMatrix::new(entries, n * (n + 1) / 2)
    }

    pub fn size(&self) -> usize {
        self.entries.len()
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn entry(&self, i: usize, j: usize) -> &Poly {
        &self.entries[i][j]
    }

    pub fn entries(&self) -> &[Vec<Poly>] {
        &self.entries
    }

    pub fn is_symmetric(&self) -> bool {
        let m = self.size();
        (0..m).all(|i| (0..i).all(|j| self.entries[i][j] == self.entries[j][i]))
    }

    pub fn transpose(&self) -> LinearFormMatrix {
        let m = self.size();
        let entries = (0..m).map(|i| (0..m).map(|j| self.entries[j][i].clone()).collect()).collect();
        LinearFormMatrix { n_vars: self.n_vars, entries }
    }

    /// `P^T X P` for an integer matrix `P`.
    pub fn congruence(&self, p: &[Vec<i64>]) -> Result<LinearFormMatrix> {
        let m = self.size();
        if p.len() != m || p.iter().any(|r| r.len() != m) {
            return Err(Error::Dimension("basis change has the wrong size".into()));
        }
        let mut xp = vec![vec![Poly::zero(); m]; m];
        for i in 0..m {
            for j in 0..m {
                for k in 0..m {
                    xp[i][j].add_assign_scaled(&self.entries[i][k], p[k][j] as i128);
                }
            }
        }
        let mut out = vec![vec![Poly::zero(); m]; m];
        for i in 0..m {
            for j in 0..m {
                for k in 0..m {
                    out[i][j].add_assign_scaled(&xp[k][j], p[k][i] as i128);
                }
            }
        }
        LinearFormMatrix::new(out, self.n_vars)
    }

    /// Coefficient matrix of `dX / dx_j`.
    pub fn derivative_matrix(&self, j: usize) -> Vec<Vec<i128>> {
        self.entries.iter().map(|row| row.iter().map(|p| p.coefficient(super::mono_var(j))).collect()).collect()
    }

    /// Constant part of every entry.
    pub fn constant_matrix(&self) -> Vec<Vec<i128>> {
        self.entries.iter().map(|row| row.iter().map(|p| p.coefficient(0)).collect()).collect()
    }

    pub fn eval_f64(&self, x: &[f64]) -> Vec<Vec<f64>> {
        self.entries.iter().map(|row| row.iter().map(|p| p.eval_f64(x)).collect()).collect()
    }

    pub fn eval_rational(&self, x: &[BigRational]) -> Vec<Vec<BigRational>> {
        self.entries.iter().map(|row| row.iter().map(|p| p.eval_rational(x)).collect()).collect()
    }

    pub fn det(&self) -> Poly {
        bareiss(self.entries.clone())
    }

    /// Adjugate matrix, `adj(X) X = det(X) I`.
    pub fn adjugate(&self) -> Vec<Vec<Poly>> {
        let m = self.size();
        if m == 1 {
            return vec![vec![Poly::one()]];
        }
        let mut adj = vec![vec![Poly::zero(); m]; m];
        for i in 0..m {
            for j in 0..m {
                let minor: Vec<Vec<Poly>> =
                    (0..m).filter(|&r| r != j).map(|r| (0..m).filter(|&c| c != i).map(|c| self.entries[r][c].clone()).collect()).collect();
                let d = bareiss(minor);
                adj[i][j] = if (i + j) % 2 == 0 { d } else { d.neg() };
            }
        }
        adj
    }

    pub fn to_text(&self) -> String {
        self.entries
            .iter()
            .map(|row| format!("[{}]", row.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(", ")))
            .collect::<Vec<_>>()
            .join("\n")
    }
}

/// Fraction-free determinant over the polynomial ring.
fn bareiss(mut a: Vec<Vec<Poly>>) -> Poly {
    let n = a.len();
    if n == 0 {
        return Poly::one();
    }
    let mut sign = 1;
    let mut prev = Poly::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                Some(r) => {
                    a.swap(k, r);
                    sign = -sign;
                }
                None => return Poly::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = a[k][k].mul(&a[i][j]).sub(&a[i][k].mul(&a[k][j]));
                a[i][j] = num.div_exact(&prev).expect("Bareiss division is exact");
            }
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    if sign < 0 {
        d.neg()
    } else {
        d
    }
}

pub fn det_poly(m: &LinearFormMatrix) -> Poly {
    m.det()
}

/// Exact determinant of a rational matrix by Gaussian elimination.
pub(crate) fn det_rational(mut a: Vec<Vec<BigRational>>) -> BigRational {
    use num_traits::{One, Zero};
    let n = a.len();
    let mut det = BigRational::one();
    for k in 0..n {
        let Some(p) = (k..n).find(|&r| !a[r][k].is_zero()) else {
            return BigRational::zero();
        };
        if p != k {
            a.swap(p, k);
            det = -det;
        }
        det *= a[k][k].clone();
        for i in k + 1..n {
            if a[i][k].is_zero() {
                continue;
            }
            let f = a[i][k].clone() / a[k][k].clone();
            for j in k..n {
                let t = f.clone() * a[k][j].clone();
                a[i][j] -= t;
            }
        }
    }
    det
}

#[cfg(test)]
fn int_matrix_to_rational(a: &[Vec<i64>]) -> Vec<Vec<BigRational>> {
    use num_bigint::BigInt;
    a.iter().map(|r| r.iter().map(|&x| BigRational::from_integer(BigInt::from(x))).collect()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generic_two_by_two() {
        let x = LinearFormMatrix::generic(2).unwrap();
        assert_eq!(x.entry(0, 1), &Poly::var(2));
        assert_eq!(x.det().to_string(), "x1*x2 - x3*x4");
        let adj = x.adjugate();
        assert_eq!(adj[0][0], Poly::var(1));
        assert_eq!(adj[0][1], Poly::var(2).neg());
    }

    #[test]
    fn symmetric_three_by_three() {
        let x = LinearFormMatrix::symmetric_generic(3).unwrap();
        assert!(x.is_symmetric());
        assert_eq!(x.det().num_terms(), 5);
        assert_eq!(x.entry(1, 2), &Poly::var(5));
    }

    #[test]
    fn congruence_preserves_det_for_unimodular() {
        let x = LinearFormMatrix::symmetric_generic(3).unwrap();
        let p = vec![vec![1, 2, 0], vec![0, 1, -1], vec![0, 0, 1]];
        assert_eq!(x.congruence(&p).unwrap().det(), x.det());
    }

    #[test]
    fn rational_det() {
        let a = int_matrix_to_rational(&[vec![2, 1], vec![1, 2]]);
        assert_eq!(det_rational(a), BigRational::from_integer(3.into()));
    }
}
