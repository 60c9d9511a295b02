//! Exact feasibility of `A lambda = b, lambda >= 0` by the two-phase
//! simplex method with Bland's rule.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Outcome of a feasibility problem.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Feasibility {
    /// A nonnegative solution.
    Feasible(Vec<BigRational>),
    /// `y` with `y . A_j >= 0` for every column and `y . b < 0`.
    Infeasible(Vec<BigRational>),
}

pub fn solve(a: &[Vec<BigRational>], b: &[BigRational]) -> Feasibility {
    let m = b.len();
    let n = a.first().map_or(0, Vec::len);
    let width = n + m + 1;
    let mut flip = vec![BigRational::one(); m];
    let mut t: Vec<Vec<BigRational>> = Vec::with_capacity(m + 1);
    for i in 0..m {
        if b[i].is_negative() {
            flip[i] = -BigRational::one();
        }
        let mut row = vec![BigRational::zero(); width];
        for j in 0..n {
            row[j] = a[i][j].clone() * flip[i].clone();
        }
        row[n + i] = BigRational::one();
        row[width - 1] = b[i].clone() * flip[i].clone();
        t.push(row);
    }
    // objective row: reduced costs of the artificial-sum objective
    let mut obj = vec![BigRational::zero(); width];
    for j in n..n + m {
        obj[j] = BigRational::one();
    }
    for row in &t {
        for j in 0..width {
            obj[j] -= row[j].clone();
        }
    }
    t.push(obj);
    let mut basis: Vec<usize> = (n..n + m).collect();
    loop {
        let Some(enter) = (0..width - 1).find(|&j| t[m][j].is_negative()) else { break };
        let mut leave: Option<(BigRational, usize, usize)> = None;
        for i in 0..m {
            if t[i][enter].is_positive() {
                let ratio = t[i][width - 1].clone() / t[i][enter].clone();
                let better = match &leave {
                    None => true,
                    Some((r, _, bv)) => ratio < *r || (ratio == *r && basis[i] < *bv),
                };
                if better {
                    leave = Some((ratio, i, basis[i]));
                }
            }
        }
        // phase one is bounded below by zero, so a leaving row exists
        let (_, r, _) = leave.expect("phase one is bounded");
        pivot(&mut t, r, enter);
        basis[r] = enter;
    }
    if t[m][width - 1].is_zero() {
        let mut lambda = vec![BigRational::zero(); n];
        for (i, &bv) in basis.iter().enumerate() {
            if bv < n {
                lambda[bv] = t[i][width - 1].clone();
            }
        }
        Feasibility::Feasible(lambda)
    } else {
        // phase-one duals: y_i = 1 - reduced cost of artificial i
        let y: Vec<BigRational> = (0..m).map(|i| -((BigRational::one() - t[m][n + i].clone()) * flip[i].clone())).collect();
        Feasibility::Infeasible(y)
    }
}

fn pivot(t: &mut [Vec<BigRational>], r: usize, c: usize) {
    let p = t[r][c].clone();
    for v in t[r].iter_mut() {
        *v /= p.clone();
    }
    let pivot_row = t[r].clone();
    for (i, row) in t.iter_mut().enumerate() {
        if i == r || row[c].is_zero() {
            continue;
        }
        let f = row[c].clone();
        for (v, pv) in row.iter_mut().zip(&pivot_row) {
            if !pv.is_zero() {
                *v -= f.clone() * pv.clone();
            }
        }
    }
}

pub fn int(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn feasible_and_infeasible() {
        let a = vec![vec![int(1), int(0)], vec![int(0), int(1)]];
        match solve(&a, &[int(2), int(3)]) {
            Feasibility::Feasible(l) => assert_eq!(l, vec![int(2), int(3)]),
            other => panic!("{other:?}"),
        }
        match solve(&a, &[int(2), int(-1)]) {
            Feasibility::Infeasible(y) => {
                assert!(y[1].is_positive() || y[0].is_positive());
                let yb = y[0].clone() * int(2) + y[1].clone() * int(-1);
                assert!(yb.is_negative());
            }
            other => panic!("{other:?}"),
        }
    }
}
