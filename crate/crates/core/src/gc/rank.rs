//! Exact and modular rank of sparse integer matrices.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use std::collections::BTreeMap;

/// Sparse integer matrix stored by columns.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SparseMatrix {
    rows: usize,
    cols: Vec<BTreeMap<usize, i64>>,
}

impl SparseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> SparseMatrix {
        SparseMatrix { rows, cols: vec![BTreeMap::new(); cols] }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols.len()
    }

    pub fn get(&self, r: usize, c: usize) -> i64 {
        self.cols[c].get(&r).copied().unwrap_or(0)
    }

    pub fn add(&mut self, r: usize, c: usize, v: i64) {
        assert!(r < self.rows, "row out of range");
        let e = self.cols[c].entry(r).or_insert(0);
        *e += v;
        if *e == 0 {
            self.cols[c].remove(&r);
        }
    }

    pub fn column(&self, c: usize) -> impl Iterator<Item = (usize, i64)> + '_ {
        self.cols[c].iter().map(|(&r, &v)| (r, v))
    }

    pub fn nnz(&self) -> usize {
        self.cols.iter().map(BTreeMap::len).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.nnz() == 0
    }

    /// Product `self * other`, checked for overflow.
    pub fn mul(&self, other: &SparseMatrix) -> SparseMatrix {
        assert_eq!(self.cols(), other.rows, "dimension mismatch");
        let mut out = SparseMatrix::zeros(self.rows, other.cols());
        for (c, col) in other.cols.iter().enumerate() {
            for (&k, &b) in col {
                for (&r, &a) in &self.cols[k] {
                    let v = a.checked_mul(b).expect("matrix product overflow");
                    out.add(r, c, v);
                }
            }
        }
        out
    }

    pub fn to_dense(&self) -> Vec<Vec<i64>> {
        let mut d = vec![vec![0; self.cols()]; self.rows];
        for (c, col) in self.cols.iter().enumerate() {
            for (&r, &v) in col {
                d[r][c] = v;
            }
        }
        d
    }
}

/// Rank over the rationals by sparse elimination with Markowitz pivoting.
pub fn rank_exact(m: &SparseMatrix) -> usize {
    let mut rows: Vec<BTreeMap<usize, BigRational>> = vec![BTreeMap::new(); m.rows()];
    for c in 0..m.cols() {
        for (r, v) in m.column(c) {
            rows[r].insert(c, BigRational::from_integer(BigInt::from(v)));
        }
    }
    let mut active: Vec<usize> = (0..rows.len()).filter(|&r| !rows[r].is_empty()).collect();
    let mut rank = 0;
    loop {
        active.retain(|&r| !rows[r].is_empty());
        if active.is_empty() {
            return rank;
        }
        let mut col_count: BTreeMap<usize, usize> = BTreeMap::new();
        for &r in &active {
            for &c in rows[r].keys() {
                *col_count.entry(c).or_insert(0) += 1;
            }
        }
        // minimize (row nnz - 1) * (col nnz - 1), then prefer small magnitude
        let mut best: Option<(usize, usize, usize, usize)> = None;
        for (i, &r) in active.iter().enumerate() {
            let rn = rows[r].len() - 1;
            for (&c, v) in &rows[r] {
                let cost = rn * (col_count[&c] - 1);
                let size = v.numer().bits() as usize + v.denom().bits() as usize;
                if best.map_or(true, |(bc, bs, _, _)| (cost, size) < (bc, bs)) {
                    best = Some((cost, size, i, c));
                }
            }
        }
        let (_, _, pi, pc) = best.expect("active rows are nonempty");
        let pr = active.swap_remove(pi);
        let pivot_row = std::mem::take(&mut rows[pr]);
        let pv = pivot_row[&pc].clone();
        for &r in &active {
            let Some(f) = rows[r].get(&pc).cloned() else { continue };
            let f = f / pv.clone();
            for (&c, v) in &pivot_row {
                let entry = rows[r].entry(c).or_insert_with(BigRational::zero);
                *entry -= f.clone() * v.clone();
                if entry.is_zero() {
                    rows[r].remove(&c);
                }
            }
            debug_assert!(!rows[r].contains_key(&pc));
        }
        rank += 1;
    }
}

/// Modulus used for the fast rank pre-pass.
pub const RANK_PRIME: u64 = 2_147_483_647;

/// Rank modulo [`RANK_PRIME`]; never exceeds the rational rank.
pub fn rank_mod_p(m: &SparseMatrix) -> usize {
    let p = RANK_PRIME;
    let mut a: Vec<Vec<u64>> =
        m.to_dense().into_iter().map(|row| row.into_iter().map(|v| v.rem_euclid(p as i64) as u64).collect()).collect();
    let (nr, nc) = (m.rows(), m.cols());
    let mut rank = 0;
    for c in 0..nc {
        let Some(piv) = (rank..nr).find(|&r| a[r][c] != 0) else { continue };
        a.swap(rank, piv);
        let inv = pow_mod(a[rank][c], p - 2, p);
        for r in 0..nr {
            if r != rank && a[r][c] != 0 {
                let f = a[r][c] * inv % p;
                for k in c..nc {
                    let sub = f * a[rank][k] % p;
                    a[r][k] = (a[r][k] + p - sub) % p;
                }
            }
        }
        rank += 1;
    }
    rank
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    acc
}

/// Largest absolute entry, for reporting.
pub fn max_abs_entry(m: &SparseMatrix) -> i64 {
    (0..m.cols()).flat_map(|c| m.column(c).map(|(_, v)| v.abs())).max().unwrap_or(0)
}
