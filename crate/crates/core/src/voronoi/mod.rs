//! Positive definite quadratic forms, minimal vectors, Voronoi cells and
//! the tropical Torelli map. All decisions use exact rational arithmetic.

mod lp;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::poly::{cycle_basis, laplacian, CycleBasis};
use lp::{int, Feasibility};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;
use std::collections::BTreeSet;
use std::fmt;

/// Largest dimension accepted by the minimal-vector enumeration.
pub const MAX_DIMENSION: usize = 5;

/// Symmetric matrix with rational entries, `Q(x, y) = x^T A y`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QuadraticForm {
    a: Vec<Vec<BigRational>>,
}

impl QuadraticForm {
    pub fn new(a: Vec<Vec<BigRational>>) -> Result<QuadraticForm> {
        let g = a.len();
        if g == 0 || a.iter().any(|r| r.len() != g) {
            return Err(Error::Dimension("quadratic form needs a nonempty square matrix".into()));
        }
        for i in 0..g {
            for j in 0..i {
                if a[i][j] != a[j][i] {
                    return Err(Error::Dimension("quadratic form matrix is not symmetric".into()));
                }
            }
        }
        Ok(QuadraticForm { a })
    }

    pub fn from_ints(a: &[Vec<i64>]) -> Result<QuadraticForm> {
        QuadraticForm::new(a.iter().map(|r| r.iter().map(|&v| int(v)).collect()).collect())
    }

    /// Reads `g` followed by `g * g` rational entries in row-major order.
    /// Entries may be written `p/q`; `#` starts a comment.
    pub fn parse(text: &str) -> Result<QuadraticForm> {
        let tokens: Vec<&str> = text.lines().map(|l| l.split('#').next().unwrap_or("")).flat_map(str::split_whitespace).collect();
        let bad = |msg: String| Error::Parse { line: 0, msg };
        let g: usize = tokens
            .first()
            .ok_or_else(|| bad("empty matrix file".into()))?
            .parse()
            .map_err(|_| bad("dimension is not an integer".into()))?;
        if tokens.len() != 1 + g * g {
            return Err(bad(format!("expected {} entries, found {}", g * g, tokens.len() - 1)));
        }
        let mut a = vec![vec![BigRational::zero(); g]; g];
        for (k, tok) in tokens[1..].iter().enumerate() {
            a[k / g][k % g] = parse_rational(tok).ok_or_else(|| bad(format!("bad entry '{tok}'")))?;
        }
        QuadraticForm::new(a)
    }

    pub fn dim(&self) -> usize {
        self.a.len()
    }

    pub fn entries(&self) -> &[Vec<BigRational>] {
        &self.a
    }

    pub fn entry(&self, i: usize, j: usize) -> &BigRational {
        &self.a[i][j]
    }

    pub fn value(&self, x: &[i64]) -> BigRational {
        let g = self.dim();
        let mut s = BigRational::zero();
        for i in 0..g {
            for j in 0..g {
                if x[i] != 0 && x[j] != 0 {
                    s += self.a[i][j].clone() * int(x[i] * x[j]);
                }
            }
        }
        s
    }

    /// Leading principal minors.
    pub fn leading_minors(&self) -> Vec<BigRational> {
        (1..=self.dim()).map(|k| crate::poly::det_rational(self.a[..k].iter().map(|r| r[..k].to_vec()).collect())).collect()
    }

    pub fn is_positive_definite(&self) -> bool {
        self.leading_minors().iter().all(Signed::is_positive)
    }

    /// `P^T A P` for an integer matrix `P`.
    pub fn congruence(&self, p: &[Vec<i64>]) -> Result<QuadraticForm> {
        let g = self.dim();
        if p.len() != g || p.iter().any(|r| r.len() != g) {
            return Err(Error::Dimension("basis change has the wrong size".into()));
        }
        let mut out = vec![vec![BigRational::zero(); g]; g];
        for i in 0..g {
            for j in 0..g {
                let mut s = BigRational::zero();
                for k in 0..g {
                    for l in 0..g {
                        if p[k][i] != 0 && p[l][j] != 0 {
                            s += self.a[k][l].clone() * int(p[k][i] * p[l][j]);
                        }
                    }
                }
                out[i][j] = s;
            }
        }
        QuadraticForm::new(out)
    }

    pub fn scale(&self, f: &BigRational) -> QuadraticForm {
        QuadraticForm { a: self.a.iter().map(|r| r.iter().map(|v| v.clone() * f.clone()).collect()).collect() }
    }

    /// Inverse matrix, for nonsingular forms.
    pub fn inverse(&self) -> Result<QuadraticForm> {
        let g = self.dim();
        let mut m: Vec<Vec<BigRational>> = self
            .a
            .iter()
            .enumerate()
            .map(|(i, r)| {
                let mut row = r.clone();
                row.extend((0..g).map(|j| if i == j { BigRational::one() } else { BigRational::zero() }));
                row
            })
            .collect();
        for c in 0..g {
            let p = (c..g).find(|&r| !m[r][c].is_zero()).ok_or(Error::SingularDeterminant)?;
            m.swap(c, p);
            let pv = m[c][c].clone();
            for v in m[c].iter_mut() {
                *v /= pv.clone();
            }
            let pivot = m[c].clone();
            for (r, row) in m.iter_mut().enumerate() {
                if r != c && !row[c].is_zero() {
                    let f = row[c].clone();
                    for (v, pv) in row.iter_mut().zip(&pivot) {
                        *v -= f.clone() * pv.clone();
                    }
                }
            }
        }
        QuadraticForm::new(m.into_iter().map(|r| r[g..].to_vec()).collect())
    }

    /// Upper-triangle coordinates `A_ij`, `i <= j`, row by row.
    pub fn upper_coordinates(&self) -> Vec<BigRational> {
        let g = self.dim();
        (0..g).flat_map(|i| (i..g).map(move |j| (i, j))).map(|(i, j)| self.a[i][j].clone()).collect()
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("{}\n", self.dim());
        for r in &self.a {
            s.push_str(&r.iter().map(ToString::to_string).collect::<Vec<_>>().join(" "));
            s.push('\n');
        }
        s
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!(self.a.iter().map(|r| r.iter().map(ToString::to_string).collect::<Vec<_>>()).collect::<Vec<_>>())
    }
}

impl fmt::Display for QuadraticForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> =
            self.a.iter().map(|r| format!("[{}]", r.iter().map(ToString::to_string).collect::<Vec<_>>().join(", "))).collect();
        write!(f, "[{}]", rows.join(", "))
    }
}

fn parse_rational(tok: &str) -> Option<BigRational> {
    match tok.split_once('/') {
        Some((n, d)) => {
            let d: BigInt = d.parse().ok()?;
            if d.is_zero() {
                return None;
            }
            Some(BigRational::new(n.parse().ok()?, d))
        }
        None => Some(BigRational::from_integer(tok.parse().ok()?)),
    }
}

/// `A = U^T D U` with `U` unit upper triangular.
fn ldl(q: &QuadraticForm) -> Result<(Vec<BigRational>, Vec<Vec<BigRational>>)> {
    let g = q.dim();
    let mut d = vec![BigRational::zero(); g];
    let mut u = vec![vec![BigRational::zero(); g]; g];
    for i in 0..g {
        let mut di = q.a[i][i].clone();
        for k in 0..i {
            di -= d[k].clone() * u[k][i].clone() * u[k][i].clone();
        }
        if !di.is_positive() {
            return Err(Error::NotPositiveDefinite);
        }
        u[i][i] = BigRational::one();
        for j in i + 1..g {
            let mut s = q.a[i][j].clone();
            for k in 0..i {
                s -= d[k].clone() * u[k][i].clone() * u[k][j].clone();
            }
            u[i][j] = s / di.clone();
        }
        d[i] = di;
    }
    Ok((d, u))
}

/// All integer vectors with `0 < Q(x) <= bound`, by Fincke-Pohst
/// enumeration in exact arithmetic.
pub fn short_vectors(q: &QuadraticForm, bound: &BigRational) -> Result<Vec<(Vec<i64>, BigRational)>> {
    if q.dim() > MAX_DIMENSION {
        return Err(Error::OutOfRange(format!("dimension {} exceeds {MAX_DIMENSION}", q.dim())));
    }
    let (d, u) = ldl(q)?;
    let g = q.dim();
    let mut out = Vec::new();
    let mut x = vec![0i64; g];
    descend(&d, &u, g, bound.clone(), &mut x, &mut out);
    out.retain(|(v, _)| v.iter().any(|&c| c != 0));
    Ok(out)
}

fn descend(
    d: &[BigRational],
    u: &[Vec<BigRational>],
    level: usize,
    budget: BigRational,
    x: &mut Vec<i64>,
    out: &mut Vec<(Vec<i64>, BigRational)>,
) {
    if level == 0 {
        return;
    }
    let i = level - 1;
    let g = x.len();
    let mut center = BigRational::zero();
    for j in i + 1..g {
        if x[j] != 0 {
            center -= u[i][j].clone() * int(x[j]);
        }
    }
    let cost = |v: i64| -> BigRational {
        let t = int(v) - center.clone();
        d[i].clone() * t.clone() * t
    };
    let start = center.round().to_integer().to_i64().expect("bounded coordinate");
    let visit = |v: i64, x: &mut Vec<i64>, out: &mut Vec<(Vec<i64>, BigRational)>| -> bool {
        let c = cost(v);
        if c > budget {
            return false;
        }
        x[i] = v;
        let rest = budget.clone() - c;
        if i == 0 {
            out.push((x.clone(), rest));
        } else {
            descend(d, u, i, rest, x, out);
        }
        true
    };
    let mut v = start;
    while visit(v, x, out) {
        v += 1;
    }
    let mut v = start - 1;
    while visit(v, x, out) {
        v -= 1;
    }
    x[i] = 0;
}

/// Nonzero integer vectors attaining the minimum of `Q`, sorted, closed
/// under negation.
pub fn minimal_vectors(q: &QuadraticForm) -> Result<Vec<Vec<i64>>> {
    if !q.is_positive_definite() {
        return Err(Error::NotPositiveDefinite);
    }
    let bound = (0..q.dim()).map(|i| q.a[i][i].clone()).min().expect("nonempty form");
    let found = short_vectors(q, &bound)?;
    let min = found.iter().map(|(v, _)| q.value(v)).min().expect("unit vectors satisfy the bound");
    let mut out: Vec<Vec<i64>> = found.into_iter().map(|(v, _)| v).filter(|v| q.value(v) == min).collect();
    out.sort();
    out.dedup();
    Ok(out)
}

/// The minimum `min Q(x)` over nonzero integer vectors.
pub fn arithmetic_minimum(q: &QuadraticForm) -> Result<BigRational> {
    let v = minimal_vectors(q)?;
    Ok(q.value(&v[0]))
}

/// `xi` with its first nonzero entry positive.
pub fn sign_normalize(xi: &[i64]) -> Vec<i64> {
    match xi.iter().find(|&&c| c != 0) {
        Some(&c) if c < 0 => xi.iter().map(|v| -v).collect(),
        _ => xi.to_vec(),
    }
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

/// Open cone spanned by rank-one matrices `xi xi^T`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VoronoiCell {
    dim: usize,
    vectors: Vec<Vec<i64>>,
}

impl VoronoiCell {
    /// Cell spanned by `xi xi^T` for the given vectors after sign
    /// normalization, duplicates removed, in order of first appearance.
    pub fn from_vectors(dim: usize, vectors: &[Vec<i64>]) -> Result<VoronoiCell> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for v in vectors {
            if v.len() != dim {
                return Err(Error::Dimension(format!("vector of length {} in dimension {dim}", v.len())));
            }
            if v.iter().all(|&c| c == 0) {
                continue;
            }
            let n = sign_normalize(v);
            let g = n.iter().fold(0, |acc, &c| gcd(acc, c));
            if g != 1 {
                return Err(Error::InvalidBuilder(format!("generator {v:?} is not primitive")));
            }
            if seen.insert(n.clone()) {
                out.push(n);
            }
        }
        Ok(VoronoiCell { dim, vectors: out })
    }

    /// Cell of a metric graph: the edge columns of a cycle basis.
    pub fn of_graph(graph: &Graph, basis: &CycleBasis) -> Result<VoronoiCell> {
        let h = basis.len();
        let cols: Vec<Vec<i64>> = (0..graph.num_edges()).map(|e| basis.vectors().iter().map(|c| c[e]).collect()).collect();
        VoronoiCell::from_vectors(h, &cols)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Sign-normalized generating vectors.
    pub fn vectors(&self) -> &[Vec<i64>] {
        &self.vectors
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    /// Generator matrices `xi xi^T`.
    pub fn generators(&self) -> Vec<Vec<Vec<i64>>> {
        self.vectors.iter().map(|v| v.iter().map(|&a| v.iter().map(|&b| a * b).collect()).collect()).collect()
    }

    pub fn generator_form(&self, i: usize) -> QuadraticForm {
        QuadraticForm::from_ints(&self.generators()[i]).expect("rank-one generators are symmetric")
    }
}

/// Deduplicated sign-normalized minimal vectors as a cell.
pub fn voronoi_cell(q: &QuadraticForm) -> Result<VoronoiCell> {
    let mv = minimal_vectors(q)?;
    VoronoiCell::from_vectors(q.dim(), &mv)
}

/// Laplacian of `graph` in the default cycle basis at the given lengths.
pub fn torelli_point(graph: &Graph, lengths: &[BigRational]) -> Result<QuadraticForm> {
    let basis = cycle_basis(graph)?;
    torelli_point_in_basis(graph, &basis, lengths)
}

/// Laplacian in an explicit cycle basis at the given lengths.
pub fn torelli_point_in_basis(graph: &Graph, basis: &CycleBasis, lengths: &[BigRational]) -> Result<QuadraticForm> {
    if !graph.is_unweighted() || !graph.is_connected() {
        return Err(Error::InvalidGraph("the Torelli map needs a connected graph with zero weights".into()));
    }
    if lengths.len() != graph.num_edges() {
        return Err(Error::Dimension(format!("{} lengths for {} edges", lengths.len(), graph.num_edges())));
    }
    if let Some(i) = lengths.iter().position(|l| !l.is_positive()) {
        return Err(Error::OutOfRange(format!("edge {} has nonpositive length {}", i + 1, lengths[i])));
    }
    let lap = laplacian(graph, basis)?;
    QuadraticForm::new(lap.eval_rational(lengths))
}

/// Result of a cone membership test, with an exact certificate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ConeMembership {
    /// `x = sum_i lambda_i G_i` with `lambda_i >= 0`.
    Member(Vec<BigRational>),
    /// A functional on upper-triangle coordinates that is nonnegative on
    /// every generator and negative on `x`.
    Separated(Vec<BigRational>),
}

impl ConeMembership {
    pub fn is_member(&self) -> bool {
        matches!(self, ConeMembership::Member(_))
    }
}

/// Decides whether `x` lies in the closed cone of `cell` and verifies the
/// certificate exactly before returning it.
pub fn cone_membership(x: &QuadraticForm, cell: &VoronoiCell) -> Result<ConeMembership> {
    if x.dim() != cell.dim() {
        return Err(Error::Dimension(format!("form of size {} against a cell of size {}", x.dim(), cell.dim())));
    }
    let b = x.upper_coordinates();
    let gens: Vec<Vec<BigRational>> = (0..cell.len()).map(|i| cell.generator_form(i).upper_coordinates()).collect();
    let a: Vec<Vec<BigRational>> = (0..b.len()).map(|r| gens.iter().map(|g| g[r].clone()).collect()).collect();
    let result = match lp::solve(&a, &b) {
        Feasibility::Feasible(l) => ConeMembership::Member(l),
        Feasibility::Infeasible(y) => ConeMembership::Separated(y),
    };
    let dot = |u: &[BigRational], v: &[BigRational]| u.iter().zip(v).fold(BigRational::zero(), |s, (p, q)| s + p.clone() * q.clone());
    let verified = match &result {
        ConeMembership::Member(l) => l.iter().all(|v| !v.is_negative()) && (0..b.len()).all(|r| dot(&a[r], l) == b[r]),
        ConeMembership::Separated(y) => gens.iter().all(|g| !dot(y, g).is_negative()) && dot(y, &b).is_negative(),
    };
    if !verified {
        return Err(Error::Certificate("cone membership".into()));
    }
    Ok(result)
}
