//! The bi-invariant forms `omega^n_X = tr((X^{-1} dX)^n)`: exact symbolic
//! expansion, pointwise numeric evaluation and pullbacks to graphs.

mod graph_eval;
mod numeric;

pub use graph_eval::GraphFormEvaluator;
pub use numeric::{canonical_form_coefficients, canonical_form_numeric, canonical_form_numeric_exact, Scalar};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::poly::{cycle_basis, laplacian, LinearFormMatrix, Poly};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;

/// A product `omega^{n_1} ^ omega^{n_2} ^ ...`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FormSpec {
    degrees: Vec<usize>,
}

impl FormSpec {
    /// Generators of the canonical algebra: strictly increasing, each
    /// `= 1 mod 4` and at least 5.
    pub fn new(degrees: Vec<usize>) -> Result<FormSpec> {
        if degrees.is_empty() {
            return Err(Error::DegreeMismatch("empty form specification".into()));
        }
        for w in degrees.windows(2) {
            if w[0] >= w[1] {
                return Err(Error::DegreeMismatch("degrees must be strictly increasing".into()));
            }
        }
        if let Some(&d) = degrees.iter().find(|&&d| d < 5 || d % 4 != 1) {
            return Err(Error::DegreeMismatch(format!("degree {d} is not a canonical generator")));
        }
        Ok(FormSpec { degrees })
    }

    /// Any list of positive degrees, including even and `3 mod 4` ones.
    pub fn raw(degrees: Vec<usize>) -> Result<FormSpec> {
        if degrees.is_empty() || degrees.contains(&0) {
            return Err(Error::DegreeMismatch("degrees must be positive".into()));
        }
        Ok(FormSpec { degrees })
    }

    pub fn parse(text: &str) -> Result<FormSpec> {
        let degrees = text
            .split(',')
            .map(|s| s.trim().parse::<usize>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|_| Error::DegreeMismatch(format!("cannot parse form list {text:?}")))?;
        FormSpec::new(degrees)
    }

    pub fn degrees(&self) -> &[usize] {
        &self.degrees
    }

    pub fn degree(&self) -> usize {
        self.degrees.iter().sum()
    }
}

impl fmt::Display for FormSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.degrees.iter().map(|d| format!("omega^{d}")).collect();
        write!(f, "{}", parts.join(" ^ "))
    }
}

/// Sign of moving `dx_j` in front of `dx_S` into ascending position.
fn insert_sign(j: usize, mask: u32) -> i128 {
    if (mask & ((1u32 << j) - 1)).count_ones() % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Sign of `dx_A ^ dx_B` relative to the ascending order of `A | B`.
pub(crate) fn shuffle_sign(a: u32, b: u32) -> i32 {
    let mut count = 0;
    let mut rest = b;
    while rest != 0 {
        let j = rest.trailing_zeros();
        count += (a >> (j + 1)).count_ones();
        rest &= rest - 1;
    }
    if count % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Polynomial-coefficient differential form, keyed by ascending variable
/// sets encoded as bitmasks.
type FormPoly = BTreeMap<u32, Poly>;

fn form_add(acc: &mut FormPoly, key: u32, p: Poly) {
    if p.is_zero() {
        return;
    }
    let e = acc.entry(key).or_default();
    *e = e.add(&p);
    if e.is_zero() {
        acc.remove(&key);
    }
}

fn form_wedge(a: &FormPoly, b: &FormPoly) -> FormPoly {
    let mut out = FormPoly::new();
    for (&ka, pa) in a {
        for (&kb, pb) in b {
            if ka & kb != 0 {
                continue;
            }
            let s = shuffle_sign(ka, kb) as i128;
            form_add(&mut out, ka | kb, pa.mul(pb).scale(s));
        }
    }
    out
}

/// `Numerator / det^k` where the numerator is a map from ascending wedge
/// monomials `dx_{i_1} ^ ... ^ dx_{i_d}` to polynomials.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalForm {
    n_vars: usize,
    degree: usize,
    k: u32,
    det: Poly,
    numerator: FormPoly,
}

impl RationalForm {
    /// Builds and reduces a form. Keys are bitmasks of variable indices.
    pub fn new(n_vars: usize, degree: usize, numerator: BTreeMap<u32, Poly>, det: Poly, k: u32) -> Result<RationalForm> {
        if numerator.keys().any(|key| key.count_ones() as usize != degree || (*key >> n_vars) != 0) {
            return Err(Error::DegreeMismatch("wedge monomial of the wrong degree".into()));
        }
        let numerator = numerator.into_iter().filter(|(_, p)| !p.is_zero()).collect();
        let mut f = RationalForm { n_vars, degree, k, det, numerator };
        f.reduce();
        Ok(f)
    }

    /// `Omega = sum_i (-1)^i x_i dx_1 ^ ... (omit dx_i) ... ^ dx_n` with
    /// 1-based `i`, over `det^0`.
    pub fn omega(n_vars: usize) -> RationalForm {
        let all = (1u32 << n_vars) - 1;
        let numerator = (0..n_vars)
            .map(|i| {
                let sign = if (i + 1) % 2 == 0 { 1 } else { -1 };
                (all & !(1 << i), Poly::var(i).scale(sign))
            })
            .collect();
        RationalForm { n_vars, degree: n_vars.saturating_sub(1), k: 0, det: Poly::one(), numerator }
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Denominator exponent.
    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn det(&self) -> &Poly {
        &self.det
    }

    pub fn numerator(&self) -> &BTreeMap<u32, Poly> {
        &self.numerator
    }

    pub fn is_zero(&self) -> bool {
        self.numerator.is_empty()
    }

    fn reduce(&mut self) {
        if self.numerator.is_empty() {
            self.k = 0;
            return;
        }
        while self.k > 0 {
            let divided: Option<FormPoly> = self.numerator.iter().map(|(&key, p)| p.div_exact(&self.det).map(|q| (key, q))).collect();
            match divided {
                Some(n) => {
                    self.numerator = n;
                    self.k -= 1;
                }
                None => break,
            }
        }
    }

    /// The same numerator divided by `det^k`, reduced.
    pub fn over(&self, det: Poly, k: u32) -> RationalForm {
        let mut f = self.clone();
        f.det = det;
        f.k += k;
        f.reduce();
        f
    }

    /// Multiplies by an integer constant.
    pub fn scale(&self, c: i128) -> RationalForm {
        let mut f = self.clone();
        f.numerator = f.numerator.into_iter().map(|(key, p)| (key, p.scale(c))).filter(|(_, p)| !p.is_zero()).collect();
        f.reduce();
        f
    }

    /// Multiplies the form by a polynomial and divides by `det^extra_k`.
    pub fn times(&self, p: &Poly, extra_k: u32) -> RationalForm {
        let mut f = self.clone();
        f.numerator = f.numerator.into_iter().map(|(key, q)| (key, q.mul(p))).filter(|(_, q)| !q.is_zero()).collect();
        f.k += extra_k;
        f.reduce();
        f
    }

    /// Graded wedge product; denominator bases must agree unless one side
    /// has `k = 0`.
    pub fn wedge(&self, other: &RationalForm) -> Result<RationalForm> {
        if self.n_vars != other.n_vars {
            return Err(Error::Dimension(format!("forms in {} and {} variables", self.n_vars, other.n_vars)));
        }
        let det = match (self.k, other.k) {
            (0, _) => other.det.clone(),
            (_, 0) => self.det.clone(),
            _ if self.det == other.det => self.det.clone(),
            _ => return Err(Error::Dimension("forms over different denominators".into())),
        };
        let numerator = form_wedge(&self.numerator, &other.numerator);
        let mut f = RationalForm { n_vars: self.n_vars, degree: self.degree + other.degree, k: self.k + other.k, det, numerator };
        f.reduce();
        Ok(f)
    }

    /// Exterior derivative, over `det^(k+1)`.
    pub fn exterior_derivative(&self) -> RationalForm {
        let k = self.k as i128;
        let mut out = FormPoly::new();
        for (&key, p) in &self.numerator {
            for j in 0..self.n_vars {
                if key >> j & 1 == 1 {
                    continue;
                }
                let term = self.det.mul(&p.derivative(j)).sub(&p.mul(&self.det.derivative(j)).scale(k));
                form_add(&mut out, key | 1 << j, term.scale(insert_sign(j, key)));
            }
        }
        let mut f = RationalForm { n_vars: self.n_vars, degree: self.degree + 1, k: self.k + 1, det: self.det.clone(), numerator: out };
        f.reduce();
        f
    }

    /// Exact equality as rational functions, allowing different `k`.
    pub fn equals(&self, other: &RationalForm) -> bool {
        if self.n_vars != other.n_vars || self.degree != other.degree {
            return false;
        }
        if self.is_zero() || other.is_zero() {
            return self.is_zero() && other.is_zero();
        }
        if self.k != 0 && other.k != 0 && self.det != other.det {
            return false;
        }
        let base = if self.k > 0 { &self.det } else { &other.det };
        let kmax = self.k.max(other.k);
        let lift = |f: &RationalForm| -> FormPoly {
            let factor = base.pow(kmax - f.k);
            f.numerator.iter().map(|(&key, p)| (key, p.mul(&factor))).collect()
        };
        lift(self) == lift(other)
    }

    /// `(1-based ascending variable ids, numerator coefficient)` pairs.
    pub fn to_list(&self) -> Vec<(Vec<usize>, Poly)> {
        self.numerator
            .iter()
            .map(|(&key, p)| ((0..self.n_vars).filter(|&i| key >> i & 1 == 1).map(|i| i + 1).collect(), p.clone()))
            .collect()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "degree": self.degree,
            "k": self.k,
            "det": self.det.to_json(),
            "terms": self.to_list().into_iter().map(|(ids, p)| serde_json::json!({"dx": ids, "coefficient": p.to_json()})).collect::<Vec<_>>(),
        })
    }
}

impl fmt::Display for RationalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (ids, p) in self.to_list() {
            let dx: Vec<String> = ids.iter().map(|i| format!("dx{i}")).collect();
            writeln!(f, "({p}) {}", dx.join("^"))?;
        }
        write!(f, "/ ({})^{}", self.det, self.k)
    }
}

/// `tr((adj(X) dX)^n) / det(X)^n`, reduced.
pub fn canonical_form_symbolic(x: &LinearFormMatrix, n: usize) -> Result<RationalForm> {
    let det = x.det();
    if det.is_zero() {
        return Err(Error::SingularDeterminant);
    }
    let nv = x.n_vars();
    let m = x.size();
    if n == 0 {
        return RationalForm::new(nv, 0, BTreeMap::from([(0, Poly::constant(m as i128))]), det, 0);
    }
    let adj = x.adjugate();
    let dx: Vec<Vec<Vec<i128>>> = (0..nv).map(|j| x.derivative_matrix(j)).collect();
    let mut one_form = vec![vec![FormPoly::new(); m]; m];
    for i in 0..m {
        for k in 0..m {
            for (j, dxj) in dx.iter().enumerate() {
                let mut p = Poly::zero();
                for l in 0..m {
                    if dxj[l][k] != 0 {
                        p.add_assign_scaled(&adj[i][l], dxj[l][k]);
                    }
                }
                form_add(&mut one_form[i][k], 1 << j, p);
            }
        }
    }
    let mut power = one_form.clone();
    for _ in 1..n {
        let mut next = vec![vec![FormPoly::new(); m]; m];
        for i in 0..m {
            for k in 0..m {
                for l in 0..m {
                    for (key, p) in form_wedge(&power[i][l], &one_form[l][k]) {
                        form_add(&mut next[i][k], key, p);
                    }
                }
            }
        }
        power = next;
    }
    let mut trace = FormPoly::new();
    for (i, row) in power.into_iter().enumerate() {
        for (key, p) in row.into_iter().nth(i).unwrap_or_default() {
            form_add(&mut trace, key, p);
        }
    }
    RationalForm::new(nv, n, trace, det, n as u32)
}

/// Wedge of the symbolic canonical forms listed in `spec`.
pub fn canonical_wedge_symbolic(x: &LinearFormMatrix, spec: &FormSpec) -> Result<RationalForm> {
    let mut acc: Option<RationalForm> = None;
    for &n in spec.degrees() {
        let f = canonical_form_symbolic(x, n)?;
        acc = Some(match acc {
            None => f,
            Some(a) => a.wedge(&f)?,
        });
    }
    acc.ok_or_else(|| Error::DegreeMismatch("empty form specification".into()))
}

/// The canonical form of a graph: the form of its Laplacian in the
/// fundamental cycle basis.
pub fn graph_canonical_form(g: &Graph, spec: &FormSpec) -> Result<RationalForm> {
    if !g.is_unweighted() {
        return Err(Error::InvalidGraph("canonical forms need weight-0 vertices".into()));
    }
    let l = laplacian(g, &cycle_basis(g)?)?;
    canonical_wedge_symbolic(&l, spec)
}
