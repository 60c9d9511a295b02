//! The even commutative graph complex: oriented classes, the contraction
//! differential and bigraded homology.
//!
//! A class is stored as a canonical graph whose edge order is its
//! orientation `e_1 ^ ... ^ e_n`. Graphs with parallel edges or with an
//! automorphism acting oddly on edges are zero.

mod rank;

pub use rank::{max_abs_entry, rank_exact, rank_mod_p, SparseMatrix, RANK_PRIME};

use crate::error::{Error, Result};
use crate::graph::{automorphism_edge_group, canonical_form, enumerate_gc_graphs, ContractMode, GcFilter, Graph};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;
use std::collections::{BTreeMap, HashMap};
use std::fmt;

/// Default largest loop order for homology computations.
pub const DEFAULT_LOOP_BOUND: usize = 6;

/// A canonical graph; its edge order is the orientation.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct OrientedClass(Graph);

impl OrientedClass {
    pub fn graph(&self) -> &Graph {
        &self.0
    }

    pub fn loops(&self) -> usize {
        self.0.loop_number()
    }

    pub fn edges(&self) -> usize {
        self.0.num_edges()
    }
}

fn check_admissible(g: &Graph) -> Result<()> {
    if !g.is_unweighted() {
        return Err(Error::InvalidGraph("graph-complex graphs carry no vertex weights".into()));
    }
    if g.has_self_edges() {
        return Err(Error::InvalidGraph("graph-complex graphs have no self-edges".into()));
    }
    if g.degrees().iter().any(|&d| d < 3) {
        return Err(Error::InvalidGraph("graph-complex graphs have minimum degree 3".into()));
    }
    if !g.is_connected() {
        return Err(Error::InvalidGraph("graph-complex graphs are connected".into()));
    }
    Ok(())
}

/// Whether `g` vanishes in the complex: parallel edges or an automorphism
/// inducing an odd edge permutation.
pub fn is_zero_class(g: &Graph) -> bool {
    g.has_parallel_edges() || automorphism_edge_group(g).has_odd
}

/// The canonical class of `g` with the sign relating the edge order of `g`
/// to the stored orientation, or `None` for a zero class.
pub fn reduce_to_basis(g: &Graph) -> Result<Option<(OrientedClass, i32)>> {
    check_admissible(g)?;
    if g.has_parallel_edges() {
        return Ok(None);
    }
    let (rep, perm) = canonical_form(g);
    if automorphism_edge_group(&rep).has_odd {
        return Ok(None);
    }
    Ok(Some((OrientedClass(rep), perm.parity() as i32)))
}

/// Sparse rational combination of classes sharing one bigrade.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ChainVector {
    bigrade: Option<(usize, usize)>,
    terms: BTreeMap<OrientedClass, BigRational>,
}

impl ChainVector {
    pub fn zero() -> ChainVector {
        ChainVector::default()
    }

    /// The class of a single graph with coefficient one.
    pub fn from_graph(g: &Graph) -> Result<ChainVector> {
        let mut c = ChainVector::zero();
        c.add_graph(BigRational::from_integer(BigInt::from(1)), g)?;
        Ok(c)
    }

    /// Adds `coef * [g]` with the orientation given by the edge order of `g`.
    pub fn add_graph(&mut self, coef: BigRational, g: &Graph) -> Result<()> {
        let grade = (g.loop_number(), g.num_edges());
        if let Some(b) = self.bigrade {
            if b != grade {
                return Err(Error::Dimension(format!("bigrade {grade:?} added to a chain of bigrade {b:?}")));
            }
        }
        self.bigrade.get_or_insert(grade);
        if let Some((class, sign)) = reduce_to_basis(g)? {
            self.add_class(class, coef * BigRational::from_integer(BigInt::from(sign)));
        }
        Ok(())
    }

    fn add_class(&mut self, class: OrientedClass, coef: BigRational) {
        if coef.is_zero() {
            return;
        }
        self.bigrade.get_or_insert((class.loops(), class.edges()));
        let entry = self.terms.entry(class.clone()).or_insert_with(BigRational::zero);
        *entry += coef;
        if entry.is_zero() {
            self.terms.remove(&class);
        }
    }

    /// `(loops, edges)`; `None` for a chain that was never given a graph.
    pub fn bigrade(&self) -> Option<(usize, usize)> {
        self.bigrade
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, class: &OrientedClass) -> BigRational {
        self.terms.get(class).cloned().unwrap_or_else(BigRational::zero)
    }

    /// Coefficient of the class of `g`, with the sign of its edge order.
    pub fn coefficient_of(&self, g: &Graph) -> Result<BigRational> {
        Ok(match reduce_to_basis(g)? {
            Some((class, sign)) => self.coefficient(&class) * BigRational::from_integer(BigInt::from(sign)),
            None => BigRational::zero(),
        })
    }

    pub fn iter(&self) -> impl Iterator<Item = (&OrientedClass, &BigRational)> {
        self.terms.iter()
    }

    /// `(coefficient, representative)` pairs.
    pub fn terms(&self) -> Vec<(BigRational, Graph)> {
        self.terms.iter().map(|(c, v)| (v.clone(), c.0.clone())).collect()
    }

    pub fn add(&self, other: &ChainVector) -> Result<ChainVector> {
        if let (Some(a), Some(b)) = (self.bigrade, other.bigrade) {
            if a != b {
                return Err(Error::Dimension(format!("adding chains of bigrades {a:?} and {b:?}")));
            }
        }
        let mut out = self.clone();
        if out.bigrade.is_none() {
            out.bigrade = other.bigrade;
        }
        for (c, v) in &other.terms {
            out.add_class(c.clone(), v.clone());
        }
        Ok(out)
    }

    pub fn scale(&self, f: &BigRational) -> ChainVector {
        let mut out = ChainVector { bigrade: self.bigrade, terms: BTreeMap::new() };
        for (c, v) in &self.terms {
            out.add_class(c.clone(), v.clone() * f.clone());
        }
        out
    }
}

impl fmt::Display for ChainVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.terms.iter().map(|(c, v)| format!("{v}*{:?}", c.0.edges())).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// `d[G, e_1 ^ ... ^ e_n] = sum_i (-1)^i [G // e_i, ...]` for one graph,
/// as `(sign, class)` pairs before merging.
fn differential_terms(g: &Graph) -> Result<Vec<(OrientedClass, i32)>> {
    let mut out = Vec::new();
    for e in 0..g.num_edges() {
        let Some(h) = g.contract_edge(e, ContractMode::Polynomial)? else { continue };
        if h.has_self_edges() {
            continue;
        }
        debug_assert!(h.degrees().iter().all(|&d| d >= 3));
        let sign = if (e + 1) % 2 == 0 { 1 } else { -1 };
        if let Some((class, s)) = reduce_to_basis(&h)? {
            out.push((class, sign * s));
        }
    }
    Ok(out)
}

/// The contraction differential, extended linearly.
pub fn differential(c: &ChainVector) -> Result<ChainVector> {
    let mut out = ChainVector::zero();
    if let Some((l, e)) = c.bigrade {
        out.bigrade = Some((l, e - 1));
    }
    for (class, coef) in &c.terms {
        for (target, s) in differential_terms(&class.0)? {
            out.add_class(target, coef.clone() * BigRational::from_integer(BigInt::from(s)));
        }
    }
    Ok(out)
}

/// Nonzero classes at a bigrade, in sorted order.
pub fn gc_basis(loops: usize, edges: usize) -> Result<Vec<OrientedClass>> {
    if loops < 2 || edges <= loops || edges > 3 * loops - 3 {
        return Ok(Vec::new());
    }
    let graphs = enumerate_gc_graphs(loops, edges, GcFilter::Simple)?;
    let keep: Vec<bool> = graphs.par_iter().map(|g| !automorphism_edge_group(g).has_odd).collect();
    Ok(graphs.into_iter().zip(keep).filter(|(_, k)| *k).map(|(g, _)| OrientedClass(g)).collect())
}

fn index_of(basis: &[OrientedClass]) -> HashMap<&OrientedClass, usize> {
    basis.iter().enumerate().map(|(i, c)| (c, i)).collect()
}

fn matrix_between(source: &[OrientedClass], target: &[OrientedClass]) -> Result<SparseMatrix> {
    let index = index_of(target);
    let columns: Vec<Vec<(OrientedClass, i32)>> = source.par_iter().map(|c| differential_terms(&c.0)).collect::<Result<_>>()?;
    let mut m = SparseMatrix::zeros(target.len(), source.len());
    for (j, col) in columns.into_iter().enumerate() {
        for (class, s) in col {
            let &i = index
                .get(&class)
                .ok_or_else(|| Error::InvalidGraph(format!("contraction {:?} is missing from the target basis", class.0.edges())))?;
            m.add(i, j, s as i64);
        }
    }
    Ok(m)
}

/// Matrix of `d` from bigrade `(loops, edges)` to `(loops, edges - 1)` in
/// the bases of [`gc_basis`].
pub fn differential_matrix(loops: usize, edges: usize) -> Result<SparseMatrix> {
    let source = gc_basis(loops, edges)?;
    let target = gc_basis(loops, edges.saturating_sub(1))?;
    matrix_between(&source, &target)
}

/// One edge count of a homology computation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HomologyRow {
    pub edges: usize,
    /// `edges - 2 * loops`.
    pub degree: i64,
    pub basis: usize,
    /// Rank of `d` leaving this bigrade.
    pub rank_out: usize,
    /// Rank of `d` arriving from one more edge.
    pub rank_in: usize,
    pub kernel: usize,
    pub homology: usize,
    /// Whether `d o d` vanishes exactly starting here.
    pub d_squared_zero: bool,
    /// Whether the modular rank agrees with the exact one.
    pub modular_agrees: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HomologyReport {
    pub loops: usize,
    pub rows: Vec<HomologyRow>,
}

impl HomologyReport {
    /// Nonzero dimensions by degree.
    pub fn dims(&self) -> BTreeMap<i64, usize> {
        self.rows.iter().filter(|r| r.homology > 0).map(|r| (r.degree, r.homology)).collect()
    }

    pub fn to_table(&self) -> String {
        let mut s =
            format!("loops {}\n{:>6} {:>6} {:>6} {:>6} {:>6} {:>6}\n", self.loops, "edges", "degree", "basis", "rank", "kernel", "H");
        for r in &self.rows {
            s.push_str(&format!("{:>6} {:>6} {:>6} {:>6} {:>6} {:>6}\n", r.edges, r.degree, r.basis, r.rank_out, r.kernel, r.homology));
        }
        s
    }
}

/// Homology of the complex at a fixed loop order, up to [`DEFAULT_LOOP_BOUND`].
pub fn homology_report(loops: usize) -> Result<HomologyReport> {
    homology_report_bounded(loops, DEFAULT_LOOP_BOUND)
}

/// As [`homology_report`] with an explicit loop bound (at most 7).
pub fn homology_report_bounded(loops: usize, bound: usize) -> Result<HomologyReport> {
    if loops > bound.min(7) {
        return Err(Error::OutOfRange(format!("loop order {loops} exceeds the bound {}", bound.min(7))));
    }
    if loops < 2 {
        return Err(Error::OutOfRange("the complex starts at two loops".into()));
    }
    let lo = loops + 1;
    let hi = 3 * loops - 3;
    let bases: BTreeMap<usize, Vec<OrientedClass>> = (lo - 1..=hi + 1).map(|n| Ok((n, gc_basis(loops, n)?))).collect::<Result<_>>()?;
    let mut mats: BTreeMap<usize, SparseMatrix> = BTreeMap::new();
    for n in lo..=hi + 1 {
        mats.insert(n, matrix_between(&bases[&n], &bases[&(n - 1)])?);
    }
    let ranks: BTreeMap<usize, (usize, bool)> = mats
        .iter()
        .map(|(&n, m)| {
            let exact = rank_exact(m);
            (n, (exact, rank_mod_p(m) == exact))
        })
        .collect();
    let mut rows = Vec::new();
    for n in lo..=hi {
        let basis = bases[&n].len();
        let (rank_out, ok_out) = ranks[&n];
        let (rank_in, ok_in) = ranks[&(n + 1)];
        let kernel = basis - rank_out;
        let d_squared_zero = match mats.get(&(n - 1)) {
            Some(lower) if n > lo => lower.mul(&mats[&n]).is_zero(),
            _ => true,
        };
        rows.push(HomologyRow {
            edges: n,
            degree: n as i64 - 2 * loops as i64,
            basis,
            rank_out,
            rank_in,
            kernel,
            homology: kernel - rank_in,
            d_squared_zero,
            modular_agrees: ok_out && ok_in,
        });
    }
    Ok(HomologyReport { loops, rows })
}

/// Dimensions of homology by degree `edges - 2 loops`, zeros omitted.
pub fn homology_dims(loops: usize) -> Result<BTreeMap<i64, usize>> {
    Ok(homology_report(loops)?.dims())
}
