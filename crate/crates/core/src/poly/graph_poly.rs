use super::{check_vars, LinearFormMatrix, Poly};
use crate::error::{Error, Result};
use crate::graph::{canonical_form, ContractMode, Graph, UnionFind};
use std::collections::HashMap;

/// Above this edge count the graph polynomial is computed by memoized
/// contraction-deletion instead of spanning-tree enumeration.
pub const TREE_ENUMERATION_LIMIT: usize = 12;

/// Kirchhoff polynomial: sum over spanning trees of the product of the
/// edge variables not in the tree. Zero for disconnected graphs.
pub fn graph_polynomial(g: &Graph) -> Result<Poly> {
    check_vars(g.num_edges())?;
    if g.num_edges() <= TREE_ENUMERATION_LIMIT {
        Ok(psi_by_trees(g))
    } else {
        let mut memo = HashMap::new();
        Ok(psi_by_recursion(g, &mut memo))
    }
}

pub(crate) fn psi_by_trees(g: &Graph) -> Poly {
    if !g.is_connected() {
        return Poly::zero();
    }
    let m = g.num_edges();
    let k = g.num_vertices() - 1;
    let mut out = Poly::zero();
    let mut chosen = Vec::with_capacity(k);
    let all: u128 = (0..m).map(super::mono_var).sum();
    spanning_trees(g, 0, k, &mut chosen, &mut |tree| {
        let in_tree: u128 = tree.iter().map(|&e| super::mono_var(e)).sum();
        out.add_term(all - in_tree, 1);
    });
    out
}

fn spanning_trees<F: FnMut(&[usize])>(g: &Graph, start: usize, k: usize, chosen: &mut Vec<usize>, f: &mut F) {
    if chosen.len() == k {
        let mut uf = UnionFind::new(g.num_vertices());
        if chosen.iter().all(|&e| {
            let (u, v) = g.edges()[e];
            uf.union(u, v)
        }) {
            f(chosen);
        }
        return;
    }
    let need = k - chosen.len();
    for e in start..=g.num_edges().saturating_sub(need) {
        if g.is_self_edge(e) {
            continue;
        }
        chosen.push(e);
        spanning_trees(g, e + 1, k, chosen, f);
        chosen.pop();
    }
}

/// Splits on the last edge: `Psi = x_e Psi(G\e) + Psi(G//e)`, with results
/// for canonical representatives cached.
fn psi_by_recursion(g: &Graph, memo: &mut HashMap<Graph, Poly>) -> Poly {
    if !g.is_connected() {
        return Poly::zero();
    }
    if g.num_edges() <= 6 {
        return psi_by_trees(g);
    }
    let (rep, perm) = canonical_form(g);
    let from_rep: Vec<usize> = perm.inverse().as_slice().to_vec();
    if let Some(p) = memo.get(&rep) {
        return p.remap_vars(&from_rep);
    }
    let e = rep.num_edges() - 1;
    let (del, con) = split(&rep, e, memo);
    let p = Poly::var(e).mul(&del).add(&con);
    let out = p.remap_vars(&from_rep);
    memo.insert(rep, p);
    out
}

fn split(g: &Graph, e: usize, memo: &mut HashMap<Graph, Poly>) -> (Poly, Poly) {
    let lift: Vec<usize> = (0..g.num_edges() - 1).map(|i| if i < e { i } else { i + 1 }).collect();
    let deleted = g.delete_edge(e).expect("edge exists");
    let del = psi_by_recursion(&deleted, memo).remap_vars(&lift);
    let con = match g.contract_edge(e, ContractMode::Polynomial).expect("edge exists") {
        Some(c) => psi_by_recursion(&c, memo).remap_vars(&lift),
        None => Poly::zero(),
    };
    (del, con)
}

/// `(Psi(G\e), Psi(G//e))` in the variables of `g`.
pub fn contraction_deletion_split(g: &Graph, e: usize) -> Result<(Poly, Poly)> {
    g.edge(e)?;
    check_vars(g.num_edges())?;
    let mut memo = HashMap::new();
    Ok(split(g, e, &mut memo))
}

/// Integer cycle vectors over the edges of a graph, with each edge oriented
/// from its smaller to its larger endpoint.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycleBasis {
    vectors: Vec<Vec<i64>>,
}

impl CycleBasis {
    /// Validates that the vectors lie in the kernel of the boundary map and
    /// form a basis of the cycle space.
    pub fn new(g: &Graph, vectors: Vec<Vec<i64>>) -> Result<CycleBasis> {
        let m = g.num_edges();
        if vectors.iter().any(|v| v.len() != m) {
            return Err(Error::Dimension(format!("cycle vectors must have length {m}")));
        }
        for v in &vectors {
            let mut boundary = vec![0i64; g.num_vertices()];
            for (e, &(a, b)) in g.edges().iter().enumerate() {
                boundary[b] += v[e];
                boundary[a] -= v[e];
            }
            if boundary.iter().any(|&x| x != 0) {
                return Err(Error::InvalidGraph("vector is not a cycle".into()));
            }
        }
        if vectors.len() != g.loop_number() || rank(&vectors) != vectors.len() {
            return Err(Error::InvalidGraph("vectors do not form a basis of the cycle space".into()));
        }
        Ok(CycleBasis { vectors })
    }

    pub fn vectors(&self) -> &[Vec<i64>] {
        &self.vectors
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    /// New basis `c'_i = sum_j p[j][i] c_j`.
    pub fn transform(&self, p: &[Vec<i64>]) -> Result<CycleBasis> {
        let h = self.len();
        if p.len() != h || p.iter().any(|r| r.len() != h) {
            return Err(Error::Dimension("basis change has the wrong size".into()));
        }
        let m = self.vectors.first().map_or(0, Vec::len);
        let vectors: Vec<Vec<i64>> = (0..h).map(|i| (0..m).map(|e| (0..h).map(|j| p[j][i] * self.vectors[j][e]).sum()).collect()).collect();
        if rank(&vectors) != h {
            return Err(Error::InvalidGraph("basis change is singular".into()));
        }
        Ok(CycleBasis { vectors })
    }
}

fn rank(vectors: &[Vec<i64>]) -> usize {
    use num_rational::BigRational;
    use num_traits::Zero;
    let mut rows: Vec<Vec<BigRational>> =
        vectors.iter().map(|v| v.iter().map(|&x| BigRational::from_integer(x.into())).collect()).collect();
    let cols = rows.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let f = rows[i][c].clone() / rows[r][c].clone();
                for k in c..cols {
                    let t = f.clone() * rows[r][k].clone();
                    rows[i][k] -= t;
                }
            }
        }
        r += 1;
    }
    r
}

/// Fundamental cycles of the greedy spanning tree that takes edges in
/// order. Each non-tree edge contributes one cycle with coefficient +1 on it.
pub fn cycle_basis(g: &Graph) -> Result<CycleBasis> {
    if !g.is_connected() {
        return Err(Error::InvalidGraph("cycle basis of a disconnected graph".into()));
    }
    let n = g.num_vertices();
    let mut uf = UnionFind::new(n);
    let mut in_tree = vec![false; g.num_edges()];
    let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    for (e, &(u, v)) in g.edges().iter().enumerate() {
        if uf.union(u, v) {
            in_tree[e] = true;
            adj[u].push((v, e));
            adj[v].push((u, e));
        }
    }
    let mut vectors = Vec::new();
    for (e, &(u, v)) in g.edges().iter().enumerate() {
        if in_tree[e] {
            continue;
        }
        let mut c = vec![0i64; g.num_edges()];
        c[e] = 1;
        if u != v {
            for (from, edge) in tree_path(&adj, v, u) {
                let (a, _) = g.edges()[edge];
                c[edge] += if from == a { 1 } else { -1 };
            }
        }
        vectors.push(c);
    }
    CycleBasis::new(g, vectors)
}

/// Tree path from `s` to `t` as `(vertex left, edge)` steps.
fn tree_path(adj: &[Vec<(usize, usize)>], s: usize, t: usize) -> Vec<(usize, usize)> {
    let n = adj.len();
    let mut prev: Vec<Option<(usize, usize)>> = vec![None; n];
    let mut seen = vec![false; n];
    let mut stack = vec![s];
    seen[s] = true;
    while let Some(x) = stack.pop() {
        for &(y, e) in &adj[x] {
            if !seen[y] {
                seen[y] = true;
                prev[y] = Some((x, e));
                stack.push(y);
            }
        }
    }
    let mut steps = Vec::new();
    let mut cur = t;
    while cur != s {
        let (p, e) = prev[cur].expect("tree is connected");
        steps.push((p, e));
        cur = p;
    }
    steps.reverse();
    steps
}

/// Gram matrix of the cycle basis under `<e_i, e_j> = delta_ij x_i`.
pub fn laplacian(g: &Graph, b: &CycleBasis) -> Result<LinearFormMatrix> {
    let m = g.num_edges();
    check_vars(m)?;
    if b.vectors.iter().any(|v| v.len() != m) {
        return Err(Error::Dimension(format!("cycle vectors must have length {m}")));
    }
    let h = b.len();
    let mut entries = vec![vec![Poly::zero(); h]; h];
    for i in 0..h {
        for j in 0..h {
            for e in 0..m {
                let c = b.vectors[i][e] * b.vectors[j][e];
                if c != 0 {
                    entries[i][j].add_assign_scaled(&Poly::var(e), c as i128);
                }
            }
        }
    }
    LinearFormMatrix::new(entries, m)
}

/// All nonempty strict edge subsets `gamma` with `|E_gamma| <= 2 h_gamma`,
/// as sorted lists of edge indices.
pub fn divergent_subgraphs(g: &Graph) -> Result<Vec<Vec<usize>>> {
    let m = g.num_edges();
    check_vars(m)?;
    let full: u64 = (1u64 << m) - 1;
    let mut out = Vec::new();
    for mask in 1..full {
        let size = mask.count_ones() as usize;
        if size <= 2 * g.subgraph_loop_number(mask) {
            out.push((0..m).filter(|&i| mask >> i & 1 == 1).collect::<Vec<_>>());
        }
    }
    out.sort();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{builtin_graph, named_graph, Family};

    #[test]
    fn reference_polynomials() {
        let s = named_graph("sunrise").unwrap();
        assert_eq!(graph_polynomial(&s).unwrap().to_string(), "x1*x2 + x1*x3 + x2*x3");
        let d = named_graph("dunce").unwrap();
        let expected = Poly::product_of(&[2, 3])
            .add(&Poly::product_of(&[1, 3]))
            .add(&Poly::product_of(&[0, 3]))
            .add(&Poly::product_of(&[1, 2]))
            .add(&Poly::product_of(&[0, 2]));
        assert_eq!(graph_polynomial(&d).unwrap(), expected);
        let w3 = builtin_graph(Family::Wheel, 3).unwrap();
        assert_eq!(graph_polynomial(&w3).unwrap().num_terms(), 16);
    }

    #[test]
    fn recursion_matches_trees() {
        for g in [builtin_graph(Family::Complete, 5).unwrap(), builtin_graph(Family::Wheel, 5).unwrap()] {
            let mut memo = HashMap::new();
            assert_eq!(psi_by_recursion(&g, &mut memo), psi_by_trees(&g));
        }
    }

    #[test]
    fn sunrise_split() {
        let s = named_graph("sunrise").unwrap();
        let (del, con) = contraction_deletion_split(&s, 1).unwrap();
        assert_eq!(del, Poly::var(0).add(&Poly::var(2)));
        assert_eq!(con, Poly::product_of(&[0, 2]));
    }

    #[test]
    fn bubble_basis_and_laplacian() {
        let b = builtin_graph(Family::Sunrise, 2).unwrap();
        let cb = cycle_basis(&b).unwrap();
        assert_eq!(cb.vectors(), &[vec![-1, 1]]);
        let l = laplacian(&b, &cb).unwrap();
        assert_eq!(l.entry(0, 0), &Poly::var(0).add(&Poly::var(1)));
    }

    #[test]
    fn divergences() {
        assert_eq!(divergent_subgraphs(&named_graph("sunrise").unwrap()).unwrap().len(), 3);
        let d = divergent_subgraphs(&named_graph("dunce").unwrap()).unwrap();
        assert!(d.contains(&vec![2, 3]));
        assert!(divergent_subgraphs(&builtin_graph(Family::Wheel, 3).unwrap()).unwrap().is_empty());
    }
}
