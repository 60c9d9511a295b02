//! Finite multigraphs with ordered edges and optional vertex weights.
//!
//! Vertices are `0..n` and edges are addressed by their position in the
//! edge list (`0..m`). The text format and printed variables use 1-based
//! edge ids, so edge index `i` corresponds to the variable `x{i+1}`.

mod builders;
mod canon;
mod enumerate;
mod io;

pub use builders::{builtin_graph, completion, decompletions, named_graph, two_vertex_join, Family};
pub use canon::{automorphism_edge_group, canonical_form, AutGroup, EdgePermutation};
pub use enumerate::{enumerate_gc_graphs, enumerate_stable_weighted, GcFilter};

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// How a self-edge contraction is treated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ContractMode {
    /// Self-edge removed, base vertex weight incremented.
    Weighted,
    /// Self-edge contraction yields the zero graph.
    Polynomial,
}

/// A finite multigraph. Edge endpoints are stored with `u <= v`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Graph {
    weights: Vec<u32>,
    edges: Vec<(usize, usize)>,
}

impl Graph {
    /// Builds a graph with `n` weight-0 vertices.
    pub fn new(n: usize, edges: &[(usize, usize)]) -> Result<Graph> {
        Graph::with_weights(vec![0; n], edges)
    }

    pub fn with_weights(weights: Vec<u32>, edges: &[(usize, usize)]) -> Result<Graph> {
        let n = weights.len();
        let mut es = Vec::with_capacity(edges.len());
        for &(u, v) in edges {
            if u >= n {
                return Err(Error::UnknownVertex(u));
            }
            if v >= n {
                return Err(Error::UnknownVertex(v));
            }
            es.push((u.min(v), u.max(v)));
        }
        Ok(Graph { weights, edges: es })
    }

    pub(crate) fn from_parts(weights: Vec<u32>, edges: Vec<(usize, usize)>) -> Graph {
        let edges = edges.into_iter().map(|(u, v)| (u.min(v), u.max(v))).collect();
        Graph { weights, edges }
    }

    pub fn num_vertices(&self) -> usize {
        self.weights.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge(&self, e: usize) -> Result<(usize, usize)> {
        self.edges.get(e).copied().ok_or(Error::UnknownEdge(e))
    }

    pub fn weights(&self) -> &[u32] {
        &self.weights
    }

    pub fn weight(&self, v: usize) -> u32 {
        self.weights[v]
    }

    pub fn is_unweighted(&self) -> bool {
        self.weights.iter().all(|&w| w == 0)
    }

    /// Returns a copy with all vertex weights set to the given values.
    pub fn set_weights(&self, weights: Vec<u32>) -> Result<Graph> {
        if weights.len() != self.num_vertices() {
            return Err(Error::Dimension(format!("{} weights for {} vertices", weights.len(), self.num_vertices())));
        }
        Ok(Graph { weights, edges: self.edges.clone() })
    }

    pub fn is_self_edge(&self, e: usize) -> bool {
        let (u, v) = self.edges[e];
        u == v
    }

    /// Degree of `v`; a self-edge counts twice.
    pub fn degree(&self, v: usize) -> usize {
        self.edges.iter().map(|&(a, b)| usize::from(a == v) + usize::from(b == v)).sum()
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut d = vec![0; self.num_vertices()];
        for &(a, b) in &self.edges {
            d[a] += 1;
            d[b] += 1;
        }
        d
    }

    pub fn has_self_edges(&self) -> bool {
        self.edges.iter().any(|&(u, v)| u == v)
    }

    pub fn has_parallel_edges(&self) -> bool {
        let mut es: Vec<_> = self.edges.iter().filter(|(u, v)| u != v).collect();
        es.sort();
        es.windows(2).any(|w| w[0] == w[1])
    }

    /// Number of connected components (isolated vertices count).
    pub fn num_components(&self) -> usize {
        let n = self.num_vertices();
        let mut uf = UnionFind::new(n);
        for &(u, v) in &self.edges {
            uf.union(u, v);
        }
        (0..n).filter(|&v| uf.find(v) == v).count()
    }

    pub fn is_connected(&self) -> bool {
        self.num_components() == 1
    }

    /// First Betti number `|E| - |V| + #components`.
    pub fn loop_number(&self) -> usize {
        self.num_edges() + self.num_components() - self.num_vertices()
    }

    /// Loop number plus total vertex weight.
    pub fn genus(&self) -> usize {
        self.loop_number() + self.weights.iter().map(|&w| w as usize).sum::<usize>()
    }

    /// Every weight-0 vertex has degree at least 3 and every weight-1 vertex
    /// degree at least 1.
    pub fn is_stable(&self) -> bool {
        let d = self.degrees();
        self.weights.iter().zip(&d).all(|(&w, &d)| match w {
            0 => d >= 3,
            1 => d >= 1,
            _ => true,
        })
    }

    /// Removes edge `e`; the result may be disconnected.
    pub fn delete_edge(&self, e: usize) -> Result<Graph> {
        self.edge(e)?;
        let mut edges = self.edges.clone();
        edges.remove(e);
        Ok(Graph { weights: self.weights.clone(), edges })
    }

    /// Contracts edge `e`. Returns `None` for the zero graph, which arises
    /// only for a self-edge in [`ContractMode::Polynomial`].
    pub fn contract_edge(&self, e: usize, mode: ContractMode) -> Result<Option<Graph>> {
        let (u, v) = self.edge(e)?;
        let mut edges = self.edges.clone();
        edges.remove(e);
        if u == v {
            return Ok(match mode {
                ContractMode::Polynomial => None,
                ContractMode::Weighted => {
                    let mut weights = self.weights.clone();
                    weights[u] += 1;
                    Some(Graph { weights, edges })
                }
            });
        }
        let relabel = |w: usize| -> usize {
            let w = if w == v { u } else { w };
            if w > v {
                w - 1
            } else {
                w
            }
        };
        let mut weights = self.weights.clone();
        weights[u] += weights[v];
        weights.remove(v);
        let edges = edges.into_iter().map(|(a, b)| (relabel(a), relabel(b))).collect();
        Ok(Some(Graph::from_parts(weights, edges)))
    }

    /// Reorders the edges: edge `i` of the result is edge `order[i]` of `self`.
    pub fn reorder_edges(&self, order: &[usize]) -> Result<Graph> {
        check_permutation(order, self.num_edges())?;
        let edges = order.iter().map(|&i| self.edges[i]).collect();
        Ok(Graph { weights: self.weights.clone(), edges })
    }

    /// Renames vertices: vertex `v` becomes `perm[v]`.
    pub fn relabel_vertices(&self, perm: &[usize]) -> Result<Graph> {
        check_permutation(perm, self.num_vertices())?;
        let mut weights = vec![0; self.num_vertices()];
        for (v, &p) in perm.iter().enumerate() {
            weights[p] = self.weights[v];
        }
        let edges = self.edges.iter().map(|&(a, b)| (perm[a], perm[b])).collect();
        Ok(Graph::from_parts(weights, edges))
    }

    /// Multiplicity matrix: entry `(u, v)` counts edges between `u` and `v`,
    /// the diagonal counts self-edges.
    pub fn multiplicity_matrix(&self) -> Vec<Vec<u32>> {
        let n = self.num_vertices();
        let mut a = vec![vec![0u32; n]; n];
        for &(u, v) in &self.edges {
            a[u][v] += 1;
            if u != v {
                a[v][u] += 1;
            }
        }
        a
    }

    /// Loop number of the subgraph spanned by the edges in `mask`
    /// (bit `i` selects edge `i`), counting only endpoints of those edges.
    pub fn subgraph_loop_number(&self, mask: u64) -> usize {
        let mut uf = UnionFind::new(self.num_vertices());
        let mut cycles = 0;
        for (i, &(u, v)) in self.edges.iter().enumerate() {
            if mask >> i & 1 == 1 && !uf.union(u, v) {
                cycles += 1;
            }
        }
        cycles
    }
}

fn check_permutation(p: &[usize], n: usize) -> Result<()> {
    if p.len() != n {
        return Err(Error::Dimension(format!("permutation of length {} for {} items", p.len(), n)));
    }
    let mut seen = vec![false; n];
    for &i in p {
        if i >= n || seen[i] {
            return Err(Error::Dimension("not a permutation".into()));
        }
        seen[i] = true;
    }
    Ok(())
}

pub(crate) struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns true when the two elements were in different sets.
    pub(crate) fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra.max(rb)] = ra.min(rb);
        true
    }
}
