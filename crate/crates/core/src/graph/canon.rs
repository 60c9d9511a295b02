//! Canonical labeling and automorphism groups by partition refinement with
//! exhaustive individualization.

use super::Graph;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};

/// A bijection on edge indices: edge `i` is sent to `map[i]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct EdgePermutation {
    map: Vec<usize>,
}

impl EdgePermutation {
    pub fn new(map: Vec<usize>) -> Option<EdgePermutation> {
        let mut seen = vec![false; map.len()];
        for &i in &map {
            if i >= map.len() || std::mem::replace(&mut seen[i], true) {
                return None;
            }
        }
        Some(EdgePermutation { map })
    }

    pub fn identity(n: usize) -> EdgePermutation {
        EdgePermutation { map: (0..n).collect() }
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn image(&self, i: usize) -> usize {
        self.map[i]
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.map
    }

    pub fn is_identity(&self) -> bool {
        self.map.iter().enumerate().all(|(i, &j)| i == j)
    }

    /// Sign of the permutation, +1 or -1.
    pub fn parity(&self) -> i8 {
        let mut seen = vec![false; self.map.len()];
        let mut sign = 1i8;
        for start in 0..self.map.len() {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                i = self.map[i];
                len += 1;
            }
            if len % 2 == 0 {
                sign = -sign;
            }
        }
        sign
    }

    /// `self` after `other`: `i -> self(other(i))`.
    pub fn compose(&self, other: &EdgePermutation) -> EdgePermutation {
        EdgePermutation { map: other.map.iter().map(|&i| self.map[i]).collect() }
    }

    pub fn inverse(&self) -> EdgePermutation {
        let mut inv = vec![0; self.map.len()];
        for (i, &j) in self.map.iter().enumerate() {
            inv[j] = i;
        }
        EdgePermutation { map: inv }
    }
}

/// Induced action of the automorphism group on edges.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AutGroup {
    /// Generating set of the edge-permutation image.
    pub generators: Vec<EdgePermutation>,
    /// Order of the edge-permutation image.
    pub order: u128,
    /// Whether some automorphism induces an odd edge permutation.
    pub has_odd: bool,
    /// All vertex automorphisms respecting weights, as maps `v -> perm[v]`.
    pub vertex_automorphisms: Vec<Vec<usize>>,
}

struct Search<'a> {
    adj: &'a [Vec<u32>],
    weights: &'a [u32],
    best: Option<Vec<u32>>,
    leaves: Vec<Vec<usize>>,
}

impl Search<'_> {
    fn refine(&self, mut cells: Vec<Vec<usize>>) -> Vec<Vec<usize>> {
        loop {
            let n = self.adj.len();
            let mut cell_of = vec![0; n];
            for (c, cell) in cells.iter().enumerate() {
                for &v in cell {
                    cell_of[v] = c;
                }
            }
            let mut next = Vec::with_capacity(cells.len());
            let mut split = false;
            for cell in &cells {
                if cell.len() == 1 {
                    next.push(cell.clone());
                    continue;
                }
                let mut keyed: Vec<(Vec<u32>, usize)> = cell
                    .iter()
                    .map(|&v| {
                        let mut sig = vec![0u32; cells.len()];
                        for w in 0..n {
                            sig[cell_of[w]] += self.adj[v][w];
                        }
                        (sig, v)
                    })
                    .collect();
                keyed.sort();
                let mut group = vec![keyed[0].1];
                for w in keyed.windows(2) {
                    if w[0].0 != w[1].0 {
                        next.push(std::mem::take(&mut group));
                        split = true;
                    }
                    group.push(w[1].1);
                }
                next.push(group);
            }
            cells = next;
            if !split {
                return cells;
            }
        }
    }

    fn certificate(&self, order: &[usize]) -> Vec<u32> {
        let n = order.len();
        let mut cert = Vec::with_capacity(n + n * (n + 1) / 2);
        cert.extend(order.iter().map(|&v| self.weights[v]));
        for i in 0..n {
            for j in i..n {
                cert.push(self.adj[order[i]][order[j]]);
            }
        }
        cert
    }

    fn run(&mut self, cells: Vec<Vec<usize>>) {
        let cells = self.refine(cells);
        match cells.iter().position(|c| c.len() > 1) {
            None => {
                let order: Vec<usize> = cells.into_iter().map(|c| c[0]).collect();
                let cert = self.certificate(&order);
                match &self.best {
                    Some(b) if cert > *b => {}
                    Some(b) if cert == *b => self.leaves.push(order),
                    _ => {
                        self.best = Some(cert);
                        self.leaves = vec![order];
                    }
                }
            }
            Some(target) => {
                let min_len = cells.iter().map(Vec::len).filter(|&l| l > 1).min().unwrap_or(0);
                let target = cells.iter().position(|c| c.len() == min_len).unwrap_or(target);
                for &v in &cells[target] {
                    let mut child = Vec::with_capacity(cells.len() + 1);
                    child.extend_from_slice(&cells[..target]);
                    child.push(vec![v]);
                    child.push(cells[target].iter().copied().filter(|&w| w != v).collect());
                    child.extend_from_slice(&cells[target + 1..]);
                    self.run(child);
                }
            }
        }
    }
}

/// Canonical vertex orderings: every returned ordering lists the old vertex
/// placed at each new position, and all of them yield the same relabeled graph.
fn canonical_orderings(g: &Graph) -> Vec<Vec<usize>> {
    let n = g.num_vertices();
    if n == 0 {
        return vec![vec![]];
    }
    let adj = g.multiplicity_matrix();
    let deg = g.degrees();
    let mut initial: BTreeMap<(u32, u32, usize), Vec<usize>> = BTreeMap::new();
    for v in 0..n {
        initial.entry((g.weights()[v], adj[v][v], deg[v])).or_default().push(v);
    }
    let mut search = Search { adj: &adj, weights: g.weights(), best: None, leaves: Vec::new() };
    search.run(initial.into_values().collect());
    search.leaves
}

fn relabel_with(g: &Graph, order: &[usize]) -> (Graph, EdgePermutation) {
    let n = g.num_vertices();
    let mut new_label = vec![0; n];
    for (k, &v) in order.iter().enumerate() {
        new_label[v] = k;
    }
    let weights = order.iter().map(|&v| g.weights()[v]).collect();
    let mapped: Vec<(usize, usize)> = g
        .edges()
        .iter()
        .map(|&(a, b)| {
            let (x, y) = (new_label[a], new_label[b]);
            (x.min(y), x.max(y))
        })
        .collect();
    let mut idx: Vec<usize> = (0..mapped.len()).collect();
    idx.sort_by_key(|&i| (mapped[i], i));
    let mut map = vec![0; mapped.len()];
    for (pos, &i) in idx.iter().enumerate() {
        map[i] = pos;
    }
    let edges = idx.iter().map(|&i| mapped[i]).collect();
    (Graph::from_parts(weights, edges), EdgePermutation { map })
}

/// Isomorphism-class representative of `g` (weights respected), together
/// with the permutation sending each edge of `g` to its position in the
/// representative.
pub fn canonical_form(g: &Graph) -> (Graph, EdgePermutation) {
    let orders = canonical_orderings(g);
    relabel_with(g, &orders[0])
}

/// Edge permutation induced by a vertex automorphism, matching parallel
/// edges in their stored order.
fn induced_edge_perm(g: &Graph, sigma: &[usize]) -> EdgePermutation {
    let mut slots: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
    for (i, &e) in g.edges().iter().enumerate() {
        slots.entry(e).or_default().push(i);
    }
    let mut used: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    let mut rank = vec![0; g.num_edges()];
    for (i, &e) in g.edges().iter().enumerate() {
        let r = used.entry(e).or_insert(0);
        rank[i] = *r;
        *r += 1;
    }
    let map = g
        .edges()
        .iter()
        .enumerate()
        .map(|(i, &(a, b))| {
            let (x, y) = (sigma[a], sigma[b]);
            slots[&(x.min(y), x.max(y))][rank[i]]
        })
        .collect();
    EdgePermutation { map }
}

/// Automorphisms of `g` acting on its edges.
pub fn automorphism_edge_group(g: &Graph) -> AutGroup {
    let orders = canonical_orderings(g);
    let base = &orders[0];
    let n = g.num_vertices();
    let vertex_automorphisms: Vec<Vec<usize>> = orders
        .iter()
        .map(|leaf| {
            let mut sigma = vec![0; n];
            for k in 0..n {
                sigma[base[k]] = leaf[k];
            }
            sigma
        })
        .collect();
    let induced: BTreeSet<EdgePermutation> = vertex_automorphisms.iter().map(|s| induced_edge_perm(g, s)).collect();

    let mut classes: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
    for (i, &e) in g.edges().iter().enumerate() {
        classes.entry(e).or_default().push(i);
    }
    let mut generators: Vec<EdgePermutation> = induced.iter().filter(|p| !p.is_identity()).cloned().collect();
    let mut order = induced.len() as u128;
    let mut has_odd = induced.iter().any(|p| p.parity() < 0);
    for members in classes.values() {
        for (k, w) in members.windows(2).enumerate() {
            let mut map: Vec<usize> = (0..g.num_edges()).collect();
            map.swap(w[0], w[1]);
            generators.push(EdgePermutation { map });
            order *= (k + 2) as u128;
            has_odd = true;
        }
    }
    AutGroup { generators, order, has_odd, vertex_automorphisms }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{builtin_graph, Family};

    #[test]
    fn parity_of_cycles() {
        assert_eq!(EdgePermutation::new(vec![1, 2, 0]).unwrap().parity(), 1);
        assert_eq!(EdgePermutation::new(vec![1, 0, 2]).unwrap().parity(), -1);
        assert!(EdgePermutation::new(vec![0, 0]).is_none());
    }

    #[test]
    fn sunrise_reordering_is_even() {
        let g = builtin_graph(Family::Sunrise, 3).unwrap();
        let h = g.reorder_edges(&[1, 2, 0]).unwrap();
        let (cg, _) = canonical_form(&g);
        let (ch, p) = canonical_form(&h);
        assert_eq!(cg, ch);
        assert_eq!(p.parity(), 1);
    }

    #[test]
    fn wheel_groups() {
        let w3 = builtin_graph(Family::Wheel, 3).unwrap();
        let a = automorphism_edge_group(&w3);
        assert_eq!(a.order, 24);
        assert!(!a.has_odd);
        let w5 = builtin_graph(Family::Wheel, 5).unwrap();
        let a = automorphism_edge_group(&w5);
        assert_eq!(a.order, 10);
        assert!(!a.has_odd);
        let w4 = builtin_graph(Family::Wheel, 4).unwrap();
        assert!(automorphism_edge_group(&w4).has_odd);
    }

    #[test]
    fn sunrise_and_dumbbell_groups() {
        let s = builtin_graph(Family::Sunrise, 3).unwrap();
        assert_eq!(automorphism_edge_group(&s).order, 6);
        let d = Graph::new(2, &[(0, 0), (0, 1), (1, 1)]).unwrap();
        assert_eq!(automorphism_edge_group(&d).order, 2);
    }
}
