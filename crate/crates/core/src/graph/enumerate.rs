use super::{canonical_form, Graph};
use crate::error::{Error, Result};
use rayon::prelude::*;
use std::collections::BTreeSet;

/// Restricts graph-complex enumeration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GcFilter {
    /// All loopless multigraphs with minimum degree 3.
    All,
    /// Only graphs without parallel edges.
    Simple,
}

/// All stable weighted graphs of the given genus up to isomorphism, sorted.
pub fn enumerate_stable_weighted(genus: usize) -> Result<Vec<Graph>> {
    if genus > 4 {
        return Err(Error::OutOfRange(format!("stable graph enumeration supports genus <= 4, got {genus}")));
    }
    let mut found = BTreeSet::new();
    let max_v = (2 * genus).saturating_sub(2).max(1);
    let max_e = (3 * genus).saturating_sub(3);
    for nv in 1..=max_v {
        let pairs: Vec<(usize, usize)> = (0..nv).flat_map(|a| (a..nv).map(move |b| (a, b))).collect();
        for ne in nv.saturating_sub(1)..=max_e {
            let h = ne + 1 - nv;
            if h > genus {
                continue;
            }
            let total_weight = genus - h;
            let mut chosen = Vec::with_capacity(ne);
            multisets(&pairs, ne, 0, &mut chosen, &mut |edges| {
                let g = Graph::from_parts(vec![0; nv], edges.to_vec());
                if !g.is_connected() {
                    return;
                }
                let mut w = vec![0u32; nv];
                compositions(total_weight as u32, 0, &mut w, &mut |weights| {
                    let gw = Graph::from_parts(weights.to_vec(), edges.to_vec());
                    if gw.is_stable() {
                        found.insert(canonical_form(&gw).0);
                    }
                });
            });
        }
    }
    Ok(found.into_iter().collect())
}

fn multisets<F: FnMut(&[(usize, usize)])>(pairs: &[(usize, usize)], k: usize, start: usize, chosen: &mut Vec<(usize, usize)>, f: &mut F) {
    if k == 0 {
        f(chosen);
        return;
    }
    for i in start..pairs.len() {
        chosen.push(pairs[i]);
        multisets(pairs, k - 1, i, chosen, f);
        chosen.pop();
    }
}

fn compositions<F: FnMut(&[u32])>(left: u32, pos: usize, w: &mut [u32], f: &mut F) {
    if pos + 1 == w.len() {
        w[pos] = left;
        f(w);
        return;
    }
    for x in 0..=left {
        w[pos] = x;
        compositions(left - x, pos + 1, w, f);
    }
}

/// Connected loopless multigraphs with `loops` loops, `edges` edges and
/// minimum degree 3, up to isomorphism, sorted.
pub fn enumerate_gc_graphs(loops: usize, edges: usize, filter: GcFilter) -> Result<Vec<Graph>> {
    if loops < 2 || edges < loops || edges > 3 * loops - 3 {
        return Err(Error::OutOfRange(format!("no graph-complex bigrade with {loops} loops and {edges} edges")));
    }
    let nv = edges + 1 - loops;
    if 3 * nv > 2 * edges {
        return Ok(Vec::new());
    }
    let max_deg = match filter {
        GcFilter::All => edges,
        GcFilter::Simple => nv - 1,
    };
    let mut seqs = Vec::new();
    degree_sequences(nv, 2 * edges, max_deg, &mut Vec::new(), &mut seqs);
    let max_mult = match filter {
        GcFilter::All => u32::MAX,
        GcFilter::Simple => 1,
    };
    let found: Vec<BTreeSet<Graph>> = seqs
        .par_iter()
        .map(|seq| {
            let mut out = BTreeSet::new();
            let mut search = MatrixSearch::new(seq, max_mult);
            search.row(0, &mut out);
            out
        })
        .collect();
    let all: BTreeSet<Graph> = found.into_iter().flatten().collect();
    Ok(all.into_iter().collect())
}

fn degree_sequences(n: usize, total: usize, cap: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    let used: usize = cur.iter().sum();
    let left = n - cur.len();
    if left == 0 {
        if used == total {
            out.push(cur.clone());
        }
        return;
    }
    let rest = total.saturating_sub(used);
    if rest < 3 * left {
        return;
    }
    let hi = cap.min(rest - 3 * (left - 1));
    for d in (3..=hi).rev() {
        if d * left < rest {
            break;
        }
        cur.push(d);
        degree_sequences(n, total, d, cur, out);
        cur.pop();
    }
}

struct MatrixSearch {
    n: usize,
    rem: Vec<u32>,
    target: Vec<u32>,
    mat: Vec<Vec<u32>>,
    max_mult: u32,
}

impl MatrixSearch {
    fn new(seq: &[usize], max_mult: u32) -> Self {
        let n = seq.len();
        let rem: Vec<u32> = seq.iter().map(|&d| d as u32).collect();
        MatrixSearch { n, target: rem.clone(), rem, mat: vec![vec![0; n]; n], max_mult }
    }

    /// Index of the closest earlier column interchangeable with `j` while
    /// filling row `i`.
    fn class_predecessor(&self, i: usize, j: usize) -> Option<usize> {
        (i + 1..j).rev().find(|&k| self.target[k] == self.target[j] && (0..i).all(|r| self.mat[r][k] == self.mat[r][j]))
    }

    fn row(&mut self, i: usize, out: &mut BTreeSet<Graph>) {
        if i == self.n {
            if self.rem.iter().all(|&r| r == 0) {
                let mut edges = Vec::new();
                for a in 0..self.n {
                    for b in a + 1..self.n {
                        for _ in 0..self.mat[a][b] {
                            edges.push((a, b));
                        }
                    }
                }
                let g = Graph::from_parts(vec![0; self.n], edges);
                if g.is_connected() {
                    out.insert(canonical_form(&g).0);
                }
            }
            return;
        }
        let preds: Vec<Option<usize>> = (0..self.n).map(|j| if j > i { self.class_predecessor(i, j) } else { None }).collect();
        let need = self.rem[i];
        self.fill(i, i + 1, need, &preds, out);
    }

    fn fill(&mut self, i: usize, j: usize, need: u32, preds: &[Option<usize>], out: &mut BTreeSet<Graph>) {
        if need == 0 {
            let saved: Vec<u32> = (j..self.n).map(|k| self.mat[i][k]).collect();
            for k in j..self.n {
                self.mat[i][k] = 0;
            }
            let own = std::mem::replace(&mut self.rem[i], 0);
            if self.feasible_after(i) {
                self.row(i + 1, out);
            }
            self.rem[i] = own;
            for (k, s) in (j..self.n).zip(saved) {
                self.mat[i][k] = s;
            }
            return;
        }
        if j == self.n {
            return;
        }
        let capacity: u32 = (j + 1..self.n).map(|k| self.rem[k].min(self.max_mult)).sum();
        let mut hi = need.min(self.rem[j]).min(self.max_mult);
        if let Some(p) = preds[j] {
            hi = hi.min(self.mat[i][p]);
        }
        let lo = need.saturating_sub(capacity);
        if lo > hi {
            return;
        }
        for m in (lo..=hi).rev() {
            self.mat[i][j] = m;
            self.rem[j] -= m;
            self.fill(i, j + 1, need - m, preds, out);
            self.rem[j] += m;
        }
        self.mat[i][j] = 0;
    }

    fn feasible_after(&self, i: usize) -> bool {
        let rest = &self.rem[i + 1..];
        let total: u32 = rest.iter().sum();
        if total % 2 == 1 {
            return false;
        }
        let count = rest.len() as u32;
        rest.iter().all(|&r| 2 * r <= total && (self.max_mult > 1 || r < count.max(1)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{builtin_graph, Family};

    #[test]
    fn genus_two_has_seven() {
        assert_eq!(enumerate_stable_weighted(2).unwrap().len(), 7);
        assert!(enumerate_stable_weighted(0).unwrap().is_empty());
    }

    #[test]
    fn three_loops_six_edges() {
        let all = enumerate_gc_graphs(3, 6, GcFilter::All).unwrap();
        let w3 = canonical_form(&builtin_graph(Family::Wheel, 3).unwrap()).0;
        assert!(all.contains(&w3));
        assert!(all.iter().any(Graph::has_parallel_edges));
        let simple = enumerate_gc_graphs(3, 6, GcFilter::Simple).unwrap();
        assert_eq!(simple, vec![w3]);
    }

    #[test]
    fn two_loops_only_multigraphs() {
        for e in 2..=3 {
            for g in enumerate_gc_graphs(2, e, GcFilter::All).unwrap() {
                assert!(g.has_parallel_edges());
            }
        }
        assert_eq!(enumerate_gc_graphs(2, 3, GcFilter::All).unwrap().len(), 1);
    }

    #[test]
    fn cubic_counts() {
        // connected simple cubic graphs on 4, 6, 8, 10 vertices: 1, 2, 5, 19
        for (h, count) in [(3, 1), (4, 2), (5, 5), (6, 19)] {
            let g = enumerate_gc_graphs(h, 3 * h - 3, GcFilter::Simple).unwrap();
            assert_eq!(g.len(), count, "loops {h}");
        }
    }
}
