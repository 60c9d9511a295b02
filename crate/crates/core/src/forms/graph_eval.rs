//! Fast pointwise evaluation of canonical forms pulled back to a graph.
//!
//! With `dLambda = sum_e c_e c_e^T dx_e`, the trace of a product of one-forms
//! reduces to cyclic products of the projection matrix
//! `Pi_ef = sqrt(x_e x_f) c_e^T Lambda^{-1} c_f`, which is basis independent
//! and has entries in `[-1, 1]`. The cycle basis is rebuilt at every point
//! from the minimum spanning tree so that `Lambda` stays well conditioned.

use super::{shuffle_sign, FormSpec};
use crate::error::{Error, Result};
use crate::graph::Graph;
use std::collections::HashMap;

/// Evaluates `omega^{n_1} ^ ... = g * Omega_G` on a graph.
#[derive(Debug, Clone)]
pub struct GraphFormEvaluator {
    graph: Graph,
    degrees: Vec<usize>,
    loops: usize,
}

impl GraphFormEvaluator {
    pub fn new(graph: &Graph, spec: &FormSpec) -> Result<GraphFormEvaluator> {
        if !graph.is_connected() || !graph.is_unweighted() {
            return Err(Error::InvalidGraph("canonical integrands need a connected unweighted graph".into()));
        }
        let m = graph.num_edges();
        if m > crate::poly::MAX_VARS {
            return Err(Error::TooManyVariables(m, crate::poly::MAX_VARS));
        }
        if spec.degree() + 1 != m {
            return Err(Error::DegreeMismatch(format!("form of degree {} on a graph with {} edges", spec.degree(), m)));
        }
        Ok(GraphFormEvaluator { graph: graph.clone(), degrees: spec.degrees().to_vec(), loops: graph.loop_number() })
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    /// Projection matrix at the point with the given edge logarithms.
    pub fn projection(&self, log_x: &[f64]) -> Result<Vec<Vec<f64>>> {
        let m = self.graph.num_edges();
        let h = self.loops;
        let mut order: Vec<usize> = (0..m).collect();
        order.sort_by(|&a, &b| log_x[a].total_cmp(&log_x[b]).then(a.cmp(&b)));
        let cols = fundamental_columns(&self.graph, &order, h);
        let top = log_x.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let x: Vec<f64> = log_x.iter().map(|&l| (l - top).exp()).collect();
        let mut lam = vec![vec![0.0; h]; h];
        for e in 0..m {
            for i in 0..h {
                if cols[e][i] == 0 {
                    continue;
                }
                for j in 0..h {
                    lam[i][j] += x[e] * (cols[e][i] * cols[e][j]) as f64;
                }
            }
        }
        let l = cholesky(&lam).ok_or(Error::SingularPoint)?;
        let y: Vec<Vec<f64>> = (0..m)
            .map(|e| {
                let s = x[e].sqrt();
                let rhs: Vec<f64> = cols[e].iter().map(|&c| c as f64 * s).collect();
                forward_solve(&l, &rhs)
            })
            .collect();
        Ok((0..m).map(|e| (0..m).map(|f| dot(&y[e], &y[f])).collect()).collect())
    }

    /// Returns `(c, s)` with `g(x) = c * exp(s)`, where the form equals
    /// `g * Omega_G` and `Omega_G` is taken with its standard sign.
    pub fn density(&self, log_x: &[f64]) -> Result<(f64, f64)> {
        let m = self.graph.num_edges();
        if log_x.len() != m {
            return Err(Error::Dimension(format!("{} coordinates for {} edges", log_x.len(), m)));
        }
        if log_x.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite(format!("{log_x:?}")));
        }
        let pi = self.projection(log_x)?;
        let dropped = (0..m).max_by(|&a, &b| log_x[a].total_cmp(&log_x[b]).then(b.cmp(&a))).unwrap_or(0);
        let free: Vec<usize> = (0..m).filter(|&e| e != dropped).collect();
        let local: Vec<Vec<f64>> = free.iter().map(|&a| free.iter().map(|&b| pi[a][b]).collect()).collect();
        let top = top_dlog_coefficient(&local, &self.degrees);
        let sign = if (dropped + 1) % 2 == 0 { 1.0 } else { -1.0 };
        let shift = log_x.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let log_scale = -log_x.iter().map(|l| l - shift).sum::<f64>() - shift * m as f64;
        Ok((sign * top, log_scale))
    }

    /// `g(x)` at a positive point.
    pub fn density_at(&self, x: &[f64]) -> Result<f64> {
        let logs: Vec<f64> = x.iter().map(|v| v.ln()).collect();
        let (c, s) = self.density(&logs)?;
        Ok(c * s.exp())
    }
}

/// Edge columns of the fundamental cycle basis for the spanning tree grown
/// greedily along `order`.
fn fundamental_columns(g: &Graph, order: &[usize], h: usize) -> Vec<Vec<i64>> {
    let n = g.num_vertices();
    let m = g.num_edges();
    let mut uf = crate::graph::UnionFind::new(n);
    let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    let mut non_tree = Vec::with_capacity(h);
    for &e in order {
        let (u, v) = g.edges()[e];
        if uf.union(u, v) {
            adj[u].push((v, e));
            adj[v].push((u, e));
        } else {
            non_tree.push(e);
        }
    }
    let mut parent: Vec<Option<(usize, usize)>> = vec![None; n];
    let mut depth = vec![0usize; n];
    let mut seen = vec![false; n];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(a) = stack.pop() {
        for &(b, e) in &adj[a] {
            if !seen[b] {
                seen[b] = true;
                parent[b] = Some((a, e));
                depth[b] = depth[a] + 1;
                stack.push(b);
            }
        }
    }
    let mut cols = vec![vec![0i64; h]; m];
    for (i, &e) in non_tree.iter().enumerate() {
        let (u, v) = g.edges()[e];
        cols[e][i] = 1;
        // walk v -> u through the tree
        let (mut a, mut b) = (v, u);
        let mut tail = Vec::new();
        while a != b {
            if depth[a] >= depth[b] {
                let (p, te) = parent[a].expect("rooted tree");
                let (s, _) = g.edges()[te];
                cols[te][i] += if s == a { 1 } else { -1 };
                a = p;
            } else {
                let (p, te) = parent[b].expect("rooted tree");
                tail.push((p, b, te));
                b = p;
            }
        }
        for (from, _, te) in tail {
            let (s, _) = g.edges()[te];
            cols[te][i] += if s == from { 1 } else { -1 };
        }
    }
    cols
}

fn cholesky(a: &[Vec<f64>]) -> Option<Vec<Vec<f64>>> {
    let n = a.len();
    let mut l = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in 0..=i {
            let s: f64 = a[i][j] - (0..j).map(|k| l[i][k] * l[j][k]).sum::<f64>();
            if i == j {
                if !(s > 0.0) {
                    return None;
                }
                l[i][i] = s.sqrt();
            } else {
                l[i][j] = s / l[j][j];
            }
        }
    }
    Some(l)
}

fn forward_solve(l: &[Vec<f64>], b: &[f64]) -> Vec<f64> {
    let n = b.len();
    let mut y = vec![0.0; n];
    for i in 0..n {
        let s: f64 = b[i] - (0..i).map(|k| l[i][k] * y[k]).sum::<f64>();
        y[i] = s / l[i][i];
    }
    y
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Coefficients of `tr(M^n)` on `n`-subsets, in dlog coordinates, where
/// `M = sum_e Pi[e][.]`-type rank-one one-forms.
pub(crate) fn power_dlog_coefficients(pi: &[Vec<f64>], n: usize) -> HashMap<u32, f64> {
    let k = pi.len();
    let mut out: HashMap<u32, f64> = HashMap::new();
    if n == 0 || n % 2 == 0 || n > k {
        return out;
    }
    if n == 1 {
        for s in 0..k {
            out.insert(1 << s, pi[s][s]);
        }
        return out;
    }
    for s in 0..k {
        let others: Vec<usize> = (s + 1..k).collect();
        let r = others.len();
        if r + 1 < n {
            continue;
        }
        // paths[mask][last] with mask over `others`, last in 0..r
        let size = 1usize << r;
        let mut paths = vec![0.0f64; size * r];
        for (li, &j) in others.iter().enumerate() {
            paths[(1 << li) * r + li] = pi[s][j];
        }
        let mut masks: Vec<usize> = (1..size).filter(|m| (m.count_ones() as usize) < n).collect();
        masks.sort_by_key(|m| m.count_ones());
        for &mask in &masks {
            let len = mask.count_ones() as usize;
            for last in 0..r {
                let v = paths[mask * r + last];
                if mask >> last & 1 == 0 || v == 0.0 {
                    continue;
                }
                if len + 1 == n {
                    let set = (1u32 << s)
                        | others.iter().enumerate().filter(|(li, _)| mask >> li & 1 == 1).fold(0u32, |acc, (_, &j)| acc | 1 << j);
                    *out.entry(set).or_insert(0.0) += n as f64 * v * pi[others[last]][s];
                    continue;
                }
                for nxt in 0..r {
                    if mask >> nxt & 1 == 1 {
                        continue;
                    }
                    let flips = (mask >> (nxt + 1)).count_ones();
                    let sign = if flips % 2 == 0 { 1.0 } else { -1.0 };
                    paths[(mask | 1 << nxt) * r + nxt] += sign * v * pi[others[last]][others[nxt]];
                }
            }
        }
    }
    out
}

/// Top coefficient of the wedge of `tr(M^{n_i})` over all indices.
pub(crate) fn top_dlog_coefficient(pi: &[Vec<f64>], degrees: &[usize]) -> f64 {
    let k = pi.len();
    let full = if k == 32 { u32::MAX } else { (1u32 << k) - 1 };
    let mut acc: Option<HashMap<u32, f64>> = None;
    for &n in degrees {
        let p = power_dlog_coefficients(pi, n);
        acc = Some(match acc {
            None => p,
            Some(w) => {
                let mut out: HashMap<u32, f64> = HashMap::new();
                for (&a, &va) in &w {
                    for (&b, &vb) in &p {
                        if a & b == 0 {
                            *out.entry(a | b).or_insert(0.0) += shuffle_sign(a, b) as f64 * va * vb;
                        }
                    }
                }
                out
            }
        });
    }
    acc.and_then(|w| w.get(&full).copied()).unwrap_or(0.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::canonical_form_numeric;
    use crate::graph::{builtin_graph, Family};
    use crate::poly::{cycle_basis, graph_polynomial, laplacian};

    #[test]
    fn wheel_three_density_is_ten_over_psi_squared() {
        let g = builtin_graph(Family::Wheel, 3).unwrap();
        let ev = GraphFormEvaluator::new(&g, &FormSpec::new(vec![5]).unwrap()).unwrap();
        let psi = graph_polynomial(&g).unwrap();
        let x = [0.3, 1.7, 0.9, 2.2, 0.45, 1.1];
        let d = ev.density_at(&x).unwrap();
        let expected = 10.0 / psi.eval_f64(&x).powi(2);
        assert!((d.abs() - expected).abs() < 1e-10 * expected, "{d} vs {expected}");
    }

    #[test]
    fn agrees_with_generic_route() {
        let g = builtin_graph(Family::Wheel, 3).unwrap();
        let spec = FormSpec::new(vec![5]).unwrap();
        let ev = GraphFormEvaluator::new(&g, &spec).unwrap();
        let lap = laplacian(&g, &cycle_basis(&g).unwrap()).unwrap();
        let x = [0.3, 1.7, 0.9, 2.2, 0.45, 1.0];
        let chart = canonical_form_numeric(&lap, &spec, &x[..5]).unwrap();
        // chart coefficient of g * Omega with the last variable fixed
        let expected = ev.density_at(&x).unwrap() * if 6 % 2 == 0 { 1.0 } else { -1.0 };
        assert!((chart - expected).abs() < 1e-10 * expected.abs());
    }
}
