//! Tropical importance sampling.
//!
//! The sampling density is `Psi_tr(x)^{-k} / I_tr` against `Omega`, where
//! `Psi_tr` is the dominant monomial of the graph polynomial in each sector
//! `x_{s_1} < ... < x_{s_E}` and `k = E / h` makes it projective. The
//! normalization `I_tr` is computed exactly by a recursion over edge subsets.

use crate::error::{Error, Result};
use crate::graph::Graph;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;

/// Largest edge count accepted by the subset recursion.
pub const MAX_TROPICAL_EDGES: usize = 18;

/// A point drawn from the tropical density.
#[derive(Debug, Clone, PartialEq)]
pub struct TropicalSample {
    /// Edge logarithms in the chart where the largest edge is one.
    pub log_x: Vec<f64>,
    /// `log Psi_tr(x)` at the sample.
    pub log_psi_tr: f64,
}

#[derive(Debug, Clone)]
pub struct TropicalSampler {
    n_edges: usize,
    k: BigRational,
    k_f64: f64,
    loops: Vec<u8>,
    j: Vec<f64>,
    i_tr: BigRational,
}

impl TropicalSampler {
    /// Sampler for `graph` with the projective exponent `k = E / h`.
    pub fn new(graph: &Graph) -> Result<TropicalSampler> {
        let e = graph.num_edges();
        let h = graph.loop_number();
        if h == 0 {
            return Err(Error::InvalidGraph("tropical sampling needs at least one loop".into()));
        }
        if !graph.is_connected() {
            return Err(Error::InvalidGraph("tropical sampling needs a connected graph".into()));
        }
        let k = BigRational::new(BigInt::from(e), BigInt::from(h));
        TropicalSampler::with_exponent(graph, k)
    }

    /// Sampler with an explicit exponent; the density is then projective
    /// only when `k h = E`.
    pub fn with_exponent(graph: &Graph, k: BigRational) -> Result<TropicalSampler> {
        let e = graph.num_edges();
        if e == 0 || e > MAX_TROPICAL_EDGES {
            return Err(Error::TooManyVariables(e, MAX_TROPICAL_EDGES));
        }
        let size = 1usize << e;
        let loops: Vec<u8> = (0..size).map(|m| graph.subgraph_loop_number(m as u64) as u8).collect();
        let mut exact = vec![BigRational::zero(); size];
        exact[0] = BigRational::one();
        let full = size - 1;
        let mut masks: Vec<usize> = (1..full).collect();
        masks.sort_by_key(|m| m.count_ones());
        for &s in &masks {
            let a = BigRational::from_integer(BigInt::from(s.count_ones())) - k.clone() * BigRational::from_integer(BigInt::from(loops[s]));
            if !a.is_positive() {
                return Err(Error::Divergent(format!("edge subset {} has {} <= k h", mask_label(s), s.count_ones())));
            }
            let mut acc = BigRational::zero();
            for bit in 0..e {
                if s >> bit & 1 == 1 {
                    acc += exact[s & !(1 << bit)].clone();
                }
            }
            exact[s] = acc / a;
        }
        let mut i_tr = BigRational::zero();
        for bit in 0..e {
            i_tr += exact[full & !(1 << bit)].clone();
        }
        let j = exact.iter().map(|v| v.to_f64().unwrap_or(f64::NAN)).collect();
        let k_f64 = k.to_f64().unwrap_or(f64::NAN);
        Ok(TropicalSampler { n_edges: e, k, k_f64, loops, j, i_tr })
    }

    pub fn n_edges(&self) -> usize {
        self.n_edges
    }

    pub fn exponent(&self) -> &BigRational {
        &self.k
    }

    pub fn exponent_f64(&self) -> f64 {
        self.k_f64
    }

    /// Exact normalization `I_tr = int Psi_tr^{-k} Omega`.
    pub fn normalization(&self) -> &BigRational {
        &self.i_tr
    }

    pub fn normalization_f64(&self) -> f64 {
        self.i_tr.to_f64().unwrap_or(f64::NAN)
    }

    /// Draws a point; the estimator for `g Omega` is
    /// `g(x) * I_tr * Psi_tr(x)^k`.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> TropicalSample {
        let e = self.n_edges;
        let mut order = vec![0usize; e];
        let mut s = (1usize << e) - 1;
        for pos in (0..e).rev() {
            let mut total = 0.0;
            for bit in 0..e {
                if s >> bit & 1 == 1 {
                    total += self.j[s & !(1 << bit)];
                }
            }
            let mut r = rng.gen::<f64>() * total;
            let mut pick = None;
            for bit in 0..e {
                if s >> bit & 1 == 1 {
                    pick = Some(bit);
                    r -= self.j[s & !(1 << bit)];
                    if r < 0.0 {
                        break;
                    }
                }
            }
            let bit = pick.expect("nonempty subset");
            order[pos] = bit;
            s &= !(1 << bit);
        }
        // t_i for the sector {order[0..i]}, i = 1..e-1
        let mut log_t = vec![0.0; e];
        let mut log_psi_tr = 0.0;
        let mut gamma = 0usize;
        for i in 1..e {
            gamma |= 1 << order[i - 1];
            let h = self.loops[gamma] as f64;
            let a = i as f64 - self.k_f64 * h;
            let u = 1.0 - rng.gen::<f64>();
            log_t[i] = u.ln() / a;
            log_psi_tr += h * log_t[i];
        }
        let mut log_x = vec![0.0; e];
        let mut acc = 0.0;
        for j in (0..e - 1).rev() {
            acc += log_t[j + 1];
            log_x[order[j]] = acc;
        }
        TropicalSample { log_x, log_psi_tr }
    }
}

/// Logarithm of the tropical graph polynomial at a point.
pub fn log_psi_tropical(graph: &Graph, log_x: &[f64]) -> f64 {
    let e = graph.num_edges();
    let mut order: Vec<usize> = (0..e).collect();
    order.sort_by(|&a, &b| log_x[a].total_cmp(&log_x[b]).then(a.cmp(&b)));
    let mut gamma = 0u64;
    let mut prev = 0;
    let mut total = 0.0;
    for &edge in &order {
        gamma |= 1 << edge;
        let h = graph.subgraph_loop_number(gamma);
        total += (h - prev) as f64 * log_x[edge];
        prev = h;
    }
    total
}

fn mask_label(mask: usize) -> String {
    let ids: Vec<String> = (0..usize::BITS as usize).filter(|b| mask >> b & 1 == 1).map(|b| (b + 1).to_string()).collect();
    format!("{{{}}}", ids.join(","))
}
