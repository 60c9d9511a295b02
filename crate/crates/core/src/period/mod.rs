//! Monte Carlo evaluation of projective Feynman period integrals.

mod constants;
mod expr;
mod tropical;

pub use constants::{pi_rational, to_decimal, zeta, zeta2, zeta2_rational, zeta_rational};
pub use expr::Target;
pub use tropical::{log_psi_tropical, TropicalSample, TropicalSampler, MAX_TROPICAL_EDGES};

use crate::error::{Error, Result};
use crate::forms::{FormSpec, GraphFormEvaluator};
use crate::graph::Graph;
use crate::poly::{graph_polynomial, mono_exp, Poly};
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

/// Number of independent random streams per integration. Fixed so that
/// results do not depend on the thread count.
pub const SHARDS: u64 = 64;

/// Environment variable that sets the default worker count.
pub const THREADS_ENV: &str = "PERIODFORGE_THREADS";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SamplerKind {
    /// Tropical importance sampling.
    Tropical,
    /// Uniform sampling on the simplex `sum x = 1`.
    Dirichlet,
}

impl std::str::FromStr for SamplerKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<SamplerKind> {
        match s {
            "tropical" => Ok(SamplerKind::Tropical),
            "dirichlet" | "uniform" => Ok(SamplerKind::Dirichlet),
            _ => Err(Error::OutOfRange(format!("unknown sampler '{s}'"))),
        }
    }
}

#[derive(Debug, Clone)]
enum Kind {
    Rational { numerator: Vec<(f64, Vec<(usize, u32)>)>, k: u32 },
    Canonical(GraphFormEvaluator),
}

/// A projective integrand `g(x) Omega_G` on the edge variables of a graph.
#[derive(Debug, Clone)]
pub struct Integrand {
    graph: Graph,
    kind: Kind,
    psi_terms: Vec<Vec<usize>>,
    chart: Option<usize>,
}

impl Integrand {
    /// The residue `Omega_G / Psi_G^2`.
    pub fn residue(graph: &Graph) -> Result<Integrand> {
        Integrand::rational(graph, &Poly::one(), 2)
    }

    /// `N(x) / Psi_G^k Omega_G`; `N` must be homogeneous with
    /// `deg N - k h = -E`.
    pub fn rational(graph: &Graph, numerator: &Poly, k: u32) -> Result<Integrand> {
        let e = graph.num_edges();
        let h = graph.loop_number();
        if !graph.is_connected() || h == 0 {
            return Err(Error::InvalidGraph("period integrands need a connected graph with loops".into()));
        }
        if numerator.is_zero() || !numerator.is_homogeneous() {
            return Err(Error::NonProjective("numerator must be a nonzero homogeneous polynomial".into()));
        }
        let deg = numerator.degree().unwrap_or(0) as i64;
        if deg - (k as i64) * (h as i64) != -(e as i64) {
            return Err(Error::NonProjective(format!("degree {deg} - {k}*{h} differs from -{e}; the form is not projective")));
        }
        if numerator.num_vars_used() > e {
            return Err(Error::Dimension("numerator uses variables beyond the edge count".into()));
        }
        let terms = numerator
            .terms()
            .map(|(m, c)| {
                let exps = (0..e).filter_map(|v| {
                    let p = mono_exp(m, v);
                    (p > 0).then_some((v, p))
                });
                (c as f64, exps.collect())
            })
            .collect();
        Ok(Integrand { graph: graph.clone(), kind: Kind::Rational { numerator: terms, k }, psi_terms: psi_terms(graph)?, chart: None })
    }

    /// The canonical integrand `omega^{n_1} ^ ... ^ omega^{n_r}` pulled back
    /// along the graph Laplacian, with the sign fixed by the edge order.
    pub fn canonical(graph: &Graph, spec: &FormSpec) -> Result<Integrand> {
        let ev = GraphFormEvaluator::new(graph, spec)?;
        Ok(Integrand { graph: graph.clone(), kind: Kind::Canonical(ev), psi_terms: psi_terms(graph)?, chart: None })
    }

    /// Evaluate in the affine chart where edge `e` (0-based) equals one.
    pub fn in_chart(mut self, e: usize) -> Result<Integrand> {
        if e >= self.graph.num_edges() {
            return Err(Error::UnknownEdge(e + 1));
        }
        self.chart = Some(e);
        Ok(self)
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn chart(&self) -> Option<usize> {
        self.chart
    }

    /// Returns `(c, s)` with `g(x) = c * exp(s)`.
    pub fn log_density(&self, log_x: &[f64]) -> Result<(f64, f64)> {
        let e = self.graph.num_edges();
        if log_x.len() != e {
            return Err(Error::Dimension(format!("{} coordinates for {} edges", log_x.len(), e)));
        }
        let shifted: Vec<f64>;
        let (lx, jacobian) = match self.chart {
            Some(c) => {
                shifted = log_x.iter().map(|v| v - log_x[c]).collect();
                (&shifted[..], -(e as f64) * log_x[c])
            }
            None => (log_x, 0.0),
        };
        let (c, s) = self.chart_density(lx)?;
        Ok((c, s + jacobian))
    }

    fn chart_density(&self, lx: &[f64]) -> Result<(f64, f64)> {
        match &self.kind {
            Kind::Canonical(ev) => ev.density(lx),
            Kind::Rational { numerator, k } => {
                let (psi_sign, log_psi) = log_sum_exp(self.psi_terms.iter().map(|t| (1.0, t.iter().map(|&v| lx[v]).sum())));
                if psi_sign <= 0.0 {
                    return Err(Error::SingularPoint);
                }
                let (num, log_num) = log_sum_exp(numerator.iter().map(|(c, exps)| (*c, exps.iter().map(|&(v, p)| p as f64 * lx[v]).sum())));
                Ok((num, log_num - *k as f64 * log_psi))
            }
        }
    }

    /// `g(x)` at a positive point.
    pub fn density_at(&self, x: &[f64]) -> Result<f64> {
        let logs: Vec<f64> = x.iter().map(|v| v.ln()).collect();
        let (c, s) = self.log_density(&logs)?;
        Ok(c * s.exp())
    }
}

fn psi_terms(graph: &Graph) -> Result<Vec<Vec<usize>>> {
    let psi = graph_polynomial(graph)?;
    let e = graph.num_edges();
    Ok(psi.terms().map(|(m, _)| (0..e).filter(|&v| mono_exp(m, v) > 0).collect()).collect())
}

/// `sum c_i exp(l_i)` as `(sign, log |sum|)`.
fn log_sum_exp<I: Iterator<Item = (f64, f64)> + Clone>(terms: I) -> (f64, f64) {
    let top = terms.clone().map(|(_, l)| l).fold(f64::NEG_INFINITY, f64::max);
    if !top.is_finite() {
        return (0.0, 0.0);
    }
    let c: f64 = terms.map(|(c, l)| c * (l - top).exp()).sum();
    if c == 0.0 {
        return (0.0, 0.0);
    }
    (c.signum(), top + c.abs().ln())
}

/// Monte Carlo estimate with its standard error.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IntegralEstimate {
    pub mean: f64,
    pub stderr: f64,
    pub samples: u64,
    pub seed: u64,
    pub sampler: SamplerKind,
}

impl IntegralEstimate {
    pub fn exact_zero(seed: u64, sampler: SamplerKind) -> IntegralEstimate {
        IntegralEstimate { mean: 0.0, stderr: 0.0, samples: 0, seed, sampler }
    }

    /// Standardized deviation `(mean - target) / stderr`.
    pub fn z_score(&self, target: f64) -> Result<f64> {
        compare_constant(self, target)
    }

    /// `|mean - target| <= sigmas * stderr + relative * |target|`.
    pub fn agrees_with(&self, target: f64, sigmas: f64, relative: f64) -> bool {
        (self.mean - target).abs() <= sigmas * self.stderr + relative * target.abs()
    }
}

/// Options shared by all integration entry points.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IntegrationOptions {
    pub samples: u64,
    pub seed: u64,
    pub sampler: SamplerKind,
    /// Worker threads; `None` reads `PERIODFORGE_THREADS` and otherwise uses
    /// the global pool.
    pub threads: Option<usize>,
}

impl IntegrationOptions {
    pub fn new(samples: u64, seed: u64) -> IntegrationOptions {
        IntegrationOptions { samples, seed, sampler: SamplerKind::Tropical, threads: None }
    }

    pub fn with_sampler(mut self, sampler: SamplerKind) -> IntegrationOptions {
        self.sampler = sampler;
        self
    }

    pub fn with_threads(mut self, threads: usize) -> IntegrationOptions {
        self.threads = Some(threads);
        self
    }
}

/// Mixes a seed with a stream index.
pub fn derive_seed(seed: u64, stream: u64) -> u64 {
    let mut z = seed ^ stream.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[derive(Debug, Clone, Copy, Default)]
struct Moments {
    n: u64,
    mean: f64,
    m2: f64,
}

impl Moments {
    fn push(&mut self, v: f64) {
        self.n += 1;
        let d = v - self.mean;
        self.mean += d / self.n as f64;
        self.m2 += d * (v - self.mean);
    }

    fn merge(self, o: Moments) -> Moments {
        if self.n == 0 {
            return o;
        }
        if o.n == 0 {
            return self;
        }
        let n = self.n + o.n;
        let d = o.mean - self.mean;
        let mean = self.mean + d * o.n as f64 / n as f64;
        let m2 = self.m2 + o.m2 + d * d * (self.n as f64) * (o.n as f64) / n as f64;
        Moments { n, mean, m2 }
    }
}

enum Sampler {
    Tropical(TropicalSampler, f64),
    Dirichlet(f64),
}

impl Sampler {
    fn build(integrand: &Integrand, kind: SamplerKind) -> Result<Sampler> {
        let e = integrand.graph.num_edges();
        match kind {
            SamplerKind::Tropical => {
                let s = TropicalSampler::new(&integrand.graph)?;
                let log_norm = s.normalization_f64().ln();
                Ok(Sampler::Tropical(s, log_norm))
            }
            SamplerKind::Dirichlet => {
                let log_fact: f64 = (1..e).map(|i| (i as f64).ln()).sum();
                Ok(Sampler::Dirichlet(-log_fact))
            }
        }
    }

    /// Draws a point and returns its log coordinates together with the
    /// logarithm of `1 / density`.
    fn draw(&self, rng: &mut ChaCha8Rng, e: usize) -> (Vec<f64>, f64) {
        match self {
            Sampler::Tropical(s, log_norm) => {
                let p = s.sample(rng);
                let w = log_norm + s.exponent_f64() * p.log_psi_tr;
                (p.log_x, w)
            }
            Sampler::Dirichlet(log_const) => {
                let raw: Vec<f64> = (0..e).map(|_| -(1.0 - rng.gen::<f64>()).ln()).collect();
                let total: f64 = raw.iter().sum();
                (raw.iter().map(|v| (v / total).ln()).collect(), *log_const)
            }
        }
    }
}

fn thread_count(opts: &IntegrationOptions) -> Option<usize> {
    opts.threads.or_else(|| std::env::var(THREADS_ENV).ok().and_then(|v| v.trim().parse().ok())).filter(|&t| t > 0)
}

fn run_shards<T, F>(opts: &IntegrationOptions, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(u64) -> Result<T> + Sync + Send,
{
    let work = || (0..SHARDS).into_par_iter().map(&f).collect::<Result<Vec<T>>>();
    match thread_count(opts) {
        Some(t) => {
            let pool =
                rayon::ThreadPoolBuilder::new().num_threads(t).build().map_err(|e| Error::OutOfRange(format!("thread pool: {e}")))?;
            pool.install(work)
        }
        None => work(),
    }
}

/// Estimates `int_{P} g Omega` with the given options.
pub fn integrate(integrand: &Integrand, opts: &IntegrationOptions) -> Result<IntegralEstimate> {
    if opts.samples < 2 {
        return Err(Error::OutOfRange("at least two samples are needed".into()));
    }
    let sampler = Sampler::build(integrand, opts.sampler)?;
    let e = integrand.graph.num_edges();
    let shards = run_shards(opts, |shard| {
        let count = opts.samples / SHARDS + u64::from(shard < opts.samples % SHARDS);
        let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(opts.seed, shard));
        let mut m = Moments::default();
        for _ in 0..count {
            let (log_x, log_w) = sampler.draw(&mut rng, e);
            let (c, s) = integrand.log_density(&log_x)?;
            let v = c * (s + log_w).exp();
            if !v.is_finite() {
                let x: Vec<String> = log_x.iter().map(|l| format!("{:e}", l.exp())).collect();
                return Err(Error::NonFinite(format!("integrand value {v} at x = [{}]", x.join(", "))));
            }
            m.push(v);
        }
        Ok(m)
    })?;
    let total = shards.into_iter().fold(Moments::default(), Moments::merge);
    let var = if total.n > 1 { total.m2 / (total.n - 1) as f64 } else { 0.0 };
    Ok(IntegralEstimate {
        mean: total.mean,
        stderr: (var / total.n as f64).sqrt(),
        samples: total.n,
        seed: opts.seed,
        sampler: opts.sampler,
    })
}

/// `I_G(omega)` for a single graph, reported with positive orientation.
pub fn integrate_canonical(graph: &Graph, spec: &FormSpec, opts: &IntegrationOptions) -> Result<IntegralEstimate> {
    let mut est = integrate_canonical_oriented(graph, spec, opts)?;
    est.mean = est.mean.abs();
    Ok(est)
}

/// `I_G(omega)` with the orientation given by the edge order of `graph`.
pub fn integrate_canonical_oriented(graph: &Graph, spec: &FormSpec, opts: &IntegrationOptions) -> Result<IntegralEstimate> {
    integrate(&Integrand::canonical(graph, spec)?, opts)
}

/// `sum_G c_G I_G(omega)` over a graph-complex chain, with each graph
/// oriented by its stored edge order.
pub fn integrate_chain(terms: &[(BigRational, Graph)], spec: &FormSpec, opts: &IntegrationOptions) -> Result<IntegralEstimate> {
    let live: Vec<&(BigRational, Graph)> = terms.iter().filter(|(c, _)| !c.is_zero()).collect();
    if live.is_empty() {
        return Ok(IntegralEstimate::exact_zero(opts.seed, opts.sampler));
    }
    let mut mean = 0.0;
    let mut var = 0.0;
    let mut samples = 0;
    for (i, (c, g)) in live.iter().enumerate() {
        let sub = IntegrationOptions { seed: derive_seed(opts.seed, SHARDS + i as u64), ..*opts };
        let est = integrate_canonical_oriented(g, spec, &sub)?;
        let cf = c.to_f64().unwrap_or(f64::NAN);
        mean += cf * est.mean;
        var += cf * cf * est.stderr * est.stderr;
        samples += est.samples;
    }
    Ok(IntegralEstimate { mean, stderr: var.sqrt(), samples, seed: opts.seed, sampler: opts.sampler })
}

/// The residue `int Omega_G / Psi_G^2`.
pub fn integrate_residue(graph: &Graph, opts: &IntegrationOptions) -> Result<IntegralEstimate> {
    integrate(&Integrand::residue(graph)?, opts)
}

/// Standardized deviation of an estimate from a target value. An exact
/// estimate with zero error is accepted only when it equals the target.
pub fn compare_constant(est: &IntegralEstimate, target: f64) -> Result<f64> {
    let diff = est.mean - target;
    if est.stderr == 0.0 {
        if diff == 0.0 {
            return Ok(0.0);
        }
        return Err(Error::ZeroStderr);
    }
    Ok(diff / est.stderr)
}
