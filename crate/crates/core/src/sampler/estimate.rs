use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::WeightedGraph;

use super::crst::MarkedCrst;
use super::rng::RngStream;
use super::walk::{wilson_ust, WalkTable};

/// Batch count for batch-means standard errors.
pub const BATCHES: usize = 100;
/// Two-sided 99% normal quantile.
pub const Z99: f64 = 2.576;
/// Shortest chain [`estimate_looping`] accepts.
pub const MIN_STEPS: u64 = 10_000;

/// Point estimate with a 99% confidence half-width.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EstimateReport {
    pub estimate: f64,
    pub stderr: f64,
    pub half_width: f64,
    pub samples: u64,
    pub seed: u64,
}

impl EstimateReport {
    pub fn new(estimate: f64, stderr: f64, samples: u64, seed: u64) -> Self {
        EstimateReport { estimate, stderr, half_width: Z99 * stderr, samples, seed }
    }

    /// Estimate `mean` with the standard error of the given batch values.
    pub fn from_batches(mean: f64, batches: &[f64], samples: u64, seed: u64) -> Self {
        let k = batches.len() as f64;
        let stderr = if batches.len() < 2 {
            0.0
        } else {
            let m = batches.iter().sum::<f64>() / k;
            (batches.iter().map(|b| (b - m).powi(2)).sum::<f64>() / (k - 1.0) / k).sqrt()
        };
        Self::new(mean, stderr, samples, seed)
    }

    /// Proportion of `hits` among `n` independent trials.
    pub fn proportion(hits: u64, n: u64, seed: u64) -> Self {
        let p = hits as f64 / n as f64;
        Self::new(p, (p * (1.0 - p) / n as f64).sqrt(), n, seed)
    }

    /// Pools two estimates of the same quantity, weighting by sample count.
    pub fn merge(&self, other: &EstimateReport) -> EstimateReport {
        let (a, b) = (self.samples as f64, other.samples as f64);
        let n = a + b;
        let estimate = (a * self.estimate + b * other.estimate) / n;
        let stderr = ((a * self.stderr).powi(2) + (b * other.stderr).powi(2)).sqrt() / n;
        Self::new(estimate, stderr, self.samples + other.samples, self.seed)
    }

    /// `true` when `value` lies within `sigmas` standard errors.
    pub fn within(&self, value: f64, sigmas: f64) -> bool {
        (self.estimate - value).abs() <= sigmas * self.stderr
    }
}

/// Looping-rate estimates from one or more chains.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LoopingEstimate {
    pub rho: EstimateReport,
    pub tau: EstimateReport,
    /// Mean length of loops counted by `tau`.
    pub lambda: EstimateReport,
    /// `1 / rho`.
    pub mean_lerw_loop: EstimateReport,
    /// Fraction of steps that started with the mark at each vertex.
    pub mark_fraction: Vec<f64>,
}

impl LoopingEstimate {
    pub fn merge(&self, other: &LoopingEstimate) -> LoopingEstimate {
        let (a, b) = (self.rho.samples as f64, other.rho.samples as f64);
        LoopingEstimate {
            rho: self.rho.merge(&other.rho),
            tau: self.tau.merge(&other.tau),
            lambda: self.lambda.merge(&other.lambda),
            mean_lerw_loop: self.mean_lerw_loop.merge(&other.mean_lerw_loop),
            mark_fraction: self
                .mark_fraction
                .iter()
                .zip(&other.mark_fraction)
                .map(|(x, y)| (a * x + b * y) / (a + b))
                .collect(),
        }
    }
}

/// Runs the marked CRST chain for `steps` steps from `state`, observing
/// loops from the state's observer vertex.
pub fn run_chain(g: &WeightedGraph, table: &WalkTable, mut state: MarkedCrst, steps: u64, rng: &mut RngStream) -> LoopingEstimate {
    let batch_len = (steps / BATCHES as u64).max(1);
    let mut path = Vec::with_capacity(g.vertex_count());
    let mut marks = vec![0u64; g.vertex_count()];
    let (mut all, mut long, mut long_len) = (0u64, 0u64, 0u64);
    let mut rho_b = Vec::with_capacity(BATCHES);
    let mut tau_b = Vec::with_capacity(BATCHES);
    let mut lam_b = Vec::with_capacity(BATCHES);
    let (mut ba, mut bl, mut bll, mut bn) = (0u64, 0u64, 0u64, 0u64);
    for t in 0..steps {
        marks[state.mark()] += 1;
        if let Some(ev) = state.step(g, table, &mut path, rng) {
            ba += 1;
            if !ev.backtrack {
                bl += 1;
                bll += ev.length as u64;
            }
        }
        bn += 1;
        let last = t + 1 == steps;
        if (bn == batch_len && rho_b.len() + 1 < BATCHES) || last {
            rho_b.push(ba as f64 / bn as f64);
            tau_b.push(bl as f64 / bn as f64);
            if bl > 0 {
                lam_b.push(bll as f64 / bl as f64);
            }
            all += ba;
            long += bl;
            long_len += bll;
            (ba, bl, bll, bn) = (0, 0, 0, 0);
        }
    }
    let seed = rng.seed();
    let n = steps as f64;
    let rho = EstimateReport::from_batches(all as f64 / n, &rho_b, steps, seed);
    let tau = EstimateReport::from_batches(long as f64 / n, &tau_b, steps, seed);
    let lambda_mean = if long > 0 { long_len as f64 / long as f64 } else { f64::NAN };
    let lambda = EstimateReport::from_batches(lambda_mean, &lam_b, steps, seed);
    let inv = 1.0 / rho.estimate;
    let mean_lerw_loop = EstimateReport::new(inv, rho.stderr * inv * inv, steps, seed);
    LoopingEstimate { rho, tau, lambda, mean_lerw_loop, mark_fraction: marks.iter().map(|&m| m as f64 / n).collect() }
}

/// Estimates `rho`, `tau` and `lambda` from one chain of `steps` steps,
/// observed from vertex 0 and started from a Wilson tree rooted there.
pub fn estimate_looping(g: &WeightedGraph, steps: u64, seed: u64) -> Result<LoopingEstimate> {
    if steps < MIN_STEPS {
        return Err(Error::InvalidArgument(format!("need at least {MIN_STEPS} steps, got {steps}")));
    }
    let table = WalkTable::new(g);
    let mut rng = RngStream::new(seed);
    let state = MarkedCrst::initial(g, &table, 0, 0, &mut rng);
    Ok(run_chain(g, &table, state, steps, &mut rng))
}

/// `chains` independent chains on split streams, merged.
pub fn estimate_looping_parallel(g: &WeightedGraph, steps_per_chain: u64, seed: u64, chains: u64) -> Result<LoopingEstimate> {
    if steps_per_chain < MIN_STEPS {
        return Err(Error::InvalidArgument(format!("need at least {MIN_STEPS} steps, got {steps_per_chain}")));
    }
    if chains == 0 {
        return Err(Error::InvalidArgument("need at least one chain".into()));
    }
    let table = WalkTable::new(g);
    let root = RngStream::new(seed);
    let runs: Vec<LoopingEstimate> = (0..chains)
        .into_par_iter()
        .map(|c| {
            let mut rng = root.split(c);
            let state = MarkedCrst::initial(g, &table, 0, 0, &mut rng);
            run_chain(g, &table, state, steps_per_chain, &mut rng)
        })
        .collect();
    Ok(runs[1..].iter().fold(runs[0].clone(), |acc, r| acc.merge(r)))
}

/// Per-edge `Pr[e in T]` from `samples` independent Wilson trees.
pub fn estimate_edge_probabilities(g: &WeightedGraph, root: usize, samples: u64, seed: u64) -> Vec<EstimateReport> {
    let table = WalkTable::new(g);
    let mut rng = RngStream::new(seed);
    let mut hits = vec![0u64; g.edge_count()];
    for _ in 0..samples {
        let t = wilson_ust(g, &table, root, &mut rng);
        for e in t.parent_edge.iter().flatten() {
            hits[*e] += 1;
        }
    }
    hits.iter().map(|&h| EstimateReport::proportion(h, samples, seed)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families;

    #[test]
    fn report_arithmetic() {
        let r = EstimateReport::new(0.5, 0.1, 10, 1);
        assert!((r.half_width - 0.2576).abs() < 1e-12);
        let m = r.merge(&EstimateReport::new(1.0, 0.1, 30, 2));
        assert!((m.estimate - 0.875).abs() < 1e-12);
        assert_eq!(m.samples, 40);
        let s = EstimateReport::from_batches(2.0, &[1.0, 3.0], 2, 0);
        assert!((s.stderr - 1.0).abs() < 1e-12);
    }

    #[test]
    fn merge_is_associative() {
        let a = EstimateReport::new(0.1, 0.01, 10, 0);
        let b = EstimateReport::new(0.2, 0.02, 20, 0);
        let c = EstimateReport::new(0.4, 0.03, 40, 0);
        let l = a.merge(&b).merge(&c);
        let r = a.merge(&b.merge(&c));
        assert!((l.estimate - r.estimate).abs() < 1e-15);
        assert!((l.stderr - r.stderr).abs() < 1e-15);
    }

    #[test]
    fn short_runs_are_rejected() {
        assert!(matches!(estimate_looping(&families::complete(3), 10, 1), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn same_seed_same_report() {
        let g = families::cycle(4);
        let a = estimate_looping(&g, 20_000, 42).unwrap();
        let b = estimate_looping(&g, 20_000, 42).unwrap();
        assert_eq!(a, b);
        // the only unicycle of C4 is the 4-cycle itself
        assert_eq!(a.lambda.estimate, 4.0);
    }

    #[test]
    fn square_cycle_rates() {
        let g = families::cycle(4);
        let est = estimate_looping(&g, 400_000, 5).unwrap();
        assert!(est.rho.within(7.0 / 16.0, 3.0), "{:?}", est.rho);
        assert!(est.tau.within(1.0 / 16.0, 3.0), "{:?}", est.tau);
    }

    #[test]
    fn rates_do_not_depend_on_the_observer() {
        let g = families::wheel(4);
        let table = WalkTable::new(&g);
        let mut rhos = Vec::new();
        for obs in [0, 4] {
            let mut rng = RngStream::new(100 + obs as u64);
            let state = MarkedCrst::initial(&g, &table, obs, obs, &mut rng);
            rhos.push(run_chain(&g, &table, state, 300_000, &mut rng).rho);
        }
        let diff = (rhos[0].estimate - rhos[1].estimate).abs();
        let se = (rhos[0].stderr.powi(2) + rhos[1].stderr.powi(2)).sqrt();
        assert!(diff < 3.0 * se, "{rhos:?}");
    }
}
