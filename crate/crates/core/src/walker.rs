//! Monte-Carlo simulation of stateless opportunistic forwarding: a packet hops
//! to a neighbor chosen with probability `w_uv / deg(u)` until it reaches its
//! destination.
//!
//! Every walk draws from its own ChaCha8 stream seeded by mixing
//! `(seed, pair index, trial index)` through SplitMix64, so estimates are
//! independent of thread scheduling and identical across platforms. Walk
//! lengths count hops (edge traversals).

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{param, Error, Result};
use crate::graphs::Graph;

/// Two-sided 95% normal quantile.
const Z95: f64 = 1.959_963_984_540_054;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PairMode {
    /// Every ordered pair `s != t`, trials split evenly.
    AllPairs,
    /// This many ordered pairs drawn uniformly with replacement, trials split
    /// evenly.
    Sampled(u64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WalkConfig {
    /// Walk budget: per pair for [`estimate_hitting`], total for
    /// [`estimate_mean_latency`].
    pub trials: u64,
    /// Per-walk hop cap; `None` means `100 n²`.
    pub max_steps: Option<u64>,
    pub seed: u64,
    pub pair_mode: PairMode,
}

impl WalkConfig {
    pub fn new(trials: u64, seed: u64) -> WalkConfig {
        WalkConfig {
            trials,
            max_steps: None,
            seed,
            pair_mode: PairMode::AllPairs,
        }
    }

    pub fn step_cap(&self, n: usize) -> u64 {
        self.max_steps.unwrap_or(100 * (n as u64) * (n as u64))
    }

    fn validate(&self, n: usize) -> Result<()> {
        if self.trials < 1 {
            return Err(param("trials must be >= 1"));
        }
        if self.step_cap(n) < n as u64 {
            return Err(param(format!("max_steps must be >= n = {n}")));
        }
        if self.pair_mode == PairMode::Sampled(0) {
            return Err(param("sampled pair count must be >= 1"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WalkEstimate {
    /// Mean hops over completed walks.
    pub mean: f64,
    /// 95% normal-approximation half-width.
    pub ci_halfwidth: f64,
    pub trials_used: u64,
    /// Walks stopped at the step cap; excluded from `mean`.
    pub truncated: u64,
}

impl WalkEstimate {
    pub fn covers(&self, value: f64) -> bool {
        (self.mean - value).abs() <= self.ci_halfwidth
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WalkOutcome {
    pub steps: u64,
    pub truncated: bool,
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Mixes three words into one 64-bit seed.
pub fn mix_seed(seed: u64, a: u64, b: u64) -> u64 {
    splitmix64(splitmix64(splitmix64(seed) ^ a) ^ b)
}

/// Random stream for walk `trial` of pair `pair` under `seed`.
pub fn walk_rng(seed: u64, pair: u64, trial: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(mix_seed(seed, pair, trial))
}

/// Samples the next hop from `u`: uniform for binary graphs, proportional to
/// edge weight otherwise.
pub fn next_hop<R: Rng + ?Sized>(g: &Graph, u: usize, rng: &mut R) -> usize {
    let nbrs = g.neighbors(u);
    if g.is_binary() {
        return nbrs[rng.random_range(0..nbrs.len() as u64) as usize].0;
    }
    let mut x = rng.random::<f64>() * g.degree(u);
    for &(v, w) in nbrs {
        if x < w {
            return v;
        }
        x -= w;
    }
    nbrs[nbrs.len() - 1].0
}

/// Walks from `s` until first arrival at `t`, or until `max_steps` hops.
pub fn simulate_walk<R: Rng + ?Sized>(
    g: &Graph,
    s: usize,
    t: usize,
    max_steps: u64,
    rng: &mut R,
) -> Result<WalkOutcome> {
    let n = g.n();
    if s >= n || t >= n {
        return Err(param(format!(
            "node out of range: s = {s}, t = {t}, n = {n}"
        )));
    }
    if s == t {
        return Ok(WalkOutcome {
            steps: 0,
            truncated: false,
        });
    }
    if let Some(i) = g.isolated_node() {
        return Err(Error::ZeroDegree(i));
    }
    let mut u = s;
    let mut steps = 0;
    while steps < max_steps {
        u = next_hop(g, u, rng);
        steps += 1;
        if u == t {
            return Ok(WalkOutcome {
                steps,
                truncated: false,
            });
        }
    }
    Ok(WalkOutcome {
        steps,
        truncated: true,
    })
}

/// Exact per-pair tallies over completed walks.
#[derive(Debug, Clone, Copy, Default)]
struct Tally {
    count: u64,
    sum: u128,
    sum_sq: u128,
    truncated: u64,
}

impl Tally {
    fn mean(&self) -> f64 {
        self.sum as f64 / self.count as f64
    }

    /// Unbiased sample variance.
    fn variance(&self) -> f64 {
        if self.count < 2 {
            return 0.0;
        }
        let c = self.count as f64;
        let mean = self.mean();
        let ss = self.sum_sq as f64 - c * mean * mean;
        (ss / (c - 1.0)).max(0.0)
    }
}

fn run_pair(g: &Graph, s: usize, t: usize, pair: u64, walks: u64, cap: u64, seed: u64) -> Tally {
    let mut tally = Tally::default();
    for trial in 0..walks {
        let mut rng = walk_rng(seed, pair, trial);
        let out = simulate_walk(g, s, t, cap, &mut rng).expect("validated endpoints");
        if out.truncated {
            tally.truncated += 1;
        } else {
            tally.count += 1;
            tally.sum += out.steps as u128;
            tally.sum_sq += (out.steps as u128) * (out.steps as u128);
        }
    }
    tally
}

fn check_graph(g: &Graph) -> Result<()> {
    g.require_connected()
}

/// Monte-Carlo hitting time from `s` to `t` using `config.trials` walks.
pub fn estimate_hitting(
    g: &Graph,
    s: usize,
    t: usize,
    config: &WalkConfig,
) -> Result<WalkEstimate> {
    check_graph(g)?;
    config.validate(g.n())?;
    if s >= g.n() || t >= g.n() {
        return Err(param(format!(
            "node out of range: s = {s}, t = {t}, n = {}",
            g.n()
        )));
    }
    let cap = config.step_cap(g.n());
    let tally = run_pair(g, s, t, 0, config.trials, cap, config.seed);
    if tally.count == 0 {
        return Err(Error::AllTruncated {
            trials: config.trials,
        });
    }
    Ok(WalkEstimate {
        mean: tally.mean(),
        ci_halfwidth: Z95 * (tally.variance() / tally.count as f64).sqrt(),
        trials_used: tally.count,
        truncated: tally.truncated,
    })
}

fn ordered_pair(n: usize, index: u64) -> (usize, usize) {
    let per_source = (n - 1) as u64;
    let s = (index / per_source) as usize;
    let k = (index % per_source) as usize;
    (s, if k >= s { k + 1 } else { k })
}

/// Monte-Carlo estimate of the mean hitting time over ordered pairs, the
/// simulated counterpart of the expected packet delay.
///
/// In all-pairs mode the half-width uses the stratified variance
/// `Σ_p s_p²/k_p / P²`; in sampled mode it uses the spread of per-pair means,
/// which also accounts for pair selection.
pub fn estimate_mean_latency(g: &Graph, config: &WalkConfig) -> Result<WalkEstimate> {
    check_graph(g)?;
    let n = g.n();
    config.validate(n)?;
    let cap = config.step_cap(n);
    let total_pairs = (n as u64) * (n as u64 - 1);

    let pairs: Vec<(usize, usize)> = match config.pair_mode {
        PairMode::AllPairs => (0..total_pairs).map(|i| ordered_pair(n, i)).collect(),
        PairMode::Sampled(count) => {
            let mut rng = walk_rng(config.seed, u64::MAX, u64::MAX);
            (0..count)
                .map(|_| ordered_pair(n, rng.random_range(0..total_pairs)))
                .collect()
        }
    };
    let per_pair = config.trials.div_ceil(pairs.len() as u64).max(2);

    let tallies: Vec<Tally> = pairs
        .par_iter()
        .enumerate()
        .map(|(i, &(s, t))| run_pair(g, s, t, i as u64, per_pair, cap, config.seed))
        .collect();

    let truncated: u64 = tallies.iter().map(|t| t.truncated).sum();
    let used: u64 = tallies.iter().map(|t| t.count).sum();
    if used == 0 {
        return Err(Error::AllTruncated { trials: truncated });
    }
    let live: Vec<&Tally> = tallies.iter().filter(|t| t.count > 0).collect();
    let p = live.len() as f64;
    let mean = live.iter().map(|t| t.mean()).sum::<f64>() / p;

    let var_of_mean = match config.pair_mode {
        PairMode::AllPairs => {
            live.iter()
                .map(|t| t.variance() / t.count as f64)
                .sum::<f64>()
                / (p * p)
        }
        PairMode::Sampled(_) => {
            if live.len() < 2 {
                live[0].variance() / live[0].count as f64
            } else {
                let ss: f64 = live.iter().map(|t| (t.mean() - mean).powi(2)).sum();
                ss / (p - 1.0) / p
            }
        }
    };
    Ok(WalkEstimate {
        mean,
        ci_halfwidth: Z95 * var_of_mean.sqrt(),
        trials_used: used,
        truncated,
    })
}
