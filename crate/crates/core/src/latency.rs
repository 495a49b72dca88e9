//! Mean latency `T = 2/(n-1) Tr(L^+)`, its spectral bounds, per-pair hitting
//! times and expected packet delay.
//!
//! `T` and the expected packet delay (EPD) are in different units. Summing
//! commute times over unordered pairs gives
//! `Σ_{s≠t} H_st = vol(G) · n · Tr(L^+)`, so `EPD = vol(G)/2 · T` where
//! `vol(G) = Σ_i deg(i)`. Both are exposed; neither is rescaled.

use nalgebra::DMatrix;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graphs::{check_cycle_params, Graph, TorusSpec};
use crate::spectral::{
    cycle_eigenvalue, laplacian_spectrum, normalized_laplacian, pinv_trace,
    symmetric_eigendecomposition, torus_eigenvalues_by_index, ZERO_TOL,
};

/// CSV header for [`LatencyReport::to_csv_row`].
pub const CSV_HEADER: &str = "family,params,analytic,lower,upper,oracle,mc_mean,mc_ci,trials";

/// Marker written in place of oracle or Monte-Carlo columns that were not run
/// because the graph exceeded the node cap.
pub const SKIPPED: &str = "skipped";

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bounds {
    pub lower: f64,
    pub upper: f64,
}

impl Bounds {
    /// `2/((n-1) λ_1) <= T <= 2/λ_1`.
    pub fn from_connectivity(n: usize, lambda_1: f64) -> Bounds {
        Bounds {
            lower: 2.0 / ((n as f64 - 1.0) * lambda_1),
            upper: 2.0 / lambda_1,
        }
    }

    pub fn contains(&self, value: f64, rel_tol: f64) -> bool {
        value >= self.lower * (1.0 - rel_tol) && value <= self.upper * (1.0 + rel_tol)
    }

    pub fn scaled(self, factor: f64) -> Bounds {
        Bounds {
            lower: self.lower * factor,
            upper: self.upper * factor,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McSummary {
    pub mean: f64,
    pub ci_halfwidth: f64,
    pub trials: u64,
}

/// One row of experiment output.
#[derive(Debug, Clone, PartialEq)]
pub struct LatencyReport {
    pub analytic: f64,
    pub lower_bound: f64,
    pub upper_bound: f64,
    pub oracle: Option<f64>,
    pub mc_estimate: Option<McSummary>,
    pub oracle_skipped: bool,
    pub mc_skipped: bool,
}

impl LatencyReport {
    pub fn new(analytic: f64, bounds: Bounds) -> LatencyReport {
        LatencyReport {
            analytic,
            lower_bound: bounds.lower,
            upper_bound: bounds.upper,
            oracle: None,
            mc_estimate: None,
            oracle_skipped: false,
            mc_skipped: false,
        }
    }

    /// Formats the row `family,params,analytic,lower,upper,oracle,mc_mean,mc_ci,trials`.
    ///
    /// `params` is written verbatim and must not contain commas.
    pub fn to_csv_row(&self, family: &str, params: &str) -> String {
        let opt = |v: Option<String>, skipped: bool| match (v, skipped) {
            (Some(s), _) => s,
            (None, true) => SKIPPED.to_string(),
            (None, false) => String::new(),
        };
        let oracle = opt(self.oracle.map(|v| v.to_string()), self.oracle_skipped);
        let mc = self.mc_estimate;
        let mc_mean = opt(mc.map(|m| m.mean.to_string()), self.mc_skipped);
        let mc_ci = opt(mc.map(|m| m.ci_halfwidth.to_string()), self.mc_skipped);
        let trials = opt(mc.map(|m| m.trials.to_string()), self.mc_skipped);
        format!(
            "{family},{params},{},{},{},{oracle},{mc_mean},{mc_ci},{trials}",
            self.analytic, self.lower_bound, self.upper_bound
        )
    }
}

/// Expected hitting times in hops; `h[(s, t)]` is the mean number of steps
/// from `s` to first arrival at `t`.
#[derive(Debug, Clone, PartialEq)]
pub struct HittingMatrix {
    pub h: DMatrix<f64>,
}

impl HittingMatrix {
    pub fn n(&self) -> usize {
        self.h.nrows()
    }

    pub fn get(&self, s: usize, t: usize) -> f64 {
        self.h[(s, t)]
    }

    /// Mean over ordered pairs `s != t`.
    pub fn mean_off_diagonal(&self) -> f64 {
        let n = self.n();
        let mut total = 0.0;
        for s in 0..n {
            for t in 0..n {
                if s != t {
                    total += self.h[(s, t)];
                }
            }
        }
        total / (n * (n - 1)) as f64
    }

    pub fn max_entry(&self) -> f64 {
        self.h.amax()
    }
}

/// `T = 2/(n-1) Tr(L^+)` from the numeric Laplacian spectrum of `g`.
pub fn mean_latency_spectral(g: &Graph) -> Result<f64> {
    g.require_connected()?;
    let trace = pinv_trace(&laplacian_spectrum(g)?)?;
    Ok(2.0 * trace / (g.n() as f64 - 1.0))
}

/// Closed-form mean latency of `C_n^r`, summing over `j = 1..n-1`.
pub fn mean_latency_cycle(n: usize, r: usize) -> Result<f64> {
    check_cycle_params(n, r)?;
    let trace: f64 = (1..n).map(|j| 1.0 / cycle_eigenvalue(n, r, j)).sum();
    Ok(2.0 * trace / (n as f64 - 1.0))
}

/// Closed-form mean latency of an m-dimensional r-nearest-neighbor torus.
///
/// Sums `1/λ` over every index tuple except the all-zero one and normalizes
/// by `2/(n-1)` with `n = Π k_i`.
pub fn mean_latency_torus(spec: &TorusSpec) -> Result<f64> {
    let values = torus_eigenvalues_by_index(spec)?;
    let trace: f64 = values[1..].iter().map(|v| 1.0 / v).sum();
    Ok(2.0 * trace / (spec.node_count() as f64 - 1.0))
}

/// Spectral-gap bounds from the numeric algebraic connectivity of `g`.
pub fn latency_bounds(g: &Graph) -> Result<Bounds> {
    g.require_connected()?;
    let lambda_1 = laplacian_spectrum(g)?.algebraic_connectivity()?;
    Ok(Bounds::from_connectivity(g.n(), lambda_1))
}

/// Closed-form bounds for `C_n^r` using the `j = 1` eigenvalue in sine form:
///
/// ```text
/// 2 sin(π/n) / ((n-1)((2r+1) sin(π/n) - sin((2r+1)π/n)))  <=  T
///     <=  2 sin(π/n) / ((2r+1) sin(π/n) - sin((2r+1)π/n))
/// ```
pub fn cycle_latency_bounds(n: usize, r: usize) -> Result<Bounds> {
    check_cycle_params(n, r)?;
    let upper = sine_form_upper(n, r);
    Ok(Bounds {
        lower: upper / (n as f64 - 1.0),
        upper,
    })
}

fn sine_form_upper(k: usize, r: usize) -> f64 {
    let x = std::f64::consts::PI / k as f64;
    let w = (2 * r + 1) as f64;
    2.0 * x.sin() / (w * x.sin() - (w * x).sin())
}

/// Closed-form bounds for a torus. The smallest nonzero eigenvalue is the
/// `j = 1` mode of the axis with the smallest cycle connectivity (the longest
/// axis), with `n = Π k_i`.
pub fn torus_latency_bounds(spec: &TorusSpec) -> Result<Bounds> {
    let r = spec.r();
    let axis = spec
        .dims()
        .iter()
        .copied()
        .min_by(|&a, &b| cycle_eigenvalue(a, r, 1).total_cmp(&cycle_eigenvalue(b, r, 1)))
        .expect("TorusSpec has at least one dimension");
    let upper = sine_form_upper(axis, r);
    Ok(Bounds {
        lower: upper / (spec.node_count() as f64 - 1.0),
        upper,
    })
}

/// Hitting times from the normalized-Laplacian eigendecomposition:
///
/// ```text
/// H_st = vol · Σ_{k: λ_k > 0} (1/λ_k) (v_kt² / d_t - v_ks v_kt / sqrt(d_t d_s))
/// ```
pub fn hitting_times(g: &Graph) -> Result<HittingMatrix> {
    g.require_connected()?;
    let n = g.n();
    let spectrum = symmetric_eigendecomposition(&normalized_laplacian(g)?, true)?;
    let vectors = spectrum.vectors.as_ref().expect("vectors requested");
    let scale = spectrum.values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let cutoff = ZERO_TOL * scale;
    let zeros = spectrum.values.iter().filter(|v| v.abs() <= cutoff).count();
    if zeros != 1 {
        return Err(Error::Disconnected { zero_modes: zeros });
    }

    // columns w_k = D^{-1/2} v_k scaled by 1/sqrt(λ_k); G = Σ_k w_k w_kᵀ
    let inv_sqrt_deg: Vec<f64> = g.degrees().iter().map(|d| 1.0 / d.sqrt()).collect();
    let modes: Vec<usize> = (0..n)
        .filter(|&k| spectrum.values[k].abs() > cutoff)
        .collect();
    let w = DMatrix::from_fn(n, modes.len(), |i, c| {
        let k = modes[c];
        vectors[(i, k)] * inv_sqrt_deg[i] / spectrum.values[k].sqrt()
    });
    let green = &w * w.transpose();
    let vol = g.volume();
    let h = DMatrix::from_fn(n, n, |s, t| {
        if s == t {
            0.0
        } else {
            vol * (green[(t, t)] - green[(s, t)])
        }
    });
    Ok(HittingMatrix { h })
}

/// First-step-analysis oracle: for every target `t`, solves
/// `h_s = 1 + Σ_u P_su h_u` (`s != t`, `h_t = 0`) with `P = D^{-1} A`.
pub fn hitting_times_linear(g: &Graph) -> Result<HittingMatrix> {
    g.require_connected()?;
    let n = g.n();
    let columns: Vec<Result<Vec<f64>>> =
        (0..n).into_par_iter().map(|t| solve_target(g, t)).collect();
    let mut h = DMatrix::zeros(n, n);
    for (t, col) in columns.into_iter().enumerate() {
        let col = col?;
        for s in 0..n {
            h[(s, t)] = col[s];
        }
    }
    Ok(HittingMatrix { h })
}

fn solve_target(g: &Graph, t: usize) -> Result<Vec<f64>> {
    let n = g.n();
    // reduced index: skip t
    let idx = |u: usize| if u < t { u } else { u - 1 };
    let m = n - 1;
    let mut a = DMatrix::zeros(m, m);
    for s in (0..n).filter(|&s| s != t) {
        let row = idx(s);
        a[(row, row)] += 1.0;
        let d = g.degree(s);
        for &(u, w) in g.neighbors(s) {
            if u != t {
                a[(row, idx(u))] -= w / d;
            }
        }
    }
    let rhs = nalgebra::DVector::from_element(m, 1.0);
    let sol = a
        .lu()
        .solve(&rhs)
        .ok_or_else(|| Error::Singular(format!("hitting-time system for target {t}")))?;
    let mut out = vec![0.0; n];
    for s in (0..n).filter(|&s| s != t) {
        out[s] = sol[idx(s)];
    }
    Ok(out)
}

/// Average hitting time over ordered pairs, `Σ_{i≠j} H_ij / (n(n-1))`.
pub fn expected_packet_delay(g: &Graph) -> Result<f64> {
    Ok(hitting_times(g)?.mean_off_diagonal())
}

/// [`expected_packet_delay`] computed from the linear-system oracle.
pub fn expected_packet_delay_linear(g: &Graph) -> Result<f64> {
    Ok(hitting_times_linear(g)?.mean_off_diagonal())
}
