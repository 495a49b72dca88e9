//! Laplacian spectra: closed forms for r-nearest-neighbor cycles and tori, a
//! dense symmetric eigensolver for arbitrary graphs, and pseudoinverse traces.
//!
//! Cycle eigenvalues are indexed `j = 0..n-1` and have three equivalent forms:
//!
//! ```text
//! λ_j = 2r + 1 - sin((2r+1)πj/n) / sin(πj/n)      (sine ratio)
//!     = 2r - 2 Σ_{i=1..r} cos(2πji/n)              (cosine sum)
//!     = 4 Σ_{i=1..r} sin²(πji/n)                   (sum of squares)
//! ```
//!
//! The sum of squares has no cancellation and is what [`cycle_eigenvalue`]
//! evaluates. The sine ratio loses relative accuracy like `1/sin(πj/n)` for
//! small `j/n` and is a 0/0 form at `j = 0`; [`cycle_eigenvalue_sine_ratio`]
//! falls back to the cosine sum wherever `|sin(πj/n)| < 1e-6`.
//! Torus eigenvalues are sums of per-axis cycle eigenvalues over all index
//! tuples.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::graphs::{check_cycle_params, Graph, TorusSpec};

/// Below this `|sin(πj/n)|` the sine-ratio form is replaced by the cosine sum.
pub const SINE_RATIO_CUTOFF: f64 = 1e-6;

/// Relative tolerance separating zero eigenvalues: `|λ| <= ZERO_TOL * max|λ|`.
pub const ZERO_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpectrumSource {
    ClosedForm,
    Numeric,
}

/// Real eigenvalues sorted ascending, optionally with aligned orthonormal
/// eigenvectors (one per column).
#[derive(Debug, Clone)]
pub struct Spectrum {
    pub values: Vec<f64>,
    pub vectors: Option<DMatrix<f64>>,
    pub source: SpectrumSource,
}

impl Spectrum {
    fn closed_form(mut values: Vec<f64>) -> Spectrum {
        values.sort_by(f64::total_cmp);
        Spectrum {
            values,
            vectors: None,
            source: SpectrumSource::ClosedForm,
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Number of eigenvalues within the relative zero tolerance.
    pub fn zero_modes(&self) -> usize {
        let cutoff = zero_cutoff(&self.values);
        self.values.iter().filter(|v| v.abs() <= cutoff).count()
    }

    /// Second-smallest eigenvalue (algebraic connectivity for a Laplacian).
    pub fn algebraic_connectivity(&self) -> Result<f64> {
        match self.zero_modes() {
            0 => Err(Error::NoZeroMode),
            1 => Ok(self.values[1]),
            z => Err(Error::Disconnected { zero_modes: z }),
        }
    }
}

fn zero_cutoff(values: &[f64]) -> f64 {
    let scale = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    ZERO_TOL * scale
}

/// Eigenvalues of the circulant matrix with the given first row,
/// `λ_j = Σ_k a_k ω^{jk}` with `ω = e^{2πi/n}`, for `j = 0..n-1`.
pub fn circulant_eigenvalues(first_row: &[f64]) -> Vec<Complex64> {
    let n = first_row.len();
    (0..n)
        .map(|j| {
            first_row
                .iter()
                .enumerate()
                .map(|(k, &a)| {
                    // reduce jk mod n first so the angle stays in [0, 2π)
                    let theta = 2.0 * PI * ((j * k) % n) as f64 / n as f64;
                    Complex64::from_polar(a, theta)
                })
                .sum()
        })
        .collect()
}

/// `sin((r + 1/2) x) / sin(x / 2)`, the closed form of `1 + 2 Σ_{j=1..r} cos(jx)`.
pub fn dirichlet_kernel(r: usize, x: f64) -> f64 {
    ((r as f64 + 0.5) * x).sin() / (x / 2.0).sin()
}

/// `λ_j(L(C_n^r))` via the cosine sum `2r - 2 Σ_{i=1..r} cos(2πji/n)`.
pub fn cycle_eigenvalue_cosine_sum(n: usize, r: usize, j: usize) -> f64 {
    let s: f64 = (1..=r)
        .map(|i| (2.0 * PI * ((j * i) % n) as f64 / n as f64).cos())
        .sum();
    2.0 * r as f64 - 2.0 * s
}

/// `λ_j(L(C_n^r))` via the sine ratio, with the cosine-sum fallback near the
/// removable singularity.
pub fn cycle_eigenvalue_sine_ratio(n: usize, r: usize, j: usize) -> f64 {
    let j = j % n;
    let x = PI * j as f64 / n as f64;
    let denom = x.sin();
    if j == 0 || denom.abs() < SINE_RATIO_CUTOFF {
        return cycle_eigenvalue_cosine_sum(n, r, j);
    }
    let width = (2 * r + 1) as f64;
    width - (width * x).sin() / denom
}

/// `λ_j(L(C_n^r)) = 4 Σ_{i=1..r} sin²(πji/n)`; exactly 0 at `j = 0`.
pub fn cycle_eigenvalue(n: usize, r: usize, j: usize) -> f64 {
    let j = j % n;
    4.0 * (1..=r)
        .map(|i| (PI * ((j * i) % n) as f64 / n as f64).sin().powi(2))
        .sum::<f64>()
}

/// Cycle eigenvalues in index order `j = 0..n-1` (unsorted).
pub fn cycle_eigenvalues_by_index(n: usize, r: usize) -> Result<Vec<f64>> {
    check_cycle_params(n, r)?;
    Ok((0..n).map(|j| cycle_eigenvalue(n, r, j)).collect())
}

pub fn cycle_laplacian_spectrum(n: usize, r: usize) -> Result<Spectrum> {
    Ok(Spectrum::closed_form(cycle_eigenvalues_by_index(n, r)?))
}

/// Torus eigenvalues in row-major index-tuple order `(j_1, .., j_m)`.
///
/// Entry 0 is the all-zero tuple, which is exactly zero.
pub fn torus_eigenvalues_by_index(spec: &TorusSpec) -> Result<Vec<f64>> {
    let mut acc = vec![0.0];
    for &k in spec.dims() {
        let axis = cycle_eigenvalues_by_index(k, spec.r())?;
        acc = acc
            .iter()
            .flat_map(|&a| axis.iter().map(move |&b| a + b))
            .collect();
    }
    Ok(acc)
}

pub fn torus_laplacian_spectrum(spec: &TorusSpec) -> Result<Spectrum> {
    Ok(Spectrum::closed_form(torus_eigenvalues_by_index(spec)?))
}

/// Full spectrum of a dense symmetric matrix, ascending.
///
/// Backed by nalgebra's Householder tridiagonalization with implicit QR
/// sweeps. Inputs asymmetric beyond `1e-12 * max|M|` are rejected.
pub fn symmetric_eigendecomposition(m: &DMatrix<f64>, want_vectors: bool) -> Result<Spectrum> {
    let n = m.nrows();
    if m.ncols() != n {
        return Err(crate::error::param(format!(
            "matrix must be square, got {}x{}",
            m.nrows(),
            m.ncols()
        )));
    }
    let scale = m.amax();
    let mut asym: f64 = 0.0;
    for i in 0..n {
        for j in (i + 1)..n {
            asym = asym.max((m[(i, j)] - m[(j, i)]).abs());
        }
    }
    if asym > 1e-12 * scale {
        return Err(Error::NotSymmetric { asymmetry: asym });
    }
    if n == 0 {
        return Ok(Spectrum {
            values: Vec::new(),
            vectors: want_vectors.then(|| DMatrix::zeros(0, 0)),
            source: SpectrumSource::Numeric,
        });
    }

    if !want_vectors {
        let mut values: Vec<f64> = m.clone().symmetric_eigenvalues().iter().copied().collect();
        values.sort_by(f64::total_cmp);
        return Ok(Spectrum {
            values,
            vectors: None,
            source: SpectrumSource::Numeric,
        });
    }

    let eig = m.clone().symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let vectors = DMatrix::from_fn(n, n, |i, c| eig.eigenvectors[(i, order[c])]);
    Ok(Spectrum {
        values,
        vectors: Some(vectors),
        source: SpectrumSource::Numeric,
    })
}

pub fn laplacian(g: &Graph) -> DMatrix<f64> {
    g.laplacian_matrix()
}

/// `N = D^{-1/2} (D - A) D^{-1/2}`.
pub fn normalized_laplacian(g: &Graph) -> Result<DMatrix<f64>> {
    if let Some(i) = g.isolated_node() {
        return Err(Error::ZeroDegree(i));
    }
    let n = g.n();
    let inv_sqrt: Vec<f64> = g.degrees().iter().map(|d| 1.0 / d.sqrt()).collect();
    let mut out = DMatrix::zeros(n, n);
    for i in 0..n {
        out[(i, i)] = 1.0;
        for &(j, w) in g.neighbors(i) {
            out[(i, j)] = -w * inv_sqrt[i] * inv_sqrt[j];
        }
    }
    Ok(out)
}

/// Numeric Laplacian spectrum of `g`.
pub fn laplacian_spectrum(g: &Graph) -> Result<Spectrum> {
    symmetric_eigendecomposition(&g.laplacian_matrix(), false)
}

/// `Tr(L^+)`: sum of reciprocals of the nonzero eigenvalues of a connected
/// graph's Laplacian spectrum.
pub fn pinv_trace(spec: &Spectrum) -> Result<f64> {
    let cutoff = zero_cutoff(&spec.values);
    let zeros = spec.values.iter().filter(|v| v.abs() <= cutoff).count();
    match zeros {
        0 => Err(Error::NoZeroMode),
        1 => Ok(spec
            .values
            .iter()
            .filter(|v| v.abs() > cutoff)
            .map(|v| 1.0 / v)
            .sum()),
        z => Err(Error::Disconnected { zero_modes: z }),
    }
}
