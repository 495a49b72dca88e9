//! Wireless topologies from a path-loss propagation model.
//!
//! Nodes are placed uniformly in a square. For each pair the coverage radius
//! `r_c = r_0 (p/p_min - 1)^{1/η}` turns the transmit power into a soft
//! topology coefficient `a = 1 / (1 + (r/r_c)^α)`, and the binary topology
//! keeps pairs with `a >= τ`. Only symmetric power assignments are supported.

// `!(x > 0.0)` below is deliberate: NaN must fail validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::f64::consts::PI;
use std::fmt::Write as _;
use std::io::BufRead;
use std::path::Path;

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{param, Error, Result};
use crate::graphs::Graph;

#[derive(Debug, Clone, PartialEq)]
pub enum PowerAssignment {
    Uniform(f64),
    /// Symmetric `n x n` matrix of transmit powers `p_ij`.
    PerPair(DMatrix<f64>),
}

impl PowerAssignment {
    pub fn power(&self, i: usize, j: usize) -> f64 {
        match self {
            PowerAssignment::Uniform(p) => *p,
            PowerAssignment::PerPair(m) => m[(i, j)],
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct WirelessConfig {
    pub n: usize,
    /// Side of the square deployment area, in meters.
    pub area_side: f64,
    /// Path-loss exponent.
    pub eta: f64,
    /// Topology-coefficient exponent.
    pub alpha: f64,
    pub p_min: f64,
    /// Reference-distance constant in `r_0 = sqrt((ln n + c_n) / (π n))`.
    pub c_n: f64,
    /// Connectivity threshold on the topology coefficient.
    pub threshold: f64,
    pub power: PowerAssignment,
}

impl Default for WirelessConfig {
    fn default() -> Self {
        WirelessConfig {
            n: 30,
            area_side: 1.0,
            eta: 2.0,
            alpha: 2.0,
            p_min: 0.1,
            c_n: 0.0,
            threshold: 0.5,
            power: PowerAssignment::Uniform(1.0),
        }
    }
}

impl WirelessConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return Err(param(format!(
                "wireless topology needs n >= 2, got {}",
                self.n
            )));
        }
        if !(self.area_side > 0.0 && self.area_side.is_finite()) {
            return Err(param("area_side must be positive"));
        }
        if !(self.eta >= 1.0) {
            return Err(param(format!("eta must be >= 1, got {}", self.eta)));
        }
        if !(self.alpha > 0.0) {
            return Err(param(format!("alpha must be > 0, got {}", self.alpha)));
        }
        if !(self.p_min > 0.0) {
            return Err(param(format!("p_min must be > 0, got {}", self.p_min)));
        }
        if !(self.threshold > 0.0 && self.threshold < 1.0) {
            return Err(param(format!(
                "threshold must lie in (0, 1), got {}",
                self.threshold
            )));
        }
        match &self.power {
            PowerAssignment::Uniform(p) if !(*p > 0.0) => {
                return Err(param(format!("transmit power must be > 0, got {p}")))
            }
            PowerAssignment::PerPair(m) => {
                if m.nrows() != self.n || m.ncols() != self.n {
                    return Err(param(format!(
                        "power matrix must be {n}x{n}, got {}x{}",
                        m.nrows(),
                        m.ncols(),
                        n = self.n
                    )));
                }
                for i in 0..self.n {
                    for j in (i + 1)..self.n {
                        if m[(i, j)] != m[(j, i)] {
                            return Err(param(format!(
                                "asymmetric link powers p[{i}][{j}] = {} != p[{j}][{i}] = {}",
                                m[(i, j)],
                                m[(j, i)]
                            )));
                        }
                        if !(m[(i, j)] > 0.0) {
                            return Err(param(format!("power p[{i}][{j}] must be > 0")));
                        }
                    }
                }
            }
            _ => {}
        }
        reference_distance(self.n, self.c_n)?;
        Ok(())
    }

    pub fn reference_distance(&self) -> Result<f64> {
        reference_distance(self.n, self.c_n)
    }

    /// Reads a flat `key = value` file. Recognized keys: `n`, `area_side`,
    /// `eta`, `alpha`, `p_min`, `c_n`, `threshold`, `power` (uniform) and
    /// `power_matrix` (path to a whitespace-separated matrix, relative to the
    /// config file). Missing keys keep their defaults.
    pub fn from_file(path: &Path) -> Result<WirelessConfig> {
        let file =
            std::fs::File::open(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        let base = path.parent().unwrap_or(Path::new("."));
        Self::parse(std::io::BufReader::new(file), base)
    }

    pub fn parse<R: BufRead>(input: R, base: &Path) -> Result<WirelessConfig> {
        let mut cfg = WirelessConfig::default();
        let mut matrix_path = None;
        for (idx, line) in input.lines().enumerate() {
            let line = line?;
            let lineno = idx + 1;
            let body = line.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            let perr = |msg: String| Error::Parse { line: lineno, msg };
            let (key, value) = body
                .split_once('=')
                .ok_or_else(|| perr(format!("expected `key = value`, got `{body}`")))?;
            let (key, value) = (key.trim(), value.trim());
            let num = || {
                value
                    .parse::<f64>()
                    .map_err(|e| perr(format!("bad value for {key}: {e}")))
            };
            match key {
                "n" => {
                    cfg.n = value
                        .parse()
                        .map_err(|e| perr(format!("bad value for n: {e}")))?
                }
                "area_side" => cfg.area_side = num()?,
                "eta" => cfg.eta = num()?,
                "alpha" => cfg.alpha = num()?,
                "p_min" => cfg.p_min = num()?,
                "c_n" => cfg.c_n = num()?,
                "threshold" => cfg.threshold = num()?,
                "power" => cfg.power = PowerAssignment::Uniform(num()?),
                "power_matrix" => matrix_path = Some(base.join(value)),
                other => return Err(perr(format!("unknown key `{other}`"))),
            }
        }
        if let Some(p) = matrix_path {
            cfg.power = PowerAssignment::PerPair(read_matrix(&p)?);
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_config_string(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "n = {}", self.n);
        let _ = writeln!(s, "area_side = {}", self.area_side);
        let _ = writeln!(s, "eta = {}", self.eta);
        let _ = writeln!(s, "alpha = {}", self.alpha);
        let _ = writeln!(s, "p_min = {}", self.p_min);
        let _ = writeln!(s, "c_n = {}", self.c_n);
        let _ = writeln!(s, "threshold = {}", self.threshold);
        if let PowerAssignment::Uniform(p) = self.power {
            let _ = writeln!(s, "power = {p}");
        }
        s
    }
}

fn read_matrix(path: &Path) -> Result<DMatrix<f64>> {
    let text =
        std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let body = line.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let row = body
            .split_whitespace()
            .map(|t| t.parse::<f64>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|e| Error::Parse {
                line: idx + 1,
                msg: format!("{}: {e}", path.display()),
            })?;
        rows.push(row);
    }
    let n = rows.len();
    if rows.iter().any(|r| r.len() != n) {
        return Err(param(format!("{} is not a square matrix", path.display())));
    }
    Ok(DMatrix::from_fn(n, n, |i, j| rows[i][j]))
}

/// Node positions in `[0, area_side]²`.
#[derive(Debug, Clone, PartialEq)]
pub struct Placement {
    pub positions: Vec<[f64; 2]>,
}

impl Placement {
    pub fn distance(&self, i: usize, j: usize) -> f64 {
        let [xi, yi] = self.positions[i];
        let [xj, yj] = self.positions[j];
        (xi - xj).hypot(yi - yj)
    }

    /// `i,x,y` rows with a header line.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("i,x,y\n");
        for (i, [x, y]) in self.positions.iter().enumerate() {
            let _ = writeln!(s, "{i},{x},{y}");
        }
        s
    }
}

/// Draws `n` i.i.d. uniform positions in the deployment square.
pub fn place_nodes<R: Rng + ?Sized>(config: &WirelessConfig, rng: &mut R) -> Result<Placement> {
    if config.n < 2 {
        return Err(param(format!("placement needs n >= 2, got {}", config.n)));
    }
    let side = config.area_side;
    let positions = (0..config.n)
        .map(|_| [rng.random::<f64>() * side, rng.random::<f64>() * side])
        .collect();
    Ok(Placement { positions })
}

pub fn place_nodes_seeded(config: &WirelessConfig, seed: u64) -> Result<Placement> {
    place_nodes(config, &mut ChaCha8Rng::seed_from_u64(seed))
}

/// `r_0 = sqrt((ln n + c_n) / (π n))`.
pub fn reference_distance(n: usize, c_n: f64) -> Result<f64> {
    if n < 2 {
        return Err(param(format!("reference distance needs n >= 2, got {n}")));
    }
    let radicand = ((n as f64).ln() + c_n) / (PI * n as f64);
    if !(radicand > 0.0) {
        return Err(param(format!(
            "ln(n) + c_n must be > 0 (n = {n}, c_n = {c_n})"
        )));
    }
    Ok(radicand.sqrt())
}

/// Received power `p / (1 + (r/r_0)^η)`.
pub fn received_power(p_ij: f64, r_ij: f64, r_0: f64, eta: f64) -> f64 {
    p_ij / (1.0 + (r_ij / r_0).powf(eta))
}

/// Distance at which the received power falls to `p_min`:
/// `r_0 (p/p_min - 1)^{1/η}`.
pub fn coverage_radius(p_ij: f64, p_min: f64, r_0: f64, eta: f64) -> Result<f64> {
    if p_ij < p_min {
        return Err(Error::BelowMinimumPower { power: p_ij, p_min });
    }
    Ok(r_0 * (p_ij / p_min - 1.0).powf(1.0 / eta))
}

/// `a = 1 / (1 + (r/r_c)^α)`, in `[0, 1]`.
pub fn topology_coefficient(r_ij: f64, r_c: f64, alpha: f64) -> Result<f64> {
    if r_ij < 0.0 || r_c < 0.0 || !(alpha > 0.0) {
        return Err(param(format!(
            "need r >= 0, r_c >= 0, alpha > 0 (got {r_ij}, {r_c}, {alpha})"
        )));
    }
    if r_c == 0.0 {
        if r_ij == 0.0 {
            return Err(Error::Degenerate("r = 0 and r_c = 0".into()));
        }
        return Ok(0.0);
    }
    Ok(1.0 / (1.0 + (r_ij / r_c).powf(alpha)))
}

/// The coefficient written directly in the transmit power:
///
/// ```text
/// a = r_0^α (p - p_min)^{α/η} / (r_0^α (p - p_min)^{α/η} + r^α p_min^{α/η})
/// ```
pub fn topology_coefficient_from_power(
    p_ij: f64,
    p_min: f64,
    r_ij: f64,
    r_0: f64,
    alpha: f64,
    eta: f64,
) -> Result<f64> {
    if p_ij < p_min {
        return Err(Error::BelowMinimumPower { power: p_ij, p_min });
    }
    let num = r_0.powf(alpha) * (p_ij - p_min).powf(alpha / eta);
    let den = num + r_ij.powf(alpha) * p_min.powf(alpha / eta);
    if den == 0.0 {
        return Err(Error::Degenerate("r = 0 and p = p_min".into()));
    }
    Ok(num / den)
}

#[derive(Debug, Clone)]
pub struct WirelessTopology {
    /// Soft coefficients `a_ij`, zero on the diagonal.
    pub coefficients: DMatrix<f64>,
    /// Binary topology: edge iff `a_ij >= threshold`.
    pub graph: Graph,
    pub connected: bool,
}

/// Computes pairwise coefficients and thresholds them into a binary graph.
///
/// Pairs with `p_ij < p_min` get coefficient 0. Disconnected results are
/// returned with `connected == false`.
pub fn build_wireless_graph(
    config: &WirelessConfig,
    placement: &Placement,
) -> Result<WirelessTopology> {
    config.validate()?;
    let n = config.n;
    if placement.positions.len() != n {
        return Err(param(format!(
            "placement has {} nodes, config expects {n}",
            placement.positions.len()
        )));
    }
    let side = config.area_side;
    if placement
        .positions
        .iter()
        .flatten()
        .any(|&c| !(0.0..=side).contains(&c))
    {
        return Err(param("placement has a node outside the deployment area"));
    }
    let r_0 = config.reference_distance()?;
    let mut coefficients = DMatrix::zeros(n, n);
    let mut edges = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            let p = config.power.power(i, j);
            let a = if p < config.p_min {
                0.0
            } else {
                let r_c = coverage_radius(p, config.p_min, r_0, config.eta)?;
                topology_coefficient(placement.distance(i, j), r_c, config.alpha)?
            };
            coefficients[(i, j)] = a;
            coefficients[(j, i)] = a;
            if a >= config.threshold {
                edges.push((i, j, 1.0));
            }
        }
    }
    let graph = Graph::from_edges(n, edges)?;
    let connected = graph.is_connected();
    Ok(WirelessTopology {
        coefficients,
        graph,
        connected,
    })
}

/// Seeded placement followed by [`build_wireless_graph`].
pub fn generate_topology(
    config: &WirelessConfig,
    seed: u64,
) -> Result<(Placement, WirelessTopology)> {
    let placement = place_nodes_seeded(config, seed)?;
    let topo = build_wireless_graph(config, &placement)?;
    Ok((placement, topo))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    #[test]
    fn config_validation() {
        assert!(WirelessConfig::default().validate().is_ok());
        let bad = [
            WirelessConfig {
                n: 1,
                ..Default::default()
            },
            WirelessConfig {
                eta: 0.5,
                ..Default::default()
            },
            WirelessConfig {
                alpha: 0.0,
                ..Default::default()
            },
            WirelessConfig {
                p_min: 0.0,
                ..Default::default()
            },
            WirelessConfig {
                threshold: 1.0,
                ..Default::default()
            },
            WirelessConfig {
                threshold: 0.0,
                ..Default::default()
            },
            WirelessConfig {
                c_n: -10.0,
                ..Default::default()
            },
        ];
        for cfg in bad {
            assert!(cfg.validate().is_err(), "{cfg:?}");
        }
        let mut m = DMatrix::from_element(3, 3, 1.0);
        m[(0, 1)] = 2.0;
        let cfg = WirelessConfig {
            n: 3,
            power: PowerAssignment::PerPair(m),
            ..Default::default()
        };
        assert!(cfg
            .validate()
            .unwrap_err()
            .to_string()
            .contains("asymmetric"));
    }

    #[test]
    fn placement_rejects_single_node() {
        let cfg = WirelessConfig {
            n: 1,
            ..Default::default()
        };
        assert!(place_nodes_seeded(&cfg, 0).is_err());
    }

    #[test]
    fn placement_is_seeded() {
        let cfg = WirelessConfig::default();
        assert_eq!(
            place_nodes_seeded(&cfg, 9).unwrap(),
            place_nodes_seeded(&cfg, 9).unwrap()
        );
        assert_ne!(
            place_nodes_seeded(&cfg, 9).unwrap(),
            place_nodes_seeded(&cfg, 10).unwrap()
        );
        let p = place_nodes_seeded(
            &WirelessConfig {
                area_side: 3.0,
                ..cfg
            },
            1,
        )
        .unwrap();
        assert!(p
            .positions
            .iter()
            .flatten()
            .all(|&c| (0.0..=3.0).contains(&c)));
    }

    #[test]
    fn placement_quadrants_uniform() {
        let cfg = WirelessConfig {
            n: 10_000,
            ..Default::default()
        };
        let p = place_nodes_seeded(&cfg, 2024).unwrap();
        let mut counts = [0f64; 4];
        for [x, y] in &p.positions {
            counts[(*x >= 0.5) as usize * 2 + (*y >= 0.5) as usize] += 1.0;
        }
        let e = 2_500.0;
        let chi2: f64 = counts.iter().map(|c| (c - e).powi(2) / e).sum();
        // chi-square, 3 dof, upper 0.001 quantile
        assert!(chi2 < 16.266, "chi2 = {chi2}, {counts:?}");
    }

    #[test]
    fn reference_distance_values() {
        let n = 50;
        let c = PI * n as f64 - (n as f64).ln();
        assert_abs_diff_eq!(reference_distance(n, c).unwrap(), 1.0, epsilon = 1e-12);
        let expected = ((30f64).ln() / (30.0 * PI)).sqrt();
        assert_abs_diff_eq!(
            reference_distance(30, 0.0).unwrap(),
            expected,
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(expected, 0.189_967_957_951, epsilon = 1e-11);
        for c_n in [0.0, 0.5, 3.0] {
            let r: Vec<f64> = (3..500)
                .map(|n| reference_distance(n, c_n).unwrap())
                .collect();
            assert!(r.windows(2).all(|w| w[1] < w[0]));
        }
        assert!(reference_distance(2, -1.0).is_err());
        assert!(reference_distance(1, 0.0).is_err());
    }

    #[test]
    fn received_power_limits() {
        assert_eq!(received_power(3.0, 0.0, 0.2, 2.5), 3.0);
        assert_abs_diff_eq!(received_power(3.0, 0.2, 0.2, 2.5), 1.5, epsilon = 1e-15);
        let (p, r0, eta) = (2.0, 0.1, 3.0);
        let far = 1e3 * r0;
        let ratio = received_power(p, far, r0, eta) / (p * (r0 / far).powf(eta));
        assert_abs_diff_eq!(ratio, 1.0, epsilon = 1e-8);
    }

    #[test]
    fn coverage_radius_values() {
        assert_eq!(coverage_radius(0.1, 0.1, 0.3, 2.0).unwrap(), 0.0);
        assert_abs_diff_eq!(
            coverage_radius(0.2, 0.1, 0.3, 4.0).unwrap(),
            0.3,
            epsilon = 1e-15
        );
        assert!(matches!(
            coverage_radius(0.05, 0.1, 0.3, 2.0),
            Err(Error::BelowMinimumPower { .. })
        ));
    }

    #[test]
    fn coefficient_values() {
        assert_eq!(topology_coefficient(0.4, 0.4, 3.0).unwrap(), 0.5);
        assert_eq!(topology_coefficient(0.4, 0.0, 3.0).unwrap(), 0.0);
        assert_eq!(topology_coefficient(0.0, 0.4, 3.0).unwrap(), 1.0);
        assert!(matches!(
            topology_coefficient(0.0, 0.0, 2.0),
            Err(Error::Degenerate(_))
        ));
        assert_eq!(
            topology_coefficient_from_power(0.1, 0.1, 0.3, 0.2, 2.0, 2.0).unwrap(),
            0.0
        );
    }

    #[test]
    fn threshold_half_is_coverage_disk() {
        let cfg = WirelessConfig::default();
        let p = place_nodes_seeded(&cfg, 5).unwrap();
        let topo = build_wireless_graph(&cfg, &p).unwrap();
        let r0 = cfg.reference_distance().unwrap();
        let rc = coverage_radius(1.0, cfg.p_min, r0, cfg.eta).unwrap();
        for i in 0..cfg.n {
            for j in 0..cfg.n {
                if i != j {
                    let linked = topo.graph.weight(i, j) == 1.0;
                    assert_eq!(linked, p.distance(i, j) <= rc, "({i}, {j})");
                }
            }
        }
    }

    #[test]
    fn tiny_threshold_gives_complete_graph() {
        let cfg = WirelessConfig {
            threshold: 1e-12,
            ..Default::default()
        };
        let (_, topo) = generate_topology(&cfg, 3).unwrap();
        assert_eq!(topo.graph.edge_count(), cfg.n * (cfg.n - 1) / 2);
        assert!(topo.connected);
    }

    #[test]
    fn below_minimum_power_pairs_are_unlinked() {
        let n = 4;
        let mut m = DMatrix::from_element(n, n, 1.0);
        m[(0, 1)] = 0.05;
        m[(1, 0)] = 0.05;
        let cfg = WirelessConfig {
            n,
            threshold: 1e-9,
            power: PowerAssignment::PerPair(m),
            ..Default::default()
        };
        let (_, topo) = generate_topology(&cfg, 0).unwrap();
        assert_eq!(topo.coefficients[(0, 1)], 0.0);
        assert_eq!(topo.graph.weight(0, 1), 0.0);
        assert_eq!(topo.graph.edge_count(), 5);
    }

    #[test]
    fn disconnected_topologies_are_flagged() {
        let cfg = WirelessConfig {
            p_min: 0.9,
            eta: 6.0,
            threshold: 0.9,
            ..Default::default()
        };
        let (_, topo) = generate_topology(&cfg, 1).unwrap();
        assert!(!topo.connected);
        assert_eq!(topo.connected, topo.graph.is_connected());
    }

    #[test]
    fn config_file_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        std::fs::write(dir.path().join("p.txt"), "0 2\n2 0\n").unwrap();
        let text = "# ensemble\nn = 2\neta=4\nalpha = 3\np_min = 0.2\nc_n = 1.5\nthreshold = 0.3\npower_matrix = p.txt\n";
        let path = dir.path().join("w.cfg");
        std::fs::write(&path, text).unwrap();
        let cfg = WirelessConfig::from_file(&path).unwrap();
        assert_eq!(cfg.n, 2);
        assert_eq!(cfg.eta, 4.0);
        assert_eq!(cfg.alpha, 3.0);
        assert_eq!(cfg.c_n, 1.5);
        assert_eq!(cfg.power.power(0, 1), 2.0);

        let plain = WirelessConfig {
            eta: 3.5,
            ..Default::default()
        };
        let back =
            WirelessConfig::parse(plain.to_config_string().as_bytes(), Path::new(".")).unwrap();
        assert_eq!(back, plain);

        assert!(WirelessConfig::parse("bogus = 1\n".as_bytes(), Path::new(".")).is_err());
        assert!(WirelessConfig::parse("eta 2\n".as_bytes(), Path::new(".")).is_err());
        assert!(WirelessConfig::parse("eta = x\n".as_bytes(), Path::new(".")).is_err());
    }

    #[test]
    fn positions_csv() {
        let p = Placement {
            positions: vec![[0.0, 0.5], [1.0, 0.25]],
        };
        assert_eq!(p.to_csv(), "i,x,y\n0,0,0.5\n1,1,0.25\n");
    }

    proptest! {
        #[test]
        fn power_route_matches_radius_route(
            p in 0.11f64..10.0, p_min in 0.01f64..0.1, r in 0.0f64..2.0,
            r0 in 0.05f64..1.0, alpha in 0.5f64..6.0, eta in 1.0f64..6.0,
        ) {
            let rc = coverage_radius(p, p_min, r0, eta).unwrap();
            let a = topology_coefficient(r, rc, alpha).unwrap();
            let b = topology_coefficient_from_power(p, p_min, r, r0, alpha, eta).unwrap();
            prop_assert!((a - b).abs() <= 1e-12);
        }

        #[test]
        fn coverage_round_trip(p_min in 0.01f64..1.0, ratio in 1.0f64..50.0, r0 in 0.05f64..1.0, eta in 1.0f64..6.0) {
            let p = p_min * ratio;
            let rc = coverage_radius(p, p_min, r0, eta).unwrap();
            prop_assert!((received_power(p, rc, r0, eta) - p_min).abs() <= 1e-12 * p.max(1.0));
        }

        #[test]
        fn coefficient_range_and_monotone(r1 in 0.0f64..3.0, dr in 0.0f64..3.0, rc in 0.01f64..2.0, alpha in 0.1f64..8.0) {
            let a1 = topology_coefficient(r1, rc, alpha).unwrap();
            let a2 = topology_coefficient(r1 + dr, rc, alpha).unwrap();
            prop_assert!((0.0..=1.0).contains(&a1));
            prop_assert!(a2 <= a1);
        }

        #[test]
        fn generated_topology_invariants(seed in any::<u64>(), t1 in 0.05f64..0.95, t2 in 0.05f64..0.95) {
            let (lo, hi) = if t1 <= t2 { (t1, t2) } else { (t2, t1) };
            let cfg = WirelessConfig { n: 20, threshold: lo, ..Default::default() };
            let placement = place_nodes_seeded(&cfg, seed).unwrap();
            let a = build_wireless_graph(&cfg, &placement).unwrap();
            let b = build_wireless_graph(&WirelessConfig { threshold: hi, ..cfg.clone() }, &placement).unwrap();
            let c = &a.coefficients;
            prop_assert_eq!(c.transpose(), c.clone());
            prop_assert!(c.iter().all(|v| (0.0..=1.0).contains(v)));
            for (i, j, _) in b.graph.edges() {
                prop_assert_eq!(a.graph.weight(i, j), 1.0);
            }
            let r0 = cfg.reference_distance().unwrap();
            let rc = coverage_radius(1.0, cfg.p_min, r0, cfg.eta).unwrap();
            prop_assert!((received_power(1.0, rc, r0, cfg.eta) - cfg.p_min).abs() < 1e-12);
        }
    }
}
