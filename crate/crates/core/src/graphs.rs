//! Graph substrate: symmetric weighted graphs, r-nearest-neighbor cycles and
//! their Cartesian products (tori).
//!
//! Torus nodes are indexed row-major over coordinate tuples: in a product of
//! factors with sizes `[k_1, .., k_m]`, coordinate `(c_1, .., c_m)` maps to
//! `((c_1 * k_2 + c_2) * k_3 + c_3) ...`. Closed-form eigenvalue index tuples
//! `(j_1, .., j_m)` use the same ordering.

use std::collections::VecDeque;
use std::fmt::Write as _;
use std::io::{BufRead, Write};

use nalgebra::DMatrix;

use crate::error::{param, Error, Result};

/// Undirected graph with nonnegative symmetric weights and no self-loops.
///
/// Storage is a sorted adjacency list per node; dense matrices are produced on
/// demand for the numeric routes.
#[derive(Debug, Clone, PartialEq)]
pub struct Graph {
    adj: Vec<Vec<(usize, f64)>>,
    degrees: Vec<f64>,
    is_binary: bool,
}

impl Graph {
    /// Builds a graph from undirected edges `(i, j, w)`.
    ///
    /// Each edge may be listed once in either orientation, or in both with the
    /// same weight. Zero-weight entries are dropped.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Graph>
    where
        I: IntoIterator<Item = (usize, usize, f64)>,
    {
        if n == 0 {
            return Err(param("graph must have at least one node"));
        }
        let mut adj: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
        for (i, j, w) in edges {
            if i >= n || j >= n {
                return Err(param(format!("edge ({i}, {j}) out of range for n = {n}")));
            }
            if i == j {
                return Err(param(format!("self-loop at node {i}")));
            }
            if !(w.is_finite() && w >= 0.0) {
                return Err(param(format!("edge ({i}, {j}) has invalid weight {w}")));
            }
            if w == 0.0 {
                continue;
            }
            let (a, b) = (i.min(j), i.max(j));
            match adj[a].iter().find(|(v, _)| *v == b) {
                Some(&(_, existing)) if existing == w => continue,
                Some(&(_, existing)) => {
                    return Err(param(format!(
                        "edge ({a}, {b}) listed with conflicting weights {existing} and {w}"
                    )))
                }
                None => {}
            }
            adj[a].push((b, w));
            adj[b].push((a, w));
        }
        Ok(Self::from_adjacency(adj))
    }

    /// Builds a graph from a dense symmetric weight matrix with zero diagonal.
    pub fn from_dense(weights: &DMatrix<f64>) -> Result<Graph> {
        let n = weights.nrows();
        if n == 0 || weights.ncols() != n {
            return Err(param(format!(
                "weight matrix must be square and nonempty, got {}x{}",
                weights.nrows(),
                weights.ncols()
            )));
        }
        let mut asym: f64 = 0.0;
        for i in 0..n {
            if weights[(i, i)] != 0.0 {
                return Err(param(format!("nonzero diagonal at node {i}")));
            }
            for j in (i + 1)..n {
                asym = asym.max((weights[(i, j)] - weights[(j, i)]).abs());
            }
        }
        if asym > 0.0 {
            return Err(Error::NotSymmetric { asymmetry: asym });
        }
        let mut edges = Vec::new();
        for i in 0..n {
            for j in (i + 1)..n {
                if weights[(i, j)] != 0.0 {
                    edges.push((i, j, weights[(i, j)]));
                }
            }
        }
        Self::from_edges(n, edges)
    }

    fn from_adjacency(mut adj: Vec<Vec<(usize, f64)>>) -> Graph {
        for row in adj.iter_mut() {
            row.sort_by_key(|&(v, _)| v);
        }
        let degrees = adj
            .iter()
            .map(|row| row.iter().map(|&(_, w)| w).sum())
            .collect();
        let is_binary = adj.iter().flatten().all(|&(_, w)| w == 1.0);
        Graph {
            adj,
            degrees,
            is_binary,
        }
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn is_binary(&self) -> bool {
        self.is_binary
    }

    /// Weighted degree `Σ_j w_ij`.
    pub fn degree(&self, i: usize) -> f64 {
        self.degrees[i]
    }

    pub fn degrees(&self) -> &[f64] {
        &self.degrees
    }

    /// Neighbors of `i` with edge weights, sorted by neighbor index.
    pub fn neighbors(&self, i: usize) -> &[(usize, f64)] {
        &self.adj[i]
    }

    pub fn weight(&self, i: usize, j: usize) -> f64 {
        self.adj[i]
            .binary_search_by_key(&j, |&(v, _)| v)
            .map(|k| self.adj[i][k].1)
            .unwrap_or(0.0)
    }

    /// Number of undirected edges.
    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    /// `Σ_i deg(i)`, i.e. twice the total edge weight.
    pub fn volume(&self) -> f64 {
        self.degrees.iter().sum()
    }

    /// Undirected edges `(i, j, w)` with `i < j`, in index order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        self.adj.iter().enumerate().flat_map(|(i, row)| {
            row.iter()
                .filter(move |&&(j, _)| j > i)
                .map(move |&(j, w)| (i, j, w))
        })
    }

    pub fn adjacency_matrix(&self) -> DMatrix<f64> {
        let n = self.n();
        let mut a = DMatrix::zeros(n, n);
        for (i, row) in self.adj.iter().enumerate() {
            for &(j, w) in row {
                a[(i, j)] = w;
            }
        }
        a
    }

    /// Combinatorial Laplacian `L = D - A`.
    pub fn laplacian_matrix(&self) -> DMatrix<f64> {
        let mut l = -self.adjacency_matrix();
        for i in 0..self.n() {
            l[(i, i)] = self.degrees[i];
        }
        l
    }

    pub fn isolated_node(&self) -> Option<usize> {
        self.degrees.iter().position(|&d| d <= 0.0)
    }

    /// Number of connected components (breadth-first search).
    pub fn component_count(&self) -> usize {
        let n = self.n();
        let mut seen = vec![false; n];
        let mut queue = VecDeque::new();
        let mut components = 0;
        for start in 0..n {
            if seen[start] {
                continue;
            }
            components += 1;
            seen[start] = true;
            queue.push_back(start);
            while let Some(u) = queue.pop_front() {
                for &(v, _) in &self.adj[u] {
                    if !seen[v] {
                        seen[v] = true;
                        queue.push_back(v);
                    }
                }
            }
        }
        components
    }

    pub fn is_connected(&self) -> bool {
        self.component_count() == 1
    }

    /// Errors unless the graph is connected with at least two nodes.
    pub(crate) fn require_connected(&self) -> Result<()> {
        if self.n() < 2 {
            return Err(param("random-walk quantities need at least two nodes"));
        }
        let c = self.component_count();
        if c != 1 {
            return Err(Error::Disconnected { zero_modes: c });
        }
        Ok(())
    }

    /// Writes the plain-text edge list: `n <count>` then one `i j w` line per
    /// undirected edge (`i < j`).
    pub fn write_edge_list<W: Write>(&self, mut out: W) -> Result<()> {
        out.write_all(self.to_edge_list().as_bytes())?;
        Ok(())
    }

    pub fn to_edge_list(&self) -> String {
        let mut s = format!("n {}\n", self.n());
        for (i, j, w) in self.edges() {
            let _ = writeln!(s, "{i} {j} {w}");
        }
        s
    }

    /// Parses the edge-list format. Blank lines and `#` comments are skipped.
    pub fn read_edge_list<R: BufRead>(input: R) -> Result<Graph> {
        let mut n = None;
        let mut edges = Vec::new();
        for (idx, line) in input.lines().enumerate() {
            let line = line?;
            let lineno = idx + 1;
            let body = line.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            let fields: Vec<&str> = body.split_whitespace().collect();
            let perr = |msg: String| Error::Parse { line: lineno, msg };
            match n {
                None => {
                    if fields.len() != 2 || fields[0] != "n" {
                        return Err(perr(format!("expected header `n <count>`, got `{body}`")));
                    }
                    let count = fields[1]
                        .parse::<usize>()
                        .map_err(|e| perr(format!("bad node count: {e}")))?;
                    n = Some(count);
                }
                Some(_) => {
                    if fields.len() != 3 {
                        return Err(perr(format!("expected `i j w`, got `{body}`")));
                    }
                    let i = fields[0]
                        .parse::<usize>()
                        .map_err(|e| perr(format!("bad index: {e}")))?;
                    let j = fields[1]
                        .parse::<usize>()
                        .map_err(|e| perr(format!("bad index: {e}")))?;
                    let w = fields[2]
                        .parse::<f64>()
                        .map_err(|e| perr(format!("bad weight: {e}")))?;
                    edges.push((i, j, w));
                }
            }
        }
        let n = n.ok_or(Error::Parse {
            line: 0,
            msg: "missing `n <count>` header".into(),
        })?;
        Graph::from_edges(n, edges)
    }
}

/// Dimensions and neighbor radius of an m-dimensional r-nearest-neighbor torus.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TorusSpec {
    dims: Vec<usize>,
    r: usize,
}

impl TorusSpec {
    pub fn new(dims: Vec<usize>, r: usize) -> Result<TorusSpec> {
        if dims.is_empty() {
            return Err(param("torus needs at least one dimension"));
        }
        for &k in &dims {
            check_cycle_params(k, r)?;
        }
        Ok(TorusSpec { dims, r })
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn node_count(&self) -> usize {
        self.dims.iter().product()
    }

    /// Degree of every node, `2rm`.
    pub fn degree(&self) -> usize {
        2 * self.r * self.dims.len()
    }
}

pub(crate) fn check_cycle_params(n: usize, r: usize) -> Result<()> {
    if n < 3 {
        return Err(param(format!("cycle needs n >= 3, got n = {n}")));
    }
    if r < 1 {
        return Err(param("neighbor radius r must be >= 1"));
    }
    if 2 * r + 1 > n {
        return Err(param(format!(
            "need 2r + 1 <= n, got r = {r}, n = {n} (wrap-around would duplicate edges)"
        )));
    }
    Ok(())
}

/// The r-nearest-neighbor cycle `C_n^r`: `i ~ j` iff their circular distance
/// lies in `[1, r]`.
pub fn build_cycle(n: usize, r: usize) -> Result<Graph> {
    check_cycle_params(n, r)?;
    let adj = (0..n)
        .map(|i| {
            (1..=r)
                .flat_map(|d| [(i + d) % n, (i + n - d) % n])
                .map(|j| (j, 1.0))
                .collect()
        })
        .collect();
    Ok(Graph::from_adjacency(adj))
}

/// Cartesian product `g1 □ g2`; node `(u1, u2)` has index `u1 * n2 + u2`.
pub fn cartesian_product(g1: &Graph, g2: &Graph) -> Graph {
    let (n1, n2) = (g1.n(), g2.n());
    let mut adj = Vec::with_capacity(n1 * n2);
    for u1 in 0..n1 {
        for u2 in 0..n2 {
            let mut row: Vec<(usize, f64)> =
                Vec::with_capacity(g1.neighbors(u1).len() + g2.neighbors(u2).len());
            row.extend(g1.neighbors(u1).iter().map(|&(v1, w)| (v1 * n2 + u2, w)));
            row.extend(g2.neighbors(u2).iter().map(|&(v2, w)| (u1 * n2 + v2, w)));
            adj.push(row);
        }
    }
    Graph::from_adjacency(adj)
}

/// Folds [`cartesian_product`] over the cycles `C_{k_i}^r`.
pub fn build_torus(spec: &TorusSpec) -> Result<Graph> {
    let mut dims = spec.dims().iter();
    let first = dims.next().expect("TorusSpec has at least one dimension");
    let mut g = build_cycle(*first, spec.r())?;
    for &k in dims {
        g = cartesian_product(&g, &build_cycle(k, spec.r())?);
    }
    Ok(g)
}

/// Complete graph `K_n` with unit weights.
pub fn complete_graph(n: usize) -> Result<Graph> {
    if n < 2 {
        return Err(param("complete graph needs n >= 2"));
    }
    let adj = (0..n)
        .map(|i| (0..n).filter(|&j| j != i).map(|j| (j, 1.0)).collect())
        .collect();
    Ok(Graph::from_adjacency(adj))
}
