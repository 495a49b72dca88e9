//! C ABI over `walklat`.
//!
//! Graphs live behind an opaque `WlGraph` handle created by one of the
//! `wl_graph_*` constructors and released with [`wl_graph_free`]. Every
//! fallible call returns a [`WlStatus`]; on failure a message is kept per
//! thread and can be read with [`wl_last_error`]. Output pointers are only
//! written on success.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use walklat::latency::{
    expected_packet_delay, hitting_times, latency_bounds, mean_latency_cycle,
    mean_latency_spectral, mean_latency_torus,
};
use walklat::walker::estimate_mean_latency;
use walklat::wireless::{generate_topology, PowerAssignment};
use walklat::{build_cycle, build_torus, Error, Graph, TorusSpec, WalkConfig, WirelessConfig};

/// Status codes returned by every fallible function.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WlStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidParameter = 2,
    Disconnected = 3,
    Numerical = 4,
    BufferTooSmall = 5,
    Io = 6,
    Panic = 7,
}

/// Opaque graph handle.
pub struct WlGraph {
    inner: Graph,
}

/// Wireless topology parameters; see `wl_wireless_params_default`.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct WlWirelessParams {
    pub n: usize,
    pub area_side: f64,
    pub eta: f64,
    pub alpha: f64,
    pub p_min: f64,
    pub c_n: f64,
    pub threshold: f64,
    /// Uniform transmit power for every pair.
    pub power: f64,
}

/// Monte-Carlo estimate of the expected packet delay in hops.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct WlWalkEstimate {
    pub mean: f64,
    pub ci_halfwidth: f64,
    pub trials_used: u64,
    pub truncated: u64,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> WlStatus {
    match e {
        Error::Parameter(_)
        | Error::NotSymmetric { .. }
        | Error::BelowMinimumPower { .. }
        | Error::Parse { .. } => WlStatus::InvalidParameter,
        Error::Disconnected { .. } | Error::ZeroDegree(_) => WlStatus::Disconnected,
        Error::NoZeroMode
        | Error::Degenerate(_)
        | Error::Singular(_)
        | Error::AllTruncated { .. } => WlStatus::Numerical,
        Error::Io(_) => WlStatus::Io,
    }
}

fn fail(status: WlStatus, msg: impl Into<String>) -> WlStatus {
    set_error(msg.into());
    status
}

/// Runs `f`, converting library errors and panics into status codes.
fn guard(f: impl FnOnce() -> Result<(), WlStatus>) -> WlStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => WlStatus::Ok,
        Ok(Err(s)) => s,
        Err(_) => fail(WlStatus::Panic, "internal panic"),
    }
}

fn lib<T>(r: walklat::Result<T>) -> Result<T, WlStatus> {
    r.map_err(|e| fail(status_of(&e), e.to_string()))
}

fn non_null<T>(p: *const T, name: &str) -> Result<(), WlStatus> {
    if p.is_null() {
        Err(fail(WlStatus::NullPointer, format!("{name} is null")))
    } else {
        Ok(())
    }
}

unsafe fn graph_ref<'a>(g: *const WlGraph) -> Result<&'a Graph, WlStatus> {
    non_null(g, "graph")?;
    Ok(&(*g).inner)
}

unsafe fn dims_slice<'a>(dims: *const usize, ndims: usize) -> Result<&'a [usize], WlStatus> {
    non_null(dims, "dims")?;
    Ok(std::slice::from_raw_parts(dims, ndims))
}

unsafe fn emit_graph(g: Graph, out: *mut *mut WlGraph) {
    *out = Box::into_raw(Box::new(WlGraph { inner: g }));
}

/// Message for the last failed call on this thread, or null. The pointer is
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn wl_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// r-nearest-neighbor cycle on `n` nodes.
///
/// # Safety
/// `out` must be a valid pointer to writable storage for one handle.
#[no_mangle]
pub unsafe extern "C" fn wl_graph_cycle(n: usize, r: usize, out: *mut *mut WlGraph) -> WlStatus {
    guard(|| {
        non_null(out, "out")?;
        emit_graph(lib(build_cycle(n, r))?, out);
        Ok(())
    })
}

/// Cartesian product of `ndims` cycles with side lengths `dims` and radius `r`.
///
/// # Safety
/// `dims` must point to `ndims` values; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn wl_graph_torus(
    dims: *const usize,
    ndims: usize,
    r: usize,
    out: *mut *mut WlGraph,
) -> WlStatus {
    guard(|| {
        non_null(out, "out")?;
        let spec = lib(TorusSpec::new(dims_slice(dims, ndims)?.to_vec(), r))?;
        emit_graph(lib(build_torus(&spec))?, out);
        Ok(())
    })
}

/// Undirected graph from `m` edges `(src[k], dst[k])`. `weights` may be null
/// for unit weights.
///
/// # Safety
/// `src` and `dst` (and `weights` if non-null) must point to `m` values;
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn wl_graph_from_edges(
    n: usize,
    src: *const usize,
    dst: *const usize,
    weights: *const f64,
    m: usize,
    out: *mut *mut WlGraph,
) -> WlStatus {
    guard(|| {
        non_null(out, "out")?;
        non_null(src, "src")?;
        non_null(dst, "dst")?;
        let src = std::slice::from_raw_parts(src, m);
        let dst = std::slice::from_raw_parts(dst, m);
        let w = if weights.is_null() {
            None
        } else {
            Some(std::slice::from_raw_parts(weights, m))
        };
        let edges = (0..m).map(|k| (src[k], dst[k], w.map_or(1.0, |w| w[k])));
        emit_graph(lib(Graph::from_edges(n, edges))?, out);
        Ok(())
    })
}

/// Fills `out` with the default wireless parameters.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn wl_wireless_params_default(out: *mut WlWirelessParams) -> WlStatus {
    guard(|| {
        non_null(out, "out")?;
        let d = WirelessConfig::default();
        let power = match d.power {
            PowerAssignment::Uniform(p) => p,
            PowerAssignment::PerPair(_) => 1.0,
        };
        *out = WlWirelessParams {
            n: d.n,
            area_side: d.area_side,
            eta: d.eta,
            alpha: d.alpha,
            p_min: d.p_min,
            c_n: d.c_n,
            threshold: d.threshold,
            power,
        };
        Ok(())
    })
}

/// Wireless topology from a seeded uniform placement. `connected` (optional)
/// receives whether the binary graph is connected; disconnected graphs are
/// still returned.
///
/// # Safety
/// `params` must be valid; `out` must be writable; `connected` may be null.
#[no_mangle]
pub unsafe extern "C" fn wl_graph_wireless(
    params: *const WlWirelessParams,
    seed: u64,
    out: *mut *mut WlGraph,
    connected: *mut bool,
) -> WlStatus {
    guard(|| {
        non_null(params, "params")?;
        non_null(out, "out")?;
        let p = &*params;
        let cfg = WirelessConfig {
            n: p.n,
            area_side: p.area_side,
            eta: p.eta,
            alpha: p.alpha,
            p_min: p.p_min,
            c_n: p.c_n,
            threshold: p.threshold,
            power: PowerAssignment::Uniform(p.power),
        };
        let (_, topo) = lib(generate_topology(&cfg, seed))?;
        if !connected.is_null() {
            *connected = topo.connected;
        }
        emit_graph(topo.graph, out);
        Ok(())
    })
}

/// Releases a handle. Null is ignored.
///
/// # Safety
/// `g` must come from a `wl_graph_*` constructor and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn wl_graph_free(g: *mut WlGraph) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// Node count, or 0 for a null handle.
///
/// # Safety
/// `g` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn wl_graph_node_count(g: *const WlGraph) -> usize {
    if g.is_null() {
        0
    } else {
        (*g).inner.n()
    }
}

/// Mean latency `T` from the numeric Laplacian spectrum.
///
/// # Safety
/// `g` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn wl_mean_latency(g: *const WlGraph, out: *mut f64) -> WlStatus {
    guard(|| {
        non_null(out, "out")?;
        *out = lib(mean_latency_spectral(graph_ref(g)?))?;
        Ok(())
    })
}

/// Spectral-gap bounds on the mean latency.
///
/// # Safety
/// `g` must be a live handle; `lower` and `upper` must be writable.
#[no_mangle]
pub unsafe extern "C" fn wl_latency_bounds(
    g: *const WlGraph,
    lower: *mut f64,
    upper: *mut f64,
) -> WlStatus {
    guard(|| {
        non_null(lower, "lower")?;
        non_null(upper, "upper")?;
        let b = lib(latency_bounds(graph_ref(g)?))?;
        *lower = b.lower;
        *upper = b.upper;
        Ok(())
    })
}

/// Expected packet delay: mean hitting time over ordered pairs, in hops.
///
/// # Safety
/// `g` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn wl_expected_packet_delay(g: *const WlGraph, out: *mut f64) -> WlStatus {
    guard(|| {
        non_null(out, "out")?;
        *out = lib(expected_packet_delay(graph_ref(g)?))?;
        Ok(())
    })
}

/// Hitting-time matrix written row-major into `buf` (entry `s*n + t` is the
/// expected hops from `s` to `t`). `len` must be at least `n*n`.
///
/// # Safety
/// `g` must be a live handle; `buf` must point to `len` writable values.
#[no_mangle]
pub unsafe extern "C" fn wl_hitting_times(
    g: *const WlGraph,
    buf: *mut f64,
    len: usize,
) -> WlStatus {
    guard(|| {
        let g = graph_ref(g)?;
        non_null(buf, "buf")?;
        let n = g.n();
        if len < n * n {
            return Err(fail(
                WlStatus::BufferTooSmall,
                format!("buffer holds {len} values, need {}", n * n),
            ));
        }
        let h = lib(hitting_times(g))?;
        let buf = std::slice::from_raw_parts_mut(buf, n * n);
        for s in 0..n {
            for t in 0..n {
                buf[s * n + t] = h.get(s, t);
            }
        }
        Ok(())
    })
}

/// Closed-form mean latency of the r-nearest-neighbor cycle.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn wl_cycle_mean_latency(n: usize, r: usize, out: *mut f64) -> WlStatus {
    guard(|| {
        non_null(out, "out")?;
        *out = lib(mean_latency_cycle(n, r))?;
        Ok(())
    })
}

/// Closed-form mean latency of a torus; no graph is built.
///
/// # Safety
/// `dims` must point to `ndims` values; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn wl_torus_mean_latency(
    dims: *const usize,
    ndims: usize,
    r: usize,
    out: *mut f64,
) -> WlStatus {
    guard(|| {
        non_null(out, "out")?;
        let spec = lib(TorusSpec::new(dims_slice(dims, ndims)?.to_vec(), r))?;
        *out = lib(mean_latency_torus(&spec))?;
        Ok(())
    })
}

/// Monte-Carlo estimate of the expected packet delay from `trials` walks
/// spread over all ordered pairs.
///
/// # Safety
/// `g` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn wl_walk_estimate(
    g: *const WlGraph,
    trials: u64,
    seed: u64,
    out: *mut WlWalkEstimate,
) -> WlStatus {
    guard(|| {
        non_null(out, "out")?;
        let est = lib(estimate_mean_latency(
            graph_ref(g)?,
            &WalkConfig::new(trials, seed),
        ))?;
        *out = WlWalkEstimate {
            mean: est.mean,
            ci_halfwidth: est.ci_halfwidth,
            trials_used: est.trials_used,
            truncated: est.truncated,
        };
        Ok(())
    })
}
