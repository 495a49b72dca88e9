#ifndef WALKLAT_H
#define WALKLAT_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes returned by every fallible function.
 */
typedef enum WlStatus {
  WL_STATUS_OK = 0,
  WL_STATUS_NULL_POINTER = 1,
  WL_STATUS_INVALID_PARAMETER = 2,
  WL_STATUS_DISCONNECTED = 3,
  WL_STATUS_NUMERICAL = 4,
  WL_STATUS_BUFFER_TOO_SMALL = 5,
  WL_STATUS_IO = 6,
  WL_STATUS_PANIC = 7,
} WlStatus;

/**
 * Opaque graph handle.
 */
typedef struct WlGraph WlGraph;

/**
 * Wireless topology parameters; see `wl_wireless_params_default`.
 */
typedef struct WlWirelessParams {
  size_t n;
  double area_side;
  double eta;
  double alpha;
  double p_min;
  double c_n;
  double threshold;
  /**
   * Uniform transmit power for every pair.
   */
  double power;
} WlWirelessParams;

/**
 * Monte-Carlo estimate of the expected packet delay in hops.
 */
typedef struct WlWalkEstimate {
  double mean;
  double ci_halfwidth;
  uint64_t trials_used;
  uint64_t truncated;
} WlWalkEstimate;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or null. The pointer is
 * valid until the next failing call on the same thread.
 */
const char *wl_last_error(void);

/**
 * r-nearest-neighbor cycle on `n` nodes.
 *
 * # Safety
 * `out` must be a valid pointer to writable storage for one handle.
 */
enum WlStatus wl_graph_cycle(size_t n, size_t r, struct WlGraph **out);

/**
 * Cartesian product of `ndims` cycles with side lengths `dims` and radius `r`.
 *
 * # Safety
 * `dims` must point to `ndims` values; `out` must be writable.
 */
enum WlStatus wl_graph_torus(const size_t *dims, size_t ndims, size_t r, struct WlGraph **out);

/**
 * Undirected graph from `m` edges `(src[k], dst[k])`. `weights` may be null
 * for unit weights.
 *
 * # Safety
 * `src` and `dst` (and `weights` if non-null) must point to `m` values;
 * `out` must be writable.
 */
enum WlStatus wl_graph_from_edges(size_t n,
                                  const size_t *src,
                                  const size_t *dst,
                                  const double *weights,
                                  size_t m,
                                  struct WlGraph **out);

/**
 * Fills `out` with the default wireless parameters.
 *
 * # Safety
 * `out` must be writable.
 */
enum WlStatus wl_wireless_params_default(struct WlWirelessParams *out);

/**
 * Wireless topology from a seeded uniform placement. `connected` (optional)
 * receives whether the binary graph is connected; disconnected graphs are
 * still returned.
 *
 * # Safety
 * `params` must be valid; `out` must be writable; `connected` may be null.
 */
enum WlStatus wl_graph_wireless(const struct WlWirelessParams *params,
                                uint64_t seed,
                                struct WlGraph **out,
                                bool *connected);

/**
 * Releases a handle. Null is ignored.
 *
 * # Safety
 * `g` must come from a `wl_graph_*` constructor and not be freed twice.
 */
void wl_graph_free(struct WlGraph *g);

/**
 * Node count, or 0 for a null handle.
 *
 * # Safety
 * `g` must be a live handle or null.
 */
size_t wl_graph_node_count(const struct WlGraph *g);

/**
 * Mean latency `T` from the numeric Laplacian spectrum.
 *
 * # Safety
 * `g` must be a live handle; `out` must be writable.
 */
enum WlStatus wl_mean_latency(const struct WlGraph *g, double *out);

/**
 * Spectral-gap bounds on the mean latency.
 *
 * # Safety
 * `g` must be a live handle; `lower` and `upper` must be writable.
 */
enum WlStatus wl_latency_bounds(const struct WlGraph *g, double *lower, double *upper);

/**
 * Expected packet delay: mean hitting time over ordered pairs, in hops.
 *
 * # Safety
 * `g` must be a live handle; `out` must be writable.
 */
enum WlStatus wl_expected_packet_delay(const struct WlGraph *g, double *out);

/**
 * Hitting-time matrix written row-major into `buf` (entry `s*n + t` is the
 * expected hops from `s` to `t`). `len` must be at least `n*n`.
 *
 * # Safety
 * `g` must be a live handle; `buf` must point to `len` writable values.
 */
enum WlStatus wl_hitting_times(const struct WlGraph *g, double *buf, size_t len);

/**
 * Closed-form mean latency of the r-nearest-neighbor cycle.
 *
 * # Safety
 * `out` must be writable.
 */
enum WlStatus wl_cycle_mean_latency(size_t n, size_t r, double *out);

/**
 * Closed-form mean latency of a torus; no graph is built.
 *
 * # Safety
 * `dims` must point to `ndims` values; `out` must be writable.
 */
enum WlStatus wl_torus_mean_latency(const size_t *dims, size_t ndims, size_t r, double *out);

/**
 * Monte-Carlo estimate of the expected packet delay from `trials` walks
 * spread over all ordered pairs.
 *
 * # Safety
 * `g` must be a live handle; `out` must be writable.
 */
enum WlStatus wl_walk_estimate(const struct WlGraph *g,
                               uint64_t trials,
                               uint64_t seed,
                               struct WlWalkEstimate *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* WALKLAT_H */
