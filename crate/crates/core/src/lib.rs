//! Analytic mean latency, hitting times and spectral bounds for stateless
//! opportunistic routing, where every node forwards a packet to a uniformly
//! random neighbor until it arrives.
//!
//! The crate covers r-nearest-neighbor cycles and tori (closed-form Laplacian
//! spectra), arbitrary symmetric graphs (dense eigensolver), wireless
//! topologies generated from a path-loss model, and a seeded Monte-Carlo
//! walker used as an end-to-end check of the analytic values.
//!
//! | Module | Contents |
//! |--------|----------|
//! | [`graphs`] | [`Graph`], cycles, Cartesian products, tori, edge-list IO |
//! | [`spectral`] | closed-form and numeric Laplacian spectra, `Tr(L^+)` |
//! | [`latency`] | mean latency, bounds, hitting times, expected packet delay |
//! | [`walker`] | Monte-Carlo random-walk estimates |
//! | [`wireless`] | propagation model and topology generation |
//! | [`experiment`] | sweep runner behind the `walklat` binary |

pub mod error;
pub mod experiment;
pub mod graphs;
pub mod latency;
pub mod spectral;
pub mod walker;
pub mod wireless;

pub use error::{Error, Result};
pub use graphs::{build_cycle, build_torus, cartesian_product, Graph, TorusSpec};
pub use latency::{Bounds, HittingMatrix, LatencyReport};
pub use spectral::{Spectrum, SpectrumSource};
pub use walker::{WalkConfig, WalkEstimate};
pub use wireless::{Placement, WirelessConfig};
