//! Isoperimetric constant of graphs and of the random graph process.
//!
//! * [`graph`]: immutable simple graphs, vertex sets, boundaries.
//! * [`process`]: G(n,p), G(n,M) and the random graph process with
//!   minimum-degree hitting times.
//! * [`iso`]: exact `i(G)`, all minimizers, bad-set search, bisection sampling.
//! * [`spectral`]: Laplacian, `λ2` and the spectral bounds on `i(G)`.
//! * [`thresholds`]: threshold edge counts and `C(ε)`.
//! * [`structure`]: low-degree set, density and bad-set checks.
//! * [`experiments`]: seeded Monte Carlo runs and their JSON/CSV output.

pub mod connected;
pub mod error;
pub mod experiments;
pub mod graph;
pub mod iso;
pub mod process;
pub mod rng;
pub mod spectral;
pub mod structure;
pub mod thresholds;

pub use error::{IsoError, Result};
pub use graph::{CutReport, Graph, Ratio, VertexSet, WitnessKind};
