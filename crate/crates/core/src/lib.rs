//! Numerical toolkit for a Montgomery-pair-correlation-inspired iterated map
//! interpreted as an electrical system.
//!
//! The toolkit covers the map itself and its analysis battery: orbit
//! generation, fixed-point solving, Lyapunov exponents, bifurcation scans,
//! delay-coordinate phase portraits, Poincaré sections, 3-D attractor
//! embeddings, power spectra, circuit energy metrics, and grid-discretized
//! quantum Hamiltonian eigenproblems.

pub mod dynamics;
pub mod energy;
pub mod geometry;
pub mod maps;
pub mod quantum;
pub mod spectral;

pub use maps::{AppendixParams, ElectricalParams, MapEval, MapParams};
