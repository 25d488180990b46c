//! Exact diagonalization of the periodic XXZ spin-1/2 ring in fixed
//! particle-number (magnetization) sectors.
//!
//! The crate is organised around the equivalence of the sector Hamiltonian
//! with a discrete Schrödinger operator for hard-core particles on the ring:
//! `H = -(1/2Δ)A + W`, where `A` is the adjacency operator of the N-fold
//! symmetric product of the ring and `W` counts particle clusters.
//! Translation symmetry splits every sector into `L` momentum fibers, each a
//! small Hermitian matrix in a weighted inner-product space; the lowest band
//! above the vacuum ("droplet band") carries one state per fiber.
//!
//! Modules:
//! - [`config`]: ring configurations, translation orbits, droplets, windows.
//! - [`metric`]: graph distances on the symmetric product, BFS oracle,
//!   particle tracking along paths, boundary profiles.
//! - [`combinatorics`]: monotone-tuple sums and exhaustive bound checks.
//! - [`operator`]: Fock-space and sector Hamiltonians.
//! - [`fourier`]: the momentum-space transform and fiber operators.
//! - [`spectral`]: droplet-band extraction and decay-estimate verification.
//! - [`entanglement`]: particle-number-resolved partial traces and entropies.
//! - [`analysis`]: spectral shift functions, Schatten quasinorms, and the
//!   reduced-state difference estimates.
//! - [`report`]: structured bound-check rows with deterministic JSON output.
//!
//! ```
//! use xxz_ring::config::{centered_window, ModelParams, SectorBasis};
//! use xxz_ring::entanglement::{entropy, partial_trace};
//! use xxz_ring::spectral::droplet_band_states;
//!
//! let params = ModelParams::new(10, 3, 8.0).unwrap();
//! let band = droplet_band_states(params).unwrap();
//! assert_eq!(band.states.len(), 10); // one state per momentum fiber
//! let ground = &band.states[0];
//! assert!(ground.energy >= 1.0 - 1.0 / 8.0 && ground.energy <= 1.0);
//!
//! let basis = SectorBasis::new(10, 3);
//! let window = centered_window(10, 0.25).unwrap();
//! let blocks = partial_trace(&ground.vector, &basis, window).unwrap();
//! assert!(entropy(&blocks).unwrap() > 0.0);
//! ```

pub mod analysis;
pub mod combinatorics;
pub mod config;
pub mod entanglement;
mod error;
pub mod fourier;
pub mod metric;
pub mod operator;
pub mod report;
pub mod spectral;

pub use error::{Error, Result};

/// Complex scalar used throughout the fiber and density-matrix paths.
pub type C64 = nalgebra::Complex<f64>;

/// Dense real matrix type used for sector operators.
pub type RMatrix = nalgebra::DMatrix<f64>;
/// Dense complex matrix type used for fibers and density blocks.
pub type CMatrix = nalgebra::DMatrix<C64>;
/// Dense complex vector type used for sector states.
pub type CVector = nalgebra::DVector<C64>;
