//! Spectral classification and ground-state entanglement of translation-invariant
//! harmonic lattices with finite-range couplings.
//!
//! The crate is `no_std` (it needs `alloc`). All IO, file formats and the command
//! line live in the `harm-ent` companion crate.
//!
//! Pipeline, for a lattice `H = ½ Σ pᵢ² + ½ Σ Vᵢⱼ qᵢ qⱼ` on a periodic torus:
//!
//! 1. [`lattice`] validates the coupling stencil and computes the circulant
//!    spectrum `λ_j`.
//! 2. [`spectral`] inspects the symbol `λ(θ)`: zeros on the unit circle make the
//!    lattice gapless (critical), and the Fourier coefficients of `ln λ^{1/2}`
//!    give the asymptotic entanglement constant of the gapped case.
//! 3. [`kernel`] computes `V^{1/2}` and `V^{-1/2}` exactly through the discrete
//!    spectrum and cuts them into partition blocks.
//! 4. [`entanglement`] turns the blocks into the entropy, the position-space
//!    mutual information, and the upper bound from the log-negativity estimate.
//! 5. [`scaling`] sweeps sizes and fits the resulting scaling laws.
#![no_std]
#![warn(missing_debug_implementations)]

extern crate alloc;

mod dft;
mod error;
mod linalg;
mod tolerance;

pub mod entanglement;
pub mod kernel;
pub mod lattice;
pub mod scaling;
pub mod spectral;

pub use error::{Error, Result};
pub use tolerance::Tolerances;

pub use entanglement::{
    correlation_length, entropy, mutual_information, negativity_upper_bound, report, CorrelationEstimate, DecayClass,
    EntanglementReport, EntropyResult,
};
pub use kernel::{build_kernel, extract_blocks, kernel_row_decay, CirculantKernel, Partition, PartitionBlocks};
pub use lattice::{build_coupling, build_eta_chain, dense_potential, CouplingSpec, EtaChainParams, Term};
pub use spectral::{
    classify, regular_part_eval, spectral_eval, szego_coefficients, szego_lower_bound, SpectralClassification,
    SpectralKind, SzegoCoefficients, UnitCircleRoot,
};
