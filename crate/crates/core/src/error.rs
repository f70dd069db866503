use alloc::vec::Vec;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid coupling specification: {0}")]
    InvalidSpec(&'static str),

    #[error("coefficient at lag {lag:?} is {value} but its mirror is {mirror}")]
    NotSymmetric { lag: Vec<i64>, value: f64, mirror: f64 },

    #[error("coupling range {range} does not fit extent {extent} (need 2R - 1 <= N)")]
    RangeTooLarge { range: usize, extent: usize },

    #[error("eigenvalue {value:e} of mode {mode:?} is not positive; no normalizable ground state at this size")]
    NotPositive { mode: Vec<usize>, value: f64 },

    #[error("{sites} sites exceed the dense cap of {cap}")]
    TooLarge { sites: usize, cap: usize },

    #[error("bad partition: {0}")]
    BadPartition(&'static str),

    #[error("operation is only defined for one-dimensional lattices")]
    NotOneDimensional,

    #[error("unit-circle roots near angle {angle} cannot be separated")]
    IllConditionedRoots { angle: f64 },

    #[error("symplectic spectrum value {value} is below 1; kernel is inconsistent")]
    SpectrumBelowOne { value: f64 },

    #[error("block matrix is not positive definite")]
    NotPositiveDefinite,

    #[error("mutual information forms disagree: {primal} (positions) vs {dual} (momenta)")]
    IdentityMismatch { primal: f64, dual: f64 },

    #[error("kernel transform left an imaginary residue of {0:e}")]
    ImaginaryResidue(f64),

    #[error("only {usable} usable lags in the correlation fit window")]
    InsufficientDecayData { usable: usize },

    #[error("fit needs at least {needed} points, got {got}")]
    TooFewPoints { needed: usize, got: usize },
}
