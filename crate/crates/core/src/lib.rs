//! Numerical workbench for the standard Poisson–Lie structure on SL_n.

pub mod action_angle;
pub mod cartan_weyl;
pub mod characteristic_flows;
pub mod chevalley_rmatrix;
pub mod factorization;
pub mod linalg;
pub mod poisson_geometry;
pub mod sampling;

pub use cartan_weyl::{CartanData, Series, Weight, WeylWord};
pub use linalg::{CMat, C};

#[derive(Debug, thiserror::Error, Clone, PartialEq)]
pub enum Error {
    #[error(transparent)]
    Cartan(#[from] cartan_weyl::CartanError),
    #[error("matrix size {0} out of range (2..=6)")]
    SizeOutOfRange(usize),
    #[error("not in the big cell: leading minor {index} is {value:e}")]
    NotInBigCell { index: usize, value: f64 },
    #[error("ambiguous Bruhat cell: candidates {first:?} and {second:?}")]
    AmbiguousCell { first: Vec<usize>, second: Vec<usize> },
    #[error("element is not semisimple: {0}")]
    NotSemisimple(String),
    #[error("degenerate chart: differential rank {rank} < {expected}")]
    DegenerateChart { rank: usize, expected: usize },
    #[error("vanishing minor {label}: |value| = {value:e}")]
    VanishingMinor { label: String, value: f64 },
    #[error("degenerate spectrum: eigenvalue gap {0:e}")]
    DegenerateSpectrum(f64),
    #[error("denominator vanishes at t = {0}")]
    DenominatorVanishes(f64),
    #[error("action-angle chart undefined: r[{index}] = {value:e}")]
    ChartUndefined { index: usize, value: f64 },
    #[error("factorization breakdown at t = {0}")]
    FactorizationBreakdown(f64),
    #[error("step too large: drift {0:e}")]
    StepTooLarge(f64),
    #[error("invalid casimir spec: {0}")]
    InvalidCasimir(String),
    #[error("determinant {0} is not 1")]
    NotUnimodular(f64),
    #[error("sampling failed: {0}")]
    SamplingFailed(String),
}

pub type Result<T> = std::result::Result<T, Error>;
