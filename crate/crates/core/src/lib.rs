//! Entanglement and nonlocality classification of three-qubit GHZ-symmetric
//! states ρ(p,q).
//!
//! The crate is `no_std` (it needs `alloc`) and is organized bottom-up:
//!
//! - [`linalg`]: dense complex matrices, Pauli operators, Kronecker products,
//!   traces and a Hermitian eigenvalue routine for PSD checks.
//! - [`state`]: the (p,q) parametrization, density-matrix construction and the
//!   X-state view of ρ(p,q).
//! - [`entanglement`]: closed-form entanglement classes and genuine
//!   multipartite concurrence.
//! - [`bell`]: tripartite two-setting Bell expressions and the four built-in
//!   facets (Mermin, Śliwa #15, Svetlichny, Bancal #99).
//! - [`optimizer`]: see-saw maximization of Bell expressions over projective
//!   qubit measurements, plus a random-search lower bound.
//! - [`region`]: analytical maxima, nonlocality predicates and the (p,q) grid
//!   scanner.
//!
//! File formats, the CLI and the verification harness live in the `ghzsym`
//! companion crate.
#![no_std]
#![allow(clippy::needless_range_loop)]

extern crate alloc;

pub mod bell;
pub mod entanglement;
mod error;
pub mod linalg;
pub mod optimizer;
pub mod region;
pub mod state;

pub use bell::{BellExpression, Builtin, CorrelationTensor, Polytope, Slot, Term};
pub use entanglement::{cgm_closed_form, cgm_unclamped, cgm_x, classify, EntanglementClass};
pub use error::{ConstraintViolation, Error};
pub use linalg::{ComplexMatrix, C64};
pub use optimizer::{
    correlations, observable, random_search_oracle, seesaw, MeasurementScenario,
    ObservableDirection, OptimizationResult, SeesawConfig,
};
pub use region::{NonlocalityReport, ScanMode, ScanPoint, Verdict};
pub use state::{density_matrix, validate, x_elements, DensityMatrix, GhzParams, XStateElements};

/// √2 to full double precision.
pub const SQRT_2: f64 = core::f64::consts::SQRT_2;
/// √3 to full double precision.
pub const SQRT_3: f64 = 1.732_050_807_568_877_2;

pub type Result<T> = core::result::Result<T, Error>;
