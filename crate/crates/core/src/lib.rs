//! Entanglement measures and quantum order parameters for three limit
//! states: BCS pair products, η-pairing (Dicke) states and the Bose-Hubbard
//! superfluid/Mott limits.
//!
//! Each closed form has an independent brute-force route through the dense
//! tensor layer (partial trace, partial transpose, Hermitian spectra,
//! Schmidt decomposition, nearest-product-state search) so the two can be
//! compared numerically.
//!
//! The crate is `no_std` and needs only `alloc`.

#![no_std]

extern crate alloc;

pub mod bcs;
pub mod bh;
pub mod error;
pub mod eta;
pub mod measures;
pub mod numeric;
pub mod tensor;

pub use error::{Error, Result};
pub use measures::OptimizerConfig;
pub use tensor::{
    BipartiteShape, ComplexMatrix, ComplexVector, MultipartiteShape, SchmidtSpectrum, C64,
};
