//! Arbitrary-precision π from the arithmetic-geometric mean.
//!
//! Three equivalent iterations are implemented on a binary fixed-point
//! type: Brent-Salamin ([`agm`]), and the quadratic and quartic Borwein
//! iterations ([`borwein`]). [`equivalence`] runs them side by side and
//! measures how far their intermediate quantities drift apart,
//! [`convergence`] tracks correct digits against the a-priori error bound,
//! and [`integral_oracle`] checks the underlying integral identities with
//! double-precision quadrature.
//!
//! The crate is `no_std` and only needs an allocator.
#![no_std]

extern crate alloc;

pub mod agm;
pub mod borwein;
pub mod convergence;
pub mod equivalence;
pub mod error;
pub mod fixedpoint;
pub mod integral_oracle;
pub mod nat;

pub use error::{Error, Result};
pub use fixedpoint::{BigFixed, PrecisionContext, DEFAULT_GUARD_DIGITS};
