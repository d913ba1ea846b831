//! Log-domain evaluation of entire functions `f(z) = c z^p0 ∏ (1 + z/a_n)^p_n`
//! with negative real zeros, and numerical verification of their winding,
//! growth and escaping-set structure.
//!
//! All magnitudes are carried as logarithms, so values like `|f(z)| ~ e^(10^6)`
//! never overflow. The crate is `no_std` + `alloc`; IO lives in the
//! `spiderweb` companion crate.

#![cfg_attr(not(any(feature = "std", test)), no_std)]

extern crate alloc;

pub mod curves;
pub mod dynamics;
pub mod error;
pub mod family;
pub mod logpolar;
pub mod modulus;
pub mod product;
pub mod quadrature;
pub mod special;
pub mod subharmonic;
pub mod theorems;
pub mod tower;

pub use error::{Error, Result};
pub use family::{Zero, ZeroFamily};
pub use logpolar::{LogComplex, ZeroFactor};
pub use product::{ClosedForm, EntireProductFunction, TailMode};
pub use tower::Tower;
