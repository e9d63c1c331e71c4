//! Exact arithmetic for the ternary codes attached to `Sp(2,q)` and
//! `Sp(4,q)` over `GF(3^r)`, and for power moments of Kloosterman sums
//! with square arguments.
//!
//! Everything here is integer or rational arithmetic. Character values live
//! in the Eisenstein integers `Z[ω]`, counts are arbitrary precision, and
//! every identity the crate evaluates is checked for exact equality against
//! an independent route (brute force, a transform, or a second formula).
//!
//! The crate is `no_std` and needs only `alloc`.

#![cfg_attr(not(any(test, feature = "std")), no_std)]
#![deny(unsafe_code)]

extern crate alloc;

pub mod charsum;
pub mod codes;
pub mod combinat;
mod eisenstein;
mod error;
pub mod gf;
pub mod matrix;
pub mod moments;
pub mod symp;

pub use eisenstein::{Eisenstein, ExponentCounts};
pub use error::{Error, Result};
pub use gf::{FieldCtx, FieldElement};
pub use matrix::MatrixGF;
pub use symp::Which;
