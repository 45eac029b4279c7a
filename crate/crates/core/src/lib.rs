//! Kloosterman sums attached to the long Weyl element of `SL(3, Z)`.
//!
//! The crate evaluates these sums exactly in cyclotomic integers, enumerates
//! the double cosets that index them, and checks the closed forms against a
//! brute-force oracle built from Bruhat coordinates.

pub mod arith;
pub mod cyclo;
pub mod divisor;
pub mod error;
pub mod oracle;
pub mod par;
pub mod slmat;
pub mod strata;
pub mod sums;

pub use cyclo::{CycSum, RationalAngle};
pub use error::{Error, Result};
