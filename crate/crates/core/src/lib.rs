//! Upper and lower bounds for the j-wise Davenport constants `D_j(C_2^r)`.
//!
//! The crate is split along the lines of the computation:
//!
//! - [`gf2`]: bit-packed linear algebra over GF(2), minimum distance of a
//!   binary code and the shortest zero-sum subsequence of its parity-check
//!   columns.
//! - [`zerosum`]: exhaustive oracles for `D_j(C_2^r)` and `s_{<=d}(C_2^r)` at
//!   small rank, plus the recursive combiner that turns them into bounds.
//! - [`rate`]: asymptotic rate-bound functions of binary codes (two MRRW
//!   bounds, Elias-Bassalygo, Hamming, and the Gilbert-Varshamov curve).
//! - [`recursion`]: the increment equation and the coefficient tables it
//!   produces.
//! - [`counting`]: exact Gaussian-binomial counting behind the lower bounds.

pub mod counting;
pub mod error;
pub mod gf2;
pub mod length;
pub mod rate;
pub mod recursion;
pub mod zerosum;

pub use error::{Error, Result};
pub use length::Length;
