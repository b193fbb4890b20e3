//! Upper probabilities and upper expectations for finite sequences under
//! two composite null hypotheses: exchangeability (permutation-invariant
//! laws) and randomness (IID product laws). For infinite sequences the two
//! are equivalent; on a fixed length N they can differ by as much as
//! `N^N/N!`, and on an alphabet of K < N symbols by exactly the tight
//! constant `C(N, K)` attained at the balanced-split orbit. This crate
//! computes the bounds, the constants, and the testing machinery built on
//! them (p-variables, e-variables, critical regions, prediction sets),
//! with log-domain numerics so that lengths up to 10^7 stay representable.

pub mod bounds;
pub mod combinatorics;
mod error;
pub mod spaces;
pub mod testing;

pub use error::{Error, Result};
