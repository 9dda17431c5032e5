//! Exact combinatorics, probabilities and simulations for repeated
//! measurements of quantum coins.
//!
//! A quantum coin is a maximally random qubit (or qudit) state. Measuring it
//! `n` times yields an outcome string, and this crate answers questions of the
//! form "how likely is it that the pair `11` shows up exactly once, at a given
//! place?". Counts are Fibonacci-type numbers and every count and probability
//! is computed exactly with big integers and rationals. Each closed form is
//! paired with an independent brute-force enumeration in [`oracle`].
//!
//! The [`quantum`] and [`geometry`] modules reproduce the same numbers from
//! state vectors and projectors, and [`montecarlo`] estimates them by seeded
//! simulation.

pub mod error;
pub mod exec;
pub mod geometry;
pub mod highprec;
pub mod identities;
pub mod montecarlo;
pub mod oracle;
pub mod pattern;
pub mod probability;
pub mod quantum;
pub mod sequences;

pub use error::{Error, Result};
pub use exec::Execution;
pub use highprec::HighPrecision;
pub use pattern::{AllowedCount, PatternRecord, PatternSpec, Placement, Segment};
pub use probability::CoinModel;

/// Arbitrary-precision signed integer used for every count.
pub type ExactInteger = num_bigint::BigInt;

/// Reduced fraction with positive denominator used for every probability.
pub type ExactRational = num_rational::BigRational;
