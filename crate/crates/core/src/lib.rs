//! Algorithms that beat the random assignment on bounded-degree constraint
//! satisfaction problems.
//!
//! * [`xor3`]: decoupled Max-3XOR with randomized and derandomized rounding.
//! * [`advrand`]: random restriction plus Chebyshev-point noise for Max-kXOR.
//! * [`trifree`]: median-threshold greedy for triangle-free general CSPs.
//!
//! [`fourier`] and [`csp`] hold the shared model; [`gen`] builds instances
//! and [`oracle`] provides exhaustive ground truth for small ones.

pub mod advrand;
pub mod bench;
pub mod calibration;
pub mod cli;
pub mod csp;
pub mod fourier;
pub mod gen;
pub mod oracle;
pub mod report;
pub mod rng;
pub mod solve;
pub mod trifree;
pub mod xor3;

mod error;

pub use csp::{Assignment, Instance, Value};
pub use error::{Error, Result};
pub use report::SolveReport;
pub use solve::{solve, Algorithm, SolveOptions};
