//! Numerical toolkit for weight sequences, weight functions and weight
//! matrices of ultradifferentiable and Gelfand–Shilov type classes.
//!
//! Sequences live in the log domain (`ln M_p`), weight functions are
//! evaluated pointwise, and every asymptotic property is reported as a
//! three-valued [`Verdict`] decided on a finite window.

pub mod assocfn;
pub mod config;
pub mod conjugate;
pub mod error;
pub mod ext;
pub mod lambdanorms;
mod legendre;
pub mod matrices;
pub mod oscillator;
pub mod relations;
pub mod seqcore;
pub mod trend;
pub mod verdict;
pub mod weightspec;

pub use config::RunConfig;
pub use error::{Error, Result};
pub use seqcore::{BlockSequence, LogSequence, Provenance, SeqCondition};
pub use verdict::{Counterexample, Status, Verdict, Window};
