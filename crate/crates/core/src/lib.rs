//! Exact verification of invariant-dimension bounds for the matrix group pairs
//! (GL_{n+1}(F_q), GL_n(F_q)) and (O_{n+1}(F_q), O_n(F_q)).
//!
//! The crate enumerates the groups, decomposes them into double cosets of the
//! embedded subgroup, computes complex character tables by Dixon's modular
//! method, and cross-checks the results against each other.

pub mod cache;
pub mod chartab;
pub mod cosets;
pub mod error;
pub mod field;
pub mod group;
pub mod matrix;
pub mod reflect;
pub mod symsolve;
pub mod verify;

pub use error::{Error, Result};
pub use field::{build_field, Field, FieldSpec, Scalar};
pub use group::{embed_standard, enumerate_gl, enumerate_o, Embedding, GroupKind, GroupTable};
pub use matrix::MatFq;
pub use verify::{run_sweep, run_verify, PairSpec, RunOptions, SweepSummary, VerificationReport};
