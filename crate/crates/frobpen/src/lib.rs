//! Exact symbolic toolkit for Frobenius pencils of flat metrics and the
//! compatible non-homogeneous Poisson structures they induce.
//!
//! The crate builds multi-block contravariant metrics from labeled rooted
//! in-forest data, transforms them between diagonal, block-companion and
//! Frobenius coordinates, and produces exact pass/fail certificates for the
//! algebraic and differential-geometric conditions involved: flatness,
//! constant curvature, Nijenhuis torsion, Poisson compatibility of metric
//! pairs, Frobenius algebra axioms, and pencil compatibility.
//!
//! Everything is computed over exact rationals; there is no floating point
//! anywhere. Start with the runnable examples (`cargo run --example ...`)
//! or the `frobpen` binary.

pub mod error;
pub mod scalar;
pub mod vars;
pub mod poly;
pub mod gcd;
pub mod ratfn;
pub mod matrix;
pub mod linsolve;
pub mod jet;
pub mod metric;
pub mod riemann;
pub mod forest;
pub mod blocks;
pub mod assemble;
pub mod frobmap;
pub mod frobalg;
pub mod poissonop;
pub mod report;
pub mod cli;

pub use error::{CasError, SpecError};
pub use matrix::RMatrix;
pub use poly::MPoly;
pub use ratfn::RatFn;
pub use scalar::ExactScalar;
