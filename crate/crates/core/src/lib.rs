//! Spectral numerics for the self-adjoint operators `V_a = M*_(a-z) M_(a-z)`
//! acting on weighted Hardy spaces over the unit disc.
//!
//! The crate builds weight sequences and their validity certificates,
//! realizes `V_a` (and general polynomial symbols `M*_f M_f`) on coefficient
//! sequences, assembles the symmetric tridiagonal finite sections, solves
//! them with a shifted QL iteration cross-checked by Sturm counts, and
//! compares the section spectra against closed-form point spectra and
//! eigenfunctions for the binomial weight families. A hypergeometric layer
//! provides the analogous candidate eigenfunctions and ODE residuals for
//! Dirichlet-type weights, where membership of the candidates in the space
//! is an open question and only diagnostics are emitted.
//!
//! The `specop` binary exposes the experiment surface (`spectrum`, `verify`,
//! `sweep`, `inner`, `dirichlet`) with JSON and CSV reports.

mod dd;
pub mod error;
pub mod weights;
pub mod series;
pub mod operator;
pub mod eigensolve;
pub mod pointspec;
pub mod dirichlet;
pub mod report;

pub use error::{Error, Result};
