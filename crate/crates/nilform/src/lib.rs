//! Exact-arithmetic engine for nilmanifolds with left-invariant complex
//! structures, described by structure equations on a `(1,0)` co-frame.
//!
//! The engine works entirely on the finite-dimensional complex of invariant
//! forms, with Gaussian-rational coefficients throughout:
//!
//! - [`scalar`]: the exact coefficient field.
//! - [`forms`]: multi-indexed bigraded exterior algebra with wedge,
//!   conjugation, bidegree splitting and positivity bookkeeping.
//! - [`linalg`]: exact sparse ranks, kernels, subspace arithmetic, the LDL*
//!   positive-definiteness test and the seeded sampler.
//! - [`structure`]: parsing and validation of structure equations, the
//!   operators `d`, `∂`, `∂̄`, triangularity, and the ascending series.
//! - [`frolicher`]: invariant Dolbeault cohomology, spectral-sequence pages,
//!   degeneration step and the de Rham cross-check.
//! - [`special`]: balanced/SKT/LCK verification, transversality and p-Kähler
//!   checks, obstruction certificates with builders and verifier, and the
//!   `∂∂̄`-potential solver.
//! - [`catalog`]: built-in models and their frozen expectations.
//!
//! With the default `parallel` feature, independent per-bidegree computations
//! and sampling loops run on rayon; disabling the feature falls back to
//! sequential execution with identical results.

pub mod catalog;
pub mod forms;
pub mod frolicher;
pub mod linalg;
mod par;
pub mod scalar;
pub mod special;
pub mod structure;

pub use forms::{Form, MultiIndex};
pub use scalar::Scalar;
pub use structure::{StructureEquations, StructureModel};
