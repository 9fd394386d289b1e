//! parageo: an exact-arithmetic workbench for the geometry of almost
//! paraHermitian structures.
//!
//! Everything is computed over the field of rational functions in declared
//! parameters, so every identity check is a structural zero test. The crate
//! covers left-invariant geometry on a catalog of four-dimensional Lie
//! groups, the canonical one-parameter family of paraHermitian connections,
//! self-dual Weyl analysis in dimension four, hyper-paracomplex triples,
//! the nearly paraKähler pseudosphere inside the split octonions, and the
//! Ashtekar-type construction from holomorphic data.

pub mod cli;
pub mod connfam;
pub mod exact;
pub mod fourdim;
pub mod frame;
pub mod geometry;
pub mod hyperpara;
pub mod joyce;
pub mod liealg;
pub mod npk6;
pub mod oracle;
pub mod paraherm;
pub mod report;

pub use exact::{ParamEnv, ParamSet, Rational, Scalar};
