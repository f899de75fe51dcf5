//! Exact verification toolkit for q-Catalan polynomials and their
//! logarithmic derivatives: construction, identities, positivity
//! certificates, sum-of-squares witnesses and partition-series limits.

pub mod exactpoly;
pub mod qcore;
pub mod certify;
pub mod qfuncs;
pub mod partitions;
pub mod sosfactor;
