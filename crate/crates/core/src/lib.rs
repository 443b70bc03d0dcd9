//! Finite categories, their barycentric subdivisions, and the recovery of a
//! groupoid from its subdivision.

pub mod delta;
pub mod fincat;
pub mod subdivision;
pub mod graphs;
pub mod oracle;
pub mod probe;
pub mod reconstruct;
pub mod selftest;
