//! Exact invariants of homology `S^1 x S^3`s built from knots in homology
//! spheres, a pillowcase model for counting flat connections, and a
//! numerical Chern-Simons gradient flow near the trivial connection.

pub mod calculus;
pub mod exact;
pub mod gluing;
pub mod knot;
pub mod laurent;
pub mod poly;
pub mod pillowcase;
pub mod flow;
pub mod acceptance;
