//! Exact arithmetic for Weyl groupoids of diagonal braidings: generalized
//! Dynkin diagrams, Cartan matrices, reflections, semi-Cartan graphs, root
//! systems with finiteness verdicts, and the built-in rank-4 classification
//! tables for positive characteristic.

pub mod braiding;
pub mod cartangraph;
pub mod classification;
pub mod rootsystem;
pub mod textio;
pub mod unitgroup;
