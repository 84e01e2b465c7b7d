//! Packings, multiset covers and audits for hypercubes and products of paths.
//!
//! The crate builds combinatorial certificates — packings of a host box by
//! copies of a pattern graph, and multiset covers with modular coverage
//! targets — and verifies them independently of the constructions. Everything
//! is exchanged through two certificate kinds (see [`certfile`]): packing
//! certificates (host, patterns, disjoint placements, uncovered vertices) and
//! multiset covers (placements with multiplicities and a target residue).
//!
//! Modules:
//! - [`grid`]: boxes, vertices, pattern graphs, placements and their validity.
//! - [`hampath`]: Gray-code machinery and path-power packings of hypercubes.
//! - [`antipodal`]: partitions of `Q_{2^s-1}` into induced antipodal paths.
//! - [`induced`]: staircase partitions and induced path-power packings.
//! - [`modcover`]: exact-multiplicity and residue-1 multiset covers, plus a
//!   congruence solver over `Z_l`.
//! - [`oracle`]: brute-force exact-cover and Hamilton-path searches.
//! - [`audit`]: independent verification of certificates and the
//!   codimension/separating-family checks.
//! - [`certfile`]: the line-oriented certificate file format.
//! - [`report`]: CSV sweep reports.

pub mod antipodal;
pub mod audit;
pub mod certfile;
pub mod grid;
pub mod hampath;
pub mod induced;
pub mod modcover;
pub mod oracle;
pub mod report;
mod zsolve;

pub use grid::{Grid, Mode, PatternGraph, Placement, Vertex};
