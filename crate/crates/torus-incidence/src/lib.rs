//! Incidence coloring of toroidal grids.
//!
//! The toroidal grid `T(m, n)` is the Cartesian product of the cycles `C_m`
//! and `C_n`: the `m x n` grid with rows and columns wrapping around. An
//! *incidence* is a pair of a vertex and an edge ending there, written here
//! as a vertex plus a compass direction. Two incidences conflict when they
//! share the vertex, share the edge, or one's edge runs between the two
//! vertices; an *incidence coloring* gives conflicting incidences distinct
//! colors.
//!
//! Every graph needs at least `Δ + 1` incidence colors, which is five for
//! tori. This crate implements the complete answer for `m, n >= 3`:
//!
//! * five colors suffice exactly when both `m` and `n` are divisible by
//!   five;
//! * six colors always suffice.
//!
//! # Modules
//!
//! * [`graph`]: the torus, its incidences and their adjacency, and a small
//!   generic graph type for squares and subgraph checks.
//! * [`coloring`]: total and partial incidence colorings, vertex colorings,
//!   and the verifiers everything else is checked against.
//! * [`pattern`]: color matrices over the vertex set, the induction that
//!   turns a pattern proper on the square into an incidence coloring, and
//!   tiling, gluing, and row-repetition operators.
//! * [`catalog`]: the fixed patterns and quasi-patterns the constructions
//!   are assembled from.
//! * [`completion`]: deterministic exhaustive completion of partial
//!   incidence colorings.
//! * [`constructor`]: the case dispatch producing an optimal coloring for
//!   every torus, with a trace of the route taken.
//! * [`exact`]: exhaustive chromatic oracles for desk-scale instances,
//!   used to certify optimality independently of the constructions.
//! * [`formats`]: JSON, matrix, DOT, and ASCII-art serialization.
//!
//! # Example
//!
//! ```
//! use torus_incidence::coloring::verify_incidence_coloring;
//! use torus_incidence::constructor::construct;
//!
//! let (coloring, trace) = construct(7, 9).unwrap();
//! assert_eq!(coloring.palette_size(), 6);
//! assert!(verify_incidence_coloring(&coloring).is_valid());
//! println!("{}", trace.summary());
//!
//! let (optimal, _) = construct(10, 25).unwrap();
//! assert_eq!(optimal.palette_size(), 5);
//! ```

pub mod catalog;
pub mod coloring;
pub mod completion;
pub mod constructor;
pub mod exact;
pub mod formats;
pub mod graph;
pub mod pattern;

pub use coloring::{verify_incidence_coloring, IncidenceColoring, PartialIncidenceColoring};
pub use constructor::{construct, construct_with, ConstructOptions, ConstructionTrace};
pub use graph::{Direction, Incidence, TorusGrid, Vertex};
pub use pattern::{Pattern, QuasiPattern};
