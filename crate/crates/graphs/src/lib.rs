//! Connected ribbon graphs of the quartic model as Wick pairings.
//!
//! Half-edges are numbered `4t..4t+3` for four-valent vertex `t` and `4v+i` for external leg `i`.
//! Every half-edge carries an ordered pair of strand indices: vertex half-edge `4t+k` carries
//! `(a_{t,k}, a_{t,k+1 mod 4})`, leg `i` carries `(p_i, q_i)`. Pairing two half-edges identifies
//! the first index of each with the second index of the other, and contributes the propagator
//! `1/(E_x + E_y)` for its two strands.
//!
//! Boundary cycles are written as lists of leg positions; inside a cycle, leg `i` is followed by
//! leg `next(i)` and the diagram must satisfy `q_i = p_{next(i)}`.
//!
//! Generation is canonical: a breadth-first traversal from a root introduces vertices in order and
//! enters each new vertex at its half-edge 0. With at least one external leg this yields every
//! labelled graph exactly once (the vertex symmetry group of order `4^v v!` acts freely). Without
//! legs it yields every graph rooted at a half-edge of vertex 0, i.e. `4v/|Aut|` times.

mod counts;
mod diagram;
mod enumerate;
mod error;
mod series;

pub use counts::{count_table, CountTable};
pub use diagram::{classify, BoundarySpec, RibbonDiagram, Topology};
pub use enumerate::{enumerate_diagrams, estimated_leaves, for_each_diagram, DEFAULT_LEAF_BUDGET};
pub use error::GraphError;
pub use series::{
    correlator_series, free_energy_series, weight, DiagramTable, GraphWeight, WeightKey,
};
