//! Cluster-state algorithm toolchain.
//!
//! Algorithms are drafted as measurement-pattern tiles on an
//! [`grid::AlgorithmGrid`], expanded onto a qubit lattice by
//! [`lattice::open_algorithm`], reduced as a [`graph_state::GraphState`]
//! through Pauli measurements and local complementation, and compiled to
//! OpenQASM 3.0 by [`qasm::emit`]. The [`stabilizer`] module is an
//! independent tableau simulator used to check the graph rules.

pub mod cli;
mod coord;
pub mod graph_state;
pub mod grid;
pub mod lattice;
pub mod qasm;
pub mod service;
pub mod stabilizer;

pub use coord::{Coord, MAX_LATTICE_DIM};
pub use graph_state::{Axis, GraphState, MeasurementBasis, Sign, VertexId};
pub use grid::{AlgorithmGrid, Metrics, Tile, TileKind};
pub use lattice::Lattice;
pub use qasm::{QasmProgram, ThetaBinding};
