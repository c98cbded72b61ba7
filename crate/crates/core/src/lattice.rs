//! Expansion of a tile grid onto a concrete qubit lattice.
//!
//! [`open_algorithm`] covers the full `rows × cols` rectangle with a
//! nearest-neighbour cluster, tags every footprint cell with its pattern
//! measurement, and leaves the remaining cells as numbered qubits.
//! [`prepare`] then deletes the numbered qubits off the logical rows with
//! Z measurements and turns those on the rows into σx wires.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph_state::{measure, Axis, GraphError, GraphState, MeasurementBasis, MeasurementRecord, VertexId};
use crate::grid::{AlgorithmGrid, CellRole, Diagnostic, TileKind, TileRef};
use crate::Coord;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LatticeError {
    #[error("grid is invalid ({} diagnostics)", .0.len())]
    Invalid(Vec<Diagnostic>),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EulerAngle {
    Xi,
    Eta,
    Zeta,
}

/// What a qubit is measured in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Measurement {
    Basis(Axis),
    Euler(EulerAngle),
    /// Pattern output, measured by whatever follows.
    Output,
    Input,
    /// Computational-basis readout.
    Readout,
    /// Not yet processed; shown by its qubit id.
    Unassigned(VertexId),
}

impl fmt::Display for Measurement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Measurement::Basis(Axis::X) => f.write_str("σx"),
            Measurement::Basis(Axis::Y) => f.write_str("σy"),
            Measurement::Basis(Axis::Z) => f.write_str("σz"),
            Measurement::Euler(EulerAngle::Xi) => f.write_str("ξ"),
            Measurement::Euler(EulerAngle::Eta) => f.write_str("η"),
            Measurement::Euler(EulerAngle::Zeta) => f.write_str("ζ"),
            Measurement::Output => f.write_str("output"),
            Measurement::Input => f.write_str("input"),
            Measurement::Readout => f.write_str("readout"),
            Measurement::Unassigned(id) => write!(f, "{id}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QubitRole {
    Pattern { tile: TileRef, slot: usize },
    Wire,
    Superfluous,
    Input,
    Readout,
    /// Numbered qubit awaiting preparation. `on_segment` marks cells inside
    /// a logical row's span, which become wires.
    Unassigned { on_segment: bool },
}

impl QubitRole {
    pub fn name(self) -> &'static str {
        match self {
            QubitRole::Pattern { .. } => "pattern",
            QubitRole::Wire => "wire",
            QubitRole::Superfluous => "superfluous",
            QubitRole::Input => "input",
            QubitRole::Readout => "readout",
            QubitRole::Unassigned { .. } => "unassigned",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Highlight {
    CliffordRed,
    NoncliffordBlue,
    None,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LatticeQubit {
    pub id: VertexId,
    pub coord: Coord,
    pub role: QubitRole,
    pub measurement: Measurement,
    pub highlight: Highlight,
}

/// Measurement sequences of the standard patterns, by footprint slot.
mod labels {
    use super::{Axis, EulerAngle, Measurement};
    use Measurement::{Basis, Euler, Output};

    const X: Measurement = Basis(Axis::X);
    const Y: Measurement = Basis(Axis::Y);

    pub const HADAMARD: [Measurement; 5] = [X, Y, Y, Y, Output];
    pub const PHASE: [Measurement; 5] = [X, X, Y, X, Output];
    pub const ROTATION: [Measurement; 5] = [
        X,
        Euler(EulerAngle::Xi),
        Euler(EulerAngle::Eta),
        Euler(EulerAngle::Zeta),
        Output,
    ];
    /// Control chain 0..=6, bridge 7, target chain 8..=14.
    pub const CNOT: [Measurement; 15] = [X, Y, Y, Y, Y, Y, Output, Y, X, X, X, Y, X, X, Output];
}

fn pattern_label(kind: TileKind, slot: usize) -> Measurement {
    match kind {
        TileKind::Hadamard => labels::HADAMARD[slot],
        TileKind::S => labels::PHASE[slot],
        TileKind::T | TileKind::RotX | TileKind::RotY | TileKind::RotZ => labels::ROTATION[slot],
        TileKind::Cnot => labels::CNOT[slot],
        TileKind::Wire => Measurement::Basis(Axis::X),
        TileKind::Input => Measurement::Input,
        TileKind::Readout => Measurement::Readout,
    }
}

fn highlight(kind: TileKind) -> Highlight {
    match kind {
        TileKind::T => Highlight::NoncliffordBlue,
        TileKind::Input | TileKind::Readout => Highlight::None,
        _ => Highlight::CliffordRed,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Lattice {
    dims: (u32, u32),
    qubits: BTreeMap<Coord, LatticeQubit>,
    graph: GraphState,
}

impl Lattice {
    fn cover(rows: u32, cols: u32) -> Result<Self, LatticeError> {
        if rows == 0 || cols == 0 {
            return Ok(Self::empty());
        }
        let graph = GraphState::create_grid(rows, cols)?;
        let qubits = graph
            .coords()
            .iter()
            .map(|(&id, &coord)| {
                (
                    coord,
                    LatticeQubit {
                        id,
                        coord,
                        role: QubitRole::Unassigned { on_segment: false },
                        measurement: Measurement::Unassigned(id),
                        highlight: Highlight::None,
                    },
                )
            })
            .collect();
        Ok(Self {
            dims: (rows, cols),
            qubits,
            graph,
        })
    }

    pub fn empty() -> Self {
        Self {
            dims: (0, 0),
            qubits: BTreeMap::new(),
            graph: GraphState::new(),
        }
    }

    /// Unprocessed `rows × cols` lattice whose `wire_rows` are logical rows
    /// along their full width.
    pub fn blank(rows: u32, cols: u32, wire_rows: &[u32]) -> Result<Self, LatticeError> {
        let mut l = Self::cover(rows, cols)?;
        for q in l.qubits.values_mut() {
            if wire_rows.contains(&q.coord.row) {
                q.role = QubitRole::Unassigned { on_segment: true };
            }
        }
        Ok(l)
    }

    pub fn dims(&self) -> (u32, u32) {
        self.dims
    }

    pub fn qubit(&self, coord: Coord) -> Option<&LatticeQubit> {
        self.qubits.get(&coord)
    }

    /// Qubits in `(row, col)` order, which is also id order.
    pub fn qubits(&self) -> impl Iterator<Item = &LatticeQubit> {
        self.qubits.values()
    }

    /// Cluster over the qubits still present (everything but superfluous ones).
    pub fn graph(&self) -> &GraphState {
        &self.graph
    }

    pub fn count_role(&self, name: &str) -> usize {
        self.qubits.values().filter(|q| q.role.name() == name).count()
    }

    pub fn document(&self) -> LatticeDocument {
        LatticeDocument {
            dims: [self.dims.0, self.dims.1],
            qubits: self
                .qubits
                .values()
                .map(|q| LatticeQubitDocument {
                    id: q.id,
                    row: q.coord.row,
                    col: q.coord.col,
                    role: q.role.name().to_string(),
                    label: q.measurement.to_string(),
                    highlight: q.highlight,
                })
                .collect(),
            edges: self.graph.edges().map(|(a, b)| [a, b]).collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.document()).expect("plain data serialises")
    }
}

/// Lattice JSON, as rendered by the UI.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LatticeDocument {
    pub dims: [u32; 2],
    pub qubits: Vec<LatticeQubitDocument>,
    pub edges: Vec<[VertexId; 2]>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LatticeQubitDocument {
    pub id: VertexId,
    pub row: u32,
    pub col: u32,
    pub role: String,
    pub label: String,
    pub highlight: Highlight,
}

/// Lays a valid grid out on the smallest rectangle covering it.
///
/// Qubit `row * cols + col` sits at `(row, col)`. A boundary cell shared by
/// two composed patterns takes the labels of the eastern pattern, whose input
/// it is.
pub fn open_algorithm(grid: &AlgorithmGrid) -> Result<Lattice, LatticeError> {
    let errors: Vec<Diagnostic> = grid
        .validate()
        .into_iter()
        .filter(|d| d.severity == crate::grid::Severity::Error)
        .collect();
    if !errors.is_empty() {
        return Err(LatticeError::Invalid(errors));
    }
    let (rows, max_col) = grid.metrics().min_lattice;
    if rows == 0 {
        return Ok(Lattice::empty());
    }
    let mut lattice = Lattice::cover(rows, max_col + 1)?;

    for (row, (w, e)) in grid.row_spans() {
        for col in w..=e {
            if let Some(q) = lattice.qubits.get_mut(&Coord::new(row, col)) {
                q.role = QubitRole::Unassigned { on_segment: true };
            }
        }
    }
    for tile in grid.tiles() {
        let role_of = |slot| match tile.kind {
            TileKind::Input => QubitRole::Input,
            TileKind::Readout => QubitRole::Readout,
            _ => QubitRole::Pattern { tile: tile.id(), slot },
        };
        for cell in tile.footprint() {
            let q = lattice.qubits.get_mut(&cell.coord).expect("footprint inside the lattice");
            let taken = matches!(q.role, QubitRole::Pattern { .. });
            if taken && cell.role == CellRole::East {
                continue;
            }
            q.role = role_of(cell.slot);
            q.measurement = pattern_label(tile.kind, cell.slot);
            q.highlight = highlight(tile.kind);
        }
    }
    Ok(lattice)
}

/// [`prepare_with_log`] without the measurement records.
pub fn prepare(lattice: &Lattice) -> Lattice {
    prepare_with_log(lattice).0
}

/// Removes off-row numbered qubits with Z measurements in `(row, col)` order
/// and turns on-row numbered qubits into σx wires.
pub fn prepare_with_log(lattice: &Lattice) -> (Lattice, Vec<MeasurementRecord>) {
    let mut out = lattice.clone();
    let mut log = Vec::new();
    for q in out.qubits.values_mut() {
        match q.role {
            QubitRole::Unassigned { on_segment: true } => {
                q.role = QubitRole::Wire;
                q.measurement = Measurement::Basis(Axis::X);
            }
            QubitRole::Unassigned { on_segment: false } => {
                let (g, record) = measure(&out.graph, q.id, MeasurementBasis::plus(Axis::Z), None)
                    .expect("unassigned qubits are present in the graph");
                out.graph = g;
                log.push(record);
                q.role = QubitRole::Superfluous;
                q.measurement = Measurement::Basis(Axis::Z);
            }
            _ => {}
        }
    }
    (out, log)
}

/// The lattice cluster with coordinates, ready for interactive reduction.
pub fn to_graph_state(lattice: &Lattice) -> GraphState {
    lattice.graph.clone()
}
