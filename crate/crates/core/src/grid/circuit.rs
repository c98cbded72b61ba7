//! Gate-list circuits to tile grids.
//!
//! Wire `w` becomes logical row `2w`, so a CNOT between neighbouring wires
//! has its control and target exactly two lattice rows apart. Each wire
//! starts with an `Input` cell in column 0 and ends with a `Readout` cell in
//! a common final column. A pattern directly after another pattern shares its
//! boundary qubit; after a single-cell tile it starts one column further east.

use serde::{Deserialize, Serialize};

use super::{AlgorithmGrid, GridError, Tile, TileKind, CHAIN_LEN, CNOT_CHAIN_LEN};
use crate::MAX_LATTICE_DIM;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CircuitDocument {
    pub qubits: u32,
    pub ops: Vec<CircuitOp>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CircuitOp {
    pub gate: String,
    pub targets: Vec<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub param: Option<f64>,
}

#[derive(Clone, Copy)]
struct WireEnd {
    col: u32,
    after_pattern: bool,
}

struct Layout {
    ends: Vec<WireEnd>,
    tiles: Vec<Tile>,
}

impl Layout {
    /// Eastern column for a pattern of `width` starting right after wire `w`.
    fn east_after(&self, w: usize, width: u32) -> u32 {
        let end = self.ends[w];
        if end.after_pattern {
            end.col + width - 1
        } else {
            end.col + width
        }
    }

    fn push(&mut self, tile: Tile, wires: &[usize]) -> Result<(), GridError> {
        if tile.anchor.col >= MAX_LATTICE_DIM {
            return Err(GridError::Routing(format!(
                "circuit needs more than {MAX_LATTICE_DIM} lattice columns"
            )));
        }
        for &w in wires {
            self.ends[w] = WireEnd {
                col: tile.anchor.col,
                after_pattern: true,
            };
        }
        self.tiles.push(tile);
        Ok(())
    }

    fn single(&mut self, kind: TileKind, w: usize, theta: Option<f64>) -> Result<(), GridError> {
        let east = self.east_after(w, CHAIN_LEN);
        let row = 2 * w as u32;
        let tile = Tile {
            kind,
            anchor: crate::Coord::new(row, east),
            theta,
        };
        self.push(tile, &[w])
    }

    /// CNOT with the control on the wire directly above the target.
    fn cnot_down(&mut self, control: usize) -> Result<(), GridError> {
        let target = control + 1;
        let east = self
            .east_after(control, CNOT_CHAIN_LEN)
            .max(self.east_after(target, CNOT_CHAIN_LEN));
        self.push(Tile::new(TileKind::Cnot, 2 * target as u32, east), &[control, target])
    }
}

fn gate_kind(name: &str) -> Option<TileKind> {
    Some(match name {
        "h" => TileKind::Hadamard,
        "s" => TileKind::S,
        "t" => TileKind::T,
        "rx" => TileKind::RotX,
        "ry" => TileKind::RotY,
        "rz" => TileKind::RotZ,
        "cx" => TileKind::Cnot,
        _ => return None,
    })
}

/// Lays a circuit document out as a grid of tiles.
pub fn ingest_circuit_json(doc: &str) -> Result<AlgorithmGrid, GridError> {
    let de = &mut serde_json::Deserializer::from_str(doc);
    let circuit: CircuitDocument = serde_path_to_error::deserialize(de).map_err(|e| GridError::Parse {
        path: e.path().to_string(),
        message: e.inner().to_string(),
    })?;
    ingest_circuit(&circuit)
}

pub(crate) fn ingest_circuit(circuit: &CircuitDocument) -> Result<AlgorithmGrid, GridError> {
    let n = circuit.qubits as usize;
    if n > 0 && 2 * (n as u32 - 1) >= MAX_LATTICE_DIM {
        return Err(GridError::Routing(format!(
            "{n} wires need more than {MAX_LATTICE_DIM} lattice rows"
        )));
    }
    let mut layout = Layout {
        ends: vec![
            WireEnd {
                col: 0,
                after_pattern: false
            };
            n
        ],
        tiles: (0..n).map(|w| Tile::new(TileKind::Input, 2 * w as u32, 0)).collect(),
    };

    for (i, op) in circuit.ops.iter().enumerate() {
        let kind = gate_kind(&op.gate).ok_or_else(|| GridError::UnsupportedGate(op.gate.clone()))?;
        let arity = if kind == TileKind::Cnot { 2 } else { 1 };
        if op.targets.len() != arity {
            return Err(GridError::Circuit(format!(
                "op {i}: {} takes {arity} target(s), got {}",
                op.gate,
                op.targets.len()
            )));
        }
        if let Some(&bad) = op.targets.iter().find(|&&t| t as usize >= n) {
            return Err(GridError::Circuit(format!("op {i}: no wire {bad} in a {n}-wire circuit")));
        }
        match (kind.is_rotation(), op.param) {
            (false, Some(_)) => {
                return Err(GridError::Circuit(format!("op {i}: {} takes no parameter", op.gate)))
            }
            (true, Some(p)) if !p.is_finite() => {
                return Err(GridError::Circuit(format!("op {i}: parameter must be finite")))
            }
            _ => {}
        }

        if kind != TileKind::Cnot {
            layout.single(kind, op.targets[0] as usize, op.param)?;
            continue;
        }
        let (c, t) = (op.targets[0] as usize, op.targets[1] as usize);
        if c == t {
            return Err(GridError::Circuit(format!("op {i}: cx control equals target")));
        }
        if c.abs_diff(t) != 1 {
            return Err(GridError::Routing(format!(
                "op {i}: cx between wires {c} and {t}; only neighbouring wires are routed"
            )));
        }
        if c < t {
            layout.cnot_down(c)?;
        } else {
            // Control below target: conjugate by Hadamards to swap roles.
            layout.single(TileKind::Hadamard, c, None)?;
            layout.single(TileKind::Hadamard, t, None)?;
            layout.cnot_down(t)?;
            layout.single(TileKind::Hadamard, c, None)?;
            layout.single(TileKind::Hadamard, t, None)?;
        }
    }

    if n > 0 {
        let readout_col = layout.ends.iter().map(|e| e.col).max().unwrap_or(0) + 1;
        if readout_col >= MAX_LATTICE_DIM {
            return Err(GridError::Routing(format!(
                "circuit needs more than {MAX_LATTICE_DIM} lattice columns"
            )));
        }
        for w in 0..n {
            layout
                .tiles
                .push(Tile::new(TileKind::Readout, 2 * w as u32, readout_col));
        }
    }

    let mut grid = AlgorithmGrid::new("circuit");
    for tile in layout.tiles {
        grid = grid.place_tile(tile)?;
    }
    Ok(grid)
}
