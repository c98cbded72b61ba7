//! Tile-based drafting surface.
//!
//! Each [`Tile`] stands for a standard measurement pattern laid out on the
//! lattice. Footprints:
//!
//! * `Hadamard`, `S`, `T`, `RotX/Y/Z`: five qubits in a row, columns
//!   `anchor.col-4 ..= anchor.col`.
//! * `Cnot`: fifteen qubits. Control chain on `anchor.row-2`, target chain on
//!   `anchor.row`, both over columns `anchor.col-6 ..= anchor.col`, joined by
//!   a bridge qubit at `(anchor.row-1, anchor.col-3)`.
//! * `Wire`, `Input`, `Readout`: the anchor cell alone.
//!
//! Horizontally adjacent patterns compose: the eastern boundary qubit of one
//! chain may coincide with the western boundary qubit of the next.

mod circuit;
mod json;
mod validate;

use std::collections::{BTreeMap, BTreeSet};
use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::{Coord, MAX_LATTICE_DIM};

pub use circuit::{ingest_circuit_json, CircuitDocument, CircuitOp};
pub use json::{AlgorithmDocument, TileDocument, ALGORITHM_VERSION};
pub use validate::{Diagnostic, Rule, Severity};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GridError {
    #[error("{tile} is out of bounds: {detail}")]
    Bounds { tile: TileRef, detail: String },
    #[error("{tile} has invalid geometry: {detail}")]
    Geometry { tile: TileRef, detail: String },
    #[error("{placed} collides with {existing} at {coord}")]
    Collision {
        placed: TileRef,
        existing: TileRef,
        coord: Coord,
    },
    #[error("{tile}: {detail}")]
    Theta { tile: TileRef, detail: String },
    #[error("parse error at {path}: {message}")]
    Parse { path: String, message: String },
    #[error("unsupported algorithm document version {found} (expected {expected})")]
    Version { found: u32, expected: u32 },
    #[error("unsupported gate {0:?}")]
    UnsupportedGate(String),
    #[error("cannot route: {0}")]
    Routing(String),
    #[error("invalid circuit: {0}")]
    Circuit(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TileKind {
    Input,
    Readout,
    Hadamard,
    S,
    T,
    RotX,
    RotY,
    RotZ,
    Cnot,
    Wire,
}

impl TileKind {
    pub const ALL: [TileKind; 10] = [
        TileKind::Input,
        TileKind::Readout,
        TileKind::Hadamard,
        TileKind::S,
        TileKind::T,
        TileKind::RotX,
        TileKind::RotY,
        TileKind::RotZ,
        TileKind::Cnot,
        TileKind::Wire,
    ];

    pub fn is_rotation(self) -> bool {
        matches!(self, TileKind::RotX | TileKind::RotY | TileKind::RotZ)
    }

    /// Multi-qubit measurement pattern, as opposed to a single-cell tile.
    pub fn is_pattern(self) -> bool {
        !matches!(self, TileKind::Wire | TileKind::Input | TileKind::Readout)
    }

    pub fn name(self) -> &'static str {
        match self {
            TileKind::Input => "input",
            TileKind::Readout => "readout",
            TileKind::Hadamard => "hadamard",
            TileKind::S => "s",
            TileKind::T => "t",
            TileKind::RotX => "rotx",
            TileKind::RotY => "roty",
            TileKind::RotZ => "rotz",
            TileKind::Cnot => "cnot",
            TileKind::Wire => "wire",
        }
    }
}

impl fmt::Display for TileKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for TileKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        TileKind::ALL
            .into_iter()
            .find(|k| k.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown tile kind {s:?}"))
    }
}

/// Identity of a placed tile: its kind and anchor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct TileRef {
    pub kind: TileKind,
    pub row: u32,
    pub col: u32,
}

impl fmt::Display for TileRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}@[{}, {}]", self.kind, self.row, self.col)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Tile {
    pub kind: TileKind,
    /// Eastern column; for `Cnot` the southern (target) row.
    pub anchor: Coord,
    /// Rotation angle in radians; only rotations carry one.
    pub theta: Option<f64>,
}

/// Where a footprint cell sits within its pattern.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CellRole {
    /// Input end of a chain.
    West,
    /// Output end of a chain.
    East,
    Interior,
    /// The vertical link between the two chains of a CNOT.
    Bridge,
    /// One-cell tiles.
    Single,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FootprintCell {
    pub coord: Coord,
    /// Position within the pattern, numbered west to east (control chain,
    /// bridge, then target chain for CNOT).
    pub slot: usize,
    pub role: CellRole,
}

pub const CHAIN_LEN: u32 = 5;
pub const CNOT_CHAIN_LEN: u32 = 7;
pub const CNOT_BRIDGE_SLOT: usize = 7;

impl Tile {
    pub fn new(kind: TileKind, row: u32, col: u32) -> Self {
        Self {
            kind,
            anchor: Coord::new(row, col),
            theta: None,
        }
    }

    pub fn rotation(kind: TileKind, row: u32, col: u32, theta: f64) -> Self {
        Self {
            kind,
            anchor: Coord::new(row, col),
            theta: Some(theta),
        }
    }

    pub fn id(&self) -> TileRef {
        TileRef {
            kind: self.kind,
            row: self.anchor.row,
            col: self.anchor.col,
        }
    }

    fn sort_key(&self) -> (u32, u32, TileKind) {
        (self.anchor.row, self.anchor.col, self.kind)
    }

    /// Rows carrying a logical qubit through this tile (control first).
    pub fn logical_rows(&self) -> Vec<u32> {
        match self.kind {
            TileKind::Cnot => vec![self.anchor.row.saturating_sub(2), self.anchor.row],
            _ => vec![self.anchor.row],
        }
    }

    /// Geometric checks that involve this tile alone.
    pub fn check_geometry(&self) -> Result<(), GridError> {
        let Coord { row, col } = self.anchor;
        if !self.anchor.in_bounds() {
            return Err(GridError::Bounds {
                tile: self.id(),
                detail: format!("anchor must lie within [0, {MAX_LATTICE_DIM}) in both axes"),
            });
        }
        let width = match self.kind {
            TileKind::Cnot => CNOT_CHAIN_LEN,
            k if k.is_pattern() => CHAIN_LEN,
            _ => 1,
        };
        if col + 1 < width {
            return Err(GridError::Bounds {
                tile: self.id(),
                detail: format!("a {width}-column footprint needs an eastern column >= {}", width - 1),
            });
        }
        if self.kind == TileKind::Cnot && row < 2 {
            return Err(GridError::Geometry {
                tile: self.id(),
                detail: "CNOT needs two rows above its target row".into(),
            });
        }
        Ok(())
    }

    /// Lattice cells covered by the tile. Requires [`Tile::check_geometry`].
    pub fn footprint(&self) -> Vec<FootprintCell> {
        let Coord { row, col } = self.anchor;
        let chain = |r: u32, len: u32, first_slot: usize| {
            (0..len).map(move |i| FootprintCell {
                coord: Coord::new(r, col + 1 + i - len),
                slot: first_slot + i as usize,
                role: match i {
                    0 => CellRole::West,
                    i if i == len - 1 => CellRole::East,
                    _ => CellRole::Interior,
                },
            })
        };
        match self.kind {
            TileKind::Cnot => chain(row - 2, CNOT_CHAIN_LEN, 0)
                .chain(std::iter::once(FootprintCell {
                    coord: Coord::new(row - 1, col - 3),
                    slot: CNOT_BRIDGE_SLOT,
                    role: CellRole::Bridge,
                }))
                .chain(chain(row, CNOT_CHAIN_LEN, CNOT_BRIDGE_SLOT + 1))
                .collect(),
            k if k.is_pattern() => chain(row, CHAIN_LEN, 0).collect(),
            _ => vec![FootprintCell {
                coord: self.anchor,
                slot: 0,
                role: CellRole::Single,
            }],
        }
    }
}

/// Maps an angle into `(-2π, 2π]`, leaving values already there untouched.
pub fn normalize_theta(theta: f64) -> f64 {
    const PERIOD: f64 = 4.0 * PI;
    if theta > -2.0 * PI && theta <= 2.0 * PI {
        return theta;
    }
    let shifted = theta - PERIOD * ((theta - 2.0 * PI) / PERIOD).ceil();
    if shifted <= -2.0 * PI {
        shifted + PERIOD
    } else {
        shifted
    }
}

/// Live metrics of a grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Metrics {
    /// `(row count, largest occupied column index)`.
    pub min_lattice: (u32, u32),
    pub qubit_count: usize,
    pub t_count: usize,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct AlgorithmGrid {
    pub name: String,
    tiles: Vec<Tile>,
}

impl AlgorithmGrid {
    pub fn new(name: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            tiles: Vec::new(),
        }
    }

    /// Builds a grid without validating it. Tiles are kept sorted by anchor.
    pub fn from_tiles(name: impl Into<String>, tiles: impl IntoIterator<Item = Tile>) -> Self {
        let mut g = Self::new(name);
        for t in tiles {
            g.insert_sorted(t);
        }
        g
    }

    /// Tiles in `(row, col)` order.
    pub fn tiles(&self) -> &[Tile] {
        &self.tiles
    }

    pub fn is_empty(&self) -> bool {
        self.tiles.is_empty()
    }

    pub fn tile_at(&self, kind: TileKind, anchor: Coord) -> Option<&Tile> {
        self.tiles.iter().find(|t| t.kind == kind && t.anchor == anchor)
    }

    pub(crate) fn tile_at_mut(&mut self, kind: TileKind, anchor: Coord) -> Option<&mut Tile> {
        self.tiles
            .iter_mut()
            .find(|t| t.kind == kind && t.anchor == anchor)
    }

    fn insert_sorted(&mut self, tile: Tile) {
        let key = tile.sort_key();
        let at = self.tiles.partition_point(|t| t.sort_key() <= key);
        self.tiles.insert(at, tile);
    }

    /// Returns a new grid with `tile` added, rejecting placements that break
    /// the grid's geometry.
    pub fn place_tile(&self, tile: Tile) -> Result<AlgorithmGrid, GridError> {
        tile.check_geometry()?;
        validate::check_theta(&tile)?;
        let id = tile.id();
        let mut next = self.clone();
        next.insert_sorted(tile);
        let before: BTreeSet<_> = validate::errors(self).into_iter().collect();
        // A new tile can also break others, e.g. by stretching a row span
        // over an existing bridge.
        for d in validate::errors(&next) {
            if !before.contains(&d) {
                return Err(d.into_error(id));
            }
        }
        Ok(next)
    }

    /// Removes the tile with the given identity, if present.
    pub fn remove_tile(&self, id: TileRef) -> AlgorithmGrid {
        let mut next = self.clone();
        next.tiles.retain(|t| t.id() != id);
        next
    }

    pub fn validate(&self) -> Vec<Diagnostic> {
        validate::validate(self)
    }

    /// No error-severity diagnostics (warnings allowed).
    pub fn is_valid(&self) -> bool {
        self.validate().iter().all(|d| d.severity != Severity::Error)
    }

    /// Occupied columns per logical row: `row → (west, east)`. Gaps inside a
    /// span are wire qubits.
    pub fn row_spans(&self) -> BTreeMap<u32, (u32, u32)> {
        let mut spans: BTreeMap<u32, (u32, u32)> = BTreeMap::new();
        for t in self.tiles.iter().filter(|t| t.check_geometry().is_ok()) {
            for cell in t.footprint() {
                if cell.role == CellRole::Bridge {
                    continue;
                }
                let Coord { row, col } = cell.coord;
                spans
                    .entry(row)
                    .and_modify(|(w, e)| {
                        *w = (*w).min(col);
                        *e = (*e).max(col);
                    })
                    .or_insert((col, col));
            }
        }
        spans
    }

    /// Every lattice site the algorithm needs: footprints plus interposed wires.
    pub fn occupied_sites(&self) -> BTreeSet<Coord> {
        let mut sites: BTreeSet<Coord> = self
            .tiles
            .iter()
            .filter(|t| t.check_geometry().is_ok())
            .flat_map(|t| t.footprint().into_iter().map(|c| c.coord))
            .collect();
        for (row, (w, e)) in self.row_spans() {
            sites.extend((w..=e).map(|col| Coord::new(row, col)));
        }
        sites
    }

    pub fn metrics(&self) -> Metrics {
        let sites = self.occupied_sites();
        let min_lattice = match (sites.iter().map(|c| c.row).max(), sites.iter().map(|c| c.col).max()) {
            (Some(r), Some(c)) => (r + 1, c),
            _ => (0, 0),
        };
        Metrics {
            min_lattice,
            qubit_count: sites.len(),
            t_count: self.tiles.iter().filter(|t| t.kind == TileKind::T).count(),
        }
    }

    pub fn to_json(&self) -> String {
        json::save(self)
    }

    pub fn from_json(doc: &str) -> Result<Self, GridError> {
        json::load(doc)
    }
}
