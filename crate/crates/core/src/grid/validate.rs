use std::collections::{BTreeMap, BTreeSet};
use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::{AlgorithmGrid, CellRole, GridError, Tile, TileRef};
use crate::Coord;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Error,
    Warning,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Rule {
    Bounds,
    Geometry,
    Collision,
    BridgeCrossing,
    Theta,
    ThetaRange,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Diagnostic {
    pub severity: Severity,
    pub rule: Rule,
    pub tiles: Vec<TileRef>,
    pub coord: Coord,
    pub message: String,
}

impl Diagnostic {
    fn error(rule: Rule, tiles: Vec<TileRef>, coord: Coord, message: String) -> Self {
        Self {
            severity: Severity::Error,
            rule,
            tiles,
            coord,
            message,
        }
    }

    /// Error for a failed placement of `placed`.
    pub(super) fn into_error(self, placed: TileRef) -> GridError {
        match self.rule {
            Rule::Collision => GridError::Collision {
                placed,
                existing: self
                    .tiles
                    .iter()
                    .copied()
                    .find(|&t| t != placed)
                    .unwrap_or(placed),
                coord: self.coord,
            },
            Rule::Bounds => GridError::Bounds {
                tile: placed,
                detail: self.message,
            },
            Rule::Geometry | Rule::BridgeCrossing => GridError::Geometry {
                tile: placed,
                detail: self.message,
            },
            Rule::Theta | Rule::ThetaRange => GridError::Theta {
                tile: placed,
                detail: self.message,
            },
        }
    }
}

pub(super) fn check_theta(tile: &Tile) -> Result<(), GridError> {
    match (tile.kind.is_rotation(), tile.theta) {
        (false, Some(_)) => Err(GridError::Theta {
            tile: tile.id(),
            detail: "only rotation tiles carry theta".into(),
        }),
        (true, Some(t)) if !t.is_finite() => Err(GridError::Theta {
            tile: tile.id(),
            detail: "theta must be finite".into(),
        }),
        _ => Ok(()),
    }
}

pub(super) fn errors(grid: &AlgorithmGrid) -> Vec<Diagnostic> {
    validate(grid)
        .into_iter()
        .filter(|d| d.severity == Severity::Error)
        .collect()
}

pub(super) fn validate(grid: &AlgorithmGrid) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    let mut placed = Vec::new();

    for tile in grid.tiles() {
        if let Err(e) = tile.check_geometry() {
            let (rule, detail) = match e {
                GridError::Bounds { detail, .. } => (Rule::Bounds, detail),
                GridError::Geometry { detail, .. } => (Rule::Geometry, detail),
                other => (Rule::Geometry, other.to_string()),
            };
            out.push(Diagnostic::error(rule, vec![tile.id()], tile.anchor, detail));
            continue;
        }
        if let Err(GridError::Theta { detail, .. }) = check_theta(tile) {
            out.push(Diagnostic::error(Rule::Theta, vec![tile.id()], tile.anchor, detail));
        }
        if let Some(t) = tile.theta.filter(|t| t.is_finite()) {
            if !(t > -2.0 * PI && t <= 2.0 * PI) {
                out.push(Diagnostic {
                    severity: Severity::Warning,
                    rule: Rule::ThetaRange,
                    tiles: vec![tile.id()],
                    coord: tile.anchor,
                    message: format!("theta {t} will be normalised into (-2pi, 2pi]"),
                });
            }
        }
        placed.push(tile);
    }

    // Occupancy: a cell may hold one tile, or exactly the eastern end of one
    // chain and the western end of another.
    let mut occupancy: BTreeMap<Coord, Vec<(TileRef, CellRole)>> = BTreeMap::new();
    for tile in &placed {
        for cell in tile.footprint() {
            occupancy.entry(cell.coord).or_default().push((tile.id(), cell.role));
        }
    }
    let mut reported: BTreeSet<(TileRef, TileRef)> = BTreeSet::new();
    for (&coord, occupants) in &occupancy {
        if occupants.len() < 2 {
            continue;
        }
        let composed = occupants.len() == 2
            && occupants[0].0 != occupants[1].0
            && matches!(
                (occupants[0].1, occupants[1].1),
                (CellRole::East, CellRole::West) | (CellRole::West, CellRole::East)
            );
        if composed {
            continue;
        }
        for (i, a) in occupants.iter().enumerate() {
            for b in &occupants[i + 1..] {
                let pair = if a.0 <= b.0 { (a.0, b.0) } else { (b.0, a.0) };
                if reported.insert(pair) {
                    out.push(Diagnostic::error(
                        Rule::Collision,
                        vec![pair.0, pair.1],
                        coord,
                        format!("{} and {} overlap at {coord}", pair.0, pair.1),
                    ));
                }
            }
        }
    }

    // A CNOT bridge may not sit inside another logical row's wire span.
    let spans = grid.row_spans();
    for tile in &placed {
        for cell in tile.footprint().into_iter().filter(|c| c.role == CellRole::Bridge) {
            let Coord { row, col } = cell.coord;
            if let Some(&(w, e)) = spans.get(&row) {
                if (w..=e).contains(&col) && occupancy[&cell.coord].len() == 1 {
                    out.push(Diagnostic::error(
                        Rule::BridgeCrossing,
                        vec![tile.id()],
                        cell.coord,
                        format!("bridge qubit at {} cuts logical row {row}", cell.coord),
                    ));
                }
            }
        }
    }

    out.sort();
    out
}
