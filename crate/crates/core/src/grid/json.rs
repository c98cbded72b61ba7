use serde::{Deserialize, Serialize};

use super::{AlgorithmGrid, GridError, Tile, TileKind};
use crate::Coord;

pub const ALGORITHM_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgorithmDocument {
    pub version: u32,
    #[serde(default)]
    pub name: String,
    pub tiles: Vec<TileDocument>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TileDocument {
    pub kind: TileKind,
    pub row: u32,
    pub col: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta: Option<f64>,
}

impl From<&AlgorithmGrid> for AlgorithmDocument {
    fn from(g: &AlgorithmGrid) -> Self {
        Self {
            version: ALGORITHM_VERSION,
            name: g.name.clone(),
            tiles: g
                .tiles()
                .iter()
                .map(|t| TileDocument {
                    kind: t.kind,
                    row: t.anchor.row,
                    col: t.anchor.col,
                    theta: t.theta,
                })
                .collect(),
        }
    }
}

impl From<AlgorithmDocument> for AlgorithmGrid {
    fn from(doc: AlgorithmDocument) -> Self {
        AlgorithmGrid::from_tiles(
            doc.name,
            doc.tiles.into_iter().map(|t| Tile {
                kind: t.kind,
                anchor: Coord::new(t.row, t.col),
                theta: t.theta,
            }),
        )
    }
}

pub(super) fn save(g: &AlgorithmGrid) -> String {
    serde_json::to_string_pretty(&AlgorithmDocument::from(g)).expect("plain data serialises")
}

/// Parses an algorithm document. The grid is not validated.
pub(super) fn load(doc: &str) -> Result<AlgorithmGrid, GridError> {
    let de = &mut serde_json::Deserializer::from_str(doc);
    let parsed: AlgorithmDocument = serde_path_to_error::deserialize(de).map_err(|e| GridError::Parse {
        path: e.path().to_string(),
        message: e.inner().to_string(),
    })?;
    if parsed.version != ALGORITHM_VERSION {
        return Err(GridError::Version {
            found: parsed.version,
            expected: ALGORITHM_VERSION,
        });
    }
    Ok(parsed.into())
}
