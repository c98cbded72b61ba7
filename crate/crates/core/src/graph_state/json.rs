use serde::{Deserialize, Serialize};

use super::{GraphError, GraphState, VertexId};
use crate::Coord;

/// Wire form of a [`GraphState`]: vertices sorted by id, edges `[smaller, larger]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphDocument {
    pub vertices: Vec<VertexDocument>,
    pub edges: Vec<[VertexId; 2]>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexDocument {
    pub id: VertexId,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub row: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub col: Option<u32>,
}

impl From<GraphState> for GraphDocument {
    fn from(g: GraphState) -> Self {
        GraphDocument::from(&g)
    }
}

impl From<&GraphState> for GraphDocument {
    fn from(g: &GraphState) -> Self {
        let vertices = g
            .vertices()
            .map(|id| {
                let c = g.coord(id);
                VertexDocument {
                    id,
                    row: c.map(|c| c.row),
                    col: c.map(|c| c.col),
                }
            })
            .collect();
        let edges = g.edges().map(|(a, b)| [a, b]).collect();
        GraphDocument { vertices, edges }
    }
}

impl TryFrom<GraphDocument> for GraphState {
    type Error = GraphError;

    fn try_from(doc: GraphDocument) -> Result<Self, Self::Error> {
        let mut g = GraphState::new();
        for v in &doc.vertices {
            g.insert_vertex(v.id)?;
        }
        for v in &doc.vertices {
            if let (Some(row), Some(col)) = (v.row, v.col) {
                g.set_coord(v.id, Coord::new(row, col))?;
            }
        }
        for [a, b] in doc.edges {
            g.add_edge(a, b)?;
        }
        Ok(g)
    }
}
