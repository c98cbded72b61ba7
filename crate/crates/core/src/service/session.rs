use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};

use crate::graph_state::{
    local_complement, measure, minimize_cz, EditAction, GraphError, GraphState, MeasurementBasis, MeasurementRecord,
    VertexId,
};
use crate::grid::{AlgorithmDocument, AlgorithmGrid, Diagnostic, Severity};
use crate::lattice::{open_algorithm, prepare, to_graph_state, Lattice, LatticeError};

/// A state change, as stored in the history.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "kebab-case")]
pub enum Operation {
    SetGrid {
        grid: AlgorithmDocument,
    },
    /// Expands and prepares the grid; the result becomes the graph.
    Layout,
    SetGraph {
        graph: GraphState,
    },
    Edit {
        edit: EditAction,
    },
    /// `b0` is the neighbour actually used, so replay never depends on the
    /// default choice.
    Measure {
        vertex: VertexId,
        basis: MeasurementBasis,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        b0: Option<VertexId>,
    },
    Lc {
        vertex: VertexId,
    },
    /// Replayed through the recorded sequence rather than a fresh search.
    MinimizeCz {
        budget: usize,
        sequence: Vec<VertexId>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HistoryEntry {
    pub at: DateTime<Utc>,
    #[serde(flatten)]
    pub op: Operation,
}

#[derive(Debug, Clone, PartialEq)]
pub enum OpError {
    /// The grid breaks one or more invariants.
    Invalid(Vec<Diagnostic>),
    /// The operation needs a graph vertex (or a graph) that is not there.
    Conflict(String),
    /// Anything else the request got wrong.
    Rejected(String),
}

impl From<GraphError> for OpError {
    fn from(e: GraphError) -> Self {
        match e {
            GraphError::VertexNotFound(_) => OpError::Conflict(e.to_string()),
            other => OpError::Rejected(other.to_string()),
        }
    }
}

/// Everything an operation can change.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SessionState {
    pub grid: AlgorithmGrid,
    pub lattice: Option<Lattice>,
    pub graph: Option<GraphState>,
    /// Bumped on every graph change.
    pub graph_version: u64,
}

/// Side results that the caller may want to report.
#[derive(Debug, Clone, Default)]
pub struct Outcome {
    pub record: Option<MeasurementRecord>,
    pub minimization: Option<crate::graph_state::CzMinimization>,
}

impl SessionState {
    fn graph(&self) -> Result<&GraphState, OpError> {
        self.graph
            .as_ref()
            .ok_or_else(|| OpError::Conflict("session has no graph".into()))
    }

    fn set_graph(&mut self, g: GraphState) {
        self.graph = Some(g);
        self.graph_version += 1;
    }

    /// Applies `op` to a copy of the state. On success returns the new state
    /// and the operation in the form to store in the history.
    pub fn apply(&self, op: Operation) -> Result<(SessionState, Operation, Outcome), OpError> {
        let mut next = self.clone();
        let mut outcome = Outcome::default();
        let stored = match op {
            Operation::SetGrid { grid } => {
                let g = AlgorithmGrid::from(grid.clone());
                let errors: Vec<_> = g
                    .validate()
                    .into_iter()
                    .filter(|d| d.severity == Severity::Error)
                    .collect();
                if !errors.is_empty() {
                    return Err(OpError::Invalid(errors));
                }
                next.grid = g;
                next.lattice = None;
                Operation::SetGrid { grid }
            }
            Operation::Layout => {
                let lattice = match open_algorithm(&next.grid) {
                    Ok(l) => prepare(&l),
                    Err(LatticeError::Invalid(d)) => return Err(OpError::Invalid(d)),
                    Err(e) => return Err(OpError::Rejected(e.to_string())),
                };
                next.set_graph(to_graph_state(&lattice));
                next.lattice = Some(lattice);
                Operation::Layout
            }
            Operation::SetGraph { graph } => {
                next.set_graph(graph.clone());
                Operation::SetGraph { graph }
            }
            Operation::Edit { edit } => {
                let g = self.graph()?.apply(&edit)?;
                next.set_graph(g);
                Operation::Edit { edit }
            }
            Operation::Measure { vertex, basis, b0 } => {
                let (g, record) = measure(self.graph()?, vertex, basis, b0)?;
                let b0 = record.chosen_b0;
                next.set_graph(g);
                outcome.record = Some(record);
                Operation::Measure { vertex, basis, b0 }
            }
            Operation::Lc { vertex } => {
                let g = local_complement(self.graph()?, vertex)?;
                next.set_graph(g);
                Operation::Lc { vertex }
            }
            Operation::MinimizeCz { budget, sequence } => {
                let g = self.graph()?;
                let sequence = if sequence.is_empty() {
                    let m = minimize_cz(g, budget)?;
                    let seq = m.sequence.clone();
                    next.set_graph(m.graph.clone());
                    outcome.minimization = Some(m);
                    seq
                } else {
                    let mut h = g.clone();
                    for &v in &sequence {
                        h = local_complement(&h, v)?;
                    }
                    next.set_graph(h);
                    sequence
                };
                Operation::MinimizeCz { budget, sequence }
            }
        };
        Ok((next, stored, outcome))
    }
}

/// Rebuilds a session state from its history, starting from an empty one.
pub fn replay(history: &[HistoryEntry]) -> Result<SessionState, OpError> {
    history.iter().try_fold(SessionState::default(), |s, e| {
        s.apply(e.op.clone()).map(|(next, _, _)| next)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph_state::Axis;

    fn entry(op: Operation) -> HistoryEntry {
        HistoryEntry { at: Utc::now(), op }
    }

    #[test]
    fn history_replays() {
        let mut state = SessionState::default();
        let mut history = Vec::new();
        let p4 = GraphState::from_edges(0..4, [(0, 1), (1, 2), (2, 3)]).unwrap();
        let ops = [
            Operation::SetGraph { graph: p4 },
            Operation::Lc { vertex: 1 },
            Operation::Measure {
                vertex: 2,
                basis: MeasurementBasis::plus(Axis::X),
                b0: None,
            },
            Operation::Edit {
                edit: EditAction::AddVertex { coord: None },
            },
            Operation::MinimizeCz {
                budget: 100,
                sequence: vec![],
            },
        ];
        for op in ops {
            let (next, stored, _) = state.apply(op).unwrap();
            state = next;
            history.push(entry(stored));
        }
        assert!(matches!(history[2].op, Operation::Measure { b0: Some(_), .. }));
        assert_eq!(replay(&history).unwrap(), state);
        assert_eq!(state.graph_version, 5);

        let text = serde_json::to_string(&history).unwrap();
        let back: Vec<HistoryEntry> = serde_json::from_str(&text).unwrap();
        assert_eq!(back, history);
    }

    #[test]
    fn failures_leave_state_alone() {
        let s = SessionState::default();
        assert!(matches!(s.apply(Operation::Lc { vertex: 0 }), Err(OpError::Conflict(_))));
        let (s, _, _) = s.apply(Operation::Layout).unwrap();
        assert_eq!(s.graph, Some(GraphState::new()));
        assert!(matches!(s.apply(Operation::Lc { vertex: 9 }), Err(OpError::Conflict(_))));
        assert!(matches!(
            s.apply(Operation::MinimizeCz { budget: 0, sequence: vec![] }),
            Err(OpError::Rejected(_))
        ));
    }
}
