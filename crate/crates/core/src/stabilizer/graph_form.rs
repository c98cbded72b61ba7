use serde::{Deserialize, Serialize};

use super::{LocalClifford, PauliString, StabilizerTableau};
use crate::graph_state::{GraphState, Sign};

/// Per-qubit Cliffords `C_j` with `t = (⊗ C_j) |G⟩`.
///
/// Applying the witness to the tableau of the reduced graph reproduces the
/// original stabilizer group exactly, signs included.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LocalCliffordWitness(pub Vec<LocalClifford>);

impl LocalCliffordWitness {
    pub fn is_identity(&self) -> bool {
        self.0.iter().all(|&c| c == LocalClifford::IDENTITY)
    }

    pub fn apply_to(&self, t: &mut StabilizerTableau) {
        for (q, &c) in self.0.iter().enumerate() {
            t.apply_local_clifford(q, c);
        }
    }
}

struct Reducer {
    t: StabilizerTableau,
    applied: Vec<LocalClifford>,
}

impl Reducer {
    fn apply(&mut self, q: usize, c: LocalClifford) {
        self.t.apply_local_clifford(q, c);
        self.applied[q] = c.after(self.applied[q]);
    }

    /// Row `target ← target · source`.
    fn row_mul(&mut self, target: usize, source: usize) {
        let src: PauliString = self.t.rows[source].clone();
        self.t.rows[target] = self.t.rows[target].mul(&src);
    }

    /// Gauss-Jordan on the X block; returns the pivot columns.
    fn reduce_x(&mut self) -> Vec<usize> {
        let n = self.t.n();
        let mut pivots = Vec::new();
        let mut r = 0;
        for col in 0..n {
            let Some(p) = (r..n).find(|&i| self.t.rows[i].x[col]) else {
                continue;
            };
            self.t.rows.swap(r, p);
            for i in 0..n {
                if i != r && self.t.rows[i].x[col] {
                    self.row_mul(i, r);
                }
            }
            pivots.push(col);
            r += 1;
        }
        pivots
    }
}

pub(super) fn to_graph(t: &StabilizerTableau) -> (GraphState, LocalCliffordWitness) {
    let n = t.n();
    let mut red = Reducer {
        t: t.clone(),
        applied: vec![LocalClifford::IDENTITY; n],
    };

    // Rows without an X pivot have full-rank Z support on the non-pivot
    // columns, so Hadamards there make the X block invertible.
    let pivots = red.reduce_x();
    for q in (0..n).filter(|q| !pivots.contains(q)) {
        red.apply(q, LocalClifford::HADAMARD);
    }
    let pivots = red.reduce_x();
    debug_assert_eq!(pivots.len(), n);

    // X block is now the identity with row j pivoting on column j.
    for j in 0..n {
        if red.t.rows[j].z[j] {
            red.apply(j, LocalClifford::phase_dagger());
        }
    }
    for j in 0..n {
        if red.t.rows[j].hermitian_sign() == Some(Sign::Minus) {
            red.apply(j, LocalClifford::pauli(crate::graph_state::Axis::Z));
        }
    }

    let labels = red.t.labels().to_vec();
    let mut g = GraphState::from_edges(labels.iter().copied(), []).expect("distinct labels");
    for i in 0..n {
        for j in i + 1..n {
            debug_assert_eq!(red.t.rows[i].z[j], red.t.rows[j].z[i]);
            if red.t.rows[i].z[j] {
                g.add_edge(labels[i], labels[j]).expect("labels exist");
            }
        }
    }
    let witness = red.applied.iter().map(|c| c.inverse()).collect();
    (g, LocalCliffordWitness(witness))
}

/// Dense adjacency matrix in ascending vertex order.
pub(super) fn adjacency(g: &GraphState) -> Vec<Vec<bool>> {
    let vs: Vec<_> = g.vertices().collect();
    vs.iter()
        .map(|&a| vs.iter().map(|&b| g.has_edge(a, b)).collect())
        .collect()
}
