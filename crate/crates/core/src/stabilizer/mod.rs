//! GF(2) stabilizer tableaux.
//!
//! This module is a self-contained stabilizer simulator. It shares nothing
//! with the graph rewriting rules in [`crate::graph_state`] beyond the
//! [`GraphState`] value type, so it can serve as an independent oracle for
//! them: a graph state is turned into its tableau, measured with the generic
//! stabilizer update, and the result is reduced back to graph form and
//! compared up to local Cliffords.

mod clifford;
mod graph_form;
mod lc_solver;
mod pauli;

use std::fmt;

use thiserror::Error;

use crate::graph_state::{Axis, GraphState, Sign, VertexId};

pub use clifford::LocalClifford;
pub use graph_form::LocalCliffordWitness;
pub use lc_solver::{local_clifford_solution, SymplecticLocal};
pub use pauli::PauliString;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TableauError {
    #[error("a stabilizer tableau needs at least one qubit")]
    EmptyGraph,
    #[error("qubit {qubit} out of range for a {n}-qubit tableau")]
    QubitOutOfRange { qubit: usize, n: usize },
    #[error("no qubit is labelled {0}")]
    UnknownLabel(VertexId),
    #[error("outcome {requested:?} is impossible: the state is a {actual:?} eigenstate")]
    BranchImpossible { requested: Sign, actual: Sign },
    #[error("tableaux have {0} and {1} qubits")]
    SizeMismatch(usize, usize),
}

/// Stabilizer generators of an n-qubit pure state.
///
/// Qubit `j` carries the label `labels[j]`, which for tableaux built from a
/// graph is the vertex id; labels stay ascending through trace-outs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StabilizerTableau {
    labels: Vec<VertexId>,
    rows: Vec<PauliString>,
}

impl StabilizerTableau {
    /// Tableau with generators `K_a = X_a Π_{b∈N(a)} Z_b`.
    pub fn from_graph(g: &GraphState) -> Result<Self, TableauError> {
        if g.is_empty() {
            return Err(TableauError::EmptyGraph);
        }
        let labels: Vec<VertexId> = g.vertices().collect();
        let n = labels.len();
        let rows = labels
            .iter()
            .enumerate()
            .map(|(i, &v)| {
                let mut p = PauliString::identity(n);
                p.x[i] = true;
                for (j, u) in labels.iter().enumerate() {
                    if g.has_edge(v, *u) {
                        p.z[j] = true;
                    }
                }
                p
            })
            .collect();
        Ok(Self { labels, rows })
    }

    /// Builds a tableau from explicit generators. Returns `None` unless the
    /// rows are Hermitian, pairwise commuting and independent.
    pub fn from_rows(labels: Vec<VertexId>, rows: Vec<PauliString>) -> Option<Self> {
        let n = labels.len();
        if rows.len() != n || rows.iter().any(|r| r.len() != n) {
            return None;
        }
        let t = Self { labels, rows };
        t.check_invariants().then_some(t)
    }

    pub fn n(&self) -> usize {
        self.rows.len()
    }

    pub fn labels(&self) -> &[VertexId] {
        &self.labels
    }

    pub fn rows(&self) -> &[PauliString] {
        &self.rows
    }

    pub fn x_bits(&self) -> Vec<Vec<bool>> {
        self.rows.iter().map(|r| r.x.clone()).collect()
    }

    pub fn z_bits(&self) -> Vec<Vec<bool>> {
        self.rows.iter().map(|r| r.z.clone()).collect()
    }

    /// Row phases as powers of `i`.
    pub fn phases(&self) -> Vec<u8> {
        self.rows.iter().map(|r| r.phase).collect()
    }

    pub fn index_of(&self, label: VertexId) -> Result<usize, TableauError> {
        self.labels
            .iter()
            .position(|&l| l == label)
            .ok_or(TableauError::UnknownLabel(label))
    }

    /// Hermitian, pairwise commuting, independent over GF(2).
    pub fn check_invariants(&self) -> bool {
        let hermitian = self.rows.iter().all(|r| r.hermitian_sign().is_some());
        let commuting = self
            .rows
            .iter()
            .enumerate()
            .all(|(i, a)| self.rows[i + 1..].iter().all(|b| a.commutes_with(b)));
        hermitian && commuting && rank(&self.rows) == self.n()
    }

    /// Expresses `target` as a product of generators, returning the indices
    /// used, or `None` if it is not in the group up to phase.
    fn decompose(&self, target: &PauliString) -> Option<Vec<usize>> {
        let n = self.n();
        // Each reduced row remembers which generators it combines.
        let mut work: Vec<(Vec<bool>, Vec<bool>)> = self
            .rows
            .iter()
            .enumerate()
            .map(|(i, r)| {
                let mut bits = r.x.clone();
                bits.extend_from_slice(&r.z);
                let mut used = vec![false; n];
                used[i] = true;
                (bits, used)
            })
            .collect();
        let mut goal = target.x.clone();
        goal.extend_from_slice(&target.z);
        let mut goal_used = vec![false; n];

        let mut pivot_row = 0;
        for col in 0..2 * n {
            let Some(p) = (pivot_row..n).find(|&r| work[r].0[col]) else {
                continue;
            };
            work.swap(pivot_row, p);
            let (pbits, pused) = work[pivot_row].clone();
            for (r, row) in work.iter_mut().enumerate() {
                if r != pivot_row && row.0[col] {
                    xor_into(&mut row.0, &pbits);
                    xor_into(&mut row.1, &pused);
                }
            }
            if goal[col] {
                xor_into(&mut goal, &pbits);
                xor_into(&mut goal_used, &pused);
            }
            pivot_row += 1;
        }
        goal.iter()
            .all(|&b| !b)
            .then(|| (0..n).filter(|&i| goal_used[i]).collect())
    }

    /// Product of the listed generators, in ascending order.
    fn product(&self, indices: &[usize]) -> PauliString {
        indices
            .iter()
            .fold(PauliString::identity(self.n()), |acc, &i| acc.mul(&self.rows[i]))
    }

    /// Whether `p` (with its phase) belongs to the stabilizer group.
    pub fn stabilizes(&self, p: &PauliString) -> bool {
        self.decompose(p)
            .is_some_and(|idx| self.product(&idx).phase == p.phase)
    }

    /// Exact equality of the generated groups, signs included.
    pub fn same_group(&self, other: &Self) -> bool {
        self.n() == other.n() && other.rows.iter().all(|r| self.stabilizes(r))
    }

    /// Conjugates qubit `q` by a single-qubit Clifford.
    pub fn apply_local_clifford(&mut self, q: usize, c: LocalClifford) {
        for r in &mut self.rows {
            c.conjugate(r, q);
        }
    }

    /// Projects qubit `q` onto the `sign` eigenspace of `axis`, keeping it in
    /// the tableau. Returns the index of the generator that is now `±P_q`.
    pub fn postselect(&mut self, q: usize, axis: Axis, sign: Sign) -> Result<usize, TableauError> {
        let n = self.n();
        if q >= n {
            return Err(TableauError::QubitOutOfRange { qubit: q, n });
        }
        let target = PauliString::single(n, q, axis, sign);
        let anti: Vec<usize> = (0..n)
            .filter(|&i| !self.rows[i].commutes_with(&target))
            .collect();
        if let Some((&first, rest)) = anti.split_first() {
            for &i in rest {
                self.rows[i] = self.rows[i].mul(&self.rows[first]);
            }
            self.rows[first] = target;
            return Ok(first);
        }
        // Deterministic outcome: ±P_q is already in the group.
        let idx = self
            .decompose(&target)
            .expect("a Pauli commuting with a full stabilizer group lies in it");
        let prod = self.product(&idx);
        let actual = prod.hermitian_sign().expect("products of generators are Hermitian");
        if actual != sign {
            return Err(TableauError::BranchImpossible {
                requested: sign,
                actual,
            });
        }
        self.rows[idx[0]] = prod;
        Ok(idx[0])
    }

    /// Measures qubit `q` on the given branch and traces it out, leaving an
    /// `(n-1)`-qubit tableau on the remaining labels.
    pub fn project(&self, q: usize, axis: Axis, sign: Sign) -> Result<Self, TableauError> {
        let mut t = self.clone();
        let r = t.postselect(q, axis, sign)?;
        let pivot = t.rows[r].clone();
        for i in 0..t.n() {
            if i != r && (t.rows[i].x[q] || t.rows[i].z[q]) {
                // Commutes with ±P_q, so the factor on q is P_q itself.
                t.rows[i] = t.rows[i].mul(&pivot);
            }
        }
        t.rows.remove(r);
        for row in &mut t.rows {
            row.remove_qubit(q);
        }
        t.labels.remove(q);
        Ok(t)
    }

    /// [`Self::project`] addressed by label.
    pub fn project_label(&self, label: VertexId, axis: Axis, sign: Sign) -> Result<Self, TableauError> {
        self.project(self.index_of(label)?, axis, sign)
    }

    /// Reduces to graph form; see [`LocalCliffordWitness`].
    pub fn to_graph_up_to_local_clifford(&self) -> (GraphState, LocalCliffordWitness) {
        graph_form::to_graph(self)
    }

    /// True iff some product of single-qubit Cliffords maps the stabilizer
    /// group of `self` onto that of `other`. Qubits are matched by position.
    pub fn equal_up_to_local_clifford(&self, other: &Self) -> Result<bool, TableauError> {
        if self.n() != other.n() {
            return Err(TableauError::SizeMismatch(self.n(), other.n()));
        }
        if self.n() == 0 {
            return Ok(true);
        }
        let a = graph_form::adjacency(&self.to_graph_up_to_local_clifford().0);
        let b = graph_form::adjacency(&other.to_graph_up_to_local_clifford().0);
        Ok(local_clifford_solution(&a, &b).is_some())
    }

    /// One generator per line, e.g. `+XZI`.
    pub fn dump(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for StabilizerTableau {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.rows {
            writeln!(f, "{r}")?;
        }
        Ok(())
    }
}

fn xor_into(dst: &mut [bool], src: &[bool]) {
    for (d, s) in dst.iter_mut().zip(src) {
        *d ^= s;
    }
}

fn rank(rows: &[PauliString]) -> usize {
    let mut m: Vec<Vec<bool>> = rows
        .iter()
        .map(|r| {
            let mut v = r.x.clone();
            v.extend_from_slice(&r.z);
            v
        })
        .collect();
    let cols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..cols {
        let Some(p) = (rank..m.len()).find(|&r| m[r][col]) else {
            continue;
        };
        m.swap(rank, p);
        let pivot = m[rank].clone();
        for (r, row) in m.iter_mut().enumerate() {
            if r != rank && row[col] {
                xor_into(row, &pivot);
            }
        }
        rank += 1;
    }
    rank
}
