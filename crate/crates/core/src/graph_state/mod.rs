//! Graph states and the reduction calculus.
//!
//! A [`GraphState`] is a simple graph whose vertices are qubits and whose
//! edges are CZ interactions. Reduction happens through single-qubit Pauli
//! measurements ([`measure`]) and local complementation
//! ([`local_complement`]); [`minimize_cz`] searches the local-complementation
//! orbit for a member with fewer edges.

mod json;
mod measure;
mod orbit;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::{Coord, MAX_LATTICE_DIM};

pub use json::{GraphDocument, VertexDocument};
pub use measure::{measure, Correction, MeasurementRecord};
pub use orbit::{
    lc_equivalent, lc_equivalent_with_budget, minimize_cz, CzMinimization, LC_ORBIT_BUDGET,
};

/// Opaque qubit identifier. Ids are never reused within one graph's history.
pub type VertexId = u32;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("{dimension} = {value} is outside 1..={max}")]
    Bounds {
        dimension: &'static str,
        value: u32,
        max: u32,
    },
    #[error("vertex {0} not found")]
    VertexNotFound(VertexId),
    #[error("vertex {0} already exists")]
    DuplicateVertex(VertexId),
    #[error("self-join on vertex {0} is not allowed")]
    SelfLoop(VertexId),
    #[error("coordinate {coord} of vertex {vertex} is outside the lattice")]
    CoordOutOfRange { vertex: VertexId, coord: Coord },
    #[error("vertices {first} and {second} share coordinate {coord}")]
    CoordCollision {
        first: VertexId,
        second: VertexId,
        coord: Coord,
    },
    #[error("b0 = {b0} is not a neighbour of vertex {vertex}")]
    InvalidB0 { vertex: VertexId, b0: VertexId },
    #[error("graphs have different vertex sets")]
    Incomparable,
    #[error("local-complementation orbit exceeds the budget of {0} graphs")]
    OrbitBudget(usize),
    #[error("node budget must be positive")]
    ZeroBudget,
}

/// Pauli measurement axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::X, Axis::Y, Axis::Z];
}

/// Projector branch.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Sign {
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
}

/// A Pauli basis together with the projector branch.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct MeasurementBasis {
    pub axis: Axis,
    pub sign: Sign,
}

impl MeasurementBasis {
    pub const fn plus(axis: Axis) -> Self {
        Self {
            axis,
            sign: Sign::Plus,
        }
    }
}

impl fmt::Display for MeasurementBasis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = match self.sign {
            Sign::Plus => '+',
            Sign::Minus => '-',
        };
        write!(f, "{sign}{:?}", self.axis)
    }
}

impl std::str::FromStr for MeasurementBasis {
    type Err = String;

    /// Accepts `X`, `+X`, `-Y`, `z` and similar.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let (sign, rest) = match s.as_bytes().first() {
            Some(b'+') => (Sign::Plus, &s[1..]),
            Some(b'-') => (Sign::Minus, &s[1..]),
            _ => (Sign::Plus, s),
        };
        let axis = match rest.to_ascii_uppercase().as_str() {
            "X" => Axis::X,
            "Y" => Axis::Y,
            "Z" => Axis::Z,
            _ => return Err(format!("unknown measurement basis {s:?}")),
        };
        Ok(Self { axis, sign })
    }
}

impl Serialize for MeasurementBasis {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for MeasurementBasis {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Interactive edit of a graph.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "action", rename_all = "kebab-case")]
pub enum EditAction {
    AddVertex {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        coord: Option<Coord>,
    },
    RemoveVertex {
        vertex: VertexId,
    },
    AddEdge {
        a: VertexId,
        b: VertexId,
    },
    RemoveEdge {
        a: VertexId,
        b: VertexId,
    },
}

/// Simple undirected graph with optional lattice coordinates.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(try_from = "GraphDocument", into = "GraphDocument")]
pub struct GraphState {
    adjacency: BTreeMap<VertexId, BTreeSet<VertexId>>,
    coords: BTreeMap<VertexId, Coord>,
    next_id: VertexId,
}

impl PartialEq for GraphState {
    fn eq(&self, other: &Self) -> bool {
        self.adjacency == other.adjacency && self.coords == other.coords
    }
}

impl Eq for GraphState {}

impl GraphState {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds a graph from explicit vertex and edge lists.
    pub fn from_edges(
        vertices: impl IntoIterator<Item = VertexId>,
        edges: impl IntoIterator<Item = (VertexId, VertexId)>,
    ) -> Result<Self, GraphError> {
        let mut g = Self::new();
        for v in vertices {
            g.insert_vertex(v)?;
        }
        for (a, b) in edges {
            g.add_edge(a, b)?;
        }
        Ok(g)
    }

    /// `rows × cols` nearest-neighbour lattice. Vertex `r * cols + c` sits at `(r, c)`.
    pub fn create_grid(rows: u32, cols: u32) -> Result<Self, GraphError> {
        for (dimension, value) in [("rows", rows), ("cols", cols)] {
            if value == 0 || value > MAX_LATTICE_DIM {
                return Err(GraphError::Bounds {
                    dimension,
                    value,
                    max: MAX_LATTICE_DIM,
                });
            }
        }
        let mut g = Self::new();
        for r in 0..rows {
            for c in 0..cols {
                let v = r * cols + c;
                g.insert_vertex(v)?;
                g.coords.insert(v, Coord::new(r, c));
                if c > 0 {
                    g.add_edge(v - 1, v)?;
                }
                if r > 0 {
                    g.add_edge(v - cols, v)?;
                }
            }
        }
        Ok(g)
    }

    pub fn vertex_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn is_empty(&self) -> bool {
        self.adjacency.is_empty()
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.adjacency.contains_key(&v)
    }

    /// Vertex ids in ascending order.
    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.adjacency.keys().copied()
    }

    /// Edges as `(smaller, larger)` pairs in ascending order.
    pub fn edges(&self) -> impl Iterator<Item = (VertexId, VertexId)> + '_ {
        self.adjacency
            .iter()
            .flat_map(|(&a, ns)| ns.range(a + 1..).map(move |&b| (a, b)))
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.values().map(BTreeSet::len).sum::<usize>() / 2
    }

    pub fn has_edge(&self, a: VertexId, b: VertexId) -> bool {
        self.adjacency.get(&a).is_some_and(|ns| ns.contains(&b))
    }

    pub fn neighbors(&self, v: VertexId) -> Result<&BTreeSet<VertexId>, GraphError> {
        self.adjacency.get(&v).ok_or(GraphError::VertexNotFound(v))
    }

    pub fn degree(&self, v: VertexId) -> Result<usize, GraphError> {
        self.neighbors(v).map(BTreeSet::len)
    }

    pub fn coord(&self, v: VertexId) -> Option<Coord> {
        self.coords.get(&v).copied()
    }

    pub fn coords(&self) -> &BTreeMap<VertexId, Coord> {
        &self.coords
    }

    /// Attaches a lattice coordinate, keeping the coordinate map injective.
    pub fn set_coord(&mut self, v: VertexId, coord: Coord) -> Result<(), GraphError> {
        if !self.contains(v) {
            return Err(GraphError::VertexNotFound(v));
        }
        if !coord.in_bounds() {
            return Err(GraphError::CoordOutOfRange { vertex: v, coord });
        }
        if let Some((&other, _)) = self.coords.iter().find(|&(&u, &c)| c == coord && u != v) {
            return Err(GraphError::CoordCollision {
                first: other,
                second: v,
                coord,
            });
        }
        self.coords.insert(v, coord);
        Ok(())
    }

    /// Id the next `add-vertex` edit will receive.
    pub fn next_id(&self) -> VertexId {
        self.next_id
    }

    /// Connected components as ascending vertex sets, ordered by smallest member.
    pub fn components(&self) -> Vec<BTreeSet<VertexId>> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for start in self.vertices() {
            if !seen.insert(start) {
                continue;
            }
            let mut comp = BTreeSet::from([start]);
            let mut stack = vec![start];
            while let Some(v) = stack.pop() {
                for &u in &self.adjacency[&v] {
                    if seen.insert(u) {
                        comp.insert(u);
                        stack.push(u);
                    }
                }
            }
            out.push(comp);
        }
        out
    }

    /// Subgraph induced on `keep`; unknown ids are ignored.
    pub fn induced(&self, keep: &BTreeSet<VertexId>) -> GraphState {
        let mut g = GraphState::new();
        for &v in keep {
            if let Some(ns) = self.adjacency.get(&v) {
                g.adjacency
                    .insert(v, ns.iter().copied().filter(|u| keep.contains(u)).collect());
                if let Some(&c) = self.coords.get(&v) {
                    g.coords.insert(v, c);
                }
            }
        }
        g.next_id = self.next_id;
        g
    }

    pub fn apply(&self, action: &EditAction) -> Result<GraphState, GraphError> {
        let mut g = self.clone();
        match *action {
            EditAction::AddVertex { coord } => {
                let v = g.next_id;
                g.insert_vertex(v)?;
                if let Some(c) = coord {
                    g.set_coord(v, c)?;
                }
            }
            EditAction::RemoveVertex { vertex } => g.remove_vertex(vertex)?,
            EditAction::AddEdge { a, b } => g.add_edge(a, b)?,
            EditAction::RemoveEdge { a, b } => g.remove_edge(a, b)?,
        }
        Ok(g)
    }

    pub(crate) fn insert_vertex(&mut self, v: VertexId) -> Result<(), GraphError> {
        if self.adjacency.contains_key(&v) {
            return Err(GraphError::DuplicateVertex(v));
        }
        self.adjacency.insert(v, BTreeSet::new());
        self.next_id = self.next_id.max(v + 1);
        Ok(())
    }

    /// Idempotent: adding an existing edge leaves the graph unchanged.
    pub(crate) fn add_edge(&mut self, a: VertexId, b: VertexId) -> Result<(), GraphError> {
        if a == b {
            return Err(GraphError::SelfLoop(a));
        }
        self.require(a)?;
        self.require(b)?;
        self.adjacency.get_mut(&a).unwrap().insert(b);
        self.adjacency.get_mut(&b).unwrap().insert(a);
        Ok(())
    }

    pub(crate) fn remove_edge(&mut self, a: VertexId, b: VertexId) -> Result<(), GraphError> {
        self.require(a)?;
        self.require(b)?;
        self.adjacency.get_mut(&a).unwrap().remove(&b);
        self.adjacency.get_mut(&b).unwrap().remove(&a);
        Ok(())
    }

    pub(crate) fn remove_vertex(&mut self, v: VertexId) -> Result<(), GraphError> {
        let ns = self
            .adjacency
            .remove(&v)
            .ok_or(GraphError::VertexNotFound(v))?;
        for u in ns {
            self.adjacency.get_mut(&u).unwrap().remove(&v);
        }
        self.coords.remove(&v);
        Ok(())
    }

    fn toggle_edge(&mut self, a: VertexId, b: VertexId) {
        debug_assert_ne!(a, b);
        let na = self.adjacency.get_mut(&a).unwrap();
        if !na.remove(&b) {
            na.insert(b);
            self.adjacency.get_mut(&b).unwrap().insert(a);
        } else {
            self.adjacency.get_mut(&b).unwrap().remove(&a);
        }
    }

    fn require(&self, v: VertexId) -> Result<(), GraphError> {
        if self.contains(v) {
            Ok(())
        } else {
            Err(GraphError::VertexNotFound(v))
        }
    }

    /// In-place local complementation about `a`.
    pub(crate) fn complement_neighbourhood(&mut self, a: VertexId) -> Result<(), GraphError> {
        let ns: Vec<VertexId> = self.neighbors(a)?.iter().copied().collect();
        for (i, &u) in ns.iter().enumerate() {
            for &w in &ns[i + 1..] {
                self.toggle_edge(u, w);
            }
        }
        Ok(())
    }
}

/// Local complementation: toggles every edge between two neighbours of `a`.
pub fn local_complement(g: &GraphState, a: VertexId) -> Result<GraphState, GraphError> {
    let mut out = g.clone();
    out.complement_neighbourhood(a)?;
    Ok(out)
}

/// Number of CZ gates needed to prepare the state: the edge count.
pub fn cz_count(g: &GraphState) -> usize {
    g.edge_count()
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn path(n: u32) -> GraphState {
        GraphState::from_edges(1..=n, (1..n).map(|v| (v, v + 1))).unwrap()
    }

    fn complete(n: u32) -> GraphState {
        let edges = (1..=n).flat_map(|a| (a + 1..=n).map(move |b| (a, b)));
        GraphState::from_edges(1..=n, edges).unwrap()
    }

    #[test]
    fn grid_sizes() {
        let g = GraphState::create_grid(1, 1).unwrap();
        assert_eq!((g.vertex_count(), g.edge_count()), (1, 0));
        let g = GraphState::create_grid(2, 2).unwrap();
        assert_eq!((g.vertex_count(), g.edge_count()), (4, 4));
        let g = GraphState::create_grid(3, 3).unwrap();
        assert_eq!((g.vertex_count(), g.edge_count()), (9, 12));
        assert_eq!(g.coord(5), Some(Coord::new(1, 2)));
    }

    #[test]
    fn grid_bounds() {
        assert_eq!(
            GraphState::create_grid(122, 5),
            Err(GraphError::Bounds {
                dimension: "rows",
                value: 122,
                max: 121
            })
        );
        assert!(matches!(
            GraphState::create_grid(3, 0),
            Err(GraphError::Bounds {
                dimension: "cols",
                ..
            })
        ));
        assert!(GraphState::create_grid(121, 121).is_ok());
    }

    #[test]
    fn edits() {
        let g = path(3);
        assert_eq!(
            g.apply(&EditAction::AddEdge { a: 1, b: 1 }),
            Err(GraphError::SelfLoop(1))
        );
        let once = g.apply(&EditAction::AddEdge { a: 1, b: 3 }).unwrap();
        let twice = once.apply(&EditAction::AddEdge { a: 3, b: 1 }).unwrap();
        assert_eq!(once, twice);
        assert_eq!(twice.edge_count(), 3);

        let g = g.apply(&EditAction::RemoveVertex { vertex: 2 }).unwrap();
        assert_eq!(g.vertices().collect::<Vec<_>>(), vec![1, 3]);
        assert_eq!(g.edge_count(), 0);
        assert_eq!(
            g.apply(&EditAction::AddEdge { a: 1, b: 9 }),
            Err(GraphError::VertexNotFound(9))
        );
    }

    #[test]
    fn removed_ids_are_not_reused() {
        let g = path(3)
            .apply(&EditAction::RemoveVertex { vertex: 3 })
            .unwrap()
            .apply(&EditAction::AddVertex { coord: None })
            .unwrap();
        assert_eq!(g.vertices().collect::<Vec<_>>(), vec![1, 2, 4]);
    }

    #[test]
    fn coords_are_injective() {
        let mut g = path(2);
        g.set_coord(1, Coord::new(0, 0)).unwrap();
        assert!(matches!(
            g.set_coord(2, Coord::new(0, 0)),
            Err(GraphError::CoordCollision { .. })
        ));
        assert!(matches!(
            g.set_coord(2, Coord::new(0, 121)),
            Err(GraphError::CoordOutOfRange { .. })
        ));
    }

    #[test]
    fn local_complement_examples() {
        let tri = complete(3);
        let lc = local_complement(&tri, 1).unwrap();
        assert_eq!(lc.edges().collect::<Vec<_>>(), vec![(1, 2), (1, 3)]);

        let star = GraphState::from_edges(0..5, (1..5).map(|l| (0, l))).unwrap();
        let lc = local_complement(&star, 0).unwrap();
        assert_eq!(lc.edge_count(), 10);

        assert_eq!(local_complement(&tri, 7), Err(GraphError::VertexNotFound(7)));
    }

    #[test]
    fn cz_counts() {
        assert_eq!(cz_count(&GraphState::new()), 0);
        assert_eq!(cz_count(&complete(4)), 6);
        assert_eq!(cz_count(&GraphState::create_grid(3, 3).unwrap()), 12);
    }

    #[test]
    fn basis_parsing() {
        assert_eq!("X".parse(), Ok(MeasurementBasis::plus(Axis::X)));
        assert_eq!(
            "-y".parse(),
            Ok(MeasurementBasis {
                axis: Axis::Y,
                sign: Sign::Minus
            })
        );
        assert!("W".parse::<MeasurementBasis>().is_err());
        assert_eq!(MeasurementBasis::plus(Axis::Z).to_string(), "+Z");
    }

    #[test]
    fn components_split() {
        let g = GraphState::from_edges([1, 2, 3, 4, 5], [(1, 3), (4, 5)]).unwrap();
        let comps = g.components();
        assert_eq!(comps.len(), 3);
        assert_eq!(comps[0], BTreeSet::from([1, 3]));
    }

    mod props {
        use super::super::*;
        use proptest::prelude::*;

        pub(crate) fn arb_graph(max_n: u32) -> impl Strategy<Value = GraphState> {
            (1..=max_n).prop_flat_map(|n| {
                let pairs = (n * (n - 1) / 2) as usize;
                proptest::collection::vec(any::<bool>(), pairs).prop_map(move |bits| {
                    let mut g = GraphState::from_edges(0..n, []).unwrap();
                    let mut k = 0;
                    for a in 0..n {
                        for b in a + 1..n {
                            if bits[k] {
                                g.add_edge(a, b).unwrap();
                            }
                            k += 1;
                        }
                    }
                    g
                })
            })
        }

        proptest! {
            #[test]
            fn lc_is_an_involution(g in arb_graph(12), pick in any::<prop::sample::Index>()) {
                let a = pick.index(g.vertex_count()) as VertexId;
                let once = local_complement(&g, a).unwrap();
                prop_assert_eq!(local_complement(&once, a).unwrap(), g.clone());
                prop_assert!(once.vertices().eq(g.vertices()));
            }

            #[test]
            fn lc_touches_only_the_neighbourhood(g in arb_graph(10), pick in any::<prop::sample::Index>()) {
                let a = pick.index(g.vertex_count()) as VertexId;
                let ns = g.neighbors(a).unwrap().clone();
                let lc = local_complement(&g, a).unwrap();
                for u in g.vertices() {
                    for w in g.vertices().filter(|&w| w > u) {
                        let inside = ns.contains(&u) && ns.contains(&w);
                        prop_assert_eq!(lc.has_edge(u, w) != g.has_edge(u, w), inside);
                    }
                }
            }

            #[test]
            fn json_round_trip(g in arb_graph(9)) {
                let text = serde_json::to_string(&g).unwrap();
                let back: GraphState = serde_json::from_str(&text).unwrap();
                prop_assert_eq!(back, g);
            }
        }
    }
}
