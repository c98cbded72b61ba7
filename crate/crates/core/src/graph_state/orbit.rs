//! Breadth-first exploration of local-complementation orbits.
//!
//! Graphs in the orbit are keyed by their adjacency matrix, row-major, under
//! the fixed vertex labelling. No isomorphism quotient is taken: local
//! complementation acts on labelled graphs.

use std::collections::{BTreeSet, HashMap, VecDeque};

use super::{GraphError, GraphState, VertexId};

/// Orbit size cap used by [`lc_equivalent`].
pub const LC_ORBIT_BUDGET: usize = 1 << 20;

/// Outcome of [`minimize_cz`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CzMinimization {
    /// Fewest-edge orbit member among those explored.
    pub graph: GraphState,
    /// Vertices to complement about, in order, to reach `graph` from the input.
    pub sequence: Vec<VertexId>,
    /// True when the whole orbit fit in the budget, so `graph` is a proven minimum.
    pub exhaustive: bool,
    /// Distinct graphs discovered.
    pub explored: usize,
}

/// Dense adjacency bit matrix over a fixed vertex order.
#[derive(Clone)]
struct BitGraph {
    n: usize,
    words: usize,
    bits: Vec<u64>,
}

impl BitGraph {
    fn new(g: &GraphState, order: &[VertexId]) -> Self {
        let n = order.len();
        let words = n.div_ceil(64).max(1);
        let index: HashMap<VertexId, usize> =
            order.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let mut bg = BitGraph {
            n,
            words,
            bits: vec![0; n * words],
        };
        for (a, b) in g.edges() {
            if let (Some(&i), Some(&j)) = (index.get(&a), index.get(&b)) {
                bg.set(i, j);
                bg.set(j, i);
            }
        }
        bg
    }

    fn set(&mut self, i: usize, j: usize) {
        self.bits[i * self.words + j / 64] |= 1 << (j % 64);
    }

    fn row(&self, i: usize) -> &[u64] {
        &self.bits[i * self.words..(i + 1) * self.words]
    }

    fn degree(&self, i: usize) -> u32 {
        self.row(i).iter().map(|w| w.count_ones()).sum()
    }

    fn edge_count(&self) -> usize {
        (self.bits.iter().map(|w| w.count_ones() as usize).sum::<usize>()) / 2
    }

    fn complemented(&self, a: usize) -> BitGraph {
        let mut out = self.clone();
        let na = self.row(a).to_vec();
        for (w, &word) in na.iter().enumerate() {
            let mut rest = word;
            while rest != 0 {
                let u = w * 64 + rest.trailing_zeros() as usize;
                rest &= rest - 1;
                let base = u * self.words;
                for (k, &m) in na.iter().enumerate() {
                    out.bits[base + k] ^= m;
                }
                // u is in its own toggled set; no self-loop.
                out.bits[base + u / 64] ^= 1 << (u % 64);
            }
        }
        out
    }
}

struct Node {
    graph: BitGraph,
    parent: Option<(usize, usize)>,
}

/// Breadth-first walk of the orbit. `visit` sees each newly discovered node
/// index and may stop the walk by returning `true`. Returns whether the orbit
/// was exhausted.
fn walk(
    start: BitGraph,
    budget: usize,
    nodes: &mut Vec<Node>,
    mut visit: impl FnMut(usize, &BitGraph) -> bool,
) -> bool {
    let mut seen: HashMap<Vec<u64>, usize> = HashMap::new();
    seen.insert(start.bits.clone(), 0);
    nodes.push(Node {
        graph: start,
        parent: None,
    });
    if visit(0, &nodes[0].graph) {
        return false;
    }
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        for a in 0..nodes[i].graph.n {
            if nodes[i].graph.degree(a) < 2 {
                continue;
            }
            let child = nodes[i].graph.complemented(a);
            if seen.contains_key(&child.bits) {
                continue;
            }
            if nodes.len() >= budget {
                return false;
            }
            let idx = nodes.len();
            seen.insert(child.bits.clone(), idx);
            nodes.push(Node {
                graph: child,
                parent: Some((i, a)),
            });
            if visit(idx, &nodes[idx].graph) {
                return false;
            }
            queue.push_back(idx);
        }
    }
    true
}

fn path_to(nodes: &[Node], mut idx: usize, order: &[VertexId]) -> Vec<VertexId> {
    let mut seq = Vec::new();
    while let Some((parent, a)) = nodes[idx].parent {
        seq.push(order[a]);
        idx = parent;
    }
    seq.reverse();
    seq
}

/// Searches the local-complementation orbit of `g` for a member with the
/// fewest edges, exploring at most `node_budget` distinct graphs.
///
/// Children are expanded in ascending vertex order and ties go to the first
/// graph discovered, so the result is deterministic for a given budget.
pub fn minimize_cz(g: &GraphState, node_budget: usize) -> Result<CzMinimization, GraphError> {
    if node_budget == 0 {
        return Err(GraphError::ZeroBudget);
    }
    let order: Vec<VertexId> = g.vertices().collect();
    let mut nodes = Vec::new();
    let mut best = (g.edge_count(), 0usize);
    let exhaustive = walk(BitGraph::new(g, &order), node_budget, &mut nodes, |i, bg| {
        let e = bg.edge_count();
        if e < best.0 {
            best = (e, i);
        }
        false
    });
    let sequence = path_to(&nodes, best.1, &order);
    let mut graph = g.clone();
    for &v in &sequence {
        graph.complement_neighbourhood(v)?;
    }
    debug_assert_eq!(graph.edge_count(), best.0);
    Ok(CzMinimization {
        graph,
        sequence,
        exhaustive,
        explored: nodes.len(),
    })
}

/// Whether `g2` is reachable from `g1` by local complementations.
pub fn lc_equivalent(g1: &GraphState, g2: &GraphState) -> Result<bool, GraphError> {
    lc_equivalent_with_budget(g1, g2, LC_ORBIT_BUDGET)
}

/// [`lc_equivalent`] with an explicit cap on the orbit size explored per
/// connected component. Exceeding it is an error, never a guess.
pub fn lc_equivalent_with_budget(
    g1: &GraphState,
    g2: &GraphState,
    budget: usize,
) -> Result<bool, GraphError> {
    if !g1.vertices().eq(g2.vertices()) {
        return Err(GraphError::Incomparable);
    }
    if budget == 0 {
        return Err(GraphError::ZeroBudget);
    }
    // Local complementation never moves a vertex between components.
    let comps = g1.components();
    if comps != g2.components() {
        return Ok(false);
    }
    for comp in comps {
        if !component_equivalent(g1, g2, &comp, budget)? {
            return Ok(false);
        }
    }
    Ok(true)
}

fn component_equivalent(
    g1: &GraphState,
    g2: &GraphState,
    comp: &BTreeSet<VertexId>,
    budget: usize,
) -> Result<bool, GraphError> {
    let order: Vec<VertexId> = comp.iter().copied().collect();
    let start = BitGraph::new(g1, &order);
    let target = BitGraph::new(g2, &order).bits;
    let mut found = false;
    let mut nodes = Vec::new();
    let exhaustive = walk(start, budget, &mut nodes, |_, bg| {
        found = bg.bits == target;
        found
    });
    match (found, exhaustive) {
        (true, _) => Ok(true),
        (false, true) => Ok(false),
        (false, false) => Err(GraphError::OrbitBudget(budget)),
    }
}
