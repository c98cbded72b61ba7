//! Helpers shared by the integration suites: a bitmask graph type with its
//! own local complementation (kept apart from the library on purpose),
//! isomorphism-class enumeration and random instance generators.

#![allow(dead_code)]

use std::collections::{HashSet, VecDeque};
use std::path::PathBuf;

use latticeforge::{AlgorithmGrid, GraphState, Tile, TileKind};
use rand::Rng;

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

pub fn demo_grid() -> AlgorithmGrid {
    AlgorithmGrid::from_json(&std::fs::read_to_string(fixture("demo_algorithm.json")).unwrap()).unwrap()
}

/// Simple graph on `0..n`, at most 16 vertices.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SmallGraph {
    pub adj: Vec<u16>,
}

impl SmallGraph {
    pub fn empty(n: usize) -> Self {
        assert!(n <= 16);
        Self { adj: vec![0; n] }
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Self {
        let mut g = Self::empty(n);
        for &(a, b) in edges {
            g.toggle(a, b);
        }
        g
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn toggle(&mut self, a: usize, b: usize) {
        assert_ne!(a, b);
        self.adj[a] ^= 1 << b;
        self.adj[b] ^= 1 << a;
    }

    pub fn has(&self, a: usize, b: usize) -> bool {
        self.adj[a] >> b & 1 == 1
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(|m| m.count_ones() as usize).sum::<usize>() / 2
    }

    pub fn is_connected(&self) -> bool {
        let n = self.n();
        if n == 0 {
            return true;
        }
        let mut seen: u16 = 1;
        let mut frontier: u16 = 1;
        while frontier != 0 {
            let v = frontier.trailing_zeros() as usize;
            frontier &= frontier - 1;
            let fresh = self.adj[v] & !seen;
            seen |= fresh;
            frontier |= fresh;
        }
        seen.count_ones() as usize == n
    }

    /// Complements the neighbourhood of `a`.
    pub fn lc(&self, a: usize) -> Self {
        let mut out = self.clone();
        let nb = self.adj[a];
        for b in 0..self.n() {
            if nb >> b & 1 == 1 {
                for c in (b + 1)..self.n() {
                    if nb >> c & 1 == 1 {
                        out.toggle(b, c);
                    }
                }
            }
        }
        out
    }

    pub fn to_state(&self) -> GraphState {
        let n = self.n() as u32;
        let edges: Vec<(u32, u32)> = (0..self.n())
            .flat_map(|a| ((a + 1)..self.n()).filter(move |&b| self.has(a, b)).map(move |b| (a as u32, b as u32)))
            .collect();
        GraphState::from_edges(0..n, edges).unwrap()
    }

    /// Minimum over all relabellings of the upper-triangle bit string.
    /// Only orderings that sort vertices by a degree invariant are tried.
    pub fn canonical_code(&self) -> u128 {
        let n = self.n();
        let deg: Vec<u32> = self.adj.iter().map(|m| m.count_ones()).collect();
        let invariant = |v: usize| {
            let mut nd: Vec<u32> = (0..n).filter(|&u| self.has(v, u)).map(|u| deg[u]).collect();
            nd.sort_unstable();
            (deg[v], nd)
        };
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&v| invariant(v));
        let class: Vec<usize> = {
            let mut c = vec![0; n];
            for k in 1..n {
                c[k] = c[k - 1] + usize::from(invariant(order[k]) != invariant(order[k - 1]));
            }
            c
        };
        let class_of: Vec<usize> = {
            let mut c = vec![0; n];
            for k in 0..n {
                c[order[k]] = class[k];
            }
            c
        };
        let mut best = u128::MAX;
        let mut placed = Vec::with_capacity(n);
        let mut used = 0u16;
        self.search(&class, &class_of, &mut placed, &mut used, &mut best);
        best
    }

    fn search(&self, class: &[usize], class_of: &[usize], placed: &mut Vec<usize>, used: &mut u16, best: &mut u128) {
        let n = self.n();
        let k = placed.len();
        if k == n {
            let mut code = 0u128;
            let mut bit = 0;
            for i in 0..n {
                for j in (i + 1)..n {
                    if self.has(placed[i], placed[j]) {
                        code |= 1 << bit;
                    }
                    bit += 1;
                }
            }
            *best = (*best).min(code);
            return;
        }
        for v in 0..n {
            if *used >> v & 1 == 0 && class_of[v] == class[k] {
                *used |= 1 << v;
                placed.push(v);
                self.search(class, class_of, placed, used, best);
                placed.pop();
                *used &= !(1 << v);
            }
        }
    }
}

/// One representative per isomorphism class of graphs on `n` vertices.
pub fn all_graphs(n: usize) -> Vec<SmallGraph> {
    if n == 0 {
        return vec![SmallGraph::empty(0)];
    }
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for g in all_graphs(n - 1) {
        for mask in 0u16..(1 << (n - 1)) {
            let mut h = g.clone();
            h.adj.push(0);
            for b in 0..(n - 1) {
                if mask >> b & 1 == 1 {
                    h.toggle(b, n - 1);
                }
            }
            if seen.insert(h.canonical_code()) {
                out.push(h);
            }
        }
    }
    out
}

pub fn connected_graphs(n: usize) -> Vec<SmallGraph> {
    all_graphs(n).into_iter().filter(SmallGraph::is_connected).collect()
}

pub fn random_connected(rng: &mut impl Rng, n: usize) -> SmallGraph {
    loop {
        let p: f64 = rng.gen_range(0.2..0.8);
        let mut g = SmallGraph::empty(n);
        for a in 0..n {
            for b in (a + 1)..n {
                if rng.gen_bool(p) {
                    g.toggle(a, b);
                }
            }
        }
        if g.is_connected() {
            return g;
        }
    }
}

/// Every graph reachable from `g` by local complementations.
pub fn lc_orbit(g: &SmallGraph) -> HashSet<SmallGraph> {
    let mut seen = HashSet::from([g.clone()]);
    let mut queue = VecDeque::from([g.clone()]);
    while let Some(h) = queue.pop_front() {
        for a in 0..h.n() {
            let next = h.lc(a);
            if seen.insert(next.clone()) {
                queue.push_back(next);
            }
        }
    }
    seen
}

const KINDS: [TileKind; 10] = TileKind::ALL;

/// A valid grid built by greedy random placement.
pub fn random_grid(rng: &mut impl Rng, attempts: usize) -> AlgorithmGrid {
    let mut grid = AlgorithmGrid::new("random");
    for _ in 0..attempts {
        let kind = KINDS[rng.gen_range(0..KINDS.len())];
        let row = rng.gen_range(0..10);
        let col = rng.gen_range(0..60);
        let tile = if kind.is_rotation() && rng.gen_bool(0.5) {
            Tile::rotation(kind, row, col, rng.gen_range(-7.0..7.0))
        } else {
            Tile::new(kind, row, col)
        };
        if let Ok(next) = grid.place_tile(tile) {
            grid = next;
        }
    }
    grid
}
