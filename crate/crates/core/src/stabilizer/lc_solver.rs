//! Algebraic test for local-Clifford equivalence of graph states.
//!
//! A local Clifford acts on qubit `j` as an invertible 2×2 binary matrix
//! `[[a, b], [c, d]]` on `(x_j, z_j)`. It maps the stabilizer `(I | Γ₁)` of
//! one graph onto `(I | Γ₂)` iff
//!
//! ```text
//! C + Γ₁·D = (A + Γ₁·B)·Γ₂      with  a_j·d_j + b_j·c_j = 1  for every j
//! ```
//!
//! for diagonal `A, B, C, D`. The matrix equation is linear in the `4n`
//! unknowns; the per-qubit determinant condition is checked by backtracking
//! over the solution space, one qubit at a time.

/// Per-qubit symplectic matrix `[[a, b], [c, d]]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SymplecticLocal {
    pub a: bool,
    pub b: bool,
    pub c: bool,
    pub d: bool,
}

impl SymplecticLocal {
    fn from_bits(v: [bool; 4]) -> Self {
        Self {
            a: v[0],
            b: v[1],
            c: v[2],
            d: v[3],
        }
    }

    pub fn invertible(self) -> bool {
        (self.a & self.d) ^ (self.b & self.c)
    }
}

/// Finds local symplectic maps taking graph `g1` to graph `g2` (adjacency
/// matrices over the same qubit order), or `None` when they are not
/// local-Clifford equivalent.
pub fn local_clifford_solution(g1: &[Vec<bool>], g2: &[Vec<bool>]) -> Option<Vec<SymplecticLocal>> {
    let n = g1.len();
    assert_eq!(n, g2.len(), "adjacency matrices of different size");
    if n == 0 {
        return Some(Vec::new());
    }
    // Connected components are a local invariant; solving per component
    // keeps the search space small.
    let comps1 = components(g1);
    if comps1 != components(g2) {
        return None;
    }
    let mut out = vec![
        SymplecticLocal {
            a: true,
            b: false,
            c: false,
            d: true
        };
        n
    ];
    for comp in comps1 {
        let sub1 = restrict(g1, &comp);
        let sub2 = restrict(g2, &comp);
        let sol = solve_connected(&sub1, &sub2)?;
        for (k, &q) in comp.iter().enumerate() {
            out[q] = sol[k];
        }
    }
    Some(out)
}

fn components(g: &[Vec<bool>]) -> Vec<Vec<usize>> {
    let n = g.len();
    let mut label = vec![usize::MAX; n];
    let mut comps = Vec::new();
    for s in 0..n {
        if label[s] != usize::MAX {
            continue;
        }
        let id = comps.len();
        let mut members = vec![s];
        label[s] = id;
        let mut i = 0;
        while i < members.len() {
            let v = members[i];
            for u in 0..n {
                if g[v][u] && label[u] == usize::MAX {
                    label[u] = id;
                    members.push(u);
                }
            }
            i += 1;
        }
        members.sort_unstable();
        comps.push(members);
    }
    comps
}

fn restrict(g: &[Vec<bool>], keep: &[usize]) -> Vec<Vec<bool>> {
    keep.iter()
        .map(|&i| keep.iter().map(|&j| g[i][j]).collect())
        .collect()
}

fn solve_connected(g1: &[Vec<bool>], g2: &[Vec<bool>]) -> Option<Vec<SymplecticLocal>> {
    let n = g1.len();
    let vars = 4 * n;
    let var = |q: usize, k: usize| 4 * q + k; // k: 0=a 1=b 2=c 3=d

    // Equation (k, m):  c_k δ_km + Γ₁[k][m] d_m + a_k Γ₂[k][m] + Σ_j Γ₁[k][j] b_j Γ₂[j][m] = 0
    let mut rows: Vec<Vec<bool>> = Vec::with_capacity(n * n);
    for k in 0..n {
        for m in 0..n {
            let mut eq = vec![false; vars];
            if k == m {
                eq[var(k, 2)] ^= true;
            }
            if g1[k][m] {
                eq[var(m, 3)] ^= true;
            }
            if g2[k][m] {
                eq[var(k, 0)] ^= true;
            }
            for j in 0..n {
                if g1[k][j] && g2[j][m] {
                    eq[var(j, 1)] ^= true;
                }
            }
            if eq.iter().any(|&b| b) {
                rows.push(eq);
            }
        }
    }

    // Reduced row echelon form.
    let mut pivot_of_col = vec![None; vars];
    let mut r = 0;
    for col in 0..vars {
        let Some(p) = (r..rows.len()).find(|&i| rows[i][col]) else {
            continue;
        };
        rows.swap(r, p);
        let pivot = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && row[col] {
                for (x, &y) in row.iter_mut().zip(&pivot) {
                    *x ^= y;
                }
            }
        }
        pivot_of_col[col] = Some(r);
        r += 1;
    }
    rows.truncate(r);

    // A pivot variable depends only on free variables to its right, so
    // fixing free variables from the last qubit backwards determines each
    // qubit's four unknowns as soon as the search reaches it.
    let mut assignment = vec![false; vars];
    let mut found = vec![SymplecticLocal::from_bits([false; 4]); n];
    if search(n, &rows, &pivot_of_col, &mut assignment, &mut found) {
        Some(found)
    } else {
        None
    }
}

fn search(
    q: usize,
    rows: &[Vec<bool>],
    pivot_of_col: &[Option<usize>],
    assignment: &mut Vec<bool>,
    found: &mut Vec<SymplecticLocal>,
) -> bool {
    if q == 0 {
        return true;
    }
    let q = q - 1;
    let cols: Vec<usize> = (4 * q..4 * q + 4).collect();
    let free: Vec<usize> = cols
        .iter()
        .copied()
        .filter(|&c| pivot_of_col[c].is_none())
        .collect();
    for mask in 0u32..(1 << free.len()) {
        for (i, &c) in free.iter().enumerate() {
            assignment[c] = mask >> i & 1 == 1;
        }
        // Pivots in reverse so that any pivot to the right is already set.
        for &c in cols.iter().rev() {
            if let Some(r) = pivot_of_col[c] {
                let row = &rows[r];
                let mut v = false;
                for (j, &bit) in row.iter().enumerate().skip(c + 1) {
                    if bit {
                        v ^= assignment[j];
                    }
                }
                assignment[c] = v;
            }
        }
        let local = SymplecticLocal::from_bits([
            assignment[cols[0]],
            assignment[cols[1]],
            assignment[cols[2]],
            assignment[cols[3]],
        ]);
        if local.invertible() {
            found[q] = local;
            if search(q, rows, pivot_of_col, assignment, found) {
                return true;
            }
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    fn adj(n: usize, edges: &[(usize, usize)]) -> Vec<Vec<bool>> {
        let mut m = vec![vec![false; n]; n];
        for &(a, b) in edges {
            m[a][b] = true;
            m[b][a] = true;
        }
        m
    }

    /// Checks a claimed solution directly against the defining equation.
    fn satisfies(g1: &[Vec<bool>], g2: &[Vec<bool>], sol: &[SymplecticLocal]) -> bool {
        let n = g1.len();
        (0..n).all(|k| {
            (0..n).all(|m| {
                let lhs = (k == m && sol[k].c) ^ (g1[k][m] && sol[m].d);
                let mut rhs = false;
                for j in 0..n {
                    let x = (k == j && sol[k].a) ^ (g1[k][j] && sol[j].b);
                    rhs ^= x && g2[j][m];
                }
                lhs == rhs
            })
        }) && sol.iter().all(|s| s.invertible())
    }

    #[test]
    fn identity_is_found_for_equal_graphs() {
        let g = adj(4, &[(0, 1), (1, 2), (2, 3)]);
        let sol = local_clifford_solution(&g, &g).unwrap();
        assert!(satisfies(&g, &g, &sol));
    }

    #[test]
    fn triangle_and_path() {
        let p3 = adj(3, &[(0, 1), (1, 2)]);
        let k3 = adj(3, &[(0, 1), (1, 2), (0, 2)]);
        let sol = local_clifford_solution(&p3, &k3).unwrap();
        assert!(satisfies(&p3, &k3, &sol));
    }

    #[test]
    fn path_and_star_on_four_are_inequivalent() {
        let p4 = adj(4, &[(0, 1), (1, 2), (2, 3)]);
        let s4 = adj(4, &[(0, 1), (0, 2), (0, 3)]);
        assert!(local_clifford_solution(&p4, &s4).is_none());
    }

    #[test]
    fn component_structure_must_match() {
        let a = adj(3, &[(0, 1)]);
        let b = adj(3, &[(1, 2)]);
        assert!(local_clifford_solution(&a, &b).is_none());
        let empty = adj(5, &[]);
        assert!(local_clifford_solution(&empty, &empty).is_some());
    }
}
