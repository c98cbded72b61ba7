//! OpenQASM 3.0 emission of the gate-level algorithm behind a grid.
//!
//! Every logical row becomes one declared qubit, in ascending row order.
//! Gates follow the tiles in `(col, row)` order of their anchors.

mod angle;
mod parser;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::{self, Write as _};
use std::io::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::grid::{normalize_theta, AlgorithmGrid, Diagnostic, Severity, TileKind, TileRef};
use crate::Coord;

pub use angle::{parse_angle, render_angle};
pub use parser::{parse_program, ParseError, Program, Statement};

pub const HEADER: &str = "OPENQASM 3.0;\ninclude \"stdgates.inc\";\n";

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QasmError {
    #[error("unbound theta for {}", list(.0))]
    UnboundTheta(Vec<TileRef>),
    #[error("no rotation tile for binding(s) {}", list(.0))]
    UnknownTarget(Vec<TileRef>),
    #[error("{0} is bound more than once")]
    DuplicateBinding(TileRef),
    #[error("theta for {0} is not finite")]
    InvalidTheta(TileRef),
    #[error("grid is invalid ({} diagnostics)", .0.len())]
    InvalidGrid(Vec<Diagnostic>),
    #[error("cannot write {path}: {message}")]
    Io { path: String, message: String },
}

fn list(refs: &[TileRef]) -> String {
    refs.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ")
}

/// An angle for one rotation tile.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThetaBinding {
    pub kind: TileKind,
    #[serde(flatten)]
    pub coord: Coord,
    pub theta: f64,
}

impl ThetaBinding {
    pub fn target(&self) -> TileRef {
        TileRef {
            kind: self.kind,
            row: self.coord.row,
            col: self.coord.col,
        }
    }
}

/// `kind@row,col=value`, e.g. `rotz@2,14=pi/2`.
impl std::str::FromStr for ThetaBinding {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || format!("expected kind@row,col=value, got {s:?}");
        let (kind, rest) = s.split_once('@').ok_or_else(bad)?;
        let (coord, value) = rest.split_once('=').ok_or_else(bad)?;
        let (row, col) = coord.split_once(',').ok_or_else(bad)?;
        let kind: TileKind = kind.trim().parse()?;
        if !kind.is_rotation() {
            return Err(format!("{kind} tiles take no theta"));
        }
        Ok(Self {
            kind,
            coord: Coord::new(
                row.trim().parse().map_err(|_| bad())?,
                col.trim().parse().map_err(|_| bad())?,
            ),
            theta: parse_angle(value).ok_or_else(|| format!("bad angle {value:?}"))?,
        })
    }
}

impl fmt::Display for ThetaBinding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}@{},{}={}", self.kind, self.coord.row, self.coord.col, self.theta)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QasmProgram {
    pub text: String,
    pub qubit_count: usize,
    pub bindings: Vec<ThetaBinding>,
}

/// Rotation tiles still waiting for an angle, in `(row, col)` order.
pub fn collect_rotations(grid: &AlgorithmGrid) -> Vec<TileRef> {
    grid.tiles()
        .iter()
        .filter(|t| t.kind.is_rotation() && t.theta.is_none())
        .map(|t| t.id())
        .collect()
}

/// Applies bindings to a copy of the grid. A binding may also replace an
/// angle that is already set.
pub fn bind(grid: &AlgorithmGrid, bindings: &[ThetaBinding]) -> Result<AlgorithmGrid, QasmError> {
    let mut out = grid.clone();
    let mut seen = BTreeSet::new();
    let mut unknown = Vec::new();
    for b in bindings {
        let target = b.target();
        if !b.theta.is_finite() {
            return Err(QasmError::InvalidTheta(target));
        }
        if !seen.insert(target) {
            return Err(QasmError::DuplicateBinding(target));
        }
        match out.tile_at_mut(b.kind, b.coord) {
            Some(t) if t.kind.is_rotation() => t.theta = Some(b.theta),
            _ => unknown.push(target),
        }
    }
    if !unknown.is_empty() {
        return Err(QasmError::UnknownTarget(unknown));
    }
    Ok(out)
}

pub fn emit(grid: &AlgorithmGrid, bindings: &[ThetaBinding]) -> Result<QasmProgram, QasmError> {
    let errors: Vec<Diagnostic> = grid
        .validate()
        .into_iter()
        .filter(|d| d.severity == Severity::Error)
        .collect();
    if !errors.is_empty() {
        return Err(QasmError::InvalidGrid(errors));
    }
    let bound = bind(grid, bindings)?;
    let missing = collect_rotations(&bound);
    if !missing.is_empty() {
        return Err(QasmError::UnboundTheta(missing));
    }

    let rows: BTreeMap<u32, usize> = bound
        .row_spans()
        .into_keys()
        .enumerate()
        .map(|(i, r)| (r, i))
        .collect();
    let n = rows.len();
    let mut text = String::from(HEADER);
    if n > 0 {
        writeln!(text, "qubit[{n}] q;\nbit[{n}] c;").unwrap();
    }

    let mut tiles: Vec<_> = bound.tiles().iter().collect();
    tiles.sort_by_key(|t| (t.anchor.col, t.anchor.row));
    for t in tiles {
        let q = rows[&t.anchor.row];
        match t.kind {
            TileKind::Hadamard => writeln!(text, "h q[{q}];"),
            TileKind::S => writeln!(text, "s q[{q}];"),
            TileKind::T => writeln!(text, "t q[{q}];"),
            TileKind::RotX | TileKind::RotY | TileKind::RotZ => {
                let name = match t.kind {
                    TileKind::RotX => "rx",
                    TileKind::RotY => "ry",
                    _ => "rz",
                };
                let theta = normalize_theta(t.theta.expect("bound above"));
                writeln!(text, "{name}({}) q[{q}];", render_angle(theta))
            }
            TileKind::Cnot => {
                let control = rows[&(t.anchor.row - 2)];
                writeln!(text, "cx q[{control}], q[{q}];")
            }
            TileKind::Wire | TileKind::Input | TileKind::Readout => Ok(()),
        }
        .unwrap();
    }
    if n > 0 {
        text.push_str("c = measure q;\n");
    }

    let mut used: Vec<ThetaBinding> = bindings.to_vec();
    used.sort_by_key(|b| (b.coord, b.kind));
    Ok(QasmProgram {
        text,
        qubit_count: n,
        bindings: used,
    })
}

/// Writes the program text, replacing any existing file atomically.
pub fn write_script(p: &QasmProgram, path: &Path) -> Result<(), QasmError> {
    let io = |e: std::io::Error| QasmError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    };
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io)?;
    tmp.write_all(p.text.as_bytes()).map_err(io)?;
    if !p.text.ends_with('\n') {
        tmp.write_all(b"\n").map_err(io)?;
    }
    tmp.as_file().sync_all().map_err(io)?;
    tmp.persist(path).map_err(|e| io(e.error))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::Tile;
    use std::f64::consts::PI;

    fn demo() -> AlgorithmGrid {
        crate::grid::tests::demo_grid()
    }

    fn rotz(row: u32, col: u32, theta: f64) -> ThetaBinding {
        ThetaBinding {
            kind: TileKind::RotZ,
            coord: Coord::new(row, col),
            theta,
        }
    }

    #[test]
    fn demo_rotations() {
        let want: Vec<_> = [(2, 14), (0, 48), (2, 48), (4, 48), (5, 48)]
            .into_iter()
            .map(|(row, col)| TileRef {
                kind: TileKind::RotZ,
                row,
                col,
            })
            .collect();
        let mut got = collect_rotations(&demo());
        got.sort_by_key(|r| (r.col, r.row));
        assert_eq!(got, want);
        assert!(collect_rotations(&AlgorithmGrid::default()).is_empty());
        let bound = AlgorithmGrid::from_tiles("", [Tile::rotation(TileKind::RotX, 0, 4, 1.0)]);
        assert!(collect_rotations(&bound).is_empty());
    }

    #[test]
    fn single_hadamard() {
        let g = AlgorithmGrid::from_tiles("", [Tile::new(TileKind::Hadamard, 0, 4)]);
        let p = emit(&g, &[]).unwrap();
        assert_eq!(
            p.text,
            "OPENQASM 3.0;\ninclude \"stdgates.inc\";\nqubit[1] q;\nbit[1] c;\nh q[0];\nc = measure q;\n"
        );
        assert_eq!(p.qubit_count, 1);
        parse_program(&p.text).unwrap();
    }

    #[test]
    fn empty_grid_is_header_only() {
        let p = emit(&AlgorithmGrid::default(), &[]).unwrap();
        assert_eq!(p.text, HEADER);
        assert_eq!(parse_program(&p.text).unwrap().statements, vec![]);
    }

    #[test]
    fn bound_rotation_is_symbolic() {
        let g = AlgorithmGrid::from_tiles("", [Tile::new(TileKind::RotZ, 0, 4)]);
        let p = emit(&g, &[rotz(0, 4, PI / 2.0)]).unwrap();
        assert!(p.text.contains("rz(pi/2) q[0];\n"));
        let prog = parse_program(&p.text).unwrap();
        assert_eq!(prog.gates().next().unwrap().1, Some(PI / 2.0));
        // Out of range angles are folded back.
        let p = emit(&g, &[rotz(0, 4, 5.0 * PI)]).unwrap();
        assert!(p.text.contains("rz(pi) q[0];\n"), "{}", p.text);
    }

    #[test]
    fn binding_errors() {
        let g = demo();
        match emit(&g, &[]) {
            Err(QasmError::UnboundTheta(v)) => assert_eq!(v.len(), 5),
            other => panic!("{other:?}"),
        }
        let mut all: Vec<_> = collect_rotations(&g)
            .into_iter()
            .map(|r| rotz(r.row, r.col, 0.25))
            .collect();
        all.push(rotz(3, 30, 1.0));
        assert_eq!(
            emit(&g, &all),
            Err(QasmError::UnknownTarget(vec![TileRef {
                kind: TileKind::RotZ,
                row: 3,
                col: 30
            }]))
        );
        all.pop();
        all.push(all[0]);
        assert!(matches!(emit(&g, &all), Err(QasmError::DuplicateBinding(_))));
        all.pop();
        all[0].theta = f64::NAN;
        assert!(matches!(emit(&g, &all), Err(QasmError::InvalidTheta(_))));
        // Binding the wrong kind at a rotation's anchor is an unknown target.
        let wrong = ThetaBinding {
            kind: TileKind::RotX,
            ..rotz(2, 14, 1.0)
        };
        assert!(matches!(emit(&g, &[wrong]), Err(QasmError::UnknownTarget(_))));
    }

    #[test]
    fn demo_program_shape() {
        let g = demo();
        let bindings: Vec<_> = collect_rotations(&g)
            .into_iter()
            .map(|r| rotz(r.row, r.col, PI / 4.0))
            .collect();
        let p = emit(&g, &bindings).unwrap();
        assert_eq!(p.qubit_count, 5);
        let prog = parse_program(&p.text).unwrap();
        let gates: Vec<_> = prog.gates().collect();
        assert_eq!(gates.len(), 24);
        assert_eq!(gates.iter().filter(|g| g.0 == "cx").count(), 5);
        assert_eq!(gates.iter().filter(|g| g.0 == "t").count(), 2);
        // CNOT at (2, 10): control row 0, target row 2.
        assert!(p.text.contains("cx q[0], q[1];"));
        // CNOT at (7, 10): control row 5 (q3), target row 7 (q4).
        assert!(p.text.contains("cx q[3], q[4];"));
        assert_eq!(emit(&g, &bindings).unwrap().text, p.text);
    }

    #[test]
    fn binding_strings() {
        let b: ThetaBinding = "rotz@2,14=pi/2".parse().unwrap();
        assert_eq!(b, rotz(2, 14, PI / 2.0));
        let b: ThetaBinding = "RotX@ 0,4 = -0.5".parse().unwrap();
        assert_eq!(b.kind, TileKind::RotX);
        assert_eq!(b.theta, -0.5);
        assert!("hadamard@0,4=1".parse::<ThetaBinding>().is_err());
        assert!("rotz@0=1".parse::<ThetaBinding>().is_err());
        assert!("rotz@0,4=abc".parse::<ThetaBinding>().is_err());
        let json = serde_json::to_string(&rotz(2, 14, 0.5)).unwrap();
        assert_eq!(json, r#"{"kind":"rotz","row":2,"col":14,"theta":0.5}"#);
    }

    #[test]
    fn write_and_read_back() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("out.txt");
        let g = AlgorithmGrid::from_tiles("", [Tile::new(TileKind::S, 0, 4)]);
        let p = emit(&g, &[]).unwrap();
        std::fs::write(&path, "stale contents that are longer than the program").unwrap();
        write_script(&p, &path).unwrap();
        assert_eq!(std::fs::read_to_string(&path).unwrap(), p.text);
        let missing = dir.path().join("no/such/dir/out.txt");
        assert!(matches!(write_script(&p, &missing), Err(QasmError::Io { .. })));
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(64))]

            #[test]
            fn emitted_programs_parse(g in crate::grid::tests::arb_grid(), theta in -20.0f64..20.0) {
                let bindings: Vec<_> = collect_rotations(&g)
                    .into_iter()
                    .map(|r| ThetaBinding { kind: r.kind, coord: Coord::new(r.row, r.col), theta })
                    .collect();
                let p = emit(&g, &bindings).unwrap();
                let prog = parse_program(&p.text).unwrap();
                let rows: Vec<u32> = g.row_spans().into_keys().collect();
                prop_assert_eq!(prog.registers.get("q").map(|r| r.1 as usize).unwrap_or(0), rows.len());

                let gates: Vec<_> = prog.gates().collect();
                let cnots = g.tiles().iter().filter(|t| t.kind == TileKind::Cnot).count();
                prop_assert_eq!(gates.iter().filter(|g| g.0 == "cx").count(), cnots);
                for (i, row) in rows.iter().enumerate() {
                    let tiles = g.tiles().iter().filter(|t| t.anchor.row == *row && t.kind.is_pattern() && t.kind != TileKind::Cnot).count();
                    let single = gates.iter().filter(|g| g.2.len() == 1 && g.2[0] as usize == i).count();
                    prop_assert_eq!(single, tiles);
                }

                // Binding and pre-binding agree.
                let pre = bind(&g, &bindings).unwrap();
                prop_assert_eq!(emit(&pre, &[]).unwrap().text, p.text);
            }
        }
    }
}
