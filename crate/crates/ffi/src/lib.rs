//! C interface to latticeforge.
//!
//! Values cross the boundary as opaque handles or JSON strings. Every call
//! returns an [`LfStatus`]; on failure [`lf_last_error`] describes it.
//! Strings handed out by the library are released with [`lf_string_free`],
//! handles with their matching `*_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, UnwindSafe};
use std::ptr;

use latticeforge::graph_state::{self, GraphError};
use latticeforge::grid::GridError;
use latticeforge::lattice::{self, LatticeError};
use latticeforge::qasm::{self, QasmError};
use latticeforge::{AlgorithmGrid, GraphState, Lattice, MeasurementBasis, ThetaBinding};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LfStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    Invalid = 4,
    NotFound = 5,
    UnboundTheta = 6,
    Io = 7,
    Panic = 8,
}

pub struct LfGrid(AlgorithmGrid);
pub struct LfGraph(GraphState);
pub struct LfLattice(Lattice);

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct LfMetrics {
    pub rows: u32,
    pub max_col: u32,
    pub qubit_count: usize,
    pub t_count: usize,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

struct Failure(LfStatus, String);

type Res<T> = Result<T, Failure>;

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn guard(f: impl FnOnce() -> Res<()> + UnwindSafe) -> LfStatus {
    match catch_unwind(f) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            LfStatus::Ok
        }
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            LfStatus::Panic
        }
    }
}

fn null(what: &str) -> Failure {
    Failure(LfStatus::NullArgument, format!("{what} is null"))
}

unsafe fn text<'a>(p: *const c_char, what: &str) -> Res<&'a str> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|e| Failure(LfStatus::InvalidUtf8, format!("{what}: {e}")))
}

unsafe fn handle<'a, T>(p: *const T, what: &str) -> Res<&'a T> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn put<T>(out: *mut T, value: T) -> Res<()> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    out.write(value);
    Ok(())
}

unsafe fn put_string(out: *mut *mut c_char, s: String) -> Res<()> {
    let c = CString::new(s).map_err(|e| Failure(LfStatus::Invalid, e.to_string()))?;
    put(out, c.into_raw())
}

fn boxed<T>(v: T) -> *mut T {
    Box::into_raw(Box::new(v))
}

fn grid_err(e: GridError) -> Failure {
    match e {
        GridError::Parse { .. } | GridError::Version { .. } => Failure(LfStatus::Parse, e.to_string()),
        other => Failure(LfStatus::Invalid, other.to_string()),
    }
}

fn graph_err(e: GraphError) -> Failure {
    match e {
        GraphError::VertexNotFound(_) => Failure(LfStatus::NotFound, e.to_string()),
        other => Failure(LfStatus::Invalid, other.to_string()),
    }
}

fn json_err(e: serde_json::Error) -> Failure {
    Failure(LfStatus::Parse, e.to_string())
}

/// Message for the last failed call on this thread, or null. Owned by the
/// library and valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn lf_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn lf_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// # Safety
/// `s` must come from this library and not have been freed. Null is a no-op.
#[no_mangle]
pub unsafe extern "C" fn lf_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

// Grids

/// Parses algorithm JSON into a new grid.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn lf_grid_from_json(json: *const c_char, out: *mut *mut LfGrid) -> LfStatus {
    guard(|| {
        let g = AlgorithmGrid::from_json(text(json, "json")?).map_err(grid_err)?;
        put(out, boxed(LfGrid(g)))
    })
}

/// # Safety
/// `grid` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn lf_grid_to_json(grid: *const LfGrid, out: *mut *mut c_char) -> LfStatus {
    guard(|| put_string(out, handle(grid, "grid")?.0.to_json()))
}

/// Diagnostics as a JSON array; empty means the grid is valid.
///
/// # Safety
/// `grid` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn lf_grid_diagnostics(grid: *const LfGrid, out: *mut *mut c_char) -> LfStatus {
    guard(|| {
        let d = handle(grid, "grid")?.0.validate();
        put_string(out, serde_json::to_string(&d).map_err(json_err)?)
    })
}

/// # Safety
/// `grid` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn lf_grid_metrics(grid: *const LfGrid, out: *mut LfMetrics) -> LfStatus {
    guard(|| {
        let m = handle(grid, "grid")?.0.metrics();
        put(
            out,
            LfMetrics {
                rows: m.min_lattice.0,
                max_col: m.min_lattice.1,
                qubit_count: m.qubit_count,
                t_count: m.t_count,
            },
        )
    })
}

/// Emits OpenQASM 3.0. `bindings_json` is a JSON array of
/// `{"kind","row","col","theta"}` objects, or null for none.
///
/// # Safety
/// `grid` must be a live handle; `bindings_json` null or NUL-terminated;
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn lf_compile(
    grid: *const LfGrid,
    bindings_json: *const c_char,
    out: *mut *mut c_char,
) -> LfStatus {
    guard(|| {
        let g = handle(grid, "grid")?;
        let bindings: Vec<ThetaBinding> = if bindings_json.is_null() {
            Vec::new()
        } else {
            serde_json::from_str(text(bindings_json, "bindings_json")?).map_err(json_err)?
        };
        let p = qasm::emit(&g.0, &bindings).map_err(|e| match e {
            QasmError::UnboundTheta(_) => Failure(LfStatus::UnboundTheta, e.to_string()),
            QasmError::Io { .. } => Failure(LfStatus::Io, e.to_string()),
            other => Failure(LfStatus::Invalid, other.to_string()),
        })?;
        put_string(out, p.text)
    })
}

/// # Safety
/// `grid` must come from this library and not have been freed. Null is a no-op.
#[no_mangle]
pub unsafe extern "C" fn lf_grid_free(grid: *mut LfGrid) {
    if !grid.is_null() {
        drop(Box::from_raw(grid));
    }
}

// Lattices

/// Expands and prepares a valid grid.
///
/// # Safety
/// `grid` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn lf_layout(grid: *const LfGrid, out: *mut *mut LfLattice) -> LfStatus {
    guard(|| {
        let opened = lattice::open_algorithm(&handle(grid, "grid")?.0).map_err(|e| match e {
            LatticeError::Invalid(d) => Failure(
                LfStatus::Invalid,
                serde_json::to_string(&d).unwrap_or_else(|_| "invalid grid".into()),
            ),
            other => Failure(LfStatus::Invalid, other.to_string()),
        })?;
        put(out, boxed(LfLattice(lattice::prepare(&opened))))
    })
}

/// # Safety
/// `lattice` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn lf_lattice_to_json(lattice: *const LfLattice, out: *mut *mut c_char) -> LfStatus {
    guard(|| put_string(out, handle(lattice, "lattice")?.0.to_json()))
}

/// Copies the lattice's graph into a new handle.
///
/// # Safety
/// `lattice` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn lf_lattice_graph(lattice: *const LfLattice, out: *mut *mut LfGraph) -> LfStatus {
    guard(|| put(out, boxed(LfGraph(lattice::to_graph_state(&handle(lattice, "lattice")?.0)))))
}

/// # Safety
/// `lattice` must come from this library and not have been freed. Null is a no-op.
#[no_mangle]
pub unsafe extern "C" fn lf_lattice_free(lattice: *mut LfLattice) {
    if !lattice.is_null() {
        drop(Box::from_raw(lattice));
    }
}

// Graphs

/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn lf_graph_from_json(json: *const c_char, out: *mut *mut LfGraph) -> LfStatus {
    guard(|| {
        let g: GraphState = serde_json::from_str(text(json, "json")?).map_err(json_err)?;
        put(out, boxed(LfGraph(g)))
    })
}

/// # Safety
/// `graph` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn lf_graph_to_json(graph: *const LfGraph, out: *mut *mut c_char) -> LfStatus {
    guard(|| put_string(out, serde_json::to_string(&handle(graph, "graph")?.0).map_err(json_err)?))
}

/// # Safety
/// `graph` must be a live handle; the outputs must be writable.
#[no_mangle]
pub unsafe extern "C" fn lf_graph_size(graph: *const LfGraph, vertices: *mut usize, edges: *mut usize) -> LfStatus {
    guard(|| {
        let g = &handle(graph, "graph")?.0;
        put(vertices, g.vertex_count())?;
        put(edges, g.edge_count())
    })
}

/// Pauli measurement of `vertex`. `basis` is `X`, `Y`, `Z`, optionally
/// signed (`-X`). A negative `b0` picks the default neighbour for `X`.
///
/// # Safety
/// `graph` must be a live handle; `basis` NUL-terminated; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn lf_graph_measure(
    graph: *const LfGraph,
    vertex: u32,
    basis: *const c_char,
    b0: i64,
    out: *mut *mut LfGraph,
) -> LfStatus {
    guard(|| {
        let g = handle(graph, "graph")?;
        let basis: MeasurementBasis = text(basis, "basis")?
            .parse()
            .map_err(|e: String| Failure(LfStatus::Parse, e))?;
        let b0 = u32::try_from(b0).ok();
        let (next, _) = graph_state::measure(&g.0, vertex, basis, b0).map_err(graph_err)?;
        put(out, boxed(LfGraph(next)))
    })
}

/// # Safety
/// `graph` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn lf_graph_local_complement(
    graph: *const LfGraph,
    vertex: u32,
    out: *mut *mut LfGraph,
) -> LfStatus {
    guard(|| {
        let next = graph_state::local_complement(&handle(graph, "graph")?.0, vertex).map_err(graph_err)?;
        put(out, boxed(LfGraph(next)))
    })
}

/// Fewest-edge member of the local-complementation orbit found within
/// `budget` graphs. `exhaustive` reports whether the whole orbit was seen.
///
/// # Safety
/// `graph` must be a live handle; the outputs must be writable.
#[no_mangle]
pub unsafe extern "C" fn lf_graph_minimize_cz(
    graph: *const LfGraph,
    budget: usize,
    out: *mut *mut LfGraph,
    exhaustive: *mut bool,
) -> LfStatus {
    guard(|| {
        let m = graph_state::minimize_cz(&handle(graph, "graph")?.0, budget).map_err(graph_err)?;
        put(exhaustive, m.exhaustive)?;
        put(out, boxed(LfGraph(m.graph)))
    })
}

/// # Safety
/// `a` and `b` must be live handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn lf_graph_lc_equivalent(a: *const LfGraph, b: *const LfGraph, out: *mut bool) -> LfStatus {
    guard(|| {
        let eq = graph_state::lc_equivalent(&handle(a, "a")?.0, &handle(b, "b")?.0).map_err(graph_err)?;
        put(out, eq)
    })
}

/// # Safety
/// `graph` must come from this library and not have been freed. Null is a no-op.
#[no_mangle]
pub unsafe extern "C" fn lf_graph_free(graph: *mut LfGraph) {
    if !graph.is_null() {
        drop(Box::from_raw(graph));
    }
}
