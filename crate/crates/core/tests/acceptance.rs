//! Release acceptance run. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::Command;
use std::time::{Duration, Instant};

use latticeforge::graph_state::{local_complement, lc_equivalent, measure, minimize_cz};
use latticeforge::grid::{Metrics, TileRef};
use latticeforge::qasm::{collect_rotations, emit, parse_program, render_angle, write_script, QasmError};
use latticeforge::service::{resolve_endpoint, submit, Envelope, SubmitError, ENDPOINT_VAR};
use latticeforge::stabilizer::{StabilizerTableau, TableauError};
use latticeforge::{Axis, GraphState, MeasurementBasis, Sign, ThetaBinding, Tile, TileKind};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use common::{SmallGraph, all_graphs, connected_graphs, fixture, random_connected};

type Check = Result<String, String>;
type Criterion = fn() -> Check;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn within(limit: Duration, start: Instant) -> Result<(), String> {
    let took = start.elapsed();
    if took > limit {
        Err(format!("took {took:?}, limit {limit:?}"))
    } else {
        Ok(())
    }
}

fn fixture_metrics() -> Check {
    let start = Instant::now();
    let grid = common::demo_grid();
    let m = grid.metrics();
    within(Duration::from_secs(1), start)?;
    ensure!(grid.tiles().len() == 24, "{} tiles", grid.tiles().len());
    ensure!(grid.validate().is_empty(), "diagnostics {:?}", grid.validate());
    let want = Metrics {
        min_lattice: (8, 53),
        qubit_count: 275,
        t_count: 2,
    };
    ensure!(m == want, "got {m:?}");
    Ok(format!("min_lattice {:?}, t_count {}, Q {}", m.min_lattice, m.t_count, m.qubit_count))
}

/// Library rule versus tableau projection for one (graph, vertex, axis).
fn agrees(g: &GraphState, a: u32, axis: Axis) -> Result<(), String> {
    let (h, _) = measure(g, a, MeasurementBasis::plus(axis), None).map_err(|e| e.to_string())?;
    let t = StabilizerTableau::from_graph(g).map_err(|e| e.to_string())?;
    let projected = match t.project_label(a, axis, Sign::Plus) {
        Err(TableauError::BranchImpossible { .. }) => t.project_label(a, axis, Sign::Minus),
        other => other,
    }
    .map_err(|e| e.to_string())?;
    if h.is_empty() {
        return if projected.n() == 0 { Ok(()) } else { Err("sizes differ".into()) };
    }
    let ours = StabilizerTableau::from_graph(&h).map_err(|e| e.to_string())?;
    if ours.labels() != projected.labels() {
        return Err(format!("vertex sets differ: {:?} vs {:?}", ours.labels(), projected.labels()));
    }
    match ours.equal_up_to_local_clifford(&projected) {
        Ok(true) => Ok(()),
        Ok(false) => Err(format!("{axis:?} on {a} of {:?}: not LC-equivalent", g.edges().collect::<Vec<_>>())),
        Err(e) => Err(e.to_string()),
    }
}

fn check_all_measurements(graphs: &[SmallGraph]) -> Result<usize, String> {
    graphs
        .par_iter()
        .map(|sg| {
            let g = sg.to_state();
            let mut n = 0;
            for a in g.vertices() {
                for axis in Axis::ALL {
                    agrees(&g, a, axis)?;
                    n += 1;
                }
            }
            Ok(n)
        })
        .try_reduce(|| 0, |a, b| Ok(a + b))
}

fn oracle_equivalence() -> Check {
    let start = Instant::now();
    let mut classes = Vec::new();
    let mut counts = Vec::new();
    for n in 1..=7 {
        let c = connected_graphs(n);
        counts.push(c.len());
        classes.extend(c);
    }
    ensure!(counts == [1, 1, 2, 6, 21, 112, 853], "class counts {counts:?}");
    let exhaustive = check_all_measurements(&classes)?;
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0001);
    let random: Vec<SmallGraph> = (0..500)
        .map(|_| {
            let n = rng.gen_range(2..=10);
            random_connected(&mut rng, n)
        })
        .collect();
    let sampled = check_all_measurements(&random)?;
    within(Duration::from_secs(300), start)?;
    Ok(format!(
        "{} classes ({exhaustive} cases) + 500 random ({sampled} cases)",
        classes.len()
    ))
}

fn lc_properties() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0002);
    for i in 0..10_000 {
        let n = rng.gen_range(1..=12);
        let mut sg = SmallGraph::empty(n);
        let p: f64 = rng.gen();
        for a in 0..n {
            for b in (a + 1)..n {
                if rng.gen_bool(p) {
                    sg.toggle(a, b);
                }
            }
        }
        let g = sg.to_state();
        let a = rng.gen_range(0..n as u32);
        let once = local_complement(&g, a).map_err(|e| e.to_string())?;
        ensure!(once.vertices().eq(g.vertices()), "pair {i}: vertex set changed");
        let twice = local_complement(&once, a).map_err(|e| e.to_string())?;
        ensure!(twice == g, "pair {i}: not an involution at {a}");
    }

    let graphs: Vec<SmallGraph> = (1..=7).flat_map(connected_graphs).collect();
    let cases: usize = graphs
        .par_iter()
        .map(|sg| {
            let g = sg.to_state();
            let mut cases = 0;
            for a in g.vertices() {
                let nb: Vec<u32> = g.neighbors(a).unwrap().iter().copied().collect();
                let x = MeasurementBasis::plus(Axis::X);
                let results: Vec<GraphState> = nb.iter().map(|&b0| measure(&g, a, x, Some(b0)).unwrap().0).collect();
                for (b0, r) in nb.iter().zip(&results).skip(1) {
                    if !lc_equivalent(&results[0], r).map_err(|e| e.to_string())? {
                        return Err(format!("X on {a}: b0 {} and {b0} disagree", nb[0]));
                    }
                    cases += 1;
                }
            }
            Ok(cases)
        })
        .try_reduce(|| 0, |a, b| Ok(a + b))?;
    Ok(format!("10000 involutions, {cases} b0 pairs over {} graphs", graphs.len()))
}

fn cz_minimization() -> Check {
    let k4 = SmallGraph::from_edges(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).to_state();
    let m = minimize_cz(&k4, 1 << 16).map_err(|e| e.to_string())?;
    ensure!(m.graph.edge_count() == 3 && m.exhaustive, "K4 gave {} edges", m.graph.edge_count());

    let graphs: Vec<SmallGraph> = (1..=6).flat_map(all_graphs).collect();
    graphs.par_iter().try_for_each(|sg| {
        let orbit = common::lc_orbit(sg);
        let truth = orbit.iter().map(SmallGraph::edge_count).min().unwrap();
        let m = minimize_cz(&sg.to_state(), 1 << 16).map_err(|e| e.to_string())?;
        let mut found = SmallGraph::empty(sg.n());
        for (a, b) in m.graph.edges() {
            found.toggle(a as usize, b as usize);
        }
        if !m.exhaustive || m.graph.edge_count() != truth || !orbit.contains(&found) {
            return Err(format!(
                "{:?}: reported {} edges, orbit minimum {truth}",
                sg.adj,
                m.graph.edge_count()
            ));
        }
        let mut replay = sg.to_state();
        for &v in &m.sequence {
            replay = local_complement(&replay, v).unwrap();
        }
        if replay != m.graph {
            return Err(format!("{:?}: sequence does not reproduce the minimum", sg.adj));
        }
        Ok(())
    })?;
    Ok(format!("K4 -> 3 edges; {} graphs match orbit minima", graphs.len()))
}

fn lc_orbit_separation() -> Check {
    let p4 = SmallGraph::from_edges(4, &[(0, 1), (1, 2), (2, 3)]).to_state();
    let star = SmallGraph::from_edges(4, &[(0, 1), (0, 2), (0, 3)]).to_state();
    let p3 = SmallGraph::from_edges(3, &[(0, 1), (1, 2)]).to_state();
    let k3 = SmallGraph::from_edges(3, &[(0, 1), (1, 2), (0, 2)]).to_state();
    let tab = |g: &GraphState| StabilizerTableau::from_graph(g).unwrap();
    for (a, b, want) in [(&p4, &star, false), (&p3, &k3, true)] {
        let ours = lc_equivalent(a, b).map_err(|e| e.to_string())?;
        let oracle = tab(a).equal_up_to_local_clifford(&tab(b)).map_err(|e| e.to_string())?;
        ensure!(ours == want && oracle == want, "expected {want}, library {ours}, oracle {oracle}");
    }
    Ok("P4 !~ star4, P3 ~ K3, oracle agrees".into())
}

fn qasm_validity() -> Check {
    let start = Instant::now();
    ensure!(render_angle(std::f64::consts::FRAC_PI_2) == "pi/2", "pi/2 rendered as {}", render_angle(std::f64::consts::FRAC_PI_2));
    let rotz = latticeforge::grid::AlgorithmGrid::new("one")
        .place_tile(Tile::rotation(TileKind::RotZ, 0, 4, std::f64::consts::FRAC_PI_2))
        .unwrap();
    let text = emit(&rotz, &[]).map_err(|e| e.to_string())?.text;
    ensure!(text.contains("rz(pi/2) q[0];"), "emitted {text}");

    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0003);
    let mut cnots = 0;
    for i in 0..200 {
        let grid = common::random_grid(&mut rng, 40);
        let bindings: Vec<ThetaBinding> = collect_rotations(&grid)
            .into_iter()
            .map(|t: TileRef| ThetaBinding {
                kind: t.kind,
                coord: latticeforge::Coord::new(t.row, t.col),
                theta: rng.gen_range(-10.0..10.0),
            })
            .collect();
        let program = emit(&grid, &bindings).map_err(|e| format!("grid {i}: {e}"))?;
        let parsed = parse_program(&program.text).map_err(|e| format!("grid {i}: {e}\n{}", program.text))?;
        let cx = parsed.gates().filter(|(name, _, _)| *name == "cx").count();
        let tiles = grid.tiles().iter().filter(|t| t.kind == TileKind::Cnot).count();
        ensure!(cx == tiles, "grid {i}: {cx} cx for {tiles} CNOT tiles");
        cnots += tiles;
    }
    within(Duration::from_secs(10), start)?;
    Ok(format!("200 grids parse, {cnots} CNOTs matched, pi/2 renders as `pi/2`"))
}

fn golden_bindings() -> Vec<ThetaBinding> {
    ["rotz@2,14=pi/4", "rotz@0,48=pi/8", "rotz@2,48=-pi/2", "rotz@4,48=0.3", "rotz@5,48=3*pi/4"]
        .iter()
        .map(|s| s.parse().unwrap())
        .collect()
}

fn compile_gating() -> Check {
    let grid = common::demo_grid();
    match emit(&grid, &[]) {
        Err(QasmError::UnboundTheta(missing)) => {
            let coords: Vec<(u32, u32)> = missing.iter().map(|t| (t.row, t.col)).collect();
            ensure!(
                coords == [(0, 48), (2, 14), (2, 48), (4, 48), (5, 48)] && missing.iter().all(|t| t.kind == TileKind::RotZ),
                "missing {coords:?}"
            );
        }
        other => return Err(format!("expected unbound theta, got {other:?}")),
    }
    let golden = std::fs::read(fixture("demo_algorithm.qasm.txt")).map_err(|e| e.to_string())?;
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    for round in 0..2 {
        let program = emit(&grid, &golden_bindings()).map_err(|e| e.to_string())?;
        let out = dir.path().join(format!("run{round}.txt"));
        write_script(&program, &out).map_err(|e| e.to_string())?;
        ensure!(std::fs::read(&out).unwrap() == golden, "round {round} differs from golden file");
    }
    Ok("5 unbound rotations listed; bound output matches golden file".into())
}

fn submission() -> Check {
    use axum::{http::StatusCode, routing::post, Router};

    let rt = tokio::runtime::Runtime::new().map_err(|e| e.to_string())?;
    rt.block_on(async {
        let app = Router::new()
            .route("/ok", post(|body: String| async move { (StatusCode::OK, format!("queued {} bytes", body.len())) }))
            .route("/bad", post(|| async { (StatusCode::BAD_REQUEST, "malformed program") }));
        let listener = tokio::net::TcpListener::bind("127.0.0.1:0").await.unwrap();
        let base = format!("http://{}", listener.local_addr().unwrap());
        tokio::spawn(async move { axum::serve(listener, app).await.unwrap() });

        let text = "OPENQASM 3.0;\nqubit[1] q;\n";
        let ok = submit(text, &format!("{base}/ok"), Envelope::Plain).await.map_err(|e| e.to_string())?;
        ensure!(ok.status == 200 && ok.body == format!("queued {} bytes", text.len()) && ok.warning.is_none(), "{ok:?}");
        let bad = submit(text, &format!("{base}/bad"), Envelope::Plain).await.map_err(|e| e.to_string())?;
        ensure!(bad.status == 400 && bad.body == "malformed program" && bad.warning.is_some(), "{bad:?}");
        Ok::<_, String>(())
    })?;

    ensure!(resolve_endpoint(None, None) == Err(SubmitError::NotConfigured), "resolution without endpoint");
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let prog = dir.path().join("p.txt");
    std::fs::write(&prog, "OPENQASM 3.0;\n").unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_latticeforge"))
        .arg("submit")
        .arg(&prog)
        .env_remove(ENDPOINT_VAR)
        .output()
        .map_err(|e| e.to_string())?;
    let stderr = String::from_utf8_lossy(&out.stderr);
    ensure!(out.status.code() == Some(4) && stderr.contains("\"config\""), "exit {:?}: {stderr}", out.status.code());
    Ok("200 and 400 recorded verbatim; missing endpoint is a configuration error".into())
}

fn bounds() -> Check {
    ensure!(GraphState::create_grid(122, 5).is_err(), "create_grid(122, 5) accepted");
    ensure!(GraphState::create_grid(5, 122).is_err(), "create_grid(5, 122) accepted");
    ensure!(GraphState::create_grid(121, 121).is_ok(), "create_grid(121, 121) rejected");
    let empty = latticeforge::AlgorithmGrid::new("b");
    for kind in TileKind::ALL {
        for col in [121, 125, 130, 500] {
            let tile = if kind.is_rotation() { Tile::rotation(kind, 2, col, 0.1) } else { Tile::new(kind, 2, col) };
            ensure!(empty.place_tile(tile).is_err(), "{kind} at col {col} accepted");
        }
    }
    ensure!(empty.place_tile(Tile::new(TileKind::Wire, 2, 120)).is_ok(), "wire at col 120 rejected");
    Ok("122-row lattice and col >= 121 tiles rejected".into())
}

fn main() {
    let criteria: [(&str, Criterion); 9] = [
        ("fixture metrics", fixture_metrics),
        ("oracle equivalence", oracle_equivalence),
        ("local complementation properties", lc_properties),
        ("cz minimisation", cz_minimization),
        ("lc orbit separation", lc_orbit_separation),
        ("qasm validity", qasm_validity),
        ("compile gating", compile_gating),
        ("submission", submission),
        ("bounds", bounds),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panicked".into()))
        });
        let ms = start.elapsed().as_millis();
        match result {
            Ok(detail) => println!("PASS  {name:<34} {detail} ({ms} ms)"),
            Err(why) => {
                failed += 1;
                println!("FAIL  {name:<34} {why} ({ms} ms)");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
