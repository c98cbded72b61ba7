//! Command-line entry point.
//!
//! Exit codes: 0 success, 1 invalid input, 2 usage, 3 I/O, 4 network or
//! configuration. Failures print one JSON object on stderr.

use std::ffi::OsString;
use std::io::Write;
use std::net::SocketAddr;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::graph_state::{local_complement, measure, GraphState, MeasurementBasis, MeasurementRecord, VertexId};
use crate::grid::{ingest_circuit_json, AlgorithmGrid, GridError, Severity};
use crate::lattice::{open_algorithm, prepare, LatticeError};
use crate::qasm::{emit, write_script, QasmError, ThetaBinding};
use crate::service::{self, Envelope, ServiceConfig};

pub const EXIT_INVALID: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_IO: i32 = 3;
pub const EXIT_NETWORK: i32 = 4;

#[derive(Parser, Debug)]
#[command(name = "latticeforge", version, about = "Draft, lay out, reduce and compile cluster-state algorithms")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print a grid's diagnostics; exit 0 only if there are none.
    Validate { file: PathBuf },
    /// Print a grid's metrics as JSON.
    Metrics { file: PathBuf },
    /// Expand and prepare a grid, writing lattice JSON.
    Layout {
        file: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Replay a measurement / local-complementation script on a graph.
    Reduce {
        graph: PathBuf,
        #[arg(long)]
        script: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Where to write the per-step measurement records.
        #[arg(long)]
        log: Option<PathBuf>,
    },
    /// Emit OpenQASM 3.0 for a grid.
    Compile {
        file: PathBuf,
        /// Angle binding, `kind@row,col=value`; repeatable.
        #[arg(long = "theta", value_name = "BINDING")]
        thetas: Vec<String>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// POST a compiled program to a remote endpoint.
    Submit {
        file: PathBuf,
        #[arg(long)]
        endpoint: Option<String>,
        /// Send `{"qasm": ...}` as JSON instead of plain text.
        #[arg(long)]
        json_envelope: bool,
    },
    /// Run the HTTP session service.
    Serve {
        #[arg(long, default_value_t = 8080)]
        port: u16,
        #[arg(long, default_value = "127.0.0.1")]
        host: String,
        /// Default submission endpoint for the service.
        #[arg(long)]
        endpoint: Option<String>,
        #[arg(long)]
        json_envelope: bool,
    },
    /// Lay out a gate-list circuit as a grid.
    Ingest {
        circuit: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

/// One step of a reduction script.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "kebab-case", deny_unknown_fields)]
pub enum ReductionStep {
    Measure {
        vertex: VertexId,
        basis: MeasurementBasis,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        b0: Option<VertexId>,
    },
    Lc {
        vertex: VertexId,
    },
}

#[derive(Debug, Clone, Serialize)]
struct StepLog {
    step: usize,
    #[serde(flatten)]
    op: ReductionStep,
    #[serde(skip_serializing_if = "Option::is_none")]
    record: Option<MeasurementRecord>,
}

#[derive(Debug)]
struct Failure {
    code: i32,
    body: Value,
}

impl Failure {
    fn new(code: i32, kind: &str, message: impl std::fmt::Display) -> Self {
        Self {
            code,
            body: json!({ "error": kind, "message": message.to_string() }),
        }
    }

    fn with(mut self, key: &str, value: impl Serialize) -> Self {
        self.body[key] = serde_json::to_value(value).expect("plain data serialises");
        self
    }
}

type Outcome = Result<i32, Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::new(EXIT_IO, "io", format!("{}: {e}", path.display())))
}

fn write_output(path: Option<&Path>, text: &str, stdout: &mut dyn Write) -> Result<(), Failure> {
    let io = |e: std::io::Error, what: &str| Failure::new(EXIT_IO, "io", format!("{what}: {e}"));
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| io(e, &p.display().to_string())),
        None => writeln!(stdout, "{text}").map_err(|e| io(e, "stdout")),
    }
}

fn load_grid(path: &Path) -> Result<AlgorithmGrid, Failure> {
    AlgorithmGrid::from_json(&read(path)?).map_err(grid_failure)
}

fn grid_failure(e: GridError) -> Failure {
    match e {
        GridError::Parse { ref path, .. } => {
            let p = path.clone();
            Failure::new(EXIT_INVALID, "parse", e).with("path", p)
        }
        other => Failure::new(EXIT_INVALID, "invalid", other),
    }
}

fn require_valid(grid: &AlgorithmGrid) -> Result<(), Failure> {
    let errors: Vec<_> = grid
        .validate()
        .into_iter()
        .filter(|d| d.severity == Severity::Error)
        .collect();
    if errors.is_empty() {
        Ok(())
    } else {
        Err(Failure::new(EXIT_INVALID, "invalid-grid", "grid violates its invariants").with("diagnostics", errors))
    }
}

fn parse_json<T: serde::de::DeserializeOwned>(text: &str, what: &Path) -> Result<T, Failure> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        Failure::new(EXIT_INVALID, "parse", format!("{}: {}", what.display(), e.inner())).with("path", e.path().to_string())
    })
}

fn runtime() -> Result<tokio::runtime::Runtime, Failure> {
    tokio::runtime::Builder::new_multi_thread()
        .enable_all()
        .build()
        .map_err(|e| Failure::new(EXIT_IO, "runtime", e))
}

fn pretty(v: &impl Serialize) -> String {
    serde_json::to_string_pretty(v).expect("plain data serialises")
}

fn execute(cmd: Command, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Outcome {
    match cmd {
        Command::Validate { file } => {
            let d = load_grid(&file)?.validate();
            write_output(None, &pretty(&d), stdout)?;
            Ok(if d.is_empty() { 0 } else { EXIT_INVALID })
        }
        Command::Metrics { file } => {
            let g = load_grid(&file)?;
            require_valid(&g)?;
            write_output(None, &serde_json::to_string(&g.metrics()).unwrap(), stdout)?;
            Ok(0)
        }
        Command::Layout { file, output } => {
            let g = load_grid(&file)?;
            let lattice = open_algorithm(&g).map_err(|e| match e {
                LatticeError::Invalid(d) => {
                    Failure::new(EXIT_INVALID, "invalid-grid", "grid violates its invariants").with("diagnostics", d)
                }
                other => Failure::new(EXIT_INVALID, "layout", other),
            })?;
            write_output(output.as_deref(), &prepare(&lattice).to_json(), stdout)?;
            Ok(0)
        }
        Command::Reduce {
            graph,
            script,
            output,
            log,
        } => {
            let mut g: GraphState = parse_json(&read(&graph)?, &graph)?;
            let steps: Vec<ReductionStep> = parse_json(&read(&script)?, &script)?;
            let mut records = Vec::with_capacity(steps.len());
            for (i, step) in steps.into_iter().enumerate() {
                let fail = |e: crate::graph_state::GraphError| {
                    Failure::new(EXIT_INVALID, "reduce", e).with("step", i)
                };
                let record = match step {
                    ReductionStep::Measure { vertex, basis, b0 } => {
                        let (next, rec) = measure(&g, vertex, basis, b0).map_err(fail)?;
                        g = next;
                        Some(rec)
                    }
                    ReductionStep::Lc { vertex } => {
                        g = local_complement(&g, vertex).map_err(fail)?;
                        None
                    }
                };
                records.push(StepLog { step: i, op: step, record });
            }
            write_output(output.as_deref(), &pretty(&g), stdout)?;
            if let Some(path) = log {
                write_output(Some(&path), &pretty(&records), stdout)?;
            }
            Ok(0)
        }
        Command::Compile { file, thetas, output } => {
            let g = load_grid(&file)?;
            let bindings = thetas
                .iter()
                .map(|s| s.parse::<ThetaBinding>())
                .collect::<Result<Vec<_>, _>>()
                .map_err(|m| Failure::new(EXIT_USAGE, "usage", m))?;
            let program = emit(&g, &bindings).map_err(|e| {
                let message = e.to_string();
                match e {
                    QasmError::UnboundTheta(missing) => {
                        Failure::new(EXIT_INVALID, "unbound-theta", message).with("missing", missing)
                    }
                    QasmError::UnknownTarget(t) => {
                        Failure::new(EXIT_INVALID, "unknown-target", message).with("targets", t)
                    }
                    QasmError::InvalidGrid(d) => Failure::new(EXIT_INVALID, "invalid-grid", message).with("diagnostics", d),
                    QasmError::Io { .. } => Failure::new(EXIT_IO, "io", message),
                    _ => Failure::new(EXIT_INVALID, "compile", message),
                }
            })?;
            match output {
                Some(path) => write_script(&program, &path).map_err(|e| Failure::new(EXIT_IO, "io", e))?,
                None => write!(stdout, "{}", program.text).map_err(|e| Failure::new(EXIT_IO, "io", e))?,
            }
            Ok(0)
        }
        Command::Submit {
            file,
            endpoint,
            json_envelope,
        } => {
            let text = read(&file)?;
            let url = service::endpoint_from_env(endpoint.as_deref())
                .map_err(|e| Failure::new(EXIT_NETWORK, "config", e))?;
            let envelope = if json_envelope { Envelope::Json } else { Envelope::Plain };
            let result = runtime()?
                .block_on(service::submit(&text, &url, envelope))
                .map_err(|e| match e {
                    service::SubmitError::EmptyProgram => Failure::new(EXIT_INVALID, "empty", e),
                    other => Failure::new(EXIT_NETWORK, "network", other),
                })?;
            if let Some(w) = &result.warning {
                let _ = writeln!(stderr, "{}", json!({ "warning": w }));
            }
            write_output(None, &pretty(&result), stdout)?;
            Ok(0)
        }
        Command::Serve {
            port,
            host,
            endpoint,
            json_envelope,
        } => {
            let addr: SocketAddr = format!("{host}:{port}")
                .parse()
                .map_err(|e| Failure::new(EXIT_USAGE, "usage", format!("bad address: {e}")))?;
            let config = ServiceConfig {
                endpoint,
                envelope: if json_envelope { Envelope::Json } else { Envelope::Plain },
            };
            runtime()?.block_on(async move {
                let listener = tokio::net::TcpListener::bind(addr)
                    .await
                    .map_err(|e| Failure::new(EXIT_NETWORK, "bind", format!("{addr}: {e}")))?;
                let _ = writeln!(stderr, "{}", json!({ "listening": addr.to_string() }));
                service::serve(listener, config)
                    .await
                    .map_err(|e| Failure::new(EXIT_NETWORK, "serve", e))
            })?;
            Ok(0)
        }
        Command::Ingest { circuit, output } => {
            let g = ingest_circuit_json(&read(&circuit)?).map_err(grid_failure)?;
            write_output(output.as_deref(), &g.to_json(), stdout)?;
            Ok(0)
        }
    }
}

/// Runs the command line and returns the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(stdout, "{e}");
                return 0;
            }
            let _ = writeln!(stderr, "{}", json!({ "error": "usage", "message": e.to_string() }));
            return EXIT_USAGE;
        }
    };
    match execute(cli.command, stdout, stderr) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(stderr, "{}", f.body);
            f.code
        }
    }
}
