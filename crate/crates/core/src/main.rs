use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::json;

use fano_g2::certify::{self, CertifyError, VerifyOptions};
use fano_g2::export::{self, DiagramFormat, EnumTarget};
use fano_g2::g2::G2;
use fano_g2::lifting::AugGroup;
use fano_g2::octonion::OctonionAlgebra;
use fano_g2::scalar::{FieldDescriptor, Rational};

#[derive(Parser)]
#[command(name = "fano", version, about = "Exact certificates for the Fano plane, its octonions and g2")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run a verification suite, or `all`.
    Verify {
        suite: String,
        #[arg(long)]
        json: bool,
        #[arg(long)]
        cache_dir: Option<PathBuf>,
        /// q, qi or fp:<p>
        #[arg(long, default_value = "q")]
        field: FieldDescriptor,
        /// Include per-suite wall time (makes output non-deterministic).
        #[arg(long)]
        timing: bool,
    },
    /// Write JSON lines for aut, aug-aut, comp-factors or oriented-maps.
    Enumerate {
        target: EnumTarget,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        cache_dir: Option<PathBuf>,
    },
    /// Print the octonion table or the bracket table.
    Table {
        target: TableTarget,
        #[arg(long)]
        json: bool,
    },
    /// Emit the delta-star or delta colorings as DOT or text.
    Diagram {
        target: DiagramTarget,
        #[arg(long, default_value = "text")]
        format: DiagramFormat,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        cache_dir: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, clap::ValueEnum)]
enum TableTarget {
    Octonion,
    Brackets,
}

#[derive(Clone, Copy, clap::ValueEnum)]
enum DiagramTarget {
    DeltaStar,
    Delta,
}

enum Failure {
    Usage(String),
    Runtime(String),
}

impl From<CertifyError> for Failure {
    fn from(e: CertifyError) -> Self {
        match e {
            CertifyError::UnknownSuite(_) | CertifyError::Field(_) => Failure::Usage(e.to_string()),
            other => Failure::Runtime(other.to_string()),
        }
    }
}

fn runtime<E: std::fmt::Display>(e: E) -> Failure {
    Failure::Runtime(e.to_string())
}

fn emit(text: &str, out: Option<&Path>) -> Result<(), Failure> {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| runtime(format!("{}: {e}", path.display()))),
        None => match std::io::stdout().lock().write_all(text.as_bytes()) {
            Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(runtime(e)),
            _ => Ok(()),
        },
    }
}

fn load_group(alg: &OctonionAlgebra, cache_dir: Option<&Path>) -> Result<AugGroup, Failure> {
    match cache_dir {
        Some(dir) => AugGroup::load_or_build(dir, alg),
        None => AugGroup::enumerate(alg),
    }
    .map_err(runtime)
}

fn run(cli: Cli) -> Result<bool, Failure> {
    match cli.cmd {
        Cmd::Verify { suite, json, cache_dir, field, timing } => {
            let opts = VerifyOptions { cache_dir, field, timing };
            let report = certify::verify(&suite, &opts)?;
            let text = if json {
                let mut s = serde_json::to_string_pretty(&report).map_err(runtime)?;
                s.push('\n');
                s
            } else {
                certify::render_text(&report)
            };
            emit(&text, None)?;
            Ok(report.pass)
        }
        Cmd::Enumerate { target, out, cache_dir } => {
            let group = match target {
                EnumTarget::AugAut => Some(load_group(&OctonionAlgebra::canonical(), cache_dir.as_deref())?),
                _ => None,
            };
            let records = export::enumerate_records(target, group.as_ref())?;
            emit(&export::to_json_lines(&records), out.as_deref())?;
            Ok(true)
        }
        Cmd::Table { target, json } => {
            let text = match (target, json) {
                (TableTarget::Octonion, false) => export::octonion_table(&OctonionAlgebra::canonical()),
                (TableTarget::Octonion, true) => {
                    let rows: Vec<Vec<String>> = OctonionAlgebra::canonical()
                        .table()
                        .iter()
                        .map(|r| r.iter().map(|x| x.to_string()).collect())
                        .collect();
                    format!("{}\n", json!({ "rows": rows }))
                }
                (TableTarget::Brackets, false) => export::bracket_table(&G2::<Rational>::new())
                    .iter()
                    .map(|e| format!("{e}\n"))
                    .collect(),
                (TableTarget::Brackets, true) => {
                    let rows: Vec<_> = export::bracket_table(&G2::<Rational>::new())
                        .iter()
                        .map(|e| serde_json::to_value(e).map_err(runtime))
                        .collect::<Result<_, _>>()?;
                    export::to_json_lines(&rows)
                }
            };
            emit(&text, None)?;
            Ok(true)
        }
        Cmd::Diagram { target, format, out, cache_dir } => {
            let text = match target {
                DiagramTarget::DeltaStar => export::delta_star_diagram(format),
                DiagramTarget::Delta => {
                    let g = G2::<Rational>::new();
                    let group = load_group(g.algebra(), cache_dir.as_deref())?;
                    export::delta_diagram(format, &g, &group)?
                }
            };
            emit(&text, out.as_deref())?;
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Runtime(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
