use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use rayon::prelude::*;

use fnshape::mesh::io::{parse_landmarks, MeshFormat};
use fnshape::pipeline::{compute_descriptor, shape_distance, validate, PipelineConfig, PipelineError, ShapeDescriptor};
use fnshape::ricci::{FlowLogRow, RicciError};
use fnshape::{FlowConfig, HessianMode, LandmarkSet};

const EXIT_FAILURE: u8 = 1;
const EXIT_INVALID: u8 = 2;
const EXIT_NO_CONVERGENCE: u8 = 3;

#[derive(Parser)]
#[command(name = "fnshape", version, about = "Fenchel-Nielsen shape coordinates of landmarked triangle meshes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the shape descriptor of a mesh.
    Compute {
        mesh: PathBuf,
        /// Whitespace separated landmark vertex indices (`#` starts a comment).
        #[arg(long)]
        landmarks: Option<PathBuf>,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        #[arg(long, default_value_t = 100)]
        max_iter: usize,
        /// Use a finite-difference Hessian in the Newton flow.
        #[arg(long)]
        fd_hessian: bool,
        /// Write the per-iteration flow log as CSV.
        #[arg(long)]
        log_flow: Option<PathBuf>,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Distance between two descriptors of the same genus and puncture count.
    Distance { a: PathBuf, b: PathBuf },
    /// Pairwise distances between all descriptors (`*.json`) in a directory.
    Matrix {
        dir: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Report mesh structure and admissibility.
    Validate { mesh: PathBuf },
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Self {
        Self { code, message: message.into() }
    }
}

impl From<PipelineError> for Failure {
    fn from(e: PipelineError) -> Self {
        let code = match &e {
            PipelineError::Flow(RicciError::NoConvergence { .. } | RicciError::StepFailure { .. } | RicciError::SolveFailure { .. }) => {
                EXIT_NO_CONVERGENCE
            }
            PipelineError::Load(_) | PipelineError::Excise(_) | PipelineError::Decompose(_) | PipelineError::SignatureMismatch { .. } => {
                EXIT_INVALID
            }
            _ => EXIT_FAILURE,
        };
        Self::new(code, e.to_string())
    }
}

fn read(path: &Path) -> Result<Vec<u8>, Failure> {
    fs::read(path).map_err(|e| Failure::new(EXIT_FAILURE, format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| Failure::new(EXIT_FAILURE, format!("{}: {e}", path.display())))
}

fn mesh_format(path: &Path) -> Result<MeshFormat, Failure> {
    MeshFormat::from_path(path)
        .ok_or_else(|| Failure::new(EXIT_INVALID, format!("{}: expected an .off or .obj file", path.display())))
}

fn load_descriptor(path: &Path) -> Result<ShapeDescriptor, Failure> {
    let text = String::from_utf8(read(path)?).map_err(|e| Failure::new(EXIT_INVALID, format!("{}: {e}", path.display())))?;
    ShapeDescriptor::from_json(&text).map_err(|e| Failure::new(EXIT_INVALID, format!("{}: {e}", path.display())))
}

fn flow_csv(rows: &[FlowLogRow]) -> String {
    let mut out = String::from("iteration,residual,min_radius,step_scale,gauss_bonnet_error\n");
    for r in rows {
        let _ = writeln!(out, "{},{:e},{:e},{},{:e}", r.iteration, r.residual, r.min_radius, r.step_scale, r.gauss_bonnet_error);
    }
    out
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Compute { mesh, landmarks, tol, max_iter, fd_hessian, log_flow, output } => {
            let format = mesh_format(&mesh)?;
            let source = read(&mesh)?;
            let ids = match landmarks {
                Some(p) => {
                    let text = String::from_utf8(read(&p)?).map_err(|e| Failure::new(EXIT_INVALID, format!("{}: {e}", p.display())))?;
                    parse_landmarks(&text).map_err(|e| Failure::new(EXIT_INVALID, format!("{}: {e}", p.display())))?
                }
                None => Vec::new(),
            };
            let hessian = if fd_hessian { HessianMode::FiniteDifference } else { HessianMode::Analytic };
            let config = PipelineConfig { flow: FlowConfig { tolerance: tol, max_iters: max_iter, hessian } };
            let result = compute_descriptor(&source, format, &LandmarkSet::new(ids), &config);
            if let (Some(path), Err(PipelineError::Flow(RicciError::NoConvergence { history, .. }))) = (&log_flow, &result) {
                let rows: Vec<FlowLogRow> = history
                    .iter()
                    .enumerate()
                    .map(|(i, &r)| FlowLogRow { iteration: i, residual: r, min_radius: f64::NAN, step_scale: f64::NAN, gauss_bonnet_error: f64::NAN })
                    .collect();
                write(path, &flow_csv(&rows))?;
            }
            let computation = result?;
            if let Some(path) = &log_flow {
                write(path, &flow_csv(&computation.flow_log))?;
            }
            write(&output, &computation.descriptor.to_json())
        }
        Command::Distance { a, b } => {
            let d = shape_distance(&load_descriptor(&a)?, &load_descriptor(&b)?)?;
            println!("{d:e}");
            Ok(())
        }
        Command::Matrix { dir, output } => {
            let mut paths: Vec<PathBuf> = fs::read_dir(&dir)
                .map_err(|e| Failure::new(EXIT_FAILURE, format!("{}: {e}", dir.display())))?
                .filter_map(|e| e.ok().map(|e| e.path()))
                .filter(|p| p.extension().is_some_and(|x| x == "json"))
                .collect();
            paths.sort();
            let descriptors: Vec<ShapeDescriptor> = paths.iter().map(|p| load_descriptor(p)).collect::<Result<_, _>>()?;
            let n = descriptors.len();
            // Pairs from different strata have no distance; their cells stay empty.
            let cells: Vec<Option<f64>> = (0..n * n)
                .into_par_iter()
                .map(|k| shape_distance(&descriptors[k / n], &descriptors[k % n]).ok())
                .collect();
            let names: Vec<String> = paths.iter().map(|p| p.file_stem().unwrap_or_default().to_string_lossy().into_owned()).collect();
            let mut csv = String::from("name");
            for name in &names {
                let _ = write!(csv, ",{name}");
            }
            csv.push('\n');
            for (i, name) in names.iter().enumerate() {
                csv.push_str(name);
                for cell in &cells[i * n..(i + 1) * n] {
                    match cell {
                        Some(d) => write!(csv, ",{d:e}"),
                        None => write!(csv, ","),
                    }
                    .expect("writing to a String");
                }
                csv.push('\n');
            }
            write(&output, &csv)
        }
        Command::Validate { mesh } => {
            let format = mesh_format(&mesh)?;
            let report = validate(&read(&mesh)?, format);
            println!("{}", serde_json::to_string_pretty(&report).expect("report serialises"));
            if report.is_valid() {
                Ok(())
            } else {
                Err(Failure::new(EXIT_INVALID, report.problems.join("; ")))
            }
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("fnshape: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
