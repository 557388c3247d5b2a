//! Thin command-line front end: parse flags, read versioned documents, call
//! the library, write deterministic CSV/JSON. Exit codes: 0 success, 2 for
//! input/schema problems, 3 for numeric failures.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use svanish::designer::{design, DesignProblem, MultiStart};
use svanish::farfield::{
    scattering_amplitude, scattering_cross_section, suggest_n_max, Direction,
};
use svanish::io::{
    cloak_csv, cloak_grid_radii, coeffs_human_table, coeffs_to_json, design_to_json, farfield_csv,
    log_grid, sidecar_to_json, structure_from_json, structure_hash, wcoef_csv, xsection_csv,
    CloakSidecar, FarFieldRow, FarFieldSidecar,
};
use svanish::lowfreq::lowfreq_coefficients;
use svanish::multilayer::{modal_coefficient, LayeredStructure, Polarization};
use svanish::{Error, Result};

#[derive(Parser)]
#[command(
    name = "svanish",
    version,
    about = "Scattering-coefficient suppression toolkit for layered PEC-core spheres"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct StructureArg {
    /// Path to a layered-structure JSON document.
    #[arg(long)]
    structure: PathBuf,
}

#[derive(Args)]
struct OutArg {
    /// Output path; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, Default, ValueEnum)]
enum Format {
    /// Human-readable table on stdout.
    #[default]
    Csv,
    /// Versioned JSON document.
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Modal coefficients |W_n| over a log-spaced grid of t = k0 r_core (CSV).
    Wcoef {
        #[command(flatten)]
        structure: StructureArg,
        /// Largest multipole order to tabulate.
        #[arg(long, default_value_t = 2)]
        nmax: usize,
        #[arg(long, default_value_t = 1e-3)]
        tmin: f64,
        #[arg(long, default_value_t = 1.0)]
        tmax: f64,
        /// Number of grid points.
        #[arg(long, default_value_t = 40)]
        tcount: usize,
        #[command(flatten)]
        out: OutArg,
    },
    /// Low-frequency coefficient table W_{n,l} for n + l <= order.
    Lowfreq {
        #[command(flatten)]
        structure: StructureArg,
        #[arg(long, default_value_t = 2)]
        order: usize,
        /// csv prints the human table; json emits the versioned document.
        #[arg(long, value_enum, default_value_t)]
        format: Format,
        #[command(flatten)]
        out: OutArg,
    },
    /// Drive the coefficient block to zero over the layer materials.
    Design {
        #[command(flatten)]
        structure: StructureArg,
        #[arg(long, default_value_t = 2)]
        order: usize,
        /// Box constraint for every material parameter.
        #[arg(long, num_args = 2, value_names = ["LO", "HI"], default_values_t = [0.1, 10.0])]
        bounds: Vec<f64>,
        #[arg(long, default_value_t = 200)]
        max_iters: usize,
        /// Scaled residual tolerance declaring convergence.
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        /// Enable 8 random restarts with this seed.
        #[arg(long)]
        seed: Option<u64>,
        #[command(flatten)]
        out: OutArg,
    },
    /// Far-field amplitude on a (theta, phi) grid for a plane wave along z.
    Farfield {
        #[command(flatten)]
        structure: StructureArg,
        #[arg(long, default_value_t = 1.0)]
        omega: f64,
        /// Multipole truncation; 0 picks the smallest adequate order.
        #[arg(long, default_value_t = 0)]
        nmax: usize,
        #[command(flatten)]
        out: OutArg,
    },
    /// Total scattering cross section over a log-spaced frequency grid (CSV).
    Xsection {
        #[command(flatten)]
        structure: StructureArg,
        #[arg(long, default_value_t = 1e-2)]
        tmin: f64,
        #[arg(long, default_value_t = 1.0)]
        tmax: f64,
        #[arg(long, default_value_t = 20)]
        tcount: usize,
        /// Multipole truncation; 0 picks the smallest adequate order.
        #[arg(long, default_value_t = 0)]
        nmax: usize,
        #[command(flatten)]
        out: OutArg,
    },
    /// Pushed-forward anisotropic cloak tensors on a radial grid (CSV).
    CloakMap {
        #[command(flatten)]
        structure: StructureArg,
        /// Blow-up parameter in (0, 1/2).
        #[arg(long, default_value_t = 0.1)]
        rho: f64,
        /// Number of radial samples.
        #[arg(long, default_value_t = 24)]
        tcount: usize,
        #[command(flatten)]
        out: OutArg,
    },
    /// Run the verification suite; one line per criterion.
    Verify,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Schema(_) | Error::Json(_) | Error::Io(_) => ExitCode::from(2),
                _ => ExitCode::from(3),
            }
        }
    }
}

fn read_structure(path: &PathBuf) -> Result<LayeredStructure> {
    let text = std::fs::read_to_string(path)?;
    let s = structure_from_json(&text)?;
    if let Some(note) = s.nonstandard_frame_note() {
        eprintln!("warning: {note}");
    }
    Ok(s)
}

fn emit(out: &OutArg, text: &str) -> Result<()> {
    match &out.out {
        Some(path) => std::fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

/// Sidecar path `<out>.meta.json` for CSV exports written to files.
fn sidecar_path(out: &PathBuf) -> PathBuf {
    let mut os = out.clone().into_os_string();
    os.push(".meta.json");
    PathBuf::from(os)
}

fn pick_n_max(structure: &LayeredStructure, omega: f64, requested: usize) -> Result<usize> {
    if requested == 0 {
        suggest_n_max(structure, omega)
    } else {
        Ok(requested)
    }
}

fn run(command: Command) -> Result<ExitCode> {
    match command {
        Command::Wcoef {
            structure,
            nmax,
            tmin,
            tmax,
            tcount,
            out,
        } => {
            let s = read_structure(&structure.structure)?;
            let grid = log_grid(tmin, tmax, tcount)?;
            let scale = s.background().z() * s.core_radius();
            let mut rows = Vec::new();
            for &t in &grid {
                for n in 1..=nmax.max(1) {
                    for pol in [Polarization::TE, Polarization::TM] {
                        let w = modal_coefficient(&s, n, pol, t / scale)?;
                        rows.push((t, n, pol, w.value));
                    }
                }
            }
            emit(&out, &wcoef_csv(&rows))?;
        }
        Command::Lowfreq {
            structure,
            order,
            format,
            out,
        } => {
            let s = read_structure(&structure.structure)?;
            let table = lowfreq_coefficients(&s, order)?;
            let text = match format {
                Format::Csv => coeffs_human_table(&table),
                Format::Json => coeffs_to_json(&table),
            };
            emit(&out, &text)?;
        }
        Command::Design {
            structure,
            order,
            bounds,
            max_iters,
            tol,
            seed,
            out,
        } => {
            let s = read_structure(&structure.structure)?;
            let mut problem = DesignProblem::new(
                s.radii().to_vec(),
                order,
                s.mu().to_vec(),
                s.eps().to_vec(),
            );
            problem.background = s.background();
            problem.bounds = (bounds[0], bounds[1]);
            problem.max_iters = max_iters;
            problem.residual_tol = tol;
            problem.multistart = seed.map(|seed| MultiStart { restarts: 8, seed });
            let result = design(&problem)?;
            if !result.converged {
                eprintln!(
                    "note: stopped ({:?}) at scaled residual {:.4e} after {} iterations",
                    result.stop_reason,
                    result.final_residual_norm(),
                    result.iterations
                );
            }
            emit(&out, &design_to_json(&problem, &result)?)?;
        }
        Command::Farfield {
            structure,
            omega,
            nmax,
            out,
        } => {
            let s = read_structure(&structure.structure)?;
            let n_max = pick_n_max(&s, omega, nmax)?;
            let c = [1.0, 0.0, 0.0];
            let khat = Direction::Z;
            let (n_theta, n_phi) = (19usize, 36usize);
            let mut rows = Vec::with_capacity(n_theta * n_phi);
            for i in 0..n_theta {
                let theta = std::f64::consts::PI * i as f64 / (n_theta - 1) as f64;
                for j in 0..n_phi {
                    let phi = 2.0 * std::f64::consts::PI * j as f64 / n_phi as f64;
                    let xhat = Direction::from_angles(theta, phi)?;
                    let sample = scattering_amplitude(&s, omega, c, khat, xhat, n_max)?;
                    rows.push(FarFieldRow {
                        theta,
                        phi,
                        amplitude: sample.amplitude,
                    });
                }
            }
            emit(&out, &farfield_csv(&rows))?;
            if let Some(path) = &out.out {
                let sidecar = FarFieldSidecar {
                    omega,
                    c: [[1.0, 0.0], [0.0, 0.0], [0.0, 0.0]],
                    khat: [0.0, 0.0, 1.0],
                    n_max,
                    structure_sha256: structure_hash(&s),
                };
                std::fs::write(sidecar_path(path), sidecar_to_json(&sidecar))?;
            }
        }
        Command::Xsection {
            structure,
            tmin,
            tmax,
            tcount,
            nmax,
            out,
        } => {
            let s = read_structure(&structure.structure)?;
            let grid = log_grid(tmin, tmax, tcount)?;
            let c = [1.0, 0.0, 0.0];
            let mut rows = Vec::with_capacity(grid.len());
            for &omega in &grid {
                let n_max = pick_n_max(&s, omega, nmax)?;
                let sigma = scattering_cross_section(&s, omega, c, Direction::Z, n_max)?;
                rows.push((omega, sigma));
            }
            emit(&out, &xsection_csv(&rows))?;
        }
        Command::CloakMap {
            structure,
            rho,
            tcount,
            out,
        } => {
            let s = read_structure(&structure.structure)?;
            let dirs = [
                [1.0, 0.0, 0.0],
                [0.6, -0.64, 0.48],
                [0.0, 0.0, 1.0],
            ];
            let mut fields = Vec::with_capacity(3 * tcount);
            for sr in cloak_grid_radii(&s, rho, tcount, 2.4) {
                for d in dirs {
                    let y = [sr * d[0], sr * d[1], sr * d[2]];
                    fields.push(svanish::cloakmap::push_forward(&s, rho, y)?);
                }
            }
            emit(&out, &cloak_csv(&fields))?;
            if let Some(path) = &out.out {
                let sidecar = CloakSidecar {
                    rho,
                    structure_sha256: structure_hash(&s),
                };
                std::fs::write(sidecar_path(path), sidecar_to_json(&sidecar))?;
            }
        }
        Command::Verify => {
            let reports = svanish::verify::run_all();
            let mut all_acceptable = true;
            for r in &reports {
                println!("{}", r.status_line());
                all_acceptable &= r.acceptable();
            }
            if !all_acceptable {
                eprintln!("error: verification found failures outside the documented envelopes");
                return Ok(ExitCode::from(3));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}
