//! Subcommands of the `alf` binary.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use alf_core::examples::CATALOG;
use alf_core::{
    blow_up, classify_smooth, make_example, moment_map, tod_metric_in, verify_suite, BlowupRequest, Gauge, GridConfig,
    RodStructure,
};
use clap::{Parser, Subcommand};

use crate::error::{io_error, CliError, CliResult};
use crate::format::{sig9, to_json};
use crate::rodfile::{parse_rod_file, serialize_rod};
use crate::svg::{polytope_csv, polytope_svg};

#[derive(Debug, Parser)]
#[command(name = "alf", version, about = "Toric Ricci-flat ALF instantons from rod functions")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a named family (`list` prints the catalog).
    Example {
        name: String,
        /// Family parameter as `key=value`; repeatable.
        #[arg(long = "param", value_parser = parse_param)]
        params: Vec<(String, f64)>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Run the verification suite on a grid.
    Verify {
        rod: PathBuf,
        /// Grid size as `NxM` (ρ × z).
        #[arg(long, value_parser = parse_grid)]
        grid: Option<(usize, usize)>,
        /// Fixed finite-difference step.
        #[arg(long)]
        h: Option<f64>,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Moment polygon, lattice coordinates and Delzant report.
    Polytope {
        rod: PathBuf,
        #[arg(long)]
        svg: Option<PathBuf>,
        #[arg(long)]
        csv: Option<PathBuf>,
        /// Draw and export lattice coordinates instead of `(x₁, μ)`.
        #[arg(long)]
        lattice: bool,
    },
    /// Evaluate the metric functions at points read from a `rho,z` CSV.
    Eval {
        rod: PathBuf,
        #[arg(long)]
        points: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Insert an edge at a vertex.
    Blowup {
        rod: PathBuf,
        /// Kink index, 1-based.
        #[arg(long)]
        vertex: usize,
        /// New cone angle over 2π.
        #[arg(long)]
        angle: f64,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Search for smooth rod functions of a given rank.
    Classify {
        #[arg(long)]
        rank: usize,
    },
}

fn parse_param(s: &str) -> Result<(String, f64), String> {
    let (k, v) = s.split_once('=').ok_or_else(|| format!("expected key=value, got '{s}'"))?;
    let v: f64 = v.trim().parse().map_err(|e| format!("{k}: {e}"))?;
    Ok((k.trim().to_string(), v))
}

fn parse_grid(s: &str) -> Result<(usize, usize), String> {
    let (a, b) = s.split_once(['x', 'X']).ok_or_else(|| format!("expected NxM, got '{s}'"))?;
    let n: usize = a.parse().map_err(|e| format!("{a}: {e}"))?;
    let m: usize = b.parse().map_err(|e| format!("{b}: {e}"))?;
    if n == 0 || m == 0 {
        return Err("grid dimensions must be positive".into());
    }
    Ok((n, m))
}

fn read_rod(path: &Path) -> CliResult<RodStructure> {
    let text = fs::read_to_string(path).map_err(|e| io_error(path, e))?;
    parse_rod_file(&text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

/// Write to `path`, or to stdout when absent.
fn emit(path: Option<&Path>, content: &str) -> CliResult<()> {
    match path {
        Some(p) => fs::write(p, content).map_err(|e| io_error(p, e)),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(content.as_bytes()).map_err(|e| CliError::Input(format!("stdout: {e}")))
        }
    }
}

pub fn run(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Example { name, params, output } => example(&name, &params, output.as_deref()),
        Command::Verify { rod, grid, h, report } => verify(&rod, grid, h, report.as_deref()),
        Command::Polytope { rod, svg, csv, lattice } => polytope(&rod, svg.as_deref(), csv.as_deref(), lattice),
        Command::Eval { rod, points, output } => eval(&rod, &points, output.as_deref()),
        Command::Blowup { rod, vertex, angle, output } => blowup(&rod, vertex, angle, output.as_deref()),
        Command::Classify { rank } => classify(rank),
    }
}

fn example(name: &str, params: &[(String, f64)], output: Option<&Path>) -> CliResult<()> {
    if name == "list" {
        return emit(None, &to_json(&CATALOG));
    }
    let rod = make_example(name, params)?;
    eprintln!("{name}: rank {}, angles {:?}", rod.rank(), rod.angles);
    emit(output, &serialize_rod(&rod))
}

fn verify(path: &Path, grid: Option<(usize, usize)>, h: Option<f64>, report: Option<&Path>) -> CliResult<()> {
    let rod = read_rod(path)?;
    let mut cfg = GridConfig::default();
    if let Some((n, m)) = grid {
        cfg.n_rho = n;
        cfg.n_z = m;
    }
    if let Some(h) = h {
        if !(h > 0.0 && 10.0 * h < cfg.rho_min) {
            return Err(CliError::Input(format!("--h {h}: need 0 < h < rho_min/10 = {}", cfg.rho_min / 10.0)));
        }
        cfg.h = Some(h);
    }
    let rep = verify_suite(&rod, &cfg);
    for c in &rep.checks {
        eprintln!(
            "{} {:<24} residual {} threshold {}{}",
            if c.pass { "pass" } else { "FAIL" },
            c.name,
            sig9(c.residual),
            sig9(c.threshold),
            c.note.as_deref().map(|n| format!(" ({n})")).unwrap_or_default()
        );
    }
    emit(report, &to_json(&rep))?;
    if rep.pass {
        Ok(())
    } else {
        let failed: Vec<&str> = rep.checks.iter().filter(|c| !c.pass).map(|c| c.name.as_str()).collect();
        Err(CliError::Validation(format!("verification failed: {}", failed.join(", "))))
    }
}

fn polytope(path: &Path, svg: Option<&Path>, csv: Option<&Path>, lattice: bool) -> CliResult<()> {
    let rod = read_rod(path)?;
    let data = rod.polytope()?;
    let vertices = if lattice {
        data.vertices_lattice.clone().expect("lattice coordinates computed")
    } else {
        data.vertices_canonical.clone()
    };
    if let Some(p) = svg {
        fs::write(p, polytope_svg(&vertices, &rod.angles)).map_err(|e| io_error(p, e))?;
    }
    if let Some(p) = csv {
        fs::write(p, polytope_csv(&vertices, &rod.angles)).map_err(|e| io_error(p, e))?;
    }
    if let Some(d) = &data.delzant {
        eprintln!("lattice_ok {}, smooth {}, convex {}", d.lattice_ok, d.smooth, d.convex);
    }
    emit(None, &to_json(&data))
}

fn eval(path: &Path, points: &Path, output: Option<&Path>) -> CliResult<()> {
    let rod = read_rod(path)?;
    let bad = |msg: String| CliError::Input(format!("{}: {msg}", points.display()));
    let mut reader = csv::Reader::from_path(points).map_err(|e| bad(e.to_string()))?;
    let headers = reader.headers().map_err(|e| bad(e.to_string()))?.clone();
    let col = |name: &str| headers.iter().position(|h| h.trim() == name).ok_or_else(|| bad(format!("missing '{name}' column")));
    let (ir, iz) = (col("rho")?, col("z")?);

    let mut writer = csv::Writer::from_writer(Vec::new());
    let csv_err = |e: csv::Error| CliError::Input(e.to_string());
    writer.write_record(["rho", "z", "e2nu", "V", "F", "x1", "mu"]).map_err(csv_err)?;
    for (line, record) in reader.records().enumerate() {
        let record = record.map_err(|e| bad(e.to_string()))?;
        let num = |i: usize, name: &str| -> CliResult<f64> {
            let s = record.get(i).unwrap_or("").trim();
            s.parse().map_err(|_| bad(format!("row {}: {name} = '{s}' is not a number", line + 1)))
        };
        let (rho, z) = (num(ir, "rho")?, num(iz, "z")?);
        let at = |e: alf_core::Error| bad(format!("row {}: {e}", line + 1));
        let m = tod_metric_in(&rod.f, rho, z, Gauge::FirstRodZero).map_err(at)?;
        let mm = moment_map(&rod.f, rho, z).map_err(at)?;
        let row = [rho, z, m.e2nu, m.v, m.f_twist, mm.x1, mm.mu].map(sig9);
        writer.write_record(&row).map_err(csv_err)?;
    }
    let bytes = writer.into_inner().map_err(|e| CliError::Input(e.to_string()))?;
    emit(output, &String::from_utf8(bytes).expect("csv output is UTF-8"))
}

fn blowup(path: &Path, vertex: usize, angle: f64, output: Option<&Path>) -> CliResult<()> {
    let rod = read_rod(path)?;
    let out = blow_up(&BlowupRequest { rod, vertex_index: vertex, alpha: angle })?;
    eprintln!("blown up: rank {}, angles {:?}", out.rank(), out.angles);
    emit(output, &serialize_rod(&out))
}

fn classify(rank: usize) -> CliResult<()> {
    let c = classify_smooth(rank);
    let names: Vec<&str> = c.families.iter().map(|f| f.name.as_str()).collect();
    eprintln!("rank {rank}: {} families {:?}", names.len(), names);
    if let Some(o) = &c.obstruction {
        eprintln!("{o}");
    }
    emit(None, &to_json(&c))
}
