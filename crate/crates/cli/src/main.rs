use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use flatsurf::builders::{self, from_polygons, unfold_billiard, PolygonSpec, RationalPolygon};
use flatsurf::diagnostics::{self, ScanSeries};
use flatsurf::flow::{self, FlowPoint, Iet, Section, Termination};
use flatsurf::modular;
use flatsurf::saddle::{self, enumerate_saddle_connections, systole, systole_along, ConnectionRecord};
use flatsurf::surface::{validate, SurfaceData};
use flatsurf::{Surface, Vec2};
use serde::{Deserialize, Serialize};

#[derive(Parser)]
#[command(
    name = "flatsurf",
    version,
    about = "Translation surfaces: builders, saddle connections, flows and ergodicity diagnostics"
)]
struct Cli {
    /// Worker threads for parallel scans (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Seed for Monte Carlo sampling.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Write the primary output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct SurfaceArg {
    /// Surface JSON file.
    #[arg(value_name = "SURFACE", conflicts_with = "surface")]
    path: Option<PathBuf>,
    /// Surface JSON file (alternative to the positional argument).
    #[arg(long)]
    surface: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Check a surface file and report its topology.
    Validate(SurfaceArg),
    /// Build a named surface (square_torus, three_square, slit_tori) or one
    /// glued from a polygon file.
    Build {
        name: Option<String>,
        /// Slit height for slit_tori.
        #[arg(long, default_value_t = 0.5)]
        lambda: f64,
        /// Polygon gluing JSON: {"polygons": [...], "pairings": [...]}.
        #[arg(long, conflicts_with = "name")]
        polygons: Option<PathBuf>,
    },
    /// Unfold a rational billiard polygon file {"vertices": [[x, y], ...]}.
    Unfold { polygon: PathBuf },
    /// Shortest saddle connection, optionally of g_t R_{π/2-θ} S.
    Systole {
        #[command(flatten)]
        surface: SurfaceArg,
        #[arg(long, allow_hyphen_values = true, requires = "t")]
        theta: Option<f64>,
        #[arg(long, requires = "theta")]
        t: Option<f64>,
    },
    /// Saddle connections up to a length.
    Saddles {
        #[command(flatten)]
        surface: SurfaceArg,
        #[arg(long)]
        length: f64,
    },
    /// Systole along the Teichmüller geodesic in direction θ (CSV).
    Scan {
        #[command(flatten)]
        surface: SurfaceArg,
        #[arg(long, allow_hyphen_values = true)]
        theta: f64,
        #[arg(long, default_value_t = 0.0)]
        tmin: f64,
        #[arg(long)]
        tmax: f64,
        #[arg(long, default_value_t = 13)]
        steps: usize,
        /// Where to write the JSON summary (default: stderr).
        #[arg(long)]
        summary: Option<PathBuf>,
    },
    /// Trace a straight-line trajectory (CSV).
    Flow {
        #[command(flatten)]
        surface: SurfaceArg,
        #[arg(long)]
        triangle: usize,
        #[arg(long, allow_hyphen_values = true)]
        x: f64,
        #[arg(long, allow_hyphen_values = true)]
        y: f64,
        #[arg(long, allow_hyphen_values = true)]
        theta: f64,
        #[arg(long)]
        time: f64,
        #[arg(long)]
        summary: Option<PathBuf>,
    },
    /// First-return interval exchange of the flow in direction θ (JSON).
    Iet {
        #[command(flatten)]
        surface: SurfaceArg,
        #[arg(long, allow_hyphen_values = true)]
        theta: f64,
        /// `triangle,x,y,dx,dy`; default: horizontal from a singularity.
        #[arg(long, allow_hyphen_values = true, value_parser = parse_section)]
        section: Option<Section>,
    },
    /// Series n·m_n of an interval exchange (CSV).
    Boshernitzan {
        /// IET JSON {"lengths": [...], "permutation": [...]}.
        #[arg(long, conflicts_with = "rotation")]
        iet: Option<PathBuf>,
        /// Use the rotation x ↦ x + α mod 1.
        #[arg(long)]
        rotation: Option<f64>,
        #[arg(long, default_value_t = 1000)]
        nmax: usize,
        #[arg(long)]
        summary: Option<PathBuf>,
    },
    /// Monte Carlo estimate of the set of directions with a short isolated
    /// saddle connection after time t.
    Measure {
        #[command(flatten)]
        surface: SurfaceArg,
        #[arg(long)]
        t: f64,
        #[arg(long)]
        eps: f64,
        #[arg(long)]
        c: f64,
        #[arg(long, default_value_t = 4000)]
        samples: usize,
    },
    /// Directions of saddle connections up to a length.
    Directions {
        #[command(flatten)]
        surface: SurfaceArg,
        #[arg(long)]
        length: f64,
    },
    /// Reduce a lattice basis to the modular fundamental domain, or scan
    /// its cusp height along g_t when --tmax is given.
    Modular {
        #[arg(long, allow_hyphen_values = true, value_parser = parse_vec2)]
        e1: Vec2,
        #[arg(long, allow_hyphen_values = true, value_parser = parse_vec2)]
        e2: Vec2,
        #[arg(long, default_value_t = 0.0)]
        tmin: f64,
        #[arg(long)]
        tmax: Option<f64>,
        #[arg(long, default_value_t = 13)]
        steps: usize,
        #[arg(long)]
        summary: Option<PathBuf>,
    },
}

enum CliError {
    /// Usage, IO and parse failures: exit 2.
    Usage { code: &'static str, detail: String },
    /// Domain errors from the library: exit 1.
    Domain { code: &'static str, detail: String },
}

impl CliError {
    fn usage(code: &'static str, detail: impl ToString) -> Self {
        CliError::Usage { code, detail: detail.to_string() }
    }
}

macro_rules! domain_from {
    ($($t:ty),*) => {$(
        impl From<$t> for CliError {
            fn from(e: $t) -> Self {
                CliError::Domain { code: e.code(), detail: e.to_string() }
            }
        }
    )*};
}

domain_from!(
    flatsurf::surface::SurfaceError,
    builders::BuildError,
    saddle::SaddleError,
    flow::FlowError,
    flow::IetError,
    diagnostics::DiagnosticsError,
    modular::ModularError
);

fn parse_numbers(s: &str, n: usize) -> Result<Vec<f64>, String> {
    let parts: Vec<f64> =
        s.split(',').map(|p| p.trim().parse::<f64>().map_err(|e| format!("{p:?}: {e}"))).collect::<Result<_, _>>()?;
    if parts.len() != n {
        return Err(format!("expected {n} comma-separated numbers, got {}", parts.len()));
    }
    Ok(parts)
}

fn parse_vec2(s: &str) -> Result<Vec2, String> {
    let v = parse_numbers(s, 2)?;
    Ok(Vec2::new(v[0], v[1]))
}

fn parse_section(s: &str) -> Result<Section, String> {
    let v = parse_numbers(s, 5)?;
    if v[0] < 0.0 || v[0].fract() != 0.0 {
        return Err(format!("triangle index {} is not a non-negative integer", v[0]));
    }
    Ok(Section { triangle: v[0] as usize, start: Vec2::new(v[1], v[2]), vector: Vec2::new(v[3], v[4]) })
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::usage("IoError", format!("{}: {e}", path.display())))
}

fn parse_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T, CliError> {
    serde_json::from_str(&read(path)?).map_err(|e| CliError::usage("ParseError", format!("{}: {e}", path.display())))
}

fn load_surface(path: &Path) -> Result<Surface, CliError> {
    let data: SurfaceData<f64> = parse_json(path)?;
    Surface::try_from(data)
        .map_err(|e| CliError::Domain { code: "InvalidSurface", detail: format!("{}: {e}", e.code()) })
}

impl SurfaceArg {
    fn load(&self) -> Result<Surface, CliError> {
        match self.path.as_ref().or(self.surface.as_ref()) {
            Some(p) => load_surface(p),
            None => Err(CliError::usage("UsageError", "a surface file is required")),
        }
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string(value).expect("serializable output");
    s.push('\n');
    s
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<(), CliError> {
    match out {
        Some(p) => fs::write(p, text).map_err(|e| CliError::usage("IoError", format!("{}: {e}", p.display()))),
        None => std::io::stdout().write_all(text.as_bytes()).map_err(|e| CliError::usage("IoError", e)),
    }
}

fn emit_summary(path: &Option<PathBuf>, value: &serde_json::Value) -> Result<(), CliError> {
    let text = to_json(value);
    match path {
        Some(p) => fs::write(p, text).map_err(|e| CliError::usage("IoError", format!("{}: {e}", p.display()))),
        None => {
            eprint!("{text}");
            Ok(())
        }
    }
}

fn grid(tmin: f64, tmax: f64, steps: usize) -> Result<Vec<f64>, CliError> {
    if steps == 0 || tmin.is_nan() || tmax.is_nan() || tmax < tmin {
        return Err(CliError::usage("UsageError", "need steps ≥ 1 and tmax ≥ tmin"));
    }
    if steps == 1 {
        return Ok(vec![tmin]);
    }
    Ok((0..steps).map(|i| tmin + (tmax - tmin) * i as f64 / (steps - 1) as f64).collect())
}

fn emit_series(out: &Option<PathBuf>, summary: &Option<PathBuf>, series: &ScanSeries) -> Result<(), CliError> {
    emit(out, &series.to_csv())?;
    emit_summary(summary, &series.summary())
}

#[derive(Deserialize)]
struct PolygonFile {
    vertices: Vec<Vec2>,
}

fn run(cli: Cli) -> Result<(), CliError> {
    if let Ok(b) = std::env::var("FLATSURF_BUDGET") {
        let n = b.trim().parse::<u64>().map_err(|e| CliError::usage("UsageError", format!("FLATSURF_BUDGET: {e}")))?;
        saddle::set_default_budget(n);
    }
    if let Some(n) = cli.jobs {
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| CliError::usage("UsageError", e))?;
    }
    let out = &cli.out;
    match cli.command {
        Command::Validate(arg) => {
            let path =
                arg.path.or(arg.surface).ok_or_else(|| CliError::usage("UsageError", "a surface file is required"))?;
            let data: SurfaceData<f64> = parse_json(&path)?;
            let report = validate(&data);
            emit(out, &to_json(&report))?;
            if !report.ok {
                return Err(CliError::Domain { code: "InvalidSurface", detail: report.messages.join("; ") });
            }
        }
        Command::Build { name, lambda, polygons } => {
            let surface = match (name.as_deref(), polygons) {
                (_, Some(p)) => from_polygons(&parse_json::<PolygonSpec<f64>>(&p)?)?,
                (Some("square_torus"), None) => builders::square_torus(),
                (Some("three_square"), None) => builders::three_square(),
                (Some("slit_tori"), None) => builders::slit_tori(lambda)?,
                (Some(other), None) => return Err(CliError::usage("UsageError", format!("unknown surface {other:?}"))),
                (None, None) => return Err(CliError::usage("UsageError", "give a surface name or --polygons")),
            };
            emit(out, &to_json(&surface.to_data()))?;
        }
        Command::Unfold { polygon } => {
            let file: PolygonFile = parse_json(&polygon)?;
            let p = RationalPolygon::from_vertices(file.vertices)?;
            let (surface, group) = unfold_billiard(&p)?;
            emit(out, &to_json(&surface.to_data()))?;
            emit_summary(
                &None,
                &serde_json::json!({ "copies": group.len(), "genus": surface.genus(), "expected_copies": p.expected_group_order() }),
            )?;
        }
        Command::Systole { surface, theta, t } => {
            let s = surface.load()?;
            let value = match (theta, t) {
                (Some(theta), Some(t)) => systole_along(&s, theta, t)?,
                _ => systole(&s)?,
            };
            emit(out, &to_json(&serde_json::json!({ "systole": value })))?;
        }
        Command::Saddles { surface, length } => {
            let s = surface.load()?;
            let records: Vec<ConnectionRecord> =
                enumerate_saddle_connections(&s, length)?.iter().map(|c| c.to_record()).collect();
            emit(out, &to_json(&records))?;
        }
        Command::Scan { surface, theta, tmin, tmax, steps, summary } => {
            let s = surface.load()?;
            let series = diagnostics::masur_scan(&s, theta, &grid(tmin, tmax, steps)?)?;
            emit_series(out, &summary, &series)?;
        }
        Command::Flow { surface, triangle, x, y, theta, time, summary } => {
            let s = surface.load()?;
            let tr = flow::trace(&s, FlowPoint::new(triangle, Vec2::new(x, y)), theta, time)?;
            emit(out, &tr.to_csv())?;
            let (kind, at) = match tr.termination {
                Termination::TimeExpired => ("TimeExpired", None),
                Termination::SingularityHit { time } => ("SingularityHit", Some(time)),
                Termination::Closed { period } => ("Closed", Some(period)),
            };
            emit_summary(
                &summary,
                &serde_json::json!({
                    "termination": kind,
                    "time": at,
                    "total_length": tr.total_length,
                    "segments": tr.segments.len(),
                }),
            )?;
        }
        Command::Iet { surface, theta, section } => {
            let s = surface.load()?;
            let section = section.unwrap_or_else(|| flow::default_section(&s));
            let iet = flow::first_return_iet(&s, theta, &section)?;
            emit(out, &to_json(&iet))?;
        }
        Command::Boshernitzan { iet, rotation, nmax, summary } => {
            let iet: Iet = match (iet, rotation) {
                (Some(p), _) => parse_json(&p)?,
                (None, Some(a)) => Iet::rotation(a)?,
                (None, None) => return Err(CliError::usage("UsageError", "give --iet or --rotation")),
            };
            emit_series(out, &summary, &diagnostics::boshernitzan_series(&iet, nmax)?)?;
        }
        Command::Measure { surface, t, eps, c, samples } => {
            let s = surface.load()?;
            let est = diagnostics::measure_estimate(&s, t, eps, c, samples, cli.seed)?;
            emit(out, &to_json(&est))?;
        }
        Command::Directions { surface, length } => {
            let s = surface.load()?;
            emit(out, &to_json(&diagnostics::saddle_directions(&s, length)?))?;
        }
        Command::Modular { e1, e2, tmin, tmax, steps, summary } => match tmax {
            None => emit(out, &to_json(&modular::lattice_reduce(e1, e2)?))?,
            Some(tmax) => {
                let series = modular::modular_excursion(e1, e2, &grid(tmin, tmax, steps)?)?;
                emit_series(out, &summary, &series)?;
            }
        },
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let (status, code, detail) = match e {
                CliError::Usage { code, detail } => (2, code, detail),
                CliError::Domain { code, detail } => (1, code, detail),
            };
            eprintln!("{}", serde_json::json!({ "error": code, "detail": detail }));
            ExitCode::from(status)
        }
    }
}
