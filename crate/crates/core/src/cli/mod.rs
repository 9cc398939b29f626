//! Command line front end: scene files in, CSV, SVG and JSON reports out.
//!
//! Exit codes: 0 success, 1 numeric failure, 2 invalid input,
//! 3 decomposition failure, 4 window or resolution infeasible,
//! 5 coloring ended by an unbounded green path.

pub mod scene;
pub mod svg;

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::Serialize;

use crate::abpe::{decompose, scan_abpe, Decomposition, KPiece, ScanConfig};
use crate::cauchy::cauchy_transform_many;
use crate::coloring::{classify_point, run_scheme, ClassifyBudget, PhiField};
use crate::error::{Error, Result};
use crate::harmonic::{sweep, CircularDomain};
use crate::measure::DensityExpr;
pub use scene::{fmt_complex, parse_complex, parse_scene, Scene};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NUMERIC: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_DECOMPOSITION: i32 = 3;
pub const EXIT_WINDOW: i32 = 4;
pub const EXIT_GREEN_TERMINATED: i32 = 5;

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::InvalidInput(_) | Error::Parse { .. } | Error::Io(_) | Error::Unsupported(_) | Error::Singularity { .. } => EXIT_INVALID,
        Error::DecompositionFailure(_) => EXIT_DECOMPOSITION,
        Error::WindowTooSmall { .. } => EXIT_WINDOW,
        Error::NumericDomain { .. } | Error::Diagnostic { .. } | Error::NoKernel { .. } => EXIT_NUMERIC,
    }
}

#[derive(Debug, Parser)]
#[command(name = "abpe", version, about = "Planar measures: Cauchy transforms, colorings, bounded point evaluations")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DomainKind {
    Disk,
    Annulus,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Cauchy transform of the scene measure at the points of a CSV file.
    Cauchy {
        #[arg(long)]
        scene: PathBuf,
        /// CSV with header `re,im`.
        #[arg(long)]
        points: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Runs the coloring scheme and renders it.
    Color {
        #[arg(long)]
        scene: Option<PathBuf>,
        /// `cauchy` for `|mu^|` of the scene, or an expression in x, y, r.
        #[arg(long, default_value = "cauchy", allow_hyphen_values = true)]
        phi: String,
        #[arg(long, allow_hyphen_values = true)]
        a: String,
        #[arg(long)]
        k: u32,
        #[arg(long)]
        gens: u32,
        /// `lo,hi` corners; defaults to the scene window.
        #[arg(long, allow_hyphen_values = true)]
        window: Option<String>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Light or heavy verdicts for `|mu^|` at the points of a CSV file.
    Classify {
        #[arg(long)]
        scene: PathBuf,
        #[arg(long)]
        points: PathBuf,
        #[arg(long, default_value_t = 2)]
        k_start: u32,
        #[arg(long, default_value_t = 2)]
        k_count: u32,
        #[arg(long, default_value_t = 6)]
        max_generation: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Grid scan for analytic bounded point evaluations.
    #[command(name = "abpe-scan")]
    AbpeScan {
        #[arg(long)]
        scene: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        window: Option<String>,
        /// Cell side, a number or a fraction like `1/64`.
        #[arg(long, default_value = "1/16")]
        res: String,
        #[arg(long)]
        degree: Option<u32>,
        /// SVG heatmap.
        #[arg(long)]
        out: Option<PathBuf>,
        /// JSON report; printed when absent.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Sweep of the scene measure onto the boundary of a disk or annulus.
    Sweep {
        #[arg(long)]
        scene: PathBuf,
        #[arg(long, value_enum)]
        domain: DomainKind,
        #[arg(long, default_value = "0", allow_hyphen_values = true)]
        center: String,
        #[arg(long)]
        radius: Option<f64>,
        #[arg(long)]
        inner: Option<f64>,
        #[arg(long)]
        outer: Option<f64>,
        #[arg(long, default_value_t = 256)]
        samples: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Splits the scene into the parts carried by abpe components.
    Decompose {
        #[arg(long)]
        scene: PathBuf,
        /// A piece of K in scene syntax, e.g. `disk center 0 radius 1`;
        /// replaces the scene's `K:` lines when given.
        #[arg(long = "K", allow_hyphen_values = true)]
        k: Vec<String>,
        #[arg(long, allow_hyphen_values = true)]
        window: Option<String>,
        #[arg(long, default_value = "1/16")]
        res: String,
        #[arg(long)]
        degree: Option<u32>,
        /// JSON report.
        #[arg(long)]
        json: Option<PathBuf>,
    },
}

/// Runs one command, writing text output to `stdout`; returns the exit
/// code on success paths (0, or 5 after a green-terminated coloring).
pub fn run(cli: Cli, stdout: &mut dyn Write) -> Result<i32> {
    match cli.command {
        Command::Cauchy { scene, points, out } => {
            let mu = load_scene(&scene)?.measure()?;
            let zs = read_points(&points)?;
            let values = cauchy_transform_many(&mu, &zs);
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["re", "im", "cauchy_re", "cauchy_im", "status"]).map_err(csv_err)?;
            for (z, v) in zs.iter().zip(values) {
                let (vr, vi, status) = match v {
                    Ok(v) => (v.re.to_string(), v.im.to_string(), "ok".to_string()),
                    Err(e) => (String::new(), String::new(), e.to_string()),
                };
                w.write_record([z.re.to_string(), z.im.to_string(), vr, vi, status]).map_err(csv_err)?;
            }
            emit(out.as_deref(), &w.into_inner().map_err(|e| Error::invalid(e.to_string()))?, stdout)?;
            Ok(EXIT_OK)
        }
        Command::Color {
            scene,
            phi,
            a,
            k,
            gens,
            window,
            out,
        } => {
            let scene = scene.as_deref().map(load_scene).transpose()?;
            let a = complex_arg("--a", &a)?;
            let field = if phi == "cauchy" {
                let Some(s) = &scene else {
                    return Err(Error::invalid("--phi cauchy needs --scene"));
                };
                PhiField::cauchy_modulus(s.measure()?)
            } else if let Ok(v) = phi.parse::<f64>() {
                PhiField::Constant(v)
            } else {
                let expr = DensityExpr::parse(&phi).map_err(Error::InvalidInput)?;
                PhiField::function(move |z| expr.eval(z))
            };
            let window = match (window, &scene) {
                (Some(w), _) => window_arg(&w)?,
                (None, Some(s)) => s.window()?,
                (None, None) => (a - Complex64::new(4.0, 4.0), a + Complex64::new(4.0, 4.0)),
            };
            let scheme = run_scheme(&field, a, k, gens, window)?;
            std::fs::write(&out, svg::coloring_svg(&scheme))?;
            let colored: usize = scheme.generations.iter().map(|g| g.yellow.len() + g.green.len() + g.red.len()).sum();
            writeln!(
                stdout,
                "generations {}..={}, {colored} colored squares, {} green, reach {}, {}",
                k + 1,
                scheme.last_generation(),
                scheme.green_count(),
                scheme.reach(),
                if scheme.terminated_with_unbounded_green { "green-terminated" } else { "bounded" }
            )?;
            Ok(if scheme.terminated_with_unbounded_green { EXIT_GREEN_TERMINATED } else { EXIT_OK })
        }
        Command::Classify {
            scene,
            points,
            k_start,
            k_count,
            max_generation,
            out,
        } => {
            let mu = load_scene(&scene)?.measure()?;
            let zs = read_points(&points)?;
            let phi = PhiField::cauchy_modulus(mu);
            let budget = ClassifyBudget {
                k_start,
                k_count,
                max_generation,
                window: None,
            };
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["re", "im", "verdict", "confidence", "witness_radius", "decided_at_generation"]).map_err(csv_err)?;
            for z in zs {
                let p = classify_point(&phi, z, &budget)?;
                let verdict = format!("{:?}", p.verdict);
                let confidence = serde_json::to_value(p.confidence).map_err(json_err)?;
                w.write_record([
                    z.re.to_string(),
                    z.im.to_string(),
                    verdict,
                    confidence.as_str().unwrap_or_default().to_string(),
                    p.witness_radius.to_string(),
                    p.decided_at_generation.to_string(),
                ])
                .map_err(csv_err)?;
            }
            emit(out.as_deref(), &w.into_inner().map_err(|e| Error::invalid(e.to_string()))?, stdout)?;
            Ok(EXIT_OK)
        }
        Command::AbpeScan {
            scene,
            window,
            res,
            degree,
            out,
            report,
        } => {
            let mut scene = load_scene(&scene)?;
            if let Some(d) = degree {
                scene.degree = d;
            }
            let config = scan_config(&scene, window.as_deref(), &res)?;
            let mu = scene.measure()?;
            let basis = scene.basis()?;
            let scan = scan_abpe(&mu, &basis, &config)?;
            if let Some(path) = out {
                std::fs::write(path, svg::scan_svg(&scan))?;
            }
            let gram = crate::abpe::gram_matrix(&basis, &mu)?;
            let body = ScanReport {
                window: config.window,
                resolution: config.resolution,
                degree: scene.degree,
                basis_terms: basis.len(),
                nx: scan.nx,
                ny: scan.ny,
                convergent_cells: scan.convergent.iter().filter(|c| **c).count(),
                gram_condition: gram.condition,
                component_count: scan.components.len(),
                components: scan
                    .components
                    .iter()
                    .map(|c| ComponentSummary {
                        id: c.id,
                        cells: c.cells.len(),
                        area: c.area,
                        bbox: c.bbox,
                        centroid: c.centroid,
                        holes: c.holes,
                        connectivity: c.connectivity,
                        max_bound: c.max_bound,
                    })
                    .collect(),
            };
            emit(report.as_deref(), &json_bytes(&body)?, stdout)?;
            Ok(EXIT_OK)
        }
        Command::Sweep {
            scene,
            domain,
            center,
            radius,
            inner,
            outer,
            samples,
            out,
        } => {
            let mu = load_scene(&scene)?.measure()?;
            let center = complex_arg("--center", &center)?;
            let domain = match (domain, radius, inner, outer) {
                (DomainKind::Disk, Some(r), None, None) => CircularDomain::disk(center, r)?,
                (DomainKind::Annulus, None, Some(r1), Some(r2)) => CircularDomain::annulus(center, r1, r2)?,
                (DomainKind::Disk, ..) => return Err(Error::invalid("--domain disk takes --radius only")),
                (DomainKind::Annulus, ..) => return Err(Error::invalid("--domain annulus takes --inner and --outer")),
            };
            let swept = sweep(&mu, &domain, samples)?;
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["part", "circle", "theta", "re", "im", "value"]).map_err(csv_err)?;
            for (ci, cd) in swept.circles.iter().enumerate() {
                let n = cd.density.len();
                for (j, d) in cd.density.iter().enumerate() {
                    let theta = std::f64::consts::TAU * j as f64 / n as f64;
                    let z = cd.circle.point(theta);
                    w.write_record(["density".to_string(), ci.to_string(), theta.to_string(), z.re.to_string(), z.im.to_string(), d.to_string()])
                        .map_err(csv_err)?;
                }
            }
            for (z, m) in &swept.atoms {
                w.write_record(["atom".to_string(), String::new(), String::new(), z.re.to_string(), z.im.to_string(), m.to_string()])
                    .map_err(csv_err)?;
            }
            emit(out.as_deref(), &w.into_inner().map_err(|e| Error::invalid(e.to_string()))?, stdout)?;
            Ok(EXIT_OK)
        }
        Command::Decompose {
            scene,
            k,
            window,
            res,
            degree,
            json,
        } => {
            let mut scene = load_scene(&scene)?;
            if let Some(d) = degree {
                scene.degree = d;
            }
            if !k.is_empty() {
                scene.k = k.iter().map(|s| k_arg(s)).collect::<Result<Vec<_>>>()?;
            }
            if scene.k.is_empty() {
                return Err(Error::invalid("decompose needs K: give `K:` lines in the scene or --K"));
            }
            let config = scan_config(&scene, window.as_deref(), &res)?;
            let mu = scene.measure()?;
            let basis = scene.basis()?;
            let d = decompose(&mu, &scene.k, &basis, &config)?;
            if let Some(path) = json {
                std::fs::write(path, json_bytes(&d)?)?;
            }
            stdout.write_all(decomposition_text(&d).as_bytes())?;
            Ok(EXIT_OK)
        }
    }
}

/// Parses `args` (program name first), runs the command and reports errors
/// on stderr; returns the process exit code.
pub fn main_with<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_INVALID } else { EXIT_OK };
        }
    };
    let stdout = std::io::stdout();
    let mut lock = stdout.lock();
    match run(cli, &mut lock) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

#[derive(Serialize)]
struct ComponentSummary {
    id: usize,
    cells: usize,
    area: f64,
    bbox: (Complex64, Complex64),
    centroid: Complex64,
    holes: usize,
    connectivity: usize,
    max_bound: f64,
}

#[derive(Serialize)]
struct ScanReport {
    window: (Complex64, Complex64),
    resolution: f64,
    degree: u32,
    basis_terms: usize,
    nx: usize,
    ny: usize,
    convergent_cells: usize,
    gram_condition: f64,
    component_count: usize,
    components: Vec<ComponentSummary>,
}

pub fn decomposition_text(d: &Decomposition) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "Delta_0: {{{}}}", d.delta0.join(", "));
    let _ = writeln!(s, "abpe components: {}", d.parts.len());
    for p in &d.parts {
        let kc = p.k_connectivity.map_or("none".to_string(), |c| c.to_string());
        let _ = writeln!(
            s,
            "Delta_{}: {{{}}}  U near {} area {:.4} connectivity {} vs K {} ({})  closure contains Delta: {}",
            p.index,
            p.labels.join(", "),
            fmt_complex(Complex64::new(round6(p.region.centroid.re), round6(p.region.centroid.im))),
            p.region.area,
            p.region.connectivity,
            kc,
            if p.connectivity_ok { "ok" } else { "exceeds" },
            p.closure_contains_delta
        );
        for b in &p.boundary_checks {
            let _ = writeln!(s, "  boundary {}: absolutely continuous {} ({})", b.label, b.absolutely_continuous, b.detail);
        }
    }
    for (a, b, overlap, singular) in &d.harmonic_singularity {
        let _ = writeln!(s, "harmonic measures {a},{b}: overlap {overlap:.3e}, mutually singular {singular}");
    }
    for line in &d.diagnostics {
        let _ = writeln!(s, "note: {line}");
    }
    if d.heuristic {
        s.push_str("partition reconstructed at component granularity\n");
    }
    s
}

fn round6(v: f64) -> f64 {
    let r = (v * 1e6).round() / 1e6;
    if r == 0.0 {
        0.0
    } else {
        r
    }
}

fn load_scene(path: &Path) -> Result<Scene> {
    let meta = std::fs::metadata(path)?;
    if meta.len() > scene::MAX_SCENE_BYTES as u64 {
        return Err(Error::invalid(format!("{} is {} bytes; the limit is {}", path.display(), meta.len(), scene::MAX_SCENE_BYTES)));
    }
    let text = std::fs::read_to_string(path)?;
    parse_scene(&text).map_err(|e| match e {
        Error::Parse { line, column, message } => Error::Parse {
            line,
            column,
            message: format!("{}: {message}", path.display()),
        },
        other => other,
    })
}

/// Points from a CSV file with columns `re` and `im`.
pub fn read_points(path: &Path) -> Result<Vec<Complex64>> {
    let mut reader = csv::Reader::from_path(path).map_err(csv_err)?;
    let headers = reader.headers().map_err(csv_err)?.clone();
    let col = |name: &str| {
        headers
            .iter()
            .position(|h| h.trim() == name)
            .ok_or_else(|| Error::invalid(format!("{}: missing column `{name}` (header must be re,im)", path.display())))
    };
    let (ire, iim) = (col("re")?, col("im")?);
    let mut out = Vec::new();
    for (row, rec) in reader.records().enumerate() {
        let rec = rec.map_err(csv_err)?;
        let field = |i: usize| -> Result<f64> {
            let s = rec.get(i).unwrap_or("").trim();
            s.parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| Error::invalid(format!("{}: row {}: malformed number `{s}`", path.display(), row + 2)))
        };
        out.push(Complex64::new(field(ire)?, field(iim)?));
    }
    Ok(out)
}

fn complex_arg(name: &str, s: &str) -> Result<Complex64> {
    parse_complex(s.trim()).ok_or_else(|| Error::invalid(format!("{name}: malformed complex number `{s}`")))
}

/// `lo,hi` with complex corners.
fn window_arg(s: &str) -> Result<(Complex64, Complex64)> {
    let parts: Vec<&str> = s.split(',').collect();
    let [lo, hi] = parts.as_slice() else {
        return Err(Error::invalid(format!("--window takes `lo,hi`, found `{s}`")));
    };
    let (lo, hi) = (complex_arg("--window", lo)?, complex_arg("--window", hi)?);
    if !(hi.re > lo.re && hi.im > lo.im) {
        return Err(Error::invalid(format!("--window: `{s}` is empty")));
    }
    Ok((lo, hi))
}

/// A number or a fraction `p/q`.
fn resolution_arg(s: &str) -> Result<f64> {
    let v = match s.split_once('/') {
        Some((p, q)) => p.trim().parse::<f64>().ok().zip(q.trim().parse::<f64>().ok()).map(|(p, q)| p / q),
        None => s.trim().parse::<f64>().ok(),
    };
    v.filter(|v| v.is_finite() && *v > 0.0)
        .ok_or_else(|| Error::invalid(format!("--res: expected a positive number or fraction, found `{s}`")))
}

fn k_arg(s: &str) -> Result<KPiece> {
    let scene = parse_scene(&format!("K: {s}")).map_err(|e| match e {
        Error::Parse { column, message, .. } => Error::invalid(format!("--K `{s}`: column {}: {message}", column.saturating_sub(3))),
        other => other,
    })?;
    Ok(scene.k[0])
}

fn scan_config(scene: &Scene, window: Option<&str>, res: &str) -> Result<ScanConfig> {
    let (lo, hi) = match window {
        Some(w) => window_arg(w)?,
        None => scene.window()?,
    };
    Ok(ScanConfig::new(lo, hi, resolution_arg(res)?))
}

fn emit(path: Option<&Path>, bytes: &[u8], stdout: &mut dyn Write) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, bytes)?,
        None => stdout.write_all(bytes)?,
    }
    Ok(())
}

fn json_bytes<T: Serialize>(v: &T) -> Result<Vec<u8>> {
    let mut bytes = serde_json::to_vec_pretty(v).map_err(json_err)?;
    bytes.push(b'\n');
    Ok(bytes)
}

fn csv_err(e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::Io(io),
        other => Error::invalid(format!("csv: {other:?}")),
    }
}

fn json_err(e: serde_json::Error) -> Error {
    Error::invalid(format!("json: {e}"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fractions_and_windows() {
        assert_eq!(resolution_arg("1/64").unwrap(), 1.0 / 64.0);
        assert_eq!(resolution_arg("0.25").unwrap(), 0.25);
        assert!(resolution_arg("0").is_err());
        assert!(resolution_arg("1/0").is_err());
        let (lo, hi) = window_arg("-1-1i,1+2i").unwrap();
        assert_eq!((lo, hi), (Complex64::new(-1.0, -1.0), Complex64::new(1.0, 2.0)));
        assert!(window_arg("1,0").is_err());
    }

    #[test]
    fn k_argument_uses_scene_syntax() {
        assert_eq!(
            k_arg("annulus center 0 inner 0.5 outer 1").unwrap(),
            KPiece::Annulus {
                center: Complex64::new(0.0, 0.0),
                inner: 0.5,
                outer: 1.0
            }
        );
        assert!(k_arg("blob").is_err());
    }

    #[test]
    fn error_classes_map_to_exit_codes() {
        assert_eq!(exit_code(&Error::invalid("x")), EXIT_INVALID);
        assert_eq!(exit_code(&Error::DecompositionFailure("x".into())), EXIT_DECOMPOSITION);
        assert_eq!(
            exit_code(&Error::WindowTooSmall {
                operation: "scan_abpe",
                detail: String::new()
            }),
            EXIT_WINDOW
        );
    }
}
