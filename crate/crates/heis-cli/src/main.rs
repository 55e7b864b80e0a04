//! `heis` - sub-Riemannian Heisenberg-group geometry from the command line.
//!
//! Subcommands: `sphere` (closed quantities of one sphere), `geodesic`
//! (trace CSV), `deficit` (isoperimetric report for one candidate set),
//! `sweep` (family sweep CSV), `verify` (invariant battery).
//!
//! Exit codes: 0 ok, 2 usage, 3 numerical failure, 4 invariant failure,
//! 5 I/O failure.

// Validation sites use `!(x > 0.0)` so that NaN flag values are rejected
// along with non-positive ones.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod document;
mod output;
mod verify;

use std::f64::consts::PI;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use heis::calibration::measured_kappa;
use heis::error::Error;
use heis::families::{bump_set, cone_set, slab_set, sphere_set};
use heis::geodesic::{geodesic_state, GeodesicSpec};
use heis::group::{Dimension, FrameVector, Point};
use heis::isoperimetry::{deficit, DeficitReport};
use heis::radial::RadialSet;
use heis::sphere::PansuSphere;

use document::ProfileDocument;
use output::{f17, write_atomic, JsonObject};

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Numerical(String),
    Invariant(String),
    Io(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Numerical(_) => 3,
            CliError::Invariant(_) => 4,
            CliError::Io(_) => 5,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m)
            | CliError::Numerical(m)
            | CliError::Invariant(m)
            | CliError::Io(m) => m,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::OutOfRange { .. } | Error::InvalidSet(_) => CliError::Usage(e.to_string()),
            Error::InvariantViolation(_) => CliError::Invariant(e.to_string()),
            _ => CliError::Numerical(e.to_string()),
        }
    }
}

#[derive(Parser)]
#[command(
    name = "heis",
    version,
    about = "Sub-Riemannian geometry of the Heisenberg group: spheres, geodesics, and isoperimetric deficits"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Perimeter, volume, pole height, and calibration constant of one sphere.
    Sphere {
        /// Curvature of the sphere (positive).
        #[arg(long)]
        lambda: f64,
        /// Ambient dimension n of H^n.
        #[arg(long, default_value_t = 1)]
        n: usize,
        /// Quadrature tolerance.
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
    },
    /// Trace a geodesic; CSV columns s,x_1,y_1,...,x_n,y_n,t.
    Geodesic {
        /// Curvature (may be zero for a straight line).
        #[arg(long)]
        lambda: f64,
        #[arg(long, default_value_t = 1)]
        n: usize,
        /// Arc length to trace; defaults to pi/|lambda| when lambda != 0.
        #[arg(long)]
        length: Option<f64>,
        /// Number of trace rows after the initial point.
        #[arg(long, default_value_t = 100)]
        steps: usize,
        /// Start at the south pole (0, -pi/(4 lambda^2)) instead of the origin.
        #[arg(long, default_value_t = false)]
        from_pole: bool,
        /// Write the CSV here instead of stdout.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Isoperimetric deficit report for one candidate set (JSON).
    Deficit {
        /// Path to a profile JSON document.
        #[arg(long, conflicts_with = "family")]
        input: Option<PathBuf>,
        /// Builtin family: sphere, slab, bump, or cone.
        #[arg(long)]
        family: Option<String>,
        #[command(flatten)]
        params: FamilyParams,
        #[arg(long, default_value_t = 1)]
        n: usize,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
    },
    /// Sweep one family parameter and write a CSV of deficit reports.
    Sweep {
        /// Builtin family: sphere, slab, bump, or cone.
        #[arg(long)]
        family: String,
        /// First value of the swept parameter (h for slab/cone, lambda for
        /// sphere, amplitude for bump).
        #[arg(long)]
        from: f64,
        /// Last value of the swept parameter.
        #[arg(long)]
        to: f64,
        /// Number of rows.
        #[arg(long)]
        steps: usize,
        /// Output CSV path.
        #[arg(long)]
        output: PathBuf,
        #[command(flatten)]
        params: FamilyParams,
        #[arg(long, default_value_t = 1)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
    },
    /// Run the invariant battery and emit a pass/fail JSON summary.
    Verify {
        /// Dimensions to check, comma separated.
        #[arg(long, value_delimiter = ',', default_value = "1,2")]
        n: Vec<usize>,
        /// Curvatures to check, comma separated.
        #[arg(long, value_delimiter = ',', default_value = "0.5,1,2")]
        lambda: Vec<f64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
    },
}

#[derive(Args)]
struct FamilyParams {
    /// Sphere curvature (sphere and bump families).
    #[arg(long)]
    lambda: Option<f64>,
    /// Half-height (slab and cone families).
    #[arg(long)]
    h: Option<f64>,
    /// Cylinder radius (slab and cone families).
    #[arg(long)]
    r: Option<f64>,
    /// Bump amplitude added to the upper profile (bump family).
    #[arg(long)]
    amplitude: Option<f64>,
    /// Profile knot count for sampled families.
    #[arg(long, default_value_t = 200)]
    knots: usize,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.cmd) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.code())
        }
    }
}

fn require_positive(name: &str, value: f64) -> Result<f64, CliError> {
    if !(value > 0.0) || !value.is_finite() {
        return Err(CliError::Usage(format!(
            "{name} must be positive, got {value}"
        )));
    }
    Ok(value)
}

fn make_dim(n: usize) -> Result<Dimension, CliError> {
    Dimension::new(n).map_err(|_| CliError::Usage("--n must be at least 1".into()))
}

fn run(cmd: Cmd) -> Result<(), CliError> {
    match cmd {
        Cmd::Sphere { lambda, n, tol } => cmd_sphere(lambda, n, tol),
        Cmd::Geodesic {
            lambda,
            n,
            length,
            steps,
            from_pole,
            output,
        } => cmd_geodesic(lambda, n, length, steps, from_pole, output),
        Cmd::Deficit {
            input,
            family,
            params,
            n,
            tol,
        } => cmd_deficit(input, family, params, n, tol),
        Cmd::Sweep {
            family,
            from,
            to,
            steps,
            output,
            params,
            n,
            seed,
            tol,
        } => cmd_sweep(&family, from, to, steps, &output, params, n, seed, tol),
        Cmd::Verify {
            n,
            lambda,
            seed,
            tol,
        } => cmd_verify(&n, &lambda, seed, tol),
    }
}

fn cmd_sphere(lambda: f64, n: usize, tol: f64) -> Result<(), CliError> {
    require_positive("--lambda", lambda)?;
    require_positive("--tol", tol)?;
    let dim = make_dim(n)?;
    let sphere = PansuSphere::new(dim, lambda)?;
    let geom = sphere.geometry(tol)?;
    let kappa = measured_kappa(dim, lambda)?;
    let json = JsonObject::new()
        .num("area", geom.area)
        .num("volume", geom.volume)
        .num("pole_height", geom.pole_height)
        .num("equator_radius", sphere.equator_radius())
        .num("kappa", kappa)
        .finish();
    println!("{json}");
    Ok(())
}

fn cmd_geodesic(
    lambda: f64,
    n: usize,
    length: Option<f64>,
    steps: usize,
    from_pole: bool,
    output: Option<PathBuf>,
) -> Result<(), CliError> {
    let dim = make_dim(n)?;
    if steps == 0 {
        return Err(CliError::Usage("--steps must be at least 1".into()));
    }
    let length = match length {
        Some(l) => require_positive("--length", l)?,
        None if lambda != 0.0 => PI / lambda.abs(),
        None => {
            return Err(CliError::Usage(
                "--length is required when --lambda is 0".into(),
            ))
        }
    };
    let start = if from_pole {
        require_positive("--lambda", lambda)?;
        Point::on_axis(dim, -PI / (4.0 * lambda * lambda))
    } else {
        Point::origin(dim)
    };
    let spec = GeodesicSpec::new(lambda, start, FrameVector::x_axis(dim, 0))?;

    let mut csv = String::from("s");
    for i in 1..=n {
        csv.push_str(&format!(",x_{i},y_{i}"));
    }
    csv.push_str(",t\n");
    for k in 0..=steps {
        let s = length * k as f64 / steps as f64;
        let st = geodesic_state(&spec, s);
        csv.push_str(&f17(s));
        for v in st.point.z() {
            csv.push(',');
            csv.push_str(&f17(*v));
        }
        csv.push(',');
        csv.push_str(&f17(st.point.t()));
        csv.push('\n');
    }
    match output {
        Some(path) => write_atomic(&path, &csv),
        None => {
            print!("{csv}");
            Ok(())
        }
    }
}

fn build_family(
    family: &str,
    params: &FamilyParams,
    dim: Dimension,
) -> Result<RadialSet, CliError> {
    match family {
        "sphere" => {
            let lambda = require_positive("--lambda", params.lambda.unwrap_or(1.0))?;
            Ok(sphere_set(dim, lambda, params.knots)?)
        }
        "bump" => {
            let lambda = require_positive("--lambda", params.lambda.unwrap_or(1.0))?;
            let amplitude = params.amplitude.unwrap_or(0.05);
            Ok(bump_set(dim, lambda, amplitude, params.knots)?)
        }
        "slab" => {
            let h = params.h.unwrap_or(1.0);
            let r = require_positive("--r", params.r.unwrap_or(1.0))?;
            Ok(slab_set(dim, h, r, params.knots.max(2))?)
        }
        "cone" => {
            let h = params.h.unwrap_or(1.0);
            let r = require_positive("--r", params.r.unwrap_or(1.0))?;
            Ok(cone_set(dim, h, r, params.knots.max(2))?)
        }
        other => Err(CliError::Usage(format!(
            "unknown family `{other}`; expected sphere, slab, bump, or cone"
        ))),
    }
}

fn report_json(rep: &DeficitReport) -> String {
    JsonObject::new()
        .num("volume", rep.volume)
        .num("perimeter", rep.perimeter)
        .num("lambda", rep.lambda)
        .num("mu", rep.mu)
        .num("sphere_perimeter", rep.sphere_perimeter)
        .num("estimate_rhs", rep.estimate_rhs)
        .num("deficit", rep.deficit)
        .finish()
}

fn cmd_deficit(
    input: Option<PathBuf>,
    family: Option<String>,
    params: FamilyParams,
    n: usize,
    tol: f64,
) -> Result<(), CliError> {
    require_positive("--tol", tol)?;
    let dim = make_dim(n)?;
    let set = match (input, family) {
        (Some(path), None) => ProfileDocument::load(&path)?.into_set()?,
        (None, Some(family)) => build_family(&family, &params, dim)?,
        _ => {
            return Err(CliError::Usage(
                "exactly one of --input or --family is required".into(),
            ))
        }
    };
    let rep = deficit(&set, tol)?;
    println!("{}", report_json(&rep));
    if rep.deficit < -tol {
        return Err(CliError::Invariant(format!(
            "negative deficit {} beyond tolerance {tol}",
            rep.deficit
        )));
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn cmd_sweep(
    family: &str,
    from: f64,
    to: f64,
    steps: usize,
    output: &Path,
    mut params: FamilyParams,
    n: usize,
    _seed: u64,
    tol: f64,
) -> Result<(), CliError> {
    require_positive("--tol", tol)?;
    let dim = make_dim(n)?;
    if steps == 0 {
        return Err(CliError::Usage("--steps must be at least 1".into()));
    }
    if !(from <= to) {
        return Err(CliError::Usage(format!(
            "reversed range: --from {from} exceeds --to {to}"
        )));
    }
    let mut csv = String::from("volume,perimeter,mu,sphere_perimeter,deficit\n");
    for k in 0..steps {
        let value = if steps == 1 {
            from
        } else {
            from + (to - from) * k as f64 / (steps - 1) as f64
        };
        // the swept parameter is the family's primary one
        match family {
            "slab" | "cone" => params.h = Some(value),
            "sphere" => params.lambda = Some(value),
            "bump" => params.amplitude = Some(value),
            _ => {}
        }
        let set = build_family(family, &params, dim)?;
        let rep = deficit(&set, tol)?;
        for (i, v) in [
            rep.volume,
            rep.perimeter,
            rep.mu,
            rep.sphere_perimeter,
            rep.deficit,
        ]
        .iter()
        .enumerate()
        {
            if i > 0 {
                csv.push(',');
            }
            csv.push_str(&f17(*v));
        }
        csv.push('\n');
    }
    write_atomic(output, &csv)
}

fn cmd_verify(ns: &[usize], lambdas: &[f64], seed: u64, tol: f64) -> Result<(), CliError> {
    if ns.is_empty() || lambdas.is_empty() {
        return Err(CliError::Usage("--n and --lambda must be non-empty".into()));
    }
    if tol < 0.0 || !tol.is_finite() {
        return Err(CliError::Usage(format!(
            "--tol must be non-negative, got {tol}"
        )));
    }
    for &l in lambdas {
        require_positive("--lambda", l)?;
    }
    for &n in ns {
        make_dim(n)?;
    }
    let (json, pass) = verify::run(ns, lambdas, seed, tol)?;
    println!("{json}");
    if !pass {
        return Err(CliError::Invariant(
            "one or more invariant checks failed".into(),
        ));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn error_exit_codes() {
        assert_eq!(CliError::Usage(String::new()).code(), 2);
        assert_eq!(CliError::Numerical(String::new()).code(), 3);
        assert_eq!(CliError::Invariant(String::new()).code(), 4);
        assert_eq!(CliError::Io(String::new()).code(), 5);
    }

    #[test]
    fn core_errors_map_to_documented_codes() {
        let quad = Error::Quadrature {
            requested: 1e-30,
            achieved: 1e-14,
        };
        assert_eq!(CliError::from(quad).code(), 3);
        let chain = Error::InvariantViolation("chain".into());
        assert_eq!(CliError::from(chain).code(), 4);
        let range = Error::OutOfRange {
            name: "lambda",
            value: 0.0,
            range: "lambda > 0",
        };
        assert_eq!(CliError::from(range).code(), 2);
        assert_eq!(CliError::from(Error::InvalidSet(Vec::new())).code(), 2);
        assert_eq!(
            CliError::from(Error::NonFinite {
                context: "quadrature integrand"
            })
            .code(),
            3
        );
    }
}
