//! The isoperimetric inequality pipeline for admissible candidate sets.
//!
//! For a set `E` in the disk-in-cylinder class with `lambda = 1/r_cyl`, the
//! calibration argument gives the perimeter estimate
//!
//! ```text
//! |dE| >= |dB_lambda| + kappa(lambda) (|E| - |B_lambda|),
//! ```
//!
//! the right side being `f(lambda)` of the one-parameter family
//! `f(rho) = kappa(rho) |E| + |dB_rho| - kappa(rho) |B_rho|`.  Because the
//! spheres are critical points of `A - kappa V` and `rho -> |B_rho|` is a
//! decreasing bijection onto `(0, inf)`, `f` is convex with a unique
//! minimum at the `mu` with `|B_mu| = |E|`, where `f(mu) = |dB_mu|`
//! by direct cancellation.  Chaining,
//!
//! ```text
//! |dE| >= f(lambda) >= f(mu) = |dB_mu|,
//! ```
//!
//! and the isoperimetric deficit `|dE| - |dB_mu|` is non-negative, zero
//! only for the spheres themselves.  `kappa(rho)` is the measured
//! calibration constant (`2 n rho`; see the calibration module for the
//! normalization note) and enters every formula as measured.

use crate::calibration::measured_kappa;
use crate::error::{Error, Result};
use crate::group::Dimension;
use crate::radial::{set_perimeter, set_volume, RadialSet};
use crate::sphere::PansuSphere;

/// Relative slack for the chain inequalities; violations beyond this are an
/// implementation bug, not a property of the input.
pub const CHAIN_REL_TOL: f64 = 1e-6;

/// Volumes, perimeters, and the isoperimetric deficit of one candidate set.
#[derive(Debug, Clone, Copy)]
pub struct DeficitReport {
    /// |E|
    pub volume: f64,
    /// |dE|
    pub perimeter: f64,
    /// 1 / r_cyl
    pub lambda: f64,
    /// The curvature with |B_mu| = |E|.
    pub mu: f64,
    /// |dB_mu|
    pub sphere_perimeter: f64,
    /// f(lambda) = |dB_lambda| + kappa(lambda) (|E| - |B_lambda|).
    pub estimate_rhs: f64,
    /// |dE| - |dB_mu|; non-negative up to numerical tolerance.
    pub deficit: f64,
}

/// `f(rho) = kappa(rho) vol + |dB_rho| - kappa(rho) |B_rho|`.
pub fn f_rho(vol: f64, dim: Dimension, rho: f64, tol: f64) -> Result<f64> {
    if !(vol > 0.0) {
        return Err(Error::OutOfRange {
            name: "vol",
            value: vol,
            range: "vol > 0",
        });
    }
    let sphere = PansuSphere::new(dim, rho)?;
    let kappa = measured_kappa(dim, rho)?;
    // grouped so that vol = |B_rho| cancels exactly, leaving |dB_rho|
    Ok(sphere.area(tol)? + kappa * (vol - sphere.volume(tol)?))
}

/// Closed-form derivative `f'(rho) = kappa'(rho) (vol - |B_rho|)`, with
/// `kappa` linear in `rho` so `kappa'(rho) = kappa(rho) / rho`.  The
/// quadrature terms cancel by the stationarity of `A - kappa V` on the
/// sphere family.
pub fn f_prime(vol: f64, dim: Dimension, rho: f64, tol: f64) -> Result<f64> {
    if !(vol > 0.0) {
        return Err(Error::OutOfRange {
            name: "vol",
            value: vol,
            range: "vol > 0",
        });
    }
    let sphere = PansuSphere::new(dim, rho)?;
    let kappa_prime = measured_kappa(dim, rho)? / rho;
    Ok(kappa_prime * (vol - sphere.volume(tol)?))
}

/// The unique `mu` with `|B_mu| = vol`, by bracketing bisection on the
/// decreasing map `rho -> |B_rho|`.  The bracket grows geometrically from
/// `rho = 1` until the sign changes; bisection stops when the volume
/// residual drops below `tol * vol`.
pub fn find_mu(vol: f64, dim: Dimension, tol: f64) -> Result<f64> {
    if !(vol > 0.0) || !vol.is_finite() {
        return Err(Error::OutOfRange {
            name: "vol",
            value: vol,
            range: "vol > 0",
        });
    }
    let quad_tol = (0.1 * tol).clamp(1e-14, 1e-9);
    let ball = |rho: f64| -> Result<f64> { PansuSphere::new(dim, rho)?.volume(quad_tol) };

    let mut lo = 1.0;
    let mut hi = 1.0;
    let v1 = ball(1.0)?;
    if v1 > vol {
        // volume too large at rho = 1: grow rho
        loop {
            hi *= 2.0;
            if ball(hi)? <= vol {
                lo = hi / 2.0;
                break;
            }
            if hi > 1e80 {
                return Err(Error::NonFinite { context: "find_mu bracket" });
            }
        }
    } else {
        loop {
            lo *= 0.5;
            if ball(lo)? >= vol {
                hi = lo * 2.0;
                break;
            }
            if lo < 1e-80 {
                return Err(Error::NonFinite { context: "find_mu bracket" });
            }
        }
    }

    for _ in 0..300 {
        let mid = 0.5 * (lo + hi);
        let v = ball(mid)?;
        if (v - vol).abs() <= tol * vol {
            return Ok(mid);
        }
        if v > vol {
            lo = mid;
        } else {
            hi = mid;
        }
        if (hi - lo) <= f64::EPSILON * mid {
            return Ok(mid);
        }
    }
    Err(Error::InvariantViolation(
        "volume bisection stalled before reaching tolerance".into(),
    ))
}

/// Both sides of the perimeter estimate: `(|dE|, f(lambda))` with
/// `lambda = 1/r_cyl`.  Errors with an invariant violation when the left
/// side falls below the right by more than `tol`.
pub fn check_estimate(e: &RadialSet, tol: f64) -> Result<(f64, f64)> {
    let dim = e.dim();
    let lambda = 1.0 / e.r_cyl();
    let lhs = set_perimeter(e, tol)?;
    let vol = set_volume(e, tol)?;
    let rhs = f_rho(vol, dim, lambda, tol)?;
    if lhs < rhs - tol.max(CHAIN_REL_TOL * lhs.abs()) {
        return Err(Error::InvariantViolation(format!(
            "perimeter estimate violated: |dE| = {lhs} < {rhs}"
        )));
    }
    Ok((lhs, rhs))
}

/// Run the full chain on a candidate set and assemble the report.
///
/// Asserts `|dE| >= f(lambda) >= f(mu) = |dB_mu|` within [`CHAIN_REL_TOL`]
/// and returns an invariant violation otherwise.
pub fn deficit(e: &RadialSet, tol: f64) -> Result<DeficitReport> {
    let dim = e.dim();
    let lambda = 1.0 / e.r_cyl();
    let volume = set_volume(e, tol)?;
    let perimeter = set_perimeter(e, tol)?;
    let estimate_rhs = f_rho(volume, dim, lambda, tol)?;
    let mu = find_mu(volume, dim, tol.min(1e-9))?;
    let sphere_perimeter = PansuSphere::new(dim, mu)?.area(tol)?;
    let f_mu = f_rho(volume, dim, mu, tol)?;

    let slack = CHAIN_REL_TOL * perimeter.abs().max(1.0);
    if perimeter < estimate_rhs - slack {
        return Err(Error::InvariantViolation(format!(
            "chain violated: |dE| = {perimeter} < f(lambda) = {estimate_rhs}"
        )));
    }
    if estimate_rhs < f_mu - slack {
        return Err(Error::InvariantViolation(format!(
            "chain violated: f(lambda) = {estimate_rhs} < f(mu) = {f_mu}"
        )));
    }

    Ok(DeficitReport {
        volume,
        perimeter,
        lambda,
        mu,
        sphere_perimeter,
        estimate_rhs,
        deficit: perimeter - sphere_perimeter,
    })
}
