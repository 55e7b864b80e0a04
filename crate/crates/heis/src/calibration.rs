//! Calibration vector fields on the solid cylinder.
//!
//! Vertically translating one hemisphere of the curvature-`lambda` sphere
//! foliates the cylinder `C = {|z| <= 1/lambda}`; the horizontal unit
//! normal to the leaves is a vector field on `C` minus the axis whose value
//! depends only on `z`.  With `c = sqrt(1 - lambda^2 |z|^2) / |z|` the
//! upper-hemisphere field is
//!
//! ```text
//! X = sum_i (-lambda x_i - c y_i) X_i + (-lambda y_i + c x_i) Y_i,
//! ```
//!
//! and the lower-hemisphere field flips the sign of `c`.  Both fields are
//! unit and horizontal, and their Riemannian divergence is the constant
//! `-2 n lambda`: the frame fields are divergence-free and the coefficients
//! are t-independent, so the divergence is the Euclidean divergence in `z`,
//! whose `c`-terms cancel pairwise.
//!
//! Note on normalization: with the mean-curvature convention
//! `-nH = div nu_H` this constant corresponds to `H = 2 lambda`; texts that
//! normalize `H = lambda` quote the divergence as `-n lambda`.  Nothing
//! downstream assumes either convention: the constant is measured by finite
//! differences and the measured value is what every identity uses.  See
//! [`CalConst`].
//!
//! The divergence theorem applied to the part of a candidate set above (or
//! below) the horizontal hyperplane yields a flux identity that holds for
//! every admissible set, with the calibration bound `<X, nu_H> <= 1`
//! saturated exactly on the matching hemisphere.

use crate::error::{Error, Result};
use crate::group::{Dimension, FrameVector};
use crate::quad;
use crate::radial::RadialSet;

/// Which hemisphere foliation the field comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Half {
    Upper,
    Lower,
}

/// Default step for the finite-difference divergence probe.
pub const DEFAULT_FD_STEP: f64 = 1e-5;

/// Tolerance for the constancy of the measured divergence.
pub const KAPPA_SPREAD_TOL: f64 = 1e-6;

/// The horizontal unit normal field of one hemisphere foliation of the
/// cylinder of radius `1/lambda`, defined on the cylinder minus the axis.
#[derive(Debug, Clone, Copy)]
pub struct CalibrationField {
    dim: Dimension,
    lambda: f64,
    half: Half,
}

impl CalibrationField {
    pub fn new(dim: Dimension, lambda: f64, half: Half) -> Result<Self> {
        if !(lambda > 0.0) || !lambda.is_finite() {
            return Err(Error::OutOfRange {
                name: "lambda",
                value: lambda,
                range: "lambda > 0",
            });
        }
        Ok(CalibrationField { dim, lambda, half })
    }

    pub fn dim(&self) -> Dimension {
        self.dim
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn half(&self) -> Half {
        self.half
    }

    fn c_sign(&self) -> f64 {
        match self.half {
            Half::Upper => 1.0,
            Half::Lower => -1.0,
        }
    }

    /// Field value at horizontal position `z` (independent of `t`).
    ///
    /// Errors on the axis (`z = 0`) and outside the cylinder.
    pub fn at(&self, z: &[f64]) -> Result<FrameVector> {
        let n = self.dim.n();
        assert_eq!(z.len(), 2 * n, "z must have length 2n");
        let r2: f64 = z.iter().map(|v| v * v).sum();
        let r = r2.sqrt();
        if r == 0.0 {
            return Err(Error::OnAxis);
        }
        let lr = self.lambda * r;
        if lr > 1.0 + 1e-12 {
            return Err(Error::OutOfRange {
                name: "|z|",
                value: r,
                range: "|z| <= 1/lambda",
            });
        }
        let c = self.c_sign() * (1.0 - (lr * lr).min(1.0)).sqrt() / r;
        let l = self.lambda;
        let mut a = Vec::with_capacity(2 * n);
        for i in 0..n {
            let (x, y) = (z[2 * i], z[2 * i + 1]);
            a.push(-l * x - c * y);
            a.push(-l * y + c * x);
        }
        Ok(FrameVector::horizontal(a))
    }

    /// Riemannian divergence at `z` by central finite differences of the
    /// frame coefficients.  Valid because the frame fields are
    /// divergence-free and the coefficients are t-independent, so
    /// `div = sum_i du_i/dx_i + dv_i/dy_i`.
    pub fn measure_divergence(&self, z: &[f64], h: f64) -> Result<f64> {
        let n = self.dim.n();
        assert_eq!(z.len(), 2 * n, "z must have length 2n");
        if !(h > 0.0) {
            return Err(Error::OutOfRange {
                name: "h",
                value: h,
                range: "h > 0",
            });
        }
        let r: f64 = z.iter().map(|v| v * v).sum::<f64>().sqrt();
        if r <= 2.0 * h {
            return Err(Error::StencilOutOfDomain);
        }
        let mut div = 0.0;
        let mut probe = z.to_vec();
        for k in 0..2 * n {
            probe[k] = z[k] + h;
            let plus = self.at(&probe).map_err(|_| Error::StencilOutOfDomain)?;
            probe[k] = z[k] - h;
            let minus = self.at(&probe).map_err(|_| Error::StencilOutOfDomain)?;
            probe[k] = z[k];
            div += (plus.a()[k] - minus.a()[k]) / (2.0 * h);
        }
        Ok(div)
    }
}

/// The measured divergence constant `kappa = -div X` of a calibration
/// field, together with the spread observed across the sample points.
///
/// The measured value is `2 n lambda`.  `conventional_n_lambda` carries the
/// value `n lambda` quoted under the `H = lambda` mean-curvature
/// normalization so reports can show both; no identity in this crate uses
/// it.
#[derive(Debug, Clone, Copy)]
pub struct CalConst {
    pub dim: Dimension,
    pub lambda: f64,
    /// Measured constant `-div X`.
    pub kappa: f64,
    /// Max minus min of the divergence over the sample points.
    pub spread: f64,
}

impl CalConst {
    /// Measure the divergence constant of the upper field at deterministic
    /// sample points spread over radii and directions.
    pub fn measure(dim: Dimension, lambda: f64) -> Result<CalConst> {
        let field = CalibrationField::new(dim, lambda, Half::Upper)?;
        let n = dim.n();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        let mut sum = 0.0;
        let mut count = 0;
        for (j, frac) in [0.35, 0.5, 0.65, 0.8].iter().enumerate() {
            for k in 0..3usize {
                // fixed well-spread directions, no randomness
                let mut dir: Vec<f64> = (0..2 * n)
                    .map(|m| (1.0 + 0.7 * m as f64 + 1.3 * j as f64 + 2.1 * k as f64).sin())
                    .collect();
                let norm = dir.iter().map(|v| v * v).sum::<f64>().sqrt();
                let r = frac / lambda;
                for v in dir.iter_mut() {
                    *v *= r / norm;
                }
                let d = field.measure_divergence(&dir, DEFAULT_FD_STEP)?;
                lo = lo.min(d);
                hi = hi.max(d);
                sum += d;
                count += 1;
            }
        }
        let kappa = -(sum / count as f64);
        let spread = hi - lo;
        if spread > KAPPA_SPREAD_TOL * kappa.abs().max(1.0) {
            return Err(Error::InvariantViolation(format!(
                "calibration divergence is not constant: spread {spread:.3e}"
            )));
        }
        Ok(CalConst {
            dim,
            lambda,
            kappa,
            spread,
        })
    }

    /// The `n lambda` value under the alternative normalization, reported
    /// alongside the measured constant.
    pub fn conventional_n_lambda(&self) -> f64 {
        self.dim.n() as f64 * self.lambda
    }
}

/// Measured `kappa` for dimension `n` at curvature `lambda`.
pub fn measured_kappa(dim: Dimension, lambda: f64) -> Result<f64> {
    Ok(CalConst::measure(dim, lambda)?.kappa)
}

/// Integrate `g(r) r^p` over `[a, b]` inside the cylinder of radius
/// `1/lambda` using the substitution `r = sin(theta)/lambda`, which removes
/// the square-root endpoint singularity of factors `sqrt(1 - lambda^2 r^2)`.
fn radial_theta_integral<G: Fn(f64, f64) -> f64>(
    g: &G, // g(r, cos_theta) where cos_theta = sqrt(1 - lambda^2 r^2)
    lambda: f64,
    a: f64,
    b: f64,
    tol: f64,
) -> Result<f64> {
    let th_a = (lambda * a).clamp(-1.0, 1.0).asin();
    let th_b = (lambda * b).clamp(-1.0, 1.0).asin();
    let f = |th: f64| {
        let (s, c) = th.sin_cos();
        g(s / lambda, c) * c / lambda
    };
    quad::integrate(&f, th_a, th_b, tol, tol)
}

/// Flux of the field through the horizontal disk `D` of radius `1/lambda`:
/// `int_D <field, N_D> dD` where `N_D` is the Riemannian unit normal to `D`
/// pointing up into `{t >= 0}` and `dD` its Riemannian area element.
///
/// On the frame, `N_D = (sum y_i X_i - x_i Y_i + T) / sqrt(1 + |z|^2)` and
/// `dD = sqrt(1 + |z|^2) dz` (the metric Gram determinant of the disk), so
/// the integrand per unit Lebesgue measure in `z` reduces to
/// `-+ r sqrt(1 - lambda^2 r^2)` for the upper/lower field.
pub fn disk_flux(field: &CalibrationField, tol: f64) -> Result<f64> {
    let sigma = field.dim.unit_sphere_area();
    let p = 2 * field.dim.n() as i32;
    let v = radial_theta_integral(
        &|r: f64, cos_th: f64| r.powi(p) * cos_th,
        field.lambda,
        0.0,
        1.0 / field.lambda,
        tol,
    )?;
    Ok(-field.c_sign() * sigma * v)
}

fn check_lambda_matches(field: &CalibrationField, e: &RadialSet) -> Result<()> {
    assert_eq!(field.dim.n(), e.dim().n(), "dimension mismatch");
    if (field.lambda * e.r_cyl() - 1.0).abs() > 1e-12 {
        return Err(Error::OutOfRange {
            name: "lambda",
            value: field.lambda,
            range: "lambda must equal 1 / r_cyl of the candidate set",
        });
    }
    Ok(())
}

/// `int <field, nu_H> d|dE|` over the boundary part of the matching half of
/// the candidate set: the graph face plus the cylinder-wall strip.
///
/// For a radial graph `t = u(|z|)` the integrand per unit Lebesgue measure
/// in `z` is `r sqrt(1 - lambda^2 r^2) - lambda r u'(r)`; on the wall the
/// field is radial and `<field, nu_H> = lambda |z| = 1`.
pub fn boundary_flux(field: &CalibrationField, e: &RadialSet, tol: f64) -> Result<f64> {
    check_lambda_matches(field, e)?;
    let profile = match field.half {
        Half::Upper => e.upper(),
        Half::Lower => e.lower(),
    };
    let sigma = field.dim.unit_sphere_area();
    let p = 2 * field.dim.n() as i32;
    let lambda = field.lambda;
    let grid = profile.grid();
    let mut total = 0.0;
    let per_tol = tol / grid.len() as f64;
    for w in grid.windows(2) {
        if w[1] <= w[0] {
            continue;
        }
        total += radial_theta_integral(
            &|r: f64, cos_th: f64| (cos_th - lambda * profile.deriv(r)) * r.powi(p),
            lambda,
            w[0],
            w[1],
            per_tol,
        )?;
    }
    let r_cyl = e.r_cyl();
    let wall = (lambda * r_cyl) * r_cyl.powi(p - 1) * profile.eval(r_cyl);
    Ok(sigma * (total + wall))
}

/// Volume of the matching half of the candidate set.
fn half_volume(field: &CalibrationField, e: &RadialSet, tol: f64) -> Result<f64> {
    let profile = match field.half {
        Half::Upper => e.upper(),
        Half::Lower => e.lower(),
    };
    let sigma = field.dim.unit_sphere_area();
    let p = 2 * field.dim.n() as i32 - 1;
    let f = |r: f64| profile.eval(r) * r.powi(p);
    let mut breaks = profile.grid().to_vec();
    breaks.dedup_by(|a, b| (*a - *b).abs() <= 1e-15 * a.abs().max(1.0));
    Ok(sigma * quad::integrate_piecewise(&f, &breaks, tol, tol)?)
}

fn flux_residual_with_kappa(
    field: &CalibrationField,
    e: &RadialSet,
    kappa: f64,
    tol: f64,
) -> Result<f64> {
    check_lambda_matches(field, e)?;
    let vol = half_volume(field, e, tol)?;
    let boundary = boundary_flux(field, e, tol)?;
    let disk = disk_flux(field, tol)?;
    // On the lower half the outward normal of E^- along the disk is +N_D,
    // so the disk term enters the balance with the opposite sign.
    let oriented_disk = match field.half {
        Half::Upper => disk,
        Half::Lower => -disk,
    };
    Ok((-kappa * vol + boundary + oriented_disk).abs())
}

/// Absolute residual of the divergence identity on the matching half of the
/// candidate set:
///
/// ```text
/// -kappa |E^+-| + int_{dE, +-t>0} <field, nu_H> d|dE| +- int_D <field, N_D> dD = 0.
/// ```
///
/// The identity holds for every admissible set; only the saturation of
/// `<field, nu_H> <= 1` distinguishes the sphere (see [`saturation_gap`]).
/// `kappa` is measured, not assumed.
pub fn flux_identity_residual(field: &CalibrationField, e: &RadialSet, tol: f64) -> Result<f64> {
    let kappa = measured_kappa(field.dim, field.lambda)?;
    flux_residual_with_kappa(field, e, kappa, tol)
}

/// Same residual with a caller-supplied constant; the identity is linear in
/// `kappa`, so an offset `dk` shifts the residual by exactly `dk |E^+-|`.
pub fn flux_identity_residual_with_kappa(
    field: &CalibrationField,
    e: &RadialSet,
    kappa: f64,
    tol: f64,
) -> Result<f64> {
    flux_residual_with_kappa(field, e, kappa, tol)
}

/// The saturation gap `int (1 - <field, nu_H>) d|dE|` over the matching
/// half boundary.  Non-negative by Cauchy-Schwarz; zero exactly when the
/// half boundary is the matching hemisphere.
pub fn saturation_gap(field: &CalibrationField, e: &RadialSet, tol: f64) -> Result<f64> {
    check_lambda_matches(field, e)?;
    let profile = match field.half {
        Half::Upper => e.upper(),
        Half::Lower => e.lower(),
    };
    let sigma = field.dim.unit_sphere_area();
    let p = 2 * field.dim.n() as i32 - 1;
    let lambda = field.lambda;
    let grid = profile.grid();
    let mut total = 0.0;
    let per_tol = tol / grid.len() as f64;
    for w in grid.windows(2) {
        if w[1] <= w[0] {
            continue;
        }
        total += radial_theta_integral(
            &|r: f64, cos_th: f64| {
                let du = profile.deriv(r);
                let density = (du * du + r * r).sqrt();
                let flux = r * cos_th - lambda * r * du;
                (density - flux) * r.powi(p - 1)
            },
            lambda,
            w[0],
            w[1],
            per_tol,
        )?;
    }
    // wall gap (1 - lambda r_cyl) vanishes when lambda = 1/r_cyl
    let r_cyl = e.r_cyl();
    let wall = (1.0 - lambda * r_cyl) * r_cyl.powi(p) * profile.eval(r_cyl);
    Ok(sigma * (total + wall))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::radial::ProfileSamples;
    use std::f64::consts::PI;

    fn dim(n: usize) -> Dimension {
        Dimension::new(n).unwrap()
    }

    fn slab(h: f64, knots: usize) -> RadialSet {
        let grid: Vec<f64> = (0..knots).map(|k| k as f64 / (knots - 1) as f64).collect();
        RadialSet::new(
            dim(1),
            1.0,
            ProfileSamples::new(grid.clone(), vec![h; knots]),
            ProfileSamples::new(grid, vec![h; knots]),
        )
        .unwrap()
    }

    #[test]
    fn field_is_unit_everywhere() {
        let mut state = 7u64;
        let mut rnd = || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1);
            (state >> 11) as f64 / (1u64 << 53) as f64
        };
        for n in 1..=3usize {
            let field = CalibrationField::new(dim(n), 1.3, Half::Upper).unwrap();
            for _ in 0..1000 / n {
                let mut z: Vec<f64> = (0..2 * n).map(|_| rnd() * 2.0 - 1.0).collect();
                let norm: f64 = z.iter().map(|v| v * v).sum::<f64>().sqrt();
                if norm == 0.0 {
                    continue;
                }
                let r = (0.01 + 0.98 * rnd()) / 1.3;
                for v in z.iter_mut() {
                    *v *= r / norm;
                }
                let v = field.at(&z).unwrap();
                assert!((v.norm() - 1.0).abs() < 1e-12);
                assert_eq!(v.c(), 0.0);
            }
        }
    }

    #[test]
    fn field_at_equator_is_inward_radial() {
        let lambda = 2.0;
        for half in [Half::Upper, Half::Lower] {
            let field = CalibrationField::new(dim(1), lambda, half).unwrap();
            let z = [1.0 / lambda, 0.0];
            let v = field.at(&z).unwrap();
            assert!((v.a()[0] + lambda * z[0]).abs() < 1e-12);
            assert!(v.a()[1].abs() < 1e-12);
        }
    }

    #[test]
    fn field_rejects_axis_and_outside() {
        let field = CalibrationField::new(dim(1), 1.0, Half::Upper).unwrap();
        assert!(matches!(field.at(&[0.0, 0.0]), Err(Error::OnAxis)));
        assert!(field.at(&[1.5, 0.0]).is_err());
    }

    #[test]
    fn divergence_is_minus_two_n_lambda() {
        for n in 1..=2usize {
            for &lambda in &[0.5, 1.0, 2.0] {
                let field = CalibrationField::new(dim(n), lambda, Half::Upper).unwrap();
                let z = {
                    let mut z = vec![0.0; 2 * n];
                    z[0] = 0.5 / lambda;
                    z[1] = 0.3 / lambda;
                    z
                };
                let d = field.measure_divergence(&z, 1e-5).unwrap();
                assert!(
                    (d + 2.0 * n as f64 * lambda).abs() < 1e-6,
                    "n={n} lambda={lambda}: {d}"
                );
            }
        }
    }

    #[test]
    fn divergence_stencil_domain_checks() {
        let field = CalibrationField::new(dim(1), 1.0, Half::Upper).unwrap();
        assert!(matches!(
            field.measure_divergence(&[1e-6, 0.0], 1e-5),
            Err(Error::StencilOutOfDomain)
        ));
        assert!(matches!(
            field.measure_divergence(&[1.0, 0.0], 1e-5),
            Err(Error::StencilOutOfDomain)
        ));
    }

    #[test]
    fn measured_constant_reports_both_conventions() {
        let c = CalConst::measure(dim(1), 1.0).unwrap();
        assert!((c.kappa - 2.0).abs() < 1e-6);
        assert!((c.conventional_n_lambda() - 1.0).abs() < 1e-15);
        assert!(c.spread < 1e-6);
    }

    #[test]
    fn disk_flux_closed_form() {
        // upper, n=1, lambda=1: -2pi int r^2 sqrt(1-r^2) dr = -pi^2/8
        let field = CalibrationField::new(dim(1), 1.0, Half::Upper).unwrap();
        let v = disk_flux(&field, 1e-10).unwrap();
        assert!((v + PI * PI / 8.0).abs() < 1e-10);
        let lower = CalibrationField::new(dim(1), 1.0, Half::Lower).unwrap();
        let w = disk_flux(&lower, 1e-10).unwrap();
        assert!((v + w).abs() < 1e-12);
    }

    #[test]
    fn disk_integrand_vanishes_at_the_axis() {
        // the field is horizontal while the scaled disk normal tends to T,
        // so <field, N_D> dD per unit Lebesgue measure goes to zero
        let field = CalibrationField::new(dim(1), 1.0, Half::Upper).unwrap();
        let mut prev = f64::INFINITY;
        for &r in &[0.1, 0.01, 0.001] {
            let z = [r, 0.0];
            let v = field.at(&z).unwrap();
            // N_D scaled by sqrt(1 + |z|^2): sum y_i X_i - x_i Y_i + T
            let integrand = v.a()[0] * z[1] - v.a()[1] * z[0];
            assert!(integrand.abs() < prev);
            assert!(integrand.abs() <= r);
            prev = integrand.abs();
        }
    }

    #[test]
    fn flux_identity_holds_for_slab() {
        let e = slab(1.0, 9);
        for half in [Half::Upper, Half::Lower] {
            let field = CalibrationField::new(dim(1), 1.0, half).unwrap();
            let r = flux_identity_residual(&field, &e, 1e-9).unwrap();
            assert!(r < 1e-6, "residual {r}");
        }
    }

    #[test]
    fn slab_has_positive_saturation_gap() {
        let e = slab(1.0, 9);
        let field = CalibrationField::new(dim(1), 1.0, Half::Upper).unwrap();
        let gap = saturation_gap(&field, &e, 1e-9).unwrap();
        assert!(gap > 0.1, "gap {gap}");
    }

    #[test]
    fn kappa_offset_shifts_residual_linearly() {
        let e = slab(1.0, 9);
        let field = CalibrationField::new(dim(1), 1.0, Half::Upper).unwrap();
        let kappa = measured_kappa(dim(1), 1.0).unwrap();
        let base = flux_identity_residual_with_kappa(&field, &e, kappa, 1e-9).unwrap();
        let shifted = flux_identity_residual_with_kappa(&field, &e, kappa + 0.1, 1e-9).unwrap();
        let upper_vol = PI; // |E^+| of the unit slab: pi r^2 h
        assert!(((shifted - base) - 0.1 * upper_vol).abs() < 1e-6);
    }

    #[test]
    fn corrupted_field_breaks_the_identity() {
        // mutation check: flipping the sign of c in the boundary integrand
        // must break the balance by O(1)
        let e = slab(1.0, 9);
        let field = CalibrationField::new(dim(1), 1.0, Half::Upper).unwrap();
        let kappa = measured_kappa(dim(1), 1.0).unwrap();
        let vol = half_volume(&field, &e, 1e-10).unwrap();
        let disk = disk_flux(&field, 1e-10).unwrap();
        // corrupted boundary flux: integrand r(-cos) - lambda r u' instead
        let lambda = 1.0;
        let profile = e.upper();
        let corrupt = radial_theta_integral(
            &|r: f64, cos_th: f64| (-cos_th - lambda * profile.deriv(r)) * r * r,
            lambda,
            0.0,
            1.0,
            1e-10,
        )
        .unwrap()
            * e.dim().unit_sphere_area()
            + e.dim().unit_sphere_area() * profile.eval(1.0);
        let residual = (-kappa * vol + corrupt + disk).abs();
        assert!(residual > 0.5, "corrupted residual {residual}");
    }

    #[test]
    fn calibration_bound_cauchy_schwarz() {
        // <field, w> <= 1 for horizontal unit w
        let field = CalibrationField::new(dim(2), 0.8, Half::Lower).unwrap();
        let z = [0.4, 0.1, -0.3, 0.2];
        let v = field.at(&z).unwrap();
        let mut state = 3u64;
        for _ in 0..200 {
            let mut w: Vec<f64> = (0..4)
                .map(|_| {
                    state = state.wrapping_mul(2862933555777941757).wrapping_add(3037000493);
                    (state >> 11) as f64 / (1u64 << 53) as f64 * 2.0 - 1.0
                })
                .collect();
            let norm: f64 = w.iter().map(|v| v * v).sum::<f64>().sqrt();
            if norm == 0.0 {
                continue;
            }
            for u in w.iter_mut() {
                *u /= norm;
            }
            let dot = v.dot(&FrameVector::horizontal(w));
            assert!(dot <= 1.0 + 1e-12);
        }
    }
}
