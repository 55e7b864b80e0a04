//! The rotationally symmetric constant-mean-curvature spheres of H^n.
//!
//! For `lambda > 0` the sphere is the union of the graphs `t = +-f(|z|)`
//! over the closed disk of radius `1/lambda`, with profile
//!
//! ```text
//! f(r) = (1 / (2 lambda^2)) (lambda r sqrt(1 - lambda^2 r^2) + arccos(lambda r)).
//! ```
//!
//! It is the union of the curvature-`lambda` geodesics of length
//! `pi/lambda` joining the two poles `(0, -+ pi/(4 lambda^2))`, which are
//! its only singular points.  The perimeter reduces to the radial integral
//! `2 sigma_{2n-1} int_0^{1/lambda} r^{2n} / sqrt(1 - lambda^2 r^2) dr`:
//! for a graph `t = u(|z|)` the perimeter density per unit Lebesgue measure
//! in `z` is `sqrt(u'^2 + r^2)`, and `u = f` gives
//! `r / sqrt(1 - lambda^2 r^2)`.  The substitution `r = sin(theta)/lambda`
//! removes the endpoint singularity exactly, leaving a polynomial in
//! `sin(theta)`; the volume quadrature uses the same substitution.

use std::f64::consts::{FRAC_PI_2, PI};

use crate::calibration::{measured_kappa, CalibrationField, Half};
use crate::error::{Error, Result};
use crate::geodesic::{geodesic_state, GeodesicSpec};
use crate::group::{j_rotate, Dimension, FrameVector, Point};
use crate::quad;

/// The sphere of curvature `lambda > 0` in H^n.
#[derive(Debug, Clone, Copy)]
pub struct PansuSphere {
    dim: Dimension,
    lambda: f64,
}

/// Perimeter, enclosed volume, and pole height of one sphere.
#[derive(Debug, Clone, Copy)]
pub struct SphereGeometry {
    pub area: f64,
    pub volume: f64,
    pub pole_height: f64,
}

impl PansuSphere {
    pub fn new(dim: Dimension, lambda: f64) -> Result<Self> {
        if !(lambda > 0.0) || !lambda.is_finite() {
            return Err(Error::OutOfRange {
                name: "lambda",
                value: lambda,
                range: "lambda > 0",
            });
        }
        Ok(PansuSphere { dim, lambda })
    }

    pub fn dim(&self) -> Dimension {
        self.dim
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    /// Radius `1/lambda` of the equator disk.
    pub fn equator_radius(&self) -> f64 {
        1.0 / self.lambda
    }

    /// Height `pi / (4 lambda^2)` of the two poles above and below the
    /// equator plane.
    pub fn pole_height(&self) -> f64 {
        PI / (4.0 * self.lambda * self.lambda)
    }

    pub fn south_pole(&self) -> Point {
        Point::on_axis(self.dim, -self.pole_height())
    }

    pub fn north_pole(&self) -> Point {
        Point::on_axis(self.dim, self.pole_height())
    }

    fn profile_unchecked(&self, r: f64) -> f64 {
        let lr = (self.lambda * r).clamp(0.0, 1.0);
        (lr * (1.0 - lr * lr).sqrt() + lr.acos()) / (2.0 * self.lambda * self.lambda)
    }

    /// Profile height `f(r)` for `0 <= r <= 1/lambda`.
    pub fn profile_height(&self, r: f64) -> Result<f64> {
        if !(0.0..=self.equator_radius() * (1.0 + 1e-12)).contains(&r) {
            return Err(Error::OutOfRange {
                name: "r",
                value: r,
                range: "0 <= r <= 1/lambda",
            });
        }
        Ok(self.profile_unchecked(r))
    }

    /// Profile slope `f'(r) = -lambda r^2 / sqrt(1 - lambda^2 r^2)` for
    /// `0 <= r < 1/lambda`; the slope diverges at the equator.
    pub fn profile_slope(&self, r: f64) -> Result<f64> {
        let lr = self.lambda * r;
        if !(0.0..1.0).contains(&lr) {
            return Err(Error::OutOfRange {
                name: "r",
                value: r,
                range: "0 <= r < 1/lambda",
            });
        }
        Ok(-self.lambda * r * r / (1.0 - lr * lr).sqrt())
    }

    /// Sub-Riemannian perimeter of the sphere by adaptive quadrature:
    /// `2 sigma_{2n-1} int_0^{1/lambda} r^{2n} / sqrt(1-lambda^2 r^2) dr`,
    /// evaluated in the `r = sin(theta)/lambda` variable where the
    /// integrand is `lambda^{-(2n+1)} sin^{2n}(theta)`.
    pub fn area(&self, tol: f64) -> Result<f64> {
        let n = self.dim.n() as i32;
        let scale = 2.0 * self.dim.unit_sphere_area() * self.lambda.powi(-(2 * n + 1));
        let g = |th: f64| scale * th.sin().powi(2 * n);
        quad::integrate(&g, 0.0, FRAC_PI_2, tol, tol)
    }

    /// Volume enclosed by the sphere:
    /// `2 sigma_{2n-1} int_0^{1/lambda} f(r) r^{2n-1} dr`, in the same
    /// substituted variable.
    pub fn volume(&self, tol: f64) -> Result<f64> {
        let n = self.dim.n() as i32;
        let scale = 2.0 * self.dim.unit_sphere_area();
        let lambda = self.lambda;
        let g = |th: f64| {
            let (s, c) = th.sin_cos();
            let r = s / lambda;
            scale * self.profile_unchecked(r) * r.powi(2 * n - 1) * c / lambda
        };
        quad::integrate(&g, 0.0, FRAC_PI_2, tol, tol)
    }

    pub fn geometry(&self, tol: f64) -> Result<SphereGeometry> {
        Ok(SphereGeometry {
            area: self.area(tol)?,
            volume: self.volume(tol)?,
            pole_height: self.pole_height(),
        })
    }

    /// The inner horizontal unit normal at a point of the given hemisphere
    /// graph.  With `c = sqrt(1 - lambda^2 |z|^2) / |z|`:
    ///
    /// ```text
    /// upper:  sum_i (-lambda x_i - c y_i) X_i + (-lambda y_i + c x_i) Y_i
    /// lower:  same with c -> -c,
    /// ```
    ///
    /// the normalized horizontal part of the graph normal.  Undefined on
    /// the pole axis.
    pub fn normal(&self, p: &Point, hemisphere: Half) -> Result<FrameVector> {
        assert_eq!(p.n(), self.dim.n(), "dimension mismatch");
        let r = p.z_norm();
        if r == 0.0 {
            return Err(Error::OnAxis);
        }
        if r > self.equator_radius() * (1.0 + 1e-12) {
            return Err(Error::NotOnSurface {
                distance: r - self.equator_radius(),
                tolerance: 0.0,
            });
        }
        let expected_t = match hemisphere {
            Half::Upper => self.profile_unchecked(r),
            Half::Lower => -self.profile_unchecked(r),
        };
        let tol = 1e-8 * self.pole_height().max(1.0);
        let distance = (p.t() - expected_t).abs();
        if distance > tol {
            return Err(Error::NotOnSurface {
                distance,
                tolerance: tol,
            });
        }
        CalibrationField::new(self.dim, self.lambda, hemisphere)?.at(p.z())
    }

    /// Maximum residual of the characteristic-curve property over `samples`
    /// interior arc parameters: the curvature-`lambda` geodesic from the
    /// south pole with horizontal unit velocity `v0` stays on the sphere
    /// (lower graph for `s < pi/(2 lambda)`, upper past the equator) and
    /// its velocity equals `J` of the inner horizontal unit normal.
    ///
    /// # Panics
    /// Panics when `v0` is not horizontal unit or `samples < 2`.
    pub fn char_curve_residual(&self, v0: &FrameVector, samples: usize) -> f64 {
        assert!(samples >= 2, "need at least two samples");
        let g = GeodesicSpec::new(self.lambda, self.south_pole(), v0.clone())
            .expect("v0 must be horizontal unit");
        let period = PI / self.lambda;
        let mut worst: f64 = 0.0;
        for k in 1..=samples {
            let s = k as f64 / (samples + 1) as f64 * period;
            let st = geodesic_state(&g, s);
            let r = st.point.z_norm();
            let half = if s <= 0.5 * period {
                Half::Lower
            } else {
                Half::Upper
            };
            let expected_t = match half {
                Half::Lower => -self.profile_unchecked(r),
                Half::Upper => self.profile_unchecked(r),
            };
            worst = worst.max((st.point.t() - expected_t).abs());
            let nu = CalibrationField::new(self.dim, self.lambda, half)
                .and_then(|f| f.at(st.point.z()))
                .expect("interior samples stay off the axis");
            let jn = j_rotate(&nu);
            for (a, b) in st.velocity.a().iter().zip(jn.a()) {
                worst = worst.max((a - b).abs());
            }
        }
        worst
    }
}

/// Residual `|A'(rho) - kappa(rho) V'(rho)|` of the stationarity identity
/// for the sphere family, with `A'` and `V'` five-point central finite
/// differences of the quadrature area and volume at step `h` and `kappa`
/// the measured calibration constant.  Vanishes (to finite-difference
/// order) because the spheres are critical points of `A - kappa V`.
pub fn stationarity_residual(dim: Dimension, rho: f64, h: f64, tol: f64) -> Result<f64> {
    if !(rho > 0.0) {
        return Err(Error::OutOfRange {
            name: "rho",
            value: rho,
            range: "rho > 0",
        });
    }
    if !(h > 0.0 && h < rho / 10.0) {
        return Err(Error::OutOfRange {
            name: "h",
            value: h,
            range: "0 < h < rho/10",
        });
    }
    let area = |l: f64| -> Result<f64> { PansuSphere::new(dim, l)?.area(tol) };
    let vol = |l: f64| -> Result<f64> { PansuSphere::new(dim, l)?.volume(tol) };
    let central5 = |f: &dyn Fn(f64) -> Result<f64>| -> Result<f64> {
        Ok((8.0 * (f(rho + h)? - f(rho - h)?) - (f(rho + 2.0 * h)? - f(rho - 2.0 * h)?))
            / (12.0 * h))
    };
    let a_prime = central5(&|l| area(l))?;
    let v_prime = central5(&|l| vol(l))?;
    let kappa = measured_kappa(dim, rho)?;
    Ok((a_prime - kappa * v_prime).abs())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geodesic::geodesic_state;

    fn dim(n: usize) -> Dimension {
        Dimension::new(n).unwrap()
    }

    fn sphere(n: usize, lambda: f64) -> PansuSphere {
        PansuSphere::new(dim(n), lambda).unwrap()
    }

    // Closed-form Wallis oracle: int_0^1 s^(2k) / sqrt(1-s^2) ds
    // = (pi/2) (2k-1)!! / (2k)!!.
    fn wallis(k: u32) -> f64 {
        let mut num = 1.0;
        let mut den = 1.0;
        for j in 1..=k {
            num *= 2.0 * j as f64 - 1.0;
            den *= 2.0 * j as f64;
        }
        FRAC_PI_2 * num / den
    }

    fn area_oracle(n: u32, lambda: f64) -> f64 {
        let sigma = dim(n as usize).unit_sphere_area();
        2.0 * sigma * lambda.powi(-(2 * n as i32 + 1)) * wallis(n)
    }

    fn volume_oracle(n: u32, lambda: f64) -> f64 {
        // int_0^1 s^(2n) sqrt(1-s^2) ds = W(n) - W(n+1);
        // int_0^1 s^(2n-1) arccos(s) ds = W(n) / (2n).
        let sigma = dim(n as usize).unit_sphere_area();
        let radial = 0.5 * ((wallis(n) - wallis(n + 1)) + wallis(n) / (2.0 * n as f64));
        2.0 * sigma * lambda.powi(-(2 * n as i32 + 2)) * radial
    }

    #[test]
    fn profile_boundary_values() {
        let s = sphere(1, 1.0);
        assert!(s.profile_height(1.0).unwrap().abs() < 1e-15);
        assert!((s.profile_height(0.0).unwrap() - PI / 4.0).abs() < 1e-15);
        let s2 = sphere(1, 2.0);
        assert!((s2.profile_height(0.0).unwrap() - PI / 16.0).abs() < 1e-15);
        assert!(s.profile_height(1.5).is_err());
        assert!(s.profile_height(-0.1).is_err());
    }

    #[test]
    fn profile_midpoint_value() {
        // f(1/sqrt(2)) = 1/4 + pi/8 at lambda = 1
        let s = sphere(1, 1.0);
        let v = s.profile_height(1.0 / 2f64.sqrt()).unwrap();
        assert!((v - (0.25 + PI / 8.0)).abs() < 1e-15);
    }

    #[test]
    fn profile_point_sits_on_a_characteristic_geodesic() {
        // the pole-to-pole geodesic crosses |z| = 1/sqrt(2) on the upper
        // graph at s = 3 pi / 4
        let s = sphere(1, 1.0);
        let g = GeodesicSpec::new(1.0, s.south_pole(), FrameVector::x_axis(dim(1), 0)).unwrap();
        let st = geodesic_state(&g, 3.0 * PI / 4.0);
        let r = st.point.z_norm();
        assert!((r - 1.0 / 2f64.sqrt()).abs() < 1e-12);
        assert!((st.point.t() - s.profile_height(r).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn slope_values_and_errors() {
        let s = sphere(1, 1.0);
        assert_eq!(s.profile_slope(0.0).unwrap(), 0.0);
        let v = s.profile_slope(1.0 / 2f64.sqrt()).unwrap();
        assert!((v + 1.0 / 2f64.sqrt()).abs() < 1e-15);
        assert!(s.profile_slope(1.0).is_err());
    }

    #[test]
    fn slope_matches_finite_differences() {
        let s = sphere(2, 1.3);
        let h = 1e-6;
        for k in 1..=9 {
            let r = 0.1 * k as f64 / 1.3;
            let fd =
                (s.profile_unchecked(r + h) - s.profile_unchecked(r - h)) / (2.0 * h);
            assert!((s.profile_slope(r).unwrap() - fd).abs() < 1e-7, "r={r}");
        }
    }

    #[test]
    fn area_against_beta_oracle() {
        // frozen closed forms: pi^2 and 3 pi^3 / 4
        let a11 = sphere(1, 1.0).area(1e-10).unwrap();
        assert!((a11 - PI * PI).abs() < 1e-8 * PI * PI);
        assert!((a11 - area_oracle(1, 1.0)).abs() < 1e-10);
        let a21 = sphere(2, 1.0).area(1e-10).unwrap();
        assert!((a21 - 3.0 * PI.powi(3) / 4.0).abs() < 1e-8 * a21);
        assert!((a21 - area_oracle(2, 1.0)).abs() < 1e-9);
        let a12 = sphere(1, 2.0).area(1e-10).unwrap();
        assert!((a12 - PI * PI / 8.0).abs() < 1e-10);
        for n in 1..=3u32 {
            for &l in &[0.5, 1.0, 2.0] {
                let a = sphere(n as usize, l).area(1e-10).unwrap();
                let o = area_oracle(n, l);
                assert!((a - o).abs() <= 1e-8 * o, "n={n} lambda={l}");
            }
        }
    }

    #[test]
    fn volume_against_beta_oracle() {
        // frozen closed forms: 3 pi^2 / 8 and 5 pi^3 / 32
        let v11 = sphere(1, 1.0).volume(1e-10).unwrap();
        assert!((v11 - 3.0 * PI * PI / 8.0).abs() < 1e-8 * v11);
        let v21 = sphere(2, 1.0).volume(1e-10).unwrap();
        assert!((v21 - 5.0 * PI.powi(3) / 32.0).abs() < 1e-8 * v21);
        for n in 1..=3u32 {
            for &l in &[0.5, 1.0, 2.0] {
                let v = sphere(n as usize, l).volume(1e-10).unwrap();
                let o = volume_oracle(n, l);
                assert!((v - o).abs() <= 1e-8 * o, "n={n} lambda={l}");
            }
        }
    }

    #[test]
    fn homogeneity_in_lambda() {
        for n in 1..=3usize {
            let p_a = 2 * n as i32 + 1;
            let p_v = 2 * n as i32 + 2;
            let base_a = sphere(n, 1.0).area(1e-10).unwrap();
            let base_v = sphere(n, 1.0).volume(1e-10).unwrap();
            for &l in &[0.5, 2.0] {
                let a = sphere(n, l).area(1e-10).unwrap() * l.powi(p_a);
                let v = sphere(n, l).volume(1e-10).unwrap() * l.powi(p_v);
                assert!((a - base_a).abs() < 1e-8 * base_a);
                assert!((v - base_v).abs() < 1e-8 * base_v);
            }
        }
    }

    #[test]
    fn profile_strictly_decreasing() {
        let s = sphere(1, 1.3);
        let mut prev = s.profile_height(0.0).unwrap();
        for k in 1..=60 {
            let r = k as f64 / 60.0 / 1.3;
            let v = s.profile_height(r).unwrap();
            assert!(v < prev);
            prev = v;
        }
    }

    #[test]
    fn normal_is_unit_horizontal_on_sphere_points() {
        let s = sphere(2, 0.7);
        for k in 1..=9 {
            let r = k as f64 / 10.0 / 0.7;
            let f = s.profile_unchecked(r);
            let p = Point::new(vec![r / 2f64.sqrt(), 0.0, 0.0, r / 2f64.sqrt()], f);
            let nu = s.normal(&p, Half::Upper).unwrap();
            assert!((nu.norm() - 1.0).abs() < 1e-12);
            assert_eq!(nu.c(), 0.0);
        }
    }

    #[test]
    fn normal_at_equator_is_inward_radial() {
        let s = sphere(1, 1.0);
        let p = Point::new(vec![1.0, 0.0], 0.0);
        let nu = s.normal(&p, Half::Upper).unwrap();
        assert!((nu.a()[0] + 1.0).abs() < 1e-12);
        assert!(nu.a()[1].abs() < 1e-12);
    }

    #[test]
    fn normal_rejects_off_surface_and_axis() {
        let s = sphere(1, 1.0);
        let off = Point::new(vec![0.5, 0.0], 0.0);
        assert!(matches!(
            s.normal(&off, Half::Upper),
            Err(Error::NotOnSurface { .. })
        ));
        let axis = Point::new(vec![0.0, 0.0], PI / 4.0);
        assert!(matches!(s.normal(&axis, Half::Upper), Err(Error::OnAxis)));
    }

    #[test]
    fn characteristic_curves_stay_on_sphere() {
        let s = sphere(1, 1.0);
        let r = s.char_curve_residual(&FrameVector::x_axis(dim(1), 0), 100);
        assert!(r < 1e-9, "residual {r}");
    }

    #[test]
    fn char_curve_residual_block_rotation_invariant() {
        let s = sphere(2, 1.0);
        let th: f64 = 0.6;
        let a = s.char_curve_residual(
            &FrameVector::horizontal(vec![th.cos(), th.sin(), 0.0, 0.0]),
            50,
        );
        let b = s.char_curve_residual(&FrameVector::x_axis(dim(2), 0), 50);
        assert!(a < 1e-10 && b < 1e-10);
    }

    #[test]
    fn geodesic_midpoint_hits_equator() {
        let s = sphere(1, 2.0);
        let g = GeodesicSpec::new(2.0, s.south_pole(), FrameVector::x_axis(dim(1), 0)).unwrap();
        let st = geodesic_state(&g, PI / 4.0); // pi / (2 lambda)
        assert!((st.point.z_norm() - 0.5).abs() < 1e-12);
        assert!(st.point.t().abs() < 1e-12);
    }

    #[test]
    fn pole_closure() {
        for &lambda in &[0.5, 1.0, 2.0] {
            let s = sphere(1, lambda);
            let g =
                GeodesicSpec::new(lambda, s.south_pole(), FrameVector::x_axis(dim(1), 0)).unwrap();
            let st = geodesic_state(&g, PI / lambda);
            let north = s.north_pole();
            assert!(st.point.z_norm() < 1e-10);
            assert!((st.point.t() - north.t()).abs() < 1e-10);
        }
    }

    #[test]
    fn stationarity_identity() {
        // closed forms: A = pi^2 rho^-3, V = (3 pi^2/8) rho^-4, kappa = 2 rho:
        // A' = -3 pi^2 rho^-4 = kappa V' exactly
        for n in 1..=2usize {
            for &rho in &[0.5, 1.0, 2.0] {
                let r = stationarity_residual(dim(n), rho, 1e-4, 1e-10).unwrap();
                assert!(r < 1e-4, "n={n} rho={rho}: {r}");
            }
        }
    }

    #[test]
    fn stationarity_residual_shrinks_at_least_quadratically() {
        let r1 = stationarity_residual(dim(1), 1.0, 2e-2, 1e-12).unwrap();
        let r2 = stationarity_residual(dim(1), 1.0, 1e-2, 1e-12).unwrap();
        // truncation-limited: halving h must cut the residual by >= 4
        assert!(r1 / r2 >= 3.5, "ratio {}", r1 / r2);
    }

    #[test]
    fn stationarity_rejects_bad_steps() {
        assert!(stationarity_residual(dim(1), 1.0, 0.2, 1e-10).is_err());
        assert!(stationarity_residual(dim(1), 0.0, 1e-4, 1e-10).is_err());
    }
}
