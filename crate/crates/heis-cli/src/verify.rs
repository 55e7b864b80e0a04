//! The invariant battery behind `heis verify`.
//!
//! Every check produces a measured residual and a pass bound
//! `tol * multiplier`.  The multipliers encode how each residual is limited
//! (pure quadrature, finite differences, or finite-difference-squared), so
//! the default `--tol 1e-8` reproduces the documented per-invariant bars:
//!
//! | check                | multiplier | bar at tol = 1e-8 |
//! |----------------------|-----------:|------------------:|
//! | geodesic / homogeneity / chain |    1 | 1e-8 |
//! | divergence / kappa / flux / saturation | 1e2 | 1e-6 |
//! | stationarity         |        1e4 | 1e-4 |
//!
//! With `--tol 0` every bound is zero and nothing passes.

use heis::calibration::{
    flux_identity_residual, saturation_gap, CalConst, CalibrationField, Half,
};
use heis::families::{random_sets, sphere_set};
use heis::geodesic::{geodesic_identity_residuals, geodesic_ode_oracle, geodesic_state, GeodesicSpec};
use heis::group::{Dimension, FrameVector, Point};
use heis::isoperimetry::deficit;
use heis::sphere::{stationarity_residual, PansuSphere};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

use crate::output::{f17, json_array, JsonObject};
use crate::CliError;

pub struct Check {
    pub name: &'static str,
    pub n: usize,
    pub lambda: f64,
    pub residual: f64,
    pub bound: f64,
}

impl Check {
    fn pass(&self) -> bool {
        self.residual <= self.bound
    }

    fn to_json(&self) -> String {
        JsonObject::new()
            .str("name", self.name)
            .int("n", self.n as i64)
            .num("lambda", self.lambda)
            .num("residual", self.residual)
            .num("bound", self.bound)
            .bool("pass", self.pass())
            .finish()
    }
}

fn random_unit_velocity(n: usize, rng: &mut ChaCha8Rng) -> FrameVector {
    loop {
        let a: Vec<f64> = (0..2 * n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let norm = a.iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm > 0.1 {
            return FrameVector::horizontal(a.into_iter().map(|v| v / norm).collect());
        }
    }
}

pub fn run(ns: &[usize], lambdas: &[f64], seed: u64, tol: f64) -> Result<(String, bool), CliError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut checks: Vec<Check> = Vec::new();
    let mut kappas: Vec<String> = Vec::new();

    for &n in ns {
        let dim = Dimension::new(n).map_err(CliError::from)?;
        for &lambda in lambdas {
            let field = CalibrationField::new(dim, lambda, Half::Upper).map_err(CliError::from)?;

            // divergence constancy over seeded points off the axis
            let r_min = (0.1 / lambda).max(0.08);
            let mut lo = f64::INFINITY;
            let mut hi = f64::NEG_INFINITY;
            for _ in 0..100 {
                let mut z: Vec<f64> = (0..2 * n).map(|_| rng.gen_range(-1.0..1.0)).collect();
                let norm = z.iter().map(|v| v * v).sum::<f64>().sqrt().max(1e-9);
                let r = rng.gen_range(r_min..0.95 / lambda);
                for v in z.iter_mut() {
                    *v *= r / norm;
                }
                let d = field.measure_divergence(&z, 1e-5).map_err(CliError::from)?;
                lo = lo.min(d);
                hi = hi.max(d);
            }
            checks.push(Check {
                name: "divergence_constancy",
                n,
                lambda,
                residual: hi - lo,
                bound: tol * 1e2,
            });

            let cal = CalConst::measure(dim, lambda).map_err(CliError::from)?;
            checks.push(Check {
                name: "kappa_equals_2n_lambda",
                n,
                lambda,
                residual: (cal.kappa - 2.0 * n as f64 * lambda).abs(),
                bound: tol * 1e2,
            });
            kappas.push(
                JsonObject::new()
                    .int("n", n as i64)
                    .num("lambda", lambda)
                    .num("measured", cal.kappa)
                    .num("n_lambda", cal.conventional_n_lambda())
                    .num("ratio", cal.kappa / cal.conventional_n_lambda())
                    .finish(),
            );

            // geodesics: closed form vs RK4, pole closure, velocity identity
            let south = Point::on_axis(dim, -PI / (4.0 * lambda * lambda));
            let mut rk4_gap: f64 = 0.0;
            let mut pole_gap: f64 = 0.0;
            for _ in 0..2 {
                let v0 = random_unit_velocity(n, &mut rng);
                let g = GeodesicSpec::new(lambda, south.clone(), v0).map_err(CliError::from)?;
                for k in 1..=6 {
                    let s = k as f64 / 6.0 * PI / lambda;
                    let closed = geodesic_state(&g, s);
                    let ode = geodesic_ode_oracle(&g, s, 4000);
                    for (a, b) in closed.point.z().iter().zip(ode.point.z()) {
                        rk4_gap = rk4_gap.max((a - b).abs());
                    }
                    rk4_gap = rk4_gap.max((closed.point.t() - ode.point.t()).abs());
                }
                let end = geodesic_state(&g, PI / lambda).point;
                pole_gap = pole_gap
                    .max(end.z_norm().hypot(end.t() - PI / (4.0 * lambda * lambda)));
            }
            checks.push(Check {
                name: "geodesic_closed_vs_rk4",
                n,
                lambda,
                residual: rk4_gap,
                bound: tol,
            });
            checks.push(Check {
                name: "pole_closure",
                n,
                lambda,
                residual: pole_gap,
                bound: tol,
            });

            let g0 = GeodesicSpec::new(lambda, Point::origin(dim), FrameVector::x_axis(dim, 0))
                .map_err(CliError::from)?;
            let mut ident: f64 = 0.0;
            for k in 1..=25 {
                let s = k as f64 / 26.0 * PI / lambda;
                let (rx, ry) = geodesic_identity_residuals(&g0, s).map_err(CliError::from)?;
                ident = ident.max(rx).max(ry);
            }
            checks.push(Check {
                name: "velocity_identity",
                n,
                lambda,
                residual: ident,
                bound: tol,
            });

            let sphere = PansuSphere::new(dim, lambda).map_err(CliError::from)?;
            let mut char_res: f64 = 0.0;
            for _ in 0..5 {
                let v0 = random_unit_velocity(n, &mut rng);
                char_res = char_res.max(sphere.char_curve_residual(&v0, 60));
            }
            checks.push(Check {
                name: "characteristic_curves",
                n,
                lambda,
                residual: char_res,
                bound: tol * 10.0,
            });

            // flux identity on the sampled sphere and random sets
            let sphere_sampled = sphere_set(dim, lambda, 200).map_err(CliError::from)?;
            let mut flux_res: f64 = 0.0;
            let mut gap_rel: f64 = 0.0;
            for half in [Half::Upper, Half::Lower] {
                let f = CalibrationField::new(dim, lambda, half).map_err(CliError::from)?;
                flux_res = flux_res
                    .max(flux_identity_residual(&f, &sphere_sampled, 1e-9).map_err(CliError::from)?);
                let gap = saturation_gap(&f, &sphere_sampled, 1e-9).map_err(CliError::from)?;
                let area = sphere.area(1e-10).map_err(CliError::from)?;
                gap_rel = gap_rel.max(gap / area);
            }
            for e in random_sets(dim, 1.0 / lambda, 2, seed ^ 0x5eed) {
                for half in [Half::Upper, Half::Lower] {
                    let f = CalibrationField::new(dim, lambda, half).map_err(CliError::from)?;
                    flux_res = flux_res
                        .max(flux_identity_residual(&f, &e, 1e-9).map_err(CliError::from)?);
                }
            }
            checks.push(Check {
                name: "flux_identity",
                n,
                lambda,
                residual: flux_res,
                bound: tol * 1e2,
            });
            checks.push(Check {
                name: "sphere_saturation",
                n,
                lambda,
                residual: gap_rel,
                bound: tol * 1e2,
            });

            checks.push(Check {
                name: "stationarity",
                n,
                lambda,
                residual: stationarity_residual(dim, lambda, 1e-4, 1e-10)
                    .map_err(CliError::from)?,
                bound: tol * 1e4,
            });
        }

        // homogeneity across the lambda list
        if lambdas.len() > 1 {
            let dim = Dimension::new(n).unwrap();
            let pa = 2 * n as i32 + 1;
            let pv = 2 * n as i32 + 2;
            let mut a_vals = Vec::new();
            let mut v_vals = Vec::new();
            for &l in lambdas {
                let s = PansuSphere::new(dim, l).map_err(CliError::from)?;
                a_vals.push(s.area(1e-10).map_err(CliError::from)? * l.powi(pa));
                v_vals.push(s.volume(1e-10).map_err(CliError::from)? * l.powi(pv));
            }
            let rel_spread = |vals: &[f64]| {
                let lo = vals.iter().copied().fold(f64::INFINITY, f64::min);
                let hi = vals.iter().copied().fold(f64::NEG_INFINITY, f64::max);
                (hi - lo) / hi.abs().max(1e-300)
            };
            checks.push(Check {
                name: "homogeneity_area",
                n,
                lambda: 0.0,
                residual: rel_spread(&a_vals),
                bound: tol,
            });
            checks.push(Check {
                name: "homogeneity_volume",
                n,
                lambda: 0.0,
                residual: rel_spread(&v_vals),
                bound: tol,
            });
        }

        // estimate chain on random admissible sets
        let dim = Dimension::new(n).unwrap();
        let mut worst_violation: f64 = 0.0;
        for e in random_sets(dim, 1.0, 5, seed.wrapping_add(n as u64)) {
            let rep = deficit(&e, 1e-8).map_err(CliError::from)?;
            worst_violation = worst_violation.max(-rep.deficit / rep.perimeter);
            worst_violation =
                worst_violation.max((rep.estimate_rhs - rep.perimeter) / rep.perimeter);
        }
        checks.push(Check {
            name: "estimate_chain",
            n,
            lambda: 0.0,
            residual: worst_violation.max(0.0),
            bound: tol * 1e2,
        });
    }

    let all_pass = checks.iter().all(Check::pass);
    let rendered: Vec<String> = checks.iter().map(Check::to_json).collect();
    let ns_json: Vec<String> = ns.iter().map(|n| n.to_string()).collect();
    let ls_json: Vec<String> = lambdas.iter().map(|l| f17(*l)).collect();
    let body = JsonObject::new()
        .raw("n", &json_array(&ns_json))
        .raw("lambda", &json_array(&ls_json))
        .int("seed", seed as i64)
        .num("tol", tol)
        .bool("pass", all_pass)
        .raw("kappa", &json_array(&kappas))
        .raw("checks", &json_array(&rendered))
        .finish();
    Ok((body, all_pass))
}
