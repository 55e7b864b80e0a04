//! Builtin candidate-set families: samplings of the sphere, slabs, cones,
//! bump perturbations, and seeded random admissible profiles.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::group::Dimension;
use crate::radial::{ProfileSamples, RadialSet};
use crate::sphere::PansuSphere;

/// Grid for sphere-like profiles: knots `r_j = sin(theta_j) / lambda` on a
/// uniform `theta` grid, clustered where the profile has its square-root
/// cusp at the equator.
fn clustered_grid(lambda: f64, knots: usize) -> Vec<f64> {
    assert!(knots >= 2);
    let mut grid: Vec<f64> = (0..knots)
        .map(|j| {
            let th = j as f64 / (knots - 1) as f64 * std::f64::consts::FRAC_PI_2;
            th.sin() / lambda
        })
        .collect();
    grid[0] = 0.0;
    let last = grid.len() - 1;
    grid[last] = 1.0 / lambda;
    grid
}

/// The ball of curvature `lambda`, sampled on `knots` clustered knots.
pub fn sphere_set(dim: Dimension, lambda: f64, knots: usize) -> Result<RadialSet> {
    bump_set(dim, lambda, 0.0, knots)
}

/// Sphere sampling with `amplitude * sin^2(pi lambda r)` added to the upper
/// profile; amplitude zero reproduces the sphere sampling exactly.
pub fn bump_set(dim: Dimension, lambda: f64, amplitude: f64, knots: usize) -> Result<RadialSet> {
    let sphere = PansuSphere::new(dim, lambda)?;
    let grid = clustered_grid(lambda, knots);
    let base: Vec<f64> = grid.iter().map(|&r| sphere.profile_height(r).unwrap_or(0.0)).collect();
    let upper: Vec<f64> = grid
        .iter()
        .zip(&base)
        .map(|(&r, &f)| f + amplitude * (std::f64::consts::PI * lambda * r).sin().powi(2))
        .collect();
    RadialSet::new(
        dim,
        1.0 / lambda,
        ProfileSamples::new(grid.clone(), upper),
        ProfileSamples::new(grid, base),
    )
}

/// The slab of half-height `h` over the cylinder of radius `r_cyl`.
pub fn slab_set(dim: Dimension, h: f64, r_cyl: f64, knots: usize) -> Result<RadialSet> {
    let grid: Vec<f64> = (0..knots)
        .map(|k| r_cyl * k as f64 / (knots - 1) as f64)
        .collect();
    RadialSet::new(
        dim,
        r_cyl,
        ProfileSamples::new(grid.clone(), vec![h; knots]),
        ProfileSamples::new(grid, vec![h; knots]),
    )
}

/// The double cone of apex height `h`: profiles `h (1 - r / r_cyl)`.
pub fn cone_set(dim: Dimension, h: f64, r_cyl: f64, knots: usize) -> Result<RadialSet> {
    let grid: Vec<f64> = (0..knots)
        .map(|k| r_cyl * k as f64 / (knots - 1) as f64)
        .collect();
    let vals: Vec<f64> = grid.iter().map(|&r| h * (1.0 - r / r_cyl)).collect();
    RadialSet::new(
        dim,
        r_cyl,
        ProfileSamples::new(grid.clone(), vals.clone()),
        ProfileSamples::new(grid, vals),
    )
}

/// A seeded family of random admissible sets: independent uniform heights
/// in `[0.05, 2.0]` on 16 uniform knots, both profiles.  Every member
/// satisfies the disk-in-cylinder constraints by construction.
pub fn random_sets(dim: Dimension, r_cyl: f64, count: usize, seed: u64) -> Vec<RadialSet> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let knots = 16usize;
    let grid: Vec<f64> = (0..knots)
        .map(|k| r_cyl * k as f64 / (knots - 1) as f64)
        .collect();
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let upper: Vec<f64> = (0..knots).map(|_| rng.gen_range(0.05..2.0)).collect();
        let lower: Vec<f64> = (0..knots).map(|_| rng.gen_range(0.05..2.0)).collect();
        if let Ok(set) = RadialSet::new(
            dim,
            r_cyl,
            ProfileSamples::new(grid.clone(), upper),
            ProfileSamples::new(grid.clone(), lower),
        ) {
            out.push(set);
        }
    }
    out
}

/// Max-norm distance between the upper/lower profiles of a set and the
/// sphere profile of curvature `1 / r_cyl`, sampled on a fine grid.
pub fn profile_distance_to_sphere(e: &RadialSet) -> f64 {
    let lambda = 1.0 / e.r_cyl();
    let sphere = PansuSphere::new(e.dim(), lambda).expect("positive curvature");
    let mut worst: f64 = 0.0;
    let samples = 400;
    for k in 0..=samples {
        let r = e.r_cyl() * k as f64 / samples as f64;
        let f = sphere.profile_height(r.min(e.r_cyl())).unwrap_or(0.0);
        worst = worst.max((e.upper().eval(r) - f).abs());
        worst = worst.max((e.lower().eval(r) - f).abs());
    }
    worst
}
