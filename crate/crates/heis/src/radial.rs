//! Rotationally symmetric candidate sets bounded by radial graphs.
//!
//! A set `E` in this class is described inside the vertical cylinder of
//! radius `r_cyl` by two non-negative radial profiles:
//!
//! ```text
//! E = { (z, t) : |z| <= r_cyl,  -u_minus(|z|) <= t <= u_plus(|z|) }.
//! ```
//!
//! Such a set always contains the horizontal disk of radius `r_cyl`, so the
//! class consists exactly of the admissible disk-in-cylinder candidates.
//! This two-graph model is a deliberate restriction: it contains every
//! equality candidate and rich perturbation families while staying within
//! numerical reach; arbitrary finite-perimeter sets are out of scope.
//!
//! Volume and perimeter reduce to radial quadratures.  For a graph
//! `t = u(|z|)` the perimeter density per unit Lebesgue measure in `z` is
//! `sqrt(u'(r)^2 + r^2)`; on the cylinder wall the horizontal part of the
//! unit normal has norm one, so the wall contributes its lateral measure
//! `sigma_{2n-1} r^{2n-1} (u_plus(r_cyl) + u_minus(r_cyl))`.

use std::fmt;

use crate::error::{Error, Result};
use crate::group::Dimension;
use crate::interp::MonotoneCubic;
use crate::quad;

/// A single violation found while validating a candidate set.
#[derive(Debug, Clone, PartialEq)]
pub enum Diagnostic {
    /// `values[knot] < 0` on the named side.
    NegativeValue { side: Side, knot: usize, value: f64 },
    /// Grid entry `knot` does not strictly increase.
    GridNotAscending { side: Side, knot: usize },
    /// Grid does not start at 0.
    GridStart { side: Side, value: f64 },
    /// Grid does not end at `r_cyl`.
    GridEnd { side: Side, value: f64, r_cyl: f64 },
    /// Grid and value arrays have different lengths.
    LengthMismatch { side: Side, grid: usize, values: usize },
    /// Fewer than two knots.
    TooFewKnots { side: Side, count: usize },
    /// A non-finite knot entry.
    NonFinite { side: Side, knot: usize },
    /// The interpolant dips below zero inside a knot interval.
    Undershoot { side: Side, interval: usize, min: f64 },
    /// Both profiles vanish identically: the set has zero volume.
    ZeroHeight,
    /// Cylinder radius is not positive.
    BadRadius { r_cyl: f64 },
}

/// Which profile a diagnostic refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Upper,
    Lower,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Side::Upper => write!(f, "u_plus"),
            Side::Lower => write!(f, "u_minus"),
        }
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Diagnostic::NegativeValue { side, knot, value } => {
                write!(f, "{side}[{knot}] = {value} is negative")
            }
            Diagnostic::GridNotAscending { side, knot } => {
                write!(f, "{side} grid is not strictly increasing at knot {knot}")
            }
            Diagnostic::GridStart { side, value } => {
                write!(f, "{side} grid starts at {value}, expected 0")
            }
            Diagnostic::GridEnd { side, value, r_cyl } => {
                write!(f, "{side} grid ends at {value}, expected r_cyl = {r_cyl}")
            }
            Diagnostic::LengthMismatch { side, grid, values } => {
                write!(f, "{side} has {grid} grid knots but {values} values")
            }
            Diagnostic::TooFewKnots { side, count } => {
                write!(f, "{side} has {count} knots, need at least 2")
            }
            Diagnostic::NonFinite { side, knot } => {
                write!(f, "{side} entry {knot} is not finite")
            }
            Diagnostic::Undershoot { side, interval, min } => {
                write!(f, "{side} interpolant reaches {min} inside interval {interval}")
            }
            Diagnostic::ZeroHeight => {
                write!(f, "both profiles vanish identically; the set has zero volume")
            }
            Diagnostic::BadRadius { r_cyl } => write!(f, "r_cyl = {r_cyl} must be positive"),
        }
    }
}

/// Raw radial samples: a grid from 0 to `r_cyl` with non-negative heights.
#[derive(Debug, Clone, PartialEq)]
pub struct ProfileSamples {
    pub grid: Vec<f64>,
    pub values: Vec<f64>,
}

impl ProfileSamples {
    pub fn new(grid: Vec<f64>, values: Vec<f64>) -> Self {
        ProfileSamples { grid, values }
    }
}

/// A validated radial profile with its monotone cubic interpolant.
#[derive(Debug, Clone)]
pub struct RadialProfile {
    spline: MonotoneCubic,
}

impl RadialProfile {
    pub fn grid(&self) -> &[f64] {
        self.spline.knots()
    }

    pub fn values(&self) -> &[f64] {
        self.spline.values()
    }

    pub fn eval(&self, r: f64) -> f64 {
        self.spline.eval(r)
    }

    /// Analytic derivative of the interpolant (not a finite difference).
    pub fn deriv(&self, r: f64) -> f64 {
        self.spline.deriv(r)
    }
}

/// A rotationally symmetric candidate set.
#[derive(Debug, Clone)]
pub struct RadialSet {
    dim: Dimension,
    r_cyl: f64,
    upper: RadialProfile,
    lower: RadialProfile,
}

fn check_profile(side: Side, p: &ProfileSamples, r_cyl: f64, out: &mut Vec<Diagnostic>) {
    if p.grid.len() != p.values.len() {
        out.push(Diagnostic::LengthMismatch {
            side,
            grid: p.grid.len(),
            values: p.values.len(),
        });
        return;
    }
    if p.grid.len() < 2 {
        out.push(Diagnostic::TooFewKnots {
            side,
            count: p.grid.len(),
        });
        return;
    }
    let mut finite = true;
    for (k, v) in p.grid.iter().chain(p.values.iter()).enumerate() {
        if !v.is_finite() {
            out.push(Diagnostic::NonFinite {
                side,
                knot: k % p.grid.len(),
            });
            finite = false;
        }
    }
    if !finite {
        return;
    }
    let mut grid_ok = true;
    if p.grid[0] != 0.0 {
        out.push(Diagnostic::GridStart {
            side,
            value: p.grid[0],
        });
        grid_ok = false;
    }
    for k in 1..p.grid.len() {
        if !(p.grid[k] > p.grid[k - 1]) {
            out.push(Diagnostic::GridNotAscending { side, knot: k });
            grid_ok = false;
        }
    }
    let last = *p.grid.last().unwrap();
    if (last - r_cyl).abs() > 1e-12 * r_cyl.max(1.0) {
        out.push(Diagnostic::GridEnd {
            side,
            value: last,
            r_cyl,
        });
        grid_ok = false;
    }
    for (k, &v) in p.values.iter().enumerate() {
        if v < 0.0 {
            out.push(Diagnostic::NegativeValue {
                side,
                knot: k,
                value: v,
            });
        }
    }
    // undershoot check needs a buildable interpolant and clean values
    if grid_ok && p.values.iter().all(|&v| v >= 0.0) {
        if let Ok(spline) = MonotoneCubic::new(p.grid.clone(), p.values.clone()) {
            for i in 0..spline.intervals() {
                let m = spline.min_on_interval(i);
                if m < -1e-12 {
                    out.push(Diagnostic::Undershoot {
                        side,
                        interval: i,
                        min: m,
                    });
                }
            }
        }
    }
}

/// Check every invariant of a candidate set description and return the
/// violations.  An empty list means the data describes a valid set.
pub fn validate(
    r_cyl: f64,
    upper: &ProfileSamples,
    lower: &ProfileSamples,
) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    if !(r_cyl > 0.0) || !r_cyl.is_finite() {
        out.push(Diagnostic::BadRadius { r_cyl });
        return out;
    }
    check_profile(Side::Upper, upper, r_cyl, &mut out);
    check_profile(Side::Lower, lower, r_cyl, &mut out);
    if out.is_empty()
        && upper.values.iter().all(|&v| v == 0.0)
        && lower.values.iter().all(|&v| v == 0.0)
    {
        out.push(Diagnostic::ZeroHeight);
    }
    out
}

impl RadialSet {
    /// Build a validated set; the error carries every diagnostic found.
    pub fn new(
        dim: Dimension,
        r_cyl: f64,
        upper: ProfileSamples,
        lower: ProfileSamples,
    ) -> Result<Self> {
        let diags = validate(r_cyl, &upper, &lower);
        if !diags.is_empty() {
            return Err(Error::InvalidSet(diags));
        }
        let upper = RadialProfile {
            spline: MonotoneCubic::new(upper.grid, upper.values)?,
        };
        let lower = RadialProfile {
            spline: MonotoneCubic::new(lower.grid, lower.values)?,
        };
        Ok(RadialSet {
            dim,
            r_cyl,
            upper,
            lower,
        })
    }

    pub fn dim(&self) -> Dimension {
        self.dim
    }

    pub fn r_cyl(&self) -> f64 {
        self.r_cyl
    }

    pub fn upper(&self) -> &RadialProfile {
        &self.upper
    }

    pub fn lower(&self) -> &RadialProfile {
        &self.lower
    }

    /// The intrinsic dilation of the set: radii scale by `s`, heights by
    /// `s^2`.  Volume scales by `s^Q`, perimeter by `s^(Q-1)`.
    pub fn dilate(&self, s: f64) -> Result<RadialSet> {
        if !(s > 0.0) {
            return Err(Error::OutOfRange {
                name: "s",
                value: s,
                range: "s > 0",
            });
        }
        let scale = |p: &RadialProfile| ProfileSamples {
            grid: p.grid().iter().map(|r| s * r).collect(),
            values: p.values().iter().map(|v| s * s * v).collect(),
        };
        RadialSet::new(
            self.dim,
            s * self.r_cyl,
            scale(&self.upper),
            scale(&self.lower),
        )
    }
}

/// Riemannian volume of the set:
/// `sigma_{2n-1} int_0^{r_cyl} (u_plus + u_minus) r^{2n-1} dr`.
pub fn set_volume(e: &RadialSet, tol: f64) -> Result<f64> {
    let sigma = e.dim.unit_sphere_area();
    let p = 2 * e.dim.n() as i32 - 1;
    let f = |r: f64| (e.upper.eval(r) + e.lower.eval(r)) * r.powi(p);
    // both profiles share the interval structure only if their grids agree;
    // integrate over the union of knots so the integrand is smooth per panel
    let breaks = merged_knots(e);
    let v = quad::integrate_piecewise(&f, &breaks, tol, tol)?;
    Ok(sigma * v)
}

/// Sub-Riemannian perimeter of the set: the two graph faces plus the
/// lateral cylinder-wall term.
pub fn set_perimeter(e: &RadialSet, tol: f64) -> Result<f64> {
    let sigma = e.dim.unit_sphere_area();
    let p = 2 * e.dim.n() as i32 - 1;
    let face = |prof: &RadialProfile| -> Result<f64> {
        let f = |r: f64| {
            let du = prof.deriv(r);
            (du * du + r * r).sqrt() * r.powi(p)
        };
        let mut breaks = prof.grid().to_vec();
        dedup_breaks(&mut breaks);
        quad::integrate_piecewise(&f, &breaks, tol, tol)
    };
    let faces = face(&e.upper)? + face(&e.lower)?;
    let wall = e.r_cyl.powi(p) * (e.upper.eval(e.r_cyl) + e.lower.eval(e.r_cyl));
    Ok(sigma * (faces + wall))
}

fn merged_knots(e: &RadialSet) -> Vec<f64> {
    let mut breaks: Vec<f64> = e
        .upper
        .grid()
        .iter()
        .chain(e.lower.grid().iter())
        .copied()
        .collect();
    breaks.sort_by(|a, b| a.partial_cmp(b).unwrap());
    dedup_breaks(&mut breaks);
    breaks
}

fn dedup_breaks(breaks: &mut Vec<f64>) {
    breaks.dedup_by(|a, b| (*a - *b).abs() <= 1e-15 * a.abs().max(1.0));
}
