//! Sub-Riemannian geodesics of H^n.
//!
//! A unit-speed horizontal geodesic of curvature `lambda` solves
//! `xdd_i = 2 lambda yd_i`, `ydd_i = -2 lambda xd_i`, with the vertical
//! coordinate slaved to `td = sum_i (xd_i y_i - x_i yd_i)`.  For
//! `lambda = 0` the solutions are horizontal straight lines; for
//! `lambda != 0` they close up after arc length `2 pi / |lambda|` in the
//! horizontal projection.  Both branches are implemented in closed form,
//! and a fixed-step RK4 integration of the defining system serves as an
//! independent oracle.

use crate::error::{Error, Result};
use crate::group::{Dimension, FrameVector, Point};

/// Below this |lambda| the trigonometric ratios of the closed form are
/// evaluated by series to avoid catastrophic cancellation, keeping a single
/// code path for all nonzero curvatures.
const SMALL_LAMBDA: f64 = 1e-8;

/// Initial data for a geodesic: curvature, start point, and a horizontal
/// unit start velocity on the frame.
#[derive(Debug, Clone)]
pub struct GeodesicSpec {
    lambda: f64,
    p0: Point,
    v0: FrameVector,
}

impl GeodesicSpec {
    /// # Panics
    /// Panics when dimensions disagree.
    pub fn new(lambda: f64, p0: Point, v0: FrameVector) -> Result<Self> {
        assert_eq!(p0.n(), v0.n(), "point/velocity dimension mismatch");
        if v0.c().abs() > 1e-12 {
            return Err(Error::OutOfRange {
                name: "v0.c",
                value: v0.c(),
                range: "velocity must be horizontal (T coefficient 0)",
            });
        }
        let norm = v0.norm();
        if (norm - 1.0).abs() > 1e-9 {
            return Err(Error::OutOfRange {
                name: "|v0|",
                value: norm,
                range: "velocity must be unit",
            });
        }
        Ok(GeodesicSpec { lambda, p0, v0 })
    }

    pub fn dim(&self) -> Dimension {
        self.p0.dim()
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn start(&self) -> &Point {
        &self.p0
    }

    pub fn velocity(&self) -> &FrameVector {
        &self.v0
    }
}

/// Point and frame velocity of a geodesic at arc parameter `s`.
#[derive(Debug, Clone)]
pub struct GeodesicState {
    pub s: f64,
    pub point: Point,
    pub velocity: FrameVector,
}

/// sin(2 lambda s) / (2 lambda), series-expanded for small |lambda|.
fn sin_ratio(lambda: f64, s: f64) -> f64 {
    if lambda.abs() < SMALL_LAMBDA {
        let l2 = lambda * lambda;
        s - (2.0 / 3.0) * l2 * s.powi(3) + (2.0 / 15.0) * l2 * l2 * s.powi(5)
    } else {
        (2.0 * lambda * s).sin() / (2.0 * lambda)
    }
}

/// (1 - cos(2 lambda s)) / (2 lambda), series-expanded for small |lambda|.
fn cos_ratio(lambda: f64, s: f64) -> f64 {
    if lambda.abs() < SMALL_LAMBDA {
        let l2 = lambda * lambda;
        lambda * s * s - (l2 * lambda) * s.powi(4) / 3.0 + (2.0 / 45.0) * l2 * l2 * lambda * s.powi(6)
    } else {
        (1.0 - (2.0 * lambda * s).cos()) / (2.0 * lambda)
    }
}

/// (s - sin(2 lambda s) / (2 lambda)) / (2 lambda), the vertical drift term.
fn drift_ratio(lambda: f64, s: f64) -> f64 {
    if lambda.abs() < SMALL_LAMBDA {
        let l2 = lambda * lambda;
        lambda * s.powi(3) / 3.0 - (l2 * lambda) * s.powi(5) / 15.0
            + (2.0 / 315.0) * l2 * l2 * lambda * s.powi(7)
    } else {
        (s - sin_ratio(lambda, s)) / (2.0 * lambda)
    }
}

/// Closed-form state of the geodesic at arc parameter `s`.
///
/// The straight-line branch is taken exactly when `lambda == 0`.
pub fn geodesic_state(g: &GeodesicSpec, s: f64) -> GeodesicState {
    let n = g.p0.n();
    let lambda = g.lambda;
    let a = g.v0.a();
    let mut z = Vec::with_capacity(2 * n);
    let mut xdot = Vec::with_capacity(2 * n);
    let mut t;
    let tdot;

    if lambda == 0.0 {
        t = g.p0.t();
        let mut td = 0.0;
        for i in 0..n {
            let (ai, bi) = (a[2 * i], a[2 * i + 1]);
            let (x0, y0) = (g.p0.x(i), g.p0.y(i));
            z.push(x0 + ai * s);
            z.push(y0 + bi * s);
            xdot.push(ai);
            xdot.push(bi);
            td += ai * y0 - bi * x0;
        }
        t += td * s;
        tdot = td;
    } else {
        let sr = sin_ratio(lambda, s);
        let cr = cos_ratio(lambda, s);
        let cos2ls = (2.0 * lambda * s).cos();
        let sin2ls = (2.0 * lambda * s).sin();
        t = g.p0.t() + drift_ratio(lambda, s);
        let mut td = cos_ratio(lambda, s);
        for i in 0..n {
            let (ai, bi) = (a[2 * i], a[2 * i + 1]);
            let (x0, y0) = (g.p0.x(i), g.p0.y(i));
            z.push(x0 + ai * sr + bi * cr);
            z.push(y0 - ai * cr + bi * sr);
            xdot.push(ai * cos2ls + bi * sin2ls);
            xdot.push(-ai * sin2ls + bi * cos2ls);
            t += (ai * x0 + bi * y0) * cr - (bi * x0 - ai * y0) * sr;
            td += (ai * x0 + bi * y0) * sin2ls - (bi * x0 - ai * y0) * cos2ls;
        }
        tdot = td;
    }

    let point = Point::new(z, t);
    // T-frame coefficient of the velocity: zero up to rounding because
    // td equals sum_i (xd_i y_i - x_i yd_i) along the solution.
    let mut coords = xdot;
    coords.push(tdot);
    let velocity = crate::group::coord_to_frame(&point, &coords);
    GeodesicState { s, point, velocity }
}

/// Classical fixed-step RK4 integration of the geodesic system; the
/// independent oracle for [`geodesic_state`].
///
/// State layout: (x_1, y_1, ..., x_n, y_n, t, xd_1, yd_1, ..., xd_n, yd_n).
pub fn geodesic_ode_oracle(g: &GeodesicSpec, s: f64, steps: usize) -> GeodesicState {
    assert!(steps >= 1, "steps must be >= 1");
    let n = g.p0.n();
    let lambda = g.lambda;
    let m = 2 * n;

    let mut state = Vec::with_capacity(2 * m + 1);
    state.extend_from_slice(g.p0.z());
    state.push(g.p0.t());
    state.extend_from_slice(g.v0.a());

    let deriv = |st: &[f64], out: &mut [f64]| {
        let mut td = 0.0;
        for i in 0..n {
            let x = st[2 * i];
            let y = st[2 * i + 1];
            let xd = st[m + 1 + 2 * i];
            let yd = st[m + 1 + 2 * i + 1];
            out[2 * i] = xd;
            out[2 * i + 1] = yd;
            out[m + 1 + 2 * i] = 2.0 * lambda * yd;
            out[m + 1 + 2 * i + 1] = -2.0 * lambda * xd;
            td += xd * y - x * yd;
        }
        out[m] = td;
    };

    let h = s / steps as f64;
    let len = state.len();
    let mut k1 = vec![0.0; len];
    let mut k2 = vec![0.0; len];
    let mut k3 = vec![0.0; len];
    let mut k4 = vec![0.0; len];
    let mut tmp = vec![0.0; len];

    for _ in 0..steps {
        deriv(&state, &mut k1);
        for j in 0..len {
            tmp[j] = state[j] + 0.5 * h * k1[j];
        }
        deriv(&tmp, &mut k2);
        for j in 0..len {
            tmp[j] = state[j] + 0.5 * h * k2[j];
        }
        deriv(&tmp, &mut k3);
        for j in 0..len {
            tmp[j] = state[j] + h * k3[j];
        }
        deriv(&tmp, &mut k4);
        for j in 0..len {
            state[j] += h / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
        }
    }

    let point = Point::new(state[..m].to_vec(), state[m]);
    let velocity = FrameVector::horizontal(state[m + 1..].to_vec());
    GeodesicState { s, point, velocity }
}

/// Residuals of the velocity identities that hold for geodesics leaving the
/// t-axis: with `k(s) = lambda sin(2 lambda s) / (1 - cos(2 lambda s))`,
///
/// ```text
/// xd_i = k(s) x_i + lambda y_i,      yd_i = -lambda x_i + k(s) y_i.
/// ```
///
/// Returns the pair of max-over-blocks absolute residuals.  Rejects
/// parameters where the denominator `1 - cos(2 lambda s)` vanishes
/// (`s = 0` or `s = pi / |lambda|`).
pub fn geodesic_identity_residuals(g: &GeodesicSpec, s: f64) -> Result<(f64, f64)> {
    if g.lambda == 0.0 {
        return Err(Error::OutOfRange {
            name: "lambda",
            value: 0.0,
            range: "lambda != 0",
        });
    }
    if g.p0.z_norm() != 0.0 {
        return Err(Error::OutOfRange {
            name: "p0.z",
            value: g.p0.z_norm(),
            range: "start point must lie on the t-axis",
        });
    }
    let lambda = g.lambda;
    let period = std::f64::consts::PI / lambda.abs();
    let denom = 1.0 - (2.0 * lambda * s).cos();
    if !(s > 0.0) || s >= period || denom <= 1e-14 {
        return Err(Error::OutOfRange {
            name: "s",
            value: s,
            range: "s in (0, pi/|lambda|), away from the denominator zeros",
        });
    }
    let k = lambda * (2.0 * lambda * s).sin() / denom;
    let st = geodesic_state(g, s);
    let v = st.velocity.a();
    let mut rx: f64 = 0.0;
    let mut ry: f64 = 0.0;
    for i in 0..g.p0.n() {
        let (x, y) = (st.point.x(i), st.point.y(i));
        let (xd, yd) = (v[2 * i], v[2 * i + 1]);
        rx = rx.max((xd - k * x - lambda * y).abs());
        ry = ry.max((yd + lambda * x - k * y).abs());
    }
    Ok((rx, ry))
}
