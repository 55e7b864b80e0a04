//! Shape-preserving monotone cubic interpolation (Fritsch-Carlson).
//!
//! Knot slopes use the weighted harmonic mean on the interior and a
//! clamped three-point formula at the ends, so the interpolant is monotone
//! wherever the data is and never leaves the value range of the two knots
//! bounding an interval.  In particular non-negative knot values give a
//! non-negative interpolant.

use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct MonotoneCubic {
    x: Vec<f64>,
    y: Vec<f64>,
    d: Vec<f64>,
}

impl MonotoneCubic {
    pub fn new(x: Vec<f64>, y: Vec<f64>) -> Result<Self> {
        if x.len() != y.len() {
            return Err(Error::OutOfRange {
                name: "values",
                value: y.len() as f64,
                range: "grid and values must have equal length",
            });
        }
        if x.len() < 2 {
            return Err(Error::OutOfRange {
                name: "grid",
                value: x.len() as f64,
                range: "at least two knots",
            });
        }
        for w in x.windows(2) {
            if !(w[1] > w[0]) {
                return Err(Error::OutOfRange {
                    name: "grid",
                    value: w[1],
                    range: "strictly increasing knots",
                });
            }
        }
        if x.iter().chain(y.iter()).any(|v| !v.is_finite()) {
            return Err(Error::NonFinite {
                context: "interpolation knots",
            });
        }
        let d = slopes(&x, &y);
        Ok(MonotoneCubic { x, y, d })
    }

    pub fn knots(&self) -> &[f64] {
        &self.x
    }

    pub fn values(&self) -> &[f64] {
        &self.y
    }

    pub fn intervals(&self) -> usize {
        self.x.len() - 1
    }

    fn locate(&self, r: f64) -> usize {
        // clamp to the boundary intervals; callers stay inside the grid
        match self.x.binary_search_by(|v| v.partial_cmp(&r).unwrap()) {
            Ok(i) => i.min(self.x.len() - 2),
            Err(0) => 0,
            Err(i) => (i - 1).min(self.x.len() - 2),
        }
    }

    pub fn eval(&self, r: f64) -> f64 {
        let i = self.locate(r);
        let h = self.x[i + 1] - self.x[i];
        let t = (r - self.x[i]) / h;
        let (h00, h10, h01, h11) = hermite_basis(t);
        h00 * self.y[i] + h10 * h * self.d[i] + h01 * self.y[i + 1] + h11 * h * self.d[i + 1]
    }

    /// Analytic derivative of the interpolant.
    pub fn deriv(&self, r: f64) -> f64 {
        let i = self.locate(r);
        let h = self.x[i + 1] - self.x[i];
        let t = (r - self.x[i]) / h;
        let dh00 = (6.0 * t * t - 6.0 * t) / h;
        let dh10 = 3.0 * t * t - 4.0 * t + 1.0;
        let dh01 = -(6.0 * t * t - 6.0 * t) / h;
        let dh11 = 3.0 * t * t - 2.0 * t;
        dh00 * self.y[i] + dh10 * self.d[i] + dh01 * self.y[i + 1] + dh11 * self.d[i + 1]
    }

    /// The exact minimum of the cubic on knot interval `i`, via the roots of
    /// its derivative.  Used to certify the no-undershoot invariant.
    pub fn min_on_interval(&self, i: usize) -> f64 {
        let h = self.x[i + 1] - self.x[i];
        let eval_t = |t: f64| {
            let (h00, h10, h01, h11) = hermite_basis(t);
            h00 * self.y[i] + h10 * h * self.d[i] + h01 * self.y[i + 1] + h11 * h * self.d[i + 1]
        };
        let mut m = self.y[i].min(self.y[i + 1]);
        // p'(t)/h in t: quadratic a t^2 + b t + c
        let (y0, y1) = (self.y[i], self.y[i + 1]);
        let (d0, d1) = (self.d[i] * h, self.d[i + 1] * h);
        let a = 6.0 * y0 - 6.0 * y1 + 3.0 * d0 + 3.0 * d1;
        let b = -6.0 * y0 + 6.0 * y1 - 4.0 * d0 - 2.0 * d1;
        let c = d0;
        let mut consider = |t: f64| {
            if t > 0.0 && t < 1.0 {
                m = m.min(eval_t(t));
            }
        };
        if a.abs() < 1e-300 {
            if b.abs() > 0.0 {
                consider(-c / b);
            }
        } else {
            let disc = b * b - 4.0 * a * c;
            if disc >= 0.0 {
                let sq = disc.sqrt();
                consider((-b + sq) / (2.0 * a));
                consider((-b - sq) / (2.0 * a));
            }
        }
        m
    }
}

fn hermite_basis(t: f64) -> (f64, f64, f64, f64) {
    let t2 = t * t;
    let t3 = t2 * t;
    (
        2.0 * t3 - 3.0 * t2 + 1.0,
        t3 - 2.0 * t2 + t,
        -2.0 * t3 + 3.0 * t2,
        t3 - t2,
    )
}

fn slopes(x: &[f64], y: &[f64]) -> Vec<f64> {
    let n = x.len();
    if n == 2 {
        let m = (y[1] - y[0]) / (x[1] - x[0]);
        return vec![m, m];
    }
    let h: Vec<f64> = x.windows(2).map(|w| w[1] - w[0]).collect();
    let delta: Vec<f64> = y
        .windows(2)
        .zip(&h)
        .map(|(w, hk)| (w[1] - w[0]) / hk)
        .collect();

    let mut d = vec![0.0; n];
    for i in 1..n - 1 {
        let (dl, dr) = (delta[i - 1], delta[i]);
        if dl * dr <= 0.0 {
            d[i] = 0.0;
        } else {
            let w1 = 2.0 * h[i] + h[i - 1];
            let w2 = h[i] + 2.0 * h[i - 1];
            d[i] = (w1 + w2) / (w1 / dl + w2 / dr);
        }
    }
    d[0] = edge_slope(h[0], h[1], delta[0], delta[1]);
    d[n - 1] = edge_slope(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);
    d
}

/// Three-point end slope, clamped to preserve monotonicity.
fn edge_slope(h0: f64, h1: f64, m0: f64, m1: f64) -> f64 {
    let mut d = ((2.0 * h0 + h1) * m0 - h0 * m1) / (h0 + h1);
    if d.signum() != m0.signum() || m0 == 0.0 {
        if m0 == 0.0 {
            return 0.0;
        }
        d = 0.0;
    } else if m0.signum() != m1.signum() && d.abs() > 3.0 * m0.abs() {
        d = 3.0 * m0;
    }
    d
}
