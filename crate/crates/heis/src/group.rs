//! The Heisenberg group H^n as a data model.
//!
//! Points are written `(z, t)` with `z` a flat list of `2n` reals in the
//! interleaved order `(x_1, y_1, ..., x_n, y_n)` and `t` the vertical
//! coordinate.  The group product is
//!
//! ```text
//! (z, t) * (w, s) = (z + w, t + s + sum_i (y_i w_x_i - x_i w_y_i)),
//! ```
//!
//! the imaginary part of `z_i * conj(w_i)` written in real coordinates.
//! Tangent vectors are expressed on the left-invariant orthonormal frame
//! `{X_1, Y_1, ..., X_n, Y_n, T}` with
//!
//! ```text
//! X_i = d/dx_i + y_i d/dt,   Y_i = d/dy_i - x_i d/dt,   T = d/dt,
//! ```
//!
//! whose only nonzero brackets are `[X_i, Y_i] = -2T`.  All values are
//! immutable and every operation is a pure function.

use crate::error::{Error, Result};

/// Ambient dimension `n >= 1` of H^n = R^(2n+1).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Dimension {
    n: usize,
}

impl Dimension {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::OutOfRange {
                name: "n",
                value: 0.0,
                range: "n >= 1",
            });
        }
        Ok(Dimension { n })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Homogeneous dimension Q = 2n + 2 governing volume scaling under
    /// dilations; perimeter scales with exponent Q - 1.
    pub fn q(&self) -> u32 {
        2 * self.n as u32 + 2
    }

    /// Surface measure of the unit (2n-1)-sphere in R^(2n): 2 pi^n / (n-1)!.
    pub fn unit_sphere_area(&self) -> f64 {
        let mut fact = 1.0;
        for k in 2..self.n {
            fact *= k as f64;
        }
        2.0 * std::f64::consts::PI.powi(self.n as i32) / fact
    }
}

/// A point (z, t) of H^n.  `z` is interleaved `(x_1, y_1, ..., x_n, y_n)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Point {
    z: Vec<f64>,
    t: f64,
}

impl Point {
    /// # Panics
    /// Panics when `z` is empty or has odd length.
    pub fn new(z: Vec<f64>, t: f64) -> Self {
        assert!(
            !z.is_empty() && z.len().is_multiple_of(2),
            "coordinate list must have length 2n, n >= 1; got {}",
            z.len()
        );
        Point { z, t }
    }

    pub fn origin(dim: Dimension) -> Self {
        Point {
            z: vec![0.0; 2 * dim.n()],
            t: 0.0,
        }
    }

    /// A point on the t-axis.
    pub fn on_axis(dim: Dimension, t: f64) -> Self {
        Point {
            z: vec![0.0; 2 * dim.n()],
            t,
        }
    }

    pub fn dim(&self) -> Dimension {
        Dimension { n: self.z.len() / 2 }
    }

    pub fn n(&self) -> usize {
        self.z.len() / 2
    }

    pub fn z(&self) -> &[f64] {
        &self.z
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    /// x_i, 0-based block index.
    pub fn x(&self, i: usize) -> f64 {
        self.z[2 * i]
    }

    /// y_i, 0-based block index.
    pub fn y(&self, i: usize) -> f64 {
        self.z[2 * i + 1]
    }

    /// Euclidean norm |z| of the horizontal coordinates.
    pub fn z_norm(&self) -> f64 {
        self.z.iter().map(|v| v * v).sum::<f64>().sqrt()
    }
}

/// A tangent vector on the orthonormal frame {X_1, Y_1, ..., X_n, Y_n, T}.
///
/// `a` holds the horizontal coefficients in the same interleaved order as
/// point coordinates; `c` is the coefficient on T.  The vector is horizontal
/// iff `c = 0`, and the squared norm is the plain sum of squares of all
/// 2n + 1 coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct FrameVector {
    a: Vec<f64>,
    c: f64,
}

impl FrameVector {
    /// # Panics
    /// Panics when `a` is empty or has odd length.
    pub fn new(a: Vec<f64>, c: f64) -> Self {
        assert!(
            !a.is_empty() && a.len().is_multiple_of(2),
            "frame coefficient list must have length 2n, n >= 1; got {}",
            a.len()
        );
        FrameVector { a, c }
    }

    pub fn horizontal(a: Vec<f64>) -> Self {
        Self::new(a, 0.0)
    }

    /// The frame vector X_i (0-based block index).
    pub fn x_axis(dim: Dimension, i: usize) -> Self {
        let mut a = vec![0.0; 2 * dim.n()];
        a[2 * i] = 1.0;
        FrameVector { a, c: 0.0 }
    }

    pub fn n(&self) -> usize {
        self.a.len() / 2
    }

    pub fn a(&self) -> &[f64] {
        &self.a
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn norm(&self) -> f64 {
        (self.a.iter().map(|v| v * v).sum::<f64>() + self.c * self.c).sqrt()
    }

    pub fn dot(&self, other: &FrameVector) -> f64 {
        assert_eq!(self.a.len(), other.a.len(), "frame dimension mismatch");
        self.a
            .iter()
            .zip(&other.a)
            .map(|(u, v)| u * v)
            .sum::<f64>()
            + self.c * other.c
    }

    pub fn is_horizontal(&self, tol: f64) -> bool {
        self.c.abs() <= tol
    }

    pub fn scale(&self, s: f64) -> FrameVector {
        FrameVector {
            a: self.a.iter().map(|v| s * v).collect(),
            c: s * self.c,
        }
    }
}

/// Group product (z, t) * (w, s).
///
/// # Panics
/// Panics on dimension mismatch.
pub fn group_mul(p: &Point, q: &Point) -> Point {
    assert_eq!(
        p.n(),
        q.n(),
        "group product of points with different ambient dimension"
    );
    let n = p.n();
    let mut z = Vec::with_capacity(2 * n);
    let mut tw = 0.0;
    for i in 0..n {
        z.push(p.x(i) + q.x(i));
        z.push(p.y(i) + q.y(i));
        // Im(z_i conj(w_i)) = y_i w_x_i - x_i w_y_i
        tw += p.y(i) * q.x(i) - p.x(i) * q.y(i);
    }
    Point {
        z,
        t: p.t + q.t + tw,
    }
}

/// Group inverse (-z, -t).
pub fn group_inv(p: &Point) -> Point {
    Point {
        z: p.z.iter().map(|v| -v).collect(),
        t: -p.t,
    }
}

/// Intrinsic dilation delta_s(z, t) = (s z, s^2 t), s > 0.
///
/// Volume scales by s^Q and perimeter by s^(Q-1) under this grading,
/// consistent with `[X_i, Y_i] = -2T`.
pub fn dilate(s: f64, p: &Point) -> Result<Point> {
    if !(s > 0.0) {
        return Err(Error::OutOfRange {
            name: "s",
            value: s,
            range: "s > 0",
        });
    }
    Ok(Point {
        z: p.z.iter().map(|v| s * v).collect(),
        t: s * s * p.t,
    })
}

/// The 90-degree rotation J on the horizontal distribution:
/// J(X_i) = Y_i, J(Y_i) = -X_i, J(T) = 0.
///
/// On coefficients this maps each block (a_x, a_y) to (-a_y, a_x) and
/// zeroes the T part.
pub fn j_rotate(v: &FrameVector) -> FrameVector {
    let n = v.n();
    let mut a = Vec::with_capacity(2 * n);
    for i in 0..n {
        a.push(-v.a[2 * i + 1]);
        a.push(v.a[2 * i]);
    }
    FrameVector { a, c: 0.0 }
}

/// Express a coordinate tangent vector `w = (w_x1, w_y1, ..., w_t)` at `p`
/// on the left-invariant frame.
///
/// The horizontal coefficients copy over; the T coefficient is
/// `w_t - sum_i (w_x_i y_i - w_y_i x_i)`.
///
/// # Panics
/// Panics when `w.len() != 2n + 1`.
pub fn coord_to_frame(p: &Point, w: &[f64]) -> FrameVector {
    let n = p.n();
    assert_eq!(w.len(), 2 * n + 1, "coordinate vector must have length 2n+1");
    let mut a = Vec::with_capacity(2 * n);
    let mut corr = 0.0;
    for i in 0..n {
        let wx = w[2 * i];
        let wy = w[2 * i + 1];
        a.push(wx);
        a.push(wy);
        corr += wx * p.y(i) - wy * p.x(i);
    }
    FrameVector {
        a,
        c: w[2 * n] - corr,
    }
}

/// Inverse of [`coord_to_frame`]: frame coefficients back to the coordinate
/// basis at `p`.
///
/// # Panics
/// Panics on dimension mismatch.
pub fn frame_to_coord(p: &Point, v: &FrameVector) -> Vec<f64> {
    let n = p.n();
    assert_eq!(v.n(), n, "frame dimension mismatch");
    let mut w = Vec::with_capacity(2 * n + 1);
    let mut t = v.c;
    for i in 0..n {
        let ax = v.a[2 * i];
        let ay = v.a[2 * i + 1];
        w.push(ax);
        w.push(ay);
        t += ax * p.y(i) - ay * p.x(i);
    }
    w.push(t);
    w
}

/// Differential of the left translation L_p applied to a coordinate tangent
/// vector.  In coordinates the Jacobian of L_p is constant:
/// `dL_p(w) = (w_z, w_t + sum_i (p_y_i w_x_i - p_x_i w_y_i))`.
pub fn translate_pushforward(p: &Point, w: &[f64]) -> Vec<f64> {
    let n = p.n();
    assert_eq!(w.len(), 2 * n + 1, "coordinate vector must have length 2n+1");
    let mut out = w.to_vec();
    let mut corr = 0.0;
    for i in 0..n {
        corr += p.y(i) * w[2 * i] - p.x(i) * w[2 * i + 1];
    }
    out[2 * n] += corr;
    out
}
