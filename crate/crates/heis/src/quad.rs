//! Adaptive Gauss-Kronrod quadrature.
//!
//! A 7-point Gauss / 15-point Kronrod pair drives recursive bisection with a
//! per-interval error budget.  Subintervals are accumulated left to right so
//! the summation order, and therefore the result, is deterministic for a
//! fixed tolerance.

use crate::error::{Error, Result};

// 15-point Kronrod abscissae on [-1, 1] (positive half) and weights,
// with the embedded 7-point Gauss weights.
#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_838_258_730,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

const MAX_DEPTH: u32 = 48;
const MAX_PANELS: u32 = 20_000;

/// One Gauss-Kronrod panel.  Returns (kronrod value, error estimate,
/// integral of |f|).
fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);

    let fc = f(center);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    let mut res_abs = kronrod.abs();

    let mut fv = [0.0f64; 15];
    fv[7] = fc;
    for j in 0..7 {
        let x = half * XGK[j];
        let f1 = f(center - x);
        let f2 = f(center + x);
        fv[j] = f1;
        fv[14 - j] = f2;
        kronrod += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            gauss += WG[j / 2] * (f1 + f2);
        }
    }

    let mean = kronrod * 0.5;
    let mut res_asc = WGK[7] * (fc - mean).abs();
    for j in 0..7 {
        res_asc += WGK[j] * ((fv[j] - mean).abs() + (fv[14 - j] - mean).abs());
    }

    let mut err = ((kronrod - gauss) * half).abs();
    res_asc *= half.abs();
    if res_asc != 0.0 && err != 0.0 {
        let scale = (200.0 * err / res_asc).powf(1.5);
        err = if scale < 1.0 { res_asc * scale } else { res_asc };
    }
    let res_abs = res_abs * half.abs();
    let min_err = 50.0 * f64::EPSILON * res_abs;
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) && min_err > err {
        err = min_err;
    }

    (kronrod * half, err, res_abs)
}

#[allow(clippy::too_many_arguments)]
fn refine<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    budget: f64,
    depth: u32,
    panels: &mut u32,
    value: &mut f64,
    err_total: &mut f64,
) -> Result<()> {
    let (v, e, res_abs) = gk15(f, a, b);
    if !v.is_finite() {
        return Err(Error::NonFinite {
            context: "quadrature integrand",
        });
    }
    *panels += 1;
    // Roundoff floor: no further bisection can improve past this.
    let floor = 50.0 * f64::EPSILON * res_abs;
    if e <= budget || e <= floor || depth >= MAX_DEPTH || *panels >= MAX_PANELS {
        *value += v;
        *err_total += e;
        return Ok(());
    }
    let mid = 0.5 * (a + b);
    refine(f, a, mid, 0.5 * budget, depth + 1, panels, value, err_total)?;
    refine(f, mid, b, 0.5 * budget, depth + 1, panels, value, err_total)
}

/// Integrate `f` over `[a, b]` to absolute tolerance `abs_tol` or relative
/// tolerance `rel_tol`, whichever is weaker.
pub fn integrate<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    abs_tol: f64,
    rel_tol: f64,
) -> Result<f64> {
    if a == b {
        return Ok(0.0);
    }
    let (first, _, _) = gk15(f, a, b);
    let budget = abs_tol.max(rel_tol * first.abs());
    let mut value = 0.0;
    let mut err = 0.0;
    let mut panels = 0u32;
    refine(f, a, b, budget, 0, &mut panels, &mut value, &mut err)?;
    let requested = abs_tol.max(rel_tol * value.abs());
    // Allow the roundoff floor of the final sum to count as converged.
    if err > requested && err > 500.0 * f64::EPSILON * value.abs() {
        return Err(Error::Quadrature {
            requested,
            achieved: err,
        });
    }
    Ok(value)
}

/// Integrate over consecutive panels `[breaks[0], breaks[1]], ...`, summing
/// in panel order.  Used for piecewise-smooth integrands whose knots are
/// known in advance.
pub fn integrate_piecewise<F: Fn(f64) -> f64>(
    f: &F,
    breaks: &[f64],
    abs_tol: f64,
    rel_tol: f64,
) -> Result<f64> {
    assert!(breaks.len() >= 2, "need at least one panel");
    let pieces = breaks.len() - 1;
    let per_abs = abs_tol / pieces as f64;
    let mut total = 0.0;
    for w in breaks.windows(2) {
        total += integrate(f, w[0], w[1], per_abs, rel_tol)?;
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn polynomial_is_exact() {
        let v = integrate(&|x| x * x * x - 2.0 * x + 1.0, -1.0, 3.0, 1e-12, 1e-12).unwrap();
        // antiderivative x^4/4 - x^2 + x: (81/4 - 9 + 3) - (1/4 - 1 - 1)
        let exact = (81.0 / 4.0 - 6.0) - (0.25 - 2.0);
        assert!((v - exact).abs() < 1e-12);
    }

    #[test]
    fn smooth_transcendental() {
        let v = integrate(&|x: f64| x.sin().exp(), 0.0, PI, 1e-12, 1e-12).unwrap();
        // reference from a 30-digit independent evaluation, frozen
        assert!((v - 6.208_758_035_711_11).abs() < 1e-12);
    }

    #[test]
    fn wallis_integrals() {
        // int_0^(pi/2) sin^2 = pi/4, sin^4 = 3pi/16
        let s2 = integrate(&|t: f64| t.sin().powi(2), 0.0, PI / 2.0, 1e-13, 1e-13).unwrap();
        let s4 = integrate(&|t: f64| t.sin().powi(4), 0.0, PI / 2.0, 1e-13, 1e-13).unwrap();
        assert!((s2 - PI / 4.0).abs() < 1e-13);
        assert!((s4 - 3.0 * PI / 16.0).abs() < 1e-13);
    }

    #[test]
    fn mild_endpoint_singularity() {
        // int_0^1 sqrt(1 - x) dx = 2/3; integrand is C^0 with unbounded
        // second derivative at the endpoint.
        let v = integrate(&|x: f64| (1.0 - x).sqrt(), 0.0, 1.0, 1e-10, 1e-10).unwrap();
        assert!((v - 2.0 / 3.0).abs() < 1e-10);
    }

    #[test]
    fn piecewise_kink() {
        let f = |x: f64| x.abs();
        let v = integrate_piecewise(&f, &[-1.0, 0.0, 2.0], 1e-13, 1e-13).unwrap();
        assert!((v - 2.5).abs() < 1e-13);
    }

    #[test]
    fn non_finite_integrand_is_reported() {
        let r = integrate(&|x: f64| 1.0 / x, -1.0, 1.0, 1e-10, 1e-10);
        assert!(matches!(r, Err(Error::NonFinite { .. })));
    }

    #[test]
    fn unreachable_tolerance_is_reported() {
        // infinitely oscillating integrand: the depth cap leaves error
        // that an extreme tolerance cannot absorb
        let r = integrate(&|x: f64| (1.0 / x).sin(), 1e-300, 1.0, 1e-15, 0.0);
        assert!(matches!(r, Err(Error::Quadrature { .. })), "got {r:?}");
    }

    #[test]
    fn deterministic_across_calls() {
        let run = || integrate(&|x: f64| (10.0 * x).cos() / (1.0 + x * x), 0.0, 4.0, 1e-12, 1e-12);
        let a = run().unwrap();
        let b = run().unwrap();
        assert_eq!(a.to_bits(), b.to_bits());
    }
}
