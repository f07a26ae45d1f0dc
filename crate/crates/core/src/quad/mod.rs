//! Numerical integration shared by the geometric and spectral routines.

mod ball;
pub mod gauss;

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

pub use ball::{integrate_ball, BallRule};
pub use gauss::gauss_legendre;

/// Outcome of a quadrature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    /// Absolute error estimate.
    pub est_error: f64,
    /// Number of integrand evaluations.
    pub evaluations: usize,
}

/// Knobs for the adaptive integrator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Adaptive {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_intervals: usize,
}

impl Adaptive {
    pub fn new(tol: f64) -> Self {
        Adaptive { abs_tol: tol, rel_tol: 0.0, max_intervals: 4000 }
    }
}

/// Inverse-square-root endpoint singularities declared by the caller.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Singular {
    pub left: bool,
    pub right: bool,
}

const ROUNDOFF: f64 = 50.0 * f64::EPSILON;

struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn kronrod15<F>(f: &mut F, a: f64, b: f64) -> Result<(f64, f64)>
where
    F: FnMut(f64) -> Result<f64>,
{
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center)?;
    let mut kronrod = gauss::WGK[7] * fc;
    let mut gauss = gauss::WG[3] * fc;
    for j in 0..7 {
        let dx = half * gauss::XGK[j];
        let s = f(center - dx)? + f(center + dx)?;
        kronrod += gauss::WGK[j] * s;
        if j % 2 == 1 {
            gauss += gauss::WG[j / 2] * s;
        }
    }
    let value = kronrod * half;
    let error = ((kronrod - gauss) * half).abs();
    Ok((value, error.max(ROUNDOFF * value.abs())))
}

/// Adaptive Gauss–Kronrod over `[a, b]` with an initial split at `breaks`.
pub fn try_integrate<F>(mut f: F, a: f64, b: f64, breaks: &[f64], opts: Adaptive) -> Result<QuadResult>
where
    F: FnMut(f64) -> Result<f64>,
{
    if !(a < b) {
        if a == b {
            return Ok(QuadResult { value: 0.0, est_error: 0.0, evaluations: 0 });
        }
        return Err(Error::Domain(format!("integration bounds out of order: [{a}, {b}]")));
    }
    let mut points = vec![a];
    let mut inner: Vec<f64> = breaks.iter().copied().filter(|&x| x > a && x < b).collect();
    inner.sort_by(f64::total_cmp);
    inner.dedup();
    points.extend(inner);
    points.push(b);

    let mut heap = BinaryHeap::new();
    let mut evaluations = 0;
    for w in points.windows(2) {
        if w[1] <= w[0] {
            continue;
        }
        let (value, error) = kronrod15(&mut f, w[0], w[1])?;
        evaluations += 15;
        heap.push(Panel { a: w[0], b: w[1], value, error });
    }
    loop {
        // Totals are re-summed in interval order for reproducible output.
        let (value, error, roundoff) = totals(&heap);
        // requests below the rounding floor of the panel sums are met by it
        let target = opts.abs_tol.max(opts.rel_tol * value.abs()).max(roundoff);
        if error <= target {
            return Ok(QuadResult { value, est_error: error, evaluations });
        }
        if heap.len() >= opts.max_intervals {
            return Err(Error::NoConvergence(format!(
                "adaptive quadrature hit {} intervals with error {error:e} > {target:e}",
                opts.max_intervals
            )));
        }
        let worst = heap.pop().expect("heap holds at least one panel");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            // interval cannot be split further; accept what we have
            heap.push(Panel { error: 0.0, ..worst });
            continue;
        }
        let (v1, e1) = kronrod15(&mut f, worst.a, mid)?;
        let (v2, e2) = kronrod15(&mut f, mid, worst.b)?;
        evaluations += 30;
        heap.push(Panel { a: worst.a, b: mid, value: v1, error: e1 });
        heap.push(Panel { a: mid, b: worst.b, value: v2, error: e2 });
    }
}

fn totals(heap: &BinaryHeap<Panel>) -> (f64, f64, f64) {
    let mut panels: Vec<&Panel> = heap.iter().collect();
    panels.sort_by(|p, q| p.a.total_cmp(&q.a));
    panels
        .iter()
        .fold((0.0, 0.0, 0.0), |(v, e, r), p| (v + p.value, e + p.error, r + ROUNDOFF * p.value.abs()))
}

/// `∫_a^b f` for a smooth integrand to absolute tolerance `tol`.
pub fn integrate_1d<F>(mut f: F, a: f64, b: f64, tol: f64) -> Result<QuadResult>
where
    F: FnMut(f64) -> f64,
{
    try_integrate(|x| Ok(f(x)), a, b, &[], Adaptive::new(tol))
}

/// `∫_a^b f` where `f` may blow up like an inverse square root at the
/// declared endpoints.
///
/// A right singularity is removed with `t = b - (b-a) u²`, a left one with
/// `t = a + (b-a) u²`, and a pair with `t = a + (b-a)(1 - cos θ)/2`. These are
/// the `s = cosh²t - cosh²r` substitutions in normalized form.
pub fn try_integrate_singular<F>(mut f: F, a: f64, b: f64, sing: Singular, opts: Adaptive) -> Result<QuadResult>
where
    F: FnMut(f64) -> Result<f64>,
{
    let len = b - a;
    match (sing.left, sing.right) {
        (false, false) => try_integrate(f, a, b, &[], opts),
        (true, false) => try_integrate(|u| Ok(f(a + len * u * u)? * 2.0 * len * u), 0.0, 1.0, &[], opts),
        (false, true) => try_integrate(|u| Ok(f(b - len * u * u)? * 2.0 * len * u), 0.0, 1.0, &[], opts),
        (true, true) => try_integrate(
            |th: f64| Ok(f(a + 0.5 * len * (1.0 - th.cos()))? * 0.5 * len * th.sin()),
            0.0,
            std::f64::consts::PI,
            &[],
            opts,
        ),
    }
}

/// Infallible form of [`try_integrate_singular`].
pub fn integrate_1d_singular<F>(mut f: F, a: f64, b: f64, sing: Singular, tol: f64) -> Result<QuadResult>
where
    F: FnMut(f64) -> f64,
{
    try_integrate_singular(|x| Ok(f(x)), a, b, sing, Adaptive::new(tol))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn constant_and_sine() {
        let r = integrate_1d(|_| 1.0, 0.0, 1.0, 1e-14).unwrap();
        assert!((r.value - 1.0).abs() < 1e-15);
        assert!(r.evaluations > 0);
        let r = integrate_1d(f64::sin, 0.0, PI, 1e-13).unwrap();
        assert!((r.value - 2.0).abs() < 1e-12);
        assert!(r.est_error >= (r.value - 2.0).abs());
    }

    #[test]
    fn beta_half_half_with_declared_singularities() {
        for x_max in [0.3, 1.0, 17.0] {
            let r = integrate_1d_singular(
                |s| 0.5 / ((x_max - s).sqrt() * s.sqrt()),
                0.0,
                x_max,
                Singular { left: true, right: true },
                1e-13,
            )
            .unwrap();
            assert!((r.value - PI / 2.0).abs() < 1e-12, "X = {x_max}: {}", r.value);
        }
    }

    #[test]
    fn one_sided_singularity() {
        // ∫_0^1 (1-t)^{-1/2} dt = 2
        let r = integrate_1d_singular(|t| 1.0 / (1.0 - t).sqrt(), 0.0, 1.0, Singular { left: false, right: true }, 1e-13)
            .unwrap();
        assert!((r.value - 2.0).abs() < 1e-12);
    }

    #[test]
    fn kink_with_breakpoint() {
        let r = try_integrate(|x: f64| Ok((x - 0.3).abs()), 0.0, 1.0, &[0.3], Adaptive::new(1e-14)).unwrap();
        assert!((r.value - (0.045 + 0.245)).abs() < 1e-14);
    }

    #[test]
    fn estimate_bounds_error_on_closed_forms() {
        let cases: [(fn(f64) -> f64, f64, f64, f64); 4] = [
            (|x| x.exp(), 0.0, 2.0, 2f64.exp() - 1.0),
            (|x| 1.0 / (1.0 + x * x), -3.0, 3.0, 2.0 * 3f64.atan()),
            (|x| x.sqrt(), 0.0, 1.0, 2.0 / 3.0),
            (|x| (10.0 * x).cos(), 0.0, 1.0, 10f64.sin() / 10.0),
        ];
        for (f, a, b, want) in cases {
            let r = integrate_1d(f, a, b, 1e-10).unwrap();
            assert!((r.value - want).abs() <= r.est_error.max(1e-10), "{} vs {want}", r.value);
        }
    }

    #[test]
    fn reversed_bounds_error() {
        assert!(integrate_1d(|x| x, 1.0, 0.0, 1e-8).is_err());
    }
}
