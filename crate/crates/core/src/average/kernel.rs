//! The kernel `K(T, t) = (∂ / sinh t ∂t)^{n-1} [(cosh T - cosh t)^{n-3/2}
//! F(-1/2, 3/2; n-1/2; (cosh T - cosh t) / (2 cosh T))]` and its closed form
//! `c¹_n cosh^{-1/2}T cosh t (cosh²T - cosh²t)^{-1/2}`.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::hypgeo::{gamma, hyp2f1_real};
use crate::numdiff::nested_derivative;

/// Deepest operator power supported by [`kernel_k_defining`].
pub const MAX_KERNEL_DIM: usize = 4;

/// Distance from `T` below which `t` is rejected.
pub const KERNEL_EDGE: f64 = 1e-8;

/// Step and depth for the iterated derivative, the step taken relative to
/// the distance `cosh T - cosh t` from the singularity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelScheme {
    pub relative_step: f64,
    pub levels: usize,
}

impl Default for KernelScheme {
    fn default() -> Self {
        KernelScheme { relative_step: 0.1, levels: 4 }
    }
}

/// `c¹_n = (-1)^{n-1} Γ(n - 1/2) √2 / √π`.
pub fn kernel_constant(n: usize) -> f64 {
    let sign = if n % 2 == 1 { 1.0 } else { -1.0 };
    sign * gamma(n as f64 - 0.5).expect("n ≥ 1") * (2.0 / PI).sqrt()
}

/// `cosh a - cosh b` without cancellation.
pub(crate) fn cosh_diff(a: f64, b: f64) -> f64 {
    2.0 * ((a + b) / 2.0).sinh() * ((a - b) / 2.0).sinh()
}

fn check(n: usize, big_t: f64, t: f64) -> Result<()> {
    if n == 0 {
        return Err(Error::Domain("dimension must be positive".into()));
    }
    if !(t >= 0.0) || t > big_t - KERNEL_EDGE {
        return Err(Error::Domain(format!("kernel needs 0 ≤ t ≤ T - {KERNEL_EDGE:e}, got t={t}, T={big_t}")));
    }
    Ok(())
}

/// Closed form of the kernel, with `c¹_n` as given; `constant_scale`
/// multiplies it (1 for the true kernel).
pub fn kernel_k_closed_scaled(n: usize, big_t: f64, t: f64, constant_scale: f64) -> Result<f64> {
    check(n, big_t, t)?;
    let gap = cosh_diff(big_t, t) * (big_t.cosh() + t.cosh());
    Ok(constant_scale * kernel_constant(n) * t.cosh() / (big_t.cosh().sqrt() * gap.sqrt()))
}

/// `c¹_n cosh^{-1/2}T cosh t (cosh²T - cosh²t)^{-1/2}`.
pub fn kernel_k_closed(n: usize, big_t: f64, t: f64) -> Result<f64> {
    kernel_k_closed_scaled(n, big_t, t, 1.0)
}

/// The defining expression, evaluated as `(d/dv)^{n-1}` in `v = cosh t`
/// (the same operator) by nested extrapolated central differences.
pub fn kernel_k_defining(n: usize, big_t: f64, t: f64, scheme: KernelScheme) -> Result<f64> {
    check(n, big_t, t)?;
    if n > MAX_KERNEL_DIM {
        return Err(Error::Domain(format!("finite differences support n ≤ {MAX_KERNEL_DIM}, got {n}")));
    }
    let c = big_t.cosh();
    let p = n as f64 - 1.5;
    let inner = |gap: f64| -> Result<f64> {
        if !(gap > 0.0) {
            return Err(Error::Numerical(format!("stencil crossed the singularity (gap {gap})")));
        }
        Ok(gap.powf(p) * hyp2f1_real(-0.5, 1.5, n as f64 - 0.5, gap / (2.0 * c))?)
    };
    if n == 1 {
        return inner(cosh_diff(big_t, t));
    }
    let g = |v: f64| inner(c - v);
    nested_derivative(&g, t.cosh(), n - 1, &|v: f64| scheme.relative_step * (c - v), scheme.levels)
}
