//! Central differences with Richardson extrapolation.
//!
//! The m-th central difference `δ_h^m f(x) / h^m` has an error expansion in
//! even powers of `h`, so halving the step and eliminating `h^2, h^4, ...`
//! with a Neville table gives high-order derivative estimates from a
//! handful of function values.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Step and depth of the extrapolation table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Richardson {
    /// Initial step.
    pub h0: f64,
    /// Number of step halvings (table rows).
    pub levels: usize,
}

impl Default for Richardson {
    fn default() -> Self {
        Richardson { h0: 0.1, levels: 3 }
    }
}

/// Derivative estimate with the magnitude of the last extrapolation update.
#[derive(Debug, Clone, Copy)]
pub struct Derivative {
    pub value: Complex64,
    pub est_error: f64,
}

fn binomial(m: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (m - i) as f64 / (i + 1) as f64)
}

fn central_difference<F>(f: &F, x: f64, order: usize, h: f64) -> Result<Complex64>
where
    F: Fn(f64) -> Result<Complex64>,
{
    let mut acc = Complex64::new(0.0, 0.0);
    for k in 0..=order {
        let offset = (order as f64 / 2.0 - k as f64) * h;
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        acc += f(x + offset)? * (sign * binomial(order, k));
    }
    Ok(acc / h.powi(order as i32))
}

/// `order`-th derivative of `f` at `x`.
///
/// Fails when the extrapolation stops improving while the update is still
/// large compared with the value.
pub fn derivative<F>(f: F, x: f64, order: usize, scheme: Richardson) -> Result<Derivative>
where
    F: Fn(f64) -> Result<Complex64>,
{
    if order == 0 {
        return Ok(Derivative { value: f(x)?, est_error: 0.0 });
    }
    if !(scheme.h0 > 0.0) || scheme.levels == 0 {
        return Err(Error::Numerical(format!("bad Richardson scheme {scheme:?}")));
    }
    let mut table: Vec<Complex64> = Vec::with_capacity(scheme.levels);
    let mut updates: Vec<f64> = Vec::new();
    let mut h = scheme.h0;
    for _ in 0..scheme.levels {
        let mut row = vec![central_difference(&f, x, order, h)?];
        let mut factor = 4.0;
        for prev in &table {
            let last = *row.last().expect("row is never empty");
            row.push(last + (last - *prev) / (factor - 1.0));
            factor *= 4.0;
        }
        if let (Some(prev_best), Some(best)) = (table.last(), row.last()) {
            updates.push((*best - *prev_best).norm());
        }
        table = row;
        h /= 2.0;
    }
    let value = *table.last().expect("levels > 0");
    let est_error = updates.last().copied().unwrap_or(0.0);
    if updates.len() >= 2 {
        let n = updates.len();
        let floor = 1e-7 * value.norm().max(1e-300);
        if updates[n - 1] > updates[n - 2] && updates[n - 1] > floor {
            return Err(Error::Numerical(format!(
                "extrapolation diverging at x = {x}: updates {:?}",
                updates
            )));
        }
    }
    Ok(Derivative { value, est_error })
}

/// Real-valued convenience wrapper around [`derivative`].
pub fn derivative_real<F>(f: F, x: f64, order: usize, scheme: Richardson) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    let d = derivative(|y| f(y).map(|v| Complex64::new(v, 0.0)), x, order, scheme)?;
    Ok(d.value.re)
}

/// `(d/dx)^k f` by nesting first derivatives; `step(x)` gives the initial
/// step at each evaluation point so that stencils stay inside the domain.
pub fn nested_derivative<F, S>(f: &F, x: f64, k: usize, step: &S, levels: usize) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
    S: Fn(f64) -> f64,
{
    if k == 0 {
        return f(x);
    }
    let scheme = Richardson { h0: step(x), levels };
    derivative_real(|y| nested_derivative(f, y, k - 1, step, levels), x, 1, scheme)
}
