//! The identity battery behind `chlattice verify`.
//!
//! Each item compares two independent evaluations of the same quantity and
//! reports the worst residual on a fixed grid.

use chlattice::average::{bump_normalization, kernel_k_closed_scaled, kernel_k_defining, CapProfile, KernelScheme};
use chlattice::chgeom::{volume_ball, BallPoint};
use chlattice::hypgeo::{connection_overlap_sweep, derivative_identity_residual, gauss_2f1, HypParams};
use chlattice::quad::{integrate_ball, BallRule};
use chlattice::spectral::{h_n_closed, h_n_quadrature};
use num_complex::Complex64;
use serde::Serialize;
use serde_json::json;

use crate::table::{Cell, Table};
use crate::CliError;

/// Seed of the random hypergeometric draws.
pub const OVERLAP_SEED: u64 = 0x2f1;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyItem {
    pub name: String,
    pub max_residual: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl VerifyItem {
    fn new(name: impl Into<String>, max_residual: f64, tolerance: f64) -> Self {
        let pass = max_residual <= tolerance;
        VerifyItem { name: name.into(), max_residual, tolerance, pass }
    }
}

/// 20 pairs `(T, t)` with `0.2 ≤ t ≤ T - 0.2 ≤ 4.8`, spread over the whole
/// triangle.
pub fn kernel_grid() -> Vec<(f64, f64)> {
    (0..20)
        .map(|k| {
            let big_t = 0.6 + 4.4 * k as f64 / 19.0;
            let u = ((7 * k) % 20) as f64 / 19.0;
            (big_t, 0.2 + (big_t - 0.4) * u)
        })
        .collect()
}

/// Worst `|K_defining - K_closed| / |K_closed|` over [`kernel_grid`], the
/// closed form's constant multiplied by `scale`.
pub fn kernel_residual(n: usize, scale: f64) -> Result<f64, CliError> {
    let mut worst = 0.0f64;
    for (big_t, t) in kernel_grid() {
        let closed = kernel_k_closed_scaled(n, big_t, t, scale)?;
        let defining = kernel_k_defining(n, big_t, t, KernelScheme::default())?;
        worst = worst.max((defining - closed).abs() / closed.abs());
    }
    Ok(worst)
}

/// Worst relative gap between the two evaluations of `H_n(λ, T)` for
/// `λ ∈ {0, 1, 4, 25}`, `T ∈ {0.5, 1, 2}`.
pub fn h_n_residual(n: usize) -> Result<f64, CliError> {
    let mut worst = 0.0f64;
    for lambda in [0.0, 1.0, 4.0, 25.0] {
        for t in [0.5, 1.0, 2.0] {
            let c = h_n_closed(n, lambda, t)?;
            let q = h_n_quadrature(n, lambda, t)?;
            worst = worst.max((c - q).abs() / c.abs().max(1e-30));
        }
    }
    Ok(worst)
}

/// `|α^{2n} c_n(α) - 1|` for the given radii.
pub fn bump_limit(n: usize, alphas: &[f64]) -> Result<Vec<f64>, CliError> {
    alphas
        .iter()
        .map(|&a| Ok((a.powi(2 * n as i32) * bump_normalization(n, a, CapProfile::default())? - 1.0).abs()))
        .collect()
}

/// Worst relative gap between the closed-form volume and cubature of 1.
pub fn volume_residual(n: usize) -> Result<f64, CliError> {
    let o = BallPoint::origin(n);
    let mut worst = 0.0f64;
    for t in [0.5, 1.0, 2.0] {
        let closed = volume_ball(n, t);
        let q = integrate_ball(|_| 1.0, &o, t, 1e-8, &BallRule::default())?;
        worst = worst.max((q.value - closed).abs() / closed);
    }
    Ok(worst)
}

/// Worst relative gap of `F(a, b; b; z)` from `(1 - z)^{-a}`.
pub fn b_equals_c_residual() -> Result<f64, CliError> {
    let mut worst = 0.0f64;
    for a in [0.3, -1.7, 2.5] {
        for b in [0.9, 3.1] {
            for z in [Complex64::new(-4.0, 0.0), Complex64::new(-0.5, 0.0), Complex64::new(0.3, 0.0), Complex64::new(0.2, -0.6)]
            {
                let p = HypParams::real(a, b, b)?;
                let f = gauss_2f1(&p, z)?.value;
                let want = (Complex64::new(1.0, 0.0) - z).powf(-a);
                worst = worst.max((f - want).norm() / want.norm());
            }
        }
    }
    Ok(worst)
}

/// Worst residual of the derivative identity on the family
/// `F(-1/2, 3/2; n + 1/2; y)` behind the kernel, with the `m = n - 1`
/// derivatives the kernel needs (and the lower ones).
pub fn derivative_identity_worst() -> Result<f64, CliError> {
    let mut worst = 0.0f64;
    for n in 2..=4 {
        let p = HypParams::real(-0.5, 1.5, n as f64 + 0.5)?;
        for m in 1..n {
            for y in [0.2, 0.3, 0.45] {
                worst = worst.max(derivative_identity_residual(&p, m, y)?);
            }
        }
    }
    Ok(worst)
}

/// The full battery. `kernel_scale` multiplies the closed-form kernel
/// constant; anything but 1 must make the kernel items fail.
pub fn battery(kernel_scale: f64, draws: usize) -> Result<Vec<VerifyItem>, CliError> {
    let mut items = Vec::new();
    for n in 1..=4 {
        let tol = if n <= 2 { 1e-6 } else { 1e-5 };
        items.push(VerifyItem::new(format!("kernel_identity_n{n}"), kernel_residual(n, kernel_scale)?, tol));
    }
    for n in 1..=3 {
        items.push(VerifyItem::new(format!("h_n_integral_n{n}"), h_n_residual(n)?, 1e-6));
    }
    let alphas = [0.2, 0.1, 0.05, 0.025];
    for n in 1..=2 {
        let gaps = bump_limit(n, &alphas)?;
        let monotone = gaps.windows(2).all(|w| w[1] < w[0]);
        let mut item = VerifyItem::new(format!("bump_limit_n{n}"), gaps[gaps.len() - 1], 0.01);
        item.pass &= monotone;
        items.push(item);
    }
    for n in 1..=2 {
        items.push(VerifyItem::new(format!("volume_n{n}"), volume_residual(n)?, 1e-6));
    }
    items.push(VerifyItem::new("connection_overlap", connection_overlap_sweep(draws, OVERLAP_SEED)?, 1e-8));
    items.push(VerifyItem::new("f_b_equals_c", b_equals_c_residual()?, 1e-12));
    items.push(VerifyItem::new("derivative_identity", derivative_identity_worst()?, 1e-6));
    Ok(items)
}

pub fn to_table(items: &[VerifyItem]) -> Table {
    let mut table = Table::new("verify", &["item", "max_residual", "tolerance", "pass"]);
    for it in items {
        table.push(vec![Cell::Text(it.name.clone()), Cell::Real(it.max_residual), Cell::Real(it.tolerance), Cell::Bool(it.pass)]);
    }
    table.pass = items.iter().all(|i| i.pass);
    let failed: Vec<&str> = items.iter().filter(|i| !i.pass).map(|i| i.name.as_str()).collect();
    table.summary = Some(json!({ "pass": table.pass, "items": items.len(), "failed": failed }));
    table
}
