//! Cubature over geodesic balls `B(center, T) ⊂ CHⁿ`.
//!
//! Polar coordinates about the center give `dμ = sinh^{2n-1} r cosh r dr dω`.
//! The sphere `S^{2n-1}` is written as `ω = (√u₁ e^{iφ₁}, …, √uₙ e^{iφₙ})`
//! with `u` on the standard simplex, so `dω = 2^{1-n} du dφ`. For `n ≤ 3`
//! the simplex gets Gauss–Legendre (collapsed for `n = 3`) and the torus the
//! trapezoid rule; higher dimensions sample the sphere by Monte Carlo.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{gauss_legendre, QuadResult};
use crate::chgeom::{BallPoint, Isometry};
use crate::error::{Error, Result};

/// Refinement controls for [`integrate_ball`].
#[derive(Debug, Clone, Copy)]
pub struct BallRule {
    /// Each level doubles the radial nodes and adds four angular ones.
    pub max_level: usize,
    /// Monte Carlo sphere samples per radial node for `n ≥ 4`, first level.
    pub mc_samples: usize,
    pub seed: u64,
}

impl Default for BallRule {
    fn default() -> Self {
        BallRule { max_level: 4, mc_samples: 256, seed: 0x5eed }
    }
}

/// A weighted direction on `S^{2n-1}`; weights sum to the sphere area.
type Direction = (Vec<Complex64>, f64);

fn sphere_rule(n: usize, level: usize, rule: &BallRule) -> Vec<Direction> {
    // periodic trapezoid and Gauss rules converge fast: grow them slowly
    let m = 8 + 4 * level;
    let torus = |u: &[f64], weight: f64, out: &mut Vec<Direction>| {
        let count = m.pow(n as u32);
        let w = weight * (2.0 * PI / m as f64).powi(n as i32) * 2f64.powi(1 - n as i32);
        for idx in 0..count {
            let mut k = idx;
            let dir = u
                .iter()
                .map(|&uj| {
                    let phi = 2.0 * PI * ((k % m) as f64 + 0.5) / m as f64;
                    k /= m;
                    Complex64::from_polar(uj.sqrt(), phi)
                })
                .collect();
            out.push((dir, w));
        }
    };
    let mut out = Vec::new();
    match n {
        1 => torus(&[1.0], 1.0, &mut out),
        2 => {
            let (x, w) = gauss_legendre(m);
            for (xi, wi) in x.iter().zip(&w) {
                let u1 = 0.5 * (xi + 1.0);
                torus(&[u1, 1.0 - u1], 0.5 * wi, &mut out);
            }
        }
        3 => {
            let (x, w) = gauss_legendre(m);
            for (xi, wi) in x.iter().zip(&w) {
                let u1 = 0.5 * (xi + 1.0);
                for (xj, wj) in x.iter().zip(&w) {
                    let u2 = (1.0 - u1) * 0.5 * (xj + 1.0);
                    torus(&[u1, u2, 1.0 - u1 - u2], 0.25 * wi * wj * (1.0 - u1), &mut out);
                }
            }
        }
        _ => {
            let samples = rule.mc_samples << level;
            let mut rng = ChaCha8Rng::seed_from_u64(rule.seed ^ level as u64);
            let area = crate::chgeom::sphere_area(n);
            for _ in 0..samples {
                // Dirichlet(1, …, 1) from normalized exponentials, uniform phases
                let e: Vec<f64> = (0..n).map(|_| -(1.0 - rng.random::<f64>()).ln()).collect();
                let total: f64 = e.iter().sum();
                let dir = e
                    .iter()
                    .map(|ej| Complex64::from_polar((ej / total).sqrt(), 2.0 * PI * rng.random::<f64>()))
                    .collect();
                out.push((dir, area / samples as f64));
            }
        }
    }
    out
}

fn one_level<F>(f: &F, g: &Isometry, n: usize, t: f64, level: usize, rule: &BallRule) -> Result<(f64, f64, usize)>
where
    F: Fn(&BallPoint) -> f64,
{
    let (x, w) = gauss_legendre(12usize << level);
    let dirs = sphere_rule(n, level, rule);
    let mut total = 0.0;
    let mut shell_sq = 0.0;
    let mut evals = 0;
    for (xi, wi) in x.iter().zip(&w) {
        let r = 0.5 * t * (xi + 1.0);
        let radial = 0.5 * t * wi * r.sinh().powi(2 * n as i32 - 1) * r.cosh();
        let tr = r.tanh();
        let mut shell = 0.0;
        let mut shell_f2 = 0.0;
        for (dir, dw) in &dirs {
            let local = BallPoint::new(dir.iter().map(|c| c * tr).collect())?;
            let v = f(&g.apply(&local)?);
            if !v.is_finite() {
                return Err(Error::Numerical(format!("integrand returned {v} at radius {r}")));
            }
            shell += dw * v;
            shell_f2 += dw * v * v;
            evals += 1;
        }
        total += radial * shell;
        if n >= 4 {
            let area: f64 = dirs.iter().map(|d| d.1).sum();
            let var = (shell_f2 / area - (shell / area).powi(2)).max(0.0);
            shell_sq += (radial * area).powi(2) * var / dirs.len() as f64;
        }
    }
    Ok((total, shell_sq.sqrt(), evals))
}

/// `∫_{B(center, t)} f dμ`, refining until successive levels agree to
/// `tol · max(1, |value|)`. For `n ≥ 4` the Monte Carlo standard error is
/// folded into the estimate.
pub fn integrate_ball<F>(f: F, center: &BallPoint, t: f64, tol: f64, rule: &BallRule) -> Result<QuadResult>
where
    F: Fn(&BallPoint) -> f64,
{
    if !(t >= 0.0) || !t.is_finite() {
        return Err(Error::Domain(format!("ball radius {t}")));
    }
    let n = center.dim();
    let g = Isometry::translation_to(center);
    let mut evaluations = 0;
    let mut prev: Option<f64> = None;
    let mut last = QuadResult { value: 0.0, est_error: f64::INFINITY, evaluations: 0 };
    for level in 0..=rule.max_level {
        let (value, mc_err, evals) = one_level(&f, &g, n, t, level, rule)?;
        evaluations += evals;
        let diff = prev.map_or(f64::INFINITY, |p| (value - p).abs());
        let est_error = if n >= 4 { diff.hypot(mc_err) } else { diff };
        last = QuadResult { value, est_error, evaluations };
        if est_error <= tol * value.abs().max(1.0) {
            return Ok(last);
        }
        prev = Some(value);
    }
    log::warn!("ball cubature stopped at level {} with error {:.3e}", rule.max_level, last.est_error);
    Ok(last)
}
