//! The wave route to `I(T)`.
//!
//! For automorphic data `f = Σ_γ h ∘ γ⁻¹` the solution of the shifted wave
//! equation with `u(0) = 0`, `u_t(0) = f` is
//!
//! `u(t, z') = (2π)^{-n} (∂ / sinh t ∂t)^{n-1} ∫_{d(z',x)<t} f(x) dμ(x) / √(cosh²t - cosh²d(z',x))`
//!
//! and `I(T) = |c_n| cosh^{1/2}T ∫₀ᵀ (cosh T - cosh t)^{n-3/2}
//! F(-1/2, 3/2; n-1/2; (cosh T - cosh t)/(2 cosh T)) sinh t u(t, z') dt`.
//! By linearity both are sums over bumps, and a bump enters only through the
//! distance `D` of its center from `z'`.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::Serialize;

use super::kernel::cosh_diff;
use super::sphere::sphere_mean;
use super::BumpProfile;
use crate::chgeom::{distance, sphere_area, BallPoint};
use crate::error::{Error, Result};
use crate::hypgeo::{gamma, hyp2f1_real};
use crate::lattice::{enumerate_orbit, GroupSpec, Orbit};
use crate::numdiff::nested_derivative;
use crate::quad::gauss_legendre;

/// Quadrature and differentiation settings for the wave route.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WaveConfig {
    /// Gauss–Legendre nodes per panel of the time integral.
    pub t_quad_points: usize,
    /// Gauss–Legendre nodes per panel of the integral over spheres about `z'`.
    pub radial_quad_points: usize,
    /// Rows of the Richardson table for `(∂ / sinh t ∂t)^{n-1}`.
    pub richardson_levels: usize,
    /// Relative tolerance of the spherical means.
    pub tol: f64,
}

impl Default for WaveConfig {
    fn default() -> Self {
        WaveConfig { t_quad_points: 24, radial_quad_points: 24, richardson_levels: 3, tol: 1e-9 }
    }
}

impl WaveConfig {
    pub fn validate(&self) -> Result<()> {
        if self.t_quad_points < 2 || self.radial_quad_points < 2 || self.richardson_levels == 0 {
            return Err(Error::Domain(format!("wave config needs positive node counts: {self:?}")));
        }
        if !(self.tol > 1e-12 && self.tol < 1e-2) {
            return Err(Error::Domain(format!("wave tol must lie in (1e-12, 1e-2), got {}", self.tol)));
        }
        Ok(())
    }
}

/// Relative step of the derivative in `v = cosh t`, as a fraction of the
/// distance to the nearest point where `u` is not smooth.
const WAVE_RELATIVE_STEP: f64 = 0.1;

/// Initial velocity `f = Σ_k w_k h(d(·, p_k))` built from one bump shape.
#[derive(Debug, Clone)]
pub struct InitialData {
    pub shape: BumpProfile,
    pub centers: Vec<(BallPoint, f64)>,
}

impl InitialData {
    /// The bump itself, centered where its profile says.
    pub fn single(b: &BumpProfile) -> Self {
        InitialData { shape: b.clone(), centers: vec![(b.center.clone(), 1.0)] }
    }

    pub fn scaled(mut self, k: f64) -> Self {
        for c in &mut self.centers {
            c.1 *= k;
        }
        self
    }
}

/// Value with the difference against a half-resolution time quadrature.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WaveValue {
    pub value: f64,
    pub est_error: f64,
}

/// `|c_n| = π^{n-1/2} 2^{n+1/2} / Γ(n - 1/2)`, the constant that makes the
/// wave route reproduce `∫ f` for every `n`.
pub fn wave_route_constant(n: usize) -> f64 {
    PI.powf(n as f64 - 0.5) * 2f64.powf(n as f64 + 0.5) / gamma(n as f64 - 0.5).expect("n ≥ 1")
}

/// `c_n` with the sign factor `(-1)^{n-1}` as it is usually printed.
pub fn wave_route_constant_printed(n: usize) -> f64 {
    let sign = if n % 2 == 1 { 1.0 } else { -1.0 };
    sign * wave_route_constant(n)
}

/// The `ρ` values where the spherical mean of a bump at distance `d` is not
/// smooth.
fn shell_kinks(d: f64, alpha: f64) -> [f64; 3] {
    [d - alpha, (alpha - d).abs(), d + alpha]
}

/// `B(t) = ∫_{d(z',x)<t} h(x) dμ / √(cosh²t - cosh²d(z',x))` for one bump at
/// distance `d` from `z'`, in the variable `σ² = cosh²t - cosh²ρ`:
/// `B(t) = ∫ sinh^{2n-2}ρ Σ(ρ) dσ` with `Σ` the integral of `h` over the
/// unit-normalized sphere of radius `ρ` times its area.
fn sphere_integral(b: &BumpProfile, d: f64, t: f64, cfg: &WaveConfig) -> Result<f64> {
    let n = b.n();
    let alpha = b.alpha;
    let rho_lo = (d - alpha).max(0.0);
    let rho_hi = t.min(d + alpha);
    if rho_hi <= rho_lo {
        return Ok(0.0);
    }
    let sigma = |rho: f64| (cosh_diff(t, rho) * (t.cosh() + rho.cosh())).max(0.0).sqrt();
    let mut cuts = vec![rho_hi];
    cuts.extend(shell_kinks(d, alpha).iter().copied().filter(|&k| k > rho_lo && k < rho_hi));
    cuts.push(rho_lo);
    cuts.sort_by(|x, y| y.total_cmp(x));
    cuts.dedup();
    let sigmas: Vec<f64> = cuts.iter().map(|&r| sigma(r)).collect();
    let (x, w) = gauss_legendre(cfg.radial_quad_points);
    let area = sphere_area(n);
    let s2_support = alpha.sinh().powi(2);
    let sinh_t = t.sinh();
    let profile = |s2: f64| {
        let dist = s2.sqrt().asinh();
        b.at_distance_sq(dist * dist)
    };
    let mut total = 0.0;
    for pair in sigmas.windows(2) {
        let (lo, hi) = (pair[0], pair[1]);
        if hi <= lo {
            continue;
        }
        let half = 0.5 * (hi - lo);
        let mid = 0.5 * (hi + lo);
        for (xi, wi) in x.iter().zip(&w) {
            let s = mid + half * xi;
            let sinh_rho = ((sinh_t - s) * (sinh_t + s)).max(0.0).sqrt();
            let rho = sinh_rho.asinh();
            let mean = sphere_mean(n, rho, d, s2_support, &profile, cfg.tol)?;
            total += half * wi * sinh_rho.powi(2 * n as i32 - 2) * area * mean;
        }
    }
    Ok(total)
}

/// `u(t, z')` for a single unit bump whose center is at distance `d`.
fn wave_single(b: &BumpProfile, d: f64, t: f64, cfg: &WaveConfig) -> Result<f64> {
    let n = b.n();
    if t <= d - b.alpha {
        return Ok(0.0);
    }
    let norm = (2.0 * PI).powi(-(n as i32));
    if n == 1 {
        return Ok(norm * sphere_integral(b, d, t, cfg)?);
    }
    let kinks: Vec<f64> = shell_kinks(d, b.alpha).iter().filter(|&&k| k > 0.0).map(|k| k.cosh()).collect();
    let step = |v: f64| {
        let room = kinks.iter().fold(v - 1.0, |acc, &k| acc.min((v - k).abs()));
        // the stencil must stay inside the smooth stretch, however short
        if room > 0.0 {
            WAVE_RELATIVE_STEP * room
        } else {
            1e-7 * v
        }
    };
    let in_v = |v: f64| sphere_integral(b, d, v.max(1.0).acosh(), cfg);
    Ok(norm * nested_derivative(&in_v, t.cosh(), n - 1, &step, cfg.richardson_levels)?)
}

/// `u(t, z')` for the given initial data.
pub fn wave_solution(data: &InitialData, t: f64, z_prime: &BallPoint, cfg: &WaveConfig) -> Result<f64> {
    cfg.validate()?;
    if !(t > 0.0) {
        return Err(Error::Domain(format!("wave time must be positive, got {t}")));
    }
    let mut total = 0.0;
    for (center, weight) in &data.centers {
        total += weight * wave_single(&data.shape, distance(z_prime, center), t, cfg)?;
    }
    Ok(total)
}

/// Time breakpoints: the kinks of `u`, plus points at `α·2^j` on either
/// side of each kink. Past the last kink `u` decays like a power of the
/// distance to it, so panels must grow geometrically to resolve it.
fn graded_cuts(d: f64, alpha: f64, t_lo: f64, big_t: f64) -> Vec<f64> {
    let mut cuts = Vec::new();
    for k in shell_kinks(d, alpha) {
        let mut offset = 0.0;
        while offset < big_t {
            for c in [k - offset, k + offset] {
                if c > t_lo && c < big_t {
                    cuts.push(c);
                }
            }
            offset = if offset == 0.0 { alpha } else { 2.0 * offset };
        }
    }
    cuts
}

/// Contribution of one bump at distance `d` to `I(T)` by the wave route,
/// with nodes per time panel `points`.
fn wave_average_single_with(b: &BumpProfile, d: f64, big_t: f64, cfg: &WaveConfig, points: usize) -> Result<f64> {
    let n = b.n();
    let t_lo = (d - b.alpha).max(0.0);
    if t_lo >= big_t {
        return Ok(0.0);
    }
    // t = T - τ² removes the endpoint singularity of the kernel at t = T
    let tau_of = |t: f64| (big_t - t).sqrt();
    let mut cuts = vec![tau_of(t_lo)];
    cuts.extend(graded_cuts(d, b.alpha, t_lo, big_t).into_iter().map(tau_of));
    cuts.push(0.0);
    cuts.sort_by(f64::total_cmp);
    // cuts that differ by rounding only would make empty panels
    cuts.dedup_by(|a, b| *a - *b <= 1e-7 * big_t.sqrt());
    let (x, w) = gauss_legendre(points);
    let ch = big_t.cosh();
    let p = n as f64 - 1.5;
    let mut nodes = Vec::new();
    for pair in cuts.windows(2) {
        let (lo, hi) = (pair[0], pair[1]);
        for (xi, wi) in x.iter().zip(&w) {
            nodes.push((0.5 * (lo + hi) + 0.5 * (hi - lo) * xi, 0.5 * (hi - lo) * wi));
        }
    }
    let terms: Vec<Result<f64>> = nodes
        .par_iter()
        .map(|&(tau, weight)| {
            let t = big_t - tau * tau;
            // from τ² directly: T - t can round to 0 when τ is tiny
            let gap = 2.0 * (big_t - 0.5 * tau * tau).sinh() * (0.5 * tau * tau).sinh();
            let kernel = gap.powf(p) * hyp2f1_real(-0.5, 1.5, n as f64 - 0.5, gap / (2.0 * ch))?;
            Ok(weight * 2.0 * tau * kernel * t.sinh() * wave_single(b, d, t, cfg)?)
        })
        .collect();
    let mut total = 0.0;
    for term in terms {
        total += term?;
    }
    Ok(wave_route_constant(n) * ch.sqrt() * total)
}

/// `(value, est_error)` for one bump at distance `d`.
pub fn wave_average_single(b: &BumpProfile, d: f64, big_t: f64, cfg: &WaveConfig) -> Result<WaveValue> {
    let fine = wave_average_single_with(b, d, big_t, cfg, cfg.t_quad_points)?;
    let coarse = wave_average_single_with(b, d, big_t, cfg, (cfg.t_quad_points / 2).max(2))?;
    Ok(WaveValue { value: fine, est_error: (fine - coarse).abs() })
}

/// `I(T)` by the wave route over an orbit enumerated about the bump center.
/// Bumps at equal distance share one evaluation.
pub fn averaged_count_wave_from_orbit(
    orbit: &Orbit,
    b: &BumpProfile,
    big_t: f64,
    cfg: &WaveConfig,
) -> Result<super::AverageResult> {
    cfg.validate()?;
    let reach = big_t + b.alpha;
    if reach > orbit.radius_bound {
        return Err(Error::Domain(format!("orbit bound {} does not cover T + α = {reach}", orbit.radius_bound)));
    }
    let mut shells: Vec<(f64, usize)> = Vec::new();
    for d in orbit.distances_within(reach) {
        if d >= reach {
            continue;
        }
        match shells.last_mut() {
            Some((last, count)) if (d - *last).abs() <= 1e-12 => *count += 1,
            _ => shells.push((d, 1)),
        }
    }
    let mut value = 0.0;
    let mut est_error = 0.0;
    let mut terms = 0;
    for (d, count) in shells {
        let single = wave_average_single(b, d, big_t, cfg)?;
        value += count as f64 * single.value;
        est_error += count as f64 * single.est_error;
        terms += count;
    }
    Ok(super::AverageResult { value, est_error, terms, truncated: orbit.truncated })
}

/// The wave route to `I(T)`.
pub fn averaged_count_wave(
    spec: &GroupSpec,
    b: &BumpProfile,
    z_prime: &BallPoint,
    big_t: f64,
    cfg: &WaveConfig,
) -> Result<super::AverageResult> {
    let orbit = enumerate_orbit(spec, &b.center, z_prime, big_t + b.alpha)?;
    averaged_count_wave_from_orbit(&orbit, b, big_t, cfg)
}
