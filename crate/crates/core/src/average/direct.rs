use serde::Serialize;

use super::sphere::sphere_mean;
use super::BumpProfile;
use crate::chgeom::{distance, sphere_area, BallPoint, Isometry};
use crate::error::Result;
use crate::lattice::{enumerate_orbit, GroupSpec, Orbit};
use crate::quad::{try_integrate, Adaptive};

/// Tolerance of the overlap integrals, relative to the unit bump mass.
pub const OVERLAP_TOL: f64 = 1e-11;

/// `I(T)` with the bookkeeping needed to trust it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AverageResult {
    pub value: f64,
    pub est_error: f64,
    /// Group elements whose bump meets the ball.
    pub terms: usize,
    pub truncated: bool,
}

/// Mass of a bump centered at distance `d_center` from `z'` that lies in
/// `B(z', t)`.
///
/// Exactly 1 when `d_center ≤ t - α` and exactly 0 when `d_center ≥ t + α`.
pub fn overlap_mass_at_distance(b: &BumpProfile, d_center: f64, t: f64) -> Result<(f64, f64)> {
    let alpha = b.alpha;
    if d_center <= t - alpha {
        return Ok((1.0, 0.0));
    }
    if d_center >= t + alpha || t <= 0.0 {
        return Ok((0.0, 0.0));
    }
    let n = b.n();
    let m = 2 * n as i32 - 1;
    let s2_max = t.sinh().powi(2);
    let area = sphere_area(n);
    let kink = (t - d_center).abs();
    let r = try_integrate(
        |rho: f64| {
            let frac = if rho <= kink {
                if d_center < t {
                    1.0
                } else {
                    0.0
                }
            } else {
                sphere_mean(n, rho, d_center, s2_max, &|_| 1.0, OVERLAP_TOL * 1e-2)?
            };
            Ok(b.at_distance(rho) * area * rho.sinh().powi(m) * rho.cosh() * frac)
        },
        0.0,
        alpha,
        &[kink],
        Adaptive { abs_tol: OVERLAP_TOL, rel_tol: 0.0, max_intervals: 4000 },
    )?;
    Ok((r.value.clamp(0.0, 1.0), r.est_error))
}

/// `∫_{d(γx, z') < T} h(x) dμ(x)`.
pub fn ball_overlap_mass(b: &BumpProfile, g: &Isometry, z_prime: &BallPoint, t: f64) -> Result<f64> {
    let moved = g.apply(&b.center)?;
    Ok(overlap_mass_at_distance(b, distance(z_prime, &moved), t)?.0)
}

/// `I(T) = Σ_γ ∫_{d(γx, z') < T} h(x) dμ(x)` over an orbit enumerated about
/// the bump center with bound at least `T + α`.
pub fn averaged_count_from_orbit(orbit: &Orbit, b: &BumpProfile, t: f64) -> Result<AverageResult> {
    let reach = t + b.alpha;
    if reach > orbit.radius_bound {
        return Err(crate::Error::Domain(format!(
            "orbit bound {} does not cover T + α = {reach}",
            orbit.radius_bound
        )));
    }
    let mut value = 0.0;
    let mut est_error = 0.0;
    let mut terms = 0;
    for e in &orbit.elements {
        if e.distance >= reach {
            continue;
        }
        let (m, err) = overlap_mass_at_distance(b, e.distance, t)?;
        value += m;
        est_error += err;
        terms += 1;
    }
    Ok(AverageResult { value, est_error, terms, truncated: orbit.truncated })
}

/// The direct route: enumerate the orbit, then sum overlap masses.
pub fn averaged_count_direct(spec: &GroupSpec, b: &BumpProfile, z_prime: &BallPoint, t: f64) -> Result<AverageResult> {
    let orbit = enumerate_orbit(spec, &b.center, z_prime, t + b.alpha)?;
    averaged_count_from_orbit(&orbit, b, t)
}
