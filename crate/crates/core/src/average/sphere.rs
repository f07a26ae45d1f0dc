//! Spherical means of radial functions.
//!
//! Fix `q` and a point `p` with `D = d(q, p)`. For `x` on the geodesic sphere
//! `S(q, ρ)` write `x = tanh ρ · ω` in coordinates centered at `q` with `p` on
//! the `e₁` axis, and let `w = ω₁`. With `a = tanh ρ tanh D` and
//! `C = cosh ρ cosh D`,
//!
//! `cosh d(x, p) = C |1 - a w|`.
//!
//! For `n = 1`, `w = e^{iφ}` is uniform on the circle; for `n ≥ 2` it has
//! density `(n-1)/π (1-|w|²)^{n-2}` on the unit disc. Means over the disc are
//! taken along the level curves `|1 - a w| = 1 + a x`, `x ∈ [-1, 1]`, which
//! leaves a single integral in `x` with an explicit angular weight.

use std::f64::consts::PI;

use crate::error::Result;
use crate::quad::{gauss_legendre, try_integrate, try_integrate_singular, Adaptive, Singular};

/// `sinh² d(x, p)` in units of `C²` along the level curve `u = x + 1`:
/// `(tanh ρ - tanh D)² + a u (2 + a (u - 2))`, free of cancellation.
fn level_s2(t_rho: f64, t_d: f64, a: f64, u: f64) -> f64 {
    (t_rho - t_d).powi(2) + a * u * (2.0 + a * (u - 2.0))
}

/// Angular weight `∫ (2r (cos ψ - cos ψ_m) / a²)^{n-2} dψ / a` over the arc
/// `|ψ| < ψ_m` of the level circle `r = 1 + a x` inside the unit disc.
/// Takes `u = x + 1` so that `1 - x² = u (2 - u)` keeps full precision next
/// to `x = -1`.
fn arc_weight(n: usize, a: f64, u: f64, nodes: &(Vec<f64>, Vec<f64>)) -> f64 {
    let r = (1.0 - a) + a * u;
    let half_chord = (u * (2.0 - u) / (4.0 * r)).max(0.0).sqrt();
    let s = a * half_chord;
    // ψ_m / a, with its a → 0 limit
    let psi_over_a = if s < 1e-8 { 2.0 * half_chord } else { 2.0 * s.min(1.0).asin() / a };
    if n == 2 {
        return 2.0 * psi_over_a;
    }
    let psi_m = psi_over_a * a;
    let k = n as i32 - 2;
    let mut acc = 0.0;
    for (y, w) in nodes.0.iter().zip(&nodes.1) {
        // cos ψ - cos ψ_m at ψ = ψ_m y, scaled by 2r/a²
        let prod = if a * psi_over_a < 1e-6 {
            // small arcs: sin u ≈ u
            0.5 * psi_over_a * psi_over_a * (1.0 - y * y)
        } else {
            2.0 * (psi_m * (1.0 + y) / 2.0).sin() * (psi_m * (1.0 - y) / 2.0).sin() / (a * a)
        };
        acc += w * (2.0 * r * prod).powi(k);
    }
    psi_over_a * acc
}

/// Mean of `g(sinh² d(x, p))` over `x ∈ S(q, ρ)` (normalized surface
/// measure), restricted to the part with `sinh² d(x, p) < s2_max`.
pub(crate) fn sphere_mean<G>(n: usize, rho: f64, big_d: f64, s2_max: f64, g: &G, tol: f64) -> Result<f64>
where
    G: Fn(f64) -> f64,
{
    let (t_rho, t_d) = (rho.tanh(), big_d.tanh());
    let c2 = (rho.cosh() * big_d.cosh()).powi(2);
    let a = t_rho * t_d;
    let y_max = s2_max / c2;
    let closest = (t_rho - t_d).powi(2);
    if closest >= y_max {
        return Ok(0.0);
    }
    if a < 1e-150 {
        // one of ρ, D vanishes: d(x, p) is the same for every x
        return Ok(g(c2 * level_s2(t_rho, t_d, 0.0, 1.0)));
    }
    // means far below the peak of g only need absolute accuracy
    let opts = Adaptive { abs_tol: 1e-12 * tol * g(0.0).abs(), rel_tol: tol, max_intervals: 2000 };
    if n == 1 {
        // |1 - a e^{iφ}|: sinh² d / C² = (tanh ρ - tanh D)² + 4a sin²(φ/2)
        let y = (y_max - closest) / (4.0 * a);
        let phi_max = if y >= 1.0 { PI } else { 2.0 * y.sqrt().asin() };
        let r = try_integrate(
            |phi: f64| Ok(g(c2 * (closest + 4.0 * a * (phi / 2.0).sin().powi(2)))),
            0.0,
            phi_max,
            &[],
            opts,
        )?;
        return Ok(r.value / PI);
    }
    // largest level u = x + 1 with sinh² d < s2_max, from a² u² + 2a(1-a) u = y_max - closest
    let k = y_max - closest;
    let u_cut = k / (a * ((1.0 - a) + ((1.0 - a).powi(2) + k).sqrt()));
    let u_max = u_cut.min(2.0);
    let nodes = gauss_legendre(2 * n + 12);
    let scale = (n - 1) as f64 / PI;
    let r = try_integrate_singular(
        |u: f64| Ok(((1.0 - a) + a * u) * arc_weight(n, a, u, &nodes) * g(c2 * level_s2(t_rho, t_d, a, u))),
        0.0,
        u_max,
        Singular { left: true, right: u_max >= 2.0 },
        opts,
    )?;
    Ok(scale * r.value)
}
