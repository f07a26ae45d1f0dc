//! Jacobi functions, the kernel `H_n(λ, T)`, and the discrete-spectrum
//! pieces of the counting asymptotics.
//!
//! Only point masses of the spectral measure are modelled: eigenvalues and
//! eigenfunctions are supplied by the caller in [`SpectralData`]. The
//! continuous spectrum is not represented, so [`spectral_average_truncated`]
//! is the discrete part of the spectral expansion of the averaged count.
//!
//! For `λ < 0` the square root `√λ` is taken as `i√|λ|` throughout, which
//! keeps every quantity real.

mod data;

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::average::{kernel::cosh_diff, BumpProfile};
use crate::chgeom::BallPoint;
use crate::error::{Error, Result};
use crate::hypgeo::{gamma, gauss_2f1, hyp2f1_real, ln_gamma_abs, HypParams};
use crate::quad::{integrate_ball, try_integrate_singular, Adaptive, BallRule, Singular};

pub use data::{PhiFn, SpectralData, SpectralEntry};

/// Largest imaginary part tolerated when a conjugate-parameter `₂F₁` is
/// reduced to its real part.
pub const IMAG_TOL: f64 = 1e-10;

/// Relative tolerance of the `H_n` quadrature.
const H_QUAD_RTOL: f64 = 1e-11;

/// `(ν - i√λ)/2` and its conjugate partner, with `√λ = i√|λ|` for `λ < 0`.
fn conjugate_pair(nu: f64, lambda: f64) -> (Complex64, Complex64) {
    if lambda >= 0.0 {
        let s = lambda.sqrt();
        (Complex64::new(nu / 2.0, -s / 2.0), Complex64::new(nu / 2.0, s / 2.0))
    } else {
        let mu = (-lambda).sqrt();
        (Complex64::new((nu - mu) / 2.0, 0.0), Complex64::new((nu + mu) / 2.0, 0.0))
    }
}

fn real_2f1(a: Complex64, b: Complex64, c: f64, z: f64) -> Result<f64> {
    if z == 0.0 || a == Complex64::new(0.0, 0.0) || b == Complex64::new(0.0, 0.0) {
        return Ok(1.0);
    }
    let p = HypParams::new(a, b, Complex64::new(c, 0.0))?;
    let r = gauss_2f1(&p, Complex64::new(z, 0.0))?;
    if r.value.im.abs() > IMAG_TOL * r.value.re.abs().max(1.0) {
        return Err(Error::Numerical(format!(
            "conjugate-parameter ₂F₁ left imaginary part {:e} at z = {z}",
            r.value.im
        )));
    }
    Ok(r.value.re)
}

/// Jacobi function `φ^{(α,β)}_λ(x) = F((α+β+1-i√λ)/2, (α+β+1+i√λ)/2; α+1; -sinh²x)`.
pub fn jacobi_phi(alpha: f64, beta: f64, lambda: f64, x: f64) -> Result<f64> {
    if !(alpha > -1.0) {
        return Err(Error::Domain(format!("Jacobi function needs α > -1, got {alpha}")));
    }
    if !(x >= 0.0) || !x.is_finite() || !lambda.is_finite() || !beta.is_finite() {
        return Err(Error::Domain(format!("Jacobi function at x = {x}, λ = {lambda}, β = {beta}")));
    }
    let (a, b) = conjugate_pair(alpha + beta + 1.0, lambda);
    real_2f1(a, b, alpha + 1.0, -x.sinh().powi(2))
}

fn check_h_args(n: usize, lambda: f64, t: f64) -> Result<()> {
    if n == 0 {
        return Err(Error::Domain("dimension must be positive".into()));
    }
    if !(t > 0.0) || !t.is_finite() {
        return Err(Error::Domain(format!("H_n needs T > 0, got {t}")));
    }
    let floor = -((n * n) as f64);
    if !(lambda >= floor - 1e-12) || !lambda.is_finite() {
        return Err(Error::Domain(format!("H_n needs λ ≥ -n² = {floor}, got {lambda}")));
    }
    Ok(())
}

/// `H_n(λ, T) = sinh^{2n}T · F((n-i√λ)/2, (n+i√λ)/2; n+1; -sinh²T)`.
///
/// At `λ = -n²` the series terminates and this is `sinh^{2n}T` exactly.
pub fn h_n_closed(n: usize, lambda: f64, t: f64) -> Result<f64> {
    check_h_args(n, lambda, t)?;
    let nf = n as f64;
    let s2n = t.sinh().powi(2 * n as i32);
    if lambda <= -nf * nf {
        return Ok(s2n);
    }
    let (a, b) = conjugate_pair(nf, lambda);
    Ok(s2n * real_2f1(a, b, nf + 1.0, -t.sinh().powi(2))?)
}

/// `κ_n = 2^{n+1/2} Γ(n+1) / (√π Γ(n+1/2))`, the factor tying the Fourier
/// integral in [`h_n_quadrature`] to [`h_n_closed`].
pub fn h_n_integral_factor(n: usize) -> Result<f64> {
    let nf = n as f64;
    let log = (nf + 0.5) * 2f64.ln() + ln_gamma_abs(nf + 1.0)? - 0.5 * PI.ln() - ln_gamma_abs(nf + 0.5)?;
    Ok(log.exp())
}

/// The bare Fourier integral
/// `∫₀ᵀ (cosh T - cosh t)^{n-1/2} F(-1/2, 3/2; n+1/2; (cosh T - cosh t)/(2 cosh T)) cos(√λ t) dt`.
///
/// The hypergeometric argument stays in `[0, 1/2]`, so only the power series
/// is used. The `(T - t)^{n-1/2}` edge is smoothed by `t = T - T u²`.
pub fn h_n_fourier_integral(n: usize, lambda: f64, t: f64) -> Result<f64> {
    check_h_args(n, lambda, t)?;
    let nf = n as f64;
    let ch = t.cosh();
    let wave = move |s: f64| if lambda >= 0.0 { (lambda.sqrt() * s).cos() } else { ((-lambda).sqrt() * s).cosh() };
    let integrand = |s: f64| -> Result<f64> {
        let gap = cosh_diff(t, s).max(0.0);
        if gap == 0.0 {
            return Ok(0.0);
        }
        let f = hyp2f1_real(-0.5, 1.5, nf + 0.5, gap / (2.0 * ch))?;
        Ok(gap.powf(nf - 0.5) * f * wave(s))
    };
    // the answer can be much smaller than the integrand, so scale the
    // absolute floor by the integrand size
    let size = cosh_diff(t, 0.0).powf(nf - 0.5) * wave(t).abs().max(1.0) * t;
    let opts = Adaptive { abs_tol: 1e-14 * size, rel_tol: H_QUAD_RTOL, max_intervals: 20_000 };
    let r = try_integrate_singular(integrand, 0.0, t, Singular { left: false, right: true }, opts)?;
    Ok(r.value)
}

/// `H_n(λ, T)` through its Fourier-cosine representation,
/// `κ_n cosh^{1/2}T` times [`h_n_fourier_integral`].
///
/// Oscillatory for large `λ`; beyond `λ ≈ 10⁴` the adaptive budget may run
/// out and the failure is reported.
pub fn h_n_quadrature(n: usize, lambda: f64, t: f64) -> Result<f64> {
    let bare = h_n_fourier_integral(n, lambda, t)?;
    Ok(h_n_integral_factor(n)? * t.cosh().sqrt() * bare)
}

/// Half-open interval `[lo, hi)`.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn contains(&self, x: f64) -> bool {
        x >= self.lo && x < self.hi
    }
}

/// Eigenvalue ranges for which the main term is meaningful.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct AdmissibleWindow {
    /// The range used to filter eigenvalues.
    pub first: Interval,
    /// Alternative range, reported for `n > 2` but not used.
    pub second: Option<Interval>,
    pub note: Option<&'static str>,
}

/// `n ≥ 2`: `[-n², -(n-1)²((2n-1)/(2n+1))²)`, plus `[-n², -(n-2)²((2n-1)/(2n+1))²)`
/// when `n > 2`. For `n = 1` the window is taken as `[-1, 0)`.
pub fn admissible_window(n: usize) -> Result<AdmissibleWindow> {
    match n {
        0 => Err(Error::Domain("dimension must be positive".into())),
        1 => Ok(AdmissibleWindow {
            first: Interval { lo: -1.0, hi: 0.0 },
            second: None,
            note: Some("no window is stated for n = 1; using the whole discrete range [-1, 0)"),
        }),
        _ => {
            let nf = n as f64;
            let q = ((2.0 * nf - 1.0) / (2.0 * nf + 1.0)).powi(2);
            let first = Interval { lo: -nf * nf, hi: -(nf - 1.0).powi(2) * q };
            let second = (n > 2).then(|| Interval { lo: -nf * nf, hi: -(nf - 2.0).powi(2) * q });
            Ok(AdmissibleWindow { first, second, note: None })
        }
    }
}

/// Coefficient of `φ_j(z)φ_j(z')` in the main term.
fn main_term_weight(n: usize, mu: f64, t: f64) -> Result<f64> {
    let nf = n as f64;
    let s = nf + mu;
    let log = nf * (PI / 2.0).ln() - mu * 2f64.ln() + ln_gamma_abs(mu)? + s * t
        - ln_gamma_abs(s / 2.0)?
        - ln_gamma_abs(1.0 + s / 2.0)?;
    Ok(log.exp())
}

/// Entries strictly inside the admissibility window; the others are logged
/// and dropped.
fn admissible_entries<'a>(s: &'a SpectralData, n: usize) -> Result<Vec<&'a SpectralEntry>> {
    s.check_dimension(n)?;
    let w = admissible_window(n)?;
    let (keep, drop): (Vec<_>, Vec<_>) = s.entries().iter().partition(|e| w.first.contains(e.lambda));
    for e in drop {
        log::warn!("eigenvalue {} outside [{}, {}), excluded", e.lambda, w.first.lo, w.first.hi);
    }
    if keep.is_empty() {
        log::warn!("no admissible eigenvalues; main term is 0");
    }
    Ok(keep)
}

/// `A(T, z, z') = (π/2)ⁿ Σ_j 2^{-μ_j} Γ(μ_j) e^{(n+μ_j)T}
/// / (Γ((n+μ_j)/2) Γ(1+(n+μ_j)/2)) φ_j(z) φ_j(z')`, `μ_j = √|λ_j|`.
pub fn main_term_a(s: &SpectralData, n: usize, t: f64, z: &BallPoint, z_prime: &BallPoint) -> Result<f64> {
    for p in [z, z_prime] {
        if p.dim() != n {
            return Err(Error::DimensionMismatch { expected: n, found: p.dim() });
        }
    }
    let terms: Vec<Result<f64>> = admissible_entries(s, n)?
        .par_iter()
        .map(|e| Ok(main_term_weight(n, (-e.lambda).sqrt(), t)? * e.phi.eval(z) * e.phi.eval(z_prime)))
        .collect();
    // fold from +0 so an empty sum prints as 0, not -0
    terms.into_iter().try_fold(0.0, |acc, t| Ok(acc + t?))
}

/// Result of [`spectral_average_truncated`].
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct SpectralAverage {
    pub value: f64,
    pub est_error: f64,
    pub terms: usize,
}

/// `(πⁿ/Γ(n+1)) Σ_j H_n(λ_j, T) φ_j(z') ∫ φ_j h dμ` over the admissible
/// entries.
///
/// The integral is taken over the bump support only. Constant eigenfunctions
/// skip the cubature since `h` has unit mass.
pub fn spectral_average_truncated(
    s: &SpectralData,
    b: &BumpProfile,
    n: usize,
    t: f64,
    z_prime: &BallPoint,
    tol: f64,
) -> Result<SpectralAverage> {
    if b.n() != n || z_prime.dim() != n {
        let found = if b.n() != n { b.n() } else { z_prime.dim() };
        return Err(Error::DimensionMismatch { expected: n, found });
    }
    let prefactor = PI.powi(n as i32) / gamma(n as f64 + 1.0)?;
    let entries = admissible_entries(s, n)?;
    let rule = BallRule::default();
    let terms: Vec<Result<(f64, f64)>> = entries
        .par_iter()
        .map(|e| {
            let (mass, err) = match &e.phi {
                PhiFn::Constant(c) => (*c, 0.0),
                phi => {
                    let r = integrate_ball(
                        |x| phi.eval(x) * crate::average::bump_value(b, x),
                        &b.center,
                        b.alpha,
                        tol,
                        &rule,
                    )?;
                    (r.value, r.est_error)
                }
            };
            let h = h_n_closed(n, e.lambda, t)?;
            let w = prefactor * h * e.phi.eval(z_prime);
            Ok((w * mass, (w * err).abs()))
        })
        .collect();
    let mut value = 0.0;
    let mut est_error = 0.0;
    for r in terms {
        let (v, e) = r?;
        value += v;
        est_error += e;
    }
    Ok(SpectralAverage { value, est_error, terms: entries.len() })
}
