//! Gauss hypergeometric function `₂F₁(a, b; c; z)` with complex parameters.
//!
//! Evaluation strategy:
//!
//! * the power series for `|z| < 1`, exact when `a` or `b` is a non-positive
//!   integer (the series terminates);
//! * the two Pfaff transformations `z ↦ z/(z-1)`, which map the negative real
//!   axis into `[0, 1)`;
//! * the two-term connection formula between arguments `z` and `1/z`.
//!
//! [`gauss_2f1`] evaluates every branch that applies and keeps the one with
//! the smallest error estimate. The estimate includes `ε·Σ|term|`, so a
//! branch that suffers cancellation (large imaginary parameters summed near
//! the edge of the disk) loses to a better conditioned one.

mod gamma;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numdiff::{self, Richardson};

pub use gamma::{gamma, is_gamma_pole, ln_gamma_abs, log_gamma, rgamma};

/// Hard cap on summed terms for any series.
pub const MAX_TERMS: usize = 10_000;

/// Series stop once two consecutive terms fall below this times the sum.
const STOP_RATIO: f64 = 1e-16;

/// Largest `|z|` accepted by the direct series.
const SERIES_RADIUS: f64 = 0.99;

/// Largest `|z/(z-1)|` accepted by the Pfaff branches.
const PFAFF_RADIUS: f64 = 0.995;

/// Smallest `|z|` for which the connection formula is used by the dispatcher.
const CONNECTION_MIN: f64 = 1.01;

/// A relative estimate below this is accepted without trying other branches.
const GOOD_ENOUGH: f64 = 1e-14;

/// Parameters `a, b, c` of `₂F₁`; `c` is never zero or a negative integer.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HypParams {
    pub a: Complex64,
    pub b: Complex64,
    pub c: Complex64,
}

impl HypParams {
    pub fn new(a: Complex64, b: Complex64, c: Complex64) -> Result<Self> {
        if is_gamma_pole(c) {
            return Err(Error::Domain(format!("c = {} is zero or a negative integer", c.re)));
        }
        for (name, v) in [("a", a), ("b", b), ("c", c)] {
            if !v.re.is_finite() || !v.im.is_finite() {
                return Err(Error::Domain(format!("parameter {name} is not finite")));
            }
        }
        Ok(HypParams { a, b, c })
    }

    pub fn real(a: f64, b: f64, c: f64) -> Result<Self> {
        Self::new(Complex64::new(a, 0.0), Complex64::new(b, 0.0), Complex64::new(c, 0.0))
    }

    /// Parameters with `a` and `b` exchanged.
    pub fn swapped(&self) -> Self {
        HypParams { a: self.b, b: self.a, c: self.c }
    }
}

/// How a value was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    Series,
    Pfaff,
    Connection,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalReport {
    pub value: Complex64,
    /// Absolute error estimate.
    pub est_error: f64,
    pub terms_used: usize,
    pub branch: Branch,
}

impl EvalReport {
    fn relative_error(&self) -> f64 {
        self.est_error / self.value.norm().max(f64::MIN_POSITIVE)
    }
}

/// Pochhammer symbol `(a)_n = a (a+1) ... (a+n-1)`.
pub fn pochhammer(a: Complex64, n: usize) -> Complex64 {
    (0..n).fold(Complex64::new(1.0, 0.0), |acc, k| acc * (a + k as f64))
}

/// Sum of the hypergeometric power series, `|z| < 1`.
fn series(a: Complex64, b: Complex64, c: Complex64, z: Complex64) -> Result<EvalReport> {
    let mut term = Complex64::new(1.0, 0.0);
    let mut sum = term;
    let mut abs_sum = 1.0;
    let mut quiet = 0;
    for k in 0..MAX_TERMS {
        let kf = k as f64;
        term *= (a + kf) * (b + kf) / ((c + kf) * (kf + 1.0)) * z;
        sum += term;
        let mag = term.norm();
        abs_sum += mag;
        if mag == 0.0 {
            // terminated (or z = 0)
            return Ok(EvalReport {
                value: sum,
                est_error: 4.0 * f64::EPSILON * abs_sum,
                terms_used: k + 1,
                branch: Branch::Series,
            });
        }
        if mag < STOP_RATIO * sum.norm() {
            quiet += 1;
            if quiet == 2 {
                let tail = mag / (1.0 - z.norm()).max(1e-3);
                return Ok(EvalReport {
                    value: sum,
                    est_error: tail + 4.0 * f64::EPSILON * abs_sum,
                    terms_used: k + 2,
                    branch: Branch::Series,
                });
            }
        } else {
            quiet = 0;
        }
    }
    Err(Error::NoConvergence(format!(
        "2F1 series at |z| = {} did not converge in {MAX_TERMS} terms",
        z.norm()
    )))
}

fn is_nonpositive_integer(v: Complex64) -> bool {
    v.im == 0.0 && v.re <= 0.0 && v.re == v.re.round()
}

/// `(1-z)^{-a} F(a, c-b; c; z/(z-1))`.
fn pfaff_a(p: &HypParams, z: Complex64) -> Result<EvalReport> {
    let one = Complex64::new(1.0, 0.0);
    let w = z / (z - one);
    if w.norm() > PFAFF_RADIUS {
        return Err(Error::Domain(format!("Pfaff argument |w| = {} too close to 1", w.norm())));
    }
    let inner = series(p.a, p.c - p.b, p.c, w)?;
    let pre = (-p.a * (one - z).ln()).exp();
    Ok(EvalReport {
        value: pre * inner.value,
        est_error: pre.norm() * inner.est_error + 4.0 * f64::EPSILON * (pre * inner.value).norm(),
        terms_used: inner.terms_used,
        branch: Branch::Pfaff,
    })
}

/// Evaluation without the connection formula: series or Pfaff, best estimate.
fn eval_without_connection(p: &HypParams, z: Complex64) -> Result<EvalReport> {
    if z.norm() == 0.0 {
        return Ok(EvalReport {
            value: Complex64::new(1.0, 0.0),
            est_error: 0.0,
            terms_used: 0,
            branch: Branch::Series,
        });
    }
    let terminating = is_nonpositive_integer(p.a) || is_nonpositive_integer(p.b);
    let mut best: Option<EvalReport> = None;
    let mut last_err = None;
    fn consider(best: &mut Option<EvalReport>, last_err: &mut Option<Error>, r: Result<EvalReport>) {
        match r {
            Ok(r) => {
                if best.map_or(true, |b| r.relative_error() < b.relative_error()) {
                    *best = Some(r);
                }
            }
            Err(e) => *last_err = Some(e),
        }
    }
    if terminating || z.norm() <= SERIES_RADIUS {
        consider(&mut best, &mut last_err, series(p.a, p.b, p.c, z));
        if terminating || best.is_some_and(|b| b.relative_error() < GOOD_ENOUGH && z.norm() <= 0.5) {
            return best.ok_or_else(|| last_err.expect("an error was recorded"));
        }
    }
    if z.re < 0.5 {
        consider(&mut best, &mut last_err, pfaff_a(p, z));
        consider(&mut best, &mut last_err, pfaff_a(&p.swapped(), z));
    }
    best.ok_or_else(|| {
        last_err.unwrap_or_else(|| Error::Domain(format!("2F1 argument {z} outside the implemented domain")))
    })
}

/// Ratio of gamma products `Π Γ(num) / Π Γ(den)`; zero when a denominator
/// argument is a pole.
fn gamma_ratio(num: &[Complex64], den: &[Complex64]) -> Result<Complex64> {
    if den.iter().any(|&d| is_gamma_pole(d)) {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let mut log = Complex64::new(0.0, 0.0);
    for &v in num {
        log += log_gamma(v)?;
    }
    for &v in den {
        log -= log_gamma(v)?;
    }
    Ok(log.exp())
}

/// Two-term connection formula between `z` and `1/z`, valid off `[0, ∞)`.
fn connection(p: &HypParams, z: Complex64) -> Result<EvalReport> {
    let (a, b, c) = (p.a, p.b, p.c);
    let d = a - b;
    if d.im.abs() < 1e-14 && (d.re - d.re.round()).abs() < 1e-12 {
        return Err(Error::DegenerateConnection(d.re));
    }
    if z.im == 0.0 && z.re >= 0.0 {
        return Err(Error::Domain("connection formula needs z off the positive real axis".into()));
    }
    let one = Complex64::new(1.0, 0.0);
    let w = one / z;
    let ln_mz = (-z).ln();

    let coef1 = gamma_ratio(&[c, b - a], &[b, c - a])?;
    let coef2 = gamma_ratio(&[c, a - b], &[a, c - b])?;

    let mut value = Complex64::new(0.0, 0.0);
    let mut est = 0.0;
    let mut terms = 0;
    for (coef, s, t) in [(coef1, a, a - b + one), (coef2, b, b - a + one)] {
        if coef.norm() == 0.0 {
            continue;
        }
        let inner_p = HypParams::new(s, s - c + one, t)?;
        let inner = eval_without_connection(&inner_p, w)?;
        let pre = coef * (-s * ln_mz).exp();
        let piece = pre * inner.value;
        value += piece;
        est += pre.norm() * inner.est_error + 64.0 * f64::EPSILON * piece.norm();
        terms += inner.terms_used;
    }
    Ok(EvalReport { value, est_error: est, terms_used: terms, branch: Branch::Connection })
}

/// `₂F₁(a, b; c; z)`.
///
/// Accepts `|z| ≤ 0.99` anywhere, any `z` with `Re z < 1/2` reachable by a
/// Pfaff transformation, and `|z| > 1` off the positive real axis through
/// the connection formula (unless `a - b` is an integer).
pub fn gauss_2f1(p: &HypParams, z: Complex64) -> Result<EvalReport> {
    if !z.re.is_finite() || !z.im.is_finite() {
        return Err(Error::Domain("non-finite argument".into()));
    }
    let direct = eval_without_connection(p, z);
    if let Ok(r) = &direct {
        if r.relative_error() < GOOD_ENOUGH || z.norm() < CONNECTION_MIN {
            return direct;
        }
    }
    if z.norm() < CONNECTION_MIN {
        return direct;
    }
    match (direct, connection(p, z)) {
        (Ok(d), Ok(c)) => Ok(if c.relative_error() < d.relative_error() { c } else { d }),
        (Ok(d), Err(_)) => Ok(d),
        (Err(_), Ok(c)) => Ok(c),
        (Err(_), Err(e)) => Err(e),
    }
}

/// Real part of `₂F₁` for real parameters and argument.
pub fn hyp2f1_real(a: f64, b: f64, c: f64, x: f64) -> Result<f64> {
    let p = HypParams::real(a, b, c)?;
    Ok(gauss_2f1(&p, Complex64::new(x, 0.0))?.value.re)
}

/// `₂F₁(a, b; c; x)` on the negative real axis through the `1/x` connection
/// formula. The inner functions at `1/x` are summed directly or after a Pfaff
/// transformation, so the formula is usable for every `x < 0`.
pub fn gauss_2f1_neg_axis(p: &HypParams, x: f64) -> Result<EvalReport> {
    if !(x < 0.0) || !x.is_finite() {
        return Err(Error::Domain(format!("negative-axis evaluation needs x < 0, got {x}")));
    }
    connection(p, Complex64::new(x, 0.0))
}

/// Relative gap between the connection formula and the series/Pfaff route
/// at a `z` where both apply (`|z| > 1`, `Re z < 1/2`).
pub fn connection_overlap_residual(p: &HypParams, z: Complex64) -> Result<f64> {
    if !(z.norm() > 1.0 && z.re < 0.5) {
        return Err(Error::Domain(format!("z = {z} is outside the overlap region")));
    }
    let via_connection = connection(p, z)?.value;
    let direct = eval_without_connection(p, z)?.value;
    Ok((via_connection - direct).norm() / direct.norm().max(f64::MIN_POSITIVE))
}

/// Largest [`connection_overlap_residual`] over `draws` seeded random
/// parameter sets: `a, b` complex with `|Im| < 1`, `c ∈ (0.3, 4)`, and
/// `1.2 < |z| < 3` in the left half plane. Draws with `a - b` within 0.05 of
/// an integer are skipped.
pub fn connection_overlap_sweep(draws: usize, seed: u64) -> Result<f64> {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0.0f64;
    let mut done = 0;
    while done < draws {
        let a = Complex64::new(rng.random_range(-2.5..2.5), rng.random_range(-1.0..1.0));
        let b = Complex64::new(rng.random_range(-2.5..2.5), rng.random_range(-1.0..1.0));
        let c = Complex64::new(rng.random_range(0.3..4.0), 0.0);
        let r = rng.random_range(1.2..3.0);
        let th = rng.random_range(0.6..1.4) * std::f64::consts::PI;
        let d = a - b;
        if d.im.abs() < 0.05 && (d.re - d.re.round()).abs() < 0.05 {
            continue;
        }
        let p = HypParams::new(a, b, c)?;
        worst = worst.max(connection_overlap_residual(&p, Complex64::from_polar(r, th))?);
        done += 1;
    }
    Ok(worst)
}

/// Residual of `d^m/dy^m [y^{c-1} F(a,b;c;y)] = (c-m)_m y^{c-m-1} F(a,b;c-m;y)`,
/// with the left side from extrapolated finite differences.
pub fn derivative_identity_residual(p: &HypParams, m: usize, y: f64) -> Result<f64> {
    if !(y > 0.0 && y < 1.0) {
        return Err(Error::Domain(format!("y = {y} outside (0, 1)")));
    }
    if m == 0 {
        return Ok(0.0);
    }
    let c_low = p.c - m as f64;
    if is_gamma_pole(c_low) {
        return Err(Error::Domain(format!("c - m = {} is a non-positive integer", c_low.re)));
    }
    let room = y.min(1.0 - y);
    if room < 1e-6 {
        return Err(Error::Numerical(format!("finite-difference step underflow at y = {y}")));
    }
    let h0 = 0.05 * room / m as f64;
    let lhs_fn = |t: f64| -> Result<Complex64> {
        let f = gauss_2f1(p, Complex64::new(t, 0.0))?.value;
        Ok(Complex64::new(t, 0.0).powc(p.c - 1.0) * f)
    };
    let lhs = numdiff::derivative(lhs_fn, y, m, Richardson { h0, levels: 4 })?.value;
    let lowered = HypParams::new(p.a, p.b, c_low)?;
    let rhs = pochhammer(c_low, m)
        * Complex64::new(y, 0.0).powc(c_low - 1.0)
        * gauss_2f1(&lowered, Complex64::new(y, 0.0))?.value;
    Ok((lhs - rhs).norm())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    /// Plain series summation with a generous term count, used as oracle.
    fn oracle_series(a: f64, b: f64, cc: f64, x: f64) -> f64 {
        let mut term = 1.0;
        let mut sum = 1.0;
        for k in 0..20_000 {
            let k = k as f64;
            term *= (a + k) * (b + k) / ((cc + k) * (k + 1.0)) * x;
            sum += term;
        }
        sum
    }

    #[test]
    fn value_at_zero_is_one() {
        let p = HypParams::real(0.3, -1.7, 2.2).unwrap();
        assert_eq!(gauss_2f1(&p, c(0.0)).unwrap().value, c(1.0));
    }

    #[test]
    fn b_equals_c_closed_form() {
        let p = HypParams::real(0.5, 0.7, 0.7).unwrap();
        let v = gauss_2f1(&p, c(0.5)).unwrap().value.re;
        assert!((v - 2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn log_two_series() {
        let v = hyp2f1_real(1.0, 1.0, 2.0, 0.5).unwrap();
        let oracle = oracle_series(1.0, 1.0, 2.0, 0.5);
        assert!((v - oracle).abs() < 1e-14);
        assert!((v - 1.386_294_361_119_890_6).abs() < 1e-14);
    }

    #[test]
    fn terminating_is_polynomial() {
        // F(-2, b; c; z) = 1 - 2bz/c + b(b+1)z^2/(c(c+1))
        let (b, cc, z) = (1.3, 2.1, -7.5);
        let want = 1.0 - 2.0 * b * z / cc + b * (b + 1.0) * z * z / (cc * (cc + 1.0));
        let r = gauss_2f1(&HypParams::real(-2.0, b, cc).unwrap(), c(z)).unwrap();
        assert!((r.value.re - want).abs() < 1e-12 * want.abs());
        assert_eq!(r.branch, Branch::Series);
        assert_eq!(r.terms_used, 3);
    }

    #[test]
    fn connection_closed_form_and_overlap() {
        let p = HypParams::real(0.5, 0.9, 0.9).unwrap();
        let r = gauss_2f1_neg_axis(&p, -3.0).unwrap();
        assert!((r.value.re - 0.5).abs() < 1e-13);

        let p = HypParams::real(0.3, 0.8, 1.7).unwrap();
        let conn = gauss_2f1_neg_axis(&p, -0.5).unwrap().value.re;
        let direct = oracle_series(0.3, 0.8, 1.7, -0.5);
        assert!((conn - direct).abs() / direct.abs() < 1e-9);
    }

    #[test]
    fn connection_overlap_random_draws() {
        let worst = connection_overlap_sweep(200, 11).unwrap();
        assert!(worst < 1e-8, "{worst:e}");
    }

    #[test]
    fn degenerate_connection_rejected() {
        let p = HypParams::real(1.5, 0.5, 3.0).unwrap();
        assert!(matches!(gauss_2f1_neg_axis(&p, -40.0), Err(Error::DegenerateConnection(_))));
    }

    #[test]
    fn invalid_c_rejected() {
        assert!(HypParams::real(1.0, 1.0, -2.0).is_err());
        assert!(HypParams::real(1.0, 1.0, 0.0).is_err());
    }

    #[test]
    fn positive_axis_near_one_out_of_domain() {
        let p = HypParams::real(0.3, 0.4, 1.1).unwrap();
        assert!(gauss_2f1(&p, c(0.999)).is_err());
        assert!(gauss_2f1(&p, c(2.0)).is_err());
    }

    #[test]
    fn deep_negative_axis_against_mpmath() {
        // F((n+μ)/2, (n-μ)/2; n+1; -sinh² 8), mpmath at 30 digits
        let cases = [
            (1.0, 1.0, 1.0),
            (2.0, 0.7, 0.000_181_434_152_350_103_864_025_9),
            (3.0, 2.3, 0.007_194_078_288_607_982_383_276),
        ];
        for (n, mu, want) in cases {
            let p = HypParams::real((n + mu) / 2.0, (n - mu) / 2.0, n + 1.0).unwrap();
            let f = gauss_2f1(&p, c(-8f64.sinh().powi(2))).unwrap().value.re;
            assert!((f / want - 1.0).abs() < 1e-11, "n={n} mu={mu}: {f} vs {want}");
        }
    }

    #[test]
    fn large_imaginary_parameters_pick_connection() {
        // a, b = 1 ∓ 20i at x = -sinh²2: Pfaff cancels catastrophically.
        let p = HypParams::new(Complex64::new(1.0, -20.0), Complex64::new(1.0, 20.0), c(3.0)).unwrap();
        let r = gauss_2f1(&p, c(-(2f64.sinh().powi(2)))).unwrap();
        assert_eq!(r.branch, Branch::Connection);
        assert!(r.value.im.abs() < 1e-10 * r.value.norm().max(1e-12));
    }

    #[test]
    fn derivative_identity_examples() {
        let p = HypParams::real(0.5, 1.5, 2.5).unwrap();
        assert!(derivative_identity_residual(&p, 1, 0.3).unwrap() <= 1e-6);
        assert_eq!(derivative_identity_residual(&p, 0, 0.3).unwrap(), 0.0);
        let n = 2.0;
        let p = HypParams::real(-0.5, 1.5, n - 0.5 + 1.0).unwrap();
        assert!(derivative_identity_residual(&p, 1, 0.25).unwrap() <= 1e-6);
        assert!(derivative_identity_residual(&p, 1, 1e-9).is_err());
    }

    #[test]
    fn pochhammer_recursion() {
        let a = Complex64::new(-0.3, 1.2);
        for n in 0..12 {
            let lhs = pochhammer(a, n + 1);
            let rhs = pochhammer(a, n) * (a + n as f64);
            assert!((lhs - rhs).norm() <= 1e-14 * lhs.norm());
        }
    }
}
