//! Complex log-gamma by upward recursion into the Stirling regime.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// `B_{2k} / (2k (2k - 1))` for `k = 1..=10`.
const STIRLING: [f64; 10] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360_360.0,
    1.0 / 156.0,
    -3617.0 / 122_400.0,
    43_867.0 / 244_188.0,
    -174_611.0 / 125_400.0,
];

/// Real part threshold above which the asymptotic series is summed directly.
const SHIFT_TARGET: f64 = 12.0;

const LN_2PI_HALF: f64 = 0.918_938_533_204_672_8;

/// True when `z` is a pole of Γ (zero or a negative integer).
pub fn is_gamma_pole(z: Complex64) -> bool {
    z.im == 0.0 && z.re <= 0.0 && z.re == z.re.round()
}

/// Principal-branch `log Γ(z)`: the imaginary part is reduced to (-π, π].
pub fn log_gamma(z: Complex64) -> Result<Complex64> {
    if !z.re.is_finite() || !z.im.is_finite() {
        return Err(Error::Domain(format!("log_gamma of non-finite {z}")));
    }
    if is_gamma_pole(z) {
        return Err(Error::Domain(format!("log_gamma pole at {}", z.re)));
    }
    let raw = if z.re < 0.5 {
        // Γ(z) Γ(1 - z) = π / sin(π z)
        Complex64::new(PI.ln(), 0.0) - ln_sin_pi(z) - log_gamma_right(Complex64::new(1.0, 0.0) - z)
    } else {
        log_gamma_right(z)
    };
    Ok(Complex64::new(raw.re, wrap_phase(raw.im)))
}

/// Γ(x) for real `x` away from the poles.
pub fn gamma(x: f64) -> Result<f64> {
    let lg = log_gamma(Complex64::new(x, 0.0))?;
    Ok(lg.exp().re)
}

/// `log |Γ(x)|` for real `x`.
pub fn ln_gamma_abs(x: f64) -> Result<f64> {
    Ok(log_gamma(Complex64::new(x, 0.0))?.re)
}

/// `1/Γ(z)`, which is entire: zero at the poles of Γ.
pub fn rgamma(z: Complex64) -> Result<Complex64> {
    if is_gamma_pole(z) {
        return Ok(Complex64::new(0.0, 0.0));
    }
    Ok((-log_gamma(z)?).exp())
}

fn log_gamma_right(z: Complex64) -> Complex64 {
    let mut shifted = z;
    let mut correction = Complex64::new(0.0, 0.0);
    while shifted.re < SHIFT_TARGET {
        correction += shifted.ln();
        shifted += 1.0;
    }
    stirling(shifted) - correction
}

fn stirling(z: Complex64) -> Complex64 {
    let inv = z.inv();
    let inv2 = inv * inv;
    let mut series = Complex64::new(0.0, 0.0);
    let mut power = inv;
    for coeff in STIRLING {
        series += power * coeff;
        power *= inv2;
    }
    (z - 0.5) * z.ln() - z + LN_2PI_HALF + series
}

/// `log sin(π z)` without overflow for large `|Im z|`.
fn ln_sin_pi(z: Complex64) -> Complex64 {
    if z.im.abs() < 20.0 {
        return (z * PI).sin().ln();
    }
    // sin(πz) = (e^{iπz} - e^{-iπz}) / 2i; keep the dominant exponential.
    let i = Complex64::new(0.0, 1.0);
    let one = Complex64::new(1.0, 0.0);
    if z.im > 0.0 {
        -i * PI * z + (one - (i * 2.0 * PI * z).exp()).ln() - (-i * 2.0).ln()
    } else {
        i * PI * z + (one - (-i * 2.0 * PI * z).exp()).ln() - (i * 2.0).ln()
    }
}

fn wrap_phase(theta: f64) -> f64 {
    let two_pi = 2.0 * PI;
    let mut t = theta % two_pi;
    if t > PI {
        t -= two_pi;
    } else if t <= -PI {
        t += two_pi;
    }
    t
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Lanczos (g = 7, 9 terms); independent of the Stirling path.
    fn lanczos_gamma(z: Complex64) -> Complex64 {
        const G: f64 = 7.0;
        const COEF: [f64; 9] = [
            0.999_999_999_999_809_93,
            676.520_368_121_885_1,
            -1_259.139_216_722_402_8,
            771.323_428_777_653_13,
            -176.615_029_162_140_59,
            12.507_343_278_686_905,
            -0.138_571_095_265_720_12,
            9.984_369_578_019_571_6e-6,
            1.505_632_735_149_311_6e-7,
        ];
        if z.re < 0.5 {
            let one = Complex64::new(1.0, 0.0);
            return PI / ((z * PI).sin() * lanczos_gamma(one - z));
        }
        let z = z - 1.0;
        let mut x = Complex64::new(COEF[0], 0.0);
        for (i, c) in COEF.iter().enumerate().skip(1) {
            x += *c / (z + i as f64);
        }
        let t = z + G + 0.5;
        (2.0 * PI).sqrt() * t.powc(z + 0.5) * (-t).exp() * x
    }

    #[test]
    fn gamma_one_and_half() {
        // the shift to Re z = 12 costs a few ulps of ln Γ(12) ≈ 17.5
        let l1 = log_gamma(Complex64::new(1.0, 0.0)).unwrap();
        assert!(l1.norm() < 8e-15);
        let lh = log_gamma(Complex64::new(0.5, 0.0)).unwrap();
        assert!((lh.re - 0.572_364_942_924_700_1).abs() < 1e-14);
        assert!(lh.im.abs() < 1e-15);
    }

    #[test]
    fn complex_value_against_lanczos_and_frozen() {
        let z = Complex64::new(3.5, 2.0);
        let ours = log_gamma(z).unwrap();
        let oracle = lanczos_gamma(z);
        let rel = (ours.exp() - oracle).norm() / oracle.norm();
        assert!(rel < 1e-12, "rel = {rel}");
        // mpmath loggamma(3.5+2j)
        assert!((ours.re - 0.580_733_212_081_268_2).abs() < 1e-13);
        assert!((ours.im - 2.335_316_841_916_162_8).abs() < 1e-13);
    }

    #[test]
    fn matches_lanczos_on_a_grid() {
        for re in [-7.3, -2.5, -0.4, 0.1, 0.9, 2.2, 7.7, 19.0, 45.0] {
            for im in [-30.0, -3.0, -0.2, 0.0, 0.7, 5.0, 25.0] {
                let z = Complex64::new(re, im);
                if z.norm() > 50.0 {
                    continue;
                }
                let ours = log_gamma(z).unwrap().exp();
                let oracle = lanczos_gamma(z);
                let rel = (ours - oracle).norm() / oracle.norm();
                assert!(rel < 1e-11, "z = {z}, rel = {rel}");
            }
        }
    }

    #[test]
    fn recurrence_and_large_imaginary() {
        for z in [Complex64::new(0.3, 41.0), Complex64::new(-0.2, -40.0), Complex64::new(1e-3, 0.0)] {
            let lhs = log_gamma(z + 1.0).unwrap().exp();
            let rhs = log_gamma(z).unwrap().exp() * z;
            assert!((lhs - rhs).norm() / lhs.norm() < 1e-12, "z = {z}");
        }
    }

    #[test]
    fn poles_rejected_and_rgamma_zero() {
        assert!(log_gamma(Complex64::new(0.0, 0.0)).is_err());
        assert!(log_gamma(Complex64::new(-3.0, 0.0)).is_err());
        assert_eq!(rgamma(Complex64::new(-2.0, 0.0)).unwrap(), Complex64::new(0.0, 0.0));
        assert!((gamma(-0.5).unwrap() + 2.0 * PI.sqrt()).abs() < 1e-13);
        assert!((gamma(5.0).unwrap() - 24.0).abs() < 1e-12);
    }
}
