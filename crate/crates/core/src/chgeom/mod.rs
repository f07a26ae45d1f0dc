//! The unit-ball model of complex hyperbolic space `CHⁿ`.
//!
//! The metric is `ds² = (1-|z|²)⁻² [(1-|z|²)δᵢⱼ + zᵢ z̄ⱼ] dz̄ᵢ dzⱼ`, for which
//! the radial segment from the origin to `t e₁` has length `atanh t` and
//! `cosh² d(z, w) = |1 - ⟨z, w⟩|² / ((1-|z|²)(1-|w|²))`. The volume element is
//! `dμ = dz / (1-|z|²)^{n+1}`, equal to `sinh^{2n-1} r cosh r dr dω` in
//! geodesic polar coordinates.

mod isometry;
mod polar;

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::hypgeo::ln_gamma_abs;

pub use isometry::{Isometry, FORM_TOL};
pub use polar::{ball_to_polar, polar_to_ball, PolarPoint, MAX_POLAR_RADIUS};

/// A point is valid when `1 - |z|² > POINT_TOL`.
pub const POINT_TOL: f64 = 1e-12;

/// A point of the open unit ball in `ℂⁿ`.
#[derive(Debug, Clone, PartialEq)]
pub struct BallPoint {
    coords: Vec<Complex64>,
}

impl BallPoint {
    pub fn new(coords: Vec<Complex64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::Domain("a ball point needs at least one coordinate".into()));
        }
        let norm_sqr: f64 = coords.iter().map(|c| c.norm_sqr()).sum();
        if !norm_sqr.is_finite() || 1.0 - norm_sqr <= POINT_TOL {
            return Err(Error::InvalidPoint(norm_sqr));
        }
        Ok(BallPoint { coords })
    }

    /// The origin of `CHⁿ`.
    pub fn origin(n: usize) -> Self {
        BallPoint { coords: vec![Complex64::new(0.0, 0.0); n] }
    }

    /// Build from interleaved `(re, im)` pairs.
    pub fn from_re_im(pairs: &[(f64, f64)]) -> Result<Self> {
        Self::new(pairs.iter().map(|&(re, im)| Complex64::new(re, im)).collect())
    }

    /// The point `t e₁`, at distance `atanh |t|` from the origin.
    pub fn on_first_axis(n: usize, t: Complex64) -> Result<Self> {
        let mut coords = vec![Complex64::new(0.0, 0.0); n];
        coords[0] = t;
        Self::new(coords)
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[Complex64] {
        &self.coords
    }

    pub fn norm_sqr(&self) -> f64 {
        self.coords.iter().map(|c| c.norm_sqr()).sum()
    }

    /// `1 - |z|²`, always positive.
    pub fn defect(&self) -> f64 {
        1.0 - self.norm_sqr()
    }
}

/// Hermitian product `⟨z, w⟩ = Σ zᵢ w̄ᵢ`.
pub fn hermitian(z: &[Complex64], w: &[Complex64]) -> Complex64 {
    z.iter().zip(w).map(|(a, b)| a * b.conj()).sum()
}

/// `sinh² d(z, w)`.
///
/// Computed as `(|z-w|² - Σ_{i<j} |zᵢwⱼ - zⱼwᵢ|²) / ((1-|z|²)(1-|w|²))`, the
/// Lagrange-identity form of `cosh² d - 1`, which avoids cancellation for
/// nearby points.
pub fn sinh2_distance(z: &BallPoint, w: &BallPoint) -> f64 {
    assert_eq!(z.dim(), w.dim(), "points of different dimension");
    let (zc, wc) = (z.coords(), w.coords());
    let diff: f64 = zc.iter().zip(wc).map(|(a, b)| (a - b).norm_sqr()).sum();
    let mut wedge = 0.0;
    for i in 0..zc.len() {
        for j in (i + 1)..zc.len() {
            wedge += (zc[i] * wc[j] - zc[j] * wc[i]).norm_sqr();
        }
    }
    ((diff - wedge) / (z.defect() * w.defect())).max(0.0)
}

/// Geodesic distance `d(z, w)`.
pub fn distance(z: &BallPoint, w: &BallPoint) -> f64 {
    sinh2_distance(z, w).sqrt().asinh()
}

/// [`distance`] with dimension and consistency checks against the
/// `arccosh` form.
pub fn checked_distance(z: &BallPoint, w: &BallPoint) -> Result<f64> {
    if z.dim() != w.dim() {
        return Err(Error::DimensionMismatch { expected: z.dim(), found: w.dim() });
    }
    let cosh2 = (Complex64::new(1.0, 0.0) - hermitian(z.coords(), w.coords())).norm_sqr() / (z.defect() * w.defect());
    if cosh2 < 1.0 - 1e-9 {
        return Err(Error::Numerical(format!("cosh² d = {cosh2} < 1")));
    }
    Ok(distance(z, w))
}

/// Area of the unit sphere `S^{2n-1} ⊂ ℝ^{2n}`: `2πⁿ / Γ(n)`.
pub fn sphere_area(n: usize) -> f64 {
    2.0 * PI.powi(n as i32) / ln_gamma_abs(n as f64).expect("n >= 1").exp()
}

/// Volume of a geodesic ball of radius `t`: `πⁿ sinh^{2n} t / Γ(n+1)`.
pub fn volume_ball(n: usize, t: f64) -> f64 {
    assert!(n >= 1, "dimension must be positive");
    PI.powi(n as i32) * t.sinh().powi(2 * n as i32) / ln_gamma_abs(n as f64 + 1.0).expect("n >= 1").exp()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::integrate_1d;
    use proptest::prelude::*;

    fn pt(pairs: &[(f64, f64)]) -> BallPoint {
        BallPoint::from_re_im(pairs).unwrap()
    }

    #[test]
    fn origin_distance_zero() {
        assert_eq!(distance(&BallPoint::origin(3), &BallPoint::origin(3)), 0.0);
    }

    #[test]
    fn radial_distance_matches_line_integral() {
        // ds = dt / (1 - t²) along the first axis
        let line = integrate_1d(|t| 1.0 / (1.0 - t * t), 0.0, 0.5, 1e-14).unwrap().value;
        for n in 1..=3 {
            let d = distance(&BallPoint::origin(n), &BallPoint::on_first_axis(n, Complex64::new(0.5, 0.0)).unwrap());
            assert!((d - line).abs() < 1e-12);
            assert!((d - 0.549_306_144_334_054_8).abs() < 1e-12);
        }
        // off-center radial path: segment between 0.2 e1 and 0.7 e1
        let line = integrate_1d(|t| 1.0 / (1.0 - t * t), 0.2, 0.7, 1e-14).unwrap().value;
        let d = distance(&pt(&[(0.2, 0.0), (0.0, 0.0)]), &pt(&[(0.7, 0.0), (0.0, 0.0)]));
        assert!((d - line).abs() < 1e-8);
    }

    #[test]
    fn invalid_points_rejected() {
        assert!(BallPoint::from_re_im(&[(1.0, 0.0)]).is_err());
        assert!(BallPoint::from_re_im(&[(0.8, 0.6)]).is_err());
        assert!(BallPoint::new(vec![]).is_err());
    }

    #[test]
    fn lagrange_form_agrees_with_arccosh_form() {
        let z = pt(&[(0.1, -0.3), (0.25, 0.2)]);
        let w = pt(&[(-0.4, 0.1), (0.3, -0.5)]);
        let cosh2 = (Complex64::new(1.0, 0.0) - hermitian(z.coords(), w.coords())).norm_sqr() / (z.defect() * w.defect());
        assert!((sinh2_distance(&z, &w) - (cosh2 - 1.0)).abs() < 1e-13);
        assert!((checked_distance(&z, &w).unwrap() - cosh2.sqrt().acosh()).abs() < 1e-12);
    }

    #[test]
    fn volume_values_and_small_radius_limit() {
        let one = volume_ball(1, 1.0);
        assert!((one - PI * 1f64.sinh().powi(2)).abs() < 1e-13);
        let quad = integrate_1d(|r| 2.0 * PI * r.sinh() * r.cosh(), 0.0, 1.0, 1e-14).unwrap().value;
        assert!((one - quad).abs() < 1e-12);
        for n in 1..=4 {
            let t: f64 = 1e-4;
            let euclid = PI.powi(n as i32) * t.powi(2 * n as i32) / ln_gamma_abs(n as f64 + 1.0).unwrap().exp();
            assert!((volume_ball(n, t) / euclid - 1.0).abs() < 1e-7);
        }
    }

    fn arb_point(n: usize) -> impl Strategy<Value = BallPoint> {
        (prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), n), 0.0f64..0.95).prop_map(|(v, radius)| {
            let norm: f64 = v.iter().map(|(a, b)| a * a + b * b).sum::<f64>().sqrt().max(1e-9);
            BallPoint::from_re_im(&v.iter().map(|(a, b)| (a / norm * radius, b / norm * radius)).collect::<Vec<_>>())
                .unwrap()
        })
    }

    proptest! {
        #[test]
        fn symmetric(z in arb_point(2), w in arb_point(2)) {
            prop_assert!((distance(&z, &w) - distance(&w, &z)).abs() <= 1e-14 * distance(&z, &w).max(1.0));
        }

        #[test]
        fn triangle_inequality(x in arb_point(2), y in arb_point(2), z in arb_point(2)) {
            prop_assert!(distance(&x, &z) <= distance(&x, &y) + distance(&y, &z) + 1e-10);
        }
    }
}
