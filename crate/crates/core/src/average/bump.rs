use std::f64::consts::PI;

use crate::chgeom::{distance, sphere_area, BallPoint};
use crate::error::{Error, Result};
use crate::hypgeo::ln_gamma_abs;
use crate::quad::integrate_1d;

/// Largest support radius accepted by [`bump_normalization`].
pub const MAX_ALPHA: f64 = 0.5;

/// Radial shape `h₁(t) = k_n (1 - t²)^p` on `[0, 1]`.
///
/// `k_n = Γ(n+p+1) / (πⁿ Γ(p+1))` makes `h₁(|x|)` a probability density on
/// the Euclidean unit ball of `ℂⁿ`, which is the normalization under which
/// `α^{2n} c_n(α) → 1`. The default `p = 3` is `C²` across the rim.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CapProfile {
    pub power: u32,
}

impl Default for CapProfile {
    fn default() -> Self {
        CapProfile { power: 3 }
    }
}

impl CapProfile {
    fn euclidean_constant(&self, n: usize) -> f64 {
        let p = self.power as f64;
        let ln = ln_gamma_abs(n as f64 + p + 1.0).expect("positive argument")
            - ln_gamma_abs(p + 1.0).expect("positive argument");
        ln.exp() / PI.powi(n as i32)
    }

    /// `h₁(t)`, zero for `t ≥ 1`.
    pub fn value(&self, n: usize, t: f64) -> f64 {
        self.value_sq(n, t * t)
    }

    /// `h₁` as a function of `t²`.
    pub fn value_sq(&self, n: usize, t2: f64) -> f64 {
        if t2 >= 1.0 {
            return 0.0;
        }
        self.euclidean_constant(n) * (1.0 - t2).powi(self.power as i32)
    }
}

/// `c_n(α)`: the constant making `h(x) = c_n(α) h₁(d(x, center)/α)` a
/// probability density for the hyperbolic volume,
/// `c_n(α) α vol(S^{2n-1}) ∫₀¹ h₁(t) sinh^{2n-1}(αt) cosh(αt) dt = 1`.
pub fn bump_normalization(n: usize, alpha: f64, profile: CapProfile) -> Result<f64> {
    if n == 0 {
        return Err(Error::Domain("dimension must be positive".into()));
    }
    if !(alpha > 0.0 && alpha <= MAX_ALPHA) {
        return Err(Error::Domain(format!("bump radius must lie in (0, {MAX_ALPHA}], got {alpha}")));
    }
    if profile.power == 0 {
        return Err(Error::Domain("profile must vanish at the rim (power ≥ 1)".into()));
    }
    let m = 2 * n as i32 - 1;
    let r = integrate_1d(
        |t| profile.value(n, t) * (alpha * t).sinh().powi(m) * (alpha * t).cosh(),
        0.0,
        1.0,
        1e-15 * alpha.powi(m),
    )?;
    let mass = alpha * sphere_area(n) * r.value;
    if !(mass > 0.0) {
        return Err(Error::Numerical("bump profile integrates to zero".into()));
    }
    Ok(1.0 / mass)
}

/// A normalized bump `h` of radius `alpha` about `center`.
#[derive(Debug, Clone, PartialEq)]
pub struct BumpProfile {
    pub center: BallPoint,
    pub alpha: f64,
    pub profile: CapProfile,
    pub c_alpha: f64,
    peak: f64,
}

impl BumpProfile {
    pub fn new(center: BallPoint, alpha: f64) -> Result<Self> {
        Self::with_profile(center, alpha, CapProfile::default())
    }

    pub fn with_profile(center: BallPoint, alpha: f64, profile: CapProfile) -> Result<Self> {
        let c_alpha = bump_normalization(center.dim(), alpha, profile)?;
        let peak = c_alpha * profile.value(center.dim(), 0.0);
        Ok(BumpProfile { center, alpha, profile, c_alpha, peak })
    }

    pub fn n(&self) -> usize {
        self.center.dim()
    }

    /// `h` at geodesic distance `d` from the center.
    pub fn at_distance(&self, d: f64) -> f64 {
        self.at_distance_sq(d * d)
    }

    /// `h` as a function of the squared distance.
    pub fn at_distance_sq(&self, d2: f64) -> f64 {
        let t2 = d2 / (self.alpha * self.alpha);
        if t2 >= 1.0 {
            return 0.0;
        }
        self.peak * (1.0 - t2).powi(self.profile.power as i32)
    }

    /// `sup h = c_n(α) h₁(0)`.
    pub fn peak(&self) -> f64 {
        self.peak
    }
}

/// `h(x) = c_n(α) h₁(d(x, center)/α)`.
pub fn bump_value(b: &BumpProfile, x: &BallPoint) -> f64 {
    b.at_distance(distance(x, &b.center))
}
