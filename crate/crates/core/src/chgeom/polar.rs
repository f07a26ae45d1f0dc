use num_complex::Complex64;

use super::{BallPoint, Isometry};
use crate::error::{Error, Result};

/// Beyond this radius `tanh r` rounds to 1 and the ball point is lost.
pub const MAX_POLAR_RADIUS: f64 = 40.0;

/// Geodesic polar coordinates `(r, ω)`, `ω ∈ S^{2n-1} ⊂ ℝ^{2n}` stored as
/// interleaved real and imaginary parts.
#[derive(Debug, Clone, PartialEq)]
pub struct PolarPoint {
    pub r: f64,
    pub omega: Vec<f64>,
}

impl PolarPoint {
    pub fn new(r: f64, omega: Vec<f64>) -> Result<Self> {
        if !(r >= 0.0) || omega.is_empty() || omega.len() % 2 != 0 {
            return Err(Error::Domain(format!("bad polar point r={r}, |ω| has {} components", omega.len())));
        }
        let norm: f64 = omega.iter().map(|x| x * x).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > 1e-12 {
            return Err(Error::Domain(format!("direction has norm {norm}")));
        }
        Ok(PolarPoint { r, omega })
    }

    /// Direction as a complex unit vector.
    pub fn direction(&self) -> Vec<Complex64> {
        self.omega.chunks(2).map(|p| Complex64::new(p[0], p[1])).collect()
    }
}

/// `(r, ω) ↦ x = tanh(r) ω` about the origin, or `g(tanh(r) ω)` with `g` the
/// transvection to `center`.
pub fn polar_to_ball(p: &PolarPoint, center: Option<&BallPoint>) -> Result<BallPoint> {
    if p.r > MAX_POLAR_RADIUS {
        return Err(Error::Domain(format!("polar radius {} exceeds {MAX_POLAR_RADIUS}", p.r)));
    }
    let t = p.r.tanh();
    let local = BallPoint::new(p.direction().into_iter().map(|w| w * t).collect())?;
    match center {
        None => Ok(local),
        Some(c) => {
            if c.dim() != local.dim() {
                return Err(Error::DimensionMismatch { expected: c.dim(), found: local.dim() });
            }
            Isometry::translation_to(c).apply(&local)
        }
    }
}

/// Inverse of [`polar_to_ball`]. The direction at `r = 0` is `e₁`.
pub fn ball_to_polar(z: &BallPoint, center: Option<&BallPoint>) -> Result<PolarPoint> {
    let local = match center {
        None => z.clone(),
        Some(c) => Isometry::translation_to(c).inverse().apply(z)?,
    };
    let norm = local.norm_sqr().sqrt();
    let mut omega = vec![0.0; 2 * local.dim()];
    if norm == 0.0 {
        omega[0] = 1.0;
        return Ok(PolarPoint { r: 0.0, omega });
    }
    for (k, c) in local.coords().iter().enumerate() {
        omega[2 * k] = c.re / norm;
        omega[2 * k + 1] = c.im / norm;
    }
    Ok(PolarPoint { r: norm.atanh(), omega })
}
