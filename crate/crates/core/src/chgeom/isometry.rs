use nalgebra::DMatrix;
use num_complex::Complex64;

use super::BallPoint;
use crate::error::{Error, Result};

/// Tolerance for `g* J g = J` and `|det g| = 1`, relative to `max(1, ‖g‖²)`.
pub const FORM_TOL: f64 = 1e-10;

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };
const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };

/// An element of `U(n,1)`, acting on the ball by `z ↦ u/s` where
/// `(u; s) = g (z; 1)`.
///
/// Matrices are `(n+1)×(n+1)` and preserve `J = diag(1, …, 1, -1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Isometry {
    m: DMatrix<Complex64>,
}

impl Isometry {
    /// Validate a matrix against the form and determinant conditions.
    pub fn new(m: DMatrix<Complex64>) -> Result<Self> {
        if m.nrows() != m.ncols() || m.nrows() < 2 {
            return Err(Error::InvalidIsometry(format!("shape {}x{}", m.nrows(), m.ncols())));
        }
        if m.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::InvalidIsometry("non-finite entry".into()));
        }
        let g = Isometry { m };
        let scale = g.max_abs().powi(2).max(1.0);
        let defect = g.form_defect();
        if defect > FORM_TOL * scale {
            return Err(Error::InvalidIsometry(format!("|g*Jg - J| = {defect:.3e}")));
        }
        let det = g.m.determinant().norm();
        if (det - 1.0).abs() > FORM_TOL * scale.powi(g.m.nrows() as i32) {
            return Err(Error::InvalidIsometry(format!("|det g| = {det}")));
        }
        Ok(g)
    }

    /// Build from row-major complex entries.
    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let k = rows.len();
        if rows.iter().any(|r| r.len() != k) {
            return Err(Error::InvalidIsometry("rows of unequal length".into()));
        }
        Self::new(DMatrix::from_fn(k, k, |i, j| rows[i][j]))
    }

    pub fn identity(n: usize) -> Self {
        Isometry { m: DMatrix::identity(n + 1, n + 1) }
    }

    /// Loxodromic translation of length `l` along the geodesic through the
    /// origin in the `e₁` direction, with `e_k ↦ e^{iθ_k} e_k` rotation on the
    /// remaining coordinates (pass an empty slice for none).
    pub fn loxodromic(n: usize, l: f64, rotation: &[f64]) -> Self {
        let mut m = DMatrix::identity(n + 1, n + 1);
        m[(0, 0)] = Complex64::new(l.cosh(), 0.0);
        m[(0, n)] = Complex64::new(l.sinh(), 0.0);
        m[(n, 0)] = Complex64::new(l.sinh(), 0.0);
        m[(n, n)] = Complex64::new(l.cosh(), 0.0);
        for (k, &theta) in rotation.iter().enumerate().take(n.saturating_sub(1)) {
            m[(k + 1, k + 1)] = Complex64::from_polar(1.0, theta);
        }
        Isometry { m }
    }

    /// Unitary map `z ↦ U z` fixing the origin.
    pub fn unitary(u: &DMatrix<Complex64>) -> Result<Self> {
        let n = u.nrows();
        let mut m = DMatrix::identity(n + 1, n + 1);
        m.view_mut((0, 0), (n, n)).copy_from(u);
        Self::new(m)
    }

    /// The transvection along the geodesic from the origin to `p`, sending
    /// `0 ↦ p`.
    pub fn translation_to(p: &BallPoint) -> Self {
        let n = p.dim();
        let z = p.coords();
        let gamma = 1.0 / p.defect().sqrt();
        let k = gamma * gamma / (1.0 + gamma);
        let m = DMatrix::from_fn(n + 1, n + 1, |i, j| match (i < n, j < n) {
            (true, true) => {
                let delta = if i == j { ONE } else { ZERO };
                delta + z[i] * z[j].conj() * k
            }
            (true, false) => z[i] * gamma,
            (false, true) => z[j].conj() * gamma,
            (false, false) => Complex64::new(gamma, 0.0),
        });
        Isometry { m }
    }

    pub fn dim(&self) -> usize {
        self.m.nrows() - 1
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.m
    }

    pub fn max_abs(&self) -> f64 {
        self.m.iter().fold(0.0, |acc, c| acc.max(c.norm()))
    }

    /// Max-norm of `g* J g - J`.
    pub fn form_defect(&self) -> f64 {
        let k = self.m.nrows();
        let mut worst: f64 = 0.0;
        for i in 0..k {
            for j in 0..k {
                let mut s = ZERO;
                for r in 0..k {
                    let sign = if r + 1 == k { -1.0 } else { 1.0 };
                    s += self.m[(r, i)].conj() * self.m[(r, j)] * sign;
                }
                let target = if i != j { 0.0 } else if i + 1 == k { -1.0 } else { 1.0 };
                worst = worst.max((s - target).norm());
            }
        }
        worst
    }

    /// `g⁻¹ = J g* J`.
    pub fn inverse(&self) -> Self {
        let k = self.m.nrows();
        let mut inv = self.m.adjoint();
        for i in 0..k {
            for j in 0..k {
                if (i + 1 == k) != (j + 1 == k) {
                    inv[(i, j)] = -inv[(i, j)];
                }
            }
        }
        Isometry { m: inv }
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Isometry) -> Self {
        Isometry { m: &self.m * &other.m }
    }

    pub fn apply(&self, z: &BallPoint) -> Result<BallPoint> {
        let n = self.dim();
        if z.dim() != n {
            return Err(Error::DimensionMismatch { expected: n, found: z.dim() });
        }
        let zc = z.coords();
        let row = |i: usize| (0..n).map(|j| self.m[(i, j)] * zc[j]).sum::<Complex64>() + self.m[(i, n)];
        let s = row(n);
        if s.norm() == 0.0 {
            return Err(Error::Numerical("isometry sends the point to infinity".into()));
        }
        BallPoint::new((0..n).map(|i| row(i) / s).collect())
    }

    /// Equality up to a unit scalar, which acts trivially on the ball.
    pub fn projectively_eq(&self, other: &Isometry, tol: f64) -> bool {
        if self.m.shape() != other.m.shape() {
            return false;
        }
        let inner: Complex64 = self.m.iter().zip(other.m.iter()).map(|(a, b)| a.conj() * b).sum();
        if inner.norm() == 0.0 {
            return false;
        }
        let phase = inner / inner.norm();
        let scale = self.max_abs().max(1.0);
        self.m.iter().zip(other.m.iter()).all(|(a, b)| (b - a * phase).norm() <= tol * scale)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chgeom::distance;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn loxodromic_moves_origin_by_length() {
        for n in 1..=3 {
            let g = Isometry::loxodromic(n, 1.3, &[0.4, 0.9]);
            assert!(g.form_defect() < 1e-14);
            let img = g.apply(&BallPoint::origin(n)).unwrap();
            assert!((distance(&img, &BallPoint::origin(n)) - 1.3).abs() < 1e-13);
        }
    }

    #[test]
    fn translation_sends_origin_to_target() {
        let p = BallPoint::from_re_im(&[(0.3, -0.2), (0.1, 0.5)]).unwrap();
        let g = Isometry::translation_to(&p);
        assert!(g.form_defect() < 1e-13);
        let img = g.apply(&BallPoint::origin(2)).unwrap();
        for (a, b) in img.coords().iter().zip(p.coords()) {
            assert!((a - b).norm() < 1e-14);
        }
        let back = g.inverse().apply(&p).unwrap();
        assert!(back.norm_sqr() < 1e-28);
    }

    #[test]
    fn rejects_non_isometries() {
        let bad = vec![vec![c(2.0, 0.0), c(0.0, 0.0)], vec![c(0.0, 0.0), c(1.0, 0.0)]];
        assert!(Isometry::from_rows(&bad).is_err());
        let ragged = vec![vec![c(1.0, 0.0)], vec![c(0.0, 0.0), c(1.0, 0.0)]];
        assert!(Isometry::from_rows(&ragged).is_err());
    }

    #[test]
    fn projective_equality_ignores_phase() {
        let g = Isometry::loxodromic(2, 0.7, &[]);
        let h = Isometry { m: g.matrix() * Complex64::from_polar(1.0, 0.8) };
        assert!(g.projectively_eq(&h, 1e-12));
        assert!(!g.projectively_eq(&Isometry::loxodromic(2, 0.71, &[]), 1e-9));
    }

    fn arb_point() -> impl Strategy<Value = BallPoint> {
        ((-0.6f64..0.6), (-0.6f64..0.6), (-0.6f64..0.6), (-0.6f64..0.6))
            .prop_map(|(a, b, c, d)| BallPoint::from_re_im(&[(a / 2.0, b / 2.0), (c / 2.0, d / 2.0)]).unwrap())
    }

    proptest! {
        #[test]
        fn isometries_preserve_distance(z in arb_point(), w in arb_point(), p in arb_point(), l in 0.0f64..2.0, th in -3.0f64..3.0) {
            let g = Isometry::translation_to(&p).compose(&Isometry::loxodromic(2, l, &[th]));
            let d0 = distance(&z, &w);
            let d1 = distance(&g.apply(&z).unwrap(), &g.apply(&w).unwrap());
            prop_assert!((d0 - d1).abs() < 1e-9 * d0.max(1.0));
            let id = g.compose(&g.inverse());
            prop_assert!(id.projectively_eq(&Isometry::identity(2), 1e-10));
        }
    }
}
