use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::chgeom::Isometry;
use crate::error::{Error, Result};

/// Default merge radius for orbit points, in ball coordinates.
pub const DEFAULT_DEDUP_TOL: f64 = 1e-9;

/// Generators of a discrete subgroup of `U(n,1)` and enumeration limits.
#[derive(Debug, Clone)]
pub struct GroupSpec {
    pub n: usize,
    pub generators: Vec<Isometry>,
    pub include_inverses: bool,
    pub max_word_length: usize,
    pub dedup_tol: f64,
    /// Thread count for frontier expansion; `None` uses the global pool.
    pub workers: Option<usize>,
}

#[derive(Serialize, Deserialize)]
struct GroupFile {
    n: usize,
    generators: Vec<Vec<Vec<[f64; 2]>>>,
    include_inverses: bool,
    max_word_length: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    dedup_tol: Option<f64>,
}

impl GroupSpec {
    pub fn new(n: usize, generators: Vec<Isometry>, include_inverses: bool, max_word_length: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Domain("dimension must be positive".into()));
        }
        if max_word_length == 0 {
            return Err(Error::Domain("max_word_length must be at least 1".into()));
        }
        if let Some(g) = generators.iter().find(|g| g.dim() != n) {
            return Err(Error::DimensionMismatch { expected: n, found: g.dim() });
        }
        Ok(GroupSpec { n, generators, include_inverses, max_word_length, dedup_tol: DEFAULT_DEDUP_TOL, workers: None })
    }

    /// The trivial group in `CHⁿ`.
    pub fn trivial(n: usize) -> Self {
        GroupSpec::new(n, Vec::new(), false, 1).expect("n > 0")
    }

    pub fn with_workers(mut self, workers: Option<usize>) -> Self {
        self.workers = workers;
        self
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: GroupFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        let mut gens = Vec::with_capacity(file.generators.len());
        for (k, rows) in file.generators.iter().enumerate() {
            if rows.len() != file.n + 1 {
                return Err(Error::Parse(format!("generator {k} has {} rows, expected {}", rows.len(), file.n + 1)));
            }
            let rows: Vec<Vec<Complex64>> =
                rows.iter().map(|r| r.iter().map(|&[re, im]| Complex64::new(re, im)).collect()).collect();
            gens.push(Isometry::from_rows(&rows).map_err(|e| Error::Parse(format!("generator {k}: {e}")))?);
        }
        let mut spec = GroupSpec::new(file.n, gens, file.include_inverses, file.max_word_length)?;
        if let Some(tol) = file.dedup_tol {
            if !(tol > 0.0) {
                return Err(Error::Parse(format!("dedup_tol must be positive, got {tol}")));
            }
            spec.dedup_tol = tol;
        }
        Ok(spec)
    }

    pub fn to_json(&self) -> String {
        let generators = self
            .generators
            .iter()
            .map(|g| {
                let m = g.matrix();
                (0..m.nrows()).map(|i| (0..m.ncols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect()).collect()
            })
            .collect();
        let file = GroupFile {
            n: self.n,
            generators,
            include_inverses: self.include_inverses,
            max_word_length: self.max_word_length,
            dedup_tol: (self.dedup_tol != DEFAULT_DEDUP_TOL).then_some(self.dedup_tol),
        };
        serde_json::to_string_pretty(&file).expect("plain data serializes")
    }

    /// Generators followed by their inverses when requested. The inverse of
    /// letter `k` is `letters[inverse_of[k]]`, if present.
    pub(crate) fn alphabet(&self) -> (Vec<Isometry>, Vec<Option<usize>>) {
        let k = self.generators.len();
        let mut letters = self.generators.clone();
        let mut inverse_of = vec![None; k];
        if self.include_inverses {
            letters.extend(self.generators.iter().map(Isometry::inverse));
            inverse_of = (0..2 * k).map(|i| Some((i + k) % (2 * k))).collect();
        }
        (letters, inverse_of)
    }
}

/// Conjugate a real `2×2` matrix of determinant 1, acting on the upper half
/// plane, to the ball `CH¹` through the Cayley map `w = (z - i)/(z + i)`.
/// The point `i` goes to the origin.
pub fn fuchsian_embed(m: [[f64; 2]; 2]) -> Result<Isometry> {
    let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    if (det - 1.0).abs() > 1e-10 {
        return Err(Error::InvalidIsometry(format!("determinant {det} != 1")));
    }
    let i = Complex64::i();
    let one = Complex64::new(1.0, 0.0);
    let cayley = DMatrix::from_row_slice(2, 2, &[one, -i, one, i]);
    let cayley_inv = DMatrix::from_row_slice(2, 2, &[i, i, -one, one]) / (2.0 * i);
    let real = DMatrix::from_fn(2, 2, |r, c| Complex64::new(m[r][c], 0.0));
    Isometry::new(cayley * real * cayley_inv)
}
