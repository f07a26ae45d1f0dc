use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use serde::Deserialize;

use crate::chgeom::{distance, BallPoint};
use crate::error::{Error, Result};

/// An eigenfunction `φ_j`, evaluated pointwise.
#[derive(Clone)]
pub enum PhiFn {
    Constant(f64),
    /// Value at the nearest tabulated point (hyperbolic distance).
    Table(Vec<(BallPoint, f64)>),
    Custom(Arc<dyn Fn(&BallPoint) -> f64 + Send + Sync>),
}

impl fmt::Debug for PhiFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PhiFn::Constant(c) => write!(f, "Constant({c})"),
            PhiFn::Table(t) => write!(f, "Table({} samples)", t.len()),
            PhiFn::Custom(_) => write!(f, "Custom"),
        }
    }
}

impl PhiFn {
    pub fn eval(&self, z: &BallPoint) -> f64 {
        match self {
            PhiFn::Constant(c) => *c,
            PhiFn::Table(samples) => samples
                .iter()
                .map(|(p, v)| (distance(p, z), *v))
                .min_by(|a, b| a.0.total_cmp(&b.0))
                .map_or(0.0, |(_, v)| v),
            PhiFn::Custom(f) => f(z),
        }
    }

    /// Multiply every value by `k`.
    pub fn scaled(&self, k: f64) -> Self {
        match self {
            PhiFn::Constant(c) => PhiFn::Constant(k * c),
            PhiFn::Table(t) => PhiFn::Table(t.iter().map(|(p, v)| (p.clone(), k * v)).collect()),
            PhiFn::Custom(f) => {
                let f = Arc::clone(f);
                PhiFn::Custom(Arc::new(move |z| k * f(z)))
            }
        }
    }
}

/// One point mass `(λ_j, φ_j)` of the discrete spectrum.
#[derive(Debug, Clone)]
pub struct SpectralEntry {
    pub lambda: f64,
    pub phi: PhiFn,
}

/// Discrete eigenvalues of the shifted Laplacian `L + n²` on `Γ\CHⁿ`, in
/// `[-n², 0)`, with eigenfunction evaluators.
#[derive(Debug, Clone, Default)]
pub struct SpectralData {
    pub covolume: Option<f64>,
    entries: Vec<SpectralEntry>,
}

#[derive(Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
enum PhiFile {
    Constant,
    Table { samples: Vec<TableSample> },
}

#[derive(Deserialize)]
struct TableSample {
    z: Vec<[f64; 2]>,
    value: f64,
}

#[derive(Deserialize)]
struct EntryFile {
    lambda: f64,
    phi: PhiFile,
}

#[derive(Deserialize)]
struct SpectralFile {
    #[serde(default)]
    covolume: Option<f64>,
    entries: Vec<EntryFile>,
}

impl SpectralData {
    /// Entries are sorted by `λ`; non-finite values are rejected.
    pub fn new(covolume: Option<f64>, mut entries: Vec<SpectralEntry>) -> Result<Self> {
        if let Some(v) = covolume {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::Domain(format!("covolume must be positive, got {v}")));
            }
        }
        if let Some(e) = entries.iter().find(|e| !(e.lambda.is_finite() && e.lambda < 0.0)) {
            return Err(Error::Domain(format!("discrete eigenvalue {} outside [-n², 0)", e.lambda)));
        }
        entries.sort_by(|a, b| a.lambda.total_cmp(&b.lambda));
        Ok(SpectralData { covolume, entries })
    }

    /// The bottom eigenvalue `λ₀ = -n²` with the constant eigenfunction
    /// `1/√V`.
    pub fn constant_only(n: usize, covolume: f64) -> Result<Self> {
        let phi = PhiFn::Constant(1.0 / covolume.sqrt());
        Self::new(Some(covolume), vec![SpectralEntry { lambda: -((n * n) as f64), phi }])
    }

    pub fn entries(&self) -> &[SpectralEntry] {
        &self.entries
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Reject eigenvalues below `-n²`.
    pub fn check_dimension(&self, n: usize) -> Result<()> {
        let floor = -((n * n) as f64);
        match self.entries.first() {
            Some(e) if e.lambda < floor - 1e-12 => {
                Err(Error::Domain(format!("eigenvalue {} below -n² = {floor}", e.lambda)))
            }
            _ => Ok(()),
        }
    }

    pub fn scaled(&self, k: f64) -> Self {
        SpectralData {
            covolume: self.covolume,
            entries: self.entries.iter().map(|e| SpectralEntry { lambda: e.lambda, phi: e.phi.scaled(k) }).collect(),
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: SpectralFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        let mut entries = Vec::with_capacity(file.entries.len());
        for (k, e) in file.entries.into_iter().enumerate() {
            let phi = match e.phi {
                PhiFile::Constant => {
                    let v = file
                        .covolume
                        .ok_or_else(|| Error::Parse(format!("entry {k}: constant φ needs a covolume")))?;
                    PhiFn::Constant(1.0 / v.sqrt())
                }
                PhiFile::Table { samples } => {
                    if samples.is_empty() {
                        return Err(Error::Parse(format!("entry {k}: empty table")));
                    }
                    let mut table = Vec::with_capacity(samples.len());
                    for s in samples {
                        let z = BallPoint::new(s.z.iter().map(|&[re, im]| Complex64::new(re, im)).collect())
                            .map_err(|err| Error::Parse(format!("entry {k}: {err}")))?;
                        table.push((z, s.value));
                    }
                    PhiFn::Table(table)
                }
            };
            entries.push(SpectralEntry { lambda: e.lambda, phi });
        }
        Self::new(file.covolume, entries).map_err(|e| Error::Parse(e.to_string()))
    }
}
