use std::collections::HashMap;

use rayon::prelude::*;
use serde::Serialize;

use super::GroupSpec;
use crate::chgeom::{distance, BallPoint, Isometry};
use crate::error::{Error, Result};

/// Orbit points within this distance of `T` count as inside (and are logged).
pub const BOUNDARY_TOL: f64 = 1e-12;

/// Group elements whose matrices agree to this relative tolerance, up to a
/// unit scalar, are the same element.
const ELEMENT_TOL: f64 = 1e-7;

/// One group element found by the search.
#[derive(Debug, Clone)]
pub struct ElementRecord {
    pub element: Isometry,
    /// `d(base, γ z')`.
    pub distance: f64,
    pub word_length: usize,
    /// Index into [`Orbit::points`].
    pub point: usize,
}

/// A distinct orbit point `γ z'` with the number of elements sending `z'`
/// there (the order of the stabilizer of `z'`).
#[derive(Debug, Clone)]
pub struct OrbitPoint {
    pub point: BallPoint,
    pub distance: f64,
    pub word_length: usize,
    pub multiplicity: usize,
}

/// Result of the breadth-first orbit search.
#[derive(Debug, Clone)]
pub struct Orbit {
    pub radius_bound: f64,
    pub prune_margin: f64,
    /// Elements in discovery order, all with `distance ≤ radius_bound + prune_margin`.
    pub elements: Vec<ElementRecord>,
    pub points: Vec<OrbitPoint>,
    pub words_expanded: usize,
    pub pruned: usize,
    pub truncated: bool,
}

/// `N(T, z, z')` with enumeration diagnostics.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CountResult {
    pub count: usize,
    pub words_expanded: usize,
    pub pruned: usize,
    /// The frontier was still alive at `max_word_length`: `count` is only a
    /// lower bound.
    pub truncated: bool,
    /// Elements within [`BOUNDARY_TOL`] of the sphere, counted as inside.
    pub boundary_hits: usize,
    /// Distinct orbit points inside the ball.
    pub distinct_points: usize,
}

impl Orbit {
    /// Count group elements with `d(base, γ z') < t`.
    pub fn count(&self, t: f64) -> Result<CountResult> {
        if t > self.radius_bound {
            return Err(Error::Domain(format!("T = {t} exceeds the enumeration bound {}", self.radius_bound)));
        }
        let mut count = 0;
        let mut boundary_hits = 0;
        for e in &self.elements {
            if e.distance < t + BOUNDARY_TOL {
                count += 1;
                if e.distance >= t - BOUNDARY_TOL {
                    boundary_hits += 1;
                }
            }
        }
        if boundary_hits > 0 {
            log::info!("{boundary_hits} orbit points within {BOUNDARY_TOL:e} of T = {t}, counted as inside");
        }
        let distinct_points = self.points.iter().filter(|p| p.distance < t + BOUNDARY_TOL).count();
        Ok(CountResult {
            count,
            words_expanded: self.words_expanded,
            pruned: self.pruned,
            truncated: self.truncated,
            boundary_hits,
            distinct_points,
        })
    }

    /// Element distances `d(base, γ z')` up to `bound`, ascending.
    pub fn distances_within(&self, bound: f64) -> Vec<f64> {
        let mut d: Vec<f64> = self.elements.iter().map(|e| e.distance).filter(|&d| d <= bound).collect();
        d.sort_by(f64::total_cmp);
        d
    }
}

type CellKey = Vec<i64>;

struct Index {
    cell: f64,
    tol: f64,
    cells: HashMap<CellKey, Vec<usize>>,
}

impl Index {
    fn key(&self, p: &BallPoint) -> CellKey {
        p.coords().iter().flat_map(|c| [(c.re / self.cell).floor() as i64, (c.im / self.cell).floor() as i64]).collect()
    }

    /// Orbit point within `tol` of `p`, if any.
    fn find(&self, p: &BallPoint, points: &[OrbitPoint]) -> Option<usize> {
        let key = self.key(p);
        let dims = key.len();
        let mut probe = key.clone();
        for offset in 0..3usize.pow(dims as u32) {
            let mut o = offset;
            for (slot, base) in probe.iter_mut().zip(&key) {
                *slot = base + (o % 3) as i64 - 1;
                o /= 3;
            }
            if let Some(found) = self.cells.get(&probe) {
                for &idx in found {
                    let q = &points[idx].point;
                    let d2: f64 = q.coords().iter().zip(p.coords()).map(|(a, b)| (a - b).norm_sqr()).sum();
                    if d2.sqrt() <= self.tol {
                        return Some(idx);
                    }
                }
            }
        }
        None
    }

    fn insert(&mut self, p: &BallPoint, idx: usize) {
        self.cells.entry(self.key(p)).or_default().push(idx);
    }
}

struct Candidate {
    element: Isometry,
    point: BallPoint,
    distance: f64,
    last_letter: usize,
}

/// Breadth-first enumeration of the elements `γ` with
/// `d(base, γ z') ≤ radius_bound`, by right multiplication with the
/// generators (and inverses when flagged).
///
/// A child is dropped once `d(base, γ z')` exceeds `radius_bound` by more
/// than twice the largest generator displacement at `z'`. Elements are
/// identified up to a unit scalar, so relations in the group never inflate
/// the count. The output does not depend on the number of workers.
pub fn enumerate_orbit(spec: &GroupSpec, base: &BallPoint, z_prime: &BallPoint, radius_bound: f64) -> Result<Orbit> {
    if !(radius_bound > 0.0) || !radius_bound.is_finite() {
        return Err(Error::Domain(format!("radius bound must be positive, got {radius_bound}")));
    }
    for p in [base, z_prime] {
        if p.dim() != spec.n {
            return Err(Error::DimensionMismatch { expected: spec.n, found: p.dim() });
        }
    }
    let run = || search(spec, base, z_prime, radius_bound);
    match spec.workers {
        Some(w) => rayon::ThreadPoolBuilder::new()
            .num_threads(w.max(1))
            .build()
            .map_err(|e| Error::Numerical(format!("thread pool: {e}")))?
            .install(run),
        None => run(),
    }
}

fn search(spec: &GroupSpec, base: &BallPoint, z_prime: &BallPoint, radius_bound: f64) -> Result<Orbit> {
    let (letters, inverse_of) = spec.alphabet();
    let mut prune_margin: f64 = 0.0;
    for g in &letters {
        prune_margin = prune_margin.max(2.0 * distance(z_prime, &g.apply(z_prime)?));
    }
    let limit = radius_bound + prune_margin;

    let mut index = Index { cell: spec.dedup_tol, tol: spec.dedup_tol, cells: HashMap::new() };
    let mut points: Vec<OrbitPoint> = Vec::new();
    let mut members: Vec<Vec<usize>> = Vec::new();
    let mut elements: Vec<ElementRecord> = Vec::new();
    let mut last_letter: Vec<Option<usize>> = Vec::new();

    let d0 = distance(base, z_prime);
    points.push(OrbitPoint { point: z_prime.clone(), distance: d0, word_length: 0, multiplicity: 1 });
    members.push(vec![0]);
    index.insert(z_prime, 0);
    elements.push(ElementRecord { element: Isometry::identity(spec.n), distance: d0, word_length: 0, point: 0 });
    last_letter.push(None);

    let mut frontier: Vec<usize> = if d0 <= limit { vec![0] } else { Vec::new() };
    let mut words_expanded = 0;
    let mut pruned = 0;
    let mut truncated = false;
    let mut level = 0;
    while !frontier.is_empty() && !letters.is_empty() {
        let children: Vec<Result<Vec<Candidate>>> = frontier
            .par_iter()
            .map(|&idx| {
                let parent = &elements[idx];
                let skip = last_letter[idx].and_then(|l| inverse_of[l]);
                let mut out = Vec::with_capacity(letters.len());
                for (k, letter) in letters.iter().enumerate() {
                    if Some(k) == skip {
                        continue;
                    }
                    let element = parent.element.compose(letter);
                    let point = element.apply(z_prime)?;
                    let distance = distance(base, &point);
                    out.push(Candidate { element, point, distance, last_letter: k });
                }
                Ok(out)
            })
            .collect();

        let at_limit = level == spec.max_word_length;
        let mut next = Vec::new();
        for batch in children {
            for c in batch? {
                words_expanded += 1;
                if c.distance > limit {
                    pruned += 1;
                    continue;
                }
                let existing = index.find(&c.point, &points);
                let duplicate = existing.is_some_and(|p| {
                    members[p].iter().any(|&e| elements[e].element.projectively_eq(&c.element, ELEMENT_TOL))
                });
                if duplicate {
                    continue;
                }
                if at_limit {
                    truncated = true;
                    break;
                }
                let point_idx = match existing {
                    Some(p) => {
                        points[p].multiplicity += 1;
                        p
                    }
                    None => {
                        points.push(OrbitPoint {
                            point: c.point.clone(),
                            distance: c.distance,
                            word_length: level + 1,
                            multiplicity: 1,
                        });
                        members.push(Vec::new());
                        index.insert(&c.point, points.len() - 1);
                        points.len() - 1
                    }
                };
                let e_idx = elements.len();
                members[point_idx].push(e_idx);
                elements.push(ElementRecord {
                    element: c.element,
                    distance: c.distance,
                    word_length: level + 1,
                    point: point_idx,
                });
                last_letter.push(Some(c.last_letter));
                next.push(e_idx);
            }
            if truncated {
                break;
            }
        }
        if at_limit {
            if truncated {
                log::warn!("orbit search truncated at word length {}", spec.max_word_length);
            }
            break;
        }
        frontier = next;
        level += 1;
    }
    Ok(Orbit { radius_bound, prune_margin, elements, points, words_expanded, pruned, truncated })
}

/// `N(T, z, z') = #{γ ∈ Γ : d(z, γ z') < T}`.
pub fn count_lattice_points(spec: &GroupSpec, z: &BallPoint, z_prime: &BallPoint, t: f64) -> Result<CountResult> {
    if !(t > 0.0) {
        return Err(Error::Domain(format!("T must be positive, got {t}")));
    }
    enumerate_orbit(spec, z, z_prime, t)?.count(t)
}
