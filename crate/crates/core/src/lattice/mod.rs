//! Orbits of discrete groups acting on `CHⁿ` and the counting function
//! `N(T, z, z') = #{γ ∈ Γ : d(z, γ z') < T}`.
//!
//! `N` counts group elements. When `z'` has a nontrivial stabilizer the
//! orbit point `γ z'` is shared by several elements; [`Orbit::points`] keeps
//! the distinct points with their multiplicity.

mod group;
mod orbit;
pub mod samples;

pub use group::{fuchsian_embed, GroupSpec, DEFAULT_DEDUP_TOL};
pub use orbit::{count_lattice_points, enumerate_orbit, CountResult, ElementRecord, Orbit, OrbitPoint, BOUNDARY_TOL};
