//! Lattice point counting in complex hyperbolic space.
//!
//! The crate computes the number `N(T, z, z')` of orbit points of a discrete
//! group of isometries of the complex hyperbolic ball `CHⁿ` inside a geodesic
//! ball of radius `T`, its local average over a bump function, the same
//! average through the explicit solution of the wave equation, and the
//! discrete-spectrum main term of the counting asymptotics.
//!
//! Modules, bottom up:
//!
//! * [`hypgeo`]: complex log-gamma and `₂F₁` with complex parameters.
//! * [`quad`]: adaptive Gauss–Kronrod, endpoint substitutions, ball cubature.
//! * [`chgeom`]: ball model, distance, volume, polar coordinates, `U(n,1)`.
//! * [`lattice`]: orbit enumeration and the counting function.
//! * [`average`]: bump functions, overlap masses, wave kernel and wave route.
//! * [`spectral`]: Jacobi functions, `H_n(λ, T)` and the main term.

pub mod average;
pub mod chgeom;
pub mod error;
pub mod hypgeo;
pub mod lattice;
pub mod numdiff;
pub mod quad;
pub mod spectral;

pub use error::{Error, Result};

// The guide under book/ is compiled as doctests so its snippets stay honest.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/hypergeometric.md")]
    mod hypergeometric {}
    #[doc = include_str!("../../../book/src/geometry.md")]
    mod geometry {}
    #[doc = include_str!("../../../book/src/counting.md")]
    mod counting {}
    #[doc = include_str!("../../../book/src/averaging.md")]
    mod averaging {}
    #[doc = include_str!("../../../book/src/wave.md")]
    mod wave {}
    #[doc = include_str!("../../../book/src/spectral.md")]
    mod spectral {}
}
