//! The smoothed count `I(T, z, z', α) = Σ_γ ∫_{d(γx, z') < T} h(x) dμ(x)`,
//! by direct overlap integrals and by the wave equation.
//!
//! Since `h` is a probability density supported in `B(z, α)`,
//! `N(T - α) ≤ I(T) ≤ N(T + α)`.

mod bump;
mod direct;
pub(crate) mod kernel;
mod sphere;
mod wave;

pub use bump::{bump_normalization, bump_value, BumpProfile, CapProfile, MAX_ALPHA};
pub use direct::{
    averaged_count_direct, averaged_count_from_orbit, ball_overlap_mass, overlap_mass_at_distance, AverageResult,
    OVERLAP_TOL,
};
pub use kernel::{
    kernel_constant, kernel_k_closed, kernel_k_closed_scaled, kernel_k_defining, KernelScheme, KERNEL_EDGE,
    MAX_KERNEL_DIM,
};
pub use wave::{
    averaged_count_wave, averaged_count_wave_from_orbit, wave_average_single, wave_route_constant,
    wave_route_constant_printed, wave_solution, InitialData, WaveConfig, WaveValue,
};
