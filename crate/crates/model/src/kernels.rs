//! Angular interaction kernels.
//!
//! `K_W(sigma) = 3 sin^2(sigma) cos(sigma)` weights the profile in the strain
//! moment; the axial-pressure kernel carries the angular factor
//! `3 cos^2(sigma) - 1` (its radial `1/(4 pi rho^3)` part is absorbed
//! analytically upstream and never shows up numerically). Both change
//! character at the nodal angle `arccos(1/sqrt(3))`, which is also where the
//! cutoff window of the target profile must sit.

/// Strain-moment kernel `3 sin^2(sigma) cos(sigma)`.
pub fn kernel_kw(sigma: f64) -> f64 {
    let (s, c) = sigma.sin_cos();
    3.0 * s * s * c
}

/// Angular factor of the axial pressure kernel, `3 cos^2(sigma) - 1`.
/// Positive inside the polar cones, negative across the equatorial band,
/// with zero mean against the spherical measure `(1/2) sin(sigma) d sigma`.
pub fn kernel_kzz_angular(sigma: f64) -> f64 {
    let c = sigma.cos();
    3.0 * c * c - 1.0
}

/// The nodal angle `arccos(1/sqrt(3)) = 0.9553166...`: simultaneous zero of
/// `kernel_kzz_angular`, maximizer of `kernel_kw`, and the point the cutoff
/// window `[sigma_cut, sigma_max]` must bracket.
pub fn nodal_angle() -> f64 {
    (1.0 / 3.0_f64.sqrt()).acos()
}
