//! The homogeneous limit velocity, its strain at unit radius, and the
//! angular pressure-source profile, assembled along two independent routes.
//!
//! With `f` the angular potential from [`crate::spectral`], the limit field
//! is `u_rho = rho^(alpha+1) (f' + f cot sigma)`, `u_sigma = -(alpha+3)
//! rho^(alpha+1) f`, no swirl. Every second derivative of `f` has been
//! eliminated through the profile ODE, so the strain entries below are
//! first-order expressions plus the source term `(tan sigma)^alpha`; nothing
//! here differentiates numerically.

use crate::spectral::SpectralSolution;
use std::f64::consts::FRAC_PI_2;

/// `kappa = (alpha + 1)(alpha + 3)`; equals 3 at `alpha = 0`.
pub fn kappa(alpha: f64) -> f64 {
    (alpha + 1.0) * (alpha + 3.0)
}

/// Strain tensor of the limit field at `rho = 1` in spherical components.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StrainHat {
    pub d_rr: f64,
    pub d_ss: f64,
    pub d_tt: f64,
    pub d_rs: f64,
}

impl StrainHat {
    /// Diagonal sum; identically zero by incompressibility, kept as a
    /// runtime diagnostic.
    pub fn trace(&self) -> f64 {
        self.d_rr + self.d_ss + self.d_tt
    }
}

/// Velocity components `(u_rho, u_sigma)` of the homogeneous limit field.
pub fn u_lim_components(rho: f64, sigma: f64, sol: &SpectralSolution) -> (f64, f64) {
    assert!(rho > 0.0, "u_lim_components: rho must be positive, got {rho}");
    assert!(
        (1e-8..=FRAC_PI_2).contains(&sigma),
        "u_lim_components: sigma must be in [1e-8, pi/2], got {sigma}"
    );
    let (f, fp, fc) = sol.eval_all(sigma);
    let amp = rho.powf(sol.alpha + 1.0);
    (amp * (fp + fc), -(sol.alpha + 3.0) * amp * f)
}

/// Strain entries at `rho = 1`:
///
/// ```text
///     d_rr = (alpha+1)(f' + f cot),   d_ss = f cot - (alpha+2) f',
///     d_tt = f' - (alpha+2) f cot,    d_rs = -kappa f - (tan sigma)^alpha / 2.
/// ```
pub fn strain_hat(sigma: f64, sol: &SpectralSolution) -> StrainHat {
    assert!(
        sigma > 0.0 && sigma < FRAC_PI_2,
        "strain_hat: sigma must be in (0, pi/2), got {sigma}"
    );
    let a = sol.alpha;
    let (f, fp, fc) = sol.eval_all(sigma);
    StrainHat {
        d_rr: (a + 1.0) * (fp + fc),
        d_ss: fc - (a + 2.0) * fp,
        d_tt: fp - (a + 2.0) * fc,
        d_rs: -kappa(a) * f - 0.5 * sigma.tan().powf(a),
    }
}

/// Pressure-source profile assembled from the strain tensor:
/// `sum of squared diagonal entries + 2 d_rs^2 - (tan sigma)^(2 alpha)/2`
/// (the last term removes the vorticity contribution).
pub fn xi_s_lim(sigma: f64, sol: &SpectralSolution) -> f64 {
    let s = strain_hat(sigma, sol);
    let t = sigma.tan().powf(sol.alpha);
    s.d_rr * s.d_rr + s.d_ss * s.d_ss + s.d_tt * s.d_tt + 2.0 * s.d_rs * s.d_rs - 0.5 * t * t
}

/// The same profile after the exact cancellation of the `(tan)^(2 alpha)`
/// terms: `Q(f, f') + 2 kappa f (tan sigma)^alpha` with
///
/// ```text
///     Q = 2(alpha^2+3alpha+3)((f')^2 + f^2 cot^2)
///       + 2(alpha^2-3) f f' cot + 2 kappa^2 f^2.
/// ```
///
/// This route has the weaker endpoint growth and is the one the coefficient
/// quadratures consume; agreement with [`xi_s_lim`] is a library invariant.
pub fn xi_s_lim_reduced(sigma: f64, sol: &SpectralSolution) -> f64 {
    assert!(
        sigma > 0.0 && sigma < FRAC_PI_2,
        "xi_s_lim_reduced: sigma must be in (0, pi/2), got {sigma}"
    );
    let a = sol.alpha;
    let (f, fp, fc) = sol.eval_all(sigma);
    let k = kappa(a);
    let q = 2.0 * (a * a + 3.0 * a + 3.0) * (fp * fp + fc * fc)
        + 2.0 * (a * a - 3.0) * fp * fc
        + 2.0 * k * k * f * f;
    q + 2.0 * k * f * sigma.tan().powf(a)
}
