//! The scalar constants of the strain–pressure competition.
//!
//! Everything the clock dynamics consumes is a number: the depleted strain
//! coefficient `C_W*` and its finite-scale version `C_W(J)`, the pressure
//! coefficient `C_S*` with its two-mode approximation and tail slack, the
//! radial moments `C_rho^(1)`, `C_rho^(2)`, and the derived competition
//! ratios. Each constant has a closed Gamma/Beta form or an exact rational
//! skeleton, and each is recomputed by quadrature; the pairwise agreement is
//! what the test suite certifies.
//!
//! Normalization note: `C_W(J)` carries the depletion factor explicitly,
//!
//! ```text
//!     C_W(J) = (1/2) integral_0^Sigma(J) K_W(sigma) Theta_J(sigma) dsigma,
//! ```
//!
//! and the unscaled drift integral is `I_sigma(J) = 2 J^(3 alpha) C_W(J)`.
//! The two are computed through different integrands here (scaled vs raw
//! target profile) precisely so their relation is a testable statement and
//! not an algebraic tautology.

use serde::{Deserialize, Serialize};

use crate::limitfield::kappa;
use crate::profiles::{support_angle, theta_star_with, upsilon, ModelParams};
use crate::quad::{integrate, QuadError};
use crate::specfun::{b1, beta_fn, log_gamma};
use crate::spectral::{eigenvalue_mu, lambda_alpha, solve_f, SpectralError, SpectralSolution};

/// Mode count that drives every default pressure-coefficient quadrature.
/// Contributions fall off like n^-4; 32 retained modes put the truncation
/// error far below the quadrature tolerance.
pub const DEFAULT_N_MODES: usize = 32;

#[derive(Debug, thiserror::Error)]
pub enum CoeffError {
    #[error("radial moments need gamma > alpha > 0, got alpha = {alpha}, gamma = {gamma}")]
    Domain { alpha: f64, gamma: f64 },
    #[error(transparent)]
    Quad(#[from] QuadError),
    #[error(transparent)]
    Spectral(#[from] SpectralError),
}

/// `C_W* = Gamma((alpha+3)/2) Gamma(1 - alpha/2) / sqrt(pi)`: the depleted
/// strain coefficient. Equals 1/2 at `alpha = 0` and increases strictly.
pub fn cw_star(alpha: f64) -> f64 {
    assert!(
        (0.0..1.0).contains(&alpha),
        "cw_star: need alpha in [0, 1), got {alpha}"
    );
    (log_gamma(0.5 * (alpha + 3.0)) + log_gamma(1.0 - 0.5 * alpha)
        - 0.5 * std::f64::consts::PI.ln())
    .exp()
}

/// Integral form of the same constant,
/// `(3/2) int_0^(pi/2) sin^(alpha+2) cos^(1-alpha)`, for cross-checking.
pub fn cw_star_quad(alpha: f64, tol: f64) -> Result<f64, QuadError> {
    let r = integrate(
        |sigma: f64| {
            let (s, c) = sigma.sin_cos();
            1.5 * s.powf(alpha + 2.0) * c.powf(1.0 - alpha)
        },
        0.0,
        std::f64::consts::FRAC_PI_2,
        tol,
    )?;
    Ok(r.value)
}

/// Finite-scale strain coefficient
/// `C_W(J) = (1/2) int_0^Sigma(J) K_W Theta_J`. The integrand is written in
/// depletion-scaled form,
///
/// ```text
///     3 sin^(2+alpha) cos^(1-alpha) (1+u^2)^(-alpha/2) Upsilon(arctan u),
///     u = J^3 tan(sigma),
/// ```
///
/// which is O(1) uniformly in `J`, so no small-`J` amplification enters the
/// quadrature. Converges to [`cw_star`] as `J -> 0`.
pub fn cw_of_j(j: f64, params: &ModelParams) -> Result<f64, QuadError> {
    assert!(j > 0.0 && j <= 1.0, "cw_of_j: need J in (0,1], got {j}");
    let a = params.alpha;
    let cut = params.cutoff();
    let j3 = j * j * j;
    let r = integrate(
        |sigma: f64| {
            let (s, c) = sigma.sin_cos();
            let u = j3 * s / c;
            3.0 * s.powf(2.0 + a)
                * c.powf(1.0 - a)
                * (1.0 + u * u).powf(-0.5 * a)
                * upsilon(u.atan(), &cut)
        },
        0.0,
        support_angle(j, params),
        params.quad_tol,
    )?;
    Ok(0.5 * r.value)
}

/// Raw drift integral `I_sigma(J) = int_0^Sigma(J) K_W Theta*(sigma_lag)`:
/// the unscaled route, sharing no algebra with [`cw_of_j`] beyond the target
/// profile itself. `I_sigma(J) / J^(3 alpha) -> 2 C_W*`.
pub fn i_sigma(j: f64, params: &ModelParams) -> Result<f64, QuadError> {
    assert!(j > 0.0 && j <= 1.0, "i_sigma: need J in (0,1], got {j}");
    let cut = params.cutoff();
    let j3 = j * j * j;
    let r = integrate(
        |sigma: f64| {
            let (s, c) = sigma.sin_cos();
            let lag = (j3 * s / c).atan();
            3.0 * s * s * c * theta_star_with(lag, params.alpha, &cut)
        },
        0.0,
        support_angle(j, params),
        params.quad_tol,
    )?;
    Ok(r.value)
}

/// Reduced pressure-source profile as a function of `x = cos sigma`; one
/// basis sweep per point, no trigonometric calls.
fn xi_reduced_x(sol: &SpectralSolution, x: f64) -> f64 {
    let a = sol.alpha;
    let s2 = (1.0 - x) * (1.0 + x);
    let s = s2.sqrt();
    let (poly, deriv) = sol.poly_sums(x);
    let f = s * poly;
    let fp = x * poly - s2 * deriv;
    let fc = x * poly;
    let k = kappa(a);
    2.0 * (a * a + 3.0 * a + 3.0) * (fp * fp + fc * fc)
        + 2.0 * (a * a - 3.0) * fp * fc
        + 2.0 * k * k * f * f
        + 2.0 * k * f * (s / x).powf(a)
}

/// Pressure coefficient from an already-solved profile:
/// `C_S* = (1/2) int_0^1 (1 - 3x^2) Xi(x) dx`. The `x = cos sigma`
/// substitution leaves `x^(-alpha)` as the only singular factor, parked at
/// the left endpoint where the quadrature offsets are exact.
pub fn cs_star_from(sol: &SpectralSolution, tol: f64) -> Result<f64, QuadError> {
    let r = integrate(
        |x: f64| 0.5 * (1.0 - 3.0 * x * x) * xi_reduced_x(sol, x),
        0.0,
        1.0,
        tol,
    )?;
    Ok(r.value)
}

/// Pressure coefficient `C_S*(alpha)` with an `n_modes`-term profile.
pub fn cs_star(alpha: f64, n_modes: usize, tol: f64) -> Result<f64, CoeffError> {
    let sol = solve_f(alpha, n_modes, tol)?;
    Ok(cs_star_from(&sol, tol)?)
}

/// The rational prefactor `G(alpha)` of the two-mode pressure coefficient:
///
/// ```text
///     G = (alpha+1)^2/105 [28 A a1^2 - 48 B a1 a3 - 32 C0 a3^2]
///       + kappa [(1+3 alpha)/8 a1 + (-7+4 alpha-5 alpha^2)/16 a3]
/// ```
///
/// with `a1 = -3/(4(alpha+1)(alpha+4))`, `a3 = 21(1-5 alpha)/(128(1-alpha)
/// (alpha+6))`, `A = alpha^2+6 alpha+6`, `B = 2 alpha^2+12 alpha+27`,
/// `C0 = alpha^2+6 alpha+21`. Runs from `35/4096` at zero down through a
/// sign change to `-2255905/17570592` at one third.
pub fn g_of_alpha(alpha: f64) -> f64 {
    assert!(
        (0.0..1.0).contains(&alpha),
        "g_of_alpha: need alpha in [0, 1), got {alpha}"
    );
    let a1 = -3.0 / (4.0 * (alpha + 1.0) * (alpha + 4.0));
    let a3 = 21.0 * (1.0 - 5.0 * alpha) / (128.0 * (1.0 - alpha) * (alpha + 6.0));
    let big_a = alpha * alpha + 6.0 * alpha + 6.0;
    let big_b = 2.0 * alpha * alpha + 12.0 * alpha + 27.0;
    let big_c = alpha * alpha + 6.0 * alpha + 21.0;
    let quad_part = (alpha + 1.0) * (alpha + 1.0) / 105.0
        * (28.0 * big_a * a1 * a1 - 48.0 * big_b * a1 * a3 - 32.0 * big_c * a3 * a3);
    let coupling = kappa(alpha)
        * ((1.0 + 3.0 * alpha) / 8.0 * a1
            + (-7.0 + 4.0 * alpha - 5.0 * alpha * alpha) / 16.0 * a3);
    quad_part + coupling
}

/// Two-mode pressure coefficient `G(alpha) B_1(alpha)^2`.
pub fn cs_two_mode(alpha: f64) -> f64 {
    let b = b1(alpha);
    g_of_alpha(alpha) * b * b
}

/// Rigorous envelope for the spectral tail left out of the two-mode value:
/// `(3/10) B_1^2 / (mu_5 - lambda)`. The empirical Parseval tail runs an
/// order of magnitude below this.
pub fn tail_slack(alpha: f64) -> f64 {
    let b = b1(alpha);
    0.3 * b * b / (eigenvalue_mu(5) - lambda_alpha(alpha))
}

/// Radial moment `C_rho^(k)`: `(1/2) B(alpha/2, (gamma-alpha)/2)` for
/// `k = 1`, `(1/2) B(alpha, gamma-alpha)` for `k = 2`.
pub fn crho(k: u8, alpha: f64, gamma: f64) -> Result<f64, CoeffError> {
    assert!(k == 1 || k == 2, "crho: k must be 1 or 2, got {k}");
    if !(gamma > alpha && alpha > 0.0) {
        return Err(CoeffError::Domain { alpha, gamma });
    }
    Ok(match k {
        1 => 0.5 * beta_fn(0.5 * alpha, 0.5 * (gamma - alpha)),
        _ => 0.5 * beta_fn(alpha, gamma - alpha),
    })
}

/// The same radial moments by quadrature. The half-line integral is folded
/// by `s -> 1/s` onto `[0, 1]`,
///
/// ```text
///     int_0^inf s^(a-1) (1+s^2)^(-g/2) ds
///         = int_0^1 [s^(a-1) + s^(g-a-1)] (1+s^2)^(-g/2) ds,
/// ```
///
/// and then each piece gets its own substitution `u = s^c` (c the exponent
/// plus one), which removes the algebraic factor outright:
///
/// ```text
///     int_0^1 s^(c-1) (1+s^2)^(-g) ds = (1/c) int_0^1 (1+u^(2/c))^(-g) du.
/// ```
///
/// Plain tanh-sinh on the folded form dies for small `alpha`: resolving
/// `s^(alpha-1)` to 1e-10 needs nodes below the subnormal range (and the
/// integrand overflows on the way down). After the substitution the
/// integrand is bounded by 1 for any exponent.
pub fn crho_quad(k: u8, alpha: f64, gamma: f64, tol: f64) -> Result<f64, CoeffError> {
    assert!(k == 1 || k == 2, "crho_quad: k must be 1 or 2, got {k}");
    if !(gamma > alpha && alpha > 0.0) {
        return Err(CoeffError::Domain { alpha, gamma });
    }
    let piece = |c: f64, g: f64| -> Result<f64, QuadError> {
        let r = integrate(|u: f64| (1.0 + u.powf(2.0 / c)).powf(-g), 0.0, 1.0, tol)?;
        Ok(r.value / c)
    };
    let (c1, c2, g) = match k {
        1 => (alpha, gamma - alpha, 0.5 * gamma),
        _ => (2.0 * alpha, 2.0 * (gamma - alpha), gamma),
    };
    Ok(piece(c1, g)? + piece(c2, g)?)
}

/// Every scalar the competition needs, for one `(alpha, gamma)` pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoefficientSet {
    pub alpha: f64,
    pub gamma: f64,
    pub cw_star: f64,
    pub cs_star: f64,
    pub cs_two_mode: f64,
    pub tail_slack: f64,
    pub crho1: f64,
    pub crho2: f64,
    pub r_star: f64,
    pub phi: f64,
}

pub const CSV_HEADER: &str =
    "alpha,gamma,cw_star,cs_star,cs_two_mode,tail_slack,crho1,crho2,r_star,phi";

impl CoefficientSet {
    pub fn compute(params: &ModelParams, n_modes: usize) -> Result<Self, CoeffError> {
        let a = params.alpha;
        let g = params.gamma;
        let cw = cw_star(a);
        let sol = solve_f(a, n_modes, params.quad_tol)?;
        let cs = cs_star_from(&sol, params.quad_tol)?;
        let c1 = crho(1, a, g)?;
        let c2 = crho(2, a, g)?;
        Ok(CoefficientSet {
            alpha: a,
            gamma: g,
            cw_star: cw,
            cs_star: cs,
            cs_two_mode: cs_two_mode(a),
            tail_slack: tail_slack(a),
            crho1: c1,
            crho2: c2,
            r_star: 2.0 * c2 * cs / (c1 * cw * c1 * cw),
            phi: a * cs.abs() / (cw * cw),
        })
    }

    /// One CSV data row, 12 significant digits, matching [`CSV_HEADER`].
    pub fn csv_row(&self) -> String {
        format!(
            "{:.11e},{:.11e},{:.11e},{:.11e},{:.11e},{:.11e},{:.11e},{:.11e},{:.11e},{:.11e}",
            self.alpha,
            self.gamma,
            self.cw_star,
            self.cs_star,
            self.cs_two_mode,
            self.tail_slack,
            self.crho1,
            self.crho2,
            self.r_star,
            self.phi
        )
    }
}

/// Riccati ratio `R* = 2 C_rho^(2) C_S* / (C_rho^(1) C_W*)^2` from an
/// assembled set.
pub fn riccati_ratio(coeffs: &CoefficientSet) -> f64 {
    2.0 * coeffs.crho2 * coeffs.cs_star / (coeffs.crho1 * coeffs.cw_star).powi(2)
}

/// `Phi(alpha) = alpha |C_S*| / (C_W*)^2`: the gamma-uniform envelope of
/// `|R*|`. Stays below 6/7 on (0, 1/3].
pub fn phi_alpha(alpha: f64, n_modes: usize, tol: f64) -> Result<f64, CoeffError> {
    let cs = cs_star(alpha, n_modes, tol)?;
    let cw = cw_star(alpha);
    Ok(alpha * cs.abs() / (cw * cw))
}

/// Leading-order model strain and pressure at clock value `J`:
///
/// ```text
///     w  = -Gamma  C_rho^(1) C_W* J^(3 alpha - 1),
///     pi =  Gamma^2 C_rho^(2) C_S* J^(6 alpha - 2),
/// ```
///
/// so `pi / (w^2/2)` equals the Riccati ratio identically in `J`.
pub fn model_asymptotics(j: f64, coeffs: &CoefficientSet, params: &ModelParams) -> (f64, f64) {
    assert!(j > 0.0 && j <= 1.0, "model_asymptotics: need J in (0,1]");
    let a = coeffs.alpha;
    let g = params.gamma_amp;
    let w = -g * coeffs.crho1 * coeffs.cw_star * j.powf(3.0 * a - 1.0);
    let pi = g * g * coeffs.crho2 * coeffs.cs_star * j.powf(6.0 * a - 2.0);
    (w, pi)
}
