//! Model parameters, the smooth cutoff, and the angular profiles.
//!
//! The target profile is
//!
//! ```text
//!     Theta*(sigma) = (sin sigma)^alpha * Upsilon(sigma),     sigma in [0, pi/2],
//! ```
//!
//! extended odd about the equator, where `Upsilon` is a smoothstep cutoff
//! that is identically 1 below `sigma_cut` and identically 0 above
//! `sigma_max`; the window `[sigma_cut, sigma_max]` must bracket the nodal
//! angle so the kernel maximum is inside the supported region. Transporting
//! `Theta*` along the self-similar drift gives the scale-dependent profile
//!
//! ```text
//!     Theta_J(sigma) = J^(-3 alpha) Theta*(sigma_Lag),
//!     sigma_Lag(sigma, J) = arctan(J^3 tan sigma),
//! ```
//!
//! which converges pointwise (away from the equator) to the self-similar
//! limit `Theta_lim = (tan sigma)^alpha` as `J -> 0` — the mechanism behind
//! every `J -> 0` coefficient limit in this crate.

use serde::{Deserialize, Serialize};
use std::f64::consts::{FRAC_PI_2, PI};

use crate::kernels::nodal_angle;

pub const DEFAULT_SIGMA_CUT: f64 = 0.80;
pub const DEFAULT_SIGMA_MAX: f64 = 1.20;
pub const DEFAULT_QUAD_TOL: f64 = 1e-10;

/// How far gamma must sit above alpha for the radial envelope to have
/// comfortably finite energy-type moments.
pub const FINITE_ENERGY_MARGIN: f64 = 2.5;

#[derive(Debug, thiserror::Error)]
pub enum ParamsError {
    #[error("alpha must lie in (0, 1), got {0}")]
    AlphaRange(f64),
    #[error("gamma must exceed alpha (radial moments diverge), got gamma = {gamma}, alpha = {alpha}")]
    GammaRange { gamma: f64, alpha: f64 },
    #[error("cutoff window must satisfy 0 < sigma_cut < {nodal:.6} < sigma_max < pi/2, got sigma_cut = {sigma_cut}, sigma_max = {sigma_max}")]
    CutoffWindow {
        sigma_cut: f64,
        sigma_max: f64,
        nodal: f64,
    },
    #[error("quad_tol must be positive and tiny, got {0}")]
    QuadTol(f64),
    #[error("config parse error: {0}")]
    Parse(String),
}

/// Parameter block shared by every downstream module.
///
/// Serializes to a flat key-value config (TOML scalars, decimal text) under
/// the keys `alpha`, `gamma`, `Gamma_amp`, `sigma_cut`, `sigma_max`,
/// `quad_tol`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    /// Profile exponent, in (0, 1); the collapse window is (0, 1/3].
    pub alpha: f64,
    /// Radial envelope decay rate, > alpha.
    pub gamma: f64,
    /// Overall amplitude of the initial data.
    #[serde(rename = "Gamma_amp")]
    pub gamma_amp: f64,
    pub sigma_cut: f64,
    pub sigma_max: f64,
    /// Absolute tolerance handed to the quadrature by the integral-valued ops.
    pub quad_tol: f64,
}

impl ModelParams {
    /// Build with the default cutoff window [0.80, 1.20] and quad_tol 1e-10.
    pub fn new(alpha: f64, gamma: f64, gamma_amp: f64) -> Result<Self, ParamsError> {
        let p = ModelParams {
            alpha,
            gamma,
            gamma_amp,
            sigma_cut: DEFAULT_SIGMA_CUT,
            sigma_max: DEFAULT_SIGMA_MAX,
            quad_tol: DEFAULT_QUAD_TOL,
        };
        p.validate()?;
        Ok(p)
    }

    /// Unit amplitude and the conventional gamma = alpha + 2.6 (safely above
    /// the finite-energy margin).
    pub fn default_for_alpha(alpha: f64) -> Result<Self, ParamsError> {
        Self::new(alpha, alpha + 2.6, 1.0)
    }

    pub fn with_angles(mut self, sigma_cut: f64, sigma_max: f64) -> Result<Self, ParamsError> {
        self.sigma_cut = sigma_cut;
        self.sigma_max = sigma_max;
        self.validate()?;
        Ok(self)
    }

    pub fn with_quad_tol(mut self, quad_tol: f64) -> Result<Self, ParamsError> {
        self.quad_tol = quad_tol;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<(), ParamsError> {
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(ParamsError::AlphaRange(self.alpha));
        }
        if !(self.gamma > self.alpha) || !self.gamma.is_finite() {
            return Err(ParamsError::GammaRange {
                gamma: self.gamma,
                alpha: self.alpha,
            });
        }
        if !(self.gamma_amp > 0.0) || !self.gamma_amp.is_finite() {
            return Err(ParamsError::Parse(format!(
                "Gamma_amp must be positive, got {}",
                self.gamma_amp
            )));
        }
        let nodal = nodal_angle();
        if !(self.sigma_cut > 0.0
            && self.sigma_cut < nodal
            && nodal < self.sigma_max
            && self.sigma_max < FRAC_PI_2)
        {
            return Err(ParamsError::CutoffWindow {
                sigma_cut: self.sigma_cut,
                sigma_max: self.sigma_max,
                nodal,
            });
        }
        if !(self.quad_tol > 0.0 && self.quad_tol < 1e-2) {
            return Err(ParamsError::QuadTol(self.quad_tol));
        }
        Ok(())
    }

    /// True when gamma clears alpha by the finite-energy margin 5/2. Callers
    /// that care (the CLI) warn when this is false; it is not an error.
    pub fn finite_energy(&self) -> bool {
        self.gamma > self.alpha + FINITE_ENERGY_MARGIN
    }

    pub fn cutoff(&self) -> CutoffProfile {
        CutoffProfile {
            sigma_cut: self.sigma_cut,
            sigma_max: self.sigma_max,
            kind: Smoothstep::Quintic,
        }
    }

    pub fn to_config_string(&self) -> String {
        // A flat TOML table; infallible for a struct of finite floats.
        toml::to_string(self).expect("ModelParams serializes to flat TOML")
    }

    pub fn from_config_str(s: &str) -> Result<Self, ParamsError> {
        let p: ModelParams = toml::from_str(s).map_err(|e| ParamsError::Parse(e.to_string()))?;
        p.validate()?;
        Ok(p)
    }
}

/// Smoothstep family used for the cutoff. Quintic is the model's choice;
/// the cubic variant exists so tests can demonstrate that the J -> 0
/// coefficient limits do not depend on the cutoff shape.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Smoothstep {
    /// S(u) = 6u^5 - 15u^4 + 10u^3 (C^2 junctions).
    Quintic,
    /// S(u) = 3u^2 - 2u^3 (C^1 junctions).
    Cubic,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CutoffProfile {
    pub sigma_cut: f64,
    pub sigma_max: f64,
    pub kind: Smoothstep,
}

impl CutoffProfile {
    pub fn quintic(sigma_cut: f64, sigma_max: f64) -> Self {
        CutoffProfile {
            sigma_cut,
            sigma_max,
            kind: Smoothstep::Quintic,
        }
    }

    pub fn cubic(sigma_cut: f64, sigma_max: f64) -> Self {
        CutoffProfile {
            sigma_cut,
            sigma_max,
            kind: Smoothstep::Cubic,
        }
    }
}

/// Cutoff factor `Upsilon(sigma)`: 1 below the window, 0 above it, a falling
/// smoothstep inside. Value is always in [0, 1]; the quintic variant has two
/// continuous derivatives at the junctions, the cubic one.
pub fn upsilon(sigma: f64, cutoff: &CutoffProfile) -> f64 {
    if sigma <= cutoff.sigma_cut {
        return 1.0;
    }
    if sigma >= cutoff.sigma_max {
        return 0.0;
    }
    let u = (sigma - cutoff.sigma_cut) / (cutoff.sigma_max - cutoff.sigma_cut);
    let s = match cutoff.kind {
        Smoothstep::Quintic => u * u * u * (10.0 + u * (-15.0 + 6.0 * u)),
        Smoothstep::Cubic => u * u * (3.0 - 2.0 * u),
    };
    1.0 - s
}

fn theta_star_core(sigma: f64, alpha: f64, cutoff: &CutoffProfile) -> f64 {
    sigma.sin().powf(alpha) * upsilon(sigma, cutoff)
}

/// Target profile `Theta*` on [0, pi], odd about the equator by
/// construction: for `sigma > pi/2` this returns the exact negation of the
/// value at the reflected angle `pi - sigma`.
///
/// # Panics
/// If `sigma` is outside [0, pi].
pub fn theta_star(sigma: f64, params: &ModelParams) -> f64 {
    theta_star_with(sigma, params.alpha, &params.cutoff())
}

/// [`theta_star`] with an explicit cutoff profile (cutoff-shape experiments).
pub fn theta_star_with(sigma: f64, alpha: f64, cutoff: &CutoffProfile) -> f64 {
    assert!(
        (0.0..=PI).contains(&sigma),
        "theta_star: sigma must be in [0, pi], got {sigma}"
    );
    if sigma > FRAC_PI_2 {
        -theta_star_core(PI - sigma, alpha, cutoff)
    } else {
        theta_star_core(sigma, alpha, cutoff)
    }
}

/// tan(sigma) through the sine/cosine pair, refusing to evaluate once the
/// cosine's absolute precision is gone.
///
/// # Panics
/// If `sigma` is outside `[0, pi/2 - 1e-12]`.
fn tan_guarded(sigma: f64) -> f64 {
    assert!(
        sigma >= 0.0 && FRAC_PI_2 - sigma > 1e-12,
        "tan blows up: sigma = {sigma} is within 1e-12 of pi/2"
    );
    let (s, c) = sigma.sin_cos();
    s / c
}

/// Lagrangian drift angle `arctan(J^3 tan sigma)`: where the mass now at
/// `sigma` sat when the scale factor was 1.
///
/// # Panics
/// If `sigma` is not in `[0, pi/2)` (guard band 1e-12) or `J` not in (0, 1].
pub fn drift_sigma_lag(sigma: f64, j: f64, _params: &ModelParams) -> f64 {
    assert!(j > 0.0 && j <= 1.0, "drift_sigma_lag: J must be in (0,1], got {j}");
    (j * j * j * tan_guarded(sigma)).atan()
}

/// Drifted profile `Theta_J = J^(-3 alpha) Theta*(sigma_Lag)`.
pub fn theta_j(sigma: f64, j: f64, params: &ModelParams) -> f64 {
    let lag = drift_sigma_lag(sigma, j, params);
    j.powf(-3.0 * params.alpha) * theta_star(lag, params)
}

/// Self-similar limit profile `(tan sigma)^alpha`.
///
/// # Panics
/// Same domain guard as the drift: `[0, pi/2)` with a 1e-12 band.
pub fn theta_lim(sigma: f64, alpha: f64) -> f64 {
    tan_guarded(sigma).powf(alpha)
}

/// Radial envelope `F(s) = (1 + s^2)^(-gamma/2)`.
pub fn radial_envelope(s: f64, gamma: f64) -> f64 {
    (1.0 + s * s).powf(-0.5 * gamma)
}

/// Support edge `Sigma(J) = arctan(J^-3 tan sigma_max)` of the drifted
/// profile; approaches pi/2 like `J^3 cot(sigma_max)`.
pub fn support_angle(j: f64, params: &ModelParams) -> f64 {
    assert!(j > 0.0 && j <= 1.0, "support_angle: J must be in (0,1], got {j}");
    (tan_guarded(params.sigma_max) / (j * j * j)).atan()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params() -> ModelParams {
        ModelParams::default_for_alpha(0.25).unwrap()
    }

    #[test]
    fn upsilon_plateau_window_and_midpoint() {
        let c = params().cutoff();
        assert_eq!(upsilon(0.3, &c), 1.0);
        assert_eq!(upsilon(0.80, &c), 1.0);
        assert_eq!(upsilon(1.20, &c), 0.0);
        assert_eq!(upsilon(1.5, &c), 0.0);
        let mid = 0.5 * (c.sigma_cut + c.sigma_max);
        assert!((upsilon(mid, &c) - 0.5).abs() < 1e-15, "midpoint {}", upsilon(mid, &c));
    }

    #[test]
    fn upsilon_is_c2_at_junctions() {
        // Quintic smoothstep: value, slope and curvature all continuous.
        // One-sided finite differences just inside the window stay at the
        // size the vanishing Taylor coefficients dictate.
        let c = params().cutoff();
        let h = 1e-4;
        let w = c.sigma_max - c.sigma_cut;
        // slope ~ 30 (h/w)^2 / w near sigma_cut
        let slope_in = (upsilon(c.sigma_cut + h, &c) - 1.0) / h;
        assert!(slope_in.abs() < 40.0 * h * h / (w * w * w), "slope {slope_in}");
        let slope_out = upsilon(c.sigma_max - h, &c) / h;
        assert!(slope_out.abs() < 40.0 * h * h / (w * w * w), "slope {slope_out}");
        // range sanity on a dense grid
        let mut s = 0.0;
        while s < 1.6 {
            let v = upsilon(s, &c);
            assert!((0.0..=1.0).contains(&v));
            s += 1e-3;
        }
        // cubic variant: value continuous, slope still vanishing at junctions
        let c3 = CutoffProfile::cubic(c.sigma_cut, c.sigma_max);
        assert_eq!(upsilon(c.sigma_cut, &c3), 1.0);
        assert!((upsilon(c.sigma_cut + h, &c3) - 1.0).abs() < 4.0 * h * h / (w * w));
    }

    #[test]
    fn theta_star_oddness_is_exact() {
        // Pairs are generated from the upper half so the reflection the
        // library computes internally is the identical f64 expression.
        let p = params();
        let mut sigma = FRAC_PI_2 + 1e-3;
        while sigma <= PI {
            let lhs = theta_star(sigma, &p);
            let rhs = -theta_star(PI - sigma, &p);
            assert_eq!(lhs, rhs, "oddness broken at sigma = {sigma}");
            sigma += 0.05;
        }
        assert_eq!(theta_star(PI, &p), 0.0);
        assert_eq!(theta_star(0.0, &p), 0.0);
        // the equator sits above sigma_max, so the profile vanishes there
        assert_eq!(theta_star(FRAC_PI_2, &p), 0.0);
    }

    #[test]
    fn theta_star_range_and_support() {
        let p = params();
        let mut s = 0.0;
        while s <= FRAC_PI_2 {
            let v = theta_star(s, &p);
            assert!((0.0..=1.0).contains(&v), "Theta*({s}) = {v}");
            if s >= p.sigma_max {
                assert_eq!(v, 0.0);
            }
            s += 1e-3;
        }
    }

    #[test]
    fn drift_identity_at_j_one_and_small_j() {
        let p = params();
        // J = 1 is the identity map up to roundoff of tan/atan
        for s in [0.1, 0.7, 1.2, 1.5] {
            assert!((drift_sigma_lag(s, 1.0, &p) - s).abs() < 1e-14);
        }
        // small J: arctan(J^3 tan sigma) ~ J^3 tan sigma
        let lag = drift_sigma_lag(PI / 4.0, 1e-2, &p);
        assert!((lag - 1e-6).abs() < 1e-17, "lag = {lag}");
    }

    #[test]
    fn theta_j_matches_explicit_form() {
        let p = params();
        let a = p.alpha;
        for &j in &[1.0, 0.3, 0.05, 1e-3] {
            for &s in &[0.2, 0.8, 1.1, 1.35] {
                let t = tan_guarded(s);
                let u = j * j * j * t;
                let explicit =
                    t.powf(a) * (1.0 + u * u).powf(-0.5 * a) * upsilon(u.atan(), &p.cutoff());
                let got = theta_j(s, j, &p);
                let denom = explicit.abs().max(1e-300);
                assert!(
                    ((got - explicit) / denom).abs() < 1e-12,
                    "J = {j}, sigma = {s}: {got} vs {explicit}"
                );
            }
        }
    }

    #[test]
    fn drift_penalty_bound() {
        // Theta*(sigma_Lag(sigma, J)) <= (tan sigma*)^alpha J^(3 alpha)
        // uniformly on sigma <= sigma* < pi/2.
        let p = params();
        let sigma_star = 1.4;
        let cap_base = tan_guarded(sigma_star).powf(p.alpha);
        for &j in &[1.0_f64, 0.5, 0.1, 0.01] {
            let cap = cap_base * j.powf(3.0 * p.alpha);
            let mut s = 0.0;
            while s <= sigma_star {
                let v = theta_star(drift_sigma_lag(s, j, &p), &p);
                assert!(
                    v <= cap * (1.0 + 1e-14),
                    "penalty bound fails at sigma = {s}, J = {j}: {v} > {cap}"
                );
                s += 0.02;
            }
        }
    }

    #[test]
    fn theta_j_converges_to_theta_lim() {
        // max over a sigma-grid in [0.01, 1.4] of |Theta_J - Theta_lim|
        // decreases monotonically along J = 1, 0.1, 0.01, 0.001.
        let p = params();
        let mut prev = f64::INFINITY;
        for &j in &[1.0, 0.1, 0.01, 1e-3] {
            let mut worst = 0.0_f64;
            let mut s = 0.01;
            while s <= 1.4 {
                let d = (theta_j(s, j, &p) - theta_lim(s, p.alpha)).abs();
                worst = worst.max(d);
                s += 0.01;
            }
            println!("J = {j:>6}: max |Theta_J - Theta_lim| = {worst:.3e}");
            assert!(worst < prev, "not improving at J = {j}: {worst} vs {prev}");
            prev = worst;
        }
        assert!(prev < 1e-4);
    }

    #[test]
    fn support_angle_approaches_equator_like_j_cubed() {
        let p = params();
        assert!((support_angle(1.0, &p) - p.sigma_max).abs() < 1e-14);
        let j = 1e-3;
        let gap = FRAC_PI_2 - support_angle(j, &p);
        let predicted = j * j * j / tan_guarded(p.sigma_max);
        assert!(
            ((gap - predicted) / predicted).abs() < 1e-4,
            "gap {gap} vs J^3 cot(sigma_max) = {predicted}"
        );
    }

    #[test]
    fn validation_rejects_bad_parameters() {
        assert!(matches!(
            ModelParams::new(0.0, 2.0, 1.0),
            Err(ParamsError::AlphaRange(_))
        ));
        assert!(matches!(
            ModelParams::new(1.2, 3.0, 1.0),
            Err(ParamsError::AlphaRange(_))
        ));
        assert!(matches!(
            ModelParams::new(0.3, 0.2, 1.0),
            Err(ParamsError::GammaRange { .. })
        ));
        assert!(matches!(
            ModelParams::new(0.3, 2.9, 1.0).unwrap().with_angles(0.96, 1.2),
            Err(ParamsError::CutoffWindow { .. })
        ));
        assert!(matches!(
            ModelParams::new(0.3, 2.9, 1.0).unwrap().with_angles(0.8, 1.58),
            Err(ParamsError::CutoffWindow { .. })
        ));
        assert!(matches!(
            ModelParams::new(0.3, 2.9, 1.0).unwrap().with_quad_tol(-1.0),
            Err(ParamsError::QuadTol(_))
        ));
        // gamma barely above alpha is legal but flagged for energy
        let p = ModelParams::new(0.3, 0.5, 1.0).unwrap();
        assert!(!p.finite_energy());
        assert!(params().finite_energy());
    }

    #[test]
    fn config_round_trip_is_exact() {
        let p = ModelParams::new(0.31, 2.71, 1.5)
            .unwrap()
            .with_angles(0.79, 1.21)
            .unwrap()
            .with_quad_tol(3e-11)
            .unwrap();
        let s = p.to_config_string();
        println!("{s}");
        for key in ["alpha", "gamma", "Gamma_amp", "sigma_cut", "sigma_max", "quad_tol"] {
            assert!(s.contains(key), "missing key {key} in config:\n{s}");
        }
        let q = ModelParams::from_config_str(&s).unwrap();
        assert_eq!(p, q, "round trip drifted");
        assert!(ModelParams::from_config_str("alpha = \"x\"").is_err());
    }

    #[test]
    #[should_panic(expected = "within 1e-12 of pi/2")]
    fn theta_lim_rejects_equator() {
        theta_lim(FRAC_PI_2, 0.25);
    }
}
