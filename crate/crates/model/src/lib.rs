//! Desk-scale verification kit for a linear self-similar collapse model.
//!
//! The model describes the angular profile of a swirl-free axisymmetric flow
//! whose scale factor J(t) obeys the scalar clock law
//!
//! ```text
//!     dJ/dt = (1/2) J * W_m(J),        J(0) = 1,
//! ```
//!
//! where the model strain `W_m` splits into a radial moment of the envelope
//! `(1+s^2)^{-gamma/2}` and an angular moment of the drifted profile
//! `Theta_J`. Everything downstream of that law is controlled by a small set
//! of constants:
//!
//! * `C_W*` — the angular strain constant (a Gamma-function ratio),
//! * `C_S*` — the pressure-feedback constant (a spectral integral),
//! * `C_rho^(1)`, `C_rho^(2)` — radial Beta moments,
//! * `B_1` — the first spherical moment of `(tan sigma)^alpha`.
//!
//! The library recomputes each constant at least two independent ways
//! (closed form vs. adaptive quadrature, strain assembly vs. quadratic-form
//! assembly, floating point vs. exact rational arithmetic) and exposes the
//! competition ratio
//!
//! ```text
//!     Phi(alpha) = alpha |C_S*| / (C_W*)^2,
//! ```
//!
//! whose certified bound `Phi <= 6/7` keeps the pressure feedback subordinate
//! to the strain contraction for every alpha in (0, 1/3]. The `dynamics`
//! module integrates the clock law and measures the collapse exponent
//! `1/(1-3 alpha)` directly from trajectories.
//!
//! Module map (bottom of the dependency chain first):
//!
//! * [`specfun`] — log-Gamma, digamma, Beta, Robbins bounds, `B_1`.
//! * [`quad`] — tanh-sinh quadrature on finite intervals.
//! * [`profiles`] — model parameters, cutoff, target/drifted profiles.
//! * [`kernels`] — angular strain kernels and the nodal angle.
//! * [`spectral`] — the Legendre-type eigenbasis and the profile solve.
//! * [`limitfield`] — limiting velocity/strain fields and `Xi_S^lim`.
//! * [`coefficients`] — the constants above plus cross-checks.
//! * [`exact`] — `BigRational` re-derivation and the certificate.
//! * [`dynamics`] — clock integration, collapse-time quadrature, rate fits.

pub mod coefficients;
pub mod dynamics;
pub mod exact;
pub mod kernels;
pub mod limitfield;
pub mod profiles;
pub mod quad;
pub mod specfun;
pub mod spectral;
