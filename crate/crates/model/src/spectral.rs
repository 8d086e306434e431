//! The Legendre-type eigenbasis and the linearized profile solve.
//!
//! The angular operator `L = -d^2/dsigma^2 - cot(sigma) d/dsigma +
//! 1/sin^2(sigma)` acting on odd profiles with `f(0) = 0`, `f'(pi/2) = 0`
//! has eigenfunctions `phi_n` (order-1 associated Legendre in `x =
//! cos(sigma)`, odd `n`) with eigenvalues `mu_n = n(n+1)`. The self-similar
//! profile solves `(L - lambda) f = h` with `h = (tan sigma)^alpha` and
//! `lambda = (alpha+2)(alpha+3)`, which stays in the spectral gap
//! `(mu_1, mu_3) = (2, 12)` for every `alpha` in `(0, 1/3]`, so the Galerkin
//! coefficients are simply
//!
//! ```text
//!     a_n = <h, phi_n> / ((mu_n - lambda) ||phi_n||^2).
//! ```
//!
//! Basis convention: `phi_1 = sin`, `phi_3 = (5x^2-1) sin`,
//! `phi_5 = (21x^4-14x^2+1) sin`, and in general the polynomial part is
//! normalized to `(-1)^((n-1)/2)` at the equator `x = 0`, which makes every
//! formula convention-explicit. Since `phi_n / sin = P_n'(x)` up to that
//! scale, the whole basis (values and x-derivatives) comes out of the plain
//! Legendre-derivative recurrence; no square roots appear until the final
//! `sin(sigma)` factor, and `f cot(sigma) = x * (poly part sum)` needs no
//! cancellation-prone division near the pole.

use serde::{Deserialize, Serialize};

use crate::quad::{integrate, QuadError};

#[derive(Debug, thiserror::Error)]
pub enum SpectralError {
    #[error("resonant mode n = {n}: |mu_n - lambda| = {gap:.3e} below threshold")]
    Resonance { n: u32, gap: f64 },
    #[error(transparent)]
    Quad(#[from] QuadError),
}

/// Eigenvalue `mu_n = n(n+1)` of the angular operator.
///
/// # Panics
/// If `n` is even or zero; even modes have the wrong parity for odd data.
pub fn eigenvalue_mu(n: u32) -> f64 {
    assert!(n % 2 == 1, "eigenvalue_mu: mode index must be odd, got {n}");
    (n as f64) * (n as f64 + 1.0)
}

/// Spectral shift `lambda(alpha) = (alpha + 2)(alpha + 3)`.
pub fn lambda_alpha(alpha: f64) -> f64 {
    (alpha + 2.0) * (alpha + 3.0)
}

/// Walk the normalized polynomial parts `q_n(x) = phi_n / sin(sigma)` for
/// odd `n <= n_max`, emitting `(n, q_n(x), q_n'(x))`.
///
/// Uses `P'_n` via the derivative of the Legendre three-term recurrence,
/// normalized on the fly by `|P'_n(0)| = n!!/(n-1)!!` (tracked through the
/// ratio `n/(n-1)` at each odd step). Values and derivatives advance
/// together so one pass serves `f`, `f'`, and `f cot` evaluation.
pub(crate) fn for_each_mode<F: FnMut(u32, f64, f64)>(n_max: u32, x: f64, mut emit: F) {
    assert!(n_max % 2 == 1, "for_each_mode: n_max must be odd");
    // (value, d/dx) of Q_n = P_n' at n-1 and n; start at n = 1.
    let mut prev = (0.0_f64, 0.0_f64);
    let mut cur = (1.0_f64, 0.0_f64);
    let mut z = 1.0; // |Q_n(0)| at the current odd n
    let mut n: u32 = 1;
    loop {
        emit(n, cur.0 / z, cur.1 / z);
        if n + 2 > n_max {
            return;
        }
        for _ in 0..2 {
            let k = n as f64;
            let next = (
                ((2.0 * k + 1.0) * x * cur.0 - (k + 1.0) * prev.0) / k,
                ((2.0 * k + 1.0) * (cur.0 + x * cur.1) - (k + 1.0) * prev.1) / k,
            );
            prev = cur;
            cur = next;
            n += 1;
        }
        z *= n as f64 / (n as f64 - 1.0);
    }
}

/// Eigenfunction `phi_n` as a function of `x = cos(sigma)`, `x` in [0, 1].
/// The first three modes use their explicit closed forms; higher modes come
/// from the recurrence.
pub fn phi_n(n: u32, x: f64) -> f64 {
    assert!(n % 2 == 1, "phi_n: mode index must be odd, got {n}");
    assert!((0.0..=1.0).contains(&x), "phi_n: x must be in [0,1], got {x}");
    let s = ((1.0 - x) * (1.0 + x)).sqrt();
    match n {
        1 => s,
        3 => (5.0 * x * x - 1.0) * s,
        5 => {
            let x2 = x * x;
            (21.0 * x2 * x2 - 14.0 * x2 + 1.0) * s
        }
        _ => {
            let mut q = 0.0;
            for_each_mode(n, x, |m, v, _| {
                if m == n {
                    q = v;
                }
            });
            q * s
        }
    }
}

/// `||phi_n||^2` on the quarter-meridian with the flat measure in `x`:
/// `n(n+1) / ((2n+1) P_n'(0)^2)`; equals 2/3, 16/21, 128/165 for n = 1,3,5.
pub fn norm_sq_phi(n: u32) -> f64 {
    assert!(n % 2 == 1, "norm_sq_phi: mode index must be odd, got {n}");
    let mut z = 1.0;
    let mut m = 1;
    while m < n {
        m += 2;
        z *= m as f64 / (m as f64 - 1.0);
    }
    let nf = n as f64;
    nf * (nf + 1.0) / ((2.0 * nf + 1.0) * z * z)
}

/// Inner product `<h, phi_n>` with `h = (tan sigma)^alpha`, evaluated in
/// `x = cos(sigma)`:
///
/// ```text
///     int_0^1 x^(-alpha) (1 - x^2)^((alpha+1)/2) q_n(x) dx
/// ```
///
/// (the only singular factor sits at `x = 0`, where tanh-sinh offsets are
/// exact). Requires `alpha` in `[0, 1/2)` for integrability.
pub fn inner_h_phi(n: u32, alpha: f64, tol: f64) -> Result<f64, QuadError> {
    assert!(n % 2 == 1, "inner_h_phi: mode index must be odd, got {n}");
    assert!(
        (0.0..0.5).contains(&alpha),
        "inner_h_phi: need 0 <= alpha < 1/2, got {alpha}"
    );
    let r = integrate(
        |x: f64| {
            let mut q = 0.0;
            for_each_mode(n, x, |m, v, _| {
                if m == n {
                    q = v;
                }
            });
            x.powf(-alpha) * ((1.0 - x) * (1.0 + x)).powf(0.5 * (alpha + 1.0)) * q
        },
        0.0,
        1.0,
        tol,
    )?;
    Ok(r.value)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Mode {
    pub n: u32,
    pub a_n: f64,
}

/// Galerkin solution of `(L - lambda) f = h` in the first `n_modes` odd
/// modes, together with the Parseval bookkeeping needed for tail bounds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralSolution {
    pub alpha: f64,
    pub lambda: f64,
    pub modes: Vec<Mode>,
    /// `||h||^2` by quadrature of `(tan sigma)^(2 alpha) sin(sigma)`.
    pub h_norm_sq: f64,
    /// `||h||^2` minus the retained Parseval sum; the squared norm of the
    /// component of `h` orthogonal to the retained modes. Tiny negative
    /// values (roundoff) are preserved rather than clamped.
    pub tail_norm_sq: f64,
}

/// Solve for the profile coefficients. For `alpha` in (0, 1) the shift
/// `lambda = (alpha+2)(alpha+3)` sits strictly between `mu_1 = 2` and
/// `mu_3 = 12`, so no mode is resonant; `n_modes >= 2` retains at least
/// `phi_1, phi_3`.
pub fn solve_f(alpha: f64, n_modes: usize, tol: f64) -> Result<SpectralSolution, SpectralError> {
    assert!(
        alpha > 0.0 && alpha < 1.0,
        "solve_f: need alpha in (0, 1), got {alpha}"
    );
    assert!(n_modes >= 2, "solve_f: need at least two modes");
    let lambda = lambda_alpha(alpha);
    let mut modes = Vec::with_capacity(n_modes);
    let mut parseval = 0.0;
    for k in 0..n_modes {
        let n = 2 * k as u32 + 1;
        let mu = eigenvalue_mu(n);
        let gap = mu - lambda;
        if gap.abs() < 1e-9 {
            return Err(SpectralError::Resonance { n, gap: gap.abs() });
        }
        let inner = inner_h_phi(n, alpha, tol)?;
        let nsq = norm_sq_phi(n);
        modes.push(Mode {
            n,
            a_n: inner / (gap * nsq),
        });
        parseval += inner * inner / nsq;
    }
    let h_norm_sq = integrate(
        |x: f64| x.powf(-2.0 * alpha) * ((1.0 - x) * (1.0 + x)).powf(alpha),
        0.0,
        1.0,
        tol,
    )
    .map_err(SpectralError::Quad)?
    .value;
    Ok(SpectralSolution {
        alpha,
        lambda,
        modes,
        h_norm_sq,
        tail_norm_sq: h_norm_sq - parseval,
    })
}

impl SpectralSolution {
    fn n_max(&self) -> u32 {
        self.modes.last().expect("at least two modes").n
    }

    /// `sum a_n q_n(x)` and its x-derivative in one recurrence sweep; the
    /// raw material for `f`, `f'`, `f cot` in either the sigma or the x
    /// variable.
    pub(crate) fn poly_sums(&self, x: f64) -> (f64, f64) {
        let mut poly = 0.0;
        let mut deriv = 0.0;
        let mut idx = 0;
        for_each_mode(self.n_max(), x, |n, qv, qd| {
            debug_assert_eq!(self.modes[idx].n, n);
            let a = self.modes[idx].a_n;
            poly += a * qv;
            deriv += a * qd;
            idx += 1;
        });
        (poly, deriv)
    }

    /// Returns `(f, f', f cot sigma)` at the angle `sigma`.
    pub fn eval_all(&self, sigma: f64) -> (f64, f64, f64) {
        assert!(
            (0.0..=std::f64::consts::FRAC_PI_2 * (1.0 + 1e-12)).contains(&sigma),
            "eval: sigma must be in [0, pi/2], got {sigma}"
        );
        let (s, x) = sigma.sin_cos();
        let (poly, deriv) = self.poly_sums(x);
        // f = sin * poly;  f' = x poly - (1-x^2) poly';  f cot = x poly
        (s * poly, x * poly - s * s * deriv, x * poly)
    }
}

/// Profile value `f(sigma)`.
pub fn eval_f(sol: &SpectralSolution, sigma: f64) -> f64 {
    sol.eval_all(sigma).0
}

/// Profile slope `f'(sigma)`, computed from the polynomial parts (no finite
/// differencing anywhere).
pub fn eval_f_prime(sol: &SpectralSolution, sigma: f64) -> f64 {
    sol.eval_all(sigma).1
}

/// `f(sigma) cot(sigma) = x * sum a_n q_n(x)`: exact cancellation of the
/// pole, stable arbitrarily close to sigma = 0.
pub fn eval_f_cot(sol: &SpectralSolution, sigma: f64) -> f64 {
    sol.eval_all(sigma).2
}

/// Rigorous tail envelopes from the Parseval deficit: with `m` the first
/// omitted odd index and `g = mu_m - lambda` the gap,
///
/// ```text
///     (l2, energy) = ( ||h_perp|| / g,  sqrt(mu_m) ||h_perp|| / g )
/// ```
///
/// so `energy / l2 = sqrt(mu_m)` (sqrt(30) when only phi_1, phi_3 are kept).
pub fn tail_energy(sol: &SpectralSolution) -> (f64, f64) {
    let m = sol.n_max() + 2;
    let gap = eigenvalue_mu(m) - sol.lambda;
    let h_perp = sol.tail_norm_sq.max(0.0).sqrt();
    (h_perp / gap, eigenvalue_mu(m).sqrt() * h_perp / gap)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::b1;
    use std::f64::consts::{FRAC_PI_2, PI};

    const TOL: f64 = 1e-11;

    #[test]
    fn eigenvalues_and_gap() {
        assert_eq!(eigenvalue_mu(1), 2.0);
        assert_eq!(eigenvalue_mu(3), 12.0);
        assert_eq!(eigenvalue_mu(5), 30.0);
        for i in 1..=100 {
            let a = i as f64 / 300.0;
            let l = lambda_alpha(a);
            assert!(l > 2.0 && l < 12.0, "lambda({a}) = {l} left the gap");
        }
        assert!((lambda_alpha(1.0 / 3.0) - 70.0 / 9.0).abs() < 1e-14);
    }

    #[test]
    #[should_panic(expected = "must be odd")]
    fn even_mode_rejected() {
        eigenvalue_mu(4);
    }

    #[test]
    fn explicit_low_modes_match_recurrence() {
        // phi_7 via the recurrence against its explicit polynomial
        // (429 x^6 - 495 x^4 + 135 x^2 - 5)/5 * sin.
        for i in 0..=20 {
            let x = i as f64 / 20.0;
            let s = ((1.0 - x) * (1.0 + x)).sqrt();
            let x2 = x * x;
            let want7 = (429.0 * x2 * x2 * x2 - 495.0 * x2 * x2 + 135.0 * x2 - 5.0) / 5.0 * s;
            assert!((phi_n(7, x) - want7).abs() < 1e-12, "phi_7({x})");
            // explicit branches vs one recurrence sweep
            let mut from_rec = [0.0; 3];
            for_each_mode(5, x, |n, v, _| from_rec[(n / 2) as usize] = v * s);
            assert!((from_rec[0] - phi_n(1, x)).abs() < 1e-14);
            assert!((from_rec[1] - phi_n(3, x)).abs() < 1e-13);
            assert!((from_rec[2] - phi_n(5, x)).abs() < 1e-13);
        }
        // equator normalization pattern +1, -1, +1, -1
        assert!((phi_n(1, 0.0) - 1.0).abs() < 1e-15);
        assert!((phi_n(3, 0.0) + 1.0).abs() < 1e-15);
        assert!((phi_n(5, 0.0) - 1.0).abs() < 1e-15);
        assert!((phi_n(7, 0.0) + 1.0).abs() < 1e-15);
    }

    #[test]
    fn norms_closed_and_quadrature() {
        assert!((norm_sq_phi(1) - 2.0 / 3.0).abs() < 1e-15);
        assert!((norm_sq_phi(3) - 16.0 / 21.0).abs() < 1e-15);
        // n = 5 against direct quadrature of the table polynomial
        let q = integrate(|x| phi_n(5, x).powi(2), 0.0, 1.0, TOL).unwrap();
        assert!((norm_sq_phi(5) - 128.0 / 165.0).abs() < 1e-14);
        assert!(
            (q.value - 128.0 / 165.0).abs() < 1e-10,
            "quadrature norm {} vs 128/165",
            q.value
        );
        println!("||phi_5||^2 = {} (128/165 = {})", q.value, 128.0 / 165.0);
    }

    #[test]
    fn basis_orthogonality() {
        let odd = [1u32, 3, 5, 7, 9];
        for (i, &m) in odd.iter().enumerate() {
            for &n in &odd[i + 1..] {
                let r = integrate(|x| phi_n(m, x) * phi_n(n, x), 0.0, 1.0, TOL).unwrap();
                assert!(
                    r.value.abs() <= 1e-10,
                    "<phi_{m}, phi_{n}> = {} not zero",
                    r.value
                );
            }
        }
    }

    #[test]
    fn inner_products_match_closed_forms() {
        // <h, phi_1> = B1/2 and <h, phi_3> = (1 - 5 alpha) B1 / 8.
        for i in 0..10 {
            let a = 0.03 + 0.3 * i as f64 / 9.0; // (0, 1/3]
            let b = b1(a);
            let i1 = inner_h_phi(1, a, TOL).unwrap();
            let i3 = inner_h_phi(3, a, TOL).unwrap();
            assert!(
                ((i1 - b / 2.0) / (b / 2.0)).abs() < 1e-9,
                "<h,phi_1> at alpha = {a}: {i1} vs {}",
                b / 2.0
            );
            let want3 = (1.0 - 5.0 * a) * b / 8.0;
            let denom = want3.abs().max(1e-3);
            assert!(
                ((i3 - want3) / denom).abs() < 1e-9,
                "<h,phi_3> at alpha = {a}: {i3} vs {want3}"
            );
        }
        // alpha = 0 sanity: <1, phi_1> = pi/4
        let i10 = inner_h_phi(1, 0.0, TOL).unwrap();
        assert!((i10 - PI / 4.0).abs() < 1e-10, "got {i10}");
    }

    #[test]
    fn a3_changes_sign_at_one_fifth() {
        let lo = solve_f(0.19, 4, TOL).unwrap();
        let hi = solve_f(0.21, 4, TOL).unwrap();
        let at = solve_f(0.20, 4, TOL).unwrap();
        // mu_3 - lambda = (1-alpha)(alpha+6) > 0 here, so a_3 follows the
        // inner product's sign flip
        assert!(lo.modes[1].a_n > 0.0);
        assert!(hi.modes[1].a_n < 0.0);
        assert!(at.modes[1].a_n.abs() < 1e-9 * b1(0.2));
        println!(
            "a_3: {:+.3e} / {:+.3e} / {:+.3e} across alpha = 1/5",
            lo.modes[1].a_n, at.modes[1].a_n, hi.modes[1].a_n
        );
    }

    #[test]
    fn normalized_coefficients_at_third() {
        // a_1/B1 = -27/208 and a_3/B1 = -63/2432 exactly at alpha = 1/3.
        let sol = solve_f(1.0 / 3.0, 2, TOL).unwrap();
        let b = b1(1.0 / 3.0);
        let a1 = sol.modes[0].a_n / b;
        let a3 = sol.modes[1].a_n / b;
        assert!(((a1 + 27.0 / 208.0) / (27.0 / 208.0)).abs() < 1e-8, "a1/B1 = {a1}");
        assert!(((a3 + 63.0 / 2432.0) / (63.0 / 2432.0)).abs() < 1e-8, "a3/B1 = {a3}");
        // and the alpha -> 0 limits -3/16, +7/256 are approached continuously
        let sol0 = solve_f(1e-3, 2, TOL).unwrap();
        let b0 = b1(1e-3);
        assert!((sol0.modes[0].a_n / b0 + 3.0 / 16.0).abs() < 1e-3);
        assert!((sol0.modes[1].a_n / b0 - 7.0 / 256.0).abs() < 1e-3);
    }

    #[test]
    fn galerkin_residual_equals_parseval_tail() {
        let alpha = 0.25;
        for n_modes in [2usize, 4, 8] {
            let sol = solve_f(alpha, n_modes, TOL).unwrap();
            // ||h - sum <h,phi> phi / ||phi||^2 ||^2 by direct quadrature
            let coeffs: Vec<(u32, f64)> = (0..n_modes)
                .map(|k| {
                    let n = 2 * k as u32 + 1;
                    (n, inner_h_phi(n, alpha, TOL).unwrap() / norm_sq_phi(n))
                })
                .collect();
            let res = integrate(
                |x: f64| {
                    let h = x.powf(-alpha) * ((1.0 - x) * (1.0 + x)).powf(0.5 * alpha);
                    let mut proj = 0.0;
                    let s = ((1.0 - x) * (1.0 + x)).sqrt();
                    for_each_mode(2 * n_modes as u32 - 1, x, |n, v, _| {
                        if let Some(&(_, c)) = coeffs.iter().find(|&&(m, _)| m == n) {
                            proj += c * v * s;
                        }
                    });
                    let r = h - proj;
                    r * r
                },
                0.0,
                1.0,
                TOL,
            )
            .unwrap();
            assert!(
                (res.value - sol.tail_norm_sq).abs() < 1e-8,
                "N = {n_modes}: residual {} vs tail {}",
                res.value,
                sol.tail_norm_sq
            );
        }
        // tail decreases as modes are added
        let t: Vec<f64> = [2usize, 4, 8, 16]
            .iter()
            .map(|&n| solve_f(alpha, n, TOL).unwrap().tail_norm_sq)
            .collect();
        println!("Parseval tails: {t:?}");
        for w in t.windows(2) {
            assert!(w[1] < w[0] + 1e-12, "tail not decreasing: {w:?}");
        }
        assert!(t[3] >= -1e-10);
    }

    #[test]
    fn tail_energy_ratio_is_sqrt_mu() {
        let sol = solve_f(1.0 / 3.0, 2, TOL).unwrap();
        let (l2, en) = tail_energy(&sol);
        assert!(l2 > 0.0 && en > 0.0);
        assert!(((en / l2) - 30.0_f64.sqrt()).abs() < 1e-12);
        // gap at alpha = 1/3 is mu_5 - lambda = 200/9
        assert!((eigenvalue_mu(5) - sol.lambda - 200.0 / 9.0).abs() < 1e-13);
    }

    #[test]
    fn profile_boundary_behavior() {
        let sol = solve_f(0.3, 32, TOL).unwrap();
        // pole condition f(0) = 0, Neumann f'(pi/2) = 0
        assert_eq!(eval_f(&sol, 0.0), 0.0);
        assert!(eval_f_prime(&sol, FRAC_PI_2).abs() < 1e-12);
        // near the pole f ~ sigma f'(0): slope consistency at 1e-8
        let f_tiny = eval_f(&sol, 1e-8);
        let fp_tiny = eval_f_prime(&sol, 1e-8);
        assert!((f_tiny / 1e-8 - fp_tiny).abs() < 1e-6 * fp_tiny.abs());
        // f cot sigma stays finite and equals f/tan to first order
        let fc = eval_f_cot(&sol, 1e-8);
        assert!((fc - fp_tiny).abs() < 1e-6 * fp_tiny.abs(), "fcot {fc} vs f' {fp_tiny}");
    }

    #[test]
    fn derivative_matches_finite_differences() {
        let sol = solve_f(0.25, 16, TOL).unwrap();
        let h = 1e-6;
        let mut sigma = 0.05;
        while sigma < FRAC_PI_2 - 0.05 {
            let fd = (eval_f(&sol, sigma + h) - eval_f(&sol, sigma - h)) / (2.0 * h);
            let an = eval_f_prime(&sol, sigma);
            assert!(
                (fd - an).abs() <= 1e-6 * an.abs().max(1.0),
                "f' mismatch at sigma = {sigma}: {an} vs fd {fd}"
            );
            sigma += 0.08;
        }
    }

    #[test]
    fn reconstruction_is_convention_independent() {
        // Rescaling every basis function by an arbitrary nonzero constant
        // leaves f = sum <h,phi>/((mu-lambda)||phi||^2) phi untouched.
        let alpha = 0.3;
        let n_modes = 6usize;
        let sol = solve_f(alpha, n_modes, TOL).unwrap();
        let scales = [2.7, -0.4, 11.0, -3.3, 0.08, 5.0];
        for i in 0..20 {
            let sigma = 0.07 + (FRAC_PI_2 - 0.1) * i as f64 / 19.0;
            let mut f_scaled = 0.0;
            let (s, x) = sigma.sin_cos();
            for_each_mode(2 * n_modes as u32 - 1, x, |n, v, _| {
                let k = (n / 2) as usize;
                let c = scales[k];
                let phi_scaled = c * v * s;
                let inner_scaled = c * inner_h_phi(n, alpha, TOL).unwrap();
                let norm_scaled = c * c * norm_sq_phi(n);
                f_scaled += inner_scaled / ((eigenvalue_mu(n) - sol.lambda) * norm_scaled)
                    * phi_scaled;
            });
            let f_ref = eval_f(&sol, sigma);
            assert!(
                (f_scaled - f_ref).abs() <= 1e-9 * f_ref.abs().max(1e-3),
                "sigma = {sigma}: {f_scaled} vs {f_ref}"
            );
        }
    }

    #[test]
    fn solution_serializes_with_stable_keys() {
        let sol = solve_f(0.25, 3, TOL).unwrap();
        let js = serde_json::to_string(&sol).unwrap();
        for key in ["\"alpha\"", "\"lambda\"", "\"modes\"", "\"n\"", "\"a_n\"", "\"h_norm_sq\"", "\"tail_norm_sq\""] {
            assert!(js.contains(key), "missing {key} in {js}");
        }
        let back: SpectralSolution = serde_json::from_str(&js).unwrap();
        assert_eq!(back, sol);
    }
}
