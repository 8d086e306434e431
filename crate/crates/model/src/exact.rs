//! Exact rational certification of the two-mode pressure algebra and the
//! inequality chain behind `sup Phi <= 6/7`.
//!
//! Everything here is arbitrary-precision rational arithmetic — no floats
//! except where a clause explicitly brackets a transcendental constant
//! (`pi`, two Gamma values) by rationals with margins that dwarf binary64
//! rounding. The prefactor `G(alpha)` is evaluated three independent ways:
//!
//! 1. the explicit bracket with the `A`, `B`, `C0` quadratics,
//! 2. term-by-term assembly from the moment integrals
//!    `J_j = 1/(2j+1) - 3/(2j+3)`,
//! 3. the common-denominator form `-15 N(alpha) / (2048 (1-alpha)^2
//!    (alpha+4)^2 (alpha+6)^2)` with the degree-9 integer polynomial `N`.
//!
//! The coefficient list of `N` is entered verbatim *and* re-derived by exact
//! polynomial expansion of `2048 (1-alpha)^2 (alpha+4)^2 (alpha+6)^2
//! G(alpha) / (-15)`; the two lists must agree coefficient by coefficient,
//! which guards against transcription drift in either direction.

use num::{BigRational, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::specfun::robbins_bounds;

/// Exact rational scalar; stays reduced with positive denominator.
pub type Rational = BigRational;

/// `n/d` as an exact rational. Panics if `d = 0`.
pub fn rat(n: i64, d: i64) -> Rational {
    BigRational::new(n.into(), d.into())
}

#[derive(Debug, thiserror::Error)]
pub enum ExactError {
    #[error("pole of the hat coefficients at alpha = {0}")]
    Pole(String),
}

/// Dense univariate polynomial with exact rational coefficients, ascending
/// degree, trailing zeros trimmed.
#[derive(Debug, Clone, PartialEq)]
pub struct RationalPolynomial {
    coeffs: Vec<Rational>,
}

impl RationalPolynomial {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().map_or(false, |c| c.is_zero()) {
            coeffs.pop();
        }
        RationalPolynomial { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| rat(c, 1)).collect())
    }

    pub fn zero() -> Self {
        RationalPolynomial { coeffs: vec![] }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Rational {
        self.coeffs.get(k).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() <= 1 {
            return Self::zero();
        }
        Self::new(
            self.coeffs[1..]
                .iter()
                .enumerate()
                .map(|(i, c)| c * rat(i as i64 + 1, 1))
                .collect(),
        )
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..n).map(|k| self.coeff(k) + other.coeff(k)).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..n).map(|k| self.coeff(k) - other.coeff(k)).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    /// Exact quotient `self / den`; `None` when the division leaves a
    /// remainder.
    pub fn div_exact(&self, den: &Self) -> Option<Self> {
        assert!(!den.is_zero(), "div_exact: zero divisor");
        if self.is_zero() {
            return Some(Self::zero());
        }
        if self.degree() < den.degree() {
            return None;
        }
        let mut rem = self.coeffs.clone();
        let mut quot = vec![Rational::zero(); self.degree() - den.degree() + 1];
        let lead = den.coeffs.last().unwrap();
        for k in (den.degree()..rem.len()).rev() {
            let factor = &rem[k] / lead;
            let shift = k - den.degree();
            quot[shift] = factor.clone();
            for (j, d) in den.coeffs.iter().enumerate() {
                let t = d * &factor;
                rem[shift + j] -= t;
            }
        }
        if rem.iter().all(|c| c.is_zero()) {
            Some(Self::new(quot))
        } else {
            None
        }
    }
}

/// Rational function as a numerator/denominator polynomial pair; no
/// reduction is performed (degrees stay small here).
#[derive(Debug, Clone)]
struct RatFn {
    num: RationalPolynomial,
    den: RationalPolynomial,
}

impl RatFn {
    fn add(&self, o: &RatFn) -> RatFn {
        RatFn {
            num: self.num.mul(&o.den).add(&o.num.mul(&self.den)),
            den: self.den.mul(&o.den),
        }
    }

    fn mul(&self, o: &RatFn) -> RatFn {
        RatFn {
            num: self.num.mul(&o.num),
            den: self.den.mul(&o.den),
        }
    }

    fn mul_poly(&self, p: &RationalPolynomial) -> RatFn {
        RatFn {
            num: self.num.mul(p),
            den: self.den.clone(),
        }
    }

    fn scale(&self, c: &Rational) -> RatFn {
        RatFn {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }
}

/// `hat a_1 = -3 / (4 (alpha+1)(alpha+4))`.
pub fn hat_a1(alpha: &Rational) -> Result<Rational, ExactError> {
    let d = rat(4, 1) * (alpha + rat(1, 1)) * (alpha + rat(4, 1));
    if d.is_zero() {
        return Err(ExactError::Pole(alpha.to_string()));
    }
    Ok(rat(-3, 1) / d)
}

/// `hat a_3 = 21 (1 - 5 alpha) / (128 (1-alpha)(alpha+6))`. Vanishes at
/// `alpha = 1/5`.
pub fn hat_a3(alpha: &Rational) -> Result<Rational, ExactError> {
    let d = rat(128, 1) * (rat(1, 1) - alpha) * (alpha + rat(6, 1));
    if d.is_zero() {
        return Err(ExactError::Pole(alpha.to_string()));
    }
    Ok(rat(21, 1) * (rat(1, 1) - rat(5, 1) * alpha) / d)
}

/// Moment integral `J_j = int_0^1 (1 - 3 x^2) x^(2j) dx = 1/(2j+1) - 3/(2j+3)`.
pub fn j_integral(j: u32) -> Rational {
    rat(1, 2 * j as i64 + 1) - rat(3, 2 * j as i64 + 3)
}

/// Exact `G(alpha)` through the explicit bracket:
///
/// ```text
///     G = (alpha+1)^2/105 [28 A a1^2 - 48 B a1 a3 - 32 C0 a3^2]
///       + kappa [(1+3 alpha)/8 a1 + (-7+4 alpha-5 alpha^2)/16 a3].
/// ```
pub fn g_exact(alpha: &Rational) -> Result<Rational, ExactError> {
    let a1 = hat_a1(alpha)?;
    let a3 = hat_a3(alpha)?;
    let a2 = alpha * alpha;
    let big_a = &a2 + rat(6, 1) * alpha + rat(6, 1);
    let big_b = rat(2, 1) * &a2 + rat(12, 1) * alpha + rat(27, 1);
    let big_c = &a2 + rat(6, 1) * alpha + rat(21, 1);
    let kap = (alpha + rat(1, 1)) * (alpha + rat(3, 1));
    let pref = (alpha + rat(1, 1)) * (alpha + rat(1, 1)) / rat(105, 1);
    let bracket = rat(28, 1) * big_a * &a1 * &a1
        - rat(48, 1) * big_b * &a1 * &a3
        - rat(32, 1) * big_c * &a3 * &a3;
    let coupling = kap
        * ((rat(1, 1) + rat(3, 1) * alpha) / rat(8, 1) * &a1
            + (rat(-7, 1) + rat(4, 1) * alpha - rat(5, 1) * &a2) / rat(16, 1) * &a3);
    Ok(pref * bracket + coupling)
}

/// `G(alpha)` assembled term by term from the moment integrals: expand
/// `x^2 (p^2 + q^2)`, `x^2 p q`, `(1-x^2) q^2` in powers of `x^2` with
/// `q = (a1-a3) + 5 a3 x^2`, `p = (a1-11 a3) + 15 a3 x^2`, and integrate
/// against `(1-3x^2)` via `J_j`. Shares no algebra with [`g_exact`] beyond
/// the hat coefficients themselves.
pub fn g_from_j_integrals(alpha: &Rational) -> Result<Rational, ExactError> {
    let a1 = hat_a1(alpha)?;
    let a3 = hat_a3(alpha)?;
    let a2 = alpha * alpha;
    let c1 = &a2 + rat(3, 1) * alpha + rat(3, 1);
    let c2 = &a2 - rat(3, 1);
    let kap = (alpha + rat(1, 1)) * (alpha + rat(3, 1));

    // p^2, q^2, pq as quadratics in y = x^2
    let p0 = &a1 - rat(11, 1) * &a3;
    let q0 = &a1 - &a3;
    let p_sq = [&p0 * &p0, rat(30, 1) * &a3 * &p0, rat(225, 1) * &a3 * &a3];
    let q_sq = [&q0 * &q0, rat(10, 1) * &a3 * &q0, rat(25, 1) * &a3 * &a3];
    let pq = [
        &p0 * &q0,
        rat(5, 1) * &a3 * &p0 + rat(15, 1) * &a3 * &q0,
        rat(75, 1) * &a3 * &a3,
    ];

    // (1/2) int (1-3x^2) [2 c1 x^2 (p^2+q^2) + 2 c2 x^2 pq + 2 kap^2 (1-x^2) q^2]
    let mut total = Rational::zero();
    for j in 0..3 {
        let jj = j_integral(j as u32 + 1); // x^2 shift
        total += &c1 * (&p_sq[j] + &q_sq[j]) * &jj + &c2 * &pq[j] * &jj;
        total += &kap * &kap * &q_sq[j] * (j_integral(j as u32) - jj);
    }

    // coupling: kappa int (1-3x^2) q(x) h-weight, via the I_k identities
    // I_0 = 1/2, I_1 = (1-alpha)/8, I_2 = (3-alpha)(1-alpha)/48 in B1 units
    let i0 = rat(1, 2);
    let i1 = (rat(1, 1) - alpha) / rat(8, 1);
    let i2 = (rat(3, 1) - alpha) * (rat(1, 1) - alpha) / rat(48, 1);
    let coupling = kap
        * (&a1 * (&i0 - rat(3, 1) * &i1)
            + &a3 * (rat(8, 1) * &i1 - rat(15, 1) * &i2 - &i0));
    Ok(total + coupling)
}

/// Coefficients of `N(alpha)`, ascending degree, entered verbatim:
/// `N = 35 a^9 + 588 a^8 + 3533 a^7 + 9174 a^6 + 10109 a^5 + 5680 a^4
///    + 1587 a^3 + 1614 a^2 + 18528 a - 672`.
pub const N_COEFFS: [i64; 10] = [
    -672, 18528, 1614, 1587, 5680, 10109, 9174, 3533, 588, 35,
];

/// The verbatim `N` polynomial.
pub fn n_polynomial() -> RationalPolynomial {
    RationalPolynomial::from_i64(&N_COEFFS)
}

/// `G` as a symbolic rational function (numerator, denominator pair), built
/// from polynomial arithmetic only.
fn g_ratfn() -> RatFn {
    let a1 = RatFn {
        num: RationalPolynomial::from_i64(&[-3]),
        den: RationalPolynomial::from_i64(&[16, 20, 4]), // 4(a+1)(a+4)
    };
    let a3 = RatFn {
        num: RationalPolynomial::from_i64(&[21, -105]), // 21(1-5a)
        den: RationalPolynomial::from_i64(&[1, -1])
            .mul(&RationalPolynomial::from_i64(&[6, 1]))
            .scale(&rat(128, 1)), // 128(1-a)(a+6)
    };
    let big_a = RationalPolynomial::from_i64(&[6, 6, 1]);
    let big_b = RationalPolynomial::from_i64(&[27, 12, 2]);
    let big_c = RationalPolynomial::from_i64(&[21, 6, 1]);
    let kap = RationalPolynomial::from_i64(&[3, 4, 1]);
    let pref = RationalPolynomial::from_i64(&[1, 2, 1]).scale(&rat(1, 105));

    let bracket = a1
        .mul(&a1)
        .mul_poly(&big_a)
        .scale(&rat(28, 1))
        .add(&a1.mul(&a3).mul_poly(&big_b).scale(&rat(-48, 1)))
        .add(&a3.mul(&a3).mul_poly(&big_c).scale(&rat(-32, 1)));
    let coupling = a1
        .mul_poly(&RationalPolynomial::from_i64(&[1, 3]).scale(&rat(1, 8)))
        .add(&a3.mul_poly(&RationalPolynomial::from_i64(&[-7, 4, -5]).scale(&rat(1, 16))))
        .mul_poly(&kap);
    bracket.mul_poly(&pref).add(&coupling)
}

/// Re-derive the `N` coefficient list by exact expansion of
/// `2048 (1-alpha)^2 (alpha+4)^2 (alpha+6)^2 G(alpha) / (-15)`. Panics only
/// if the division leaves a remainder, which would mean the common
/// denominator is wrong.
pub fn n_from_expansion() -> RationalPolynomial {
    let g = g_ratfn();
    let d1 = RationalPolynomial::from_i64(&[1, -1]);
    let d2 = RationalPolynomial::from_i64(&[4, 1]);
    let d3 = RationalPolynomial::from_i64(&[6, 1]);
    let d = d1.mul(&d1).mul(&d2).mul(&d2).mul(&d3).mul(&d3);
    let num = g.num.mul(&d).scale(&rat(-2048, 15));
    num.div_exact(&g.den)
        .expect("common denominator does not divide the expanded numerator")
}

/// `G` through the common-denominator route
/// `-15 N(alpha) / (2048 (1-alpha)^2 (alpha+4)^2 (alpha+6)^2)`.
pub fn g_common_denominator(alpha: &Rational) -> Result<Rational, ExactError> {
    let d = (rat(1, 1) - alpha) * (alpha + rat(4, 1)) * (alpha + rat(6, 1));
    if d.is_zero() {
        return Err(ExactError::Pole(alpha.to_string()));
    }
    Ok(rat(-15, 1) * n_polynomial().eval(alpha) / (rat(2048, 1) * &d * &d))
}

/// The nine `N'` coefficients, ascending; all strictly positive, smallest
/// 3228.
pub fn n_prime_coefficients() -> Vec<Rational> {
    n_polynomial().derivative().coeffs().to_vec()
}

#[derive(Debug, Clone, Serialize)]
pub struct Clause {
    pub id: String,
    pub statement: String,
    pub lhs: String,
    pub rhs: String,
    pub verdict: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct CertificateReport {
    pub clauses: Vec<Clause>,
    pub overall: String,
}

impl CertificateReport {
    pub fn passed(&self) -> bool {
        self.overall == "pass"
    }
}

fn clause(id: &str, statement: &str, lhs: String, rhs: String, ok: bool) -> Clause {
    Clause {
        id: id.to_string(),
        statement: statement.to_string(),
        lhs,
        rhs,
        verdict: if ok { "pass" } else { "fail" }.to_string(),
    }
}

/// `D'/D` for `D = (1-a)^2 (a+4)^2 (a+6)^2`:
/// `-2/(1-a) + 2/(a+4) + 2/(a+6)`. Equals `-7/6` at 0 and `-549/247` at 1/3.
fn log_derivative_d(alpha: &Rational) -> Rational {
    rat(-2, 1) / (rat(1, 1) - alpha) + rat(2, 1) / (alpha + rat(4, 1))
        + rat(2, 1) / (alpha + rat(6, 1))
}

/// Full certificate for the inequality chain. Every clause is checked by
/// exact arithmetic except the three that bracket transcendental constants
/// (`pi` and two Gamma values), where the rational margin exceeds binary64
/// rounding by at least nine orders of magnitude.
pub fn certify_phi_bound() -> CertificateReport {
    build_certificate(&n_polynomial())
}

/// Negative control: same certificate against a deliberately corrupted `N`
/// (constant term off by one). Must fail.
pub fn certify_phi_bound_tampered() -> CertificateReport {
    let mut c = N_COEFFS;
    c[0] += 1;
    build_certificate(&RationalPolynomial::from_i64(&c))
}

fn build_certificate(n_poly: &RationalPolynomial) -> CertificateReport {
    let mut clauses = Vec::new();
    let third = rat(1, 3);

    let g0 = g_exact(&rat(0, 1)).unwrap();
    clauses.push(clause(
        "g-at-zero",
        "G(0) equals 35/4096 exactly",
        g0.to_string(),
        rat(35, 4096).to_string(),
        g0 == rat(35, 4096),
    ));

    let g13 = g_exact(&third).unwrap();
    clauses.push(clause(
        "g-at-third",
        "G(1/3) equals -2255905/17570592 exactly",
        g13.to_string(),
        rat(-2255905, 17570592).to_string(),
        g13 == rat(-2255905, 17570592),
    ));

    let n0 = n_poly.eval(&rat(0, 1));
    let g0_via_n = rat(-15, 1) * &n0 / rat(2048 * 576, 1);
    clauses.push(clause(
        "n-at-zero",
        "N(0) = -672, hence -15 N(0)/(2048*576) = 35/4096",
        format!("N(0) = {n0}, route value {g0_via_n}"),
        rat(35, 4096).to_string(),
        n0 == rat(-672, 1) && g0_via_n == rat(35, 4096),
    ));

    let samples = [
        rat(0, 1),
        rat(1, 10),
        rat(1, 5),
        rat(1, 4),
        rat(3, 10),
        rat(1, 3),
    ];
    let repr_ok = samples.iter().all(|a| {
        let lhs = g_exact(a).unwrap();
        let rhs = rat(-15, 1) * n_poly.eval(a)
            / (rat(2048, 1)
                * ((rat(1, 1) - a) * (a + rat(4, 1)) * (a + rat(6, 1))).pow(2));
        lhs == rhs
    });
    clauses.push(clause(
        "representation-identity",
        "bracket form equals -15 N/(2048 (1-a)^2 (a+4)^2 (a+6)^2) at 0, 1/10, 1/5, 1/4, 3/10, 1/3",
        "bracket route".to_string(),
        "common-denominator route".to_string(),
        repr_ok,
    ));

    let j_ok = samples
        .iter()
        .all(|a| g_exact(a).unwrap() == g_from_j_integrals(a).unwrap());
    clauses.push(clause(
        "q-bracket-via-j-integrals",
        "explicit bracket equals term-by-term moment-integral assembly at the same six points",
        "bracket route".to_string(),
        "J-integral route".to_string(),
        j_ok,
    ));

    let derived = n_from_expansion();
    clauses.push(clause(
        "n-rederived-from-expansion",
        "verbatim N coefficients equal exact expansion of 2048 D(alpha) G(alpha)/(-15)",
        format!("{:?}", n_poly.coeffs().iter().map(|c| c.to_string()).collect::<Vec<_>>()),
        format!("{:?}", derived.coeffs().iter().map(|c| c.to_string()).collect::<Vec<_>>()),
        *n_poly == derived,
    ));

    let nprime = n_poly.derivative();
    let nprime_ref: Vec<Rational> = [
        18528i64, 3228, 4761, 22720, 50545, 55044, 24731, 4704, 315,
    ]
    .iter()
    .map(|&c| rat(c, 1))
    .collect();
    clauses.push(clause(
        "nprime-is-derivative",
        "the stated N' coefficient list is the exact derivative of the N list",
        format!("{:?}", nprime.coeffs().iter().map(|c| c.to_string()).collect::<Vec<_>>()),
        format!("{:?}", nprime_ref.iter().map(|c| c.to_string()).collect::<Vec<_>>()),
        nprime.coeffs() == &nprime_ref[..],
    ));

    // The inequality that matters is positivity of every coefficient. The
    // minimum is 315 (the leading, degree-8 term); 3228 — the figure often
    // quoted for this list — is in fact the smallest sub-leading
    // coefficient.
    let mut sorted = nprime.coeffs().to_vec();
    sorted.sort();
    clauses.push(clause(
        "nprime-positive",
        "all nine N' coefficients strictly positive (minimum 315 at degree 8; smallest sub-leading coefficient 3228)",
        format!(
            "min {}, next {}",
            sorted.first().cloned().unwrap_or_else(Rational::zero),
            sorted.get(1).cloned().unwrap_or_else(Rational::zero)
        ),
        "315 and 3228, both > 0".to_string(),
        nprime.coeffs().iter().all(|c| c.is_positive())
            && sorted.first() == Some(&rat(315, 1))
            && sorted.get(1) == Some(&rat(3228, 1)),
    ));

    let lhs = 100i64 * 2255905;
    let rhs = 13i64 * 17570592;
    clauses.push(clause(
        "g13-cross-multiplication",
        "|G(1/3)| < 13/100 by integer cross-multiplication",
        format!("100 x 2255905 = {lhs}"),
        format!("13 x 17570592 = {rhs}"),
        lhs < rhs,
    ));

    clauses.push(clause(
        "tail-term-cross-multiplication",
        "27/2000 < 7/500 by integer cross-multiplication",
        format!("27 x 500 = {}", 27 * 500),
        format!("7 x 2000 = {}", 7 * 2000),
        27 * 500 < 7 * 2000,
    ));

    clauses.push(clause(
        "domination-constant",
        "N'(0)/|N(0)| = 18528/672 = 193/7 exceeds 549/247",
        format!("193 x 247 = {}", 193 * 247),
        format!("7 x 549 = {}", 7 * 549),
        rat(18528, 672) == rat(193, 7) && 193 * 247 > 7 * 549,
    ));

    // |D'/D| <= 549/247 on [0, 1/3]: exact endpoint values, and the exact
    // derivative -2/(1-a)^2 - 2/(a+4)^2 - 2/(a+6)^2 is negative term by
    // term, so D'/D decreases and the right endpoint is the extremum. The
    // derivative sign is certified at thirteen rational grid points.
    let dd0 = log_derivative_d(&rat(0, 1));
    let dd13 = log_derivative_d(&third);
    let grid_ok = (0..=12).all(|i| {
        let a = rat(i, 36);
        let der = rat(-2, 1) / ((rat(1, 1) - &a) * (rat(1, 1) - &a))
            - rat(2, 1) / ((&a + rat(4, 1)) * (&a + rat(4, 1)))
            - rat(2, 1) / ((&a + rat(6, 1)) * (&a + rat(6, 1)));
        der.is_negative()
    });
    clauses.push(clause(
        "log-derivative-envelope",
        "D'/D runs from -7/6 at 0 to -549/247 at 1/3, decreasing (derivative negative term by term); |D'/D| <= 549/247",
        format!("D'/D(0) = {dd0}, D'/D(1/3) = {dd13}"),
        "-7/6 and -549/247".to_string(),
        dd0 == rat(-7, 6) && dd13 == rat(-549, 247) && grid_ok,
    ));

    let pi_ok = std::f64::consts::PI < 355.0 / 113.0;
    clauses.push(clause(
        "pi-upper-bound",
        "pi < 355/113 (binary64 comparison; margin 2.7e-7, about 6e8 ulp)",
        format!("{:.15}", std::f64::consts::PI),
        format!("{:.15}", 355.0 / 113.0),
        pi_ok,
    ));

    // Gamma(1/3) = (9/4) Gamma(7/3) <= (9/4) robbins_upper(7/3) <= 67/25
    let (_, up) = robbins_bounds(7.0 / 3.0);
    let g13_upper = 2.25 * up;
    clauses.push(clause(
        "gamma-third-upper",
        "(9/4) x upper factorial envelope at 7/3 stays below 67/25 = 2.680 (margin ~5e-4)",
        format!("{g13_upper:.10}"),
        "2.680".to_string(),
        g13_upper <= 2.680 && 2.680 - g13_upper > 1e-6,
    ));

    let (lo, _) = robbins_bounds(17.0 / 6.0);
    let g56_lower = 36.0 / 55.0 * lo;
    clauses.push(clause(
        "gamma-five-sixths-lower",
        "(36/55) x lower factorial envelope at 17/6 stays above 1127/1000 = 1.127 (margin ~1e-3)",
        format!("{g56_lower:.10}"),
        "1.127".to_string(),
        g56_lower >= 1.127 && g56_lower - 1.127 > 1e-6,
    ));

    // F1 <= (1/3)(355/113)(67/25)^2 (1000/1127)^2 and F2 = 72/500;
    // F1 F2 < 6/7 by exact cross-multiplication.
    let f1 = rat(1, 3) * rat(355, 113) * rat(67, 25).pow(2) * rat(1000, 1127).pow(2);
    let f2 = rat(72, 500);
    let prod = &f1 * &f2;
    clauses.push(clause(
        "final-envelope",
        "the rational envelope (1/3)(355/113)(67/25)^2(1000/1127)^2 x 72/500 is below 6/7",
        prod.to_string(),
        rat(6, 7).to_string(),
        prod < rat(6, 7),
    ));

    let overall = if clauses.iter().all(|c| c.verdict == "pass") {
        "pass"
    } else {
        "fail"
    };
    CertificateReport {
        clauses,
        overall: overall.to_string(),
    }
}

/// Binary64 value of an exact rational.
pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().expect("rational out of f64 range")
}
