//! Double-precision checks of the integral identities behind the AGM.
//!
//! With `I(a,b) = ∫₀^{π/2} dΦ / √(a²cos²Φ + b²sin²Φ)` and `L(a,b)` the same
//! integral weighted by `cos²Φ`, the checks here compare quadrature values
//! against the closed forms the AGM iteration relies on. Everything runs in
//! `f64`; the point is an independent view of the mathematics, not digits.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, FRAC_PI_4, PI, SQRT_2};

use crate::agm;
use crate::error::{Error, Result};
use crate::fixedpoint::{BigFixed, PrecisionContext};

/// Tolerance of the AGM and integral identities.
pub const IDENTITY_TOL: f64 = 1e-9;
/// Tolerance of the Gamma and Beta checks.
pub const GAMMA_BETA_TOL: f64 = 1e-7;
/// Tolerance of the Gauss formula, which involves no quadrature.
pub const GAUSS_TOL: f64 = 1e-12;
/// Decimal digits used when the oracle calls into the fixed-point AGM.
pub const AGM_DIGITS: usize = 30;

const INITIAL_PANELS: usize = 8;
const GAMMA_TAIL: f64 = 1e-20;
/// Power substitutions use `t = s^(SUBST_ORDER/u)`, which leaves a factor
/// `s^(SUBST_ORDER−1)` and a correction far smoother than `t^(u−1)`.
const SUBST_ORDER: f64 = 4.0;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadratureSettings {
    pub target_tol: f64,
    pub max_refinements: u32,
    /// Upper cutoff for the Gamma integral; chosen per argument when absent.
    pub truncation: Option<f64>,
}

impl Default for QuadratureSettings {
    fn default() -> Self {
        QuadratureSettings {
            target_tol: 1e-11,
            max_refinements: 24,
            truncation: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct IdentityCheck {
    pub name: String,
    pub lhs: f64,
    pub rhs: f64,
    pub abs_dev: f64,
    pub tol: f64,
    pub pass: bool,
}

impl IdentityCheck {
    pub fn new(name: impl Into<String>, lhs: f64, rhs: f64, tol: f64) -> Self {
        let abs_dev = libm::fabs(lhs - rhs);
        IdentityCheck {
            name: name.into(),
            lhs,
            rhs,
            abs_dev,
            tol,
            pass: abs_dev < tol,
        }
    }
}

/// Composite Simpson on `[lo, hi]`, doubling the panel count until two
/// successive estimates differ by less than `target_tol / 2`.
pub fn simpson<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, qs: &QuadratureSettings) -> Result<f64> {
    if hi == lo {
        return Ok(0.0);
    }
    let mut panels = INITIAL_PANELS;
    let mut h = (hi - lo) / panels as f64;
    let ends = f(lo) + f(hi);
    let mut even = (1..panels / 2)
        .map(|i| f(lo + 2.0 * i as f64 * h))
        .sum::<f64>();
    let mut odd = (0..panels / 2)
        .map(|i| f(lo + (2 * i + 1) as f64 * h))
        .sum::<f64>();
    let mut prev = h / 3.0 * (ends + 4.0 * odd + 2.0 * even);
    for _ in 0..qs.max_refinements {
        // old nodes all become even nodes of the refined rule
        even += odd;
        panels *= 2;
        h /= 2.0;
        odd = (0..panels / 2)
            .map(|i| f(lo + (2 * i + 1) as f64 * h))
            .sum::<f64>();
        let next = h / 3.0 * (ends + 4.0 * odd + 2.0 * even);
        if libm::fabs(next - prev) < qs.target_tol / 2.0 {
            return Ok(next);
        }
        prev = next;
    }
    Err(Error::NotConverged {
        what: "quadrature",
        refinements: qs.max_refinements,
    })
}

fn positive(x: f64, quantity: &'static str) -> Result<()> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(Error::NonPositive { quantity })
    }
}

fn weight(a: f64, b: f64, phi: f64) -> f64 {
    let (s, c) = (libm::sin(phi), libm::cos(phi));
    1.0 / libm::sqrt(a * a * c * c + b * b * s * s)
}

/// `I(a, b)`.
pub fn integral_i(a: f64, b: f64, qs: &QuadratureSettings) -> Result<f64> {
    positive(a, "a")?;
    positive(b, "b")?;
    simpson(|phi| weight(a, b, phi), 0.0, FRAC_PI_2, qs)
}

/// `L(a, b)`.
pub fn integral_l(a: f64, b: f64, qs: &QuadratureSettings) -> Result<f64> {
    positive(a, "a")?;
    positive(b, "b")?;
    simpson(
        |phi| {
            let c = libm::cos(phi);
            c * c * weight(a, b, phi)
        },
        0.0,
        FRAC_PI_2,
        qs,
    )
}

fn agm_step(a: f64, b: f64) -> (f64, f64) {
    ((a + b) / 2.0, libm::sqrt(a * b))
}

/// `I(a_k, b_k) = I(a₀, b₀)` for `k = 1..=steps`.
pub fn check_agm_invariance(
    a: f64,
    b: f64,
    steps: u32,
    qs: &QuadratureSettings,
) -> Result<Vec<IdentityCheck>> {
    let base = integral_i(a, b, qs)?;
    let (mut ak, mut bk) = (a, b);
    (1..=steps)
        .map(|k| {
            (ak, bk) = agm_step(ak, bk);
            let name = format!("I invariance ({a}, {b}) step {k}");
            Ok(IdentityCheck::new(
                name,
                integral_i(ak, bk, qs)?,
                base,
                IDENTITY_TOL,
            ))
        })
        .collect()
}

/// The AGM of two doubles through the fixed-point iteration.
pub fn agm_value(a: f64, b: f64) -> Result<f64> {
    let ctx = PrecisionContext::new(AGM_DIGITS)?;
    let m = agm::agm_limit(&BigFixed::from_f64(a, ctx)?, &BigFixed::from_f64(b, ctx)?)?;
    Ok(m.to_f64())
}

/// `I(a, b) = π / (2·AGM(a, b))`.
pub fn check_agm_value(a: f64, b: f64, qs: &QuadratureSettings) -> Result<IdentityCheck> {
    Ok(IdentityCheck::new(
        format!("I = pi/(2 AGM) ({a}, {b})"),
        integral_i(a, b, qs)?,
        PI / (2.0 * agm_value(a, b)?),
        IDENTITY_TOL,
    ))
}

/// `L(b, a) + L(a, b) = I(a, b)`.
pub fn check_l_sum(a: f64, b: f64, qs: &QuadratureSettings) -> Result<IdentityCheck> {
    Ok(IdentityCheck::new(
        format!("L sum ({a}, {b})"),
        integral_l(b, a, qs)? + integral_l(a, b, qs)?,
        integral_i(a, b, qs)?,
        IDENTITY_TOL,
    ))
}

/// `L(b, a) − L(a, b) = (a − b)/(a + b)·L(b₁, a₁)`.
pub fn check_l_difference(a: f64, b: f64, qs: &QuadratureSettings) -> Result<IdentityCheck> {
    let (a1, b1) = agm_step(a, b);
    Ok(IdentityCheck::new(
        format!("L difference ({a}, {b})"),
        integral_l(b, a, qs)? - integral_l(a, b, qs)?,
        (a - b) / (a + b) * integral_l(b1, a1, qs)?,
        IDENTITY_TOL,
    ))
}

/// `S = Σ_{j=1..terms} 2^j·c_j²` with `c_j = (a_{j−1} − b_{j−1})/2`.
pub fn agm_sum(a: f64, b: f64, terms: u32) -> f64 {
    let (mut ak, mut bk, mut s) = (a, b, 0.0);
    for j in 1..=terms {
        let c = (ak - bk) / 2.0;
        s += libm::exp2(j as f64) * c * c;
        (ak, bk) = agm_step(ak, bk);
    }
    s
}

/// `2c₀²·L(a, b) = (c₀² − S)·I(a, b)` with `S` cut after `terms` terms.
pub fn check_sum_identity(
    a: f64,
    b: f64,
    terms: u32,
    qs: &QuadratureSettings,
) -> Result<IdentityCheck> {
    let c0_sq = a * a - b * b;
    let s = agm_sum(a, b, terms);
    Ok(IdentityCheck::new(
        format!("sum identity ({a}, {b})"),
        2.0 * c0_sq * integral_l(a, b, qs)?,
        (c0_sq - s) * integral_i(a, b, qs)?,
        IDENTITY_TOL,
    ))
}

/// `I(λa, λb) = I(a, b)/λ`.
pub fn check_scaling(
    a: f64,
    b: f64,
    lambda: f64,
    qs: &QuadratureSettings,
) -> Result<IdentityCheck> {
    positive(lambda, "lambda")?;
    Ok(IdentityCheck::new(
        format!("scaling ({a}, {b}) by {lambda}"),
        integral_i(lambda * a, lambda * b, qs)?,
        integral_i(a, b, qs)? / lambda,
        IDENTITY_TOL,
    ))
}

/// `π = 4·AGM(1, 1/√2)² / (1 − 2S)` with `S` cut after `terms` terms.
pub fn check_gauss_formula_terms(terms: u32) -> Result<IdentityCheck> {
    let m = agm_value(1.0, FRAC_1_SQRT_2)?;
    let s = agm_sum(1.0, FRAC_1_SQRT_2, terms);
    Ok(IdentityCheck::new(
        format!("Gauss formula ({terms} terms)"),
        4.0 * m * m / (1.0 - 2.0 * s),
        PI,
        GAUSS_TOL,
    ))
}

/// The Gauss formula with 30 sum terms.
pub fn check_gauss_formula() -> Result<IdentityCheck> {
    check_gauss_formula_terms(30)
}

/// `L(√2, 1)·I(√2, 1) = π/4`.
pub fn check_legendre_value(qs: &QuadratureSettings) -> Result<IdentityCheck> {
    Ok(IdentityCheck::new(
        "L(sqrt2, 1) I(sqrt2, 1) = pi/4",
        integral_l(SQRT_2, 1.0, qs)? * integral_i(SQRT_2, 1.0, qs)?,
        FRAC_PI_4,
        IDENTITY_TOL,
    ))
}

fn gamma_cutoff(u: f64) -> f64 {
    // smallest integer T past the peak with e^(−T)·T^(u−1) below the tail target
    let log_target = libm::log(GAMMA_TAIL);
    let mut t = libm::fmax(1.0, u);
    while (u - 1.0) * libm::log(t) - t >= log_target {
        t += 1.0;
    }
    t
}

/// `∫₀^{x} t^(u−1)·g(t) dt` with the endpoint singularity removed by
/// `t = s^(4/u)`.
fn power_head<G: Fn(f64) -> f64>(u: f64, x: f64, g: G, qs: &QuadratureSettings) -> Result<f64> {
    let q = SUBST_ORDER / u;
    let top = libm::pow(x, 1.0 / q);
    simpson(
        |s| q * libm::pow(s, SUBST_ORDER - 1.0) * g(libm::pow(s, q)),
        0.0,
        top,
        qs,
    )
}

/// `Γ(u) = ∫₀^∞ t^(u−1)·e^(−t) dt`, cut at the truncation point.
pub fn gamma_value(u: f64, qs: &QuadratureSettings) -> Result<f64> {
    positive(u, "u")?;
    let cutoff = qs.truncation.unwrap_or_else(|| gamma_cutoff(u));
    let head = power_head(u, 1.0, |t| libm::exp(-t), qs)?;
    let tail = simpson(
        |t| libm::exp((u - 1.0) * libm::log(t) - t),
        1.0,
        libm::fmax(cutoff, 1.0),
        qs,
    )?;
    Ok(head + tail)
}

/// `B(u, v) = ∫₀¹ t^(u−1)(1 − t)^(v−1) dt`, split at `1/2`.
pub fn beta_value(u: f64, v: f64, qs: &QuadratureSettings) -> Result<f64> {
    positive(u, "u")?;
    positive(v, "v")?;
    let left = power_head(u, 0.5, |t| libm::pow(1.0 - t, v - 1.0), qs)?;
    let right = power_head(v, 0.5, |t| libm::pow(1.0 - t, u - 1.0), qs)?;
    Ok(left + right)
}

/// `Γ(1/2) = √π`.
pub fn check_gamma_half(qs: &QuadratureSettings) -> Result<IdentityCheck> {
    Ok(IdentityCheck::new(
        "Gamma(1/2) = sqrt(pi)",
        gamma_value(0.5, qs)?,
        libm::sqrt(PI),
        GAMMA_BETA_TOL,
    ))
}

/// `B(u, v) = Γ(u)Γ(v)/Γ(u + v)`.
pub fn check_beta_relation(u: f64, v: f64, qs: &QuadratureSettings) -> Result<IdentityCheck> {
    Ok(IdentityCheck::new(
        format!("Beta relation ({u}, {v})"),
        beta_value(u, v, qs)?,
        gamma_value(u, qs)? * gamma_value(v, qs)? / gamma_value(u + v, qs)?,
        GAMMA_BETA_TOL,
    ))
}

/// `B(3/4, 1/2)·B(1/4, 1/2)/16 = π/4`.
pub fn check_beta_legendre(qs: &QuadratureSettings) -> Result<IdentityCheck> {
    Ok(IdentityCheck::new(
        "B(3/4, 1/2) B(1/4, 1/2)/16 = pi/4",
        beta_value(0.75, 0.5, qs)? * beta_value(0.25, 0.5, qs)? / 16.0,
        FRAC_PI_4,
        GAMMA_BETA_TOL,
    ))
}

/// Every identity at its standard sample points.
pub fn run_all(qs: &QuadratureSettings) -> Result<Vec<IdentityCheck>> {
    let r = FRAC_1_SQRT_2;
    let mut checks = Vec::new();
    checks.extend(check_agm_invariance(1.0, r, 4, qs)?);
    checks.extend(check_agm_invariance(2.0, 1.0, 3, qs)?);
    for (a, b) in [(1.0, 1.0), (1.0, r), (3.0, 2.0)] {
        checks.push(check_agm_value(a, b, qs)?);
    }
    checks.push(check_l_sum(1.0, r, qs)?);
    for (a, b) in [(1.0, r), (2.0, 1.0)] {
        checks.push(check_l_difference(a, b, qs)?);
    }
    for (a, b) in [(1.0, r), (SQRT_2, 1.0)] {
        checks.push(check_sum_identity(a, b, 30, qs)?);
    }
    checks.push(check_scaling(SQRT_2, 1.0, r, qs)?);
    checks.push(check_scaling(1.0, 0.5, 3.0, qs)?);
    checks.push(check_gauss_formula()?);
    checks.push(check_legendre_value(qs)?);
    checks.push(check_gamma_half(qs)?);
    for (u, v) in [(1.0, 1.0), (0.75, 0.5), (0.25, 0.5), (2.0, 3.0)] {
        checks.push(check_beta_relation(u, v, qs)?);
    }
    checks.push(check_beta_legendre(qs)?);
    Ok(checks)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn qs() -> QuadratureSettings {
        QuadratureSettings::default()
    }

    fn close(x: f64, y: f64, tol: f64) -> bool {
        libm::fabs(x - y) < tol
    }

    #[test]
    fn constant_integrands() {
        assert!(close(
            integral_i(1.0, 1.0, &qs()).unwrap(),
            FRAC_PI_2,
            1e-12
        ));
        assert!(close(
            integral_i(2.0, 2.0, &qs()).unwrap(),
            FRAC_PI_4,
            1e-12
        ));
        assert!(close(
            integral_l(1.0, 1.0, &qs()).unwrap(),
            FRAC_PI_4,
            1e-12
        ));
        assert!(integral_i(0.0, 1.0, &qs()).is_err());
    }

    #[test]
    fn elliptic_value() {
        let i = integral_i(1.0, FRAC_1_SQRT_2, &qs()).unwrap();
        assert!(close(i, 1.854_074_677_301_372, 1e-10));
    }

    #[test]
    fn degenerate_pairs() {
        for c in check_agm_invariance(1.5, 1.5, 3, &qs()).unwrap() {
            assert!(c.abs_dev < 1e-13);
        }
        let c = check_l_difference(2.0, 2.0, &qs()).unwrap();
        assert!(c.lhs == 0.0 && c.rhs == 0.0);
        let c = check_sum_identity(2.0, 2.0, 30, &qs()).unwrap();
        assert!(c.lhs == 0.0 && c.rhs == 0.0);
        let c = check_scaling(1.0, 0.5, 1.0, &qs()).unwrap();
        assert_eq!(c.lhs, c.rhs);
    }

    #[test]
    fn gauss_formula_truncation() {
        assert!(check_gauss_formula().unwrap().pass);
        assert!(check_gauss_formula_terms(10).unwrap().pass);
        assert!(!check_gauss_formula_terms(1).unwrap().pass);
    }

    #[test]
    fn gamma_values() {
        assert!(close(gamma_value(1.0, &qs()).unwrap(), 1.0, 1e-10));
        let half = gamma_value(0.5, &qs()).unwrap();
        assert!(close(half, libm::sqrt(PI), 1e-8));
        assert!(close(gamma_value(1.5, &qs()).unwrap(), half / 2.0, 1e-8));
        assert!(close(
            beta_value(2.0, 3.0, &qs()).unwrap(),
            1.0 / 12.0,
            1e-10
        ));
    }

    #[test]
    fn symmetry() {
        let q = qs();
        let d = integral_i(1.0, 0.3, &q).unwrap() - integral_i(0.3, 1.0, &q).unwrap();
        assert!(libm::fabs(d) < 2.0 * q.target_tol);
    }

    #[test]
    fn all_checks_pass() {
        for c in run_all(&qs()).unwrap() {
            assert!(c.pass, "{c:?}");
        }
    }

    #[test]
    fn refinement_limit() {
        let tight = QuadratureSettings {
            target_tol: 1e-30,
            max_refinements: 4,
            truncation: None,
        };
        assert!(matches!(
            integral_i(1.0, 0.5, &tight),
            Err(Error::NotConverged { .. })
        ));
    }
}
