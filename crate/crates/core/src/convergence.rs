//! Convergence analysis of the Brent-Salamin sequence.
//!
//! The sequence satisfies `|π − p_{n+1}| < 0.075·|π − p_n|²` (and the
//! sharper `0.075·2^(−n)` constant), and the a-priori bound
//! `0 < π − p_n < (2^{n+4}π² − 8π)·exp(−2^{n+1}π)`. The bound is evaluated
//! in log10 space because it underflows every fixed-point format after a
//! handful of iterations; iteration planning builds on it.

use alloc::string::String;
use alloc::vec::Vec;
use core::f64::consts::{LN_10, LOG10_2, PI};

use crate::agm;
use crate::error::{Error, Result};
use crate::fixedpoint::{BigFixed, PrecisionContext};
use crate::nat::Nat;

/// Constant of the quadratic convergence estimate.
pub const RATIO_CONSTANT: f64 = 0.075;

/// Extra decimal orders of magnitude demanded from the error bound when
/// planning iterations.
pub const PLANNING_MARGIN_DIGITS: usize = 10;

/// Differences smaller than `2^(−F + NOISE_FLOOR_BITS)` are treated as
/// arithmetic noise.
pub const NOISE_FLOOR_BITS: i64 = 64;

#[derive(Clone, Debug, PartialEq)]
pub struct ConvergenceRecord {
    pub n: u32,
    /// `p_n` truncated to the context's requested digits.
    pub digits: String,
    pub correct_digits: usize,
    /// `log10` of the a-priori error bound (absent for `n = 0`).
    pub log10_bound: Option<f64>,
    /// `|π − p_{n+1}| / |π − p_n|²`; absent for `n = 0` and whenever the
    /// numerator sits below the noise floor of the context.
    pub empirical_ratio: Option<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConvergenceReport {
    pub records: Vec<ConvergenceRecord>,
    pub reference_digits: String,
}

/// `log10((2^{n+4}π² − 8π)·exp(−2^{n+1}π))`, evaluated in double precision.
pub fn brent_bound_log10(n: u32) -> f64 {
    let n = n as f64;
    let prefactor = if n < 30.0 {
        libm::log10(libm::exp2(n + 4.0) * PI * PI - 8.0 * PI)
    } else {
        (n + 4.0) * LOG10_2 + 2.0 * libm::log10(PI)
    };
    prefactor - libm::exp2(n + 1.0) * PI / LN_10
}

/// The bound itself, `(2^{n+4}π² − 8π)·exp(−2^{n+1}π)`, evaluated in the
/// context of `pi`.
///
/// The bound is asymptotically exact: its relative gap to `π − p_n` is of
/// the order of the bound itself, so only full precision can separate the
/// two once `n >= 3`.
pub fn brent_bound(n: u32, pi: &BigFixed) -> Result<BigFixed> {
    let prefactor = pi
        .square()
        .shift_pow2(n as i64 + 4)
        .try_sub(&pi.shift_pow2(3))?;
    let decay = (-pi.shift_pow2(n as i64 + 1)).exp()?;
    prefactor.try_mul(&decay)
}

/// `π_ref − p_n` next to the bound for one iteration.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundCheck {
    pub n: u32,
    pub error: BigFixed,
    pub bound: BigFixed,
}

impl BoundCheck {
    /// `0 < π_ref − p_n < bound`.
    pub fn holds(&self) -> bool {
        self.error.signum() > 0 && self.error < self.bound
    }

    /// Whether `bound − error` lies above the arithmetic noise floor, so
    /// that the outcome of [`holds`](Self::holds) carries information.
    pub fn resolvable(&self) -> bool {
        let ctx = self.error.context();
        let floor = BigFixed::pow2(NOISE_FLOOR_BITS - ctx.frac_bits() as i64, ctx);
        self.error > floor && &self.bound - &self.error > floor
    }
}

/// Compares `π_ref − p_n` against the bound for `n = 1..=n_max`.
pub fn check_brent_bound(n_max: u32, ctx: PrecisionContext) -> Result<Vec<BoundCheck>> {
    let ref_steps = required_iterations(ctx.requested_digits()) + 1;
    let outputs = agm::brent_salamin_outputs(ctx, ref_steps.max(n_max))?;
    let reference = &outputs[ref_steps as usize];
    (1..=n_max)
        .map(|n| {
            Ok(BoundCheck {
                n,
                error: reference.try_sub(&outputs[n as usize])?,
                bound: brent_bound(n, reference)?,
            })
        })
        .collect()
}

/// Smallest `N >= 1` whose error bound lies below `10^−(digits + 10)`.
pub fn required_iterations(digits: usize) -> u32 {
    let target = -((digits + PLANNING_MARGIN_DIGITS) as f64);
    let mut n = 1;
    while brent_bound_log10(n) >= target {
        n += 1;
    }
    n
}

/// High-precision reference: `p_{N+1}` with `N = required_iterations` for
/// the context's requested digits.
pub fn reference_pi(ctx: PrecisionContext) -> Result<BigFixed> {
    agm::brent_salamin_pi(ctx, required_iterations(ctx.requested_digits()) + 1)
}

fn noise_floor_log2(ctx: PrecisionContext) -> f64 {
    (NOISE_FLOOR_BITS - ctx.frac_bits() as i64) as f64
}

fn ratio_of(reference: &BigFixed, p_n: &BigFixed, p_next: &BigFixed) -> Result<Option<f64>> {
    let num = reference.try_sub(p_next)?.log2_abs();
    let den = reference.try_sub(p_n)?.log2_abs();
    if num < noise_floor_log2(reference.context()) {
        return Ok(None);
    }
    Ok(Some(libm::exp2(num - 2.0 * den)))
}

/// `|π − p_{n+1}| / |π − p_n|²` against a reference computed in `ctx`.
///
/// The context must carry at least `2^{n+3}` requested digits so the
/// numerator is resolvable.
pub fn empirical_ratio(n: u32, ctx: PrecisionContext) -> Result<f64> {
    if n == 0 {
        return Err(Error::NonPositive {
            quantity: "iteration index",
        });
    }
    let needed = 1usize.checked_shl(n + 3).unwrap_or(usize::MAX);
    if ctx.requested_digits() < needed {
        return Err(Error::PrecisionInsufficient {
            needed,
            available: ctx.requested_digits(),
        });
    }
    let ref_steps = required_iterations(ctx.requested_digits()) + 1;
    let outputs = agm::brent_salamin_outputs(ctx, ref_steps.max(n + 1))?;
    let reference = &outputs[ref_steps as usize];
    ratio_of(reference, &outputs[n as usize], &outputs[n as usize + 1])?.ok_or(
        Error::PrecisionInsufficient {
            needed: needed.saturating_mul(2),
            available: ctx.requested_digits(),
        },
    )
}

struct Decimal<'a> {
    negative: bool,
    int: &'a str,
    frac: &'a str,
}

fn split_decimal(s: &str) -> Option<Decimal<'_>> {
    let (negative, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s),
    };
    let (int, frac) = body.split_once('.').unwrap_or((body, ""));
    let all_digits = |t: &str| t.bytes().all(|b| b.is_ascii_digit());
    if int.is_empty() || !all_digits(int) || !all_digits(frac) {
        return None;
    }
    Some(Decimal {
        negative,
        int,
        frac,
    })
}

/// Number of correct fraction digits of `candidate` against `reference`:
/// the largest `d` with `|candidate − reference| < 10^(−d)`, both strings
/// cut to their common fraction length `L` (and `L` when they agree there).
///
/// This is the count of correct decimals, not the length of the common
/// prefix; the two differ when the error straddles a digit boundary
/// (`3.14159264…` has 8 correct decimals but shares only 7 with π).
pub fn correct_digit_count(candidate: &str, reference: &str) -> Result<usize> {
    let c =
        split_decimal(candidate).ok_or_else(|| Error::MalformedDigits(String::from(candidate)))?;
    let r =
        split_decimal(reference).ok_or_else(|| Error::MalformedDigits(String::from(reference)))?;
    let len = c.frac.len().min(r.frac.len());
    let scaled = |d: &Decimal| {
        let mut s = String::with_capacity(d.int.len() + len);
        s.push_str(d.int);
        s.push_str(&d.frac[..len]);
        Nat::from_decimal_digits(&s).expect("validated digits")
    };
    let (cv, rv) = (scaled(&c), scaled(&r));
    let (c_neg, r_neg) = (c.negative && !cv.is_zero(), r.negative && !rv.is_zero());
    let diff = if c_neg != r_neg {
        cv.add(&rv)
    } else if cv >= rv {
        cv.sub(&rv)
    } else {
        rv.sub(&cv)
    };
    if diff.is_zero() {
        return Ok(len);
    }
    let magnitude = diff.to_decimal_string().len();
    Ok(len.saturating_sub(magnitude))
}

/// Builds records `0..=n_max` from outputs `p_0, …` (at least `n_max + 2`
/// of them, so every record can carry a ratio) and a reference value.
pub(crate) fn report_from_outputs(
    outputs: &[BigFixed],
    n_max: u32,
    reference: &BigFixed,
) -> Result<ConvergenceReport> {
    let digits = reference.context().requested_digits();
    let reference_digits = reference.to_decimal_string(digits)?;
    let mut records = Vec::with_capacity(n_max as usize + 1);
    for n in 0..=n_max {
        let p = &outputs[n as usize];
        let text = p.to_decimal_string(digits)?;
        let correct_digits = correct_digit_count(&text, &reference_digits)?;
        let (log10_bound, empirical_ratio) = if n == 0 {
            (None, None)
        } else {
            let ratio = match outputs.get(n as usize + 1) {
                Some(next) => ratio_of(reference, p, next)?,
                None => None,
            };
            (Some(brent_bound_log10(n)), ratio)
        };
        records.push(ConvergenceRecord {
            n,
            digits: text,
            correct_digits,
            log10_bound,
            empirical_ratio,
        });
    }
    Ok(ConvergenceReport {
        records,
        reference_digits,
    })
}

/// Runs the Brent-Salamin iteration for `n_max` steps in `ctx` and records
/// correct digits, bound and empirical ratio per step. Reports only.
pub fn build_report(n_max: u32, ctx: PrecisionContext) -> Result<ConvergenceReport> {
    if n_max == 0 {
        return Err(Error::NonPositive {
            quantity: "iteration count",
        });
    }
    let ref_steps = required_iterations(ctx.requested_digits()) + 1;
    let outputs = agm::brent_salamin_outputs(ctx, ref_steps.max(n_max + 1))?;
    report_from_outputs(&outputs, n_max, &outputs[ref_steps as usize])
}

/// The quantities bracketing `π − p_n`:
/// `0 < ε_n < 4c²_{n+1} <= 2^{n+2}c²_{n+1} < δ_n < 2^{n+3}c²_{n+1}`.
#[derive(Clone, Debug, PartialEq)]
pub struct SandwichRecord {
    pub n: u32,
    /// `ε_n = 4a²_{n+1} − 4·AGM²`
    pub epsilon: BigFixed,
    pub c_next_sq: BigFixed,
    /// `δ_n = 2·Σ_{j>n} 2^j c_j²`
    pub delta: BigFixed,
}

impl SandwichRecord {
    pub fn epsilon_holds(&self) -> bool {
        self.epsilon.signum() > 0 && self.epsilon < self.c_next_sq.shift_pow2(2)
    }

    pub fn delta_holds(&self) -> bool {
        let n = self.n as i64;
        self.c_next_sq.shift_pow2(n + 2) < self.delta
            && self.delta < self.c_next_sq.shift_pow2(n + 3)
    }

    pub fn holds(&self) -> bool {
        self.epsilon_holds() && self.delta_holds()
    }
}

/// Evaluates the bracketing quantities for `n = 1..=n_max`, taking the AGM
/// and the infinite sum from a run long enough to converge in `ctx`.
pub fn sandwich_bounds(n_max: u32, ctx: PrecisionContext) -> Result<Vec<SandwichRecord>> {
    let steps = (required_iterations(ctx.requested_digits()) + 2).max(n_max + 2);
    let states = agm::agm_states(ctx, steps)?;
    let last = &states[steps as usize];
    let agm_sq4 = last.a.square().shift_pow2(2);
    let s_inf = &last.s;
    (1..=n_max)
        .map(|n| {
            let next = &states[n as usize + 1];
            Ok(SandwichRecord {
                n,
                epsilon: next.a.square().shift_pow2(2).try_sub(&agm_sq4)?,
                c_next_sq: next.c_sq.clone(),
                delta: s_inf.try_sub(&states[n as usize].s)?.shift_pow2(1),
            })
        })
        .collect()
}
