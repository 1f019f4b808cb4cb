//! Side-by-side runs of the three iterations.
//!
//! The quadratic Borwein state tracks the Brent-Salamin one through
//! `e_n = 1/p_n` and `k_n = a_n/a_{n+1} − 1`, and the quartic state tracks
//! every second quadratic state through `y_n = √k_{2n}` and `z_n = e_{2n}`.
//! The checks below measure those identities instead of asserting them, so
//! callers can apply their own tolerance.

use alloc::vec::Vec;

use crate::agm::{self, AgmState};
use crate::borwein::{self, BorweinQuadState, BorweinQuartState};
use crate::error::Result;
use crate::fixedpoint::{BigFixed, PrecisionContext};

/// Decimal digits of slack between the working precision and the default
/// tolerance.
pub const TOLERANCE_SLACK_DIGITS: usize = 10;

#[derive(Clone, Debug, PartialEq)]
pub struct EquivalenceReport {
    pub iterations: u32,
    /// `max |e_n − 1/p_n|`
    pub max_dev_e: Option<BigFixed>,
    /// `max |k_n − (a_n/a_{n+1} − 1)|`
    pub max_dev_k: Option<BigFixed>,
    /// `max |y_n − √k_{2n}|`
    pub max_dev_y: Option<BigFixed>,
    /// `max |z_n − e_{2n}|`
    pub max_dev_z: Option<BigFixed>,
    /// Largest output deviation over every index that was run.
    pub max_dev_outputs: BigFixed,
    pub tolerance: BigFixed,
    pub pass: bool,
}

impl EquivalenceReport {
    fn deviations(&self) -> impl Iterator<Item = &BigFixed> {
        [
            &self.max_dev_e,
            &self.max_dev_k,
            &self.max_dev_y,
            &self.max_dev_z,
        ]
        .into_iter()
        .flatten()
        .chain(core::iter::once(&self.max_dev_outputs))
    }

    /// Whether every measured deviation is below `tol`.
    pub fn passes(&self, tol: &BigFixed) -> bool {
        self.deviations().all(|d| d < tol)
    }

    /// The largest measured deviation.
    pub fn max_deviation(&self) -> &BigFixed {
        self.deviations()
            .fold(&self.max_dev_outputs, |m, d| if d > m { d } else { m })
    }

    fn seal(mut self) -> Self {
        self.pass = self.passes(&self.tolerance);
        self
    }
}

/// `10^−(requested + guard − 10)`.
pub fn default_tolerance(ctx: PrecisionContext) -> BigFixed {
    let digits = ctx.working_digits().saturating_sub(TOLERANCE_SLACK_DIGITS);
    BigFixed::pow10(-(digits as i64), ctx)
}

fn max_abs(acc: Option<BigFixed>, x: &BigFixed, y: &BigFixed) -> Result<Option<BigFixed>> {
    let d = x.try_sub(y)?.abs();
    Ok(Some(match acc {
        Some(m) if m >= d => m,
        _ => d,
    }))
}

fn larger(x: Option<BigFixed>, y: Option<BigFixed>) -> Option<BigFixed> {
    match (x, y) {
        (Some(x), Some(y)) => Some(if x >= y { x } else { y }),
        (x, y) => x.or(y),
    }
}

fn one_over(x: &BigFixed) -> Result<BigFixed> {
    BigFixed::one(x.context()).try_div(x)
}

struct QuadraticRun {
    agm: Vec<AgmState>,
    outputs: Vec<BigFixed>,
    bb2: Vec<BorweinQuadState>,
}

fn run_quadratic(ctx: PrecisionContext, n: u32) -> Result<QuadraticRun> {
    let agm = agm::agm_states(ctx, n + 1)?;
    let outputs = agm[..=n as usize]
        .iter()
        .map(agm::agm_output)
        .collect::<Result<Vec<_>>>()?;
    let bb2 = borwein::bb2_states(ctx, n)?;
    Ok(QuadraticRun { agm, outputs, bb2 })
}

fn quadratic_deviations(run: &QuadraticRun, n: u32) -> Result<[Option<BigFixed>; 3]> {
    let (mut dev_e, mut dev_k, mut dev_out) = (None, None, None);
    for i in 0..=n as usize {
        let st = &run.bb2[i];
        let p = &run.outputs[i];
        dev_e = max_abs(dev_e, &st.e, &one_over(p)?)?;
        let one = BigFixed::one(st.context());
        let ratio = run.agm[i].a.try_div(&run.agm[i + 1].a)?.try_sub(&one)?;
        dev_k = max_abs(dev_k, &st.k, &ratio)?;
        dev_out = max_abs(dev_out, &borwein::bb2_output(st)?, p)?;
    }
    Ok([dev_e, dev_k, dev_out])
}

/// `√k_{2i}`, using the cancellation-free form for `i >= 1`.
fn root_k(bb2: &[BorweinQuadState], i: usize) -> Result<BigFixed> {
    if i == 0 {
        bb2[0].k.sqrt()
    } else {
        bb2[2 * i - 1].next_k_sqrt()
    }
}

fn quartic_deviations(
    bb2: &[BorweinQuadState],
    bb4: &[BorweinQuartState],
    n: u32,
) -> Result<[Option<BigFixed>; 3]> {
    let (mut dev_y, mut dev_z, mut dev_out) = (None, None, None);
    for i in 0..=n as usize {
        let q = &bb4[i];
        let st = &bb2[2 * i];
        dev_y = max_abs(dev_y, &q.y, &root_k(bb2, i)?)?;
        dev_z = max_abs(dev_z, &q.z, &st.e)?;
        dev_out = max_abs(dev_out, &borwein::bb4_output(q)?, &borwein::bb2_output(st)?)?;
    }
    Ok([dev_y, dev_z, dev_out])
}

/// Brent-Salamin against the quadratic Borwein iteration for `n = 0..=N`.
pub fn check_quadratic_equivalence(n: u32, ctx: PrecisionContext) -> Result<EquivalenceReport> {
    let run = run_quadratic(ctx, n)?;
    let [e, k, out] = quadratic_deviations(&run, n)?;
    Ok(EquivalenceReport {
        iterations: n,
        max_dev_e: e,
        max_dev_k: k,
        max_dev_y: None,
        max_dev_z: None,
        max_dev_outputs: out.expect("at least one index"),
        tolerance: default_tolerance(ctx),
        pass: false,
    }
    .seal())
}

/// The quartic iteration for `N` steps against the quadratic one for `2N`.
pub fn check_quartic_equivalence(n: u32, ctx: PrecisionContext) -> Result<EquivalenceReport> {
    let bb2 = borwein::bb2_states(ctx, 2 * n)?;
    let bb4 = borwein::bb4_states(ctx, n)?;
    let [y, z, out] = quartic_deviations(&bb2, &bb4, n)?;
    Ok(EquivalenceReport {
        iterations: n,
        max_dev_e: None,
        max_dev_k: None,
        max_dev_y: y,
        max_dev_z: z,
        max_dev_outputs: out.expect("at least one index"),
        tolerance: default_tolerance(ctx),
        pass: false,
    }
    .seal())
}

/// Both checks from shared runs: the quadratic identities for
/// `n = 0..=2N`, the quartic ones for `n = 0..=N`, and additionally
/// `|π_n − p_{2n}|`.
pub fn check_all(n: u32, ctx: PrecisionContext) -> Result<EquivalenceReport> {
    let run = run_quadratic(ctx, 2 * n)?;
    let bb4 = borwein::bb4_states(ctx, n)?;
    let [e, k, out_quad] = quadratic_deviations(&run, 2 * n)?;
    let [y, z, out_quart] = quartic_deviations(&run.bb2, &bb4, n)?;
    let mut out = larger(out_quad, out_quart);
    for (q, p) in bb4.iter().zip(run.outputs.iter().step_by(2)) {
        out = max_abs(out, &borwein::bb4_output(q)?, p)?;
    }
    Ok(EquivalenceReport {
        iterations: n,
        max_dev_e: e,
        max_dev_k: k,
        max_dev_y: y,
        max_dev_z: z,
        max_dev_outputs: out.expect("at least one index"),
        tolerance: default_tolerance(ctx),
        pass: false,
    }
    .seal())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx(d: usize) -> PrecisionContext {
        PrecisionContext::new(d).unwrap()
    }

    fn noise(c: PrecisionContext) -> BigFixed {
        BigFixed::pow2(20 - c.frac_bits() as i64, c)
    }

    #[test]
    fn zero_iterations_agree_to_noise() {
        let c = ctx(50);
        let r = check_all(0, c).unwrap();
        assert!(r.pass);
        assert!(r.passes(&noise(c)));
        assert!(r.max_dev_z.unwrap().is_zero());
    }

    #[test]
    fn quadratic_at_200_digits() {
        let c = ctx(200);
        let r = check_quadratic_equivalence(5, c).unwrap();
        assert!(r.pass);
        assert!(r.passes(&BigFixed::pow10(-190, c)));
        assert!(r.max_dev_y.is_none());
    }

    #[test]
    fn quartic_at_500_digits() {
        let c = ctx(500);
        let r = check_quartic_equivalence(3, c).unwrap();
        assert!(r.pass);
        assert!(r.passes(&BigFixed::pow10(-480, c)));
    }

    #[test]
    fn pass_is_monotone_in_tolerance() {
        let c = ctx(100);
        let r = check_all(2, c).unwrap();
        assert!(r.pass);
        let tight = BigFixed::zero(c);
        assert!(!r.passes(&tight) || r.max_deviation().is_zero());
        assert!(r.passes(&r.tolerance.shift_pow2(10)));
    }
}
