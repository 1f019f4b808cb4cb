//! The Brent-Salamin (Gauss-Legendre) iteration.
//!
//! Starting from `a₀ = 1`, `b₀ = 1/√2` the state advances by the arithmetic
//! and geometric means while accumulating `S_n = Σ_{j=1..n} 2^j·c_j²`; the
//! approximation after `n` steps is `p_n = (a_n + b_n)² / (1 − 2·S_n)`.

use alloc::string::String;
use alloc::vec::Vec;

use crate::convergence::{self, ConvergenceReport};
use crate::error::{Error, Result};
use crate::fixedpoint::{BigFixed, PrecisionContext};

/// Bits of slack above the last place used as the convergence cutoff in
/// [`agm_limit`].
pub const LIMIT_SLACK_BITS: i64 = 8;

const MAX_LIMIT_STEPS: u32 = 10_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AgmState {
    pub n: u32,
    pub a: BigFixed,
    pub b: BigFixed,
    /// `c_n² = a_n² − b_n²`
    pub c_sq: BigFixed,
    /// `S_n = Σ_{j=1..n} 2^j·c_j²`
    pub s: BigFixed,
}

impl AgmState {
    /// A state at `n = 0` for arbitrary starting means.
    pub fn from_pair(a: BigFixed, b: BigFixed) -> Result<Self> {
        let c_sq = a.square().try_sub(&b.square())?;
        let s = BigFixed::zero(a.context());
        Ok(AgmState {
            n: 0,
            a,
            b,
            c_sq,
            s,
        })
    }

    pub fn context(&self) -> PrecisionContext {
        self.a.context()
    }
}

/// `a₀ = 1`, `b₀ = 1/√2`, `c₀² = a₀² − b₀²`, `S₀ = 0`.
pub fn agm_init(ctx: PrecisionContext) -> AgmState {
    let a = BigFixed::one(ctx);
    // √(1/2) directly: one truncation instead of a root and a division
    let b = BigFixed::one(ctx)
        .shift_pow2(-1)
        .sqrt()
        .expect("1/2 is positive");
    let c_sq = &a.square() - &b.square();
    AgmState {
        n: 0,
        a,
        b,
        c_sq,
        s: BigFixed::zero(ctx),
    }
}

/// One step of the mean iteration.
///
/// `c²` is taken as `((a − b)/2)²` rather than `a'² − b'²`, which would
/// cancel half of the working digits.
pub fn agm_step(st: &AgmState) -> Result<AgmState> {
    let a = st.a.try_add(&st.b)?.shift_pow2(-1);
    let b = st.a.sqrt_of_product(&st.b)?;
    let diff = st.a.try_sub(&st.b)?;
    let c_sq = diff.square().shift_pow2(-2);
    let n = st.n + 1;
    let s = st.s.try_add(&c_sq.shift_pow2(n as i64))?;
    Ok(AgmState { n, a, b, c_sq, s })
}

/// `p_n = (a_n + b_n)² / (1 − 2·S_n)`.
pub fn agm_output(st: &AgmState) -> Result<BigFixed> {
    let ctx = st.context();
    let num = st.a.try_add(&st.b)?.square();
    let den = BigFixed::one(ctx).try_sub(&st.s.shift_pow2(1))?;
    if den.signum() <= 0 {
        return Err(Error::NonPositive {
            quantity: "1 - 2·S_n",
        });
    }
    num.try_div(&den)
}

/// The states `0..=steps` of the π iteration.
pub fn agm_states(ctx: PrecisionContext, steps: u32) -> Result<Vec<AgmState>> {
    let mut states = Vec::with_capacity(steps as usize + 1);
    states.push(agm_init(ctx));
    for i in 0..steps as usize {
        let next = agm_step(&states[i])?;
        states.push(next);
    }
    Ok(states)
}

/// `p_0, …, p_steps`.
pub fn brent_salamin_outputs(ctx: PrecisionContext, steps: u32) -> Result<Vec<BigFixed>> {
    agm_states(ctx, steps)?.iter().map(agm_output).collect()
}

/// `p_N` after `iterations` steps.
pub fn brent_salamin_pi(ctx: PrecisionContext, iterations: u32) -> Result<BigFixed> {
    let mut st = agm_init(ctx);
    for _ in 0..iterations {
        st = agm_step(&st)?;
    }
    agm_output(&st)
}

/// Runs the iteration for `iterations` steps (by default the count the
/// error bound says is enough for `digits`), returning `p_N` truncated to
/// `digits` decimals together with the per-iteration convergence record.
pub fn run_brent_salamin(
    digits: usize,
    iterations: Option<u32>,
) -> Result<(String, ConvergenceReport)> {
    let ctx = PrecisionContext::new(digits)?;
    let reference_steps = convergence::required_iterations(digits) + 1;
    let n = iterations.unwrap_or(reference_steps - 1);
    let outputs = brent_salamin_outputs(ctx, reference_steps.max(n + 1))?;
    let text = outputs[n as usize].to_decimal_string(digits)?;
    let report = convergence::report_from_outputs(&outputs, n, &outputs[reference_steps as usize])?;
    Ok((text, report))
}

/// The arithmetic-geometric mean of two positive values, iterated until
/// `|a − b| < 2^(−F+8)`.
pub fn agm_limit(a0: &BigFixed, b0: &BigFixed) -> Result<BigFixed> {
    if a0.signum() <= 0 {
        return Err(Error::NonPositive { quantity: "a0" });
    }
    if b0.signum() <= 0 {
        return Err(Error::NonPositive { quantity: "b0" });
    }
    let ctx = a0.context();
    let cutoff = BigFixed::pow2(LIMIT_SLACK_BITS - ctx.frac_bits() as i64, ctx);
    let (mut a, mut b) = (a0.clone(), b0.clone());
    for _ in 0..MAX_LIMIT_STEPS {
        if a.try_sub(&b)?.abs() < cutoff {
            return Ok(a);
        }
        let next_a = a.try_add(&b)?.shift_pow2(-1);
        b = a.sqrt_of_product(&b)?;
        a = next_a;
    }
    Err(Error::NotConverged {
        what: "AGM",
        refinements: MAX_LIMIT_STEPS,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const INV_SQRT2: &str = "0.7071067811865475244008443621048490392848359376884740365";
    const A1: &str = "0.853553390593273762200422181052";
    const C1_SQ: &str = "0.021446609406726237799577818947";
    const AGM_1_INV_SQRT2: &str = "0.847213084793979086606499123482191636481445910";
    const P0: &str = "2.914213562373095048801688724209698078569671875";
    const P1: &str = "3.140579250522168248311331268975823311773440237";
    const P2: &str = "3.141592646213542282149344431982695774314437223";

    fn ctx(d: usize) -> PrecisionContext {
        PrecisionContext::new(d).unwrap()
    }

    fn digits(x: &BigFixed, d: usize) -> String {
        x.to_decimal_string(d).unwrap()
    }

    #[test]
    fn initial_state() {
        let st = agm_init(ctx(55));
        assert_eq!(st.a, BigFixed::one(ctx(55)));
        assert_eq!(digits(&st.b, 55), INV_SQRT2);
        let half = BigFixed::one(ctx(55)).shift_pow2(-1);
        let dev = (&st.c_sq - &half).abs();
        assert!(dev < BigFixed::pow2(4 - ctx(55).frac_bits() as i64, ctx(55)));
        assert!(st.s.is_zero());
    }

    #[test]
    fn first_step() {
        let c = ctx(30);
        let st = agm_step(&agm_init(c)).unwrap();
        assert_eq!(st.n, 1);
        assert_eq!(digits(&st.a, 30), A1);
        assert_eq!(digits(&st.c_sq, 30), C1_SQ);
        assert_eq!(st.s, st.c_sq.shift_pow2(1));
    }

    #[test]
    fn equal_means_are_a_fixed_point() {
        let c = ctx(40);
        let x = BigFixed::from_decimal_string("0.912345678901234567", c).unwrap();
        let st = AgmState::from_pair(x.clone(), x.clone()).unwrap();
        let next = agm_step(&st).unwrap();
        assert_eq!(next.a, x);
        assert_eq!(next.b, x);
        assert!(next.c_sq.is_zero());
    }

    #[test]
    fn first_outputs() {
        let outs = brent_salamin_outputs(ctx(60), 2).unwrap();
        assert_eq!(digits(&outs[0], 45), P0);
        assert_eq!(digits(&outs[1], 45), P1);
        assert_eq!(digits(&outs[2], 45), P2);
    }

    #[test]
    fn run_with_explicit_iterations() {
        let (text, report) = run_brent_salamin(40, Some(4)).unwrap();
        assert_eq!(text, "3.1415926535897932384626433832795028841971");
        assert_eq!(report.records.len(), 5);
        let (text, _) = run_brent_salamin(17, Some(3)).unwrap();
        assert_eq!(text, "3.14159265358979323");
        assert!(run_brent_salamin(0, None).is_err());
    }

    #[test]
    fn limits() {
        let c = ctx(60);
        let one = BigFixed::one(c);
        assert_eq!(agm_limit(&one, &one).unwrap(), one);
        let four = BigFixed::from_int(4, c);
        assert_eq!(agm_limit(&four, &four).unwrap(), four);
        let b = agm_init(c).b;
        assert_eq!(digits(&agm_limit(&one, &b).unwrap(), 45), AGM_1_INV_SQRT2);
        // argument order does not matter
        assert_eq!(digits(&agm_limit(&b, &one).unwrap(), 45), AGM_1_INV_SQRT2);
        assert!(matches!(
            agm_limit(&BigFixed::zero(c), &one),
            Err(Error::NonPositive { .. })
        ));
        assert!(matches!(
            agm_limit(&one, &BigFixed::from_int(-1, c)),
            Err(Error::NonPositive { .. })
        ));
    }

    #[test]
    fn limit_agrees_with_output_identity() {
        // (a_N + b_N)² = 4·a_{N+1}², so 2·a_{N+1} = √(p_N · (1 − 2·S_N))
        let c = ctx(60);
        let states = agm_states(c, 8).unwrap();
        let st = &states[7];
        let p = agm_output(st).unwrap();
        let den = &BigFixed::one(c) - &st.s.shift_pow2(1);
        let twice_a = (&p * &den).sqrt().unwrap();
        let dev = (&twice_a - &states[8].a.shift_pow2(1)).abs();
        assert!(dev < BigFixed::pow2(10 - c.frac_bits() as i64, c));
    }
}
