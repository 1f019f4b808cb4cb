//! The quadratic and quartic Borwein iterations.
//!
//! Quadratic: `k₀ = 3 − 2√2`, `e₀ = 6 − 4√2`,
//! `k_n = (1 − √(1 − k²_{n−1})) / (1 + √(1 − k²_{n−1}))`,
//! `e_n = e_{n−1}(1 + k_n)² − 2^{n+1}k_n`, output `1/e_N`.
//!
//! Quartic: `y₀ = √2 − 1`, `z₀ = 6 − 4√2`,
//! `y_n = (1 − ⁴√(1 − y⁴_{n−1})) / (1 + ⁴√(1 − y⁴_{n−1}))`,
//! `z_n = z_{n−1}(1 + y_n)⁴ − 2·4^n·y_n(1 + y_n + y_n²)`, output `1/z_N`.
//!
//! The second update in each step consumes the *new* `k_n` or `y_n`.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::fixedpoint::{BigFixed, PrecisionContext};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BorweinQuadState {
    pub n: u32,
    pub k: BigFixed,
    pub e: BigFixed,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BorweinQuartState {
    pub n: u32,
    pub y: BigFixed,
    pub z: BigFixed,
}

fn sqrt2(ctx: PrecisionContext) -> BigFixed {
    BigFixed::from_int(2, ctx).sqrt().expect("2 is positive")
}

/// `6 − 4√2`, shared by both iterations so `z₀ = e₀` holds exactly.
fn six_minus_four_sqrt2(ctx: PrecisionContext) -> BigFixed {
    &BigFixed::from_int(6, ctx) - &sqrt2(ctx).shift_pow2(2)
}

/// Rejects values outside `[0, 1)`. Zero is the fixed point of both maps.
fn check_unit(x: &BigFixed, quantity: &'static str) -> Result<()> {
    if x.is_negative() || *x >= BigFixed::one(x.context()) {
        return Err(Error::OutOfRange { quantity });
    }
    Ok(())
}

fn reciprocal(x: &BigFixed, quantity: &'static str) -> Result<BigFixed> {
    if x.signum() <= 0 {
        return Err(Error::NonPositive { quantity });
    }
    BigFixed::one(x.context()).try_div(x)
}

/// `√((1 − k)(1 + k))`
fn complement(k: &BigFixed) -> Result<BigFixed> {
    let one = BigFixed::one(k.context());
    one.try_sub(k)?.sqrt_of_product(&one.try_add(k)?)
}

pub fn bb2_init(ctx: PrecisionContext) -> BorweinQuadState {
    let e = six_minus_four_sqrt2(ctx);
    BorweinQuadState {
        n: 0,
        k: e.shift_pow2(-1),
        e,
    }
}

pub fn bb2_step(st: &BorweinQuadState) -> Result<BorweinQuadState> {
    check_unit(&st.k, "k")?;
    let one = BigFixed::one(st.k.context());
    let s = complement(&st.k)?;
    let k = one.try_sub(&s)?.try_div(&one.try_add(&s)?)?;
    let n = st.n + 1;
    let e =
        st.e.try_mul(&one.try_add(&k)?.square())?
            .try_sub(&k.shift_pow2(n as i64 + 1))?;
    Ok(BorweinQuadState { n, k, e })
}

pub fn bb2_output(st: &BorweinQuadState) -> Result<BigFixed> {
    reciprocal(&st.e, "e")
}

impl BorweinQuadState {
    pub fn context(&self) -> PrecisionContext {
        self.k.context()
    }

    /// `√k_{n+1}` evaluated as `k_n / (1 + √(1 − k_n²))`.
    ///
    /// Taking the root of the stored `k_{n+1}` instead would amplify its
    /// absolute rounding error to the square root of an ulp once `k` is tiny.
    pub fn next_k_sqrt(&self) -> Result<BigFixed> {
        check_unit(&self.k, "k")?;
        let one = BigFixed::one(self.context());
        self.k.try_div(&one.try_add(&complement(&self.k)?)?)
    }
}

pub fn bb4_init(ctx: PrecisionContext) -> BorweinQuartState {
    BorweinQuartState {
        n: 0,
        y: &sqrt2(ctx) - &BigFixed::one(ctx),
        z: six_minus_four_sqrt2(ctx),
    }
}

pub fn bb4_step(st: &BorweinQuartState) -> Result<BorweinQuartState> {
    check_unit(&st.y, "y")?;
    let one = BigFixed::one(st.y.context());
    let r = one.try_sub(&st.y.square().square())?.fourth_root()?;
    let y = one.try_sub(&r)?.try_div(&one.try_add(&r)?)?;
    let n = st.n + 1;
    let y_sq = y.square();
    let poly = one.try_add(&y)?.try_add(&y_sq)?;
    let z =
        st.z.try_mul(&one.try_add(&y)?.square().square())?
            .try_sub(&y.try_mul(&poly)?.shift_pow2(2 * n as i64 + 1))?;
    Ok(BorweinQuartState { n, y, z })
}

pub fn bb4_output(st: &BorweinQuartState) -> Result<BigFixed> {
    reciprocal(&st.z, "z")
}

impl BorweinQuartState {
    pub fn context(&self) -> PrecisionContext {
        self.y.context()
    }
}

/// States `0..=steps` of the quadratic iteration.
pub fn bb2_states(ctx: PrecisionContext, steps: u32) -> Result<Vec<BorweinQuadState>> {
    let mut states = alloc::vec![bb2_init(ctx)];
    for i in 0..steps as usize {
        let next = bb2_step(&states[i])?;
        states.push(next);
    }
    Ok(states)
}

/// States `0..=steps` of the quartic iteration.
pub fn bb4_states(ctx: PrecisionContext, steps: u32) -> Result<Vec<BorweinQuartState>> {
    let mut states = alloc::vec![bb4_init(ctx)];
    for i in 0..steps as usize {
        let next = bb4_step(&states[i])?;
        states.push(next);
    }
    Ok(states)
}

/// `π̂_N = 1/e_N`.
pub fn quadratic_pi(ctx: PrecisionContext, iterations: u32) -> Result<BigFixed> {
    let mut st = bb2_init(ctx);
    for _ in 0..iterations {
        st = bb2_step(&st)?;
    }
    bb2_output(&st)
}

/// `π_N = 1/z_N`.
pub fn quartic_pi(ctx: PrecisionContext, iterations: u32) -> Result<BigFixed> {
    let mut st = bb4_init(ctx);
    for _ in 0..iterations {
        st = bb4_step(&st)?;
    }
    bb4_output(&st)
}
