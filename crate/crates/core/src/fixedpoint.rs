//! Signed binary fixed-point numbers with a shared, immutable precision
//! context.
//!
//! A [`BigFixed`] stores `sign · mantissa · 2^(-F)` where `F` is the
//! context's fraction bit count. Every operation truncates toward zero;
//! accuracy of printed digits comes from the guard digits carried in the
//! [`PrecisionContext`], not from the rounding mode. Values from different
//! contexts never mix: the checked operations return
//! [`Error::ContextMismatch`] and the operator impls panic.

use alloc::string::String;
use core::cmp::Ordering;
use core::fmt;
use core::ops::{Add, Div, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::nat::{Nat, TEN_POW_19};

/// Guard digits used when none are given: the target digit count plus fifty.
pub const DEFAULT_GUARD_DIGITS: usize = 50;

/// Smallest fraction width any context gets.
pub const MIN_FRAC_BITS: usize = 8;

// log2(10) rounded up at the 21st digit, as a ratio of integers. Rounding up
// keeps 2^(-F) <= 10^-(digits) for every digit count we accept.
const LOG2_10_NUM: u128 = 332_192_809_488_736_234_788;
const LOG2_10_DEN: u128 = 100_000_000_000_000_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PrecisionContext {
    requested_digits: usize,
    guard_digits: usize,
    frac_bits: usize,
}

impl PrecisionContext {
    /// Context for `requested_digits` decimals with the default guard.
    pub fn new(requested_digits: usize) -> Result<Self> {
        Self::with_guard(requested_digits, DEFAULT_GUARD_DIGITS)
    }

    pub fn with_guard(requested_digits: usize, guard_digits: usize) -> Result<Self> {
        if requested_digits == 0 {
            return Err(Error::InvalidDigits(requested_digits));
        }
        let total = requested_digits
            .checked_add(guard_digits)
            .ok_or(Error::InvalidDigits(requested_digits))?;
        let bits = (total as u128 * LOG2_10_NUM).div_ceil(LOG2_10_DEN);
        let frac_bits = usize::try_from(bits)
            .map_err(|_| Error::InvalidDigits(requested_digits))?
            .max(MIN_FRAC_BITS);
        Ok(PrecisionContext {
            requested_digits,
            guard_digits,
            frac_bits,
        })
    }

    pub fn requested_digits(&self) -> usize {
        self.requested_digits
    }

    pub fn guard_digits(&self) -> usize {
        self.guard_digits
    }

    /// Decimal digits carried internally (requested plus guard).
    pub fn working_digits(&self) -> usize {
        self.requested_digits + self.guard_digits
    }

    pub fn frac_bits(&self) -> usize {
        self.frac_bits
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BigFixed {
    // invariant: never negative when the mantissa is zero
    negative: bool,
    mantissa: Nat,
    ctx: PrecisionContext,
}

impl BigFixed {
    /// Builds `± mantissa · 2^(-F)` directly from a raw mantissa.
    pub fn from_parts(negative: bool, mantissa: Nat, ctx: PrecisionContext) -> Self {
        let negative = negative && !mantissa.is_zero();
        BigFixed {
            negative,
            mantissa,
            ctx,
        }
    }

    pub fn zero(ctx: PrecisionContext) -> Self {
        Self::from_parts(false, Nat::zero(), ctx)
    }

    pub fn one(ctx: PrecisionContext) -> Self {
        Self::from_int(1, ctx)
    }

    pub fn from_int(v: i64, ctx: PrecisionContext) -> Self {
        let mag = Nat::from_u64(v.unsigned_abs()).shl(ctx.frac_bits);
        Self::from_parts(v < 0, mag, ctx)
    }

    /// The smallest positive representable value, `2^(-F)`.
    pub fn ulp(ctx: PrecisionContext) -> Self {
        Self::from_parts(false, Nat::one(), ctx)
    }

    /// `2^exp`, truncated when `exp < -F`.
    pub fn pow2(exp: i64, ctx: PrecisionContext) -> Self {
        Self::one(ctx).shift_pow2(exp)
    }

    /// `10^exp`; negative exponents are truncated toward zero.
    pub fn pow10(exp: i64, ctx: PrecisionContext) -> Self {
        let p = Nat::pow10(exp.unsigned_abs() as usize);
        let mantissa = if exp >= 0 {
            p.shl(ctx.frac_bits)
        } else {
            Nat::one().shl(ctx.frac_bits).div_rem(&p).0
        };
        Self::from_parts(false, mantissa, ctx)
    }

    /// Converts a finite double exactly, truncating bits below `2^(-F)`.
    pub fn from_f64(x: f64, ctx: PrecisionContext) -> Result<Self> {
        if !x.is_finite() {
            return Err(Error::Parse {
                input: alloc::format!("{x}"),
                reason: "not a finite number",
            });
        }
        if x == 0.0 {
            return Ok(Self::zero(ctx));
        }
        let (frac, exp) = libm::frexp(x.abs());
        let int = (frac * (1u64 << 53) as f64) as u64;
        let shift = exp as i64 - 53 + ctx.frac_bits as i64;
        let mantissa = if shift >= 0 {
            Nat::from_u64(int).shl(shift as usize)
        } else {
            Nat::from_u64(int).shr(shift.unsigned_abs() as usize)
        };
        Ok(Self::from_parts(x < 0.0, mantissa, ctx))
    }

    pub fn context(&self) -> PrecisionContext {
        self.ctx
    }

    pub fn frac_bits(&self) -> usize {
        self.ctx.frac_bits
    }

    pub fn mantissa(&self) -> &Nat {
        &self.mantissa
    }

    /// -1, 0 or +1.
    pub fn signum(&self) -> i8 {
        if self.mantissa.is_zero() {
            0
        } else if self.negative {
            -1
        } else {
            1
        }
    }

    pub fn is_zero(&self) -> bool {
        self.mantissa.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.negative
    }

    pub fn abs(&self) -> Self {
        Self::from_parts(false, self.mantissa.clone(), self.ctx)
    }

    fn check(&self, other: &BigFixed) -> Result<()> {
        if self.ctx.frac_bits != other.ctx.frac_bits {
            return Err(Error::ContextMismatch {
                left: self.ctx.frac_bits,
                right: other.ctx.frac_bits,
            });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &BigFixed) -> Result<BigFixed> {
        self.check(other)?;
        Ok(self.signed_add(other, other.negative))
    }

    pub fn try_sub(&self, other: &BigFixed) -> Result<BigFixed> {
        self.check(other)?;
        Ok(self.signed_add(other, !other.negative))
    }

    // self + (±|other|), with the sign of the second operand given explicitly
    fn signed_add(&self, other: &BigFixed, other_negative: bool) -> BigFixed {
        if self.negative == other_negative {
            return Self::from_parts(self.negative, self.mantissa.add(&other.mantissa), self.ctx);
        }
        match self.mantissa.cmp(&other.mantissa) {
            Ordering::Less => {
                Self::from_parts(other_negative, other.mantissa.sub(&self.mantissa), self.ctx)
            }
            _ => Self::from_parts(self.negative, self.mantissa.sub(&other.mantissa), self.ctx),
        }
    }

    /// Product truncated toward zero to `F` fraction bits.
    pub fn try_mul(&self, other: &BigFixed) -> Result<BigFixed> {
        self.check(other)?;
        let m = self.mantissa.mul(&other.mantissa).shr(self.ctx.frac_bits);
        Ok(Self::from_parts(
            self.negative ^ other.negative,
            m,
            self.ctx,
        ))
    }

    pub fn square(&self) -> BigFixed {
        let m = self.mantissa.square().shr(self.ctx.frac_bits);
        Self::from_parts(false, m, self.ctx)
    }

    /// Quotient truncated toward zero; the error is below one unit in the
    /// last place.
    pub fn try_div(&self, other: &BigFixed) -> Result<BigFixed> {
        self.check(other)?;
        if other.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let num = self.mantissa.shl(self.ctx.frac_bits);
        let (q, _) = num.div_rem(&other.mantissa);
        Ok(Self::from_parts(
            self.negative ^ other.negative,
            q,
            self.ctx,
        ))
    }

    /// Square root, truncated: `0 <= √x - r < 2^(-F)`.
    pub fn sqrt(&self) -> Result<BigFixed> {
        if self.negative {
            return Err(Error::NegativeRoot);
        }
        let m = self.mantissa.shl(self.ctx.frac_bits).isqrt();
        Ok(Self::from_parts(false, m, self.ctx))
    }

    /// `√(x·y)` with a single truncation (the product is never rounded).
    pub fn sqrt_of_product(&self, other: &BigFixed) -> Result<BigFixed> {
        self.check(other)?;
        if self.negative ^ other.negative {
            return Err(Error::NegativeRoot);
        }
        let m = self.mantissa.mul(&other.mantissa).isqrt();
        Ok(Self::from_parts(false, m, self.ctx))
    }

    /// `x^(1/4)` as the square root of the square root.
    pub fn fourth_root(&self) -> Result<BigFixed> {
        self.sqrt()?.sqrt()
    }

    /// `e^x`, accurate to a few units in the last place.
    ///
    /// The argument is scaled down by `2^k`, summed as a Taylor series and
    /// squared back up `k` times, all with enough extra bits that the
    /// squarings do not reach the last place. Negative arguments go through
    /// the reciprocal.
    pub fn exp(&self) -> Result<BigFixed> {
        let f = self.ctx.frac_bits;
        let int_bits = self.mantissa.bits().saturating_sub(f);
        if int_bits > 32 {
            return Err(Error::OutOfRange {
                quantity: "exp argument",
            });
        }
        let reduction = libm::sqrt(f as f64) as usize + 8;
        let k = int_bits + reduction;
        let growth = if self.negative {
            0
        } else {
            (self.to_f64() * core::f64::consts::LOG2_E) as usize + 2
        };
        let w = f + k + 32 + growth;
        let r = self.mantissa.shl(w - f - k);
        let mut sum = Nat::one().shl(w);
        let mut term = sum.clone();
        let mut i = 1;
        while !term.is_zero() {
            term = term.mul(&r).shr(w).divrem_small(i).0;
            sum = sum.add(&term);
            i += 1;
        }
        for _ in 0..k {
            sum = sum.square().shr(w);
        }
        let m = if self.negative {
            Nat::one().shl(2 * w).div_rem(&sum).0
        } else {
            sum
        };
        Ok(Self::from_parts(false, m.shr(w - f), self.ctx))
    }

    /// `x · 2^j`: exact for `j >= 0`, truncated toward zero otherwise.
    pub fn shift_pow2(&self, j: i64) -> BigFixed {
        let m = if j >= 0 {
            self.mantissa.shl(j as usize)
        } else {
            self.mantissa.shr(j.unsigned_abs() as usize)
        };
        Self::from_parts(self.negative, m, self.ctx)
    }

    pub fn try_cmp(&self, other: &BigFixed) -> Result<Ordering> {
        self.check(other)?;
        Ok(match (self.signum(), other.signum()) {
            (a, b) if a != b => a.cmp(&b),
            (-1, _) => other.mantissa.cmp(&self.mantissa),
            _ => self.mantissa.cmp(&other.mantissa),
        })
    }

    /// Approximate `log2 |x|`; negative infinity for zero.
    pub fn log2_abs(&self) -> f64 {
        if self.is_zero() {
            return f64::NEG_INFINITY;
        }
        let (top, shift) = self.mantissa.top_u64();
        libm::log2(top as f64) + shift as f64 - self.ctx.frac_bits as f64
    }

    /// Approximate `log10 |x|`; negative infinity for zero.
    pub fn log10_abs(&self) -> f64 {
        self.log2_abs() * core::f64::consts::LOG10_2
    }

    /// Nearest-ish double (truncated to 64 significant bits first). Values
    /// below the double range come back as zero.
    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let (top, shift) = self.mantissa.top_u64();
        let exp = shift as i64 - self.ctx.frac_bits as i64;
        let exp = exp.clamp(i32::MIN as i64, i32::MAX as i64) as i32;
        let v = libm::ldexp(top as f64, exp);
        if self.negative {
            -v
        } else {
            v
        }
    }

    /// Short scientific rendering such as `7.38e-9`, for reporting values
    /// that may lie far outside the double range.
    pub fn to_sci_string(&self) -> String {
        if self.is_zero() {
            return String::from("0");
        }
        let l = self.log10_abs();
        let mut exp = libm::floor(l);
        let mut lead = libm::pow(10.0, l - exp);
        if lead >= 9.995 {
            lead /= 10.0;
            exp += 1.0;
        }
        let sign = if self.negative { "-" } else { "" };
        alloc::format!("{sign}{lead:.2}e{}", exp as i64)
    }

    /// Decimal expansion truncated (never rounded) to `digits` fraction
    /// digits. `digits` may not exceed the context's requested digits.
    pub fn to_decimal_string(&self, digits: usize) -> Result<String> {
        if digits > self.ctx.requested_digits {
            return Err(Error::DigitsExceedContext {
                requested: digits,
                available: self.ctx.requested_digits,
            });
        }
        Ok(self.decimal_expansion(digits))
    }

    pub(crate) fn decimal_expansion(&self, digits: usize) -> String {
        let f = self.ctx.frac_bits;
        let mut out = String::new();
        let int = self.mantissa.shr(f);
        let mut frac = self.mantissa.low_bits(f);
        let truncated_to_zero = int.is_zero() && {
            // a negative value whose printed digits are all zero prints unsigned
            let scale = Nat::pow10(digits);
            frac.mul(&scale).shr(f).is_zero()
        };
        if self.negative && !truncated_to_zero {
            out.push('-');
        }
        out.push_str(&int.to_decimal_string());
        if digits == 0 {
            return out;
        }
        out.push('.');
        let mut produced = 0;
        while produced < digits {
            frac = frac.mul_small(TEN_POW_19);
            let chunk = frac.shr(f).low_u128() as u64;
            frac = frac.low_bits(f);
            let take = (digits - produced).min(19);
            let text = alloc::format!("{chunk:019}");
            out.push_str(&text[..take]);
            produced += take;
        }
        out
    }

    /// Parses `[-]int[.frac]`. The result lies within `2^(-F)` of the
    /// numeral and is never smaller in magnitude, so truncating it back to
    /// at most `requested_digits` digits reproduces the input.
    pub fn from_decimal_string(s: &str, ctx: PrecisionContext) -> Result<BigFixed> {
        let parse_err = |reason| Error::Parse {
            input: String::from(s),
            reason,
        };
        let (negative, body) = if let Some(rest) = s.strip_prefix('-') {
            (true, rest)
        } else if let Some(rest) = s.strip_prefix('\u{2212}') {
            (true, rest)
        } else {
            (false, s)
        };
        let (int_part, frac_part) = match body.split_once('.') {
            Some((i, f)) => {
                if f.is_empty() {
                    return Err(parse_err("empty fraction after '.'"));
                }
                (i, f)
            }
            None => (body, ""),
        };
        if int_part.is_empty() {
            return Err(parse_err("missing integer part"));
        }
        let int = Nat::from_decimal_digits(int_part).ok_or_else(|| parse_err("invalid digit"))?;
        let frac = Nat::from_decimal_digits(frac_part).ok_or_else(|| parse_err("invalid digit"))?;
        let f = ctx.frac_bits;
        let (q, r) = frac.shl(f).div_rem(&Nat::pow10(frac_part.len()));
        let frac_bits = if r.is_zero() { q } else { q.add_small(1) };
        Ok(Self::from_parts(negative, int.shl(f).add(&frac_bits), ctx))
    }
}

impl fmt::Display for BigFixed {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.decimal_expansion(self.ctx.requested_digits))
    }
}

impl PartialOrd for BigFixed {
    /// Values from different contexts are unordered.
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.try_cmp(other).ok()
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl $trait<&BigFixed> for &BigFixed {
            type Output = BigFixed;

            /// Panics on mixed contexts (and, for division, a zero divisor);
            /// use the `try_` method to get an error instead.
            fn $method(self, rhs: &BigFixed) -> BigFixed {
                match self.$checked(rhs) {
                    Ok(v) => v,
                    Err(e) => panic!("{}", e),
                }
            }
        }

        impl $trait<BigFixed> for BigFixed {
            type Output = BigFixed;

            fn $method(self, rhs: BigFixed) -> BigFixed {
                (&self).$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, try_add);
forward_binop!(Sub, sub, try_sub);
forward_binop!(Mul, mul, try_mul);
forward_binop!(Div, div, try_div);

impl Neg for &BigFixed {
    type Output = BigFixed;

    fn neg(self) -> BigFixed {
        BigFixed::from_parts(!self.negative, self.mantissa.clone(), self.ctx)
    }
}

impl Neg for BigFixed {
    type Output = BigFixed;

    fn neg(self) -> BigFixed {
        -&self
    }
}
