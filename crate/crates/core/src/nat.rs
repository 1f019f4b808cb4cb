//! Unsigned arbitrary-size integers on little-endian 64-bit limbs.
//!
//! Only what the fixed-point layer needs: ring operations, shifts,
//! Newton-based division and integer square root, and decimal conversion
//! helpers. Multiplication switches from schoolbook to Karatsuba at
//! [`KARATSUBA_THRESHOLD`] limbs.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

/// Operand size (in limbs) at which multiplication switches to Karatsuba.
pub const KARATSUBA_THRESHOLD: usize = 32;

/// Largest power of ten that fits in a limb.
pub(crate) const TEN_POW_19: u64 = 10_000_000_000_000_000_000;

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Nat {
    // no trailing zero limbs; zero is the empty vector
    limbs: Vec<u64>,
}

impl Nat {
    pub fn zero() -> Self {
        Nat { limbs: Vec::new() }
    }

    pub fn one() -> Self {
        Nat::from_u64(1)
    }

    pub fn from_u64(v: u64) -> Self {
        Nat::from_limbs(vec![v])
    }

    pub fn from_u128(v: u128) -> Self {
        Nat::from_limbs(vec![v as u64, (v >> 64) as u64])
    }

    pub fn from_limbs(mut limbs: Vec<u64>) -> Self {
        normalize(&mut limbs);
        Nat { limbs }
    }

    pub fn limbs(&self) -> &[u64] {
        &self.limbs
    }

    pub fn is_zero(&self) -> bool {
        self.limbs.is_empty()
    }

    /// Number of significant bits; zero for zero.
    pub fn bits(&self) -> usize {
        match self.limbs.last() {
            None => 0,
            Some(&top) => self.limbs.len() * 64 - top.leading_zeros() as usize,
        }
    }

    /// Lowest 128 bits.
    pub fn low_u128(&self) -> u128 {
        let lo = self.limbs.first().copied().unwrap_or(0) as u128;
        let hi = self.limbs.get(1).copied().unwrap_or(0) as u128;
        lo | (hi << 64)
    }

    /// The top (at most) 64 bits and the shift that restores the magnitude:
    /// `self ≈ top · 2^shift`, truncated.
    pub fn top_u64(&self) -> (u64, usize) {
        let b = self.bits();
        if b <= 64 {
            (self.low_u128() as u64, 0)
        } else {
            let shift = b - 64;
            ((self.shr(shift)).low_u128() as u64, shift)
        }
    }

    pub fn add(&self, other: &Nat) -> Nat {
        Nat::from_limbs(add_slices(&self.limbs, &other.limbs))
    }

    /// `self - other`; panics if `other > self`.
    pub fn sub(&self, other: &Nat) -> Nat {
        assert!(*self >= *other, "natural subtraction underflow");
        let mut out = self.limbs.clone();
        sub_assign(&mut out, &other.limbs);
        Nat::from_limbs(out)
    }

    pub fn mul(&self, other: &Nat) -> Nat {
        Nat::from_limbs(mul_slices(&self.limbs, &other.limbs))
    }

    pub fn square(&self) -> Nat {
        self.mul(self)
    }

    pub fn mul_small(&self, m: u64) -> Nat {
        let mut out = Vec::with_capacity(self.limbs.len() + 1);
        let mut carry = 0u128;
        for &l in &self.limbs {
            let t = l as u128 * m as u128 + carry;
            out.push(t as u64);
            carry = t >> 64;
        }
        out.push(carry as u64);
        Nat::from_limbs(out)
    }

    pub fn add_small(&self, v: u64) -> Nat {
        let mut out = self.limbs.clone();
        add_assign_at(&mut out, &[v], 0);
        Nat::from_limbs(out)
    }

    /// Quotient and remainder by a single nonzero limb.
    pub fn divrem_small(&self, d: u64) -> (Nat, u64) {
        assert!(d != 0, "division by zero");
        let mut q = vec![0u64; self.limbs.len()];
        let mut rem = 0u128;
        for i in (0..self.limbs.len()).rev() {
            let cur = (rem << 64) | self.limbs[i] as u128;
            q[i] = (cur / d as u128) as u64;
            rem = cur % d as u128;
        }
        (Nat::from_limbs(q), rem as u64)
    }

    pub fn shl(&self, bits: usize) -> Nat {
        if self.is_zero() {
            return Nat::zero();
        }
        let (limb_shift, bit_shift) = (bits / 64, bits % 64);
        let mut out = vec![0u64; limb_shift];
        out.reserve(self.limbs.len() + 1);
        if bit_shift == 0 {
            out.extend_from_slice(&self.limbs);
        } else {
            let mut carry = 0u64;
            for &l in &self.limbs {
                out.push((l << bit_shift) | carry);
                carry = l >> (64 - bit_shift);
            }
            out.push(carry);
        }
        Nat::from_limbs(out)
    }

    /// Floor of `self / 2^bits`.
    pub fn shr(&self, bits: usize) -> Nat {
        let (limb_shift, bit_shift) = (bits / 64, bits % 64);
        if limb_shift >= self.limbs.len() {
            return Nat::zero();
        }
        let src = &self.limbs[limb_shift..];
        if bit_shift == 0 {
            return Nat::from_limbs(src.to_vec());
        }
        let mut out = Vec::with_capacity(src.len());
        for i in 0..src.len() {
            let hi = src.get(i + 1).copied().unwrap_or(0);
            out.push((src[i] >> bit_shift) | (hi << (64 - bit_shift)));
        }
        Nat::from_limbs(out)
    }

    /// `self mod 2^bits`.
    pub fn low_bits(&self, bits: usize) -> Nat {
        let (limbs, rem) = (bits / 64, bits % 64);
        if limbs >= self.limbs.len() {
            return self.clone();
        }
        let mut out = self.limbs[..limbs].to_vec();
        if rem != 0 {
            out.push(self.limbs[limbs] & ((1u64 << rem) - 1));
        }
        Nat::from_limbs(out)
    }

    /// Floor quotient and remainder. Panics on a zero divisor.
    ///
    /// The quotient comes from a Newton reciprocal of the divisor followed by
    /// one multiplication; a final correction makes the result exact.
    pub fn div_rem(&self, d: &Nat) -> (Nat, Nat) {
        assert!(!d.is_zero(), "division by zero");
        if self < d {
            return (Nat::zero(), self.clone());
        }
        if d.limbs.len() == 1 {
            let (q, r) = self.divrem_small(d.limbs[0]);
            return (q, Nat::from_u64(r));
        }
        let ld = d.bits();
        let p = self.bits() - ld + 2;
        let r = reciprocal(d, p);
        let mut q = self.mul(&r).shr(ld + p);
        let mut prod = q.mul(d);
        while prod > *self {
            q = q.sub(&Nat::one());
            prod = prod.sub(d);
        }
        let mut rem = self.sub(&prod);
        while rem >= *d {
            q = q.add_small(1);
            rem = rem.sub(d);
        }
        (q, rem)
    }

    /// Floor of the square root.
    pub fn isqrt(&self) -> Nat {
        let nb = self.bits();
        if nb == 0 {
            return Nat::zero();
        }
        if nb <= 100 {
            let v = self.low_u128();
            let mut x = libm::sqrt(v as f64) as u128;
            while x * x > v {
                x -= 1;
            }
            while (x + 1) * (x + 1) <= v {
                x += 1;
            }
            return Nat::from_u128(x);
        }
        // Root of the top half of the bits, then one Newton step at full size.
        let k = nb / 4 - 2;
        let x0 = self.shr(2 * k).isqrt().shl(k);
        let (q, _) = self.div_rem(&x0);
        let mut x = x0.add(&q).shr(1);
        let mut sq = x.square();
        while sq > *self {
            sq = sq.add_small(1).sub(&x.shl(1));
            x = x.sub(&Nat::one());
        }
        loop {
            let next = sq.add(&x.shl(1)).add_small(1);
            if next > *self {
                break;
            }
            sq = next;
            x = x.add_small(1);
        }
        x
    }

    pub fn pow10(exp: usize) -> Nat {
        let mut result = Nat::one();
        let mut base = Nat::from_u64(10);
        let mut e = exp;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.square();
            }
        }
        result
    }

    /// Parses a string of ASCII decimal digits (no sign, no separators).
    pub fn from_decimal_digits(digits: &str) -> Option<Nat> {
        if !digits.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        let bytes = digits.as_bytes();
        let mut acc = Nat::zero();
        let head = bytes.len() % 19;
        let mut chunks: Vec<&[u8]> = Vec::new();
        if head > 0 {
            chunks.push(&bytes[..head]);
        }
        chunks.extend(bytes[head..].chunks(19));
        for chunk in chunks {
            let mut v = 0u64;
            for &b in chunk {
                v = v * 10 + (b - b'0') as u64;
            }
            let scale = 10u64.pow(chunk.len() as u32);
            acc = acc.mul_small(scale).add_small(v);
        }
        Some(acc)
    }

    pub fn to_decimal_string(&self) -> String {
        if self.is_zero() {
            return String::from("0");
        }
        let mut chunks = Vec::new();
        let mut cur = self.clone();
        while !cur.is_zero() {
            let (q, r) = cur.divrem_small(TEN_POW_19);
            chunks.push(r);
            cur = q;
        }
        let mut out = String::new();
        let mut iter = chunks.iter().rev();
        if let Some(first) = iter.next() {
            out.push_str(&alloc::format!("{first}"));
        }
        for c in iter {
            out.push_str(&alloc::format!("{c:019}"));
        }
        out
    }
}

impl PartialOrd for Nat {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Nat {
    fn cmp(&self, other: &Self) -> Ordering {
        cmp_slices(&self.limbs, &other.limbs)
    }
}

/// Approximates `2^(bits(d) + p) / d` to within a few units, using Newton
/// iterations that double the working precision at each level.
fn reciprocal(d: &Nat, p: usize) -> Nat {
    let ld = d.bits();
    if p <= 62 {
        let t = ld.min(64);
        let top = d.shr(ld - t).low_u128();
        return Nat::from_u128((1u128 << (t + p)) / top);
    }
    let h = p / 2 + 8;
    let rh = reciprocal(d, h);
    let guard = p + 8;
    let (dp, lp) = if ld > guard {
        (d.shr(ld - guard), guard)
    } else {
        (d.clone(), ld)
    };
    let r0 = rh.shl(p - h);
    let prod = dp.mul(&r0);
    let target = Nat::one().shl(lp + p);
    if prod <= target {
        let corr = r0.mul(&target.sub(&prod)).shr(lp + p);
        r0.add(&corr)
    } else {
        let corr = r0.mul(&prod.sub(&target)).shr(lp + p);
        r0.sub(&corr)
    }
}

fn normalize(v: &mut Vec<u64>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

fn trimmed(s: &[u64]) -> &[u64] {
    let mut n = s.len();
    while n > 0 && s[n - 1] == 0 {
        n -= 1;
    }
    &s[..n]
}

fn cmp_slices(a: &[u64], b: &[u64]) -> Ordering {
    let (a, b) = (trimmed(a), trimmed(b));
    a.len()
        .cmp(&b.len())
        .then_with(|| a.iter().rev().cmp(b.iter().rev()))
}

fn add_slices(a: &[u64], b: &[u64]) -> Vec<u64> {
    let (long, short) = if a.len() >= b.len() { (a, b) } else { (b, a) };
    let mut out = long.to_vec();
    add_assign_at(&mut out, short, 0);
    out
}

/// `acc += x · 2^(64·offset)`, growing `acc` as needed.
fn add_assign_at(acc: &mut Vec<u64>, x: &[u64], offset: usize) {
    if acc.len() < offset + x.len() {
        acc.resize(offset + x.len(), 0);
    }
    let mut carry = false;
    for (i, &xi) in x.iter().enumerate() {
        let (s1, c1) = acc[offset + i].overflowing_add(xi);
        let (s2, c2) = s1.overflowing_add(carry as u64);
        acc[offset + i] = s2;
        carry = c1 || c2;
    }
    let mut i = offset + x.len();
    while carry {
        if i == acc.len() {
            acc.push(1);
            break;
        }
        let (s, c) = acc[i].overflowing_add(1);
        acc[i] = s;
        carry = c;
        i += 1;
    }
}

/// `acc -= x`; the caller guarantees `acc >= x`.
fn sub_assign(acc: &mut [u64], x: &[u64]) {
    let x = trimmed(x);
    let mut borrow = false;
    for (i, a) in acc.iter_mut().enumerate() {
        let xi = x.get(i).copied().unwrap_or(0);
        if i >= x.len() && !borrow {
            break;
        }
        let (d1, b1) = a.overflowing_sub(xi);
        let (d2, b2) = d1.overflowing_sub(borrow as u64);
        *a = d2;
        borrow = b1 || b2;
    }
    debug_assert!(!borrow, "subtraction underflow");
}

fn schoolbook(a: &[u64], b: &[u64]) -> Vec<u64> {
    let mut out = vec![0u64; a.len() + b.len()];
    for (i, &ai) in a.iter().enumerate() {
        if ai == 0 {
            continue;
        }
        let mut carry = 0u128;
        for (j, &bj) in b.iter().enumerate() {
            let t = ai as u128 * bj as u128 + out[i + j] as u128 + carry;
            out[i + j] = t as u64;
            carry = t >> 64;
        }
        out[i + b.len()] = carry as u64;
    }
    out
}

pub(crate) fn mul_slices(a: &[u64], b: &[u64]) -> Vec<u64> {
    let (a, b) = (trimmed(a), trimmed(b));
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let (a, b) = if a.len() >= b.len() { (a, b) } else { (b, a) };
    if b.len() < KARATSUBA_THRESHOLD {
        return schoolbook(a, b);
    }
    if a.len() >= 2 * b.len() {
        // unbalanced: cut the long operand into pieces the size of the short one
        let mut out = vec![0u64; a.len() + b.len()];
        for start in (0..a.len()).step_by(b.len()) {
            let end = (start + b.len()).min(a.len());
            let prod = mul_slices(&a[start..end], b);
            add_assign_at(&mut out, &prod, start);
        }
        return out;
    }
    karatsuba(a, b)
}

// requires b.len() <= a.len() < 2 * b.len()
fn karatsuba(a: &[u64], b: &[u64]) -> Vec<u64> {
    let m = a.len() / 2;
    let (a0, a1) = a.split_at(m);
    let (b0, b1) = b.split_at(m);
    let z0 = mul_slices(a0, b0);
    let z2 = mul_slices(a1, b1);
    let mut z1 = mul_slices(&add_slices(a0, a1), &add_slices(b0, b1));
    sub_assign(&mut z1, &z0);
    sub_assign(&mut z1, &z2);
    let mut out = vec![0u64; a.len() + b.len() + 1];
    add_assign_at(&mut out, &z0, 0);
    add_assign_at(&mut out, &z1, m);
    add_assign_at(&mut out, &z2, 2 * m);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigUint;
    use proptest::prelude::*;

    fn to_big(n: &Nat) -> BigUint {
        BigUint::from_slice(
            &n.limbs()
                .iter()
                .flat_map(|&l| [l as u32, (l >> 32) as u32])
                .collect::<Vec<_>>(),
        )
    }

    fn limbs(max: usize) -> impl Strategy<Value = Nat> {
        prop::collection::vec(any::<u64>(), 0..max).prop_map(Nat::from_limbs)
    }

    #[test]
    fn karatsuba_matches_schoolbook_at_threshold_sizes() {
        let a: Vec<u64> = (0..97u64)
            .map(|i| i.wrapping_mul(0x9e37_79b9_7f4a_7c15))
            .collect();
        let b: Vec<u64> = (0..70u64)
            .map(|i| !i.wrapping_mul(0xbf58_476d_1ce4_e5b9))
            .collect();
        let mut expect = schoolbook(&a, &b);
        normalize(&mut expect);
        assert_eq!(Nat::from_limbs(karatsuba(&a, &b)), Nat::from_limbs(expect));
    }

    #[test]
    fn all_ones_operands_carry_through() {
        let a = Nat::from_limbs(vec![u64::MAX; 80]);
        let got = a.mul(&a);
        assert_eq!(to_big(&got), to_big(&a) * to_big(&a));
    }

    #[test]
    fn isqrt_small_and_perfect_squares() {
        assert_eq!(Nat::zero().isqrt(), Nat::zero());
        assert_eq!(Nat::from_u64(15).isqrt(), Nat::from_u64(3));
        assert_eq!(Nat::from_u64(16).isqrt(), Nat::from_u64(4));
        let x = Nat::from_limbs(vec![0x1234_5678_9abc_def0; 40]);
        assert_eq!(x.square().isqrt(), x);
        assert_eq!(x.square().sub(&Nat::one()).isqrt(), x.sub(&Nat::one()));
    }

    #[test]
    fn decimal_round_trip() {
        let s = "31415926535897932384626433832795028841971693993751058209749445923";
        let n = Nat::from_decimal_digits(s).unwrap();
        assert_eq!(n.to_decimal_string(), s);
        assert_eq!(Nat::pow10(40).to_decimal_string().len(), 41);
        assert!(Nat::from_decimal_digits("12a").is_none());
    }

    proptest! {
        #[test]
        fn mul_matches_reference(a in limbs(150), b in limbs(150)) {
            prop_assert_eq!(to_big(&a.mul(&b)), to_big(&a) * to_big(&b));
        }

        #[test]
        fn div_rem_matches_reference(a in limbs(120), b in limbs(60)) {
            prop_assume!(!b.is_zero());
            let (q, r) = a.div_rem(&b);
            let (ba, bb) = (to_big(&a), to_big(&b));
            prop_assert_eq!(to_big(&q), &ba / &bb);
            prop_assert_eq!(to_big(&r), &ba % &bb);
        }

        #[test]
        fn isqrt_is_floor_root(a in limbs(90)) {
            let r = a.isqrt();
            prop_assert!(r.square() <= a);
            prop_assert!(r.add_small(1).square() > a);
        }

        #[test]
        fn shifts_match_reference(a in limbs(20), s in 0usize..300) {
            prop_assert_eq!(to_big(&a.shl(s)), to_big(&a) << s);
            prop_assert_eq!(to_big(&a.shr(s)), to_big(&a) >> s);
            prop_assert_eq!(to_big(&a.low_bits(s)), to_big(&a) % (BigUint::from(1u8) << s));
        }
    }
}
