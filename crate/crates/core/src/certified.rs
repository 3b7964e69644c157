//! Certified comparisons against `e^q` and `π`.
//!
//! Values are enclosed in dyadic intervals `[lo, hi] / 2^bits` computed with
//! directed rounding on big integers. A comparison that the enclosure cannot
//! settle is retried at twice the precision, up to [`MAX_BITS`].

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::combinatorics::BigRational;
use crate::error::{Error, Result};

/// First precision tried by the adaptive comparisons.
pub const START_BITS: u32 = 64;
/// Precision at which a comparison gives up with [`Error::Undecided`].
pub const MAX_BITS: u32 = 1 << 14;

/// The closed interval `[lo / 2^bits, hi / 2^bits]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dyadic {
    pub lo: BigInt,
    pub hi: BigInt,
    pub bits: u32,
}

impl Dyadic {
    /// Midpoint as a float, for display only.
    pub fn approx(&self) -> f64 {
        let mid = BigRational::new(&self.lo + &self.hi, BigInt::one() << (self.bits + 1));
        mid.to_f64().unwrap_or(f64::NAN)
    }

    pub fn width(&self) -> BigInt {
        &self.hi - &self.lo
    }
}

fn ceil_div(a: &BigInt, b: &BigInt) -> BigInt {
    a.div_ceil(b)
}

fn ceil_shr(a: &BigInt, s: u32) -> BigInt {
    let one = BigInt::one() << s;
    (a + &one - 1u32) >> s
}

/// Enclosure of `e^q` for any rational `q`.
pub fn exp_interval(q: &BigRational, bits: u32) -> Dyadic {
    if q.is_negative() {
        let pos = exp_nonneg(&-q, bits);
        let w = pos.bits;
        let unit = BigInt::one() << (2 * w);
        return Dyadic { lo: &unit / &pos.hi, hi: ceil_div(&unit, &pos.lo), bits: w };
    }
    exp_nonneg(q, bits)
}

fn exp_nonneg(q: &BigRational, bits: u32) -> Dyadic {
    let (num, den) = (q.numer(), q.denom());
    // Reduce to x = q / 2^m <= 1/2, then square m times.
    let mut m = 0u32;
    while num * 2u32 > den << m {
        m += 1;
    }
    let w = bits + 2 * m + 16;
    let scale = BigInt::one() << w;
    let d: BigInt = den << m;
    let (mut lo, mut hi) = (scale.clone(), scale.clone());
    let (mut t_lo, mut t_hi) = (scale.clone(), scale);
    let mut k = 1u32;
    loop {
        let step = &d * k;
        t_lo = (&t_lo * num) / &step;
        t_hi = ceil_div(&(&t_hi * num), &step);
        lo += &t_lo;
        hi += &t_hi;
        if t_hi <= BigInt::one() {
            // Later terms shrink by at least half each, so they sum to at most t_hi.
            hi += &t_hi;
            break;
        }
        k += 1;
    }
    for _ in 0..m {
        lo = (&lo * &lo) >> w;
        hi = ceil_shr(&(&hi * &hi), w);
    }
    Dyadic { lo, hi, bits: w }
}

/// Enclosure of `atan(1/x)` from its alternating series.
fn atan_inv(x: u32, bits: u32) -> Dyadic {
    let scale = BigInt::one() << bits;
    let x2 = BigInt::from(x) * x;
    let mut power = BigInt::from(x);
    let (mut lo, mut hi) = (BigInt::zero(), BigInt::zero());
    let mut n = 0u32;
    loop {
        let t_lo = &scale / (&power * (2 * n + 1));
        let t_hi = &t_lo + 1u32;
        if n.is_multiple_of(2) {
            lo += &t_lo;
            hi += &t_hi;
        } else {
            lo -= &t_hi;
            hi -= &t_lo;
        }
        if t_lo.is_zero() {
            break;
        }
        power *= &x2;
        n += 1;
    }
    // The omitted tail is smaller than one unit.
    Dyadic { lo: lo - 1u32, hi: hi + 1u32, bits }
}

/// Enclosure of `π = 16 atan(1/5) - 4 atan(1/239)`.
pub fn pi_interval(bits: u32) -> Dyadic {
    let w = bits + 8;
    let a = atan_inv(5, w);
    let b = atan_inv(239, w);
    Dyadic { lo: a.lo * 16u32 - b.hi * 4u32, hi: a.hi * 16u32 - b.lo * 4u32, bits: w }
}

fn decide(a: &BigInt, b: &BigInt, enclose: impl Fn(u32) -> Dyadic) -> Result<Ordering> {
    if a.is_zero() {
        return Ok(BigInt::zero().cmp(b));
    }
    let mut bits = START_BITS;
    while bits <= MAX_BITS {
        let iv = enclose(bits);
        let target: BigInt = b << iv.bits;
        let (lo, hi) = if a.is_negative() { (a * &iv.hi, a * &iv.lo) } else { (a * &iv.lo, a * &iv.hi) };
        if hi < target {
            return Ok(Ordering::Less);
        }
        if lo > target {
            return Ok(Ordering::Greater);
        }
        bits *= 2;
    }
    Err(Error::Undecided { bits: MAX_BITS })
}

/// Compare `a · e^q` with `b`. Exact when `q = 0`; otherwise the two sides
/// cannot be equal for nonzero `a`, so precision is raised until the
/// enclosure separates them.
pub fn cmp_times_exp(a: &BigInt, q: &BigRational, b: &BigInt) -> Result<Ordering> {
    if q.is_zero() {
        return Ok(a.cmp(b));
    }
    decide(a, b, |bits| exp_interval(q, bits))
}

/// Compare `a · π` with `b`.
pub fn cmp_times_pi(a: &BigInt, b: &BigInt) -> Result<Ordering> {
    decide(a, b, pi_interval)
}
