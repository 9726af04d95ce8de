//! Scalar abstractions shared by the geometric predicates and the numeric
//! analytics.
//!
//! [`Scalar`] is all an orientation test needs: ring operations, an order and
//! a sign. Exact types (`i64`, `BigInt`, `BigRational`) give exact predicates;
//! `f64` is accepted but only exact types are used for chirotopes.
//!
//! [`Real`] adds what the kernel-method analytics need on top of that:
//! conversion from big-integer ratios, square roots and π at a requested
//! number of bits. `f64` caps out at its mantissa; `BigRational` carries any
//! requested precision, with bisection staying on dyadic rationals so that
//! every sign decision is exact.

use std::fmt::Debug;

use num_bigint::{BigInt, Sign as BigSign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{FromPrimitive, Num, One, Signed, ToPrimitive, Zero};

pub trait Scalar: Num + Signed + Clone + PartialOrd + Debug + Send + Sync {}

impl<T> Scalar for T where T: Num + Signed + Clone + PartialOrd + Debug + Send + Sync {}

pub trait Real: Scalar + FromPrimitive + ToPrimitive {
    fn from_ratio(num: &BigInt, den: &BigInt) -> Self;

    fn from_bigint(v: &BigInt) -> Self {
        Self::from_ratio(v, &BigInt::one())
    }

    fn from_i64_ratio(num: i64, den: i64) -> Self {
        Self::from_ratio(&BigInt::from(num), &BigInt::from(den))
    }

    /// Square root, accurate to about `bits` fractional bits.
    fn sqrt_prec(&self, bits: u32) -> Self;

    fn pi(bits: u32) -> Self;

    /// Largest meaningful precision for this type, if bounded.
    fn max_bits() -> Option<u32>;

    /// Fixed-point decimal rendering with `digits` digits after the point.
    fn to_decimal(&self, digits: usize) -> String;
}

impl Real for f64 {
    fn from_ratio(num: &BigInt, den: &BigInt) -> Self {
        // No reduction needed for a rounded quotient.
        let (num, den) = if den.is_negative() { (-num, -den) } else { (num.clone(), den.clone()) };
        BigRational::new_raw(num, den).to_f64().unwrap_or(f64::NAN)
    }

    fn sqrt_prec(&self, _bits: u32) -> Self {
        self.sqrt()
    }

    fn pi(_bits: u32) -> Self {
        std::f64::consts::PI
    }

    fn max_bits() -> Option<u32> {
        Some(f64::MANTISSA_DIGITS)
    }

    fn to_decimal(&self, digits: usize) -> String {
        format!("{:.*}", digits.min(17), self)
    }
}

impl Real for BigRational {
    fn from_ratio(num: &BigInt, den: &BigInt) -> Self {
        BigRational::new(num.clone(), den.clone())
    }

    fn sqrt_prec(&self, bits: u32) -> Self {
        assert!(!self.is_negative(), "square root of a negative value");
        // sqrt(n/d) = sqrt(n*d) / d, scaled by 2^bits before truncation.
        let scaled = (self.numer() * self.denom()) << (2 * bits as usize);
        let root = scaled.sqrt();
        BigRational::new(root, self.denom() << bits as usize)
    }

    fn pi(bits: u32) -> Self {
        let guard = 16;
        let scale = bits as usize + guard;
        let one = BigInt::one() << scale;
        // Machin: pi = 16 atan(1/5) - 4 atan(1/239)
        let pi = atan_inv_fixed(5, &one) * 16 - atan_inv_fixed(239, &one) * 4;
        BigRational::new(pi, one)
    }

    fn max_bits() -> Option<u32> {
        None
    }

    fn to_decimal(&self, digits: usize) -> String {
        let scale = BigInt::from(10u32).pow(digits as u32);
        let scaled = self * BigRational::from_integer(scale);
        let rounded = scaled.round().to_integer();
        let neg = rounded.sign() == BigSign::Minus;
        let mut s = rounded.abs().to_string();
        if digits == 0 {
            return if neg { format!("-{s}") } else { s };
        }
        if s.len() <= digits {
            s = format!("{}{}", "0".repeat(digits + 1 - s.len()), s);
        }
        let (int, frac) = s.split_at(s.len() - digits);
        format!("{}{}.{}", if neg { "-" } else { "" }, int, frac)
    }
}

/// atan(1/q) in fixed point with unit `one`, by the alternating Taylor series.
fn atan_inv_fixed(q: u32, one: &BigInt) -> BigInt {
    let q = BigInt::from(q);
    let q2 = &q * &q;
    let mut power = one / &q;
    let mut sum = BigInt::zero();
    let mut k = 0u32;
    while !power.is_zero() {
        let term = &power / BigInt::from(2 * k + 1);
        if k.is_even() {
            sum += term;
        } else {
            sum -= term;
        }
        power /= &q2;
        k += 1;
    }
    sum
}

/// Bits needed to resolve `digits` decimal digits, plus a small guard.
pub fn digits_to_bits(digits: u32) -> u32 {
    (f64::from(digits) * std::f64::consts::LOG2_10).ceil() as u32 + 8
}

/// Clamp a requested precision to what `T` can represent.
pub fn effective_bits<T: Real>(bits: u32) -> u32 {
    T::max_bits().map_or(bits, |m| bits.min(m))
}

/// Bisection for a sign change of `f` on `[lo, hi]`.
///
/// Runs `bits` halvings (or until the midpoint stops moving, which is how the
/// `f64` instance terminates). Returns the midpoint of the final bracket.
pub fn bisect<T, F>(mut lo: T, mut hi: T, bits: u32, f: F) -> T
where
    T: Real,
    F: Fn(&T) -> T,
{
    let two = T::one() + T::one();
    let f_lo = f(&lo);
    let lo_negative = f_lo.is_negative();
    for _ in 0..bits {
        let mid = (lo.clone() + hi.clone()) / two.clone();
        if mid == lo || mid == hi {
            break;
        }
        let fm = f(&mid);
        if fm.is_zero() {
            return mid;
        }
        if fm.is_negative() == lo_negative {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    (lo + hi) / two
}

pub fn from_f64_exact(v: f64) -> BigRational {
    BigRational::from_f64(v).expect("finite value")
}
