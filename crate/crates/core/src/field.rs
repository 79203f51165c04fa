//! Coefficient fields.
//!
//! Everything above this module is generic over [`Field`]. Two families are
//! provided: prime fields `Fp<P>` with the modulus fixed at compile time, and
//! the rationals via [`num_rational::BigRational`].

use std::fmt::{self, Debug, Display};
use std::hash::Hash;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;

/// Exact coefficient field used by the polynomial and module layers.
pub trait Field:
    Clone
    + Eq
    + Hash
    + Debug
    + Display
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + Send
    + Sync
    + 'static
{
    /// Multiplicative inverse, `None` for zero.
    fn inv(&self) -> Option<Self>;

    fn from_i64(v: i64) -> Self;

    /// 0 for the rationals.
    fn characteristic() -> u64;

    /// Uniform element for prime fields; a small integer for the rationals.
    fn random<R: Rng + ?Sized>(rng: &mut R) -> Self;

    /// Human readable field descriptor, e.g. `GF(32003)` or `QQ`.
    fn descriptor() -> String;

    fn try_div(&self, other: &Self) -> Option<Self> {
        other.inv().map(|i| self.clone() * i)
    }

    /// Lift to a signed integer when the element has one (symmetric range for
    /// prime fields, integral rationals only).
    fn to_integer(&self) -> Option<i64>;
}

const fn is_prime_u32(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p as u64 {
        if (p as u64).is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Element of the prime field with `P` elements, stored as its canonical
/// representative in `0..P`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct Fp<const P: u32>(u32);

impl<const P: u32> Fp<P> {
    const VALID: () = assert!(is_prime_u32(P) && P > 2, "modulus must be an odd prime");

    pub fn new(v: u64) -> Self {
        #[allow(clippy::let_unit_value)]
        let _ = Self::VALID;
        Fp((v % P as u64) as u32)
    }

    pub fn value(self) -> u32 {
        self.0
    }

    pub const fn modulus() -> u32 {
        P
    }

    fn pow(self, mut e: u64) -> Self {
        let mut base = self;
        let mut acc = Fp::<P>(1);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            e >>= 1;
        }
        acc
    }

    fn symmetric(self) -> i64 {
        let v = self.0 as i64;
        if v > (P as i64) / 2 {
            v - P as i64
        } else {
            v
        }
    }
}

impl<const P: u32> Debug for Fp<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.symmetric())
    }
}

impl<const P: u32> Display for Fp<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.symmetric())
    }
}

impl<const P: u32> Add for Fp<P> {
    type Output = Self;
    #[inline]
    fn add(self, o: Self) -> Self {
        let s = self.0 as u64 + o.0 as u64;
        Fp(if s >= P as u64 { (s - P as u64) as u32 } else { s as u32 })
    }
}

impl<const P: u32> Sub for Fp<P> {
    type Output = Self;
    #[inline]
    fn sub(self, o: Self) -> Self {
        if self.0 >= o.0 {
            Fp(self.0 - o.0)
        } else {
            Fp(self.0 + (P - o.0))
        }
    }
}

impl<const P: u32> Mul for Fp<P> {
    type Output = Self;
    #[inline]
    fn mul(self, o: Self) -> Self {
        Fp(((self.0 as u64 * o.0 as u64) % P as u64) as u32)
    }
}

impl<const P: u32> Neg for Fp<P> {
    type Output = Self;
    #[inline]
    fn neg(self) -> Self {
        if self.0 == 0 {
            self
        } else {
            Fp(P - self.0)
        }
    }
}

impl<const P: u32> Div for Fp<P> {
    type Output = Self;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, o: Self) -> Self {
        self * Field::inv(&o).expect("division by zero in prime field")
    }
}

impl<const P: u32> Zero for Fp<P> {
    fn zero() -> Self {
        Fp(0)
    }
    fn is_zero(&self) -> bool {
        self.0 == 0
    }
}

impl<const P: u32> One for Fp<P> {
    fn one() -> Self {
        Fp(1)
    }
}

impl<const P: u32> Field for Fp<P> {
    fn inv(&self) -> Option<Self> {
        if self.0 == 0 {
            None
        } else {
            Some(self.pow(P as u64 - 2))
        }
    }

    fn from_i64(v: i64) -> Self {
        Fp::new(v.rem_euclid(P as i64) as u64)
    }

    fn characteristic() -> u64 {
        P as u64
    }

    fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        Fp(rng.gen_range(0..P))
    }

    fn descriptor() -> String {
        format!("GF({P})")
    }

    fn to_integer(&self) -> Option<i64> {
        Some(self.symmetric())
    }
}

/// Arbitrary precision rationals.
pub type Rational = BigRational;

impl Field for BigRational {
    fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(self.recip())
        }
    }

    fn from_i64(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }

    fn characteristic() -> u64 {
        0
    }

    fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        Self::from_i64(rng.gen_range(-9..=9))
    }

    fn descriptor() -> String {
        "QQ".to_string()
    }

    fn to_integer(&self) -> Option<i64> {
        if self.is_integer() {
            self.to_integer_value()
        } else {
            None
        }
    }
}

trait IntegerValue {
    fn to_integer_value(&self) -> Option<i64>;
}

impl IntegerValue for BigRational {
    fn to_integer_value(&self) -> Option<i64> {
        let n = self.numer();
        if n.abs() > BigInt::from(i64::MAX) {
            return None;
        }
        n.to_i64()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    type F = Fp<32003>;

    #[test]
    fn small_prime_arithmetic() {
        type F3 = Fp<3>;
        assert_eq!(F3::from_i64(2) + F3::from_i64(2), F3::from_i64(1));
        assert_eq!(F3::from_i64(-1), F3::from_i64(2));
        assert_eq!(F3::from_i64(2).inv(), Some(F3::from_i64(2)));
        assert_eq!(F3::zero().inv(), None);
    }

    #[test]
    fn symmetric_display() {
        assert_eq!(F::from_i64(-5).to_string(), "-5");
        assert_eq!(F::from_i64(7).to_string(), "7");
        assert_eq!(Field::to_integer(&F::from_i64(-5)), Some(-5));
    }

    #[test]
    fn rational_integer_lift() {
        let half = Rational::new(BigInt::from(1), BigInt::from(2));
        assert_eq!(Field::to_integer(&half), None);
        assert_eq!(Field::to_integer(&Rational::from_i64(-4)), Some(-4));
    }

    fn fp() -> impl Strategy<Value = F> {
        (0u32..32003).prop_map(|v| F::new(v as u64))
    }

    fn q() -> impl Strategy<Value = Rational> {
        (-50i64..50, 1i64..20).prop_map(|(n, d)| Rational::new(BigInt::from(n), BigInt::from(d)))
    }

    proptest! {
        #[test]
        fn prime_field_axioms(a in fp(), b in fp(), c in fp()) {
            prop_assert_eq!((a + b) + c, a + (b + c));
            prop_assert_eq!((a * b) * c, a * (b * c));
            prop_assert_eq!(a * (b + c), a * b + a * c);
            prop_assert_eq!(a - a, F::zero());
            prop_assert_eq!(a + (-a), F::zero());
            if !a.is_zero() {
                prop_assert_eq!(a * a.inv().unwrap(), F::one());
            }
        }

        #[test]
        fn rational_field_axioms(a in q(), b in q(), c in q()) {
            prop_assert_eq!((a.clone() + b.clone()) + c.clone(), a.clone() + (b.clone() + c.clone()));
            prop_assert_eq!(a.clone() * (b.clone() + c.clone()), a.clone() * b.clone() + a.clone() * c);
            if !a.is_zero() {
                prop_assert_eq!(a.clone() * Field::inv(&a).unwrap(), Rational::one());
            }
        }
    }
}
