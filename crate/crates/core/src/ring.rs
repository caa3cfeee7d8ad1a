//! Pluggable exact coefficient rings.
//!
//! A ring is a small value object carrying whatever runtime data the
//! arithmetic needs (for a prime field, the modulus); elements are plain
//! data.  This keeps matrices and sparse tables generic over the ring while
//! still allowing the modulus to be chosen at run time.

use alloc::string::String;
use alloc::format;
use core::fmt::Debug;

use num_bigint::BigInt;
use num_integer::Integer as _;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// Identifies the concrete ring behind a [`Ring`] implementation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RingKind {
    /// Arbitrary-precision integers.
    Int,
    /// Arbitrary-precision rationals.
    Rat,
    /// Prime field with the given modulus.
    Fp(u64),
}

impl RingKind {
    pub fn characteristic(&self) -> u64 {
        match self {
            RingKind::Int | RingKind::Rat => 0,
            RingKind::Fp(p) => *p,
        }
    }
}

/// A commutative ring with exact arithmetic and decidable equality.
pub trait Ring: Clone + Debug + PartialEq + Send + Sync {
    type Elem: Clone + PartialEq + Debug + Send + Sync;

    fn kind(&self) -> RingKind;
    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_i64(&self, n: i64) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;

    /// Multiplicative inverse, if `a` is a unit.
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;

    /// Quotient `a / b` under the promise that `b` divides `a` exactly.
    /// Used by fraction-free elimination.
    fn exact_div(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;

    /// Canonical display form (used by reports and dumps).
    fn format(&self, a: &Self::Elem) -> String;

    /// Element from an arbitrary-precision integer.
    fn from_bigint(&self, n: &BigInt) -> Self::Elem;

    /// For rings embedded in the rationals: the elements as integers after
    /// clearing a common denominator, `(numerators, denominator)`.  `None`
    /// for rings without that structure; integer kernels use this to avoid
    /// rational arithmetic.
    fn clear_denominators(&self, _elems: &[Self::Elem]) -> Option<(alloc::vec::Vec<BigInt>, BigInt)> {
        None
    }

    /// The element as a machine integer in canonical form, if it is one
    /// (prime-field representatives and small integers).
    fn canonical_i128(&self, _a: &Self::Elem) -> Option<i128> {
        None
    }

    fn name(&self) -> String {
        match self.kind() {
            RingKind::Int => String::from("int"),
            RingKind::Rat => String::from("rat"),
            RingKind::Fp(p) => format!("fp({p})"),
        }
    }

    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }

    fn add_assign(&self, a: &mut Self::Elem, b: &Self::Elem) {
        *a = self.add(a, b);
    }

    /// `a += b * c`, the workhorse of all matrix kernels.
    fn mul_add_assign(&self, a: &mut Self::Elem, b: &Self::Elem, c: &Self::Elem) {
        *a = self.add(a, &self.mul(b, c));
    }

    fn pow_i64(&self, a: &Self::Elem, n: i64) -> Self::Elem {
        let base = if n < 0 {
            self.inv(a).expect("pow_i64: negative power of a non-unit")
        } else {
            a.clone()
        };
        let mut acc = self.one();
        for _ in 0..n.unsigned_abs() {
            acc = self.mul(&acc, &base);
        }
        acc
    }
}

/// Rings in which every nonzero element is invertible.
pub trait Field: Ring {
    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.mul(a, &self.inv(b).expect("division by a non-unit"))
    }
}

/// The ring of arbitrary-precision integers.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct IntRing;

impl Ring for IntRing {
    type Elem = BigInt;

    fn kind(&self) -> RingKind {
        RingKind::Int
    }
    fn zero(&self) -> BigInt {
        BigInt::zero()
    }
    fn one(&self) -> BigInt {
        BigInt::one()
    }
    fn from_i64(&self, n: i64) -> BigInt {
        BigInt::from(n)
    }
    fn add(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a + b
    }
    fn sub(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a - b
    }
    fn mul(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a * b
    }
    fn neg(&self, a: &BigInt) -> BigInt {
        -a
    }
    fn is_zero(&self, a: &BigInt) -> bool {
        a.is_zero()
    }
    fn inv(&self, a: &BigInt) -> Option<BigInt> {
        if a.is_one() || (-a).is_one() {
            Some(a.clone())
        } else {
            None
        }
    }
    fn exact_div(&self, a: &BigInt, b: &BigInt) -> BigInt {
        let (q, r) = a.div_rem(b);
        debug_assert!(r.is_zero(), "exact_div: division not exact");
        q
    }
    fn format(&self, a: &BigInt) -> String {
        format!("{a}")
    }
    fn from_bigint(&self, n: &BigInt) -> BigInt {
        n.clone()
    }
    fn canonical_i128(&self, a: &BigInt) -> Option<i128> {
        use num_traits::ToPrimitive;
        a.to_i128()
    }
    fn clear_denominators(&self, elems: &[BigInt]) -> Option<(alloc::vec::Vec<BigInt>, BigInt)> {
        Some((elems.to_vec(), BigInt::one()))
    }
}

/// The field of arbitrary-precision rationals.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct RatField;

impl Ring for RatField {
    type Elem = BigRational;

    fn kind(&self) -> RingKind {
        RingKind::Rat
    }
    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn from_i64(&self, n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn inv(&self, a: &BigRational) -> Option<BigRational> {
        if a.is_zero() {
            None
        } else {
            Some(a.recip())
        }
    }
    fn exact_div(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a / b
    }
    fn format(&self, a: &BigRational) -> String {
        if a.denom().is_one() {
            format!("{}", a.numer())
        } else {
            format!("{}/{}", a.numer(), a.denom())
        }
    }
    fn from_bigint(&self, n: &BigInt) -> BigRational {
        BigRational::from_integer(n.clone())
    }
    fn clear_denominators(&self, elems: &[BigRational]) -> Option<(alloc::vec::Vec<BigInt>, BigInt)> {
        let mut d = BigInt::one();
        for e in elems {
            d = d.lcm(e.denom());
        }
        let nums = elems.iter().map(|e| e.numer() * (&d / e.denom())).collect();
        Some((nums, d))
    }
}

impl Field for RatField {}

/// The prime field `F_p`, elements stored as canonical representatives
/// `0..p-1`.  The modulus must be prime and below `2^32` so that products
/// fit in `u64` intermediates via `u128`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Self {
        assert!(p >= 2 && p < (1 << 32), "modulus out of range");
        assert!(is_prime(p), "modulus {p} is not prime");
        PrimeField { p }
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    fn pow(&self, mut base: u64, mut exp: u64) -> u64 {
        let mut acc = 1u64;
        base %= self.p;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = (acc as u128 * base as u128 % self.p as u128) as u64;
            }
            base = (base as u128 * base as u128 % self.p as u128) as u64;
            exp >>= 1;
        }
        acc
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

impl Ring for PrimeField {
    type Elem = u64;

    fn kind(&self) -> RingKind {
        RingKind::Fp(self.p)
    }
    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1 % self.p
    }
    fn from_i64(&self, n: i64) -> u64 {
        n.rem_euclid(self.p as i64) as u64
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        (*a as u128 * *b as u128 % self.p as u128) as u64
    }
    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.p - a
        }
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn inv(&self, a: &u64) -> Option<u64> {
        if *a == 0 {
            None
        } else {
            Some(self.pow(*a, self.p - 2))
        }
    }
    fn exact_div(&self, a: &u64, b: &u64) -> u64 {
        self.mul(a, &self.inv(b).expect("exact_div by zero in F_p"))
    }
    fn format(&self, a: &u64) -> String {
        format!("{a}")
    }
    fn canonical_i128(&self, a: &u64) -> Option<i128> {
        Some(*a as i128)
    }
    fn from_bigint(&self, n: &BigInt) -> u64 {
        use num_traits::ToPrimitive;
        let m = n % BigInt::from(self.p);
        let m = if m.sign() == num_bigint::Sign::Minus {
            m + BigInt::from(self.p)
        } else {
            m
        };
        m.to_u64().expect("reduced representative fits")
    }
}

impl Field for PrimeField {}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_inverses() {
        for p in [2u64, 3, 5, 7, 11, 13, 101] {
            let fp = PrimeField::new(p);
            for a in 1..p {
                let inv = fp.inv(&a).unwrap();
                assert_eq!(fp.mul(&a, &inv), fp.one());
            }
        }
    }

    #[test]
    fn from_i64_wraps_negatives() {
        let fp = PrimeField::new(7);
        assert_eq!(fp.from_i64(-1), 6);
        assert_eq!(fp.from_i64(-7), 0);
        assert_eq!(fp.from_i64(15), 1);
    }

    #[test]
    #[should_panic]
    fn composite_modulus_rejected() {
        let _ = PrimeField::new(15);
    }

    #[test]
    fn rational_format() {
        let q = RatField;
        let half = q.div(&q.one(), &q.from_i64(2));
        assert_eq!(q.format(&half), "1/2");
        assert_eq!(q.format(&q.from_i64(-3)), "-3");
    }
}
