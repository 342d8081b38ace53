//! Coefficient fields.
//!
//! The engine is generic over a runtime [`Field`] value. Two fields are
//! provided: [`Rationals`] (exact big rationals) and [`PrimeField`]
//! (integers modulo a word-sized prime).
//!
//! Besides ordinary field arithmetic the trait exposes the handful of
//! operations that fraction-free elimination needs: [`Field::cancel_pair`]
//! and the content helpers. Over the rationals these keep Groebner and
//! Gaussian elimination inside integer-primitive data; over a prime field
//! they degrade to plain division.

use std::fmt;
use std::hash::Hash;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Serializable description of a coefficient field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FieldSpec {
    Rationals,
    PrimeField(u32),
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Rationals => write!(f, "QQ"),
            FieldSpec::PrimeField(p) => write!(f, "GF({p})"),
        }
    }
}

pub trait Field: Clone + fmt::Debug + PartialEq + Eq + Send + Sync + 'static {
    type Elem: Clone + fmt::Debug + PartialEq + Eq + Hash + Send + Sync + 'static;

    fn spec(&self) -> FieldSpec;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn is_one(&self, a: &Self::Elem) -> bool;

    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    /// Multiplicative inverse; `a` must be nonzero.
    fn inv(&self, a: &Self::Elem) -> Self::Elem;

    fn from_i64(&self, v: i64) -> Self::Elem;
    fn from_bigint(&self, v: &BigInt) -> Self::Elem;

    /// Returns `(x, y)` with `x * a == y * b`, both nonzero, chosen as small
    /// as the field allows. `b` must be nonzero.
    fn cancel_pair(&self, a: &Self::Elem, b: &Self::Elem) -> (Self::Elem, Self::Elem);

    /// Divides `coeffs` by their content and returns the divisor. Over a
    /// prime field this is the identity and returns one.
    fn make_primitive(&self, coeffs: &mut [Self::Elem]) -> Self::Elem;

    /// Projective normal form of a coefficient vector: primitive with a
    /// positive first nonzero entry (rationals) or monic (prime field).
    /// Returns the factor the vector was divided by.
    fn normalize(&self, coeffs: &mut [Self::Elem]) -> Self::Elem;

    /// Uniform sample for prime fields; a small nonzero integer for the
    /// rationals.
    fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> Self::Elem;

    /// `true` when printing should use a leading minus sign.
    fn is_negative(&self, a: &Self::Elem) -> bool;

    fn format(&self, a: &Self::Elem) -> String;

    /// `true` when the printed form is an integer literal.
    fn is_integral(&self, a: &Self::Elem) -> bool;

    /// Image in `target`, `None` when there is no well-defined reduction
    /// (a denominator divisible by the prime, or a different characteristic).
    fn reduce_mod(&self, a: &Self::Elem, target: &PrimeField) -> Option<u32>;

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.mul(a, &self.inv(b))
    }
}

/// The rational numbers with exact big-integer arithmetic.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct Rationals;

impl Field for Rationals {
    type Elem = BigRational;

    fn spec(&self) -> FieldSpec {
        FieldSpec::Rationals
    }

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }

    fn one(&self) -> BigRational {
        BigRational::one()
    }

    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }

    fn is_one(&self, a: &BigRational) -> bool {
        a.is_one()
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

    fn inv(&self, a: &BigRational) -> BigRational {
        a.recip()
    }

    fn from_i64(&self, v: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(v))
    }

    fn from_bigint(&self, v: &BigInt) -> BigRational {
        BigRational::from_integer(v.clone())
    }

    fn cancel_pair(&self, a: &BigRational, b: &BigRational) -> (BigRational, BigRational) {
        // x = b/g, y = a/g with g the rational gcd; both come out integral.
        let num_g = a.numer().gcd(b.numer());
        let den_l = a.denom().lcm(b.denom());
        let g = BigRational::new(num_g, den_l);
        (b / &g, a / &g)
    }

    fn make_primitive(&self, coeffs: &mut [BigRational]) -> BigRational {
        let mut num_g = BigInt::zero();
        let mut den_l = BigInt::one();
        for c in coeffs.iter().filter(|c| !c.is_zero()) {
            num_g = num_g.gcd(c.numer());
            den_l = den_l.lcm(c.denom());
        }
        if num_g.is_zero() {
            return BigRational::one();
        }
        let content = BigRational::new(num_g, den_l);
        if content.is_one() {
            return content;
        }
        for c in coeffs.iter_mut() {
            *c = &*c / &content;
        }
        content
    }

    fn normalize(&self, coeffs: &mut [BigRational]) -> BigRational {
        let mut content = self.make_primitive(coeffs);
        if let Some(lead) = coeffs.iter().find(|c| !c.is_zero()) {
            if lead.is_negative() {
                for c in coeffs.iter_mut() {
                    *c = -&*c;
                }
                content = -content;
            }
        }
        content
    }

    fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> BigRational {
        loop {
            let v: i64 = rng.gen_range(-100..=100);
            if v != 0 {
                return self.from_i64(v);
            }
        }
    }

    fn is_negative(&self, a: &BigRational) -> bool {
        a.is_negative()
    }

    fn format(&self, a: &BigRational) -> String {
        if a.is_integer() {
            a.numer().to_string()
        } else {
            format!("{}/{}", a.numer(), a.denom())
        }
    }

    fn is_integral(&self, a: &BigRational) -> bool {
        a.is_integer()
    }

    fn reduce_mod(&self, a: &BigRational, target: &PrimeField) -> Option<u32> {
        target.reduce_rational(a)
    }
}

/// Integers modulo a prime `p < 2^31`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u32,
}

impl PrimeField {
    pub fn new(p: u32) -> Result<Self> {
        if p >= 1 << 31 {
            return Err(Error::InvalidInput(format!(
                "prime {p} does not fit below 2^31"
            )));
        }
        if !is_prime(p) {
            return Err(Error::InvalidInput(format!("{p} is not prime")));
        }
        Ok(PrimeField { p })
    }

    pub fn modulus(&self) -> u32 {
        self.p
    }

    fn reduce_i128(&self, v: i128) -> u32 {
        v.rem_euclid(self.p as i128) as u32
    }

    /// Image of a rational number, `None` when `p` divides the denominator.
    pub fn reduce_rational(&self, q: &BigRational) -> Option<u32> {
        let p = BigInt::from(self.p);
        let den = q.denom().mod_floor(&p).to_u32()?;
        if den == 0 {
            return None;
        }
        let num = q.numer().mod_floor(&p).to_u32()?;
        Some(self.mul(&num, &self.inv(&den)))
    }
}

pub(crate) fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u32;
    while (d as u64) * (d as u64) <= p as u64 {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl Field for PrimeField {
    type Elem = u32;

    fn spec(&self) -> FieldSpec {
        FieldSpec::PrimeField(self.p)
    }

    fn zero(&self) -> u32 {
        0
    }

    fn one(&self) -> u32 {
        1
    }

    fn is_zero(&self, a: &u32) -> bool {
        *a == 0
    }

    fn is_one(&self, a: &u32) -> bool {
        *a == 1
    }

    fn add(&self, a: &u32, b: &u32) -> u32 {
        ((*a as u64 + *b as u64) % self.p as u64) as u32
    }

    fn sub(&self, a: &u32, b: &u32) -> u32 {
        ((*a as u64 + self.p as u64 - *b as u64) % self.p as u64) as u32
    }

    fn mul(&self, a: &u32, b: &u32) -> u32 {
        ((*a as u64 * *b as u64) % self.p as u64) as u32
    }

    fn neg(&self, a: &u32) -> u32 {
        if *a == 0 {
            0
        } else {
            self.p - a
        }
    }

    fn inv(&self, a: &u32) -> u32 {
        // extended Euclid
        let (mut t, mut new_t) = (0i64, 1i64);
        let (mut r, mut new_r) = (self.p as i64, *a as i64);
        while new_r != 0 {
            let q = r / new_r;
            (t, new_t) = (new_t, t - q * new_t);
            (r, new_r) = (new_r, r - q * new_r);
        }
        assert_eq!(r, 1, "inverse of zero in GF({})", self.p);
        t.rem_euclid(self.p as i64) as u32
    }

    fn from_i64(&self, v: i64) -> u32 {
        self.reduce_i128(v as i128)
    }

    fn from_bigint(&self, v: &BigInt) -> u32 {
        v.mod_floor(&BigInt::from(self.p)).to_u32().unwrap()
    }

    fn cancel_pair(&self, a: &u32, b: &u32) -> (u32, u32) {
        (1, self.div(a, b))
    }

    fn make_primitive(&self, _coeffs: &mut [u32]) -> u32 {
        1
    }

    fn normalize(&self, coeffs: &mut [u32]) -> u32 {
        match coeffs.iter().find(|c| **c != 0).copied() {
            Some(lead) if lead != 1 => {
                let inv = self.inv(&lead);
                for c in coeffs.iter_mut() {
                    *c = self.mul(c, &inv);
                }
                lead
            }
            _ => 1,
        }
    }

    fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> u32 {
        rng.gen_range(0..self.p)
    }

    fn is_negative(&self, _a: &u32) -> bool {
        false
    }

    fn format(&self, a: &u32) -> String {
        a.to_string()
    }

    fn is_integral(&self, _a: &u32) -> bool {
        true
    }

    fn reduce_mod(&self, a: &u32, target: &PrimeField) -> Option<u32> {
        (target.p == self.p).then_some(*a)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_rejects_composites_and_large_moduli() {
        assert!(PrimeField::new(101).is_ok());
        assert!(PrimeField::new(100).is_err());
        assert!(PrimeField::new(1).is_err());
        assert!(PrimeField::new(2_147_483_659).is_err());
    }

    #[test]
    fn prime_field_arithmetic() {
        let f = PrimeField::new(5).unwrap();
        assert_eq!(f.mul(&2, &3), 1);
        assert_eq!(f.from_i64(-1), 4);
        assert_eq!(f.mul(&f.inv(&3), &3), 1);
        let f = PrimeField::new(101).unwrap();
        assert_eq!(f.from_i64(-1), 100);
    }

    #[test]
    fn rational_cancel_pair_is_integral() {
        let q = Rationals;
        let a = BigRational::new(6.into(), 1.into());
        let b = BigRational::new(4.into(), 1.into());
        let (x, y) = q.cancel_pair(&a, &b);
        assert_eq!(&x * &a, &y * &b);
        assert_eq!(x, q.from_i64(2));
        assert_eq!(y, q.from_i64(3));
        let a = BigRational::new(3.into(), 4.into());
        let b = BigRational::new((-5).into(), 6.into());
        let (x, y) = q.cancel_pair(&a, &b);
        assert_eq!(&x * &a, &y * &b);
        assert!(x.is_integer() && y.is_integer());
    }

    #[test]
    fn rational_normalize_is_primitive_and_positive() {
        let q = Rationals;
        let mut v = vec![
            q.from_i64(-4),
            q.zero(),
            BigRational::new(2.into(), 3.into()),
        ];
        q.normalize(&mut v);
        assert_eq!(v, vec![q.from_i64(6), q.zero(), q.from_i64(-1)]);
    }

    #[test]
    fn reduce_rational_mod_p() {
        let f = PrimeField::new(7).unwrap();
        assert_eq!(
            f.reduce_rational(&BigRational::new(1.into(), 2.into())),
            Some(4)
        );
        assert_eq!(
            f.reduce_rational(&BigRational::new(1.into(), 7.into())),
            None
        );
    }
}
