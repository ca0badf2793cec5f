//! Exact scalar arithmetic.
//!
//! Two fields are provided: [`PrimeField`], a word-size prime field used for
//! the bulk of the rank computations (default modulus `2^61 - 1`), and
//! [`RationalField`], exact arbitrary-precision rationals used to confirm
//! rank deficiencies found modulo `p`.
//!
//! Matrices whose entries are images of integers can only lose rank when
//! reduced modulo `p`. A maximal-rank result over `PrimeField` therefore
//! holds in characteristic zero as well, while a rank drop is only a
//! suspicion until it is recomputed over [`RationalField`].

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

/// `2^61 - 1`.
pub const MERSENNE_61: u64 = (1u64 << 61) - 1;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("inversion of zero")]
    ZeroInverse,
    #[error("modulus {0} is not prime")]
    NotPrime(u64),
    #[error("modulus {0} exceeds 2^63")]
    ModulusTooLarge(u64),
    #[error("denominator of {0} vanishes modulo {1}")]
    DenominatorVanishes(BigRational, u64),
}

/// A field with exact arithmetic on values of type [`Field::Elem`].
///
/// The field value itself carries the shared context (e.g. the modulus), so
/// elements stay plain data and are freely shareable across threads.
pub trait Field: Clone + fmt::Debug + Send + Sync {
    type Elem: Clone + PartialEq + fmt::Debug + fmt::Display + Send + Sync;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Result<Self::Elem, FieldError>;

    /// Image of a rational number; fails when the denominator is not invertible.
    fn from_rational(&self, q: &BigRational) -> Result<Self::Elem, FieldError>;

    /// Canonical rational representative (the residue in `[0, p)` for prime fields).
    fn lift(&self, a: &Self::Elem) -> BigRational;

    /// Whether ranks computed here are ranks in characteristic zero.
    fn is_characteristic_zero(&self) -> bool {
        false
    }

    /// Short tag used in reports: `"prime(p)"` or `"rational"`.
    fn describe(&self) -> String;

    fn from_i64(&self, n: i64) -> Self::Elem {
        self.from_rational(&BigRational::from_integer(BigInt::from(n)))
            .expect("integers always have an image")
    }

    /// `dst[k] -= c * src[k]` for every `k`.
    fn sub_scaled(&self, dst: &mut [Self::Elem], c: &Self::Elem, src: &[Self::Elem]) {
        for (d, s) in dst.iter_mut().zip(src) {
            if !self.is_zero(s) {
                *d = self.sub(d, &self.mul(c, s));
            }
        }
    }

    /// `dst -= sum of c * row` over all `(c, row)` pairs.
    fn sub_combination(&self, dst: &mut [Self::Elem], terms: &[(Self::Elem, &[Self::Elem])]) {
        for (c, row) in terms {
            self.sub_scaled(dst, c, row);
        }
    }

    /// `dst[k] += c * src[k]` for every `k`.
    fn add_scaled(&self, dst: &mut [Self::Elem], c: &Self::Elem, src: &[Self::Elem]) {
        let neg = self.neg(c);
        self.sub_scaled(dst, &neg, src);
    }

    fn scale(&self, row: &mut [Self::Elem], c: &Self::Elem) {
        for v in row.iter_mut() {
            *v = self.mul(v, c);
        }
    }
}

/// The prime field `F_p` for a prime `p < 2^63`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrimeField {
    p: u64,
}

impl Default for PrimeField {
    fn default() -> Self {
        PrimeField { p: MERSENNE_61 }
    }
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self, FieldError> {
        if p >= 1 << 63 {
            return Err(FieldError::ModulusTooLarge(p));
        }
        if !is_prime_u64(p) {
            return Err(FieldError::NotPrime(p));
        }
        Ok(PrimeField { p })
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    #[inline(always)]
    fn reduce_product(&self, x: u128) -> u64 {
        if self.p == MERSENNE_61 {
            reduce_mersenne(x)
        } else {
            (x % self.p as u128) as u64
        }
    }

    /// Reduces an arbitrary integer into `[0, p)`.
    pub fn reduce_int(&self, n: &BigInt) -> u64 {
        let m = BigInt::from(self.p);
        n.mod_floor(&m).to_u64().expect("residue fits in u64")
    }

    pub fn pow(&self, mut base: u64, mut exp: u64) -> u64 {
        let mut acc = 1u64 % self.p;
        base %= self.p;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.reduce_product(acc as u128 * base as u128);
            }
            base = self.reduce_product(base as u128 * base as u128);
            exp >>= 1;
        }
        acc
    }
}

#[inline(always)]
fn reduce_mersenne(x: u128) -> u64 {
    let lo = (x as u64) & MERSENNE_61;
    let hi = (x >> 61) as u64;
    let r = lo + hi;
    let r = (r & MERSENNE_61) + (r >> 61);
    if r >= MERSENNE_61 {
        r - MERSENNE_61
    } else {
        r
    }
}

impl Field for PrimeField {
    type Elem = u64;

    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1 % self.p
    }
    #[inline(always)]
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    #[inline(always)]
    fn add(&self, a: &u64, b: &u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }
    #[inline(always)]
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        if a >= b {
            a - b
        } else {
            self.p - (b - a)
        }
    }
    #[inline(always)]
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        self.reduce_product(*a as u128 * *b as u128)
    }
    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.p - a
        }
    }
    fn inv(&self, a: &u64) -> Result<u64, FieldError> {
        if (*a).is_multiple_of(self.p) {
            return Err(FieldError::ZeroInverse);
        }
        // extended Euclid on (a, p)
        let (mut r0, mut r1) = (self.p as i128, *a as i128);
        let (mut t0, mut t1) = (0i128, 1i128);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (t0, t1) = (t1, t0 - q * t1);
        }
        debug_assert_eq!(r0, 1);
        Ok(t0.rem_euclid(self.p as i128) as u64)
    }
    fn from_rational(&self, q: &BigRational) -> Result<u64, FieldError> {
        let num = self.reduce_int(q.numer());
        let den = self.reduce_int(q.denom());
        if den == 0 {
            return Err(FieldError::DenominatorVanishes(q.clone(), self.p));
        }
        Ok(self.mul(&num, &self.inv(&den)?))
    }
    fn lift(&self, a: &u64) -> BigRational {
        BigRational::from_integer(BigInt::from(*a))
    }
    fn describe(&self) -> String {
        format!("prime({})", self.p)
    }
    fn from_i64(&self, n: i64) -> u64 {
        (n as i128).rem_euclid(self.p as i128) as u64
    }

    fn sub_combination(&self, dst: &mut [u64], terms: &[(u64, &[u64])]) {
        if self.p != MERSENNE_61 || terms.len() < 4 {
            for (c, row) in terms {
                self.sub_scaled(dst, c, row);
            }
            return;
        }
        // partial folds stay below 2^62, so u128 sums never overflow here
        let mut acc = vec![0u128; dst.len()];
        for (c, row) in terms {
            let c = *c as u128;
            for (a, &s) in acc.iter_mut().zip(row.iter()) {
                let x = c * s as u128;
                *a += ((x as u64) & MERSENNE_61) as u128 + (x >> 61);
            }
        }
        for (d, a) in dst.iter_mut().zip(acc) {
            let m = reduce_mersenne(a);
            *d = self.sub(d, &m);
        }
    }

    fn sub_scaled(&self, dst: &mut [u64], c: &u64, src: &[u64]) {
        let p = self.p;
        let c = *c;
        if c == 0 {
            return;
        }
        if p == MERSENNE_61 {
            for (d, &s) in dst.iter_mut().zip(src) {
                let m = reduce_mersenne(c as u128 * s as u128);
                *d = if *d >= m { *d - m } else { p - (m - *d) };
            }
        } else {
            for (d, &s) in dst.iter_mut().zip(src) {
                let m = ((c as u128 * s as u128) % p as u128) as u64;
                *d = if *d >= m { *d - m } else { p - (m - *d) };
            }
        }
    }
}

/// Exact rationals; every value is kept in lowest terms with a positive
/// denominator.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct RationalField;

impl Field for RationalField {
    type Elem = BigRational;

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
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
    fn inv(&self, a: &BigRational) -> Result<BigRational, FieldError> {
        if a.is_zero() {
            Err(FieldError::ZeroInverse)
        } else {
            Ok(a.recip())
        }
    }
    fn from_rational(&self, q: &BigRational) -> Result<BigRational, FieldError> {
        Ok(q.clone())
    }
    fn lift(&self, a: &BigRational) -> BigRational {
        a.clone()
    }
    fn describe(&self) -> String {
        "rational".to_string()
    }
    fn is_characteristic_zero(&self) -> bool {
        true
    }
}

/// Numerator and denominator are coprime and the denominator is positive.
pub fn is_normalized(q: &BigRational) -> bool {
    q.denom().is_positive() && q.numer().gcd(q.denom()).is_one()
}

/// Deterministic Miller-Rabin for 64-bit integers.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const SMALL: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &q in &SMALL {
        if n.is_multiple_of(q) {
            return n == q;
        }
    }
    let mulmod = |a: u64, b: u64| ((a as u128 * b as u128) % n as u128) as u64;
    let powmod = |mut b: u64, mut e: u64| {
        let mut acc = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = mulmod(acc, b);
            }
            b = mulmod(b, b);
            e >>= 1;
        }
        acc
    };
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &SMALL {
        let mut x = powmod(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn small_prime_inverse() {
        let f = PrimeField::new(7).unwrap();
        assert_eq!(f.inv(&3).unwrap(), 5);
        assert_eq!(f.inv(&0), Err(FieldError::ZeroInverse));
    }

    #[test]
    fn mersenne_inverse_of_two() {
        let f = PrimeField::default();
        assert_eq!(f.modulus(), MERSENNE_61);
        let half = f.inv(&2).unwrap();
        assert_eq!(half, 1u64 << 60);
        // 2 * 2^60 = 2^61 = (2^61 - 1) + 1
        assert_eq!((2u128 * (1u128 << 60)) % MERSENNE_61 as u128, 1);
        assert_eq!(f.mul(&2, &half), 1);
    }

    #[test]
    fn rejects_bad_moduli() {
        assert_eq!(PrimeField::new(15), Err(FieldError::NotPrime(15)));
        assert_eq!(PrimeField::new(1), Err(FieldError::NotPrime(1)));
        assert!(matches!(
            PrimeField::new(u64::MAX),
            Err(FieldError::ModulusTooLarge(_))
        ));
        assert!(PrimeField::new(1_000_000_007).is_ok());
        assert!(is_prime_u64(MERSENNE_61));
        assert!(!is_prime_u64((1u64 << 59) - 1));
    }

    #[test]
    fn rational_inverse_of_zero_fails() {
        assert_eq!(RationalField.inv(&q(0, 1)), Err(FieldError::ZeroInverse));
        assert_eq!(RationalField.inv(&q(-2, 3)).unwrap(), q(-3, 2));
    }

    #[test]
    fn denominator_divisible_by_p() {
        let f = PrimeField::new(7).unwrap();
        assert!(matches!(
            f.from_rational(&q(1, 14)),
            Err(FieldError::DenominatorVanishes(..))
        ));
        assert_eq!(f.from_rational(&q(1, 3)).unwrap(), 5);
        assert_eq!(f.from_rational(&q(-1, 1)).unwrap(), 6);
    }

    #[test]
    fn sub_scaled_matches_scalar_ops() {
        for f in [
            PrimeField::default(),
            PrimeField::new(1_000_000_007).unwrap(),
        ] {
            let mut dst = vec![5, 0, f.modulus() - 1, 17];
            let src = vec![3, 9, 2, 0];
            let c = f.modulus() - 4;
            let expect: Vec<u64> = dst
                .iter()
                .zip(&src)
                .map(|(d, s)| f.sub(d, &f.mul(&c, s)))
                .collect();
            f.sub_scaled(&mut dst, &c, &src);
            assert_eq!(dst, expect);
        }
    }

    fn residue() -> impl Strategy<Value = u64> {
        0..MERSENNE_61
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn ring_axioms(a in residue(), b in residue(), c in residue()) {
            let f = PrimeField::default();
            prop_assert_eq!(f.add(&a, &b), f.add(&b, &a));
            prop_assert_eq!(f.mul(&a, &b), f.mul(&b, &a));
            prop_assert_eq!(f.add(&f.add(&a, &b), &c), f.add(&a, &f.add(&b, &c)));
            prop_assert_eq!(f.mul(&f.mul(&a, &b), &c), f.mul(&a, &f.mul(&b, &c)));
            prop_assert_eq!(f.mul(&a, &f.add(&b, &c)), f.add(&f.mul(&a, &b), &f.mul(&a, &c)));
            prop_assert_eq!(f.add(&a, &f.neg(&a)), 0);
            prop_assert_eq!(f.sub(&a, &b), f.add(&a, &f.neg(&b)));
            let expect = ((a as u128 * b as u128) % MERSENNE_61 as u128) as u64;
            prop_assert_eq!(f.mul(&a, &b), expect);
        }

        #[test]
        fn inverse_is_inverse(a in 1..MERSENNE_61) {
            let f = PrimeField::default();
            let inv = f.inv(&a).unwrap();
            prop_assert_eq!(f.mul(&a, &inv), 1);
            prop_assert_eq!(f.pow(a, MERSENNE_61 - 2), inv);
        }

        #[test]
        fn rationals_reduce_homomorphically(
            an in -1000i64..1000, ad in 1i64..1000,
            bn in -1000i64..1000, bd in 1i64..1000,
        ) {
            let f = PrimeField::default();
            let (a, b) = (q(an, ad), q(bn, bd));
            let (ra, rb) = (f.from_rational(&a).unwrap(), f.from_rational(&b).unwrap());
            prop_assert!(is_normalized(&(&a * &b)));
            prop_assert!(is_normalized(&(&a + &b)));
            prop_assert_eq!(f.from_rational(&(&a + &b)).unwrap(), f.add(&ra, &rb));
            prop_assert_eq!(f.from_rational(&(&a * &b)).unwrap(), f.mul(&ra, &rb));
            prop_assert_eq!(f.from_rational(&(&a - &b)).unwrap(), f.sub(&ra, &rb));
            if !b.is_zero() {
                prop_assert_eq!(f.from_rational(&(&a / &b)).unwrap(), f.mul(&ra, &f.inv(&rb).unwrap()));
            }
        }
    }
}
