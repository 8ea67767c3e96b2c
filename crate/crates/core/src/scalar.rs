//! Scalar abstractions shared by the exact and floating-point paths.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{FromPrimitive, One, ToPrimitive, Zero};
use std::ops::{AddAssign, Mul};

/// Exact rational used by every identity check.
pub type Rational = BigRational;
/// Exact configuration count.
pub type Count = BigUint;

/// Additive-multiplicative accumulator for dynamic programs.
///
/// Implemented for machine floats (fast, approximate) and the exact
/// big-number types.
pub trait Semiring: Clone + Zero + One + for<'a> AddAssign<&'a Self> {
    fn mul_ref(&self, other: &Self) -> Self;
}

impl<T> Semiring for T
where
    T: Clone + Zero + One + for<'a> AddAssign<&'a T>,
    for<'a> &'a T: Mul<&'a T, Output = T>,
{
    fn mul_ref(&self, other: &Self) -> Self {
        self * other
    }
}

/// `u128` that turns into `Wide(None)` on overflow and stays there.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Wide(pub Option<u128>);

impl Wide {
    pub fn new(v: u128) -> Self {
        Wide(Some(v))
    }

    pub fn overflowed(&self) -> bool {
        self.0.is_none()
    }
}

impl std::ops::Add for Wide {
    type Output = Wide;
    fn add(self, o: Wide) -> Wide {
        Wide(self.0.zip(o.0).and_then(|(a, b)| a.checked_add(b)))
    }
}

impl Mul for Wide {
    type Output = Wide;
    fn mul(self, o: Wide) -> Wide {
        Wide(self.0.zip(o.0).and_then(|(a, b)| a.checked_mul(b)))
    }
}

impl<'a> Mul<&'a Wide> for &'a Wide {
    type Output = Wide;
    fn mul(self, o: &Wide) -> Wide {
        *self * *o
    }
}

impl AddAssign<&Wide> for Wide {
    fn add_assign(&mut self, o: &Wide) {
        *self = *self + *o;
    }
}

impl Zero for Wide {
    fn zero() -> Self {
        Wide(Some(0))
    }
    fn is_zero(&self) -> bool {
        self.0 == Some(0)
    }
}

impl One for Wide {
    fn one() -> Self {
        Wide(Some(1))
    }
}

/// Floating-point scalar for spectral sums and quadrature.
pub trait Real: num_traits::Float + FromPrimitive + std::fmt::Debug + Send + Sync + 'static {}
impl Real for f32 {}
impl Real for f64 {}

/// Builds an exact rational from numerator and denominator.
pub fn ratio(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

/// Integer as exact rational.
pub fn rint(p: i64) -> Rational {
    Rational::from_integer(BigInt::from(p))
}

/// Converts a count to an exact rational.
pub fn count_to_rational(c: &Count) -> Rational {
    Rational::from_integer(BigInt::from(c.clone()))
}

/// Lossy conversion of an exact rational to a float scalar.
pub fn to_real<T: Real>(q: &Rational) -> T {
    let f = q.to_f64().unwrap_or_else(|| {
        // very large numerators: go through logarithms
        let n = q.numer().to_f64().unwrap_or(f64::INFINITY);
        let d = q.denom().to_f64().unwrap_or(f64::INFINITY);
        n / d
    });
    T::from_f64(f).unwrap_or_else(T::nan)
}

/// Natural logarithm of a positive rational without overflowing f64.
pub fn ln_rational(q: &Rational) -> f64 {
    fn ln_big(b: &BigInt) -> f64 {
        let bits = b.bits();
        if bits < 1000 {
            b.to_f64().unwrap().ln()
        } else {
            let shift = bits - 900;
            let top: BigInt = b >> shift;
            top.to_f64().unwrap().ln() + shift as f64 * std::f64::consts::LN_2
        }
    }
    ln_big(q.numer()) - ln_big(q.denom())
}

/// Parses `p/q` or `p` into an exact rational.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    let (p, q) = match s.split_once('/') {
        Some((p, q)) => (p.trim(), q.trim()),
        None => (s, "1"),
    };
    let p: BigInt = p.parse().ok()?;
    let q: BigInt = q.parse().ok()?;
    if q.is_zero() {
        return None;
    }
    Some(Rational::new(p, q))
}

/// Exact rational power with a nonnegative integer exponent.
pub fn rpow(base: &Rational, e: usize) -> Rational {
    let mut acc = Rational::one();
    for _ in 0..e {
        acc *= base;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_forms() {
        assert_eq!(parse_rational("1/2"), Some(ratio(1, 2)));
        assert_eq!(parse_rational("3"), Some(rint(3)));
        assert_eq!(parse_rational("-4/6"), Some(ratio(-2, 3)));
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(parse_rational("x"), None);
    }

    #[test]
    fn semiring_impls() {
        fn sq<S: Semiring>(x: S) -> S {
            x.mul_ref(&x)
        }
        assert_eq!(sq(3.0f64), 9.0);
        assert_eq!(sq(BigUint::from(7u32)), BigUint::from(49u32));
        assert_eq!(sq(ratio(2, 3)), ratio(4, 9));
    }

    #[test]
    fn ln_of_huge() {
        let big = Rational::from_integer(BigInt::from(2).pow(3000));
        let l = ln_rational(&big);
        assert!((l - 3000.0 * std::f64::consts::LN_2).abs() < 1e-9);
    }
}
