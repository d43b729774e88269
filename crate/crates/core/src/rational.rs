//! Rational scalars used as the coefficient field throughout the crate.
//!
//! `Rational` is an arbitrary-precision fraction kept in lowest terms with a
//! positive denominator, so structural equality is value equality.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

pub type Rational = BigRational;

/// Rational from an integer.
pub fn rat_int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Rational from an unsigned integer.
pub fn rat_u64(n: u64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Rational `n/d`. Panics if `d == 0`.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// True if `r` is zero.
pub fn is_zero(r: &Rational) -> bool {
    Zero::is_zero(r)
}

/// Compact `n` or `n/d` rendering.
pub fn format_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// True if `r` equals the unsigned integer `n`.
pub fn equals_u64(r: &Rational, n: u64) -> bool {
    r.is_integer() && *r.numer() == BigInt::from(n)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lowest_terms_and_sign() {
        let r = rat(4, -6);
        assert_eq!(r.numer(), &BigInt::from(-2));
        assert_eq!(r.denom(), &BigInt::from(3));
        assert_eq!(format_rational(&r), "-2/3");
    }

    #[test]
    fn zero_is_zero_over_one() {
        let z = rat(0, 5);
        assert!(z.is_zero());
        assert_eq!(z.denom(), &BigInt::from(1));
    }

    #[test]
    fn integer_detection() {
        assert!(rat(6, 3).is_integer());
        assert!(!rat(1, 2).is_integer());
        assert!(equals_u64(&rat_u64(7), 7));
        assert!(!equals_u64(&rat(7, 2), 7));
    }
}
