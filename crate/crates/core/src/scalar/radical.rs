//! Signed square roots of rationals and their square-free canonical form.

use std::fmt;
use std::ops::Neg;

use num_integer::Roots;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::rational::RationalParts;
use super::{Rational, ScalarError};

/// Trial-division bound used when none is configured.
pub const DEFAULT_FACTOR_BOUND: u128 = 1_000_000;

/// The real number `sign * sqrt(radicand)`.
///
/// Every synthesis-matrix entry has this shape: its square is rational, so
/// row and column square sums stay exact.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct RadicalScalar {
    sign: i8,
    radicand: Rational,
}

impl RadicalScalar {
    pub const ZERO: RadicalScalar = RadicalScalar {
        sign: 0,
        radicand: Rational::ZERO,
    };

    /// `sign * sqrt(radicand)`; a zero radicand forces sign 0 and vice versa.
    pub fn new(sign: i8, radicand: Rational) -> Result<Self, ScalarError> {
        if radicand.is_negative() {
            return Err(ScalarError::NegativeRadicand(radicand));
        }
        if !matches!(sign, -1..=1) {
            return Err(ScalarError::InvalidSign(sign));
        }
        if radicand.is_zero() || sign == 0 {
            return Ok(Self::ZERO);
        }
        Ok(RadicalScalar { sign, radicand })
    }

    /// The nonnegative root `sqrt(radicand)`.
    pub fn sqrt(radicand: Rational) -> Result<Self, ScalarError> {
        Self::new(1, radicand)
    }

    /// Embeds a rational value `r` as `sign(r) * sqrt(r^2)`.
    pub fn from_rational(r: Rational) -> Result<Self, ScalarError> {
        Self::new(r.signum(), r.checked_mul(r)?)
    }

    pub fn sign(&self) -> i8 {
        self.sign
    }

    pub fn radicand(&self) -> Rational {
        self.radicand
    }

    pub fn is_zero(&self) -> bool {
        self.sign == 0
    }

    /// The exact square of the represented value.
    pub fn square(&self) -> Rational {
        self.radicand
    }

    pub fn checked_mul(self, rhs: Self) -> Result<Self, ScalarError> {
        Self::new(
            self.sign * rhs.sign,
            self.radicand.checked_mul(rhs.radicand)?,
        )
    }

    /// Multiplies by `sqrt(factor)` for a nonnegative rational `factor`.
    pub fn scale_by_sqrt(self, factor: Rational) -> Result<Self, ScalarError> {
        self.checked_mul(Self::sqrt(factor)?)
    }

    pub fn to_f64(&self) -> f64 {
        if self.sign == 0 {
            return 0.0;
        }
        f64::from(self.sign) * self.radicand.to_f64().sqrt()
    }

    /// Square-free form `coefficient * sqrt(f)`.
    ///
    /// `sqrt(p/q)` is rewritten as `(s / q') * sqrt(f)` by pulling square
    /// factors out of `p` and `q` separately with trial division up to
    /// `factor_bound`. A leftover cofactor above `factor_bound^2` that is not a
    /// perfect square cannot be certified square-free and is reported as
    /// [`ScalarError::FactorizationIncomplete`].
    pub fn canonicalize(&self, factor_bound: u128) -> Result<CanonicalRadical, ScalarError> {
        assert!(factor_bound >= 2, "factor bound must be at least 2");
        if self.sign == 0 {
            return Ok(CanonicalRadical {
                coefficient: Rational::ZERO,
                squarefree: 1,
            });
        }
        let (s_num, f_num) = split_square(self.radicand.numer() as u128, factor_bound)?;
        let (s_den, f_den) = split_square(self.radicand.denom() as u128, factor_bound)?;
        // sqrt(s_num^2 f_num / (s_den^2 f_den)) = s_num / (s_den f_den) * sqrt(f_num f_den)
        let squarefree = f_num
            .checked_mul(f_den)
            .ok_or(ScalarError::IntegerOverflow)?;
        let to_i = |v: u128| i128::try_from(v).map_err(|_| ScalarError::IntegerOverflow);
        let den = to_i(s_den)?
            .checked_mul(to_i(f_den)?)
            .ok_or(ScalarError::IntegerOverflow)?;
        let coefficient = Rational::new(i128::from(self.sign) * to_i(s_num)?, den)?;
        Ok(CanonicalRadical {
            coefficient,
            squarefree,
        })
    }
}

/// Writes `n = s^2 * f` with `f` square-free.
fn split_square(mut n: u128, bound: u128) -> Result<(u128, u128), ScalarError> {
    let (mut s, mut f) = (1u128, 1u128);
    let mut d = 2u128;
    while d <= bound && d * d <= n {
        if n.is_multiple_of(d) {
            let mut e = 0u32;
            while n.is_multiple_of(d) {
                n /= d;
                e += 1;
            }
            s *= d.pow(e / 2);
            if e % 2 == 1 {
                f *= d;
            }
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        if d * d > n {
            // Every prime up to sqrt(n) was tried: n is prime.
            f = f.checked_mul(n).ok_or(ScalarError::IntegerOverflow)?;
        } else {
            let r = n.sqrt();
            if r * r == n {
                s = s.checked_mul(r).ok_or(ScalarError::IntegerOverflow)?;
            } else {
                return Err(ScalarError::FactorizationIncomplete { cofactor: n });
            }
        }
    }
    Ok((s, f))
}

impl Neg for RadicalScalar {
    type Output = RadicalScalar;
    fn neg(self) -> Self {
        RadicalScalar {
            sign: -self.sign,
            radicand: self.radicand,
        }
    }
}

impl Default for RadicalScalar {
    fn default() -> Self {
        Self::ZERO
    }
}

impl fmt::Display for RadicalScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.sign == 0 {
            return write!(f, "0");
        }
        let minus = if self.sign < 0 { "-" } else { "" };
        let (n, d) = (self.radicand.numer(), self.radicand.denom());
        let (rn, rd) = (n.sqrt(), d.sqrt());
        if rn * rn == n && rd * rd == d {
            write!(f, "{minus}{}", Rational::frac(rn, rd))
        } else if d == 1 {
            write!(f, "{minus}√{n}")
        } else {
            write!(f, "{minus}√({n}/{d})")
        }
    }
}

impl fmt::Debug for RadicalScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[derive(Serialize, Deserialize)]
struct RadicalRepr {
    sign: i8,
    rad: RationalParts,
}

impl Serialize for RadicalScalar {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        RadicalRepr {
            sign: self.sign,
            rad: self.radicand.into(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for RadicalScalar {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let repr = RadicalRepr::deserialize(deserializer)?;
        let rad = Rational::try_from(repr.rad).map_err(serde::de::Error::custom)?;
        if (repr.sign == 0) != rad.is_zero() {
            return Err(serde::de::Error::custom(
                "sign must be 0 exactly when the radicand is 0",
            ));
        }
        RadicalScalar::new(repr.sign, rad).map_err(serde::de::Error::custom)
    }
}

/// `coefficient * sqrt(squarefree)` with `squarefree` free of square divisors.
///
/// Two canonical radicals denote the same real number iff they are equal
/// field by field, which makes radical sums exactly zero-testable: group by
/// `squarefree` and add coefficients.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CanonicalRadical {
    pub coefficient: Rational,
    pub squarefree: u128,
}

impl CanonicalRadical {
    /// Back to `sign * sqrt(radicand)` form.
    pub fn to_radical(&self) -> Result<RadicalScalar, ScalarError> {
        let sq = self.coefficient.checked_mul(self.coefficient)?;
        let f = i128::try_from(self.squarefree).map_err(|_| ScalarError::IntegerOverflow)?;
        RadicalScalar::new(
            self.coefficient.signum(),
            sq.checked_mul(Rational::integer(f))?,
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn rad(sign: i8, r: &str) -> RadicalScalar {
        RadicalScalar::new(sign, r.parse().unwrap()).unwrap()
    }

    fn q(s: &str) -> Rational {
        s.parse().unwrap()
    }

    #[test]
    fn multiplication_examples() {
        assert_eq!(rad(1, "2").checked_mul(rad(-1, "2")).unwrap(), rad(-1, "4"));
        assert_eq!(
            rad(1, "1/2").checked_mul(rad(1, "1/2")).unwrap(),
            rad(1, "1/4")
        );
        assert_eq!(
            RadicalScalar::ZERO.checked_mul(rad(1, "7")).unwrap(),
            RadicalScalar::ZERO
        );
    }

    #[test]
    fn sign_zero_iff_radicand_zero() {
        assert_eq!(rad(1, "0"), RadicalScalar::ZERO);
        assert_eq!(rad(0, "5"), RadicalScalar::ZERO);
        assert!(RadicalScalar::new(1, q("-1")).is_err());
        assert!(RadicalScalar::new(2, q("1")).is_err());
    }

    #[test]
    fn canonical_examples() {
        let c = rad(1, "8").canonicalize(DEFAULT_FACTOR_BOUND).unwrap();
        assert_eq!((c.coefficient, c.squarefree), (q("2"), 2));
        let c = rad(1, "4/9").canonicalize(DEFAULT_FACTOR_BOUND).unwrap();
        assert_eq!((c.coefficient, c.squarefree), (q("2/3"), 1));
        let c = rad(1, "2/3").canonicalize(DEFAULT_FACTOR_BOUND).unwrap();
        assert_eq!((c.coefficient, c.squarefree), (q("1/3"), 6));
        let c = rad(-1, "75/8").canonicalize(DEFAULT_FACTOR_BOUND).unwrap();
        // sqrt(75/8) = 5 sqrt(3) / (2 sqrt 2) = (5/4) sqrt 6
        assert_eq!((c.coefficient, c.squarefree), (q("-5/4"), 6));
    }

    #[test]
    fn factorization_incomplete_above_bound() {
        // 1009 * 1013, both primes above a bound of 10.
        let r = rad(1, "1022117");
        assert_eq!(
            r.canonicalize(10),
            Err(ScalarError::FactorizationIncomplete {
                cofactor: 1_022_117
            })
        );
        // Large prime squared is still recognized.
        let c = rad(1, "1018081").canonicalize(10).unwrap(); // 1009^2
        assert_eq!((c.coefficient, c.squarefree), (q("1009"), 1));
        // Prime below bound^2 is certified.
        let c = rad(1, "97").canonicalize(10).unwrap();
        assert_eq!(c.squarefree, 97);
    }

    #[test]
    fn to_float_examples() {
        assert_eq!(rad(1, "2").to_f64(), std::f64::consts::SQRT_2);
        assert_eq!(rad(-1, "3/4").to_f64(), -0.8660254037844386);
        assert_eq!(RadicalScalar::ZERO.to_f64(), 0.0);
    }

    #[test]
    fn display() {
        assert_eq!(rad(1, "9").to_string(), "3");
        assert_eq!(rad(-1, "2").to_string(), "-√2");
        assert_eq!(rad(1, "1/4").to_string(), "1/2");
        assert_eq!(rad(1, "3/4").to_string(), "√(3/4)");
    }

    #[test]
    fn json_shape() {
        let r = rad(-1, "3/4");
        let s = serde_json::to_string(&r).unwrap();
        assert_eq!(s, r#"{"sign":-1,"rad":{"num":3,"den":4}}"#);
        let back: RadicalScalar = serde_json::from_str(&s).unwrap();
        assert_eq!(back, r);
        assert!(
            serde_json::from_str::<RadicalScalar>(r#"{"sign":0,"rad":{"num":3,"den":4}}"#).is_err()
        );
    }

    fn small_rational() -> impl Strategy<Value = Rational> {
        (0i128..5000, 1i128..5000).prop_map(|(n, d)| Rational::frac(n, d))
    }

    fn radical() -> impl Strategy<Value = RadicalScalar> {
        (prop_oneof![Just(-1i8), Just(1i8)], small_rational())
            .prop_map(|(s, r)| RadicalScalar::new(s, r).unwrap())
    }

    proptest! {
        #[test]
        fn square_of_product(a in radical(), b in radical()) {
            let p = a.checked_mul(b).unwrap();
            prop_assert_eq!(p.square(), a.square() * b.square());
        }

        #[test]
        fn canonical_round_trip(a in radical()) {
            let c = a.canonicalize(DEFAULT_FACTOR_BOUND).unwrap();
            prop_assert_eq!(
                c.coefficient * c.coefficient * Rational::integer(c.squarefree as i128),
                a.radicand()
            );
            let again = c.to_radical().unwrap().canonicalize(DEFAULT_FACTOR_BOUND).unwrap();
            prop_assert_eq!(again, c);
        }

        #[test]
        fn squarefree_part_has_no_square_divisor(a in radical()) {
            let c = a.canonicalize(DEFAULT_FACTOR_BOUND).unwrap();
            let mut d = 2u128;
            while d * d <= c.squarefree {
                prop_assert!(c.squarefree % (d * d) != 0);
                d += 1;
            }
        }

        #[test]
        fn float_square_matches_radicand(
            mant in 1.0f64..10.0, exp in -6i32..12, den in 1i128..1000
        ) {
            let value = mant * 10f64.powi(exp);
            let r = Rational::frac((value * den as f64).round().max(1.0) as i128, den);
            let x = RadicalScalar::sqrt(r).unwrap().to_f64();
            let rel = (x * x - r.to_f64()).abs() / r.to_f64();
            prop_assert!(rel <= 1e-12);
        }
    }
}
