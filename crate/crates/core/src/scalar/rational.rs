//! Reduced fractions over `i128` with checked arithmetic.

use std::cmp::Ordering;
use std::fmt;
use std::iter::Sum;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_integer::Integer;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::ScalarError;

/// An exact signed fraction `num / den`.
///
/// Always stored in lowest terms with a positive denominator, so structural
/// equality is numeric equality.
///
/// The `checked_*` methods report overflow as [`ScalarError::IntegerOverflow`].
/// The operator impls (`+`, `-`, `*`, `/`) panic on overflow or division by
/// zero instead of wrapping; library code paths that can see adversarial input
/// use the checked forms.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Rational {
    num: i128,
    den: i128,
}

impl Rational {
    pub const ZERO: Rational = Rational { num: 0, den: 1 };
    pub const ONE: Rational = Rational { num: 1, den: 1 };
    pub const TWO: Rational = Rational { num: 2, den: 1 };

    /// Builds `num / den` in lowest terms.
    pub fn new(num: i128, den: i128) -> Result<Self, ScalarError> {
        if den == 0 {
            return Err(ScalarError::DivisionByZero);
        }
        if num == 0 {
            return Ok(Self::ZERO);
        }
        let g = num.gcd(&den);
        let (mut n, mut d) = (num / g, den / g);
        if d < 0 {
            n = n.checked_neg().ok_or(ScalarError::IntegerOverflow)?;
            d = d.checked_neg().ok_or(ScalarError::IntegerOverflow)?;
        }
        Ok(Rational { num: n, den: d })
    }

    /// Shorthand for `new` that panics on a zero denominator.
    pub fn frac(num: i128, den: i128) -> Self {
        Self::new(num, den).expect("zero denominator")
    }

    pub const fn integer(n: i128) -> Self {
        Rational { num: n, den: 1 }
    }

    pub fn numer(&self) -> i128 {
        self.num
    }

    pub fn denom(&self) -> i128 {
        self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num == 0
    }

    pub fn is_positive(&self) -> bool {
        self.num > 0
    }

    pub fn is_negative(&self) -> bool {
        self.num < 0
    }

    pub fn is_integer(&self) -> bool {
        self.den == 1
    }

    pub fn signum(&self) -> i8 {
        self.num.signum() as i8
    }

    pub fn abs(&self) -> Self {
        Rational {
            num: self.num.abs(),
            den: self.den,
        }
    }

    /// Greatest integer not exceeding `self`.
    pub fn floor(&self) -> i128 {
        Integer::div_floor(&self.num, &self.den)
    }

    /// `self - floor(self)`, always in `[0, 1)`.
    pub fn fract(&self) -> Self {
        Rational {
            num: self.num.mod_floor(&self.den),
            den: self.den,
        }
    }

    pub fn checked_add(self, rhs: Self) -> Result<Self, ScalarError> {
        // Work over lcm(den) to keep intermediates small.
        let g = self.den.gcd(&rhs.den);
        let left = rhs.den / g;
        let right = self.den / g;
        let num = self
            .num
            .checked_mul(left)
            .and_then(|a| rhs.num.checked_mul(right).and_then(|b| a.checked_add(b)))
            .ok_or(ScalarError::IntegerOverflow)?;
        let den = self
            .den
            .checked_mul(left)
            .ok_or(ScalarError::IntegerOverflow)?;
        Self::new(num, den)
    }

    pub fn checked_sub(self, rhs: Self) -> Result<Self, ScalarError> {
        self.checked_add(rhs.checked_neg()?)
    }

    pub fn checked_neg(self) -> Result<Self, ScalarError> {
        Ok(Rational {
            num: self.num.checked_neg().ok_or(ScalarError::IntegerOverflow)?,
            den: self.den,
        })
    }

    pub fn checked_mul(self, rhs: Self) -> Result<Self, ScalarError> {
        if self.is_zero() || rhs.is_zero() {
            return Ok(Self::ZERO);
        }
        // Cross-cancel before multiplying.
        let g1 = self.num.gcd(&rhs.den);
        let g2 = rhs.num.gcd(&self.den);
        let num = (self.num / g1)
            .checked_mul(rhs.num / g2)
            .ok_or(ScalarError::IntegerOverflow)?;
        let den = (self.den / g2)
            .checked_mul(rhs.den / g1)
            .ok_or(ScalarError::IntegerOverflow)?;
        Self::new(num, den)
    }

    pub fn checked_div(self, rhs: Self) -> Result<Self, ScalarError> {
        self.checked_mul(rhs.checked_recip()?)
    }

    pub fn checked_recip(self) -> Result<Self, ScalarError> {
        if self.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        Self::new(self.den, self.num)
    }

    /// Exact sum of a sequence, failing on overflow.
    pub fn checked_sum<'a, I>(items: I) -> Result<Self, ScalarError>
    where
        I: IntoIterator<Item = &'a Rational>,
    {
        items
            .into_iter()
            .try_fold(Self::ZERO, |acc, x| acc.checked_add(*x))
    }

    pub fn to_f64(&self) -> f64 {
        self.num as f64 / self.den as f64
    }

    /// Closest fraction to `self` whose denominator does not exceed `max_den`.
    ///
    /// Walks the continued-fraction convergents and compares the last
    /// convergent against the best semiconvergent.
    pub fn nearest_with_denominator(&self, max_den: i128) -> Result<Self, ScalarError> {
        assert!(max_den >= 1, "max_den must be positive");
        if self.den <= max_den {
            return Ok(*self);
        }
        let (mut p0, mut q0, mut p1, mut q1) = (0i128, 1i128, 1i128, 0i128);
        let (mut n, mut d) = (self.num, self.den);
        loop {
            let a = Integer::div_floor(&n, &d);
            let q2 = a
                .checked_mul(q1)
                .and_then(|v| v.checked_add(q0))
                .ok_or(ScalarError::IntegerOverflow)?;
            if q2 > max_den {
                // Largest semiconvergent still within the bound.
                let k = (max_den - q0) / q1;
                let semi = Self::new(p0 + k * p1, q0 + k * q1)?;
                let conv = Self::new(p1, q1)?;
                let d_semi = semi.checked_sub(*self)?.abs();
                let d_conv = conv.checked_sub(*self)?.abs();
                return Ok(if d_semi < d_conv { semi } else { conv });
            }
            let p2 = a
                .checked_mul(p1)
                .and_then(|v| v.checked_add(p0))
                .ok_or(ScalarError::IntegerOverflow)?;
            (p0, q0, p1, q1) = (p1, q1, p2, q2);
            let r = n - a * d;
            if r == 0 {
                return Self::new(p1, q1);
            }
            (n, d) = (d, r);
        }
    }

    /// Parses a plain decimal such as `-1.732` exactly.
    pub fn from_decimal_str(s: &str) -> Result<Self, ScalarError> {
        let t = s.trim();
        let (neg, body) = match t.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, t.strip_prefix('+').unwrap_or(t)),
        };
        let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
        let valid = |p: &str| p.chars().all(|c| c.is_ascii_digit());
        if (int_part.is_empty() && frac_part.is_empty()) || !valid(int_part) || !valid(frac_part) {
            return Err(ScalarError::Parse(s.to_string()));
        }
        let digits = format!("{int_part}{frac_part}");
        let mut num: i128 = digits
            .parse()
            .map_err(|_| ScalarError::Parse(s.to_string()))?;
        let den = 10i128
            .checked_pow(frac_part.len() as u32)
            .ok_or(ScalarError::IntegerOverflow)?;
        if neg {
            num = -num;
        }
        Self::new(num, den)
    }
}

/// Compares `a/b` and `c/d` (positive denominators) without overflow by
/// expanding both into continued fractions in lockstep.
fn cmp_fractions(mut a: i128, mut b: i128, mut c: i128, mut d: i128) -> Ordering {
    let mut flipped = false;
    loop {
        let (qa, ra) = (Integer::div_floor(&a, &b), a.mod_floor(&b));
        let (qc, rc) = (Integer::div_floor(&c, &d), c.mod_floor(&d));
        if qa != qc {
            let ord = qa.cmp(&qc);
            return if flipped { ord.reverse() } else { ord };
        }
        match (ra == 0, rc == 0) {
            (true, true) => return Ordering::Equal,
            (true, false) => {
                return if flipped {
                    Ordering::Greater
                } else {
                    Ordering::Less
                }
            }
            (false, true) => {
                return if flipped {
                    Ordering::Less
                } else {
                    Ordering::Greater
                }
            }
            (false, false) => {}
        }
        // a/b = q + ra/b, compare ra/b vs rc/d  <=>  compare d/rc vs b/ra reversed.
        (a, b, c, d) = (b, ra, d, rc);
        flipped = !flipped;
    }
}

impl Ord for Rational {
    fn cmp(&self, other: &Self) -> Ordering {
        if self.den == other.den {
            return self.num.cmp(&other.num);
        }
        match (
            self.num.checked_mul(other.den),
            other.num.checked_mul(self.den),
        ) {
            (Some(l), Some(r)) => l.cmp(&r),
            _ => cmp_fractions(self.num, self.den, other.num, other.den),
        }
    }
}

impl PartialOrd for Rational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl From<i128> for Rational {
    fn from(n: i128) -> Self {
        Rational::integer(n)
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Rational::integer(n as i128)
    }
}

impl From<i32> for Rational {
    fn from(n: i32) -> Self {
        Rational::integer(n as i128)
    }
}

impl From<u32> for Rational {
    fn from(n: u32) -> Self {
        Rational::integer(n as i128)
    }
}

impl From<usize> for Rational {
    fn from(n: usize) -> Self {
        Rational::integer(n as i128)
    }
}

macro_rules! forward_op {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl $trait for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                match self.$checked(rhs) {
                    Ok(v) => v,
                    Err(e) => panic!("rational {}: {e}", stringify!($method)),
                }
            }
        }
    };
}

forward_op!(Add, add, checked_add);
forward_op!(Sub, sub, checked_sub);
forward_op!(Mul, mul, checked_mul);
forward_op!(Div, div, checked_div);

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        self.checked_neg().expect("rational neg overflow")
    }
}

impl Sum for Rational {
    fn sum<I: Iterator<Item = Rational>>(iter: I) -> Rational {
        iter.fold(Rational::ZERO, |a, b| a + b)
    }
}

impl<'a> Sum<&'a Rational> for Rational {
    fn sum<I: Iterator<Item = &'a Rational>>(iter: I) -> Rational {
        iter.fold(Rational::ZERO, |a, b| a + *b)
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Rational {
    type Err = ScalarError;

    /// Accepts `"p/q"` or `"p"`, with an optional leading `-`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        let bad = || ScalarError::Parse(s.to_string());
        let parse_int = |p: &str| -> Result<i128, ScalarError> {
            let body = p.strip_prefix('-').unwrap_or(p);
            if body.is_empty() || !body.chars().all(|c| c.is_ascii_digit()) {
                return Err(bad());
            }
            p.parse::<i128>().map_err(|_| bad())
        };
        match t.split_once('/') {
            Some((p, q)) => {
                let num = parse_int(p.trim())?;
                let q = q.trim();
                if q.starts_with('-') {
                    return Err(bad());
                }
                let den = parse_int(q)?;
                Rational::new(num, den)
            }
            None => Ok(Rational::integer(parse_int(t)?)),
        }
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// `{"num": .., "den": ..}` form of a [`Rational`], used inside radical entries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RationalParts {
    pub num: i128,
    pub den: i128,
}

impl From<Rational> for RationalParts {
    fn from(r: Rational) -> Self {
        RationalParts {
            num: r.numer(),
            den: r.denom(),
        }
    }
}

impl TryFrom<RationalParts> for Rational {
    type Error = ScalarError;
    fn try_from(p: RationalParts) -> Result<Self, Self::Error> {
        Rational::new(p.num, p.den)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> Rational {
        s.parse().unwrap()
    }

    #[test]
    fn examples() {
        assert_eq!(q("13/3") + q("13/3"), q("26/3"));
        assert_eq!(q("22/3") * q("3"), q("22"));
        assert_eq!(q("15") - q("13"), q("2"));
    }

    #[test]
    fn reduced_and_signed() {
        let r = Rational::frac(6, -9);
        assert_eq!((r.numer(), r.denom()), (-2, 3));
        assert_eq!(Rational::frac(0, -5), Rational::ZERO);
        assert_eq!(r.to_string(), "-2/3");
    }

    #[test]
    fn division_by_zero() {
        assert_eq!(Rational::new(1, 0), Err(ScalarError::DivisionByZero));
        assert_eq!(
            Rational::ONE.checked_div(Rational::ZERO),
            Err(ScalarError::DivisionByZero)
        );
    }

    #[test]
    fn overflow_is_reported() {
        let big = Rational::integer(i128::MAX / 2 + 1);
        assert_eq!(big.checked_add(big), Err(ScalarError::IntegerOverflow));
        assert_eq!(big.checked_mul(big), Err(ScalarError::IntegerOverflow));
        let tiny = Rational::frac(1, i128::MAX);
        assert_eq!(
            tiny.checked_add(Rational::frac(1, i128::MAX - 1)),
            Err(ScalarError::IntegerOverflow)
        );
    }

    #[test]
    fn ordering_without_overflow() {
        let a = Rational::frac(i128::MAX - 1, i128::MAX);
        let b = Rational::frac(i128::MAX - 2, i128::MAX - 1);
        assert!(a > b);
        assert!(q("-1/2") < q("1/3"));
        assert!(q("7/3") > q("2"));
        assert_eq!(
            cmp_fractions(7, 3, 14, 6),
            Ordering::Equal,
            "equal values in different forms"
        );
    }

    #[test]
    fn floor_and_fract() {
        assert_eq!(q("13/8").floor(), 1);
        assert_eq!(q("-1/2").floor(), -1);
        assert_eq!(q("-1/2").fract(), q("1/2"));
        assert_eq!(q("39/8").fract(), q("7/8"));
    }

    #[test]
    fn parse_errors() {
        for bad in ["", "1/", "/2", "a", "1/-2", "1.5", "--1", "1/0"] {
            assert!(bad.parse::<Rational>().is_err(), "{bad:?} should not parse");
        }
        assert_eq!(q(" -4 / 6 "), Rational::frac(-2, 3));
    }

    #[test]
    fn decimals() {
        assert_eq!(
            Rational::from_decimal_str("1.25").unwrap(),
            Rational::frac(5, 4)
        );
        assert_eq!(Rational::from_decimal_str("-.5").unwrap(), q("-1/2"));
        assert_eq!(Rational::from_decimal_str("3").unwrap(), q("3"));
        assert!(Rational::from_decimal_str(".").is_err());
    }

    #[test]
    fn nearest_fraction() {
        let pi = Rational::from_decimal_str("3.14159265358979").unwrap();
        assert_eq!(pi.nearest_with_denominator(7).unwrap(), q("22/7"));
        assert_eq!(pi.nearest_with_denominator(120).unwrap(), q("355/113"));
        assert_eq!(q("1/3").nearest_with_denominator(10).unwrap(), q("1/3"));
        let third_ish = Rational::from_decimal_str("0.3333334").unwrap();
        assert_eq!(third_ish.nearest_with_denominator(1000).unwrap(), q("1/3"));
    }

    #[test]
    fn serde_forms() {
        let r = q("-7/3");
        assert_eq!(serde_json::to_string(&r).unwrap(), "\"-7/3\"");
        let back: Rational = serde_json::from_str("\"-7/3\"").unwrap();
        assert_eq!(back, r);
        let parts = RationalParts::from(r);
        assert_eq!(
            serde_json::to_string(&parts).unwrap(),
            r#"{"num":-7,"den":3}"#
        );
    }
}
