//! Exact rational scalars and the binomial conventions used throughout the crate.
//!
//! [`ExactRational`] wraps a [`BigRational`] and is canonical on every
//! construction, so `==` on two values is equality of the rationals they
//! denote. The text form is `p/q` with `q > 0`, or just `p` when `q = 1`.

use std::fmt;
use std::iter::{Product, Sum};
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// An arbitrary-precision signed rational in lowest terms with positive denominator.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct ExactRational(BigRational);

impl ExactRational {
    /// Builds `numer/denom`, reducing to lowest terms.
    pub fn new(numer: impl Into<BigInt>, denom: impl Into<BigInt>) -> Result<Self> {
        let denom = denom.into();
        if denom.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(ExactRational(BigRational::new(numer.into(), denom)))
    }

    pub fn from_integer(n: impl Into<BigInt>) -> Self {
        ExactRational(BigRational::from_integer(n.into()))
    }

    pub fn from_big_rational(r: BigRational) -> Self {
        // `Ratio` arithmetic keeps values reduced, but a raw ratio may not be.
        ExactRational(BigRational::new(r.numer().clone(), r.denom().clone()))
    }

    pub fn zero() -> Self {
        ExactRational(BigRational::zero())
    }

    pub fn one() -> Self {
        ExactRational(BigRational::one())
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn as_big_rational(&self) -> &BigRational {
        &self.0
    }

    pub fn into_big_rational(self) -> BigRational {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn abs(&self) -> Self {
        ExactRational(self.0.abs())
    }

    pub fn recip(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(ExactRational(self.0.recip()))
    }

    /// Division that reports a zero divisor instead of panicking.
    pub fn checked_div(&self, rhs: &Self) -> Result<Self> {
        if rhs.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(ExactRational(&self.0 / &rhs.0))
    }

    /// `self^exp` for a signed exponent; zero to a negative power is an error.
    pub fn pow(&self, exp: i32) -> Result<Self> {
        if exp < 0 && self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(ExactRational(num_traits::Pow::pow(&self.0, exp)))
    }

    /// `2^exp` for any signed exponent.
    pub fn power_of_two(exp: i64) -> Self {
        let magnitude = BigInt::one() << exp.unsigned_abs();
        if exp >= 0 {
            ExactRational::from_integer(magnitude)
        } else {
            ExactRational(BigRational::new(BigInt::one(), magnitude))
        }
    }

    /// Sign as -1, 0 or 1.
    pub fn signum(&self) -> i32 {
        if self.0.is_zero() {
            0
        } else if self.0.is_positive() {
            1
        } else {
            -1
        }
    }

    /// Nearest `f64`; only for display and coarse diagnostics.
    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    pub fn floor(&self) -> BigInt {
        self.0.floor().to_integer()
    }

    pub fn ceil(&self) -> BigInt {
        self.0.ceil().to_integer()
    }
}

impl fmt::Display for ExactRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.denom().is_one() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for ExactRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for ExactRational {
    type Err = Error;

    /// Accepts `p` or `p/q` with optional leading `-` on `p`. Non-canonical
    /// input such as `2/4` is accepted and reduced.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("not a rational: {s:?}"));
        let parse_int = |t: &str| -> Result<BigInt> {
            let digits = t.strip_prefix('-').unwrap_or(t);
            if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
                return Err(bad());
            }
            t.parse::<BigInt>().map_err(|_| bad())
        };
        match s.split_once('/') {
            None => Ok(ExactRational::from_integer(parse_int(s)?)),
            Some((p, q)) => {
                if q.starts_with('-') {
                    return Err(bad());
                }
                let q = parse_int(q)?;
                ExactRational::new(parse_int(p)?, q)
            }
        }
    }
}

impl Serialize for ExactRational {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for ExactRational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident) => {
        impl $trait<&ExactRational> for &ExactRational {
            type Output = ExactRational;
            fn $method(self, rhs: &ExactRational) -> ExactRational {
                ExactRational((&self.0).$method(&rhs.0))
            }
        }
        impl $trait<ExactRational> for ExactRational {
            type Output = ExactRational;
            fn $method(self, rhs: ExactRational) -> ExactRational {
                ExactRational(self.0.$method(rhs.0))
            }
        }
        impl $trait<&ExactRational> for ExactRational {
            type Output = ExactRational;
            fn $method(self, rhs: &ExactRational) -> ExactRational {
                ExactRational(self.0.$method(&rhs.0))
            }
        }
        impl $trait<ExactRational> for &ExactRational {
            type Output = ExactRational;
            fn $method(self, rhs: ExactRational) -> ExactRational {
                ExactRational((&self.0).$method(rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);

/// Panics on a zero divisor, like integer division. Use
/// [`ExactRational::checked_div`] where the divisor is not known to be nonzero.
impl Div<&ExactRational> for &ExactRational {
    type Output = ExactRational;
    fn div(self, rhs: &ExactRational) -> ExactRational {
        self.checked_div(rhs).expect("division by zero")
    }
}

impl Div<ExactRational> for ExactRational {
    type Output = ExactRational;
    fn div(self, rhs: ExactRational) -> ExactRational {
        &self / &rhs
    }
}

impl Neg for ExactRational {
    type Output = ExactRational;
    fn neg(self) -> ExactRational {
        ExactRational(-self.0)
    }
}

impl Neg for &ExactRational {
    type Output = ExactRational;
    fn neg(self) -> ExactRational {
        ExactRational(-&self.0)
    }
}

impl AddAssign<&ExactRational> for ExactRational {
    fn add_assign(&mut self, rhs: &ExactRational) {
        self.0 += &rhs.0;
    }
}

impl AddAssign for ExactRational {
    fn add_assign(&mut self, rhs: ExactRational) {
        self.0 += rhs.0;
    }
}

impl SubAssign<&ExactRational> for ExactRational {
    fn sub_assign(&mut self, rhs: &ExactRational) {
        self.0 -= &rhs.0;
    }
}

impl MulAssign<&ExactRational> for ExactRational {
    fn mul_assign(&mut self, rhs: &ExactRational) {
        self.0 *= &rhs.0;
    }
}

impl Sum for ExactRational {
    fn sum<I: Iterator<Item = ExactRational>>(iter: I) -> Self {
        iter.fold(ExactRational::zero(), |acc, x| acc + x)
    }
}

impl<'a> Sum<&'a ExactRational> for ExactRational {
    fn sum<I: Iterator<Item = &'a ExactRational>>(iter: I) -> Self {
        iter.fold(ExactRational::zero(), |acc, x| acc + x)
    }
}

impl Product for ExactRational {
    fn product<I: Iterator<Item = ExactRational>>(iter: I) -> Self {
        iter.fold(ExactRational::one(), |acc, x| acc * x)
    }
}

impl From<i64> for ExactRational {
    fn from(n: i64) -> Self {
        ExactRational::from_integer(n)
    }
}

impl From<i32> for ExactRational {
    fn from(n: i32) -> Self {
        ExactRational::from_integer(n)
    }
}

impl From<BigInt> for ExactRational {
    fn from(n: BigInt) -> Self {
        ExactRational::from_integer(n)
    }
}

impl From<BigUint> for ExactRational {
    fn from(n: BigUint) -> Self {
        ExactRational::from_integer(BigInt::from(n))
    }
}

/// Shorthand for `ExactRational::new(p, q).unwrap()` with small literals.
///
/// Panics when `q == 0`.
pub fn rat(p: i64, q: i64) -> ExactRational {
    ExactRational::new(p, q).expect("zero denominator")
}

/// `n!` as an exact integer.
pub fn factorial(n: u32) -> BigInt {
    (2..=n).fold(BigInt::one(), |acc, i| acc * i)
}

/// Falling factorial `n (n-1) ... (n-k+1)`; empty product for `k = 0`.
pub fn falling_factorial(n: i64, k: u32) -> BigInt {
    (0..i64::from(k)).fold(BigInt::one(), |acc, i| acc * BigInt::from(n - i))
}

/// Rising factorial `x (x+1) ... (x+k-1)`.
pub fn rising_factorial(x: i64, k: u32) -> BigInt {
    (0..i64::from(k)).fold(BigInt::one(), |acc, i| acc * BigInt::from(x + i))
}

/// Integer binomial coefficient for arbitrary signed arguments.
///
/// Total on `i64 x i64`: `k < 0` gives 0, `k = 0` gives 1, otherwise the
/// falling-factorial quotient `n (n-1) ... (n-k+1) / k!`. For integer `n`
/// this quotient is always an integer, and it vanishes when `0 <= n < k`.
/// Negative `n` follows the same product rule.
pub fn binomial_int(n: i64, k: i64) -> BigInt {
    if k < 0 {
        return BigInt::zero();
    }
    if k == 0 {
        return BigInt::one();
    }
    if (0..k).contains(&n) {
        return BigInt::zero();
    }
    // Use symmetry to keep the products short when 0 <= k <= n.
    let k = if n >= 0 && k > n - k { n - k } else { k };
    let k = u32::try_from(k).expect("binomial lower index out of range");
    let mut acc = BigInt::one();
    for i in 0..k {
        acc *= BigInt::from(n - i64::from(i));
        acc /= BigInt::from(i + 1);
    }
    acc
}

/// Generalized binomial coefficient as an [`ExactRational`]; see [`binomial_int`].
pub fn binomial(n: i64, k: i64) -> ExactRational {
    ExactRational::from_integer(binomial_int(n, k))
}

/// Least common multiple of the denominators of `values` (1 for an empty slice).
pub fn denominator_lcm<'a>(values: impl IntoIterator<Item = &'a ExactRational>) -> BigInt {
    values
        .into_iter()
        .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn binomial_examples() {
        assert_eq!(binomial(5, 2), rat(10, 1));
        assert_eq!(binomial(3, 5), ExactRational::zero());
        assert_eq!(binomial(4, 0), ExactRational::one());
        assert_eq!(binomial(7, -1), ExactRational::zero());
        assert_eq!(binomial(0, 0), ExactRational::one());
        assert_eq!(binomial(0, 1), ExactRational::zero());
    }

    #[test]
    fn binomial_negative_upper_follows_product_rule() {
        // (-1)(-2)(-3)/3! = -1
        assert_eq!(binomial_int(-1, 3), BigInt::from(-1));
        // (-3)(-4)/2 = 6
        assert_eq!(binomial_int(-3, 2), BigInt::from(6));
        assert_eq!(binomial_int(-3, -2), BigInt::zero());
    }

    #[test]
    fn factorial_examples() {
        assert_eq!(factorial(0), BigInt::one());
        assert_eq!(factorial(5), BigInt::from(120));
        assert_eq!(
            factorial(20),
            "2432902008176640000".parse::<BigInt>().unwrap()
        );
    }

    #[test]
    fn arithmetic_examples() {
        assert_eq!(rat(1, 6) + rat(-1, 2), rat(-1, 3));
        assert_eq!(rat(2, 3) * rat(3, 2), ExactRational::one());
        assert_eq!(
            rat(1, 3).checked_div(&ExactRational::zero()),
            Err(Error::DivisionByZero)
        );
        assert_eq!(ExactRational::new(1, 0), Err(Error::DivisionByZero));
    }

    #[test]
    fn canonical_form_and_text() {
        let x = ExactRational::new(4, -6).unwrap();
        assert_eq!(x.numer(), &BigInt::from(-2));
        assert_eq!(x.denom(), &BigInt::from(3));
        assert_eq!(x.to_string(), "-2/3");
        assert_eq!(rat(6, 3).to_string(), "2");
        assert_eq!("-691/2730".parse::<ExactRational>().unwrap(), rat(-691, 2730));
        assert_eq!("10/4".parse::<ExactRational>().unwrap(), rat(5, 2));
        for bad in ["", "1/", "/2", "1/-2", "a", "1/0", "1.5", "+3", "--1"] {
            assert!(bad.parse::<ExactRational>().is_err(), "{bad:?} should fail");
        }
    }

    #[test]
    fn serde_uses_text_form() {
        let json = serde_json::to_string(&vec![rat(-1, 2), rat(3, 1)]).unwrap();
        assert_eq!(json, r#"["-1/2","3"]"#);
        let back: Vec<ExactRational> = serde_json::from_str(&json).unwrap();
        assert_eq!(back, vec![rat(-1, 2), rat(3, 1)]);
    }

    #[test]
    fn powers_of_two() {
        assert_eq!(ExactRational::power_of_two(3), rat(8, 1));
        assert_eq!(ExactRational::power_of_two(-2), rat(1, 4));
        assert_eq!(ExactRational::power_of_two(0), ExactRational::one());
    }

    #[test]
    fn even_and_odd_row_sums() {
        for n in 1..=60i64 {
            let even: BigInt = (0..=n / 2).map(|k| binomial_int(n, 2 * k)).sum();
            let odd: BigInt = (0..=(n - 1) / 2).map(|k| binomial_int(n, 2 * k + 1)).sum();
            let expected = BigInt::one() << (n - 1);
            assert_eq!(even, expected, "even row sum n={n}");
            assert_eq!(odd, expected, "odd row sum n={n}");
        }
    }

    fn small_rational() -> impl Strategy<Value = ExactRational> {
        (-10_000i64..10_000, 1i64..10_000).prop_map(|(p, q)| rat(p, q))
    }

    proptest! {
        #[test]
        fn binomial_symmetry_and_integrality(n in 0i64..120, k in 0i64..120) {
            prop_assume!(k <= n);
            let b = binomial(n, k);
            prop_assert!(b.is_integer());
            prop_assert!(!b.is_negative());
            prop_assert_eq!(b, binomial(n, n - k));
        }

        #[test]
        fn pascal_recurrence(n in 1i64..150, k in -3i64..160) {
            prop_assume!(k >= 1);
            prop_assert_eq!(binomial(n, k), binomial(n - 1, k - 1) + binomial(n - 1, k));
        }

        #[test]
        fn field_laws(a in small_rational(), b in small_rational(), c in small_rational()) {
            prop_assert_eq!(&a + &b, &b + &a);
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!((&a + &b) + &c, &a + (&b + &c));
            prop_assert_eq!((&a * &b) * &c, &a * (&b * &c));
            prop_assert_eq!(&a * (&b + &c), &a * &b + &a * &c);
            if !b.is_zero() {
                prop_assert_eq!(a.checked_div(&b).unwrap() * &b, a.clone());
            }
        }

        #[test]
        fn text_round_trip(a in small_rational()) {
            let text = a.to_string();
            prop_assert_eq!(text.parse::<ExactRational>().unwrap(), a);
        }
    }
}
