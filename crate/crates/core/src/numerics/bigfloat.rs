//! Fixed-point binary values with a rigorous absolute error bound.
//!
//! A [`BigFloat`] stores `mantissa / 2^bits` together with an error count
//! `err` in units of `2^-bits`: the quantity it stands for lies in
//! `[(mantissa - err) / 2^bits, (mantissa + err) / 2^bits]`. Every operation
//! rounds to nearest and adds at least one unit for that rounding, so bounds
//! only ever grow.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exact::ExactRational;

/// Working precision: the decimal digits a caller asked for and the binary
/// digits actually carried (roughly twice as many, plus guard digits).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Precision {
    digits: u32,
    bits: u32,
}

impl Precision {
    pub fn new(digits: u32) -> Self {
        let internal_digits = 2 * u64::from(digits.max(1)) + 10;
        // log2(10) < 3.3220
        let bits = (internal_digits * 33220).div_ceil(10000) as u32;
        Precision {
            digits: digits.max(1),
            bits,
        }
    }

    pub fn digits(&self) -> u32 {
        self.digits
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    /// `10^-digits`, the accuracy promised at this precision.
    pub fn tolerance(&self) -> ExactRational {
        ten_pow(-(self.digits as i32))
    }
}

/// `10^e` as an exact rational.
pub fn ten_pow(e: i32) -> ExactRational {
    ExactRational::from(10).pow(e).expect("10 is nonzero")
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BigFloat {
    mantissa: BigInt,
    err: BigUint,
    precision: Precision,
}

/// Round `numer / denom` to the nearest integer, ties away from zero; `denom > 0`.
fn round_div(numer: &BigInt, denom: &BigInt) -> BigInt {
    let twice: BigInt = numer * 2u32;
    let (q, _) = if numer.is_negative() {
        (&twice - denom).div_rem(&(denom * 2u32))
    } else {
        (&twice + denom).div_rem(&(denom * 2u32))
    };
    q
}

fn ceil_to_biguint(x: &ExactRational) -> BigUint {
    let c = x.ceil();
    if c.is_negative() {
        BigUint::zero()
    } else {
        c.to_biguint().expect("nonnegative")
    }
}

impl BigFloat {
    /// Nearest representable value to `x`; error is one rounding unit
    /// unless `x` is representable exactly.
    pub fn from_rational(x: &ExactRational, precision: Precision) -> Self {
        Self::from_rational_with_error(x, &ExactRational::zero(), precision)
    }

    /// `x` known only to within `bound`.
    pub fn from_rational_with_error(
        x: &ExactRational,
        bound: &ExactRational,
        precision: Precision,
    ) -> Self {
        let scaled = x.numer() << precision.bits;
        let mantissa = round_div(&scaled, x.denom());
        let exact = &mantissa * x.denom() == scaled;
        let mut err = ceil_to_biguint(&(bound.abs() * ExactRational::power_of_two(precision.bits.into())));
        if !exact {
            err += 1u32;
        }
        BigFloat {
            mantissa,
            err,
            precision,
        }
    }

    /// Midpoint of `[lo, hi]` with half the width as error.
    pub fn from_interval(lo: &ExactRational, hi: &ExactRational, precision: Precision) -> Self {
        let half = ExactRational::new(1, 2).expect("nonzero");
        let mid = (lo + hi) * &half;
        let radius = (hi - lo).abs() * half;
        Self::from_rational_with_error(&mid, &radius, precision)
    }

    pub fn zero(precision: Precision) -> Self {
        BigFloat {
            mantissa: BigInt::zero(),
            err: BigUint::zero(),
            precision,
        }
    }

    pub fn precision(&self) -> Precision {
        self.precision
    }

    /// Stored value as an exact rational.
    pub fn value(&self) -> ExactRational {
        ExactRational::new(self.mantissa.clone(), BigInt::one() << self.precision.bits)
            .expect("power of two is nonzero")
    }

    /// Absolute error bound as an exact rational.
    pub fn error_bound(&self) -> ExactRational {
        ExactRational::new(BigInt::from(self.err.clone()), BigInt::one() << self.precision.bits)
            .expect("power of two is nonzero")
    }

    /// `[value - bound, value + bound]`.
    pub fn interval(&self) -> (ExactRational, ExactRational) {
        let v = self.value();
        let e = self.error_bound();
        (&v - &e, &v + &e)
    }

    /// Whether `x` lies within the error bound of the stored value.
    pub fn contains(&self, x: &ExactRational) -> bool {
        (&self.value() - x).abs() <= self.error_bound()
    }

    /// Whether the two enclosures overlap (precisions may differ).
    pub fn consistent_with(&self, other: &BigFloat) -> bool {
        (&self.value() - &other.value()).abs() <= &self.error_bound() + &other.error_bound()
    }

    /// Upper bound on the magnitude of the represented quantity.
    pub fn abs_upper(&self) -> ExactRational {
        &self.value().abs() + &self.error_bound()
    }

    /// Sign of the represented quantity, if the enclosure excludes zero.
    pub fn certain_sign(&self) -> Option<Ordering> {
        let m = self.mantissa.magnitude();
        if *m <= self.err {
            None
        } else if self.mantissa.is_positive() {
            Some(Ordering::Greater)
        } else {
            Some(Ordering::Less)
        }
    }

    fn same_precision(&self, other: &BigFloat) {
        assert_eq!(
            self.precision, other.precision,
            "BigFloat operands must share a precision"
        );
    }

    pub fn add(&self, other: &BigFloat) -> BigFloat {
        self.same_precision(other);
        BigFloat {
            mantissa: &self.mantissa + &other.mantissa,
            err: &self.err + &other.err,
            precision: self.precision,
        }
    }

    pub fn sub(&self, other: &BigFloat) -> BigFloat {
        self.same_precision(other);
        BigFloat {
            mantissa: &self.mantissa - &other.mantissa,
            err: &self.err + &other.err,
            precision: self.precision,
        }
    }

    pub fn neg(&self) -> BigFloat {
        BigFloat {
            mantissa: -&self.mantissa,
            err: self.err.clone(),
            precision: self.precision,
        }
    }

    pub fn mul(&self, other: &BigFloat) -> BigFloat {
        self.same_precision(other);
        let bits = self.precision.bits;
        let scale = BigInt::one() << bits;
        let mantissa = round_div(&(&self.mantissa * &other.mantissa), &scale);
        let a = self.mantissa.magnitude();
        let b = other.mantissa.magnitude();
        let spread = a * &other.err + b * &self.err + &self.err * &other.err;
        let (q, r) = spread.div_rem(&(BigUint::one() << bits));
        let err = q + if r.is_zero() { 0u32 } else { 1u32 } + 1u32;
        BigFloat {
            mantissa,
            err,
            precision: self.precision,
        }
    }

    /// Multiplication by an exact rational.
    pub fn mul_rational(&self, c: &ExactRational) -> BigFloat {
        let mantissa = round_div(&(&self.mantissa * c.numer()), c.denom());
        let exact = &mantissa * c.denom() == &self.mantissa * c.numer();
        let mut err = ceil_to_biguint(&(ExactRational::from(BigInt::from(self.err.clone())) * c.abs()));
        if !exact {
            err += 1u32;
        }
        BigFloat {
            mantissa,
            err,
            precision: self.precision,
        }
    }

    /// Quotient; fails when the divisor's enclosure contains zero.
    pub fn div(&self, other: &BigFloat) -> Result<BigFloat> {
        self.same_precision(other);
        let b = other.mantissa.magnitude();
        if *b <= other.err {
            return Err(Error::DivisionByZero);
        }
        let bits = self.precision.bits;
        // round_div expects a positive denominator
        let (numer, denom) = if other.mantissa.is_negative() {
            (-(&self.mantissa << bits), -&other.mantissa)
        } else {
            (&self.mantissa << bits, other.mantissa.clone())
        };
        let mantissa = round_div(&numer, &denom);
        let a = self.mantissa.magnitude();
        let spread = (b * &self.err + a * &other.err) << bits;
        let denom = b * (b - &other.err);
        let (q, r) = spread.div_rem(&denom);
        let err = q + if r.is_zero() { 0u32 } else { 1u32 } + 1u32;
        Ok(BigFloat {
            mantissa,
            err,
            precision: self.precision,
        })
    }

    pub fn powi(&self, n: u32) -> BigFloat {
        let mut acc = BigFloat::from_rational(&ExactRational::one(), self.precision);
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    /// Decimal rendering `value±bound`: the value rounded to the working
    /// digits, the bound rounded up to two significant figures and widened
    /// to cover the display rounding.
    pub fn to_decimal_string(&self) -> String {
        let digits = self.precision.digits;
        let v = self.value();
        let scaled = &v * &ten_pow(digits as i32);
        let n = round_div(scaled.numer(), scaled.denom());
        let shown = ExactRational::from(n.clone()) * ten_pow(-(digits as i32));
        let bound = self.error_bound() + (&v - &shown).abs();

        let neg = n.sign() == Sign::Minus;
        let mag = n.magnitude().to_string();
        let width = digits as usize + 1;
        let padded = format!("{mag:0>width$}");
        let (int_part, frac_part) = padded.split_at(padded.len() - digits as usize);
        format!(
            "{}{}.{}±{}",
            if neg { "-" } else { "" },
            int_part,
            frac_part,
            format_bound(&bound)
        )
    }
}

/// Rounds a nonnegative bound up to two significant digits, e.g. `1.3e-31`.
pub fn format_bound(bound: &ExactRational) -> String {
    if bound.is_zero() {
        return "0".to_string();
    }
    let b = bound.abs();
    // decimal exponent e with 10^e <= b < 10^(e+1)
    let mut e = (b.numer().to_string().len() as i32) - (b.denom().to_string().len() as i32);
    while b < ten_pow(e) {
        e -= 1;
    }
    while b >= ten_pow(e + 1) {
        e += 1;
    }
    let mut m = (&b * &ten_pow(1 - e)).ceil();
    if m >= BigInt::from(100) {
        m = BigInt::from(10);
        e += 1;
    }
    let m: i64 = m.try_into().expect("two-digit mantissa");
    format!("{}.{}e{}", m / 10, m % 10, e)
}

impl fmt::Display for BigFloat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_decimal_string())
    }
}

impl Serialize for BigFloat {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;
    use proptest::prelude::*;

    fn p(d: u32) -> Precision {
        Precision::new(d)
    }

    #[test]
    fn representation() {
        let x = BigFloat::from_rational(&rat(1, 3), p(10));
        assert!(x.contains(&rat(1, 3)));
        assert!(x.error_bound() < ten_pow(-20));
        let half = BigFloat::from_rational(&rat(1, 2), p(10));
        assert!(half.error_bound().is_zero());
        assert_eq!(half.value(), rat(1, 2));
    }

    #[test]
    fn decimal_rendering() {
        let x = BigFloat::from_rational(&rat(1, 3), p(10));
        let s = x.to_decimal_string();
        assert!(s.starts_with("0.3333333333±"), "{s}");
        let y = BigFloat::from_rational(&rat(-22, 7), p(5));
        assert!(y.to_decimal_string().starts_with("-3.14286±"), "{}", y);
        assert_eq!(format_bound(&rat(3, 1000)), "3.0e-3");
        assert_eq!(format_bound(&rat(301, 100000)), "3.1e-3");
        assert_eq!(format_bound(&rat(999, 1000)), "1.0e0");
        assert_eq!(format_bound(&ExactRational::zero()), "0");
    }

    #[test]
    fn division_guard() {
        let tiny = BigFloat::from_rational_with_error(&rat(1, 1000), &rat(1, 100), p(10));
        let one = BigFloat::from_rational(&rat(1, 1), p(10));
        assert_eq!(one.div(&tiny), Err(Error::DivisionByZero));
        assert_eq!(tiny.certain_sign(), None);
    }

    fn val() -> impl Strategy<Value = (ExactRational, ExactRational)> {
        ((-5000i64..5000, 1i64..997), (0i64..50, 1i64..1000)).prop_map(|((a, b), (c, d))| {
            (rat(a, b), rat(c, d) * ten_pow(-12))
        })
    }

    proptest! {
        // Every operation's enclosure contains the exact result of the
        // operation applied to any points inside the input enclosures.
        #[test]
        fn enclosures_are_sound(
            (x, ex) in val(), (y, ey) in val(),
            tx in -1i64..=1, ty in -1i64..=1,
            c in (-300i64..300, 1i64..77)
        ) {
            let prec = p(12);
            let fx = BigFloat::from_rational_with_error(&x, &ex, prec);
            let fy = BigFloat::from_rational_with_error(&y, &ey, prec);
            // extreme points of the two input enclosures
            let px = &fx.value() + &(fx.error_bound() * ExactRational::from(tx));
            let py = &fy.value() + &(fy.error_bound() * ExactRational::from(ty));
            prop_assert!(fx.add(&fy).contains(&(&px + &py)));
            prop_assert!(fx.sub(&fy).contains(&(&px - &py)));
            prop_assert!(fx.mul(&fy).contains(&(&px * &py)));
            let c = rat(c.0, c.1);
            prop_assert!(fx.mul_rational(&c).contains(&(&px * &c)));
            if let Ok(q) = fx.div(&fy) {
                prop_assert!(q.contains(&px.checked_div(&py).unwrap()));
            }
        }
    }
}
