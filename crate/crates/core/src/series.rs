//! Truncated formal power series over exact rationals.
//!
//! A [`TruncatedSeries`] of order `N` knows the coefficients of `t^0 ..= t^N`
//! and nothing beyond: the tail is unknown, not zero. Binary operations
//! return the smaller of the two orders so no result ever claims more than
//! its inputs determine.
//!
//! There is no series division. Every series used here (`e^{±t}`, the
//! Bernoulli generating function, `f_s(t) = t^{2s-1} / (e^t - 1)`) is built
//! directly from known coefficients.

use std::fmt;

use crate::bernoulli::{bernoulli_number, bernoulli_over_factorial, BernoulliCache};
use crate::error::{Error, Result};
use crate::exact::{binomial, factorial, falling_factorial, ExactRational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedSeries {
    coefficients: Vec<ExactRational>,
}

/// First degree at which two series disagree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mismatch {
    pub degree: usize,
    pub left: ExactRational,
    pub right: ExactRational,
}

impl fmt::Display for Mismatch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "degree {}: left {} right {}",
            self.degree, self.left, self.right
        )
    }
}

impl TruncatedSeries {
    /// Series with the given coefficients; order is `coeffs.len() - 1`.
    pub fn from_coefficients(coeffs: Vec<ExactRational>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::InvalidArgument(
                "a truncated series needs at least one coefficient".into(),
            ));
        }
        Ok(TruncatedSeries {
            coefficients: coeffs,
        })
    }

    pub fn zero(order: usize) -> Self {
        TruncatedSeries {
            coefficients: vec![ExactRational::zero(); order + 1],
        }
    }

    /// `c * t^degree`, known through `order`. The term is dropped if it lies
    /// beyond the order.
    pub fn monomial(c: ExactRational, degree: usize, order: usize) -> Self {
        let mut s = Self::zero(order);
        if degree <= order {
            s.coefficients[degree] = c;
        }
        s
    }

    pub fn order(&self) -> usize {
        self.coefficients.len() - 1
    }

    pub fn coefficients(&self) -> &[ExactRational] {
        &self.coefficients
    }

    /// Coefficient of `t^degree`, or `None` past the truncation order.
    pub fn coefficient(&self, degree: usize) -> Option<&ExactRational> {
        self.coefficients.get(degree)
    }

    pub fn coefficient_mut(&mut self, degree: usize) -> Option<&mut ExactRational> {
        self.coefficients.get_mut(degree)
    }

    /// Forget every coefficient above `order` (no-op if already lower).
    pub fn truncate(&self, order: usize) -> Self {
        let keep = (order + 1).min(self.coefficients.len());
        TruncatedSeries {
            coefficients: self.coefficients[..keep].to_vec(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let order = self.order().min(other.order());
        TruncatedSeries {
            coefficients: (0..=order)
                .map(|i| &self.coefficients[i] + &other.coefficients[i])
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let order = self.order().min(other.order());
        TruncatedSeries {
            coefficients: (0..=order)
                .map(|i| &self.coefficients[i] - &other.coefficients[i])
                .collect(),
        }
    }

    pub fn scale(&self, c: &ExactRational) -> Self {
        TruncatedSeries {
            coefficients: self.coefficients.iter().map(|a| a * c).collect(),
        }
    }

    /// Cauchy product, truncated at the smaller input order.
    pub fn multiply(&self, other: &Self) -> Self {
        let order = self.order().min(other.order());
        let coefficients = (0..=order)
            .map(|i| {
                (0..=i)
                    .filter(|&j| !self.coefficients[j].is_zero())
                    .map(|j| &self.coefficients[j] * &other.coefficients[i - j])
                    .sum()
            })
            .collect();
        TruncatedSeries { coefficients }
    }

    /// `times`-fold derivative; the order drops by `times`.
    pub fn derivative(&self, times: usize) -> Result<Self> {
        if times > self.order() {
            return Err(Error::InsufficientOrder {
                order: self.order(),
                reason: format!("cannot differentiate {times} times"),
            });
        }
        let coefficients = (0..=self.order() - times)
            .map(|i| {
                let top = (i + times) as i64;
                let weight = falling_factorial(top, times as u32);
                &self.coefficients[i + times] * &ExactRational::from_integer(weight)
            })
            .collect();
        Ok(TruncatedSeries { coefficients })
    }

    /// Compares coefficient-wise up to the smaller order.
    pub fn first_mismatch(&self, other: &Self) -> Option<Mismatch> {
        let order = self.order().min(other.order());
        (0..=order).find_map(|i| {
            (self.coefficients[i] != other.coefficients[i]).then(|| Mismatch {
                degree: i,
                left: self.coefficients[i].clone(),
                right: other.coefficients[i].clone(),
            })
        })
    }
}

/// Sign of the exponent in [`exp_series`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExpSign {
    Plus,
    Minus,
}

/// `e^{t}` or `e^{-t}` through `t^order`.
pub fn exp_series(sign: ExpSign, order: usize) -> TruncatedSeries {
    let coefficients = (0..=order)
        .map(|i| {
            let c = ExactRational::new(1, factorial(i as u32)).expect("factorial is positive");
            if sign == ExpSign::Minus && i % 2 == 1 {
                -c
            } else {
                c
            }
        })
        .collect();
    TruncatedSeries { coefficients }
}

/// `t / (e^t - 1)` through `t^order`: coefficient `B_n / n!`.
pub fn bernoulli_gf(order: usize, cache: &mut BernoulliCache) -> TruncatedSeries {
    cache.extend_to(order);
    TruncatedSeries {
        coefficients: (0..=order)
            .map(|n| bernoulli_over_factorial(n, cache))
            .collect(),
    }
}

/// `(e^t - 1) / t` through `t^order`: coefficient `1 / (i+1)!`.
pub fn exp_minus_one_over_t(order: usize) -> TruncatedSeries {
    TruncatedSeries {
        coefficients: (0..=order)
            .map(|i| {
                ExactRational::new(1, factorial(i as u32 + 1)).expect("factorial is positive")
            })
            .collect(),
    }
}

/// `f_s(t) = t^{2s-1} / (e^t - 1) = t^{2s-2} * t / (e^t - 1)` through `t^order`.
pub fn build_fs(s: usize, order: usize, cache: &mut BernoulliCache) -> Result<TruncatedSeries> {
    if s == 0 {
        return Err(Error::InvalidArgument("f_s needs s >= 1".into()));
    }
    let shift = 2 * s - 2;
    if order < shift {
        return Err(Error::InsufficientOrder {
            order,
            reason: format!("f_{s} starts at degree {shift}"),
        });
    }
    let gf = bernoulli_gf(order - shift, cache);
    let mut coefficients = vec![ExactRational::zero(); shift];
    coefficients.extend(gf.coefficients);
    Ok(TruncatedSeries { coefficients })
}

/// Both sides of the derivative relation for `f_s`:
///
/// ```text
/// e^t f_s^(m)(t) = sum_{p=0}^{m} (-1)^{m-p} C(m,p) f_s^(p)(t)
///                + sum_{p=0}^{min(m, 2s-1)} (-1)^{m-p} C(m,p) (2s-1)!/(2s-1-p)! t^{2s-1-p}
/// ```
///
/// `derivative_part` and `polynomial_part` are kept apart so callers can
/// inspect (or deliberately perturb) either term before [`check`](Self::check).
#[derive(Clone, Debug)]
pub struct ReflectionSides {
    pub s: usize,
    pub m: usize,
    pub lhs: TruncatedSeries,
    pub derivative_part: TruncatedSeries,
    pub polynomial_part: TruncatedSeries,
}

/// Outcome of comparing the two sides of an identity coefficient-wise.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeriesCheck {
    /// Highest degree at which both sides are known.
    pub comparable_degree: usize,
    pub mismatch: Option<Mismatch>,
}

impl SeriesCheck {
    pub fn passed(&self) -> bool {
        self.mismatch.is_none()
    }
}

impl ReflectionSides {
    pub fn build(s: usize, m: usize, order: usize, cache: &mut BernoulliCache) -> Result<Self> {
        if s == 0 || m == 0 {
            return Err(Error::InvalidArgument(
                "the reflection relation needs s >= 1 and m >= 1".into(),
            ));
        }
        if order < 2 * s - 2 + m {
            return Err(Error::InsufficientOrder {
                order,
                reason: format!("need at least 2s-2+m = {}", 2 * s - 2 + m),
            });
        }
        let fs = build_fs(s, order, cache)?;
        let top = order - m;

        let lhs = exp_series(ExpSign::Plus, top).multiply(&fs.derivative(m)?);

        let mut derivative_part = TruncatedSeries::zero(top);
        for p in 0..=m {
            let mut c = binomial(m as i64, p as i64);
            if (m - p) % 2 == 1 {
                c = -c;
            }
            derivative_part = derivative_part.add(&fs.derivative(p)?.scale(&c));
        }

        let mut polynomial_part = TruncatedSeries::zero(top);
        let odd = 2 * s - 1;
        for p in 0..=m.min(odd) {
            let mut c = binomial(m as i64, p as i64)
                * ExactRational::from_integer(falling_factorial(odd as i64, p as u32));
            if (m - p) % 2 == 1 {
                c = -c;
            }
            polynomial_part = polynomial_part.add(&TruncatedSeries::monomial(c, odd - p, top));
        }

        Ok(ReflectionSides {
            s,
            m,
            lhs,
            derivative_part,
            polynomial_part,
        })
    }

    pub fn rhs(&self) -> TruncatedSeries {
        self.derivative_part.add(&self.polynomial_part)
    }

    pub fn check(&self) -> SeriesCheck {
        let rhs = self.rhs();
        SeriesCheck {
            comparable_degree: self.lhs.order().min(rhs.order()),
            mismatch: self.lhs.first_mismatch(&rhs),
        }
    }
}

/// Checks the derivative relation for `f_s` at derivative order `m`,
/// coefficient-wise through degree `order - m`.
pub fn verify_reflection(
    s: usize,
    m: usize,
    order: usize,
    cache: &mut BernoulliCache,
) -> Result<SeriesCheck> {
    Ok(ReflectionSides::build(s, m, order, cache)?.check())
}

/// Both sides of Carlitz's identity
/// `(-1)^m sum_k C(m,k) B_{n+k} = (-1)^n sum_k C(n,k) B_{m+k}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CarlitzCheck {
    pub m: usize,
    pub n: usize,
    pub left: ExactRational,
    pub right: ExactRational,
}

impl CarlitzCheck {
    pub fn passed(&self) -> bool {
        self.left == self.right
    }
}

fn carlitz_side(outer: usize, inner: usize, cache: &mut BernoulliCache) -> ExactRational {
    let sum: ExactRational = (0..=outer)
        .map(|k| binomial(outer as i64, k as i64) * bernoulli_number(inner + k, cache))
        .sum();
    if outer % 2 == 1 {
        -sum
    } else {
        sum
    }
}

pub fn verify_carlitz(m: usize, n: usize, cache: &mut BernoulliCache) -> CarlitzCheck {
    cache.extend_to(m + n);
    CarlitzCheck {
        m,
        n,
        left: carlitz_side(m, n, cache),
        right: carlitz_side(n, m, cache),
    }
}
