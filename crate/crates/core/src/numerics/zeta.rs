//! Single, double and nested zeta sums with rigorous error bounds.
//!
//! Everything is driven by the Hurwitz tail `zeta(s, N) = sum_{m >= N} m^-s`,
//! evaluated by Euler-Maclaurin summation with the remainder bound
//!
//! ```text
//! |R_M| <= 4 (s)_{2M} / (2 pi)^{2M} * N^{-(s+2M-1)} / (s+2M-1),   N > 1,
//! ```
//!
//! valid for real `s > 1`. Partial sums and Euler-Maclaurin terms are
//! accumulated as exact rationals; only the final value is rounded into a
//! [`BigFloat`], so the reported bound is the truncation bound plus one
//! rounding unit.

use std::collections::HashMap;

use num_bigint::BigInt;
use crate::bernoulli::BernoulliCache;
use crate::error::{Error, Result};
use crate::exact::{factorial, rising_factorial, ExactRational};

use super::bigfloat::{ten_pow, BigFloat, Precision};

/// An exact rational approximation and a rigorous bound on its distance to
/// the true value.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalBall {
    pub center: ExactRational,
    pub radius: ExactRational,
}

impl RationalBall {
    fn add_scaled(&mut self, other: &RationalBall, c: &ExactRational) {
        self.center += &(&other.center * c);
        self.radius += &(&other.radius * &c.abs());
    }
}

/// Rational lower bound for pi used in remainder estimates.
fn pi_lower() -> ExactRational {
    ExactRational::new(314_159, 100_000).expect("nonzero")
}

fn inverse_power(base: u64, exp: u32) -> ExactRational {
    ExactRational::new(1, BigInt::from(base).pow(exp)).expect("positive base")
}

/// `4 (s)_{2M} / (2 pi)^{2M} * N^{-(s+2M-1)} / (s+2M-1)`.
pub fn em_remainder_bound(s: u32, n: u64, m: u32) -> ExactRational {
    let top = s + 2 * m - 1;
    let two_pi = pi_lower() * ExactRational::from(2);
    let damping = two_pi.pow(-(2 * m as i32)).expect("nonzero");
    ExactRational::from(rising_factorial(i64::from(s), 2 * m) * 4)
        * damping
        * inverse_power(n, top)
        * ExactRational::new(1, top).expect("positive")
}

/// Memoizing evaluator at one working precision.
#[derive(Clone, Debug)]
pub struct ZetaEngine {
    precision: Precision,
    cache: BernoulliCache,
    singles: HashMap<u32, BigFloat>,
    doubles: HashMap<(u32, u32), BigFloat>,
}

/// Guard digits between the truncation target and the promised accuracy.
const GUARD_DIGITS: i32 = 4;

impl ZetaEngine {
    pub fn new(digits: u32) -> Self {
        ZetaEngine {
            precision: Precision::new(digits),
            cache: BernoulliCache::new(),
            singles: HashMap::new(),
            doubles: HashMap::new(),
        }
    }

    pub fn precision(&self) -> Precision {
        self.precision
    }

    /// Total truncation budget for one zeta value.
    fn budget(&self) -> ExactRational {
        ten_pow(-(self.precision.digits() as i32 + GUARD_DIGITS))
    }

    /// Default shift point for Euler-Maclaurin: roughly one unit per digit.
    fn shift(&self) -> u64 {
        u64::from(self.precision.digits()) + GUARD_DIGITS as u64 + 10
    }

    /// `zeta(s, n)` for `s >= 2`, `n >= 2`, within `target`.
    ///
    /// The number of correction terms grows until the remainder bound meets
    /// the target; if that needs more than `2n + s` terms the shift is too
    /// small and an error is returned.
    pub fn hurwitz(&mut self, s: u32, n: u64, target: &ExactRational) -> Result<RationalBall> {
        if s < 2 || n < 2 {
            return Err(Error::InvalidArgument(format!(
                "Hurwitz tail needs s >= 2 and N >= 2, got s={s} N={n}"
            )));
        }
        let max_terms = 2 * n as u32 + s;
        let mut m = 1u32;
        let mut bound = em_remainder_bound(s, n, m);
        while &bound > target {
            m += 1;
            if m > max_terms {
                return Err(Error::Unsupported(format!(
                    "Euler-Maclaurin cannot reach the target for s={s} at N={n}"
                )));
            }
            bound = em_remainder_bound(s, n, m);
        }
        self.cache.extend_to(2 * m as usize);

        let mut center = inverse_power(n, s - 1) * ExactRational::new(1, s - 1).expect("s > 1")
            + inverse_power(n, s) * ExactRational::new(1, 2).expect("nonzero");
        for k in 1..=m {
            let b = self.cache.cached(2 * k as usize).expect("extended above");
            let coeff = b
                * &ExactRational::new(rising_factorial(i64::from(s), 2 * k - 1), factorial(2 * k))
                    .expect("factorial is positive");
            center += &(coeff * inverse_power(n, s + 2 * k - 1));
        }
        Ok(RationalBall {
            center,
            radius: bound,
        })
    }

    fn finish(&self, ball: &RationalBall) -> BigFloat {
        BigFloat::from_rational_with_error(&ball.center, &ball.radius, self.precision)
    }

    /// `zeta(k)` as an exact ball.
    pub fn zeta_single_ball(&mut self, k: u32) -> Result<RationalBall> {
        if k < 2 {
            return Err(Error::InvalidArgument(format!("zeta({k}) diverges")));
        }
        let n = self.shift();
        let head: ExactRational = (1..n).map(|m| inverse_power(m, k)).sum();
        let target = self.budget();
        let mut ball = self.hurwitz(k, n, &target)?;
        ball.center += &head;
        Ok(ball)
    }

    /// `zeta(k) = sum_{m >= 1} m^-k`, `k >= 2`.
    pub fn zeta_single(&mut self, k: u32) -> Result<BigFloat> {
        if let Some(v) = self.singles.get(&k) {
            return Ok(v.clone());
        }
        let ball = self.zeta_single_ball(k)?;
        let v = self.finish(&ball);
        self.singles.insert(k, v.clone());
        Ok(v)
    }

    /// `zeta(k1, k2) = sum_{m >= 2} m^-k2 sum_{j < m} j^-k1`, `k1 >= 1`, `k2 >= 2`.
    ///
    /// Summed over the smaller index: `sum_j j^-k1 zeta(k2, j+1)`. For
    /// `j <= J` the tails come from one Hurwitz value and the recurrence
    /// `zeta(k2, j) = zeta(k2, j+1) + j^-k2`. For `j > J` each tail is
    /// replaced by its Euler-Maclaurin expansion in `1/j`, which turns the
    /// remaining sum into a combination of Hurwitz tails at `J+1`.
    pub fn zeta_double_ball(&mut self, k1: u32, k2: u32) -> Result<RationalBall> {
        if k1 < 1 || k2 < 2 {
            return Err(Error::InvalidArgument(format!(
                "zeta({k1},{k2}) needs k1 >= 1 and k2 >= 2"
            )));
        }
        let budget = self.budget();
        let quarter = &budget * &ExactRational::new(1, 4).expect("nonzero");
        let j_max = self.shift();

        // head: j = 1..=J
        let weights: Vec<ExactRational> = (1..=j_max).map(|j| inverse_power(j, k1)).collect();
        let weight_sum: ExactRational = weights.iter().sum();
        let head_target = &quarter / &weight_sum;
        let mut tail_at = self.hurwitz(k2, j_max + 1, &head_target)?;
        let mut head = ExactRational::zero();
        for j in (1..=j_max).rev() {
            head += &(&weights[j as usize - 1] * &tail_at.center);
            tail_at.center += &inverse_power(j, k2);
        }
        let head_radius = &head_target * &weight_sum;

        // tail: j > J, expansion truncated after p correction terms
        let inner_bound = |p: u32| -> ExactRational {
            let exponent = k1 + k2 + 2 * p - 2;
            em_remainder_bound(k2, 1, p) * inverse_power(j_max, exponent)
                * ExactRational::new(1, exponent).expect("positive")
        };
        let mut p = 1u32;
        while inner_bound(p) > quarter {
            p += 1;
            if p > 2 * j_max as u32 + k2 {
                return Err(Error::Unsupported(format!(
                    "tail expansion for zeta({k1},{k2}) does not converge"
                )));
            }
        }
        self.cache.extend_to(2 * p as usize);

        // (exponent, coefficient) pairs of zeta(exponent, J+1)
        let mut pieces = vec![
            (k1 + k2 - 1, ExactRational::new(1, k2 - 1).expect("k2 > 1")),
            (k1 + k2, ExactRational::new(-1, 2).expect("nonzero")),
        ];
        for i in 1..=p {
            let b = self.cache.cached(2 * i as usize).expect("extended above");
            let coeff = b
                * &ExactRational::new(rising_factorial(i64::from(k2), 2 * i - 1), factorial(2 * i))
                    .expect("factorial is positive");
            pieces.push((k1 + k2 + 2 * i - 1, coeff));
        }
        let piece_count = ExactRational::from(pieces.len() as i64);
        let mut ball = RationalBall {
            center: head,
            radius: head_radius + inner_bound(p),
        };
        for (exponent, coeff) in pieces {
            let scale = if coeff.abs() > ExactRational::one() {
                coeff.abs()
            } else {
                ExactRational::one()
            };
            let target = &quarter / &(&piece_count * &scale);
            let piece = self.hurwitz(exponent, j_max + 1, &target)?;
            ball.add_scaled(&piece, &coeff);
        }
        Ok(ball)
    }

    pub fn zeta_double(&mut self, k1: u32, k2: u32) -> Result<BigFloat> {
        if let Some(v) = self.doubles.get(&(k1, k2)) {
            return Ok(v.clone());
        }
        let ball = self.zeta_double_ball(k1, k2)?;
        let v = self.finish(&ball);
        self.doubles.insert((k1, k2), v.clone());
        Ok(v)
    }

    /// Nested sum `zeta(k_1, ..., k_n)` over `m_1 < ... < m_n`, bracketed
    /// rather than accelerated: partial sums run to `cutoff`, and the
    /// remainder is enclosed between the partial and the bounded complete
    /// inner sums times `zeta(k_n, cutoff+1)`. All `k_i >= 2`.
    ///
    /// The bound is rigorous but shrinks only like `cutoff^-(k_n)`; use
    /// it where no faster method applies.
    pub fn mzv_bracketed(&mut self, ks: &[u32], cutoff: u64) -> Result<BigFloat> {
        if ks.is_empty() || ks.iter().any(|&k| k < 2) {
            return Err(Error::InvalidArgument(
                "bracketed summation needs a nonempty index list with every entry >= 2".into(),
            ));
        }
        if cutoff < 2 {
            return Err(Error::InvalidArgument("cutoff must be at least 2".into()));
        }
        let prec = self.precision;
        let one = BigFloat::from_rational(&ExactRational::one(), prec);
        // partial[j] = sum over m_1 < ... < m_j <= m of prod m_i^-k_i; partial[0] = 1
        let mut partial = vec![BigFloat::zero(prec); ks.len() + 1];
        partial[0] = one.clone();
        for m in 1..=cutoff {
            for j in (1..=ks.len()).rev() {
                let w = BigFloat::from_rational(&inverse_power(m, ks[j - 1]), prec);
                partial[j] = partial[j].add(&w.mul(&partial[j - 1]));
            }
        }
        let tail_target = ten_pow(-(2 * prec.digits() as i32 + 5));
        let mut lower = one.clone();
        let mut upper = one;
        for (j, &k) in ks.iter().enumerate() {
            let ball = self.hurwitz(k, cutoff + 1, &tail_target)?;
            let tail = self.finish(&ball);
            let lo = partial[j + 1].add(&partial[j].mul(&tail));
            let hi = partial[j + 1].add(&upper.mul(&tail));
            lower = lo;
            upper = hi;
        }
        let lo = lower.interval().0;
        let hi = upper.interval().1;
        Ok(BigFloat::from_interval(&lo, &hi, prec))
    }

    /// pi by Machin's formula with an explicit enclosure.
    pub fn pi_interval(&self) -> (ExactRational, ExactRational) {
        pi_interval(self.precision)
    }

    pub fn pi(&self) -> BigFloat {
        let (lo, hi) = self.pi_interval();
        BigFloat::from_interval(&lo, &hi, self.precision)
    }

    /// `H(n) = pi^{2n} / (2n+1)!` from the pi enclosure.
    pub fn h_numeric(&self, n: u32) -> BigFloat {
        let (lo, hi) = self.pi_interval();
        let c = ExactRational::new(1, factorial(2 * n + 1)).expect("factorial is positive");
        let lo = lo.pow(2 * n as i32).expect("pi is nonzero") * &c;
        let hi = hi.pow(2 * n as i32).expect("pi is nonzero") * &c;
        BigFloat::from_interval(&lo, &hi, self.precision)
    }
}

/// `arctan(1/x)` partial sum with `terms` terms and the first omitted term,
/// which bounds the alternating remainder.
fn arctan_inverse(x: u64, terms: u32) -> (ExactRational, ExactRational) {
    let mut sum = ExactRational::zero();
    for k in 0..terms {
        let t = ExactRational::new(1, BigInt::from(2 * k + 1) * BigInt::from(x).pow(2 * k + 1))
            .expect("positive");
        if k % 2 == 0 {
            sum += t;
        } else {
            sum -= &t;
        }
    }
    let next = ExactRational::new(
        1,
        BigInt::from(2 * terms + 1) * BigInt::from(x).pow(2 * terms + 1),
    )
    .expect("positive");
    (sum, next)
}

/// Rigorous enclosure of pi, `pi = 16 arctan(1/5) - 4 arctan(1/239)`,
/// tight enough for the binary width of `precision`.
pub fn pi_interval(precision: Precision) -> (ExactRational, ExactRational) {
    // each term of arctan(1/5) gains log10(25) > 1.39 digits
    let want_digits = precision.bits() / 3 + 10;
    let terms = want_digits * 100 / 139 + 2;
    let (a5, r5) = arctan_inverse(5, terms);
    let (a239, r239) = arctan_inverse(239, terms);
    let center = a5 * ExactRational::from(16) - a239 * ExactRational::from(4);
    let radius = r5 * ExactRational::from(16) + r239 * ExactRational::from(4);
    (&center - &radius, &center + &radius)
}

/// `zeta(k)` within `10^-digits`.
pub fn zeta_single(k: u32, digits: u32) -> Result<BigFloat> {
    ZetaEngine::new(digits).zeta_single(k)
}

/// `zeta(k1, k2)` within `10^-digits`.
pub fn zeta_double(k1: u32, k2: u32, digits: u32) -> Result<BigFloat> {
    ZetaEngine::new(digits).zeta_double(k1, k2)
}

/// pi within `10^-digits`.
pub fn pi_value(digits: u32) -> BigFloat {
    ZetaEngine::new(digits).pi()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    fn dec(s: &str) -> ExactRational {
        let (int, frac) = s.split_once('.').unwrap();
        let digits = format!("{int}{frac}");
        ExactRational::new(digits.parse::<BigInt>().unwrap(), BigInt::from(10).pow(frac.len() as u32))
            .unwrap()
    }

    /// |value - reference| <= bound + 10^-(reference digits)
    fn close(v: &BigFloat, reference: &str) -> bool {
        let digits = reference.split_once('.').unwrap().1.len() as i32;
        (v.value() - dec(reference)).abs() <= v.error_bound() + ten_pow(-digits)
    }

    #[test]
    fn remainder_bound_shrinks_with_terms() {
        let b1 = em_remainder_bound(3, 20, 2);
        let b2 = em_remainder_bound(3, 20, 6);
        assert!(b2 < b1);
        assert!(b2 > ExactRational::zero());
    }

    #[test]
    fn single_values() {
        let z3 = zeta_single(3, 30).unwrap();
        assert!(close(&z3, "1.2020569031595942853997381615114499907649862923405"));
        assert!(z3.error_bound() <= ten_pow(-30));
        let z5 = zeta_single(5, 30).unwrap();
        assert!(close(&z5, "1.0369277551433699263313654864570341680570809195019"));
        assert!(zeta_single(1, 10).is_err());
    }

    #[test]
    fn single_matches_pi_closed_forms() {
        let mut e = ZetaEngine::new(40);
        let pi = e.pi();
        let z2 = e.zeta_single(2).unwrap();
        let z4 = e.zeta_single(4).unwrap();
        assert!(z2.consistent_with(&pi.powi(2).mul_rational(&rat(1, 6))));
        assert!(z4.consistent_with(&pi.powi(4).mul_rational(&rat(1, 90))));
        assert!(z2.consistent_with(&e.h_numeric(1)));
    }

    #[test]
    fn double_values() {
        // references: independent 50-digit evaluation of the same sums
        let cases = [
            ((2, 3), "0.22881039760335375976874614894168879193250934271988"),
            ((3, 2), "0.71156619755057243209697380608640261209256120443834"),
            ((2, 5), "0.038575124342753255505925464372995570019734841698909"),
            ((4, 3), "0.20750501461573209590780760549467146544182867955061"),
            ((3, 4), "0.085159822534833651406806018872367345957339508586877"),
        ];
        let mut e = ZetaEngine::new(40);
        for ((k1, k2), reference) in cases {
            let v = e.zeta_double(k1, k2).unwrap();
            assert!(close(&v, reference), "zeta({k1},{k2}) = {v}");
            assert!(v.error_bound() <= ten_pow(-40));
        }
        assert!(e.zeta_double(2, 1).is_err());
    }

    #[test]
    fn depth_two_with_leading_one() {
        // sum_m m^-2 H_{m-1} = zeta(3), sum_m m^-3 H_{m-1} = pi^4/360
        let mut e = ZetaEngine::new(30);
        let z12 = e.zeta_double(1, 2).unwrap();
        assert!(z12.consistent_with(&e.zeta_single(3).unwrap()));
        let z13 = e.zeta_double(1, 3).unwrap();
        assert!(z13.consistent_with(&e.pi().powi(4).mul_rational(&rat(1, 360))));
    }

    #[test]
    fn stuffle_relation() {
        let mut e = ZetaEngine::new(30);
        for (a, b) in [(2, 3), (2, 5), (3, 4)] {
            let lhs = e
                .zeta_double(a, b)
                .unwrap()
                .add(&e.zeta_double(b, a).unwrap())
                .add(&e.zeta_single(a + b).unwrap());
            let rhs = e.zeta_single(a).unwrap().mul(&e.zeta_single(b).unwrap());
            assert!(lhs.consistent_with(&rhs), "({a},{b})");
        }
    }

    #[test]
    fn precision_refinement_is_monotone() {
        for (k1, k2) in [(2, 3), (3, 2), (4, 3)] {
            let coarse = zeta_double(k1, k2, 20).unwrap();
            let fine = zeta_double(k1, k2, 40).unwrap();
            assert!(coarse.contains(&fine.value()), "zeta({k1},{k2})");
        }
        let coarse = zeta_single(7, 15).unwrap();
        let fine = zeta_single(7, 30).unwrap();
        assert!(coarse.contains(&fine.value()));
    }

    #[test]
    fn bracketed_sum_encloses_accelerated_value() {
        let mut e = ZetaEngine::new(20);
        let direct = e.mzv_bracketed(&[2, 3], 2000).unwrap();
        let fast = e.zeta_double(2, 3).unwrap();
        assert!(direct.consistent_with(&fast));
        assert!(direct.error_bound() < ten_pow(-8));
        // zeta(2,2) = pi^4/120
        let z22 = e.mzv_bracketed(&[2, 2], 2000).unwrap();
        assert!(z22.consistent_with(&e.h_numeric(2)));
        assert!(e.mzv_bracketed(&[1, 3], 100).is_err());
    }

    #[test]
    fn pi_digits() {
        let pi = pi_value(10);
        assert!(close(&pi, "3.141592654"));
        assert!(pi.error_bound() <= ten_pow(-10));
        let pi = pi_value(60);
        assert!(pi.contains(&dec(
            "3.14159265358979323846264338327950288419716939937510582097494"
        )) || close(&pi, "3.14159265358979323846264338327950288419716939937510582097494"));
        assert!(pi.error_bound() <= ten_pow(-60));
    }
}
