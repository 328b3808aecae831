//! Bernoulli numbers `B_n`, the coefficients of `t / (e^t - 1) = sum B_n t^n / n!`.
//!
//! The convention here is `B_1 = -1/2`. Every matrix formula and every
//! `n = 1` special case elsewhere in the crate depends on that sign, so do
//! not mix these values with tables using `B_1 = +1/2`.

use num_bigint::BigInt;

use crate::exact::{factorial, ExactRational};

/// Append-only cache of `B_0 ..= B_high_water`.
///
/// The cache is a plain value: each task owns (or clones) its own. Values are
/// filled by the recursion
/// `B_n = -n! * sum_{k<n} B_k / (k! (n-k+1)!)`, so the result never depends
/// on the order in which indices are requested.
#[derive(Clone, Debug)]
pub struct BernoulliCache {
    values: Vec<ExactRational>,
    // factorials[i] = i!, kept one step ahead of `values` for the (n-k+1)! term
    factorials: Vec<BigInt>,
}

impl Default for BernoulliCache {
    fn default() -> Self {
        Self::new()
    }
}

impl BernoulliCache {
    pub fn new() -> Self {
        BernoulliCache {
            values: vec![ExactRational::one()],
            factorials: vec![BigInt::from(1), BigInt::from(1)],
        }
    }

    /// A cache already filled through index `n_max`.
    pub fn with_capacity(n_max: usize) -> Self {
        let mut cache = Self::new();
        cache.extend_to(n_max);
        cache
    }

    /// Largest index currently stored.
    pub fn high_water(&self) -> usize {
        self.values.len() - 1
    }

    /// Filled prefix `B_0 ..= B_high_water`.
    pub fn values(&self) -> &[ExactRational] {
        &self.values
    }

    /// Returns `B_n`, extending the cache as needed.
    pub fn get(&mut self, n: usize) -> &ExactRational {
        self.extend_to(n);
        &self.values[n]
    }

    /// Like [`get`](Self::get) but requires the value to be present already.
    pub fn cached(&self, n: usize) -> Option<&ExactRational> {
        self.values.get(n)
    }

    pub fn extend_to(&mut self, n_max: usize) {
        while self.factorials.len() < n_max + 2 {
            let i = self.factorials.len();
            let next = &self.factorials[i - 1] * BigInt::from(i);
            self.factorials.push(next);
        }
        while self.values.len() <= n_max {
            let n = self.values.len();
            let sum: ExactRational = self
                .values
                .iter()
                .enumerate()
                .map(|(k, b_k)| {
                    if b_k.is_zero() {
                        return ExactRational::zero();
                    }
                    let denom = &self.factorials[k] * &self.factorials[n - k + 1];
                    b_k * &ExactRational::new(1, denom).expect("factorials are positive")
                })
                .sum();
            let b_n = -(sum * ExactRational::from_integer(self.factorials[n].clone()));
            self.values.push(b_n);
        }
    }
}

/// `B_n`, computed through `cache`.
pub fn bernoulli_number(n: usize, cache: &mut BernoulliCache) -> ExactRational {
    cache.get(n).clone()
}

/// `[B_0, ..., B_{n_max}]` from a fresh cache.
pub fn bernoulli_range(n_max: usize) -> Vec<ExactRational> {
    BernoulliCache::with_capacity(n_max).values().to_vec()
}

/// `B_n / n!`, the coefficient of `t^n` in `t / (e^t - 1)`.
pub fn bernoulli_over_factorial(n: usize, cache: &mut BernoulliCache) -> ExactRational {
    let b = bernoulli_number(n, cache);
    let n = u32::try_from(n).expect("Bernoulli index fits in u32");
    b * ExactRational::new(1, factorial(n)).expect("factorial is positive")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{binomial, rat};

    /// Akiyama-Tanigawa: an independent route to the Bernoulli numbers.
    /// It produces the `B_1 = +1/2` convention, so index 1 is flipped.
    fn akiyama_tanigawa(n_max: usize) -> Vec<ExactRational> {
        let mut out = Vec::new();
        for n in 0..=n_max {
            let mut row: Vec<ExactRational> =
                (0..=n).map(|m| rat(1, m as i64 + 1)).collect();
            for j in (1..=n).rev() {
                for i in 0..j {
                    let i1 = ExactRational::from(i as i64 + 1);
                    row[i] = i1 * (&row[i] - &row[i + 1]);
                }
            }
            out.push(row[0].clone());
        }
        out[1] = -out[1].clone();
        out
    }

    #[test]
    fn stated_values() {
        let mut cache = BernoulliCache::new();
        assert_eq!(bernoulli_number(0, &mut cache), ExactRational::one());
        assert_eq!(bernoulli_number(1, &mut cache), rat(-1, 2));
        assert_eq!(bernoulli_number(3, &mut cache), ExactRational::zero());
        assert_eq!(bernoulli_number(2, &mut cache), rat(1, 6));
        assert_eq!(bernoulli_number(12, &mut cache), rat(-691, 2730));
    }

    #[test]
    fn range_examples() {
        assert_eq!(bernoulli_range(1), vec![rat(1, 1), rat(-1, 2)]);
        assert_eq!(
            bernoulli_range(4),
            vec![rat(1, 1), rat(-1, 2), rat(1, 6), ExactRational::zero(), rat(-1, 30)]
        );
        assert!(bernoulli_range(7).last().unwrap().is_zero());
        assert_eq!(bernoulli_range(0), vec![ExactRational::one()]);
    }

    #[test]
    fn agrees_with_independent_algorithm() {
        let oracle = akiyama_tanigawa(60);
        assert_eq!(bernoulli_range(60), oracle);
    }

    #[test]
    fn binomial_form_of_recursion_holds() {
        // sum_{k=0}^{n} C(n+1, k) B_k = 0 for n >= 1
        let b = bernoulli_range(80);
        for n in 1..=80usize {
            let s: ExactRational = (0..=n)
                .map(|k| binomial(n as i64 + 1, k as i64) * &b[k])
                .sum();
            assert!(s.is_zero(), "n={n}");
        }
    }

    #[test]
    fn odd_values_vanish_and_even_signs_alternate() {
        let b = bernoulli_range(120);
        for n in (3..=119).step_by(2) {
            assert!(b[n].is_zero(), "B_{n}");
        }
        for m in 1..=60usize {
            let expected = if m % 2 == 1 { 1 } else { -1 };
            assert_eq!(b[2 * m].signum(), expected, "sign of B_{}", 2 * m);
        }
    }

    #[test]
    fn fill_order_does_not_matter() {
        let mut a = BernoulliCache::new();
        for n in [5, 30, 2, 17, 40] {
            a.get(n);
        }
        let b = BernoulliCache::with_capacity(40);
        assert_eq!(a.values(), b.values());
        assert_eq!(a.high_water(), 40);
    }
}
