//! Recovering a small-denominator rational from an enclosure.

use crate::exact::ExactRational;

use super::bigfloat::BigFloat;

/// The unique `p/q` with `q <= max_denominator` inside the enclosure of `x`,
/// or `None` when there is no such rational or more than one.
pub fn rational_reconstruct(x: &BigFloat, max_denominator: u64) -> Option<ExactRational> {
    if max_denominator == 0 {
        return None;
    }
    let (lo, hi) = x.interval();
    let mut found: Option<ExactRational> = None;
    for q in 1..=max_denominator {
        let q_r = ExactRational::from(q as i64);
        let first = (&lo * &q_r).ceil();
        let last = (&hi * &q_r).floor();
        let mut p = first;
        while p <= last {
            let candidate = ExactRational::new(p.clone(), q).expect("q >= 1");
            match &found {
                None => found = Some(candidate),
                Some(f) if *f == candidate => {}
                Some(_) => return None,
            }
            p += 1;
        }
    }
    found
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;
    use crate::numerics::bigfloat::{ten_pow, Precision};

    fn approx(x: ExactRational, bound: ExactRational) -> BigFloat {
        BigFloat::from_rational_with_error(&x, &bound, Precision::new(40))
    }

    #[test]
    fn examples() {
        assert_eq!(rational_reconstruct(&approx(rat(1, 2), ten_pow(-30)), 10), Some(rat(1, 2)));
        let third = ExactRational::new(
            "3333333333333333333333333333333333".parse::<num_bigint::BigInt>().unwrap(),
            num_bigint::BigInt::from(10).pow(34),
        )
        .unwrap();
        assert_eq!(rational_reconstruct(&approx(third, ten_pow(-30)), 10), Some(rat(1, 3)));
        assert_eq!(rational_reconstruct(&approx(rat(2, 5), rat(1, 5)), 10), None);
    }

    #[test]
    fn negative_and_integer_targets() {
        assert_eq!(
            rational_reconstruct(&approx(rat(-11, 2), ten_pow(-25)), 64),
            Some(rat(-11, 2))
        );
        assert_eq!(rational_reconstruct(&approx(rat(-18, 1), ten_pow(-25)), 64), Some(rat(-18, 1)));
    }

    #[test]
    fn empty_interval_gives_nothing() {
        // nothing with denominator <= 3 within 1e-6 of 1/7
        assert_eq!(rational_reconstruct(&approx(rat(1, 7), ten_pow(-6)), 3), None);
        assert_eq!(rational_reconstruct(&approx(rat(1, 7), ten_pow(-6)), 0), None);
    }
}
