use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use dzeta_core::exact::{binomial, rat};
use dzeta_core::ExactRational;

use crate::Outcome;

fn random_rational(rng: &mut ChaCha8Rng) -> ExactRational {
    rat(rng.gen_range(-10_000..=10_000), rng.gen_range(1..=5_000))
}

/// Names of the laws that fail for one random triple.
fn check_case(rng: &mut ChaCha8Rng) -> Vec<&'static str> {
    let (x, y, z) = (random_rational(rng), random_rational(rng), random_rational(rng));
    let mut bad = Vec::new();
    if &(&x + &y) + &z != &x + &(&y + &z) {
        bad.push("addition is associative");
    }
    if &x * &y != &y * &x {
        bad.push("multiplication is commutative");
    }
    if &x * &(&y + &z) != &(&x * &y) + &(&x * &z) {
        bad.push("distributive law");
    }
    if let Ok(inv) = x.recip() {
        if !(&x * &inv).is_one() {
            bad.push("multiplicative inverse");
        }
    }
    if x.to_string().parse::<ExactRational>().ok() != Some(x.clone()) {
        bad.push("text round trip");
    }
    let n: i64 = rng.gen_range(-30..=60);
    let k: i64 = rng.gen_range(0..=40);
    if binomial(n, k) != binomial(n - 1, k - 1) + binomial(n - 1, k) {
        bad.push("Pascal recurrence");
    }
    if n >= 0 && k <= n && binomial(n, k) != binomial(n, n - k) {
        bad.push("binomial symmetry");
    }
    bad
}

pub fn arith(seed: Option<u64>, cases: u32) -> Outcome {
    let seed = seed.unwrap_or_else(rand::random);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut text = format!("seed: {seed}\n");
    let mut failures = 0;
    for i in 0..cases {
        for law in check_case(&mut rng) {
            failures += 1;
            text.push_str(&format!("case {i}: {law} FAILED\n"));
        }
    }
    text.push_str(&format!("{cases} cases, {failures} failures\n"));
    Outcome {
        text,
        failed: failures > 0,
    }
}
