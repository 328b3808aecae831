//! The Euler reduction matrix `A_K`, its split `A = B + C`, and the two
//! closed formulas `P`, `Q` for its inverse.
//!
//! All public functions take mathematical indices `r, s` in `1..=K-1`.
//! [`MatrixIndexing`] is the only place that converts them to zero-based
//! storage.

use serde::{Deserialize, Serialize};

use crate::bernoulli::BernoulliCache;
use crate::error::{Error, Result};
use crate::exact::{binomial, ExactRational};
use crate::matrix::RationalMatrix;

/// Size parameter `K >= 2` of the `(K-1) x (K-1)` matrices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct MatrixIndexing {
    k: usize,
}

impl MatrixIndexing {
    pub fn new(k: usize) -> Result<Self> {
        if k < 2 {
            return Err(Error::InvalidK(k as i64));
        }
        Ok(MatrixIndexing { k })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Matrix dimension `K - 1`.
    pub fn dim(&self) -> usize {
        self.k - 1
    }

    /// Mathematical indices `1..=K-1`.
    pub fn indices(&self) -> std::ops::RangeInclusive<usize> {
        1..=self.dim()
    }

    pub fn check(&self, index: usize) -> Result<()> {
        if (1..=self.dim()).contains(&index) {
            Ok(())
        } else {
            Err(Error::IndexOutOfRange(format!(
                "index {index} outside 1..={} for K={}",
                self.dim(),
                self.k
            )))
        }
    }

    /// Builds a matrix from a function of mathematical `(row, col)` indices.
    pub fn build(&self, mut f: impl FnMut(usize, usize) -> ExactRational) -> RationalMatrix {
        RationalMatrix::from_fn(self.dim(), self.dim(), |i, j| f(i + 1, j + 1))
    }

    /// Entry at mathematical `(row, col)`.
    pub fn entry<'a>(&self, m: &'a RationalMatrix, row: usize, col: usize) -> &'a ExactRational {
        m.get(row - 1, col - 1)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum MatrixName {
    A,
    B,
    C,
    P,
    Q,
}

impl std::fmt::Display for MatrixName {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            MatrixName::A => "A",
            MatrixName::B => "B",
            MatrixName::C => "C",
            MatrixName::P => "P",
            MatrixName::Q => "Q",
        };
        f.write_str(s)
    }
}

impl std::str::FromStr for MatrixName {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "A" => Ok(MatrixName::A),
            "B" => Ok(MatrixName::B),
            "C" => Ok(MatrixName::C),
            "P" => Ok(MatrixName::P),
            "Q" => Ok(MatrixName::Q),
            other => Err(Error::Parse(format!("unknown matrix name {other:?}"))),
        }
    }
}

fn b_entry(k: i64, r: i64, s: i64) -> ExactRational {
    binomial(2 * k - 2 * s, 2 * r - 1)
}

fn c_entry(k: i64, r: i64, s: i64) -> ExactRational {
    binomial(2 * k - 2 * s, 2 * k - 2 * r)
}

/// `A_{r,s} = C(2K-2s, 2r-1) + C(2K-2s, 2K-2r)`.
pub fn build_a(k: usize) -> Result<RationalMatrix> {
    let idx = MatrixIndexing::new(k)?;
    let k = k as i64;
    Ok(idx.build(|r, s| {
        let (r, s) = (r as i64, s as i64);
        b_entry(k, r, s) + c_entry(k, r, s)
    }))
}

/// `B_{r,s} = C(2K-2s, 2r-1)`; vanishes when `r + s > K`.
pub fn build_b_part(k: usize) -> Result<RationalMatrix> {
    let idx = MatrixIndexing::new(k)?;
    let k = k as i64;
    Ok(idx.build(|r, s| b_entry(k, r as i64, s as i64)))
}

/// `C_{r,s} = C(2K-2s, 2K-2r)`; vanishes when `r < s`.
pub fn build_c_part(k: usize) -> Result<RationalMatrix> {
    let idx = MatrixIndexing::new(k)?;
    let k = k as i64;
    Ok(idx.build(|r, s| c_entry(k, r as i64, s as i64)))
}

/// `(2/(2s-1)) * sum_{n=0}^{2K-2s} C(top(r), 2K-2s-n+1) C(n+2s-2, n) B_n`,
/// the shared shape of the two inverse formulas.
fn inverse_formula(
    k: usize,
    cache: &mut BernoulliCache,
    top: impl Fn(i64, i64) -> i64,
    negate: bool,
) -> Result<RationalMatrix> {
    let idx = MatrixIndexing::new(k)?;
    cache.extend_to(2 * k);
    let k = k as i64;
    Ok(idx.build(|s, r| {
        let (s, r) = (s as i64, r as i64);
        let sum: ExactRational = (0..=2 * k - 2 * s)
            .map(|n| {
                let b_n = cache.cached(n as usize).expect("cache extended above");
                binomial(top(k, r), 2 * k - 2 * s - n + 1) * binomial(n + 2 * s - 2, n) * b_n
            })
            .sum();
        let factor = ExactRational::new(if negate { -2 } else { 2 }, 2 * s - 1)
            .expect("2s-1 is positive");
        factor * sum
    }))
}

/// `P_{s,r} = (2/(2s-1)) sum_{n=0}^{2K-2s} C(2r-1, 2K-2s-n+1) C(n+2s-2, n) B_n`.
///
/// Rows are indexed by `s`, columns by `r`. Odd `n >= 3` terms are summed
/// and vanish through `B_n = 0`.
pub fn build_p(k: usize, cache: &mut BernoulliCache) -> Result<RationalMatrix> {
    inverse_formula(k, cache, |_, r| 2 * r - 1, false)
}

/// `Q_{s,r} = -(2/(2s-1)) sum_{n=0}^{2K-2s} C(2K-2r, 2K-2s-n+1) C(n+2s-2, n) B_n`.
pub fn build_q(k: usize, cache: &mut BernoulliCache) -> Result<RationalMatrix> {
    inverse_formula(k, cache, |k, r| 2 * k - 2 * r, true)
}

pub fn build_named(name: MatrixName, k: usize, cache: &mut BernoulliCache) -> Result<RationalMatrix> {
    match name {
        MatrixName::A => build_a(k),
        MatrixName::B => build_b_part(k),
        MatrixName::C => build_c_part(k),
        MatrixName::P => build_p(k, cache),
        MatrixName::Q => build_q(k, cache),
    }
}

/// Exact verification that `P = Q` and `P = A^{-1}` at one `K`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InverseReport {
    #[serde(rename = "K")]
    pub k: usize,
    pub p_eq_q: bool,
    pub pa_is_identity: bool,
    pub ap_is_identity: bool,
    pub det_nonzero: bool,
    pub determinant: ExactRational,
}

impl InverseReport {
    pub fn all_passed(&self) -> bool {
        self.p_eq_q && self.pa_is_identity && self.ap_is_identity && self.det_nonzero
    }
}

pub fn verify_inverse(k: usize, cache: &mut BernoulliCache) -> Result<InverseReport> {
    let a = build_a(k)?;
    let p = build_p(k, cache)?;
    let q = build_q(k, cache)?;
    let determinant = a.determinant()?;
    Ok(InverseReport {
        k,
        p_eq_q: p == q,
        pa_is_identity: p.multiply(&a)?.is_identity(),
        ap_is_identity: a.multiply(&p)?.is_identity(),
        det_nonzero: !determinant.is_zero(),
        determinant,
    })
}

fn b_at(cache: &BernoulliCache, n: i64) -> &ExactRational {
    cache.cached(n as usize).expect("cache extended by caller")
}

/// `C(2K-2s', 2s-2s'+n-1) C(n+2s-2, n)`, common to every closed form below.
fn collapsed_binomials(k: i64, s: i64, t: i64, n: i64) -> ExactRational {
    binomial(2 * k - 2 * t, 2 * s - 2 * t + n - 1) * binomial(n + 2 * s - 2, n)
}

fn check_closed_args(k: usize, s: usize, s_prime: usize, cache: &mut BernoulliCache) -> Result<()> {
    let idx = MatrixIndexing::new(k)?;
    idx.check(s)?;
    idx.check(s_prime)?;
    cache.extend_to(2 * k);
    Ok(())
}

/// Entry `(s, s')` of `P B` from the summed closed form, with the inner
/// sums over `r` already collapsed to powers of two:
///
/// * `s <= s'`: `(2/(2s-1)) sum_{n=2s'-2s+2}^{2K-2s} C(2K-2s', 2s-2s'+n-1) C(n+2s-2, n) 2^{2s-2s'+n-2} B_n`
/// * `s > s'`: the same summand over `n = 0 ..= 2K-2s`.
pub fn pb_closed(k: usize, s: usize, s_prime: usize, cache: &mut BernoulliCache) -> Result<ExactRational> {
    check_closed_args(k, s, s_prime, cache)?;
    let (k, s, t) = (k as i64, s as i64, s_prime as i64);
    let start = if s <= t { 2 * t - 2 * s + 2 } else { 0 };
    let sum: ExactRational = (start..=2 * k - 2 * s)
        .map(|n| {
            collapsed_binomials(k, s, t, n)
                * ExactRational::power_of_two(2 * s - 2 * t + n - 2)
                * b_at(cache, n)
        })
        .sum();
    Ok(ExactRational::new(2, 2 * s - 1).expect("2s-1 is positive") * sum)
}

/// Entry `(s, s')` of `P C`, evaluated from the case split with the `n = 1`
/// term pulled out and the inner sums over `r` kept explicit (no
/// power-of-two shortcut), so it is an independent route to the value.
///
/// * `s = s'`: `1 - (2/(2s-1)) sum_{n even >= 2} sum_{r=s}^{s+n/2-1} C(2K-2s, n-1) C(n-1, 2r-2s) C(n+2s-2, n) B_n`
/// * `s < s'`: `-(2/(2s-1)) sum_{n even >= 2s'-2s+2} C(..) C(n+2s-2, n) B_n sum_{r=s'}^{s+n/2-1} C(2s-2s'+n-1, 2r-2s')`
/// * `s > s'`: the even-`n` sum from `n = 0` plus the split-out term
///   `C(2K-2s', 2s-2s') C(2s-1, 1) B_1 sum_{r=s'}^{s} C(2s-2s', 2r-2s')`.
pub fn pc_closed(k: usize, s: usize, s_prime: usize, cache: &mut BernoulliCache) -> Result<ExactRational> {
    check_closed_args(k, s, s_prime, cache)?;
    let (k, s, t) = (k as i64, s as i64, s_prime as i64);
    let factor = ExactRational::new(2, 2 * s - 1).expect("2s-1 is positive");

    let even_part = |from: i64| -> ExactRational {
        (from..=2 * k - 2 * s)
            .filter(|n| n % 2 == 0)
            .map(|n| {
                let inner: ExactRational = (t..=s + n / 2 - 1)
                    .map(|r| binomial(2 * s - 2 * t + n - 1, 2 * r - 2 * t))
                    .sum();
                collapsed_binomials(k, s, t, n) * inner * b_at(cache, n)
            })
            .sum()
    };

    let value = if s == t {
        // the r = s, n = 1 term contributes exactly 1
        ExactRational::one() - factor * even_part(2)
    } else if s < t {
        -(factor * even_part(2 * t - 2 * s + 2))
    } else {
        let inner: ExactRational = (t..=s)
            .map(|r| binomial(2 * s - 2 * t, 2 * r - 2 * t))
            .sum();
        let n_one = binomial(2 * k - 2 * t, 2 * s - 2 * t)
            * binomial(2 * s - 1, 1)
            * b_at(cache, 1)
            * inner;
        -(factor * (even_part(0) + n_one))
    };
    Ok(value)
}

/// One `(s, s')` cell of the closed-form cross-check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClosedFormCell {
    pub s: usize,
    pub s_prime: usize,
    pub pb_closed: ExactRational,
    pub pc_closed: ExactRational,
    pub pb_product: ExactRational,
    pub pc_product: ExactRational,
}

impl ClosedFormCell {
    pub fn passed(&self) -> bool {
        let delta = if self.s == self.s_prime {
            ExactRational::one()
        } else {
            ExactRational::zero()
        };
        self.pb_closed == self.pb_product
            && self.pc_closed == self.pc_product
            && &self.pb_closed + &self.pc_closed == delta
    }
}

/// Compares the closed forms against `P B` and `P C` for every `(s, s')` at one `K`.
pub fn closed_form_cells(k: usize, cache: &mut BernoulliCache) -> Result<Vec<ClosedFormCell>> {
    let idx = MatrixIndexing::new(k)?;
    let p = build_p(k, cache)?;
    let pb = p.multiply(&build_b_part(k)?)?;
    let pc = p.multiply(&build_c_part(k)?)?;
    let mut cells = Vec::with_capacity(idx.dim() * idx.dim());
    for s in idx.indices() {
        for t in idx.indices() {
            cells.push(ClosedFormCell {
                s,
                s_prime: t,
                pb_closed: pb_closed(k, s, t, cache)?,
                pc_closed: pc_closed(k, s, t, cache)?,
                pb_product: idx.entry(&pb, s, t).clone(),
                pc_product: idx.entry(&pc, s, t).clone(),
            });
        }
    }
    Ok(cells)
}
