//! Numeric audits of the reduction tables.
//!
//! The Euler audit measures, for each row, the constant left over after the
//! product terms are subtracted from an independently summed double zeta
//! value, and compares it with the printed `-1/2`. The `H(a,b)` audit
//! evaluates the closed formula and compares it with a direct summation.

use serde::{Deserialize, Serialize};

use crate::bernoulli::BernoulliCache;
use crate::error::{Error, Result};
use crate::exact::ExactRational;
use crate::reductions::{
    h_ab_coefficients, inverse_reduction_coefficients, printed_constant, ConstantSource, Label,
    TableRow,
};
use crate::zagier::{build_a, MatrixIndexing};

use super::bigfloat::{BigFloat, Precision};
use super::reconstruct::rational_reconstruct;
use super::zeta::ZetaEngine;

/// Denominator bound used when reconstructing audited constants.
pub const DEFAULT_MAX_DENOMINATOR: u64 = 64;

/// Below this many digits no reconstruction is attempted.
pub const MIN_RECONSTRUCTION_DIGITS: u32 = 10;

/// Partial-sum cutoff for nested sums of depth three or more.
pub const BRACKET_CUTOFF: u64 = 20_000;

/// Numeric value of a table label. Supports `zeta(k)`, `zeta(k1,k2)`,
/// `H(n)`, `pi^m` and products of these.
pub fn evaluate_label(engine: &mut ZetaEngine, label: &Label) -> Result<BigFloat> {
    match label {
        Label::Zeta(ks) => match ks.as_slice() {
            [k] => engine.zeta_single(*k),
            [k1, k2] => engine.zeta_double(*k1, *k2),
            _ => Err(Error::Unsupported(format!(
                "numeric evaluation of depth-{} label {label}",
                ks.len()
            ))),
        },
        Label::H(n) => Ok(engine.h_numeric(*n)),
        Label::Pi(m) => Ok(engine.pi().powi(*m)),
        Label::Product(factors) => {
            let mut acc = BigFloat::from_rational(&ExactRational::one(), engine.precision());
            for f in factors {
                acc = acc.mul(&evaluate_label(engine, f)?);
            }
            Ok(acc)
        }
    }
}

/// Right-hand side of a table row evaluated numerically.
pub fn evaluate_row(engine: &mut ZetaEngine, row: &TableRow) -> Result<BigFloat> {
    let mut acc = BigFloat::zero(engine.precision());
    for t in &row.terms {
        acc = acc.add(&evaluate_label(engine, &t.basis)?.mul_rational(&t.coeff));
    }
    Ok(acc)
}

fn products_with(engine: &mut ZetaEngine, k: usize) -> Result<Vec<BigFloat>> {
    let idx = MatrixIndexing::new(k)?;
    let weight = 2 * k as u32 + 1;
    idx.indices()
        .map(|s| {
            let s = 2 * s as u32;
            Ok(engine.zeta_single(s)?.mul(&engine.zeta_single(weight - s)?))
        })
        .collect()
}

/// `zeta(2s) zeta(2K+1-2s)` for `s = 1..=K-1`.
pub fn eval_products(k: usize, digits: u32) -> Result<Vec<BigFloat>> {
    products_with(&mut ZetaEngine::new(digits), k)
}

/// One row of the Euler audit.
#[derive(Clone, Debug, Serialize)]
pub struct AuditReport {
    #[serde(rename = "K")]
    pub k: usize,
    pub r: usize,
    pub digits: u32,
    pub lhs: BigFloat,
    pub rhs_products: BigFloat,
    pub residual_ratio: BigFloat,
    pub reconstructed: Option<ExactRational>,
    pub max_denominator: u64,
    pub printed_constant: ExactRational,
    pub printed_constant_consistent: bool,
}

fn audit_row(
    engine: &mut ZetaEngine,
    k: usize,
    r: usize,
    products: &[BigFloat],
) -> Result<AuditReport> {
    let idx = MatrixIndexing::new(k)?;
    idx.check(r)?;
    let a = build_a(k)?;
    let weight = 2 * k as u32 + 1;
    let digits = engine.precision().digits();

    let lhs = engine.zeta_double(2 * r as u32, weight - 2 * r as u32)?;
    let mut rhs = BigFloat::zero(engine.precision());
    for (s, product) in idx.indices().zip(products) {
        rhs = rhs.add(&product.mul_rational(idx.entry(&a, r, s)));
    }
    let residual_ratio = lhs.sub(&rhs).div(&engine.zeta_single(weight)?)?;
    let printed = printed_constant();
    let printed_constant_consistent = residual_ratio.contains(&printed);
    let reconstructed = if digits >= MIN_RECONSTRUCTION_DIGITS {
        rational_reconstruct(&residual_ratio, DEFAULT_MAX_DENOMINATOR)
    } else {
        None
    };
    Ok(AuditReport {
        k,
        r,
        digits,
        lhs,
        rhs_products: rhs,
        residual_ratio,
        reconstructed,
        max_denominator: DEFAULT_MAX_DENOMINATOR,
        printed_constant: printed,
        printed_constant_consistent,
    })
}

/// Audit of row `r` of the Euler reduction at `K`.
pub fn audit_euler_constant(k: usize, r: usize, digits: u32) -> Result<AuditReport> {
    let mut engine = ZetaEngine::new(digits);
    let products = products_with(&mut engine, k)?;
    audit_row(&mut engine, k, r, &products)
}

/// All rows at one `K`, sharing the zeta evaluations.
#[derive(Clone, Debug, Serialize)]
pub struct EulerAudit {
    #[serde(rename = "K")]
    pub k: usize,
    pub digits: u32,
    pub reports: Vec<AuditReport>,
}

impl EulerAudit {
    /// Reconstructed constants in row order, if every row has one.
    pub fn constants(&self) -> Option<Vec<ExactRational>> {
        self.reports.iter().map(|r| r.reconstructed.clone()).collect()
    }
}

pub fn audit_euler(k: usize, digits: u32) -> Result<EulerAudit> {
    let idx = MatrixIndexing::new(k)?;
    let mut engine = ZetaEngine::new(digits);
    let products = products_with(&mut engine, k)?;
    let reports = idx
        .indices()
        .map(|r| audit_row(&mut engine, k, r, &products))
        .collect::<Result<Vec<_>>>()?;
    Ok(EulerAudit { k, digits, reports })
}

/// The fields of a saved Euler audit needed to reuse its constants.
#[derive(Clone, Debug, Deserialize)]
pub struct SavedAuditRow {
    #[serde(rename = "K")]
    pub k: usize,
    pub r: usize,
    pub reconstructed: Option<ExactRational>,
}

#[derive(Clone, Debug, Deserialize)]
pub struct SavedAudit {
    #[serde(rename = "K")]
    pub k: usize,
    pub digits: u32,
    pub reports: Vec<SavedAuditRow>,
}

impl SavedAudit {
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Schema(e.to_string()))
    }

    /// Constants for rows `1..=K-1`; fails if the file is for another `K`
    /// or any row lacks a reconstruction.
    pub fn constants_for(&self, k: usize) -> Result<Vec<ExactRational>> {
        if self.k != k {
            return Err(Error::InvalidArgument(format!(
                "audit file is for K={}, requested K={k}",
                self.k
            )));
        }
        (1..k)
            .map(|r| {
                self.reports
                    .iter()
                    .find(|row| row.r == r && row.k == k)
                    .and_then(|row| row.reconstructed.clone())
                    .ok_or_else(|| {
                        Error::InvalidArgument(format!("audit file has no reconstructed constant for r={r}"))
                    })
            })
            .collect()
    }
}

/// How the left side of an `H(a,b)` audit was summed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SummationMethod {
    Single,
    Double,
    Bracketed,
}

#[derive(Clone, Debug, Serialize)]
pub struct HAbAudit {
    pub a: u32,
    pub b: u32,
    pub target: Label,
    pub digits: u32,
    pub method: SummationMethod,
    pub formula_value: BigFloat,
    pub direct_value: BigFloat,
    pub difference: BigFloat,
}

impl HAbAudit {
    /// Whether `|formula - direct|` is at most `tol` for every point of
    /// both enclosures.
    pub fn agrees_within(&self, tol: &ExactRational) -> bool {
        &self.difference.abs_upper() <= tol
    }
}

/// Compares the closed formula for `H(a,b)` with a direct summation.
/// Supported: `b = 0` (any `a`) and `(a,b) = (0,1)`.
pub fn audit_h_ab(a: u32, b: u32, digits: u32) -> Result<HAbAudit> {
    if !(b == 0 || (a, b) == (0, 1)) {
        return Err(Error::Unsupported(format!(
            "H({a},{b}) ends in 2 at depth {}; direct summation is out of scope",
            a + b + 1
        )));
    }
    let mut engine = ZetaEngine::new(digits);
    let table = h_ab_coefficients(a, b);
    let row = &table.rows[0];
    let formula_value = evaluate_row(&mut engine, row)?;
    let (method, direct_value) = match (a, b) {
        (0, 0) => (SummationMethod::Single, engine.zeta_single(3)?),
        (1, 0) => (SummationMethod::Double, engine.zeta_double(2, 3)?),
        (0, 1) => (SummationMethod::Double, engine.zeta_double(3, 2)?),
        _ => {
            let Label::Zeta(ks) = &row.target else {
                unreachable!("H(a,b) targets are zeta labels")
            };
            (SummationMethod::Bracketed, engine.mzv_bracketed(ks, BRACKET_CUTOFF)?)
        }
    };
    let difference = formula_value.sub(&direct_value);
    Ok(HAbAudit {
        a,
        b,
        target: row.target.clone(),
        digits,
        method,
        formula_value,
        direct_value,
        difference,
    })
}

/// One product recomputed from the inverse table.
#[derive(Clone, Debug, Serialize)]
pub struct ClosureCell {
    pub target: Label,
    pub table_value: BigFloat,
    pub direct_value: BigFloat,
    pub difference: BigFloat,
}

/// Evaluates the inverse-reduction table built from `constants` and
/// compares each row with the product it claims to express.
pub fn inverse_closure(
    k: usize,
    constants: &[ExactRational],
    source: ConstantSource,
    digits: u32,
) -> Result<Vec<ClosureCell>> {
    let mut cache = BernoulliCache::new();
    let table = inverse_reduction_coefficients(k, constants, source, &mut cache)?;
    let mut engine = ZetaEngine::new(digits);
    table
        .rows
        .iter()
        .map(|row| {
            let table_value = evaluate_row(&mut engine, row)?;
            let direct_value = evaluate_label(&mut engine, &row.target)?;
            let difference = table_value.sub(&direct_value);
            Ok(ClosureCell {
                target: row.target.clone(),
                table_value,
                direct_value,
                difference,
            })
        })
        .collect()
}

/// Precision carried by an audit at `digits`.
pub fn audit_precision(digits: u32) -> Precision {
    Precision::new(digits)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;
    use crate::numerics::bigfloat::ten_pow;

    #[test]
    fn products_examples() {
        let p2 = eval_products(2, 30).unwrap();
        assert_eq!(p2.len(), 1);
        assert!(p2[0].contains(&rat(197730435029729611, 100000000000000000)) || {
            (p2[0].value() - rat(197730435029729611, 100000000000000000)).abs() < ten_pow(-17)
        });
        let p3 = eval_products(3, 30).unwrap();
        assert!((p3[0].value() - rat(170567778929578544, 100000000000000000)).abs() < ten_pow(-17));
        assert!((p3[1].value() - rat(130101411453248857, 100000000000000000)).abs() < ten_pow(-17));
        for k in 2..=6 {
            for p in eval_products(k, 15).unwrap() {
                assert_eq!(p.certain_sign(), Some(std::cmp::Ordering::Greater));
            }
        }
    }

    #[test]
    fn euler_audit_k2() {
        let report = audit_euler_constant(2, 1, 40).unwrap();
        assert!(!report.printed_constant_consistent);
        // independent: zeta(2,3) = 3 zeta(2) zeta(3) - 11/2 zeta(5)
        assert_eq!(report.reconstructed, Some(rat(-11, 2)));
        assert!(report.residual_ratio.contains(&rat(-11, 2)));
    }

    #[test]
    fn euler_audit_k3_rows() {
        let audit = audit_euler(3, 30).unwrap();
        assert_eq!(audit.reports.len(), 2);
        assert_eq!(audit.reports[0].reconstructed, Some(rat(-11, 1)));
        assert!(audit.reports.iter().all(|r| !r.printed_constant_consistent));
        assert!(audit.constants().is_some());
    }

    #[test]
    fn low_precision_skips_reconstruction() {
        let report = audit_euler_constant(2, 1, 5).unwrap();
        assert_eq!(report.reconstructed, None);
        assert!(audit_euler_constant(2, 2, 20).is_err());
    }

    #[test]
    fn saved_audit_round_trip() {
        let audit = audit_euler(3, 20).unwrap();
        let text = serde_json::to_string(&audit).unwrap();
        let saved = SavedAudit::parse(&text).unwrap();
        assert_eq!(saved.constants_for(3).unwrap(), audit.constants().unwrap());
        assert!(saved.constants_for(2).is_err());
        assert!(SavedAudit::parse("{}").is_err());
    }

    #[test]
    fn h_audit_small_cases() {
        for (a, b) in [(0, 0), (1, 0), (0, 1)] {
            let audit = audit_h_ab(a, b, 30).unwrap();
            assert!(audit.agrees_within(&ten_pow(-20)), "H({a},{b}): {}", audit.difference);
        }
        assert!(audit_h_ab(1, 1, 30).is_err());
        assert!(audit_h_ab(0, 2, 30).is_err());
    }

    #[test]
    fn labels_outside_evaluator() {
        let mut e = ZetaEngine::new(10);
        assert!(evaluate_label(&mut e, &Label::Zeta(vec![2, 2, 3])).is_err());
        let v = evaluate_label(&mut e, &"pi^2*zeta(3)".parse().unwrap()).unwrap();
        let w = e.pi().powi(2).mul(&e.zeta_single(3).unwrap());
        assert!(v.consistent_with(&w));
    }

    #[test]
    fn closure_with_audited_constants() {
        let audit = audit_euler(2, 30).unwrap();
        let cells = inverse_closure(2, &audit.constants().unwrap(), ConstantSource::Audited, 30).unwrap();
        assert!(cells[0].difference.abs_upper() <= ten_pow(-18));
        // the printed constant does not close
        let cells = inverse_closure(2, &[printed_constant()], ConstantSource::Printed, 30).unwrap();
        assert!(cells[0].difference.abs_upper() > ten_pow(-3));
    }
}
