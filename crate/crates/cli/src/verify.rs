use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use dzeta_core::export;
use dzeta_core::series::{verify_carlitz, verify_reflection};
use dzeta_core::zagier::{build_a, build_p, closed_form_cells, verify_inverse};
use dzeta_core::{BernoulliCache, ExactRational};

use crate::{Failure, KRange, Outcome, ReportFormat, VerifyKind};

/// One parameter tuple of a sweep.
#[derive(Clone, Debug, Serialize)]
pub struct CaseResult {
    pub params: BTreeMap<&'static str, u64>,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mismatch: Option<String>,
}

#[derive(Debug, Serialize)]
struct SweepReport<'a> {
    kind: &'a str,
    passed: usize,
    failed: usize,
    cases: Vec<CaseResult>,
}

fn params(pairs: &[(&'static str, usize)]) -> BTreeMap<&'static str, u64> {
    pairs.iter().map(|&(k, v)| (k, v as u64)).collect()
}

fn k_list(range: &KRange) -> Result<Vec<usize>, Failure> {
    if range.k_min > range.k_max {
        return Err(Failure::Usage(format!(
            "--k-min {} exceeds --k-max {}",
            range.k_min, range.k_max
        )));
    }
    Ok((range.k_min as usize..=range.k_max as usize).collect())
}

fn conjecture_case(k: usize, cache: &mut BernoulliCache) -> Result<CaseResult, Failure> {
    let report = verify_inverse(k, cache)?;
    let mut failures = Vec::new();
    if !report.p_eq_q {
        failures.push("P != Q".to_string());
    }
    if !report.pa_is_identity {
        failures.push("PA != I".to_string());
    }
    if !report.ap_is_identity {
        failures.push("AP != I".to_string());
    }
    if !report.det_nonzero {
        failures.push("det A = 0".to_string());
    }
    Ok(CaseResult {
        params: params(&[("K", k)]),
        passed: failures.is_empty(),
        mismatch: (!failures.is_empty()).then(|| failures.join("; ")),
    })
}

fn perturbed_case(k: usize, cache: &mut BernoulliCache) -> Result<CaseResult, Failure> {
    let mut a = build_a(k)?;
    let bumped = a.get(0, 0) + &ExactRational::one();
    a.set(0, 0, bumped);
    let passed = build_p(k, cache)?.multiply(&a)?.is_identity();
    Ok(CaseResult {
        params: params(&[("K", k)]),
        passed,
        mismatch: (!passed).then(|| "PA != I with A_{1,1} increased by one".to_string()),
    })
}

fn closed_form_case(k: usize, cache: &mut BernoulliCache) -> Result<CaseResult, Failure> {
    let cells = closed_form_cells(k, cache)?;
    let bad: Vec<String> = cells
        .iter()
        .filter(|c| !c.passed())
        .map(|c| {
            format!(
                "(s={}, s'={}): PB closed {} product {}, PC closed {} product {}",
                c.s, c.s_prime, c.pb_closed, c.pb_product, c.pc_closed, c.pc_product
            )
        })
        .collect();
    Ok(CaseResult {
        params: params(&[("K", k)]),
        passed: bad.is_empty(),
        mismatch: (!bad.is_empty()).then(|| bad.join("; ")),
    })
}

fn sweep<T, F>(pool: &rayon::ThreadPool, cases: Vec<T>, check: F) -> Result<Vec<CaseResult>, Failure>
where
    T: Send + Sync + Copy,
    F: Fn(T, &mut BernoulliCache) -> Result<CaseResult, Failure> + Send + Sync,
{
    pool.install(|| {
        cases
            .par_iter()
            .map_init(BernoulliCache::new, |cache, &case| check(case, cache))
            .collect()
    })
}

pub fn run(kind: &VerifyKind, format: ReportFormat, pool: &rayon::ThreadPool) -> Result<Outcome, Failure> {
    let (name, cases) = match kind {
        VerifyKind::Conjecture {
            range,
            negative_control: false,
        } => ("conjecture", sweep(pool, k_list(range)?, conjecture_case)?),
        VerifyKind::Conjecture {
            range,
            negative_control: true,
        } => ("conjecture", sweep(pool, k_list(range)?, perturbed_case)?),
        VerifyKind::ClosedForms(range) => ("closed-forms", sweep(pool, k_list(range)?, closed_form_case)?),
        VerifyKind::Carlitz { max } => {
            let max = *max as usize;
            let pairs: Vec<(usize, usize)> = (0..=max).flat_map(|n| (0..=n).map(move |m| (m, n))).collect();
            let results = sweep(pool, pairs, |(m, n), cache| {
                let c = verify_carlitz(m, n, cache);
                Ok(CaseResult {
                    params: params(&[("m", m), ("n", n)]),
                    passed: c.passed(),
                    mismatch: (!c.passed()).then(|| format!("left {} right {}", c.left, c.right)),
                })
            })?;
            ("carlitz", results)
        }
        VerifyKind::Series { s_max, m_max, order } => {
            let (s_max, m_max, order) = (*s_max as usize, *m_max as usize, *order as usize);
            let pairs: Vec<(usize, usize)> = (1..=s_max).flat_map(|s| (1..=m_max).map(move |m| (s, m))).collect();
            let results = sweep(pool, pairs, |(s, m), cache| {
                let check = verify_reflection(s, m, order, cache)?;
                Ok(CaseResult {
                    params: params(&[("s", s), ("m", m), ("order", order)]),
                    passed: check.passed(),
                    mismatch: check.mismatch.map(|mm| mm.to_string()),
                })
            })?;
            ("series", results)
        }
    };
    let failed = cases.iter().filter(|c| !c.passed).count();
    let text = match format {
        ReportFormat::Json => export::to_json(&SweepReport {
            kind: name,
            passed: cases.len() - failed,
            failed,
            cases,
        })?,
        ReportFormat::Text => {
            let mut out = String::new();
            for c in &cases {
                let tuple: Vec<String> = c.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
                match &c.mismatch {
                    None => out.push_str(&format!("{name} {}: pass\n", tuple.join(" "))),
                    Some(m) => out.push_str(&format!("{name} {}: FAIL {m}\n", tuple.join(" "))),
                }
            }
            out.push_str(&format!("{name}: {}/{} passed\n", cases.len() - failed, cases.len()));
            out
        }
    };
    Ok(Outcome {
        text,
        failed: failed > 0,
    })
}
