//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use dzeta_core::bernoulli::{bernoulli_number, BernoulliCache};
use dzeta_core::export::{self, validate_matrix_json, validate_table_json, MatrixExport};
use dzeta_core::numerics::bigfloat::ten_pow;
use dzeta_core::numerics::{audit_euler, audit_euler_constant, audit_h_ab, inverse_closure};
use dzeta_core::reductions::{
    euler_rhs_coefficients, h_ab_coefficients, inverse_reduction_coefficients, ConstantSource,
};
use dzeta_core::series::{bernoulli_gf, exp_minus_one_over_t, verify_carlitz, verify_reflection};
use dzeta_core::zagier::{build_named, closed_form_cells, verify_inverse, MatrixName};
use dzeta_core::{ExactRational, TruncatedSeries};

type Criterion = (&'static str, fn() -> Verdict);

struct Verdict {
    passed: bool,
    detail: String,
}

fn verdict(passed: bool, detail: impl Into<String>) -> Verdict {
    Verdict {
        passed,
        detail: detail.into(),
    }
}

fn conjecture_sweep() -> Verdict {
    let mut cache = BernoulliCache::new();
    let mut failed = Vec::new();
    for k in 2..=40 {
        match verify_inverse(k, &mut cache) {
            Ok(r) if r.all_passed() => {}
            Ok(r) => failed.push(format!("K={k} {r:?}")),
            Err(e) => failed.push(format!("K={k}: {e}")),
        }
    }
    verdict(
        failed.is_empty(),
        format!("P=Q, PA=AP=I, det A!=0 for K=2..40; failures: {failed:?}"),
    )
}

fn closed_forms() -> Verdict {
    let mut cache = BernoulliCache::new();
    let mut cells = 0;
    let mut failed = Vec::new();
    for k in 2..=20 {
        match closed_form_cells(k, &mut cache) {
            Ok(cs) => {
                cells += cs.len();
                failed.extend(cs.iter().filter(|c| !c.passed()).map(|c| format!("K={k} ({},{})", c.s, c.s_prime)));
            }
            Err(e) => failed.push(format!("K={k}: {e}")),
        }
    }
    verdict(
        failed.is_empty(),
        format!("{cells} cells for K=2..20, PB+PC=delta and both equal the products; failures: {failed:?}"),
    )
}

fn reflection() -> Verdict {
    let mut cache = BernoulliCache::new();
    let mut failed = Vec::new();
    for s in 1..=6 {
        for m in 1..=12 {
            match verify_reflection(s, m, 48, &mut cache) {
                Ok(c) if c.passed() => {}
                Ok(c) => failed.push(format!("s={s} m={m} {:?}", c.mismatch)),
                Err(e) => failed.push(format!("s={s} m={m}: {e}")),
            }
        }
    }
    verdict(failed.is_empty(), format!("72 cases at order 48; failures: {failed:?}"))
}

fn carlitz() -> Verdict {
    let mut cache = BernoulliCache::new();
    let mut count = 0;
    let mut failed = Vec::new();
    for n in 0..=60 {
        for m in 0..=n {
            count += 1;
            if !verify_carlitz(m, n, &mut cache).passed() {
                failed.push((m, n));
            }
        }
    }
    verdict(failed.is_empty(), format!("{count} pairs 0<=m<=n<=60; failures: {failed:?}"))
}

fn bernoulli_fidelity() -> Verdict {
    let mut cache = BernoulliCache::new();
    let b0 = bernoulli_number(0, &mut cache) == ExactRational::one();
    let b1 = bernoulli_number(1, &mut cache) == ExactRational::new(-1, 2).unwrap();
    let odd = (1..=40).all(|k| bernoulli_number(2 * k + 1, &mut cache).is_zero());
    let product = bernoulli_gf(64, &mut cache).multiply(&exp_minus_one_over_t(64));
    let one = TruncatedSeries::monomial(ExactRational::one(), 0, 64);
    let gf = product == one;
    verdict(
        b0 && b1 && odd && gf,
        format!("B_0=1 {b0}, B_1=-1/2 {b1}, B_2k+1=0 for k<=40 {odd}, GF product = 1 at order 64 {gf}"),
    )
}

fn h_audit() -> Verdict {
    let tol = ten_pow(-20);
    let mut lines = Vec::new();
    let mut ok = true;
    for (a, b) in [(0, 0), (1, 0), (0, 1)] {
        let start = Instant::now();
        match audit_h_ab(a, b, 30) {
            Ok(audit) => {
                let elapsed = start.elapsed();
                let pass = audit.agrees_within(&tol) && elapsed < Duration::from_secs(120);
                ok &= pass;
                lines.push(format!("H({a},{b}) diff {} in {:.2?}", audit.difference, elapsed));
            }
            Err(e) => {
                ok = false;
                lines.push(format!("H({a},{b}): {e}"));
            }
        }
    }
    verdict(ok, format!("|formula - summation| <= 1e-20 at 30 digits: {}", lines.join("; ")))
}

fn euler_audit() -> Verdict {
    let mut ok = true;
    let mut lines = Vec::new();
    for k in 2..=3 {
        for r in 1..k {
            let coarse = audit_euler_constant(k, r, 40);
            let fine = audit_euler_constant(k, r, 80);
            match (coarse, fine) {
                (Ok(c), Ok(f)) => {
                    let stable = c.residual_ratio.consistent_with(&f.residual_ratio)
                        && c.residual_ratio.contains(&f.residual_ratio.value());
                    let rec = c.reconstructed.is_some() && c.reconstructed == f.reconstructed;
                    ok &= stable && rec;
                    lines.push(format!(
                        "K={k} r={r} ratio {} reconstructed {} stable {stable} printed -1/2 consistent {}",
                        c.residual_ratio,
                        c.reconstructed.map_or("none".to_string(), |x| x.to_string()),
                        c.printed_constant_consistent
                    ));
                }
                (c, f) => {
                    ok = false;
                    lines.push(format!("K={k} r={r}: {:?} {:?}", c.err(), f.err()));
                }
            }
        }
    }
    verdict(ok, lines.join("; "))
}

fn inverse_closure_check() -> Verdict {
    let tol = ten_pow(-18);
    let mut ok = true;
    let mut lines = Vec::new();
    for k in 2..=3 {
        let constants = match audit_euler(k, 30).map(|a| a.constants()) {
            Ok(Some(c)) => c,
            other => {
                ok = false;
                lines.push(format!("K={k}: no audited constants ({other:?})"));
                continue;
            }
        };
        match inverse_closure(k, &constants, ConstantSource::Audited, 30) {
            Ok(cells) => {
                for c in cells {
                    let pass = c.difference.abs_upper() <= tol;
                    ok &= pass;
                    lines.push(format!("K={k} {} diff {}", c.target, c.difference));
                }
            }
            Err(e) => {
                ok = false;
                lines.push(format!("K={k}: {e}"));
            }
        }
    }
    verdict(ok, format!("within 1e-18 at 30 digits: {}", lines.join("; ")))
}

fn exports() -> Result<usize, String> {
    let mut checked = 0;
    for k in 2..=10 {
        for name in [MatrixName::A, MatrixName::B, MatrixName::C, MatrixName::P, MatrixName::Q] {
            let render = || -> Result<String, String> {
                let m = build_named(name, k, &mut BernoulliCache::new()).map_err(|e| e.to_string())?;
                export::to_json(&MatrixExport::new(k, name, &m)).map_err(|e| e.to_string())
            };
            let (first, second) = (render()?, render()?);
            if first != second {
                return Err(format!("matrix {name} K={k} differs between runs"));
            }
            validate_matrix_json(&first).map_err(|e| format!("matrix {name} K={k}: {e}"))?;
            checked += 1;
        }
        let tables = || -> Result<Vec<String>, String> {
            let c: Vec<ExactRational> = (1..k as i64).map(|r| ExactRational::new(1 - 2 * r, 2).unwrap()).collect();
            let mut cache = BernoulliCache::new();
            let ts = [
                euler_rhs_coefficients(k).map_err(|e| e.to_string())?,
                inverse_reduction_coefficients(k, &c, ConstantSource::Explicit, &mut cache).map_err(|e| e.to_string())?,
                h_ab_coefficients(k as u32 - 2, 1),
            ];
            ts.iter().map(|t| export::to_json(t).map_err(|e| e.to_string())).collect()
        };
        let (first, second) = (tables()?, tables()?);
        if first != second {
            return Err(format!("tables for K={k} differ between runs"));
        }
        for t in &first {
            validate_table_json(t).map_err(|e| format!("table K={k}: {e}"))?;
            checked += 1;
        }
    }
    let audit = || export::to_json(&audit_euler(3, 20).map_err(|e| e.to_string())?).map_err(|e| e.to_string());
    if audit()? != audit()? {
        return Err("audit report differs between runs".into());
    }
    Ok(checked + 1)
}

fn determinism() -> Verdict {
    match exports() {
        Ok(n) => verdict(true, format!("{n} exports byte-identical across runs and schema-valid")),
        Err(e) => verdict(false, e),
    }
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("conjecture sweep", conjecture_sweep),
        ("closed-form cross-check", closed_forms),
        ("series identity", reflection),
        ("Carlitz sweep", carlitz),
        ("Bernoulli fidelity", bernoulli_fidelity),
        ("H(a,b) numeric audit", h_audit),
        ("Euler constant audit", euler_audit),
        ("inverse-reduction numeric closure", inverse_closure_check),
        ("determinism and schema", determinism),
    ];
    let mut all = true;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let v = check();
        all &= v.passed;
        println!(
            "{} {}. {name} ({:.1?}): {}",
            if v.passed { "PASS" } else { "FAIL" },
            i + 1,
            start.elapsed(),
            v.detail
        );
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
