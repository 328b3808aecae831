//! Linear coefficient tables expressing zeta quantities over formal bases.
//!
//! Three table kinds are produced:
//!
//! * `euler_reduction`: `zeta(2r, 2K+1-2r) = c_r zeta(2K+1) + sum_s A_{r,s} zeta(2s) zeta(2K+1-2s)`
//! * `inverse_reduction`: the same system solved for the products through `P = A^{-1}`
//! * `h_ab`: `H(a,b) = zeta(2,..,2,3,2,..,2)` over `H(K-r) zeta(2r+1)`
//!
//! The constant `c_r` in front of `zeta(2K+1)` is a parameter. The default is
//! the `-1/2` from the published statement of the reduction, tagged
//! `"as printed"`; the numeric audit shows the true constants differ (for
//! `K = 2` the row reads `zeta(2,3) = 3 zeta(2) zeta(3) - 11/2 zeta(5)`), and
//! audited values can be supplied instead.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::bernoulli::BernoulliCache;
use crate::error::{Error, Result};
use crate::exact::{binomial, factorial, rat, ExactRational};
use crate::zagier::{build_a, build_p, MatrixIndexing};

/// Formal basis symbol. Text grammar (one atom or a `*`-joined product):
///
/// ```text
/// label   := atom ('*' atom)*
/// atom    := 'zeta(' int (',' int)* ')' | 'H(' int ')' | 'pi^' int
/// ```
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Label {
    Zeta(Vec<u32>),
    H(u32),
    Pi(u32),
    Product(Vec<Label>),
}

impl Label {
    pub fn zeta(k: u32) -> Self {
        Label::Zeta(vec![k])
    }

    pub fn double_zeta(k1: u32, k2: u32) -> Self {
        Label::Zeta(vec![k1, k2])
    }

    pub fn zeta_product(a: u32, b: u32) -> Self {
        Label::Product(vec![Label::zeta(a), Label::zeta(b)])
    }

    /// `zeta(2,...,2,3,2,...,2)` with `a` twos before the 3 and `b` after.
    pub fn h_ab(a: u32, b: u32) -> Self {
        let mut ks = vec![2; a as usize];
        ks.push(3);
        ks.extend(std::iter::repeat_n(2, b as usize));
        Label::Zeta(ks)
    }

    fn parse_atom(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("bad label atom {s:?}"));
        let int = |t: &str| -> Result<u32> {
            if t.is_empty() || !t.bytes().all(|b| b.is_ascii_digit()) {
                return Err(bad());
            }
            t.parse().map_err(|_| bad())
        };
        if let Some(inner) = s.strip_prefix("zeta(").and_then(|r| r.strip_suffix(')')) {
            let ks = inner.split(',').map(int).collect::<Result<Vec<_>>>()?;
            Ok(Label::Zeta(ks))
        } else if let Some(inner) = s.strip_prefix("H(").and_then(|r| r.strip_suffix(')')) {
            Ok(Label::H(int(inner)?))
        } else if let Some(exp) = s.strip_prefix("pi^") {
            Ok(Label::Pi(int(exp)?))
        } else {
            Err(bad())
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::Zeta(ks) => {
                let parts: Vec<String> = ks.iter().map(u32::to_string).collect();
                write!(f, "zeta({})", parts.join(","))
            }
            Label::H(n) => write!(f, "H({n})"),
            Label::Pi(m) => write!(f, "pi^{m}"),
            Label::Product(factors) => {
                let parts: Vec<String> = factors.iter().map(Label::to_string).collect();
                f.write_str(&parts.join("*"))
            }
        }
    }
}

impl FromStr for Label {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let mut atoms = s.split('*').map(Label::parse_atom).collect::<Result<Vec<_>>>()?;
        if atoms.len() == 1 {
            Ok(atoms.pop().expect("one atom"))
        } else {
            Ok(Label::Product(atoms))
        }
    }
}

impl Serialize for Label {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Label {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TableKind {
    EulerReduction,
    InverseReduction,
    HAb,
}

/// Where the `zeta(2K+1)` constants of an Euler system came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ConstantSource {
    #[serde(rename = "as printed")]
    Printed,
    #[serde(rename = "audited")]
    Audited,
    #[serde(rename = "explicit")]
    Explicit,
}

impl ConstantSource {
    pub fn as_str(&self) -> &'static str {
        match self {
            ConstantSource::Printed => "as printed",
            ConstantSource::Audited => "audited",
            ConstantSource::Explicit => "explicit",
        }
    }
}

/// The constant printed in front of `zeta(2K+1)` in the Euler reduction.
pub fn printed_constant() -> ExactRational {
    rat(-1, 2)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Term {
    pub basis: Label,
    pub coeff: ExactRational,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TableRow {
    pub target: Label,
    pub terms: Vec<Term>,
}

impl TableRow {
    /// Coefficient on `basis`, zero when absent.
    pub fn coefficient(&self, basis: &Label) -> ExactRational {
        self.terms
            .iter()
            .filter(|t| &t.basis == basis)
            .map(|t| t.coeff.clone())
            .sum()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoefficientTable {
    pub kind: TableKind,
    pub params: BTreeMap<String, serde_json::Value>,
    pub rows: Vec<TableRow>,
}

impl CoefficientTable {
    pub fn row(&self, target: &Label) -> Option<&TableRow> {
        self.rows.iter().find(|r| &r.target == target)
    }

    /// Rewrites every basis label that is the target of a row in `defs` by
    /// that row's expansion, merging like terms and dropping zeros.
    pub fn substitute(&self, defs: &CoefficientTable) -> CoefficientTable {
        let rows = self
            .rows
            .iter()
            .map(|row| {
                let mut acc = LinearCombination::default();
                for term in &row.terms {
                    match defs.row(&term.basis) {
                        Some(def) => {
                            for inner in &def.terms {
                                acc.add(&inner.basis, &term.coeff * &inner.coeff);
                            }
                        }
                        None => acc.add(&term.basis, term.coeff.clone()),
                    }
                }
                TableRow {
                    target: row.target.clone(),
                    terms: acc.into_terms(),
                }
            })
            .collect();
        CoefficientTable {
            kind: self.kind,
            params: self.params.clone(),
            rows,
        }
    }

    /// True when every row reads `target = 1 * target`.
    pub fn is_identity(&self) -> bool {
        self.rows.iter().all(|row| {
            row.terms.len() == 1 && row.terms[0].basis == row.target && row.terms[0].coeff.is_one()
        })
    }
}

/// Insertion-ordered accumulator of `(label, coefficient)` pairs.
#[derive(Default)]
struct LinearCombination {
    terms: Vec<Term>,
}

impl LinearCombination {
    fn add(&mut self, basis: &Label, coeff: ExactRational) {
        match self.terms.iter_mut().find(|t| &t.basis == basis) {
            Some(t) => t.coeff += coeff,
            None => self.terms.push(Term {
                basis: basis.clone(),
                coeff,
            }),
        }
    }

    fn into_terms(self) -> Vec<Term> {
        self.terms.into_iter().filter(|t| !t.coeff.is_zero()).collect()
    }
}

/// `H(n) = pi^{2n} / (2n+1)!` as an exact multiple of a power of pi.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HValue {
    pub n: u32,
    pub coefficient: ExactRational,
    pub pi_power: u32,
}

pub fn h_value(n: u32) -> HValue {
    HValue {
        n,
        coefficient: ExactRational::new(1, factorial(2 * n + 1)).expect("factorial is positive"),
        pi_power: 2 * n,
    }
}

fn k_params(k: usize, source: Option<ConstantSource>) -> BTreeMap<String, serde_json::Value> {
    let mut params = BTreeMap::new();
    params.insert("K".to_string(), serde_json::Value::from(k));
    if let Some(source) = source {
        params.insert("constants".to_string(), source.as_str().into());
    }
    params
}

fn check_constants(k: usize, constants: &[ExactRational]) -> Result<()> {
    if constants.len() != k - 1 {
        return Err(Error::DimensionMismatch(format!(
            "K={k} needs {} constants, got {}",
            k - 1,
            constants.len()
        )));
    }
    Ok(())
}

/// Euler reduction rows with the printed constant `-1/2` in every row.
pub fn euler_rhs_coefficients(k: usize) -> Result<CoefficientTable> {
    MatrixIndexing::new(k)?;
    euler_rhs_with_constants(k, &vec![printed_constant(); k - 1], ConstantSource::Printed)
}

/// Euler reduction rows with caller-supplied constants `c_r`.
pub fn euler_rhs_with_constants(
    k: usize,
    constants: &[ExactRational],
    source: ConstantSource,
) -> Result<CoefficientTable> {
    let idx = MatrixIndexing::new(k)?;
    check_constants(k, constants)?;
    let a = build_a(k)?;
    let weight = 2 * k as u32 + 1;
    let rows = idx
        .indices()
        .map(|r| {
            let mut acc = LinearCombination::default();
            for s in idx.indices() {
                let s32 = s as u32;
                acc.add(
                    &Label::zeta_product(2 * s32, weight - 2 * s32),
                    idx.entry(&a, r, s).clone(),
                );
            }
            acc.add(&Label::zeta(weight), constants[r - 1].clone());
            TableRow {
                target: Label::double_zeta(2 * r as u32, weight - 2 * r as u32),
                terms: acc.into_terms(),
            }
        })
        .collect();
    Ok(CoefficientTable {
        kind: TableKind::EulerReduction,
        params: k_params(k, Some(source)),
        rows,
    })
}

/// Products `zeta(2s) zeta(2K+1-2s)` over `{zeta(2r, 2K+1-2r)} ∪ {zeta(2K+1)}`:
/// row `s` is `sum_r P_{s,r} zeta(2r, 2K+1-2r) - (sum_r P_{s,r} c_r) zeta(2K+1)`.
pub fn inverse_reduction_coefficients(
    k: usize,
    constants: &[ExactRational],
    source: ConstantSource,
    cache: &mut BernoulliCache,
) -> Result<CoefficientTable> {
    let idx = MatrixIndexing::new(k)?;
    check_constants(k, constants)?;
    let p = build_p(k, cache)?;
    let weight = 2 * k as u32 + 1;
    let rows = idx
        .indices()
        .map(|s| {
            let mut acc = LinearCombination::default();
            let mut constant = ExactRational::zero();
            for r in idx.indices() {
                let p_sr = idx.entry(&p, s, r);
                acc.add(
                    &Label::double_zeta(2 * r as u32, weight - 2 * r as u32),
                    p_sr.clone(),
                );
                constant -= &(p_sr * &constants[r - 1]);
            }
            acc.add(&Label::zeta(weight), constant);
            TableRow {
                target: Label::zeta_product(2 * s as u32, weight - 2 * s as u32),
                terms: acc.into_terms(),
            }
        })
        .collect();
    Ok(CoefficientTable {
        kind: TableKind::InverseReduction,
        params: k_params(k, Some(source)),
        rows,
    })
}

/// Coefficient of `H(K-r) zeta(2r+1)` in `H(a,b)`, `K = a+b+1`:
/// `2 (-1)^r [C(2r, 2a+2) - (1 - 2^{-2r}) C(2r, 2b+1)]`.
pub fn h_ab_coefficient(a: u32, b: u32, r: u32) -> ExactRational {
    let (a, b, r) = (i64::from(a), i64::from(b), i64::from(r));
    let damping = ExactRational::one() - ExactRational::power_of_two(-2 * r);
    let bracket = binomial(2 * r, 2 * a + 2) - damping * binomial(2 * r, 2 * b + 1);
    let sign = if r % 2 == 0 { 2 } else { -2 };
    ExactRational::from(sign) * bracket
}

/// `H(a,b)` over the basis `H(K-r)*zeta(2r+1)`, `r = 1..=K`.
pub fn h_ab_coefficients(a: u32, b: u32) -> CoefficientTable {
    let k = a + b + 1;
    let terms = (1..=k)
        .map(|r| Term {
            basis: Label::Product(vec![Label::H(k - r), Label::zeta(2 * r + 1)]),
            coeff: h_ab_coefficient(a, b, r),
        })
        .filter(|t| !t.coeff.is_zero())
        .collect();
    let mut params = BTreeMap::new();
    params.insert("K".to_string(), serde_json::Value::from(k));
    params.insert("a".to_string(), serde_json::Value::from(a));
    params.insert("b".to_string(), serde_json::Value::from(b));
    params.insert("basis".to_string(), "H".into());
    CoefficientTable {
        kind: TableKind::HAb,
        params,
        rows: vec![TableRow {
            target: Label::h_ab(a, b),
            terms,
        }],
    }
}

/// Replaces every `H(n)` factor by `pi^{2n}` and multiplies the coefficient
/// by `1/(2n+1)!`; `pi^0` factors are dropped.
pub fn expand_h_to_pi(table: &CoefficientTable) -> CoefficientTable {
    let expand = |label: &Label, coeff: &ExactRational| -> (Label, ExactRational) {
        let factors = match label {
            Label::Product(f) => f.clone(),
            other => vec![other.clone()],
        };
        let mut coeff = coeff.clone();
        let mut out = Vec::new();
        for f in factors {
            match f {
                Label::H(n) => {
                    let h = h_value(n);
                    coeff *= &h.coefficient;
                    if h.pi_power > 0 {
                        out.push(Label::Pi(h.pi_power));
                    }
                }
                other => out.push(other),
            }
        }
        let label = if out.len() == 1 {
            out.pop().expect("one factor")
        } else {
            Label::Product(out)
        };
        (label, coeff)
    };
    let rows = table
        .rows
        .iter()
        .map(|row| {
            let mut acc = LinearCombination::default();
            for t in &row.terms {
                let (basis, coeff) = expand(&t.basis, &t.coeff);
                acc.add(&basis, coeff);
            }
            TableRow {
                target: row.target.clone(),
                terms: acc.into_terms(),
            }
        })
        .collect();
    let mut params = table.params.clone();
    params.insert("basis".to_string(), "pi".into());
    CoefficientTable {
        kind: table.kind,
        params,
        rows,
    }
}
