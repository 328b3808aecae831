//! JSON and CSV export surfaces, and validators for the published schemas.
//!
//! All JSON is produced from structs with fixed field order and maps with
//! sorted keys, so identical inputs give byte-identical output.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::exact::ExactRational;
use crate::matrix::RationalMatrix;
use crate::reductions::{CoefficientTable, Label};
use crate::zagier::MatrixName;

/// `{"K", "name", "rows", "cols", "entries"}` with entries in `p/q` text form.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixExport {
    #[serde(rename = "K")]
    pub k: usize,
    pub name: MatrixName,
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<Vec<ExactRational>>,
}

impl MatrixExport {
    pub fn new(k: usize, name: MatrixName, m: &RationalMatrix) -> Self {
        MatrixExport {
            k,
            name,
            rows: m.rows(),
            cols: m.cols(),
            entries: m.to_rows(),
        }
    }

    pub fn to_matrix(&self) -> Result<RationalMatrix> {
        RationalMatrix::from_rows(self.entries.clone())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BernoulliEntry {
    pub n: usize,
    pub value: ExactRational,
}

pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    serde_json::to_string_pretty(value).map_err(|e| Error::Serialization(e.to_string()))
}

fn csv_string(records: impl IntoIterator<Item = Vec<String>>) -> Result<String> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    for rec in records {
        w.write_record(&rec).map_err(|e| Error::Serialization(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Serialization(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::Serialization(e.to_string()))
}

/// `n,B_n` header followed by one line per index.
pub fn bernoulli_csv(values: &[ExactRational]) -> Result<String> {
    let header = vec!["n".to_string(), "B_n".to_string()];
    csv_string(
        std::iter::once(header).chain(
            values
                .iter()
                .enumerate()
                .map(|(n, v)| vec![n.to_string(), v.to_string()]),
        ),
    )
}

pub fn bernoulli_json(values: &[ExactRational]) -> Result<String> {
    let entries: Vec<BernoulliEntry> = values
        .iter()
        .enumerate()
        .map(|(n, v)| BernoulliEntry { n, value: v.clone() })
        .collect();
    to_json(&entries)
}

/// One matrix entry per line, mathematical (1-based) indices.
pub fn matrix_csv(export: &MatrixExport) -> Result<String> {
    let header = ["K", "name", "row", "col", "value"].map(String::from).to_vec();
    let mut records = vec![header];
    for (i, row) in export.entries.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            records.push(vec![
                export.k.to_string(),
                export.name.to_string(),
                (i + 1).to_string(),
                (j + 1).to_string(),
                v.to_string(),
            ]);
        }
    }
    csv_string(records)
}

/// One term per line: `kind,target,basis,coeff`.
pub fn table_csv(table: &CoefficientTable) -> Result<String> {
    let kind = match serde_json::to_value(table.kind) {
        Ok(Value::String(s)) => s,
        _ => return Err(Error::Serialization("table kind".into())),
    };
    let header = ["kind", "target", "basis", "coeff"].map(String::from).to_vec();
    let mut records = vec![header];
    for row in &table.rows {
        for t in &row.terms {
            records.push(vec![
                kind.clone(),
                row.target.to_string(),
                t.basis.to_string(),
                t.coeff.to_string(),
            ]);
        }
    }
    csv_string(records)
}

fn schema(msg: impl Into<String>) -> Error {
    Error::Schema(msg.into())
}

fn get<'a>(obj: &'a serde_json::Map<String, Value>, key: &str) -> Result<&'a Value> {
    obj.get(key).ok_or_else(|| schema(format!("missing key {key:?}")))
}

fn as_object<'a>(v: &'a Value, what: &str) -> Result<&'a serde_json::Map<String, Value>> {
    v.as_object().ok_or_else(|| schema(format!("{what} must be an object")))
}

fn as_array<'a>(v: &'a Value, what: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| schema(format!("{what} must be an array")))
}

fn as_count(v: &Value, what: &str) -> Result<usize> {
    v.as_u64()
        .map(|n| n as usize)
        .ok_or_else(|| schema(format!("{what} must be a nonnegative integer")))
}

fn exact_keys(obj: &serde_json::Map<String, Value>, keys: &[&str], what: &str) -> Result<()> {
    let mut found: Vec<&str> = obj.keys().map(String::as_str).collect();
    let mut want = keys.to_vec();
    found.sort_unstable();
    want.sort_unstable();
    if found != want {
        return Err(schema(format!("{what} keys {found:?}, expected {want:?}")));
    }
    Ok(())
}

/// A `p/q` string already in canonical form.
pub fn check_canonical_rational(v: &Value) -> Result<ExactRational> {
    let s = v
        .as_str()
        .ok_or_else(|| schema("rational must be a string"))?;
    let r: ExactRational = s.parse()?;
    if r.to_string() != s {
        return Err(schema(format!("rational {s:?} is not in lowest terms")));
    }
    Ok(r)
}

fn check_label(v: &Value) -> Result<Label> {
    let s = v.as_str().ok_or_else(|| schema("label must be a string"))?;
    let l: Label = s.parse()?;
    if l.to_string() != s {
        return Err(schema(format!("label {s:?} is not canonical")));
    }
    Ok(l)
}

/// Checks a matrix export against its schema and returns it parsed.
pub fn validate_matrix_json(text: &str) -> Result<MatrixExport> {
    let v: Value = serde_json::from_str(text).map_err(|e| schema(e.to_string()))?;
    let obj = as_object(&v, "matrix")?;
    exact_keys(obj, &["K", "name", "rows", "cols", "entries"], "matrix")?;
    let k = as_count(get(obj, "K")?, "K")?;
    if k < 2 {
        return Err(schema("K must be at least 2"));
    }
    let name = get(obj, "name")?
        .as_str()
        .ok_or_else(|| schema("name must be a string"))?;
    name.parse::<MatrixName>()?;
    let rows = as_count(get(obj, "rows")?, "rows")?;
    let cols = as_count(get(obj, "cols")?, "cols")?;
    if rows != k - 1 || cols != k - 1 {
        return Err(schema(format!("K={k} needs a {0}x{0} matrix", k - 1)));
    }
    let entries = as_array(get(obj, "entries")?, "entries")?;
    if entries.len() != rows {
        return Err(schema("entries row count differs from rows"));
    }
    for row in entries {
        let row = as_array(row, "entries row")?;
        if row.len() != cols {
            return Err(schema("entries row length differs from cols"));
        }
        for cell in row {
            check_canonical_rational(cell)?;
        }
    }
    serde_json::from_value(v).map_err(|e| schema(e.to_string()))
}

/// Checks a coefficient table against its schema and returns it parsed.
pub fn validate_table_json(text: &str) -> Result<CoefficientTable> {
    let v: Value = serde_json::from_str(text).map_err(|e| schema(e.to_string()))?;
    let obj = as_object(&v, "table")?;
    exact_keys(obj, &["kind", "params", "rows"], "table")?;
    match get(obj, "kind")?.as_str() {
        Some("euler_reduction" | "inverse_reduction" | "h_ab") => {}
        _ => return Err(schema("unknown table kind")),
    }
    as_object(get(obj, "params")?, "params")?;
    for row in as_array(get(obj, "rows")?, "rows")? {
        let row = as_object(row, "row")?;
        exact_keys(row, &["target", "terms"], "row")?;
        check_label(get(row, "target")?)?;
        for term in as_array(get(row, "terms")?, "terms")? {
            let term = as_object(term, "term")?;
            exact_keys(term, &["basis", "coeff"], "term")?;
            check_label(get(term, "basis")?)?;
            check_canonical_rational(get(term, "coeff")?)?;
        }
    }
    serde_json::from_value(v).map_err(|e| schema(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bernoulli::{bernoulli_range, BernoulliCache};
    use crate::exact::rat;
    use crate::reductions::{euler_rhs_coefficients, h_ab_coefficients};
    use crate::zagier::build_named;

    #[test]
    fn bernoulli_csv_lines() {
        let csv = bernoulli_csv(&bernoulli_range(4)).unwrap();
        assert_eq!(csv, "n,B_n\n0,1\n1,-1/2\n2,1/6\n3,0\n4,-1/30\n");
    }

    #[test]
    fn matrix_json_schema() {
        let mut cache = BernoulliCache::new();
        let p = build_named(MatrixName::P, 3, &mut cache).unwrap();
        let json = to_json(&MatrixExport::new(3, MatrixName::P, &p)).unwrap();
        let back = validate_matrix_json(&json).unwrap();
        assert_eq!(back.to_matrix().unwrap(), p);
        assert_eq!(back.entries[0][0], rat(-1, 15));
        assert!(json.contains("\"-1/15\""));

        let bad = json.replace("\"-1/15\"", "\"-2/30\"");
        assert!(validate_matrix_json(&bad).is_err());
        let bad = json.replace("\"K\": 3", "\"K\": 4");
        assert!(validate_matrix_json(&bad).is_err());
        let bad = json.replace("\"name\": \"P\"", "\"name\": \"Z\"");
        assert!(validate_matrix_json(&bad).is_err());
    }

    #[test]
    fn table_json_schema() {
        let t = euler_rhs_coefficients(3).unwrap();
        let json = to_json(&t).unwrap();
        assert_eq!(validate_table_json(&json).unwrap(), t);
        let bad = json.replace("zeta(2,5)", "zeta(2, 5)");
        assert!(validate_table_json(&bad).is_err());
        let bad = json.replace("\"kind\"", "\"sort\"");
        assert!(validate_table_json(&bad).is_err());
    }

    #[test]
    fn table_csv_quotes_labels() {
        let csv = table_csv(&h_ab_coefficients(1, 0)).unwrap();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "kind,target,basis,coeff");
        assert_eq!(lines[1], "h_ab,\"zeta(2,3)\",H(1)*zeta(3),3");
        assert_eq!(lines[2], "h_ab,\"zeta(2,3)\",H(0)*zeta(5),-11/2");
    }
}
