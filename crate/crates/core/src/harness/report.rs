//! CSV and JSON emitters. Column order is fixed by [`CSV_COLUMNS`]; numbers
//! are written with 17 significant digits.

use std::collections::BTreeSet;

use serde::ser::{Serialize, SerializeMap, Serializer};
use serde_json::value::RawValue;

use crate::estimators::{PairEstimate, Pipeline};

pub const SCHEMA_VERSION: u32 = 1;

pub const CSV_COLUMNS: [&str; 11] = [
    "theta_deg",
    "n",
    "standard_scalar",
    "standard_bivector_norm",
    "standard_stderr",
    "raw_sign",
    "raw_sign_stderr",
    "raw_lambda",
    "raw_lambda_stderr",
    "sign_ties",
    "mean_lambda",
];

/// 17 significant digits, scientific notation.
pub fn format_number(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        String::new()
    }
}

/// One output line of a correlation report. Pipelines that were not requested
/// are `None` and print as empty CSV fields or JSON `null`.
#[derive(Debug, Clone, PartialEq)]
pub struct ReportRow {
    pub theta_deg: f64,
    pub n: u64,
    pub standard_scalar: Option<f64>,
    pub standard_bivector_norm: Option<f64>,
    pub standard_stderr: Option<f64>,
    pub raw_sign: Option<f64>,
    pub raw_sign_stderr: Option<f64>,
    pub raw_lambda: Option<f64>,
    pub raw_lambda_stderr: Option<f64>,
    pub sign_ties: Option<u64>,
    pub mean_lambda: f64,
}

impl ReportRow {
    pub fn from_estimate(theta_deg: f64, est: &PairEstimate, mean_lambda: f64, pipelines: &BTreeSet<Pipeline>) -> Self {
        let has = |p| pipelines.contains(&p);
        let standard = has(Pipeline::Standard).then_some(est.standard);
        let raw_sign = has(Pipeline::RawSign).then_some(est.raw_sign);
        let raw_lambda = has(Pipeline::RawLambda).then_some(est.raw_lambda);
        Self {
            theta_deg,
            n: est.n,
            standard_scalar: standard.map(|s| s.scalar),
            standard_bivector_norm: standard.map(|s| s.bivector.norm()),
            standard_stderr: standard.map(|s| s.stderr),
            raw_sign: raw_sign.map(|s| s.value),
            raw_sign_stderr: raw_sign.map(|s| s.stderr),
            raw_lambda: raw_lambda.map(|s| s.value),
            raw_lambda_stderr: raw_lambda.map(|s| s.stderr),
            sign_ties: raw_sign.map(|_| est.sign_ties),
            mean_lambda,
        }
    }

    fn fields(&self) -> [Field; 11] {
        [
            Field::Num(Some(self.theta_deg)),
            Field::Int(Some(self.n)),
            Field::Num(self.standard_scalar),
            Field::Num(self.standard_bivector_norm),
            Field::Num(self.standard_stderr),
            Field::Num(self.raw_sign),
            Field::Num(self.raw_sign_stderr),
            Field::Num(self.raw_lambda),
            Field::Num(self.raw_lambda_stderr),
            Field::Int(self.sign_ties),
            Field::Num(Some(self.mean_lambda)),
        ]
    }
}

#[derive(Debug, Clone, Copy)]
enum Field {
    Num(Option<f64>),
    Int(Option<u64>),
}

impl Field {
    fn csv(self) -> String {
        match self {
            Self::Num(v) => v.map(format_number).unwrap_or_default(),
            Self::Int(v) => v.map(|i| i.to_string()).unwrap_or_default(),
        }
    }

    fn json(self) -> Option<Box<RawValue>> {
        let text = match self {
            Self::Num(Some(v)) if v.is_finite() => format_number(v),
            Self::Int(Some(i)) => i.to_string(),
            _ => return None,
        };
        Some(RawValue::from_string(text).expect("formatted numbers are valid JSON"))
    }
}

impl Serialize for ReportRow {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(CSV_COLUMNS.len()))?;
        for (name, field) in CSV_COLUMNS.iter().zip(self.fields()) {
            map.serialize_entry(name, &field.json())?;
        }
        map.end()
    }
}

pub fn rows_to_csv(rows: &[ReportRow]) -> String {
    let mut out = CSV_COLUMNS.join(",");
    out.push('\n');
    for row in rows {
        let line: Vec<String> = row.fields().iter().map(|f| f.csv()).collect();
        out.push_str(&line.join(","));
        out.push('\n');
    }
    out
}

pub fn rows_to_json(rows: &[ReportRow]) -> String {
    #[derive(serde::Serialize)]
    struct Doc<'a> {
        schema_version: u32,
        columns: &'a [&'a str],
        rows: &'a [ReportRow],
    }
    let mut s = serde_json::to_string_pretty(&Doc {
        schema_version: SCHEMA_VERSION,
        columns: &CSV_COLUMNS,
        rows,
    })
    .expect("report rows serialize");
    s.push('\n');
    s
}

/// Ordered `(name, value)` pairs, printed as a two-column CSV or a flat JSON object.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct KeyValueReport {
    pub entries: Vec<(String, Option<f64>)>,
}

impl KeyValueReport {
    pub fn push(&mut self, name: impl Into<String>, value: impl Into<Option<f64>>) {
        self.entries.push((name.into(), value.into()));
    }

    pub fn get(&self, name: &str) -> Option<f64> {
        self.entries.iter().find(|(k, _)| k == name).and_then(|(_, v)| *v)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("quantity,value\n");
        for (k, v) in &self.entries {
            out.push_str(&format!("{k},{}\n", v.map(format_number).unwrap_or_default()));
        }
        out
    }

    pub fn to_json(&self) -> String {
        struct Entries<'a>(&'a [(String, Option<f64>)]);
        impl Serialize for Entries<'_> {
            fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
                let mut map = serializer.serialize_map(Some(self.0.len()))?;
                for (k, v) in self.0 {
                    map.serialize_entry(k, &Field::Num(*v).json())?;
                }
                map.end()
            }
        }
        let mut s = serde_json::to_string_pretty(&Entries(&self.entries)).expect("report serializes");
        s.push('\n');
        s
    }
}
