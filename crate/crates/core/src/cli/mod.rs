//! Claim drivers, file ingestion, reports and the `circuitkit` command line.

mod claims;
mod commands;
mod evidence;
mod ingest;

pub use claims::{named_graph, random_forest, sweep_01, KindTally, Sweep01};
pub use commands::run;
pub use evidence::{verify_evidence_json, verify_report, Certificate, CertificateOutcome, VerifyReport};
pub use ingest::{edge_list_arg, ingest_graph, json_arg, parse_graph};

use std::collections::BTreeMap;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::error::{Error, Result};

macro_rules! claim_ids {
    ($($variant:ident => $tag:literal),* $(,)?) => {
        /// Replicable claims, one driver each.
        #[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
        pub enum ClaimId {
            $($variant),*
        }

        impl ClaimId {
            pub const ALL: &'static [ClaimId] = &[$(ClaimId::$variant),*];

            pub fn as_str(self) -> &'static str {
                match self {
                    $(ClaimId::$variant => $tag),*
                }
            }
        }
    };
}

claim_ids! {
    Thm21 => "thm21",
    Thm22 => "thm22",
    Thm23 => "thm23",
    Thm24 => "thm24",
    Eq1 => "eq1",
    Colcir => "colcir",
    PropKem => "prop-kem",
    ColoringWalks => "coloring-walks",
    LongProperWalk => "long-proper-walk",
    TwoStep => "two-step",
    ColoringImbalance => "coloring-imbalance",
    UnitVector => "unitvector",
    SingleDrop => "singledrop",
    Alts => "alts",
    Rooted => "rooted",
    Pseudo => "pseudo",
    Discon => "discon",
    DiameterDecomp => "diameter-decomp",
    NotACircuit => "notacircuit",
    Ub9 => "ub9",
    Ub7 => "ub7",
    Lb3 => "lb3",
    Zigzag => "zigzag",
}

impl ClaimId {
    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.iter().copied().find(|c| c.as_str() == s)
    }
}

impl FromStr for ClaimId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::parse(s).ok_or_else(|| Error::UnknownClaim(s.to_string()))
    }
}

impl Serialize for ClaimId {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.as_str())
    }
}

impl<'de> Deserialize<'de> for ClaimId {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        Self::parse(&s).ok_or_else(|| serde::de::Error::custom(format!("unknown claim {s:?}")))
    }
}

/// Search limits shared by every driver. `subset_cap` falls back to each module's own default.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub struct Caps {
    pub max_vars: usize,
    pub max_vertices: usize,
    pub depth_cap: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub subset_cap: Option<usize>,
    pub seed: u64,
}

impl Default for Caps {
    fn default() -> Self {
        Caps { max_vars: 12, max_vertices: crate::forest::VERTEX_CAP, depth_cap: 12, subset_cap: None, seed: 0 }
    }
}

impl Caps {
    /// Applies `key=value` overrides such as `max-vars=14,seed=7`.
    pub fn apply_overrides(&mut self, spec: &str) -> Result<()> {
        for item in spec.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (k, v) = item
                .split_once('=')
                .ok_or_else(|| Error::BadParameter(format!("cap override {item:?} needs key=value")))?;
            self.set(k.trim(), v.trim())?;
        }
        Ok(())
    }

    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let bad = || Error::BadParameter(format!("cap {key} expects an unsigned integer, got {value:?}"));
        let n = || value.parse::<usize>().map_err(|_| bad());
        match key.replace('_', "-").as_str() {
            "max-vars" => self.max_vars = n()?,
            "max-vertices" => self.max_vertices = n()?,
            "depth-cap" => self.depth_cap = n()?,
            "subset-cap" => self.subset_cap = Some(n()?),
            "seed" => self.seed = value.parse().map_err(|_| bad())?,
            _ => return Err(Error::BadParameter(format!("unknown cap {key:?}"))),
        }
        Ok(())
    }
}

/// Claim parameters as given on the command line, `key=value`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Params {
    map: BTreeMap<String, String>,
}

impl Params {
    pub fn new() -> Self {
        Params::default()
    }

    pub fn from_map(map: BTreeMap<String, String>) -> Self {
        Params { map }
    }

    pub fn with(mut self, key: &str, value: impl ToString) -> Self {
        self.map.insert(key.to_string(), value.to_string());
        self
    }

    pub fn parse_pairs<S: AsRef<str>>(pairs: &[S]) -> Result<Self> {
        let mut map = BTreeMap::new();
        for p in pairs {
            let (k, v) = p
                .as_ref()
                .split_once('=')
                .ok_or_else(|| Error::BadParameter(format!("parameter {:?} needs key=value", p.as_ref())))?;
            map.insert(k.trim().to_string(), v.trim().to_string());
        }
        Ok(Params { map })
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.map.get(key).map(String::as_str)
    }

    pub fn keys(&self) -> impl Iterator<Item = &str> {
        self.map.keys().map(String::as_str)
    }

    /// One parameter set per point of the product of comma-separated values.
    pub fn expand(&self) -> Vec<Params> {
        let mut out = vec![Params::new()];
        for (k, v) in &self.map {
            let values: Vec<&str> = v.split(',').map(str::trim).collect();
            out = out.iter().flat_map(|p| values.iter().map(move |x| p.clone().with(k, x))).collect();
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub claim: ClaimId,
    /// Every driver parameter with the value actually used.
    pub parameters: BTreeMap<String, String>,
    pub verdict: Verdict,
    /// `summary` of scalar facts, driver-specific detail, then `certificates`.
    pub evidence: Value,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wall_time: Option<f64>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        serde_json::from_value(v.clone()).map_err(|e| Error::Parse { line: e.line(), msg: format!("report: {e}") })
    }

    pub fn certificates(&self) -> Result<Vec<Certificate>> {
        let certs = self.evidence.get("certificates").cloned().unwrap_or(Value::Array(Vec::new()));
        serde_json::from_value(certs).map_err(|e| Error::Parse { line: e.line(), msg: e.to_string() })
    }
}

/// Runs the driver behind `id`.
pub fn run_claim(id: ClaimId, params: &Params, caps: &Caps) -> Result<Report> {
    claims::run(id, params, caps)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

/// Canonical JSON or flattened CSV, newline terminated.
pub fn emit(value: &Value, format: Format) -> Vec<u8> {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(value).expect("json values serialize");
            s.push('\n');
            s.into_bytes()
        }
        Format::Csv => csv_bytes(value),
    }
}

fn scalar_text(v: &Value) -> Option<String> {
    match v {
        Value::Null => Some(String::new()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Number(n) => Some(n.to_string()),
        Value::String(s) => Some(s.clone()),
        _ => None,
    }
}

fn flatten_into(prefix: &str, v: &Value, out: &mut Map<String, Value>) {
    let Value::Object(m) = v else {
        return;
    };
    for (k, x) in m {
        let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
        if scalar_text(x).is_some() {
            out.insert(key, x.clone());
        }
    }
}

/// Scalar columns of one row. Reports keep their parameters and summary; other
/// documents keep their top-level scalars.
fn csv_row(v: &Value) -> Map<String, Value> {
    let mut row = Map::new();
    if v.get("claim").is_some() && v.get("verdict").is_some() {
        row.insert("claim".into(), v["claim"].clone());
        flatten_into("", v.get("parameters").unwrap_or(&Value::Null), &mut row);
        row.insert("verdict".into(), v["verdict"].clone());
        flatten_into("", v.get("evidence").and_then(|e| e.get("summary")).unwrap_or(&Value::Null), &mut row);
        if let Some(t) = v.get("wall_time") {
            row.insert("wall_time".into(), t.clone());
        }
    } else {
        flatten_into("", v, &mut row);
    }
    row
}

fn csv_bytes(value: &Value) -> Vec<u8> {
    let rows: Vec<Map<String, Value>> = match value {
        Value::Array(items) => items.iter().map(csv_row).collect(),
        other => vec![csv_row(other)],
    };
    let mut header: Vec<String> = Vec::new();
    for r in &rows {
        for k in r.keys() {
            if !header.contains(k) {
                header.push(k.clone());
            }
        }
    }
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(&header).expect("in-memory csv");
    for r in &rows {
        let cells: Vec<String> = header.iter().map(|k| r.get(k).and_then(scalar_text).unwrap_or_default()).collect();
        w.write_record(&cells).expect("in-memory csv");
    }
    w.into_inner().expect("in-memory csv")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn claim_ids_round_trip() {
        assert_eq!(ClaimId::ALL.len(), 23);
        for &c in ClaimId::ALL {
            assert_eq!(ClaimId::parse(c.as_str()), Some(c));
        }
        assert!(matches!("thm99".parse::<ClaimId>(), Err(Error::UnknownClaim(_))));
    }

    #[test]
    fn caps_overrides() {
        let mut c = Caps::default();
        c.apply_overrides("max-vars=20, seed=9,subset_cap=3").unwrap();
        assert_eq!((c.max_vars, c.seed, c.subset_cap), (20, 9, Some(3)));
        assert!(c.apply_overrides("depth-cap").is_err());
        assert!(c.apply_overrides("bogus=1").is_err());
        assert!(c.apply_overrides("max-vars=-1").is_err());
    }

    #[test]
    fn params_expand_to_product() {
        let p = Params::parse_pairs(&["k=1,2", "family=paths3"]).unwrap();
        let pts = p.expand();
        assert_eq!(pts.len(), 2);
        assert_eq!(pts[1].get("k"), Some("2"));
        assert_eq!(pts[1].get("family"), Some("paths3"));
        assert!(Params::parse_pairs(&["k"]).is_err());
    }

    #[test]
    fn csv_has_one_row_per_point() {
        let rows = serde_json::json!([
            {"claim": "thm24", "parameters": {"k": "1"}, "verdict": "pass", "evidence": {"summary": {"kappa": "2"}, "certificates": []}},
            {"claim": "thm24", "parameters": {"k": "2"}, "verdict": "pass", "evidence": {"summary": {"kappa": "4"}, "certificates": []}},
        ]);
        let text = String::from_utf8(emit(&rows, Format::Csv)).unwrap();
        assert_eq!(text, "claim,k,verdict,kappa\nthm24,1,pass,2\nthm24,2,pass,4\n");
    }

    #[test]
    fn json_is_pretty_and_stable() {
        let v = serde_json::json!({"b": 1, "a": [1, 2]});
        assert_eq!(emit(&v, Format::Json), emit(&v.clone(), Format::Json));
        assert!(String::from_utf8(emit(&v, Format::Json)).unwrap().starts_with("{\n  \"b\""));
    }
}
