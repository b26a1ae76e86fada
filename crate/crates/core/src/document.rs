//! Serialized tower documents and analysis reports.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use serde_path_to_error::Segment;
use sha2::{Digest, Sha256};

use crate::error::FormatError;
use crate::expr::{parse_relation, Expr};
use crate::tower::{
    BottomPrime, ExpectedInvariants, LevelSpec, Step, StepKind, TowerSpec, TowerTrace,
};

pub const REPORT_SCHEMA: &str = "frobdesc.report/1";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TowerDoc {
    p: u64,
    q: u64,
    bottom: BottomDoc,
    levels: Vec<LevelDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    genus_hint: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    expected: Option<ExpectedInvariants>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct BottomDoc {
    var: String,
    prime: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct LevelDoc {
    n: usize,
    gen: String,
    square: String,
    step: StepDoc,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct StepDoc {
    kind: StepKind,
    witness: String,
}

fn pointer(path: &serde_path_to_error::Path) -> String {
    let mut out = String::new();
    for seg in path.iter() {
        match seg {
            Segment::Seq { index } => write!(out, "/{index}").unwrap(),
            Segment::Map { key } => {
                write!(out, "/{}", key.replace('~', "~0").replace('/', "~1")).unwrap()
            }
            Segment::Enum { variant } => write!(out, "/{variant}").unwrap(),
            Segment::Unknown => out.push_str("/?"),
        }
    }
    if out.is_empty() {
        out.push('/');
    }
    out
}

fn parse_at(text: &str, pointer: String) -> Result<Expr, FormatError> {
    parse_relation(text).map_err(|source| FormatError::Relation { pointer, source })
}

/// Parse and validate a tower document.
pub fn load_tower(text: &str) -> Result<TowerSpec, FormatError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let doc: TowerDoc = serde_path_to_error::deserialize(de).map_err(|e| FormatError::Schema {
        pointer: pointer(e.path()),
        message: e.inner().to_string(),
    })?;
    let prime = match doc.bottom.prime.trim() {
        "infinity" | "inf" => BottomPrime::Infinity,
        other => BottomPrime::Zero(parse_at(other, "/bottom/prime".into())?),
    };
    let mut levels = Vec::with_capacity(doc.levels.len());
    for (i, l) in doc.levels.into_iter().enumerate() {
        levels.push(LevelSpec {
            n: l.n,
            gen: l.gen,
            square: parse_at(&l.square, format!("/levels/{i}/square"))?,
            step: Step {
                kind: l.step.kind,
                witness: parse_at(&l.step.witness, format!("/levels/{i}/step/witness"))?,
            },
        });
    }
    Ok(TowerSpec::new(
        doc.p,
        doc.q,
        doc.bottom.var,
        prime,
        levels,
        doc.genus_hint,
        doc.expected,
    )?)
}

fn to_doc(spec: &TowerSpec) -> TowerDoc {
    TowerDoc {
        p: spec.p,
        q: spec.q,
        bottom: BottomDoc {
            var: spec.var.clone(),
            prime: match &spec.prime {
                BottomPrime::Infinity => "infinity".into(),
                BottomPrime::Zero(e) => e.to_string(),
            },
        },
        levels: spec
            .levels
            .iter()
            .map(|l| LevelDoc {
                n: l.n,
                gen: l.gen.clone(),
                square: l.square.to_string(),
                step: StepDoc {
                    kind: l.step.kind,
                    witness: l.step.witness.to_string(),
                },
            })
            .collect(),
        genus_hint: spec.genus_hint,
        expected: spec.expected.clone(),
    }
}

/// Sorted-key value form of any serializable document.
fn canonical_value<T: Serialize>(doc: &T) -> serde_json::Value {
    // serde_json's default map is ordered, so a round trip through Value sorts keys
    serde_json::to_value(doc).expect("documents serialize")
}

/// Deterministic pretty serialization with sorted keys.
pub fn save_tower(spec: &TowerSpec) -> String {
    let mut s = serde_json::to_string_pretty(&canonical_value(&to_doc(spec))).unwrap();
    s.push('\n');
    s
}

/// SHA-256 of the compact canonical serialization.
pub fn spec_digest(spec: &TowerSpec) -> String {
    let compact = serde_json::to_string(&canonical_value(&to_doc(spec))).unwrap();
    hex::encode(Sha256::digest(compact.as_bytes()))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Provenance {
    pub spec_digest: String,
    pub p: u64,
    pub q: u64,
    pub bottom_var: String,
    pub bottom_prime: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReportDocument {
    pub schema: String,
    pub provenance: Provenance,
    pub trace: TowerTrace,
    /// Regression mismatches against the document's expected block.
    #[serde(default)]
    pub expected_mismatches: Vec<String>,
}

impl ReportDocument {
    pub fn new(spec: &TowerSpec, trace: TowerTrace) -> Self {
        let expected_mismatches = spec
            .expected
            .as_ref()
            .map(|e| trace.mismatches(e))
            .unwrap_or_default();
        let doc = to_doc(spec);
        ReportDocument {
            schema: REPORT_SCHEMA.into(),
            provenance: Provenance {
                spec_digest: spec_digest(spec),
                p: spec.p,
                q: spec.q,
                bottom_var: doc.bottom.var,
                bottom_prime: doc.bottom.prime,
            },
            trace,
            expected_mismatches,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&canonical_value(self)).unwrap();
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self, FormatError> {
        let de = &mut serde_json::Deserializer::from_str(text);
        let doc: ReportDocument =
            serde_path_to_error::deserialize(de).map_err(|e| FormatError::Schema {
                pointer: pointer(e.path()),
                message: e.inner().to_string(),
            })?;
        if doc.schema != REPORT_SCHEMA {
            return Err(FormatError::Schema {
                pointer: "/schema".into(),
                message: format!("unsupported schema `{}`", doc.schema),
            });
        }
        Ok(doc)
    }

    /// Per-level table.
    pub fn to_text(&self) -> String {
        let t = &self.trace;
        let mut out = String::new();
        let opt = |v: Option<u64>| v.map_or("-".to_string(), |v| v.to_string());
        writeln!(
            out,
            "tower over F_{}(t), p = {}, bottom {} at {}",
            t.q, t.p, self.provenance.bottom_var, self.provenance.bottom_prime
        )
        .unwrap();
        writeln!(out, "spec sha256 {}", self.provenance.spec_digest).unwrap();
        writeln!(
            out,
            "{:>3} {:>6} {:>2} {:>2} {:>2} {:>6} {:>6} {:>8}  {:<19} evidence",
            "n", "deg", "e", "f", "m", "delta", "Delta", "rational", "method"
        )
        .unwrap();
        for l in &t.levels {
            let method = match (&l.method, &l.interval) {
                (Some(m), _) => serde_json::to_value(m)
                    .unwrap()
                    .as_str()
                    .unwrap()
                    .to_string(),
                (None, Some((lo, Some(hi)))) => format!("open [{lo}, {hi}]"),
                (None, Some((lo, None))) => format!("open [{lo}, ?]"),
                (None, None) => "-".into(),
            };
            writeln!(
                out,
                "{:>3} {:>6} {:>2} {:>2} {:>2} {:>6} {:>6} {:>8}  {:<19} {}",
                l.n,
                l.degree,
                l.e.map_or("-".into(), |v| v.to_string()),
                l.f.map_or("-".into(), |v| v.to_string()),
                l.residue_level,
                opt(l.delta),
                opt(l.big_delta),
                l.rational,
                method,
                l.evidence.as_deref().unwrap_or("-"),
            )
            .unwrap();
        }
        match &t.certificates {
            None => writeln!(
                out,
                "unresolved: the constraint fallback left an open interval"
            )
            .unwrap(),
            Some(c) => {
                writeln!(out, "non_decomposed       {}", c.non_decomposed).unwrap();
                writeln!(out, "gcd(Delta)           {}", c.delta_gcd).unwrap();
                writeln!(out, "first_rational_level {}", c.first_rational_level).unwrap();
                if let Some(b) = &c.bound {
                    writeln!(out, "bound_level          {}", b.bound_level).unwrap();
                }
                if let Some(a) = c.attains_bound {
                    writeln!(out, "attains_bound        {a}").unwrap();
                }
            }
        }
        for m in &self.expected_mismatches {
            writeln!(out, "MISMATCH {m}").unwrap();
        }
        out
    }
}
