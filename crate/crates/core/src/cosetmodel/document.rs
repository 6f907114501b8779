//! JSON ingestion format for models.
//!
//! ```json
//! {
//!   "schema_version": 1,
//!   "x_k": ["a"], "x_kp": ["b"], "x_j": ["1", "2"],
//!   "pi": {"1": "a", "2": "a"}, "pip": {"1": "b", "2": "b"},
//!   "w_k": {"a": "1"}, "w_kp": {"b": "1"}, "w_j": {"1": "1", "2": "1"},
//!   "operators": {
//!     "T": {"level": "K", "matrix": [["2"]], "adjoint": "T", "central_at_j": false}
//!   }
//! }
//! ```

use std::collections::BTreeMap;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::{DoubleCosetModel, Level, Metadata, ModelError, ModelParts, NamedCharacter, Operator};
use crate::exactalg::Mat;
use crate::serde_int::IntString;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OperatorDoc {
    pub level: String,
    pub matrix: Vec<Vec<IntString>>,
    pub adjoint: String,
    #[serde(default)]
    pub central_at_j: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CharacterDoc {
    pub values: BTreeMap<String, IntString>,
    pub witness: Vec<IntString>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelDocument {
    pub schema_version: u32,
    pub x_k: Vec<String>,
    pub x_kp: Vec<String>,
    pub x_j: Vec<String>,
    pub pi: BTreeMap<String, String>,
    pub pip: BTreeMap<String, String>,
    pub w_k: BTreeMap<String, IntString>,
    pub w_kp: BTreeMap<String, IntString>,
    pub w_j: BTreeMap<String, IntString>,
    #[serde(default)]
    pub operators: BTreeMap<String, OperatorDoc>,
    #[serde(default)]
    pub metadata: Metadata,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub characters: BTreeMap<String, CharacterDoc>,
}

fn index_map(
    map: &'static str,
    domain: &[String],
    target: &[String],
    m: &BTreeMap<String, String>,
) -> Result<Vec<usize>, ModelError> {
    let pos: BTreeMap<&str, usize> = target.iter().enumerate().map(|(i, l)| (l.as_str(), i)).collect();
    for k in m.keys() {
        if !domain.contains(k) {
            return Err(ModelError::UnknownLabel { context: format!("{map} domain"), label: k.clone() });
        }
    }
    domain
        .iter()
        .map(|y| {
            let x = m.get(y).ok_or_else(|| ModelError::MissingImage { map, label: y.clone() })?;
            pos.get(x.as_str())
                .copied()
                .ok_or_else(|| ModelError::UnknownLabel { context: format!("{map} image"), label: x.clone() })
        })
        .collect()
}

fn weight_list(level: Level, labels: &[String], w: &BTreeMap<String, IntString>) -> Result<Vec<BigInt>, ModelError> {
    for k in w.keys() {
        if !labels.contains(k) {
            return Err(ModelError::UnknownLabel { context: format!("w_{level}"), label: k.clone() });
        }
    }
    labels
        .iter()
        .map(|l| w.get(l).map(|v| v.0.clone()).ok_or_else(|| ModelError::MissingWeight { level, label: l.clone() }))
        .collect()
}

impl ModelDocument {
    pub fn parse(text: &str) -> Result<Self, ModelError> {
        serde_json::from_str(text).map_err(|e| ModelError::Json(e.to_string()))
    }

    pub fn to_model(&self) -> Result<DoubleCosetModel, ModelError> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(ModelError::UnsupportedSchema(self.schema_version));
        }
        let mut operators = BTreeMap::new();
        for (name, o) in &self.operators {
            let level = Level::parse(&o.level).ok_or_else(|| ModelError::UnknownLevel(o.level.clone()))?;
            let cols = o.matrix.first().map_or(0, |r| r.len());
            if o.matrix.iter().any(|r| r.len() != cols) {
                return Err(ModelError::OperatorShape {
                    name: name.clone(),
                    expected: cols,
                    rows: o.matrix.len(),
                    cols: o.matrix.iter().map(|r| r.len()).max().unwrap_or(0),
                });
            }
            let rows: Vec<Vec<BigInt>> = o.matrix.iter().map(|r| r.iter().map(|x| x.0.clone()).collect()).collect();
            let matrix = if rows.is_empty() { Mat::from_vec(0, 0, Vec::new()) } else { Mat::from_rows(rows) };
            operators.insert(
                name.clone(),
                Operator { level, matrix, adjoint: o.adjoint.clone(), central_at_j: o.central_at_j },
            );
        }
        let characters = self
            .characters
            .iter()
            .map(|(n, c)| {
                let values = c.values.iter().map(|(k, v)| (k.clone(), v.0.clone())).collect();
                let witness = c.witness.iter().map(|x| x.0.clone()).collect();
                (n.clone(), NamedCharacter { values, witness })
            })
            .collect();
        DoubleCosetModel::new(ModelParts {
            pi: index_map("pi", &self.x_j, &self.x_k, &self.pi)?,
            pip: index_map("pip", &self.x_j, &self.x_kp, &self.pip)?,
            w_k: weight_list(Level::K, &self.x_k, &self.w_k)?,
            w_kp: weight_list(Level::Kp, &self.x_kp, &self.w_kp)?,
            w_j: weight_list(Level::J, &self.x_j, &self.w_j)?,
            x_k: self.x_k.clone(),
            x_kp: self.x_kp.clone(),
            x_j: self.x_j.clone(),
            operators,
            metadata: self.metadata.clone(),
            characters,
        })
    }

    pub fn from_model(m: &DoubleCosetModel) -> Self {
        let labelled = |level: Level| -> BTreeMap<String, IntString> {
            m.labels(level).iter().cloned().zip(m.weights(level).iter().cloned().map(IntString)).collect()
        };
        let map = |side: super::Side| -> BTreeMap<String, String> {
            let target = m.labels(side.level());
            m.labels(Level::J)
                .iter()
                .zip(m.projection(side))
                .map(|(y, &x)| (y.clone(), target[x].clone()))
                .collect()
        };
        let operators = m
            .operators()
            .iter()
            .map(|(n, o)| {
                let matrix = o.matrix.to_rows().into_iter().map(|r| r.into_iter().map(IntString).collect()).collect();
                let doc = OperatorDoc {
                    level: o.level.as_str().to_string(),
                    matrix,
                    adjoint: o.adjoint.clone(),
                    central_at_j: o.central_at_j,
                };
                (n.clone(), doc)
            })
            .collect();
        let characters = m
            .characters()
            .iter()
            .map(|(n, c)| {
                let doc = CharacterDoc {
                    values: c.values.iter().map(|(k, v)| (k.clone(), IntString(v.clone()))).collect(),
                    witness: c.witness.iter().cloned().map(IntString).collect(),
                };
                (n.clone(), doc)
            })
            .collect();
        ModelDocument {
            schema_version: SCHEMA_VERSION,
            x_k: m.labels(Level::K).to_vec(),
            x_kp: m.labels(Level::Kp).to_vec(),
            x_j: m.labels(Level::J).to_vec(),
            pi: map(super::Side::K),
            pip: map(super::Side::Kp),
            w_k: labelled(Level::K),
            w_kp: labelled(Level::Kp),
            w_j: labelled(Level::J),
            operators,
            metadata: m.metadata().clone(),
            characters,
        }
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("documents always serialize")
    }
}

pub fn parse_model(text: &str) -> Result<DoubleCosetModel, ModelError> {
    ModelDocument::parse(text)?.to_model()
}

/// SHA-256 of the compact canonical document, in hex.
pub fn model_hash(m: &DoubleCosetModel) -> String {
    let canonical = serde_json::to_string(&ModelDocument::from_model(m)).expect("documents always serialize");
    hex::encode(Sha256::digest(canonical.as_bytes()))
}

#[cfg(test)]
mod tests {
    use super::*;

    const TINY: &str = r#"{
        "schema_version": 1,
        "x_k": ["a"], "x_kp": ["b"], "x_j": ["1", "2"],
        "pi": {"1": "a", "2": "a"}, "pip": {"1": "b", "2": "b"},
        "w_k": {"a": 1}, "w_kp": {"b": "1"}, "w_j": {"1": "1", "2": "1"},
        "operators": {"T": {"level": "K", "matrix": [[2]], "adjoint": "T"}}
    }"#;

    #[test]
    fn round_trip() {
        let m = parse_model(TINY).unwrap();
        let doc = ModelDocument::from_model(&m);
        let again = parse_model(&doc.to_json_pretty()).unwrap();
        assert_eq!(m, again);
        assert_eq!(model_hash(&m), model_hash(&again));
    }

    #[test]
    fn rejects_bad_weight_and_unknown_field() {
        let bad = TINY.replace(r#""w_k": {"a": 1}"#, r#""w_k": {"a": 0}"#);
        assert!(matches!(parse_model(&bad), Err(ModelError::NonPositiveWeight { .. })));
        let extra = TINY.replace("\"schema_version\": 1,", "\"schema_version\": 1, \"bogus\": 3,");
        assert!(matches!(parse_model(&extra), Err(ModelError::Json(_))));
        let missing = TINY.replace(r#""pi": {"1": "a", "2": "a"}"#, r#""pi": {"1": "a"}"#);
        assert!(matches!(parse_model(&missing), Err(ModelError::MissingImage { .. })));
    }
}
