//! Machine-readable result records emitted by the command-line tool.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::coloring::{evaluate, Coloring, ColoringJson};
use crate::error::{Error, Result};

pub const SCHEMA_VERSION: &str = "1";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    /// Closed-form regime that produced the value, if any.
    pub regime: Option<String>,
    /// Search nodes expanded by the oracle, if it ran.
    pub oracle_nodes: Option<u64>,
    /// Only recorded on request, so that default output is reproducible byte for byte.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub wall_time_ms: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub schema_version: String,
    pub command: String,
    pub problem: Value,
    pub result: Value,
    pub witness: Option<ColoringJson>,
    /// Value of the witness, which re-evaluation must reproduce.
    pub witness_value: Option<usize>,
    pub provenance: Provenance,
}

impl Certificate {
    pub fn new(command: &str, problem: Value, result: Value) -> Self {
        Self {
            schema_version: SCHEMA_VERSION.to_string(),
            command: command.to_string(),
            problem,
            result,
            witness: None,
            witness_value: None,
            provenance: Provenance {
                regime: None,
                oracle_nodes: None,
                wall_time_ms: None,
            },
        }
    }

    pub fn with_witness(mut self, witness: &Coloring) -> Self {
        self.witness_value = Some(evaluate(witness).value);
        self.witness = Some(witness.to_json());
        self
    }

    /// Rebuilds the witness and checks that it evaluates to the recorded value.
    pub fn validate(&self) -> Result<()> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(Error::InvalidArgument(format!(
                "unsupported schema version {:?}",
                self.schema_version
            )));
        }
        match (&self.witness, self.witness_value) {
            (None, None) => Ok(()),
            (Some(json), Some(claimed)) => {
                let coloring = Coloring::from_json(json)?;
                let value = evaluate(&coloring).value;
                if value == claimed {
                    Ok(())
                } else {
                    Err(Error::MalformedColoring(format!(
                        "witness evaluates to {value}, certificate claims {claimed}"
                    )))
                }
            }
            _ => Err(Error::MalformedColoring(
                "witness and witness value must appear together".into(),
            )),
        }
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string(self).expect("certificate serializes")
    }

    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text)
            .map_err(|e| Error::InvalidArgument(format!("malformed certificate: {e}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coloring::block_partition;
    use serde_json::json;

    #[test]
    fn round_trip_revalidates() {
        let c = block_partition(7, 2).unwrap();
        let cert = Certificate::new("phi", json!({"n": 7, "k": 2}), json!({"exact": 5}))
            .with_witness(&c);
        let text = cert.to_json_string();
        let back = Certificate::parse(&text).unwrap();
        assert_eq!(back, cert);
        back.validate().unwrap();
        assert_eq!(back.to_json_string(), text);
    }

    #[test]
    fn tampered_value_is_rejected() {
        let c = block_partition(7, 2).unwrap();
        let mut cert = Certificate::new("phi", json!({}), json!({})).with_witness(&c);
        cert.witness_value = Some(4);
        assert!(cert.validate().is_err());
        cert.witness_value = None;
        assert!(cert.validate().is_err());
    }
}
