//! JSON coupling specs:
//!
//! ```json
//! {"dimension": 1, "extents": [64], "coefficients": [{"lag": [0], "value": 2.5}, {"lag": [1], "value": -1}]}
//! ```
//!
//! Only one of each `±lag` pair needs to be listed; the mirror is filled in on load.

use std::fs;
use std::path::Path;

use harm_ent_core::lattice::build_coupling_with;
use harm_ent_core::{CouplingSpec, Term, Tolerances};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{CliError, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpecDocument {
    pub dimension: usize,
    pub extents: Vec<usize>,
    pub coefficients: Vec<Coefficient>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Coefficient {
    pub lag: Vec<i64>,
    pub value: f64,
}

impl SpecDocument {
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| CliError::Spec(format!("invalid spec document: {e}")))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::parse(&text)
    }

    pub fn build(&self, tol: &Tolerances) -> Result<CouplingSpec> {
        if self.dimension != self.extents.len() {
            return Err(CliError::Spec(format!(
                "dimension {} does not match {} extents",
                self.dimension,
                self.extents.len()
            )));
        }
        let terms = self.coefficients.iter().map(|c| Term::new(c.lag.clone(), c.value)).collect();
        Ok(build_coupling_with(self.extents.clone(), terms, tol)?)
    }

    /// Canonical document of a validated spec: every lag listed, sorted.
    pub fn from_spec(spec: &CouplingSpec) -> Self {
        SpecDocument {
            dimension: spec.dimension(),
            extents: spec.extents().to_vec(),
            coefficients: spec.terms().iter().map(|t| Coefficient { lag: t.lag.clone(), value: t.value }).collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("spec documents always serialize")
    }

    /// Short content hash; two documents describing the same couplings
    /// (after canonicalization) share it.
    pub fn hash(&self) -> String {
        short_hash(serde_json::to_string(self).expect("spec documents always serialize").as_bytes())
    }
}

/// First 16 hex digits of the SHA-256 of `bytes`.
pub fn short_hash(bytes: &[u8]) -> String {
    hex::encode(&Sha256::digest(bytes)[..8])
}
