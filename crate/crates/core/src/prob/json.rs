//! Distribution file format.
//!
//! ```json
//! {
//!   "variables": [{"name": "X1", "states": ["0", "1"]}, ...],
//!   "target": "Y",
//!   "mass": [{"state": ["0", "1", "0"], "p": 0.25}, ...]
//! }
//! ```
//!
//! Unlisted state tuples have mass zero.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::table::{JointTable, Variable};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VariableSpec {
    pub name: String,
    pub states: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MassEntry {
    pub state: Vec<String>,
    pub p: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DistributionFile {
    pub variables: Vec<VariableSpec>,
    pub target: String,
    pub mass: Vec<MassEntry>,
}

impl DistributionFile {
    pub fn into_table(self) -> Result<JointTable> {
        let target = self
            .variables
            .iter()
            .position(|v| v.name == self.target)
            .ok_or_else(|| Error::UnknownVariable(self.target.clone()))?;
        let variables = self
            .variables
            .into_iter()
            .map(|v| Variable::new(v.name, v.states))
            .collect();
        JointTable::from_entries(
            variables,
            target,
            self.mass.into_iter().map(|e| (e.state, e.p)),
        )
    }

    /// Lists only the positive-mass tuples, in canonical order.
    pub fn from_table(table: &JointTable) -> Self {
        DistributionFile {
            variables: table
                .variables()
                .iter()
                .map(|v| VariableSpec {
                    name: v.name().to_string(),
                    states: v.states().to_vec(),
                })
                .collect(),
            target: table.target_variable().name().to_string(),
            mass: table
                .mass()
                .iter()
                .enumerate()
                .filter(|(_, &p)| p > 0.0)
                .map(|(idx, &p)| MassEntry {
                    state: table.state_labels(idx).into_iter().map(String::from).collect(),
                    p,
                })
                .collect(),
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("distribution serializes")
    }
}

pub fn read_table(path: &Path) -> Result<JointTable> {
    let text = std::fs::read_to_string(path)?;
    DistributionFile::parse(&text)?.into_table()
}

pub fn write_table(table: &JointTable, path: &Path) -> Result<()> {
    let mut text = DistributionFile::from_table(table).to_json_pretty();
    text.push('\n');
    std::fs::write(path, text)?;
    Ok(())
}
