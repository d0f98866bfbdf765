//! Two-predictor partial information decomposition.
//!
//! Given an intersection measure `I_∩`:
//!
//! ```text
//! {1,2}  redundant    I_∩(X_1, X_2 : Y)
//! {1}    unique       I(X_1:Y) − I_∩
//! {2}    unique       I(X_2:Y) − I_∩
//! {12}   synergistic  I(X_1∨X_2 : Y) − I(X_1:Y) − I(X_2:Y) + I_∩
//! ```
//!
//! Components are reported as computed. Negative values are the signal the
//! decomposition exists to expose, so nothing is clamped.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::measures::{intersection, MeasureConfig, MeasureKind};
use crate::prob::{mutual_information, JointTable, VarSet};

/// Values below `-NEGATIVE_FLAG` bits are flagged in reports.
pub const NEGATIVE_FLAG: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Region {
    Redundant,
    Unique1,
    Unique2,
    Synergistic,
}

impl Region {
    pub const ALL: [Region; 4] = [
        Region::Redundant,
        Region::Unique1,
        Region::Unique2,
        Region::Synergistic,
    ];

    /// Antichain label of the region.
    pub fn label(self) -> &'static str {
        match self {
            Region::Redundant => "{1,2}",
            Region::Unique1 => "{1}",
            Region::Unique2 => "{2}",
            Region::Synergistic => "{12}",
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Region::Redundant => "redundant",
            Region::Unique1 => "unique_1",
            Region::Unique2 => "unique_2",
            Region::Synergistic => "synergistic",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Decomposition2 {
    pub redundant: f64,
    pub unique_1: f64,
    pub unique_2: f64,
    pub synergistic: f64,
    pub measure: MeasureKind,
}

impl Decomposition2 {
    pub fn region(&self, r: Region) -> f64 {
        match r {
            Region::Redundant => self.redundant,
            Region::Unique1 => self.unique_1,
            Region::Unique2 => self.unique_2,
            Region::Synergistic => self.synergistic,
        }
    }

    /// Sum of the four regions, `I(X_1∨X_2 : Y)`.
    pub fn total(&self) -> f64 {
        self.redundant + self.unique_1 + self.unique_2 + self.synergistic
    }
}

/// The mutual informations a decomposition is built from.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PairInformation {
    pub first: f64,
    pub second: f64,
    pub joint: f64,
}

impl PairInformation {
    pub fn of(table: &JointTable, predictors: &[VarSet]) -> Result<Self> {
        let [a, b] = predictors else {
            return Err(Error::WrongPredictorCount(predictors.len()));
        };
        let y = table.target_set();
        Ok(PairInformation {
            first: mutual_information(table, a, &y)?,
            second: mutual_information(table, b, &y)?,
            joint: mutual_information(table, &a.union(b), &y)?,
        })
    }

    pub fn decompose(&self, redundant: f64, measure: MeasureKind) -> Decomposition2 {
        Decomposition2 {
            redundant,
            unique_1: self.first - redundant,
            unique_2: self.second - redundant,
            synergistic: self.joint - self.first - self.second + redundant,
            measure,
        }
    }
}

pub fn decompose2(
    table: &JointTable,
    predictors: &[VarSet],
    kind: MeasureKind,
    config: &MeasureConfig,
) -> Result<Decomposition2> {
    let info = PairInformation::of(table, predictors)?;
    let redundant = intersection(table, predictors, kind, config)?;
    Ok(info.decompose(redundant, kind))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PiRow {
    pub region: &'static str,
    pub name: &'static str,
    pub bits: f64,
    pub negative: bool,
}

/// Labeled value table of the four PI-regions.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PiReport {
    pub measure: MeasureKind,
    pub rows: Vec<PiRow>,
}

impl PiReport {
    /// `{"measure": .., "regions": {"{1,2}": bits, ..}, "negative": [..]}`
    pub fn to_json(&self) -> serde_json::Value {
        let regions: serde_json::Map<String, serde_json::Value> = self
            .rows
            .iter()
            .map(|r| (r.region.to_string(), serde_json::json!(r.bits)))
            .collect();
        let negative: Vec<&str> = self
            .rows
            .iter()
            .filter(|r| r.negative)
            .map(|r| r.region)
            .collect();
        serde_json::json!({
            "measure": self.measure,
            "regions": regions,
            "negative": negative,
        })
    }
}

impl fmt::Display for PiReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "PI-diagram ({})", self.measure)?;
        writeln!(f, "  {:<7} {:<12} {:>10}", "region", "component", "bits")?;
        for r in &self.rows {
            let flag = if r.negative { "  NEGATIVE" } else { "" };
            // avoid printing "-0.000000"
            let bits = if r.bits.abs() < 5e-7 { 0.0 } else { r.bits };
            writeln!(f, "  {:<7} {:<12} {:>10.6}{}", r.region, r.name, bits, flag)?;
        }
        Ok(())
    }
}

pub fn pi_diagram_report(d: &Decomposition2) -> PiReport {
    PiReport {
        measure: d.measure,
        rows: Region::ALL
            .iter()
            .map(|&r| PiRow {
                region: r.label(),
                name: r.name(),
                bits: d.region(r),
                negative: d.region(r) < -NEGATIVE_FLAG,
            })
            .collect(),
    }
}
