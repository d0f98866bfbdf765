//! `I_min` and a single entry point for every intersection measure.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::common_rv;
use crate::error::{Error, Result};
use crate::ialpha::{self, SolverConfig};
use crate::prob::{mutual_information, specific_informations, JointTable, VarSet};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MeasureKind {
    Imin,
    Iwedge,
    Ialpha,
}

impl MeasureKind {
    pub const ALL: [MeasureKind; 3] = [MeasureKind::Imin, MeasureKind::Iwedge, MeasureKind::Ialpha];

    pub fn as_str(self) -> &'static str {
        match self {
            MeasureKind::Imin => "imin",
            MeasureKind::Iwedge => "iwedge",
            MeasureKind::Ialpha => "ialpha",
        }
    }

    /// Whether the value comes out of the numerical solver.
    pub fn is_numerical(self) -> bool {
        self == MeasureKind::Ialpha
    }
}

impl fmt::Display for MeasureKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(self.as_str())
    }
}

impl FromStr for MeasureKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "imin" => Ok(MeasureKind::Imin),
            "iwedge" => Ok(MeasureKind::Iwedge),
            "ialpha" => Ok(MeasureKind::Ialpha),
            other => Err(Error::InvalidConfig(format!("unknown measure {other:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MeasureConfig {
    pub solver: SolverConfig,
    /// Support threshold for the common random variable.
    pub support_threshold: f64,
}

impl Default for MeasureConfig {
    fn default() -> Self {
        MeasureConfig {
            solver: SolverConfig::default(),
            support_threshold: common_rv::DEFAULT_SUPPORT_THRESHOLD,
        }
    }
}

impl MeasureConfig {
    pub fn with_solver(solver: SolverConfig) -> Self {
        MeasureConfig {
            solver,
            ..MeasureConfig::default()
        }
    }
}

/// Dense `Pr(x, y)` for a predictor set.
fn predictor_target_mass(table: &JointTable, predictor: &VarSet) -> Vec<f64> {
    let ny = table.target_variable().cardinality();
    let target = table.target_set();
    let mut pxy = vec![0.0; table.joint_cardinality(predictor) * ny];
    for (idx, &p) in table.mass().iter().enumerate() {
        if p != 0.0 {
            pxy[table.project(idx, predictor) * ny + table.project(idx, &target)] += p;
        }
    }
    pxy
}

/// `I_min = Σ_y p(y) min_i I(X_i : Y=y)`.
pub fn imin(table: &JointTable, predictors: &[VarSet]) -> Result<f64> {
    if predictors.is_empty() {
        return Err(Error::NoPredictors);
    }
    let ny = table.target_variable().cardinality();
    let mut per_y = vec![f64::INFINITY; ny];
    let mut py = vec![0.0; ny];
    for pred in predictors {
        if pred.is_empty() {
            return Err(Error::EmptyVarSet);
        }
        table.check_varset(pred)?;
        if pred.contains(table.target()) {
            return Err(Error::OverlappingVarSets);
        }
        let nx = table.joint_cardinality(pred);
        let pxy = predictor_target_mass(table, pred);
        for y in 0..ny {
            py[y] = (0..nx).map(|x| pxy[x * ny + y]).sum();
        }
        for (y, s) in specific_informations(&pxy, nx, ny).into_iter().enumerate() {
            if let Some(s) = s {
                per_y[y] = per_y[y].min(s);
            }
        }
    }
    Ok((0..ny)
        .filter(|&y| py[y] > 0.0)
        .map(|y| py[y] * per_y[y])
        .sum())
}

/// Intersection information of `predictors` about the table's target.
///
/// With a single predictor every measure returns `I(X_1:Y)`.
pub fn intersection(
    table: &JointTable,
    predictors: &[VarSet],
    kind: MeasureKind,
    config: &MeasureConfig,
) -> Result<f64> {
    match predictors {
        [] => Err(Error::NoPredictors),
        [single] => {
            if single.contains(table.target()) {
                return Err(Error::OverlappingVarSets);
            }
            mutual_information(table, single, &table.target_set())
        }
        _ => match kind {
            MeasureKind::Imin => imin(table, predictors),
            MeasureKind::Iwedge => {
                common_rv::iwedge_with_threshold(table, predictors, config.support_threshold)
            }
            MeasureKind::Ialpha => {
                Ok(ialpha::ialpha(table, predictors, &config.solver)?.value)
            }
        },
    }
}
