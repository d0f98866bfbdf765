use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::table::{JointTable, VarSet, Variable, MASS_TOLERANCE};

/// Row-stochastic matrix: one distribution over `arity` output states per
/// input state.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Channel {
    rows: Vec<Vec<f64>>,
    arity: usize,
}

impl Channel {
    pub fn new(rows: Vec<Vec<f64>>) -> Result<Self> {
        let arity = rows.first().map_or(0, Vec::len);
        if arity == 0 {
            return Err(Error::ArityMismatch {
                expected: 1,
                found: 0,
            });
        }
        for (r, row) in rows.iter().enumerate() {
            if row.len() != arity {
                return Err(Error::ArityMismatch {
                    expected: arity,
                    found: row.len(),
                });
            }
            if row.iter().any(|&w| !w.is_finite() || w < 0.0) {
                return Err(Error::ChannelEntryInvalid { row: r });
            }
            let sum: f64 = row.iter().sum();
            if (sum - 1.0).abs() > MASS_TOLERANCE {
                return Err(Error::ChannelRowNotNormalized { row: r, sum });
            }
        }
        Ok(Channel { rows, arity })
    }

    /// Rows taken as-is; callers guarantee they are distributions.
    pub(crate) fn from_rows_unchecked(rows: Vec<Vec<f64>>) -> Self {
        let arity = rows.first().map_or(0, Vec::len);
        Channel { rows, arity }
    }

    /// Every input state mapped to output state 0.
    pub fn constant(inputs: usize, arity: usize) -> Self {
        let mut row = vec![0.0; arity.max(1)];
        row[0] = 1.0;
        Channel::from_rows_unchecked(vec![row; inputs])
    }

    /// Deterministic channel from a map input → output state.
    pub fn deterministic(map: &[usize], arity: usize) -> Result<Self> {
        let rows = map
            .iter()
            .map(|&q| {
                if q >= arity {
                    return Err(Error::ArityMismatch {
                        expected: arity,
                        found: q + 1,
                    });
                }
                let mut row = vec![0.0; arity];
                row[q] = 1.0;
                Ok(row)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Channel::from_rows_unchecked(rows))
    }

    pub fn identity(n: usize) -> Self {
        let map: Vec<usize> = (0..n).collect();
        Channel::deterministic(&map, n).expect("identity map is in range")
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    pub fn num_inputs(&self) -> usize {
        self.rows.len()
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    #[inline]
    pub fn get(&self, input: usize, output: usize) -> f64 {
        self.rows[input][output]
    }
}

/// Role of a variable appended with [`attach_variable`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AttachRole {
    /// Appended as an ordinary (non-target) variable.
    Predictor,
    /// Appended and made the new target; the old target stays as an
    /// ordinary variable.
    TargetReplacement,
}

/// Default state labels for an appended variable, zero-padded so that the
/// lexicographic order matches the numeric one.
pub fn numbered_labels(prefix: &str, n: usize) -> Vec<String> {
    let width = n.saturating_sub(1).to_string().len();
    (0..n).map(|i| format!("{prefix}{i:0width$}")).collect()
}

/// Extends `table` with a new variable `Z` drawn from `channel` given the
/// joint state of `source`, so that `Z` is conditionally independent of
/// every other variable given `source`.
///
/// `labels` must be in the same order as the channel columns; they are
/// re-sorted into canonical order together with the columns.
pub fn attach_variable(
    table: &JointTable,
    source: &VarSet,
    channel: &Channel,
    name: &str,
    labels: Option<Vec<String>>,
    role: AttachRole,
) -> Result<JointTable> {
    if source.is_empty() {
        return Err(Error::EmptyVarSet);
    }
    table.check_varset(source)?;
    let expected = table.joint_cardinality(source);
    if channel.num_inputs() != expected {
        return Err(Error::IndexMismatch {
            expected,
            found: channel.num_inputs(),
        });
    }
    if table.variables().iter().any(|v| v.name() == name) {
        return Err(Error::DuplicateVariable(name.to_string()));
    }
    let arity = channel.arity();
    let labels = labels.unwrap_or_else(|| numbered_labels("z", arity));
    if labels.len() != arity {
        return Err(Error::ArityMismatch {
            expected: arity,
            found: labels.len(),
        });
    }
    let mut order: Vec<usize> = (0..arity).collect();
    order.sort_by(|&a, &b| labels[a].cmp(&labels[b]));
    for w in order.windows(2) {
        if labels[w[0]] == labels[w[1]] {
            return Err(Error::DuplicateState {
                variable: name.to_string(),
                state: labels[w[0]].clone(),
            });
        }
    }
    let mut mass = Vec::with_capacity(table.len() * arity);
    for (idx, &p) in table.mass().iter().enumerate() {
        let row = &channel.rows[table.project(idx, source)];
        mass.extend(order.iter().map(|&z| p * row[z]));
    }
    let mut variables = table.variables().to_vec();
    variables.push(Variable::new(
        name,
        order.iter().map(|&z| labels[z].clone()),
    ));
    let target = match role {
        AttachRole::Predictor => table.target(),
        AttachRole::TargetReplacement => variables.len() - 1,
    };
    Ok(JointTable::with_parts(variables, target, mass))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::prob::{entropy, mutual_information, conditional_entropy};

    fn and_table() -> JointTable {
        let vars = vec![
            Variable::new("X1", ["0", "1"]),
            Variable::new("X2", ["0", "1"]),
            Variable::new("Y", ["0", "1"]),
        ];
        JointTable::from_dense(vars, 2, vec![0.25, 0.0, 0.25, 0.0, 0.25, 0.0, 0.0, 0.25])
            .unwrap()
    }

    #[test]
    fn copy_of_target_is_a_bijection() {
        let t = and_table();
        let z = attach_variable(
            &t,
            &t.target_set(),
            &Channel::identity(2),
            "Z",
            None,
            AttachRole::Predictor,
        )
        .unwrap();
        let zi = VarSet::single(3);
        let y = VarSet::single(2);
        assert!(conditional_entropy(&z, &y, &zi).unwrap().abs() < 1e-15);
        assert!(conditional_entropy(&z, &zi, &y).unwrap().abs() < 1e-15);
    }

    #[test]
    fn constant_variable_is_uninformative() {
        let t = and_table();
        let z = attach_variable(
            &t,
            &VarSet::new([0, 1, 2]),
            &Channel::constant(8, 1),
            "Z",
            None,
            AttachRole::Predictor,
        )
        .unwrap();
        for k in 0..3 {
            let i = mutual_information(&z, &VarSet::single(3), &VarSet::single(k)).unwrap();
            assert_eq!(i, 0.0);
        }
    }

    #[test]
    fn splitting_y0_into_halves() {
        let t = and_table();
        let ch = Channel::new(vec![vec![0.5, 0.5, 0.0], vec![0.0, 0.0, 1.0]]).unwrap();
        let z = attach_variable(&t, &t.target_set(), &ch, "Z", None, AttachRole::TargetReplacement)
            .unwrap();
        assert_eq!(z.target(), 3);
        assert!(conditional_entropy(&z, &VarSet::single(2), &VarSet::single(3)).unwrap() < 1e-15);
        // Z masses 3/8, 3/8, 1/4
        let oracle = -2.0 * 0.375 * 0.375f64.log2() - 0.25 * 0.25f64.log2();
        let h = entropy(&z, &VarSet::single(3)).unwrap();
        assert!((h - oracle).abs() < 1e-12);
    }

    #[test]
    fn channel_shape_errors() {
        let t = and_table();
        assert!(matches!(
            Channel::new(vec![vec![0.5, 0.4]]),
            Err(Error::ChannelRowNotNormalized { .. })
        ));
        let err = attach_variable(
            &t,
            &t.target_set(),
            &Channel::identity(3),
            "Z",
            None,
            AttachRole::Predictor,
        )
        .unwrap_err();
        assert!(matches!(err, Error::IndexMismatch { .. }));
    }

    #[test]
    fn labels_are_padded() {
        assert_eq!(numbered_labels("z", 11)[2], "z02");
        assert_eq!(numbered_labels("q", 3), vec!["q0", "q1", "q2"]);
    }
}
