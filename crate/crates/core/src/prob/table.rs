use std::collections::HashSet;
use std::fmt;

use crate::error::{Error, Result};

/// Tolerance on the total mass of an input table.
pub const MASS_TOLERANCE: f64 = 1e-9;

/// A discrete random variable: a name and its ordered state labels.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Variable {
    name: String,
    states: Vec<String>,
}

impl Variable {
    pub fn new<S: Into<String>, I, T>(name: S, states: I) -> Self
    where
        I: IntoIterator<Item = T>,
        T: Into<String>,
    {
        Variable {
            name: name.into(),
            states: states.into_iter().map(Into::into).collect(),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn cardinality(&self) -> usize {
        self.states.len()
    }

    pub fn state_index(&self, label: &str) -> Option<usize> {
        self.states.iter().position(|s| s == label)
    }
}

/// An ordered set of variable positions inside a [`JointTable`].
///
/// Indices are kept sorted and deduplicated, so the joint state of a set is
/// always enumerated in the same mixed-radix order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VarSet(Vec<usize>);

impl VarSet {
    pub fn new<I: IntoIterator<Item = usize>>(indices: I) -> Self {
        let mut v: Vec<usize> = indices.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        VarSet(v)
    }

    pub fn single(index: usize) -> Self {
        VarSet(vec![index])
    }

    pub fn empty() -> Self {
        VarSet(Vec::new())
    }

    pub fn indices(&self) -> &[usize] {
        &self.0
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn contains(&self, index: usize) -> bool {
        self.0.binary_search(&index).is_ok()
    }

    pub fn union(&self, other: &VarSet) -> VarSet {
        VarSet::new(self.0.iter().chain(other.0.iter()).copied())
    }

    pub fn is_disjoint(&self, other: &VarSet) -> bool {
        self.0.iter().all(|i| !other.contains(*i))
    }
}

impl From<usize> for VarSet {
    fn from(index: usize) -> Self {
        VarSet::single(index)
    }
}

impl fmt::Display for VarSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|i| i.to_string()).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

/// Finite joint distribution over predictor variables and one target.
///
/// Masses are stored densely in row-major order (last variable varies
/// fastest). State labels of every variable are sorted lexicographically,
/// which fixes the iteration order of every computation downstream.
#[derive(Clone, Debug, PartialEq)]
pub struct JointTable {
    variables: Vec<Variable>,
    target: usize,
    mass: Vec<f64>,
    strides: Vec<usize>,
}

fn strides_for(cards: &[usize]) -> Vec<usize> {
    let mut strides = vec![1; cards.len()];
    for k in (0..cards.len().saturating_sub(1)).rev() {
        strides[k] = strides[k + 1] * cards[k + 1];
    }
    strides
}

impl JointTable {
    /// Builds a table from a dense mass vector laid out in the order of the
    /// given state lists, then validates and canonicalizes it.
    pub fn from_dense(variables: Vec<Variable>, target: usize, mass: Vec<f64>) -> Result<Self> {
        if target >= variables.len() {
            return Err(Error::InvalidVariableIndex(target));
        }
        if variables.len() < 2 {
            return Err(Error::NoPredictorVariables);
        }
        let mut names = HashSet::new();
        for v in &variables {
            if !names.insert(v.name.as_str()) {
                return Err(Error::DuplicateVariable(v.name.clone()));
            }
            if v.states.is_empty() {
                return Err(Error::EmptyAlphabet(v.name.clone()));
            }
            let mut seen = HashSet::new();
            for s in &v.states {
                if !seen.insert(s.as_str()) {
                    return Err(Error::DuplicateState {
                        variable: v.name.clone(),
                        state: s.clone(),
                    });
                }
            }
        }
        let cards: Vec<usize> = variables.iter().map(Variable::cardinality).collect();
        let size: usize = cards.iter().product();
        if mass.len() != size {
            return Err(Error::IndexMismatch {
                expected: size,
                found: mass.len(),
            });
        }
        let strides = strides_for(&cards);
        let raw = JointTable {
            variables,
            target,
            mass,
            strides,
        };
        for (idx, &p) in raw.mass.iter().enumerate() {
            if !p.is_finite() {
                return Err(Error::NonFiniteMass {
                    state: raw.state_string(idx),
                });
            }
            if p < 0.0 {
                return Err(Error::NegativeMass {
                    state: raw.state_string(idx),
                    value: p,
                });
            }
        }
        let sum: f64 = raw.mass.iter().sum();
        if (sum - 1.0).abs() > MASS_TOLERANCE {
            return Err(Error::MassSumOutOfTolerance { sum });
        }
        let mut table = raw.canonicalize();
        // drift at rounding level is left alone so tables round-trip exactly
        let rounding = 4.0 * f64::EPSILON * table.mass.len() as f64;
        if (sum - 1.0).abs() > rounding {
            for p in &mut table.mass {
                *p /= sum;
            }
        }
        Ok(table)
    }

    /// Builds a table from a sparse list of `(labels, mass)` entries.
    /// Unlisted state tuples get mass zero.
    pub fn from_entries<L, S>(
        variables: Vec<Variable>,
        target: usize,
        entries: impl IntoIterator<Item = (L, f64)>,
    ) -> Result<Self>
    where
        L: AsRef<[S]>,
        S: AsRef<str>,
    {
        let cards: Vec<usize> = variables.iter().map(Variable::cardinality).collect();
        let strides = strides_for(&cards);
        let size: usize = cards.iter().product();
        let mut mass = vec![0.0; size];
        let mut filled = vec![false; size];
        for (labels, p) in entries {
            let labels = labels.as_ref();
            if labels.len() != variables.len() {
                return Err(Error::TupleLength {
                    expected: variables.len(),
                    found: labels.len(),
                });
            }
            let mut idx = 0;
            for (k, label) in labels.iter().enumerate() {
                let label = label.as_ref();
                let s = variables[k]
                    .state_index(label)
                    .ok_or_else(|| Error::UnknownState {
                        variable: variables[k].name.clone(),
                        state: label.to_string(),
                    })?;
                idx += s * strides[k];
            }
            if filled[idx] {
                let joined: Vec<&str> = labels.iter().map(|l| l.as_ref()).collect();
                return Err(Error::DuplicateEntry {
                    state: joined.join(","),
                });
            }
            filled[idx] = true;
            mass[idx] = p;
        }
        JointTable::from_dense(variables, target, mass)
    }

    fn canonicalize(self) -> Self {
        let sorted: Vec<Vec<usize>> = self
            .variables
            .iter()
            .map(|v| {
                let mut order: Vec<usize> = (0..v.cardinality()).collect();
                order.sort_by(|&a, &b| v.states[a].cmp(&v.states[b]));
                order
            })
            .collect();
        if sorted
            .iter()
            .all(|o| o.iter().enumerate().all(|(i, &j)| i == j))
        {
            return self;
        }
        let variables: Vec<Variable> = self
            .variables
            .iter()
            .zip(&sorted)
            .map(|(v, order)| Variable {
                name: v.name.clone(),
                states: order.iter().map(|&i| v.states[i].clone()).collect(),
            })
            .collect();
        // rank[k][old] = new position of old state of variable k
        let rank: Vec<Vec<usize>> = sorted
            .iter()
            .map(|order| {
                let mut r = vec![0; order.len()];
                for (new, &old) in order.iter().enumerate() {
                    r[old] = new;
                }
                r
            })
            .collect();
        let mut mass = vec![0.0; self.mass.len()];
        for (old_idx, &p) in self.mass.iter().enumerate() {
            let mut new_idx = 0;
            for k in 0..self.variables.len() {
                let s = (old_idx / self.strides[k]) % self.variables[k].cardinality();
                new_idx += rank[k][s] * self.strides[k];
            }
            mass[new_idx] = p;
        }
        JointTable {
            variables,
            target: self.target,
            mass,
            strides: self.strides,
        }
    }

    pub fn variables(&self) -> &[Variable] {
        &self.variables
    }

    pub fn variable(&self, index: usize) -> &Variable {
        &self.variables[index]
    }

    pub fn num_variables(&self) -> usize {
        self.variables.len()
    }

    pub fn target(&self) -> usize {
        self.target
    }

    pub fn target_set(&self) -> VarSet {
        VarSet::single(self.target)
    }

    pub fn target_variable(&self) -> &Variable {
        &self.variables[self.target]
    }

    /// Every non-target variable as its own predictor, in table order.
    pub fn default_predictors(&self) -> Vec<VarSet> {
        (0..self.variables.len())
            .filter(|&i| i != self.target)
            .map(VarSet::single)
            .collect()
    }

    pub fn variable_index(&self, name: &str) -> Result<usize> {
        self.variables
            .iter()
            .position(|v| v.name == name)
            .ok_or_else(|| Error::UnknownVariable(name.to_string()))
    }

    /// Dense masses in row-major order.
    pub fn mass(&self) -> &[f64] {
        &self.mass
    }

    pub fn len(&self) -> usize {
        self.mass.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mass.is_empty()
    }

    pub fn cardinalities(&self) -> Vec<usize> {
        self.variables.iter().map(Variable::cardinality).collect()
    }

    /// State index of variable `k` within full joint index `idx`.
    #[inline]
    pub fn state_of(&self, idx: usize, k: usize) -> usize {
        (idx / self.strides[k]) % self.variables[k].cardinality()
    }

    pub fn state_labels(&self, idx: usize) -> Vec<&str> {
        (0..self.variables.len())
            .map(|k| self.variables[k].states[self.state_of(idx, k)].as_str())
            .collect()
    }

    fn state_string(&self, idx: usize) -> String {
        self.state_labels(idx).join(",")
    }

    pub(crate) fn check_varset(&self, vars: &VarSet) -> Result<()> {
        match vars.indices().iter().find(|&&i| i >= self.variables.len()) {
            Some(&i) => Err(Error::InvalidVariableIndex(i)),
            None => Ok(()),
        }
    }

    /// Number of joint states of a variable set.
    pub fn joint_cardinality(&self, vars: &VarSet) -> usize {
        vars.indices()
            .iter()
            .map(|&k| self.variables[k].cardinality())
            .product()
    }

    /// Mixed-radix index of the joint state of `vars` inside full index `idx`.
    #[inline]
    pub fn project(&self, idx: usize, vars: &VarSet) -> usize {
        let mut sub = 0;
        for &k in vars.indices() {
            sub = sub * self.variables[k].cardinality() + self.state_of(idx, k);
        }
        sub
    }

    /// Labels of joint state `sub` of a variable set.
    pub fn joint_state_labels(&self, vars: &VarSet, mut sub: usize) -> Vec<&str> {
        let mut labels = vec![""; vars.len()];
        for (pos, &k) in vars.indices().iter().enumerate().rev() {
            let card = self.variables[k].cardinality();
            labels[pos] = self.variables[k].states[sub % card].as_str();
            sub /= card;
        }
        labels
    }

    /// Dense marginal mass over `vars` (no validation of `vars`).
    pub(crate) fn marginal_mass(&self, vars: &VarSet) -> Vec<f64> {
        let mut out = vec![0.0; self.joint_cardinality(vars)];
        for (idx, &p) in self.mass.iter().enumerate() {
            if p != 0.0 {
                out[self.project(idx, vars)] += p;
            }
        }
        out
    }

    pub(crate) fn with_parts(variables: Vec<Variable>, target: usize, mass: Vec<f64>) -> Self {
        let cards: Vec<usize> = variables.iter().map(Variable::cardinality).collect();
        let strides = strides_for(&cards);
        JointTable {
            variables,
            target,
            mass,
            strides,
        }
    }

    /// Same distribution with a different variable designated as target.
    pub fn with_target(&self, target: usize) -> Result<Self> {
        if target >= self.variables.len() {
            return Err(Error::InvalidVariableIndex(target));
        }
        let mut t = self.clone();
        t.target = target;
        Ok(t)
    }
}

/// Distribution over a subset of variables, produced by [`marginal`].
#[derive(Clone, Debug, PartialEq)]
pub struct Marginal {
    variables: Vec<Variable>,
    mass: Vec<f64>,
}

impl Marginal {
    pub fn variables(&self) -> &[Variable] {
        &self.variables
    }

    pub fn mass(&self) -> &[f64] {
        &self.mass
    }

    /// Probability of a joint state given by its labels.
    pub fn probability<S: AsRef<str>>(&self, labels: &[S]) -> Option<f64> {
        if labels.len() != self.variables.len() {
            return None;
        }
        let mut idx = 0;
        for (v, l) in self.variables.iter().zip(labels) {
            idx = idx * v.cardinality() + v.state_index(l.as_ref())?;
        }
        Some(self.mass[idx])
    }
}

/// Validates a table. Tables are validated on construction, so this is a
/// re-check that also renormalizes any drift within tolerance.
pub fn validate(table: JointTable) -> Result<JointTable> {
    JointTable::from_dense(table.variables, table.target, table.mass)
}

/// Marginal distribution over `vars`.
pub fn marginal(table: &JointTable, vars: &VarSet) -> Result<Marginal> {
    if vars.is_empty() {
        return Err(Error::EmptyVarSet);
    }
    table.check_varset(vars)?;
    Ok(Marginal {
        variables: vars
            .indices()
            .iter()
            .map(|&k| table.variables[k].clone())
            .collect(),
        mass: table.marginal_mass(vars),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bits() -> Vec<Variable> {
        vec![
            Variable::new("X1", ["0", "1"]),
            Variable::new("Y", ["0", "1"]),
        ]
    }

    #[test]
    fn rejects_negative_mass() {
        let err = JointTable::from_dense(bits(), 1, vec![0.6, -0.1, 0.25, 0.25]).unwrap_err();
        assert!(matches!(err, Error::NegativeMass { .. }));
    }

    #[test]
    fn rejects_bad_sum() {
        let err = JointTable::from_dense(bits(), 1, vec![0.125; 4]).unwrap_err();
        assert!(matches!(err, Error::MassSumOutOfTolerance { .. }));
    }

    #[test]
    fn rejects_duplicate_labels() {
        let vars = vec![Variable::new("X1", ["a", "a"]), Variable::new("Y", ["0"])];
        let err = JointTable::from_dense(vars, 1, vec![0.5, 0.5]).unwrap_err();
        assert!(matches!(err, Error::DuplicateState { .. }));
    }

    #[test]
    fn rejects_duplicate_entries() {
        let err = JointTable::from_entries(bits(), 1, [(["0", "0"], 0.5), (["0", "0"], 0.5)])
            .unwrap_err();
        assert!(matches!(err, Error::DuplicateEntry { .. }));
    }

    #[test]
    fn needs_a_predictor() {
        let err =
            JointTable::from_dense(vec![Variable::new("Y", ["0", "1"])], 0, vec![0.5, 0.5])
                .unwrap_err();
        assert!(matches!(err, Error::NoPredictorVariables));
    }

    #[test]
    fn renormalizes_within_tolerance() {
        let t = JointTable::from_dense(bits(), 1, vec![0.25 + 4e-10, 0.25, 0.25, 0.25]).unwrap();
        let sum: f64 = t.mass().iter().sum();
        assert!((sum - 1.0).abs() < 1e-15);
    }

    #[test]
    fn sorts_states_and_moves_mass() {
        let vars = vec![Variable::new("X", ["b", "a"]), Variable::new("Y", ["1", "0"])];
        // (b,1)=0.1 (b,0)=0.2 (a,1)=0.3 (a,0)=0.4
        let t = JointTable::from_dense(vars, 1, vec![0.1, 0.2, 0.3, 0.4]).unwrap();
        assert_eq!(t.variable(0).states(), ["a", "b"]);
        assert_eq!(t.variable(1).states(), ["0", "1"]);
        assert_eq!(t.mass(), &[0.4, 0.3, 0.2, 0.1]);
    }

    #[test]
    fn marginal_of_everything_is_identity() {
        let t = JointTable::from_dense(bits(), 1, vec![0.1, 0.2, 0.3, 0.4]).unwrap();
        let m = marginal(&t, &VarSet::new([0, 1])).unwrap();
        assert_eq!(m.mass(), t.mass());
        assert_eq!(m.variables(), t.variables());
        assert!(matches!(
            marginal(&t, &VarSet::empty()),
            Err(Error::EmptyVarSet)
        ));
    }

    #[test]
    fn projection_matches_labels() {
        let vars = vec![
            Variable::new("A", ["0", "1", "2"]),
            Variable::new("B", ["x", "y"]),
            Variable::new("Y", ["p", "q"]),
        ];
        let t = JointTable::from_dense(vars, 2, vec![1.0 / 12.0; 12]).unwrap();
        let set = VarSet::new([0, 2]);
        for idx in 0..t.len() {
            let full = t.state_labels(idx);
            let sub = t.joint_state_labels(&set, t.project(idx, &set));
            assert_eq!(sub, vec![full[0], full[2]]);
        }
    }
}
