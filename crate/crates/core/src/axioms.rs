//! Executable checks of the desired properties of an intersection measure,
//! and a randomized counterexample search over small distributions.
//!
//! | axiom | statement |
//! |-------|-----------|
//! | S0 | invariant under reordering the predictors |
//! | M0 | adding a predictor `Z` never increases the measure; equal when some `X_i` is a function of `Z` |
//! | SR | a single predictor gives `I(X_1:Y)` |
//! | M1 | as M0, equal when `I(Z∨X_i : Y) = I(Z:Y)` for some `i` |
//! | LP | for two predictors, `I_∩ ≥ I(X_1:X_2) − I(X_1:X_2|Y)` |
//! | TM | if `H(Y|Z) = 0` then `I_∩(… : Y) ≤ I_∩(… : Z)` |
//!
//! A check that finds a violation beyond the measure's tolerance reports
//! `Fail` with a witness. A check that finds none reports `Pass` when it is
//! exhaustive for the instance (S0, SR, LP) or when the property is one the
//! measure is known to satisfy; randomized checks of properties nobody
//! claims for the measure report `Inconclusive`.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::measures::{intersection, MeasureConfig, MeasureKind};
use crate::pid::{Decomposition2, PairInformation};
use crate::prob::{
    attach_variable, conditional_entropy, conditional_mutual_information, mutual_information,
    numbered_labels, AttachRole, Channel, DistributionFile, JointTable, VarSet, Variable,
};

/// Tolerance for closed-form measures.
pub const EXACT_TOLERANCE: f64 = 1e-9;
/// Tolerance for solver-based measures.
pub const SOLVER_TOLERANCE: f64 = 1e-4;
/// Side conditions of the equality branches must hold to this precision.
const SIDE_CONDITION: f64 = 1e-12;
/// Random `Z` trials per table during a search.
const SEARCH_TRIALS: usize = 4;

pub fn tolerance_for(kind: MeasureKind) -> f64 {
    if kind.is_numerical() {
        SOLVER_TOLERANCE
    } else {
        EXACT_TOLERANCE
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Axiom {
    S0,
    M0,
    SR,
    M1,
    LP,
    TM,
}

impl Axiom {
    pub const ALL: [Axiom; 6] = [Axiom::S0, Axiom::M0, Axiom::SR, Axiom::M1, Axiom::LP, Axiom::TM];

    pub fn as_str(self) -> &'static str {
        match self {
            Axiom::S0 => "S0",
            Axiom::M0 => "M0",
            Axiom::SR => "SR",
            Axiom::M1 => "M1",
            Axiom::LP => "LP",
            Axiom::TM => "TM",
        }
    }

    /// Whether a violation would contradict a known property of `kind`.
    pub fn is_asserted_for(self, kind: MeasureKind) -> bool {
        match self {
            Axiom::S0 | Axiom::SR => true,
            Axiom::M1 => kind == MeasureKind::Imin,
            Axiom::TM => matches!(kind, MeasureKind::Iwedge | MeasureKind::Ialpha),
            Axiom::M0 | Axiom::LP => false,
        }
    }
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(self.as_str())
    }
}

impl FromStr for Axiom {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let upper = s.to_ascii_uppercase();
        Axiom::ALL
            .into_iter()
            .find(|a| a.as_str() == upper)
            .ok_or_else(|| Error::InvalidConfig(format!("unknown axiom {s:?}")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Outcome {
    Pass,
    Fail,
    Inconclusive,
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(match self {
            Outcome::Pass => "PASS",
            Outcome::Fail => "FAIL",
            Outcome::Inconclusive => "INCONCLUSIVE",
        })
    }
}

/// The instance a verdict was computed on.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Witness {
    pub table: DistributionFile,
    pub predictors: Vec<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub permutation: Option<Vec<usize>>,
    pub note: String,
}

/// Where a random table came from.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InstanceId {
    pub seed: u64,
    pub shape: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AxiomVerdict {
    pub axiom: Axiom,
    pub measure: MeasureKind,
    pub outcome: Outcome,
    /// Whether the property is claimed for this measure.
    pub asserted: bool,
    pub lhs: f64,
    pub rhs: f64,
    /// Amount by which the worst instance breaks the property (≤ 0 when it
    /// holds with room to spare).
    pub violation: f64,
    pub tolerance: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub instance: Option<InstanceId>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub decomposition: Option<Decomposition2>,
}

impl AxiomVerdict {
    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("verdict serializes")
    }
}

impl fmt::Display for AxiomVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {:<2} {:<6} lhs {:.6} rhs {:.6} violation {:+.3e}",
            self.outcome, self.axiom, self.measure, self.lhs, self.rhs, self.violation
        )?;
        if let Some(w) = &self.witness {
            write!(f, " ({})", w.note)?;
        }
        if let Some(i) = &self.instance {
            write!(f, " [seed {} shape {:?}]", i.seed, i.shape)?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CheckConfig {
    pub measure: MeasureConfig,
    /// Solver restarts for a first pass.
    pub screening_restarts: usize,
    /// Solver restarts used to re-check an apparent violation.
    pub confirm_restarts: usize,
}

impl Default for CheckConfig {
    fn default() -> Self {
        CheckConfig {
            measure: MeasureConfig::default(),
            screening_restarts: 8,
            confirm_restarts: 64,
        }
    }
}

impl CheckConfig {
    fn measure_with_restarts(&self, restarts: usize) -> MeasureConfig {
        let mut m = self.measure.clone();
        m.solver.restarts = restarts;
        m
    }
}

/// Number of auxiliary-variable trials per check and their seed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TrialBudget {
    pub trials: usize,
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchBudget {
    pub instances: usize,
    pub seed: u64,
    /// Alphabet sizes, predictors first and the target last.
    pub shape: Vec<usize>,
}

impl SearchBudget {
    pub fn validate(&self) -> Result<()> {
        if self.instances == 0 {
            return Err(Error::InvalidConfig("instances must be positive".into()));
        }
        validate_shape(&self.shape)
    }
}

fn validate_shape(shape: &[usize]) -> Result<()> {
    if shape.len() < 2 {
        return Err(Error::InvalidConfig(
            "shape needs at least one predictor and a target".into(),
        ));
    }
    if shape.contains(&0) {
        return Err(Error::InvalidConfig("alphabet sizes must be positive".into()));
    }
    Ok(())
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = x;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of the `index`-th instance derived from a base seed.
pub fn instance_seed(seed: u64, index: usize) -> u64 {
    splitmix64(seed ^ splitmix64(index as u64))
}

fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

fn random_simplex(n: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    let v: Vec<f64> = (0..n).map(|_| Exp1.sample(rng)).collect();
    let s: f64 = v.iter().sum();
    v.into_iter().map(|x| x / s).collect()
}

/// Table with masses drawn uniformly from the joint-state simplex.
/// Variables are `X1..Xn` and `Y`, with states `0..k-1`.
pub fn random_joint(shape: &[usize], seed: u64) -> Result<JointTable> {
    validate_shape(shape)?;
    let n = shape.len() - 1;
    let mut variables: Vec<Variable> = shape[..n]
        .iter()
        .enumerate()
        .map(|(i, &k)| Variable::new(format!("X{}", i + 1), numbered_labels("", k)))
        .collect();
    variables.push(Variable::new("Y", numbered_labels("", shape[n])));
    let size: usize = shape.iter().product();
    let mut rng = rng_for(seed, 0);
    JointTable::from_dense(variables, n, random_simplex(size, &mut rng))
}

fn witness(table: &JointTable, predictors: &[VarSet], note: impl Into<String>) -> Witness {
    Witness {
        table: DistributionFile::from_table(table),
        predictors: predictors.iter().map(|p| p.indices().to_vec()).collect(),
        permutation: None,
        note: note.into(),
    }
}

/// One evaluated comparison inside a check.
struct Observation {
    lhs: f64,
    rhs: f64,
    violation: f64,
    witness: Witness,
}

/// Runs `observe` with screening restarts; for the solver-based measure an
/// apparent violation is recomputed, both sides, with the confirmation
/// budget.
fn screened<F>(kind: MeasureKind, config: &CheckConfig, observe: F) -> Result<Observation>
where
    F: Fn(&MeasureConfig) -> Result<Observation>,
{
    if !kind.is_numerical() {
        return observe(&config.measure);
    }
    let first = observe(&config.measure_with_restarts(config.screening_restarts))?;
    if first.violation <= tolerance_for(kind) {
        return Ok(first);
    }
    observe(&config.measure_with_restarts(config.confirm_restarts))
}

fn verdict(
    axiom: Axiom,
    kind: MeasureKind,
    exhaustive: bool,
    worst: Observation,
) -> AxiomVerdict {
    let tolerance = tolerance_for(kind);
    let asserted = axiom.is_asserted_for(kind);
    let outcome = if worst.violation > tolerance {
        Outcome::Fail
    } else if exhaustive || asserted {
        Outcome::Pass
    } else {
        Outcome::Inconclusive
    };
    AxiomVerdict {
        axiom,
        measure: kind,
        outcome,
        asserted,
        lhs: worst.lhs,
        rhs: worst.rhs,
        violation: worst.violation,
        tolerance,
        witness: (outcome == Outcome::Fail).then_some(worst.witness),
        instance: None,
        decomposition: None,
    }
}

fn worst_of(observations: Vec<Observation>) -> Observation {
    observations
        .into_iter()
        .reduce(|a, b| if b.violation > a.violation { b } else { a })
        .expect("at least one observation")
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..n {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out.sort();
    out
}

/// S0: the measure is the same for every ordering of the predictors
/// (all orderings up to four predictors, ten random ones beyond).
pub fn check_weak_symmetry(
    table: &JointTable,
    predictors: &[VarSet],
    kind: MeasureKind,
    config: &CheckConfig,
) -> Result<AxiomVerdict> {
    let n = predictors.len();
    if n < 2 {
        return Err(Error::WrongPredictorCount(n));
    }
    let orders: Vec<Vec<usize>> = if n <= 4 {
        permutations(n).into_iter().skip(1).collect()
    } else {
        let mut rng = rng_for(0, n as u64);
        (0..10)
            .map(|_| {
                let mut p: Vec<usize> = (0..n).collect();
                for i in (1..n).rev() {
                    p.swap(i, rng.random_range(0..=i));
                }
                p
            })
            .collect()
    };
    let worst = screened(kind, config, |mc| {
        let base = intersection(table, predictors, kind, mc)?;
        let observations = orders
            .iter()
            .map(|order| {
                let permuted: Vec<VarSet> = order.iter().map(|&i| predictors[i].clone()).collect();
                let v = intersection(table, &permuted, kind, mc)?;
                let mut w = witness(table, &permuted, "predictors reordered");
                w.permutation = Some(order.clone());
                Ok(Observation {
                    lhs: base,
                    rhs: v,
                    violation: (v - base).abs(),
                    witness: w,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(worst_of(observations))
    })?;
    Ok(verdict(Axiom::S0, kind, true, worst))
}

/// SR: the single-predictor measure equals `I(X:Y)`.
pub fn check_self_redundancy(
    table: &JointTable,
    predictor: &VarSet,
    kind: MeasureKind,
    config: &CheckConfig,
) -> Result<AxiomVerdict> {
    let preds = [predictor.clone()];
    let worst = screened(kind, config, |mc| {
        let lhs = intersection(table, &preds, kind, mc)?;
        let rhs = mutual_information(table, predictor, &table.target_set())?;
        Ok(Observation {
            lhs,
            rhs,
            violation: (lhs - rhs).abs(),
            witness: witness(table, &preds, "single predictor"),
        })
    })?;
    Ok(verdict(Axiom::SR, kind, true, worst))
}

fn all_variables(table: &JointTable) -> VarSet {
    VarSet::new(0..table.num_variables())
}

/// `Z` drawn from a random channel given every variable of the table.
fn random_auxiliary(table: &JointTable, rng: &mut ChaCha8Rng) -> Result<JointTable> {
    let source = all_variables(table);
    let arity = rng.random_range(2..=3);
    let rows = (0..table.joint_cardinality(&source))
        .map(|_| random_simplex(arity, rng))
        .collect();
    attach_variable(
        table,
        &source,
        &Channel::new(rows)?,
        "Z",
        None,
        AttachRole::Predictor,
    )
}

/// `Z = (s, k)` where `s` is the joint state of `refined` and `k` a random
/// label drawn given every variable, so `refined` is a function of `Z`.
fn refining_auxiliary(
    table: &JointTable,
    refined: &VarSet,
    extra: usize,
    role: AttachRole,
    rng: &mut ChaCha8Rng,
) -> Result<JointTable> {
    let source = all_variables(table);
    let ns = table.joint_cardinality(refined);
    let arity = ns * extra;
    let rows = (0..table.joint_cardinality(&source))
        .map(|full| {
            // full-table index equals the joint index over all variables
            let s = table.project(full, refined);
            let mut row = vec![0.0; arity];
            for (k, p) in random_simplex(extra, rng).into_iter().enumerate() {
                row[s * extra + k] = p;
            }
            row
        })
        .collect();
    let labels = (0..ns)
        .flat_map(|s| {
            let base = table.joint_state_labels(refined, s).join(".");
            (0..extra).map(move |k| format!("{base}#{k}"))
        })
        .collect();
    attach_variable(table, &source, &Channel::new(rows)?, "Z", Some(labels), role)
}

fn with_z(predictors: &[VarSet], z: usize) -> Vec<VarSet> {
    let mut out = predictors.to_vec();
    out.push(VarSet::single(z));
    out
}

fn monotonicity(
    axiom: Axiom,
    table: &JointTable,
    predictors: &[VarSet],
    kind: MeasureKind,
    budget: TrialBudget,
    config: &CheckConfig,
) -> Result<AxiomVerdict> {
    if predictors.is_empty() {
        return Err(Error::NoPredictors);
    }
    let z = table.num_variables();
    let y = table.target_set();
    let zs = VarSet::single(z);
    let observations = (0..budget.trials.max(1))
        .map(|t| {
            let mut rng = rng_for(budget.seed, t as u64);
            // even trials: random Z (inequality); odd trials: Z meeting the
            // axiom's equality condition
            let equality = t % 2 == 1;
            let (extended, note) = if !equality {
                (random_auxiliary(table, &mut rng)?, format!("random Z, trial {t}"))
            } else if axiom == Axiom::M0 {
                let i = (t / 2) % predictors.len();
                let ext = refining_auxiliary(table, &predictors[i], 2, AttachRole::Predictor, &mut rng)?;
                let side = conditional_entropy(&ext, &predictors[i], &zs)?;
                debug_assert!(side <= SIDE_CONDITION);
                if side > SIDE_CONDITION {
                    return Err(Error::InvalidConfig("refinement side condition".into()));
                }
                (ext, format!("Z refines predictor {i}, trial {t}"))
            } else {
                let ext = refining_auxiliary(table, &y, 2, AttachRole::Predictor, &mut rng)?;
                let side = conditional_entropy(&ext, &y, &zs)?;
                let gap = mutual_information(&ext, &zs.union(&predictors[0]), &y)?
                    - mutual_information(&ext, &zs, &y)?;
                if side > SIDE_CONDITION || gap.abs() > SIDE_CONDITION {
                    return Err(Error::InvalidConfig("refinement side condition".into()));
                }
                (ext, format!("Z determines the target, trial {t}"))
            };
            let preds_z = with_z(predictors, z);
            screened(kind, config, |mc| {
                let lhs = intersection(&extended, &preds_z, kind, mc)?;
                let rhs = intersection(&extended, predictors, kind, mc)?;
                let violation = if equality { (lhs - rhs).abs() } else { lhs - rhs };
                Ok(Observation {
                    lhs,
                    rhs,
                    violation,
                    witness: witness(&extended, &preds_z, note.clone()),
                })
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(verdict(axiom, kind, false, worst_of(observations)))
}

/// M0 over `budget.trials` auxiliary variables: random `Z` for the
/// inequality, alternating with `Z` that refines a predictor for the
/// equality case.
pub fn check_weak_monotonicity(
    table: &JointTable,
    predictors: &[VarSet],
    kind: MeasureKind,
    budget: TrialBudget,
    config: &CheckConfig,
) -> Result<AxiomVerdict> {
    monotonicity(Axiom::M0, table, predictors, kind, budget, config)
}

/// M1: like M0, but the equality trials use `Z` that determines the target,
/// so `I(Z∨X_i : Y) = I(Z:Y)` for every `i`.
pub fn check_strong_monotonicity(
    table: &JointTable,
    predictors: &[VarSet],
    kind: MeasureKind,
    budget: TrialBudget,
    config: &CheckConfig,
) -> Result<AxiomVerdict> {
    monotonicity(Axiom::M1, table, predictors, kind, budget, config)
}

/// LP for two predictors: `I_∩ ≥ I(X_1:X_2) − I(X_1:X_2|Y)`. The verdict
/// also carries the full decomposition.
pub fn check_local_positivity(
    table: &JointTable,
    predictors: &[VarSet],
    kind: MeasureKind,
    config: &CheckConfig,
) -> Result<AxiomVerdict> {
    let [a, b] = predictors else {
        return Err(Error::WrongPredictorCount(predictors.len()));
    };
    let y = table.target_set();
    let rhs = mutual_information(table, a, b)? - conditional_mutual_information(table, a, b, &y)?;
    let worst = screened(kind, config, |mc| {
        let lhs = intersection(table, predictors, kind, mc)?;
        Ok(Observation {
            lhs,
            rhs,
            violation: rhs - lhs,
            witness: witness(table, predictors, "two-predictor local positivity"),
        })
    })?;
    let redundant = worst.lhs;
    let mut v = verdict(Axiom::LP, kind, true, worst);
    v.decomposition = Some(PairInformation::of(table, predictors)?.decompose(redundant, kind));
    Ok(v)
}

/// Refinement of the target: each state split into 1 to 3 substates with
/// random weights. Trial 0 is an exact copy.
fn refine_target(table: &JointTable, trial: usize, rng: &mut ChaCha8Rng) -> Result<JointTable> {
    let yv = table.target_variable();
    let ny = yv.cardinality();
    let splits: Vec<usize> = (0..ny)
        .map(|_| if trial == 0 { 1 } else { rng.random_range(1..=3) })
        .collect();
    let arity: usize = splits.iter().sum();
    let mut rows = Vec::with_capacity(ny);
    let mut labels = Vec::with_capacity(arity);
    let mut offset = 0;
    for (y, &k) in splits.iter().enumerate() {
        let mut row = vec![0.0; arity];
        for (j, p) in random_simplex(k, rng).into_iter().enumerate() {
            row[offset + j] = p;
            labels.push(format!("{}#{j}", yv.states()[y]));
        }
        offset += k;
        rows.push(row);
    }
    attach_variable(
        table,
        &table.target_set(),
        &Channel::new(rows)?,
        "Z",
        Some(labels),
        AttachRole::TargetReplacement,
    )
}

/// TM: the measure does not decrease when the target is replaced by a
/// refinement of it. Trial 0 replaces the target by a relabeled copy and
/// checks equality.
pub fn check_target_monotonicity(
    table: &JointTable,
    predictors: &[VarSet],
    kind: MeasureKind,
    budget: TrialBudget,
    config: &CheckConfig,
) -> Result<AxiomVerdict> {
    if predictors.is_empty() {
        return Err(Error::NoPredictors);
    }
    let observations = (0..budget.trials.max(1))
        .map(|t| {
            let mut rng = rng_for(budget.seed, t as u64);
            let refined = refine_target(table, t, &mut rng)?;
            let side = conditional_entropy(&refined, &VarSet::single(table.target()), &refined.target_set())?;
            if side > SIDE_CONDITION {
                return Err(Error::InvalidConfig("refinement side condition".into()));
            }
            let note = if t == 0 {
                "target copied".to_string()
            } else {
                format!("target refined, trial {t}")
            };
            screened(kind, config, |mc| {
                let lhs = intersection(table, predictors, kind, mc)?;
                let rhs = intersection(&refined, predictors, kind, mc)?;
                let violation = if t == 0 { (lhs - rhs).abs() } else { lhs - rhs };
                Ok(Observation {
                    lhs,
                    rhs,
                    violation,
                    witness: witness(&refined, predictors, note.clone()),
                })
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(verdict(Axiom::TM, kind, false, worst_of(observations)))
}

/// Runs one axiom on one table. SR is checked for every predictor and the
/// worst one reported.
pub fn check(
    axiom: Axiom,
    table: &JointTable,
    predictors: &[VarSet],
    kind: MeasureKind,
    budget: TrialBudget,
    config: &CheckConfig,
) -> Result<AxiomVerdict> {
    match axiom {
        Axiom::S0 => check_weak_symmetry(table, predictors, kind, config),
        Axiom::SR => {
            let verdicts = predictors
                .iter()
                .map(|p| check_self_redundancy(table, p, kind, config))
                .collect::<Result<Vec<_>>>()?;
            verdicts
                .into_iter()
                .reduce(|a, b| if b.violation > a.violation { b } else { a })
                .ok_or(Error::NoPredictors)
        }
        Axiom::M0 => check_weak_monotonicity(table, predictors, kind, budget, config),
        Axiom::M1 => check_strong_monotonicity(table, predictors, kind, budget, config),
        Axiom::LP => check_local_positivity(table, predictors, kind, config),
        Axiom::TM => check_target_monotonicity(table, predictors, kind, budget, config),
    }
}

/// Axioms that apply to a predictor count.
pub fn applicable(n: usize) -> Vec<Axiom> {
    Axiom::ALL
        .into_iter()
        .filter(|a| match a {
            Axiom::S0 => n >= 2,
            Axiom::LP => n == 2,
            _ => true,
        })
        .collect()
}

/// Checks `axiom` on `budget.instances` random tables of one shape and
/// returns the failures, largest violation first.
pub fn search_counterexamples(
    kind: MeasureKind,
    axiom: Axiom,
    budget: &SearchBudget,
    config: &CheckConfig,
) -> Result<Vec<AxiomVerdict>> {
    budget.validate()?;
    let verdicts = (0..budget.instances)
        .into_par_iter()
        .map(|i| {
            let seed = instance_seed(budget.seed, i);
            let table = random_joint(&budget.shape, seed)?;
            let preds = table.default_predictors();
            let trials = TrialBudget {
                trials: SEARCH_TRIALS,
                seed,
            };
            let mut v = check(axiom, &table, &preds, kind, trials, config)?;
            v.instance = Some(InstanceId {
                seed,
                shape: budget.shape.clone(),
            });
            Ok(v)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut fails: Vec<AxiomVerdict> = verdicts
        .into_iter()
        .filter(|v| v.outcome == Outcome::Fail)
        .collect();
    fails.sort_by(|a, b| b.violation.total_cmp(&a.violation));
    Ok(fails)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{build, CaseName};

    #[test]
    fn axiom_names() {
        assert_eq!("lp".parse::<Axiom>().unwrap(), Axiom::LP);
        assert_eq!("S0".parse::<Axiom>().unwrap(), Axiom::S0);
        assert!("M2".parse::<Axiom>().is_err());
    }

    #[test]
    fn permutations_of_three() {
        let p = permutations(3);
        assert_eq!(p.len(), 6);
        assert_eq!(p[0], vec![0, 1, 2]);
    }

    #[test]
    fn random_joint_is_deterministic() {
        let a = random_joint(&[2, 2, 2], 7).unwrap();
        let b = random_joint(&[2, 2, 2], 7).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.len(), 8);
        assert!((a.mass().iter().sum::<f64>() - 1.0).abs() < 1e-12);
        assert_ne!(a, random_joint(&[2, 2, 2], 8).unwrap());
        let degenerate = random_joint(&[1, 2, 2], 3).unwrap();
        assert_eq!(degenerate.variable(0).cardinality(), 1);
        assert!(random_joint(&[2], 0).is_err());
    }

    #[test]
    fn symmetry_on_corpus() {
        let cfg = CheckConfig::default();
        let t = build(CaseName::RdnXor).table;
        let v = check_weak_symmetry(&t, &t.default_predictors(), MeasureKind::Iwedge, &cfg).unwrap();
        assert_eq!(v.outcome, Outcome::Pass);
        let t = build(CaseName::ImperfectRdn).table;
        let v = check_weak_symmetry(&t, &t.default_predictors(), MeasureKind::Imin, &cfg).unwrap();
        assert_eq!(v.outcome, Outcome::Pass);
        assert!(v.violation < 1e-15);
    }

    #[test]
    fn self_redundancy_of_constant_predictor() {
        let vars = vec![
            Variable::new("C", ["c"]),
            Variable::new("Y", ["0", "1"]),
        ];
        let t = JointTable::from_dense(vars, 1, vec![0.3, 0.7]).unwrap();
        for kind in MeasureKind::ALL {
            let v = check_self_redundancy(&t, &VarSet::single(0), kind, &CheckConfig::default())
                .unwrap();
            assert_eq!(v.outcome, Outcome::Pass);
            assert_eq!(v.lhs, 0.0);
            assert_eq!(v.rhs, 0.0);
        }
    }

    #[test]
    fn lp_on_and_and_unq() {
        let cfg = CheckConfig::default();
        let t = build(CaseName::And).table;
        let v = check_local_positivity(&t, &t.default_predictors(), MeasureKind::Imin, &cfg).unwrap();
        assert_eq!(v.outcome, Outcome::Pass);
        assert!((v.rhs + 0.188721875540867).abs() < 1e-12);
        let t = build(CaseName::Unq).table;
        let v = check_local_positivity(&t, &t.default_predictors(), MeasureKind::Iwedge, &cfg).unwrap();
        assert_eq!(v.outcome, Outcome::Pass);
        assert!(v.rhs.abs() < 1e-12);
        let d = v.decomposition.unwrap();
        assert!(d.unique_1 > 0.999);
    }

    #[test]
    fn search_shape_errors() {
        let budget = SearchBudget {
            instances: 0,
            seed: 0,
            shape: vec![2, 2, 2],
        };
        assert!(search_counterexamples(MeasureKind::Imin, Axiom::SR, &budget, &CheckConfig::default()).is_err());
    }
}
