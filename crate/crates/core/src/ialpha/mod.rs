//! The `I_α` measure: the largest `I(Q:Y)` over channels `Pr(Q|Y)` such that
//! conditioning on any single predictor removes everything `Q` says about
//! `Y`, i.e. `I(Q:Y|X_i) = 0` for every `i`.
//!
//! The problem is nonconvex. [`ialpha`] maximizes the penalized objective
//! `I(Q:Y) − λ Σ_i I(Q:Y|X_i)` by projected gradient ascent on each row of
//! the channel, raising `λ` through a fixed schedule and warm-starting each
//! stage. Starts are the channel induced by the common random variable, the
//! constant channel and a batch of uniformly random channels.

mod objective;
mod oracle;
mod simplex;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1};
use rayon::prelude::*;
use serde::Serialize;

use crate::common_rv;
use crate::error::{Error, Result};
use crate::measures;
use crate::prob::{
    attach_variable, conditional_mutual_information, numbered_labels, AttachRole, Channel,
    JointTable, VarSet,
};

pub use objective::{ChannelObjective, LOG_FLOOR};
pub use oracle::ialpha_oracle;
pub use simplex::project_onto_simplex;

const ARMIJO: f64 = 1e-4;
const MIN_STEP: f64 = 1e-20;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SolverConfig {
    /// Number of `Q` states; `None` means `|Y| + 1`.
    pub q_arity: Option<usize>,
    /// Random starts, in addition to the meet and constant channels.
    pub restarts: usize,
    pub penalty_schedule: Vec<f64>,
    pub step_tolerance: f64,
    pub feasibility_tolerance: f64,
    pub seed: u64,
    /// Iteration cap per penalty stage.
    pub max_iterations: usize,
    /// Allowed excess of the result over `I_min` before it is treated as a
    /// solver fault.
    pub bound_tolerance: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            q_arity: None,
            restarts: 32,
            penalty_schedule: vec![10.0, 100.0, 1000.0, 10000.0],
            step_tolerance: 1e-7,
            feasibility_tolerance: 1e-6,
            seed: 0,
            max_iterations: 5000,
            bound_tolerance: 1e-4,
        }
    }
}

impl SolverConfig {
    pub fn with_restarts(mut self, restarts: usize) -> Self {
        self.restarts = restarts;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::InvalidConfig(msg.to_string()));
        if self.q_arity == Some(0) {
            return bad("q_arity must be positive");
        }
        if self.restarts == 0 {
            return bad("restarts must be positive");
        }
        if self.penalty_schedule.is_empty() {
            return bad("penalty schedule is empty");
        }
        // written so NaN fails too
        let positive = |x: f64| x > 0.0;
        if self.penalty_schedule.iter().any(|&l| !positive(l) || !l.is_finite()) {
            return bad("penalty weights must be positive and finite");
        }
        if self.penalty_schedule.windows(2).any(|w| w[1] <= w[0]) {
            return bad("penalty schedule must be strictly increasing");
        }
        if !positive(self.step_tolerance)
            || !positive(self.feasibility_tolerance)
            || !positive(self.bound_tolerance)
        {
            return bad("tolerances must be positive");
        }
        if self.max_iterations == 0 {
            return bad("max_iterations must be positive");
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StartKind {
    Meet,
    Constant,
    Random,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RestartReport {
    pub index: usize,
    pub start: StartKind,
    /// `I(Q:Y)` of the point this restart contributes, if it has one.
    pub value: Option<f64>,
    /// Largest residual of the final iterate.
    pub final_max_residual: f64,
    /// Final iterate met the feasibility tolerance.
    pub feasible: bool,
    /// Contribution came from an earlier feasible iterate.
    pub from_earlier_iterate: bool,
    pub iterations: usize,
}

#[derive(Clone, Debug)]
pub struct IalphaResult {
    pub value: f64,
    pub witness: Channel,
    /// `I(Q:Y|X_i)` of the witness, per predictor.
    pub residuals: Vec<f64>,
    pub feasible: bool,
    pub q_arity: usize,
    /// Columns of the witness with `p(q) > 1e-9`. Fewer than `q_arity`
    /// means the arity bound was not binding.
    pub used_q_states: usize,
    pub restarts: Vec<RestartReport>,
}

impl IalphaResult {
    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().copied().fold(0.0, f64::max)
    }

    /// Per-restart diagnostics report.
    pub fn diagnostics(&self) -> serde_json::Value {
        serde_json::json!({
            "value": self.value,
            "feasible": self.feasible,
            "residuals": self.residuals,
            "q_arity": self.q_arity,
            "used_q_states": self.used_q_states,
            "witness": self.witness.rows(),
            "restarts": self.restarts,
        })
    }
}

/// Appends `Q ~ Pr(Q|Y)` to the table: `Pr(x, y, q) = Pr(x, y) Pr(q|y)`.
pub fn extend_with_q(table: &JointTable, channel: &Channel) -> Result<JointTable> {
    let ny = table.target_variable().cardinality();
    if channel.num_inputs() != ny {
        return Err(Error::ArityMismatch {
            expected: ny,
            found: channel.num_inputs(),
        });
    }
    let mut name = String::from("Q");
    while table.variables().iter().any(|v| v.name() == name) {
        name.push('\'');
    }
    attach_variable(
        table,
        &table.target_set(),
        channel,
        &name,
        Some(numbered_labels("q", channel.arity())),
        AttachRole::Predictor,
    )
}

/// `I(Q:Y|X_i)` for each predictor of a table extended with `Q` at index `q`.
pub fn constraint_residuals(
    extended: &JointTable,
    q: usize,
    predictors: &[VarSet],
) -> Result<Vec<f64>> {
    let qs = VarSet::single(q);
    let y = extended.target_set();
    predictors
        .iter()
        .map(|p| conditional_mutual_information(extended, &qs, &y, p))
        .collect()
}

/// Channel `Pr(block | y)` of the common random variable; blocks beyond the
/// arity are merged into the last column.
fn meet_channel(table: &JointTable, predictors: &[VarSet], nq: usize) -> Result<Vec<f64>> {
    let m = common_rv::meet(table, predictors)?;
    let ny = table.target_variable().cardinality();
    let joint = m.block_target_mass(table);
    let mut w = vec![0.0; ny * nq];
    for y in 0..ny {
        let py: f64 = (0..m.num_blocks()).map(|b| joint[b * ny + y]).sum();
        if py <= 0.0 {
            w[y * nq] = 1.0;
            continue;
        }
        for b in 0..m.num_blocks() {
            w[y * nq + b.min(nq - 1)] += joint[b * ny + y] / py;
        }
    }
    Ok(w)
}

fn random_channel(ny: usize, nq: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    let mut w = Vec::with_capacity(ny * nq);
    for _ in 0..ny {
        let row: Vec<f64> = (0..nq).map(|_| Exp1.sample(rng)).collect();
        let s: f64 = row.iter().sum();
        w.extend(row.into_iter().map(|v: f64| v / s));
    }
    w
}

struct Candidate {
    value: f64,
    max_residual: f64,
    w: Vec<f64>,
}

struct RestartOutcome {
    report: RestartReport,
    candidate: Option<Candidate>,
}

fn max_of(v: &[f64]) -> f64 {
    v.iter().copied().fold(0.0, f64::max)
}

fn run_restart(
    obj: &ChannelObjective,
    mut w: Vec<f64>,
    nq: usize,
    config: &SolverConfig,
    index: usize,
    start: StartKind,
) -> RestartOutcome {
    let ny = obj.num_targets();
    let tol = config.feasibility_tolerance;
    let mut best: Option<Candidate> = None;
    let consider = |w: &[f64], best: &mut Option<Candidate>| {
        let r = max_of(&obj.residuals(w));
        if r <= tol {
            let value = obj.information(w);
            if best.as_ref().is_none_or(|b| value > b.value) {
                *best = Some(Candidate {
                    value,
                    max_residual: r,
                    w: w.to_vec(),
                });
            }
        }
    };
    consider(&w, &mut best);

    let mut grad = vec![0.0; w.len()];
    let mut cand = vec![0.0; w.len()];
    let mut iterations = 0;
    for &lambda in &config.penalty_schedule {
        for _ in 0..config.max_iterations {
            obj.penalized_gradient(&w, lambda, &mut grad);
            let f0 = obj.penalized(&w, lambda);
            let mut t = 1.0;
            let mut accepted = false;
            while t >= MIN_STEP {
                for k in 0..w.len() {
                    cand[k] = w[k] + t * grad[k];
                }
                for y in 0..ny {
                    project_onto_simplex(&mut cand[y * nq..(y + 1) * nq]);
                }
                let ascent: f64 = (0..w.len()).map(|k| grad[k] * (cand[k] - w[k])).sum();
                if obj.penalized(&cand, lambda) >= f0 + ARMIJO * ascent {
                    accepted = true;
                    break;
                }
                t *= 0.5;
            }
            if !accepted {
                break;
            }
            let step = (0..w.len())
                .map(|k| (cand[k] - w[k]).abs())
                .fold(0.0, f64::max);
            std::mem::swap(&mut w, &mut cand);
            iterations += 1;
            consider(&w, &mut best);
            if step < config.step_tolerance {
                break;
            }
        }
    }

    let final_residual = max_of(&obj.residuals(&w));
    let feasible = final_residual <= tol;
    let (candidate, from_earlier) = if feasible {
        let c = Candidate {
            value: obj.information(&w),
            max_residual: final_residual,
            w,
        };
        (Some(c), false)
    } else {
        (best, true)
    };
    RestartOutcome {
        report: RestartReport {
            index,
            start,
            value: candidate.as_ref().map(|c| c.value),
            final_max_residual: final_residual,
            feasible,
            from_earlier_iterate: from_earlier && candidate.is_some(),
            iterations,
        },
        candidate,
    }
}

/// `I_α(X_1, …, X_n : Y)` by penalty continuation over `Pr(Q|Y)`.
pub fn ialpha(
    table: &JointTable,
    predictors: &[VarSet],
    config: &SolverConfig,
) -> Result<IalphaResult> {
    config.validate()?;
    let obj = ChannelObjective::new(table, predictors)?;
    let ny = obj.num_targets();
    let nq = config.q_arity.unwrap_or(ny + 1);

    let mut starts = vec![
        (StartKind::Meet, meet_channel(table, predictors, nq)?),
        (StartKind::Constant, Channel::constant(ny, nq).rows().concat()),
    ];
    for index in 2..config.restarts + 2 {
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
        rng.set_stream(index as u64);
        starts.push((StartKind::Random, random_channel(ny, nq, &mut rng)));
    }

    let outcomes: Vec<RestartOutcome> = starts
        .into_par_iter()
        .enumerate()
        .map(|(index, (kind, w))| run_restart(&obj, w, nq, config, index, kind))
        .collect();

    // highest value, then lowest residual, then lowest index
    let mut best: Option<&Candidate> = None;
    for c in outcomes.iter().filter_map(|o| o.candidate.as_ref()) {
        let better = match best {
            None => true,
            Some(b) => {
                c.value > b.value || (c.value == b.value && c.max_residual < b.max_residual)
            }
        };
        if better {
            best = Some(c);
        }
    }
    let best = best.ok_or(Error::Infeasible)?;

    let residuals: Vec<f64> = obj.residuals(&best.w).iter().map(|r| r.max(0.0)).collect();
    let value = obj.information(&best.w).max(0.0);
    let pq: Vec<f64> = (0..nq)
        .map(|q| (0..ny).map(|y| obj.target_marginal()[y] * best.w[y * nq + q]).sum())
        .collect();
    let witness = Channel::from_rows_unchecked(best.w.chunks(nq).map(<[f64]>::to_vec).collect());

    let bound = measures::imin(table, predictors)?;
    if value > bound + config.bound_tolerance {
        return Err(Error::BoundViolation { value, bound });
    }

    Ok(IalphaResult {
        value,
        feasible: max_of(&residuals) <= config.feasibility_tolerance,
        witness,
        residuals,
        q_arity: nq,
        used_q_states: pq.iter().filter(|&&p| p > 1e-9).count(),
        restarts: outcomes.into_iter().map(|o| o.report).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{self, CaseName};

    #[test]
    fn config_validation() {
        assert!(SolverConfig::default().validate().is_ok());
        let mut c = SolverConfig::default();
        c.penalty_schedule = vec![10.0, 10.0];
        assert!(c.validate().is_err());
        let mut c = SolverConfig::default();
        c.feasibility_tolerance = 0.0;
        assert!(c.validate().is_err());
        assert!(SolverConfig::default().with_restarts(0).validate().is_err());
    }

    #[test]
    fn extended_table_keeps_q_markov() {
        let t = corpus::build(CaseName::And).table;
        let ch = Channel::new(vec![vec![0.3, 0.7], vec![0.9, 0.1]]).unwrap();
        let ext = extend_with_q(&t, &ch).unwrap();
        for x in 0..2 {
            let i = conditional_mutual_information(
                &ext,
                &VarSet::single(3),
                &VarSet::single(x),
                &VarSet::single(2),
            )
            .unwrap();
            assert!(i.abs() < 1e-12);
        }
        assert!(matches!(
            extend_with_q(&t, &Channel::identity(3)),
            Err(Error::ArityMismatch { .. })
        ));
    }

    #[test]
    fn residuals_agree_with_table_route() {
        let t = corpus::build(CaseName::Subtle).table;
        let preds = t.default_predictors();
        let ch = Channel::new(vec![
            vec![0.2, 0.5, 0.3],
            vec![0.6, 0.1, 0.3],
            vec![0.25, 0.25, 0.5],
        ])
        .unwrap();
        let ext = extend_with_q(&t, &ch).unwrap();
        let table_route = constraint_residuals(&ext, 3, &preds).unwrap();
        let obj = ChannelObjective::new(&t, &preds).unwrap();
        let fast = obj.residuals(&ch.rows().concat());
        for (a, b) in table_route.iter().zip(&fast) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn meet_channel_on_rdnxor_is_feasible() {
        let t = corpus::build(CaseName::RdnXor).table;
        let preds = t.default_predictors();
        let w = meet_channel(&t, &preds, 2).unwrap();
        let obj = ChannelObjective::new(&t, &preds).unwrap();
        assert!((obj.information(&w) - 1.0).abs() < 1e-12);
        assert!(obj.residuals(&w).iter().all(|r| r.abs() < 1e-12));
        let ext = extend_with_q(&t, &Channel::new(w.chunks(2).map(<[f64]>::to_vec).collect()).unwrap())
            .unwrap();
        assert!(constraint_residuals(&ext, 3, &preds).unwrap().iter().all(|r| *r < 1e-12));
    }

    #[test]
    fn same_seed_same_answer() {
        let t = corpus::build(CaseName::And).table;
        let preds = t.default_predictors();
        let cfg = SolverConfig::default().with_restarts(6).with_seed(11);
        let a = ialpha(&t, &preds, &cfg).unwrap();
        let b = ialpha(&t, &preds, &cfg).unwrap();
        assert_eq!(a.value.to_bits(), b.value.to_bits());
        assert_eq!(a.witness, b.witness);
        assert_eq!(a.restarts, b.restarts);
    }
}
