//! The common random variable of a set of predictors (their meet) and the
//! `I_∧` measure built on it.
//!
//! The meet is read off the support graph: nodes are the positive-probability
//! states of every predictor, and two states are joined whenever they occur
//! together with positive probability. Each connected component is one
//! state of the common variable, which is therefore a deterministic function
//! of every predictor, and any other such function is a coarsening of it.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::prob::{entropy_of_masses, JointTable, VarSet};

/// Joint masses at or below this are treated as structural zeros.
pub const DEFAULT_SUPPORT_THRESHOLD: f64 = 1e-12;

#[derive(Clone, Debug)]
struct UnionFind {
    parent: Vec<usize>,
    rank: Vec<u8>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
            rank: vec![0; n],
        }
    }

    fn find(&mut self, mut node: usize) -> usize {
        let mut root = node;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        while self.parent[node] != root {
            let next = self.parent[node];
            self.parent[node] = root;
            node = next;
        }
        root
    }

    fn union(&mut self, a: usize, b: usize) {
        let (mut a, mut b) = (self.find(a), self.find(b));
        if a == b {
            return;
        }
        if self.rank[a] < self.rank[b] {
            std::mem::swap(&mut a, &mut b);
        }
        self.parent[b] = a;
        if self.rank[a] == self.rank[b] {
            self.rank[a] += 1;
        }
    }
}

/// Partition of one predictor's states into blocks of the common variable.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoarseGraining {
    variable: VarSet,
    block_of_state: Vec<Option<usize>>,
}

impl CoarseGraining {
    pub fn variable(&self) -> &VarSet {
        &self.variable
    }

    /// Block of a joint state of the predictor; `None` for states outside
    /// the support.
    pub fn block(&self, state: usize) -> Option<usize> {
        self.block_of_state[state]
    }

    pub fn block_of_state(&self) -> &[Option<usize>] {
        &self.block_of_state
    }
}

/// The meet `X_1 ∧ ⋯ ∧ X_n`, as a coarse-graining of each predictor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Meet {
    parts: Vec<CoarseGraining>,
    num_blocks: usize,
}

impl Meet {
    pub fn parts(&self) -> &[CoarseGraining] {
        &self.parts
    }

    pub fn num_blocks(&self) -> usize {
        self.num_blocks
    }

    /// Block of the common variable at a full joint state, read through the
    /// first predictor. Off-support states of that predictor map to `None`.
    pub fn block_at(&self, table: &JointTable, idx: usize) -> Option<usize> {
        let first = &self.parts[0];
        first.block(table.project(idx, &first.variable))
    }

    /// Joint mass of (block, target state) as a dense `blocks × |Y|` matrix.
    /// Mass on off-support predictor states (at most the threshold each) is
    /// dropped.
    pub fn block_target_mass(&self, table: &JointTable) -> Vec<f64> {
        let ny = table.target_variable().cardinality();
        let target = table.target_set();
        let mut out = vec![0.0; self.num_blocks * ny];
        for (idx, &p) in table.mass().iter().enumerate() {
            if p == 0.0 {
                continue;
            }
            if let Some(b) = self.block_at(table, idx) {
                out[b * ny + table.project(idx, &target)] += p;
            }
        }
        out
    }
}

pub fn meet(table: &JointTable, predictors: &[VarSet]) -> Result<Meet> {
    meet_with_threshold(table, predictors, DEFAULT_SUPPORT_THRESHOLD)
}

/// Meet of the predictors, treating joint masses `≤ threshold` as zero.
pub fn meet_with_threshold(
    table: &JointTable,
    predictors: &[VarSet],
    threshold: f64,
) -> Result<Meet> {
    if predictors.is_empty() {
        return Err(Error::NoPredictors);
    }
    for p in predictors {
        if p.is_empty() {
            return Err(Error::EmptyVarSet);
        }
        table.check_varset(p)?;
    }
    let offsets: Vec<usize> = predictors
        .iter()
        .scan(0, |acc, p| {
            let start = *acc;
            *acc += table.joint_cardinality(p);
            Some(start)
        })
        .collect();
    let total = offsets.last().unwrap() + table.joint_cardinality(predictors.last().unwrap());

    // Mass of each joint predictor state, with one full-table index kept as
    // a representative for projecting onto the individual predictors.
    let all = predictors
        .iter()
        .fold(VarSet::empty(), |acc, p| acc.union(p));
    let mut joint: HashMap<usize, (f64, usize)> = HashMap::new();
    let mut node_mass = vec![0.0; total];
    for (idx, &p) in table.mass().iter().enumerate() {
        if p == 0.0 {
            continue;
        }
        joint.entry(table.project(idx, &all)).or_insert((0.0, idx)).0 += p;
        for (pred, &off) in predictors.iter().zip(&offsets) {
            node_mass[off + table.project(idx, pred)] += p;
        }
    }

    let mut uf = UnionFind::new(total);
    let mut keys: Vec<&usize> = joint.keys().collect();
    keys.sort_unstable();
    for key in keys {
        let (p, rep) = joint[key];
        if p <= threshold {
            continue;
        }
        let first = offsets[0] + table.project(rep, &predictors[0]);
        for (pred, &off) in predictors.iter().zip(&offsets).skip(1) {
            uf.union(first, off + table.project(rep, pred));
        }
    }

    // Blocks are numbered in scan order: predictor by predictor, states in
    // canonical (label) order.
    let mut block_of_root: HashMap<usize, usize> = HashMap::new();
    let mut parts = Vec::with_capacity(predictors.len());
    for (pred, &off) in predictors.iter().zip(&offsets) {
        let n = table.joint_cardinality(pred);
        let block_of_state = (0..n)
            .map(|s| {
                if node_mass[off + s] <= threshold {
                    return None;
                }
                let root = uf.find(off + s);
                let next = block_of_root.len();
                Some(*block_of_root.entry(root).or_insert(next))
            })
            .collect();
        parts.push(CoarseGraining {
            variable: pred.clone(),
            block_of_state,
        });
    }
    Ok(Meet {
        num_blocks: block_of_root.len(),
        parts,
    })
}

/// `I(Q:Y)` for a dense `|Q|×|Y|` joint matrix.
pub(crate) fn mutual_information_of_matrix(pqy: &[f64], nq: usize, ny: usize) -> f64 {
    let mut pq = vec![0.0; nq];
    let mut py = vec![0.0; ny];
    for q in 0..nq {
        for y in 0..ny {
            pq[q] += pqy[q * ny + y];
            py[y] += pqy[q * ny + y];
        }
    }
    (entropy_of_masses(&pq) + entropy_of_masses(&py) - entropy_of_masses(pqy)).max(0.0)
}

/// `I_∧(X_1, …, X_n : Y) = I(X_1 ∧ ⋯ ∧ X_n : Y)`.
pub fn iwedge(table: &JointTable, predictors: &[VarSet]) -> Result<f64> {
    iwedge_with_threshold(table, predictors, DEFAULT_SUPPORT_THRESHOLD)
}

pub fn iwedge_with_threshold(
    table: &JointTable,
    predictors: &[VarSet],
    threshold: f64,
) -> Result<f64> {
    let m = meet_with_threshold(table, predictors, threshold)?;
    let ny = table.target_variable().cardinality();
    Ok(mutual_information_of_matrix(
        &m.block_target_mass(table),
        m.num_blocks(),
        ny,
    ))
}
