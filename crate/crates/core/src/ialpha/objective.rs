//! `I(Q:Y)` and the constraint residuals `I(Q:Y|X_i)` as smooth functions of
//! a channel `W[y][q] = Pr(q|y)`, with their analytic gradients.
//!
//! Because `Q` is generated from `Y` alone, `H(Q|X_i,Y) = H(Q|Y)` and
//!
//! ```text
//! I(Q:Y)     = H(Q)     − H(Q|Y)
//! I(Q:Y|X_i) = H(Q|X_i) − H(Q|Y)
//! ```
//!
//! Channels are flat `|Y| × |Q|` row-major slices. Values are defined for any
//! non-negative matrix (rows need not sum to one), which is what the finite
//! difference checks perturb.

use crate::error::{Error, Result};
use crate::prob::{JointTable, VarSet};

/// Floor applied to probabilities inside gradient logarithms.
pub const LOG_FLOOR: f64 = 1e-12;

#[inline]
fn plogp(p: f64) -> f64 {
    if p > 0.0 {
        p * p.log2()
    } else {
        0.0
    }
}

#[inline]
fn log2_floor(p: f64) -> f64 {
    p.max(LOG_FLOOR).log2()
}

#[derive(Clone, Debug)]
struct PredictorBlock {
    nx: usize,
    /// `Pr(x, y)`, `nx × ny`.
    pxy: Vec<f64>,
    px: Vec<f64>,
}

/// Precomputed marginals for one `(table, predictors)` instance.
#[derive(Clone, Debug)]
pub struct ChannelObjective {
    ny: usize,
    py: Vec<f64>,
    predictors: Vec<PredictorBlock>,
}

impl ChannelObjective {
    pub fn new(table: &JointTable, predictors: &[VarSet]) -> Result<Self> {
        if predictors.is_empty() {
            return Err(Error::NoPredictors);
        }
        let target = table.target_set();
        let ny = table.target_variable().cardinality();
        let mut py = vec![0.0; ny];
        for (idx, &p) in table.mass().iter().enumerate() {
            py[table.project(idx, &target)] += p;
        }
        let blocks = predictors
            .iter()
            .map(|pred| {
                if pred.is_empty() {
                    return Err(Error::EmptyVarSet);
                }
                table.check_varset(pred)?;
                if pred.contains(table.target()) {
                    return Err(Error::OverlappingVarSets);
                }
                let nx = table.joint_cardinality(pred);
                let mut pxy = vec![0.0; nx * ny];
                for (idx, &p) in table.mass().iter().enumerate() {
                    if p != 0.0 {
                        pxy[table.project(idx, pred) * ny + table.project(idx, &target)] += p;
                    }
                }
                let px = (0..nx).map(|x| pxy[x * ny..(x + 1) * ny].iter().sum()).collect();
                Ok(PredictorBlock { nx, pxy, px })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(ChannelObjective {
            ny,
            py,
            predictors: blocks,
        })
    }

    pub fn num_targets(&self) -> usize {
        self.ny
    }

    pub fn num_predictors(&self) -> usize {
        self.predictors.len()
    }

    pub fn target_marginal(&self) -> &[f64] {
        &self.py
    }

    fn arity(&self, w: &[f64]) -> usize {
        debug_assert_eq!(w.len() % self.ny, 0);
        w.len() / self.ny
    }

    fn q_marginal(&self, w: &[f64], nq: usize) -> Vec<f64> {
        let mut pq = vec![0.0; nq];
        for y in 0..self.ny {
            let row = &w[y * nq..(y + 1) * nq];
            for q in 0..nq {
                pq[q] += self.py[y] * row[q];
            }
        }
        pq
    }

    /// `Σ_y p(y) Σ_q W log₂ W`, i.e. `−H(Q|Y)`.
    fn neg_conditional_entropy(&self, w: &[f64], nq: usize) -> f64 {
        (0..self.ny)
            .map(|y| self.py[y] * w[y * nq..(y + 1) * nq].iter().map(|&v| plogp(v)).sum::<f64>())
            .sum()
    }

    /// `H(Q|X_i)` with `p(x,q) = Σ_y p(x,y) W[y][q]`.
    fn q_given_x_entropy(&self, block: &PredictorBlock, w: &[f64], nq: usize) -> f64 {
        let mut h = 0.0;
        let mut pxq = vec![0.0; nq];
        for x in 0..block.nx {
            if block.px[x] <= 0.0 {
                continue;
            }
            pxq.iter_mut().for_each(|v| *v = 0.0);
            for y in 0..self.ny {
                let m = block.pxy[x * self.ny + y];
                if m != 0.0 {
                    for q in 0..nq {
                        pxq[q] += m * w[y * nq + q];
                    }
                }
            }
            // −Σ_q p(x,q) log(p(x,q)/p(x))
            let total: f64 = pxq.iter().sum();
            h -= pxq.iter().map(|&v| plogp(v)).sum::<f64>() - total * block.px[x].log2();
        }
        h
    }

    /// `I(Q:Y)` in bits.
    pub fn information(&self, w: &[f64]) -> f64 {
        let nq = self.arity(w);
        let pq = self.q_marginal(w, nq);
        let hq = -pq.iter().map(|&v| plogp(v)).sum::<f64>();
        hq + self.neg_conditional_entropy(w, nq)
    }

    /// `I(Q:Y|X_i)` for every predictor, in bits.
    pub fn residuals(&self, w: &[f64]) -> Vec<f64> {
        let nq = self.arity(w);
        let neg_hqy = self.neg_conditional_entropy(w, nq);
        self.predictors
            .iter()
            .map(|b| self.q_given_x_entropy(b, w, nq) + neg_hqy)
            .collect()
    }

    /// `I(Q:Y) − λ Σ_i I(Q:Y|X_i)`.
    pub fn penalized(&self, w: &[f64], lambda: f64) -> f64 {
        let nq = self.arity(w);
        let pq = self.q_marginal(w, nq);
        let hq = -pq.iter().map(|&v| plogp(v)).sum::<f64>();
        let neg_hqy = self.neg_conditional_entropy(w, nq);
        let penalty: f64 = self
            .predictors
            .iter()
            .map(|b| self.q_given_x_entropy(b, w, nq) + neg_hqy)
            .sum();
        hq + neg_hqy - lambda * penalty
    }

    /// Gradient of `I(Q:Y)`: `p(y) (log₂ W[y][q] − log₂ p(q))`.
    pub fn information_gradient(&self, w: &[f64], out: &mut [f64]) {
        let nq = self.arity(w);
        let pq = self.q_marginal(w, nq);
        for y in 0..self.ny {
            for q in 0..nq {
                let k = y * nq + q;
                out[k] = self.py[y] * (log2_floor(w[k]) - log2_floor(pq[q]));
            }
        }
    }

    /// Gradient of `I(Q:Y|X_i)`:
    /// `p(y) log₂ W[y][q] − Σ_x p(x,y) log₂ p(q|x)`.
    pub fn residual_gradient(&self, i: usize, w: &[f64], out: &mut [f64]) {
        let nq = self.arity(w);
        out.iter_mut().for_each(|v| *v = 0.0);
        self.accumulate_residual_gradient(&self.predictors[i], w, nq, 1.0, out);
        for y in 0..self.ny {
            for q in 0..nq {
                let k = y * nq + q;
                out[k] += self.py[y] * log2_floor(w[k]);
            }
        }
    }

    /// `out += −scale Σ_x p(x,y) log₂ p(q|x)` with `p(q|x) = p(x,q)/p(x)`.
    fn accumulate_residual_gradient(
        &self,
        block: &PredictorBlock,
        w: &[f64],
        nq: usize,
        scale: f64,
        out: &mut [f64],
    ) {
        let mut pxq = vec![0.0; nq];
        let mut log_cond = vec![0.0; nq];
        for x in 0..block.nx {
            if block.px[x] <= 0.0 {
                continue;
            }
            pxq.iter_mut().for_each(|v| *v = 0.0);
            for y in 0..self.ny {
                let m = block.pxy[x * self.ny + y];
                if m != 0.0 {
                    for q in 0..nq {
                        pxq[q] += m * w[y * nq + q];
                    }
                }
            }
            let lt = block.px[x].log2();
            for q in 0..nq {
                log_cond[q] = log2_floor(pxq[q]) - lt;
            }
            for y in 0..self.ny {
                let m = block.pxy[x * self.ny + y];
                if m != 0.0 {
                    for q in 0..nq {
                        out[y * nq + q] -= scale * m * log_cond[q];
                    }
                }
            }
        }
    }

    /// Gradient of [`penalized`](Self::penalized).
    pub fn penalized_gradient(&self, w: &[f64], lambda: f64, out: &mut [f64]) {
        let nq = self.arity(w);
        self.information_gradient(w, out);
        let n = self.predictors.len() as f64;
        for y in 0..self.ny {
            for q in 0..nq {
                let k = y * nq + q;
                out[k] -= lambda * n * self.py[y] * log2_floor(w[k]);
            }
        }
        for b in &self.predictors {
            self.accumulate_residual_gradient(b, w, nq, -lambda, out);
        }
    }
}
