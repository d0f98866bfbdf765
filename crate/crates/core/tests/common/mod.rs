#![allow(dead_code)]

use pidkit::axioms::random_joint;
use pidkit::ialpha::ChannelObjective;
use pidkit::prob::{entropy_of_masses, numbered_labels};
use pidkit::{JointTable, VarSet, Variable};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Table over `X1..Xn, Y` with states `0..k-1` and the given dense mass.
pub fn table_from(shape: &[usize], mass: Vec<f64>) -> JointTable {
    let n = shape.len() - 1;
    let mut vars: Vec<Variable> = shape[..n]
        .iter()
        .enumerate()
        .map(|(i, &k)| Variable::new(format!("X{}", i + 1), numbered_labels("", k)))
        .collect();
    vars.push(Variable::new("Y", numbered_labels("", shape[n])));
    JointTable::from_dense(vars, n, mass).unwrap()
}

fn normalized(raw: Vec<f64>) -> Vec<f64> {
    let s: f64 = raw.iter().sum();
    raw.into_iter().map(|v| v / s).collect()
}

/// Random tables over small shapes. With `sparse`, roughly a third of the
/// joint states get zero mass.
pub fn arb_table(max_predictors: usize, max_card: usize, sparse: bool) -> impl Strategy<Value = JointTable> {
    (1..=max_predictors)
        .prop_flat_map(move |n| prop::collection::vec(1..=max_card, n + 1))
        .prop_flat_map(move |shape| {
            let size: usize = shape.iter().product();
            let cell = if sparse {
                prop_oneof![1 => Just(0.0), 2 => 0.05f64..1.0].boxed()
            } else {
                (0.05f64..1.0).boxed()
            };
            (Just(shape), prop::collection::vec(cell, size))
        })
        .prop_filter("some mass", |(_, m)| m.iter().any(|&v| v > 0.0))
        .prop_map(|(shape, m)| table_from(&shape, normalized(m)))
}

/// Exactly two predictors.
pub fn arb_pair_table(max_card: usize, sparse: bool) -> impl Strategy<Value = JointTable> {
    prop::collection::vec(2..=max_card, 3)
        .prop_flat_map(move |shape| {
            let size: usize = shape.iter().product();
            let cell = if sparse {
                prop_oneof![1 => Just(0.0), 2 => 0.05f64..1.0].boxed()
            } else {
                (0.05f64..1.0).boxed()
            };
            (Just(shape), prop::collection::vec(cell, size))
        })
        .prop_filter("some mass", |(_, m)| m.iter().any(|&v| v > 0.0))
        .prop_map(|(shape, m)| table_from(&shape, normalized(m)))
}

/// Independent reference for `I_α` when `Q` is drawn from `Pr(Q|Y)`.
///
/// Screening `Q` off from `Y` by `X_i` forces `Pr(q|y) = Pr(q|y')` whenever
/// `y` and `y'` share a positive-probability state of `X_i`. The channel is
/// therefore constant on the classes of the transitive closure of that
/// relation, and the best choice is the class label itself, which is a
/// function of every `X_i`. The value is the entropy of the class.
pub fn ialpha_closed_form(table: &JointTable, predictors: &[VarSet]) -> f64 {
    let ny = table.target_variable().cardinality();
    let y = table.target_set();
    let mut class: Vec<usize> = (0..ny).collect();
    fn find(c: &mut [usize], mut a: usize) -> usize {
        while c[a] != a {
            a = c[a];
        }
        a
    }
    for p in predictors {
        let nx = table.joint_cardinality(p);
        let mut first_y: Vec<Option<usize>> = vec![None; nx];
        for (idx, &m) in table.mass().iter().enumerate() {
            if m <= 0.0 {
                continue;
            }
            let x = table.project(idx, p);
            let yy = table.project(idx, &y);
            match first_y[x] {
                None => first_y[x] = Some(yy),
                Some(other) => {
                    let (a, b) = (find(&mut class, other), find(&mut class, yy));
                    class[a] = b;
                }
            }
        }
    }
    let mut mass = vec![0.0; ny];
    for (idx, &m) in table.mass().iter().enumerate() {
        let yy = table.project(idx, &y);
        let root = find(&mut class, yy);
        mass[root] += m;
    }
    entropy_of_masses(&mass)
}

/// Interior channel: a random row mixed half-and-half with uniform.
pub fn interior_channel(ny: usize, nq: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    let mut w = Vec::with_capacity(ny * nq);
    for _ in 0..ny {
        let raw: Vec<f64> = (0..nq).map(|_| rng.random::<f64>() + 1e-3).collect();
        let s: f64 = raw.iter().sum();
        w.extend(raw.iter().map(|v| 0.5 * v / s + 0.5 / nq as f64));
    }
    w
}

fn central_difference(f: impl Fn(&[f64]) -> f64, w: &[f64], h: f64) -> Vec<f64> {
    let mut g = vec![0.0; w.len()];
    let mut p = w.to_vec();
    for k in 0..w.len() {
        p[k] = w[k] + h;
        let up = f(&p);
        p[k] = w[k] - h;
        let down = f(&p);
        p[k] = w[k];
        g[k] = (up - down) / (2.0 * h);
    }
    g
}

fn relative_error(a: &[f64], b: &[f64]) -> f64 {
    let diff: f64 = a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt();
    let scale = a.iter().map(|x| x * x).sum::<f64>().sqrt().max(1e-12);
    diff / scale
}

/// Worst relative error over `channels` random interior channels, for the
/// information term, every residual and the penalized objective.
pub fn gradient_check_worst(channels: usize, seed: u64) -> f64 {
    let shapes = [[2, 2, 2], [2, 2, 3], [3, 2, 2], [3, 3, 3]];
    let mut worst: f64 = 0.0;
    for c in 0..channels {
        let shape = shapes[c % shapes.len()];
        let table = random_joint(&shape, seed + c as u64).unwrap();
        let preds = table.default_predictors();
        let obj = ChannelObjective::new(&table, &preds).unwrap();
        let ny = obj.num_targets();
        let nq = ny + 1;
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xfeed);
        rng.set_stream(c as u64);
        let w = interior_channel(ny, nq, &mut rng);
        let mut g = vec![0.0; w.len()];

        obj.information_gradient(&w, &mut g);
        let fd = central_difference(|v| obj.information(v), &w, 1e-6);
        worst = worst.max(relative_error(&g, &fd));

        for i in 0..obj.num_predictors() {
            obj.residual_gradient(i, &w, &mut g);
            let fd = central_difference(|v| obj.residuals(v)[i], &w, 1e-6);
            worst = worst.max(relative_error(&g, &fd));
        }

        obj.penalized_gradient(&w, 100.0, &mut g);
        let fd = central_difference(|v| obj.penalized(v, 100.0), &w, 1e-6);
        worst = worst.max(relative_error(&g, &fd));
    }
    worst
}

