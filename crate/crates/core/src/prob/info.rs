//! Shannon quantities over a [`JointTable`], all in bits.

use crate::error::{Error, Result};

use super::table::{JointTable, VarSet};

/// `-Σ p log₂ p` with `0 log 0 = 0`.
pub fn entropy_of_masses(masses: &[f64]) -> f64 {
    let h: f64 = masses
        .iter()
        .filter(|&&p| p > 0.0)
        .map(|&p| -p * p.log2())
        .sum();
    h.max(0.0)
}

/// Entropy of a possibly empty set (empty set has entropy 0).
pub(crate) fn joint_entropy(table: &JointTable, vars: &VarSet) -> f64 {
    if vars.is_empty() {
        return 0.0;
    }
    entropy_of_masses(&table.marginal_mass(vars))
}

pub fn entropy(table: &JointTable, vars: &VarSet) -> Result<f64> {
    if vars.is_empty() {
        return Err(Error::EmptyVarSet);
    }
    table.check_varset(vars)?;
    Ok(joint_entropy(table, vars))
}

/// `H(A|B) = H(A∨B) − H(B)`.
pub fn conditional_entropy(table: &JointTable, a: &VarSet, given: &VarSet) -> Result<f64> {
    if a.is_empty() {
        return Err(Error::EmptyVarSet);
    }
    table.check_varset(a)?;
    table.check_varset(given)?;
    let h = joint_entropy(table, &a.union(given)) - joint_entropy(table, given);
    Ok(h.max(0.0))
}

pub fn mutual_information(table: &JointTable, a: &VarSet, b: &VarSet) -> Result<f64> {
    conditional_mutual_information(table, a, b, &VarSet::empty())
}

/// `I(A:B|C) = H(A∨C) + H(B∨C) − H(A∨B∨C) − H(C)`; an empty `c` gives plain
/// mutual information.
pub fn conditional_mutual_information(
    table: &JointTable,
    a: &VarSet,
    b: &VarSet,
    c: &VarSet,
) -> Result<f64> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptyVarSet);
    }
    for s in [a, b, c] {
        table.check_varset(s)?;
    }
    if !a.is_disjoint(b) || !a.is_disjoint(c) || !b.is_disjoint(c) {
        return Err(Error::OverlappingVarSets);
    }
    let ac = a.union(c);
    let bc = b.union(c);
    let abc = ac.union(b);
    let i = joint_entropy(table, &ac) + joint_entropy(table, &bc)
        - joint_entropy(table, &abc)
        - joint_entropy(table, c);
    Ok(i.max(0.0))
}

/// Specific information `I(X : Y=y) = D_KL(P(X|y) ‖ P(X))` of a predictor set
/// about one target state, indexed by its position in the target alphabet.
pub fn specific_information(table: &JointTable, predictor: &VarSet, y: usize) -> Result<f64> {
    if predictor.is_empty() {
        return Err(Error::EmptyVarSet);
    }
    table.check_varset(predictor)?;
    if predictor.contains(table.target()) {
        return Err(Error::OverlappingVarSets);
    }
    let target = table.target_set();
    let ny = table.target_variable().cardinality();
    if y >= ny {
        return Err(Error::InvalidVariableIndex(y));
    }
    let nx = table.joint_cardinality(predictor);
    let mut pxy = vec![0.0; nx * ny];
    for (idx, &p) in table.mass().iter().enumerate() {
        if p != 0.0 {
            pxy[table.project(idx, predictor) * ny + table.project(idx, &target)] += p;
        }
    }
    let values = specific_informations(&pxy, nx, ny);
    match values[y] {
        Some(v) => Ok(v),
        None => Err(Error::ZeroProbabilityTargetState(
            table.target_variable().states()[y].clone(),
        )),
    }
}

/// Specific information for every target state from a dense `|X|×|Y|`
/// joint matrix. Zero-probability target states yield `None`.
pub(crate) fn specific_informations(pxy: &[f64], nx: usize, ny: usize) -> Vec<Option<f64>> {
    let mut px = vec![0.0; nx];
    let mut py = vec![0.0; ny];
    for x in 0..nx {
        for y in 0..ny {
            px[x] += pxy[x * ny + y];
            py[y] += pxy[x * ny + y];
        }
    }
    (0..ny)
        .map(|y| {
            if py[y] <= 0.0 {
                return None;
            }
            let kl: f64 = (0..nx)
                .filter_map(|x| {
                    let joint = pxy[x * ny + y];
                    (joint > 0.0).then(|| {
                        let cond = joint / py[y];
                        cond * (cond / px[x]).log2()
                    })
                })
                .sum();
            Some(kl.max(0.0))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::prob::Variable;

    fn and_table() -> JointTable {
        let vars = vec![
            Variable::new("X1", ["0", "1"]),
            Variable::new("X2", ["0", "1"]),
            Variable::new("Y", ["0", "1"]),
        ];
        JointTable::from_entries(
            vars,
            2,
            [
                (["0", "0", "0"], 0.25),
                (["0", "1", "0"], 0.25),
                (["1", "0", "0"], 0.25),
                (["1", "1", "1"], 0.25),
            ],
        )
        .unwrap()
    }

    #[test]
    fn point_mass_has_zero_entropy() {
        let vars = vec![Variable::new("X", ["a", "b"]), Variable::new("Y", ["0"])];
        let t = JointTable::from_dense(vars, 1, vec![1.0, 0.0]).unwrap();
        assert_eq!(entropy(&t, &VarSet::new([0, 1])).unwrap(), 0.0);
    }

    #[test]
    fn independent_bits_share_nothing() {
        let vars = vec![Variable::new("X", ["0", "1"]), Variable::new("Y", ["0", "1"])];
        let t = JointTable::from_dense(vars, 1, vec![0.25; 4]).unwrap();
        let i = mutual_information(&t, &VarSet::single(0), &VarSet::single(1)).unwrap();
        assert!(i.abs() < 1e-15);
    }

    #[test]
    fn and_quantities() {
        let t = and_table();
        let i = mutual_information(&t, &VarSet::single(0), &VarSet::single(2)).unwrap();
        assert!((i - 0.311278124459133).abs() < 1e-12);
        let ci = conditional_mutual_information(
            &t,
            &VarSet::single(0),
            &VarSet::single(1),
            &VarSet::single(2),
        )
        .unwrap();
        assert!((ci - 0.188721875540867).abs() < 1e-12);
        // y=1 forces X1=1, so the divergence is log2(1/P(X1=1)) = 1
        let s = specific_information(&t, &VarSet::single(0), 1).unwrap();
        assert!((s - 1.0).abs() < 1e-15);
    }

    #[test]
    fn overlapping_sets_are_rejected() {
        let t = and_table();
        let a = VarSet::new([0, 1]);
        assert!(matches!(
            mutual_information(&t, &a, &VarSet::single(1)),
            Err(Error::OverlappingVarSets)
        ));
        assert!(matches!(
            mutual_information(&t, &VarSet::empty(), &a),
            Err(Error::EmptyVarSet)
        ));
    }

    #[test]
    fn zero_probability_target_state() {
        let vars = vec![Variable::new("X", ["0", "1"]), Variable::new("Y", ["0", "1"])];
        let t = JointTable::from_dense(vars, 1, vec![0.5, 0.0, 0.5, 0.0]).unwrap();
        assert!(matches!(
            specific_information(&t, &VarSet::single(0), 1),
            Err(Error::ZeroProbabilityTargetState(_))
        ));
    }
}
