/// Euclidean projection of `v` onto the probability simplex, in place
/// (sort-based, O(n log n)).
pub fn project_onto_simplex(v: &mut [f64]) {
    let n = v.len();
    if n == 0 {
        return;
    }
    let mut u: Vec<f64> = v.to_vec();
    u.sort_unstable_by(|a, b| b.total_cmp(a));
    let mut cumulative = 0.0;
    let mut theta = 0.0;
    for (i, &ui) in u.iter().enumerate() {
        cumulative += ui;
        let t = (cumulative - 1.0) / (i + 1) as f64;
        if ui - t > 0.0 {
            theta = t;
        }
    }
    for x in v.iter_mut() {
        *x = (*x - theta).max(0.0);
    }
    // restore exact normalization lost to rounding
    let sum: f64 = v.iter().sum();
    if sum > 0.0 && sum != 1.0 {
        v.iter_mut().for_each(|x| *x /= sum);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn points_on_the_simplex_are_fixed() {
        let mut v = vec![0.2, 0.3, 0.5];
        project_onto_simplex(&mut v);
        assert_eq!(v, vec![0.2, 0.3, 0.5]);
    }

    #[test]
    fn clips_to_a_vertex() {
        let mut v = vec![5.0, -1.0, 0.0];
        project_onto_simplex(&mut v);
        assert_eq!(v, vec![1.0, 0.0, 0.0]);
    }

    #[test]
    fn shifts_uniformly_in_the_interior() {
        let mut v = vec![0.5, 0.5, 0.5];
        project_onto_simplex(&mut v);
        for x in v {
            assert!((x - 1.0 / 3.0).abs() < 1e-15);
        }
    }

    proptest! {
        #[test]
        fn projection_is_closest_simplex_point(
            v in prop::collection::vec(-3.0f64..3.0, 2..6),
            w in prop::collection::vec(0.0f64..1.0, 6),
        ) {
            let mut p = v.clone();
            project_onto_simplex(&mut p);
            prop_assert!(p.iter().all(|&x| x >= 0.0));
            prop_assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-12);
            // any other simplex point is at least as far from v
            let mut other: Vec<f64> = w[..v.len()].to_vec();
            let s: f64 = other.iter().sum::<f64>() + 1e-9;
            other.iter_mut().for_each(|x| *x = (*x + 1e-9 / v.len() as f64) / s);
            let d = |a: &[f64]| a.iter().zip(&v).map(|(x, y)| (x - y).powi(2)).sum::<f64>();
            prop_assert!(d(&p) <= d(&other) + 1e-12);
        }
    }
}
