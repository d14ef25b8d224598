use monobasis::multiindex::MultiIndex;
use monobasis::polynomials::{monomial_sup, monomial_sup_block, SupMode};
use monobasis::sequence_spaces::{CompactSetSpec, LorentzWeights, PExponent};

fn block(lambda: &[f64], p: f64) -> CompactSetSpec {
    CompactSetSpec::block(lambda.to_vec(), PExponent::new(p).unwrap()).unwrap()
}

/// `max |z_1|^a |z_2|^b |z_3|^c` over a grid of moduli with
/// `|z_1| ≤ λ_1` and `|z_2|^p + |z_3|^p ≤ λ_2^p`.
fn joint_grid(exps: [u32; 3], lambda: [f64; 2], p: f64, steps: usize) -> f64 {
    let mut best: f64 = 0.0;
    let z1 = lambda[0];
    for i in 0..=steps {
        let x = lambda[1] * i as f64 / steps as f64;
        // Largest |z_3| allowed next to |z_2| = x.
        let y = (lambda[1].powf(p) - x.powf(p)).max(0.0).powf(1.0 / p);
        let v = z1.powi(exps[0] as i32) * x.powi(exps[1] as i32) * y.powi(exps[2] as i32);
        best = best.max(v);
    }
    best
}

#[test]
fn block_sup_is_multiplicative_across_blocks() {
    for p in [1.0, 2.0, 2.5] {
        let lambda = [0.9, 0.7];
        let spec = block(&lambda, p);
        for exps in [[1, 1, 1], [2, 0, 1], [1, 3, 1], [0, 2, 2]] {
            let m = MultiIndex::from_dense(&exps);
            let exact = monomial_sup_block(&m, &spec).unwrap().value;
            let grid = joint_grid(exps, lambda, p, 200_000);
            assert!(grid <= exact * (1.0 + 1e-12));
            assert!((exact - grid) / exact < 1e-8, "{m}: {exact} vs {grid}");
            // Per-block sups multiply.
            let first = monomial_sup_block(&MultiIndex::from_dense(&exps[..1]), &spec)
                .unwrap()
                .value;
            let second = monomial_sup_block(&MultiIndex::from_dense(&[0, exps[1], exps[2]]), &spec)
                .unwrap()
                .value;
            assert!((exact - first * second).abs() <= 1e-15 * exact);
        }
    }
}

#[test]
fn block_sup_of_z2_z3_on_the_unit_ball_is_one_half() {
    let spec = block(&[1.0, 1.0], 2.0);
    let s = monomial_sup(&MultiIndex::from_dense(&[0, 1, 1]), &spec).unwrap();
    assert_eq!(s.mode, SupMode::ExactClosedForm);
    assert!((s.value - 0.5).abs() < 1e-15);
    assert!((joint_grid([0, 1, 1], [1.0, 1.0], 2.0, 100_000) - 0.5).abs() < 1e-9);
}

#[test]
fn lorentz_single_coordinate_sup_is_the_tightest_cap() {
    // sup |z_1| = min_k λ_k W_k; a dense scan over |z_1| confirms it.
    let spec = CompactSetSpec::lorentz(
        vec![1.0, 0.5, 0.6],
        LorentzWeights::new(vec![1.0, 0.5, 0.4]).unwrap(),
    )
    .unwrap();
    let s = monomial_sup(&MultiIndex::from_dense(&[1]), &spec).unwrap();
    let scan = (0..=100_000)
        .map(|i| i as f64 / 100_000.0)
        .filter(|t| [1.0, 0.5 * 1.5, 0.6 * 1.9].iter().all(|cap| t <= cap))
        .fold(0.0, f64::max);
    assert!((s.value - 0.75).abs() < 1e-9);
    assert!((s.value - scan).abs() < 1e-5);
}
