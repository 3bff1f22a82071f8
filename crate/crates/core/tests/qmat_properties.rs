use dicka::fixtures::{random_state, rng};
use dicka::qmat::{
    conditional_mutual_information, eig_hermitian, partial_trace, purify, quantum_cmi, relative_entropy,
    subsystem_entropy, von_neumann_entropy, ComplexMatrix, DensityMatrix,
};
use num_complex::Complex;
use proptest::prelude::*;

/// Entropy of a diagonal state by the Shannon formula.
fn shannon_bits(p: &[f64]) -> f64 {
    p.iter().filter(|&&x| x > 0.0).map(|&x| -x * x.log2()).sum()
}

/// Partial trace by explicit index loops over a state of qubits, keeping a
/// sorted subset.
fn naive_partial_trace(rho: &DensityMatrix, keep: &[usize]) -> Vec<Complex<f64>> {
    let n = rho.num_subsystems();
    let d = 1usize << n;
    let dk = 1usize << keep.len();
    let bit = |idx: usize, q: usize| (idx >> (n - 1 - q)) & 1;
    let reduce = |idx: usize| keep.iter().fold(0, |acc, &q| acc << 1 | bit(idx, q));
    let traced: Vec<usize> = (0..n).filter(|q| !keep.contains(q)).collect();
    let mut out = vec![Complex::new(0.0, 0.0); dk * dk];
    for i in 0..d {
        for j in 0..d {
            if traced.iter().all(|&q| bit(i, q) == bit(j, q)) {
                out[reduce(i) * dk + reduce(j)] += rho.matrix()[(i, j)];
            }
        }
    }
    out
}

#[test]
fn partial_trace_matches_index_loops() {
    let mut r = rng(100);
    for keep in [vec![0], vec![1], vec![0, 2], vec![1, 2], vec![0, 1, 3]] {
        let rho = random_state(vec![2; 4], 3, &mut r);
        let fast = partial_trace(&rho, &keep).unwrap();
        let slow = naive_partial_trace(&rho, &keep);
        for (a, b) in fast.matrix().as_slice().iter().zip(&slow) {
            assert!((a - b).norm() < 1e-13);
        }
    }
}

#[test]
fn diagonal_states_reduce_to_shannon() {
    let p = [0.1, 0.2, 0.05, 0.15, 0.3, 0.0, 0.12, 0.08];
    let rho = DensityMatrix::new(vec![2, 2, 2], ComplexMatrix::diag(&p)).unwrap();
    assert!((von_neumann_entropy(&rho) - shannon_bits(&p)).abs() < 1e-12);
    let pa = [p[..4].iter().sum::<f64>(), p[4..].iter().sum::<f64>()];
    assert!((subsystem_entropy(&rho, &[0]).unwrap() - shannon_bits(&pa)).abs() < 1e-12);
}

#[test]
fn expansion_identity_hundred_states() {
    let mut r = rng(101);
    let mut worst: f64 = 0.0;
    for i in 0..100 {
        let n = 3 + i % 2;
        let rho = random_state(vec![2; n + 1], 1 + i % 4, &mut r);
        let groups: Vec<Vec<usize>> = (0..n).map(|k| vec![k]).collect();
        let lhs = quantum_cmi(&rho, &groups, &[n]).unwrap();
        let rhs: f64 = (1..n)
            .map(|k| conditional_mutual_information(&rho, &[k], &(0..k).collect::<Vec<_>>(), &[n]).unwrap())
            .sum();
        worst = worst.max((lhs - rhs).abs());
    }
    assert!(worst <= 1e-9, "max error {worst:e}");
}

#[test]
fn relative_entropy_identities() {
    let mut r = rng(102);
    for _ in 0..20 {
        let a = random_state(vec![2, 2], 4, &mut r);
        let b = random_state(vec![2, 2], 4, &mut r);
        assert!(relative_entropy(&a, &a).unwrap().abs() < 1e-8);
        assert!(relative_entropy(&a, &b).unwrap() > 1e-8);
    }
    let pure = DensityMatrix::<f64>::basis_state(vec![2], 0).unwrap();
    let other = DensityMatrix::<f64>::basis_state(vec![2], 1).unwrap();
    assert_eq!(relative_entropy(&pure, &other).unwrap(), f64::INFINITY);
    let mixed = DensityMatrix::<f64>::maximally_mixed(vec![2]).unwrap();
    assert!((relative_entropy(&pure, &mixed).unwrap() - 1.0).abs() < 1e-12);
}

fn state_strategy(max_qubits: usize) -> impl Strategy<Value = DensityMatrix<f64>> {
    (1..=max_qubits, 1usize..=4, any::<u64>()).prop_map(|(n, rank, seed)| random_state(vec![2; n], rank, &mut rng(seed)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn eigendecomposition_reconstructs(seed in any::<u64>(), n in 1usize..=12) {
        let mut r = rng(seed);
        let g = ComplexMatrix::<f64>::from_fn(n, n, |_, _| {
            use rand::Rng;
            Complex::new(r.gen_range(-1.0..1.0), r.gen_range(-1.0..1.0))
        });
        let h = g.add(&g.adjoint()).unwrap();
        let e = eig_hermitian(&h).unwrap();
        prop_assert!(e.reconstruct().max_abs_diff(&h) < 1e-10);
        prop_assert!(e.values.windows(2).all(|w| w[0] >= w[1]));
        let trace: f64 = e.values.iter().sum();
        prop_assert!((trace - h.trace().re).abs() < 1e-10);
    }

    #[test]
    fn entropy_additive_under_tensor(a in state_strategy(2), b in state_strategy(2)) {
        let joint = a.tensor(&b);
        prop_assert!((von_neumann_entropy(&joint) - von_neumann_entropy(&a) - von_neumann_entropy(&b)).abs() < 1e-9);
    }

    #[test]
    fn purification_traces_back(rho in state_strategy(3)) {
        let psi = purify(&rho);
        prop_assert!((psi.purity() - 1.0).abs() < 1e-8);
        let keep: Vec<usize> = (0..rho.num_subsystems()).collect();
        let back = partial_trace(&psi, &keep).unwrap();
        prop_assert!(back.matrix().max_abs_diff(rho.matrix()) < 1e-8);
    }

    #[test]
    fn cmi_permutation_invariant(seed in any::<u64>(), perm in Just(vec![0usize, 1, 2]).prop_shuffle()) {
        let rho = random_state(vec![2; 4], 3, &mut rng(seed));
        let groups: Vec<Vec<usize>> = (0..3).map(|i| vec![i]).collect();
        let permuted: Vec<Vec<usize>> = perm.iter().map(|&i| vec![i]).collect();
        let a = quantum_cmi(&rho, &groups, &[3]).unwrap();
        let b = quantum_cmi(&rho, &permuted, &[3]).unwrap();
        prop_assert!((a - b).abs() < 1e-9);
        prop_assert!(a >= -1e-9);
    }

    #[test]
    fn partial_trace_preserves_trace(rho in state_strategy(4), mask in 1u32..16) {
        let n = rho.num_subsystems();
        let keep: Vec<usize> = (0..n).filter(|&i| mask & (1 << i) != 0).collect();
        prop_assume!(!keep.is_empty());
        let red = partial_trace(&rho, &keep).unwrap();
        prop_assert!((red.matrix().trace().re - 1.0).abs() < 1e-12);
        prop_assert!(red.matrix().hermitian_defect() < 1e-12);
    }
}
