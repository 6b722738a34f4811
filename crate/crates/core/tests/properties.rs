use proptest::prelude::*;

use quasiortho::algebra::{build, AlgebraSpec, Tolerances, UnitalStarAlgebra};
use quasiortho::linalg::haar_unitary;
use quasiortho::privacy::{analyze_unchecked, q};

fn blocks_for(n: usize) -> impl Strategy<Value = Vec<usize>> {
    // Compositions of n: a cut after position i when bit i is set.
    (0u32..(1 << (n - 1))).prop_map(move |mask| {
        let mut blocks = Vec::new();
        let mut size = 1;
        for i in 0..n - 1 {
            if mask & (1 << i) != 0 {
                blocks.push(size);
                size = 1;
            } else {
                size += 1;
            }
        }
        blocks.push(size);
        blocks
    })
}

fn pair() -> impl Strategy<Value = (Vec<usize>, Vec<usize>, u64)> {
    (2usize..=5).prop_flat_map(|n| (blocks_for(n), blocks_for(n), any::<u64>()))
}

fn rotated(blocks: &[usize], seed: u64) -> UnitalStarAlgebra {
    let n = blocks.iter().sum();
    build(&AlgebraSpec::blocks(blocks.to_vec()))
        .unwrap()
        .conjugate_by(&haar_unitary(n, seed), &Tolerances::default())
        .unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn q_lies_between_one_and_the_smaller_dimension((ba, bb, seed) in pair()) {
        let a = build(&AlgebraSpec::blocks(ba)).unwrap();
        let b = rotated(&bb, seed);
        let value = q(&a, &b).unwrap();
        prop_assert!(value >= 1.0 - 1e-10);
        prop_assert!(value <= a.dim().min(b.dim()) as f64 + 1e-10);
    }

    #[test]
    fn q_is_symmetric((ba, bb, seed) in pair()) {
        let a = build(&AlgebraSpec::blocks(ba)).unwrap();
        let b = rotated(&bb, seed);
        prop_assert!((q(&a, &b).unwrap() - q(&b, &a).unwrap()).abs() < 1e-10);
    }

    #[test]
    fn q_is_invariant_under_joint_conjugation((ba, bb, seed) in pair()) {
        let a = build(&AlgebraSpec::blocks(ba)).unwrap();
        let b = rotated(&bb, seed);
        let u = haar_unitary(a.ambient(), seed ^ 0x5a5a);
        let tol = Tolerances::default();
        let (a2, b2) = (a.conjugate_by(&u, &tol).unwrap(), b.conjugate_by(&u, &tol).unwrap());
        prop_assert!((q(&a, &b).unwrap() - q(&a2, &b2).unwrap()).abs() < 1e-9);
    }

    #[test]
    fn bounds_and_cross_checks_hold((ba, bb, seed) in pair()) {
        let a = build(&AlgebraSpec::blocks(ba)).unwrap();
        let b = rotated(&bb, seed);
        let r = analyze_unchecked(&a, &b, 1e-8).unwrap();
        prop_assert!(r.forward_bound_ok, "forward: {r:?}");
        prop_assert!(r.converse_bound_ok, "converse: {r:?}");
        prop_assert!(r.converse_a_privatizes_b_ok && r.converse_b_privatizes_a_ok);
        prop_assert!(r.route_spread < 1e-8 && r.frobenius_gap < 1e-8);
        // Both directions share the same Frobenius norm, so neither can exceed sqrt(q - 1).
        let cap = (r.q - 1.0).max(0.0).sqrt() + 1e-8;
        prop_assert!(r.eps_a_privatizes_b <= cap && r.eps_b_privatizes_a <= cap);
    }
}
