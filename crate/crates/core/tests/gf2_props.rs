use binapprox::boolean::oracle_boolean_min;
use binapprox::gf2::{branch_gf2, extend_solution_gf2, oracle_gf2_min, Gf2Instance};
use binapprox::matrix::{gf2_rank, hamming_mat};
use binapprox::BinaryMatrix;
use proptest::prelude::*;

fn matrix(max_m: usize, max_n: usize) -> impl Strategy<Value = BinaryMatrix> {
    (1..=max_m, 1..=max_n).prop_flat_map(|(m, n)| {
        proptest::collection::vec(any::<bool>(), m * n)
            .prop_map(move |bits| BinaryMatrix::from_fn(m, n, |i, j| bits[i * n + j]))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn witnesses_are_low_rank_and_close(a in matrix(5, 5), r in 1usize..=2, k in 0usize..=4) {
        let inst = Gf2Instance::new(a.clone(), r, k).unwrap();
        for sol in [branch_gf2(&inst), extend_solution_gf2(&inst)].into_iter().flatten() {
            let b = sol.matrix(a.rows_count());
            prop_assert!(gf2_rank(&b) <= r);
            prop_assert!(hamming_mat(&a, &b).unwrap() <= k);
        }
    }

    #[test]
    fn minimum_matches_oracle(a in matrix(4, 6), r in 1usize..=2) {
        let min = oracle_gf2_min(&a, r).unwrap().cost(&a).unwrap();
        let accepts = |k: usize| extend_solution_gf2(&Gf2Instance::new(a.clone(), r, k).unwrap()).is_some();
        prop_assert!(accepts(min));
        prop_assert!(min == 0 || !accepts(min - 1));
    }

    #[test]
    fn transposing_keeps_the_minimum(a in matrix(4, 5), r in 1usize..=2) {
        let x = oracle_gf2_min(&a, r).unwrap().cost(&a).unwrap();
        let at = a.transpose();
        let y = oracle_gf2_min(&at, r).unwrap().cost(&at).unwrap();
        prop_assert_eq!(x, y);
    }

    #[test]
    fn rank_one_matches_boolean_rank_one(a in matrix(4, 4)) {
        let gf2 = oracle_gf2_min(&a, 1).unwrap().cost(&a).unwrap();
        let boolean = oracle_boolean_min(&a, 1).unwrap().cost(&a).unwrap();
        prop_assert_eq!(gf2, boolean);
    }
}

#[test]
fn exhaustive_three_by_three_minimums() {
    for mask in 0u64..512 {
        let a = BinaryMatrix::from_fn(3, 3, |i, j| mask >> (3 * i + j) & 1 == 1);
        for r in 1..=2 {
            let min = oracle_gf2_min(&a, r).unwrap().cost(&a).unwrap();
            for k in 0..=3 {
                let inst = Gf2Instance::new(a.clone(), r, k).unwrap();
                assert_eq!(branch_gf2(&inst).is_some(), min <= k, "{a:?} r={r} k={k}");
                assert_eq!(extend_solution_gf2(&inst).is_some(), min <= k, "{a:?} r={r} k={k}");
            }
        }
    }
}
