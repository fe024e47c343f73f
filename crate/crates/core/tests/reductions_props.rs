use binapprox::means::oracle_means;
use binapprox::planted::{plant, PlantKind};
use binapprox::pmatrix::{oracle_pmatrix_min, PatternMatrix};
use binapprox::reductions::{compose_cso, oracle_cso, reduce_cso_to_means, CsoInstance};
use binapprox::selection::{
    build_consensus_instance, oracle_cluster_selection_with_lengths, solve_consensus_desk, ClusterSelectionInstance,
};
use binapprox::{BinaryMatrix, BitVector, Budget};
use proptest::prelude::*;

fn cso(max_len: usize, max_n: usize) -> impl Strategy<Value = CsoInstance> {
    (1..=max_len, 1..=max_n, 1usize..=2).prop_flat_map(|(len, n, d)| {
        (proptest::collection::vec(0u64..1 << len, n), 1..=d.min(n)).prop_map(move |(masks, r)| {
            let strings = masks.iter().map(|&m| BitVector::from_mask(len, m)).collect();
            CsoInstance::new(strings, r, d).unwrap()
        })
    })
}

/// `count` instances sharing length, r and d.
fn same_parameters(count: usize) -> impl Strategy<Value = Vec<CsoInstance>> {
    (1usize..=3, 1usize..=2).prop_flat_map(move |(len, d)| {
        (1..=d).prop_flat_map(move |r| {
            let one = proptest::collection::vec(0u64..1 << len, r..=3).prop_map(move |masks| {
                let strings = masks.iter().map(|&m| BitVector::from_mask(len, m)).collect();
                CsoInstance::new(strings, r, d).unwrap()
            });
            proptest::collection::vec(one, count)
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn composition_of_three_is_an_or(parts in same_parameters(3)) {
        let want = parts.iter().any(|c| oracle_cso(c).unwrap().is_some());
        let composed = compose_cso(&parts).unwrap();
        prop_assert_eq!(oracle_cso(&composed).unwrap().is_some(), want);
    }

    #[test]
    fn reduction_keeps_the_answer(c in cso(5, 4)) {
        let means = reduce_cso_to_means(&c).unwrap();
        prop_assert_eq!(oracle_means(&means).unwrap().is_some(), oracle_cso(&c).unwrap().is_some());
    }

    #[test]
    fn cso_witnesses_are_valid(c in cso(5, 5)) {
        if let Some(w) = oracle_cso(&c).unwrap() {
            prop_assert!(w.is_valid_for(&c));
        }
    }

    #[test]
    fn planted_minimum_is_at_most_the_plant(seed in any::<u64>(), k in 0usize..=4) {
        let pattern = PatternMatrix::new(BinaryMatrix::parse_rows(&["01", "11"]).unwrap()).unwrap();
        let planted = plant(&PlantKind::Pattern(pattern.clone()), 4, 4, k, seed).unwrap();
        let best = oracle_pmatrix_min(&planted.noisy, &pattern).unwrap().unwrap();
        prop_assert!(best.cost(&planted.noisy, &pattern).unwrap() <= k);
    }
}

/// Fixing a length tuple, the consensus instance agrees with the
/// restricted brute force.
#[test]
fn consensus_instances_match_restricted_oracle() {
    let a = BinaryMatrix::parse_rows(&["0011", "0101"]).unwrap();
    for d in 2..=3 {
        let cs = ClusterSelectionInstance::new(a.clone(), vec![vec![0, 1], vec![2, 3]], d).unwrap();
        let lengths = [1, 1];
        let want = oracle_cluster_selection_with_lengths(&cs, &lengths).unwrap().is_some();
        let cp = build_consensus_instance(&cs, &lengths).unwrap();
        let got = solve_consensus_desk(&cp, &mut Budget::unlimited()).unwrap().is_some();
        assert_eq!(got, want, "d={d}");
    }
}
