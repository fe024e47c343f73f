//! Instance transformations around Consensus String with Outliers (CSO):
//! choose `r` of `n` strings and a center within total distance `d` of them.
//!
//! Two transformations live here. The OR-composition glues instances
//! together by tagging each one's strings with a marker suffix. The
//! reduction to clustering tags every string with its own marker, so that
//! only one cluster can afford to hold more than one column.

use crate::means::MeansInstance;
use crate::{BinaryMatrix, BitVector, Error, Result};

/// Longest strings the enumerating oracle accepts.
const ORACLE_MAX_LENGTH: usize = 20;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CsoInstance {
    strings: Vec<BitVector>,
    r: usize,
    d: usize,
}

impl CsoInstance {
    pub fn new(strings: Vec<BitVector>, r: usize, d: usize) -> Result<Self> {
        let Some(first) = strings.first() else {
            return Err(Error::usage("at least one string is required"));
        };
        if strings.iter().any(|s| s.len() != first.len()) {
            return Err(Error::dim("strings must share one length"));
        }
        if r == 0 || r > strings.len() {
            return Err(Error::usage(format!("r = {r} must lie in 1..={}", strings.len())));
        }
        Ok(CsoInstance { strings, r, d })
    }

    pub fn strings(&self) -> &[BitVector] {
        &self.strings
    }

    pub fn len(&self) -> usize {
        self.strings[0].len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn n(&self) -> usize {
        self.strings.len()
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn d(&self) -> usize {
        self.d
    }
}

/// A center string and the indices of the `r` strings it is charged against.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CsoWitness {
    pub center: BitVector,
    pub chosen: Vec<usize>,
}

impl CsoWitness {
    pub fn cost(&self, cso: &CsoInstance) -> usize {
        self.chosen.iter().map(|&i| self.center.distance(&cso.strings[i])).sum()
    }

    pub fn is_valid_for(&self, cso: &CsoInstance) -> bool {
        let mut idx = self.chosen.clone();
        idx.sort_unstable();
        idx.dedup();
        self.center.len() == cso.len()
            && idx.len() == cso.r
            && idx.iter().all(|&i| i < cso.n())
            && self.cost(cso) <= cso.d
    }
}

/// `count` blocks of `width` bits, block `slot` all ones and the rest zero.
pub fn marker(slot: usize, count: usize, width: usize) -> BitVector {
    BitVector::from_fn(count * width, |i| i / width == slot)
}

/// OR-composition: every string of instance `i` gets the suffix
/// `marker(i, t, d + 1)`. Strings from different instances then differ in
/// `2(d + 1)` marker positions, so a solution never mixes instances.
pub fn compose_cso(instances: &[CsoInstance]) -> Result<CsoInstance> {
    let Some(first) = instances.first() else {
        return Err(Error::usage("nothing to compose"));
    };
    let (len, r, d) = (first.len(), first.r, first.d);
    if instances.iter().any(|c| c.len() != len || c.r != r || c.d != d) {
        return Err(Error::usage("composed instances must share length, r and d"));
    }
    let t = instances.len();
    let strings = instances
        .iter()
        .enumerate()
        .flat_map(|(i, c)| {
            let tag = marker(i, t, d + 1);
            c.strings.iter().map(move |s| s.concat(&tag))
        })
        .collect();
    CsoInstance::new(strings, r, d)
}

/// Clustering instance whose answer matches the CSO answer when `r <= d`.
///
/// Column `i` is `s_i` followed by `marker(i, n, d + 1)`; the clustering
/// uses `n - r + 1` means and budget `(d + 1) r + d`.
pub fn reduce_cso_to_means(cso: &CsoInstance) -> Result<MeansInstance> {
    let (n, r, d) = (cso.n(), cso.r, cso.d);
    if r > d {
        return Err(Error::usage(format!("the reduction needs r <= d, got r = {r}, d = {d}")));
    }
    let columns: Vec<BitVector> = cso
        .strings
        .iter()
        .enumerate()
        .map(|(i, s)| s.concat(&marker(i, n, d + 1)))
        .collect();
    let matrix = BinaryMatrix::from_columns(cso.len() + (d + 1) * n, &columns)?;
    MeansInstance::new(matrix, n - r + 1, (d + 1) * r + d)
}

/// Indices of the `r` strings closest to `center` with their total distance.
fn closest(cso: &CsoInstance, center: &BitVector) -> (Vec<usize>, usize) {
    let mut order: Vec<(usize, usize)> =
        cso.strings.iter().enumerate().map(|(i, s)| (center.distance(s), i)).collect();
    order.sort_unstable();
    order.truncate(cso.r);
    let cost = order.iter().map(|&(dist, _)| dist).sum();
    let mut chosen: Vec<usize> = order.into_iter().map(|(_, i)| i).collect();
    chosen.sort_unstable();
    (chosen, cost)
}

fn best_over(cso: &CsoInstance, centers: impl Iterator<Item = BitVector>) -> Option<CsoWitness> {
    centers
        .map(|c| {
            let (chosen, cost) = closest(cso, &c);
            (cost, CsoWitness { center: c, chosen })
        })
        .find(|(cost, _)| *cost <= cso.d)
        .map(|(_, w)| w)
}

/// Exact CSO by brute force.
///
/// With `r >= d + 1` one chosen string sits at distance zero, so trying
/// each input string as the center suffices. Otherwise every center of
/// length `ℓ` is tried.
pub fn oracle_cso(cso: &CsoInstance) -> Result<Option<CsoWitness>> {
    if cso.r > cso.d {
        return Ok(oracle_cso_greedy(cso));
    }
    oracle_cso_enumerate(cso)
}

/// Centers restricted to the input strings. Exact whenever `r > d`.
pub fn oracle_cso_greedy(cso: &CsoInstance) -> Option<CsoWitness> {
    best_over(cso, cso.strings.iter().cloned())
}

/// Centers ranging over all `2^ℓ` strings.
pub fn oracle_cso_enumerate(cso: &CsoInstance) -> Result<Option<CsoWitness>> {
    let len = cso.len();
    if len > ORACLE_MAX_LENGTH {
        return Err(Error::resource(format!("enumerating centers of length {len}")));
    }
    Ok(best_over(cso, (0..1u64 << len).map(|mask| BitVector::from_mask(len, mask))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::means::oracle_means;
    use itertools::Itertools;

    fn strings(len: usize, masks: &[u64]) -> Vec<BitVector> {
        masks.iter().map(|&m| BitVector::from_mask(len, m)).collect()
    }

    /// Every multiset of `n` strings of length `len`, as sorted mask tuples.
    fn multisets(len: usize, n: usize) -> impl Iterator<Item = Vec<u64>> {
        (0..1u64 << len).combinations_with_replacement(n)
    }

    #[test]
    fn rejects_bad_instances() {
        assert!(CsoInstance::new(vec![], 1, 0).is_err());
        assert!(CsoInstance::new(strings(2, &[0, 1]), 3, 0).is_err());
        assert!(CsoInstance::new(strings(2, &[0, 1]), 0, 0).is_err());
        let mixed = vec![BitVector::zeros(2), BitVector::zeros(3)];
        assert!(CsoInstance::new(mixed, 1, 0).is_err());
    }

    #[test]
    fn reduction_parameters() {
        let cso = CsoInstance::new(strings(2, &[0, 1, 3]), 1, 1).unwrap();
        let means = reduce_cso_to_means(&cso).unwrap();
        assert_eq!(means.k(), 3);
        assert_eq!(means.r(), 3);
        assert_eq!(means.matrix().shape(), (2 + 6, 3));
        let outside = CsoInstance::new(strings(2, &[0, 1, 3]), 2, 1).unwrap();
        assert!(reduce_cso_to_means(&outside).is_err());
    }

    #[test]
    fn equal_strings_need_no_budget() {
        for r in 1..=3 {
            let cso = CsoInstance::new(strings(3, &[5, 5, 5]), r, 0).unwrap();
            let w = oracle_cso(&cso).unwrap().unwrap();
            assert!(w.is_valid_for(&cso));
            assert_eq!(w.cost(&cso), 0);
        }
    }

    #[test]
    fn all_strings_chosen_is_decided_by_majority() {
        // 011, 101, 110: the majority center 111 costs 3, nothing costs less
        let s = strings(3, &[0b110, 0b101, 0b011]);
        let yes = CsoInstance::new(s.clone(), 3, 3).unwrap();
        assert!(oracle_cso(&yes).unwrap().is_some());
        let no = CsoInstance::new(s, 3, 2).unwrap();
        assert!(oracle_cso(&no).unwrap().is_none());
    }

    #[test]
    fn single_composition_keeps_decision() {
        for masks in multisets(3, 3) {
            for d in 0..=2 {
                let cso = CsoInstance::new(strings(3, &masks), 2, d).unwrap();
                let composed = compose_cso(std::slice::from_ref(&cso)).unwrap();
                assert_eq!(composed.len(), 3 + d + 1);
                assert_eq!(oracle_cso(&composed).unwrap().is_some(), oracle_cso(&cso).unwrap().is_some());
            }
        }
    }

    #[test]
    fn composition_rejects_mismatched_parameters() {
        let a = CsoInstance::new(strings(2, &[0, 1]), 1, 1).unwrap();
        let b = CsoInstance::new(strings(2, &[0, 1]), 1, 2).unwrap();
        let c = CsoInstance::new(strings(3, &[0, 1]), 1, 1).unwrap();
        assert!(compose_cso(&[a.clone(), b]).is_err());
        assert!(compose_cso(&[a, c]).is_err());
        assert!(compose_cso(&[]).is_err());
    }

    #[test]
    fn composition_is_an_or() {
        let pool: Vec<CsoInstance> = multisets(2, 3)
            .flat_map(|masks| (1..=2).map(move |d| CsoInstance::new(strings(2, &masks), 2, d).unwrap()))
            .collect();
        for d in 1..=2 {
            let same: Vec<&CsoInstance> = pool.iter().filter(|c| c.d == d).collect();
            for (x, y) in same.iter().tuple_combinations() {
                let want = oracle_cso(x).unwrap().is_some() || oracle_cso(y).unwrap().is_some();
                let composed = compose_cso(&[(*x).clone(), (*y).clone()]).unwrap();
                assert_eq!(oracle_cso(&composed).unwrap().is_some(), want);
            }
        }
    }

    #[test]
    fn markers_separate_instances() {
        let d = 2;
        let parts: Vec<CsoInstance> =
            (0..3).map(|i| CsoInstance::new(strings(2, &[i, 3 - i]), 1, d).unwrap()).collect();
        let composed = compose_cso(&parts).unwrap();
        let origin: Vec<usize> = (0..3).flat_map(|i| [i, i]).collect();
        for (x, y) in (0..composed.n()).tuple_combinations() {
            if origin[x] != origin[y] {
                assert!(composed.strings()[x].distance(&composed.strings()[y]) >= 2 * (d + 1));
            }
        }
    }

    #[test]
    fn reduction_preserves_decisions() {
        for len in 1..=3 {
            for n in 1..=3 {
                for masks in multisets(len, n) {
                    for d in 1..=2 {
                        for r in 1..=d.min(n) {
                            let cso = CsoInstance::new(strings(len, &masks), r, d).unwrap();
                            let means = reduce_cso_to_means(&cso).unwrap();
                            assert_eq!(
                                oracle_means(&means).unwrap().is_some(),
                                oracle_cso(&cso).unwrap().is_some(),
                                "{masks:?} r={r} d={d}"
                            );
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn greedy_matches_enumeration_when_r_exceeds_d() {
        for masks in multisets(3, 4) {
            for d in 0..=2 {
                for r in d + 1..=4 {
                    let cso = CsoInstance::new(strings(3, &masks), r, d).unwrap();
                    assert_eq!(
                        oracle_cso_greedy(&cso).is_some(),
                        oracle_cso_enumerate(&cso).unwrap().is_some()
                    );
                }
            }
        }
    }
}
