//! Clustering columns around at most `r` binary means.
//!
//! A solution partitions the columns into at most `r` clusters, each with a
//! mean vector, and its cost is the total Hamming distance of every column
//! to its cluster mean. Given a partition the best means are the per-row
//! majorities, so the oracle only enumerates partitions.

mod extend;
mod kernel;

pub use extend::{extend_means, extend_means_budgeted, extend_means_unkernelized};
pub use kernel::{kernelize_means, KernelOutcome, MeansKernel};

use crate::combinatorics::{block_count, blocks_from_labels, SetPartitions};
use crate::matrix::{column_groups, BinaryMatrix, BitVector, IndexPartition};
use crate::{Error, Result};

/// Largest number of equal-column classes the oracle will partition.
pub const ORACLE_MAX_CLASSES: usize = 12;

/// A matrix, a cluster budget `r >= 1` and a cost budget `k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MeansInstance {
    matrix: BinaryMatrix,
    r: usize,
    k: usize,
}

impl MeansInstance {
    pub fn new(matrix: BinaryMatrix, r: usize, k: usize) -> Result<Self> {
        if r == 0 {
            return Err(Error::usage("cluster budget r must be at least 1"));
        }
        Ok(MeansInstance { matrix, r, k })
    }

    pub fn matrix(&self) -> &BinaryMatrix {
        &self.matrix
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn with_k(&self, k: usize) -> Self {
        MeansInstance { k, ..self.clone() }
    }
}

/// Column clusters with one mean per cluster.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Clustering {
    clusters: IndexPartition,
    means: Vec<BitVector>,
    cost: usize,
}

impl Clustering {
    /// Builds a clustering and computes its cost.
    pub fn new(matrix: &BinaryMatrix, clusters: IndexPartition, means: Vec<BitVector>) -> Result<Self> {
        if clusters.universe() != matrix.cols_count() {
            return Err(Error::dim("clusters do not cover the matrix columns"));
        }
        if clusters.len() != means.len() {
            return Err(Error::dim("one mean per cluster is required"));
        }
        if means.iter().any(|c| c.len() != matrix.rows_count()) {
            return Err(Error::dim("mean length differs from the row count"));
        }
        let cost = partition_cost(matrix, clusters.parts(), &means);
        Ok(Clustering { clusters, means, cost })
    }

    pub fn clusters(&self) -> &IndexPartition {
        &self.clusters
    }

    pub fn means(&self) -> &[BitVector] {
        &self.means
    }

    pub fn cost(&self) -> usize {
        self.cost
    }

    /// Checks the clustering against `(matrix, r, k)`: recomputed cost,
    /// cluster count and budget.
    pub fn is_witness_for(&self, matrix: &BinaryMatrix, r: usize, k: usize) -> bool {
        let recomputed = Clustering::new(matrix, self.clusters.clone(), self.means.clone());
        matches!(recomputed, Ok(c) if c.cost == self.cost)
            && self.clusters.len() <= r
            && (!self.clusters.is_empty() || matrix.cols_count() == 0)
            && self.cost <= k
    }
}

fn partition_cost(matrix: &BinaryMatrix, parts: &[Vec<usize>], means: &[BitVector]) -> usize {
    let cols = matrix.columns();
    parts
        .iter()
        .zip(means)
        .map(|(part, c)| part.iter().map(|&j| c.distance(&cols[j])).sum::<usize>())
        .sum()
}

/// Per-row majority of the given columns; ties go to 0.
pub(crate) fn majority_of<'a>(m: usize, cols: impl IntoIterator<Item = &'a BitVector>) -> BitVector {
    let mut ones = vec![0usize; m];
    let mut count = 0usize;
    for c in cols {
        count += 1;
        for i in c.ones_indices() {
            ones[i] += 1;
        }
    }
    BitVector::from_fn(m, |i| 2 * ones[i] > count)
}

/// Majority mean of the columns in `indices`.
pub fn majority_mean(a: &BinaryMatrix, indices: &[usize]) -> Result<BitVector> {
    if indices.is_empty() {
        return Err(Error::usage("majority of an empty column set"));
    }
    if let Some(&j) = indices.iter().find(|&&j| j >= a.cols_count()) {
        return Err(Error::dim(format!("column {j} out of range")));
    }
    let cols: Vec<BitVector> = indices.iter().map(|&j| a.column(j)).collect();
    Ok(majority_of(a.rows_count(), &cols))
}

/// Index of the nearest mean (lowest index on ties) and its distance.
pub(crate) fn nearest(means: &[BitVector], v: &BitVector) -> (usize, usize) {
    means
        .iter()
        .enumerate()
        .map(|(i, c)| (i, c.distance(v)))
        .min_by_key(|&(i, d)| (d, i))
        .expect("means are nonempty")
}

/// Assigns every column to a nearest mean; clusters left empty are dropped
/// together with their means.
pub fn assign_to_means(a: &BinaryMatrix, means: &[BitVector]) -> Result<Clustering> {
    if means.is_empty() {
        return Err(Error::usage("at least one mean is required"));
    }
    if means.iter().any(|c| c.len() != a.rows_count()) {
        return Err(Error::dim("mean length differs from the row count"));
    }
    let labels: Vec<usize> = a.columns().iter().map(|col| nearest(means, col).0).collect();
    let mut used: Vec<usize> = labels.clone();
    used.sort_unstable();
    used.dedup();
    let remap = |l: usize| used.binary_search(&l).expect("label is used");
    let compact: Vec<usize> = labels.iter().map(|&l| remap(l)).collect();
    let kept: Vec<BitVector> = used.iter().map(|&l| means[l].clone()).collect();
    Clustering::new(a, IndexPartition::from_labels(&compact), kept)
}

/// Cost-0 clustering with one cluster per distinct column.
pub(crate) fn distinct_column_clustering(a: &BinaryMatrix) -> Clustering {
    let groups = column_groups(a);
    let means = groups.representatives().iter().map(|&j| a.column(j)).collect();
    Clustering::new(a, groups, means).expect("shapes agree")
}

/// Minimum-cost clustering with at most `r` clusters, by enumerating every
/// partition of the equal-column classes into at most `r` blocks.
pub fn oracle_means_min(a: &BinaryMatrix, r: usize) -> Result<Clustering> {
    if r == 0 {
        return Err(Error::usage("cluster budget r must be at least 1"));
    }
    let groups = column_groups(a);
    let s = groups.len();
    if s <= r {
        return Ok(distinct_column_clustering(a));
    }
    if s > ORACLE_MAX_CLASSES {
        return Err(Error::resource(format!(
            "oracle limited to {ORACLE_MAX_CLASSES} distinct columns, got {s}"
        )));
    }
    let cols = a.columns();
    let reps: Vec<&BitVector> = groups.representatives().iter().map(|&j| &cols[j]).collect();
    let sizes: Vec<usize> = groups.parts().iter().map(Vec::len).collect();
    let m = a.rows_count();
    let mut best: Option<(usize, Vec<usize>)> = None;
    for labels in SetPartitions::new(s, r) {
        let blocks = blocks_from_labels(&labels, block_count(&labels));
        let mut cost = 0;
        for block in &blocks {
            let members = block.iter().flat_map(|&g| std::iter::repeat_n(reps[g], sizes[g]));
            let mean = majority_of(m, members);
            cost += block.iter().map(|&g| sizes[g] * mean.distance(reps[g])).sum::<usize>();
        }
        if best.as_ref().is_none_or(|(c, _)| cost < *c) {
            best = Some((cost, labels));
        }
    }
    let (_, labels) = best.expect("at least one partition exists");
    let column_labels: Vec<usize> = groups.labels().iter().map(|&g| labels[g]).collect();
    let parts = IndexPartition::from_labels(&column_labels);
    let means = parts
        .parts()
        .iter()
        .map(|p| majority_of(m, p.iter().map(|&j| &cols[j])))
        .collect();
    Clustering::new(a, parts, means)
}

/// Decision version of [`oracle_means_min`]: a minimum-cost clustering if
/// its cost is within `k`.
pub fn oracle_means(inst: &MeansInstance) -> Result<Option<Clustering>> {
    let best = oracle_means_min(inst.matrix(), inst.r())?;
    Ok((best.cost() <= inst.k()).then_some(best))
}

/// Runs a decision procedure for `k = 0, 1, ..., cap` and returns the first
/// accepted budget with its witness.
pub fn scan_minimum<W>(
    cap: usize,
    mut decide: impl FnMut(usize) -> Result<Option<W>>,
) -> Result<Option<(usize, W)>> {
    for k in 0..=cap {
        if let Some(w) = decide(k)? {
            return Ok(Some((k, w)));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn mat(rows: &[&str]) -> BinaryMatrix {
        BinaryMatrix::parse_rows(rows).unwrap()
    }

    #[test]
    fn majority_examples() {
        let a = mat(&["101", "011"]);
        assert_eq!(majority_mean(&a, &[2]).unwrap(), a.column(2));
        // tie between a 0 and a 1 goes to 0
        let b = mat(&["01"]);
        assert_eq!(majority_mean(&b, &[0, 1]).unwrap().to_string(), "0");
        // columns (1,0), (1,1), (0,1)
        let c = mat(&["110", "011"]);
        assert_eq!(majority_mean(&c, &[0, 1, 2]).unwrap().to_string(), "11");
        assert!(majority_mean(&c, &[]).is_err());
    }

    #[test]
    fn assign_examples() {
        let a = mat(&["0110", "1011", "0000"]);
        let all: Vec<BitVector> = a.columns();
        assert_eq!(assign_to_means(&a, &all).unwrap().cost(), 0);
        let c = BitVector::parse("010").unwrap();
        let want: usize = a.columns().iter().map(|x| x.distance(&c)).sum();
        assert_eq!(assign_to_means(&a, &[c]).unwrap().cost(), want);
        let id = BinaryMatrix::identity(2);
        let one = assign_to_means(&id, &[BitVector::zeros(2)]).unwrap();
        assert_eq!(one.cost(), 2);
        assert_eq!(one.clusters().len(), 1);
    }

    #[test]
    fn assign_drops_empty_clusters_and_breaks_ties_low() {
        let a = mat(&["0", "0"]);
        let means = vec![BitVector::parse("11").unwrap(), BitVector::parse("00").unwrap(), BitVector::parse("00").unwrap()];
        let c = assign_to_means(&a, &means).unwrap();
        assert_eq!(c.means(), &[BitVector::parse("00").unwrap()]);
        assert_eq!(c.clusters().parts(), &[vec![0]]);
    }

    #[test]
    fn oracle_examples() {
        let a = mat(&["0011", "1100"]);
        let inst = MeansInstance::new(a, 2, 0).unwrap();
        assert_eq!(oracle_means(&inst).unwrap().unwrap().cost(), 0);
        let id = BinaryMatrix::identity(2);
        assert_eq!(oracle_means_min(&id, 1).unwrap().cost(), 2);
        assert_eq!(oracle_means_min(&id, 2).unwrap().cost(), 0);
        assert!(oracle_means(&MeansInstance::new(id, 1, 1).unwrap()).unwrap().is_none());
    }

    #[test]
    fn instance_rejects_zero_clusters() {
        assert!(MeansInstance::new(BinaryMatrix::zeros(1, 1), 0, 0).is_err());
    }

    #[test]
    fn scan_minimum_finds_first_budget() {
        let got = scan_minimum(10, |k| Ok((k >= 3).then_some(k * 2))).unwrap();
        assert_eq!(got, Some((3, 6)));
        assert_eq!(scan_minimum(2, |k| Ok((k >= 3).then_some(()))).unwrap(), None);
    }

    proptest! {
        #[test]
        fn majority_is_optimal(
            input in (1usize..=10, 1usize..6).prop_flat_map(|(m, n)| (
                proptest::collection::vec(any::<bool>(), m * n),
                Just((m, n)),
            ))
        ) {
            let (bits, (m, n)) = input;
            let a = BinaryMatrix::from_fn(m, n, |i, j| bits[i * n + j]);
            let all: Vec<usize> = (0..n).collect();
            let c = majority_mean(&a, &all).unwrap();
            let cols = a.columns();
            let cost = |v: &BitVector| cols.iter().map(|x| x.distance(v)).sum::<usize>();
            let best = (0u64..(1 << m)).map(|mask| cost(&BitVector::from_mask(m, mask))).min().unwrap();
            prop_assert_eq!(cost(&c), best);
        }

        #[test]
        fn assigned_cost_is_sum_of_nearest(
            input in (1usize..6, 1usize..6, 1usize..4).prop_flat_map(|(m, n, r)| (
                proptest::collection::vec(any::<bool>(), m * n),
                proptest::collection::vec(proptest::collection::vec(any::<bool>(), m), r),
                Just((m, n)),
            ))
        ) {
            let (bits, means, (m, n)) = input;
            let a = BinaryMatrix::from_fn(m, n, |i, j| bits[i * n + j]);
            let means: Vec<BitVector> = means.iter().map(|v| BitVector::from_bools(v)).collect();
            let c = assign_to_means(&a, &means).unwrap();
            let want: usize = a.columns().iter().map(|x| means.iter().map(|mu| mu.distance(x)).min().unwrap()).sum();
            prop_assert_eq!(c.cost(), want);
            prop_assert!(c.is_witness_for(&a, means.len(), want));
        }
    }
}
