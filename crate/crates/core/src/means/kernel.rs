//! Polynomial kernel: shrinks an instance to at most `k + r` distinct
//! columns, `(k+1)(k+r)` columns and `((k+1)(k+r) - 1)k + ceil((k+1)/2) r`
//! rows without changing the answer.

use super::{assign_to_means, distinct_column_clustering, majority_of, Clustering, MeansInstance};
use crate::matrix::{column_groups, BinaryMatrix, BitVector};
use crate::Result;

/// Result of kernelization.
#[derive(Debug, Clone)]
pub enum KernelOutcome {
    /// Decided yes; carries a cost-0 clustering.
    SolvedYes(Clustering),
    SolvedNo,
    Reduced(MeansKernel),
}

/// Reduced instance plus the original column each kernel column came from.
#[derive(Debug, Clone)]
pub struct MeansKernel {
    pub instance: MeansInstance,
    pub kept_columns: Vec<usize>,
}

impl MeansKernel {
    /// Maps a witness for the kernel back to the original matrix: clusters
    /// keep their kernel membership, means are recomputed as majorities on
    /// the original columns, and every column (including dropped
    /// duplicates) is then reassigned to its nearest mean.
    pub fn lift(&self, original: &BinaryMatrix, witness: &Clustering) -> Result<Clustering> {
        let cols = original.columns();
        let means: Vec<BitVector> = witness
            .clusters()
            .parts()
            .iter()
            .map(|part| {
                majority_of(
                    original.rows_count(),
                    part.iter().map(|&j| &cols[self.kept_columns[j]]),
                )
            })
            .collect();
        assign_to_means(original, &means)
    }
}

/// Connected components of the graph joining columns at distance `<= k`,
/// ordered by smallest member.
fn chained_components(cols: &[BitVector], k: usize) -> Vec<Vec<usize>> {
    let n = cols.len();
    let mut label = vec![usize::MAX; n];
    let mut parts = Vec::new();
    for start in 0..n {
        if label[start] != usize::MAX {
            continue;
        }
        let id = parts.len();
        label[start] = id;
        let mut part = vec![start];
        let mut next = 0;
        while next < part.len() {
            let h = part[next];
            next += 1;
            for j in 0..n {
                if label[j] == usize::MAX && cols[h].distance(&cols[j]) <= k {
                    label[j] = id;
                    part.push(j);
                }
            }
        }
        part.sort_unstable();
        parts.push(part);
    }
    parts
}

fn nonuniform_rows(a: &BinaryMatrix, part: &[usize]) -> Vec<usize> {
    (0..a.rows_count())
        .filter(|&i| part.iter().any(|&j| a.get(i, j) != a.get(i, part[0])))
        .collect()
}

pub fn kernelize_means(inst: &MeansInstance) -> KernelOutcome {
    let (a, r, k) = (inst.matrix(), inst.r(), inst.k());
    let groups = column_groups(a);
    if groups.len() <= r {
        return KernelOutcome::SolvedYes(distinct_column_clustering(a));
    }
    if groups.len() > k + r {
        return KernelOutcome::SolvedNo;
    }

    // Rule 2: a class with more than k+1 equal columns keeps only k+1 of them.
    let mut kept: Vec<usize> = groups
        .parts()
        .iter()
        .flat_map(|g| g.iter().take(k + 1).copied())
        .collect();
    kept.sort_unstable();
    let a = a.select_columns(&kept);
    let cols = a.columns();

    let parts = chained_components(&cols, k);
    if parts.len() > r {
        return KernelOutcome::SolvedNo;
    }

    let nonuniform: Vec<Vec<usize>> = parts.iter().map(|p| nonuniform_rows(&a, p)).collect();
    let height = nonuniform.iter().map(Vec::len).max().unwrap_or(0);
    let row_sets: Vec<Vec<usize>> = nonuniform
        .iter()
        .map(|rows| {
            let mut set = rows.clone();
            let padding = (0..a.rows_count()).filter(|i| !rows.contains(i));
            set.extend(padding.take(height - rows.len()));
            set.sort_unstable();
            set
        })
        .collect();

    let band = (k + 1).div_ceil(2);
    let total_rows = height + parts.len() * band;
    let mut d = BinaryMatrix::zeros(total_rows, kept.len());
    for (s, part) in parts.iter().enumerate() {
        for &j in part {
            for (t, &i) in row_sets[s].iter().enumerate() {
                d.set(t, j, a.get(i, j));
            }
            for t in 0..band {
                d.set(height + s * band + t, j, true);
            }
        }
    }

    let instance = MeansInstance::new(d, r, k).expect("r is unchanged");
    KernelOutcome::Reduced(MeansKernel {
        instance,
        kept_columns: kept,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::means::oracle_means;

    fn mat(rows: &[&str]) -> BinaryMatrix {
        BinaryMatrix::parse_rows(rows).unwrap()
    }

    #[test]
    fn few_distinct_columns_is_yes() {
        let a = mat(&["0101", "1111"]);
        let inst = MeansInstance::new(a, 2, 0).unwrap();
        match kernelize_means(&inst) {
            KernelOutcome::SolvedYes(c) => assert_eq!(c.cost(), 0),
            other => panic!("expected yes, got {other:?}"),
        }
    }

    #[test]
    fn too_many_distinct_columns_is_no() {
        // k + r + 1 = 4 distinct columns
        let a = BinaryMatrix::identity(4);
        let inst = MeansInstance::new(a, 2, 1).unwrap();
        assert!(matches!(kernelize_means(&inst), KernelOutcome::SolvedNo));
    }

    #[test]
    fn rule_two_trims_duplicates() {
        // a 2x(k+3) matrix: k+3 copies of one column plus one other column;
        // with r = 1 the copies shrink to k+1.
        let k = 2;
        let mut rows = [String::new(), String::new()];
        for _ in 0..k + 3 {
            rows[0].push('0');
            rows[1].push('0');
        }
        rows[0].push('1');
        rows[1].push('0');
        let a = BinaryMatrix::parse_rows(&[&rows[0], &rows[1]]).unwrap();
        let inst = MeansInstance::new(a.clone(), 1, k).unwrap();
        match kernelize_means(&inst) {
            KernelOutcome::Reduced(kernel) => {
                assert_eq!(kernel.instance.matrix().cols_count(), k + 2);
                assert_eq!(kernel.kept_columns, vec![0, 1, 2, k + 3]);
                let before = oracle_means(&inst).unwrap().is_some();
                let after = oracle_means(&kernel.instance).unwrap().is_some();
                assert_eq!(before, after);
            }
            other => panic!("expected a reduced instance, got {other:?}"),
        }
    }

    #[test]
    fn separated_parts_exceeding_r_is_no() {
        // three distinct columns in two far-apart chains, r = 1, k = 2
        let a = mat(&["0011", "0011", "0011", "0111"]);
        let inst = MeansInstance::new(a, 1, 2).unwrap();
        assert!(matches!(kernelize_means(&inst), KernelOutcome::SolvedNo));
    }

    #[test]
    fn bands_mark_parts() {
        let a = mat(&["0111", "0011", "0011", "0011", "0011", "0001"]);
        let inst = MeansInstance::new(a, 2, 2).unwrap();
        let KernelOutcome::Reduced(kernel) = kernelize_means(&inst) else {
            panic!("expected a reduced instance");
        };
        let d = kernel.instance.matrix();
        // bands of height ceil(3/2) = 2 at the bottom, one per part
        let m = d.rows_count();
        assert_eq!(m, 5);
        let band_rows: Vec<String> = (m - 4..m).map(|i| d.row(i).to_string()).collect();
        assert_eq!(band_rows, vec!["1100", "1100", "0011", "0011"]);
    }
}
