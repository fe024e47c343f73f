//! Bit-packed binary matrices and the primitives every solver builds on:
//! Hamming distances, GF(2) rank, Boolean products, equal-row and
//! equal-column classes, and enumeration of vectors that agree with a matrix.

mod agree;
mod bitvec;
mod partition;
mod rank;

use std::collections::HashMap;
use std::fmt;

pub use agree::{agrees_with, enumerate_agreeing_within, AgreeingVectors};
pub use bitvec::BitVector;
pub use partition::IndexPartition;
pub use rank::{find_full_rank_submatrix, gf2_rank, independent_columns, Gf2Basis};

use crate::{Error, Result};

/// Dense `m x n` matrix over {0,1}, stored as packed rows.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BinaryMatrix {
    m: usize,
    n: usize,
    rows: Vec<BitVector>,
}

impl BinaryMatrix {
    pub fn zeros(m: usize, n: usize) -> Self {
        BinaryMatrix {
            m,
            n,
            rows: vec![BitVector::zeros(n); m],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| i == j)
    }

    pub fn from_fn(m: usize, n: usize, mut f: impl FnMut(usize, usize) -> bool) -> Self {
        let rows = (0..m).map(|i| BitVector::from_fn(n, |j| f(i, j))).collect();
        BinaryMatrix { m, n, rows }
    }

    /// Builds a matrix from rows of width `n`.
    pub fn from_rows(n: usize, rows: Vec<BitVector>) -> Result<Self> {
        if let Some(bad) = rows.iter().find(|r| r.len() != n) {
            return Err(Error::dim(format!("row of length {} in a matrix of width {n}", bad.len())));
        }
        Ok(BinaryMatrix {
            m: rows.len(),
            n,
            rows,
        })
    }

    /// Builds a matrix from columns of height `m`.
    pub fn from_columns(m: usize, columns: &[BitVector]) -> Result<Self> {
        if let Some(bad) = columns.iter().find(|c| c.len() != m) {
            return Err(Error::dim(format!("column of length {} in a matrix of height {m}", bad.len())));
        }
        Ok(Self::from_fn(m, columns.len(), |i, j| columns[j].get(i)))
    }

    /// Parses rows written as `0`/`1` strings; all rows must have equal length.
    pub fn parse_rows(rows: &[&str]) -> Result<Self> {
        let parsed = rows
            .iter()
            .map(|r| BitVector::parse(r))
            .collect::<Result<Vec<_>>>()?;
        let n = parsed.first().map_or(0, BitVector::len);
        Self::from_rows(n, parsed)
    }

    pub fn rows_count(&self) -> usize {
        self.m
    }

    pub fn cols_count(&self) -> usize {
        self.n
    }

    /// `(rows, columns)`.
    pub fn shape(&self) -> (usize, usize) {
        (self.m, self.n)
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> bool {
        self.rows[i].get(j)
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, value: bool) {
        self.rows[i].set(j, value);
    }

    #[inline]
    pub fn flip(&mut self, i: usize, j: usize) {
        self.rows[i].flip(j);
    }

    pub fn row(&self, i: usize) -> &BitVector {
        &self.rows[i]
    }

    pub fn rows(&self) -> &[BitVector] {
        &self.rows
    }

    pub fn column(&self, j: usize) -> BitVector {
        BitVector::from_fn(self.m, |i| self.rows[i].get(j))
    }

    /// All columns, materialized once.
    pub fn columns(&self) -> Vec<BitVector> {
        self.transpose().rows
    }

    pub fn set_column(&mut self, j: usize, column: &BitVector) {
        assert_eq!(column.len(), self.m);
        for i in 0..self.m {
            self.rows[i].set(j, column.get(i));
        }
    }

    pub fn transpose(&self) -> BinaryMatrix {
        Self::from_fn(self.n, self.m, |i, j| self.get(j, i))
    }

    pub fn select_columns(&self, cols: &[usize]) -> BinaryMatrix {
        Self::from_fn(self.m, cols.len(), |i, j| self.get(i, cols[j]))
    }

    pub fn select_rows(&self, rows: &[usize]) -> BinaryMatrix {
        BinaryMatrix {
            m: rows.len(),
            n: self.n,
            rows: rows.iter().map(|&i| self.rows[i].clone()).collect(),
        }
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> BinaryMatrix {
        Self::from_fn(rows.len(), cols.len(), |i, j| self.get(rows[i], cols[j]))
    }

    /// Number of 1-entries.
    pub fn weight(&self) -> usize {
        self.rows.iter().map(BitVector::weight).sum()
    }

    /// Applies row and column relabelings: entry `(i, j)` moves to
    /// `(row_perm[i], col_perm[j])`.
    pub fn permuted(&self, row_perm: &[usize], col_perm: &[usize]) -> BinaryMatrix {
        let mut out = BinaryMatrix::zeros(self.m, self.n);
        for i in 0..self.m {
            for j in 0..self.n {
                if self.get(i, j) {
                    out.set(row_perm[i], col_perm[j], true);
                }
            }
        }
        out
    }

    /// Number of pairwise distinct columns.
    pub fn distinct_columns(&self) -> usize {
        column_groups(self).len()
    }

    /// Number of pairwise distinct rows.
    pub fn distinct_rows(&self) -> usize {
        row_groups(self).len()
    }
}

impl fmt::Display for BinaryMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, row) in self.rows.iter().enumerate() {
            if i > 0 {
                f.write_str("\n")?;
            }
            write!(f, "{row}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for BinaryMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BinaryMatrix {}x{} [", self.m, self.n)?;
        for (i, row) in self.rows.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{row}")?;
        }
        f.write_str("]")
    }
}

/// Hamming distance between vectors of equal length.
pub fn hamming_vec(x: &BitVector, y: &BitVector) -> Result<usize> {
    x.hamming(y)
}

/// Number of entries in which two equally shaped matrices differ.
pub fn hamming_mat(a: &BinaryMatrix, b: &BinaryMatrix) -> Result<usize> {
    if a.shape() != b.shape() {
        return Err(Error::dim(format!("shapes {:?} and {:?}", a.shape(), b.shape())));
    }
    Ok(a.rows.iter().zip(&b.rows).map(|(x, y)| x.distance(y)).sum())
}

/// Boolean product over (AND, OR): `(U ∧ V)_{ij} = OR_h (u_ih AND v_hj)`.
pub fn boolean_product(u: &BinaryMatrix, v: &BinaryMatrix) -> Result<BinaryMatrix> {
    if u.n != v.m {
        return Err(Error::dim(format!(
            "inner dimensions {} and {}",
            u.n, v.m
        )));
    }
    let rows = u
        .rows
        .iter()
        .map(|urow| {
            let mut acc = BitVector::zeros(v.n);
            for h in urow.ones_indices() {
                acc.or_assign(&v.rows[h]);
            }
            acc
        })
        .collect();
    Ok(BinaryMatrix {
        m: u.m,
        n: v.n,
        rows,
    })
}

/// Product over GF(2): `(U V)_{ij} = XOR_h (u_ih AND v_hj)`.
pub fn gf2_product(u: &BinaryMatrix, v: &BinaryMatrix) -> Result<BinaryMatrix> {
    if u.n != v.m {
        return Err(Error::dim(format!(
            "inner dimensions {} and {}",
            u.n, v.m
        )));
    }
    let rows = u
        .rows
        .iter()
        .map(|urow| {
            let mut acc = BitVector::zeros(v.n);
            for h in urow.ones_indices() {
                acc.xor_assign(&v.rows[h]);
            }
            acc
        })
        .collect();
    Ok(BinaryMatrix {
        m: u.m,
        n: v.n,
        rows,
    })
}

fn equal_classes(items: &[BitVector]) -> IndexPartition {
    let mut index: HashMap<&BitVector, usize> = HashMap::new();
    let mut parts: Vec<Vec<usize>> = Vec::new();
    for (j, item) in items.iter().enumerate() {
        let slot = *index.entry(item).or_insert_with(|| {
            parts.push(Vec::new());
            parts.len() - 1
        });
        parts[slot].push(j);
    }
    IndexPartition::from_parts_unchecked(items.len(), parts)
}

/// Maximal classes of equal columns, ordered by smallest member.
pub fn column_groups(a: &BinaryMatrix) -> IndexPartition {
    equal_classes(&a.columns())
}

/// Maximal classes of equal rows, ordered by smallest member.
pub fn row_groups(a: &BinaryMatrix) -> IndexPartition {
    equal_classes(&a.rows)
}

/// `(row_groups, column_groups)`.
pub fn block_partition(a: &BinaryMatrix) -> (IndexPartition, IndexPartition) {
    (row_groups(a), column_groups(a))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn mat(rows: &[&str]) -> BinaryMatrix {
        BinaryMatrix::parse_rows(rows).unwrap()
    }

    #[test]
    fn hamming_mat_examples() {
        let a = mat(&["01", "10"]);
        assert_eq!(hamming_mat(&a, &a).unwrap(), 0);
        assert_eq!(
            hamming_mat(&BinaryMatrix::zeros(2, 2), &mat(&["11", "11"])).unwrap(),
            4
        );
        let mut b = a.clone();
        b.flip(1, 1);
        assert_eq!(hamming_mat(&a, &b).unwrap(), 1);
        assert!(hamming_mat(&a, &BinaryMatrix::zeros(2, 3)).is_err());
    }

    #[test]
    fn boolean_product_examples() {
        let u = mat(&["1", "1"]);
        let v = mat(&["10"]);
        assert_eq!(boolean_product(&u, &v).unwrap(), mat(&["10", "10"]));
        let u = mat(&["10", "01", "11"]);
        assert_eq!(
            boolean_product(&u, &BinaryMatrix::zeros(2, 4)).unwrap(),
            BinaryMatrix::zeros(3, 4)
        );
        assert_eq!(
            boolean_product(&u, &BinaryMatrix::identity(2)).unwrap(),
            mat(&["10", "01", "11"])
        );
        assert!(boolean_product(&u, &BinaryMatrix::zeros(3, 1)).is_err());
    }

    #[test]
    fn column_group_examples() {
        assert_eq!(column_groups(&mat(&["00", "11"])).parts(), &[vec![0, 1]]);
        assert_eq!(
            column_groups(&BinaryMatrix::identity(2)).parts(),
            &[vec![0], vec![1]]
        );
        // columns a, a, b, a
        let a = mat(&["1101", "0010"]);
        assert_eq!(column_groups(&a).parts(), &[vec![0, 1, 3], vec![2]]);
        assert!(column_groups(&BinaryMatrix::zeros(3, 0)).is_empty());
    }

    #[test]
    fn block_partition_is_row_and_column_groups() {
        let a = mat(&["110", "110", "001"]);
        let (rows, cols) = block_partition(&a);
        assert_eq!(rows.parts(), &[vec![0, 1], vec![2]]);
        assert_eq!(cols.parts(), &[vec![0, 1], vec![2]]);
    }

    #[test]
    fn empty_matrices_are_legal() {
        let a = BinaryMatrix::zeros(0, 3);
        assert_eq!(a.transpose().shape(), (3, 0));
        assert_eq!(gf2_rank(&a), 0);
        assert_eq!(row_groups(&a).len(), 0);
    }

    #[test]
    fn from_columns_roundtrip() {
        let a = mat(&["0110", "1011", "0001"]);
        let b = BinaryMatrix::from_columns(3, &a.columns()).unwrap();
        assert_eq!(a, b);
    }

    fn arb_matrix(max_m: usize, max_n: usize) -> impl Strategy<Value = BinaryMatrix> {
        (0..=max_m, 0..=max_n).prop_flat_map(|(m, n)| {
            proptest::collection::vec(any::<bool>(), m * n)
                .prop_map(move |bits| BinaryMatrix::from_fn(m, n, |i, j| bits[i * n + j]))
        })
    }

    proptest! {
        #[test]
        fn transpose_involution(a in arb_matrix(9, 70)) {
            prop_assert_eq!(a.transpose().transpose(), a);
        }

        #[test]
        fn hamming_sums_over_rows_and_columns(
            pair in (1usize..7, 1usize..7).prop_flat_map(|(m, n)| (
                proptest::collection::vec(any::<bool>(), m * n),
                proptest::collection::vec(any::<bool>(), m * n),
                Just((m, n)),
            ))
        ) {
            let (x, y, (m, n)) = pair;
            let a = BinaryMatrix::from_fn(m, n, |i, j| x[i * n + j]);
            let b = BinaryMatrix::from_fn(m, n, |i, j| y[i * n + j]);
            let total = hamming_mat(&a, &b).unwrap();
            let by_cols: usize = (0..n).map(|j| a.column(j).distance(&b.column(j))).sum();
            let by_rows: usize = (0..m).map(|i| a.row(i).distance(b.row(i))).sum();
            prop_assert_eq!(total, by_cols);
            prop_assert_eq!(total, by_rows);
        }

        #[test]
        fn boolean_product_is_or_of_rank_one_terms(
            dims in (1usize..5, 1usize..4, 1usize..5).prop_flat_map(|(m, r, n)| (
                proptest::collection::vec(any::<bool>(), m * r),
                proptest::collection::vec(any::<bool>(), r * n),
                Just((m, r, n)),
            ))
        ) {
            let (ub, vb, (m, r, n)) = dims;
            let u = BinaryMatrix::from_fn(m, r, |i, h| ub[i * r + h]);
            let v = BinaryMatrix::from_fn(r, n, |h, j| vb[h * n + j]);
            let prod = boolean_product(&u, &v).unwrap();
            let mut acc = BinaryMatrix::zeros(m, n);
            for h in 0..r {
                let term = BinaryMatrix::from_fn(m, n, |i, j| u.get(i, h) && v.get(h, j));
                acc = BinaryMatrix::from_fn(m, n, |i, j| acc.get(i, j) || term.get(i, j));
            }
            prop_assert_eq!(prod, acc);
        }

        #[test]
        fn groups_partition_indices(a in arb_matrix(6, 6)) {
            let (rows, cols) = block_partition(&a);
            prop_assert_eq!(rows.universe(), a.rows_count());
            prop_assert_eq!(cols.universe(), a.cols_count());
            let mut seen: Vec<usize> = cols.parts().iter().flatten().copied().collect();
            seen.sort_unstable();
            prop_assert_eq!(seen, (0..a.cols_count()).collect::<Vec<_>>());
            for part in cols.parts() {
                for &j in part {
                    prop_assert_eq!(a.column(j), a.column(part[0]));
                }
            }
        }
    }
}
