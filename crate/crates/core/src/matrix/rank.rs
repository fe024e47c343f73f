use super::{BinaryMatrix, BitVector};

/// Incremental GF(2) basis in echelon form.
///
/// Each stored vector remembers which inserted vectors it is the sum of, so
/// membership tests can also return the expressing subset.
#[derive(Debug, Clone)]
pub struct Gf2Basis {
    len: usize,
    // (pivot index, reduced vector, mask over inserted vectors)
    rows: Vec<(usize, BitVector, u64)>,
}

impl Gf2Basis {
    pub fn new(len: usize) -> Self {
        Gf2Basis {
            len,
            rows: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduces `v` against the basis, returning the residual and the mask of
    /// inserted vectors that were added to it.
    pub fn reduce(&self, v: &BitVector) -> (BitVector, u64) {
        debug_assert_eq!(v.len(), self.len);
        let mut x = v.clone();
        let mut mask = 0u64;
        for (pivot, row, combo) in &self.rows {
            if x.get(*pivot) {
                x.xor_assign(row);
                mask ^= combo;
            }
        }
        (x, mask)
    }

    /// Adds `v` if it is independent of the basis; returns whether it was
    /// added. At most 64 vectors can be inserted.
    pub fn insert(&mut self, v: &BitVector) -> bool {
        let (x, mask) = self.reduce(v);
        match x.first_one() {
            None => false,
            Some(pivot) => {
                assert!(self.rows.len() < 64, "basis capacity is 64 vectors");
                let id = 1u64 << self.rows.len();
                self.rows.push((pivot, x, mask ^ id));
                true
            }
        }
    }

    pub fn is_independent(&self, v: &BitVector) -> bool {
        !self.reduce(v).0.is_zero()
    }

    /// Mask of inserted vectors summing to `v`, if `v` lies in the span.
    pub fn express(&self, v: &BitVector) -> Option<u64> {
        let (x, mask) = self.reduce(v);
        x.is_zero().then_some(mask)
    }
}

/// Rank-only elimination without combination tracking.
fn eliminate(rows: &[BitVector]) -> Vec<usize> {
    let mut basis: Vec<(usize, BitVector)> = Vec::new();
    let mut independent = Vec::new();
    for (i, row) in rows.iter().enumerate() {
        let mut x = row.clone();
        for (pivot, b) in &basis {
            if x.get(*pivot) {
                x.xor_assign(b);
            }
        }
        if let Some(pivot) = x.first_one() {
            basis.push((pivot, x));
            independent.push(i);
        }
    }
    independent
}

/// Rank over GF(2) by row reduction on a working copy.
pub fn gf2_rank(a: &BinaryMatrix) -> usize {
    eliminate(a.rows()).len()
}

/// Indices of a maximal independent set of columns, chosen greedily from
/// the left.
pub fn independent_columns(a: &BinaryMatrix) -> Vec<usize> {
    eliminate(&a.columns())
}

/// If `rank(A) > r`, returns `r + 1` rows and `r + 1` columns whose induced
/// submatrix has full rank `r + 1`.
pub fn find_full_rank_submatrix(a: &BinaryMatrix, r: usize) -> Option<(Vec<usize>, Vec<usize>)> {
    let rows = eliminate(a.rows());
    if rows.len() <= r {
        return None;
    }
    let rows: Vec<usize> = rows.into_iter().take(r + 1).collect();
    let sub = a.select_rows(&rows);
    let cols: Vec<usize> = independent_columns(&sub).into_iter().take(r + 1).collect();
    debug_assert_eq!(cols.len(), r + 1);
    Some((rows, cols))
}
