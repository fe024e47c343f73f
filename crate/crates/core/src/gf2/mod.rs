//! Low-rank approximation over GF(2).
//!
//! A solution is a set of at most `r` linearly independent vectors; each
//! column of `A` is replaced by the closest sum of a subset of them.

mod branch;
mod extend;

pub use branch::{branch_gf2, branch_gf2_budgeted};
pub use extend::{extend_solution_gf2, extend_solution_gf2_budgeted};

use std::collections::HashMap;

use crate::combinatorics::binomial;
use crate::matrix::{gf2_rank, hamming_mat, row_groups, BinaryMatrix, BitVector, Gf2Basis};
use crate::{Error, Result};

/// Largest basis whose full span is materialized.
pub const MAX_SPAN_BASIS: usize = 20;

/// Largest number of candidate bases the oracle will try.
pub const ORACLE_MAX_BASES: u64 = 1 << 22;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Gf2Instance {
    matrix: BinaryMatrix,
    r: usize,
    k: usize,
}

impl Gf2Instance {
    pub fn new(matrix: BinaryMatrix, r: usize, k: usize) -> Result<Self> {
        if r == 0 {
            return Err(Error::usage("rank budget r must be at least 1"));
        }
        Ok(Gf2Instance { matrix, r, k })
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
        Gf2Instance { k, ..self.clone() }
    }
}

/// Independent basis vectors and, per column, the basis indices summed to
/// approximate it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Gf2Solution {
    pub basis: Vec<BitVector>,
    pub assignment: Vec<Vec<usize>>,
}

impl Gf2Solution {
    /// Assigns every column of `a` its closest subset-sum of `vectors`,
    /// after reducing `vectors` to an independent subset.
    pub fn from_vectors(a: &BinaryMatrix, vectors: &[BitVector]) -> Result<Self> {
        let m = a.rows_count();
        let mut echelon = Gf2Basis::new(m);
        let mut basis = Vec::new();
        for v in vectors {
            if v.len() != m {
                return Err(Error::dim(format!("basis vector of length {} for {m} rows", v.len())));
            }
            if echelon.insert(v) {
                basis.push(v.clone());
            }
        }
        let span = span_of(&basis)?;
        let span = if span.is_empty() { vec![(BitVector::zeros(m), 0)] } else { span };
        let mut memo: HashMap<BitVector, u64> = HashMap::new();
        let assignment = a
            .columns()
            .into_iter()
            .map(|col| {
                let mask = *memo.entry(col.clone()).or_insert_with(|| {
                    span.iter()
                        .min_by_key(|(v, mask)| (v.distance(&col), *mask))
                        .expect("span contains zero")
                        .1
                });
                (0..basis.len()).filter(|&i| mask >> i & 1 == 1).collect()
            })
            .collect();
        Ok(Gf2Solution { basis, assignment })
    }

    /// The approximating matrix with `m` rows.
    pub fn matrix(&self, m: usize) -> BinaryMatrix {
        let cols: Vec<BitVector> = self
            .assignment
            .iter()
            .map(|set| {
                let mut v = BitVector::zeros(m);
                for &i in set {
                    v.xor_assign(&self.basis[i]);
                }
                v
            })
            .collect();
        BinaryMatrix::from_columns(m, &cols).expect("columns have length m")
    }

    pub fn cost(&self, a: &BinaryMatrix) -> Result<usize> {
        hamming_mat(a, &self.matrix(a.rows_count()))
    }

    /// Independent basis, at most `r` vectors, and cost at most `k`.
    pub fn is_witness_for(&self, a: &BinaryMatrix, r: usize, k: usize) -> bool {
        let m = a.rows_count();
        if self.basis.len() > r || self.assignment.len() != a.cols_count() {
            return false;
        }
        if self.assignment.iter().flatten().any(|&i| i >= self.basis.len()) {
            return false;
        }
        let mut echelon = Gf2Basis::new(m);
        if !self.basis.iter().all(|v| v.len() == m && echelon.insert(v)) {
            return false;
        }
        let b = self.matrix(m);
        gf2_rank(&b) <= r && matches!(hamming_mat(a, &b), Ok(c) if c <= k)
    }
}

/// Every vector in the span of `basis` with its combination mask, starting
/// with zero. Empty for an empty basis.
pub(crate) fn span_of(basis: &[BitVector]) -> Result<Vec<(BitVector, u64)>> {
    let Some(first) = basis.first() else {
        return Ok(Vec::new());
    };
    if basis.len() > MAX_SPAN_BASIS {
        return Err(Error::resource(format!(
            "span of {} vectors exceeds 2^{MAX_SPAN_BASIS}",
            basis.len()
        )));
    }
    let mut span = vec![(BitVector::zeros(first.len()), 0u64)];
    for (i, v) in basis.iter().enumerate() {
        let doubled: Vec<_> = span.iter().map(|(s, mask)| (s.xor(v), mask | 1 << i)).collect();
        span.extend(doubled);
    }
    Ok(span)
}

/// Rejects instances with more than `2^r + k` distinct columns or rows;
/// otherwise returns the instance unchanged.
pub fn preprocess_gf2(inst: &Gf2Instance) -> Option<Gf2Instance> {
    let bound = 1usize
        .checked_shl(inst.r as u32)
        .filter(|_| inst.r < usize::BITS as usize)
        .unwrap_or(usize::MAX)
        .saturating_add(inst.k);
    let a = &inst.matrix;
    (a.distinct_columns() <= bound && a.distinct_rows() <= bound).then(|| inst.clone())
}

/// Minimum-cost solution of rank at most `r`, by enumerating bases drawn
/// from the vectors that agree with `a`.
pub fn oracle_gf2_min(a: &BinaryMatrix, r: usize) -> Result<Gf2Solution> {
    let m = a.rows_count();
    let classes = row_groups(a);
    let w = classes.len();
    let size = r.min(w);
    if w >= 63 || binomial((1usize << w) - 1, size) > ORACLE_MAX_BASES {
        return Err(Error::resource(format!(
            "oracle would try more than {ORACLE_MAX_BASES} bases ({w} distinct rows, r = {r})"
        )));
    }
    let expand = |code: u64| {
        let mut v = BitVector::zeros(m);
        for (c, class) in classes.parts().iter().enumerate() {
            if code >> c & 1 == 1 {
                for &i in class {
                    v.set(i, true);
                }
            }
        }
        v
    };
    let mut columns: Vec<(BitVector, usize)> = Vec::new();
    for col in a.columns() {
        match columns.iter_mut().find(|(c, _)| *c == col) {
            Some((_, count)) => *count += 1,
            None => columns.push((col, 1)),
        }
    }
    let cost_of = |span: &[u64]| -> usize {
        columns
            .iter()
            .map(|(col, count)| span.iter().map(|&s| expand(s).distance(col)).min().unwrap_or(col.weight()) * count)
            .sum()
    };

    // spans of `size` independent codes, codes chosen in increasing order
    let mut best: Option<(usize, Vec<u64>)> = None;
    let mut chosen: Vec<u64> = Vec::new();
    let mut span: Vec<u64> = vec![0];
    fn rec(
        next: u64,
        limit: u64,
        size: usize,
        chosen: &mut Vec<u64>,
        span: &mut Vec<u64>,
        eval: &dyn Fn(&[u64]) -> usize,
        best: &mut Option<(usize, Vec<u64>)>,
    ) {
        if chosen.len() == size {
            let cost = eval(span);
            if best.as_ref().is_none_or(|(b, _)| cost < *b) {
                *best = Some((cost, chosen.clone()));
            }
            return;
        }
        for code in next..limit {
            if span.contains(&code) {
                continue;
            }
            let old = span.len();
            for i in 0..old {
                let s = span[i] ^ code;
                span.push(s);
            }
            chosen.push(code);
            rec(code + 1, limit, size, chosen, span, eval, best);
            chosen.pop();
            span.truncate(old);
        }
    }
    rec(1, 1u64 << w, size, &mut chosen, &mut span, &cost_of, &mut best);
    let (_, codes) = best.expect("at least the empty basis is tried");
    let vectors: Vec<BitVector> = codes.into_iter().map(expand).collect();
    Gf2Solution::from_vectors(a, &vectors)
}

/// Decision version of [`oracle_gf2_min`].
pub fn oracle_gf2(inst: &Gf2Instance) -> Result<Option<Gf2Solution>> {
    let best = oracle_gf2_min(&inst.matrix, inst.r)?;
    Ok((best.cost(&inst.matrix)? <= inst.k).then_some(best))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat(rows: &[&str]) -> BinaryMatrix {
        BinaryMatrix::parse_rows(rows).unwrap()
    }

    fn min_cost(a: &BinaryMatrix, r: usize) -> usize {
        oracle_gf2_min(a, r).unwrap().cost(a).unwrap()
    }

    /// Minimum over every matrix B of the same shape with rank at most r.
    pub(crate) fn brute_min(a: &BinaryMatrix, r: usize) -> usize {
        let (m, n) = a.shape();
        assert!(m * n <= 16);
        (0u32..1 << (m * n))
            .map(|code| BinaryMatrix::from_fn(m, n, |i, j| code >> (i * n + j) & 1 == 1))
            .filter(|b| gf2_rank(b) <= r)
            .map(|b| hamming_mat(a, &b).unwrap())
            .min()
            .unwrap()
    }

    #[test]
    fn zero_matrix_costs_nothing() {
        let a = BinaryMatrix::zeros(3, 4);
        for r in 1..=2 {
            assert_eq!(min_cost(&a, r), 0);
        }
    }

    #[test]
    fn all_ones_has_rank_one() {
        assert_eq!(min_cost(&mat(&["11", "11"]), 1), 0);
    }

    #[test]
    fn identity_three_needs_two_edits_at_rank_one() {
        let id = BinaryMatrix::identity(3);
        assert_eq!(min_cost(&id, 1), 2);
        assert_eq!(brute_min(&id, 1), 2);
    }

    #[test]
    fn oracle_matches_brute_force_on_all_3x3() {
        for code in 0u32..1 << 9 {
            let a = BinaryMatrix::from_fn(3, 3, |i, j| code >> (i * 3 + j) & 1 == 1);
            for r in 1..=2 {
                let sol = oracle_gf2_min(&a, r).unwrap();
                let cost = sol.cost(&a).unwrap();
                assert!(sol.is_witness_for(&a, r, cost));
                assert_eq!(cost, brute_min(&a, r), "{a:?} r={r}");
            }
        }
    }

    #[test]
    fn preprocessing_bounds() {
        let id = BinaryMatrix::identity(5);
        assert!(preprocess_gf2(&Gf2Instance::new(id, 1, 1).unwrap()).is_none());
        // exactly 2^1 + 1 = 3 distinct columns passes
        let a = mat(&["0011", "0101"]);
        assert_eq!(a.distinct_columns(), 4);
        assert!(preprocess_gf2(&Gf2Instance::new(a.clone(), 1, 1).unwrap()).is_none());
        let a = mat(&["001", "010"]);
        assert!(preprocess_gf2(&Gf2Instance::new(a, 1, 1).unwrap()).is_some());
    }

    #[test]
    fn witness_check_rejects_dependent_basis() {
        let a = mat(&["11", "11"]);
        let v = BitVector::ones(2);
        let sol = Gf2Solution {
            basis: vec![v.clone(), v],
            assignment: vec![vec![0], vec![0]],
        };
        assert!(!sol.is_witness_for(&a, 2, 0));
    }
}
