//! Approximation by `P`-matrices.
//!
//! `B` is a `P`-matrix for a `p x q` pattern `P` when its rows split into
//! `p` nonempty parts and its columns into `q` nonempty parts such that
//! every entry of block `(i, j)` equals `P[i][j]`.

mod branch;
mod extend;

pub use branch::{branch_pmatrix, branch_pmatrix_budgeted};
pub use extend::{
    extend_p_solution, extend_p_solution_budgeted, solve_extendable, ExtendablePInstance,
};

use crate::matrix::{block_partition, hamming_mat, BinaryMatrix, IndexPartition};
use crate::{Error, Result};

/// Largest number of row labelings the oracle will enumerate.
pub const ORACLE_MAX_LABELINGS: u64 = 1 << 20;

/// A pattern matrix with at least one row and one column.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PatternMatrix(BinaryMatrix);

impl PatternMatrix {
    pub fn new(p: BinaryMatrix) -> Result<Self> {
        if p.rows_count() == 0 || p.cols_count() == 0 {
            return Err(Error::usage("pattern must have at least one row and one column"));
        }
        Ok(PatternMatrix(p))
    }

    pub fn matrix(&self) -> &BinaryMatrix {
        &self.0
    }

    pub fn p(&self) -> usize {
        self.0.rows_count()
    }

    pub fn q(&self) -> usize {
        self.0.cols_count()
    }

    pub fn transpose(&self) -> PatternMatrix {
        PatternMatrix(self.0.transpose())
    }
}

/// Row part `i` maps to pattern row `i`, column part `j` to pattern column
/// `j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PMatrixWitness {
    pub row_parts: IndexPartition,
    pub col_parts: IndexPartition,
}

impl PMatrixWitness {
    /// The block-constant matrix these partitions induce from `pattern`.
    pub fn matrix(&self, pattern: &PatternMatrix) -> BinaryMatrix {
        let rl = self.row_parts.labels();
        let cl = self.col_parts.labels();
        BinaryMatrix::from_fn(rl.len(), cl.len(), |s, t| pattern.0.get(rl[s], cl[t]))
    }

    pub fn cost(&self, a: &BinaryMatrix, pattern: &PatternMatrix) -> Result<usize> {
        hamming_mat(a, &self.matrix(pattern))
    }

    pub fn transpose(&self) -> PMatrixWitness {
        PMatrixWitness {
            row_parts: self.col_parts.clone(),
            col_parts: self.row_parts.clone(),
        }
    }

    pub fn is_witness_for(&self, a: &BinaryMatrix, pattern: &PatternMatrix, k: usize) -> bool {
        self.row_parts.len() == pattern.p()
            && self.col_parts.len() == pattern.q()
            && self.row_parts.universe() == a.rows_count()
            && self.col_parts.universe() == a.cols_count()
            && matches!(self.cost(a, pattern), Ok(c) if c <= k)
    }
}

/// Decides whether `a` is a `P`-matrix by matching the block partitions of
/// `a` and the pattern: block counts must agree, and some bijection of row
/// blocks (with the column bijection it forces) must match values and give
/// every pattern block at most as many indices as its image in `a`.
pub fn is_p_matrix(a: &BinaryMatrix, pattern: &PatternMatrix) -> Option<PMatrixWitness> {
    let pm = pattern.matrix();
    let (rows_a, cols_a) = block_partition(a);
    let (rows_p, cols_p) = block_partition(pm);
    if rows_a.len() != rows_p.len() || cols_a.len() != cols_p.len() {
        return None;
    }
    let ra = rows_a.representatives();
    let ca = cols_a.representatives();
    let rp = rows_p.representatives();
    let cp = cols_p.representatives();
    // pattern column blocks keyed by their values on pattern row blocks
    let p_keys: Vec<Vec<bool>> = cp.iter().map(|&c| rp.iter().map(|&r| pm.get(r, c)).collect()).collect();

    let s = ra.len();
    let mut alpha = vec![usize::MAX; s];
    let mut used = vec![false; s];
    let try_alpha = |alpha: &[usize]| -> Option<Vec<usize>> {
        let mut beta = Vec::with_capacity(ca.len());
        for (j, &c) in ca.iter().enumerate() {
            let mut key = vec![false; s];
            for (i, &r) in ra.iter().enumerate() {
                key[alpha[i]] = a.get(r, c);
            }
            let y = p_keys.iter().position(|k| *k == key)?;
            if cols_a.parts()[j].len() < cols_p.parts()[y].len() {
                return None;
            }
            beta.push(y);
        }
        Some(beta)
    };
    fn search(
        i: usize,
        alpha: &mut Vec<usize>,
        used: &mut Vec<bool>,
        rows_a: &IndexPartition,
        rows_p: &IndexPartition,
        finish: &dyn Fn(&[usize]) -> Option<Vec<usize>>,
    ) -> Option<Vec<usize>> {
        if i == alpha.len() {
            return finish(alpha);
        }
        for x in 0..alpha.len() {
            if used[x] || rows_a.parts()[i].len() < rows_p.parts()[x].len() {
                continue;
            }
            used[x] = true;
            alpha[i] = x;
            if let Some(beta) = search(i + 1, alpha, used, rows_a, rows_p, finish) {
                return Some(beta);
            }
            used[x] = false;
        }
        None
    }
    let beta = search(0, &mut alpha, &mut used, &rows_a, &rows_p, &try_alpha)?;

    let row_parts = distribute(&rows_a, &rows_p, &alpha, pattern.p());
    let col_parts = distribute(&cols_a, &cols_p, &beta, pattern.q());
    Some(PMatrixWitness {
        row_parts: IndexPartition::new(a.rows_count(), row_parts).expect("blocks are matched bijectively"),
        col_parts: IndexPartition::new(a.cols_count(), col_parts).expect("blocks are matched bijectively"),
    })
}

/// Spreads the indices of each block of `a` over the pattern indices of its
/// matched block: one each, extras to the first.
fn distribute(blocks_a: &IndexPartition, blocks_p: &IndexPartition, matching: &[usize], size: usize) -> Vec<Vec<usize>> {
    let mut parts = vec![Vec::new(); size];
    for (i, block) in blocks_a.parts().iter().enumerate() {
        let targets = &blocks_p.parts()[matching[i]];
        for (t, &idx) in block.iter().enumerate() {
            parts[targets[t.min(targets.len() - 1)]].push(idx);
        }
    }
    for part in &mut parts {
        part.sort_unstable();
    }
    parts
}

/// Minimum-cost witness over all surjective row and column labelings, or
/// `None` when `a` is smaller than the pattern.
pub fn oracle_pmatrix_min(a: &BinaryMatrix, pattern: &PatternMatrix) -> Result<Option<PMatrixWitness>> {
    let (m, n) = a.shape();
    let (p, q) = (pattern.p(), pattern.q());
    if p > m || q > n {
        return Ok(None);
    }
    let labelings = |base: usize, exp: usize| (base as u64).checked_pow(exp as u32).unwrap_or(u64::MAX);
    // enumerate the cheaper side; the other is solved per labeling by DP
    if labelings(p, m) > labelings(q, n) {
        let t = oracle_pmatrix_min(&a.transpose(), &pattern.transpose())?;
        return Ok(t.map(|w| w.transpose()));
    }
    if labelings(p, m) > ORACLE_MAX_LABELINGS {
        return Err(Error::resource(format!(
            "oracle would enumerate {p}^{m} row labelings (limit {ORACLE_MAX_LABELINGS})"
        )));
    }
    let pm = pattern.matrix();
    let mut rows = vec![0usize; m];
    let mut best: Option<(usize, Vec<usize>, Vec<usize>)> = None;
    loop {
        let mut hit = vec![false; p];
        rows.iter().for_each(|&l| hit[l] = true);
        if hit.iter().all(|&h| h) {
            if let Some((cost, cols)) = best_columns(a, pm, &rows) {
                if best.as_ref().is_none_or(|(b, _, _)| cost < *b) {
                    best = Some((cost, rows.clone(), cols));
                }
            }
        }
        // odometer step
        let mut i = 0;
        while i < m && rows[i] == p - 1 {
            rows[i] = 0;
            i += 1;
        }
        if i == m {
            break;
        }
        rows[i] += 1;
    }
    Ok(best.map(|(_, rows, cols)| PMatrixWitness {
        row_parts: labels_to_parts(&rows, p),
        col_parts: labels_to_parts(&cols, q),
    }))
}

fn labels_to_parts(labels: &[usize], count: usize) -> IndexPartition {
    let mut parts = vec![Vec::new(); count];
    for (i, &l) in labels.iter().enumerate() {
        parts[l].push(i);
    }
    IndexPartition::new(labels.len(), parts).expect("labelings are surjective")
}

/// Cheapest surjective column labeling for fixed row labels: a DP over the
/// set of pattern columns used so far.
fn best_columns(a: &BinaryMatrix, pm: &BinaryMatrix, rows: &[usize]) -> Option<(usize, Vec<usize>)> {
    let (m, n) = a.shape();
    let q = pm.cols_count();
    let full = (1usize << q) - 1;
    let cost: Vec<Vec<usize>> = (0..n)
        .map(|j| (0..q).map(|c| (0..m).filter(|&i| a.get(i, j) != pm.get(rows[i], c)).count()).collect())
        .collect();
    const INF: usize = usize::MAX;
    let mut dp = vec![vec![INF; full + 1]; n + 1];
    let mut choice = vec![vec![(0usize, 0usize); full + 1]; n + 1];
    dp[0][0] = 0;
    for j in 0..n {
        for mask in 0..=full {
            if dp[j][mask] == INF {
                continue;
            }
            for c in 0..q {
                let next = mask | 1 << c;
                let v = dp[j][mask] + cost[j][c];
                if v < dp[j + 1][next] {
                    dp[j + 1][next] = v;
                    choice[j + 1][next] = (mask, c);
                }
            }
        }
    }
    if dp[n][full] == INF {
        return None;
    }
    let mut labels = vec![0; n];
    let mut mask = full;
    for j in (1..=n).rev() {
        let (prev, c) = choice[j][mask];
        labels[j - 1] = c;
        mask = prev;
    }
    Some((dp[n][full], labels))
}

/// Decision version of [`oracle_pmatrix_min`].
pub fn oracle_pmatrix(a: &BinaryMatrix, pattern: &PatternMatrix, k: usize) -> Result<Option<PMatrixWitness>> {
    let Some(best) = oracle_pmatrix_min(a, pattern)? else {
        return Ok(None);
    };
    Ok((best.cost(a, pattern)? <= k).then_some(best))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat(rows: &[&str]) -> BinaryMatrix {
        BinaryMatrix::parse_rows(rows).unwrap()
    }

    fn pat(rows: &[&str]) -> PatternMatrix {
        PatternMatrix::new(mat(rows)).unwrap()
    }

    /// Brute-force membership: some surjective labeling reproduces `a`.
    fn is_p_brute(a: &BinaryMatrix, pattern: &PatternMatrix) -> bool {
        matches!(oracle_pmatrix(a, pattern, 0), Ok(Some(_)))
    }

    #[test]
    fn matrix_is_its_own_pattern() {
        let a = mat(&["011", "100"]);
        let w = is_p_matrix(&a, &PatternMatrix::new(a.clone()).unwrap()).unwrap();
        assert_eq!(w.matrix(&PatternMatrix::new(a.clone()).unwrap()), a);
    }

    #[test]
    fn staircase_pattern() {
        let p = pat(&["00", "01"]);
        assert!(is_p_matrix(&mat(&["00", "01"]), &p).is_some());
        assert!(is_p_matrix(&BinaryMatrix::identity(2), &p).is_none());
        let a = mat(&["000", "011", "011"]);
        let w = is_p_matrix(&a, &p).unwrap();
        assert!(w.is_witness_for(&a, &p, 0));
    }

    #[test]
    fn duplicate_pattern_rows_need_enough_rows() {
        let p = pat(&["1", "1"]);
        assert!(is_p_matrix(&mat(&["1"]), &p).is_none());
        assert!(is_p_matrix(&mat(&["1", "1"]), &p).is_some());
    }

    #[test]
    fn membership_matches_brute_force_on_small_matrices() {
        let patterns = [pat(&["0"]), pat(&["01"]), pat(&["00", "01"]), pat(&["10", "01"]), pat(&["1", "1"]), pat(&["11", "11"])];
        for code in 0u32..1 << 9 {
            let a = BinaryMatrix::from_fn(3, 3, |i, j| code >> (i * 3 + j) & 1 == 1);
            for p in &patterns {
                let fast = is_p_matrix(&a, p);
                assert_eq!(fast.is_some(), is_p_brute(&a, p), "{a:?} {p:?}");
                if let Some(w) = fast {
                    assert!(w.is_witness_for(&a, p, 0));
                }
            }
        }
    }

    #[test]
    fn single_cell_patterns_count_disagreements() {
        let a = mat(&["0110", "1011"]);
        let zero = oracle_pmatrix_min(&a, &pat(&["0"])).unwrap().unwrap();
        assert_eq!(zero.cost(&a, &pat(&["0"])).unwrap(), a.weight());
        let one = oracle_pmatrix_min(&a, &pat(&["1"])).unwrap().unwrap();
        assert_eq!(one.cost(&a, &pat(&["1"])).unwrap(), 8 - a.weight());
    }

    #[test]
    fn oracle_is_zero_on_members() {
        let p = pat(&["00", "01"]);
        let w = oracle_pmatrix(&mat(&["00", "01"]), &p, 0).unwrap().unwrap();
        assert_eq!(w.cost(&mat(&["00", "01"]), &p).unwrap(), 0);
    }

    #[test]
    fn pattern_larger_than_matrix_is_no() {
        let p = pat(&["0", "1", "0"]);
        assert!(oracle_pmatrix(&mat(&["0", "1"]), &p, 5).unwrap().is_none());
    }

    #[test]
    fn oracle_transposes_for_the_cheaper_side() {
        let a = BinaryMatrix::from_fn(2, 7, |i, j| (i + j) % 3 == 0);
        let p = pat(&["01", "10"]);
        let direct = oracle_pmatrix_min(&a, &p).unwrap().unwrap();
        let flipped = oracle_pmatrix_min(&a.transpose(), &p.transpose()).unwrap().unwrap();
        assert_eq!(direct.cost(&a, &p).unwrap(), flipped.cost(&a.transpose(), &p.transpose()).unwrap());
    }
}
