//! Bounded search tree for `P`-matrix approximation.
//!
//! With more than `p` distinct rows, any solution must make two of the
//! first `p + 1` distinct rows equal, so one of them changes in the first
//! column where they differ. The same holds for columns. Once both counts
//! are within the pattern's, every block is a candidate and flipping any
//! entry of a block is equivalent up to isomorphism.

use super::{is_p_matrix, PMatrixWitness, PatternMatrix};
use crate::matrix::{block_partition, BinaryMatrix};
use crate::{Budget, Result};

pub fn branch_pmatrix(a: &BinaryMatrix, pattern: &PatternMatrix, k: usize) -> Option<PMatrixWitness> {
    branch_pmatrix_budgeted(a, pattern, k, &mut Budget::unlimited()).expect("unlimited budget")
}

pub fn branch_pmatrix_budgeted(
    a: &BinaryMatrix,
    pattern: &PatternMatrix,
    k: usize,
    budget: &mut Budget,
) -> Result<Option<PMatrixWitness>> {
    if pattern.p() > a.rows_count() || pattern.q() > a.cols_count() {
        return Ok(None);
    }
    let mut work = a.clone();
    let found = branch(&mut work, pattern, k, budget)?;
    debug_assert!(found.as_ref().is_none_or(|w| w.is_witness_for(a, pattern, k)));
    Ok(found)
}

fn branch(b: &mut BinaryMatrix, pattern: &PatternMatrix, k: usize, budget: &mut Budget) -> Result<Option<PMatrixWitness>> {
    budget.tick()?;
    if let Some(w) = is_p_matrix(b, pattern) {
        return Ok(Some(w));
    }
    if k == 0 {
        return Ok(None);
    }
    let (p, q) = (pattern.p(), pattern.q());
    let (rows, cols) = block_partition(b);
    if rows.len() > p + k || cols.len() > q + k {
        return Ok(None);
    }
    let cells = if rows.len() > p {
        separating_cells(b, &rows.representatives()[..=p], false)
    } else if cols.len() > q {
        separating_cells(b, &cols.representatives()[..=q], true)
    } else {
        let (ri, ci) = (rows.representatives(), cols.representatives());
        ri.iter().flat_map(|&i| ci.iter().map(move |&j| (i, j))).collect()
    };
    for (i, j) in cells {
        b.flip(i, j);
        let found = branch(b, pattern, k - 1, budget)?;
        b.flip(i, j);
        if found.is_some() {
            return Ok(found);
        }
    }
    Ok(None)
}

/// For each pair of the given distinct rows (columns when `by_column`), the
/// two cells in the first position where they differ.
fn separating_cells(b: &BinaryMatrix, reps: &[usize], by_column: bool) -> Vec<(usize, usize)> {
    let get = |line: usize, pos: usize| if by_column { b.get(pos, line) } else { b.get(line, pos) };
    let len = if by_column { b.rows_count() } else { b.cols_count() };
    let mut cells = Vec::new();
    for (x, &u) in reps.iter().enumerate() {
        for &v in &reps[x + 1..] {
            let pos = (0..len).find(|&t| get(u, t) != get(v, t)).expect("representatives are distinct");
            for line in [u, v] {
                let cell = if by_column { (pos, line) } else { (line, pos) };
                if !cells.contains(&cell) {
                    cells.push(cell);
                }
            }
        }
    }
    cells
}
