//! Bounded search tree: while the rank exceeds `r`, some cell of a full-rank
//! `(r+1) x (r+1)` submatrix must change, so branch on each of them.

use super::{Gf2Instance, Gf2Solution};
use crate::matrix::{find_full_rank_submatrix, gf2_rank, independent_columns, BinaryMatrix};
use crate::{Budget, Result};

pub fn branch_gf2(inst: &Gf2Instance) -> Option<Gf2Solution> {
    branch_gf2_budgeted(inst, &mut Budget::unlimited()).expect("unlimited budget")
}

pub fn branch_gf2_budgeted(inst: &Gf2Instance, budget: &mut Budget) -> Result<Option<Gf2Solution>> {
    let mut work = inst.matrix().clone();
    if !branch(&mut work, inst.r(), inst.k(), budget)? {
        return Ok(None);
    }
    let pivots: Vec<_> = independent_columns(&work)
        .into_iter()
        .map(|j| work.column(j))
        .collect();
    let sol = Gf2Solution::from_vectors(inst.matrix(), &pivots)?;
    debug_assert!(sol.is_witness_for(inst.matrix(), inst.r(), inst.k()));
    Ok(Some(sol))
}

/// Leaves `b` at an accepted leaf on success; restores it otherwise.
fn branch(b: &mut BinaryMatrix, r: usize, k: usize, budget: &mut Budget) -> Result<bool> {
    budget.tick()?;
    let Some((rows, cols)) = find_full_rank_submatrix(b, r) else {
        return Ok(true);
    };
    if k == 0 {
        return Ok(false);
    }
    debug_assert_eq!(gf2_rank(&b.submatrix(&rows, &cols)), r + 1);
    for &i in &rows {
        for &j in &cols {
            b.flip(i, j);
            if branch(b, r, k - 1, budget)? {
                return Ok(true);
            }
            b.flip(i, j);
        }
    }
    Ok(false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf2::oracle_gf2;

    #[test]
    fn low_rank_input_needs_no_edits() {
        let a = BinaryMatrix::parse_rows(&["101", "101", "000"]).unwrap();
        let sol = branch_gf2(&Gf2Instance::new(a.clone(), 1, 0).unwrap()).unwrap();
        assert_eq!(sol.cost(&a).unwrap(), 0);
    }

    #[test]
    fn identity_two() {
        let id = BinaryMatrix::identity(2);
        assert!(branch_gf2(&Gf2Instance::new(id.clone(), 1, 0).unwrap()).is_none());
        let sol = branch_gf2(&Gf2Instance::new(id.clone(), 1, 1).unwrap()).unwrap();
        assert!(sol.is_witness_for(&id, 1, 1));
        let inst = Gf2Instance::new(id, 1, 1).unwrap();
        assert!(oracle_gf2(&inst).unwrap().is_some());
    }

    #[test]
    fn budget_stops_the_search() {
        let id = BinaryMatrix::identity(6);
        let inst = Gf2Instance::new(id, 1, 4).unwrap();
        let mut budget = Budget::unlimited().with_max_nodes(10);
        assert!(branch_gf2_budgeted(&inst, &mut budget).is_err());
    }
}
