//! Low Boolean-rank approximation.
//!
//! `B = U ∧ V` has Boolean rank at most `r` when `U` is `m x r` and `V` is
//! `r x n`. Collapsing equal rows and columns of such a `B` leaves the
//! intersection pattern of a family of row subsets of `{1..r}` against a
//! family of column subsets, so `B` is a `P`-matrix for one of finitely many
//! patterns, each of size at most `2^r x 2^r`.

use std::collections::{HashMap, HashSet};

use itertools::Itertools;

use crate::matrix::{boolean_product, column_groups, hamming_mat, row_groups, BinaryMatrix, BitVector};
use crate::pmatrix::{extend_p_solution_budgeted, PMatrixWitness, PatternMatrix};
use crate::{Budget, Error, Result};

/// Largest rank whose patterns are enumerated.
pub const MAX_PATTERN_RANK: usize = 3;

/// Largest `r * (distinct rows)` the oracle enumerates.
pub const ORACLE_MAX_BITS: usize = 24;

/// Factors with `B = U ∧ V`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoolSolution {
    pub u: BinaryMatrix,
    pub v: BinaryMatrix,
}

impl BoolSolution {
    pub fn rank_bound(&self) -> usize {
        self.u.cols_count()
    }

    pub fn matrix(&self) -> BinaryMatrix {
        boolean_product(&self.u, &self.v).expect("factor shapes agree")
    }

    pub fn cost(&self, a: &BinaryMatrix) -> Result<usize> {
        hamming_mat(a, &self.matrix())
    }

    pub fn is_witness_for(&self, a: &BinaryMatrix, r: usize, k: usize) -> bool {
        self.u.cols_count() == self.v.rows_count()
            && self.rank_bound() <= r
            && self.u.rows_count() == a.rows_count()
            && self.v.cols_count() == a.cols_count()
            && matches!(self.cost(a), Ok(c) if c <= k)
    }

    /// Drops factors that contribute nothing to the product.
    fn trimmed(self) -> BoolSolution {
        let keep: Vec<usize> = (0..self.u.cols_count())
            .filter(|&c| !self.u.column(c).is_zero() && !self.v.row(c).is_zero())
            .collect();
        BoolSolution {
            u: self.u.select_columns(&keep),
            v: self.v.select_rows(&keep),
        }
    }
}

/// A pattern with the factors that produce it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BooleanPattern {
    pub pattern: PatternMatrix,
    pub u: BinaryMatrix,
    pub v: BinaryMatrix,
}

/// Every collapsed pattern of Boolean rank at most `r`, with at most
/// `max_rows` rows and `max_cols` columns, one per permutation class.
pub fn enumerate_patterns_within(r: usize, max_rows: usize, max_cols: usize) -> Result<Vec<BooleanPattern>> {
    if r > MAX_PATTERN_RANK {
        return Err(Error::resource(format!(
            "pattern enumeration for r = {r} exceeds the limit {MAX_PATTERN_RANK}"
        )));
    }
    let subsets: Vec<u64> = (0..1u64 << r).collect();
    let families = |max: usize| -> Vec<Vec<u64>> {
        (1..=max.min(subsets.len()))
            .flat_map(|size| subsets.iter().copied().combinations(size))
            .collect()
    };
    let row_families = families(max_rows);
    let col_families = families(max_cols);
    let mut seen: HashSet<BinaryMatrix> = HashSet::new();
    let mut out = Vec::new();
    for us in &row_families {
        for vs in &col_families {
            let p = BinaryMatrix::from_fn(us.len(), vs.len(), |i, j| us[i] & vs[j] != 0);
            if p.distinct_rows() != p.rows_count() || p.distinct_columns() != p.cols_count() {
                continue;
            }
            if !seen.insert(canonical_form(&p)) {
                continue;
            }
            let u = BinaryMatrix::from_fn(us.len(), r, |i, c| us[i] >> c & 1 == 1);
            let v = BinaryMatrix::from_fn(r, vs.len(), |c, j| vs[j] >> c & 1 == 1);
            debug_assert_eq!(boolean_product(&u, &v).unwrap(), p);
            out.push(BooleanPattern {
                pattern: PatternMatrix::new(p).expect("families are nonempty"),
                u,
                v,
            });
        }
    }
    Ok(out)
}

/// All collapsed patterns of Boolean rank at most `r`.
pub fn enumerate_patterns(r: usize) -> Result<Vec<BooleanPattern>> {
    enumerate_patterns_within(r, usize::MAX, usize::MAX)
}

/// Smallest matrix over all row orders of the shorter side, with the other
/// side sorted; equal for two matrices iff they differ by permutations.
pub fn canonical_form(p: &BinaryMatrix) -> BinaryMatrix {
    if p.rows_count() > p.cols_count() {
        return canonical_form(&p.transpose()).transpose();
    }
    let m = p.rows_count();
    (0..m)
        .permutations(m)
        .map(|perm| {
            let rows = p.select_rows(&perm);
            let mut cols = rows.columns();
            cols.sort();
            BinaryMatrix::from_columns(m, &cols).expect("columns have length m")
        })
        .min()
        .unwrap_or_else(|| p.clone())
}

pub fn solve_boolean(a: &BinaryMatrix, r: usize, k: usize) -> Result<Option<BoolSolution>> {
    solve_boolean_budgeted(a, r, k, &mut Budget::unlimited())
}

/// Tries each pattern in turn with the `P`-matrix solver.
pub fn solve_boolean_budgeted(a: &BinaryMatrix, r: usize, k: usize, budget: &mut Budget) -> Result<Option<BoolSolution>> {
    let (m, n) = a.shape();
    if r >= m.min(n) {
        return Ok(Some(exact_factorization(a)));
    }
    for bp in enumerate_patterns_within(r, m, n)? {
        if let Some(w) = extend_p_solution_budgeted(a, &bp.pattern, k, budget)? {
            let sol = expand(&bp, &w).trimmed();
            debug_assert!(sol.is_witness_for(a, r, k));
            return Ok(Some(sol));
        }
    }
    Ok(None)
}

/// `A = I ∧ A` or `A = A ∧ I`, whichever is narrower.
fn exact_factorization(a: &BinaryMatrix) -> BoolSolution {
    let (m, n) = a.shape();
    let sol = if m <= n {
        BoolSolution {
            u: BinaryMatrix::identity(m),
            v: a.clone(),
        }
    } else {
        BoolSolution {
            u: a.clone(),
            v: BinaryMatrix::identity(n),
        }
    };
    sol.trimmed()
}

/// Replicates pattern factors along the witness partitions.
fn expand(bp: &BooleanPattern, w: &PMatrixWitness) -> BoolSolution {
    let rl = w.row_parts.labels();
    let cl = w.col_parts.labels();
    BoolSolution {
        u: bp.u.select_rows(&rl),
        v: bp.v.select_columns(&cl),
    }
}

/// Minimum-cost factorization with `r` factors: enumerate `U` on the
/// distinct rows, then choose each column of `V` independently.
pub fn oracle_boolean_min(a: &BinaryMatrix, r: usize) -> Result<BoolSolution> {
    let rows = row_groups(a);
    let cols = column_groups(a);
    if cols.len() < rows.len() {
        let t = oracle_boolean_min(&a.transpose(), r)?;
        return Ok(BoolSolution {
            u: t.v.transpose(),
            v: t.u.transpose(),
        });
    }
    let g = rows.len();
    if r * g > ORACLE_MAX_BITS {
        return Err(Error::resource(format!(
            "oracle would enumerate 2^{} factor matrices (limit 2^{ORACLE_MAX_BITS})",
            r * g
        )));
    }
    let (m, n) = a.shape();
    let reps = rows.representatives();
    let weights: Vec<usize> = rows.parts().iter().map(Vec::len).collect();
    // distinct columns restricted to row representatives, with multiplicity
    let mut col_counts: HashMap<BitVector, usize> = HashMap::new();
    for j in 0..n {
        let key = BitVector::from_fn(g, |c| a.get(reps[c], j));
        *col_counts.entry(key).or_default() += 1;
    }
    let col_counts: Vec<(BitVector, usize)> = col_counts.into_iter().sorted().collect();
    let full = 1u64 << r;
    let mut best: Option<(usize, u64)> = None;
    for code in 0..1u64 << (r * g) {
        let u_row = |c: usize| code >> (c * r) & (full - 1);
        let mut total = 0;
        for (col, count) in &col_counts {
            let cheapest = (0..full)
                .map(|v| (0..g).filter(|&c| (u_row(c) & v != 0) != col.get(c)).map(|c| weights[c]).sum::<usize>())
                .min()
                .expect("at least one V column");
            total += cheapest * count;
            if best.is_some_and(|(b, _)| total >= b) {
                break;
            }
        }
        if best.is_none_or(|(b, _)| total < b) {
            best = Some((total, code));
        }
    }
    let (_, code) = best.expect("at least one U");
    let labels = rows.labels();
    let u = BinaryMatrix::from_fn(m, r, |i, f| code >> (labels[i] * r + f) & 1 == 1);
    let mut v = BinaryMatrix::zeros(r, n);
    for j in 0..n {
        let col = a.column(j);
        let best_v = (0..full)
            .min_by_key(|&bits| (0..m).filter(|&i| (0..r).any(|f| u.get(i, f) && bits >> f & 1 == 1) != col.get(i)).count())
            .expect("at least one V column");
        for f in 0..r {
            v.set(f, j, best_v >> f & 1 == 1);
        }
    }
    Ok(BoolSolution { u, v })
}

/// Decision version of [`oracle_boolean_min`].
pub fn oracle_boolean(a: &BinaryMatrix, r: usize, k: usize) -> Result<Option<BoolSolution>> {
    let best = oracle_boolean_min(a, r)?;
    Ok((best.cost(a)? <= k).then_some(best))
}

/// Smallest `r` with an exact factorization `A = U ∧ V`.
pub fn boolean_rank_exact(a: &BinaryMatrix) -> Result<usize> {
    if a.weight() == 0 {
        return Ok(0);
    }
    let limit = a.distinct_rows().min(a.distinct_columns());
    for r in 1..limit {
        if oracle_boolean_min(a, r)?.cost(a)? == 0 {
            return Ok(r);
        }
    }
    Ok(limit)
}
