//! Subexponential search for `P`-matrix approximation.
//!
//! Columns are split into `X` (fixed, already edited), `Y` (pattern
//! representatives still to fix) and `Z` (columns that will copy some
//! representative). The search fixes `Y` columns one at a time, settles `Z`
//! columns that sit close to `X`, and finishes small residual instances by
//! enumerating representative rows and their fillings.

use itertools::Itertools;

use super::{is_p_matrix, PMatrixWitness, PatternMatrix};
use crate::combinatorics::bounded_multisets;
use crate::matrix::{column_groups, row_groups, BinaryMatrix};
use crate::{Budget, Error, Result};

/// Largest number of free cells the extendable solver fills exhaustively.
const MAX_FREE_CELLS: usize = 24;

/// A matrix, a pattern, a partition `{X, Y, Z}` of the columns with
/// `|X| + |Y| = q`, and a budget `k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtendablePInstance {
    matrix: BinaryMatrix,
    pattern: PatternMatrix,
    x: Vec<usize>,
    y: Vec<usize>,
    z: Vec<usize>,
    k: usize,
}

impl ExtendablePInstance {
    pub fn new(
        matrix: BinaryMatrix,
        pattern: PatternMatrix,
        x: Vec<usize>,
        y: Vec<usize>,
        z: Vec<usize>,
        k: usize,
    ) -> Result<Self> {
        let n = matrix.cols_count();
        let mut seen = vec![false; n];
        for &j in x.iter().chain(&y).chain(&z) {
            if j >= n || std::mem::replace(&mut seen[j], true) {
                return Err(Error::usage(format!("column {j} is out of range or repeated")));
            }
        }
        if seen.iter().any(|&s| !s) {
            return Err(Error::usage("X, Y and Z must cover every column"));
        }
        if x.len() + y.len() != pattern.q() {
            return Err(Error::usage("|X| + |Y| must equal the pattern width"));
        }
        Ok(ExtendablePInstance { matrix, pattern, x, y, z, k })
    }
}

/// Decides the extendable problem: is there a `B` equal to `A` on `X`,
/// within `k` of `A`, such that both `B` and `B[., X ∪ Y]` are
/// `P`-matrices?
pub fn solve_extendable(ep: &ExtendablePInstance, budget: &mut Budget) -> Result<Option<PMatrixWitness>> {
    let b = extendable(&ep.matrix, &ep.pattern, &ep.x, &ep.y, &ep.z, ep.k, budget)?;
    Ok(b.map(|b| is_p_matrix(&b, &ep.pattern).expect("solutions are P-matrices")))
}

fn extendable(
    a: &BinaryMatrix,
    pattern: &PatternMatrix,
    x: &[usize],
    y: &[usize],
    z: &[usize],
    k: usize,
    budget: &mut Budget,
) -> Result<Option<BinaryMatrix>> {
    let (m, n) = a.shape();
    let (p, q) = (pattern.p(), pattern.q());
    if m < p || n < q || a.distinct_rows() > p + k || a.distinct_columns() > q + k {
        return Ok(None);
    }
    let free: Vec<usize> = y.iter().chain(z).copied().collect();
    let cells = p * free.len();
    if cells > MAX_FREE_CELLS {
        return Err(Error::resource(format!("{cells} free cells exceed {MAX_FREE_CELLS}")));
    }
    let xy: Vec<usize> = x.iter().chain(y).copied().collect();
    let rows = a.rows();
    let classes = row_groups(a);
    let caps: Vec<usize> = classes.parts().iter().map(Vec::len).collect();

    for counts in bounded_multisets(&caps, p) {
        let reps: Vec<usize> = classes
            .parts()
            .iter()
            .zip(&counts)
            .flat_map(|(class, &c)| class.iter().take(c).copied())
            .collect();
        for fill in 0u64..1 << cells {
            budget.tick()?;
            let mut head = a.select_rows(&reps);
            for (t, _) in reps.iter().enumerate() {
                for (f, &j) in free.iter().enumerate() {
                    head.set(t, j, fill >> (t * free.len() + f) & 1 == 1);
                }
            }
            let mut cost: usize = reps.iter().enumerate().map(|(t, &i)| head.row(t).distance(&rows[i])).sum();
            if cost > k {
                continue;
            }
            // every other row copies the nearest head row that matches it on X
            let mut copy_of = vec![usize::MAX; m];
            for (t, &i) in reps.iter().enumerate() {
                copy_of[i] = t;
            }
            let mut feasible = true;
            for i in 0..m {
                if copy_of[i] != usize::MAX {
                    continue;
                }
                let best = (0..p)
                    .filter(|&t| x.iter().all(|&j| head.get(t, j) == a.get(i, j)))
                    .map(|t| (head.row(t).distance(&rows[i]), t))
                    .min();
                match best {
                    Some((d, t)) => {
                        cost += d;
                        copy_of[i] = t;
                    }
                    None => feasible = false,
                }
                if !feasible || cost > k {
                    break;
                }
            }
            if !feasible || cost > k {
                continue;
            }
            if is_p_matrix(&head, pattern).is_none() || is_p_matrix(&head.select_columns(&xy), pattern).is_none() {
                continue;
            }
            let b = head.select_rows(&copy_of);
            return Ok(Some(b));
        }
    }
    Ok(None)
}

pub fn extend_p_solution(a: &BinaryMatrix, pattern: &PatternMatrix, k: usize) -> Option<PMatrixWitness> {
    extend_p_solution_budgeted(a, pattern, k, &mut Budget::unlimited()).expect("unlimited budget")
}

pub fn extend_p_solution_budgeted(
    a: &BinaryMatrix,
    pattern: &PatternMatrix,
    k: usize,
    budget: &mut Budget,
) -> Result<Option<PMatrixWitness>> {
    let (m, n) = a.shape();
    let (p, q) = (pattern.p(), pattern.q());
    if p > m || q > n || a.distinct_rows() > p + k || a.distinct_columns() > q + k {
        return Ok(None);
    }
    // Rows repeated more than p + k times keep only p + k copies.
    let classes = row_groups(a);
    let mut kept: Vec<usize> = classes
        .parts()
        .iter()
        .flat_map(|class| class.iter().take(p + k).copied())
        .collect();
    kept.sort_unstable();
    let reduced = a.select_rows(&kept);

    let col_classes = column_groups(&reduced);
    let caps: Vec<usize> = col_classes.parts().iter().map(Vec::len).collect();
    let mut search = Search { pattern, budget };
    for counts in bounded_multisets(&caps, q) {
        let mut y = Vec::new();
        let mut z = Vec::new();
        for (class, &c) in col_classes.parts().iter().zip(&counts) {
            y.extend(class.iter().take(c));
            z.extend(class.iter().skip(c));
        }
        let Some(b) = search.run(reduced.clone(), Vec::new(), y, z, Vec::new(), k as i64)? else {
            continue;
        };
        let lifted = lift_rows(a, &kept, &reduced, &b);
        let w = is_p_matrix(&lifted, pattern).expect("lifted solution stays a P-matrix");
        debug_assert!(w.is_witness_for(a, pattern, k));
        return Ok(Some(w));
    }
    Ok(None)
}

/// Restores dropped duplicate rows: each copies an unedited kept row of its
/// class, which exists because at most `k` rows are edited.
fn lift_rows(a: &BinaryMatrix, kept: &[usize], reduced: &BinaryMatrix, b: &BinaryMatrix) -> BinaryMatrix {
    let rows: Vec<_> = (0..a.rows_count())
        .map(|i| match kept.binary_search(&i) {
            Ok(t) => b.row(t).clone(),
            Err(_) => {
                let t = (0..kept.len())
                    .find(|&t| reduced.row(t) == a.row(i) && b.row(t) == reduced.row(t))
                    .expect("an unedited copy survives");
                b.row(t).clone()
            }
        })
        .collect();
    BinaryMatrix::from_rows(a.cols_count(), rows).expect("rows have the right length")
}

struct Search<'a> {
    pattern: &'a PatternMatrix,
    budget: &'a mut Budget,
}

fn nearest_in(a: &BinaryMatrix, x: &[usize], i: usize) -> Option<(usize, usize)> {
    let col = a.column(i);
    x.iter().map(|&j| (a.column(j).distance(&col), j)).min()
}

/// Copies each settled column from its source in `X`.
fn fill_settled(b: &mut BinaryMatrix, settled: &[(usize, usize)]) {
    for &(i, j) in settled {
        let col = b.column(j);
        b.set_column(i, &col);
    }
}

impl Search<'_> {
    /// Returns the full solution matrix on success; `settled` lists `Z`
    /// columns already assigned to copy an `X` column.
    fn run(
        &mut self,
        a: BinaryMatrix,
        x: Vec<usize>,
        y: Vec<usize>,
        mut z: Vec<usize>,
        mut settled: Vec<(usize, usize)>,
        mut k: i64,
    ) -> Result<Option<BinaryMatrix>> {
        self.budget.tick()?;
        // Step 1
        if y.is_empty() {
            if is_p_matrix(&a.select_columns(&x), self.pattern).is_none() {
                return Ok(None);
            }
            let mut total = 0i64;
            for &i in &z {
                let (d, j) = nearest_in(&a, &x, i).expect("X holds q >= 1 columns");
                total += d as i64;
                settled.push((i, j));
            }
            if total > k {
                return Ok(None);
            }
            let mut b = a;
            fill_settled(&mut b, &settled);
            return Ok(Some(b));
        }
        // Step 2
        let mut h: i64 = 0;
        while h <= k {
            // (i)
            let mut kept = Vec::with_capacity(z.len());
            for &i in &z {
                match nearest_in(&a, &x, i) {
                    Some((d, j)) if d as i64 <= h => {
                        k -= d as i64;
                        settled.push((i, j));
                    }
                    _ => kept.push(i),
                }
            }
            z = kept;
            if k < 0 {
                return Ok(None);
            }
            // (ii)
            let free = y.len() + z.len();
            let threshold = (k as f64 * (self.pattern.p() as f64 + k as f64).log2()).sqrt();
            if (free as f64) <= threshold {
                let cols: Vec<usize> = x.iter().chain(&y).chain(&z).copied().collect();
                let sub = a.select_columns(&cols);
                let (nx, ny) = (x.len(), y.len());
                let local = |r: std::ops::Range<usize>| r.collect::<Vec<_>>();
                let found = extendable(
                    &sub,
                    self.pattern,
                    &local(0..nx),
                    &local(nx..nx + ny),
                    &local(nx + ny..cols.len()),
                    k as usize,
                    self.budget,
                )?;
                let Some(bsub) = found else {
                    return Ok(None);
                };
                let mut b = a;
                for (t, &c) in cols.iter().enumerate() {
                    b.set_column(c, &bsub.column(t));
                }
                fill_settled(&mut b, &settled);
                return Ok(Some(b));
            }
            // (iii)
            if h * free as i64 <= k {
                for (pos, &i) in y.iter().enumerate() {
                    for flips in (0..a.rows_count()).combinations(h as usize) {
                        let mut next = a.clone();
                        for &row in &flips {
                            next.flip(row, i);
                        }
                        let mut nx = x.clone();
                        nx.push(i);
                        let mut ny = y.clone();
                        ny.remove(pos);
                        if let Some(b) = self.run(next, nx, ny, z.clone(), settled.clone(), k - h)? {
                            return Ok(Some(b));
                        }
                    }
                }
            }
            h += 1;
        }
        Ok(None)
    }
}
