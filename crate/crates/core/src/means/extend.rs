//! Subexponential search that grows a set of means one vector at a time.
//!
//! State is `(I, S, d)`: the columns `I` still to be covered, the means `S`
//! chosen so far, and the remaining budget `d`. Columns already close to `S`
//! are settled greedily; small residual sets are solved by enumerating their
//! partitions; otherwise the search branches on a new mean close to some
//! uncovered column. Candidate means are restricted to vectors that agree
//! with the matrix.

use std::collections::HashSet;

use super::{
    assign_to_means, distinct_column_clustering, kernelize_means, majority_of, Clustering,
    KernelOutcome, MeansInstance,
};
use crate::matrix::{column_groups, row_groups, AgreeingVectors, BitVector, IndexPartition};
use crate::{Budget, Result};

/// Decides the instance after kernelization; returns a witness clustering of
/// the original matrix.
pub fn extend_means(inst: &MeansInstance) -> Option<Clustering> {
    extend_means_budgeted(inst, &mut Budget::unlimited()).expect("unlimited budget")
}

/// [`extend_means`] under a node budget.
pub fn extend_means_budgeted(inst: &MeansInstance, budget: &mut Budget) -> Result<Option<Clustering>> {
    match kernelize_means(inst) {
        KernelOutcome::SolvedYes(c) => Ok(Some(c)),
        KernelOutcome::SolvedNo => Ok(None),
        KernelOutcome::Reduced(kernel) => {
            let Some(found) = search(&kernel.instance, budget)? else {
                return Ok(None);
            };
            let lifted = kernel.lift(inst.matrix(), &found)?;
            debug_assert!(lifted.cost() <= inst.k());
            Ok(Some(lifted))
        }
    }
}

/// The same recursion run directly on the input, without kernelization.
pub fn extend_means_unkernelized(inst: &MeansInstance, budget: &mut Budget) -> Result<Option<Clustering>> {
    if column_groups(inst.matrix()).len() <= inst.r() {
        return Ok(Some(distinct_column_clustering(inst.matrix())));
    }
    search(inst, budget)
}

fn search(inst: &MeansInstance, budget: &mut Budget) -> Result<Option<Clustering>> {
    let a = inst.matrix();
    let row_classes = row_groups(a);
    let w = row_classes.len().max(1);
    let mut solver = Search {
        cols: a.columns(),
        m: a.rows_count(),
        row_classes,
        r: inst.r(),
        log_w: (w as f64).log2(),
        budget,
    };
    let all: Vec<usize> = (0..a.cols_count()).collect();
    let Some(means) = solver.run(all, Vec::new(), inst.k() as i64)? else {
        return Ok(None);
    };
    let clustering = assign_to_means(a, &means)?;
    debug_assert!(clustering.cost() <= inst.k());
    debug_assert!(clustering.clusters().len() <= inst.r());
    Ok(Some(clustering))
}

struct Search<'a> {
    cols: Vec<BitVector>,
    m: usize,
    row_classes: IndexPartition,
    r: usize,
    log_w: f64,
    budget: &'a mut Budget,
}

impl Search<'_> {
    fn distance_to(&self, means: &[BitVector], j: usize) -> Option<usize> {
        means.iter().map(|c| c.distance(&self.cols[j])).min()
    }

    fn cover_cost(&self, active: &[usize], means: &[BitVector]) -> Option<usize> {
        active.iter().map(|&j| self.distance_to(means, j)).sum()
    }

    fn run(&mut self, mut active: Vec<usize>, means: Vec<BitVector>, mut d: i64) -> Result<Option<Vec<BitVector>>> {
        self.budget.tick()?;
        if d < 0 {
            return Ok(None);
        }
        // Step 1: the current means already cover the remaining columns.
        if let Some(cost) = self.cover_cost(&active, &means) {
            if cost as i64 <= d {
                return Ok(Some(means));
            }
        } else if active.is_empty() {
            return Ok(Some(means));
        }
        // Step 2: no room for another mean.
        if means.len() == self.r {
            return Ok(None);
        }
        let mut h: i64 = 0;
        while h <= d {
            // (i) settle columns within h-1 of the current means; removals
            // accumulate across iterations of h.
            if h >= 1 && !means.is_empty() {
                let mut kept = Vec::with_capacity(active.len());
                for &j in &active {
                    let dist = self.distance_to(&means, j).expect("means nonempty") as i64;
                    if dist < h {
                        d -= dist;
                    } else {
                        kept.push(j);
                    }
                }
                active = kept;
                debug_assert!(active
                    .iter()
                    .all(|&j| self.distance_to(&means, j).expect("means nonempty") as i64 >= h));
                if d < 0 {
                    return Ok(None);
                }
            }
            // (ii) few columns left: enumerate their partitions.
            if (active.len() as f64) <= (d as f64 * self.log_w).sqrt() {
                return self.partitions(&active, &means, d);
            }
            // (iii) branch on a new mean at distance exactly h from a column.
            if h * active.len() as i64 <= d {
                let mut seen: HashSet<BitVector> = means.iter().cloned().collect();
                let mut centers: HashSet<&BitVector> = HashSet::new();
                let mut candidates = Vec::new();
                for &j in &active {
                    if !centers.insert(&self.cols[j]) {
                        continue;
                    }
                    let around = AgreeingVectors::new(&self.row_classes, self.cols[j].clone(), h as usize);
                    for s in around {
                        if s.distance(&self.cols[j]) as i64 == h && seen.insert(s.clone()) {
                            candidates.push(s);
                        }
                    }
                }
                for s in candidates {
                    let mut next = means.clone();
                    next.push(s);
                    if let Some(found) = self.run(active.clone(), next, d)? {
                        return Ok(Some(found));
                    }
                }
            }
            h += 1;
        }
        Ok(None)
    }

    /// Tries every split of `active` into a part kept by the current means
    /// and at most `r - |S|` new parts with majority means.
    fn partitions(&mut self, active: &[usize], means: &[BitVector], d: i64) -> Result<Option<Vec<BitVector>>> {
        let max_new = active.len().min(self.r - means.len());
        let mut labels = vec![0usize; active.len()];
        self.label_rec(active, means, d, max_new, &mut labels, 0, 0)
    }

    #[allow(clippy::too_many_arguments)]
    fn label_rec(
        &mut self,
        active: &[usize],
        means: &[BitVector],
        d: i64,
        max_new: usize,
        labels: &mut Vec<usize>,
        pos: usize,
        used: usize,
    ) -> Result<Option<Vec<BitVector>>> {
        if pos == active.len() {
            self.budget.tick()?;
            let mut all = means.to_vec();
            for part in 1..=used {
                let members = active
                    .iter()
                    .zip(labels.iter())
                    .filter(|&(_, &l)| l == part)
                    .map(|(&j, _)| &self.cols[j]);
                all.push(majority_of(self.m, members));
            }
            let ok = match self.cover_cost(active, &all) {
                Some(cost) => cost as i64 <= d,
                None => active.is_empty(),
            };
            return Ok(ok.then_some(all));
        }
        // label 0 keeps the column with the existing means; positive labels
        // follow restricted growth so each partition is produced once
        for l in 0..=(used + 1).min(max_new) {
            labels[pos] = l;
            if let Some(found) = self.label_rec(active, means, d, max_new, labels, pos + 1, used.max(l))? {
                return Ok(Some(found));
            }
        }
        Ok(None)
    }
}
