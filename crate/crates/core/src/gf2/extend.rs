//! Subexponential recursion growing an independent set `S` of vectors that
//! agree with the matrix.
//!
//! State is `(I, S, d)`. Columns already within `h - 1` of `span(S)` are
//! settled; when few columns remain the rest is decided by enumerating the
//! row space of the augmented matrix `[S | Â^I]`; otherwise the search
//! branches on a new vector at distance exactly `h` from a remaining column.

use std::collections::HashSet;

use super::{preprocess_gf2, span_of, Gf2Instance, Gf2Solution};
use crate::matrix::{row_groups, AgreeingVectors, BitVector, Gf2Basis};
use crate::{Budget, Error, IndexPartition, Result};

/// Largest residual column set the row-space enumeration accepts.
const MAX_RESIDUAL: usize = 24;

pub fn extend_solution_gf2(inst: &Gf2Instance) -> Option<Gf2Solution> {
    extend_solution_gf2_budgeted(inst, &mut Budget::unlimited()).expect("unlimited budget")
}

pub fn extend_solution_gf2_budgeted(inst: &Gf2Instance, budget: &mut Budget) -> Result<Option<Gf2Solution>> {
    let Some(inst) = preprocess_gf2(inst) else {
        return Ok(None);
    };
    let a = inst.matrix();
    let r = inst.r();
    let mut search = Search {
        cols: a.columns(),
        m: a.rows_count(),
        row_classes: row_groups(a),
        r,
        pow_r: 2f64.powi(r.min(1000) as i32),
        budget,
    };
    let all: Vec<usize> = (0..a.cols_count()).collect();
    let Some(vectors) = search.run(all, Vec::new(), inst.k() as i64)? else {
        return Ok(None);
    };
    let sol = Gf2Solution::from_vectors(a, &vectors)?;
    debug_assert!(sol.is_witness_for(a, r, inst.k()));
    Ok(Some(sol))
}

struct Search<'a> {
    cols: Vec<BitVector>,
    m: usize,
    row_classes: IndexPartition,
    r: usize,
    pow_r: f64,
    budget: &'a mut Budget,
}

/// Distance from `v` to the nearest vector of a span (the zero vector when
/// the span is empty).
fn span_distance(span: &[(BitVector, u64)], v: &BitVector) -> usize {
    span.iter().map(|(s, _)| s.distance(v)).min().unwrap_or(v.weight())
}

impl Search<'_> {
    fn run(&mut self, mut active: Vec<usize>, s: Vec<BitVector>, mut d: i64) -> Result<Option<Vec<BitVector>>> {
        self.budget.tick()?;
        let span = span_of(&s)?;
        // Step 1
        let cover: usize = active.iter().map(|&j| span_distance(&span, &self.cols[j])).sum();
        if cover as i64 <= d {
            return Ok(Some(s));
        }
        // Step 2
        if s.len() == self.r {
            return Ok(None);
        }
        let mut basis = Gf2Basis::new(self.m);
        for v in &s {
            basis.insert(v);
        }
        let mut h: i64 = 0;
        while h <= d {
            // (i)
            if h >= 1 {
                let mut kept = Vec::with_capacity(active.len());
                for &j in &active {
                    let dist = span_distance(&span, &self.cols[j]) as i64;
                    if dist < h {
                        d -= dist;
                    } else {
                        kept.push(j);
                    }
                }
                active = kept;
                if d < 0 {
                    return Ok(None);
                }
            }
            // (ii)
            let threshold = (d as f64 * (self.pow_r + d as f64).log2()).sqrt();
            if (active.len() as f64) <= threshold {
                return self.row_space(&active, &s, d);
            }
            // (iii)
            if h * active.len() as i64 <= d {
                let mut seen: HashSet<BitVector> = HashSet::new();
                let mut centers: HashSet<&BitVector> = HashSet::new();
                let mut candidates = Vec::new();
                for &j in &active {
                    if !centers.insert(&self.cols[j]) {
                        continue;
                    }
                    let around = AgreeingVectors::new(&self.row_classes, self.cols[j].clone(), h as usize);
                    for v in around {
                        if v.distance(&self.cols[j]) as i64 == h && basis.is_independent(&v) && seen.insert(v.clone()) {
                            candidates.push(v);
                        }
                    }
                }
                for v in candidates {
                    let mut next = s.clone();
                    next.push(v);
                    if let Some(found) = self.run(active.clone(), next, d)? {
                        return Ok(Some(found));
                    }
                }
            }
            h += 1;
        }
        Ok(None)
    }

    /// Decides whether some `Â^I` within `d` of `A^I` keeps
    /// `rank([S | Â^I]) <= r`.
    ///
    /// Since the columns of `S` are independent, the row space of the
    /// augmented matrix projects onto all of `{0,1}^p`. It therefore has a
    /// basis of `p` rows `(e_j | y_j)` plus at most `r - p` rows `(0 | z)`,
    /// and row `i` of `Â^I` must be `sum_{j in s_i} y_j + z` for some `z`
    /// in the span of the `z` rows. Enumerating `y` and `z` in this form
    /// visits every candidate row space exactly once up to the choice of
    /// `y` modulo `span(z)`.
    fn row_space(&mut self, active: &[usize], s: &[BitVector], d: i64) -> Result<Option<Vec<BitVector>>> {
        let q = active.len();
        let p = s.len();
        if q > MAX_RESIDUAL {
            return Err(Error::resource(format!("row-space enumeration over {q} columns")));
        }
        // distinct (s_i, a_i^I) row pairs with multiplicities
        let mut rows: Vec<(u64, u64, usize)> = Vec::new();
        for i in 0..self.m {
            let x = (0..p).fold(0u64, |acc, t| acc | (s[t].get(i) as u64) << t);
            let y = (0..q).fold(0u64, |acc, t| acc | (self.cols[active[t]].get(i) as u64) << t);
            match rows.iter_mut().find(|(rx, ry, _)| *rx == x && *ry == y) {
                Some(entry) => entry.2 += 1,
                None => rows.push((x, y, 1)),
            }
        }
        let extra = (self.r - p).min(q);
        let full = 1u64 << q;
        let mut ys = vec![0u64; p];
        let mut zs: Vec<u64> = Vec::new();
        let found = self.enumerate_y(&rows, &mut ys, 0, &mut zs, extra, full, d)?;
        let Some((ys, zs)) = found else {
            return Ok(None);
        };
        // rebuild Â^I and return a basis of the column space of [S | Â^I]
        let zspan = subspace(&zs);
        let mut hat = vec![BitVector::zeros(self.m); q];
        for i in 0..self.m {
            let x = (0..p).fold(0u64, |acc, t| acc | (s[t].get(i) as u64) << t);
            let a = (0..q).fold(0u64, |acc, t| acc | (self.cols[active[t]].get(i) as u64) << t);
            let base = combine(&ys, x);
            let best = zspan
                .iter()
                .map(|&z| base ^ z)
                .min_by_key(|v| (v ^ a).count_ones())
                .expect("span contains zero");
            for (t, col) in hat.iter_mut().enumerate() {
                col.set(i, best >> t & 1 == 1);
            }
        }
        let mut echelon = Gf2Basis::new(self.m);
        let mut out = Vec::new();
        for v in s.iter().chain(hat.iter()) {
            if echelon.insert(v) {
                out.push(v.clone());
            }
        }
        debug_assert!(out.len() <= self.r);
        Ok(Some(out))
    }

    #[allow(clippy::too_many_arguments)]
    fn enumerate_y(
        &mut self,
        rows: &[(u64, u64, usize)],
        ys: &mut Vec<u64>,
        pos: usize,
        zs: &mut Vec<u64>,
        extra: usize,
        full: u64,
        d: i64,
    ) -> Result<Option<(Vec<u64>, Vec<u64>)>> {
        if pos == ys.len() {
            return self.enumerate_z(rows, ys, zs, 1, extra, full, d);
        }
        for y in 0..full {
            ys[pos] = y;
            if let Some(found) = self.enumerate_y(rows, ys, pos + 1, zs, extra, full, d)? {
                return Ok(Some(found));
            }
        }
        Ok(None)
    }

    /// Independent `z` rows in increasing order; a larger span never costs
    /// more, so only spans of the maximal dimension `extra` are scored.
    #[allow(clippy::too_many_arguments)]
    fn enumerate_z(
        &mut self,
        rows: &[(u64, u64, usize)],
        ys: &[u64],
        zs: &mut Vec<u64>,
        next: u64,
        extra: usize,
        full: u64,
        d: i64,
    ) -> Result<Option<(Vec<u64>, Vec<u64>)>> {
        if zs.len() == extra {
            self.budget.tick()?;
            let zspan = subspace(zs);
            let mut cost = 0i64;
            for &(x, a, count) in rows {
                let base = combine(ys, x);
                let best = zspan.iter().map(|&z| (base ^ z ^ a).count_ones()).min().expect("nonempty");
                cost += (best as usize * count) as i64;
                if cost > d {
                    return Ok(None);
                }
            }
            return Ok(Some((ys.to_vec(), zs.clone())));
        }
        for z in next..full {
            if subspace(zs).contains(&z) {
                continue;
            }
            zs.push(z);
            let found = self.enumerate_z(rows, ys, zs, z + 1, extra, full, d)?;
            zs.pop();
            if found.is_some() {
                return Ok(found);
            }
        }
        Ok(None)
    }
}

fn combine(ys: &[u64], x: u64) -> u64 {
    ys.iter().enumerate().filter(|&(t, _)| x >> t & 1 == 1).fold(0, |acc, (_, &y)| acc ^ y)
}

fn subspace(gens: &[u64]) -> Vec<u64> {
    let mut span = vec![0u64];
    for &g in gens {
        let doubled: Vec<u64> = span.iter().map(|&s| s ^ g).collect();
        span.extend(doubled);
    }
    span
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf2::{branch_gf2, oracle_gf2};
    use crate::BinaryMatrix;

    #[test]
    fn identity_two_rank_one() {
        let id = BinaryMatrix::identity(2);
        assert!(extend_solution_gf2(&Gf2Instance::new(id.clone(), 1, 0).unwrap()).is_none());
        let sol = extend_solution_gf2(&Gf2Instance::new(id.clone(), 1, 1).unwrap()).unwrap();
        assert!(sol.is_witness_for(&id, 1, 1));
    }

    #[test]
    fn low_rank_input_costs_nothing() {
        let a = BinaryMatrix::parse_rows(&["110", "011", "101"]).unwrap();
        let sol = extend_solution_gf2(&Gf2Instance::new(a.clone(), 2, 0).unwrap()).unwrap();
        assert_eq!(sol.cost(&a).unwrap(), 0);
    }

    #[test]
    fn all_solvers_agree_on_random_5x5() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..40 {
            let a = BinaryMatrix::from_fn(5, 5, |_, _| rng.random_bool(0.5));
            for r in 1..=2 {
                for k in 0..=4 {
                    let inst = Gf2Instance::new(a.clone(), r, k).unwrap();
                    let want = oracle_gf2(&inst).unwrap().is_some();
                    let ext = extend_solution_gf2(&inst);
                    assert_eq!(ext.is_some(), want, "{a:?} r={r} k={k}");
                    if let Some(sol) = ext {
                        assert!(sol.is_witness_for(&a, r, k));
                    }
                    let br = branch_gf2(&inst);
                    assert_eq!(br.is_some(), want);
                }
            }
        }
    }
}
