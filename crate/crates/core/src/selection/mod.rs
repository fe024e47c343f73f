//! Cluster Selection: given groups of whole equal-column classes, choose one
//! class per group and a common mean so that the total distance of the
//! chosen columns to the mean is within budget.
//!
//! The exact solver reduces the hard case to Consensus Patterns over
//! {0, 1, a, b}; the color-coding driver for binary means is built on top.

mod color;
mod consensus;

pub use color::{color_coding_means, ColorCodingOptions};
pub use consensus::{
    render, solve_consensus_desk, ConsensusPatternsInstance, ConsensusSolution, Symbol,
    MAX_TOTAL_LENGTH,
};

use std::collections::HashSet;

use crate::combinatorics::bounded_compositions;
use crate::matrix::{column_groups, AgreeingVectors, BinaryMatrix, BitVector};
use crate::means::majority_of;
use crate::{Budget, Error, Result};

/// Upper bound on distinct candidate means the oracle will evaluate.
pub const ORACLE_MAX_CANDIDATES: usize = 1 << 20;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClusterSelectionInstance {
    matrix: BinaryMatrix,
    groups: Vec<Vec<usize>>,
    d: usize,
    // equal-column classes inside each group, ordered by smallest column
    classes: Vec<Vec<Vec<usize>>>,
}

impl ClusterSelectionInstance {
    /// Validates that `groups` partition the columns and that no class of
    /// equal columns is split between groups.
    pub fn new(matrix: BinaryMatrix, groups: Vec<Vec<usize>>, d: usize) -> Result<Self> {
        let n = matrix.cols_count();
        let mut group_of = vec![usize::MAX; n];
        for (g, group) in groups.iter().enumerate() {
            if group.is_empty() {
                return Err(Error::usage("empty group"));
            }
            for &j in group {
                if j >= n || group_of[j] != usize::MAX {
                    return Err(Error::usage(format!("column {j} is out of range or repeated")));
                }
                group_of[j] = g;
            }
        }
        if group_of.contains(&usize::MAX) {
            return Err(Error::usage("groups do not cover every column"));
        }
        let mut classes = vec![Vec::new(); groups.len()];
        for class in column_groups(&matrix).into_parts() {
            let g = group_of[class[0]];
            if class.iter().any(|&j| group_of[j] != g) {
                return Err(Error::usage("a class of equal columns is split between groups"));
            }
            classes[g].push(class);
        }
        Ok(ClusterSelectionInstance {
            matrix,
            groups,
            d,
            classes,
        })
    }

    pub fn matrix(&self) -> &BinaryMatrix {
        &self.matrix
    }

    pub fn groups(&self) -> &[Vec<usize>] {
        &self.groups
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn with_d(&self, d: usize) -> Self {
        ClusterSelectionInstance { d, ..self.clone() }
    }

    /// Equal-column classes of group `g`.
    pub fn classes(&self, g: usize) -> &[Vec<usize>] {
        &self.classes[g]
    }

    /// For a fixed mean, the cheapest class of every group (lowest index on
    /// ties) and the total cost. `allowed` optionally restricts group `g` to
    /// classes of size `allowed[g]`.
    fn best_choice(&self, c: &BitVector, allowed: Option<&[usize]>) -> Option<(Vec<usize>, usize)> {
        let mut total = 0;
        let mut picks = Vec::with_capacity(self.groups.len());
        for (g, classes) in self.classes.iter().enumerate() {
            let best = classes
                .iter()
                .enumerate()
                .filter(|(_, cl)| allowed.is_none_or(|len| cl.len() == len[g]))
                .map(|(i, cl)| (cl.len() * c.distance(&self.matrix.column(cl[0])), i))
                .min()?;
            total += best.0;
            picks.push(best.1);
        }
        Some((picks, total))
    }

    fn witness_from(&self, picks: &[usize], mean: BitVector) -> ClusterSelectionWitness {
        let chosen: Vec<Vec<usize>> = picks
            .iter()
            .enumerate()
            .map(|(g, &i)| self.classes[g][i].clone())
            .collect();
        ClusterSelectionWitness::new(&self.matrix, chosen, mean)
    }
}

/// One class of equal columns per group and the common mean.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClusterSelectionWitness {
    pub chosen: Vec<Vec<usize>>,
    pub mean: BitVector,
    pub cost: usize,
}

impl ClusterSelectionWitness {
    fn new(matrix: &BinaryMatrix, chosen: Vec<Vec<usize>>, mean: BitVector) -> Self {
        let cost = chosen
            .iter()
            .flatten()
            .map(|&j| mean.distance(&matrix.column(j)))
            .sum();
        ClusterSelectionWitness { chosen, mean, cost }
    }

    /// Replaces the mean by the majority of the chosen columns, which never
    /// increases the cost.
    fn with_majority_mean(self, matrix: &BinaryMatrix) -> Self {
        let cols: Vec<BitVector> = self.chosen.iter().flatten().map(|&j| matrix.column(j)).collect();
        let mean = majority_of(matrix.rows_count(), &cols);
        let better = ClusterSelectionWitness::new(matrix, self.chosen.clone(), mean);
        if better.cost <= self.cost {
            better
        } else {
            self
        }
    }

    /// Re-checks the witness against an instance.
    pub fn is_valid_for(&self, cs: &ClusterSelectionInstance) -> bool {
        self.chosen.len() == cs.groups.len()
            && self
                .chosen
                .iter()
                .enumerate()
                .all(|(g, ch)| cs.classes[g].contains(ch))
            && ClusterSelectionWitness::new(&cs.matrix, self.chosen.clone(), self.mean.clone()).cost == self.cost
            && self.cost <= cs.d
    }
}

/// Brute force: every mean that agrees with the matrix and lies within `d`
/// of some class representative, combined with the cheapest class per group.
pub fn oracle_cluster_selection(cs: &ClusterSelectionInstance) -> Result<Option<ClusterSelectionWitness>> {
    oracle_with_lengths(cs, None)
}

/// The oracle restricted to classes of the given sizes, one size per group.
pub fn oracle_cluster_selection_with_lengths(
    cs: &ClusterSelectionInstance,
    lengths: &[usize],
) -> Result<Option<ClusterSelectionWitness>> {
    if lengths.len() != cs.groups.len() {
        return Err(Error::usage("one length per group is required"));
    }
    oracle_with_lengths(cs, Some(lengths))
}

fn oracle_with_lengths(
    cs: &ClusterSelectionInstance,
    lengths: Option<&[usize]>,
) -> Result<Option<ClusterSelectionWitness>> {
    let row_classes = crate::matrix::row_groups(&cs.matrix);
    let mut candidates: HashSet<BitVector> = HashSet::new();
    for classes in &cs.classes {
        for class in classes {
            for v in AgreeingVectors::new(&row_classes, cs.matrix.column(class[0]), cs.d) {
                candidates.insert(v);
                if candidates.len() > ORACLE_MAX_CANDIDATES {
                    return Err(Error::resource("too many candidate means for the oracle"));
                }
            }
        }
    }
    let mut ordered: Vec<BitVector> = candidates.into_iter().collect();
    ordered.sort();
    let mut best: Option<(usize, Vec<usize>, BitVector)> = None;
    for c in ordered {
        if let Some((picks, cost)) = cs.best_choice(&c, lengths) {
            if best.as_ref().is_none_or(|(b, _, _)| cost < *b) {
                best = Some((cost, picks, c));
            }
        }
    }
    Ok(best
        .filter(|(cost, _, _)| *cost <= cs.d)
        .map(|(_, picks, c)| cs.witness_from(&picks, c)))
}

/// Sub-instance keeping only the classes of size `lengths[g]` in group `g`,
/// with the map from its columns back to the original ones.
fn restrict_to_lengths(
    cs: &ClusterSelectionInstance,
    lengths: &[usize],
) -> Option<(ClusterSelectionInstance, Vec<usize>)> {
    let mut cols = Vec::new();
    let mut groups = Vec::new();
    for (g, classes) in cs.classes.iter().enumerate() {
        let mut group = Vec::new();
        for class in classes.iter().filter(|cl| cl.len() == lengths[g]) {
            for &j in class {
                group.push(cols.len());
                cols.push(j);
            }
        }
        if group.is_empty() {
            return None;
        }
        groups.push(group);
    }
    let sub = cs.matrix.select_columns(&cols);
    let restricted = ClusterSelectionInstance::new(sub, groups, cs.d).expect("classes stay whole");
    Some((restricted, cols))
}

/// Builds the Consensus Patterns instance for a length tuple.
///
/// With `x` the alternation of `d+1` blocks `a^(m+d)` and `d+1` blocks
/// `b^(m+d)`, group `g` contributes `lengths[g]` copies of
/// `x c_1 0^d x c_2 0^d x ... c_q 0^d x` over its class representatives
/// `c_i`, and the window length is `t = (m+d)(2d+3) = |x| + m + d`.
pub fn build_consensus_instance(
    cs: &ClusterSelectionInstance,
    lengths: &[usize],
) -> Result<ConsensusPatternsInstance> {
    let p = cs.groups.len();
    let d = cs.d;
    if lengths.len() != p {
        return Err(Error::usage("one length per group is required"));
    }
    if p > d || lengths.iter().sum::<usize>() > d {
        return Err(Error::usage("lengths must sum to at most d and p must be at most d"));
    }
    for (g, classes) in cs.classes.iter().enumerate() {
        if classes.iter().any(|cl| cl.len() != lengths[g]) {
            return Err(Error::usage(format!("group {g} has a class whose size is not {}", lengths[g])));
        }
    }
    let m = cs.matrix.rows_count();
    let block = m + d;
    let mut x = Vec::with_capacity(2 * block * (d + 1));
    for _ in 0..=d {
        x.extend(std::iter::repeat_n(Symbol::A, block));
        x.extend(std::iter::repeat_n(Symbol::B, block));
    }
    let mut strings = Vec::new();
    for (g, classes) in cs.classes.iter().enumerate() {
        let mut s = x.clone();
        for class in classes {
            let col = cs.matrix.column(class[0]);
            s.extend(col.iter().map(Symbol::from_bit));
            s.extend(std::iter::repeat_n(Symbol::Zero, d));
            s.extend_from_slice(&x);
        }
        strings.extend(std::iter::repeat_n(s, lengths[g]));
    }
    Ok(ConsensusPatternsInstance {
        strings,
        t: block * (2 * d + 3),
        d,
    })
}

/// Reads a mean off a consensus pattern: some offset holds the mean's `m`
/// bits (non-binary symbols there can be read as 0 without loss).
fn recover(
    cs: &ClusterSelectionInstance,
    pattern: &[Symbol],
    lengths: &[usize],
) -> Option<ClusterSelectionWitness> {
    let m = cs.matrix.rows_count();
    (0..=pattern.len().saturating_sub(m)).find_map(|alpha| {
        let c = BitVector::from_fn(m, |i| pattern[alpha + i] == Symbol::One);
        let (picks, cost) = cs.best_choice(&c, Some(lengths))?;
        (cost <= cs.d).then(|| cs.witness_from(&picks, c))
    })
}

/// Exact Cluster Selection.
///
/// First tries every column as the mean. If that fails and there are more
/// groups than budget, the answer is no. Otherwise every tuple of chosen
/// class sizes is turned into a Consensus Patterns instance and solved.
pub fn solve_cluster_selection(
    cs: &ClusterSelectionInstance,
    budget: &mut Budget,
) -> Result<Option<ClusterSelectionWitness>> {
    let a = &cs.matrix;
    let mut best: Option<(usize, Vec<usize>, BitVector)> = None;
    for c in column_groups(a).representatives().iter().map(|&j| a.column(j)) {
        budget.tick()?;
        if let Some((picks, cost)) = cs.best_choice(&c, None) {
            if best.as_ref().is_none_or(|(b, _, _)| cost < *b) {
                best = Some((cost, picks, c));
            }
        }
    }
    if let Some((cost, picks, c)) = best {
        if cost <= cs.d {
            return Ok(Some(cs.witness_from(&picks, c).with_majority_mean(a)));
        }
    }

    let p = cs.groups.len();
    if p > cs.d {
        return Ok(None);
    }

    let tuples = bounded_compositions(p, cs.d);
    assert!(tuples.len() as u128 <= 1u128 << (cs.d + p), "length tuple count exceeds 2^(d+p)");
    for lengths in tuples {
        let Some((restricted, cols)) = restrict_to_lengths(cs, &lengths) else {
            continue;
        };
        let cp = build_consensus_instance(&restricted, &lengths)?;
        let Some(sol) = solve_consensus_desk(&cp, budget)? else {
            continue;
        };
        let found = recover(&restricted, &sol.pattern, &lengths);
        debug_assert!(found.is_some(), "consensus solution without a readable mean");
        if let Some(w) = found {
            let chosen = w
                .chosen
                .iter()
                .map(|class| class.iter().map(|&j| cols[j]).collect())
                .collect();
            let lifted = ClusterSelectionWitness::new(a, chosen, w.mean).with_majority_mean(a);
            debug_assert!(lifted.cost <= cs.d);
            return Ok(Some(lifted));
        }
    }
    Ok(None)
}
