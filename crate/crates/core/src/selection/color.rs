//! Color-coding driver for binary means.
//!
//! A regular solution of cost `k` merges at most `2k` equal-column classes
//! into composite clusters. Coloring the classes with `2k` colors, a
//! solution is found whenever its merged classes get distinct colors: each
//! composite cluster then corresponds to a set of colors, and picking one
//! class per color is a Cluster Selection instance.

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{solve_cluster_selection, ClusterSelectionInstance, ClusterSelectionWitness};
use crate::combinatorics::{block_count, SetPartitions};
use crate::matrix::{column_groups, BinaryMatrix, BitVector};
use crate::means::{assign_to_means, distinct_column_clustering, Clustering, MeansInstance};
use crate::{Budget, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColorCodingOptions {
    pub seed: u64,
    /// Random colorings to try; `None` means `ceil(e^(2k))`.
    pub trials: Option<usize>,
    /// Up to this many equal-column classes, colorings are enumerated
    /// exhaustively instead of sampled.
    pub exhaustive_limit: usize,
}

impl Default for ColorCodingOptions {
    fn default() -> Self {
        ColorCodingOptions {
            seed: 0,
            trials: None,
            exhaustive_limit: 8,
        }
    }
}

/// One composite cluster found for a set of colors.
#[derive(Debug, Clone)]
struct Composite {
    cost: usize,
    classes: Vec<usize>,
    mean: BitVector,
}

struct Driver<'a> {
    a: &'a BinaryMatrix,
    classes: Vec<Vec<usize>>,
    r: usize,
    k: usize,
    budget: &'a mut Budget,
    // min-cost composite cluster per tuple of class sets, capped at k
    memo: HashMap<Vec<Vec<usize>>, Option<Composite>>,
}

pub fn color_coding_means(
    inst: &MeansInstance,
    options: &ColorCodingOptions,
    budget: &mut Budget,
) -> Result<Option<Clustering>> {
    let a = inst.matrix();
    let (r, k) = (inst.r(), inst.k());
    let classes = column_groups(a).into_parts();
    let s = classes.len();
    if s <= r {
        return Ok(Some(distinct_column_clustering(a)));
    }
    if s > r + k {
        return Ok(None);
    }
    let colors = 2 * k;
    let mut driver = Driver {
        a,
        classes,
        r,
        k,
        budget,
        memo: HashMap::new(),
    };

    if s <= options.exhaustive_limit {
        // A coloring that separates a solution's merged classes stays
        // separating under any refinement, so colorings with exactly
        // min(s, 2k) colors, up to renaming, are enough.
        if s <= colors {
            let identity: Vec<usize> = (0..s).collect();
            return driver.try_coloring(&identity);
        }
        for coloring in SetPartitions::new(s, colors) {
            if block_count(&coloring) != colors {
                continue;
            }
            if let Some(found) = driver.try_coloring(&coloring)? {
                return Ok(Some(found));
            }
        }
        return Ok(None);
    }

    let trials = options
        .trials
        .unwrap_or_else(|| (2.0 * k as f64).exp().ceil() as usize);
    let mut rng = ChaCha8Rng::seed_from_u64(options.seed);
    for _ in 0..trials {
        let coloring: Vec<usize> = (0..s).map(|_| rng.random_range(0..colors)).collect();
        if let Some(found) = driver.try_coloring(&coloring)? {
            return Ok(Some(found));
        }
    }
    Ok(None)
}

impl Driver<'_> {
    fn try_coloring(&mut self, coloring: &[usize]) -> Result<Option<Clustering>> {
        self.budget.tick()?;
        let used = coloring.iter().map(|&c| c + 1).max().unwrap_or(0);
        let by_color: Vec<Vec<usize>> = (0..used)
            .map(|c| (0..coloring.len()).filter(|&i| coloring[i] == c).collect())
            .filter(|v: &Vec<usize>| !v.is_empty())
            .collect();
        let mut labels = vec![0usize; by_color.len()];
        self.select_rec(&by_color, &mut labels, 0, 0)
    }

    /// Labels each color 0 (unused) or with a composite-cluster index in
    /// restricted-growth order, then evaluates the labeling.
    fn select_rec(
        &mut self,
        by_color: &[Vec<usize>],
        labels: &mut Vec<usize>,
        pos: usize,
        used: usize,
    ) -> Result<Option<Clustering>> {
        if pos == labels.len() {
            return self.evaluate(by_color, labels, used);
        }
        for l in 0..=used + 1 {
            labels[pos] = l;
            if let Some(found) = self.select_rec(by_color, labels, pos + 1, used.max(l))? {
                return Ok(Some(found));
            }
        }
        Ok(None)
    }

    fn evaluate(&mut self, by_color: &[Vec<usize>], labels: &[usize], parts: usize) -> Result<Option<Clustering>> {
        if parts == 0 {
            return Ok(None);
        }
        let blocks: Vec<Vec<usize>> = (1..=parts)
            .map(|p| (0..labels.len()).filter(|&c| labels[c] == p).collect())
            .collect();
        if blocks.iter().any(|b| b.len() < 2) {
            return Ok(None);
        }
        let merged: usize = blocks.iter().map(Vec::len).sum();
        if self.classes.len() - merged + parts > self.r {
            return Ok(None);
        }
        let mut spent = 0;
        let mut composites = Vec::with_capacity(parts);
        for block in &blocks {
            let groups: Vec<Vec<usize>> = block.iter().map(|&c| by_color[c].clone()).collect();
            match self.composite(groups)? {
                Some(found) if spent + found.cost <= self.k => {
                    spent += found.cost;
                    composites.push(found);
                }
                _ => return Ok(None),
            }
        }
        Ok(Some(self.assemble(&composites)?))
    }

    fn assemble(&self, composites: &[Composite]) -> Result<Clustering> {
        let mut in_composite = vec![false; self.classes.len()];
        let mut means = Vec::new();
        for comp in composites {
            for &c in &comp.classes {
                in_composite[c] = true;
            }
            means.push(comp.mean.clone());
        }
        for (c, class) in self.classes.iter().enumerate() {
            if !in_composite[c] {
                means.push(self.a.column(class[0]));
            }
        }
        let clustering = assign_to_means(self.a, &means)?;
        debug_assert!(clustering.cost() <= self.k);
        debug_assert!(clustering.clusters().len() <= self.r);
        Ok(clustering)
    }

    /// Cheapest composite cluster taking one class from each group, if its
    /// cost is at most `k`.
    fn composite(&mut self, groups: Vec<Vec<usize>>) -> Result<Option<Composite>> {
        if let Some(hit) = self.memo.get(&groups) {
            return Ok(hit.clone());
        }
        let found = self.solve_composite(&groups)?;
        self.memo.insert(groups, found.clone());
        Ok(found)
    }

    fn solve_composite(&mut self, groups: &[Vec<usize>]) -> Result<Option<Composite>> {
        let reps: Vec<Vec<BitVector>> = groups
            .iter()
            .map(|g| g.iter().map(|&c| self.a.column(self.classes[c][0])).collect())
            .collect();
        // any mean pays at least the distance between the two classes it
        // serves, for every pair of groups
        let mut lower = 0;
        for x in 0..reps.len() {
            for y in x + 1..reps.len() {
                let closest = reps[x]
                    .iter()
                    .flat_map(|u| reps[y].iter().map(move |v| u.distance(v)))
                    .min()
                    .expect("groups are nonempty");
                lower = lower.max(closest);
            }
        }
        if lower > self.k {
            return Ok(None);
        }

        let mut cols = Vec::new();
        let mut cs_groups = Vec::new();
        for g in groups {
            let mut group = Vec::new();
            for &c in g {
                for &j in &self.classes[c] {
                    group.push(cols.len());
                    cols.push(j);
                }
            }
            cs_groups.push(group);
        }
        let sub = self.a.select_columns(&cols);
        let cs = ClusterSelectionInstance::new(sub, cs_groups, lower).expect("groups are unions of whole classes");
        for d in lower..=self.k {
            if let Some(w) = solve_cluster_selection(&cs.with_d(d), self.budget)? {
                return Ok(Some(self.to_composite(&w, &cols)));
            }
        }
        Ok(None)
    }

    fn to_composite(&self, w: &ClusterSelectionWitness, cols: &[usize]) -> Composite {
        let classes = w
            .chosen
            .iter()
            .map(|class| {
                let j = cols[class[0]];
                self.classes
                    .iter()
                    .position(|cl| cl.contains(&j))
                    .expect("every column has a class")
            })
            .collect();
        Composite {
            cost: w.cost,
            classes,
            mean: w.mean.clone(),
        }
    }
}
