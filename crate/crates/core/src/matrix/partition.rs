use crate::{Error, Result};

/// Partition of `0..universe` into disjoint nonempty parts.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IndexPartition {
    universe: usize,
    parts: Vec<Vec<usize>>,
}

impl IndexPartition {
    /// Validates that `parts` are nonempty, disjoint and cover `0..universe`.
    pub fn new(universe: usize, parts: Vec<Vec<usize>>) -> Result<Self> {
        let mut seen = vec![false; universe];
        for part in &parts {
            if part.is_empty() {
                return Err(Error::usage("partition has an empty part"));
            }
            for &i in part {
                if i >= universe {
                    return Err(Error::usage(format!("index {i} outside universe {universe}")));
                }
                if seen[i] {
                    return Err(Error::usage(format!("index {i} appears twice")));
                }
                seen[i] = true;
            }
        }
        if let Some(missing) = seen.iter().position(|&s| !s) {
            return Err(Error::usage(format!("index {missing} is not covered")));
        }
        Ok(IndexPartition { universe, parts })
    }

    pub(crate) fn from_parts_unchecked(universe: usize, parts: Vec<Vec<usize>>) -> Self {
        debug_assert!(Self::new(universe, parts.clone()).is_ok());
        IndexPartition { universe, parts }
    }

    /// Builds a partition from a label per index; parts are ordered by label
    /// and empty labels are dropped.
    pub fn from_labels(labels: &[usize]) -> Self {
        let count = labels.iter().map(|&l| l + 1).max().unwrap_or(0);
        let mut parts = vec![Vec::new(); count];
        for (i, &l) in labels.iter().enumerate() {
            parts[l].push(i);
        }
        parts.retain(|p| !p.is_empty());
        IndexPartition {
            universe: labels.len(),
            parts,
        }
    }

    pub fn parts(&self) -> &[Vec<usize>] {
        &self.parts
    }

    pub fn into_parts(self) -> Vec<Vec<usize>> {
        self.parts
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    /// Part index of every element.
    pub fn labels(&self) -> Vec<usize> {
        let mut labels = vec![0; self.universe];
        for (p, part) in self.parts.iter().enumerate() {
            for &i in part {
                labels[i] = p;
            }
        }
        labels
    }

    /// Smallest member of each part.
    pub fn representatives(&self) -> Vec<usize> {
        self.parts
            .iter()
            .map(|p| *p.iter().min().expect("parts are nonempty"))
            .collect()
    }
}
