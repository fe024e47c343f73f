use super::{row_groups, BinaryMatrix, BitVector, IndexPartition};
use crate::{Error, Result};

/// True iff `c` is constant on every class of equal rows of `a`.
pub fn agrees_with(c: &BitVector, a: &BinaryMatrix) -> Result<bool> {
    if c.len() != a.rows_count() {
        return Err(Error::dim(format!(
            "vector of length {} against {} rows",
            c.len(),
            a.rows_count()
        )));
    }
    Ok(row_groups(a)
        .parts()
        .iter()
        .all(|g| g.iter().all(|&i| c.get(i) == c.get(g[0]))))
}

/// All vectors obtained from `center` by flipping whole row classes of `a`
/// with at most `radius` flipped entries in total.
pub fn enumerate_agreeing_within(
    a: &BinaryMatrix,
    center: &BitVector,
    radius: usize,
) -> Result<AgreeingVectors> {
    if center.len() != a.rows_count() {
        return Err(Error::dim(format!(
            "vector of length {} against {} rows",
            center.len(),
            a.rows_count()
        )));
    }
    Ok(AgreeingVectors::new(&row_groups(a), center.clone(), radius))
}

/// Depth-first enumeration of row-class flip sets, in lexicographic order of
/// the flipped class indices. The unflipped center comes first.
#[derive(Debug, Clone)]
pub struct AgreeingVectors {
    groups: Vec<Vec<usize>>,
    current: BitVector,
    stack: Vec<usize>,
    remaining: usize,
    started: bool,
    done: bool,
}

impl AgreeingVectors {
    /// Enumerates around `center` using precomputed row classes.
    pub fn new(row_classes: &IndexPartition, center: BitVector, radius: usize) -> Self {
        AgreeingVectors {
            groups: row_classes.parts().to_vec(),
            current: center,
            stack: Vec::new(),
            remaining: radius,
            started: false,
            done: false,
        }
    }

    fn next_group_from(&self, start: usize) -> Option<usize> {
        (start..self.groups.len()).find(|&g| self.groups[g].len() <= self.remaining)
    }

    fn toggle(&mut self, g: usize) {
        for &i in &self.groups[g] {
            self.current.flip(i);
        }
    }

    fn push(&mut self, g: usize) {
        self.toggle(g);
        self.remaining -= self.groups[g].len();
        self.stack.push(g);
    }
}

impl Iterator for AgreeingVectors {
    type Item = BitVector;

    fn next(&mut self) -> Option<BitVector> {
        if self.done {
            return None;
        }
        if !self.started {
            self.started = true;
            return Some(self.current.clone());
        }
        let start = self.stack.last().map_or(0, |&g| g + 1);
        if let Some(g) = self.next_group_from(start) {
            self.push(g);
            return Some(self.current.clone());
        }
        while let Some(g) = self.stack.pop() {
            self.toggle(g);
            self.remaining += self.groups[g].len();
            if let Some(next) = self.next_group_from(g + 1) {
                self.push(next);
                return Some(self.current.clone());
            }
        }
        self.done = true;
        None
    }
}
