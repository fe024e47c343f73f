//! Small enumeration helpers shared by the exact solvers.

/// Set partitions of `0..n` into at most `max_blocks` blocks, as restricted
/// growth strings: `labels[0] = 0` and each label is at most one more than
/// the largest label before it.
#[derive(Debug, Clone)]
pub struct SetPartitions {
    labels: Vec<usize>,
    max_blocks: usize,
    done: bool,
    started: bool,
}

impl SetPartitions {
    pub fn new(n: usize, max_blocks: usize) -> Self {
        SetPartitions {
            labels: vec![0; n],
            max_blocks,
            // n > 0 needs at least one block; the empty set has one partition
            done: n > 0 && max_blocks == 0,
            started: false,
        }
    }

    fn advance(&mut self) -> bool {
        let n = self.labels.len();
        for i in (1..n).rev() {
            let prefix_max = *self.labels[..i].iter().max().expect("i >= 1");
            let cap = (prefix_max + 1).min(self.max_blocks - 1);
            if self.labels[i] < cap {
                self.labels[i] += 1;
                for l in &mut self.labels[i + 1..] {
                    *l = 0;
                }
                return true;
            }
        }
        false
    }
}

impl Iterator for SetPartitions {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        if self.done {
            return None;
        }
        if !self.started {
            self.started = true;
        } else if !self.advance() {
            self.done = true;
            return None;
        }
        Some(self.labels.clone())
    }
}

/// Number of blocks used by a restricted growth string.
pub fn block_count(labels: &[usize]) -> usize {
    labels.iter().map(|&l| l + 1).max().unwrap_or(0)
}

/// Groups indices by label into `count` blocks.
pub fn blocks_from_labels(labels: &[usize], count: usize) -> Vec<Vec<usize>> {
    let mut blocks = vec![Vec::new(); count];
    for (i, &l) in labels.iter().enumerate() {
        blocks[l].push(i);
    }
    blocks
}

/// All tuples of `parts` positive integers whose sum is at most `max_sum`.
pub fn bounded_compositions(parts: usize, max_sum: usize) -> Vec<Vec<usize>> {
    fn rec(parts: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == parts {
            out.push(cur.clone());
            return;
        }
        let still_needed = parts - cur.len() - 1;
        for v in 1..=left.saturating_sub(still_needed) {
            cur.push(v);
            rec(parts, left - v, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if parts <= max_sum || parts == 0 {
        rec(parts, max_sum, &mut Vec::with_capacity(parts), &mut out);
    }
    out
}

/// All count vectors `c` with `c[i] <= caps[i]` and `sum(c) == total`.
pub fn bounded_multisets(caps: &[usize], total: usize) -> Vec<Vec<usize>> {
    fn rec(caps: &[usize], i: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if i == caps.len() {
            if left == 0 {
                out.push(cur.clone());
            }
            return;
        }
        let rest: usize = caps[i + 1..].iter().sum();
        let lo = left.saturating_sub(rest);
        for c in lo..=caps[i].min(left) {
            cur.push(c);
            rec(caps, i + 1, left - c, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(caps, 0, total, &mut Vec::with_capacity(caps.len()), &mut out);
    out
}

/// `n choose k`, saturating at `u64::MAX`.
pub fn binomial(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc > u64::MAX as u128 {
            return u64::MAX;
        }
    }
    acc as u64
}
