//! Consensus Patterns over the alphabet {0, 1, a, b}: pick one length-`t`
//! window per string and a pattern minimizing the total Hamming distance.

use std::fmt;

use crate::{Budget, Error, Result};

/// Upper bound on the summed length of all input strings.
pub const MAX_TOTAL_LENGTH: usize = 250_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[repr(u8)]
pub enum Symbol {
    Zero = 0,
    One = 1,
    A = 2,
    B = 3,
}

impl Symbol {
    pub fn from_bit(bit: bool) -> Self {
        if bit {
            Symbol::One
        } else {
            Symbol::Zero
        }
    }

    fn index(self) -> usize {
        self as usize
    }

    fn from_index(i: usize) -> Self {
        [Symbol::Zero, Symbol::One, Symbol::A, Symbol::B][i]
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = match self {
            Symbol::Zero => '0',
            Symbol::One => '1',
            Symbol::A => 'a',
            Symbol::B => 'b',
        };
        write!(f, "{c}")
    }
}

/// Renders a symbol string compactly, for diagnostics.
pub fn render(s: &[Symbol]) -> String {
    s.iter().map(ToString::to_string).collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConsensusPatternsInstance {
    pub strings: Vec<Vec<Symbol>>,
    pub t: usize,
    pub d: usize,
}

/// A pattern, the window start chosen in each string, and the total cost.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConsensusSolution {
    pub pattern: Vec<Symbol>,
    pub offsets: Vec<usize>,
    pub cost: usize,
}

impl ConsensusPatternsInstance {
    /// Total distance of `pattern` to the windows starting at `offsets`.
    pub fn cost_of(&self, pattern: &[Symbol], offsets: &[usize]) -> Option<usize> {
        if pattern.len() != self.t || offsets.len() != self.strings.len() {
            return None;
        }
        let mut total = 0;
        for (s, &o) in self.strings.iter().zip(offsets) {
            let window = s.get(o..o + self.t)?;
            total += window.iter().zip(pattern).filter(|(x, y)| x != y).count();
        }
        Some(total)
    }
}

/// Per-position symbol counts of the windows chosen so far.
struct Profile {
    counts: Vec<[u32; 4]>,
    maxes: Vec<u32>,
    weight: u32,
    cost: usize,
}

impl Profile {
    fn new(t: usize) -> Self {
        Profile {
            counts: vec![[0; 4]; t],
            maxes: vec![0; t],
            weight: 0,
            cost: 0,
        }
    }

    /// Cost after adding `window` with multiplicity `w`, or `None` once it
    /// provably exceeds `limit`.
    fn cost_with(&self, window: &[Symbol], w: u32, limit: usize) -> Option<usize> {
        let mut cost = self.cost;
        for (p, sym) in window.iter().enumerate() {
            let c = self.counts[p][sym.index()] + w;
            let gain = c.saturating_sub(self.maxes[p]);
            cost += (w - gain) as usize;
            if cost > limit {
                return None;
            }
        }
        Some(cost)
    }

    fn add(&mut self, window: &[Symbol], w: u32, new_cost: usize) {
        for (p, sym) in window.iter().enumerate() {
            let c = &mut self.counts[p][sym.index()];
            *c += w;
            self.maxes[p] = self.maxes[p].max(*c);
        }
        self.weight += w;
        self.cost = new_cost;
    }

    fn remove(&mut self, window: &[Symbol], w: u32, old_cost: usize) {
        for (p, sym) in window.iter().enumerate() {
            self.counts[p][sym.index()] -= w;
            self.maxes[p] = *self.counts[p].iter().max().expect("four symbols");
        }
        self.weight -= w;
        self.cost = old_cost;
    }

    fn pattern(&self) -> Vec<Symbol> {
        self.counts
            .iter()
            .map(|c| {
                let best = (0..4).max_by_key(|&i| (c[i], std::cmp::Reverse(i))).expect("four symbols");
                Symbol::from_index(best)
            })
            .collect()
    }
}

/// Exact solver for small instances.
///
/// Identical strings are merged with a multiplicity. Windows are fixed one
/// distinct string at a time; since adding a window never lowers the
/// plurality cost of the profile, any partial choice whose cost already
/// exceeds `d` is pruned.
pub fn solve_consensus_desk(cp: &ConsensusPatternsInstance, budget: &mut Budget) -> Result<Option<ConsensusSolution>> {
    let total: usize = cp.strings.iter().map(Vec::len).sum();
    if total > MAX_TOTAL_LENGTH {
        return Err(Error::resource(format!(
            "consensus input of total length {total} exceeds {MAX_TOTAL_LENGTH}"
        )));
    }
    if cp.strings.is_empty() {
        return Ok(Some(ConsensusSolution {
            pattern: vec![Symbol::Zero; cp.t],
            offsets: Vec::new(),
            cost: 0,
        }));
    }
    if cp.strings.iter().any(|s| s.len() < cp.t) {
        return Ok(None);
    }

    let mut distinct: Vec<&Vec<Symbol>> = Vec::new();
    let mut weights: Vec<u32> = Vec::new();
    let mut class_of = Vec::with_capacity(cp.strings.len());
    for s in &cp.strings {
        match distinct.iter().position(|&x| x == s) {
            Some(i) => {
                weights[i] += 1;
                class_of.push(i);
            }
            None => {
                distinct.push(s);
                weights.push(1);
                class_of.push(distinct.len() - 1);
            }
        }
    }

    let mut search = Search {
        strings: distinct,
        weights,
        t: cp.t,
        d: cp.d,
        profile: Profile::new(cp.t),
        chosen: Vec::new(),
        budget,
    };
    if !search.run()? {
        return Ok(None);
    }
    let offsets = class_of.iter().map(|&c| search.chosen[c]).collect::<Vec<_>>();
    let pattern = search.profile.pattern();
    let cost = cp.cost_of(&pattern, &offsets).expect("offsets are in range");
    debug_assert_eq!(cost, search.profile.cost);
    Ok(Some(ConsensusSolution { pattern, offsets, cost }))
}

struct Search<'a, 'b> {
    strings: Vec<&'a Vec<Symbol>>,
    weights: Vec<u32>,
    t: usize,
    d: usize,
    profile: Profile,
    chosen: Vec<usize>,
    budget: &'b mut Budget,
}

impl Search<'_, '_> {
    fn run(&mut self) -> Result<bool> {
        let idx = self.chosen.len();
        if idx == self.strings.len() {
            return Ok(true);
        }
        let s = self.strings[idx];
        let w = self.weights[idx];
        for offset in 0..=s.len() - self.t {
            self.budget.tick()?;
            let window = &s[offset..offset + self.t];
            let Some(cost) = self.profile.cost_with(window, w, self.d) else {
                continue;
            };
            let old = self.profile.cost;
            self.profile.add(window, w, cost);
            self.chosen.push(offset);
            if self.run()? {
                return Ok(true);
            }
            self.chosen.pop();
            self.profile.remove(window, w, old);
        }
        Ok(false)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn syms(s: &str) -> Vec<Symbol> {
        s.chars()
            .map(|c| match c {
                '0' => Symbol::Zero,
                '1' => Symbol::One,
                'a' => Symbol::A,
                _ => Symbol::B,
            })
            .collect()
    }

    fn solve(strings: &[&str], t: usize, d: usize) -> Option<ConsensusSolution> {
        let cp = ConsensusPatternsInstance {
            strings: strings.iter().map(|s| syms(s)).collect(),
            t,
            d,
        };
        let sol = solve_consensus_desk(&cp, &mut Budget::unlimited()).unwrap();
        if let Some(s) = &sol {
            assert_eq!(cp.cost_of(&s.pattern, &s.offsets), Some(s.cost));
            assert!(s.cost <= d);
        }
        sol
    }

    /// Minimum cost over all offset tuples and all 4^t patterns.
    fn brute(strings: &[&str], t: usize) -> usize {
        let strs: Vec<Vec<Symbol>> = strings.iter().map(|s| syms(s)).collect();
        let mut best = usize::MAX;
        let mut offsets = vec![0usize; strs.len()];
        loop {
            for code in 0..4usize.pow(t as u32) {
                let pattern: Vec<Symbol> = (0..t).map(|p| Symbol::from_index(code / 4usize.pow(p as u32) % 4)).collect();
                let cost: usize = strs
                    .iter()
                    .zip(&offsets)
                    .map(|(s, &o)| s[o..o + t].iter().zip(&pattern).filter(|(x, y)| x != y).count())
                    .sum();
                best = best.min(cost);
            }
            let mut i = 0;
            loop {
                if i == strs.len() {
                    return best;
                }
                offsets[i] += 1;
                if offsets[i] + t <= strs[i].len() {
                    break;
                }
                offsets[i] = 0;
                i += 1;
            }
        }
    }

    #[test]
    fn equal_strings_full_length() {
        let sol = solve(&["01ab", "01ab"], 4, 0).unwrap();
        assert_eq!(render(&sol.pattern), "01ab");
        assert_eq!(sol.cost, 0);
    }

    #[test]
    fn zero_budget_needs_a_common_window() {
        assert!(solve(&["ab01b", "1ab0a"], 4, 0).is_none());
        let sol = solve(&["ab01b", "1ab0a"], 3, 0).unwrap();
        assert_eq!(render(&sol.pattern), "ab0");
        assert_eq!(sol.offsets, vec![0, 1]);
    }

    #[test]
    fn window_longer_than_string() {
        assert!(solve(&["01", "011"], 3, 5).is_none());
    }

    #[test]
    fn matches_brute_force() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..60 {
            let n = rng.random_range(1..=3);
            let strs: Vec<String> = (0..n)
                .map(|_| {
                    let len = rng.random_range(3..=5);
                    (0..len).map(|_| ['0', '1', 'a', 'b'][rng.random_range(0..4)]).collect()
                })
                .collect();
            let refs: Vec<&str> = strs.iter().map(String::as_str).collect();
            let t = rng.random_range(1..=3);
            let best = brute(&refs, t);
            for d in 0..=4 {
                assert_eq!(solve(&refs, t, d).is_some(), best <= d, "{refs:?} t={t} d={d}");
            }
        }
    }
}
