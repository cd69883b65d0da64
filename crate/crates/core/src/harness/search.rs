//! Bounded lexicographic search for homogeneous sets.
//!
//! The search runs over windows `size, 2·size, 4·size, …` up to the requested
//! window, sharing a single node budget. Within a window the first solution
//! found by the depth-first search is the lexicographically least one.

use std::collections::HashMap;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchStats {
    pub nodes: u64,
    pub colour_evaluations: u64,
    pub windows: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SearchOutcome<C> {
    Found { indices: Vec<usize>, colour: C },
    Exhausted,
}

/// Which subsets of the current set a new maximum `x` adds constraints for.
#[derive(Clone, Copy, Debug)]
enum Shape {
    Tuples(usize),
    ExactlyLarge,
}

impl Shape {
    fn new_sets(self, prev: &[usize], x: usize) -> Vec<Vec<usize>> {
        let with_x = |mut v: Vec<usize>| {
            v.push(x);
            v
        };
        match self {
            Shape::Tuples(n) => prev.iter().copied().combinations(n - 1).map(with_x).collect(),
            Shape::ExactlyLarge => prev
                .iter()
                .enumerate()
                .flat_map(|(pos, &m)| {
                    prev[pos + 1..]
                        .iter()
                        .copied()
                        .combinations(m + 1)
                        .map(move |mid| std::iter::once(m).chain(mid).chain(std::iter::once(x)).collect())
                })
                .collect(),
        }
    }
}

struct Dfs<'a, C, F> {
    colour: &'a mut F,
    memo: HashMap<Vec<usize>, C>,
    shape: Shape,
    size: usize,
    budget: u64,
    stats: SearchStats,
    set: Vec<usize>,
    fixed: Option<C>,
}

impl<C, F> Dfs<'_, C, F>
where
    C: Clone + PartialEq,
    F: FnMut(&[usize]) -> Result<C>,
{
    fn colour_of(&mut self, s: Vec<usize>) -> Result<C> {
        if let Some(c) = self.memo.get(&s) {
            return Ok(c.clone());
        }
        self.stats.colour_evaluations += 1;
        let c = (self.colour)(&s)?;
        self.memo.insert(s, c.clone());
        Ok(c)
    }

    // Some(new fixed colour) when adding x keeps the set homogeneous.
    fn admits(&mut self, x: usize) -> Result<Option<Option<C>>> {
        let mut fixed = self.fixed.clone();
        for s in self.shape.new_sets(&self.set, x) {
            let c = self.colour_of(s)?;
            match &fixed {
                None => fixed = Some(c),
                Some(d) if *d != c => return Ok(None),
                _ => {}
            }
        }
        Ok(Some(fixed))
    }

    fn run(&mut self, lo: usize, hi: usize) -> Result<bool> {
        if self.set.len() == self.size {
            return Ok(true);
        }
        let start = self.set.last().map_or(lo, |&l| l + 1);
        let last_start = (hi + self.set.len()).saturating_sub(self.size);
        for x in start..=last_start.min(hi.saturating_sub(1)) {
            if self.stats.nodes >= self.budget {
                return Ok(false);
            }
            self.stats.nodes += 1;
            if let Some(fixed) = self.admits(x)? {
                let saved = std::mem::replace(&mut self.fixed, fixed);
                self.set.push(x);
                if self.run(lo, hi)? {
                    return Ok(true);
                }
                self.set.pop();
                self.fixed = saved;
            }
        }
        Ok(false)
    }
}

fn search<C, F>(colour: &mut F, shape: Shape, lo: usize, window: usize, size: usize, budget: u64) -> Result<(SearchOutcome<C>, SearchStats)>
where
    C: Clone + PartialEq,
    F: FnMut(&[usize]) -> Result<C>,
{
    let mut dfs = Dfs {
        colour,
        memo: HashMap::new(),
        shape,
        size,
        budget,
        stats: SearchStats::default(),
        set: Vec::new(),
        fixed: None,
    };
    if size == 0 {
        return Err(Error::Parameter("witness size must be positive".into()));
    }
    let mut w = (lo + size).min(window);
    loop {
        dfs.stats.windows.push(w);
        if dfs.run(lo, w)? {
            let colour = dfs.fixed.clone();
            return match colour {
                Some(colour) => Ok((
                    SearchOutcome::Found {
                        indices: dfs.set.clone(),
                        colour,
                    },
                    dfs.stats,
                )),
                None => Err(Error::Parameter("witness too small to carry a colour".into())),
            };
        }
        if w >= window || dfs.stats.nodes >= budget {
            return Ok((SearchOutcome::Exhausted, dfs.stats));
        }
        w = (w.saturating_sub(lo) * 2 + lo).min(window);
    }
}

/// Lexicographically least `H ⊆ [0, window)` with `|H| = size` whose
/// `n`-subsets all get the same colour.
pub fn find_homogeneous<C, F>(mut colour: F, n: usize, window: usize, size: usize, budget: u64) -> Result<(SearchOutcome<C>, SearchStats)>
where
    C: Clone + PartialEq,
    F: FnMut(&[usize]) -> Result<C>,
{
    if n == 0 || size < n {
        return Err(Error::Parameter(format!("witness size {size} must be at least the arity {n}")));
    }
    if size > window {
        return Ok((SearchOutcome::Exhausted, SearchStats::default()));
    }
    search(&mut colour, Shape::Tuples(n), 0, window, size, budget)
}

/// Lexicographically least `H ⊆ [1, window)` with `|H| = size` whose exactly
/// large subsets all get the same colour.
pub fn find_large_homogeneous<C, F>(mut colour: F, window: usize, size: usize, budget: u64) -> Result<(SearchOutcome<C>, SearchStats)>
where
    C: Clone + PartialEq,
    F: FnMut(&[usize]) -> Result<C>,
{
    if size < 4 {
        return Err(Error::Parameter(format!("witness size {size} cannot contain an exactly large set")));
    }
    if size + 1 > window {
        return Ok((SearchOutcome::Exhausted, SearchStats::default()));
    }
    search(&mut colour, Shape::ExactlyLarge, 1, window, size, budget)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_colouring_gives_initial_segment() {
        let (res, _) = find_homogeneous(|_| Ok(7u8), 3, 50, 10, 10_000).unwrap();
        assert_eq!(
            res,
            SearchOutcome::Found {
                indices: (0..10).collect(),
                colour: 7
            }
        );
    }

    #[test]
    fn size_beyond_window() {
        let (res, _) = find_homogeneous(|_| Ok(0u8), 3, 5, 10, 10_000).unwrap();
        assert_eq!(res, SearchOutcome::Exhausted);
    }

    #[test]
    fn parity_colouring() {
        // colour = parity of the sum; homogeneous sets mix nothing
        let colour = |t: &[usize]| Ok(t.iter().sum::<usize>() % 2);
        let (res, stats) = find_homogeneous(colour, 3, 40, 5, 100_000).unwrap();
        let SearchOutcome::Found { indices, colour: c } = res else { panic!() };
        for t in indices.iter().copied().combinations(3) {
            assert_eq!(t.iter().sum::<usize>() % 2, c);
        }
        assert_eq!(indices, vec![0, 2, 4, 6, 8]);
        assert!(stats.nodes > 0);
    }

    #[test]
    fn budget_zero() {
        let (res, stats) = find_homogeneous(|_| Ok(0u8), 3, 50, 10, 0).unwrap();
        assert_eq!(res, SearchOutcome::Exhausted);
        assert_eq!(stats.nodes, 0);
    }

    #[test]
    fn large_sets_from_one() {
        let (res, _) = find_large_homogeneous(|s: &[usize]| Ok(s.len()), 20, 6, 100_000).unwrap();
        // min 1 sets have 4 elements, min 2 sets 5: avoid having both
        let SearchOutcome::Found { indices, .. } = res else { panic!() };
        assert_eq!(indices[0], 1);
        assert_eq!(indices.len(), 6);
    }
}
