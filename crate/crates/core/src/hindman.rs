//! The finite-unions reduction.
//!
//! A descending sequence in ω^X is flattened into the sequence β of its
//! components. An index is decreased by a later index at the same position
//! whose component is strictly smaller in X. The colouring `g` counts the
//! gaps of a set in which an earlier index first gets decreased; a block
//! sequence monochromatic for `g` yields a bound `f` on least decreasers, and
//! `f` makes the descending-sequence extraction computable.

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::omega::OmegaTerm;
use crate::orders::{DescendingSequence, Element, Order, Verdict};

/// A finite prefix of β together with the maps `t` and `p`.
#[derive(Clone, Debug)]
pub struct FlattenedInstance {
    pub order: Order,
    pub terms: Vec<OmegaTerm>,
    pub beta: Vec<Element>,
    pub t: Vec<usize>,
    pub p: Vec<usize>,
    offsets: Vec<usize>,
    least: Vec<Option<usize>>,
}

impl FlattenedInstance {
    /// Flattens `terms` (level-1) and keeps the first `bound` components.
    pub fn from_terms(order: Order, terms: Vec<OmegaTerm>, bound: usize) -> Result<Self> {
        let mut beta = Vec::new();
        let (mut t, mut p, mut offsets) = (Vec::new(), Vec::new(), Vec::new());
        for (n, term) in terms.iter().enumerate() {
            if term.level() != 1 {
                return Err(Error::LevelMismatch {
                    left: 1,
                    right: term.level(),
                });
            }
            offsets.push(beta.len());
            for (m, e) in term.entries().iter().enumerate() {
                let x = *e.as_element().expect("level-1 entries are elements");
                beta.push(x);
                t.push(n);
                p.push(m);
            }
        }
        beta.truncate(bound);
        t.truncate(bound);
        p.truncate(bound);
        let mut f = FlattenedInstance {
            order,
            terms,
            beta,
            t,
            p,
            offsets,
            least: Vec::new(),
        };
        f.least = (0..f.len()).map(|i| f.scan_decreaser(i, f.len())).collect::<Result<_>>()?;
        Ok(f)
    }

    pub fn len(&self) -> usize {
        self.beta.len()
    }

    pub fn is_empty(&self) -> bool {
        self.beta.is_empty()
    }

    /// `θ(n, m) = m + Σ_{k<n} lh(α_k)`.
    pub fn theta(&self, n: usize, m: usize) -> Option<usize> {
        self.offsets.get(n).map(|o| o + m)
    }

    /// Length of the term containing component `i`.
    pub fn term_len(&self, i: usize) -> usize {
        self.terms[self.t[i]].entries().len()
    }

    fn decreases(&self, i: usize, j: usize) -> Result<bool> {
        Ok(self.p[j] == self.p[i] && self.order.compare(&self.beta[i], &self.beta[j])? == Ordering::Greater)
    }

    fn scan_decreaser(&self, i: usize, search_bound: usize) -> Result<Option<usize>> {
        for j in i + 1..search_bound.min(self.len()) {
            if self.decreases(i, j)? {
                return Ok(Some(j));
            }
        }
        Ok(None)
    }

    /// Least decreaser of `i` inside the materialized prefix.
    pub fn least_decreaser(&self, i: usize) -> Option<usize> {
        self.least.get(i).copied().flatten()
    }
}

/// Flattens a prefix of `seq` with at least `bound` components (fewer only if
/// the sequence runs out).
pub fn flatten(order: Order, seq: &DescendingSequence<OmegaTerm>, bound: usize) -> Result<FlattenedInstance> {
    let mut terms = Vec::new();
    let mut total = 0;
    while total < bound && terms.len() <= bound {
        match seq.term(terms.len()) {
            Ok(t) => {
                total += t.entries().len();
                terms.push(t);
            }
            Err(Error::PrefixExhausted(_)) => break,
            Err(e) => return Err(e),
        }
    }
    FlattenedInstance::from_terms(order, terms, bound)
}

/// Least `j ∈ (i, search_bound)` decreasing `i`.
pub fn decreaser_of(f: &FlattenedInstance, i: usize, search_bound: usize) -> Option<usize> {
    f.least_decreaser(i).filter(|&j| j < search_bound)
}

// For each i < n_0 with a least decreaser d < n_r, the position j with
// n_{j-1} <= d < n_j is the number of elements of S that are <= d.
fn important_positions(f: &FlattenedInstance, set: &[usize]) -> Vec<bool> {
    let mut marks = vec![false; set.len()];
    let (Some(&first), Some(&last)) = (set.first(), set.last()) else {
        return marks;
    };
    for i in 0..first.min(f.len()) {
        if let Some(d) = f.least_decreaser(i) {
            if d < last {
                marks[set.partition_point(|&s| s <= d)] = true;
            }
        }
    }
    marks
}

pub fn important_in(f: &FlattenedInstance, set: &[usize], j: usize) -> bool {
    important_positions(f, set).get(j).copied().unwrap_or(false)
}

/// Number of important positions of `S`, mod `k`.
pub fn g_color(f: &FlattenedInstance, set: &[usize], k: usize) -> usize {
    important_positions(f, set).iter().filter(|&&b| b).count() % k.max(1)
}

/// Finite blocks with `max(B_i) < min(B_{i+1})`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct BlockSequence {
    pub blocks: Vec<Vec<usize>>,
}

impl BlockSequence {
    pub fn validate(&self) -> Result<()> {
        for b in &self.blocks {
            if b.is_empty() || b[0] == 0 || !b.windows(2).all(|w| w[0] < w[1]) {
                return Err(Error::Parameter(format!("invalid block {b:?}")));
            }
        }
        for w in self.blocks.windows(2) {
            if w[0].last() >= w[1].first() {
                return Err(Error::Parameter(format!("blocks {:?} and {:?} overlap", w[0], w[1])));
            }
        }
        Ok(())
    }

    pub fn union(&self, which: &[usize]) -> Vec<usize> {
        which.iter().flat_map(|&q| self.blocks[q].iter().copied()).collect()
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockSearchStats {
    pub nodes: u64,
    pub colour_evaluations: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BlockSearch {
    Found { blocks: BlockSequence, colour: usize },
    Exhausted,
}

struct BlockDfs<'a> {
    f: &'a FlattenedInstance,
    n: usize,
    k: usize,
    count: usize,
    window: usize,
    max_block: usize,
    budget: u64,
    stats: BlockSearchStats,
    blocks: Vec<Vec<usize>>,
    colour: Option<usize>,
}

impl BlockDfs<'_> {
    // Candidate blocks starting at or after `lo`, in lexicographic order.
    fn candidates(&self, lo: usize) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        let mut cur = Vec::new();
        fn rec(lo: usize, window: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            for x in lo..window {
                cur.push(x);
                out.push(cur.clone());
                if cur.len() < max {
                    rec(x + 1, window, max, cur, out);
                }
                cur.pop();
            }
        }
        rec(lo, self.window, self.max_block, &mut cur, &mut out);
        out
    }

    // Colour shared by every union of n blocks that uses the last block.
    fn consistent(&mut self) -> Option<Option<usize>> {
        let last = self.blocks.len() - 1;
        if last + 1 < self.n {
            return Some(self.colour);
        }
        let mut colour = self.colour;
        for others in (0..last).combinations(self.n - 1) {
            let mut set: Vec<usize> = others.iter().flat_map(|&q| self.blocks[q].iter().copied()).collect();
            set.extend(&self.blocks[last]);
            self.stats.colour_evaluations += 1;
            let c = g_color(self.f, &set, self.k);
            match colour {
                None => colour = Some(c),
                Some(d) if d != c => return None,
                _ => {}
            }
        }
        Some(colour)
    }

    fn run(&mut self) -> bool {
        if self.blocks.len() == self.count {
            return true;
        }
        let lo = self.blocks.last().map_or(1, |b| b[b.len() - 1] + 1);
        for cand in self.candidates(lo) {
            if self.stats.nodes >= self.budget {
                return false;
            }
            self.stats.nodes += 1;
            self.blocks.push(cand);
            let saved = self.colour;
            if let Some(c) = self.consistent() {
                self.colour = c;
                if self.run() {
                    return true;
                }
            }
            self.colour = saved;
            self.blocks.pop();
        }
        false
    }
}

/// Lexicographically least sequence of `count` blocks inside `[1, window)`,
/// each of at most `max_block` elements, whose `n`-block unions all get the
/// same `g` colour.
#[allow(clippy::too_many_arguments)]
pub fn find_monochromatic_blocks(
    f: &FlattenedInstance,
    n: usize,
    k: usize,
    count: usize,
    window: usize,
    budget: u64,
    max_block: usize,
) -> Result<(BlockSearch, BlockSearchStats)> {
    if n < 3 || k < 2 {
        return Err(Error::Parameter(format!("need n >= 3 and k >= 2, got n = {n}, k = {k}")));
    }
    if count < n {
        return Err(Error::Parameter(format!("{count} blocks cannot form unions of {n} blocks")));
    }
    if max_block == 0 {
        return Err(Error::Parameter("max_block must be positive".into()));
    }
    let mut dfs = BlockDfs {
        f,
        n,
        k,
        count,
        window,
        max_block,
        budget,
        stats: BlockSearchStats::default(),
        blocks: Vec::new(),
        colour: None,
    };
    let found = dfs.run();
    let result = if found {
        BlockSearch::Found {
            blocks: BlockSequence { blocks: dfs.blocks },
            colour: dfs.colour.unwrap_or(0),
        }
    } else {
        BlockSearch::Exhausted
    };
    Ok((result, dfs.stats))
}

/// Recolours every `n`-block union; returns the first offending union.
pub fn check_monochromatic(f: &FlattenedInstance, blocks: &BlockSequence, n: usize, k: usize, colour: usize) -> Result<()> {
    blocks.validate()?;
    for which in (0..blocks.blocks.len()).combinations(n) {
        let set = blocks.union(&which);
        let c = g_color(f, &set, k);
        if c != colour {
            return Err(Error::ColourMismatch {
                expected: colour.to_string(),
                found: c.to_string(),
                tuple: set,
            });
        }
    }
    Ok(())
}

type BoundFn = dyn Fn(usize) -> Result<usize> + Send + Sync;

/// `i ↦ f(i)`, either computed or tabulated.
#[derive(Clone)]
pub struct BoundFunction(Arc<BoundFn>);

impl fmt::Debug for BoundFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("BoundFunction")
    }
}

impl BoundFunction {
    pub fn from_fn(f: impl Fn(usize) -> Result<usize> + Send + Sync + 'static) -> Self {
        BoundFunction(Arc::new(f))
    }

    pub fn from_table(table: Vec<usize>) -> Self {
        Self::from_fn(move |i| {
            table
                .get(i)
                .copied()
                .ok_or_else(|| Error::BlocksExhausted(format!("f({i}) beyond the table")))
        })
    }

    pub fn eval(&self, i: usize) -> Result<usize> {
        (self.0)(i)
    }
}

/// `f(i) = max(B_q)` with `p` least such that `i < min(B_p)` and `q > p+n-3`
/// least such that `g(B_p ∪ … ∪ B_{p+n-3} ∪ B_q) = c`.
pub fn build_f(f: &FlattenedInstance, blocks: &BlockSequence, n: usize, k: usize, colour: usize) -> Result<BoundFunction> {
    blocks.validate()?;
    if n < 3 {
        return Err(Error::Parameter(format!("need n >= 3, got {n}")));
    }
    let f = f.clone();
    let blocks = blocks.clone();
    Ok(BoundFunction::from_fn(move |i| {
        let bs = &blocks.blocks;
        let p = bs
            .iter()
            .position(|b| i < b[0])
            .ok_or_else(|| Error::BlocksExhausted(format!("no block starts above {i}")))?;
        let head: Vec<usize> = (p..=p + n - 3).collect();
        if head.last().is_some_and(|&l| l >= bs.len()) {
            return Err(Error::BlocksExhausted(format!("f({i}) needs blocks {p}..={}", p + n - 3)));
        }
        for (q, block) in bs.iter().enumerate().skip(p + n - 2) {
            let mut which = head.clone();
            which.push(q);
            if g_color(&f, &blocks.union(&which), k) == colour {
                return Ok(*block.last().expect("blocks are non-empty"));
            }
        }
        Err(Error::BlocksExhausted(format!("no block completes f({i})")))
    }))
}

/// For every `i < bound` with a least decreaser inside the materialized
/// prefix, checks that decreaser is at most `f(i)`.
pub fn check_property_p(fl: &FlattenedInstance, f: &BoundFunction, bound: usize) -> Verdict {
    for i in 0..bound.min(fl.len()) {
        if let Some(d) = fl.least_decreaser(i) {
            match f.eval(i) {
                Ok(b) if d <= b => {}
                Ok(_) => return Verdict::FailAt(i),
                Err(_) => return Verdict::Inconclusive,
            }
        }
    }
    if bound > fl.len() {
        Verdict::Inconclusive
    } else {
        Verdict::Ok
    }
}

/// One step of the extraction, kept for inspection.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HindmanStep {
    pub i: usize,
    pub j: usize,
    pub value: Element,
}

// Decreasibility of i judged by looking at β only up to f(i).
fn decreasible(fl: &FlattenedInstance, f: &BoundFunction, i: usize) -> Result<Option<usize>> {
    let bound = f.eval(i)?;
    if bound >= fl.len() {
        return Err(Error::RangeExhausted(format!("f({i}) = {bound} lies beyond the {} materialized components", fl.len())));
    }
    let within = decreaser_of(fl, i, bound + 1);
    if within.is_none() {
        if let Some(d) = fl.least_decreaser(i) {
            return Err(Error::PropertyPViolated {
                index: i,
                decreaser: d,
                bound,
            });
        }
    }
    Ok(within)
}

/// `σ_s = β_{j_s}` for `s < count`, with the steps taken.
pub fn extract_hindman_steps(fl: &FlattenedInstance, f: &BoundFunction, count: usize) -> Result<Vec<HindmanStep>> {
    let mut steps: Vec<HindmanStep> = Vec::with_capacity(count);
    while steps.len() < count {
        let range = match steps.last() {
            None => 0..fl.len(),
            Some(prev) => {
                let j = prev.j;
                j..j + fl.term_len(j) - fl.p[j]
            }
        };
        let mut found = None;
        for i in range.clone() {
            if i >= fl.len() {
                break;
            }
            if let Some(j) = decreasible(fl, f, i)? {
                found = Some((i, j));
                break;
            }
        }
        let (i, j) = found.ok_or_else(|| {
            Error::RangeExhausted(format!("no decreasible index in [{}, {})", range.start, range.end))
        })?;
        steps.push(HindmanStep {
            i,
            j,
            value: fl.beta[j],
        });
    }
    Ok(steps)
}

pub fn extract_hindman(fl: &FlattenedInstance, f: &BoundFunction, count: usize) -> Result<Vec<Element>> {
    Ok(extract_hindman_steps(fl, f, count)?.into_iter().map(|s| s.value).collect())
}

/// Searches `n' ∈ (n, n + horizon]` and `m < lh(α_n)` with
/// `e_m(α_n) >_X e_m(α_{n'})`.
pub fn lemma_decreasible_check(
    order: &Order,
    seq: &DescendingSequence<OmegaTerm>,
    n: usize,
    horizon: usize,
) -> Result<Verdict> {
    if horizon == 0 {
        return Ok(Verdict::Inconclusive);
    }
    let space = crate::omega::OmegaSpace::new(order.clone(), 1);
    let base = seq.term(n)?;
    let mut prev: Option<OmegaTerm> = None;
    for idx in 0..=n + horizon {
        let cur = match seq.term(idx) {
            Ok(t) => t,
            Err(Error::PrefixExhausted(_)) => break,
            Err(e) => return Err(e),
        };
        if let Some(p) = &prev {
            if crate::orders::TermOrder::compare_terms(&space, p, &cur)? != Ordering::Greater {
                return Ok(Verdict::FailAt(idx - 1));
            }
        }
        if idx > n {
            for (a, b) in base.entries().iter().zip(cur.entries()) {
                if crate::omega::compare_lex(&**order, a, b)? == Ordering::Greater {
                    return Ok(Verdict::Ok);
                }
            }
        }
        prev = Some(cur);
    }
    Ok(Verdict::Inconclusive)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::orders::builtin_order;

    fn constant_delta(count: usize) -> FlattenedInstance {
        let o = builtin_order("omega-star").unwrap();
        let terms = (0..count)
            .map(|i| OmegaTerm::level1(&*o, &[Element::Int(0), Element::Int(i as i64 + 1)]).unwrap())
            .collect();
        FlattenedInstance::from_terms(o, terms, 2 * count).unwrap()
    }

    #[test]
    fn theta_round_trip() {
        let o = builtin_order("omega").unwrap();
        let terms = vec![
            OmegaTerm::level1(&*o, &[Element::Int(3), Element::Int(1)]).unwrap(),
            OmegaTerm::level1(&*o, &[Element::Int(2), Element::Int(2), Element::Int(0)]).unwrap(),
        ];
        let f = FlattenedInstance::from_terms(o, terms, 10).unwrap();
        assert_eq!(f.theta(0, 0), Some(0));
        assert_eq!(f.theta(1, 0), Some(2));
        assert_eq!((f.t[2], f.p[2]), (1, 0));
        assert_eq!(f.beta[3], Element::Int(2));
        for h in 0..f.len() {
            assert_eq!(f.theta(f.t[h], f.p[h]), Some(h));
        }
    }

    #[test]
    fn decreasers_of_constant_delta() {
        let f = constant_delta(20);
        assert_eq!(decreaser_of(&f, 1, 40), Some(3));
        assert_eq!(decreaser_of(&f, 0, 40), None);
        assert_eq!(decreaser_of(&f, 37, 39), None);
    }

    #[test]
    fn g_examples() {
        let f = constant_delta(20);
        assert_eq!(g_color(&f, &[1, 2, 3], 2), 0);
        assert_eq!(g_color(&f, &[2, 3, 4], 2), 1);
        assert!(important_in(&f, &[2, 3, 4], 2));
        assert!(!important_in(&f, &[2, 3, 4], 0));
    }

    #[test]
    fn hand_run() {
        let f = constant_delta(40);
        let (res, _) = find_monochromatic_blocks(&f, 3, 2, 20, 60, 1_000_000, 1).unwrap();
        let BlockSearch::Found { blocks, colour } = res else {
            panic!("search exhausted")
        };
        assert_eq!(&blocks.blocks[..3], &[vec![1], vec![4], vec![5]]);
        assert_eq!(colour, 0);
        let bf = build_f(&f, &blocks, 3, 2, colour).unwrap();
        assert_eq!(bf.eval(0).unwrap(), 4);
        assert_eq!(bf.eval(1).unwrap(), 6);
        let steps = extract_hindman_steps(&f, &bf, 4).unwrap();
        assert_eq!((steps[0].i, steps[0].j), (1, 3));
        let vals: Vec<_> = steps.iter().map(|s| s.value).collect();
        assert_eq!(vals, vec![Element::Int(2), Element::Int(3), Element::Int(4), Element::Int(5)]);
        assert!(extract_hindman(&f, &bf, 0).unwrap().is_empty());
    }

    #[test]
    fn property_p_examples() {
        let f = constant_delta(30);
        let oracle: Vec<usize> = (0..f.len()).map(|i| f.least_decreaser(i).unwrap_or(0)).collect();
        assert_eq!(check_property_p(&f, &BoundFunction::from_table(oracle), 40), Verdict::Ok);
        let zero = BoundFunction::from_fn(|_| Ok(0));
        assert_eq!(check_property_p(&f, &zero, 40), Verdict::FailAt(1));
    }

    #[test]
    fn block_search_arity() {
        let f = constant_delta(10);
        assert!(find_monochromatic_blocks(&f, 3, 2, 2, 60, 100, 1).is_err());
        let (res, stats) = find_monochromatic_blocks(&f, 3, 2, 5, 60, 0, 1).unwrap();
        assert_eq!(res, BlockSearch::Exhausted);
        assert_eq!(stats.nodes, 0);
    }

    #[test]
    fn lemma_check() {
        let o = builtin_order("omega-star").unwrap();
        let o2 = o.clone();
        let seq = DescendingSequence::from_fn("omega", move |i| {
            OmegaTerm::level1(&*o2, &[Element::Int(0), Element::Int(i as i64 + 1)]).ok()
        });
        assert_eq!(lemma_decreasible_check(&o, &seq, 3, 10).unwrap(), Verdict::Ok);
        assert_eq!(lemma_decreasible_check(&o, &seq, 3, 0).unwrap(), Verdict::Inconclusive);
        let t = OmegaTerm::level1(&*o, &[Element::Int(1)]).unwrap();
        let constant = DescendingSequence::from_vec("omega", vec![t; 5]);
        assert_eq!(lemma_decreasible_check(&o, &constant, 0, 3).unwrap(), Verdict::FailAt(0));
    }
}
