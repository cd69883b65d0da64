//! Colourings parameterized by a sequence σ of terms.
//!
//! The same machinery serves both term spaces: ω^⟨h,X⟩ (three base colours)
//! and ε_X (six base colours). The iterated colouring `C_h` repeatedly
//! replaces each term of a tuple by its comparing exponent against the next
//! tuple element, and reports the first depth at which the base colouring is
//! not uniformly GOOD.

use std::borrow::Cow;
use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::epsilon::{self, EpsilonSpace, EpsilonTerm};
use crate::error::{Error, Result};
use crate::omega::{self, DeltaResult, OmegaSpace, OmegaTerm};
use crate::orders::{DescendingSequence, TermOrder};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum TermOrStar<T> {
    Term(T),
    Star,
}

impl<T> TermOrStar<T> {
    pub fn term(&self) -> Option<&T> {
        match self {
            TermOrStar::Term(t) => Some(t),
            TermOrStar::Star => None,
        }
    }

    pub fn is_star(&self) -> bool {
        matches!(self, TermOrStar::Star)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Variant {
    Omega,
    Epsilon,
}

/// Base colours of both variants. The ω-variant uses `Star`, `C0`, `C1g`;
/// the ε-variant uses `Star` and `C0`..`C4`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BaseColor {
    #[serde(rename = "star")]
    Star,
    C0,
    C1g,
    C1,
    C2,
    C3,
    C4,
}

impl fmt::Display for BaseColor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            BaseColor::Star => "star",
            BaseColor::C0 => "C0",
            BaseColor::C1g => "C1g",
            BaseColor::C1 => "C1",
            BaseColor::C2 => "C2",
            BaseColor::C3 => "C3",
            BaseColor::C4 => "C4",
        };
        f.write_str(s)
    }
}

const OMEGA_TAGS: [BaseColor; 3] = [BaseColor::Star, BaseColor::C0, BaseColor::C1g];
const EPSILON_TAGS: [BaseColor; 6] = [
    BaseColor::Star,
    BaseColor::C0,
    BaseColor::C1,
    BaseColor::C2,
    BaseColor::C3,
    BaseColor::C4,
];

impl Variant {
    pub fn tags(self) -> &'static [BaseColor] {
        match self {
            Variant::Omega => &OMEGA_TAGS,
            Variant::Epsilon => &EPSILON_TAGS,
        }
    }

    /// The "otherwise" colour of the base colouring.
    pub fn good(self) -> BaseColor {
        match self {
            Variant::Omega => BaseColor::C1g,
            Variant::Epsilon => BaseColor::C4,
        }
    }
}

/// Colour of an `(h+2)`-tuple under `C_h`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(untagged)]
pub enum HColor {
    Base {
        base: BaseColor,
    },
    Level {
        level: usize,
        v: Vec<BaseColor>,
        w: Vec<BaseColor>,
    },
}

impl HColor {
    pub fn base(b: BaseColor) -> Self {
        HColor::Base { base: b }
    }
}

impl fmt::Display for HColor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HColor::Base { base } => write!(f, "{base}"),
            HColor::Level { level, v, w } => write!(f, "level {level} v={v:?} w={w:?}"),
        }
    }
}

/// A term space on which the colourings are defined.
pub trait TermSpace: TermOrder<Self::Term> + Clone + Send + Sync {
    type Term: Clone + PartialEq + fmt::Debug + fmt::Display + Send + Sync + 'static;

    fn variant(&self) -> Variant;

    fn delta(&self, a: &Self::Term, b: &Self::Term) -> Result<DeltaResult>;

    /// `e_n(t)`, or `None` when that exponent does not exist.
    fn exponent<'a>(&self, t: &'a Self::Term, n: usize) -> Option<&'a Self::Term>;

    /// The base colouring on three terms none of which is ★.
    fn base_colour(&self, a: &Self::Term, b: &Self::Term, c: &Self::Term) -> Result<BaseColor>;
}

impl TermSpace for OmegaSpace {
    type Term = OmegaTerm;

    fn variant(&self) -> Variant {
        Variant::Omega
    }

    fn delta(&self, a: &OmegaTerm, b: &OmegaTerm) -> Result<DeltaResult> {
        omega::delta(a, b)
    }

    fn exponent<'a>(&self, t: &'a OmegaTerm, n: usize) -> Option<&'a OmegaTerm> {
        t.entries().get(n)
    }

    fn base_colour(&self, a: &OmegaTerm, b: &OmegaTerm, c: &OmegaTerm) -> Result<BaseColor> {
        let d1 = omega::delta(a, b)?.numeric();
        let d2 = omega::delta(b, c)?.numeric();
        Ok(if d1 > d2 { BaseColor::C0 } else { BaseColor::C1g })
    }
}

impl TermSpace for EpsilonSpace {
    type Term = EpsilonTerm;

    fn variant(&self) -> Variant {
        Variant::Epsilon
    }

    fn delta(&self, a: &EpsilonTerm, b: &EpsilonTerm) -> Result<DeltaResult> {
        Ok(epsilon::epsilon_delta(a, b))
    }

    fn exponent<'a>(&self, t: &'a EpsilonTerm, n: usize) -> Option<&'a EpsilonTerm> {
        epsilon::exponent_ext(t, n)
    }

    fn base_colour(&self, a: &EpsilonTerm, b: &EpsilonTerm, c: &EpsilonTerm) -> Result<BaseColor> {
        if a.is_epsilon_free() {
            return Ok(BaseColor::C0);
        }
        let d1 = epsilon::epsilon_delta(a, b).numeric();
        let d2 = epsilon::epsilon_delta(b, c).numeric();
        if d1 > d2 {
            return Ok(BaseColor::C1);
        }
        let order = &*self.order;
        let (b1, ht1) = epsilon::b_ht_ext(a, d1, order)?;
        let (b2, ht2) = epsilon::b_ht_ext(b, d2, order)?;
        // BelowEpsilonZero sits under every element of X
        let b_greater = match (b1, b2) {
            (Some(x), Some(y)) => order.compare(&x, &y)? == Ordering::Greater,
            (Some(_), None) => true,
            (None, _) => false,
        };
        if b_greater {
            return Ok(BaseColor::C2);
        }
        if ht1 > ht2 {
            return Ok(BaseColor::C3);
        }
        Ok(BaseColor::C4)
    }
}

/// A colouring instance: the term space plus the parameter sequence σ.
#[derive(Clone, Debug)]
pub struct ColoringInstance<S: TermSpace> {
    pub space: S,
    pub seq: DescendingSequence<S::Term>,
    table: Option<Arc<Vec<S::Term>>>,
}

impl<S: TermSpace> ColoringInstance<S> {
    pub fn new(space: S, seq: DescendingSequence<S::Term>) -> Self {
        ColoringInstance { space, seq, table: None }
    }

    /// An instance over a materialized prefix; colourings borrow its terms.
    pub fn from_terms(space: S, terms: Vec<S::Term>) -> Self {
        let table = Arc::new(terms);
        let shared = Arc::clone(&table);
        let seq = DescendingSequence::from_fn("prefix", move |i| shared.get(i).cloned());
        ColoringInstance {
            space,
            seq,
            table: Some(table),
        }
    }

    pub fn variant(&self) -> Variant {
        self.space.variant()
    }

    pub fn term(&self, i: usize) -> Result<S::Term> {
        self.seq.term(i)
    }
}

pub type OmegaInstance = ColoringInstance<OmegaSpace>;
pub type EpsilonInstance = ColoringInstance<EpsilonSpace>;

// Stage values borrow from the tuple's terms; `None` is ★.
type Stage<'a, T> = Vec<Option<&'a T>>;

fn c1<S: TermSpace>(space: &S, a: Option<&S::Term>, b: Option<&S::Term>, c: Option<&S::Term>) -> Result<BaseColor> {
    match (a, b, c) {
        (Some(a), Some(b), Some(c)) => space.base_colour(a, b, c),
        _ => Ok(BaseColor::Star),
    }
}

fn check_increasing(idx: &[usize]) -> Result<()> {
    if idx.windows(2).all(|w| w[0] < w[1]) {
        Ok(())
    } else {
        Err(Error::IndexError(idx.to_vec()))
    }
}

/// Base colouring of a triple of raw instance terms.
pub fn color_triple<S: TermSpace>(inst: &ColoringInstance<S>, i: usize, j: usize, k: usize) -> Result<BaseColor> {
    check_increasing(&[i, j, k])?;
    let (a, b, c) = (inst.term(i)?, inst.term(j)?, inst.term(k)?);
    if inst.space.compare_terms(&a, &b)? != Ordering::Greater {
        return Err(Error::NotDescending(i, j));
    }
    if inst.space.compare_terms(&b, &c)? != Ordering::Greater {
        return Err(Error::NotDescending(j, k));
    }
    inst.space.base_colour(&a, &b, &c)
}

/// σ^{(n),I}: values at the positions of `I`; every index outside `I` is ★
/// once `n ≥ 1`.
#[derive(Clone, Debug)]
pub struct ComparingExponents<T: Clone + Send + Sync + 'static> {
    pub depth: usize,
    pub index_set: Vec<usize>,
    pub values: Vec<TermOrStar<T>>,
    seq: DescendingSequence<T>,
}

impl<T: Clone + Send + Sync + 'static> ComparingExponents<T> {
    pub fn get(&self, j: usize) -> Result<TermOrStar<T>> {
        if let Some(pos) = self.index_set.iter().position(|&i| i == j) {
            return Ok(self.values[pos].clone());
        }
        if self.depth == 0 {
            self.seq.term(j).map(TermOrStar::Term)
        } else {
            Ok(TermOrStar::Star)
        }
    }
}

// One step of the recursion: position r survives at stage m+1 when
// r <= k-m-1 and the exponent at Δ(σ_r, σ_{r+1}) exists.
fn next_stage<'a, S: TermSpace>(space: &S, cur: &[Option<&'a S::Term>], m: usize) -> Result<Stage<'a, S::Term>> {
    let k = cur.len() - 1;
    let mut out = Vec::with_capacity(cur.len());
    for r in 0..cur.len() {
        let v = match (r + m < k, cur[r], cur.get(r + 1).copied().flatten()) {
            (true, Some(a), Some(b)) => {
                let d = space.delta(a, b)?.numeric();
                space.exponent(a, d)
            }
            _ => None,
        };
        out.push(v);
    }
    Ok(out)
}

fn fetch<'a, S: TermSpace>(inst: &'a ColoringInstance<S>, index_set: &[usize]) -> Result<Vec<Cow<'a, S::Term>>> {
    index_set
        .iter()
        .map(|&i| match inst.table.as_ref().and_then(|t| t.get(i)) {
            Some(t) => Ok(Cow::Borrowed(t)),
            None => inst.term(i).map(Cow::Owned),
        })
        .collect()
}

pub fn comparing_exponent_sequence<S: TermSpace>(
    inst: &ColoringInstance<S>,
    n: usize,
    index_set: &[usize],
) -> Result<ComparingExponents<S::Term>> {
    check_increasing(index_set)?;
    if index_set.len() < 2 || n > index_set.len() - 1 {
        return Err(Error::ArityError(format!(
            "depth {n} needs an index set of at least {} elements, got {}",
            (n + 1).max(2),
            index_set.len()
        )));
    }
    let terms = fetch(inst, index_set)?;
    let mut cur: Stage<S::Term> = terms.iter().map(|t| Some(&**t)).collect();
    for m in 0..n {
        cur = next_stage(&inst.space, &cur, m)?;
    }
    Ok(ComparingExponents {
        depth: n,
        index_set: index_set.to_vec(),
        values: cur
            .into_iter()
            .map(|v| v.cloned().map_or(TermOrStar::Star, TermOrStar::Term))
            .collect(),
        seq: inst.seq.clone(),
    })
}

fn vectors<S: TermSpace>(space: &S, stage: &[Option<&S::Term>], j: usize) -> Result<(Vec<BaseColor>, Vec<BaseColor>)> {
    let k = stage.len() - 1;
    let len = k - j - 2;
    let colour_at = |r: usize| c1(space, stage[r], stage[r + 1], stage[r + 2]);
    let v = (0..len).map(colour_at).collect::<Result<Vec<_>>>()?;
    let w = (1..=len).map(colour_at).collect::<Result<Vec<_>>>()?;
    Ok((v, w))
}

/// `(v_j, w_j)` for the index set `I`, each of length `|I| - j - 3`.
pub fn vw_vectors<S: TermSpace>(
    inst: &ColoringInstance<S>,
    j: usize,
    index_set: &[usize],
) -> Result<(Vec<BaseColor>, Vec<BaseColor>)> {
    check_increasing(index_set)?;
    if index_set.len() < 4 || j + 4 > index_set.len() {
        return Err(Error::ArityError(format!(
            "v/w vectors at depth {j} need at least {} indices, got {}",
            j + 4,
            index_set.len()
        )));
    }
    let terms = fetch(inst, index_set)?;
    let mut cur: Stage<S::Term> = terms.iter().map(|t| Some(&**t)).collect();
    for m in 0..j {
        cur = next_stage(&inst.space, &cur, m)?;
    }
    vectors(&inst.space, &cur, j)
}

/// `C_h` on an `(h+2)`-tuple, `h = |I| - 2 ≥ 2`.
pub fn color_tuple<S: TermSpace>(inst: &ColoringInstance<S>, index_set: &[usize]) -> Result<HColor> {
    check_increasing(index_set)?;
    if index_set.len() < 4 {
        return Err(Error::ArityError(format!(
            "C_h needs h >= 2, i.e. at least 4 indices, got {}",
            index_set.len()
        )));
    }
    let h = index_set.len() - 2;
    let good = inst.variant().good();
    let terms = fetch(inst, index_set)?;
    let mut cur: Stage<S::Term> = terms.iter().map(|t| Some(&**t)).collect();
    for j in 0..=h - 2 {
        let (v, w) = vectors(&inst.space, &cur, j)?;
        let all_good = v.iter().chain(&w).all(|&c| c == good);
        if !all_good {
            return Ok(HColor::Level { level: j, v, w });
        }
        cur = next_stage(&inst.space, &cur, j)?;
    }
    c1(&inst.space, cur[0], cur[1], cur[2]).map(HColor::base)
}

/// `|S| = min(S) + 3`.
pub fn is_exactly_large(set: &[usize]) -> bool {
    match set.iter().min() {
        Some(&m) => set.len() == m + 3,
        None => false,
    }
}

/// Two-colouring of exactly large sets: 0 iff `C_{i_0}` gives GOOD on the rest.
pub fn color_large(inst: &EpsilonInstance, set: &[usize]) -> Result<u8> {
    check_increasing(set)?;
    if !is_exactly_large(set) {
        return Err(Error::NotExactlyLarge(set.to_vec()));
    }
    let rest = &set[1..];
    let good = match set[0] {
        // C_0 is undefined; colour 1 by convention
        0 => false,
        1 => color_triple(inst, rest[0], rest[1], rest[2])? == BaseColor::C4,
        _ => color_tuple(inst, rest)? == HColor::base(BaseColor::C4),
    };
    Ok(if good { 0 } else { 1 })
}

fn vector_rank(tags: &[BaseColor], v: &[BaseColor]) -> Result<u128> {
    let base = tags.len() as u128;
    v.iter().try_fold(0u128, |acc, c| {
        let digit = tags
            .iter()
            .position(|t| t == c)
            .ok_or_else(|| Error::InvalidColor(format!("{c} is not a colour of this variant")))?;
        acc.checked_mul(base)
            .and_then(|x| x.checked_add(digit as u128))
            .ok_or_else(|| Error::InvalidColor("colour code overflow".into()))
    })
}

fn vector_unrank(tags: &[BaseColor], mut rank: u128, len: usize) -> Vec<BaseColor> {
    let base = tags.len() as u128;
    let mut out = vec![tags[0]; len];
    for slot in out.iter_mut().rev() {
        *slot = tags[(rank % base) as usize];
        rank /= base;
    }
    out
}

fn level_block(tags: usize, len: usize) -> Result<u128> {
    u32::try_from(2 * len)
        .ok()
        .and_then(|e| (tags as u128).checked_pow(e))
        .map(|p| p - 1)
        .ok_or_else(|| Error::InvalidColor("colour code overflow".into()))
}

/// `d(h)`: the number of colours of `C_h`.
pub fn color_count(h: usize, variant: Variant) -> Result<u128> {
    if h < 2 {
        return Err(Error::ArityError(format!("C_h needs h >= 2, got {h}")));
    }
    let tags = variant.tags().len();
    (0..=h - 2).try_fold(tags as u128, |acc, j| {
        level_block(tags, h - j - 1).and_then(|b| acc.checked_add(b).ok_or_else(|| Error::InvalidColor("overflow".into())))
    })
}

/// Rank of `c` in the canonical enumeration of the colours of `C_h`.
pub fn encode_color(c: &HColor, h: usize, variant: Variant) -> Result<u128> {
    let tags = variant.tags();
    let good = variant.good();
    match c {
        HColor::Base { base } => tags
            .iter()
            .position(|t| t == base)
            .map(|p| p as u128)
            .ok_or_else(|| Error::InvalidColor(format!("{base} is not a base colour of this variant"))),
        HColor::Level { level, v, w } => {
            if h < 2 || *level > h - 2 {
                return Err(Error::InvalidColor(format!("level {level} out of range for h = {h}")));
            }
            let len = h - level - 1;
            if v.len() != len || w.len() != len {
                return Err(Error::InvalidColor(format!("vectors at level {level} must have length {len}")));
            }
            if v.iter().chain(w).all(|&x| x == good) {
                return Err(Error::InvalidColor("the all-GOOD pair is not a level colour".into()));
            }
            let mut offset = tags.len() as u128;
            for j in 0..*level {
                offset += level_block(tags.len(), h - j - 1)?;
            }
            let width = (tags.len() as u128).pow(len as u32);
            let excluded = vector_rank(tags, &vec![good; len])? * width + vector_rank(tags, &vec![good; len])?;
            let mut rank = vector_rank(tags, v)? * width + vector_rank(tags, w)?;
            if rank > excluded {
                rank -= 1;
            }
            Ok(offset + rank)
        }
    }
}

pub fn decode_color(code: u128, h: usize, variant: Variant) -> Result<HColor> {
    let tags = variant.tags();
    if code >= color_count(h, variant)? {
        return Err(Error::InvalidColor(format!("code {code} out of range for h = {h}")));
    }
    if code < tags.len() as u128 {
        return Ok(HColor::base(tags[code as usize]));
    }
    let mut rest = code - tags.len() as u128;
    for level in 0..=h - 2 {
        let len = h - level - 1;
        let block = level_block(tags.len(), len)?;
        if rest < block {
            let width = (tags.len() as u128).pow(len as u32);
            let good_rank = vector_rank(tags, &vec![variant.good(); len])?;
            let excluded = good_rank * width + good_rank;
            let raw = if rest >= excluded { rest + 1 } else { rest };
            return Ok(HColor::Level {
                level,
                v: vector_unrank(tags, raw / width, len),
                w: vector_unrank(tags, raw % width, len),
            });
        }
        rest -= block;
    }
    unreachable!("code checked against color_count")
}
