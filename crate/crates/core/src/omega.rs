//! Terms of ω^X and of the iterated orders ω^⟨h,X⟩.
//!
//! A level-`h` term is a weakly decreasing finite list of level-`h-1` terms;
//! level 0 is the base order itself. Comparison is lexicographic with a proper
//! prefix below its extensions, which is the ordinal-sum reading of
//! `⟨x_0,…,x_k⟩ = ω^{x_0} + … + ω^{x_k}`.

use std::cmp::Ordering;
use std::fmt;

use serde_json::Value;

use crate::error::{Error, Result};
use crate::orders::{Element, LinearOrder, Order, TermOrder};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum OmegaTerm {
    /// An element of the base order (level 0).
    Base(Element),
    Sum { level: u32, entries: Vec<OmegaTerm> },
}

/// Position of the first difference between two terms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DeltaResult {
    Equal,
    DiffAt(usize),
}

impl DeltaResult {
    /// The integer convention used inside colouring formulas: equal terms map to 0.
    pub fn numeric(self) -> usize {
        match self {
            DeltaResult::Equal => 0,
            DeltaResult::DiffAt(i) => i,
        }
    }
}

impl OmegaTerm {
    pub fn base(e: Element) -> Self {
        OmegaTerm::Base(e)
    }

    /// Builds a level-`level` term, checking nesting and weak decrease.
    pub fn new(order: &dyn LinearOrder, level: u32, entries: Vec<OmegaTerm>) -> Result<Self> {
        if level == 0 {
            return Err(Error::Parameter("sum terms have level >= 1".into()));
        }
        let t = OmegaTerm::Sum { level, entries };
        t.validate(order)?;
        Ok(t)
    }

    /// Level-1 term from element codes.
    pub fn level1(order: &dyn LinearOrder, entries: &[Element]) -> Result<Self> {
        Self::new(order, 1, entries.iter().copied().map(OmegaTerm::Base).collect())
    }

    /// Wraps `self` as the single entry of a term one level up.
    pub fn singleton(self) -> Self {
        let level = self.level() + 1;
        OmegaTerm::Sum {
            level,
            entries: vec![self],
        }
    }

    pub fn level(&self) -> u32 {
        match self {
            OmegaTerm::Base(_) => 0,
            OmegaTerm::Sum { level, .. } => *level,
        }
    }

    pub fn entries(&self) -> &[OmegaTerm] {
        match self {
            OmegaTerm::Base(_) => &[],
            OmegaTerm::Sum { entries, .. } => entries,
        }
    }

    pub fn as_element(&self) -> Option<&Element> {
        match self {
            OmegaTerm::Base(e) => Some(e),
            OmegaTerm::Sum { .. } => None,
        }
    }

    pub fn validate(&self, order: &dyn LinearOrder) -> Result<()> {
        match self {
            OmegaTerm::Base(e) => order.check(e),
            OmegaTerm::Sum { level, entries } => {
                for e in entries {
                    if e.level() + 1 != *level {
                        return Err(Error::LevelMismatch {
                            left: *level - 1,
                            right: e.level(),
                        });
                    }
                    e.validate(order)?;
                }
                for w in entries.windows(2) {
                    if compare_lex(order, &w[0], &w[1])? == Ordering::Less {
                        return Err(Error::Parse(format!(
                            "entries of {self} are not weakly decreasing"
                        )));
                    }
                }
                Ok(())
            }
        }
    }

    /// Every base element occurring at any depth.
    pub fn elements(&self) -> Vec<Element> {
        let mut out = Vec::new();
        self.collect_elements(&mut out);
        out
    }

    fn collect_elements(&self, out: &mut Vec<Element>) {
        match self {
            OmegaTerm::Base(e) => out.push(*e),
            OmegaTerm::Sum { entries, .. } => entries.iter().for_each(|e| e.collect_elements(out)),
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            OmegaTerm::Base(e) => serde_json::to_value(e).expect("element serializes"),
            OmegaTerm::Sum { entries, .. } => Value::Array(entries.iter().map(Self::to_json).collect()),
        }
    }

    /// Parses the nested-array literal of a level-`level` term.
    pub fn from_json(order: &dyn LinearOrder, level: u32, v: &Value) -> Result<Self> {
        let t = Self::from_json_unchecked(level, v)?;
        t.validate(order)?;
        Ok(t)
    }

    fn from_json_unchecked(level: u32, v: &Value) -> Result<Self> {
        if level == 0 {
            let e: Element = serde_json::from_value(v.clone())
                .map_err(|e| Error::Parse(format!("bad element {v}: {e}")))?;
            return Ok(OmegaTerm::Base(e));
        }
        let items = v
            .as_array()
            .ok_or_else(|| Error::Parse(format!("expected array for level-{level} term, got {v}")))?;
        let entries = items
            .iter()
            .map(|x| Self::from_json_unchecked(level - 1, x))
            .collect::<Result<_>>()?;
        Ok(OmegaTerm::Sum { level, entries })
    }
}

impl fmt::Display for OmegaTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OmegaTerm::Base(e) => write!(f, "{e}"),
            OmegaTerm::Sum { entries, .. } => {
                f.write_str("⟨")?;
                for (i, e) in entries.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{e}")?;
                }
                f.write_str("⟩")
            }
        }
    }
}

/// Number of entries.
pub fn lh(t: &OmegaTerm) -> usize {
    t.entries().len()
}

/// The `i`-th entry `e_i(t)`.
pub fn exponent(t: &OmegaTerm, i: usize) -> Result<&OmegaTerm> {
    t.entries().get(i).ok_or(Error::IndexOutOfRange {
        index: i,
        len: lh(t),
    })
}

pub fn compare_lex(order: &dyn LinearOrder, s: &OmegaTerm, t: &OmegaTerm) -> Result<Ordering> {
    match (s, t) {
        (OmegaTerm::Base(a), OmegaTerm::Base(b)) => order.compare(a, b),
        (OmegaTerm::Sum { level: l, entries: xs }, OmegaTerm::Sum { level: m, entries: ys }) if l == m => {
            for (x, y) in xs.iter().zip(ys) {
                match compare_lex(order, x, y)? {
                    Ordering::Equal => {}
                    other => return Ok(other),
                }
            }
            Ok(xs.len().cmp(&ys.len()))
        }
        _ => Err(Error::LevelMismatch {
            left: s.level(),
            right: t.level(),
        }),
    }
}

/// Least index where `s` and `t` differ; a proper prefix differs at its length.
pub fn delta(s: &OmegaTerm, t: &OmegaTerm) -> Result<DeltaResult> {
    if s.level() != t.level() {
        return Err(Error::LevelMismatch {
            left: s.level(),
            right: t.level(),
        });
    }
    if s == t {
        return Ok(DeltaResult::Equal);
    }
    let (xs, ys) = (s.entries(), t.entries());
    let i = xs
        .iter()
        .zip(ys)
        .position(|(x, y)| x != y)
        .unwrap_or_else(|| xs.len().min(ys.len()));
    Ok(DeltaResult::DiffAt(i))
}

/// The order ω^⟨level,X⟩ as a term space.
#[derive(Clone, Debug)]
pub struct OmegaSpace {
    pub order: Order,
    pub level: u32,
}

impl OmegaSpace {
    pub fn new(order: Order, level: u32) -> Self {
        OmegaSpace { order, level }
    }
}

impl TermOrder<OmegaTerm> for OmegaSpace {
    fn compare_terms(&self, a: &OmegaTerm, b: &OmegaTerm) -> Result<Ordering> {
        compare_lex(&*self.order, a, b)
    }
}
