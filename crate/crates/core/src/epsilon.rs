//! Normal-form terms of ε_X.
//!
//! A term is a weakly decreasing sum of monomials, each either `ε_x` for a base
//! element `x` or `ω^γ` for a term `γ`. In normal form `ω^{ε_x}` never occurs
//! (it is written `ε_x`), which makes `ε_x` and `ω^γ` comparable by comparing
//! `γ` with `ε_x`: equality between them cannot arise.

use std::cmp::Ordering;
use std::fmt;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::omega::DeltaResult;
use crate::orders::{Element, LinearOrder, Order, TermOrder};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct EpsilonTerm(pub Vec<Monomial>);

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Monomial {
    EpsilonOf(Element),
    /// `ω^γ`; `ω^{0}` (empty exponent) is 1.
    OmegaPow(EpsilonTerm),
}

/// The `n`-th summand, or the zero marker past the end.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TermAt<'a> {
    Monomial(&'a Monomial),
    Zero,
}

impl EpsilonTerm {
    pub fn zero() -> Self {
        EpsilonTerm(Vec::new())
    }

    pub fn new(order: &dyn LinearOrder, monomials: Vec<Monomial>) -> Result<Self> {
        let t = EpsilonTerm(monomials);
        t.validate(order)?;
        Ok(t)
    }

    /// The single-monomial term `ε_x`.
    pub fn eps(x: Element) -> Self {
        EpsilonTerm(vec![Monomial::EpsilonOf(x)])
    }

    /// The single-monomial term `ω^γ`, or `ε_x` when `γ = ε_x`.
    pub fn omega_pow(exponent: EpsilonTerm) -> Self {
        match exponent.0.as_slice() {
            [Monomial::EpsilonOf(x)] => EpsilonTerm::eps(*x),
            _ => EpsilonTerm(vec![Monomial::OmegaPow(exponent)]),
        }
    }

    /// Appends the summands of `rhs` (no normalization).
    pub fn plus(mut self, rhs: EpsilonTerm) -> Self {
        self.0.extend(rhs.0);
        self
    }

    pub fn monomials(&self) -> &[Monomial] {
        &self.0
    }

    /// Structural normal form: no `ω^{ε_x}` anywhere.
    pub fn check_structure(&self) -> Result<()> {
        for m in &self.0 {
            if let Monomial::OmegaPow(g) = m {
                if let [Monomial::EpsilonOf(x)] = g.0.as_slice() {
                    return Err(Error::NotNormalForm(format!("ω^{{ε_{x}}} must be written ε_{x}")));
                }
                g.check_structure()?;
            }
        }
        Ok(())
    }

    /// Full normal-form check: structure, domain and weak decrease of summands.
    pub fn validate(&self, order: &dyn LinearOrder) -> Result<()> {
        self.check_structure()?;
        self.validate_inner(order)
    }

    fn validate_inner(&self, order: &dyn LinearOrder) -> Result<()> {
        for m in &self.0 {
            match m {
                Monomial::EpsilonOf(x) => order.check(x)?,
                Monomial::OmegaPow(g) => g.validate_inner(order)?,
            }
        }
        for w in self.0.windows(2) {
            if cmp_monomial(order, &w[0], &w[1])? == Ordering::Less {
                return Err(Error::NotNormalForm(format!(
                    "summands of {self} are not weakly decreasing"
                )));
            }
        }
        Ok(())
    }

    /// True if no `ε_x` occurs anywhere, i.e. the term lies below every `ε_x`.
    pub fn is_epsilon_free(&self) -> bool {
        self.0.iter().all(|m| match m {
            Monomial::EpsilonOf(_) => false,
            Monomial::OmegaPow(g) => g.is_epsilon_free(),
        })
    }

    /// All `ε` indices occurring at any depth.
    pub fn elements(&self) -> Vec<Element> {
        let mut out = Vec::new();
        self.collect_elements(&mut out);
        out
    }

    fn collect_elements(&self, out: &mut Vec<Element>) {
        for m in &self.0 {
            m.collect_elements(out);
        }
    }

    pub fn to_json(&self) -> Value {
        Value::Array(self.0.iter().map(Monomial::to_json).collect())
    }

    pub fn from_json(order: &dyn LinearOrder, v: &Value) -> Result<Self> {
        let t = Self::from_json_unchecked(v)?;
        t.validate(order)?;
        Ok(t)
    }

    fn from_json_unchecked(v: &Value) -> Result<Self> {
        let items = v
            .as_array()
            .ok_or_else(|| Error::Parse(format!("expected array of monomials, got {v}")))?;
        items
            .iter()
            .map(Monomial::from_json_unchecked)
            .collect::<Result<_>>()
            .map(EpsilonTerm)
    }
}

impl Monomial {
    fn collect_elements(&self, out: &mut Vec<Element>) {
        match self {
            Monomial::EpsilonOf(x) => out.push(*x),
            Monomial::OmegaPow(g) => g.collect_elements(out),
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            Monomial::EpsilonOf(x) => json!({ "eps": x }),
            Monomial::OmegaPow(g) => json!({ "w": g.to_json() }),
        }
    }

    fn from_json_unchecked(v: &Value) -> Result<Self> {
        let obj = v
            .as_object()
            .filter(|o| o.len() == 1)
            .ok_or_else(|| Error::Parse(format!("expected {{\"eps\":…}} or {{\"w\":…}}, got {v}")))?;
        if let Some(x) = obj.get("eps") {
            let e: Element =
                serde_json::from_value(x.clone()).map_err(|e| Error::Parse(e.to_string()))?;
            Ok(Monomial::EpsilonOf(e))
        } else if let Some(g) = obj.get("w") {
            Ok(Monomial::OmegaPow(EpsilonTerm::from_json_unchecked(g)?))
        } else {
            Err(Error::Parse(format!("unknown monomial {v}")))
        }
    }
}

impl fmt::Display for EpsilonTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("0");
        }
        for (i, m) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str("+")?;
            }
            match m {
                Monomial::EpsilonOf(x) => write!(f, "ε_{x}")?,
                Monomial::OmegaPow(g) => write!(f, "ω^{{{g}}}")?,
            }
        }
        Ok(())
    }
}

fn cmp_terms(order: &dyn LinearOrder, a: &EpsilonTerm, b: &EpsilonTerm) -> Result<Ordering> {
    for (x, y) in a.0.iter().zip(&b.0) {
        match cmp_monomial(order, x, y)? {
            Ordering::Equal => {}
            other => return Ok(other),
        }
    }
    Ok(a.0.len().cmp(&b.0.len()))
}

fn cmp_monomial(order: &dyn LinearOrder, a: &Monomial, b: &Monomial) -> Result<Ordering> {
    match (a, b) {
        (Monomial::EpsilonOf(x), Monomial::EpsilonOf(y)) => order.compare(x, y),
        (Monomial::OmegaPow(g), Monomial::OmegaPow(d)) => cmp_terms(order, g, d),
        (Monomial::OmegaPow(g), Monomial::EpsilonOf(x)) => pow_vs_eps(order, g, x),
        (Monomial::EpsilonOf(x), Monomial::OmegaPow(g)) => pow_vs_eps(order, g, x).map(Ordering::reverse),
    }
}

// ω^γ against the fixed point ε_x = ω^{ε_x}
fn pow_vs_eps(order: &dyn LinearOrder, g: &EpsilonTerm, x: &Element) -> Result<Ordering> {
    match cmp_terms(order, g, &EpsilonTerm::eps(*x))? {
        Ordering::Equal => Err(Error::NotNormalForm(format!("ω^{{{g}}} equals ε_{x}"))),
        other => Ok(other),
    }
}

/// Compares two normal-form terms of ε_X.
pub fn epsilon_compare(order: &dyn LinearOrder, a: &EpsilonTerm, b: &EpsilonTerm) -> Result<Ordering> {
    a.validate(order)?;
    b.validate(order)?;
    cmp_terms(order, a, b)
}

/// Comparison without the up-front normal-form check; still fails on the
/// `ω^γ = ε_x` collision.
pub(crate) fn epsilon_compare_unchecked(
    order: &dyn LinearOrder,
    a: &EpsilonTerm,
    b: &EpsilonTerm,
) -> Result<Ordering> {
    cmp_terms(order, a, b)
}

pub fn epsilon_lh(t: &EpsilonTerm) -> usize {
    t.0.len()
}

pub fn epsilon_term_at(t: &EpsilonTerm, n: usize) -> TermAt<'_> {
    t.0.get(n).map_or(TermAt::Zero, TermAt::Monomial)
}

pub fn epsilon_delta(a: &EpsilonTerm, b: &EpsilonTerm) -> DeltaResult {
    match a.0.iter().zip(&b.0).position(|(x, y)| x != y) {
        Some(i) => DeltaResult::DiffAt(i),
        None if a.0.len() == b.0.len() => DeltaResult::Equal,
        None => DeltaResult::DiffAt(a.0.len().min(b.0.len())),
    }
}

/// Exponent of the `n`-th summand: `Some(δ)` for `ω^δ`, `None` for `ε_x`.
pub fn epsilon_exponent(t: &EpsilonTerm, n: usize) -> Result<Option<EpsilonTerm>> {
    t.check_structure()?;
    match t.0.get(n) {
        None => Err(Error::IndexOutOfRange {
            index: n,
            len: t.0.len(),
        }),
        Some(Monomial::EpsilonOf(_)) => Ok(None),
        Some(Monomial::OmegaPow(g)) => Ok(Some(g.clone())),
    }
}

/// `e_n` with the zero extension: `None` past the end or at an `ε_x`.
pub(crate) fn exponent_ext(t: &EpsilonTerm, n: usize) -> Option<&EpsilonTerm> {
    match t.0.get(n) {
        Some(Monomial::OmegaPow(g)) => Some(g),
        _ => None,
    }
}

fn max_eps(order: &dyn LinearOrder, m: &Monomial) -> Result<Option<Element>> {
    fn walk(order: &dyn LinearOrder, m: &Monomial, best: &mut Option<Element>) -> Result<()> {
        match m {
            Monomial::EpsilonOf(x) => {
                order.check(x)?;
                if best.is_none_or(|b| order.cmp_elements(&b, x) == Ordering::Less) {
                    *best = Some(*x);
                }
            }
            Monomial::OmegaPow(g) => {
                for inner in &g.0 {
                    walk(order, inner, best)?;
                }
            }
        }
        Ok(())
    }
    let mut best = None;
    walk(order, m, &mut best)?;
    Ok(best)
}

fn occurrence_height(m: &Monomial, x: &Element) -> Option<usize> {
    match m {
        Monomial::EpsilonOf(y) => (y == x).then_some(0),
        Monomial::OmegaPow(g) => g
            .0
            .iter()
            .filter_map(|inner| occurrence_height(inner, x))
            .max()
            .map(|h| h + 1),
    }
}

fn summand(t: &EpsilonTerm, n: usize) -> Result<&Monomial> {
    t.0.get(n).ok_or(Error::IndexOutOfRange {
        index: n,
        len: t.0.len(),
    })
}

/// `b_n(γ)`: the largest `x` with `ε_x` inside the `n`-th summand;
/// `None` is BelowEpsilonZero.
pub fn b(t: &EpsilonTerm, n: usize, order: &dyn LinearOrder) -> Result<Option<Element>> {
    max_eps(order, summand(t, n)?)
}

/// `ht_n(γ)`: deepest ω-nesting of an occurrence of `ε_{b_n(γ)}` in the
/// `n`-th summand; 0 when the summand is below every ε.
pub fn ht(t: &EpsilonTerm, n: usize, order: &dyn LinearOrder) -> Result<usize> {
    let m = summand(t, n)?;
    Ok(match max_eps(order, m)? {
        None => 0,
        Some(x) => occurrence_height(m, &x).unwrap_or(0),
    })
}

/// `b_n` with the zero extension used by the colouring formulas.
pub(crate) fn b_ext(t: &EpsilonTerm, n: usize, order: &dyn LinearOrder) -> Result<Option<Element>> {
    match t.0.get(n) {
        None => Ok(None),
        Some(m) => max_eps(order, m),
    }
}

pub(crate) fn ht_ext(t: &EpsilonTerm, n: usize, order: &dyn LinearOrder) -> Result<usize> {
    if n >= t.0.len() {
        Ok(0)
    } else {
        ht(t, n, order)
    }
}

/// `(b_n, ht_n)` with the zero extension, in one walk of the summand.
pub(crate) fn b_ht_ext(t: &EpsilonTerm, n: usize, order: &dyn LinearOrder) -> Result<(Option<Element>, usize)> {
    // best element so far and the deepest nesting at which it occurs
    fn walk(order: &dyn LinearOrder, m: &Monomial, depth: usize, best: &mut Option<(Element, usize)>) -> Result<()> {
        match m {
            Monomial::EpsilonOf(x) => {
                order.check(x)?;
                *best = match *best {
                    None => Some((*x, depth)),
                    Some((b, d)) => match order.cmp_elements(&b, x) {
                        Ordering::Less => Some((*x, depth)),
                        Ordering::Equal => Some((b, d.max(depth))),
                        Ordering::Greater => Some((b, d)),
                    },
                };
            }
            Monomial::OmegaPow(g) => {
                for inner in &g.0 {
                    walk(order, inner, depth + 1, best)?;
                }
            }
        }
        Ok(())
    }
    let Some(m) = t.0.get(n) else {
        return Ok((None, 0));
    };
    let mut best = None;
    walk(order, m, 0, &mut best)?;
    Ok(best.map_or((None, 0), |(x, d)| (Some(x), d)))
}

/// The order ε_X as a term space.
#[derive(Clone, Debug)]
pub struct EpsilonSpace {
    pub order: Order,
}

impl EpsilonSpace {
    pub fn new(order: Order) -> Self {
        EpsilonSpace { order }
    }
}

impl TermOrder<EpsilonTerm> for EpsilonSpace {
    fn compare_terms(&self, a: &EpsilonTerm, b: &EpsilonTerm) -> Result<Ordering> {
        epsilon_compare_unchecked(&*self.order, a, b)
    }
}
