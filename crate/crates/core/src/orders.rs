//! Base linear orders and descending sequences.
//!
//! Elements are small integer codes (or reduced fractions for the rationals)
//! so that every trace renders them verbatim.

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use serde::de::{self, Deserializer, Visitor};
use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};

/// An element of a base order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Element {
    Int(i64),
    /// Reduced fraction with positive denominator.
    Rat { num: i64, den: i64 },
}

impl Element {
    pub fn rat(num: i64, den: i64) -> Result<Self> {
        if den == 0 {
            return Err(Error::Parse(format!("zero denominator in {num}/{den}")));
        }
        let sign = if den < 0 { -1 } else { 1 };
        let g = gcd(num.unsigned_abs(), den.unsigned_abs()) as i64;
        let g = g.max(1);
        Ok(Element::Rat {
            num: sign * num / g,
            den: sign * den / g,
        })
    }

    pub fn as_int(&self) -> Option<i64> {
        match *self {
            Element::Int(v) => Some(v),
            Element::Rat { .. } => None,
        }
    }
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Element::Int(v) => write!(f, "{v}"),
            Element::Rat { num, den } => write!(f, "{num}/{den}"),
        }
    }
}

impl Serialize for Element {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Element::Int(v) => s.serialize_i64(*v),
            Element::Rat { .. } => s.serialize_str(&self.to_string()),
        }
    }
}

impl<'de> Deserialize<'de> for Element {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        struct ElementVisitor;

        impl Visitor<'_> for ElementVisitor {
            type Value = Element;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("an integer or a \"p/q\" fraction string")
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<Element, E> {
                Ok(Element::Int(v))
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<Element, E> {
                i64::try_from(v)
                    .map(Element::Int)
                    .map_err(|_| E::custom("integer code out of range"))
            }

            fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<Element, E> {
                v.parse().map_err(|e: Error| E::custom(e.to_string()))
            }
        }

        d.deserialize_any(ElementVisitor)
    }
}

impl std::str::FromStr for Element {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("bad element literal `{s}`"));
        match s.split_once('/') {
            Some((n, d)) => {
                let num = n.trim().parse().map_err(|_| bad())?;
                let den = d.trim().parse().map_err(|_| bad())?;
                Element::rat(num, den)
            }
            None => s.trim().parse().map(Element::Int).map_err(|_| bad()),
        }
    }
}

/// A countable linear order with decidable comparison.
pub trait LinearOrder: fmt::Debug + Send + Sync {
    fn name(&self) -> String;

    fn contains(&self, e: &Element) -> bool;

    /// Comparison on elements already known to be in the domain.
    fn cmp_elements(&self, a: &Element, b: &Element) -> Ordering;

    /// `i`-th term of the canonical descending sequence, if the order has one.
    fn descending_witness(&self, i: usize) -> Option<Element>;

    fn check(&self, e: &Element) -> Result<()> {
        if self.contains(e) {
            Ok(())
        } else {
            Err(Error::DomainError {
                order: self.name(),
                element: e.to_string(),
            })
        }
    }

    fn compare(&self, a: &Element, b: &Element) -> Result<Ordering> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.cmp_elements(a, b))
    }

    fn has_descending_witness(&self) -> bool {
        self.descending_witness(0).is_some()
    }
}

/// Shared handle to an order.
pub type Order = Arc<dyn LinearOrder>;

/// The orders the CLI knows by name.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BuiltinOrder {
    /// The naturals.
    Omega,
    /// The naturals reversed.
    OmegaStar,
    /// The integers.
    Zeta,
    /// The rationals.
    Eta,
    /// `0 < 1 < … < k-1`.
    Finite(u32),
}

pub const BUILTIN_NAMES: [&str; 5] = ["omega", "omega-star", "zeta", "eta", "finite:<k>"];

impl BuiltinOrder {
    pub fn parse(name: &str) -> Result<Self> {
        match name {
            "omega" => Ok(BuiltinOrder::Omega),
            "omega-star" => Ok(BuiltinOrder::OmegaStar),
            "zeta" => Ok(BuiltinOrder::Zeta),
            "eta" => Ok(BuiltinOrder::Eta),
            other => match other.strip_prefix("finite:").map(str::parse::<u32>) {
                Some(Ok(k)) if k >= 1 => Ok(BuiltinOrder::Finite(k)),
                _ => Err(Error::UnknownOrder(name.to_string())),
            },
        }
    }
}

/// Looks up a built-in order by its CLI name.
pub fn builtin_order(name: &str) -> Result<Order> {
    Ok(Arc::new(BuiltinOrder::parse(name)?))
}

impl LinearOrder for BuiltinOrder {
    fn name(&self) -> String {
        match self {
            BuiltinOrder::Omega => "omega".into(),
            BuiltinOrder::OmegaStar => "omega-star".into(),
            BuiltinOrder::Zeta => "zeta".into(),
            BuiltinOrder::Eta => "eta".into(),
            BuiltinOrder::Finite(k) => format!("finite:{k}"),
        }
    }

    fn contains(&self, e: &Element) -> bool {
        match (self, e) {
            (BuiltinOrder::Omega | BuiltinOrder::OmegaStar, Element::Int(v)) => *v >= 0,
            (BuiltinOrder::Zeta, Element::Int(_)) => true,
            (BuiltinOrder::Eta, Element::Rat { num, den }) => {
                *den > 0 && gcd(num.unsigned_abs(), den.unsigned_abs()) == 1
            }
            (BuiltinOrder::Finite(k), Element::Int(v)) => *v >= 0 && *v < i64::from(*k),
            _ => false,
        }
    }

    fn cmp_elements(&self, a: &Element, b: &Element) -> Ordering {
        match (a, b) {
            (Element::Int(x), Element::Int(y)) => match self {
                BuiltinOrder::OmegaStar => y.cmp(x),
                _ => x.cmp(y),
            },
            (Element::Rat { num: p, den: q }, Element::Rat { num: r, den: s }) => {
                (i128::from(*p) * i128::from(*s)).cmp(&(i128::from(*r) * i128::from(*q)))
            }
            // Unreachable for checked elements; ints sort before fractions.
            (Element::Int(_), Element::Rat { .. }) => Ordering::Less,
            (Element::Rat { .. }, Element::Int(_)) => Ordering::Greater,
        }
    }

    fn descending_witness(&self, i: usize) -> Option<Element> {
        let i = i64::try_from(i).ok()?;
        match self {
            BuiltinOrder::OmegaStar => Some(Element::Int(i)),
            BuiltinOrder::Zeta => Some(Element::Int(-i)),
            BuiltinOrder::Eta => Some(Element::Rat { num: 1, den: i + 1 }),
            BuiltinOrder::Omega | BuiltinOrder::Finite(_) => None,
        }
    }
}

/// Anything that can order values of type `T`: a base order or a term space.
pub trait TermOrder<T> {
    fn compare_terms(&self, a: &T, b: &T) -> Result<Ordering>;
}

impl TermOrder<Element> for dyn LinearOrder {
    fn compare_terms(&self, a: &Element, b: &Element) -> Result<Ordering> {
        self.compare(a, b)
    }
}

impl TermOrder<Element> for BuiltinOrder {
    fn compare_terms(&self, a: &Element, b: &Element) -> Result<Ordering> {
        self.compare(a, b)
    }
}

/// Result of a prefix check.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    Ok,
    FailAt(usize),
    Inconclusive,
}

impl Verdict {
    pub fn is_ok(&self) -> bool {
        matches!(self, Verdict::Ok)
    }
}

type TermFn<T> = dyn Fn(usize) -> Option<T> + Send + Sync;

/// An infinite (or finitely materialized) sequence given by its term function.
///
/// Used both for instances (descending sequences in a term space) and for
/// solutions (descending sequences in the base order). The strict-descent
/// contract is not enforced on construction; use [`verify_descending`].
#[derive(Clone)]
pub struct DescendingSequence<T> {
    term: Arc<TermFn<T>>,
    space: String,
}

impl<T> fmt::Debug for DescendingSequence<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DescendingSequence")
            .field("space", &self.space)
            .finish_non_exhaustive()
    }
}

impl<T: Clone + Send + Sync + 'static> DescendingSequence<T> {
    pub fn from_fn<F>(space: impl Into<String>, f: F) -> Self
    where
        F: Fn(usize) -> Option<T> + Send + Sync + 'static,
    {
        DescendingSequence {
            term: Arc::new(f),
            space: space.into(),
        }
    }

    /// A finite table; indices past the end report [`Error::PrefixExhausted`].
    pub fn from_vec(space: impl Into<String>, terms: Vec<T>) -> Self {
        let terms = Arc::new(terms);
        Self::from_fn(space, move |i| terms.get(i).cloned())
    }

    pub fn term(&self, i: usize) -> Result<T> {
        (self.term)(i).ok_or(Error::PrefixExhausted(i))
    }

    pub fn prefix(&self, n: usize) -> Result<Vec<T>> {
        (0..n).map(|i| self.term(i)).collect()
    }

    /// Tag naming the target order or term space.
    pub fn space(&self) -> &str {
        &self.space
    }
}

/// The canonical descending witness of `order`, if it has one.
pub fn witness_sequence(order: &Order) -> Result<DescendingSequence<Element>> {
    if !order.has_descending_witness() {
        return Err(Error::NotDescendingWitness(order.name()));
    }
    let o = Arc::clone(order);
    Ok(DescendingSequence::from_fn(order.name(), move |i| {
        o.descending_witness(i)
    }))
}

/// Checks `term(i) > term(i+1)` for every `i < k-1`.
pub fn verify_descending<T, S>(space: &S, seq: &DescendingSequence<T>, k: usize) -> Result<Verdict>
where
    T: Clone + Send + Sync + 'static,
    S: TermOrder<T> + ?Sized,
{
    if k < 2 {
        return Err(Error::Parameter(format!("verify_descending needs k >= 2, got {k}")));
    }
    let mut prev = seq.term(0)?;
    for i in 0..k - 1 {
        let next = seq.term(i + 1)?;
        if space.compare_terms(&prev, &next)? != Ordering::Greater {
            return Ok(Verdict::FailAt(i));
        }
        prev = next;
    }
    Ok(Verdict::Ok)
}

/// [`verify_descending`] on an already materialized slice; slices shorter than
/// two are trivially descending.
pub fn verify_descending_slice<T, S>(space: &S, terms: &[T]) -> Result<Verdict>
where
    S: TermOrder<T> + ?Sized,
{
    for (i, w) in terms.windows(2).enumerate() {
        if space.compare_terms(&w[0], &w[1])? != Ordering::Greater {
            return Ok(Verdict::FailAt(i));
        }
    }
    Ok(Verdict::Ok)
}
