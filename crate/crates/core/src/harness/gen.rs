//! Instance generators: concrete descending sequences in the term spaces,
//! built from the canonical descending witness `w` of the base order.

use serde::{Deserialize, Serialize};

use crate::epsilon::{EpsilonTerm, Monomial};
use crate::error::{Error, Result};
use crate::omega::OmegaTerm;
use crate::orders::{witness_sequence, DescendingSequence, Element, Order};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Pipeline {
    Rt3,
    Rtn,
    Large,
    Hindman,
}

impl Pipeline {
    pub fn name(self) -> &'static str {
        match self {
            Pipeline::Rt3 => "rt3",
            Pipeline::Rtn => "rtn",
            Pipeline::Large => "large",
            Pipeline::Hindman => "hindman",
        }
    }

    pub fn kinds(self) -> &'static [&'static str] {
        match self {
            Pipeline::Large => &["omega-power", "pure-epsilon", "ladder"],
            _ => &["constant-delta", "staircase"],
        }
    }

    /// Level of the ω-terms the pipeline works on; `None` for ε-terms.
    pub fn omega_level(self, h: usize) -> Option<u32> {
        match self {
            Pipeline::Rt3 | Pipeline::Hindman => Some(1),
            Pipeline::Rtn => Some(h as u32),
            Pipeline::Large => None,
        }
    }
}

/// A generated instance.
#[derive(Clone, Debug)]
pub enum Instance {
    Omega {
        level: u32,
        seq: DescendingSequence<OmegaTerm>,
    },
    Epsilon {
        seq: DescendingSequence<EpsilonTerm>,
    },
}

fn w(seq: &DescendingSequence<Element>, i: usize) -> Option<OmegaTerm> {
    seq.term(i).ok().map(OmegaTerm::Base)
}

fn level1(entries: Vec<OmegaTerm>) -> OmegaTerm {
    OmegaTerm::Sum { level: 1, entries }
}

fn omega_term(kind: &str, ws: &DescendingSequence<Element>, i: usize) -> Option<OmegaTerm> {
    match kind {
        "constant-delta" => Some(level1(vec![w(ws, 0)?, w(ws, i + 1)?])),
        "staircase" => {
            let q = i / 3;
            let (a, b) = (w(ws, q)?, w(ws, q + 1)?);
            Some(match i % 3 {
                0 => level1(vec![a.clone(), a.clone(), a]),
                1 => level1(vec![a.clone(), a, b]),
                _ => level1(vec![a, b]),
            })
        }
        _ => None,
    }
}

/// `ω^{ε_{w_0} + ω^{ε_{w_1} + … ω^{ε_{w_L} + ε_{w_{L+n+1}}}}}`; depth 0 is
/// the omega-power kind.
fn ladder_term(ws: &DescendingSequence<Element>, depth: usize, n: usize) -> Option<EpsilonTerm> {
    let e = |i: usize| ws.term(i).ok().map(Monomial::EpsilonOf);
    let mut gamma = EpsilonTerm(vec![e(depth)?, e(depth + n + 1)?]);
    for l in (0..depth).rev() {
        gamma = EpsilonTerm(vec![e(l)?, Monomial::OmegaPow(gamma)]);
    }
    Some(EpsilonTerm(vec![Monomial::OmegaPow(gamma)]))
}

/// Builds the instance of `kind` for `pipeline` over `order`.
pub fn gen_instance(pipeline: Pipeline, order: &Order, kind: &str, h: usize, depth: usize) -> Result<Instance> {
    if !pipeline.kinds().contains(&kind) {
        return Err(Error::Parameter(format!(
            "unknown kind `{kind}` for {}; expected one of {:?}",
            pipeline.name(),
            pipeline.kinds()
        )));
    }
    let ws = witness_sequence(order)?;
    let space = format!("{}:{}", pipeline.name(), kind);
    let kind = kind.to_string();
    Ok(match pipeline.omega_level(h) {
        Some(level) => {
            if level < 1 || (pipeline == Pipeline::Rtn && level < 2) {
                return Err(Error::Parameter(format!("rtn needs h >= 2, got {h}")));
            }
            let seq = DescendingSequence::from_fn(space, move |i| {
                let mut t = omega_term(&kind, &ws, i)?;
                for _ in 1..level {
                    t = t.singleton();
                }
                Some(t)
            });
            Instance::Omega { level, seq }
        }
        None => {
            let seq = DescendingSequence::from_fn(space, move |i| match kind.as_str() {
                "pure-epsilon" => ws.term(i).ok().map(EpsilonTerm::eps),
                "omega-power" => ladder_term(&ws, 0, i),
                _ => ladder_term(&ws, depth, i),
            });
            Instance::Epsilon { seq }
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::epsilon::EpsilonSpace;
    use crate::omega::OmegaSpace;
    use crate::orders::{builtin_order, verify_descending, Verdict};

    #[test]
    fn constant_delta_prefix() {
        let o = builtin_order("omega-star").unwrap();
        let Instance::Omega { seq, .. } = gen_instance(Pipeline::Rt3, &o, "constant-delta", 2, 0).unwrap() else {
            panic!()
        };
        let shown: Vec<String> = seq.prefix(3).unwrap().iter().map(ToString::to_string).collect();
        assert_eq!(shown, ["⟨0,1⟩", "⟨0,2⟩", "⟨0,3⟩"]);
    }

    #[test]
    fn pure_epsilon_prefix() {
        let o = builtin_order("omega-star").unwrap();
        let Instance::Epsilon { seq } = gen_instance(Pipeline::Large, &o, "pure-epsilon", 2, 0).unwrap() else {
            panic!()
        };
        let shown: Vec<String> = seq.prefix(3).unwrap().iter().map(ToString::to_string).collect();
        assert_eq!(shown, ["ε_0", "ε_1", "ε_2"]);
    }

    #[test]
    fn well_ordered_base_has_no_instance() {
        let o = builtin_order("finite:3").unwrap();
        let err = gen_instance(Pipeline::Rt3, &o, "staircase", 2, 0).unwrap_err();
        assert_eq!(err.kind(), "NotDescendingWitness");
    }

    #[test]
    fn every_kind_descends() {
        for name in ["omega-star", "zeta", "eta"] {
            let o = builtin_order(name).unwrap();
            for p in [Pipeline::Rt3, Pipeline::Rtn, Pipeline::Large, Pipeline::Hindman] {
                for kind in p.kinds() {
                    let verdict = match gen_instance(p, &o, kind, 3, 4).unwrap() {
                        Instance::Omega { level, seq } => {
                            let space = OmegaSpace::new(o.clone(), level);
                            for t in seq.prefix(30).unwrap() {
                                t.validate(&*o).unwrap();
                            }
                            verify_descending(&space, &seq, 30).unwrap()
                        }
                        Instance::Epsilon { seq } => {
                            for t in seq.prefix(30).unwrap() {
                                t.validate(&*o).unwrap();
                            }
                            verify_descending(&EpsilonSpace::new(o.clone()), &seq, 30).unwrap()
                        }
                    };
                    assert_eq!(verdict, Verdict::Ok, "{name} {p:?} {kind}");
                }
            }
        }
    }
}
