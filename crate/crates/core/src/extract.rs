//! Backward functionals: from an instance and a finite homogeneous witness to
//! a descending sequence in the base order.
//!
//! Every extractor first checks the colour contract it relies on over all
//! tuples of the witness, then runs the extraction. Shortfalls of the finite
//! witness are reported as errors instead of being ignored.

use std::collections::HashMap;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::coloring::{
    color_large, color_triple, color_tuple, comparing_exponent_sequence, BaseColor, ColoringInstance, EpsilonInstance,
    HColor, OmegaInstance, TermOrStar, TermSpace,
};
use crate::epsilon::{self, EpsilonTerm};
use crate::error::{Error, Result};
use crate::omega::{OmegaTerm};
use crate::orders::Element;

/// Which tuples of the witness the colour refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum WitnessArity {
    Tuples(usize),
    ExactlyLarge,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HomogeneousWitness<C> {
    pub indices: Vec<usize>,
    pub colour: C,
    pub arity: WitnessArity,
}

/// Every exactly large subset of a sorted index set, in lexicographic order.
pub fn exactly_large_subsets(indices: &[usize]) -> impl Iterator<Item = Vec<usize>> + '_ {
    indices.iter().enumerate().flat_map(move |(pos, &m)| {
        indices[pos + 1..]
            .iter()
            .copied()
            .combinations(m + 2)
            .map(move |rest| std::iter::once(m).chain(rest).collect())
    })
}

fn mismatch(expected: impl ToString, found: impl ToString, tuple: Vec<usize>) -> Error {
    Error::ColourMismatch {
        expected: expected.to_string(),
        found: found.to_string(),
        tuple,
    }
}

fn check_sorted(indices: &[usize]) -> Result<()> {
    if indices.windows(2).all(|w| w[0] < w[1]) {
        Ok(())
    } else {
        Err(Error::IndexError(indices.to_vec()))
    }
}

/// Checks that every triple of `indices` has base colour `expected`.
pub fn check_triples<S: TermSpace>(inst: &ColoringInstance<S>, indices: &[usize], expected: BaseColor) -> Result<()> {
    check_sorted(indices)?;
    for t in indices.iter().copied().combinations(3) {
        let c = color_triple(inst, t[0], t[1], t[2])?;
        if c != expected {
            return Err(mismatch(expected, c, t));
        }
    }
    Ok(())
}

/// Checks that every `(h+2)`-subset of `indices` has colour `expected` under `C_h`.
pub fn check_tuples<S: TermSpace>(inst: &ColoringInstance<S>, h: usize, indices: &[usize], expected: &HColor) -> Result<()> {
    check_sorted(indices)?;
    for t in indices.iter().copied().combinations(h + 2) {
        let c = color_tuple(inst, &t)?;
        if &c != expected {
            return Err(mismatch(expected, c, t));
        }
    }
    Ok(())
}

/// Checks that every exactly large subset of `indices` gets `expected`.
pub fn check_large(inst: &EpsilonInstance, indices: &[usize], expected: u8) -> Result<()> {
    check_sorted(indices)?;
    for s in exactly_large_subsets(indices) {
        let c = color_large(inst, &s)?;
        if c != expected {
            return Err(mismatch(expected, c, s));
        }
    }
    Ok(())
}

fn star(what: String) -> Error {
    Error::StarEncountered(what)
}

fn shallow(what: String) -> Error {
    Error::WitnessTooShallow(what)
}

/// `i ↦ e_{Δ(α_{h_i}, α_{h_{i+1}})}(α_{h_i})` on a C1g-homogeneous witness.
pub fn extract_rt3(inst: &OmegaInstance, witness: &[usize], k: usize) -> Result<Vec<Element>> {
    if inst.space.level != 1 {
        return Err(Error::LevelMismatch {
            left: 1,
            right: inst.space.level,
        });
    }
    check_triples(inst, witness, BaseColor::C1g)?;
    if k > 0 && witness.len() < k + 1 {
        return Err(shallow(format!("{k} values need {} witness indices, got {}", k + 1, witness.len())));
    }
    (0..k)
        .map(|i| {
            let (a, b) = (inst.term(witness[i])?, inst.term(witness[i + 1])?);
            let d = match crate::omega::delta(&a, &b)? {
                crate::omega::DeltaResult::DiffAt(d) => d,
                crate::omega::DeltaResult::Equal => {
                    return Err(star(format!("α_{} equals α_{}", witness[i], witness[i + 1])))
                }
            };
            a.entries()
                .get(d)
                .and_then(OmegaTerm::as_element)
                .copied()
                .ok_or_else(|| star(format!("e_{d}(α_{}) does not exist", witness[i])))
        })
        .collect()
}

/// Depth-`h` comparing exponent over `{s_n, …, s_{n+h}}`, read at `s_n`.
pub fn extract_rtn(inst: &OmegaInstance, h: usize, witness: &[usize], k: usize) -> Result<Vec<Element>> {
    if h < 2 || inst.space.level as usize != h {
        return Err(Error::LevelMismatch {
            left: h as u32,
            right: inst.space.level,
        });
    }
    check_tuples(inst, h, witness, &HColor::base(BaseColor::C1g))?;
    if k > 0 && witness.len() < k + h {
        return Err(shallow(format!("{k} values need {} witness indices, got {}", k + h, witness.len())));
    }
    (0..k)
        .map(|n| {
            let window = &witness[n..=n + h];
            let seq = comparing_exponent_sequence(inst, h, window)?;
            match &seq.values[0] {
                TermOrStar::Term(OmegaTerm::Base(e)) => Ok(*e),
                TermOrStar::Term(t) => Err(Error::LevelMismatch {
                    left: 0,
                    right: t.level(),
                }),
                TermOrStar::Star => Err(star(format!("depth-{h} comparing exponent at {window:?}"))),
            }
        })
        .collect()
}

// The H-indexed comparing exponents α_i^{(m),H}, memoized on (i, m).
struct HExponents<'a> {
    inst: &'a EpsilonInstance,
    witness: &'a [usize],
    memo: HashMap<(usize, usize), EpsilonTerm>,
}

impl HExponents<'_> {
    fn succ(&self, i: usize) -> Option<usize> {
        self.witness.iter().copied().find(|&h| h > i)
    }

    fn get(&mut self, i: usize, m: usize) -> Result<EpsilonTerm> {
        if m == 0 {
            return self.inst.term(i);
        }
        if let Some(t) = self.memo.get(&(i, m)) {
            return Ok(t.clone());
        }
        let s = self
            .succ(i)
            .ok_or_else(|| shallow(format!("succ_H({i}) needed at depth {m}")))?;
        let a = self.get(i, m - 1)?;
        let b = self.get(s, m - 1)?;
        let d = epsilon::epsilon_delta(&a, &b).numeric();
        let e = epsilon::exponent_ext(&a, d)
            .cloned()
            .ok_or_else(|| star(format!("α_{i}^({m}): e_{d}({a}) does not exist")))?;
        self.memo.insert((i, m), e.clone());
        Ok(e)
    }
}

/// `τ_i = b_0(α_{n_i}^{(t_i),H})` on a witness where `color_large` is constantly 0.
pub fn extract_large(inst: &EpsilonInstance, witness: &[usize], k: usize) -> Result<Vec<Element>> {
    check_large(inst, witness, 0)?;
    if k == 0 {
        return Ok(Vec::new());
    }
    if witness.len() < 2 {
        return Err(shallow(format!("need at least two witness indices, got {}", witness.len())));
    }
    let order = &*inst.space.order;
    let mut ex = HExponents {
        inst,
        witness,
        memo: HashMap::new(),
    };
    let (mut t, mut n) = (witness[0], witness[1]);
    let mut out = Vec::with_capacity(k);
    for i in 0..k {
        let prec = witness.iter().copied().take_while(|&h| h < n).last();
        if prec.is_none_or(|p| t > p) {
            return Err(shallow(format!("t_{i} = {t} exceeds prec_H({n})")));
        }
        let term = ex.get(n, t)?;
        let tau = epsilon::b_ext(&term, 0, order)?
            .ok_or_else(|| Error::BelowEpsilonZero(format!("b_0 of α_{n}^({t}) = {term}")))?;
        out.push(tau);
        if i + 1 == k {
            break;
        }
        t += epsilon::ht_ext(&term, 0, order)? + 1;
        let m = witness
            .iter()
            .copied()
            .find(|&h| h >= t)
            .ok_or_else(|| shallow(format!("no witness index >= t_{} = {t}", i + 1)))?;
        n = ex.succ(m).ok_or_else(|| shallow(format!("succ_H({m}) for n_{}", i + 1)))?;
    }
    Ok(out)
}

/// `i ↦ b_{Δ(α_{h_i}, α_{h_{i+1}})}(α_{h_i})` on a C2-homogeneous witness.
pub fn extract_epsilon_b_path(inst: &EpsilonInstance, witness: &[usize], k: usize) -> Result<Vec<Element>> {
    check_triples(inst, witness, BaseColor::C2)?;
    if k > 0 && witness.len() < k + 1 {
        return Err(shallow(format!("{k} values need {} witness indices, got {}", k + 1, witness.len())));
    }
    let order = &*inst.space.order;
    (0..k)
        .map(|i| {
            let (a, b) = (inst.term(witness[i])?, inst.term(witness[i + 1])?);
            let d = epsilon::epsilon_delta(&a, &b).numeric();
            epsilon::b_ext(&a, d, order)?
                .ok_or_else(|| Error::BelowEpsilonZero(format!("b_{d}(α_{})", witness[i])))
        })
        .collect()
}

/// Terms whose base elements can be listed.
pub trait Subterms {
    fn subterm_elements(&self) -> Vec<Element>;
}

impl Subterms for OmegaTerm {
    fn subterm_elements(&self) -> Vec<Element> {
        self.elements()
    }
}

impl Subterms for EpsilonTerm {
    fn subterm_elements(&self) -> Vec<Element> {
        self.elements()
    }
}

impl Subterms for Element {
    fn subterm_elements(&self) -> Vec<Element> {
        vec![*self]
    }
}

/// True iff every output occurs inside some term of `terms`.
pub fn subterm_check<T: Subterms>(terms: &[T], outputs: &[Element]) -> bool {
    if outputs.is_empty() {
        return true;
    }
    let seen: std::collections::HashSet<Element> = terms.iter().flat_map(Subterms::subterm_elements).collect();
    outputs.iter().all(|e| seen.contains(e))
}
