//! Independent ordinal arithmetic below ω^ω, used to cross-check the
//! lexicographic comparison of level-1 terms over ω.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};
use crate::omega::OmegaTerm;
use crate::orders::{Element, LinearOrder};

/// An ordinal below ω^ω in Cantor normal form: `(exponent, coefficient)` pairs
/// with strictly decreasing exponents and positive coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Cnf(Vec<(u64, u64)>);

impl Cnf {
    pub fn zero() -> Self {
        Cnf(Vec::new())
    }

    pub fn finite(n: u64) -> Self {
        if n == 0 {
            Cnf::zero()
        } else {
            Cnf(vec![(0, n)])
        }
    }

    /// `ω^e`.
    pub fn omega_pow(e: u64) -> Self {
        Cnf(vec![(e, 1)])
    }

    pub fn terms(&self) -> &[(u64, u64)] {
        &self.0
    }

    /// Ordinal addition: terms of `self` below the leading exponent of `rhs`
    /// are absorbed.
    pub fn add(&self, rhs: &Cnf) -> Cnf {
        let Some(&(lead, coeff)) = rhs.0.first() else {
            return self.clone();
        };
        let mut out: Vec<(u64, u64)> = self.0.iter().copied().filter(|&(e, _)| e >= lead).collect();
        match out.last_mut() {
            Some((e, c)) if *e == lead => *c += coeff,
            _ => out.push((lead, coeff)),
        }
        out.extend_from_slice(&rhs.0[1..]);
        Cnf(out)
    }
}

impl PartialOrd for Cnf {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Cnf {
    fn cmp(&self, other: &Self) -> Ordering {
        for (a, b) in self.0.iter().zip(&other.0) {
            let c = a.0.cmp(&b.0).then(a.1.cmp(&b.1));
            if c != Ordering::Equal {
                return c;
            }
        }
        self.0.len().cmp(&other.0.len())
    }
}

impl fmt::Display for Cnf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("0");
        }
        for (i, (e, c)) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str("+")?;
            }
            let base = match e {
                0 => String::new(),
                1 => "ω".to_string(),
                _ => format!("ω^{e}"),
            };
            match (base.is_empty(), c) {
                (true, _) => write!(f, "{c}")?,
                (false, 1) => f.write_str(&base)?,
                (false, _) => write!(f, "{base}·{c}")?,
            }
        }
        Ok(())
    }
}

/// Evaluates `ω^{x_0} + … + ω^{x_k}` for a level-1 term over ω.
pub fn cnf_ordinal_oracle(order: &dyn LinearOrder, t: &OmegaTerm) -> Result<Cnf> {
    if order.name() != "omega" {
        return Err(Error::UnsupportedBase(order.name()));
    }
    if t.level() != 1 {
        return Err(Error::LevelMismatch {
            left: 1,
            right: t.level(),
        });
    }
    t.entries().iter().try_fold(Cnf::zero(), |acc, e| match e.as_element() {
        Some(Element::Int(x)) if *x >= 0 => Ok(acc.add(&Cnf::omega_pow(*x as u64))),
        _ => Err(Error::DomainError {
            order: order.name(),
            element: e.to_string(),
        }),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::orders::builtin_order;

    fn t(xs: &[i64]) -> OmegaTerm {
        let o = builtin_order("omega").unwrap();
        let e: Vec<_> = xs.iter().map(|&x| Element::Int(x)).collect();
        OmegaTerm::level1(&*o, &e).unwrap()
    }

    #[test]
    fn oracle_examples() {
        let o = builtin_order("omega").unwrap();
        assert_eq!(cnf_ordinal_oracle(&*o, &t(&[])).unwrap(), Cnf::zero());
        assert_eq!(cnf_ordinal_oracle(&*o, &t(&[0, 0])).unwrap(), Cnf::finite(2));
        let v = cnf_ordinal_oracle(&*o, &t(&[2, 1])).unwrap();
        assert_eq!(v, Cnf(vec![(2, 1), (1, 1)]));
        assert_eq!(v.to_string(), "ω^2+ω");
    }

    #[test]
    fn absorption() {
        // 1 + ω = ω
        let s = Cnf::finite(1).add(&Cnf::omega_pow(1));
        assert_eq!(s, Cnf::omega_pow(1));
        assert!(Cnf(vec![(2, 1), (1, 1)]) > Cnf(vec![(2, 1), (0, 2)]));
    }

    #[test]
    fn rejects_other_bases() {
        let ws = builtin_order("omega-star").unwrap();
        let term = OmegaTerm::level1(&*ws, &[Element::Int(1)]).unwrap();
        assert!(matches!(cnf_ordinal_oracle(&*ws, &term), Err(Error::UnsupportedBase(_))));
    }
}
