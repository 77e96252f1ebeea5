use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use super::PolyError;

/// Exponents are bounded by 2^31; products past the bound are reported, never wrapped.
pub const MAX_EXPONENT: u32 = 1 << 31;

/// Exponent vector. The derived `Ord` is lex with variable 0 largest; it is the
/// storage order of polynomial terms, independent of any monomial order used
/// for Groebner computations.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn one(n: usize) -> Self {
        Monomial(vec![0; n])
    }

    pub fn var(n: usize, i: usize, e: u32) -> Self {
        let mut v = vec![0; n];
        v[i] = e;
        Monomial(v)
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> u64 {
        self.0.iter().map(|&e| e as u64).sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn try_mul(&self, other: &Monomial) -> Result<Monomial, PolyError> {
        let mut out = Vec::with_capacity(self.0.len());
        for (a, b) in self.0.iter().zip(&other.0) {
            let s = a.checked_add(*b).filter(|s| *s < MAX_EXPONENT);
            out.push(s.ok_or(PolyError::ExponentOverflow)?);
        }
        Ok(Monomial(out))
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        self.try_mul(other).expect("exponent overflow")
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// `other / self`, when `self` divides `other`.
    pub fn quotient_of(&self, other: &Monomial) -> Option<Monomial> {
        if !self.divides(other) {
            return None;
        }
        Some(Monomial(other.0.iter().zip(&self.0).map(|(b, a)| b - a).collect()))
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| *a.max(b)).collect())
    }

    pub fn coprime(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| *a == 0 || *b == 0)
    }

    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().filter(|(_, e)| **e > 0).map(|(i, _)| i)
    }
}

/// Monomial orders. `Lex` and `Grevlex` rank variable 0 highest. `Block`
/// compares the marked (eliminated / fiber) variables first by grevlex, then
/// the remaining variables by grevlex.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum MonomialOrder {
    Lex,
    Grevlex,
    Block { first: Vec<bool> },
}

fn grevlex_on(a: &[u32], b: &[u32], mask: Option<(&[bool], bool)>) -> Ordering {
    let keep = |i: usize| mask.is_none_or(|(m, want)| m[i] == want);
    let deg = |m: &[u32]| -> u64 {
        m.iter().enumerate().filter(|(i, _)| keep(*i)).map(|(_, e)| *e as u64).sum()
    };
    match deg(a).cmp(&deg(b)) {
        Ordering::Equal => {}
        o => return o,
    }
    for i in (0..a.len()).rev() {
        if !keep(i) {
            continue;
        }
        match a[i].cmp(&b[i]) {
            Ordering::Equal => continue,
            // smaller exponent in the last variable wins
            o => return o.reverse(),
        }
    }
    Ordering::Equal
}

impl MonomialOrder {
    /// Block order placing the variables with `first[i] == true` above the rest.
    pub fn block(first: Vec<bool>) -> Self {
        MonomialOrder::Block { first }
    }

    /// Block order with the leading `k` of `n` variables in the upper block.
    pub fn block_prefix(n: usize, k: usize) -> Self {
        MonomialOrder::Block { first: (0..n).map(|i| i < k).collect() }
    }

    pub fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        match self {
            MonomialOrder::Lex => a.0.cmp(&b.0),
            MonomialOrder::Grevlex => grevlex_on(&a.0, &b.0, None),
            MonomialOrder::Block { first } => {
                match grevlex_on(&a.0, &b.0, Some((first, true))) {
                    Ordering::Equal => grevlex_on(&a.0, &b.0, Some((first, false))),
                    o => o,
                }
            }
        }
    }

    pub fn is_block(&self) -> bool {
        matches!(self, MonomialOrder::Block { .. })
    }

    /// The variables in the upper block (all variables for non-block orders).
    pub fn upper_block(&self, n: usize) -> Vec<bool> {
        match self {
            MonomialOrder::Block { first } => first.clone(),
            _ => vec![true; n],
        }
    }
}
