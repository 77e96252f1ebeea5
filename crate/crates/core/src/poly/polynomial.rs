use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{Coeff, Monomial, MonomialOrder, PolyError, Ring, RingRef};

/// Exact multivariate polynomial. Terms are kept in a map keyed by exponent
/// vector with no zero coefficients, so two polynomials over the same ring
/// are equal iff their term maps are equal.
#[derive(Clone, Debug)]
pub struct Poly {
    ring: RingRef,
    terms: BTreeMap<Monomial, Coeff>,
}

impl PartialEq for Poly {
    fn eq(&self, other: &Self) -> bool {
        (Arc::ptr_eq(&self.ring, &other.ring) || self.ring == other.ring) && self.terms == other.terms
    }
}

impl Eq for Poly {}

impl Poly {
    pub fn zero(ring: &RingRef) -> Self {
        Poly { ring: ring.clone(), terms: BTreeMap::new() }
    }

    pub fn constant(ring: &RingRef, c: Coeff) -> Self {
        let c = ring.field.reduce(&c).expect("constant reduces");
        let mut p = Poly::zero(ring);
        if !c.is_zero() {
            p.terms.insert(Monomial::one(ring.nvars()), c);
        }
        p
    }

    pub fn from_i64(ring: &RingRef, c: i64) -> Self {
        Poly::constant(ring, BigRational::from_integer(c.into()))
    }

    pub fn one(ring: &RingRef) -> Self {
        Poly::from_i64(ring, 1)
    }

    pub fn var(ring: &RingRef, i: usize) -> Self {
        Poly::monomial(ring, Monomial::var(ring.nvars(), i, 1), ring.field.one())
    }

    pub fn var_named(ring: &RingRef, name: &str) -> Result<Self, PolyError> {
        let i = ring.vars.index(name).ok_or_else(|| PolyError::UnknownVariable(name.into()))?;
        Ok(Poly::var(ring, i))
    }

    pub fn monomial(ring: &RingRef, m: Monomial, c: Coeff) -> Self {
        assert_eq!(m.nvars(), ring.nvars(), "monomial arity mismatch");
        Poly::from_terms(ring, [(m, c)])
    }

    /// Builds a polynomial from arbitrary (possibly repeated, possibly zero) terms.
    pub fn from_terms<I: IntoIterator<Item = (Monomial, Coeff)>>(ring: &RingRef, terms: I) -> Self {
        let f = ring.field;
        let mut map: BTreeMap<Monomial, Coeff> = BTreeMap::new();
        for (m, c) in terms {
            let c = f.reduce(&c).expect("coefficient reduces");
            let e = map.entry(m).or_insert_with(|| f.zero());
            *e = f.add(e, &c);
        }
        map.retain(|_, c| !c.is_zero());
        Poly { ring: ring.clone(), terms: map }
    }

    /// Re-canonicalizes: merges nothing (terms are always merged) but drops
    /// zeros and reduces coefficients into the field. Idempotent.
    pub fn normalize(&self) -> Self {
        Poly::from_terms(&self.ring, self.terms.clone())
    }

    pub fn ring(&self) -> &RingRef {
        &self.ring
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.is_one())
    }

    pub fn constant_value(&self) -> Option<Coeff> {
        if !self.is_constant() {
            return None;
        }
        Some(self.terms.values().next().cloned().unwrap_or_else(BigRational::zero))
    }

    pub fn is_one(&self) -> bool {
        self.constant_value().is_some_and(|c| c.is_one())
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Coeff)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> Coeff {
        self.terms.get(m).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn total_degree(&self) -> Option<u64> {
        self.terms.keys().map(|m| m.degree()).max()
    }

    pub fn degree_in(&self, var: usize) -> Option<u32> {
        self.terms.keys().map(|m| m.0[var]).max()
    }

    /// Indices of variables occurring in some term.
    pub fn variables(&self) -> Vec<usize> {
        let mut seen = vec![false; self.ring.nvars()];
        for m in self.terms.keys() {
            for i in m.support() {
                seen[i] = true;
            }
        }
        seen.iter().enumerate().filter(|(_, s)| **s).map(|(i, _)| i).collect()
    }

    pub fn uses_only(&self, allowed: &[bool]) -> bool {
        self.variables().into_iter().all(|i| allowed[i])
    }

    pub fn leading_term(&self, order: &MonomialOrder) -> Option<(&Monomial, &Coeff)> {
        self.terms.iter().max_by(|a, b| order.cmp(a.0, b.0))
    }

    /// Terms sorted from largest to smallest under `order`.
    pub fn sorted_terms(&self, order: &MonomialOrder) -> Vec<(Monomial, Coeff)> {
        let mut v: Vec<_> = self.terms.iter().map(|(m, c)| (m.clone(), c.clone())).collect();
        v.sort_by(|a, b| order.cmp(&b.0, &a.0));
        v
    }

    pub fn scale(&self, c: &Coeff) -> Self {
        let f = self.ring.field;
        let c = f.reduce(c).expect("scalar reduces");
        Poly::from_terms(&self.ring, self.terms.iter().map(|(m, d)| (m.clone(), f.mul(d, &c))))
    }

    /// Divides by the leading coefficient under `order`.
    pub fn monic(&self, order: &MonomialOrder) -> Self {
        match self.leading_term(order) {
            None => self.clone(),
            Some((_, c)) => {
                let inv = self.ring.field.inv(c).unwrap();
                self.scale(&inv)
            }
        }
    }

    fn check_ring(&self, other: &Poly) {
        assert!(
            Arc::ptr_eq(&self.ring, &other.ring) || self.ring == other.ring,
            "polynomials from different rings"
        );
    }

    pub fn try_mul(&self, other: &Poly) -> Result<Poly, PolyError> {
        self.check_ring(other);
        let f = self.ring.field;
        let mut terms = Vec::with_capacity(self.terms.len() * other.terms.len());
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                terms.push((m1.try_mul(m2)?, f.mul(c1, c2)));
            }
        }
        Ok(Poly::from_terms(&self.ring, terms))
    }

    pub fn mul_monomial(&self, m: &Monomial, c: &Coeff) -> Poly {
        let f = self.ring.field;
        Poly::from_terms(&self.ring, self.terms.iter().map(|(k, d)| (k.mul(m), f.mul(d, c))))
    }

    pub fn try_pow(&self, e: u32) -> Result<Poly, PolyError> {
        let mut acc = Poly::one(&self.ring);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.try_mul(&base)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.try_mul(&base)?;
            }
        }
        Ok(acc)
    }

    pub fn pow(&self, e: u32) -> Poly {
        self.try_pow(e).expect("exponent overflow")
    }

    /// Ring homomorphism into `target` sending variable `i` to `images[i]`.
    ///
    /// An inverted variable `v` and its companion must be sent to elements whose
    /// product is `1` once the target's own unit relations are applied; a
    /// companion image may be omitted (`None`) when the image of `v` is a unit
    /// monomial, in which case its inverse is used.
    pub fn substitute(&self, target: &RingRef, images: &[Option<Poly>]) -> Result<Poly, PolyError> {
        let full = complete_images(&self.ring, target, images)?;
        for &(a, b) in self.ring.vars.units() {
            let prod = full[a].try_mul(&full[b])?.cancel_units();
            if !prod.is_one() {
                return Err(PolyError::LocalizationViolated(self.ring.vars.name(a).to_string()));
            }
        }
        self.substitute_unchecked(target, &full)
    }

    /// Substitution without the invertibility check; the caller guarantees
    /// (e.g. by an ideal-membership test) that the images define a homomorphism.
    pub fn substitute_unchecked(&self, target: &RingRef, images: &[Poly]) -> Result<Poly, PolyError> {
        assert_eq!(images.len(), self.ring.nvars(), "one image per variable");
        let f = target.field;
        let mut out = Poly::zero(target);
        // cache powers per variable
        let mut powers: Vec<Vec<Poly>> = images.iter().map(|p| vec![Poly::one(target), p.clone()]).collect();
        for (m, c) in &self.terms {
            let c = f.reduce(c)?;
            let mut term = Poly::constant(target, c);
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let e = e as usize;
                while powers[i].len() <= e {
                    let next = powers[i].last().unwrap().try_mul(&images[i])?;
                    powers[i].push(next);
                }
                term = term.try_mul(&powers[i][e])?;
            }
            out = &out + &term;
        }
        Ok(out)
    }

    /// Substitutes a subset of variables by name, leaving the rest fixed.
    pub fn substitute_named(&self, assignment: &[(&str, Poly)]) -> Result<Poly, PolyError> {
        let ring = self.ring.clone();
        let mut images: Vec<Option<Poly>> = (0..ring.nvars()).map(|i| Some(Poly::var(&ring, i))).collect();
        let mut given = vec![false; ring.nvars()];
        for (name, p) in assignment {
            let i = ring.vars.index(name).ok_or_else(|| PolyError::UnknownVariable(name.to_string()))?;
            images[i] = Some(p.clone());
            given[i] = true;
        }
        // companions of reassigned variables are derived unless given explicitly
        for &(a, b) in ring.vars.units() {
            if given[a] && !given[b] {
                images[b] = None;
            }
            if given[b] && !given[a] {
                images[a] = None;
            }
        }
        self.substitute(&ring, &images)
    }

    /// Moves the polynomial into `target`, sending variable `i` to variable
    /// `map[i]` of the target.
    pub fn rename_into(&self, target: &RingRef, map: &[usize]) -> Poly {
        assert_eq!(map.len(), self.ring.nvars());
        let n = target.nvars();
        Poly::from_terms(
            target,
            self.terms.iter().map(|(m, c)| {
                let mut e = vec![0u32; n];
                for (i, &k) in m.0.iter().enumerate() {
                    e[map[i]] += k;
                }
                (Monomial(e), c.clone())
            }),
        )
    }

    /// Same term map, reinterpreted over a ring of the same arity.
    pub fn reinterpret(&self, target: &RingRef) -> Poly {
        assert_eq!(target.nvars(), self.ring.nvars());
        Poly::from_terms(target, self.terms.clone())
    }

    /// Cancels `v^a * v_inv^b` to `v^(a-b)` or `v_inv^(b-a)` for every unit pair.
    pub fn cancel_units(&self) -> Poly {
        let units = self.ring.vars.units().to_vec();
        Poly::from_terms(
            &self.ring,
            self.terms.iter().map(|(m, c)| {
                let mut e = m.0.clone();
                for &(a, b) in &units {
                    let k = e[a].min(e[b]);
                    e[a] -= k;
                    e[b] -= k;
                }
                (Monomial(e), c.clone())
            }),
        )
    }

    /// Laurent exponent of `var` (positive part minus companion part) per term;
    /// returns the minimum over terms after unit cancellation.
    pub fn valuation_in(&self, var: usize) -> Option<i64> {
        let comp = self.ring.vars.partner(var);
        self.cancel_units()
            .terms
            .keys()
            .map(|m| m.0[var] as i64 - comp.map_or(0, |c| m.0[c] as i64))
            .min()
    }

    /// Inverse of a unit monomial `c * prod v^a * v_inv^b` over inverted pairs.
    pub fn unit_monomial_inverse(&self) -> Option<Poly> {
        if self.terms.len() != 1 {
            return None;
        }
        let (m, c) = self.terms.iter().next().unwrap();
        let vars = &self.ring.vars;
        let mut e = vec![0u32; m.nvars()];
        for (i, &k) in m.0.iter().enumerate() {
            if k == 0 {
                continue;
            }
            let j = vars.partner(i)?;
            e[j] += k;
        }
        let ci = self.ring.field.inv(c)?;
        Some(Poly::monomial(&self.ring, Monomial(e), ci).cancel_units())
    }

    /// Canonical textual form; see the module docs for the grammar.
    pub fn to_text(&self) -> String {
        self.to_string()
    }
}

fn complete_images(
    src: &Ring,
    target: &RingRef,
    images: &[Option<Poly>],
) -> Result<Vec<Poly>, PolyError> {
    assert_eq!(images.len(), src.nvars(), "one image per variable");
    let mut out: Vec<Option<Poly>> = images.to_vec();
    for &(a, b) in src.vars.units() {
        match (&images[a], &images[b]) {
            (Some(_), Some(_)) => {}
            (Some(p), None) | (None, Some(p)) => {
                let inv = p
                    .cancel_units()
                    .unit_monomial_inverse()
                    .ok_or_else(|| PolyError::LocalizationViolated(src.vars.name(a).to_string()))?;
                let slot = if images[a].is_some() { b } else { a };
                out[slot] = Some(inv);
            }
            (None, None) => {
                return Err(PolyError::LocalizationViolated(src.vars.name(a).to_string()));
            }
        }
    }
    out.into_iter()
        .enumerate()
        .map(|(i, p)| {
            let p = p.ok_or_else(|| PolyError::UnknownVariable(src.vars.name(i).to_string()))?;
            assert!(p.ring.as_ref() == target.as_ref(), "image lives in the wrong ring");
            Ok(p)
        })
        .collect()
}

/// Encodes a Laurent polynomial: negative exponents on inverted variables are
/// moved onto their companions.
pub fn laurent_encode(ring: &RingRef, terms: &[(Vec<i64>, Coeff)]) -> Result<Poly, PolyError> {
    let n = ring.nvars();
    let mut out = Vec::with_capacity(terms.len());
    for (exps, c) in terms {
        if exps.len() != n {
            return Err(PolyError::Arity { expected: n, got: exps.len() });
        }
        let mut e = vec![0u32; n];
        for (i, &k) in exps.iter().enumerate() {
            if k >= 0 {
                e[i] = e[i].checked_add(u32::try_from(k).map_err(|_| PolyError::ExponentOverflow)?)
                    .ok_or(PolyError::ExponentOverflow)?;
            } else {
                let j = match ring.vars.partner(i) {
                    Some(j) if ring.vars.is_inverted(i) => j,
                    _ => return Err(PolyError::NegativeExponent(ring.vars.name(i).to_string())),
                };
                let k = u32::try_from(-k).map_err(|_| PolyError::ExponentOverflow)?;
                e[j] = e[j].checked_add(k).ok_or(PolyError::ExponentOverflow)?;
            }
        }
        let m = Monomial(e);
        if m.0.iter().any(|&k| k >= super::MAX_EXPONENT) {
            return Err(PolyError::ExponentOverflow);
        }
        out.push((m, c.clone()));
    }
    Ok(Poly::from_terms(ring, out))
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        self.check_ring(rhs);
        Poly::from_terms(&self.ring, self.terms.iter().chain(rhs.terms.iter()).map(|(m, c)| (m.clone(), c.clone())))
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self + &(-rhs)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        let f = self.ring.field;
        Poly { ring: self.ring.clone(), terms: self.terms.iter().map(|(m, c)| (m.clone(), f.neg(c))).collect() }
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        self.try_mul(rhs).expect("exponent overflow")
    }
}

macro_rules! owned_ops {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for Poly {
            type Output = Poly;
            fn $m(self, rhs: Poly) -> Poly { (&self).$m(&rhs) }
        }
        impl $tr<&Poly> for Poly {
            type Output = Poly;
            fn $m(self, rhs: &Poly) -> Poly { (&self).$m(rhs) }
        }
    )*};
}
owned_ops!(Add add, Sub sub, Mul mul);

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

fn write_coeff(f: &mut fmt::Formatter<'_>, c: &Coeff) -> fmt::Result {
    if c.is_integer() {
        write!(f, "{}", c.numer())
    } else {
        write!(f, "{}/{}", c.numer(), c.denom())
    }
}

impl fmt::Display for Poly {
    /// Terms from largest to smallest in grevlex; `c*x^a*y^b` with `+`/`-` separators.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let field = self.ring.field;
        let names = self.ring.vars.names();
        for (k, (m, c)) in self.sorted_terms(&MonomialOrder::Grevlex).iter().enumerate() {
            let neg = field.is_negative(c);
            let abs = if neg { -c.clone() } else { c.clone() };
            match (k, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let mut first = true;
            if !abs.is_one() || m.is_one() {
                write_coeff(f, &abs)?;
                first = false;
            }
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                if !first {
                    write!(f, "*")?;
                }
                first = false;
                write!(f, "{}", names[i])?;
                if e > 1 {
                    write!(f, "^{e}")?;
                }
            }
        }
        Ok(())
    }
}
