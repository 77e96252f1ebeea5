use std::sync::Arc;

use super::{GbConfig, GbError, GroebnerBasis};
use crate::poly::{MonomialOrder, Poly, Ring, RingRef};

/// Finitely generated ideal. The zero ideal has no generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ideal {
    ring: RingRef,
    generators: Vec<Poly>,
}

impl Ideal {
    pub fn new(ring: &RingRef, generators: Vec<Poly>) -> Self {
        let generators = generators.into_iter().filter(|g| !g.is_zero()).collect();
        Ideal { ring: ring.clone(), generators }
    }

    pub fn zero(ring: &RingRef) -> Self {
        Ideal::new(ring, Vec::new())
    }

    pub fn unit(ring: &RingRef) -> Self {
        Ideal::new(ring, vec![Poly::one(ring)])
    }

    /// `v*v_inv - 1` for every inverted variable of the ring.
    pub fn unit_relations(ring: &RingRef) -> Vec<Poly> {
        ring.vars
            .units()
            .iter()
            .map(|&(a, b)| &(&Poly::var(ring, a) * &Poly::var(ring, b)) - &Poly::one(ring))
            .collect()
    }

    pub fn ring(&self) -> &RingRef {
        &self.ring
    }

    pub fn generators(&self) -> &[Poly] {
        &self.generators
    }

    pub fn is_zero(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn groebner(&self, order: &MonomialOrder, cfg: &GbConfig) -> Result<GroebnerBasis, GbError> {
        GroebnerBasis::compute(&self.ring, &self.generators, order, cfg)
    }

    pub fn sum(&self, other: &Ideal) -> Ideal {
        let mut g = self.generators.clone();
        g.extend(other.generators.iter().cloned());
        Ideal::new(&self.ring, g)
    }

    pub fn with(&self, extra: &[Poly]) -> Ideal {
        let mut g = self.generators.clone();
        g.extend(extra.iter().cloned());
        Ideal::new(&self.ring, g)
    }

    pub fn is_unit(&self, cfg: &GbConfig) -> Result<bool, GbError> {
        Ok(self.groebner(&MonomialOrder::Grevlex, cfg)?.is_unit())
    }

    /// Equality as ideals (comparison of reduced grevlex bases).
    pub fn same_ideal(&self, other: &Ideal, cfg: &GbConfig) -> Result<bool, GbError> {
        let a = self.groebner(&MonomialOrder::Grevlex, cfg)?;
        let b = other.groebner(&MonomialOrder::Grevlex, cfg)?;
        Ok(a.same_basis(&b))
    }

    /// `self ⊆ other`.
    pub fn contained_in(&self, other: &Ideal, cfg: &GbConfig) -> Result<bool, GbError> {
        let gb = other.groebner(&MonomialOrder::Grevlex, cfg)?;
        Ok(self.generators.iter().all(|g| gb.contains(g)))
    }

    /// Moves generators into `target` whose first variables are this ring's.
    pub fn extend_to(&self, target: &RingRef) -> Ideal {
        let map: Vec<usize> = (0..self.ring.nvars()).collect();
        Ideal::new(target, self.generators.iter().map(|g| g.rename_into(target, &map)).collect())
    }

    /// Moves generators into `target`, a ring on a prefix of our variables.
    /// Generators must not involve the dropped variables.
    pub fn restrict_to(&self, target: &RingRef) -> Ideal {
        let n = target.nvars();
        let gens = self
            .generators
            .iter()
            .map(|g| {
                assert!(g.variables().iter().all(|&i| i < n), "generator uses a dropped variable");
                Poly::from_terms(target, g.terms().map(|(m, c)| (crate::poly::Monomial(m.0[..n].to_vec()), c.clone())))
            })
            .collect();
        Ideal::new(target, gens)
    }
}

/// Intersection `I ∩ k[remaining variables]`, returned over the same ring.
pub fn eliminate(ideal: &Ideal, drop: &[usize], cfg: &GbConfig) -> Result<Ideal, GbError> {
    let n = ideal.ring.nvars();
    let mut first = vec![false; n];
    for &i in drop {
        first[i] = true;
    }
    if !first.iter().any(|b| *b) {
        let gb = ideal.groebner(&MonomialOrder::Grevlex, cfg)?;
        return Ok(Ideal::new(&ideal.ring, gb.basis().to_vec()));
    }
    let gb = ideal.groebner(&MonomialOrder::block(first.clone()), cfg)?;
    let kept = gb.basis().iter().filter(|g| g.variables().iter().all(|&i| !first[i])).cloned().collect();
    Ok(Ideal::new(&ideal.ring, kept))
}

fn with_fresh_var(ring: &RingRef, base: &str) -> RingRef {
    let name = ring.vars.fresh_name(base, &[]);
    Arc::new(Ring { field: ring.field, vars: ring.vars.with_var(&name).expect("fresh name") })
}

/// Saturation `(I : g^∞)`, computed as `(I + (1 - z g)) ∩ k[x]`.
pub fn saturate(ideal: &Ideal, g: &Poly, cfg: &GbConfig) -> Result<Ideal, GbError> {
    assert!(!g.is_zero(), "saturation by zero");
    let big = with_fresh_var(&ideal.ring, "z_sat");
    let z = Poly::var(&big, big.nvars() - 1);
    let map: Vec<usize> = (0..ideal.ring.nvars()).collect();
    let gz = g.rename_into(&big, &map);
    let ext = ideal.extend_to(&big).with(&[&Poly::one(&big) - &(&z * &gz)]);
    let elim = eliminate(&ext, &[big.nvars() - 1], cfg)?;
    let back = elim.restrict_to(&ideal.ring);
    let gb = back.groebner(&MonomialOrder::Grevlex, cfg)?;
    Ok(Ideal::new(&ideal.ring, gb.basis().to_vec()))
}

/// `I ∩ J` via `(w I + (1 - w) J) ∩ k[x]`.
pub fn intersect(a: &Ideal, b: &Ideal, cfg: &GbConfig) -> Result<Ideal, GbError> {
    assert!(a.ring.as_ref() == b.ring.as_ref());
    let big = with_fresh_var(&a.ring, "w_cap");
    let w = Poly::var(&big, big.nvars() - 1);
    let one_minus = &Poly::one(&big) - &w;
    let mut gens: Vec<Poly> = a.extend_to(&big).generators.iter().map(|g| &w * g).collect();
    gens.extend(b.extend_to(&big).generators.iter().map(|g| &one_minus * g));
    let elim = eliminate(&Ideal::new(&big, gens), &[big.nvars() - 1], cfg)?;
    let back = elim.restrict_to(&a.ring);
    let gb = back.groebner(&MonomialOrder::Grevlex, cfg)?;
    Ok(Ideal::new(&a.ring, gb.basis().to_vec()))
}

/// Quotient `k[vars] / (relations + unit relations)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PresentedAlgebra {
    ring: RingRef,
    relations: Vec<Poly>,
}

impl PresentedAlgebra {
    pub fn new(ring: &RingRef, relations: Vec<Poly>) -> Self {
        let relations = relations.into_iter().filter(|p| !p.is_zero()).collect();
        PresentedAlgebra { ring: ring.clone(), relations }
    }

    pub fn ring(&self) -> &RingRef {
        &self.ring
    }

    /// Relations as given, without the implied unit relations.
    pub fn relations(&self) -> &[Poly] {
        &self.relations
    }

    pub fn ideal(&self) -> Ideal {
        let mut g = Ideal::unit_relations(&self.ring);
        g.extend(self.relations.iter().cloned());
        Ideal::new(&self.ring, g)
    }

    pub fn with_relations(&self, extra: &[Poly]) -> PresentedAlgebra {
        let mut r = self.relations.clone();
        r.extend(extra.iter().cloned());
        PresentedAlgebra::new(&self.ring, r)
    }

    pub fn is_zero_ring(&self, cfg: &GbConfig) -> Result<bool, GbError> {
        self.ideal().is_unit(cfg)
    }
}
