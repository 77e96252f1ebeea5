//! Groebner bases and the decision procedures built on them.

mod buchberger;
mod ideal;
mod module;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::poly::{Monomial, MonomialOrder, Poly, PolyError, RingRef};

pub use ideal::{eliminate, intersect, saturate, Ideal, PresentedAlgebra};
pub(crate) use module::staircase;
pub use module::{
    fitting_ideal, fitting_verdict, module_presentation, FittingVerdict, ModulePresentation, PresentationError,
};

/// How the next critical pair is chosen. The reduced basis does not depend on it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
pub enum PairSelection {
    /// Smallest lcm first.
    #[default]
    Normal,
    Fifo,
    Lifo,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GbConfig {
    /// Maximum number of elementary reduction steps per computation.
    pub max_steps: u64,
    /// Maximum number of minors evaluated per Fitting ideal.
    pub max_minors: u64,
    pub selection: PairSelection,
}

impl Default for GbConfig {
    fn default() -> Self {
        GbConfig { max_steps: 1_000_000, max_minors: 100_000, selection: PairSelection::Normal }
    }
}

impl GbConfig {
    pub fn with_steps(max_steps: u64) -> Self {
        GbConfig { max_steps, ..Default::default() }
    }
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum GbError {
    #[error("budget exhausted after {steps} reduction steps (basis size {basis_len}, {pending_pairs} pairs pending)")]
    BudgetExhausted { steps: u64, basis_len: usize, pending_pairs: usize },
    #[error("minor budget exhausted: {needed} minors exceed the limit {limit}")]
    MinorBudget { needed: u64, limit: u64 },
    #[error(transparent)]
    Poly(#[from] PolyError),
}

impl GbError {
    /// Whether the computation ran out of its step or minor budget.
    pub fn is_budget(&self) -> bool {
        matches!(self, GbError::BudgetExhausted { .. } | GbError::MinorBudget { .. })
    }
}

/// A reduced Groebner basis: monic elements sorted by ascending leading monomial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroebnerBasis {
    ring: RingRef,
    order: MonomialOrder,
    basis: Vec<Poly>,
    sorted: Vec<Vec<(Monomial, crate::poly::Coeff)>>,
}

impl GroebnerBasis {
    pub fn compute(ring: &RingRef, gens: &[Poly], order: &MonomialOrder, cfg: &GbConfig) -> Result<Self, GbError> {
        let sorted = buchberger::reduced_basis(ring, gens, order, cfg)?;
        let basis = sorted.iter().map(|t| buchberger::from_terms(ring, t.clone())).collect();
        Ok(GroebnerBasis { ring: ring.clone(), order: order.clone(), basis, sorted })
    }

    /// Accepts a claimed reduced basis after checking it: monic, sorted,
    /// inter-reduced, and every S-pair reduces to zero. Nothing is recomputed.
    pub fn from_claimed(ring: &RingRef, basis: Vec<Poly>, order: &MonomialOrder, cfg: &GbConfig) -> Result<Result<Self, String>, GbError> {
        let sorted: Vec<_> = basis.iter().map(|p| buchberger::to_terms(p, order)).collect();
        Ok(match buchberger::reduced_defect(&sorted, order, ring.field, cfg)? {
            Some(why) => Err(why),
            None => Ok(GroebnerBasis { ring: ring.clone(), order: order.clone(), basis, sorted }),
        })
    }

    pub fn ring(&self) -> &RingRef {
        &self.ring
    }

    pub fn order(&self) -> &MonomialOrder {
        &self.order
    }

    pub fn basis(&self) -> &[Poly] {
        &self.basis
    }

    pub fn len(&self) -> usize {
        self.basis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn is_unit(&self) -> bool {
        self.basis.len() == 1 && self.basis[0].is_one()
    }

    pub fn leading_monomials(&self) -> Vec<Monomial> {
        self.sorted.iter().map(|t| t[0].0.clone()).collect()
    }

    /// Fully reduced remainder of `p`. No term of the result is divisible by a
    /// leading monomial of the basis.
    pub fn normal_form(&self, p: &Poly) -> Poly {
        self.try_normal_form(p, &GbConfig::with_steps(u64::MAX)).expect("unbounded reduction")
    }

    pub fn try_normal_form(&self, p: &Poly, cfg: &GbConfig) -> Result<Poly, GbError> {
        assert!(p.ring().as_ref() == self.ring.as_ref(), "normal form over a different ring");
        let mut red = buchberger::Reducer::new(&self.order, self.ring.field, cfg);
        let r = red.reduce(buchberger::to_terms(p, &self.order), &self.sorted, 0)?;
        Ok(buchberger::from_terms(&self.ring, r))
    }

    pub fn contains(&self, p: &Poly) -> bool {
        self.normal_form(p).is_zero()
    }

    /// Ring-independent comparison of two reduced bases: same arity, order and
    /// term maps position by position.
    pub fn same_basis(&self, other: &GroebnerBasis) -> bool {
        self.order == other.order
            && self.ring.nvars() == other.ring.nvars()
            && self.sorted == other.sorted
    }
}
