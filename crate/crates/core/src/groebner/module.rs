//! Presentations of finite algebras as modules over a base ring, and Fitting ideals.
//!
//! The algebra's ring is `k[base vars, fiber vars]` with the base variables as
//! a prefix. We work with the block order placing fiber variables first. The
//! algebra is finite over the base exactly when, for every fiber variable, some
//! basis element has a leading monomial that is a pure power of it (a monic
//! integral equation would otherwise fail to reduce to zero).

use thiserror::Error;

use super::buchberger::{self, Reducer};
use super::{eliminate, GbConfig, GbError, GroebnerBasis, Ideal, PresentedAlgebra};
use crate::poly::{Monomial, MonomialOrder, Poly, Ring, RingRef};

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum PresentationError {
    #[error("base ring is not a prefix of the algebra's ring")]
    BaseMismatch,
    #[error("not finite over base: no monic pure power of fiber variable `{variable}` in the Groebner basis")]
    NotFinite { variable: String },
    /// Nonzero base elements kill the algebra: it is torsion over the base.
    #[error("algebra is torsion over the base (annihilator {annihilator:?})")]
    Torsion { annihilator: Vec<String>, witness: Vec<Poly> },
    #[error("inconclusive: {0}")]
    Inconclusive(String),
    #[error(transparent)]
    Gb(#[from] GbError),
}

/// Cokernel presentation `A^rows -> A^generators -> M -> 0` over a base algebra `A`.
#[derive(Clone, Debug)]
pub struct ModulePresentation {
    pub base: PresentedAlgebra,
    /// Printable generator labels (staircase monomials for derived presentations).
    pub generators: Vec<String>,
    /// Relation rows; entry `j` of a row is the coefficient of generator `j`.
    pub relations: Vec<Vec<Poly>>,
    pub derived: Option<Derived>,
}

/// Data kept when the presentation comes from an algebra.
#[derive(Clone, Debug)]
pub struct Derived {
    pub algebra: PresentedAlgebra,
    pub order: MonomialOrder,
    pub groebner: GroebnerBasis,
    pub monomials: Vec<Monomial>,
}

impl ModulePresentation {
    pub fn from_matrix(base: PresentedAlgebra, generators: Vec<String>, relations: Vec<Vec<Poly>>) -> Self {
        for r in &relations {
            assert_eq!(r.len(), generators.len(), "relation row length");
        }
        ModulePresentation { base, generators, relations, derived: None }
    }

    pub fn num_generators(&self) -> usize {
        self.generators.len()
    }

    pub fn is_free(&self) -> bool {
        self.relations.iter().all(|r| r.iter().all(|p| p.is_zero()))
    }

    /// Coordinates of an algebra element on the generators (derived presentations only).
    pub fn coordinates(&self, p: &Poly) -> Vec<Poly> {
        let d = self.derived.as_ref().expect("derived presentation");
        split_coordinates(&d.groebner.normal_form(p), &d.monomials, &self.base)
    }
}

fn fiber_part(m: &Monomial, k: usize) -> Monomial {
    let mut e = m.0.clone();
    for x in e.iter_mut().take(k) {
        *x = 0;
    }
    Monomial(e)
}

fn base_part(m: &Monomial, k: usize) -> Monomial {
    Monomial(m.0[..k].to_vec())
}

/// Splits a polynomial in fiber normal form into base coefficients of the
/// given fiber monomials.
fn split_coordinates(p: &Poly, monomials: &[Monomial], base: &PresentedAlgebra) -> Vec<Poly> {
    let k = base.ring().nvars();
    let mut out: Vec<Vec<(Monomial, crate::poly::Coeff)>> = vec![Vec::new(); monomials.len()];
    for (m, c) in p.terms() {
        let f = fiber_part(m, k);
        let j = monomials
            .iter()
            .position(|s| *s == f)
            .unwrap_or_else(|| panic!("term outside the staircase"));
        out[j].push((base_part(m, k), c.clone()));
    }
    out.into_iter().map(|t| Poly::from_terms(base.ring(), t)).collect()
}

fn is_prefix(base: &RingRef, ring: &RingRef) -> bool {
    let k = base.nvars();
    base.field == ring.field
        && k <= ring.nvars()
        && base.vars.names() == &ring.vars.names()[..k]
        && ring.vars.select(&(0..k).collect::<Vec<_>>()).units() == base.vars.units()
}

/// Staircase of fiber monomials not divisible by any of `lead`.
pub(crate) fn staircase(n: usize, k: usize, lead: &[Monomial]) -> Vec<Monomial> {
    let mut out = Vec::new();
    let mut frontier = vec![Monomial::one(n)];
    let mut seen = std::collections::BTreeSet::new();
    while let Some(m) = frontier.pop() {
        if !seen.insert(m.clone()) || lead.iter().any(|l| l.divides(&m)) {
            continue;
        }
        for i in k..n {
            let mut e = m.0.clone();
            e[i] += 1;
            frontier.push(Monomial(e));
        }
        out.push(m);
    }
    out
}

pub fn module_presentation(
    algebra: &PresentedAlgebra,
    base: &PresentedAlgebra,
    cfg: &GbConfig,
) -> Result<ModulePresentation, PresentationError> {
    let ring = algebra.ring();
    if !is_prefix(base.ring(), ring) {
        return Err(PresentationError::BaseMismatch);
    }
    let (n, k) = (ring.nvars(), base.ring().nvars());
    let order = MonomialOrder::block((0..n).map(|i| i >= k).collect());
    // base relations always hold in the algebra
    let ideal = algebra.ideal().sum(&base.ideal().extend_to(ring));
    let gb = ideal.groebner(&order, cfg)?;
    let derived = |monomials: Vec<Monomial>, gb: GroebnerBasis| Derived {
        algebra: algebra.clone(),
        order: order.clone(),
        groebner: gb,
        monomials,
    };
    if gb.is_unit() {
        return Ok(ModulePresentation {
            base: base.clone(),
            generators: Vec::new(),
            relations: Vec::new(),
            derived: Some(derived(Vec::new(), gb)),
        });
    }

    let base_gb = base.ideal().groebner(&MonomialOrder::Grevlex, cfg)?;
    let to_base = |p: &Poly| Ideal::new(ring, vec![p.clone()]).restrict_to(base.ring()).generators().first().cloned();
    let torsion: Vec<Poly> = gb
        .basis()
        .iter()
        .filter(|g| g.variables().iter().all(|&i| i < k))
        .filter_map(to_base)
        .filter(|g| !base_gb.contains(g))
        .collect();
    if !torsion.is_empty() {
        return Err(PresentationError::Torsion {
            annihilator: torsion.iter().map(|p| p.to_string()).collect(),
            witness: torsion,
        });
    }

    let leads = gb.leading_monomials();
    for i in k..n {
        let pure = leads.iter().any(|m| m.0[i] > 0 && m.support().all(|j| j == i));
        if !pure {
            return Err(PresentationError::NotFinite { variable: ring.vars.name(i).to_string() });
        }
    }

    let fiber_elems: Vec<(&Poly, &Monomial)> = gb
        .basis()
        .iter()
        .zip(&leads)
        .filter(|(_, m)| m.support().any(|j| j >= k))
        .collect();
    let unit: Vec<&Poly> = fiber_elems.iter().filter(|(_, m)| m.support().all(|j| j >= k)).map(|(g, _)| *g).collect();
    let non_unit: Vec<&Poly> = fiber_elems.iter().filter(|(_, m)| m.support().any(|j| j < k)).map(|(g, _)| *g).collect();
    let unit_leads: Vec<Monomial> = unit.iter().map(|g| g.leading_term(&order).unwrap().0.clone()).collect();
    let stairs = staircase(n, k, &unit_leads);
    let labels: Vec<String> = stairs.iter().map(|m| Poly::monomial(ring, m.clone(), ring.field.one()).to_string()).collect();

    if non_unit.is_empty() {
        return Ok(ModulePresentation {
            base: base.clone(),
            generators: labels,
            relations: Vec::new(),
            derived: Some(derived(stairs, gb)),
        });
    }

    // Fast path: when the monic elements together with the base relations
    // form a Groebner basis, relation rows are normal forms of s*g.
    // S-pairs with base elements are coprime and skipped.
    let mut red = Reducer::new(&order, ring.field, cfg);
    let unit_terms: Vec<_> = unit.iter().map(|g| buchberger::to_terms(g, &order)).collect();
    let mut reducers = unit_terms.clone();
    reducers.extend(
        gb.basis().iter().zip(&leads).filter(|(_, m)| m.support().all(|j| j < k)).map(|(g, _)| buchberger::to_terms(g, &order)),
    );
    let mut closed = true;
    'pairs: for a in 0..unit_terms.len() {
        for b in (a + 1)..unit_terms.len() {
            let (la, lb) = (&unit_terms[a][0].0, &unit_terms[b][0].0);
            if la.coprime(lb) {
                continue;
            }
            let l = la.lcm(lb);
            let ma = la.quotient_of(&l).unwrap();
            let mb = lb.quotient_of(&l).unwrap();
            let sa: Vec<_> = unit_terms[a].iter().map(|(m, c)| (m.mul(&ma), c.clone())).collect();
            let s = red.sub_scaled(&sa, &ring.field.one(), &mb, &unit_terms[b]);
            if !red.reduce(s, &reducers, 0)?.is_empty() {
                closed = false;
                break 'pairs;
            }
        }
    }
    let relations = if closed {
        let mut relations = Vec::new();
        for g in &non_unit {
            for s in &stairs {
                let prod = g.mul_monomial(s, &ring.field.one());
                let r = red.reduce(buchberger::to_terms(&prod, &order), &reducers, 0)?;
                let row = split_coordinates(&buchberger::from_terms(ring, r), &stairs, base);
                let row: Vec<Poly> = row.iter().map(|p| base_gb.normal_form(p)).collect();
                if row.iter().any(|p| !p.is_zero()) {
                    relations.push(row);
                }
            }
        }
        relations
    } else {
        kernel_relations(&ideal, &stairs, base, &base_gb, cfg)?
    };
    Ok(ModulePresentation { base: base.clone(), generators: labels, relations, derived: Some(derived(stairs, gb)) })
}

/// Kernel of `A^S -> A[y]/J`, `e_s -> s`, by elimination.
///
/// Adjoins a grading variable `T` and `e_s` with `e_s - s*T`; after
/// eliminating the fiber variables and `T`, the generators linear in the
/// `e_s` are exactly the relations.
fn kernel_relations(
    ideal: &Ideal,
    stairs: &[Monomial],
    base: &PresentedAlgebra,
    base_gb: &GroebnerBasis,
    cfg: &GbConfig,
) -> Result<Vec<Vec<Poly>>, PresentationError> {
    let ring = ideal.ring();
    let (n, k, m) = (ring.nvars(), base.ring().nvars(), stairs.len());
    let mut names: Vec<String> = ring.vars.names().to_vec();
    let fresh = |stem: &str, names: &[String]| {
        (0..).map(|i| format!("{stem}{i}")).find(|c| !names.contains(c)).unwrap()
    };
    let t = fresh("T", &names);
    names.push(t);
    for _ in 0..m {
        let e = fresh("e", &names);
        names.push(e);
    }
    let big = Ring::with_names(ring.field, &names, &[]).map_err(|e| PresentationError::Inconclusive(e.to_string()))?;
    let embed: Vec<usize> = (0..n).collect();
    let mut gens: Vec<Poly> = ideal.generators().iter().map(|g| g.rename_into(&big, &embed)).collect();
    for (j, s) in stairs.iter().enumerate() {
        let mut e = s.0.clone();
        e.resize(n + 1 + m, 0);
        e[n] = 1;
        let st = Poly::monomial(&big, Monomial(e), big.field.one());
        gens.push(&Poly::var(&big, n + 1 + j) - &st);
    }
    let drop: Vec<usize> = (k..=n).collect();
    let kernel = eliminate(&Ideal::new(&big, gens), &drop, cfg)?;
    let mut relations = Vec::new();
    for g in kernel.generators() {
        if !g.terms().all(|(mono, _)| mono.0[n + 1..].iter().sum::<u32>() == 1) {
            continue;
        }
        let row: Vec<Poly> = (0..m)
            .map(|j| {
                let p = Poly::from_terms(
                    base.ring(),
                    g.terms()
                        .filter(|(mono, _)| mono.0[n + 1 + j] == 1)
                        .map(|(mono, c)| (Monomial(mono.0[..k].to_vec()), c.clone())),
                );
                base_gb.normal_form(&p)
            })
            .collect();
        if row.iter().any(|p| !p.is_zero()) {
            relations.push(row);
        }
    }
    Ok(relations)
}

fn det(m: &[Vec<Poly>], ring: &RingRef) -> Poly {
    match m.len() {
        0 => Poly::one(ring),
        1 => m[0][0].clone(),
        2 => &(&m[0][0] * &m[1][1]) - &(&m[0][1] * &m[1][0]),
        n => {
            let mut acc = Poly::zero(ring);
            for j in 0..n {
                if m[0][j].is_zero() {
                    continue;
                }
                let minor: Vec<Vec<Poly>> = m[1..]
                    .iter()
                    .map(|row| row.iter().enumerate().filter(|(c, _)| *c != j).map(|(_, p)| p.clone()).collect())
                    .collect();
                let term = &m[0][j] * &det(&minor, ring);
                acc = if j % 2 == 0 { &acc + &term } else { &acc - &term };
            }
            acc
        }
    }
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    go(0, n, k, &mut cur, &mut out);
    out
}

fn binom(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    (0..k).fold(1u64, |acc, i| acc.saturating_mul(n - i) / (i + 1))
}

/// `Fitt_r(M)`: the ideal of `(g - r)`-minors of the relation matrix, reduced
/// modulo the base relations. `Fitt_r = (1)` for `r >= g`.
pub fn fitting_ideal(m: &ModulePresentation, r: usize, cfg: &GbConfig) -> Result<Ideal, GbError> {
    let ring = m.base.ring();
    let g = m.num_generators();
    if r >= g {
        return Ok(Ideal::unit(ring));
    }
    let size = g - r;
    let rows = m.relations.len();
    if size > rows {
        return Ok(Ideal::zero(ring));
    }
    let needed = binom(rows as u64, size as u64).saturating_mul(binom(g as u64, size as u64));
    if needed > cfg.max_minors {
        return Err(GbError::MinorBudget { needed, limit: cfg.max_minors });
    }
    let base_gb = m.base.ideal().groebner(&MonomialOrder::Grevlex, cfg)?;
    let mut gens = Vec::new();
    for rs in combinations(rows, size) {
        for cs in combinations(g, size) {
            let sub: Vec<Vec<Poly>> = rs.iter().map(|&i| cs.iter().map(|&j| m.relations[i][j].clone()).collect()).collect();
            let d = base_gb.normal_form(&det(&sub, ring));
            if !d.is_zero() {
                gens.push(d);
            }
        }
    }
    Ok(Ideal::new(ring, gens))
}

#[derive(Clone, Debug)]
pub enum FittingVerdict {
    /// `Fitt_{rank-1} = 0` and `Fitt_rank = (1)` over the base.
    LocallyFree { rank: usize, lower: Ideal, upper: Ideal },
    /// `Fitt_rank = (1)` is the first unit Fitting ideal but `Fitt_{rank-1}`
    /// is nonzero (and proper): the module is not locally free.
    NotLocallyFree { rank: usize, obstruction: Ideal },
}

/// Decides local freeness over a connected base from the Fitting ideals.
pub fn fitting_verdict(m: &ModulePresentation, cfg: &GbConfig) -> Result<FittingVerdict, GbError> {
    let base_ideal = m.base.ideal();
    let g = m.num_generators();
    let mut r = 0;
    let upper = loop {
        let f = fitting_ideal(m, r, cfg)?;
        if r >= g || base_ideal.with(f.generators()).is_unit(cfg)? {
            break f;
        }
        r += 1;
    };
    if r == 0 {
        return Ok(FittingVerdict::LocallyFree { rank: 0, lower: Ideal::zero(m.base.ring()), upper });
    }
    let lower = fitting_ideal(m, r - 1, cfg)?;
    if lower.is_zero() {
        Ok(FittingVerdict::LocallyFree { rank: r, lower, upper })
    } else {
        Ok(FittingVerdict::NotLocallyFree { rank: r, obstruction: lower })
    }
}
