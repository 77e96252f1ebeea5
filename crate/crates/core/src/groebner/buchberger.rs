//! Buchberger's algorithm with the product and chain criteria.

use std::cmp::Ordering;
use std::collections::BTreeSet;

use num_traits::Zero;

use super::{GbConfig, GbError, PairSelection};
use crate::poly::{Coeff, Field, Monomial, MonomialOrder, Poly, RingRef};

/// Terms sorted from largest to smallest under the working order.
pub(crate) type Terms = Vec<(Monomial, Coeff)>;

pub(crate) struct Reducer<'a> {
    pub order: &'a MonomialOrder,
    pub field: Field,
    pub steps: u64,
    pub limit: u64,
}

impl<'a> Reducer<'a> {
    pub fn new(order: &'a MonomialOrder, field: Field, cfg: &GbConfig) -> Self {
        Reducer { order, field, steps: 0, limit: cfg.max_steps }
    }

    fn tick(&mut self, basis_len: usize, pending: usize) -> Result<(), GbError> {
        self.steps += 1;
        if self.steps > self.limit {
            return Err(GbError::BudgetExhausted { steps: self.steps - 1, basis_len, pending_pairs: pending });
        }
        Ok(())
    }

    /// `a - c * m * b`, both inputs sorted descending.
    pub fn sub_scaled(&self, a: &[(Monomial, Coeff)], c: &Coeff, m: &Monomial, b: &[(Monomial, Coeff)]) -> Terms {
        let f = self.field;
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        let shifted = |k: usize| b[k].0.mul(m);
        let mut bj = if b.is_empty() { None } else { Some(shifted(0)) };
        while i < a.len() || bj.is_some() {
            let ord = match (&bj, a.get(i)) {
                (None, _) => Ordering::Greater,
                (Some(_), None) => Ordering::Less,
                (Some(mb), Some((ma, _))) => self.order.cmp(ma, mb),
            };
            match ord {
                Ordering::Greater => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    let coef = f.neg(&f.mul(c, &b[j].1));
                    out.push((bj.take().unwrap(), coef));
                    j += 1;
                    bj = if j < b.len() { Some(shifted(j)) } else { None };
                }
                Ordering::Equal => {
                    let coef = f.sub(&a[i].1, &f.mul(c, &b[j].1));
                    if !coef.is_zero() {
                        out.push((a[i].0.clone(), coef));
                    }
                    i += 1;
                    j += 1;
                    bj = if j < b.len() { Some(shifted(j)) } else { None };
                }
            }
        }
        out
    }

    /// Full reduction of `p` by monic `basis`.
    pub fn reduce(&mut self, p: Terms, basis: &[Terms], pending: usize) -> Result<Terms, GbError> {
        let mut rest: Terms = Vec::new();
        let mut p = p;
        let mut head = 0usize;
        // `p[head..]` is still to be reduced; `rest` collects irreducible terms.
        while head < p.len() {
            let (lm, lc) = (&p[head].0, &p[head].1);
            let div = basis.iter().find(|g| g[0].0.divides(lm));
            match div {
                Some(g) => {
                    self.tick(basis.len(), pending)?;
                    let q = g[0].0.quotient_of(lm).unwrap();
                    let c = self.field.div(lc, &g[0].1).unwrap();
                    let next = self.sub_scaled(&p[head..], &c, &q, g);
                    p = next;
                    head = 0;
                }
                None => {
                    rest.push(p[head].clone());
                    head += 1;
                }
            }
        }
        Ok(rest)
    }

    pub fn monic(&self, p: Terms) -> Terms {
        match p.first() {
            None => p,
            Some((_, lc)) => {
                let inv = self.field.inv(lc).unwrap();
                p.into_iter().map(|(m, c)| (m, self.field.mul(&c, &inv))).collect()
            }
        }
    }

    fn s_poly(&self, f: &Terms, g: &Terms) -> Terms {
        let l = f[0].0.lcm(&g[0].0);
        let mf = f[0].0.quotient_of(&l).unwrap();
        let mg = g[0].0.quotient_of(&l).unwrap();
        let one = self.field.one();
        let fs: Terms = f.iter().map(|(m, c)| (m.mul(&mf), c.clone())).collect();
        self.sub_scaled(&fs, &one, &mg, g)
    }
}

pub(crate) fn to_terms(p: &Poly, order: &MonomialOrder) -> Terms {
    p.sorted_terms(order)
}

pub(crate) fn from_terms(ring: &RingRef, t: Terms) -> Poly {
    Poly::from_terms(ring, t)
}

/// Computes the reduced Groebner basis (monic, sorted by ascending leading
/// monomial) of the ideal generated by `gens`.
pub(crate) fn reduced_basis(
    ring: &RingRef,
    gens: &[Poly],
    order: &MonomialOrder,
    cfg: &GbConfig,
) -> Result<Vec<Terms>, GbError> {
    let mut red = Reducer::new(order, ring.field, cfg);
    let mut basis: Vec<Terms> = Vec::new();
    for g in gens {
        let t = red.monic(to_terms(g, order));
        if !t.is_empty() {
            basis.push(t);
        }
    }
    if basis.iter().any(|g| g[0].0.is_one()) {
        return Ok(vec![vec![(Monomial::one(ring.nvars()), ring.field.one())]]);
    }
    // Pairs are kept with an insertion stamp so FIFO selection is well defined.
    let mut pending: BTreeSet<(usize, usize)> = BTreeSet::new();
    let mut queue: Vec<(usize, usize, u64)> = Vec::new();
    let mut stamp = 0u64;
    for j in 0..basis.len() {
        for i in 0..j {
            pending.insert((i, j));
            queue.push((i, j, stamp));
            stamp += 1;
        }
    }
    while !queue.is_empty() {
        let pick = select_pair(&queue, &basis, order, cfg.selection);
        let (i, j, _) = queue.swap_remove(pick);
        pending.remove(&(i, j));
        let (li, lj) = (&basis[i][0].0, &basis[j][0].0);
        if li.coprime(lj) {
            continue;
        }
        let l = li.lcm(lj);
        let chain = (0..basis.len()).any(|k| {
            k != i
                && k != j
                && basis[k][0].0.divides(&l)
                && !pending.contains(&(i.min(k), i.max(k)))
                && !pending.contains(&(j.min(k), j.max(k)))
        });
        if chain {
            continue;
        }
        let s = red.s_poly(&basis[i], &basis[j]);
        let h = red.reduce(s, &basis, queue.len())?;
        if h.is_empty() {
            continue;
        }
        let h = red.monic(h);
        if h[0].0.is_one() {
            return Ok(vec![h]);
        }
        let k = basis.len();
        basis.push(h);
        for i in 0..k {
            pending.insert((i, k));
            queue.push((i, k, stamp));
            stamp += 1;
        }
    }
    interreduce(&mut red, basis)
}

fn select_pair(queue: &[(usize, usize, u64)], basis: &[Terms], order: &MonomialOrder, sel: PairSelection) -> usize {
    match sel {
        PairSelection::Fifo => {
            (0..queue.len()).min_by_key(|&k| queue[k].2).unwrap()
        }
        PairSelection::Lifo => {
            (0..queue.len()).max_by_key(|&k| queue[k].2).unwrap()
        }
        PairSelection::Normal => {
            let lcm = |k: usize| basis[queue[k].0][0].0.lcm(&basis[queue[k].1][0].0);
            (0..queue.len())
                .min_by(|&a, &b| {
                    order.cmp(&lcm(a), &lcm(b)).then_with(|| queue[a].2.cmp(&queue[b].2))
                })
                .unwrap()
        }
    }
}

fn interreduce(red: &mut Reducer<'_>, basis: Vec<Terms>) -> Result<Vec<Terms>, GbError> {
    // drop elements whose leading monomial is divisible by another's
    let mut keep: Vec<Terms> = Vec::new();
    for (a, g) in basis.iter().enumerate() {
        let redundant = basis.iter().enumerate().any(|(b, h)| {
            b != a && h[0].0.divides(&g[0].0) && (h[0].0 != g[0].0 || b < a)
        });
        if !redundant {
            keep.push(g.clone());
        }
    }
    let mut out: Vec<Terms> = Vec::with_capacity(keep.len());
    for k in 0..keep.len() {
        let others: Vec<Terms> = keep
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != k)
            .map(|(_, g)| g.clone())
            .collect();
        let head = keep[k][0].clone();
        let tail = red.reduce(keep[k][1..].to_vec(), &others, 0)?;
        let mut g = vec![head];
        g.extend(tail);
        out.push(red.monic(g));
    }
    out.sort_by(|a, b| red.order.cmp(&a[0].0, &b[0].0));
    Ok(out)
}

/// Why `basis` is not a reduced Groebner basis, if it is not.
pub(crate) fn reduced_defect(basis: &[Terms], order: &MonomialOrder, field: Field, cfg: &GbConfig) -> Result<Option<String>, GbError> {
    let one = field.one();
    for (i, g) in basis.iter().enumerate() {
        match g.first() {
            None => return Ok(Some(format!("element {i} is zero"))),
            Some((_, c)) if *c != one => return Ok(Some(format!("element {i} is not monic"))),
            _ => {}
        }
        if i > 0 && order.cmp(&basis[i - 1][0].0, &g[0].0) != Ordering::Less {
            return Ok(Some(format!("element {i} is out of order")));
        }
        for (j, h) in basis.iter().enumerate() {
            if i != j && g.iter().any(|(m, _)| h[0].0.divides(m)) {
                return Ok(Some(format!("element {i} is reducible by element {j}")));
            }
        }
    }
    let mut red = Reducer::new(order, field, cfg);
    for i in 0..basis.len() {
        for j in (i + 1)..basis.len() {
            if basis[i][0].0.coprime(&basis[j][0].0) {
                continue;
            }
            let s = red.s_poly(&basis[i], &basis[j]);
            if !red.reduce(s, basis, 0)?.is_empty() {
                return Ok(Some(format!("S-pair ({i}, {j}) does not reduce to zero")));
            }
        }
    }
    Ok(None)
}
