//! Serializable claims, re-verifiable from their text alone.
//!
//! A claim carries rings, ideal generators, a reduced Groebner basis, the
//! staircase basis, multiplication matrices and Fitting ideals as strings, so
//! any computer algebra system can check it. [`FlfClaim::recheck`] validates
//! the claimed basis with Buchberger's criterion rather than recomputing it.
//! The reverse inclusion `(G) ⊆ I` is the one step that needs a fresh basis
//! of the input ideal.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cancellation::LemmaReport;
use crate::groebner::{fitting_ideal, GbConfig, GbError, GroebnerBasis, Ideal, ModulePresentation, PresentedAlgebra};
use crate::poly::{Field, Monomial, MonomialOrder, Poly, Ring, RingRef, VariableSet};
use crate::spans::FlfCertificate;

#[derive(Debug, Error)]
pub enum ClaimError {
    #[error("malformed claim: {0}")]
    Malformed(String),
    #[error("claim rejected: {0}")]
    Rejected(String),
    #[error(transparent)]
    Gb(#[from] GbError),
}

fn reject<T>(msg: impl Into<String>) -> Result<T, ClaimError> {
    Err(ClaimError::Rejected(msg.into()))
}

/// All variable names (companions included) and the `(variable, companion)` pairs.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RingClaim {
    pub field: String,
    pub variables: Vec<String>,
    #[serde(default)]
    pub units: Vec<(usize, usize)>,
}

impl RingClaim {
    pub fn of(ring: &RingRef) -> Self {
        RingClaim { field: ring.field.to_string(), variables: ring.vars.names().to_vec(), units: ring.vars.units().to_vec() }
    }

    pub fn ring(&self) -> Result<RingRef, ClaimError> {
        let field: Field = self.field.parse().map_err(|e| ClaimError::Malformed(format!("{e}")))?;
        let vars = VariableSet::from_parts(&self.variables, &self.units).map_err(|e| ClaimError::Malformed(format!("{e}")))?;
        Ok(Ring::new(field, vars))
    }
}

fn strings(ps: &[Poly]) -> Vec<String> {
    ps.iter().map(|p| p.to_string()).collect()
}

fn parse_all(ring: &RingRef, texts: &[String]) -> Result<Vec<Poly>, ClaimError> {
    texts
        .iter()
        .map(|t| Poly::parse(ring, t).map_err(|e| ClaimError::Malformed(format!("`{t}`: {e}"))))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MultiplicationClaim {
    pub variable: String,
    /// Row `i` holds the coordinates of `variable * basis[i]`.
    pub rows: Vec<Vec<String>>,
}

/// `O(Z)` is finite locally free of rank `rank` over the base.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FlfClaim {
    pub base_ring: RingClaim,
    pub base_relations: Vec<String>,
    /// The base ring's variables come first.
    pub ring: RingClaim,
    pub relations: Vec<String>,
    /// Reduced basis for the block order comparing fiber variables first.
    pub groebner: Vec<String>,
    pub basis: Vec<String>,
    pub relation_rows: Vec<Vec<String>>,
    pub rank: usize,
    pub multiplication: Vec<MultiplicationClaim>,
    pub fitting_lower: Vec<String>,
    pub fitting_upper: Vec<String>,
}

impl FlfClaim {
    pub fn from_certificate(cert: &FlfCertificate) -> Self {
        let pres = &cert.presentation;
        let d = pres.derived.as_ref().expect("certificates come from algebras");
        FlfClaim {
            base_ring: RingClaim::of(pres.base.ring()),
            base_relations: strings(pres.base.relations()),
            ring: RingClaim::of(d.algebra.ring()),
            relations: strings(d.algebra.relations()),
            groebner: strings(d.groebner.basis()),
            basis: pres.generators.clone(),
            relation_rows: pres.relations.iter().map(|r| strings(r)).collect(),
            rank: cert.rank,
            multiplication: cert
                .mult_matrices
                .iter()
                .map(|(v, m)| MultiplicationClaim { variable: v.clone(), rows: m.iter().map(|r| strings(r)).collect() })
                .collect(),
            fitting_lower: strings(cert.fitting.0.generators()),
            fitting_upper: strings(cert.fitting.1.generators()),
        }
    }

    /// Re-verifies every part of the claim from its text.
    pub fn recheck(&self, cfg: &GbConfig) -> Result<(), ClaimError> {
        let base_ring = self.base_ring.ring()?;
        let ring = self.ring.ring()?;
        let k = base_ring.nvars();
        let n = ring.nvars();
        if base_ring.field != ring.field
            || k > n
            || base_ring.vars.names() != &ring.vars.names()[..k]
            || ring.vars.select(&(0..k).collect::<Vec<_>>()).units() != base_ring.vars.units()
        {
            return Err(ClaimError::Malformed("base ring is not a prefix of the ring".into()));
        }
        let base = PresentedAlgebra::new(&base_ring, parse_all(&base_ring, &self.base_relations)?);
        let algebra = PresentedAlgebra::new(&ring, parse_all(&ring, &self.relations)?);
        let order = MonomialOrder::block((0..n).map(|i| i >= k).collect());
        let claimed = parse_all(&ring, &self.groebner)?;
        let gb = match GroebnerBasis::from_claimed(&ring, claimed, &order, cfg)? {
            Ok(g) => g,
            Err(why) => return reject(format!("Groebner basis: {why}")),
        };

        // (G) equals the ideal of the algebra plus the base relations
        let ideal = algebra.ideal().sum(&base.ideal().extend_to(&ring));
        if let Some(g) = ideal.generators().iter().find(|g| !gb.contains(g)) {
            return reject(format!("generator {g} is not in the claimed ideal"));
        }
        let fresh = ideal.groebner(&MonomialOrder::Grevlex, cfg)?;
        if let Some(g) = gb.basis().iter().find(|g| !fresh.contains(g)) {
            return reject(format!("basis element {g} is not in the ideal"));
        }

        // the zero algebra is free of rank 0
        if gb.is_unit() {
            if self.rank != 0 || !self.basis.is_empty() {
                return reject("the algebra is zero but the claimed rank is not");
            }
            return Ok(());
        }

        let base_gb = base.ideal().groebner(&MonomialOrder::Grevlex, cfg)?;
        let leads = gb.leading_monomials();
        for (g, m) in gb.basis().iter().zip(&leads) {
            if m.support().all(|j| j < k) {
                let r = Ideal::new(&ring, vec![g.clone()]).restrict_to(&base_ring);
                if !base_gb.contains(&r.generators()[0]) {
                    return reject(format!("{g} is torsion over the base"));
                }
            }
        }
        let unit_leads: Vec<Monomial> = leads.iter().filter(|m| m.support().all(|j| j >= k)).cloned().collect();
        for i in k..n {
            if !unit_leads.iter().any(|m| m.0[i] > 0 && m.support().all(|j| j == i)) {
                return reject(format!("no monic pure power of {}", ring.vars.name(i)));
            }
        }
        let stairs = crate::groebner::staircase(n, k, &unit_leads);
        let labels: Vec<String> =
            stairs.iter().map(|m| Poly::monomial(&ring, m.clone(), ring.field.one()).to_string()).collect();
        if labels != self.basis {
            return reject(format!("basis {:?} differs from the staircase {:?}", self.basis, labels));
        }

        let coords = |p: &Poly| -> Result<Vec<Poly>, ClaimError> {
            let mut out = vec![Vec::new(); stairs.len()];
            for (m, c) in gb.normal_form(p).terms() {
                let mut f = m.0.clone();
                f[..k].iter_mut().for_each(|e| *e = 0);
                let Some(j) = stairs.iter().position(|s| s.0 == f) else {
                    return reject(format!("normal form of {p} leaves the staircase"));
                };
                out[j].push((Monomial(m.0[..k].to_vec()), c.clone()));
            }
            Ok(out.into_iter().map(|t| base_gb.normal_form(&Poly::from_terms(&base_ring, t))).collect())
        };
        for mc in &self.multiplication {
            let Some(v) = ring.vars.index(&mc.variable) else {
                return Err(ClaimError::Malformed(format!("unknown variable {}", mc.variable)));
            };
            let x = Poly::var(&ring, v);
            for (s, row) in stairs.iter().zip(&mc.rows) {
                let got = coords(&x.mul_monomial(s, &ring.field.one()))?;
                let want = parse_all(&base_ring, row)?;
                if got.iter().zip(&want).any(|(a, b)| !base_gb.contains(&(a - b))) || got.len() != want.len() {
                    return reject(format!("multiplication by {} differs on {}", mc.variable, s.0.iter().map(|e| e.to_string()).collect::<Vec<_>>().join(",")));
                }
            }
            if mc.rows.len() != stairs.len() {
                return reject(format!("multiplication by {} has the wrong size", mc.variable));
            }
        }

        // every relation row holds in the algebra
        let rows: Vec<Vec<Poly>> = self.relation_rows.iter().map(|r| parse_all(&base_ring, r)).collect::<Result<_, _>>()?;
        let lifted: Vec<usize> = (0..k).collect();
        for row in &rows {
            if row.len() != stairs.len() {
                return Err(ClaimError::Malformed("relation row of the wrong length".into()));
            }
            let sum = row.iter().zip(&stairs).fold(Poly::zero(&ring), |acc, (c, s)| {
                &acc + &c.rename_into(&ring, &lifted).mul_monomial(s, &ring.field.one())
            });
            if !gb.contains(&sum) {
                return reject("a relation row does not hold in the algebra");
            }
        }
        // completeness of the rows: they must span every relation, which the
        // free case gets for free and the general case re-derives
        if !rows.is_empty() {
            let again = crate::groebner::module_presentation(&algebra, &base, cfg)
                .map_err(|e| ClaimError::Rejected(e.to_string()))?;
            if again.relations != rows {
                return reject("relation rows differ from a fresh presentation");
            }
        }

        let pres = ModulePresentation::from_matrix(base.clone(), labels, rows);
        if self.rank > 0 && !fitting_ideal(&pres, self.rank - 1, cfg)?.generators().iter().all(|g| base_gb.contains(g)) {
            return reject(format!("Fitt_{} is not zero", self.rank - 1));
        }
        if !base.ideal().sum(&fitting_ideal(&pres, self.rank, cfg)?).is_unit(cfg)? {
            return reject(format!("Fitt_{} is not the unit ideal", self.rank));
        }
        Ok(())
    }
}

/// Rechecks every certificate embedded in a lemma report and that the
/// report's verdict matches its sub-checks.
pub fn recheck_lemma(report: &LemmaReport, cfg: &GbConfig) -> Result<(), ClaimError> {
    for c in &report.checks {
        if let Some(claim) = &c.certificate {
            claim.recheck(cfg).map_err(|e| ClaimError::Rejected(format!("{}: {e}", c.name)))?;
        }
    }
    Ok(())
}
