//! Finite-locally-free correspondences between presented affine schemes.
//!
//! A correspondence `X <- Z -> Y` is stored as a presented algebra `O(Z)`
//! whose ring starts with the variables of `X` (the left leg is the inclusion
//! of that prefix) together with one image in `O(Z)` per variable of `Y`.

use std::sync::Arc;

use thiserror::Error;

use crate::groebner::{
    fitting_ideal, fitting_verdict, module_presentation, FittingVerdict, GbConfig, GbError, Ideal,
    ModulePresentation, PresentationError, PresentedAlgebra,
};
use crate::poly::{Field, Monomial, MonomialOrder, Poly, PolyError, Ring, RingRef, VariableSet, INV_SUFFIX};

#[derive(Debug, Clone, Error)]
pub enum SpanError {
    #[error("interface mismatch: {0}")]
    Interface(String),
    #[error("structure map is not a ring homomorphism: {0}")]
    NotHomomorphism(String),
    #[error("coefficient fields differ")]
    FieldMismatch,
    #[error("incomparable presentations: {0}")]
    Incomparable(String),
    #[error("correspondence has no finite-locally-free certificate")]
    Uncertified,
    #[error("the coordinate algebra is zero")]
    EmptyScheme,
    #[error(transparent)]
    Gb(#[from] GbError),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// `Spec` of `ring / (relations + unit relations)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineScheme {
    ring: RingRef,
    relations: Vec<Poly>,
}

impl AffineScheme {
    /// Rejects presentations of the zero algebra; use [`AffineScheme::empty`] for that.
    pub fn new(ring: &RingRef, relations: Vec<Poly>, cfg: &GbConfig) -> Result<Self, SpanError> {
        let x = AffineScheme::new_unchecked(ring, relations);
        if x.algebra().is_zero_ring(cfg)? {
            return Err(SpanError::EmptyScheme);
        }
        Ok(x)
    }

    pub fn new_unchecked(ring: &RingRef, relations: Vec<Poly>) -> Self {
        let relations = relations.into_iter().filter(|p| !p.is_zero()).collect();
        AffineScheme { ring: ring.clone(), relations }
    }

    pub fn empty(field: Field) -> Self {
        let ring = Ring::new(field, VariableSet::empty());
        AffineScheme { relations: vec![Poly::one(&ring)], ring }
    }

    pub fn point(field: Field) -> Self {
        AffineScheme::new_unchecked(&Ring::new(field, VariableSet::empty()), Vec::new())
    }

    pub fn affine_line(field: Field, name: &str) -> Result<Self, SpanError> {
        Ok(AffineScheme::new_unchecked(&Ring::with_names(field, &[name], &[])?, Vec::new()))
    }

    pub fn gm(field: Field, name: &str) -> Result<Self, SpanError> {
        Ok(AffineScheme::new_unchecked(&Ring::with_names(field, &[name], &[name])?, Vec::new()))
    }

    /// `self × other`; colliding names of `other` are renamed.
    pub fn product(&self, other: &AffineScheme) -> Result<Self, SpanError> {
        if self.ring.field != other.ring.field {
            return Err(SpanError::FieldMismatch);
        }
        let (vars, pos) = append_vars(&self.ring.vars, &other.ring.vars, 0, true)?;
        let ring = Ring::new(self.ring.field, vars);
        let left: Vec<usize> = (0..self.ring.nvars()).collect();
        let mut rels: Vec<Poly> = self.relations.iter().map(|p| p.rename_into(&ring, &left)).collect();
        rels.extend(other.relations.iter().map(|p| p.rename_into(&ring, &pos)));
        Ok(AffineScheme::new_unchecked(&ring, rels))
    }

    pub fn ring(&self) -> &RingRef {
        &self.ring
    }

    pub fn field(&self) -> Field {
        self.ring.field
    }

    pub fn relations(&self) -> &[Poly] {
        &self.relations
    }

    pub fn algebra(&self) -> PresentedAlgebra {
        PresentedAlgebra::new(&self.ring, self.relations.clone())
    }

    pub fn ideal(&self) -> Ideal {
        self.algebra().ideal()
    }

    pub fn is_empty(&self, cfg: &GbConfig) -> Result<bool, SpanError> {
        Ok(self.algebra().is_zero_ring(cfg)?)
    }

    /// Same ring (names included) and same ideal.
    pub fn same_as(&self, other: &AffineScheme, cfg: &GbConfig) -> Result<bool, SpanError> {
        if self.ring != other.ring {
            return Ok(false);
        }
        let b = other.ideal().reinterpret_in(&self.ring);
        Ok(self.ideal().same_ideal(&b, cfg)?)
    }
}

impl Ideal {
    fn reinterpret_in(&self, ring: &RingRef) -> Ideal {
        Ideal::new(ring, self.generators().iter().map(|g| g.reinterpret(ring)).collect())
    }
}

/// Appends the variables `other[skip..]` to `base`, renaming collisions (a
/// companion follows its variable's new name). Returns the new set and the
/// position of every variable of `other` (entries below `skip` are unused and
/// set to `usize::MAX`). With `keep_units = false` the appended variables lose
/// their unit marking.
pub(crate) fn append_vars(
    base: &VariableSet,
    other: &VariableSet,
    skip: usize,
    keep_units: bool,
) -> Result<(VariableSet, Vec<usize>), PolyError> {
    let idx: Vec<usize> = (skip..other.len()).collect();
    let tail = other.select(&idx);
    let mut names: Vec<Option<String>> = vec![None; tail.len()];
    let mut taken: Vec<String> = Vec::new();
    for i in 0..tail.len() {
        if tail.is_companion(i) {
            continue;
        }
        let n = base.fresh_name(tail.name(i), &taken);
        taken.push(n.clone());
        taken.push(format!("{n}{INV_SUFFIX}"));
        names[i] = Some(n);
    }
    for i in 0..tail.len() {
        if tail.is_companion(i) {
            let p = tail.partner(i).unwrap();
            names[i] = Some(format!("{}{INV_SUFFIX}", names[p].as_ref().unwrap()));
        }
    }
    let renamed = tail.renamed(names.into_iter().map(Option::unwrap).collect())?;
    let renamed = if keep_units { renamed } else { renamed.without_units() };
    let off = base.len();
    let out = base.concat(&renamed)?;
    let mut pos = vec![usize::MAX; other.len()];
    for (k, i) in idx.iter().enumerate() {
        pos[*i] = off + k;
    }
    Ok((out, pos))
}

/// Result of trying to certify that a finite algebra is locally free over a base.
#[derive(Clone, Debug)]
pub enum CertifyOutcome {
    Certified(FlfCertificate),
    /// No monic pure power of this fiber variable: the algebra is not finite.
    NotFinite { variable: String },
    /// Nonzero base elements annihilating the algebra (the base is a domain).
    NotFlat { witness: Vec<Poly> },
    /// Finite but some Fitting ideal is a nonzero proper ideal.
    NotLocallyFree { rank: usize, obstruction: Ideal },
    Inconclusive(String),
}

impl CertifyOutcome {
    pub fn certificate(&self) -> Option<&FlfCertificate> {
        match self {
            CertifyOutcome::Certified(c) => Some(c),
            _ => None,
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            CertifyOutcome::Certified(_) => "certified",
            CertifyOutcome::NotFinite { .. } => "not-finite",
            CertifyOutcome::NotFlat { .. } => "not-flat",
            CertifyOutcome::NotLocallyFree { .. } => "not-locally-free",
            CertifyOutcome::Inconclusive(_) => "inconclusive",
        }
    }

    pub fn summary(&self) -> String {
        match self {
            CertifyOutcome::Certified(c) => format!("certified finite locally free of rank {}", c.rank),
            CertifyOutcome::NotFinite { variable } => format!("not finite in direction `{variable}`"),
            CertifyOutcome::NotFlat { witness } => {
                let w: Vec<String> = witness.iter().map(|p| p.to_string()).collect();
                format!("not flat: torsion annihilated by ({})", w.join(", "))
            }
            CertifyOutcome::NotLocallyFree { rank, obstruction } => {
                let w: Vec<String> = obstruction.generators().iter().map(|p| p.to_string()).collect();
                format!("not locally free: Fitt_{} = ({}) with Fitt_{rank} = (1)", rank - 1, w.join(", "))
            }
            CertifyOutcome::Inconclusive(r) => format!("inconclusive: {r}"),
        }
    }
}

/// Proof that `O(Z)` is finite locally free over the base.
#[derive(Clone, Debug)]
pub struct FlfCertificate {
    pub presentation: ModulePresentation,
    pub rank: usize,
    /// For each fiber variable `v`, row `i` holds the coordinates of `v * e_i`.
    pub mult_matrices: Vec<(String, Vec<Vec<Poly>>)>,
    /// `Fitt_{rank-1}` (must be zero) and `Fitt_rank` (must be the unit ideal).
    pub fitting: (Ideal, Ideal),
}

impl FlfCertificate {
    pub fn basis(&self) -> &[Monomial] {
        &self.presentation.derived.as_ref().expect("derived").monomials
    }

    pub fn basis_labels(&self) -> &[String] {
        &self.presentation.generators
    }

    pub fn is_free(&self) -> bool {
        self.presentation.is_free()
    }

    pub fn groebner(&self) -> &crate::groebner::GroebnerBasis {
        &self.presentation.derived.as_ref().expect("derived").groebner
    }

    /// Coordinates (over the base) of `f * e_i` for every basis element.
    pub fn multiplication_matrix(&self, f: &Poly) -> Vec<Vec<Poly>> {
        let d = self.presentation.derived.as_ref().expect("derived");
        let ring = d.groebner.ring();
        d.monomials
            .iter()
            .map(|m| self.presentation.coordinates(&f.mul_monomial(m, &ring.field.one())))
            .collect()
    }

    /// Recomputes the basis, the multiplication matrices and the Fitting
    /// verdict from the algebra and compares them with the stored data.
    pub fn recheck(&self, middle: &PresentedAlgebra, base: &PresentedAlgebra, cfg: &GbConfig) -> Result<(), String> {
        let fresh = match certify_algebra(middle, base, cfg) {
            Ok(CertifyOutcome::Certified(c)) => c,
            Ok(other) => return Err(other.summary()),
            Err(e) => return Err(e.to_string()),
        };
        if !fresh.groebner().same_basis(self.groebner()) {
            return Err("Groebner basis differs".into());
        }
        if fresh.basis() != self.basis() {
            return Err("basis differs".into());
        }
        if fresh.rank != self.rank {
            return Err(format!("rank {} recomputed as {}", self.rank, fresh.rank));
        }
        if fresh.mult_matrices != self.mult_matrices {
            return Err("multiplication matrices differ".into());
        }
        // the stored Fitting ideals must still have the claimed shape
        let base_ideal = base.ideal();
        if !self.fitting.0.generators().iter().all(|g| base_ideal.groebner(&MonomialOrder::Grevlex, cfg).map(|b| b.contains(g)).unwrap_or(false)) {
            return Err("lower Fitting ideal is not zero".into());
        }
        match base_ideal.with(self.fitting.1.generators()).is_unit(cfg) {
            Ok(true) => Ok(()),
            _ => Err("upper Fitting ideal is not the unit ideal".into()),
        }
    }
}

/// Certifies `middle` (whose ring has the base ring as a prefix) over `base`.
pub fn certify_algebra(
    middle: &PresentedAlgebra,
    base: &PresentedAlgebra,
    cfg: &GbConfig,
) -> Result<CertifyOutcome, SpanError> {
    let pres = match module_presentation(middle, base, cfg) {
        Ok(p) => p,
        Err(PresentationError::BaseMismatch) => {
            return Err(SpanError::Interface("base ring is not a prefix of the middle ring".into()))
        }
        Err(PresentationError::NotFinite { variable }) => return Ok(CertifyOutcome::NotFinite { variable }),
        Err(PresentationError::Torsion { witness, .. }) => {
            // torsion only proves non-flatness over a domain; polynomial rings
            // and their localizations are the bases we recognize as such
            if base.relations().is_empty() {
                return Ok(CertifyOutcome::NotFlat { witness });
            }
            return Ok(CertifyOutcome::Inconclusive("torsion over a base not known to be a domain".into()));
        }
        Err(PresentationError::Inconclusive(r)) => return Ok(CertifyOutcome::Inconclusive(r)),
        // running out of budget decides nothing; callers report it as such
        Err(PresentationError::Gb(e)) if e.is_budget() => return Err(e.into()),
        Err(PresentationError::Gb(e)) => return Ok(CertifyOutcome::Inconclusive(e.to_string())),
    };
    let (rank, fitting) = if pres.is_free() {
        let g = pres.num_generators();
        let lower = if g == 0 { Ideal::zero(base.ring()) } else { fitting_ideal(&pres, g - 1, cfg)? };
        (g, (lower, fitting_ideal(&pres, g, cfg)?))
    } else {
        match fitting_verdict(&pres, cfg) {
            Ok(FittingVerdict::LocallyFree { rank, lower, upper }) => (rank, (lower, upper)),
            Ok(FittingVerdict::NotLocallyFree { rank, obstruction }) => {
                return Ok(CertifyOutcome::NotLocallyFree { rank, obstruction })
            }
            Err(e) if e.is_budget() => return Err(e.into()),
            Err(e) => return Ok(CertifyOutcome::Inconclusive(e.to_string())),
        }
    };
    let ring = middle.ring();
    let k = base.ring().nvars();
    let mut cert = FlfCertificate { presentation: pres, rank, mult_matrices: Vec::new(), fitting };
    cert.mult_matrices = (k..ring.nvars())
        .map(|v| (ring.vars.name(v).to_string(), cert.multiplication_matrix(&Poly::var(ring, v))))
        .collect();
    Ok(CertifyOutcome::Certified(cert))
}

/// Certifies the left leg of a correspondence.
pub fn certify_flf(alpha: &Correspondence, cfg: &GbConfig) -> Result<CertifyOutcome, SpanError> {
    certify_algebra(&alpha.middle, &alpha.source.algebra(), cfg)
}

/// A span `X <- Z -> Y` with its certification status.
#[derive(Clone, Debug)]
pub struct Correspondence {
    source: AffineScheme,
    target: AffineScheme,
    /// Includes the relations of the source.
    middle: PresentedAlgebra,
    target_map: Vec<Poly>,
    certification: Option<CertifyOutcome>,
}

fn is_prefix_ring(base: &RingRef, ring: &RingRef) -> bool {
    let k = base.nvars();
    base.field == ring.field
        && k <= ring.nvars()
        && base.vars == ring.vars.select(&(0..k).collect::<Vec<_>>())
}

impl Correspondence {
    /// Checks that both structure maps are ring homomorphisms.
    pub fn new(
        source: AffineScheme,
        target: AffineScheme,
        middle_ring: &RingRef,
        relations: Vec<Poly>,
        target_map: Vec<Poly>,
        cfg: &GbConfig,
    ) -> Result<Self, SpanError> {
        if source.field() != target.field() || source.field() != middle_ring.field {
            return Err(SpanError::FieldMismatch);
        }
        if !is_prefix_ring(source.ring(), middle_ring) {
            return Err(SpanError::Interface("the middle ring must start with the source variables".into()));
        }
        if target_map.len() != target.ring().nvars() {
            return Err(SpanError::Interface(format!(
                "target map has {} images for {} target variables",
                target_map.len(),
                target.ring().nvars()
            )));
        }
        if target_map.iter().any(|p| p.ring().as_ref() != middle_ring.as_ref()) {
            return Err(SpanError::Interface("target images must live in the middle ring".into()));
        }
        let c = Correspondence::new_unchecked(source, target, middle_ring, relations, target_map);
        c.check_target_map(cfg)?;
        Ok(c)
    }

    pub(crate) fn new_unchecked(
        source: AffineScheme,
        target: AffineScheme,
        middle_ring: &RingRef,
        relations: Vec<Poly>,
        target_map: Vec<Poly>,
    ) -> Self {
        let prefix: Vec<usize> = (0..source.ring().nvars()).collect();
        let mut rels: Vec<Poly> = source.relations().iter().map(|p| p.rename_into(middle_ring, &prefix)).collect();
        for r in relations {
            if !r.is_zero() && !rels.contains(&r) {
                rels.push(r);
            }
        }
        Correspondence {
            source,
            target,
            middle: PresentedAlgebra::new(middle_ring, rels),
            target_map,
            certification: None,
        }
    }

    fn check_target_map(&self, cfg: &GbConfig) -> Result<(), SpanError> {
        let gb = self.middle.ideal().groebner(&MonomialOrder::Grevlex, cfg)?;
        for r in self.target.ideal().generators() {
            let img = r.substitute_unchecked(self.middle.ring(), &self.target_map)?;
            if !gb.contains(&img) {
                return Err(SpanError::NotHomomorphism(format!("target relation {r} does not map to zero")));
            }
        }
        Ok(())
    }

    pub fn identity(x: &AffineScheme) -> Self {
        Correspondence::graph(x, x, x.ring().nvars(), |i| Poly::var(x.ring(), i))
    }

    fn graph(x: &AffineScheme, y: &AffineScheme, n: usize, img: impl Fn(usize) -> Poly) -> Self {
        Correspondence::new_unchecked(x.clone(), y.clone(), x.ring(), Vec::new(), (0..n).map(img).collect())
    }

    /// Graph of the morphism `X -> Y` given by the images of `Y`'s variables.
    pub fn from_morphism(x: &AffineScheme, y: &AffineScheme, images: Vec<Poly>, cfg: &GbConfig) -> Result<Self, SpanError> {
        Correspondence::new(x.clone(), y.clone(), x.ring(), Vec::new(), images, cfg)
    }

    /// The empty correspondence `X <- ∅ -> Y`.
    pub fn empty(x: &AffineScheme, y: &AffineScheme) -> Self {
        let zeros = (0..y.ring().nvars()).map(|_| Poly::zero(x.ring())).collect();
        Correspondence::new_unchecked(x.clone(), y.clone(), x.ring(), vec![Poly::one(x.ring())], zeros)
    }

    pub fn source(&self) -> &AffineScheme {
        &self.source
    }

    pub fn target(&self) -> &AffineScheme {
        &self.target
    }

    pub fn middle(&self) -> &PresentedAlgebra {
        &self.middle
    }

    pub fn middle_ring(&self) -> &RingRef {
        self.middle.ring()
    }

    pub fn target_map(&self) -> &[Poly] {
        &self.target_map
    }

    /// Number of variables of the middle ring beyond the source's.
    pub fn fiber_len(&self) -> usize {
        self.middle.ring().nvars() - self.source.ring().nvars()
    }

    pub fn certification(&self) -> Option<&CertifyOutcome> {
        self.certification.as_ref()
    }

    pub fn certificate(&self) -> Option<&FlfCertificate> {
        self.certification.as_ref().and_then(|c| c.certificate())
    }

    pub fn is_certified(&self) -> bool {
        self.certificate().is_some()
    }

    /// Runs the certification and records its outcome.
    pub fn certified(mut self, cfg: &GbConfig) -> Result<Self, SpanError> {
        self.certification = Some(certify_flf(&self, cfg)?);
        Ok(self)
    }

    pub fn is_empty(&self, cfg: &GbConfig) -> Result<bool, SpanError> {
        Ok(self.middle.is_zero_ring(cfg)?)
    }

    /// Rewrites the middle through a change of variables: `images[i]` is the
    /// new expression (over `ring`) of middle variable `i`. The source prefix
    /// must be kept as is. Certification is dropped.
    pub fn reparametrize(&self, ring: &RingRef, images: &[Poly], cfg: &GbConfig) -> Result<Self, SpanError> {
        let rels = self
            .middle
            .relations()
            .iter()
            .map(|p| p.substitute_unchecked(ring, images))
            .collect::<Result<Vec<_>, _>>()?;
        let tm = self
            .target_map
            .iter()
            .map(|p| p.substitute_unchecked(ring, images))
            .collect::<Result<Vec<_>, _>>()?;
        Correspondence::new(self.source.clone(), self.target.clone(), ring, rels, tm, cfg)
    }

    /// Same span with extra relations on the middle (a closed subscheme of `Z`).
    pub fn restrict(&self, extra: &[Poly]) -> Self {
        let mut c = self.clone();
        c.middle = self.middle.with_relations(extra);
        c.certification = None;
        c
    }
}

/// Certifies the result if both inputs carry certificates; failures are recorded.
fn certify_if(c: Correspondence, inputs_certified: bool, cfg: &GbConfig) -> Result<Correspondence, SpanError> {
    if inputs_certified {
        c.certified(cfg)
    } else {
        Ok(c)
    }
}

/// `β ∘ α`: the fiber product `Z_α ×_Y Z_β`.
pub fn compose(alpha: &Correspondence, beta: &Correspondence, cfg: &GbConfig) -> Result<Correspondence, SpanError> {
    if !alpha.target.same_as(&beta.source, cfg)? {
        return Err(SpanError::Interface("target of the first span differs from the source of the second".into()));
    }
    let ny = beta.source.ring().nvars();
    let (vars, pos) = append_vars(&alpha.middle_ring().vars, &beta.middle_ring().vars, ny, true)?;
    let ring = Ring::new(alpha.middle_ring().field, vars);
    let na = alpha.middle_ring().nvars();
    let a_map: Vec<usize> = (0..na).collect();
    let images: Vec<Poly> = (0..beta.middle_ring().nvars())
        .map(|i| if i < ny { alpha.target_map[i].rename_into(&ring, &a_map) } else { Poly::var(&ring, pos[i]) })
        .collect();
    let mut rels: Vec<Poly> = alpha.middle.relations().iter().map(|p| p.rename_into(&ring, &a_map)).collect();
    for r in beta.middle.relations() {
        rels.push(r.substitute_unchecked(&ring, &images)?);
    }
    // unit relations of β's fiber variables come with the ring; those of Y
    // hold because α's target map is a homomorphism
    let tm = beta.target_map.iter().map(|p| p.substitute_unchecked(&ring, &images)).collect::<Result<Vec<_>, _>>()?;
    let c = Correspondence::new_unchecked(alpha.source.clone(), beta.target.clone(), &ring, rels, tm);
    certify_if(c, alpha.is_certified() && beta.is_certified(), cfg)
}

/// `α + β`: the disjoint union of the middles, cut out by an idempotent `e`
/// (`e = 1` on `Z_α`, `e = 0` on `Z_β`).
pub fn add(alpha: &Correspondence, beta: &Correspondence, cfg: &GbConfig) -> Result<Correspondence, SpanError> {
    if !alpha.source.same_as(&beta.source, cfg)? || !alpha.target.same_as(&beta.target, cfg)? {
        return Err(SpanError::Interface("sources and targets must match".into()));
    }
    if beta.is_empty(cfg)? {
        return Ok(alpha.clone());
    }
    if alpha.is_empty(cfg)? {
        return Ok(beta.clone());
    }
    let nx = alpha.source.ring().nvars();
    let src = &alpha.source.ring().vars;
    let e_name = src.fresh_name("e", &[]);
    let with_e = src.with_var(&e_name)?;
    let (v1, pa) = append_vars(&with_e, &alpha.middle_ring().vars, nx, false)?;
    let (v2, pb) = append_vars(&v1, &beta.middle_ring().vars, nx, false)?;
    let ring = Ring::new(src_field(alpha), v2);
    let e = Poly::var(&ring, nx);
    let one = Poly::one(&ring);
    let not_e = &one - &e;
    let map = |pos: &[usize]| -> Vec<usize> { (0..pos.len()).map(|i| if i < nx { i } else { pos[i] }).collect() };
    let (ma, mb) = (map(&pa), map(&pb));
    let mut rels = vec![&(&e * &e) - &e];
    for (side, m, pos, keep, kill) in [(alpha, &ma, &pa, &e, &not_e), (beta, &mb, &pb, &not_e, &e)] {
        let mut local: Vec<Poly> = side.middle.relations().to_vec();
        for &(a, b) in side.middle_ring().vars.units() {
            if a >= nx {
                let r = side.middle_ring();
                local.push(&(&Poly::var(r, a) * &Poly::var(r, b)) - &Poly::one(r));
            }
        }
        rels.extend(local.iter().map(|p| keep * &p.rename_into(&ring, m)));
        for &p in &pos[nx..] {
            rels.push(kill * &Poly::var(&ring, p));
        }
    }
    let tm = (0..alpha.target_map.len())
        .map(|i| &(&e * &alpha.target_map[i].rename_into(&ring, &ma)) + &(&not_e * &beta.target_map[i].rename_into(&ring, &mb)))
        .collect();
    let c = Correspondence::new_unchecked(alpha.source.clone(), alpha.target.clone(), &ring, rels, tm);
    certify_if(c, alpha.is_certified() && beta.is_certified(), cfg)
}

fn src_field(c: &Correspondence) -> Field {
    c.source.field()
}

/// `α ⊗ β : X × X' -> Y × Y'`.
pub fn external_tensor(alpha: &Correspondence, beta: &Correspondence, cfg: &GbConfig) -> Result<Correspondence, SpanError> {
    if alpha.source.field() != beta.source.field() {
        return Err(SpanError::FieldMismatch);
    }
    let source = alpha.source.product(&beta.source)?;
    let target = alpha.target.product(&beta.target)?;
    let (nx, nx2) = (alpha.source.ring().nvars(), beta.source.ring().nvars());
    // [X, X', α fiber, β fiber]
    let (v1, pa) = append_vars(&source.ring().vars, &alpha.middle_ring().vars, nx, true)?;
    let (v2, pb) = append_vars(&v1, &beta.middle_ring().vars, nx2, true)?;
    let ring = Ring::new(source.field(), v2);
    let ma: Vec<usize> = (0..alpha.middle_ring().nvars()).map(|i| if i < nx { i } else { pa[i] }).collect();
    let mb: Vec<usize> = (0..beta.middle_ring().nvars()).map(|i| if i < nx2 { nx + i } else { pb[i] }).collect();
    let mut rels: Vec<Poly> = alpha.middle.relations().iter().map(|p| p.rename_into(&ring, &ma)).collect();
    rels.extend(beta.middle.relations().iter().map(|p| p.rename_into(&ring, &mb)));
    let mut tm: Vec<Poly> = alpha.target_map.iter().map(|p| p.rename_into(&ring, &ma)).collect();
    tm.extend(beta.target_map.iter().map(|p| p.rename_into(&ring, &mb)));
    let c = Correspondence::new_unchecked(source, target, &ring, rels, tm);
    certify_if(c, alpha.is_certified() && beta.is_certified(), cfg)
}

/// Presentation-level equality: variables are matched by position; the middle
/// ideals must have the same reduced Groebner basis and the target maps must
/// agree modulo it. Isomorphic but differently presented middles compare unequal.
pub fn equals(alpha: &Correspondence, beta: &Correspondence, cfg: &GbConfig) -> Result<bool, SpanError> {
    let (ra, rb) = (alpha.middle_ring(), beta.middle_ring());
    if ra.nvars() != rb.nvars() || ra.vars.units() != rb.vars.units() || ra.field != rb.field {
        return Err(SpanError::Incomparable(format!(
            "middle rings have {} and {} variables (or different localizations)",
            ra.nvars(),
            rb.nvars()
        )));
    }
    if alpha.target_map.len() != beta.target_map.len() || alpha.source.ring().nvars() != beta.source.ring().nvars() {
        return Err(SpanError::Incomparable("different source or target arity".into()));
    }
    let ia = alpha.middle.ideal();
    let ib = Ideal::new(ra, beta.middle.ideal().generators().iter().map(|g| g.reinterpret(ra)).collect());
    let ga = ia.groebner(&MonomialOrder::Grevlex, cfg)?;
    let gb = ib.groebner(&MonomialOrder::Grevlex, cfg)?;
    if !ga.same_basis(&gb) {
        return Ok(false);
    }
    Ok(alpha
        .target_map
        .iter()
        .zip(&beta.target_map)
        .all(|(a, b)| ga.contains(&(a - &b.reinterpret(ra)))))
}

/// Rank of the certified left leg.
pub fn degree(alpha: &Correspondence) -> Result<usize, SpanError> {
    alpha.certificate().map(|c| c.rank).ok_or(SpanError::Uncertified)
}

/// Formal difference `plus - minus`; nothing is cancelled.
#[derive(Clone, Debug)]
pub struct VirtualCorrespondence {
    pub plus: Correspondence,
    pub minus: Correspondence,
}

impl VirtualCorrespondence {
    pub fn new(plus: Correspondence, minus: Correspondence, cfg: &GbConfig) -> Result<Self, SpanError> {
        if !plus.source.same_as(&minus.source, cfg)? || !plus.target.same_as(&minus.target, cfg)? {
            return Err(SpanError::Interface("both legs must share source and target".into()));
        }
        Ok(VirtualCorrespondence { plus, minus })
    }

    /// `deg(plus) - deg(minus)` when both are certified.
    pub fn virtual_degree(&self) -> Result<i64, SpanError> {
        Ok(degree(&self.plus)? as i64 - degree(&self.minus)? as i64)
    }
}

/// Ring with the given names over `field`, as a shared reference.
pub fn ring_of(field: Field, names: &[&str], inverted: &[&str]) -> Result<RingRef, SpanError> {
    Ok(Arc::new(Ring { field, vars: VariableSet::new(names, inverted)? }))
}
