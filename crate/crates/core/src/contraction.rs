//! The contraction `s(alpha)` of a span `Y -> X` for `X = (A^1 - 0)^n`,
//! built from `W = {w != 0} ⊂ X × A^1_u` and a map `f: W -> X` that is the
//! identity at one end of the interval and the base point at the other.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::groebner::{eliminate, GbConfig, GbError, Ideal, PresentedAlgebra};
use crate::poly::{Field, MonomialOrder, Poly, PolyError, Ring, RingRef, VariableSet};
use crate::spans::{append_vars, equals, AffineScheme, Correspondence, SpanError};

#[derive(Debug, Clone, Error)]
pub enum ContractionError {
    #[error("n must be at least 1")]
    BadDimension,
    #[error("span target does not have the shape of (A^1 - 0)^{0}")]
    TargetShape(usize),
    #[error("contraction datum violates `{0}`")]
    InvalidDatum(String),
    /// Would contradict the construction; reported, never suppressed.
    #[error("red flag: V'' meets u = {0}")]
    MeetsEndpoint(u8),
    #[error(transparent)]
    Span(#[from] SpanError),
    #[error(transparent)]
    Gb(#[from] GbError),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// `X = (A^1 - 0)^n` with base point `(1, ..., 1)`, `w = prod (u t_i + 1 - u)`
/// and `f_i = u t_i + 1 - u`, all over the ring `[t_1^±, ..., t_n^±, u]`.
#[derive(Clone, Debug)]
pub struct ContractionDatum {
    pub n: usize,
    pub x: AffineScheme,
    pub base_point: Vec<i64>,
    pub ring: RingRef,
    pub w: Poly,
    pub f: Vec<Poly>,
}

impl ContractionDatum {
    fn t(&self, i: usize) -> Poly {
        Poly::var(&self.ring, 2 * i)
    }

    fn at_u(&self, p: &Poly, c: i64) -> Result<Poly, PolyError> {
        p.substitute_named(&[("u", Poly::from_i64(&self.ring, c))])
    }

    fn at_base_point(&self, p: &Poly) -> Result<Poly, PolyError> {
        let r = &self.ring;
        let mut images: Vec<Poly> = (0..r.nvars()).map(|i| Poly::var(r, i)).collect();
        for (i, &c) in self.base_point.iter().enumerate() {
            images[2 * i] = Poly::from_i64(r, c);
            images[2 * i + 1] = Poly::constant(r, r.field.inv(&r.field.from_i64(c)).expect("unit base point"));
        }
        p.substitute_unchecked(r, &images)
    }

    /// Checks every hypothesis symbolically; returns the named checks.
    pub fn check_invariants(&self) -> Result<Vec<(String, bool)>, ContractionError> {
        let r = &self.ring;
        let one = Poly::one(r);
        let mut out = Vec::new();
        out.push(("w(-, 0) = 1".to_string(), self.at_u(&self.w, 0)?.is_one()));
        let w0 = self.at_base_point(&self.w)?;
        out.push(("w(x0, u) is a unit".to_string(), w0.is_constant() && !w0.is_zero()));
        let prod = self.f.iter().fold(one.clone(), |acc, fi| &acc * fi);
        out.push(("w = prod f_i".to_string(), prod == self.w));
        for (i, fi) in self.f.iter().enumerate() {
            out.push((format!("f_{}(-, 1) = t_{}", i + 1, i + 1), self.at_u(fi, 1)? == self.t(i)));
            let c = Poly::from_i64(r, self.base_point[i]);
            out.push((format!("f_{}(-, 0) = x0", i + 1), self.at_u(fi, 0)? == c));
            out.push((format!("f_{}(x0, u) = x0", i + 1), self.at_base_point(fi)? == c));
        }
        Ok(out)
    }
}

pub fn standard_contraction_data(n: usize, field: Field) -> Result<ContractionDatum, ContractionError> {
    if n < 1 {
        return Err(ContractionError::BadDimension);
    }
    let names: Vec<String> = if n == 1 { vec!["t".into()] } else { (1..=n).map(|i| format!("t{i}")).collect() };
    let x = AffineScheme::new_unchecked(&Ring::new(field, VariableSet::new(&names, &names)?), Vec::new());
    let ring = Ring::new(field, x.ring().vars.with_var("u")?);
    let u = Poly::var(&ring, 2 * n);
    let one = Poly::one(&ring);
    let f: Vec<Poly> = (0..n).map(|i| &(&(&u * &Poly::var(&ring, 2 * i)) + &one) - &u).collect();
    let w = f.iter().fold(one, |acc, fi| &acc * fi);
    let d = ContractionDatum { n, x, base_point: vec![1; n], ring, w, f };
    for (name, ok) in d.check_invariants()? {
        if !ok {
            return Err(ContractionError::InvalidDatum(name));
        }
    }
    Ok(d)
}

/// One standard open `D(g) ⊂ Y × A^1` of the cover of `U` and the span over it.
#[derive(Clone, Debug)]
pub struct CoverPiece {
    /// Generator of `V''` inverted on this piece (over `[Y, u]`).
    pub generator: Poly,
    /// `D(g) <- W' ∩ p^-1 D(g) -> X` with target map `f ∘ (q × A^1)`.
    pub span: Correspondence,
}

#[derive(Clone, Debug)]
pub struct ContractedCorrespondence {
    /// `V' = (w ∘ q) + relations of Z` over `[Y, u, Z fiber]`.
    pub v_prime: Ideal,
    /// Generators of `V'' = p(V')` over `[Y, u]`, reduced modulo `I_Y`.
    pub v_double_prime: Vec<Poly>,
    pub avoids_zero: bool,
    pub avoids_one: bool,
    pub pieces: Vec<CoverPiece>,
}

fn product_of(ring: &RingRef, ps: &[Poly]) -> Poly {
    ps.iter().fold(Poly::one(ring), |acc, p| &acc * p)
}

/// `s(alpha)` for `alpha: Y -> X`.
pub fn contract(
    alpha: &Correspondence,
    datum: &ContractionDatum,
    cfg: &GbConfig,
) -> Result<ContractedCorrespondence, ContractionError> {
    let n = datum.n;
    let tv = &alpha.target().ring().vars;
    if tv.len() != 2 * n || (0..n).any(|i| tv.partner(2 * i) != Some(2 * i + 1) || !tv.is_inverted(2 * i)) {
        return Err(ContractionError::TargetShape(n));
    }
    let y = alpha.source();
    let ny = y.ring().nvars();
    let field = y.field();
    let yu = y.product(&AffineScheme::affine_line(field, "u")?)?;
    let u_idx = ny;
    // [Y, u, Z fiber]
    let (vars, pos) = append_vars(&yu.ring().vars, &alpha.middle_ring().vars, ny, true)?;
    let big = Ring::new(field, vars);
    let zmap: Vec<usize> = (0..alpha.middle_ring().nvars()).map(|i| if i < ny { i } else { pos[i] }).collect();
    let q: Vec<Poly> = alpha.target_map().iter().map(|p| p.rename_into(&big, &zmap)).collect();
    let u = Poly::var(&big, u_idx);
    let mut images = q.clone();
    images.push(u.clone());
    let fq: Vec<Poly> = datum.f.iter().map(|fi| fi.substitute_unchecked(&big, &images)).collect::<Result<_, _>>()?;
    let wq = product_of(&big, &fq);
    let zrels: Vec<Poly> = alpha.middle().relations().iter().map(|p| p.rename_into(&big, &zmap)).collect();
    let v_prime = Ideal::new(&big, zrels.clone()).with(&Ideal::unit_relations(&big)).with(std::slice::from_ref(&wq));

    // V'' = p(V'), closed because p is finite
    let fiber: Vec<usize> = (ny + 1..big.nvars()).collect();
    let vpp = eliminate(&v_prime, &fiber, cfg)?.restrict_to(yu.ring());
    let iy = Ideal::new(yu.ring(), y.ideal().extend_to(yu.ring()).generators().to_vec());
    let iy_gb = iy.groebner(&MonomialOrder::Grevlex, cfg)?;
    let mut gens: Vec<Poly> = Vec::new();
    for g in vpp.generators() {
        let r = iy_gb.normal_form(g);
        if !r.is_zero() && !gens.contains(&r) {
            gens.push(r);
        }
    }
    // drop generators implied by the others, fewest pieces in the cover
    let mut i = 0;
    while i < gens.len() {
        let others: Vec<Poly> = gens.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, p)| p.clone()).collect();
        if Ideal::new(yu.ring(), vec![gens[i].clone()]).contained_in(&iy.with(&others), cfg)? {
            gens.remove(i);
        } else {
            i += 1;
        }
    }
    let uy = Poly::var(yu.ring(), u_idx);
    let avoids_zero = iy.with(&gens).with(std::slice::from_ref(&uy)).is_unit(cfg)?;
    let avoids_one = iy.with(&gens).with(&[&uy - &Poly::one(yu.ring())]).is_unit(cfg)?;
    if !avoids_zero {
        return Err(ContractionError::MeetsEndpoint(0));
    }
    if !avoids_one {
        return Err(ContractionError::MeetsEndpoint(1));
    }

    // U is covered by D(g), g in V''; V'' = 0 means U = Y × A^1
    let generators = if gens.is_empty() { vec![Poly::one(yu.ring())] } else { gens.clone() };
    let mut pieces = Vec::new();
    for g in generators {
        pieces.push(CoverPiece { span: piece_span(alpha, datum, &yu, &g, cfg)?, generator: g });
    }
    Ok(ContractedCorrespondence { v_prime, v_double_prime: gens, avoids_zero, avoids_one, pieces })
}

/// Source `D(g) = [Y, u, v]/(v g - 1)`, middle `[Y, u, v, Z fiber, z]` with
/// `z (w ∘ q) = 1`.
fn piece_span(
    alpha: &Correspondence,
    datum: &ContractionDatum,
    yu: &AffineScheme,
    g: &Poly,
    cfg: &GbConfig,
) -> Result<Correspondence, ContractionError> {
    let field = yu.field();
    let ny = alpha.source().ring().nvars();
    let v_name = yu.ring().vars.fresh_name("v", &[]);
    let src_ring = Ring::new(field, yu.ring().vars.with_var(&v_name)?);
    let lift: Vec<usize> = (0..yu.ring().nvars()).collect();
    let v = Poly::var(&src_ring, yu.ring().nvars());
    let mut src_rels: Vec<Poly> = yu.relations().iter().map(|p| p.rename_into(&src_ring, &lift)).collect();
    src_rels.push(&(&v * &g.rename_into(&src_ring, &lift)) - &Poly::one(&src_ring));
    let source = AffineScheme::new_unchecked(&src_ring, src_rels);

    let (vars, pos) = append_vars(&src_ring.vars, &alpha.middle_ring().vars, ny, true)?;
    let z_name = vars.fresh_name("z", &[]);
    let ring = Ring::new(field, vars.with_var(&z_name)?);
    let z = Poly::var(&ring, ring.nvars() - 1);
    let zmap: Vec<usize> = (0..alpha.middle_ring().nvars()).map(|i| if i < ny { i } else { pos[i] }).collect();
    let q: Vec<Poly> = alpha.target_map().iter().map(|p| p.rename_into(&ring, &zmap)).collect();
    let mut images = q;
    images.push(Poly::var(&ring, ny));
    let fq: Vec<Poly> = datum.f.iter().map(|fi| fi.substitute_unchecked(&ring, &images)).collect::<Result<_, _>>()?;
    let wq = product_of(&ring, &fq);
    let mut rels: Vec<Poly> = alpha.middle().relations().iter().map(|p| p.rename_into(&ring, &zmap)).collect();
    rels.push(&(&z * &wq) - &Poly::one(&ring));
    let mut tm = Vec::new();
    for i in 0..datum.n {
        let others: Vec<Poly> = fq.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, p)| p.clone()).collect();
        tm.push(fq[i].clone());
        tm.push(&z * &product_of(&ring, &others));
    }
    let target = AffineScheme::new_unchecked(alpha.target().ring(), alpha.target().relations().to_vec());
    let c = Correspondence::new(source, target, &ring, rels, tm, cfg)?;
    Ok(c.certified(cfg)?)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EndpointVerdict {
    pub u: u8,
    /// The slice equals `alpha` restricted to `D(g(-, u))`.
    pub is_alpha: bool,
    /// The target map lands in the ideal of the base point.
    pub is_constant: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EndpointReport {
    pub pieces: Vec<[EndpointVerdict; 2]>,
    /// Endpoint at which every piece reproduces `alpha`.
    pub identity_at: Option<u8>,
    /// Endpoint at which every piece is constant at the base point.
    pub constant_at: Option<u8>,
    pub dichotomy: bool,
}

/// Slice of a piece at `u = c`: source `[Y, v]`, middle `[Y, v, fiber, z]`.
fn slice_piece(piece: &Correspondence, ny: usize, c: i64, cfg: &GbConfig) -> Result<Correspondence, ContractionError> {
    let drop_u = |ring: &RingRef| -> (RingRef, Vec<Poly>) {
        let keep: Vec<usize> = (0..ring.nvars()).filter(|&i| i != ny).collect();
        let r = Ring::new(ring.field, ring.vars.select(&keep));
        let images = (0..ring.nvars())
            .map(|i| match i.cmp(&ny) {
                std::cmp::Ordering::Less => Poly::var(&r, i),
                std::cmp::Ordering::Equal => Poly::from_i64(&r, c),
                std::cmp::Ordering::Greater => Poly::var(&r, i - 1),
            })
            .collect();
        (r, images)
    };
    let (sr, simg) = drop_u(piece.source().ring());
    let source = AffineScheme::new_unchecked(
        &sr,
        piece.source().relations().iter().map(|p| p.substitute_unchecked(&sr, &simg)).collect::<Result<_, _>>()?,
    );
    let (mr, mimg) = drop_u(piece.middle_ring());
    let rels = piece.middle().relations().iter().map(|p| p.substitute_unchecked(&mr, &mimg)).collect::<Result<_, _>>()?;
    let tm = piece.target_map().iter().map(|p| p.substitute_unchecked(&mr, &mimg)).collect::<Result<_, _>>()?;
    Ok(Correspondence::new(source, piece.target().clone(), &mr, rels, tm, cfg)?)
}

/// `alpha` restricted to `D(g(-, c))`: middle `[Y, v, fiber]`.
fn localized_alpha(alpha: &Correspondence, slice_source: &AffineScheme, cfg: &GbConfig) -> Result<Correspondence, ContractionError> {
    let ny = alpha.source().ring().nvars();
    let (vars, pos) = append_vars(&slice_source.ring().vars, &alpha.middle_ring().vars, ny, true)?;
    let ring = Ring::new(slice_source.field(), vars);
    let map: Vec<usize> = (0..alpha.middle_ring().nvars()).map(|i| if i < ny { i } else { pos[i] }).collect();
    let rels = alpha.middle().relations().iter().map(|p| p.rename_into(&ring, &map)).collect();
    let tm = alpha.target_map().iter().map(|p| p.rename_into(&ring, &map)).collect();
    Ok(Correspondence::new(slice_source.clone(), alpha.target().clone(), &ring, rels, tm, cfg)?)
}

/// Removes the last middle variable `z` when it is determined by the others
/// (`z - h ∈ I` with `h` free of `z`).
fn eliminate_last(c: &Correspondence, cfg: &GbConfig) -> Result<Option<Correspondence>, ContractionError> {
    let ring = c.middle_ring();
    let zi = ring.nvars() - 1;
    let mut first = vec![false; ring.nvars()];
    first[zi] = true;
    let gb = c.middle().ideal().groebner(&MonomialOrder::block(first), cfg)?;
    let keep: Vec<usize> = (0..zi).collect();
    let small = Ring::new(ring.field, ring.vars.select(&keep));
    let down = |p: &Poly| -> Option<Poly> {
        let nf = gb.normal_form(p);
        (nf.degree_in(zi).unwrap_or(0) == 0).then(|| Ideal::new(ring, vec![nf.clone()]).restrict_to(&small).generators().first().cloned().unwrap_or_else(|| Poly::zero(&small)))
    };
    if down(&Poly::var(ring, zi)).is_none() {
        return Ok(None);
    }
    let zfree: Vec<Poly> = gb.basis().iter().filter(|g| g.degree_in(zi) == Some(0)).cloned().collect();
    let rels = Ideal::new(ring, zfree).restrict_to(&small).generators().to_vec();
    let mut tm = Vec::new();
    for p in c.target_map() {
        match down(p) {
            Some(q) => tm.push(q),
            None => return Ok(None),
        }
    }
    Ok(Some(Correspondence::new(c.source().clone(), c.target().clone(), &small, rels, tm, cfg)?))
}

fn is_constant_at_base(c: &Correspondence, datum: &ContractionDatum, cfg: &GbConfig) -> Result<bool, ContractionError> {
    let gb = c.middle().ideal().groebner(&MonomialOrder::Grevlex, cfg)?;
    let r = c.middle_ring();
    Ok(c.target_map().iter().enumerate().all(|(k, p)| {
        let b = r.field.from_i64(datum.base_point[k / 2]);
        let b = if k % 2 == 0 { b } else { r.field.inv(&b).unwrap() };
        gb.contains(&(p - &Poly::constant(r, b)))
    }))
}

/// Restricts every piece to `u = 0` and `u = 1` and classifies the ends.
pub fn verify_contraction_endpoints(
    alpha: &Correspondence,
    datum: &ContractionDatum,
    contracted: &ContractedCorrespondence,
    cfg: &GbConfig,
) -> Result<EndpointReport, ContractionError> {
    let ny = alpha.source().ring().nvars();
    let mut pieces = Vec::new();
    for piece in &contracted.pieces {
        let mut both = Vec::new();
        for c in [0u8, 1] {
            let s = slice_piece(&piece.span, ny, c as i64, cfg)?;
            let is_alpha = match eliminate_last(&s, cfg)? {
                Some(reduced) => equals(&reduced, &localized_alpha(alpha, s.source(), cfg)?, cfg).unwrap_or(false),
                None => false,
            };
            let is_constant = is_constant_at_base(&s, datum, cfg)?;
            both.push(EndpointVerdict { u: c, is_alpha, is_constant });
        }
        pieces.push([both[0].clone(), both[1].clone()]);
    }
    let all = |pred: &dyn Fn(&EndpointVerdict) -> bool, c: usize| pieces.iter().all(|p| pred(&p[c]));
    let pick = |pred: &dyn Fn(&EndpointVerdict) -> bool| -> Option<u8> {
        let hits: Vec<u8> = (0..2).filter(|&c| all(pred, c)).map(|c| c as u8).collect();
        (hits.len() == 1).then(|| hits[0])
    };
    let identity_at = pick(&|e| e.is_alpha);
    let constant_at = pick(&|e| e.is_constant);
    let dichotomy = matches!((identity_at, constant_at), (Some(a), Some(b)) if a != b);
    Ok(EndpointReport { pieces, identity_at, constant_at, dichotomy })
}

/// Ring of the middle of every piece, for callers assembling reports.
pub fn piece_algebra(piece: &CoverPiece) -> PresentedAlgebra {
    piece.span.middle().clone()
}
