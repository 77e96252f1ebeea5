//! The `g`/`h` polynomials, slices `Z(1 - t^n f)` and their flatness bound,
//! the operators `rho_mn` and `rho_n`, the filtration search, naturality of
//! `rho`, and the endpoint identities of the final cancellation step.
//!
//! Convention: the `Gm` coordinate of a scheme `X × Gm` is the last variable
//! pair `(t, t_inv)` of its ring.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::claims::FlfClaim;
use crate::groebner::{eliminate, intersect, saturate, GbConfig, GbError, Ideal, PresentedAlgebra};
use crate::poly::{Field, Monomial, Poly, PolyError, Ring, RingRef, VariableSet};
use crate::spans::{
    add, append_vars, certify_algebra, compose, equals, external_tensor, AffineScheme, CertifyOutcome, Correspondence,
    FlfCertificate, SpanError, VirtualCorrespondence,
};

#[derive(Debug, Clone, Error)]
pub enum CancelError {
    #[error("degree must be at least 1, got {0}")]
    BadDegree(u64),
    #[error("scheme has no Gm coordinate (expected a trailing pair t, t_inv)")]
    NoGmCoordinate,
    #[error("input is not certified finite free over A[t, t^-1]")]
    NotFree,
    #[error(transparent)]
    Span(#[from] SpanError),
    #[error(transparent)]
    Gb(#[from] GbError),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Sign {
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
}

impl Sign {
    pub const BOTH: [Sign; 2] = [Sign::Plus, Sign::Minus];
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+",
            Sign::Minus => "-",
        })
    }
}

impl std::str::FromStr for Sign {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "+" | "plus" => Ok(Sign::Plus),
            "-" | "minus" => Ok(Sign::Minus),
            _ => Err(format!("bad sign `{s}` (expected + or -)")),
        }
    }
}

/// `g_n^+ = t1^n + 1`, `g_n^- = t1^n + t2`, over `k[t1^±, t2^±]`.
#[derive(Clone, Debug)]
pub struct GPoly {
    pub n: u32,
    pub sign: Sign,
    pub value: Poly,
}

/// `h_mn^± = s g_n^± + (1 - s) g_m^±` over `k[s, t1^±, t2^±]`.
#[derive(Clone, Debug)]
pub struct HPoly {
    pub m: u32,
    pub n: u32,
    pub sign: Sign,
    pub value: Poly,
}

pub fn g_ring(field: Field) -> RingRef {
    Ring::with_names(field, &["t1", "t2"], &["t1", "t2"]).expect("static names")
}

pub fn h_ring(field: Field) -> RingRef {
    Ring::with_names(field, &["s", "t1", "t2"], &["t1", "t2"]).expect("static names")
}

fn g_in(ring: &RingRef, n: u32, sign: Sign, t1: &Poly, t2: &Poly) -> Poly {
    let tail = match sign {
        Sign::Plus => Poly::one(ring),
        Sign::Minus => t2.clone(),
    };
    &t1.pow(n) + &tail
}

pub fn g_poly(n: u32, sign: Sign, field: Field) -> Result<GPoly, CancelError> {
    if n < 1 {
        return Err(CancelError::BadDegree(n as u64));
    }
    let r = g_ring(field);
    let value = g_in(&r, n, sign, &Poly::var(&r, 0), &Poly::var(&r, 2));
    Ok(GPoly { n, sign, value })
}

pub fn h_poly(m: u32, n: u32, sign: Sign, field: Field) -> Result<HPoly, CancelError> {
    if m < 1 || n < 1 {
        return Err(CancelError::BadDegree(m.min(n) as u64));
    }
    let r = h_ring(field);
    let value = h_in(&r, m, n, sign, &Poly::var(&r, 0), &Poly::var(&r, 1), &Poly::var(&r, 3));
    Ok(HPoly { m, n, sign, value })
}

fn h_in(ring: &RingRef, m: u32, n: u32, sign: Sign, s: &Poly, t1: &Poly, t2: &Poly) -> Poly {
    let one_minus = &Poly::one(ring) - s;
    &(s * &g_in(ring, n, sign, t1, t2)) + &(&one_minus * &g_in(ring, m, sign, t1, t2))
}

/// Index of `t` for a ring whose last two variables are `t, t_inv`.
pub fn gm_coordinate(vars: &VariableSet) -> Option<usize> {
    let n = vars.len();
    (n >= 2 && vars.partner(n - 2) == Some(n - 1) && vars.is_inverted(n - 2)).then(|| n - 2)
}

/// `X` for a source `X × Gm`.
pub fn strip_gm(x_gm: &AffineScheme) -> Result<AffineScheme, CancelError> {
    let t = gm_coordinate(&x_gm.ring().vars).ok_or(CancelError::NoGmCoordinate)?;
    let keep: Vec<usize> = (0..t).collect();
    let ring = Ring::new(x_gm.field(), x_gm.ring().vars.select(&keep));
    let rels = x_gm
        .relations()
        .iter()
        .filter(|p| p.variables().iter().all(|&i| i < t))
        .map(|p| Ideal::new(x_gm.ring(), vec![p.clone()]).restrict_to(&ring).generators()[0].clone())
        .collect();
    Ok(AffineScheme::new_unchecked(&ring, rels))
}

pub type Matrix = Vec<Vec<Poly>>;

/// Valuation data of multiplication matrices over `A[t, t^-1]`.
#[derive(Clone, Debug)]
pub struct FlatnessBound {
    pub matrices: Vec<Matrix>,
    /// `val_t` of each entry; `None` for zero entries.
    pub valuations: Vec<Vec<Vec<Option<i64>>>>,
    pub min_valuation: Option<i64>,
    /// `N = max(0, -min val)`: the criterion `n + val >= 1` holds on every
    /// entry exactly when `n > N`.
    pub bound: u64,
}

impl FlatnessBound {
    fn from_matrices(matrices: Vec<Matrix>, t: usize) -> Self {
        let valuations: Vec<Vec<Vec<Option<i64>>>> = matrices
            .iter()
            .map(|m| m.iter().map(|row| row.iter().map(|p| p.valuation_in(t)).collect()).collect())
            .collect();
        let min_valuation = valuations.iter().flatten().flatten().flatten().copied().min();
        let bound = min_valuation.map_or(0, |v| (-v).max(0) as u64);
        FlatnessBound { matrices, valuations, min_valuation, bound }
    }

    /// `t^n a_ij ∈ t A[t]` for every entry.
    pub fn criterion(&self, n: u64) -> bool {
        self.valuations.iter().flatten().flatten().flatten().all(|&v| n as i64 + v >= 1)
    }

    pub fn flat_by_certificate(&self, n: u64) -> bool {
        n > self.bound
    }
}

fn free_certificate(z: &Correspondence) -> Result<(&FlfCertificate, usize), CancelError> {
    let t = gm_coordinate(&z.source().ring().vars).ok_or(CancelError::NoGmCoordinate)?;
    match z.certificate() {
        Some(c) if c.is_free() => Ok((c, t)),
        _ => Err(CancelError::NotFree),
    }
}

/// Matrix of multiplication by `f` on the certified basis of `O(Z)` over
/// `A[t, t^-1]`, and the resulting bound.
pub fn flatness_bound(z: &Correspondence, f: &Poly) -> Result<FlatnessBound, CancelError> {
    let (cert, t) = free_certificate(z)?;
    Ok(FlatnessBound::from_matrices(vec![cert.multiplication_matrix(f)], t))
}

/// One bound valid for `Z(1 - t^n (f1 t^a + f2 t^b))` and all `a, b >= 0`.
pub fn flatness_bound_ext(z: &Correspondence, f1: &Poly, f2: &Poly) -> Result<FlatnessBound, CancelError> {
    let (cert, t) = free_certificate(z)?;
    Ok(FlatnessBound::from_matrices(vec![cert.multiplication_matrix(f1), cert.multiplication_matrix(f2)], t))
}

#[derive(Clone, Debug)]
pub enum SliceVerdict {
    /// `n` exceeds the flatness bound.
    FlatByCertificate { bound: u64 },
    CertifiedFlf(Box<FlfCertificate>),
    NotFlat { witness: Vec<Poly> },
    Inconclusive(String),
}

impl SliceVerdict {
    pub fn label(&self) -> &'static str {
        match self {
            SliceVerdict::FlatByCertificate { .. } => "flat-by-certificate",
            SliceVerdict::CertifiedFlf(_) => "certified-flf",
            SliceVerdict::NotFlat { .. } => "not-flat",
            SliceVerdict::Inconclusive(_) => "inconclusive",
        }
    }
}

/// `Z_n = Z(1 - t^n f) ⊂ Z`, viewed over `X`.
#[derive(Clone, Debug)]
pub struct ZSlice {
    pub n: u64,
    pub algebra: PresentedAlgebra,
    pub base: AffineScheme,
    pub bound: Option<FlatnessBound>,
    pub verdict: SliceVerdict,
}

impl ZSlice {
    /// Direct certification of `Z_n` over `X`, ignoring the bound.
    pub fn certify(&self, cfg: &GbConfig) -> Result<CertifyOutcome, CancelError> {
        Ok(certify_algebra(&self.algebra, &self.base.algebra(), cfg)?)
    }
}

fn outcome_to_verdict(o: CertifyOutcome) -> SliceVerdict {
    match o {
        CertifyOutcome::Certified(c) => SliceVerdict::CertifiedFlf(Box::new(c)),
        CertifyOutcome::NotFlat { witness } => SliceVerdict::NotFlat { witness },
        CertifyOutcome::NotLocallyFree { obstruction, .. } => {
            SliceVerdict::NotFlat { witness: obstruction.generators().to_vec() }
        }
        CertifyOutcome::NotFinite { variable } => {
            SliceVerdict::Inconclusive(format!("not finite in `{variable}`; flatness undecided"))
        }
        CertifyOutcome::Inconclusive(r) => SliceVerdict::Inconclusive(r),
    }
}

fn slice_with(
    z: &Correspondence,
    f: &Poly,
    n: u64,
    bound: Option<FlatnessBound>,
    cfg: &GbConfig,
) -> Result<ZSlice, CancelError> {
    if n < 1 {
        return Err(CancelError::BadDegree(n));
    }
    let t = gm_coordinate(&z.source().ring().vars).ok_or(CancelError::NoGmCoordinate)?;
    let ring = z.middle_ring();
    let e = u32::try_from(n).map_err(|_| PolyError::ExponentOverflow)?;
    let rel = &Poly::one(ring) - &Poly::var(ring, t).try_pow(e)?.try_mul(f)?;
    let algebra = z.middle().with_relations(&[rel.cancel_units()]);
    let base = strip_gm(z.source())?;
    let verdict = match &bound {
        Some(b) if b.flat_by_certificate(n) => SliceVerdict::FlatByCertificate { bound: b.bound },
        _ => outcome_to_verdict(certify_algebra(&algebra, &base.algebra(), cfg)?),
    };
    Ok(ZSlice { n, algebra, base, bound, verdict })
}

/// The slice with its verdict; the bound is used when `Z` is certified free.
pub fn z_slice(z: &Correspondence, f: &Poly, n: u64, cfg: &GbConfig) -> Result<ZSlice, CancelError> {
    let bound = flatness_bound(z, f).ok();
    slice_with(z, f, n, bound, cfg)
}

/// `Z(1 - t^n (f1 t^a + f2 t^b))` with the uniform bound.
pub fn z_slice_ext(
    z: &Correspondence,
    f1: &Poly,
    f2: &Poly,
    a: u32,
    b: u32,
    n: u64,
    cfg: &GbConfig,
) -> Result<ZSlice, CancelError> {
    let t = gm_coordinate(&z.source().ring().vars).ok_or(CancelError::NoGmCoordinate)?;
    let tv = Poly::var(z.middle_ring(), t);
    let f = &f1.try_mul(&tv.try_pow(a)?)? + &f2.try_mul(&tv.try_pow(b)?)?;
    let bound = flatness_bound_ext(z, f1, f2).ok();
    slice_with(z, &f, n, bound, cfg)
}

/// Gm coordinates of a span `X × Gm -> Y × Gm`: index of `t1` in the middle
/// and the images `t2`, `t2^-1`.
fn gm_legs(alpha: &Correspondence) -> Result<(usize, usize), CancelError> {
    let ts = gm_coordinate(&alpha.source().ring().vars).ok_or(CancelError::NoGmCoordinate)?;
    let tt = gm_coordinate(&alpha.target().ring().vars).ok_or(CancelError::NoGmCoordinate)?;
    Ok((ts, tt))
}

/// Span `X × A^1 <- Z_mn^± -> Y` with the certification attempt recorded.
pub fn rho(alpha: &Correspondence, m: u32, n: u32, sign: Sign, cfg: &GbConfig) -> Result<Correspondence, CancelError> {
    if m < 1 || n < 1 {
        return Err(CancelError::BadDegree(m.min(n) as u64));
    }
    if !alpha.is_certified() {
        return Err(SpanError::Uncertified.into());
    }
    let (ts, tt) = gm_legs(alpha)?;
    let x = strip_gm(alpha.source())?;
    let y = strip_gm(alpha.target())?;
    let field = x.field();
    let source = x.product(&AffineScheme::affine_line(field, "s")?)?;
    let (vars, pos) = append_vars(&source.ring().vars, &alpha.middle_ring().vars, ts, true)?;
    let ring = Ring::new(field, vars);
    let map: Vec<usize> = (0..alpha.middle_ring().nvars()).map(|i| if i < ts { i } else { pos[i] }).collect();
    let s = Poly::var(&ring, ts);
    let t1 = Poly::var(&ring, pos[ts]);
    let t2 = alpha.target_map()[tt].rename_into(&ring, &map);
    let h = h_in(&ring, m, n, sign, &s, &t1, &t2);
    let mut rels: Vec<Poly> = alpha.middle().relations().iter().map(|p| p.rename_into(&ring, &map)).collect();
    rels.push(h);
    let tm = alpha.target_map()[..tt].iter().map(|p| p.rename_into(&ring, &map)).collect();
    let c = Correspondence::new(source, y, &ring, rels, tm, cfg)?;
    Ok(c.certified(cfg)?)
}

/// `X <- Z(g_n^±(t1, t2)) -> Y`.
pub fn rho_slice(alpha: &Correspondence, n: u32, sign: Sign, cfg: &GbConfig) -> Result<Correspondence, CancelError> {
    if n < 1 {
        return Err(CancelError::BadDegree(n as u64));
    }
    let (ts, tt) = gm_legs(alpha)?;
    let x = strip_gm(alpha.source())?;
    let y = strip_gm(alpha.target())?;
    let ring = alpha.middle_ring();
    let g = g_in(ring, n, sign, &Poly::var(ring, ts), &alpha.target_map()[tt]);
    let mut rels = alpha.middle().relations().to_vec();
    rels.push(g);
    let tm = alpha.target_map()[..tt].to_vec();
    let c = Correspondence::new(x, y, ring, rels, tm, cfg)?;
    Ok(c.certified(cfg)?)
}

/// `ρ^+ - ρ^-` as a formal difference.
pub fn rho_virtual(alpha: &Correspondence, m: u32, n: u32, cfg: &GbConfig) -> Result<VirtualCorrespondence, CancelError> {
    let plus = rho(alpha, m, n, Sign::Plus, cfg)?;
    let minus = rho(alpha, m, n, Sign::Minus, cfg)?;
    Ok(VirtualCorrespondence::new(plus, minus, cfg)?)
}

/// Restricts a span out of `X × A^1_s` to `s = value`, giving a span out of `X`.
pub fn specialize_s(c: &Correspondence, value: i64, cfg: &GbConfig) -> Result<Correspondence, CancelError> {
    let src = c.source();
    let s = src.ring().nvars().checked_sub(1).ok_or(CancelError::NoGmCoordinate)?;
    let x = AffineScheme::new_unchecked(
        &Ring::new(src.field(), src.ring().vars.select(&(0..s).collect::<Vec<_>>())),
        Vec::new(),
    );
    let mr = c.middle_ring();
    let keep: Vec<usize> = (0..mr.nvars()).filter(|&i| i != s).collect();
    let ring = Ring::new(mr.field, mr.vars.select(&keep));
    let images: Vec<Poly> = (0..mr.nvars())
        .map(|i| match i.cmp(&s) {
            std::cmp::Ordering::Less => Poly::var(&ring, i),
            std::cmp::Ordering::Equal => Poly::from_i64(&ring, value),
            std::cmp::Ordering::Greater => Poly::var(&ring, i - 1),
        })
        .collect();
    let rels = c.middle().relations().iter().map(|p| p.substitute_unchecked(&ring, &images)).collect::<Result<Vec<_>, _>>()?;
    let tm = c.target_map().iter().map(|p| p.substitute_unchecked(&ring, &images)).collect::<Result<Vec<_>, _>>()?;
    let x = AffineScheme::new_unchecked(
        x.ring(),
        src.relations()
            .iter()
            .map(|p| p.substitute_unchecked(x.ring(), &images[..s + 1].iter().map(|q| q.reinterpret_prefix(x.ring())).collect::<Vec<_>>()))
            .collect::<Result<Vec<_>, _>>()?,
    );
    Ok(Correspondence::new(x, c.target().clone(), &ring, rels, tm, cfg)?)
}

impl Poly {
    /// Moves a polynomial that only involves the first `target.nvars()`
    /// variables into `target`.
    fn reinterpret_prefix(&self, target: &RingRef) -> Poly {
        let n = target.nvars();
        Poly::from_terms(target, self.terms().map(|(m, c)| (Monomial(m.0[..n].to_vec()), c.clone())))
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TripleResult {
    pub m: u32,
    pub n: u32,
    pub sign: Sign,
    pub outcome: String,
    pub rank: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certificate: Option<FlfClaim>,
}

#[derive(Clone, Debug)]
pub struct FiltrationWitness {
    pub window: u32,
    /// Smallest `i` with every `(m, n, ±)`, `i <= m, n <= window`, certified.
    pub i: Option<u32>,
    pub checked: Vec<TripleResult>,
    /// The failing triple that stops `i` from being smaller.
    pub blocking: Option<(u32, u32, Sign)>,
    /// Flatness bounds of `Z_mn^±` over `X × A^1` (`+`, `-`), when `Z` is free over `X × Gm`.
    pub bounds: Option<(FlatnessBound, FlatnessBound)>,
}

/// Searches downward from `i = window`, certifying every new triple.
pub fn filtration_index(alpha: &Correspondence, window: u32, cfg: &GbConfig) -> Result<FiltrationWitness, CancelError> {
    if window < 1 {
        return Err(CancelError::BadDegree(0));
    }
    let (_, tt) = gm_legs(alpha)?;
    let mut checked = Vec::new();
    let mut best = None;
    let mut blocking = None;
    'outer: for i in (1..=window).rev() {
        let mut triples = vec![(i, i)];
        for k in (i + 1)..=window {
            triples.push((i, k));
            triples.push((k, i));
        }
        for (m, n) in triples {
            for sign in Sign::BOTH {
                let r = rho(alpha, m, n, sign, cfg)?;
                let outcome = r.certification().expect("rho certifies");
                checked.push(TripleResult {
                    m,
                    n,
                    sign,
                    outcome: outcome.label().to_string(),
                    rank: outcome.certificate().map(|c| c.rank),
                    certificate: outcome.certificate().map(FlfClaim::from_certificate),
                });
                if outcome.certificate().is_none() {
                    blocking = Some((m, n, sign));
                    break 'outer;
                }
            }
        }
        best = Some(i);
    }
    // `h^+ = 1 - t^k (-s t^(n-k) - (1-s) t^(m-k))`; `h^- = t2 (1 - t^k (...) t2^-1)`.
    // The factors `s`, `1 - s` are scalars over `X × A^1`, so only the
    // valuations of `1` and `t2^-1` matter.
    let bounds = {
        let one = Poly::one(alpha.middle_ring());
        let t2_inv = alpha.target_map()[tt + 1].clone();
        match (flatness_bound_ext(alpha, &one, &one), flatness_bound_ext(alpha, &t2_inv, &t2_inv)) {
            (Ok(p), Ok(m)) => Some((p, m)),
            _ => None,
        }
    };
    Ok(FiltrationWitness { window, i: best, checked, blocking, bounds })
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CompatReport {
    /// `rho(gamma ∘ alpha) = gamma_* rho(alpha)`.
    pub pushforward: bool,
    /// `rho(alpha ∘ beta) = beta^* rho(alpha)`.
    pub pullback: bool,
}

/// Builds both sides of each naturality identity in a common ring and
/// compares them. `alpha: X × Gm -> Y × Gm`, `beta: X' -> X`, `gamma: Y -> Y'`.
pub fn verify_compat(
    alpha: &Correspondence,
    beta: &Correspondence,
    gamma: &Correspondence,
    m: u32,
    n: u32,
    sign: Sign,
    cfg: &GbConfig,
) -> Result<CompatReport, CancelError> {
    let (ts, tt) = gm_legs(alpha)?;
    let field = alpha.source().field();
    let gm_src = AffineScheme::gm(field, alpha.source().ring().vars.name(ts))?;
    let gm_tgt = AffineScheme::gm(field, alpha.target().ring().vars.name(tt))?;
    let id_src = Correspondence::identity(&gm_src).certified(cfg)?;
    let id_tgt = Correspondence::identity(&gm_tgt).certified(cfg)?;

    let g_gm = external_tensor(gamma, &id_tgt, cfg)?;
    let lhs = rho(&compose(alpha, &g_gm, cfg)?, m, n, sign, cfg)?;
    let rhs = compose(&rho(alpha, m, n, sign, cfg)?, gamma, cfg)?;
    let pushforward = equals(&lhs, &rhs, cfg)?;

    let b_gm = external_tensor(beta, &id_src, cfg)?;
    let lhs = rho(&compose(&b_gm, alpha, cfg)?, m, n, sign, cfg)?;
    let line = AffineScheme::affine_line(field, "s")?;
    let b_line = external_tensor(beta, &Correspondence::identity(&line).certified(cfg)?, cfg)?;
    let rhs = compose(&b_line, &rho(alpha, m, n, sign, cfg)?, cfg)?;
    // rhs is [X', s, beta fiber, t, t_inv, alpha fiber]; lhs puts t, t_inv first
    let p = beta.source().ring().nvars() + 1;
    let kb = beta.fiber_len();
    let ring = lhs.middle_ring().clone();
    if ring.nvars() != rhs.middle_ring().nvars() {
        return Err(SpanError::Incomparable("pullback sides have different arity".into()).into());
    }
    let images: Vec<Poly> = (0..ring.nvars())
        .map(|j| {
            let k = if j < p {
                j
            } else if j < p + kb {
                j + 2
            } else if j < p + kb + 2 {
                j - kb
            } else {
                j
            };
            Poly::var(&ring, k)
        })
        .collect();
    let rhs = rhs.reparametrize(&ring, &images, cfg)?;
    let pullback = equals(&lhs, &rhs, cfg)?;
    Ok(CompatReport { pushforward, pullback })
}

/// One machine-checked step of the final cancellation identities.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SubCheck {
    pub name: String,
    pub passed: bool,
    pub detail: String,
    /// Ideal generators and claimed basis, for re-verification elsewhere.
    pub generators: Vec<String>,
    pub basis: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certificate: Option<FlfClaim>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LemmaReport {
    pub n: u32,
    pub field: String,
    pub checks: Vec<SubCheck>,
}

impl LemmaReport {
    pub fn passed(&self) -> bool {
        self.checks.len() == 5 && self.checks.iter().all(|c| c.passed)
    }
}

/// The span `p: Gm -> Gm` (identity on the middle, target coordinate `1`).
pub fn projection_span(field: Field) -> Result<Correspondence, SpanError> {
    let gm = AffineScheme::gm(field, "t")?;
    let r = gm.ring().clone();
    Correspondence::from_morphism(&gm, &gm, vec![Poly::one(&r), Poly::one(&r)], &GbConfig::default())
}

fn rank_over(alg: &PresentedAlgebra, base: &PresentedAlgebra, cfg: &GbConfig) -> Result<Option<(usize, Vec<String>)>, CancelError> {
    Ok(certify_algebra(alg, base, cfg)?.certificate().map(|c| (c.rank, c.basis_labels().to_vec())))
}

fn gens(i: &Ideal) -> Vec<String> {
    i.generators().iter().map(|g| g.to_string()).collect()
}

/// Machine-checks the five steps (a)–(e); stops at the first failure.
pub fn verify_cancel_final(n: u32, field: Field, cfg: &GbConfig) -> Result<LemmaReport, CancelError> {
    if n < 1 {
        return Err(CancelError::BadDegree(0));
    }
    let mut report = LemmaReport { n, field: field.to_string(), checks: Vec::new() };
    let mut push = |name: &str, passed: bool, detail: String, generators: Vec<String>, basis: Vec<String>, certificate: Option<FlfClaim>| {
        report.checks.push(SubCheck { name: name.into(), passed, detail, generators, basis, certificate });
        passed
    };
    let pt = PresentedAlgebra::new(&Ring::new(field, VariableSet::empty()), vec![]);

    // (a) rho_n^+(p) = rho_n^-(p)
    let p = projection_span(field)?.certified(cfg)?;
    let plus = rho_slice(&p, n, Sign::Plus, cfg)?;
    let minus = rho_slice(&p, n, Sign::Minus, cfg)?;
    let same = equals(&plus, &minus, cfg)?;
    if !push("a: rho_n^+(p) = rho_n^-(p)", same, format!("middle ideal {}", gens(&plus.middle().ideal()).join(", ")), gens(&plus.middle().ideal()), vec![], None) {
        return Ok(report);
    }

    // (b) H = Spec k[s][t]/(t^n + t s + 1 - s) is free of rank n over A^1_s
    let hr = Ring::with_names(field, &["s", "t"], &[])?;
    let (s, t) = (Poly::var(&hr, 0), Poly::var(&hr, 1));
    let hpoly = &(&(&t.pow(n) + &(&t * &s)) + &Poly::one(&hr)) - &s;
    let h = PresentedAlgebra::new(&hr, vec![hpoly.clone()]);
    let sline = PresentedAlgebra::new(&Ring::with_names(field, &["s"], &[])?, vec![]);
    let hb = certify_algebra(&h, &sline, cfg)?;
    let ok = hb.certificate().is_some_and(|c| c.rank == n as usize && c.is_free());
    let basis = hb.certificate().map(|c| c.basis_labels().to_vec()).unwrap_or_default();
    let top = hpoly.degree_in(1).unwrap_or(0);
    let lc = Poly::from_terms(
        &hr,
        hpoly.terms().filter(|(m, _)| m.0[1] == top).map(|(m, c)| (Monomial(vec![m.0[0], 0]), c.clone())),
    );
    let detail = format!("{}; coefficient of t^{top} is {lc}", hb.summary());
    let claim = hb.certificate().map(FlfClaim::from_certificate);
    if !push("b: H free of rank n over A^1_s", ok, detail, vec![hpoly.to_string()], basis, claim) {
        return Ok(report);
    }

    // (c) H at s = 0 is Z(t^n + 1) ⊂ A^1
    let tr = Ring::with_names(field, &["t"], &[])?;
    let tt = Poly::var(&tr, 0);
    let at = |v: i64| -> Result<Poly, PolyError> { hpoly.substitute_unchecked(&tr, &[Poly::from_i64(&tr, v), tt.clone()]) };
    let zplus = Ideal::new(&tr, vec![&tt.pow(n) + &Poly::one(&tr)]);
    let h0 = Ideal::new(&tr, vec![at(0)?]);
    let rank0 = rank_over(&PresentedAlgebra::new(&tr, h0.generators().to_vec()), &pt, cfg)?;
    let ok = h0.same_ideal(&zplus, cfg)? && rank0.as_ref().is_some_and(|r| r.0 == n as usize);
    if !push("c: s=0 slice is Z(t^n+1)", ok, format!("rank {:?}", rank0.as_ref().map(|r| r.0)), gens(&h0), rank0.map(|r| r.1).unwrap_or_default(), None) {
        return Ok(report);
    }

    // (d) H at s = 1 is Z(t^n + t) = Z^- ⊔ {0}
    let i1 = Ideal::new(&tr, vec![at(1)?]);
    let zminus = saturate(&i1, &tt, cfg)?;
    let point0 = Ideal::new(&tr, vec![tt.clone()]);
    // Z^- computed independently as the Gm-presentation Z(t^n + t | t t_inv = 1)
    let gr = Ring::with_names(field, &["t"], &["t"])?;
    let gmz = Ideal::new(&gr, vec![at(1)?.rename_into(&gr, &[0])]).with(&Ideal::unit_relations(&gr));
    let elim = eliminate(&gmz, &[1], cfg)?.restrict_to(&tr);
    let decomposed = intersect(&zminus, &point0, cfg)?.same_ideal(&i1, cfg)?;
    let disjoint = zminus.sum(&point0).is_unit(cfg)?;
    let contained = i1.contained_in(&point0, cfg)?;
    let r_all = rank_over(&PresentedAlgebra::new(&tr, i1.generators().to_vec()), &pt, cfg)?.map(|r| r.0);
    let r_minus = rank_over(&PresentedAlgebra::new(&gr, gmz.generators().to_vec()), &pt, cfg)?.map(|r| r.0);
    let r_zero = rank_over(&PresentedAlgebra::new(&tr, vec![tt.clone()]), &pt, cfg)?.map(|r| r.0);
    // the same split as a sum of spans pt <- Z^- -> pt and pt <- {0} -> pt
    let ptx = AffineScheme::point(field);
    let zm_span = Correspondence::new(ptx.clone(), ptx.clone(), &gr, gmz.generators().to_vec(), vec![], cfg)?.certified(cfg)?;
    let z0_span = Correspondence::new(ptx.clone(), ptx, &tr, vec![tt.clone()], vec![], cfg)?.certified(cfg)?;
    let sum_rank = add(&zm_span, &z0_span, cfg)?.certificate().map(|c| c.rank);
    let ok = elim.same_ideal(&zminus, cfg)?
        && decomposed
        && disjoint
        && contained
        && r_all == Some(n as usize)
        && r_minus == Some(n as usize - 1)
        && r_zero == Some(1)
        && sum_rank == Some(n as usize);
    let detail = format!(
        "Z^- = ({}); ranks {:?} = {:?} + {:?}; sum of spans has rank {:?}",
        gens(&zminus).join(", "),
        r_all,
        r_minus,
        r_zero,
        sum_rank
    );
    if !push("d: s=1 slice is Z^- ⊔ {0}", ok, detail, gens(&i1), vec![], None) {
        return Ok(report);
    }

    // (e) Z(t^n + 1) on A^1 is unchanged by inverting t
    let sat = saturate(&zplus, &tt, cfg)?;
    let ok = sat.same_ideal(&zplus, cfg)?;
    push("e: saturation at t leaves Z(t^n+1) unchanged", ok, format!("(I : t^inf) = ({})", gens(&sat).join(", ")), gens(&zplus), vec![], None);
    Ok(report)
}
