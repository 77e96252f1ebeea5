//! Executes one command against a workspace.

use serde_json::{json, Value};

use flatcor::cancellation::{
    filtration_index, flatness_bound, flatness_bound_ext, rho, rho_slice, verify_cancel_final, verify_compat, z_slice,
    z_slice_ext, CancelError, FlatnessBound, LemmaReport, SliceVerdict,
};
use flatcor::claims::FlfClaim;
use flatcor::contraction::{contract, standard_contraction_data, verify_contraction_endpoints, ContractionError};
use flatcor::spans::{add, compose, external_tensor, CertifyOutcome, Correspondence, SpanError};
use flatcor::{GbConfig, GbError, Poly, PolyError};

use crate::cli::Command;
use crate::report::{NamedClaim, Verdict};
use crate::workspace::Workspace;

pub struct Env<'a> {
    pub ws: &'a Workspace,
    pub cfg: GbConfig,
    pub window: u32,
}

pub struct Outcome {
    pub verdict: Verdict,
    pub summary: String,
    pub details: Value,
    pub certificates: Vec<NamedClaim>,
    pub lemma: Option<LemmaReport>,
}

impl Outcome {
    fn new(verdict: Verdict, summary: impl Into<String>) -> Self {
        Outcome { verdict, summary: summary.into(), details: Value::Null, certificates: Vec::new(), lemma: None }
    }

    fn details(mut self, d: Value) -> Self {
        self.details = d;
        self
    }

    fn claim(mut self, label: &str, c: Option<&flatcor::spans::FlfCertificate>) -> Self {
        if let Some(c) = c {
            self.certificates.push(NamedClaim { label: label.into(), claim: FlfClaim::from_certificate(c) });
        }
        self
    }
}

/// Errors while running: budget exhaustion is inconclusive, the rest are input errors.
pub struct RunError {
    budget: bool,
    msg: String,
}

impl RunError {
    fn input(msg: impl Into<String>) -> Self {
        RunError { budget: false, msg: msg.into() }
    }

    pub fn into_outcome(self) -> Outcome {
        if self.budget {
            Outcome::new(Verdict::Inconclusive, format!("budget exhausted: {}", self.msg))
        } else {
            Outcome::new(Verdict::Error, self.msg)
        }
    }
}

fn is_budget(e: &GbError) -> bool {
    e.is_budget()
}

impl From<GbError> for RunError {
    fn from(e: GbError) -> Self {
        RunError { budget: is_budget(&e), msg: e.to_string() }
    }
}

impl From<SpanError> for RunError {
    fn from(e: SpanError) -> Self {
        RunError { budget: matches!(&e, SpanError::Gb(g) if is_budget(g)), msg: e.to_string() }
    }
}

impl From<CancelError> for RunError {
    fn from(e: CancelError) -> Self {
        let budget = match &e {
            CancelError::Gb(g) | CancelError::Span(SpanError::Gb(g)) => is_budget(g),
            _ => false,
        };
        RunError { budget, msg: e.to_string() }
    }
}

impl From<ContractionError> for RunError {
    fn from(e: ContractionError) -> Self {
        let budget = match &e {
            ContractionError::Gb(g) | ContractionError::Span(SpanError::Gb(g)) => is_budget(g),
            _ => false,
        };
        RunError { budget, msg: e.to_string() }
    }
}

impl From<PolyError> for RunError {
    fn from(e: PolyError) -> Self {
        RunError::input(e.to_string())
    }
}

fn corr<'w>(env: &'w Env, name: &str) -> Result<&'w Correspondence, RunError> {
    env.ws.corr(name).ok_or_else(|| RunError::input(format!("unresolved name `{name}`")))
}

fn certified(env: &Env, name: &str) -> Result<Correspondence, RunError> {
    Ok(corr(env, name)?.clone().certified(&env.cfg)?)
}

fn strings(ps: &[Poly]) -> Vec<String> {
    ps.iter().map(|p| p.to_string()).collect()
}

fn span_json(c: &Correspondence) -> Value {
    json!({
        "middle_ring": c.middle_ring().vars.names(),
        "relations": strings(c.middle().relations()),
        "target_map": strings(c.target_map()),
    })
}

/// Verdict of a certification attempt.
fn outcome_of(label: &str, o: Option<&CertifyOutcome>) -> Outcome {
    match o {
        None => Outcome::new(Verdict::Inconclusive, "no certification attempt was made"),
        Some(CertifyOutcome::Certified(c)) => {
            Outcome::new(Verdict::Pass, o.unwrap().summary()).claim(label, Some(c)).details(json!({ "rank": c.rank }))
        }
        Some(CertifyOutcome::Inconclusive(_)) => Outcome::new(Verdict::Inconclusive, o.unwrap().summary()),
        Some(other) => {
            let witness = match other {
                CertifyOutcome::NotFinite { variable } => json!({ "not_finite_in": variable }),
                CertifyOutcome::NotFlat { witness } => json!({ "annihilator": strings(witness) }),
                CertifyOutcome::NotLocallyFree { rank, obstruction } => {
                    json!({ "rank": rank, "fitting_obstruction": strings(obstruction.generators()) })
                }
                _ => Value::Null,
            };
            Outcome::new(Verdict::Fail, other.summary()).details(json!({ "witness": witness }))
        }
    }
}

fn bound_json(b: &FlatnessBound) -> Value {
    json!({
        "bound": b.bound,
        "min_valuation": b.min_valuation,
        "valuations": b.valuations,
        "matrices": b.matrices.iter().map(|m| m.iter().map(|r| strings(r)).collect::<Vec<_>>()).collect::<Vec<_>>(),
    })
}

pub fn execute(cmd: &Command, env: &Env) -> Outcome {
    match execute_inner(cmd, env) {
        Ok(o) => o,
        Err(e) => e.into_outcome(),
    }
}

fn execute_inner(cmd: &Command, env: &Env) -> Result<Outcome, RunError> {
    let cfg = &env.cfg;
    Ok(match cmd {
        Command::Compose { first, second } | Command::Add { left: first, right: second } | Command::Tensor { left: first, right: second } => {
            let (a, b) = (certified(env, first)?, certified(env, second)?);
            let c = match cmd {
                Command::Compose { .. } => compose(&a, &b, cfg)?,
                Command::Add { .. } => add(&a, &b, cfg)?,
                _ => external_tensor(&a, &b, cfg)?,
            };
            let c = if c.certification().is_some() { c } else { c.certified(cfg)? };
            let mut o = outcome_of("result", c.certification());
            o.details = json!({ "result": span_json(&c), "rank": c.certificate().map(|x| x.rank),
                "input_ranks": [a.certificate().map(|x| x.rank), b.certificate().map(|x| x.rank)] });
            o
        }
        Command::Certify { corr: name } | Command::Degree { corr: name } => {
            let c = certified(env, name)?;
            let mut o = outcome_of(name, c.certification());
            if matches!(cmd, Command::Degree { .. }) && o.verdict == Verdict::Pass {
                o.summary = format!("degree {}", c.certificate().unwrap().rank);
                o.details = json!({ "degree": c.certificate().unwrap().rank });
            }
            o
        }
        Command::Bound { corr: name, f, f2 } => {
            let z = certified(env, name)?;
            let fp = Poly::parse(z.middle_ring(), f)?;
            let b = match f2 {
                Some(g) => flatness_bound_ext(&z, &fp, &Poly::parse(z.middle_ring(), g)?),
                None => flatness_bound(&z, &fp),
            };
            match b {
                Ok(b) => Outcome::new(Verdict::Pass, format!("N = {}", b.bound)).details(bound_json(&b)).claim(name, z.certificate()),
                Err(CancelError::NotFree) => {
                    Outcome::new(Verdict::Fail, "no bound: the span is not certified finite free over X × Gm")
                        .details(json!({ "certification": z.certification().map(|o| o.summary()) }))
                }
                Err(e) => return Err(e.into()),
            }
        }
        Command::Slice { corr: name, f, n, f2, a, b } => {
            let z = certified(env, name)?;
            let fp = Poly::parse(z.middle_ring(), f)?;
            let s = match f2 {
                Some(g) => z_slice_ext(&z, &fp, &Poly::parse(z.middle_ring(), g)?, *a, *b, *n, cfg)?,
                None => z_slice(&z, &fp, *n, cfg)?,
            };
            let base = json!({ "n": s.n, "relations": strings(s.algebra.relations()), "verdict": s.verdict.label(),
                "bound": s.bound.as_ref().map(bound_json) });
            match &s.verdict {
                SliceVerdict::FlatByCertificate { bound } => {
                    Outcome::new(Verdict::Pass, format!("flat by certificate: n = {} > N = {bound}", s.n)).details(base).claim(name, z.certificate())
                }
                SliceVerdict::CertifiedFlf(c) => Outcome::new(Verdict::Pass, format!("certified finite locally free of rank {}", c.rank))
                    .details(base)
                    .claim("slice", Some(c)),
                SliceVerdict::NotFlat { witness } => {
                    let mut d = base;
                    d["witness"] = json!(strings(witness));
                    Outcome::new(Verdict::Fail, "not flat: nonzero proper Fitting ideal").details(d)
                }
                SliceVerdict::Inconclusive(r) => Outcome::new(Verdict::Inconclusive, r.clone()).details(base),
            }
        }
        Command::Rho { corr: name, m, n, sign } => {
            let a = certified(env, name)?;
            let r = rho(&a, *m, *n, *sign, cfg)?;
            let mut o = outcome_of("rho", r.certification());
            o.details = json!({ "span": span_json(&r), "outcome": r.certification().map(|c| c.label()) });
            o
        }
        Command::RhoSlice { corr: name, n, sign } => {
            let a = certified(env, name)?;
            let r = rho_slice(&a, *n, *sign, cfg)?.certified(cfg)?;
            let mut o = outcome_of("rho-slice", r.certification());
            o.details = json!({ "span": span_json(&r), "outcome": r.certification().map(|c| c.label()) });
            o
        }
        Command::Filtration { corr: name } => {
            let a = certified(env, name)?;
            let w = filtration_index(&a, env.window, cfg)?;
            let checked: Vec<Value> = w
                .checked
                .iter()
                .map(|t| json!({ "m": t.m, "n": t.n, "sign": t.sign, "outcome": t.outcome, "rank": t.rank }))
                .collect();
            let d = json!({ "window": w.window, "i": w.i, "checked": checked,
                "blocking": w.blocking.map(|(m, n, s)| json!({ "m": m, "n": n, "sign": s })),
                "bounds": w.bounds.as_ref().map(|(p, q)| json!({ "plus": bound_json(p), "minus": bound_json(q) })) });
            let claims = w.checked.iter().filter_map(|t| {
                t.certificate.clone().map(|claim| NamedClaim { label: format!("rho m={} n={} {}", t.m, t.n, t.sign), claim })
            });
            match w.i {
                Some(i) => {
                    let mut o = Outcome::new(Verdict::Pass, format!("filtration index i = {i} within window {}", w.window)).details(d);
                    o.certificates.extend(claims);
                    o
                }
                None => Outcome::new(Verdict::Fail, format!("no certified index within window {}", w.window)).details(d),
            }
        }
        Command::VerifyCompat { alpha, beta, gamma, m, n, sign } => {
            let (a, b, g) = (certified(env, alpha)?, certified(env, beta)?, certified(env, gamma)?);
            let r = verify_compat(&a, &b, &g, *m, *n, *sign, cfg)?;
            let v = if r.pushforward && r.pullback { Verdict::Pass } else { Verdict::Fail };
            Outcome::new(v, format!("pushforward {}, pullback {}", ok(r.pushforward), ok(r.pullback)))
                .details(json!({ "pushforward": r.pushforward, "pullback": r.pullback }))
        }
        Command::VerifyLemma35 { n } => {
            let r = verify_cancel_final(*n, env.ws.field, cfg)?;
            let failed: Vec<&str> = r.checks.iter().filter(|c| !c.passed).map(|c| c.name.as_str()).collect();
            let (v, s) = if r.passed() {
                (Verdict::Pass, format!("all five sub-checks pass for n = {n}"))
            } else {
                (Verdict::Fail, format!("failed: {}", failed.join("; ")))
            };
            let mut o = Outcome::new(v, s);
            o.lemma = Some(r);
            o
        }
        Command::Contract { corr: name } | Command::VerifyContraction { corr: name } => {
            let a = certified(env, name)?;
            let dim = a.target().ring().nvars() / 2;
            let datum = standard_contraction_data(dim.max(1), env.ws.field)?;
            let c = match contract(&a, &datum, cfg) {
                Ok(c) => c,
                Err(ContractionError::MeetsEndpoint(u)) => {
                    return Ok(Outcome::new(Verdict::Fail, format!("red flag: V'' meets u = {u}")));
                }
                Err(e) => return Err(e.into()),
            };
            let pieces: Vec<Value> = c
                .pieces
                .iter()
                .map(|p| json!({ "generator": p.generator.to_string(), "span": span_json(&p.span),
                    "outcome": p.span.certification().map(|o| o.summary()) }))
                .collect();
            let mut d = json!({ "w": datum.w.to_string(), "v_prime": strings(c.v_prime.generators()),
                "v_double_prime": strings(&c.v_double_prime), "avoids_zero": c.avoids_zero, "avoids_one": c.avoids_one,
                "pieces": pieces });
            let all = c.pieces.iter().all(|p| p.span.is_certified());
            let mut o = if !all {
                Outcome::new(Verdict::Inconclusive, "some cover piece is not certified")
            } else if let Command::VerifyContraction { .. } = cmd {
                let r = verify_contraction_endpoints(&a, &datum, &c, cfg)?;
                d["endpoints"] = serde_json::to_value(&r).unwrap_or(Value::Null);
                let v = if r.dichotomy { Verdict::Pass } else { Verdict::Fail };
                let at = |u: Option<u8>| u.map_or("neither endpoint".to_string(), |u| format!("u = {u}"));
                Outcome::new(v, format!("identity at {}, constant at {}", at(r.identity_at), at(r.constant_at)))
            } else {
                Outcome::new(Verdict::Pass, format!("{} certified cover piece(s); V'' avoids u = 0 and u = 1", c.pieces.len()))
            };
            for (i, p) in c.pieces.iter().enumerate() {
                o = o.claim(&format!("piece {i}"), p.span.certificate());
            }
            o.details(d)
        }
        Command::Run | Command::Print => return Err(RunError::input("not a single command")),
    })
}

fn ok(b: bool) -> &'static str {
    if b {
        "holds"
    } else {
        "fails"
    }
}
