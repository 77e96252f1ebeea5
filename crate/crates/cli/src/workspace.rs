//! Workspace documents: one field, named schemes and correspondences, and
//! named requests. The grammar lives in `docs/workspace.md`.
//!
//! Every statement refers only to names defined above it. Printing a parsed
//! workspace gives its canonical form, and parsing that back is the identity.

use std::fmt::Write as _;

use thiserror::Error;

use flatcor::poly::VariableSet;
use flatcor::spans::{add, compose, external_tensor, AffineScheme, Correspondence};
use flatcor::{Field, GbConfig, Poly, PolyError, Ring, RingRef};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("line {line}, column {column}: {kind}")]
pub struct Diagnostic {
    pub line: usize,
    pub column: usize,
    pub kind: DiagnosticKind,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DiagnosticKind {
    #[error("syntax error: {0}")]
    Syntax(String),
    #[error("unresolved name `{0}`")]
    Unresolved(String),
    #[error("duplicate name `{0}`")]
    Duplicate(String),
    #[error("{0}")]
    Invalid(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SchemeDef {
    Point,
    Line(String),
    Gm(String),
    Ring { vars: Vec<String>, inverted: Vec<String>, relations: Vec<String> },
    Product(String, String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CorrDef {
    Span {
        source: String,
        target: String,
        fiber: Vec<String>,
        inverted: Vec<String>,
        relations: Vec<String>,
        map: Vec<String>,
    },
    Identity(String),
    /// `second ∘ first`.
    Compose(String, String),
    Add(String, String),
    Tensor(String, String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Statement {
    Scheme(String, SchemeDef),
    Corr(String, CorrDef),
    /// Command-line arguments of the request, without the program name.
    Request(String, Vec<String>),
}

impl Statement {
    pub fn name(&self) -> &str {
        match self {
            Statement::Scheme(n, _) | Statement::Corr(n, _) | Statement::Request(n, _) => n,
        }
    }
}

/// A parsed and resolved workspace.
#[derive(Clone, Debug)]
pub struct Workspace {
    pub field: Field,
    pub statements: Vec<Statement>,
    schemes: Vec<(String, AffineScheme)>,
    corrs: Vec<(String, Correspondence)>,
}

impl Workspace {
    pub fn empty(field: Field) -> Self {
        Workspace { field, statements: Vec::new(), schemes: Vec::new(), corrs: Vec::new() }
    }

    pub fn scheme(&self, name: &str) -> Option<&AffineScheme> {
        self.schemes.iter().find(|(n, _)| n == name).map(|(_, s)| s)
    }

    pub fn corr(&self, name: &str) -> Option<&Correspondence> {
        self.corrs.iter().find(|(n, _)| n == name).map(|(_, c)| c)
    }

    pub fn requests(&self) -> impl Iterator<Item = (&str, &[String])> {
        self.statements.iter().filter_map(|s| match s {
            Statement::Request(n, args) => Some((n.as_str(), args.as_slice())),
            _ => None,
        })
    }

    /// Canonical text of the document.
    pub fn print(&self) -> String {
        let mut out = format!("field {}\n", self.field);
        for s in &self.statements {
            match s {
                Statement::Scheme(n, d) => {
                    let _ = writeln!(out, "scheme {n} = {}", print_scheme(d));
                }
                Statement::Corr(n, d) => {
                    let _ = writeln!(out, "corr {n}{}", print_corr(d));
                }
                Statement::Request(n, args) => {
                    let joined: Vec<String> = args.iter().map(|a| quote(a)).collect();
                    let joined = joined.join(" ");
                    let _ = writeln!(out, "request {n} = {joined}");
                }
            }
        }
        out
    }
}

/// Bare if the argument is plainly safe, else double-quoted.
fn quote(arg: &str) -> String {
    let safe = |c: char| c.is_ascii_alphanumeric() || "_-+.,:=/@%".contains(c);
    if !arg.is_empty() && arg.chars().all(safe) {
        arg.to_string()
    } else {
        format!("\"{}\"", arg.replace('\\', "\\\\").replace('"', "\\\""))
    }
}

fn list(items: &[String]) -> String {
    items.join(", ")
}

fn print_scheme(d: &SchemeDef) -> String {
    match d {
        SchemeDef::Point => "point".into(),
        SchemeDef::Line(v) => format!("line({v})"),
        SchemeDef::Gm(v) => format!("gm({v})"),
        SchemeDef::Ring { vars, inverted, relations } => {
            let mut s = format!("ring({})", list(vars));
            if !inverted.is_empty() {
                let _ = write!(s, " invert({})", list(inverted));
            }
            if !relations.is_empty() {
                let _ = write!(s, " relations({})", list(relations));
            }
            s
        }
        SchemeDef::Product(a, b) => format!("product({a}, {b})"),
    }
}

fn print_corr(d: &CorrDef) -> String {
    match d {
        CorrDef::Span { source, target, fiber, inverted, relations, map } => {
            let mut s = format!(" : {source} -> {target} = span(");
            let mut clauses = Vec::new();
            if !fiber.is_empty() {
                clauses.push(format!("fiber({})", list(fiber)));
            }
            if !inverted.is_empty() {
                clauses.push(format!("invert({})", list(inverted)));
            }
            if !relations.is_empty() {
                clauses.push(format!("relations({})", list(relations)));
            }
            clauses.push(format!("map({})", list(map)));
            s.push_str(&clauses.join(" "));
            s.push(')');
            s
        }
        CorrDef::Identity(x) => format!(" = identity({x})"),
        CorrDef::Compose(a, b) => format!(" = compose({a}, {b})"),
        CorrDef::Add(a, b) => format!(" = add({a}, {b})"),
        CorrDef::Tensor(a, b) => format!(" = tensor({a}, {b})"),
    }
}

struct Cursor<'a> {
    text: &'a str,
    pos: usize,
    line: usize,
}

type Item = (String, usize);

impl<'a> Cursor<'a> {
    fn diag(&self, at: usize, kind: DiagnosticKind) -> Diagnostic {
        Diagnostic { line: self.line, column: self.text[..at.min(self.text.len())].chars().count() + 1, kind }
    }

    fn syntax<T>(&self, at: usize, msg: impl Into<String>) -> Result<T, Diagnostic> {
        Err(self.diag(at, DiagnosticKind::Syntax(msg.into())))
    }

    fn ws(&mut self) {
        while self.text[self.pos..].starts_with([' ', '\t']) {
            self.pos += 1;
        }
    }

    fn at_end(&mut self) -> bool {
        self.ws();
        self.pos >= self.text.len()
    }

    fn eat(&mut self, s: &str) -> bool {
        self.ws();
        if self.text[self.pos..].starts_with(s) {
            self.pos += s.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, s: &str) -> Result<(), Diagnostic> {
        if self.eat(s) {
            Ok(())
        } else {
            self.syntax(self.pos, format!("expected `{s}`"))
        }
    }

    fn ident(&mut self) -> Result<Item, Diagnostic> {
        self.ws();
        let start = self.pos;
        let len = self.text[start..].find(|c: char| !(c.is_ascii_alphanumeric() || c == '_')).unwrap_or(self.text.len() - start);
        let word = &self.text[start..start + len];
        if !flatcor::poly::is_identifier(word) {
            return self.syntax(start, "expected a name");
        }
        self.pos += len;
        Ok((word.to_string(), start))
    }

    /// `( item, item, ... )` split at top-level commas.
    fn group(&mut self) -> Result<Vec<Item>, Diagnostic> {
        self.expect("(")?;
        let mut items = Vec::new();
        let mut depth = 0usize;
        let mut start = self.pos;
        let bytes = self.text.as_bytes();
        while self.pos < bytes.len() {
            match bytes[self.pos] {
                b'(' => depth += 1,
                b')' if depth == 0 => {
                    push_item(self.text, start, self.pos, &mut items);
                    self.pos += 1;
                    return Ok(items);
                }
                b')' => depth -= 1,
                b',' if depth == 0 => {
                    push_item(self.text, start, self.pos, &mut items);
                    start = self.pos + 1;
                    if self.text[start..].trim().starts_with(')') || self.text[start..].trim().starts_with(',') {
                        return self.syntax(start, "empty list item");
                    }
                }
                _ => {}
            }
            self.pos += 1;
        }
        self.syntax(self.pos, "unclosed `(`")
    }

    fn names(&mut self) -> Result<Vec<Item>, Diagnostic> {
        let items = self.group()?;
        for (s, at) in &items {
            if !flatcor::poly::is_identifier(s) {
                return self.syntax(*at, format!("`{s}` is not a name"));
            }
        }
        Ok(items)
    }

    /// `kw(...) kw(...)` until the end or a closing `)`.
    fn clauses(&mut self, allowed: &[&str]) -> Result<Vec<(String, usize, Vec<Item>)>, Diagnostic> {
        let mut out: Vec<(String, usize, Vec<Item>)> = Vec::new();
        loop {
            self.ws();
            if self.pos >= self.text.len() || self.text[self.pos..].starts_with(')') {
                return Ok(out);
            }
            let (kw, at) = self.ident()?;
            if !allowed.contains(&kw.as_str()) {
                return self.syntax(at, format!("unknown clause `{kw}` (expected one of {})", allowed.join(", ")));
            }
            if out.iter().any(|(k, _, _)| *k == kw) {
                return self.syntax(at, format!("repeated clause `{kw}`"));
            }
            let items = self.group()?;
            out.push((kw, at, items));
        }
    }
}

fn push_item(text: &str, start: usize, end: usize, items: &mut Vec<Item>) {
    let raw = &text[start..end];
    let lead = raw.len() - raw.trim_start().len();
    if !raw.trim().is_empty() {
        items.push((raw.trim().to_string(), start + lead));
    }
}

fn take(clauses: &mut Vec<(String, usize, Vec<Item>)>, kw: &str) -> Vec<Item> {
    match clauses.iter().position(|(k, _, _)| k == kw) {
        Some(i) => clauses.remove(i).2,
        None => Vec::new(),
    }
}

fn strings(items: &[Item]) -> Vec<String> {
    items.iter().map(|(s, _)| s.clone()).collect()
}

/// Parses, resolves and canonicalises a workspace document.
pub fn parse_workspace(text: &str, cfg: &GbConfig) -> Result<Workspace, Diagnostic> {
    let mut ws: Option<Workspace> = None;
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("");
        let mut cur = Cursor { text: line, pos: 0, line: i + 1 };
        if cur.at_end() {
            continue;
        }
        let (kw, at) = cur.ident()?;
        if kw == "field" {
            if ws.is_some() {
                return cur.syntax(at, "the field is declared twice");
            }
            let rest = line[cur.pos..].trim();
            let field: Field = rest.parse().map_err(|e: PolyError| cur.diag(cur.pos + 1, DiagnosticKind::Syntax(e.to_string())))?;
            ws = Some(Workspace::empty(field));
            continue;
        }
        let Some(w) = ws.as_mut() else {
            return cur.syntax(at, "the first statement must be `field QQ` or `field Fp:<p>`");
        };
        let (name, name_at) = cur.ident()?;
        if w.statements.iter().any(|s| s.name() == name) {
            return Err(cur.diag(name_at, DiagnosticKind::Duplicate(name)));
        }
        let stmt = match kw.as_str() {
            "scheme" => {
                cur.expect("=")?;
                let (def, scheme) = parse_scheme(&mut cur, w, cfg)?;
                w.schemes.push((name.clone(), scheme));
                Statement::Scheme(name, def)
            }
            "corr" => {
                let (def, corr) = parse_corr(&mut cur, w, cfg)?;
                w.corrs.push((name.clone(), corr));
                Statement::Corr(name, def)
            }
            "request" => {
                cur.expect("=")?;
                let start = cur.pos;
                let args = shlex::split(&line[start..]).ok_or_else(|| cur.diag(start, DiagnosticKind::Syntax("unbalanced quotes".into())))?;
                if args.is_empty() {
                    return cur.syntax(start, "empty request");
                }
                crate::cli::check_request(&args).map_err(|e| cur.diag(start, DiagnosticKind::Invalid(e)))?;
                cur.pos = line.len();
                Statement::Request(name, args)
            }
            other => return cur.syntax(at, format!("unknown statement `{other}`")),
        };
        if !cur.at_end() {
            return cur.syntax(cur.pos, "unexpected trailing text");
        }
        w.statements.push(stmt);
    }
    ws.ok_or(Diagnostic { line: 1, column: 1, kind: DiagnosticKind::Syntax("empty document: missing `field`".into()) })
}

fn invalid(cur: &Cursor, at: usize, e: impl ToString) -> Diagnostic {
    cur.diag(at, DiagnosticKind::Invalid(e.to_string()))
}

fn lookup_scheme<'w>(cur: &Cursor, w: &'w Workspace, (name, at): &Item) -> Result<&'w AffineScheme, Diagnostic> {
    w.scheme(name).ok_or_else(|| cur.diag(*at, DiagnosticKind::Unresolved(name.clone())))
}

fn lookup_corr<'w>(cur: &Cursor, w: &'w Workspace, (name, at): &Item) -> Result<&'w Correspondence, Diagnostic> {
    w.corr(name).ok_or_else(|| cur.diag(*at, DiagnosticKind::Unresolved(name.clone())))
}

/// Parses each item as a polynomial of `ring`, returning canonical text.
fn polys(cur: &Cursor, ring: &RingRef, items: &[Item]) -> Result<Vec<Poly>, Diagnostic> {
    items
        .iter()
        .map(|(s, at)| {
            Poly::parse(ring, s).map_err(|e| match e {
                PolyError::Parse { pos, msg } => cur.diag(at + pos, DiagnosticKind::Syntax(msg)),
                PolyError::UnknownVariable(v) => cur.diag(*at, DiagnosticKind::Unresolved(v)),
                other => invalid(cur, *at, other),
            })
        })
        .collect()
}

fn one_name(cur: &mut Cursor) -> Result<Item, Diagnostic> {
    let at = cur.pos;
    let items = cur.names()?;
    match <[Item; 1]>::try_from(items) {
        Ok([x]) => Ok(x),
        Err(_) => cur.syntax(at, "expected exactly one name"),
    }
}

fn two_names(cur: &mut Cursor) -> Result<(Item, Item), Diagnostic> {
    let at = cur.pos;
    let items = cur.names()?;
    match <[Item; 2]>::try_from(items) {
        Ok([a, b]) => Ok((a, b)),
        Err(_) => cur.syntax(at, "expected exactly two names"),
    }
}

fn parse_scheme(cur: &mut Cursor, w: &Workspace, cfg: &GbConfig) -> Result<(SchemeDef, AffineScheme), Diagnostic> {
    let (kw, at) = cur.ident()?;
    let field = w.field;
    match kw.as_str() {
        "point" => Ok((SchemeDef::Point, AffineScheme::point(field))),
        "line" | "gm" => {
            let (v, vat) = one_name(cur)?;
            let s = if kw == "line" { AffineScheme::affine_line(field, &v) } else { AffineScheme::gm(field, &v) };
            let s = s.map_err(|e| invalid(cur, vat, e))?;
            Ok((if kw == "line" { SchemeDef::Line(v) } else { SchemeDef::Gm(v) }, s))
        }
        "ring" => {
            let vars = cur.names()?;
            let mut clauses = cur.clauses(&["invert", "relations"])?;
            let inverted = take(&mut clauses, "invert");
            for (v, vat) in &inverted {
                if !vars.iter().any(|(x, _)| x == v) {
                    return Err(cur.diag(*vat, DiagnosticKind::Unresolved(v.clone())));
                }
            }
            let vs = VariableSet::new(&strings(&vars), &strings(&inverted)).map_err(|e| invalid(cur, at, e))?;
            let ring = Ring::new(field, vs);
            let rels = polys(cur, &ring, &take(&mut clauses, "relations"))?;
            let texts = rels.iter().map(|p| p.to_string()).collect();
            let s = AffineScheme::new(&ring, rels, cfg).map_err(|e| invalid(cur, at, e))?;
            Ok((SchemeDef::Ring { vars: strings(&vars), inverted: strings(&inverted), relations: texts }, s))
        }
        "product" => {
            let (a, b) = two_names(cur)?;
            let s = lookup_scheme(cur, w, &a)?.product(lookup_scheme(cur, w, &b)?).map_err(|e| invalid(cur, at, e))?;
            Ok((SchemeDef::Product(a.0, b.0), s))
        }
        other => cur.syntax(at, format!("unknown scheme form `{other}` (expected point, line, gm, ring or product)")),
    }
}

fn parse_corr(cur: &mut Cursor, w: &Workspace, cfg: &GbConfig) -> Result<(CorrDef, Correspondence), Diagnostic> {
    if cur.eat(":") {
        let src = cur.ident()?;
        cur.expect("->")?;
        let tgt = cur.ident()?;
        cur.expect("=")?;
        let (kw, at) = cur.ident()?;
        if kw != "span" {
            return cur.syntax(at, "expected `span(...)`");
        }
        cur.expect("(")?;
        let mut clauses = cur.clauses(&["fiber", "invert", "relations", "map"])?;
        cur.expect(")")?;
        let source = lookup_scheme(cur, w, &src)?.clone();
        let target = lookup_scheme(cur, w, &tgt)?.clone();
        let fiber = take(&mut clauses, "fiber");
        for (v, vat) in &fiber {
            if !flatcor::poly::is_identifier(v) {
                return cur.syntax(*vat, format!("`{v}` is not a name"));
            }
        }
        let inverted = take(&mut clauses, "invert");
        for (v, vat) in &inverted {
            if !fiber.iter().any(|(x, _)| x == v) {
                return Err(cur.diag(*vat, DiagnosticKind::Unresolved(v.clone())));
            }
        }
        let fvs = VariableSet::new(&strings(&fiber), &strings(&inverted)).map_err(|e| invalid(cur, at, e))?;
        let vars = source.ring().vars.concat(&fvs).map_err(|e| invalid(cur, at, e))?;
        let ring = Ring::new(w.field, vars);
        let rels = polys(cur, &ring, &take(&mut clauses, "relations"))?;
        let map = polys(cur, &ring, &take(&mut clauses, "map"))?;
        let def = CorrDef::Span {
            source: src.0,
            target: tgt.0,
            fiber: strings(&fiber),
            inverted: strings(&inverted),
            relations: rels.iter().map(|p| p.to_string()).collect(),
            map: map.iter().map(|p| p.to_string()).collect(),
        };
        let c = Correspondence::new(source, target, &ring, rels, map, cfg).map_err(|e| invalid(cur, at, e))?;
        return Ok((def, c));
    }
    cur.expect("=")?;
    let (kw, at) = cur.ident()?;
    if kw == "identity" {
        let x = one_name(cur)?;
        let c = Correspondence::identity(lookup_scheme(cur, w, &x)?);
        return Ok((CorrDef::Identity(x.0), c));
    }
    let (a, b) = match kw.as_str() {
        "compose" | "add" | "tensor" => two_names(cur)?,
        other => return cur.syntax(at, format!("unknown correspondence form `{other}`")),
    };
    let (ca, cb) = (lookup_corr(cur, w, &a)?, lookup_corr(cur, w, &b)?);
    let (def, c) = match kw.as_str() {
        "compose" => (CorrDef::Compose(a.0, b.0), compose(ca, cb, cfg)),
        "add" => (CorrDef::Add(a.0, b.0), add(ca, cb, cfg)),
        _ => (CorrDef::Tensor(a.0, b.0), external_tensor(ca, cb, cfg)),
    };
    Ok((def, c.map_err(|e| invalid(cur, at, e))?))
}
