//! Verification reports and their re-validation.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

use flatcor::cancellation::LemmaReport;
use flatcor::claims::{recheck_lemma, FlfClaim};
use flatcor::GbConfig;

pub const SCHEMA: &str = "flatcor-report/1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Inconclusive,
    Error,
}

impl Verdict {
    pub fn exit_code(self) -> i32 {
        match self {
            Verdict::Pass => 0,
            Verdict::Fail => 1,
            Verdict::Error => 2,
            Verdict::Inconclusive => 3,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Inconclusive => "inconclusive",
            Verdict::Error => "error",
        }
    }

    /// Verdict of a batch: any error, else any fail, else any inconclusive.
    pub fn combine(vs: impl IntoIterator<Item = Verdict>) -> Verdict {
        let rank = |v: Verdict| match v {
            Verdict::Pass => 0,
            Verdict::Inconclusive => 1,
            Verdict::Fail => 2,
            Verdict::Error => 3,
        };
        vs.into_iter().max_by_key(|v| rank(*v)).unwrap_or(Verdict::Pass)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NamedClaim {
    pub label: String,
    pub claim: FlfClaim,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Report {
    pub schema: String,
    pub tool: String,
    pub command: String,
    pub request: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub field: String,
    pub input_digest: String,
    pub verdict: Verdict,
    pub summary: String,
    #[serde(default)]
    pub details: Value,
    #[serde(default)]
    pub certificates: Vec<NamedClaim>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lemma: Option<LemmaReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<f64>,
}

pub fn tool() -> String {
    format!("flatcor {}", env!("CARGO_PKG_VERSION"))
}

/// `sha256:<hex>` over the workspace bytes and the request.
pub fn digest(workspace: &[u8], request: &[String], field: &str) -> String {
    let mut h = Sha256::new();
    h.update(workspace);
    h.update([0u8]);
    h.update(field.as_bytes());
    for a in request {
        h.update([0u8]);
        h.update(a.as_bytes());
    }
    format!("sha256:{:x}", h.finalize())
}

impl Report {
    pub fn render_text(&self) -> String {
        let mut s = String::new();
        let head = match &self.name {
            Some(n) => format!("{n}: {}", self.request.join(" ")),
            None => self.request.join(" "),
        };
        let _ = writeln!(s, "{head}");
        let _ = writeln!(s, "  verdict: {}", self.verdict.as_str());
        let _ = writeln!(s, "  summary: {}", self.summary);
        if !self.details.is_null() {
            let pretty = serde_json::to_string_pretty(&self.details).unwrap_or_default();
            let _ = writeln!(s, "  details:");
            for line in pretty.lines() {
                let _ = writeln!(s, "    {line}");
            }
        }
        for c in &self.certificates {
            let _ = writeln!(s, "  certificate {}: rank {} on basis [{}]", c.label, c.claim.rank, c.claim.basis.join(", "));
        }
        if let Some(l) = &self.lemma {
            for c in &l.checks {
                let _ = writeln!(s, "  [{}] {}: {}", if c.passed { "ok" } else { "FAILED" }, c.name, c.detail);
            }
        }
        if let Some(t) = self.timing_ms {
            let _ = writeln!(s, "  time: {t:.1} ms");
        }
        let _ = writeln!(s, "  digest: {}", self.input_digest);
        s
    }
}

/// Re-validates the certificates of one report. Only pass reports are checked.
pub fn recheck_report(r: &Report, cfg: &GbConfig) -> Result<usize, String> {
    if r.schema != SCHEMA {
        return Err(format!("unknown report schema `{}`", r.schema));
    }
    if r.verdict != Verdict::Pass {
        return Ok(0);
    }
    let mut n = 0;
    for c in &r.certificates {
        c.claim.recheck(cfg).map_err(|e| format!("{}: {e}", c.label))?;
        n += 1;
    }
    if let Some(l) = &r.lemma {
        if !l.passed() {
            return Err("lemma report does not pass all five checks".into());
        }
        recheck_lemma(l, cfg).map_err(|e| e.to_string())?;
        n += l.checks.iter().filter(|c| c.certificate.is_some()).count();
    }
    Ok(n)
}

/// One report or an array of them.
pub fn load_reports(text: &str) -> Result<Vec<Report>, String> {
    let v: Value = serde_json::from_str(text).map_err(|e| format!("not JSON: {e}"))?;
    let list = match v {
        Value::Array(items) => items,
        other => vec![other],
    };
    list.into_iter().map(|r| serde_json::from_value(r).map_err(|e| format!("not a report: {e}"))).collect()
}
