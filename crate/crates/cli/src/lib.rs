//! The `flatcor` batch verifier: workspace documents, requests and reports.

pub mod cli;
pub mod report;
pub mod run;
pub mod workspace;

use std::path::Path;
use std::time::Instant;

use clap::error::ErrorKind;
use clap::Parser;

use flatcor::{Field, GbConfig};

use cli::{Cli, Command, Format};
use report::{digest, load_reports, recheck_report, tool, Report, Verdict, SCHEMA};
use run::{execute, Env};
use workspace::{parse_workspace, Workspace};

/// What a run printed and how it exits.
#[derive(Debug, Default)]
pub struct Output {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Output {
    fn error(msg: impl std::fmt::Display) -> Self {
        Output { code: 2, stdout: String::new(), stderr: format!("error: {msg}\n") }
    }
}

/// Global flags that do not change what is computed; kept out of digests.
const PRESENTATION_FLAGS: [&str; 4] = ["--workspace", "-w", "--output", "-o"];
const PRESENTATION_SWITCHES: [&str; 1] = ["--timing"];

fn request_args(args: &[String]) -> Vec<String> {
    let mut out = Vec::new();
    let mut it = args.iter();
    while let Some(a) = it.next() {
        if PRESENTATION_FLAGS.contains(&a.as_str()) || a == "--format" {
            it.next();
        } else if PRESENTATION_SWITCHES.contains(&a.as_str())
            || PRESENTATION_FLAGS.iter().chain(["--format"].iter()).any(|f| a.starts_with(&format!("{f}=")))
        {
        } else {
            out.push(a.clone());
        }
    }
    out
}

/// Runs the tool on `args` (without the program name). Files named by
/// `--output` are written; everything else is returned.
pub fn run_cli(args: &[String]) -> Output {
    let cli = match Cli::try_parse_from(std::iter::once("flatcor".to_string()).chain(args.iter().cloned())) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => Output { code: 0, stdout: text, stderr: String::new() },
                _ => Output { code: 2, stdout: String::new(), stderr: text },
            };
        }
    };
    let cfg = GbConfig { max_steps: cli.budget, ..GbConfig::default() };

    let mut out = match dispatch(&cli, args, &cfg) {
        Ok(o) => o,
        Err(o) => return o,
    };
    if let Some(path) = &cli.output {
        if let Err(e) = std::fs::write(path, &out.stdout) {
            return Output::error(format!("cannot write {}: {e}", path.display()));
        }
        out.stdout.clear();
    }
    out
}

fn load_workspace(cli: &Cli, cfg: &GbConfig) -> Result<(Workspace, Vec<u8>), Output> {
    let flag_field = match &cli.field {
        Some(f) => Some(f.parse::<Field>().map_err(|e| Output::error(format!("--field: {e}")))?),
        None => None,
    };
    let Some(path) = &cli.workspace else {
        return Ok((Workspace::empty(flag_field.unwrap_or(Field::Rationals)), Vec::new()));
    };
    let bytes = std::fs::read(path).map_err(|e| Output::error(format!("cannot read {}: {e}", path.display())))?;
    let text = String::from_utf8(bytes.clone()).map_err(|_| Output::error(format!("{} is not UTF-8", path.display())))?;
    let ws = parse_workspace(&text, cfg).map_err(|d| Output::error(format!("{}:{d}", path.display())))?;
    if let Some(f) = flag_field {
        if f != ws.field {
            return Err(Output::error(format!("--field {f} disagrees with the workspace field {}", ws.field)));
        }
    }
    Ok((ws, bytes))
}

fn dispatch(cli: &Cli, args: &[String], cfg: &GbConfig) -> Result<Output, Output> {
    if let Some(path) = &cli.recheck {
        if cli.command.is_some() {
            return Err(Output::error("--recheck cannot be combined with a command"));
        }
        return Ok(recheck(path, cfg));
    }
    let Some(cmd) = &cli.command else {
        return Err(Output::error("no command given (try --help)"));
    };
    let (ws, bytes) = load_workspace(cli, cfg)?;
    let env = Env { ws: &ws, cfg: cfg.clone(), window: cli.window };
    let reports: Vec<Report> = match cmd {
        Command::Print => {
            if cli.workspace.is_none() {
                return Err(Output::error("`print` needs --workspace"));
            }
            return Ok(Output { code: 0, stdout: ws.print(), stderr: String::new() });
        }
        Command::Run => {
            if cli.workspace.is_none() {
                return Err(Output::error("`run` needs --workspace"));
            }
            ws.requests()
                .map(|(name, req)| {
                    let req = req.to_vec();
                    let mut reqfull = req.clone();
                    if cli.window != 8 {
                        reqfull.push(format!("--window={}", cli.window));
                    }
                    match cli::parse_request(&req) {
                        Ok(c) => make_report(&c, Some(name), req, &reqfull, &env, &bytes, cli.timing),
                        Err(e) => error_report(Some(name), req, &env, &bytes, e),
                    }
                })
                .collect()
        }
        c => {
            let req = request_args(args);
            vec![make_report(c, None, req.clone(), &req, &env, &bytes, cli.timing)]
        }
    };
    let code = Verdict::combine(reports.iter().map(|r| r.verdict)).exit_code();
    let stdout = match cli.format {
        Format::Text => reports.iter().map(Report::render_text).collect::<Vec<_>>().join("\n"),
        Format::Structured => {
            let v = if matches!(cmd, Command::Run) {
                serde_json::to_string_pretty(&reports)
            } else {
                serde_json::to_string_pretty(&reports[0])
            };
            v.map_err(|e| Output::error(format!("serialization failed: {e}")))? + "\n"
        }
    };
    Ok(Output { code, stdout, stderr: String::new() })
}

fn make_report(
    cmd: &Command,
    name: Option<&str>,
    request: Vec<String>,
    digest_request: &[String],
    env: &Env,
    bytes: &[u8],
    timing: bool,
) -> Report {
    let start = Instant::now();
    let o = execute(cmd, env);
    let field = env.ws.field.to_string();
    Report {
        schema: SCHEMA.into(),
        tool: tool(),
        command: cmd.name().into(),
        input_digest: digest(bytes, digest_request, &field),
        request,
        name: name.map(str::to_string),
        field,
        verdict: o.verdict,
        summary: o.summary,
        details: o.details,
        certificates: o.certificates,
        lemma: o.lemma,
        timing_ms: timing.then(|| start.elapsed().as_secs_f64() * 1e3),
    }
}

fn error_report(name: Option<&str>, request: Vec<String>, env: &Env, bytes: &[u8], msg: String) -> Report {
    let field = env.ws.field.to_string();
    Report {
        schema: SCHEMA.into(),
        tool: tool(),
        command: request.first().cloned().unwrap_or_default(),
        input_digest: digest(bytes, &request, &field),
        request,
        name: name.map(str::to_string),
        field,
        verdict: Verdict::Error,
        summary: msg,
        details: serde_json::Value::Null,
        certificates: Vec::new(),
        lemma: None,
        timing_ms: None,
    }
}

fn recheck(path: &Path, cfg: &GbConfig) -> Output {
    let text = match std::fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) => return Output::error(format!("cannot read {}: {e}", path.display())),
    };
    let reports = match load_reports(&text) {
        Ok(r) => r,
        Err(e) => return Output::error(e),
    };
    let mut stdout = String::new();
    let mut code = 0;
    for (i, r) in reports.iter().enumerate() {
        let label = r.name.clone().unwrap_or_else(|| format!("report {i}"));
        match recheck_report(r, cfg) {
            Ok(n) => stdout.push_str(&format!("{label}: {n} certificate(s) valid\n")),
            Err(e) => {
                stdout.push_str(&format!("{label}: REJECTED: {e}\n"));
                code = 1;
            }
        }
    }
    Output { code, stdout, stderr: String::new() }
}
