use std::path::{Path, PathBuf};
use std::process::Command;

use flatcor::GbConfig;
use flatcor_cli::report::{load_reports, Report, Verdict};
use flatcor_cli::run_cli;
use flatcor_cli::workspace::{parse_workspace, DiagnosticKind};
use serde_json::Value;

fn workspaces() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../workspaces")
}

fn golden() -> Vec<PathBuf> {
    let mut v: Vec<PathBuf> = std::fs::read_dir(workspaces())
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e == "flat"))
        .collect();
    v.sort();
    v
}

fn args(xs: &[&str]) -> Vec<String> {
    xs.iter().map(|s| s.to_string()).collect()
}

fn ws(name: &str) -> String {
    workspaces().join(name).to_string_lossy().into_owned()
}

fn structured(doc: &str) -> Vec<Report> {
    let out = run_cli(&args(&["run", "-w", &ws(doc), "--format", "structured"]));
    assert!(out.stderr.is_empty(), "{}", out.stderr);
    load_reports(&out.stdout).unwrap()
}

#[test]
fn golden_documents_round_trip_byte_for_byte() {
    let docs = golden();
    assert!(docs.len() >= 5);
    for p in docs {
        let text = std::fs::read_to_string(&p).unwrap();
        let w = parse_workspace(&text, &GbConfig::default()).unwrap();
        assert_eq!(w.print(), text, "{}", p.display());
        let again = parse_workspace(&w.print(), &GbConfig::default()).unwrap();
        assert_eq!(again.print(), text);
        let out = run_cli(&args(&["print", "-w", &p.to_string_lossy()]));
        assert_eq!((out.code, out.stdout.as_str()), (0, text.as_str()));
    }
}

#[test]
fn comments_and_spacing_are_not_canonical() {
    let text = "# a comment\nfield   QQ\n\nscheme G=gm(t)   # trailing\ncorr sq:G->G=span(map(t*t, t_inv^2))\nrequest d = degree --corr 'sq'\n";
    let w = parse_workspace(text, &GbConfig::default()).unwrap();
    let canon = "field QQ\nscheme G = gm(t)\ncorr sq : G -> G = span(map(t^2, t_inv^2))\nrequest d = degree --corr sq\n";
    assert_eq!(w.print(), canon);
    assert_eq!(parse_workspace(canon, &GbConfig::default()).unwrap().print(), canon);
}

#[test]
fn minimal_document_has_one_scheme() {
    let w = parse_workspace("field QQ\nscheme G = gm(t)\n", &GbConfig::default()).unwrap();
    assert_eq!(w.statements.len(), 1);
    assert_eq!(w.scheme("G").unwrap().ring().nvars(), 2);
}

#[test]
fn diagnostics_carry_line_and_column() {
    let cfg = GbConfig::default();
    let d = parse_workspace("field QQ\nscheme G = gm(t)\ncorr a = identity(H)\n", &cfg).unwrap_err();
    assert_eq!((d.line, d.column), (3, 19));
    assert_eq!(d.kind, DiagnosticKind::Unresolved("H".into()));
    assert!(d.to_string().contains("`H`"));

    let d = parse_workspace("field QQ\nscheme G = gm(t)\nscheme G = point\n", &cfg).unwrap_err();
    assert_eq!((d.line, d.kind), (3, DiagnosticKind::Duplicate("G".into())));

    let d = parse_workspace("scheme G = gm(t)\n", &cfg).unwrap_err();
    assert!(matches!(d.kind, DiagnosticKind::Syntax(_)) && d.line == 1);

    let d = parse_workspace("field QQ\nscheme G = gm(t\n", &cfg).unwrap_err();
    assert!(matches!(d.kind, DiagnosticKind::Syntax(_)) && d.line == 2);

    // a map that is not a homomorphism: t_inv must go to the inverse of t's image
    let d = parse_workspace("field QQ\nscheme G = gm(t)\ncorr f : G -> G = span(map(t^2, t_inv))\n", &cfg).unwrap_err();
    assert!(matches!(d.kind, DiagnosticKind::Invalid(_)) && d.line == 3, "{d}");

    let d = parse_workspace("field QQ\nrequest r = frobnicate --corr x\n", &cfg).unwrap_err();
    assert!(matches!(d.kind, DiagnosticKind::Invalid(_)));
    let d = parse_workspace("field QQ\nrequest r = run\n", &cfg).unwrap_err();
    assert!(matches!(d.kind, DiagnosticKind::Invalid(_)));
}

#[test]
fn syntax_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("bad.flat");
    std::fs::write(&p, "field QQ\ncorr a = identity(nowhere)\n").unwrap();
    let out = run_cli(&args(&["run", "-w", &p.to_string_lossy()]));
    assert_eq!(out.code, 2);
    assert!(out.stderr.contains("line 2") && out.stderr.contains("nowhere"), "{}", out.stderr);
}

#[test]
fn field_flag_must_agree_with_the_document() {
    let out = run_cli(&args(&["print", "-w", &ws("lemma35_n3.flat"), "--field", "Fp:5"]));
    assert_eq!(out.code, 2);
    let out = run_cli(&args(&["print", "-w", &ws("lemma35_n3.flat"), "--field", "QQ"]));
    assert_eq!(out.code, 0);
    let out = run_cli(&args(&["verify-lemma-35", "--n", "2", "--field", "Fp:4"]));
    assert_eq!(out.code, 2, "F_4 is not a prime field");
}

#[test]
fn lemma_report_has_five_sub_certificates() {
    let out = run_cli(&args(&["verify-lemma-35", "--n", "3", "--format", "structured"]));
    assert_eq!(out.code, 0, "{}", out.stdout);
    let r = &load_reports(&out.stdout).unwrap()[0];
    let lemma = r.lemma.as_ref().unwrap();
    assert_eq!(lemma.checks.len(), 5);
    assert!(lemma.checks.iter().all(|c| c.passed));
    assert_eq!(r.verdict, Verdict::Pass);
}

#[test]
fn bound_report_has_the_valuation_table() {
    let reports = structured("flatness_bounds.flat");
    let twisted = reports.iter().find(|r| r.name.as_deref() == Some("twisted")).unwrap();
    assert_eq!(twisted.details["bound"], 2);
    assert_eq!(twisted.details["valuations"], serde_json::json!([[[-2]]]));
    let constant = reports.iter().find(|r| r.name.as_deref() == Some("constant")).unwrap();
    assert_eq!(constant.details["bound"], 0);
}

#[test]
fn not_finite_certification_fails_with_a_witness() {
    let r = &structured("not_finite.flat")[0];
    assert_eq!(r.verdict, Verdict::Fail);
    assert!(r.summary.contains("not finite"));
    assert_eq!(r.details["witness"]["not_finite_in"], "t");
}

#[test]
fn text_and_structured_verdicts_agree() {
    for p in golden() {
        let path = p.to_string_lossy().into_owned();
        let text = run_cli(&args(&["run", "-w", &path]));
        let json = run_cli(&args(&["run", "-w", &path, "--format", "structured"]));
        assert_eq!(text.code, json.code);
        let verdicts: Vec<String> =
            text.stdout.lines().filter_map(|l| l.strip_prefix("  verdict: ")).map(str::to_string).collect();
        let reports = load_reports(&json.stdout).unwrap();
        let expected: Vec<String> = reports.iter().map(|r| r.verdict.as_str().to_string()).collect();
        assert_eq!(verdicts, expected, "{path}");
        assert_eq!(json.code, Verdict::combine(reports.iter().map(|r| r.verdict)).exit_code());
    }
}

#[test]
fn structured_reports_follow_the_schema() {
    let schema: Value =
        serde_json::from_str(&std::fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("../../schema/report.schema.json")).unwrap())
            .unwrap();
    let validator = jsonschema::validator_for(&schema).unwrap();
    for p in golden() {
        let out = run_cli(&args(&["run", "-w", &p.to_string_lossy(), "--format", "structured", "--timing"]));
        let v: Value = serde_json::from_str(&out.stdout).unwrap();
        let errors: Vec<String> = validator.iter_errors(&v).map(|e| e.to_string()).collect();
        assert!(errors.is_empty(), "{}: {errors:?}", p.display());
    }
    let bad = serde_json::json!({ "schema": "flatcor-report/1", "verdict": "maybe" });
    assert!(!validator.is_valid(&bad));
}

#[test]
fn reports_are_deterministic_without_timing() {
    let a = run_cli(&args(&["run", "-w", &ws("span_calculus_f5.flat"), "--format", "structured"]));
    let b = run_cli(&args(&["run", "-w", &ws("span_calculus_f5.flat"), "--format", "structured"]));
    assert_eq!(a.stdout, b.stdout);
    assert!(!a.stdout.contains("timing_ms"));
    let c = run_cli(&args(&["run", "-w", &ws("span_calculus_f5.flat"), "--format", "structured", "--timing"]));
    assert!(c.stdout.contains("timing_ms"));
}

#[test]
fn digest_tracks_the_input() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("w.flat");
    std::fs::write(&p, "field QQ\nscheme G = gm(t)\ncorr id = identity(G)\n").unwrap();
    let d = |extra: &[&str]| {
        let mut a = args(&["degree", "--corr", "id", "-w", &p.to_string_lossy(), "--format", "structured"]);
        a.extend(args(extra));
        load_reports(&run_cli(&a).stdout).unwrap()[0].input_digest.clone()
    };
    let base = d(&[]);
    assert_eq!(base, d(&["--timing"]), "presentation flags do not enter the digest");
    assert_ne!(base, d(&["--budget", "5000"]));
    std::fs::write(&p, "field QQ\nscheme G = gm(s)\ncorr id = identity(G)\n").unwrap();
    assert_ne!(base, d(&[]));
}

#[test]
fn output_flag_writes_the_report() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("r.json");
    let out = run_cli(&args(&["run", "-w", &ws("lemma35_n3.flat"), "--format", "structured", "-o", &p.to_string_lossy()]));
    assert_eq!(out.code, 0);
    assert!(out.stdout.is_empty());
    assert_eq!(load_reports(&std::fs::read_to_string(&p).unwrap()).unwrap().len(), 1);
}

/// Writes structured reports of every golden document and rechecks them.
#[test]
fn recheck_revalidates_every_pass_report() {
    let dir = tempfile::tempdir().unwrap();
    let mut checked = 0;
    for p in golden() {
        let report = dir.path().join(p.file_name().unwrap()).with_extension("json");
        run_cli(&args(&["run", "-w", &p.to_string_lossy(), "--format", "structured", "-o", &report.to_string_lossy()]));
        let out = run_cli(&args(&["--recheck", &report.to_string_lossy()]));
        assert_eq!(out.code, 0, "{}: {}", p.display(), out.stdout);
        for r in load_reports(&std::fs::read_to_string(&report).unwrap()).unwrap() {
            if r.verdict == Verdict::Pass && (!r.certificates.is_empty() || r.lemma.is_some()) {
                checked += 1;
            }
        }
    }
    assert!(checked >= 10, "{checked}");
}

#[test]
fn recheck_rejects_tampered_reports() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("r.json");
    run_cli(&args(&["run", "-w", &ws("span_calculus_f5.flat"), "--format", "structured", "-o", &report.to_string_lossy()]));
    let mut v: Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    // claim rank 3 for the rank-2 sum
    v[1]["certificates"][0]["claim"]["rank"] = serde_json::json!(3);
    std::fs::write(&report, serde_json::to_string(&v).unwrap()).unwrap();
    let out = run_cli(&args(&["--recheck", &report.to_string_lossy()]));
    assert_eq!(out.code, 1);
    assert!(out.stdout.contains("deg_both: REJECTED"), "{}", out.stdout);

    std::fs::write(&report, "{ not json").unwrap();
    assert_eq!(run_cli(&args(&["--recheck", &report.to_string_lossy()])).code, 2);
}

fn binary(a: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_flatcor")).args(a).output().unwrap();
    (out.status.code().unwrap(), String::from_utf8_lossy(&out.stdout).into_owned())
}

#[test]
fn exit_codes_follow_the_verdict() {
    assert_eq!(binary(&["run", "-w", &ws("lemma35_n3.flat")]).0, 0);
    // forced failure: a non-finite span
    assert_eq!(binary(&["run", "-w", &ws("not_finite.flat")]).0, 1);
    // forced budget exhaustion
    let (code, text) = binary(&["run", "-w", &ws("lemma35_n3.flat"), "--budget", "5"]);
    assert_eq!(code, 3);
    assert!(text.contains("verdict: inconclusive") && text.contains("budget"), "{text}");
    // input errors
    assert_eq!(binary(&["degree", "--corr", "missing"]).0, 2);
    assert_eq!(binary(&["bound", "--corr"]).0, 2);
    assert_eq!(binary(&["run"]).0, 2);
    assert_eq!(binary(&["--help"]).0, 0);
}

#[test]
fn run_combines_verdicts_in_request_order() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("mixed.flat");
    std::fs::write(
        &p,
        "field QQ\nscheme P = point\nscheme A = line(x)\nscheme G = gm(t)\ncorr id = identity(G)\n\
         corr bad : A -> P = span(fiber(t) relations(x*t - 1) map())\n\
         request ok = degree --corr id\nrequest broken = certify --corr bad\nrequest lemma = verify-lemma-35 --n 2\n",
    )
    .unwrap();
    let out = run_cli(&args(&["run", "-w", &p.to_string_lossy(), "--format", "structured"]));
    let rs = load_reports(&out.stdout).unwrap();
    let names: Vec<_> = rs.iter().map(|r| r.name.clone().unwrap()).collect();
    assert_eq!(names, ["ok", "broken", "lemma"]);
    assert_eq!(rs.iter().map(|r| r.verdict).collect::<Vec<_>>(), [Verdict::Pass, Verdict::Fail, Verdict::Pass]);
    assert_eq!(out.code, 1);
}
