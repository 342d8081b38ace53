use std::path::PathBuf;
use std::process::Command as Process;

use birkit::{run, CliError, Outcome};
use birkit_core::session::{read_session_file, AnySession, SessionFile};
use jsonschema::JSONSchema;
use serde_json::Value;

fn root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn fixture(name: &str) -> String {
    root().join("fixtures").join(name).display().to_string()
}

fn birkit(args: &[&str]) -> Outcome {
    let mut argv = vec!["birkit"];
    argv.extend_from_slice(args);
    run(&argv)
}

fn schema() -> JSONSchema {
    let text = std::fs::read_to_string(root().join("docs/report.schema.json")).unwrap();
    JSONSchema::compile(&serde_json::from_str(&text).unwrap()).unwrap()
}

fn assert_valid(schema: &JSONSchema, out: &Outcome) -> Value {
    let report = out
        .report()
        .unwrap_or_else(|| panic!("not JSON: {}", out.stdout));
    if let Err(errors) = schema.validate(&report) {
        let msgs: Vec<String> = errors
            .map(|e| format!("{} at {}", e, e.instance_path))
            .collect();
        panic!("report does not validate: {msgs:?}\n{}", out.stdout);
    }
    report
}

fn map_names(path: &str) -> Vec<String> {
    read_session_file(path.as_ref())
        .unwrap()
        .maps
        .keys()
        .cloned()
        .collect()
}

#[test]
fn conic_sigma1_is_birational_with_a_linear_inverse() {
    let out = birkit(&[
        "birational",
        "--session",
        &fixture("conic.json"),
        "--map",
        "sigma1",
    ]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    let r = out.report().unwrap();
    assert_eq!(r["result"]["birational"], "yes");
    assert_eq!(r["result"]["inverse_degree"], 1);
    assert!(out.stderr.is_empty());
}

#[test]
fn cusp_sigma2_is_not_in_bir_xd() {
    let out = birkit(&[
        "map-check",
        "--session",
        &fixture("cusp.json"),
        "--map",
        "sigma2",
    ]);
    assert_eq!(out.code, 0);
    let r = out.report().unwrap();
    assert_eq!(r["result"]["in_bir_xd"], false);
    assert_eq!(r["result"]["degree"], 2);
    assert_eq!(r["result"]["birational"]["verdict"], "yes");
    assert_ne!(r["result"]["clear_degree"]["verdict"], "yes");
}

#[test]
fn conic_hilbert_function_at_two() {
    let out = birkit(&["hf", "--session", &fixture("conic.json"), "--degree", "2"]);
    assert_eq!(out.code, 0);
    assert_eq!(out.report().unwrap()["result"]["value"], 5);
    let text = birkit(&[
        "hf",
        "--session",
        &fixture("conic.json"),
        "--degree",
        "2",
        "--text",
    ]);
    assert!(
        text.stdout.lines().any(|l| l == "value: 5"),
        "{}",
        text.stdout
    );
}

#[test]
fn every_fixture_map_gets_a_verdict() {
    let schema = schema();
    for f in ["conic.json", "cusp.json", "veronese.json", "p2.json"] {
        let path = fixture(f);
        for cmd in [
            &["gb"][..],
            &["dim"],
            &["hf"],
            &["mult"],
            &["hf", "--degree", "3"],
            &["edim", "--degree", "2"],
        ] {
            let mut args = cmd.to_vec();
            args.extend(["--session", &path]);
            let out = birkit(&args);
            assert_eq!(out.code, 0, "{f} {cmd:?}: {}", out.stderr);
            assert_valid(&schema, &out);
        }
        for name in map_names(&path) {
            for cmd in [
                "map-check",
                "birational",
                "grade2",
                "spread",
                "dim",
                "bound",
            ] {
                let out = birkit(&[cmd, "--session", &path, "--map", &name]);
                assert_eq!(out.code, 0, "{f} {name} {cmd}: {}", out.stderr);
                assert_valid(&schema, &out);
            }
        }
    }
}

#[test]
fn every_subcommand_reports_valid_json() {
    let schema = schema();
    let conic = fixture("conic.json");
    let runs: Vec<Vec<&str>> = vec![
        vec!["gb", "--order", "lex"],
        vec!["gb", "x^3"],
        vec!["nf", "y^2*z"],
        vec!["member", "y^3 - x*y*z"],
        vec!["dim", "x", "z"],
        vec!["hf"],
        vec!["mult"],
        vec!["pclass", "x", "z"],
        vec!["tau", "x", "z"],
        vec!["tau", "x", "z", "--degree", "2"],
        vec!["grade2", "x", "z"],
        vec!["spread", "--map", "sigma1"],
        vec!["map-check", "--map", "sigma1_linear"],
        vec!["invert", "--map", "sigma1"],
        vec!["birational", "--map", "double_cover"],
        vec!["coords", "--map", "sigma1"],
        vec!["bound", "--degree", "1"],
        vec!["suv", "--map", "sigma1_linear"],
        vec!["suv", "--map", "sigma1"],
        vec!["edim", "--degree", "1"],
        vec!["locus-eqs", "z1*z2", "--degree", "1"],
        vec!["vpz", "--degree", "3"],
        vec!["sample", "G_2", "--trials", "20"],
    ];
    for mut args in runs {
        args.extend(["--session", &conic]);
        let out = birkit(&args);
        assert_eq!(out.code, 0, "{args:?}: {}", out.stderr);
        let r = assert_valid(&schema, &out);
        assert_eq!(r["command"], args[0]);
        assert_eq!(r["schema_version"], birkit::SCHEMA_VERSION);
    }
}

#[test]
fn failing_reports_also_validate() {
    let schema = schema();
    let conic = fixture("conic.json");
    let veronese = fixture("veronese.json");
    let runs: Vec<(Vec<&str>, i32)> = vec![
        (vec!["gb", "--session", "/nonexistent/session.json"], 1),
        (vec!["nf", "x +* y", "--session", &conic], 1),
        (
            vec!["birational", "--map", "missing", "--session", &conic],
            1,
        ),
        (vec!["invert", "--session", &conic], 1),
        (vec!["tau", "--map", "sigma1", "--session", &conic], 1),
        (vec!["gb", "--max-pairs", "1", "--session", &veronese], 2),
        (vec!["gb", "--max-degree", "1", "--session", &conic], 2),
        (vec!["sample", "Q_7", "--session", &conic], 1),
        (
            vec!["sample", "C_2", "--trials", "0", "--session", &conic],
            1,
        ),
    ];
    for (args, code) in runs {
        let out = birkit(&args);
        assert_eq!(out.code, code, "{args:?}: {}", out.stdout);
        let r = assert_valid(&schema, &out);
        assert!(r["result"].is_null());
        assert!(
            out.stderr.starts_with("error: "),
            "{args:?}: {}",
            out.stderr
        );
        assert_eq!(r["limits_hit"], code == 2);
    }
}

#[test]
fn exit_codes_follow_the_error_class() {
    assert_eq!(CliError::Input(String::new()).exit_code(), 1);
    assert_eq!(CliError::Limit(String::new()).exit_code(), 2);
    assert_eq!(CliError::Internal(String::new()).exit_code(), 3);
    assert_eq!(birkit(&["frobnicate"]).code, 1);
    assert_eq!(birkit(&["gb", "--json", "--text"]).code, 1);
    assert_eq!(birkit(&["--help"]).code, 0);
}

#[test]
fn keys_are_sorted_and_stable() {
    let args = [
        "map-check",
        "--session",
        &fixture("conic.json"),
        "--map",
        "sigma1_linear",
    ];
    let a = birkit(&args).stdout;
    let b = birkit(&args).stdout;
    let strip = |s: &str| {
        s.lines()
            .filter(|l| !l.contains("total_ms"))
            .collect::<Vec<_>>()
            .join("\n")
    };
    assert_eq!(strip(&a), strip(&b));
    let top: Vec<&str> = a
        .lines()
        .filter(|l| l.starts_with("  \"") && !l.starts_with("   "))
        .map(|l| l.trim().split('"').nth(1).unwrap())
        .collect();
    let mut sorted = top.clone();
    sorted.sort();
    assert_eq!(top, sorted);
}

#[test]
fn inputs_digest_matches_the_file() {
    use sha2::{Digest, Sha256};
    let path = fixture("cusp.json");
    let r = birkit(&["mult", "--session", &path]).report().unwrap();
    let expected = format!("{:x}", Sha256::digest(std::fs::read(&path).unwrap()));
    assert_eq!(r["inputs"]["sha256"], expected);
    assert_eq!(r["result"]["multiplicity"], 3);
}

#[test]
fn session_round_trip_preserves_the_analysis() {
    let dir = tempfile::tempdir().unwrap();
    for f in ["conic.json", "cusp.json", "veronese.json", "p2.json"] {
        let file = read_session_file(fixture(f).as_ref()).unwrap();
        let built = file.build(file.limits()).unwrap();
        let rewritten = dir.path().join(f);
        std::fs::write(&rewritten, built.to_file().to_json()).unwrap();
        let again = read_session_file(&rewritten).unwrap();
        let rebuilt = again.build(again.limits()).unwrap();
        match (&built, &rebuilt) {
            (AnySession::Rationals(a), AnySession::Rationals(b)) => {
                assert_eq!(
                    a.variety.ideal().generators(),
                    b.variety.ideal().generators()
                );
                assert_eq!(a.variety.gb().elements(), b.variety.gb().elements());
                assert_eq!(a.maps.len(), b.maps.len());
                for (x, y) in a.maps.iter().zip(&b.maps) {
                    assert_eq!(x.name, y.name);
                    assert_eq!(x.map.forms(), y.map.forms());
                    assert_eq!(
                        x.inverse.as_ref().map(|g| g.forms()),
                        y.inverse.as_ref().map(|g| g.forms())
                    );
                }
            }
            _ => panic!("{f}: field changed"),
        }
        assert_eq!(rebuilt.to_file(), built.to_file());
        let before = birkit(&["gb", "--session", &fixture(f)]).report().unwrap();
        let after = birkit(&["gb", "--session", rewritten.to_str().unwrap()])
            .report()
            .unwrap();
        assert_eq!(before["result"], after["result"]);
    }
}

fn write_session(dir: &tempfile::TempDir, name: &str, text: &str) -> String {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p.display().to_string()
}

const FLIP: &str = r#"{
  "field": "rationals",
  "vars": ["x", "y", "z"],
  "ideal": ["y^2 - x*z"],
  "maps": {"flip": {"degree": 2, "forms": ["x + y^2", "y^2", "x*z"]}}
}"#;

#[test]
fn inhomogeneous_form_is_rejected_by_name() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_session(&dir, "bad.json", FLIP);
    let out = birkit(&["dim", "--session", &path]);
    assert_eq!(out.code, 1);
    assert!(out.stderr.contains("maps.flip.forms[0]"), "{}", out.stderr);
    assert!(out.stderr.contains("not homogeneous"), "{}", out.stderr);
}

#[test]
fn schema_errors_name_the_field() {
    let dir = tempfile::tempdir().unwrap();
    let bad_field = write_session(
        &dir,
        "a.json",
        &FLIP.replace(r#""rationals""#, r#""reals""#),
    );
    let out = birkit(&["dim", "--session", &bad_field]);
    assert_eq!(out.code, 1);
    assert!(out.stderr.contains("`field`"), "{}", out.stderr);
    let unknown = write_session(&dir, "b.json", &FLIP.replace(r#""vars""#, r#""variables""#));
    assert_eq!(birkit(&["dim", "--session", &unknown]).code, 1);
    let not_json = write_session(&dir, "c.json", "{ not json");
    assert_eq!(birkit(&["dim", "--session", &not_json]).code, 1);
    let prime = write_session(
        &dir,
        "d.json",
        &FLIP.replace(r#""rationals""#, r#"{"prime_field": 100}"#),
    );
    let out = birkit(&["dim", "--session", &prime]);
    assert_eq!(out.code, 1);
    assert!(out.stderr.contains("`field`"), "{}", out.stderr);
}

#[test]
fn prime_field_sessions_run() {
    let dir = tempfile::tempdir().unwrap();
    let text = std::fs::read_to_string(fixture("conic.json"))
        .unwrap()
        .replace(r#""rationals""#, r#"{"prime_field": 32003}"#);
    let path = write_session(&dir, "conic_p.json", &text);
    let out = birkit(&["birational", "--session", &path, "--map", "sigma1"]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    assert_eq!(out.report().unwrap()["inputs"]["field"], "GF(32003)");
    assert_eq!(out.report().unwrap()["result"]["inverse_degree"], 1);
}

#[test]
fn pair_limit_precedence() {
    let exe = env!("CARGO_BIN_EXE_birkit");
    let veronese = fixture("veronese.json");
    let status = |env: Option<&str>, flag: Option<&str>| {
        let mut cmd = Process::new(exe);
        cmd.args(["gb", "--session", &veronese]);
        if let Some(f) = flag {
            cmd.args(["--max-pairs", f]);
        }
        cmd.env_remove(birkit::MAX_PAIRS_ENV);
        if let Some(e) = env {
            cmd.env(birkit::MAX_PAIRS_ENV, e);
        }
        let out = cmd.output().unwrap();
        let report: Value = serde_json::from_slice(&out.stdout).unwrap();
        (
            out.status.code().unwrap(),
            report["limits"]["max_pairs"].clone(),
        )
    };
    assert_eq!(status(None, None), (0, Value::from(200_000)));
    assert_eq!(status(Some("1"), None), (2, Value::from(1)));
    assert_eq!(status(Some("1"), Some("5000")), (0, Value::from(5000)));
    assert_eq!(status(Some("lots"), None).0, 1);
}

#[test]
fn sample_text_mode_is_csv() {
    let out = birkit(&[
        "sample",
        "N_3",
        "--session",
        &fixture("conic.json"),
        "--trials",
        "40",
        "--seed",
        "9",
        "--text",
    ]);
    assert_eq!(out.code, 0);
    let lines: Vec<&str> = out.stdout.lines().collect();
    assert_eq!(lines[1], "locus,prime,trials,hits,seed");
    let cols: Vec<&str> = lines[2].split(',').collect();
    assert_eq!(cols[0], "N_3");
    assert_eq!(cols[1], "101");
    assert_eq!(cols[2], "40");
    assert_eq!(cols[4], "9");
}

#[test]
fn sample_ignores_job_count() {
    let conic = fixture("conic.json");
    let hits = |jobs: &str| {
        birkit(&[
            "sample",
            "G_2",
            "--session",
            &conic,
            "--trials",
            "64",
            "--seed",
            "3",
            "--jobs",
            jobs,
        ])
        .report()
        .unwrap()["result"]["hits"]
            .clone()
    };
    assert_eq!(hits("1"), hits("4"));
}

#[test]
fn invert_finds_and_checks_inverses() {
    let r = birkit(&[
        "invert",
        "--session",
        &fixture("veronese.json"),
        "--map",
        "phi",
    ])
    .report()
    .unwrap();
    assert_eq!(r["result"]["found"], true);
    assert_eq!(r["result"]["inverse_degree"], 3);
    assert_eq!(r["result"]["verified"], true);
    assert_eq!(r["result"]["stored_inverse_verified"], true);
    let r = birkit(&[
        "invert",
        "--session",
        &fixture("p2.json"),
        "--map",
        "squares",
        "--cap",
        "3",
    ])
    .report()
    .unwrap();
    assert_eq!(r["result"]["found"], false);
    assert_eq!(r["result"]["cap"], 3);
}

#[test]
fn locus_equations_from_the_command_line() {
    let r = birkit(&[
        "locus-eqs",
        "z1",
        "--session",
        &fixture("conic.json"),
        "--degree",
        "2",
    ])
    .report()
    .unwrap();
    let eqs: Vec<&str> = r["result"]["equations"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_str().unwrap())
        .collect();
    assert_eq!(eqs.len(), 5);
    assert!(eqs.contains(&"a1_3 + a1_4"), "{eqs:?}");
}

#[test]
fn tau_reports_rank_and_sweep() {
    let conic = fixture("conic.json");
    let r = birkit(&["tau", "x", "z", "--session", &conic])
        .report()
        .unwrap();
    assert_eq!(r["result"]["surjective"], true);
    let r = birkit(&["tau", "x", "y", "--session", &conic, "--degree", "2"])
        .report()
        .unwrap();
    assert_eq!(r["result"]["surjective"], false);
    assert!(r["result"]["rank"].as_u64().unwrap() < r["result"]["rows"].as_u64().unwrap());
}

#[test]
fn parsed_session_matches_the_library() {
    let file = SessionFile::from_json(&std::fs::read_to_string(fixture("veronese.json")).unwrap())
        .unwrap();
    let AnySession::Rationals(s) = file.build(file.limits()).unwrap() else {
        panic!("rationals expected");
    };
    assert_eq!(s.variety.nvars(), 5);
    assert_eq!(s.variety.dim(), 3);
    let r = birkit(&["dim", "--session", &fixture("veronese.json")])
        .report()
        .unwrap();
    assert_eq!(r["result"]["dim"], 3);
    assert_eq!(r["result"]["projective_dim"], 2);
}
