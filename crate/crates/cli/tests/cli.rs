use std::path::PathBuf;
use std::process::{Command, Output};

use weakhopf::groupoid::{groupoid_algebra, groupoid_dual, Groupoid};
use weakhopf::Q;
use weakhopf_cli::pipeline::{builtin, builtin_names};
use weakhopf_cli::spec::{Payload, SpecError, SpecFile};
use weakhopf_cli::{EXIT_FAIL, EXIT_INPUT, EXIT_PASS};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_weakhopf")).args(args).output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn scratch(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("weakhopf-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, contents).unwrap();
    p
}

#[test]
fn groupoid_with_dual_and_integrals_passes() {
    let o = run(&["groupoid", "builtin:groupoid:pair2", "--dual", "--integrals"]);
    assert_eq!(code(&o), EXIT_PASS, "{}", stdout(&o));
    assert!(stdout(&o).contains("summary:"));
}

#[test]
fn mutated_antipode_fails() {
    let o = run(&["verify-wha", "builtin:pair2-mutated-antipode"]);
    assert_eq!(code(&o), EXIT_FAIL);
    assert!(stdout(&o).contains("FAIL"));
}

#[test]
fn skewed_extension_fails_at_certification() {
    let o = run(&["--format", "machine", "tower", "builtin:skewed-q-in-m2", "--derive"]);
    assert_eq!(code(&o), EXIT_FAIL);
    let failed: Vec<String> = stdout(&o)
        .lines()
        .map(|l| serde_json::from_str::<serde_json::Value>(l).unwrap())
        .filter(|v| v["pass"] == false)
        .map(|v| v["name"].as_str().unwrap().to_string())
        .collect();
    assert!(failed.iter().any(|n| n == "symmetric-expectation"), "{failed:?}");
}

#[test]
fn matrix_algebra_in_characteristic_two_is_not_kanzaki() {
    assert_eq!(code(&run(&["algebra", "builtin:m2-over-q"])), EXIT_PASS);
    let o = run(&["algebra", "builtin:m2-over-f2"]);
    assert_eq!(code(&o), EXIT_FAIL);
    assert!(stdout(&o).lines().any(|l| l.contains("kanzaki") && l.contains("FAIL")), "{}", stdout(&o));
}

#[test]
fn derived_tower_with_composite_idempotents_passes() {
    let o = run(&["tower", "builtin:q-in-q2", "--derive", "--appendix-fn", "2"]);
    assert_eq!(code(&o), EXIT_PASS, "{}", stdout(&o));
    let out = stdout(&o);
    for name in ["A-invariants-are-N", "B-invariants-are-M", "recursive-form"] {
        assert!(out.lines().any(|l| l.contains(name) && l.contains("PASS")), "{name} missing");
    }
}

#[test]
fn input_errors_exit_two() {
    let o = run(&["verify-wha", "builtin:no-such-example"]);
    assert_eq!(code(&o), EXIT_INPUT);
    let p = scratch("broken.json", "{\n  \"name\": \"x\",\n  \"field\": \n}");
    let o = run(&["verify-wha", p.to_str().unwrap()]);
    assert_eq!(code(&o), EXIT_INPUT);
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 4"), "{}", String::from_utf8_lossy(&o.stderr));
    let o = run(&["verify-wha", "/nonexistent/spec.json"]);
    assert_eq!(code(&o), EXIT_INPUT);
}

#[test]
fn bad_scalar_reports_its_location() {
    let text = builtin("m2-over-q").unwrap().to_json().replacen("\"1\"", "\"1/0\"", 1);
    let p = scratch("bad-scalar.json", &text);
    let o = run(&["algebra", p.to_str().unwrap()]);
    assert_eq!(code(&o), EXIT_INPUT);
    assert!(String::from_utf8_lossy(&o.stderr).contains("payload.products[0]"), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn output_is_deterministic() {
    let args = ["--format", "machine", "tower", "builtin:q2-in-m2", "--derive"];
    let (a, b) = (run(&args), run(&args));
    assert_eq!(code(&a), EXIT_PASS);
    assert_eq!(a.stdout, b.stdout);
    let text = ["tower", "builtin:q2-in-m2"];
    assert_eq!(run(&text).stdout, run(&text).stdout);
}

#[test]
fn machine_lines_are_records() {
    let o = run(&["--format", "machine", "groupoid", "builtin:groupoid:Z2+pair2", "--dual", "--integrals"]);
    assert_eq!(code(&o), EXIT_PASS);
    let out = stdout(&o);
    assert!(!out.is_empty());
    for line in out.lines() {
        let v: serde_json::Value = serde_json::from_str(line).unwrap();
        for key in ["section", "name", "anchor", "pass"] {
            assert!(v.get(key).is_some(), "{line}");
        }
    }
}

#[test]
fn every_builtin_round_trips() {
    for name in builtin_names() {
        let spec = builtin(&name).unwrap();
        let text = spec.to_json();
        assert_eq!(SpecFile::parse(&text).unwrap(), spec, "{name}");
    }
}

#[test]
fn weak_hopf_specs_rebuild_the_same_structure() {
    for (name, g) in Groupoid::corpus() {
        for (prefix, h) in [("kG", groupoid_algebra::<Q>(&g).unwrap()), ("dual", groupoid_dual::<Q>(&g).unwrap())] {
            let spec = SpecFile::parse(&builtin(&format!("{prefix}:{name}")).unwrap().to_json()).unwrap();
            let Payload::WeakHopf(w) = spec.payload else { panic!("{prefix}:{name}") };
            assert_eq!(w.build::<Q>().unwrap().unwrap(), h, "{prefix}:{name}");
        }
        let Payload::Groupoid(gs) = builtin(&format!("groupoid:{name}")).unwrap().payload else { panic!() };
        assert_eq!(gs.build().unwrap().unwrap().composition_table(), g.composition_table());
    }
}

#[test]
fn examples_command_prints_loadable_files() {
    let o = run(&["examples"]);
    assert_eq!(code(&o), EXIT_PASS);
    assert_eq!(stdout(&o).lines().count(), builtin_names().len());
    let o = run(&["examples", "q-in-q2"]);
    let p = scratch("q-in-q2.json", &stdout(&o));
    let o = run(&["tower", p.to_str().unwrap(), "--depth", "3"]);
    assert_eq!(code(&o), EXIT_PASS, "{}", stdout(&o));
}

#[test]
fn unknown_keys_are_rejected() {
    let text = builtin("m2-over-q").unwrap().to_json().replacen("{", "{\"extra\": 1, ", 1);
    assert!(matches!(SpecFile::parse(&text), Err(SpecError::Invalid { .. })));
}
