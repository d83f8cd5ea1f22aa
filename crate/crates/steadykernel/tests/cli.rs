mod common;

use std::process::Command;

use common::{e, fixture_path, FIXTURES};
use serde_json::Value;
use steadykernel::cli::run;

fn call(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("steadykernel").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn fx(name: &str) -> String {
    fixture_path(name).to_string_lossy().into_owned()
}

fn json(args: &[&str]) -> Value {
    let mut full = vec!["--format", "json"];
    full.extend_from_slice(args);
    let (code, out, err) = call(&full);
    assert!(code == 0 || code == 2, "{args:?}: {err}");
    serde_json::from_str(&out).unwrap_or_else(|e| panic!("{args:?}: {e}\n{out}"))
}

fn strings(v: &Value) -> Vec<String> {
    v.as_array()
        .unwrap()
        .iter()
        .map(|s| s.as_str().unwrap().to_string())
        .collect()
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_steadykernel");
    let status = |args: &[String]| Command::new(bin).args(args).output().unwrap().status.code();
    assert_eq!(status(&["check".into(), fx("glycolysis.net")]), Some(0));
    assert_eq!(status(&["check".into(), fx("two_sinks.net")]), Some(2));
    assert_eq!(status(&["steady-state".into(), fx("two_sinks.net")]), Some(2));
    assert_eq!(status(&["check".into(), fx("missing.net")]), Some(1));
    assert_eq!(status(&["frobnicate".into()]), Some(1));
    assert_eq!(status(&["--help".into()]), Some(0));
}

#[test]
fn parse_errors_point_at_the_column() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.net");
    std::fs::write(&path, "1 -> 2 : a\n2 -> 3 : b +\n").unwrap();
    let (code, _, err) = call(&["check", path.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert!(err.contains("line 2, column 13"), "{err}");

    std::fs::write(&path, "1 -> 2 : -a\n").unwrap();
    let (code, _, err) = call(&["analyze", path.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert!(err.contains("reverse the edge"), "{err}");
}

#[test]
fn three_cycle_trees_rooted_at_2() {
    let (code, out, _) = call(&["trees", &fx("three_cycle.net"), "--root", "2"]);
    assert_eq!(code, 0);
    assert_eq!(out, "2 | 1->2:a,3->1:c\n2 | 1->2:a,3->2:d\n");
    let v = json(&["trees", &fx("three_cycle.net")]);
    // one tree into 1, two into 2, one into 3
    assert_eq!(v["trees"].as_array().unwrap().len(), 4);
}

#[test]
fn worked_example_check_reports_both_violations() {
    let v = json(&["check", &fx("two_sinks.net")]);
    assert_eq!(v["ok"], false);
    let found: Vec<(String, String, String)> = v["violations"]
        .as_array()
        .unwrap()
        .iter()
        .map(|x| {
            let s = |k: &str| x[k].as_str().unwrap().to_string();
            (s("kind"), s("vertex"), s("label"))
        })
        .collect();
    assert_eq!(
        found,
        [
            ("SynthesisFeedsDegradationFreeTerminal".into(), "1".into(), "g".into()),
            ("SynthesisInDegradationFreeTerminal".into(), "5".into(), "l".into()),
        ]
    );
    assert_eq!(
        v["violations"][0]["terminal_components"],
        serde_json::json!([["4"], ["5"]])
    );
    assert_eq!(strings(&v["reachability"]), ["1"]);
}

#[test]
fn glycolysis_json_matches_closed_form() {
    for method in ["mtt", "adjugate"] {
        let v = json(&["--inverse", method, "steady-state", &fx("glycolysis.net")]);
        assert_eq!(v["mode"], "StrongComplementary");
        assert_eq!(strings(&v["vertices"]), ["Glu", "H-6-P", "GIP", "Pyr"]);
        let den = "(b*d*h + b*e*h + c*e*h)";
        let expected = [
            format!("(a*d*h + a*e*h)/{den}"),
            format!("a*c*h/{den}"),
            format!("a*c*e*h/f/{den}"),
            format!("(a*c*e + b*d*g + b*e*g + c*e*g)/{den}"),
        ];
        for (got, want) in strings(&v["x_es"]).iter().zip(&expected) {
            assert_eq!(e(got), e(want), "{method}");
        }
        assert_eq!(v["residual_ok"], true);
        assert_eq!(v["balance_ok"], true);
    }
}

#[test]
fn json_expressions_parse_back() {
    for name in FIXTURES {
        let v = json(&["steady-state", &fx(name), "--matrices"]);
        for s in strings(&v["x_es"]) {
            assert_eq!(e(&e(&s).to_string()), e(&s));
        }
        if let Some(m) = v.get("matrices") {
            for key in ["R", "L", "Q"] {
                for row in m[key].as_array().unwrap() {
                    for s in strings(row) {
                        e(&s);
                    }
                }
            }
        }
    }
    let v = json(&["invert", &fx("exocytosis_rest.net")]);
    for row in v["matrix"].as_array().unwrap() {
        for s in strings(row) {
            e(&s);
        }
    }
}

#[test]
fn output_is_deterministic() {
    let commands: [&[&str]; 4] = [&["analyze"], &["steady-state", "--matrices"], &["kernel"], &["invert"]];
    for name in FIXTURES {
        for format in ["text", "json"] {
            for cmd in commands {
                let mut args = vec!["--format", format];
                args.extend_from_slice(cmd);
                let path = fx(name);
                args.push(&path);
                let first = call(&args);
                assert_eq!(first, call(&args), "{args:?}");
            }
        }
    }
}

#[test]
fn initial_conditions_substitute() {
    let path = fx("two_sinks.net");
    let dir = tempfile::tempdir().unwrap();
    let fixed = dir.path().join("fixed.net");
    let text = std::fs::read_to_string(&path).unwrap();
    let kept: String = text
        .lines()
        .filter(|l| !l.contains(": g") && !l.contains(": l"))
        .map(|l| format!("{l}\n"))
        .collect();
    std::fs::write(&fixed, kept).unwrap();
    let v = json(&["steady-state", fixed.to_str().unwrap(), "--x0", "0,0,0,1,2"]);
    assert_eq!(v["mode"], "GeneralInitialDependent");
    let x = strings(&v["x_es"]);
    assert_eq!(e(&x[2]), e("k/i"));
    assert_eq!(e(&x[3]), e("1"));
    assert_eq!(e(&x[4]), e("2"));
}

#[test]
fn delta_inverse_of_two_vertex_chain() {
    let dir = tempfile::tempdir().unwrap();
    let net = dir.path().join("chain.net");
    let delta = dir.path().join("chain.delta");
    std::fs::write(&net, "1 -> 2 : a\n").unwrap();
    std::fs::write(&delta, "2 : b\n").unwrap();
    let v = json(&["invert", net.to_str().unwrap(), "--delta", delta.to_str().unwrap()]);
    let m: Vec<Vec<String>> = v["matrix"].as_array().unwrap().iter().map(strings).collect();
    let expected = [["-1/a", "0"], ["-1/b", "-1/b"]];
    for (row, want) in m.iter().zip(expected) {
        for (got, w) in row.iter().zip(want) {
            assert_eq!(e(got), e(w));
        }
    }
}

#[test]
fn simulate_writes_csv_and_approaches_the_steady_state() {
    let dir = tempfile::tempdir().unwrap();
    let csv_path = dir.path().join("run.csv");
    let binds = ["a=1", "b=2", "c=0.5", "d=1.5", "e=1", "f=2", "g=1", "h=0.7"];
    let mut args = vec![
        "--format",
        "json",
        "simulate",
        "--t-end",
        "200",
        "--csv",
        csv_path.to_str().unwrap(),
    ];
    let path = fx("glycolysis.net");
    args.push(&path);
    for b in &binds {
        args.extend(["--bind", b]);
    }
    let (code, out, err) = call(&args);
    assert_eq!(code, 0, "{err}");
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["diverged"], false);
    assert!(v["distance"].as_f64().unwrap() < 1e-8, "{out}");

    let mut reader = csv::Reader::from_path(&csv_path).unwrap();
    let header: Vec<String> = reader.headers().unwrap().iter().map(str::to_string).collect();
    assert_eq!(header, ["t", "Glu", "H-6-P", "GIP", "Pyr"]);
    let rows: Vec<csv::StringRecord> = reader.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), v["steps"].as_u64().unwrap() as usize + 1);
    assert_eq!(rows[0][0].parse::<f64>().unwrap(), 0.0);
    assert_eq!(rows.last().unwrap()[0].parse::<f64>().unwrap(), 200.0);
}

#[test]
fn simulate_flags_a_pile_up() {
    let mut args = vec!["simulate".to_string(), fx("two_sinks.net")];
    for s in ["a", "b", "c", "d", "e", "f", "g", "h", "i", "k", "l"] {
        args.push("--bind".into());
        args.push(format!("{s}=1"));
    }
    let argv: Vec<&str> = args.iter().map(String::as_str).collect();
    let (code, out, _) = call(&argv);
    assert_eq!(code, 2);
    assert!(out.contains("diverged"));
}

#[test]
fn unbound_symbols_are_reported() {
    let (code, _, err) = call(&["simulate", &fx("three_cycle.net"), "--bind", "a=1"]);
    assert_eq!(code, 1);
    assert!(err.contains('b') || err.contains('c'), "{err}");
}
