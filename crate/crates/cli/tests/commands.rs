use std::process::Command;

use serde_json::Value;

fn run(args: &[&str]) -> (Value, i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_ksymbol")).args(args).output().expect("binary runs");
    let text = String::from_utf8(out.stdout).unwrap();
    let value = serde_json::from_str(&text).unwrap_or_else(|e| panic!("{args:?}: {e}\n{text}"));
    (value, out.status.code().unwrap(), text)
}

#[test]
fn hilbert_at_two() {
    let (v, code, _) = run(&["hilbert", "--place", "2", "2", "3"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"], -1);
    assert_eq!(v["schema"], 1);
    assert_eq!(v["status"], "ok");
}

#[test]
fn reciprocity_factors() {
    let (v, code, _) = run(&["reciprocity", "3", "5"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["product"], 1);
    let factors: Vec<(String, i64)> = v["certificates"][0]["factors"]
        .as_array()
        .unwrap()
        .iter()
        .map(|f| (f["place"].as_str().unwrap().to_string(), f["value"].as_i64().unwrap()))
        .collect();
    let expected = [("inf", 1), ("2", 1), ("3", -1), ("5", -1)].map(|(p, s)| (p.to_string(), s));
    assert_eq!(factors, expected);
}

#[test]
fn birch_tate_constants() {
    let (v, code, _) = run(&["birchtate"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["w2"], 24);
    assert_eq!(v["result"]["zeta"], "-1/12");
    assert_eq!(v["result"]["product"], 2);
}

#[test]
fn identical_arguments_give_identical_bytes() {
    for args in [
        &["reciprocity", "-3/7", "10"][..],
        &["weil", "--q", "9", "a*T^2 + 1", "T/(T + a)"],
        &["qform", "0,1,2;1,0,1;2,1,3"],
        &["residue", "z/(z - 1)", "z + 2", "--point", "1"],
        &["selftest"],
    ] {
        let (_, c1, a) = run(args);
        let (_, c2, b) = run(args);
        assert_eq!((c1, &a), (c2, &b), "{args:?}");
    }
}

#[test]
fn exit_codes() {
    let (v, code, _) = run(&["hilbert", "1 +", "3"]);
    assert_eq!(code, 2);
    assert_eq!(v["status"], "invalid_input");
    assert_eq!(v["error"]["offset"], 3);
    assert_eq!(run(&["nosuchcommand"]).1, 2);
    assert_eq!(run(&["hilbert", "0", "3"]).1, 2);
    assert_eq!(run(&["tame", "--place", "9", "2", "3"]).1, 2);
    assert_eq!(run(&["weil", "T", "T + 1"]).1, 2);
    assert_eq!(run(&["qform", "1,2;3,4"]).1, 2);
    assert_eq!(run(&["cartier", "--q", "3", "--ds", "t", "--dt", "0"]).1, 2);
}

#[test]
fn keys_are_sorted() {
    let (_, _, text) = run(&["conic", "5", "-1"]);
    let top: Vec<&str> = text
        .lines()
        .filter(|l| l.starts_with("  \"") && !l.starts_with("   "))
        .map(|l| l.trim().split('"').nth(1).unwrap())
        .collect();
    let mut sorted = top.clone();
    sorted.sort();
    assert_eq!(top, sorted);
    assert_eq!(top, ["certificates", "command", "inputs", "result", "schema", "status"]);
}

#[test]
fn unicode_minus_and_infinity() {
    let (v, code, _) = run(&["hilbert", "--place", "\u{221e}", "\u{2212}1", "\u{2212}3/4"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"], -1);
    assert_eq!(v["inputs"]["x"], "-1");
}

#[test]
fn every_subcommand_answers() {
    let cases: &[&[&str]] = &[
        &["tame", "12", "-45"],
        &["conic", "2", "3"],
        &["decompose", "2", "3", "-1", "-1"],
        &["lift", "5:2", "7:3", "--two", "-1"],
        &["quadrec", "11", "19"],
        &["moore", "2", "3"],
        &["moore", "--vector", "inf:-1", "2:-1", "3:2", "5:3"],
        &["ffdecompose", "--q", "4", "T", "T + a"],
        &["fflift", "--q", "5", "T^2 + 2:T + 1", "T:3"],
        &["steinberg", "--q", "9", "3", "5"],
        &["qform", "--diag", "1,1", "3,3"],
        &["quaternion", "-1", "-1"],
        &["pfister", "2", "3"],
        &["dform", "--q", "5", "s", "1 - s"],
        &["cartier", "--q", "3", "s^2*t^2"],
        &["numember", "--q", "3", "1/(s*t)"],
        &["zeta", "--q", "7", "--curve", "1,1"],
        &["tateid", "--q", "13", "--curve", "2,3"],
        &["dilog", "1/2 + i"],
    ];
    for args in cases {
        let (v, code, _) = run(args);
        assert_eq!(code, 0, "{args:?}: {v}");
        assert_eq!(v["command"], args[0]);
    }
}

#[test]
fn subcommand_results() {
    let (v, _, _) = run(&["moore", "--vector", "3:2"]);
    assert_eq!(v["result"]["in_kernel"], false);
    let (v, _, _) = run(&["conic", "2", "3"]);
    assert_eq!(v["result"]["obstructions"], serde_json::json!(["2", "3"]));
    let (v, _, _) = run(&["cartier", "--q", "3", "s^2*t^2"]);
    assert_eq!(v["result"]["h"], "1");
    let (v, _, _) = run(&["numember", "--q", "3", "s"]);
    assert_eq!(v["result"]["member"], false);
    let (v, _, _) = run(&["dilog", "i"]);
    assert!((v["result"]["value"].as_f64().unwrap() - 0.915_965_594_177_219).abs() < 1e-12);
    let (v, _, _) = run(&["tateid", "--q", "5"]);
    assert_eq!(v["result"]["zeta_minus1"], "1/96");
    let (v, _, _) = run(&["selftest"]);
    assert_eq!(v["result"]["passed"], true);
}
