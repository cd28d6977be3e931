#[path = "../../core/tests/common/mod.rs"]
mod common;

use std::process::Command;

use serde_json::Value;
use supergv::expr::{parse_field, parse_form, parse_function, print_field, print_form, print_function};
use supergv::Parity;

fn supergv(args: &[&str]) -> (String, i32) {
    let out = Command::new(env!("CARGO_BIN_EXE_supergv")).args(args).output().unwrap();
    (String::from_utf8(out.stdout).unwrap(), out.status.code().unwrap())
}

fn json(args: &[&str]) -> (Value, i32) {
    let (out, code) = supergv(args);
    (serde_json::from_str(&out).unwrap_or_else(|e| panic!("{e}: {out}")), code)
}

const EXAMPLE: [&str; 6] = ["--space", "x1:circle;theta1", "--form", "dtheta1 + t*theta1*dx1", "--params", "t"];

#[test]
fn print_parse_round_trip() {
    let sig = common::mixed();
    for seed in 0..200 {
        let mut r = common::rng(seed);
        let f = common::function(&mut r, &sig, None, 4);
        let text = print_function(&f);
        assert_eq!(parse_function(&text, &sig).unwrap(), f, "{text}");

        let w = common::form(&mut r, &sig, None, 4);
        let text = print_form(&w);
        let back = parse_form(&text, &sig).unwrap();
        assert_eq!(back, w, "{text}");
        assert_eq!(print_form(&back), text);

        let p = common::parity_of(&mut r);
        let x = common::field(&mut r, &sig, p, 3);
        let text = print_field(&x);
        assert_eq!(parse_field(&text, &sig).unwrap(), x, "{text}");
    }
}

#[test]
fn odd_forms_print_in_parser_grammar() {
    let sig = common::mixed();
    let mut r = common::rng(7);
    let w = common::form(&mut r, &sig, Some(Parity::Odd), 5);
    let text = print_form(&w);
    assert!(!text.contains("**1"));
    assert_eq!(parse_form(&text, &sig).unwrap(), w);
}

#[test]
fn gv_example() {
    let mut args = vec!["gv"];
    args.extend(EXAMPLE);
    let (v, code) = json(&args);
    assert_eq!(code, 0);
    assert_eq!(v["A"], "t*dx1");
    assert_eq!(v["closed"], true);
    assert_eq!(v["class"]["x1"], "t");
}

#[test]
fn gv_trivial_and_check_foliation() {
    let (v, code) = json(&["gv", "--space", "x1:circle;theta1", "--form", "dtheta1"]);
    assert_eq!((code, v["class"]["x1"].as_str()), (0, Some("0")));
    let mut args = vec!["check-foliation"];
    args.extend(EXAMPLE);
    let (v, code) = json(&args);
    assert_eq!((code, &v["integrable"], &v["b"]), (0, &Value::Bool(true), &Value::from("t*dx1")));
    let (v, code) = json(&[
        "check-foliation",
        "--space",
        "x1:line;theta1;theta2",
        "--form",
        "dtheta1 + x1*dtheta2",
    ]);
    assert_eq!((code, &v["integrable"]), (0, &Value::Bool(false)));
}

#[test]
fn ce_betti_commands() {
    let (v, code) = json(&["ce-betti", "--algebra", "vect", "--n", "0", "--m", "1", "--even-part", "--max-degree", "3"]);
    assert_eq!(code, 0);
    assert_eq!(v["betti"], serde_json::json!([1, 1, 0, 0]));
    assert_eq!(v["algebra"], "Vect(0,1)_0");
    let (v, _) = json(&["ce-betti", "--algebra", "vect", "--n", "1", "--max-degree", "3", "--max-weight", "2"]);
    assert_eq!((v["betti"].clone(), v["W"].clone(), v["stable"].clone()), (serde_json::json!([1, 0, 0, 1]), 2.into(), true.into()));
    let (v, _) = json(&["ce-betti", "--algebra", "abelian", "--n", "2", "--max-degree", "2"]);
    assert_eq!(v["betti"], serde_json::json!([1, 2, 1]));
    let (v, code) = json(&["ce-betti", "--algebra", "vect", "--n", "1", "--max-degree", "2", "--weight", "-1"]);
    assert_eq!((code, v["weight"].as_i64()), (0, Some(-1)));
}

#[test]
fn connection_commands() {
    let dir = std::env::temp_dir().join(format!("supergv-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let write = |name: &str, v: Value| {
        let p = dir.join(name);
        std::fs::write(&p, v.to_string()).unwrap();
        p.to_string_lossy().into_owned()
    };
    let rank1 = write(
        "rank1.json",
        serde_json::json!({"space": "x1:circle", "params": ["t"], "generators": ["del_x1"], "matrices": [[["t"]]]}),
    );
    let (v, code) = json(&["connection", "to-superfoliation", "--input", &rank1]);
    assert_eq!(code, 0);
    assert_eq!(v["class"]["x1"], "t");
    assert_eq!(v["even_annihilators"], serde_json::json!(["dtheta1 + t*theta1*dx1"]));

    let fol = write("fol.json", v);
    let (v, code) = json(&["connection", "from-superfoliation", "--input", &fol]);
    assert_eq!((code, &v["matrices"]), (0, &serde_json::json!([[["t"]]])));

    let curved = write(
        "curved.json",
        serde_json::json!({"space": "x1:line;x2:line", "generators": ["del_x1", "del_x2"], "matrices": [[["x2"]], [["0"]]]}),
    );
    let (v, code) = json(&["connection", "curvature", "--input", &curved]);
    assert_eq!((code, &v["flat"]), (0, &Value::Bool(false)));
    let (v, code) = json(&["connection", "to-superfoliation", "--input", &curved]);
    assert_eq!((code, v["error"]["kind"].as_str()), (2, Some("NotFlat")));

    let rank2 = write(
        "rank2.json",
        serde_json::json!({"space": "x1:line", "generators": ["del_x1"], "matrices": [[["0", "0"], ["0", "0"]]]}),
    );
    let (v, code) = json(&["connection", "gauge", "--input", &rank2, "--gauge", r#"[["1","x1"],["0","1"]]"#]);
    assert_eq!((code, &v["matrices"]), (0, &serde_json::json!([[["0", "-1"], ["0", "0"]]])));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn errors_and_exit_codes() {
    let (v, code) = json(&["gv", "--space", "x1:circle;theta1", "--form", "dzeta"]);
    assert_eq!((code, v["error"]["kind"].as_str()), (1, Some("UnknownSymbol")));
    let (v, code) = json(&["gv", "--space", "x1:circle;theta1", "--form", "dtheta1 +"]);
    assert_eq!((code, v["error"]["kind"].as_str()), (1, Some("SyntaxError")));
    let (v, code) = json(&["gv", "--space", "x1:circle;theta1", "--form", "cos(x1)*dtheta1"]);
    assert_eq!((code, v["error"]["kind"].as_str()), (2, Some("NotRegular")));
    let (v, code) = json(&["frobnicate"]);
    assert_eq!((code, v["error"]["kind"].as_str()), (1, Some("UsageError")));
    let (v, code) = json(&["connection", "curvature", "--input", "/nonexistent/file.json"]);
    assert_eq!((code, v["error"]["kind"].as_str()), (1, Some("IoError")));
    let (_, code) = supergv(&["--help"]);
    assert_eq!(code, 0);
}

#[test]
fn output_is_deterministic() {
    let mut gv = vec!["gv"];
    gv.extend(EXAMPLE);
    let runs: [&[&str]; 2] = [&gv, &["ce-betti", "--algebra", "vect", "--n", "1", "--max-degree", "3", "--max-weight", "3"]];
    for args in runs {
        let first = supergv(args);
        for _ in 0..3 {
            assert_eq!(supergv(args), first);
        }
        assert_eq!(supergv_cli::run(std::iter::once("supergv").chain(args.iter().copied())), first_trimmed(&first));
    }
}

fn first_trimmed(out: &(String, i32)) -> (String, i32) {
    (out.0.trim_end_matches('\n').to_string(), out.1)
}
