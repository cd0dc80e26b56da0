use std::process::Command;

use charclass_cli::run;
use charclass_core::Report;

fn charclass(args: &[&str]) -> (i32, String, String) {
    let out = run(std::iter::once("charclass").chain(args.iter().copied()));
    (out.code, out.stdout, out.stderr)
}

fn stdout_of(args: &[&str]) -> String {
    let (code, out, err) = charclass(args);
    assert_eq!(code, 0, "{args:?}: {err}");
    out.trim_end().to_string()
}

#[test]
fn documented_examples() {
    assert_eq!(stdout_of(&["complexifiable", "--expr", "w1^2*w3^2"]), "true");
    assert_eq!(stdout_of(&["chern-express", "--expr", "p1"]), "-c2");
    assert_eq!(stdout_of(&["complexifiable", "--expr", "w1"]), "false");
}

#[test]
fn commands() {
    assert_eq!(stdout_of(&["sq1", "--expr", "w2"]), "w1*w2 + w3");
    assert_eq!(stdout_of(&["sq1", "--expr", "w2", "--degree", "2"]), "0");
    assert_eq!(stdout_of(&["eval", "--expr", "w2", "--bundle", "roots:3"]), "r1*r2 + r1*r3 + r2*r3");
    assert_eq!(stdout_of(&["eval", "--expr", "w1^2 + w3", "--bundle", "trivial"]), "0");
    assert_eq!(stdout_of(&["eval", "--expr", "w3", "--degree", "8", "--rank", "2"]), "0");
    assert_eq!(stdout_of(&["eval", "--expr", "w1*w2", "--bundle", "fiber", "--degree", "4"]), "v1*v2");
    assert_eq!(stdout_of(&["rho", "--expr", "V{1/2}"]), "w1^2");
    assert_eq!(stdout_of(&["rho", "--expr", "p1 + V{1}"]), "w1*w2 + w3 + w2^2");
    assert_eq!(stdout_of(&["complexifiable", "--expr", "V{1/2}"]), "true");
    assert_eq!(stdout_of(&["complexifiable", "--expr", "V{1}"]), "false");
    assert_eq!(stdout_of(&["complexifiable", "--integral", "--expr", "1"]), "true");
    assert_eq!(stdout_of(&["decompose", "--expr", "w2^4 + w1^2*w3^2"]), "u1*u3 + u2^2");
    assert_eq!(stdout_of(&["decompose", "--ideal", "--expr", "w1^2*w2 + w2^2"]), "w1^2*(w2) + w2^2*(1)");
    assert_eq!(stdout_of(&["chern-express", "--expr", "V{1/2}^2"]), "lift(rc1^2)");
    assert_eq!(stdout_of(&["chern-express", "--expr", "p1 - 3*p1^2 + p2"]), "-c2 - 3*c2^2 + c4");
    assert_eq!(stdout_of(&["chern-express", "--expr", "p1 + 3*p1^2 - p2"]), "-c2 + 3*c2^2 - c4");
}

#[test]
fn json_output_and_input() {
    let j = stdout_of(&["sq1", "--expr", "w2", "--json"]);
    assert_eq!(j, r#"{"type":"mod2","monomials":[[[1,1],[2,1]],[[3,1]]]}"#);
    assert_eq!(stdout_of(&["sq1", "--expr", &j]), "0");
    let v = r#"{"type":"integral","free":[],"torsion":[{"p":[],"V":[[[1],1]]}]}"#;
    assert_eq!(stdout_of(&["rho", "--expr", v]), "w1^2");
    assert_eq!(charclass(&["sq1", "--expr", v]).0, 1);
    assert_eq!(
        stdout_of(&["chern-express", "--json", "--expr", "p1 + V{1/2}^2"]),
        r#"{"free":[{"coeff":-1,"c":[[2,1]]}],"torsion":{"type":"mod2","monomials":[[[1,2]]]},"lift":true}"#
    );
}

#[test]
fn exit_codes() {
    // parse, usage, and elaboration problems
    assert_eq!(charclass(&["sq1", "--expr", "w0"]).0, 1);
    assert_eq!(charclass(&["sq1", "--expr", "w1 +"]).0, 1);
    assert_eq!(charclass(&["complexifiable", "--expr", "w1 + p1"]).0, 1);
    assert_eq!(charclass(&["complexifiable", "--expr", "c1"]).0, 1);
    assert_eq!(charclass(&["rho", "--expr", "V{3}", "--rank", "4"]).0, 1);
    assert_eq!(charclass(&["eval", "--expr", "w1", "--bundle", "moebius"]).0, 1);
    assert_eq!(charclass(&["frobnicate"]).0, 1);
    assert_eq!(charclass(&["sq1"]).0, 1);
    assert_eq!(charclass(&["sq1", "--expr", "w1^9999"]).0, 1);
    // domain errors
    let (code, _, err) = charclass(&["decompose", "--expr", "w1"]);
    assert_eq!(code, 2);
    assert!(err.contains("w1"), "{err}");
    assert_eq!(charclass(&["decompose", "--ideal", "--expr", "w1*w2"]).0, 2);
    assert_eq!(charclass(&["chern-express", "--expr", "V{1}"]).0, 2);
    assert_eq!(charclass(&["eval", "--expr", "w1", "--bundle", "fiber", "--json"]).0, 1);
    assert_eq!(charclass(&["--help"]).0, 0);
}

#[test]
fn verify_reports() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("lemma3.json");
    let (code, out, _) = charclass(&[
        "verify",
        "--suite",
        "lemma3",
        "--degree",
        "24",
        "--report",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    assert_eq!(out, "suite lemma3: 21 pass, 0 fail, 7 expected-mismatch\n");
    let text = std::fs::read_to_string(&path).unwrap();
    let report: Report = serde_json::from_str(&text).unwrap();
    assert_eq!(report.suite(), "lemma3");
    assert!(report.is_consistent());
    assert!(text.starts_with(r#"{"suite":"lemma3","cases":[{"id":"#));

    let again = charclass(&["verify", "--suite", "all", "--degree", "12", "--rank", "4", "--json"]);
    let once = charclass(&["verify", "--suite", "all", "--degree", "12", "--rank", "4", "--json"]);
    assert_eq!(again, once);
    assert_eq!(charclass(&["verify", "--suite", "nope"]).0, 1);
}

#[test]
fn binary_and_environment() {
    let bin = env!("CARGO_BIN_EXE_charclass");
    let out = Command::new(bin)
        .args(["complexifiable", "--expr", "w1^2*w3^2"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "true\n");

    // caps follow the environment when --degree is absent
    let out = Command::new(bin)
        .env("CHARCLASS_DEFAULT_DEGREE", "2")
        .args(["sq1", "--expr", "w2"])
        .output()
        .unwrap();
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "0\n");
    let out = Command::new(bin)
        .env("CHARCLASS_DEFAULT_DEGREE", "2")
        .args(["sq1", "--expr", "w2", "--degree", "3"])
        .output()
        .unwrap();
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "w1*w2 + w3\n");

    let out = Command::new(bin).args(["decompose", "--expr", "w1"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8(out.stderr).unwrap().starts_with("error: "));
}
