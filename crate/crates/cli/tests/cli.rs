use std::fs;
use std::path::PathBuf;

use stratset::axioms::{classify_code, TheoryId};
use stratset::fragment::{build_fragment, verify_seg_lemma};
use stratset::godel::{encode_formula, GodelCode};
use stratset::parser::parse_formula;
use stratset::sat::{build_tst_model, check_theory};
use stratset::stratify::stratify;
use stratset_cli::{run, Outcome, FALSE, INPUT_ERROR, OK, RESOURCE_GUARD};

fn cli(args: &[&str]) -> Outcome {
    run(std::iter::once("stratset").chain(args.iter().copied()))
}

fn file(name: &str, text: &str) -> String {
    let path = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name);
    fs::write(&path, text).unwrap();
    path.to_string_lossy().into_owned()
}

#[test]
fn russell_is_unstratified() {
    let path = file("russell.fml", "# Russell\n~(x in x)\n");
    let o = cli(&["stratify", "--file", &path]);
    assert_eq!(o.code, FALSE, "{o:?}");
    let w = stratify(&parse_formula("~(x in x)").unwrap()).unwrap_err();
    assert!(o.stdout.contains(&w.to_string()));
}

#[test]
fn stratify_prints_the_library_result() {
    let f = "forall x. (x in a <-> x in b)";
    let o = cli(&["stratify", "--formula", f]);
    assert_eq!(o.code, OK);
    let s = stratify(&parse_formula(f).unwrap()).unwrap();
    assert_eq!(o.stdout, format!("stratified: {s}\n"));
    let tsv = cli(&["stratify", "--formula", f, "--format", "tsv"]);
    assert_eq!(tsv.stdout.lines().count(), s.len() + 1);
}

#[test]
fn seg_lemma_report() {
    let o = cli(&["bf", "verify", "--max-rank", "3"]);
    assert_eq!(o.code, OK);
    let report = verify_seg_lemma(&build_fragment(3, 3).unwrap());
    assert!(o.stdout.starts_with("seg-lemma: 16/16 pass"));
    assert!(o.stdout.contains(&report.to_string()));
}

#[test]
fn code_twenty_is_no_axiom() {
    let o = cli(&["axiom-check", "--theory", "tsti4", "--code", "20"]);
    assert_eq!(o.code, FALSE, "{o:?}");
    let theory: TheoryId = "tsti4".parse().unwrap();
    assert_eq!(classify_code(&GodelCode::from(20), theory), Ok(None));
}

#[test]
fn axiom_check_on_formulas() {
    let ext = "forall x@1. forall y@1. (x@1 = y@1 <-> (forall z@0. (z@0 in x@1 <-> z@0 in y@1)))";
    assert_eq!(cli(&["axiom-check", "--theory", "tsti4", "--formula", ext]).code, OK);
    assert_eq!(cli(&["axiom-check", "--theory", "nf", "--formula", "forall x. S(x)"]).code, OK);
    assert_eq!(cli(&["axiom-check", "--theory", "nfu", "--formula", "forall x. S(x)"]).code, FALSE);
    assert_eq!(cli(&["axiom-check", "--theory", "tsti3", "--formula", ext]).code, INPUT_ERROR);
}

#[test]
fn godel_round_trip() {
    let o = cli(&["godel", "encode", "--formula", "x0 in x1"]);
    assert_eq!((o.code, o.stdout.as_str()), (OK, "20\n"));
    let f = parse_formula("forall a. <a,b> = b").unwrap();
    let code = encode_formula(&f).to_string();
    assert_eq!(cli(&["godel", "encode", "--formula", "forall a. <a,b> = b"]).stdout.trim(), code);
    let back = cli(&["godel", "decode", "--code", &code]);
    assert_eq!(back.stdout.trim(), "forall x0. <x0,x1> = x1");
    assert_eq!(cli(&["godel", "decode", "--code", "not-a-number"]).code, INPUT_ERROR);
}

#[test]
fn resource_guards() {
    assert_eq!(cli(&["hf", "enumerate", "--max-rank", "4"]).code, RESOURCE_GUARD);
    assert_eq!(cli(&["hf", "enumerate", "--max-rank", "5", "--large"]).code, RESOURCE_GUARD);
    assert_eq!(cli(&["bf", "fragment", "--max-rank", "4"]).code, RESOURCE_GUARD);
    let o = cli(&["hf", "enumerate", "--max-rank", "3"]);
    assert_eq!((o.code, o.stdout.lines().count()), (OK, 16));
}

#[test]
fn graphs() {
    let chain = file("chain.bf", "node a\nnode b\nedge a b\ntop b\n");
    assert_eq!(cli(&["bf", "check", "--file", &chain]).code, OK);
    assert_eq!(cli(&["bf", "canon", "--file", &chain]).stdout.trim(), "{{}}");
    let looped = file("loop.bf", "node a\nedge a a\n");
    assert_eq!(cli(&["bf", "check", "--file", &looped]).code, FALSE);
    let bad = file("bad.bf", "node a\nedge a q\n");
    assert_eq!(cli(&["bf", "check", "--file", &bad]).code, INPUT_ERROR);
    let three = file("three.bf", "node a\nnode b\nnode c\nedge a b\nedge b c\n");
    let seg = cli(&["bf", "seg", "--file", &three, "--node", "b"]);
    assert_eq!(seg.code, OK);
    assert!(!seg.stdout.contains("node c"));
}

#[test]
fn models() {
    let o = cli(&["model", "check-theory"]);
    assert_eq!(o.code, OK, "{o:?}");
    let report = check_theory(&build_tst_model(3, 4, 3).unwrap(), 100, 0).unwrap();
    assert_eq!(o.stdout, format!("{report}\n"));
    let built = cli(&["model", "build"]);
    let path = file("model.st", &built.stdout);
    let ext = "forall x@1. forall y@1. (x@1 = y@1 <-> (forall z@0. (z@0 in x@1 <-> z@0 in y@1)))";
    assert_eq!(cli(&["model", "eval", "--file", &path, "--formula", ext]).code, OK);
    let single = file("single.st", "sorts single\nelem 0 a\nelem 0 b\nmem 0 a b\n");
    assert_eq!(cli(&["model", "eval", "--file", &single, "--formula", "x in y", "--assign", "x=a", "--assign", "y=b"]).code, OK);
    assert_eq!(cli(&["model", "eval", "--file", &single, "--formula", "x in y", "--assign", "x=b", "--assign", "y=a"]).code, FALSE);
    assert_eq!(cli(&["model", "eval", "--file", &single, "--formula", "x in y"]).code, INPUT_ERROR);
}

#[test]
fn bad_invocations() {
    assert_eq!(cli(&["frobnicate"]).code, INPUT_ERROR);
    assert_eq!(cli(&["stratify"]).code, INPUT_ERROR);
    assert_eq!(cli(&["stratify", "--formula", "x in"]).code, INPUT_ERROR);
    assert_eq!(cli(&["--help"]).code, OK);
}

#[test]
fn same_input_same_output() {
    let a = cli(&["model", "check-theory", "--seed", "7", "--samples", "20"]);
    let b = cli(&["model", "check-theory", "--seed", "7", "--samples", "20"]);
    assert_eq!(a, b);
}
