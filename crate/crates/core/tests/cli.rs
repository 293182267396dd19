use std::process::Command;

use stabfun::cli::{self, Definitions};
use stabfun::corpus::Family;

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("stabfun").chain(args.iter().copied());
    let code = cli::run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

const SMALL: &str = r#"{
  "field": {"prime": 7},
  "algebras": {
    "Q": {"vertices": ["0", "1", "2"],
          "arrows": [{"name": "a", "from": "0", "to": "1"}, {"name": "b", "from": "1", "to": "2"}],
          "relations": [[[1, "a b"]]]}
  },
  "modules": {
    "M": {"algebra": "Q", "dims": [1, 1, 0], "arrows": {"a": [[1]], "b": []}}
  }
}"#;

fn write_tmp(name: &str, text: &str) -> std::path::PathBuf {
    let dir = std::env::temp_dir().join(format!("stabfun-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

#[test]
fn roundtrip_builtin() {
    for n in 1..=2 {
        let c = Family::new(n, 101).unwrap();
        let d = Definitions::builtin(&c);
        let text = d.to_json();
        let back = Definitions::parse_str(&text, None).unwrap();
        assert!(d.same_objects(&back), "n = {n}");
        assert_eq!(back.to_json(), text);
    }
}

#[test]
fn roundtrip_small_file() {
    let d = Definitions::parse_str(SMALL, None).unwrap();
    assert_eq!(d.prime, 7);
    let back = Definitions::parse_str(&d.to_json(), None).unwrap();
    assert!(d.same_objects(&back));
}

#[test]
fn ext_simple_over_a() {
    let (code, out, _) = run(&["ext", "--from", "S1", "--to", "S0", "--degree", "1", "--algebra", "A", "--format", "json"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["dim"], 1);
}

#[test]
fn gp_check_tensor_projective() {
    let (code, out, _) = run(&["gp-check", "--module", "S_tensor_P1"]);
    assert_eq!(code, 0);
    assert!(out.contains("GP-up-to-depth 8"), "{out}");
}

#[test]
fn tilting_check_builtin() {
    let (code, out, _) = run(&["tilting-check", "--candidate", "T_example", "--format", "json"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["tilting"], true);
}

#[test]
fn corpus_dimensions() {
    let (code, out, _) = run(&["corpus", "--format", "json"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["manifest"]["dims"], serde_json::json!([7, 10, 14, 20]));
    for key in ["field", "algebras", "modules", "complexes", "functors"] {
        assert!(v["definitions"].get(key).is_some(), "missing {key}");
    }
}

#[test]
fn unknown_arrow_is_a_parse_error() {
    let bad = SMALL.replace("\"a b\"", "\"a zz\"");
    let p = write_tmp("bad.json", &bad);
    let (code, _, err) = run(&["--defs", p.to_str().unwrap(), "decompose", "--module", "M"]);
    assert_eq!(code, 2);
    assert!(err.contains("zz"), "{err}");
}

#[test]
fn definitions_file_and_prime_override() {
    let p = write_tmp("small.json", SMALL);
    let path = p.to_str().unwrap();
    let (code, out, _) = run(&["--defs", path, "projdim", "--module", "M", "--format", "json"]);
    assert_eq!(code, 0, "{out}");
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    // M is the projective cover of S0 since ab = 0
    assert_eq!(v["projdim"], 0);
    let (_, out, _) = run(&["--defs", path, "projdim", "--module", "S0", "--algebra", "Q", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["projdim"], 2);
    let (code, _, _) = run(&["--defs", path, "--prime", "13", "projdim", "--module", "M"]);
    assert_eq!(code, 0);
    let (code, _, err) = run(&["--defs", path, "--prime", "12", "projdim", "--module", "M"]);
    assert_eq!(code, 2);
    assert!(err.contains("prime"));
}

#[test]
fn exit_codes() {
    assert_eq!(run(&[]).0, 2);
    assert_eq!(run(&["nonsense"]).0, 2);
    assert_eq!(run(&["--help"]).0, 0);
    assert_eq!(run(&["ext", "--from", "S1"]).0, 2);
    assert_eq!(run(&["projdim", "--module", "S0", "--algebra", "A", "--format", "dot"]).0, 2);
    assert_eq!(run(&["apply", "--functor", "nope", "--module", "S0"]).0, 2);
    // Omega with negative exponent is not a non-negative functor
    let p = write_tmp(
        "neg.json",
        r#"{"algebras": {"K": {"vertices": ["0"], "arrows": [], "relations": []}, "D": {"dual_numbers_of": "K"}},
            "functors": {"W": {"omega": "D", "k": -1}}}"#,
    );
    let (code, _, err) = run(&["--defs", p.to_str().unwrap(), "stable-image", "--functor", "W", "--module", "S0"]);
    assert_eq!(code, 1, "{err}");
}

#[test]
fn same_seed_same_output() {
    let args = ["decompose", "--module", "M_0_4", "--seed", "17", "--format", "json"];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.0, 0);
    assert_eq!(a.1, b.1);
}

#[test]
fn dot_output_counts() {
    let (code, out, _) = run(&["stable-image", "--functor", "F_ext", "--module", "S_tensor_Q1", "--format", "dot"]);
    assert_eq!(code, 0);
    let nodes = out.lines().filter(|l| l.contains("[label=") && !l.contains("->")).count();
    let (_, js, _) = run(&["stable-image", "--functor", "F_ext", "--module", "S_tensor_Q1", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&js).unwrap();
    let total: u64 = v["image"]["dims"].as_array().unwrap().iter().map(|d| d.as_u64().unwrap()).sum();
    assert_eq!(nodes as u64, total);
}

#[test]
fn exact_image_verb() {
    let (code, out, _) = run(&["exact-image", "--functor", "F_ext", "--ses", "ses_0_2", "--format", "json"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["exact"], true);
    assert_eq!(v["edges_match"], true);
}

#[test]
fn binary_exit_status() {
    let bin = env!("CARGO_BIN_EXE_stabfun");
    let ok = Command::new(bin).args(["projdim", "--module", "S0", "--algebra", "A"]).output().unwrap();
    assert_eq!(ok.status.code(), Some(0));
    let bad = Command::new(bin).args(["projdim"]).output().unwrap();
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn format_doc_examples_parse() {
    let doc = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/../../docs/FORMAT.md")).unwrap();
    let blocks: Vec<&str> = doc.split("```json\n").skip(1).map(|b| b.split("```").next().unwrap()).collect();
    assert_eq!(blocks.len(), 3);
    let names = ["q.json", "e.json", "t.json"];
    for (b, n) in blocks.iter().zip(names) {
        let d = Definitions::parse_str(b, None).unwrap_or_else(|e| panic!("{n}: {e}"));
        let back = Definitions::parse_str(&d.to_json(), None).unwrap();
        assert!(d.same_objects(&back), "{n}");
        write_tmp(n, b);
    }
    let path = |n: &str| write_tmp(n, blocks[names.iter().position(|x| *x == n).unwrap()]);
    let q = path("q.json");
    let (code, out, _) = run(&["--defs", q.to_str().unwrap(), "projdim", "--module", "S0", "--algebra", "Q"]);
    assert_eq!(code, 0);
    assert!(out.contains("pd S0 = 2"));
    let e = path("e.json");
    let (code, out, _) = run(&["--defs", e.to_str().unwrap(), "gp-check", "--module", "k"]);
    assert_eq!(code, 0);
    assert!(out.contains("GP-up-to-depth"));
    let t = path("t.json");
    let t = t.to_str().unwrap();
    let (code, out, _) = run(&["--defs", t, "tilting-check", "--candidate", "F", "--format", "json"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["tilting"], true);
    let (code, _, _) = run(&["--defs", t, "stable-image", "--functor", "F_plus", "--module", "Sx", "--algebra", "B[e]"]);
    assert_eq!(code, 0);
    let (code, _, _) = run(&["--defs", t, "stable-image", "--functor", "F_e", "--module", "Sx", "--algebra", "B[e]"]);
    assert_eq!(code, 1);
}
