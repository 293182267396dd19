use serde_json::Value;
use stabfun_web::{corpus_json, gp_check_json, stable_image_json};

#[test]
fn corpus_manifest() {
    let v: Value = serde_json::from_str(&corpus_json(1).unwrap()).unwrap();
    assert_eq!(v["manifest"]["dims"], serde_json::json!([7, 10, 14, 20]));
}

#[test]
fn gp_check_builtin() {
    let v: Value = serde_json::from_str(&gp_check_json("", "M_0_1", "", 4).unwrap()).unwrap();
    assert_eq!(v["verdict"], "GP-up-to-depth 4");
}

#[test]
fn stable_image_on_supplied_definitions() {
    let defs = corpus_json(1).unwrap();
    let v: Value = serde_json::from_str(&defs).unwrap();
    let defs = v["definitions"].to_string();
    let out: Value = serde_json::from_str(&stable_image_json(&defs, "F_ext", "S_tensor_Q1", "").unwrap()).unwrap();
    let dims = out["image"]["dims"].as_array().unwrap();
    assert_eq!(dims.len(), 4);
}

#[test]
fn errors_are_messages() {
    assert!(gp_check_json("{not json", "x", "", 4).is_err());
    assert!(stable_image_json("", "nope", "S0", "B").unwrap_err().contains("nope"));
}
