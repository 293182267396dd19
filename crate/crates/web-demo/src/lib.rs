//! Browser bindings: a handful of `stabfun` operations returning JSON text.
//!
//! Each binding takes the definitions as a JSON string (empty for the
//! built-in example) and returns the same JSON the CLI prints with
//! `--format json`.

use clap::Parser;
use stabfun::cli::{self, Cli};
use wasm_bindgen::prelude::*;

/// Run one CLI verb. `defs` empty means the built-in example.
pub fn run_json(defs: &str, args: &[&str]) -> Result<String, String> {
    let argv = ["stabfun", "--format", "json"].into_iter().chain(args.iter().copied());
    let parsed = Cli::try_parse_from(argv).map_err(|e| e.to_string())?;
    let text = (!defs.trim().is_empty()).then_some(defs);
    cli::execute_with(&parsed, text).map_err(|f| f.message().to_string())
}

pub fn corpus_json(n: u32) -> Result<String, String> {
    run_json("", &["--n", &n.to_string(), "corpus"])
}

pub fn gp_check_json(defs: &str, module: &str, algebra: &str, depth: u32) -> Result<String, String> {
    let depth = depth.to_string();
    let mut args = vec!["--depth", &depth, "gp-check", "--module", module];
    if !algebra.is_empty() {
        args.extend(["--algebra", algebra]);
    }
    run_json(defs, &args)
}

pub fn stable_image_json(defs: &str, functor: &str, module: &str, algebra: &str) -> Result<String, String> {
    let mut args = vec!["stable-image", "--functor", functor, "--module", module];
    if !algebra.is_empty() {
        args.extend(["--algebra", algebra]);
    }
    run_json(defs, &args)
}

#[wasm_bindgen]
pub fn corpus(n: u32) -> Result<String, JsError> {
    corpus_json(n).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = gpCheck)]
pub fn gp_check(defs: &str, module: &str, algebra: &str, depth: u32) -> Result<String, JsError> {
    gp_check_json(defs, module, algebra, depth).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = stableImage)]
pub fn stable_image(defs: &str, functor: &str, module: &str, algebra: &str) -> Result<String, JsError> {
    stable_image_json(defs, functor, module, algebra).map_err(|e| JsError::new(&e))
}
