//! WebAssembly bindings for the demo page. The plain functions return
//! `Result<_, String>` so they can be tested natively; the `js_*` wrappers
//! are what the page calls.

use std::sync::Arc;

use otfst::apply::apply_str;
use otfst::exactness::check_grammar;
use otfst::grammars::{self, BUILTIN_NAMES};
use otfst::ot::{compile_grammar, Grammar, Method};
use otfst::Alphabet;
use wasm_bindgen::prelude::*;

fn load(grammar: &str, method: &str, prec: &str) -> Result<Grammar, String> {
    let sigma = Arc::new(Alphabet::default_sigma());
    let method: Method = method.parse().map_err(|e: otfst::Error| e.to_string())?;
    let mut g = if BUILTIN_NAMES.contains(&grammar.trim()) {
        grammars::builtin(grammar.trim(), &sigma, method)
    } else {
        Grammar::parse("custom", grammar, &sigma, method).map(|mut g| {
            g.set_method(method);
            g
        })
    }
    .map_err(|e| e.to_string())?;
    for item in prec.split([',', ' ']).filter(|s| !s.is_empty()) {
        let parse = |n: &str| n.trim().parse::<u32>().map_err(|_| format!("bad precision `{item}`"));
        match item.split_once('=') {
            Some((name, n)) => g.set_precision(name.trim(), parse(n)?).map_err(|e| e.to_string())?,
            None => g.set_all_precisions(parse(item)?),
        }
    }
    Ok(g)
}

/// Outputs for `input`, sorted, one per line.
pub fn apply(grammar: &str, method: &str, prec: &str, input: &str) -> Result<String, String> {
    let t = compile_grammar(&load(grammar, method, prec)?).map_err(|e| e.to_string())?;
    let outs = apply_str(&t, input).map_err(|e| e.to_string())?;
    Ok(outs.into_iter().collect::<Vec<_>>().join("\n"))
}

#[wasm_bindgen]
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Comparison {
    counting: String,
    matching: String,
    pub counting_states: usize,
    pub matching_states: usize,
}

#[wasm_bindgen]
impl Comparison {
    #[wasm_bindgen(getter)]
    pub fn counting(&self) -> String {
        self.counting.clone()
    }

    #[wasm_bindgen(getter)]
    pub fn matching(&self) -> String {
        self.matching.clone()
    }
}

/// The same grammar and precisions compiled both ways.
pub fn compare(grammar: &str, prec: &str, input: &str) -> Result<Comparison, String> {
    let run = |method| -> Result<(String, usize), String> {
        let t = compile_grammar(&load(grammar, method, prec)?).map_err(|e| e.to_string())?;
        let outs = apply_str(&t, input).map_err(|e| e.to_string())?;
        Ok((outs.into_iter().collect::<Vec<_>>().join("\n"), t.num_states()))
    };
    let (counting, counting_states) = run("count")?;
    let (matching, matching_states) = run("match")?;
    Ok(Comparison { counting, matching, counting_states, matching_states })
}

/// Exactness report, optionally bounded by input length (0 = global).
pub fn check(grammar: &str, method: &str, prec: &str, len: usize) -> Result<String, String> {
    let g = load(grammar, method, prec)?;
    let report = check_grammar(&g, (len > 0).then_some(len)).map_err(|e| e.to_string())?;
    Ok(report.to_text())
}

#[wasm_bindgen(js_name = builtinNames)]
pub fn js_builtin_names() -> String {
    BUILTIN_NAMES.join("\n")
}

#[wasm_bindgen(js_name = builtinSource)]
pub fn js_builtin_source(name: &str) -> String {
    grammars::builtin_source(name).unwrap_or_default().to_string()
}

#[wasm_bindgen(js_name = apply)]
pub fn js_apply(grammar: &str, method: &str, prec: &str, input: &str) -> Result<String, JsError> {
    apply(grammar, method, prec, input).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = compare)]
pub fn js_compare(grammar: &str, prec: &str, input: &str) -> Result<Comparison, JsError> {
    compare(grammar, prec, input).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = check)]
pub fn js_check(grammar: &str, method: &str, prec: &str, len: usize) -> Result<String, JsError> {
    check(grammar, method, prec, len).map_err(|e| JsError::new(&e))
}
