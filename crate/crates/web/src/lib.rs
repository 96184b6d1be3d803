//! Browser bindings. Each export takes plain strings and numbers from the
//! page and returns the JSON wire format used by the command-line tool.
//!
//! The `*_json` functions are ordinary Rust and are what the tests call;
//! the `#[wasm_bindgen]` wrappers only convert the error type.

use hecke_core::coset::enumerate_cosets;
use hecke_core::json::{self, object};
use hecke_core::{Budget, CosetType, HeckeAlgebra, Side};
use serde_json::json;
use wasm_bindgen::prelude::*;

/// Enumeration cap for the page; large types are refused, not attempted.
pub const WEB_BUDGET: Budget = Budget(50_000_000);

fn parse_alpha(s: &str) -> Result<Vec<u32>, String> {
    s.split(',')
        .map(|x| x.trim().parse::<u32>().map_err(|_| format!("bad exponent '{}'", x.trim())))
        .collect()
}

fn coset_type(n: usize, p: u64, alpha: &str) -> Result<CosetType, String> {
    CosetType::new(n, p, parse_alpha(alpha)?).map_err(|e| e.to_string())
}

pub fn degree_json(n: usize, p: u64, alpha: &str) -> Result<String, String> {
    let t = coset_type(n, p, alpha)?;
    let h = HeckeAlgebra::new(WEB_BUDGET);
    let d = h.degree(&t.label()).map_err(|e| e.to_string())?;
    Ok(json::emit(&object([
        ("label", json::label_to_json(&t.label())),
        ("type", json!(t.to_string())),
        ("degree", json!(d.to_string())),
    ])))
}

pub fn cosets_json(n: usize, p: u64, alpha: &str, side: &str) -> Result<String, String> {
    let t = coset_type(n, p, alpha)?;
    let side = match side {
        "right" => Side::Right,
        "left" => Side::Left,
        other => return Err(format!("side must be 'right' or 'left', got '{other}'")),
    };
    let set = enumerate_cosets(&t, side, WEB_BUDGET).map_err(|e| e.to_string())?;
    Ok(json::emit(&json::repset_to_json(&set)))
}

pub fn product_json(p: u64, alpha1: &str, q: u64, alpha2: &str) -> Result<String, String> {
    let t1 = coset_type(3, p, alpha1)?;
    let t2 = coset_type(3, q, alpha2)?;
    let h = HeckeAlgebra::new(WEB_BUDGET);
    let prod = h.multiply(&t1.label(), &t2.label()).map_err(|e| e.to_string())?;
    Ok(json::emit(&object([
        ("factors", json!([t1.to_string(), t2.to_string()])),
        ("display", json!(prod.to_string())),
        ("product", json::element_to_json(&prod)),
    ])))
}

// Primes cross the boundary as u32 so the page deals in plain numbers.

#[wasm_bindgen]
pub fn degree(n: usize, p: u32, alpha: &str) -> Result<String, JsError> {
    degree_json(n, p.into(), alpha).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn cosets(n: usize, p: u32, alpha: &str, side: &str) -> Result<String, JsError> {
    cosets_json(n, p.into(), alpha, side).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn product(p: u32, alpha1: &str, q: u32, alpha2: &str) -> Result<String, JsError> {
    product_json(p.into(), alpha1, q.into(), alpha2).map_err(|e| JsError::new(&e))
}
