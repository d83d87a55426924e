//! wasm-bindgen surface for the browser demo: generate a synthetic
//! dataset, run BSOD round by round, and run the baseline detectors.
//!
//! The exported functions are thin wrappers over [`demo`], which is plain
//! Rust and unit-tested natively.

use wasm_bindgen::prelude::*;

pub mod demo;

fn to_js<T: serde::Serialize>(value: &T) -> Result<JsValue, JsValue> {
    serde_wasm_bindgen::to_value(value).map_err(|e| JsValue::from_str(&e.to_string()))
}

fn err_js(e: impl std::fmt::Display) -> JsValue {
    JsValue::from_str(&e.to_string())
}

/// Generates a labeled dataset (`kind` is "circle" or "moons") and returns
/// `{ xs, ys, labels, realized_contamination }`.
#[wasm_bindgen]
pub fn generate_dataset(
    kind: &str,
    n_inliers: u32,
    contamination: f64,
    seed: u32,
) -> Result<JsValue, JsValue> {
    let out = demo::generate_dataset(kind, n_inliers as usize, contamination, seed as u64)
        .map_err(err_js)?;
    to_js(&out)
}

/// Runs the boosted spectral detector and returns per-round removals for
/// animation: `{ flagged, scores, rounds: [{ removed, eigenvalue, ... }] }`.
#[wasm_bindgen]
pub fn run_bsod(
    xs: &[f64],
    ys: &[f64],
    contamination: f64,
    eps: f64,
    seed: u32,
) -> Result<JsValue, JsValue> {
    let out = demo::run_bsod(xs, ys, contamination, eps, seed as u64).map_err(err_js)?;
    to_js(&out)
}

/// Runs a baseline (`method` is "lof" or "iforest") and returns
/// `{ flagged, scores }`.
#[wasm_bindgen]
pub fn run_baseline(
    method: &str,
    xs: &[f64],
    ys: &[f64],
    contamination: f64,
    seed: u32,
) -> Result<JsValue, JsValue> {
    let out = demo::run_baseline(method, xs, ys, contamination, seed as u64).map_err(err_js)?;
    to_js(&out)
}
