//! Browser bindings. Every entry point takes and returns JSON strings so the
//! page needs no glue beyond `JSON.parse`.

use serde_json::json;
use wasm_bindgen::prelude::*;

use superopt::certify::{certify, CertifyConfig};
use superopt::factory::paper_example;
use superopt::hankel::hankel_norm;
use superopt::laurent::{default_grid_size, eval_on_grid, MatrixLaurentPoly};

fn parse(symbol: &str) -> Result<MatrixLaurentPoly, String> {
    MatrixLaurentPoly::from_json_str(symbol).map_err(|e| e.to_string())
}

/// Symbol file for one of the built-in examples.
pub fn example(name: &str) -> Result<String, String> {
    let (phi, _) = paper_example(name).map_err(|e| e.to_string())?;
    Ok(phi.to_json_string())
}

/// Verdict per check plus the singular levels and both norms.
pub fn certify_summary(symbol: &str) -> Result<String, String> {
    let phi = parse(symbol)?;
    let cert = certify(&phi, &CertifyConfig { dmax: 32, ..Default::default() }).map_err(|e| e.to_string())?;
    let verdicts: Vec<_> = cert.verdicts().iter().map(|(name, v)| json!({ "check": name, "verdict": v })).collect();
    Ok(json!({
        "levels": cert.profile.levels,
        "multiplicities": cert.profile.multiplicities,
        "sup_norm": cert.sup_norm,
        "hankel_norm": cert.hankel_norm,
        "verdicts": verdicts,
    })
    .to_string())
}

pub fn hankel(symbol: &str) -> Result<String, String> {
    let h = hankel_norm(&parse(symbol)?).map_err(|e| e.to_string())?;
    Ok(json!({ "norm": h.norm, "stabilized_at": h.stabilized_at }).to_string())
}

/// `s_i(Φ(e^{iθ}))` on `points` equally spaced angles, one array per index.
pub fn traces(symbol: &str, points: usize) -> Result<String, String> {
    let phi = parse(symbol)?;
    let n = points.max(default_grid_size(phi.band())).next_power_of_two().min(4096);
    let grid = eval_on_grid(&phi, n).map_err(|e| e.to_string())?;
    Ok(json!({ "points": n, "traces": grid.singular_traces() }).to_string())
}

#[wasm_bindgen(js_name = example)]
pub fn example_js(name: &str) -> Result<String, JsValue> {
    example(name).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen(js_name = certify)]
pub fn certify_js(symbol: &str) -> Result<String, JsValue> {
    certify_summary(symbol).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen(js_name = hankelNorm)]
pub fn hankel_js(symbol: &str) -> Result<String, JsValue> {
    hankel(symbol).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen(js_name = singularTraces)]
pub fn traces_js(symbol: &str, points: usize) -> Result<String, JsValue> {
    traces(symbol, points).map_err(|e| JsValue::from_str(&e))
}
