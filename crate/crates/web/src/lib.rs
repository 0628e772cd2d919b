//! WebAssembly bindings for the browser demo in `www/`.
//!
//! Each export takes plain strings and numbers and returns a JSON string; errors come
//! back as a JavaScript exception carrying the message.

use grpquiv::finquiver::{algebra_decomposition, build, sink_source_report};
use grpquiv::numt::IntMatrix;
use grpquiv::starcalc::Algebra;
use grpquiv::torquiver::{fiber, reduce, verify_onb, OnbConfig, TorusPoint, TorusQuiverSpec};
use serde_json::json;
use wasm_bindgen::prelude::*;

fn spec_from(f: &str, g: &str) -> Result<TorusQuiverSpec, String> {
    let f: IntMatrix = f.parse().map_err(|e| format!("F: {e}"))?;
    let g: IntMatrix = g.parse().map_err(|e| format!("G: {e}"))?;
    Ok(reduce(&f, &g).map_err(|e| e.to_string())?.spec)
}

/// Edges of `Q_{n,m}(Z_p)` and, when `n` and `m` are units, the decomposition of its algebra.
pub fn quiver_json(p: u32, n: i32, m: i32) -> Result<String, String> {
    if p > 400 {
        return Err("p is limited to 400 in the demo".into());
    }
    let q = build(p as u64, n as i64, m as i64).map_err(|e| e.to_string())?;
    let (sinkless, sourceless) = sink_source_report(&q);
    let decomposition = algebra_decomposition(p as u64, n as i64, m as i64).ok();
    Ok(json!({
        "p": q.p,
        "n": q.n,
        "m": q.m,
        "edges": q.edges,
        "sinkless": sinkless,
        "sourceless": sourceless,
        "decomposition": decomposition.as_ref().map(|d| d.to_string()),
        "summands": decomposition.map(|d| d.summands),
    })
    .to_string())
}

/// Fiber over the angle vector `t` (comma separated) and the sampled basis defects.
pub fn torus_json(f: &str, g: &str, t: &str, samples: u32, seed: u32) -> Result<String, String> {
    let spec = spec_from(f, g)?;
    let angles: Vec<f64> = t
        .split(',')
        .map(|s| {
            s.trim()
                .parse::<f64>()
                .map_err(|_| format!("bad angle '{s}'"))
        })
        .collect::<Result<_, _>>()?;
    if angles.len() != spec.d() {
        return Err(format!(
            "expected {} angles, got {}",
            spec.d(),
            angles.len()
        ));
    }
    if spec.n() > 4096 {
        return Err("det F is limited to 4096 in the demo".into());
    }
    let ys: Vec<Vec<f64>> = fiber(&spec, &TorusPoint::new(angles))
        .iter()
        .map(|y| y.angles().to_vec())
        .collect();
    let cfg = OnbConfig {
        samples: samples.clamp(1, 1000) as usize,
        seed: seed as u64,
        ..OnbConfig::default()
    };
    let report = verify_onb(&spec, cfg).map_err(|e| e.to_string())?;
    Ok(json!({
        "a": spec.a(),
        "G": spec.g_rows(),
        "fiber": ys,
        "orth_defect": report.max_orthonormality_defect,
        "recon_defect": report.max_reconstruction_defect,
        "passed": report.passed(),
    })
    .to_string())
}

/// Normal form of a sum of words in `U_j`, `S`, `S*`.
pub fn normalize_json(f: &str, g: &str, word: &str) -> Result<String, String> {
    let alg = Algebra::new(spec_from(f, g)?).map_err(|e| e.to_string())?;
    let x = alg.normalize_str(word).map_err(|e| e.to_string())?;
    Ok(json!({
        "algebra": alg.to_string(),
        "text": x.to_string(),
        "terms": x.len(),
        "expectation": x.expectation().to_string(),
    })
    .to_string())
}

#[wasm_bindgen]
pub fn quiver(p: u32, n: i32, m: i32) -> Result<String, JsValue> {
    quiver_json(p, n, m).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn torus(f: &str, g: &str, t: &str, samples: u32, seed: u32) -> Result<String, JsValue> {
    torus_json(f, g, t, samples, seed).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn normalize(f: &str, g: &str, word: &str) -> Result<String, JsValue> {
    normalize_json(f, g, word).map_err(|e| JsValue::from_str(&e))
}
