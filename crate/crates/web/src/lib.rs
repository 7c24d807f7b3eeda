//! Browser bindings for three interactive views: a class-number report for one
//! discriminant, the convergence of the truncated Euler product towards
//! `L(1, chi_d)`, and the extremal statistic across the family `4n^2 + 1`.
//!
//! The plain functions return `Result<_, String>` and are what the tests use;
//! the `#[wasm_bindgen]` exports forward to them.

use realquad::arith::is_fundamental;
use realquad::chowla::{chowla_regulator, enumerate_family};
use realquad::classnum::{class_number, extremal_statistic_from};
use realquad::lfun::{euler_truncated, l_series};
use realquad::sieve::Primes;
use serde_json::json;
use wasm_bindgen::prelude::*;

/// Largest discriminant the page accepts for a class-number report.
pub const MAX_REPORT_D: u64 = 1_000_000;
/// Largest Euler cutoff for the convergence curve.
pub const MAX_CURVE_Z: u64 = 1_000_000;
/// Largest `x` for the family scatter.
pub const MAX_SCATTER_X: u64 = 10_000_000_000;

/// Class number, unit and L-value of a fundamental discriminant, as JSON.
pub fn class_number_json(d: u64) -> Result<String, String> {
    if d > MAX_REPORT_D {
        return Err(format!("d must be at most {MAX_REPORT_D}"));
    }
    if !is_fundamental(d as i64) || d < 5 {
        return Err(format!("{d} is not a positive fundamental discriminant"));
    }
    let c = class_number(d).map_err(|e| e.to_string())?;
    let unit = realquad::pell::fundamental_unit(d).map_err(|e| e.to_string())?;
    let statistic = extremal_statistic_from(c.h as f64, d).map_err(|e| e.to_string())?;
    Ok(json!({
        "d": d,
        "h": c.h,
        "narrow_h": c.narrow_h,
        "norm_sign": c.norm_sign,
        "unit_a": unit.a.to_string(),
        "unit_b": unit.b.to_string(),
        "regulator": c.regulator,
        "L": c.l_value,
        "h_analytic": c.h_analytic,
        "statistic": statistic,
    })
    .to_string())
}

/// `[z_1, P(z_1), z_2, P(z_2), ..., L]`: the truncated Euler product at
/// `points` geometrically spaced cutoffs up to `z_max`, then the exact value.
pub fn euler_curve(d: u64, z_max: u64, points: u32) -> Result<Vec<f64>, String> {
    if !is_fundamental(d as i64) || !(5..=MAX_REPORT_D).contains(&d) {
        return Err(format!("d must be a fundamental discriminant in [5, {MAX_REPORT_D}]"));
    }
    if !(2..=MAX_CURVE_Z).contains(&z_max) || points < 2 {
        return Err(format!("need 2 <= z_max <= {MAX_CURVE_Z} and at least two points"));
    }
    let primes = Primes::up_to(z_max + 1);
    let mut out = Vec::with_capacity(2 * points as usize + 1);
    let ratio = (z_max as f64 / 2.0).powf(1.0 / (points - 1) as f64);
    for i in 0..points {
        let z = 2.0 * ratio.powi(i as i32);
        out.push(z);
        out.push(euler_truncated(d, z, &primes).map_err(|e| e.to_string())?);
    }
    out.push(l_series(d).map_err(|e| e.to_string())?);
    Ok(out)
}

/// `[d_1, s_1, d_2, s_2, ...]` for squarefree `d = 4n^2 + 1 <= x`, with `s` the
/// extremal statistic from the Euler product truncated at `z`.
pub fn family_scatter(x: u64, z: u64) -> Result<Vec<f64>, String> {
    if !(5..=MAX_SCATTER_X).contains(&x) || !(2..=MAX_CURVE_Z).contains(&z) {
        return Err(format!("need 5 <= x <= {MAX_SCATTER_X} and 2 <= z <= {MAX_CURVE_Z}"));
    }
    let primes = Primes::up_to(z + 1);
    let mut out = Vec::new();
    for m in enumerate_family(x, 1) {
        let l = euler_truncated(m.d, z as f64, &primes).map_err(|e| e.to_string())?;
        let h = (m.d as f64).sqrt() * l / (2.0 * chowla_regulator(m.n));
        out.push(m.d as f64);
        out.push(extremal_statistic_from(h, m.d).map_err(|e| e.to_string())?);
    }
    Ok(out)
}

#[wasm_bindgen(js_name = classNumberReport)]
pub fn class_number_report(d: f64) -> Result<String, JsValue> {
    class_number_json(d as u64).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen(js_name = eulerCurve)]
pub fn euler_curve_js(d: f64, z_max: f64, points: u32) -> Result<Vec<f64>, JsValue> {
    euler_curve(d as u64, z_max as u64, points).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen(js_name = familyScatter)]
pub fn family_scatter_js(x: f64, z: f64) -> Result<Vec<f64>, JsValue> {
    family_scatter(x as u64, z as u64).map_err(|e| JsValue::from_str(&e))
}
