//! WebAssembly bindings for the browser demo. Every export takes and returns
//! JSON strings; the `*_impl` functions hold the logic and run natively too.

use ncball::deform::{self, Grid, IdealFamily, Verdict, DEFAULT_PLUCKER_CAP, RANK_TOL};
use ncball::{norms, FreePoly, TermRecord};
use serde_json::json;
use wasm_bindgen::prelude::*;

/// Largest grid the page may request.
pub const MAX_POINTS: usize = 2001;
/// Truncation cap for the seminorm curve.
pub const MAX_TRUNCATION: usize = 12;

fn family(name: &str) -> Result<IdealFamily, String> {
    match name {
        "q" => Ok(deform::family_qcommutator((0.0, 1.0))),
        "vanishing" => Ok(deform::family_vanishing_commutator((0.0, 1.0))),
        other => Err(format!("unknown family {other:?} (expected \"q\" or \"vanishing\")")),
    }
}

fn parse_poly(d: usize, text: &str) -> Result<FreePoly, String> {
    let terms: Vec<TermRecord> = serde_json::from_str(text).map_err(|e| format!("poly: {e}"))?;
    FreePoly::from_records(d, &terms).map_err(|e| format!("poly: {e}"))
}

fn grid(points: usize) -> Result<Grid, String> {
    if points == 0 || points > MAX_POINTS {
        return Err(format!("points must lie in [1, {MAX_POINTS}]"));
    }
    Grid::uniform(0.0, 1.0, points).map_err(|e| e.to_string())
}

pub fn norm_field_impl(family_name: &str, poly: &str, points: usize) -> Result<String, String> {
    let fam = family(family_name)?;
    let p = parse_poly(2, poly)?;
    let g = grid(points)?;
    let cutoff = (p.degree().max(0) as usize).max(fam.max_degree());
    let field = deform::norm_field(&fam, &p, &g, cutoff, RANK_TOL).map_err(|e| e.to_string())?;
    let report = deform::continuity_report(&field, g.default_threshold());
    let out = json!({
        "t": field.grid(),
        "lower": field.values.iter().map(|v| v.lower).collect::<Vec<_>>(),
        "upper": field.values.iter().map(|v| v.upper).collect::<Vec<_>>(),
        "exact": field.values.iter().all(|v| v.exact),
        "continuity": report,
    });
    Ok(out.to_string())
}

pub fn seminorm_curve_impl(poly: &str, d: usize, points: usize, truncation: usize) -> Result<String, String> {
    if truncation > MAX_TRUNCATION {
        return Err(format!("truncation must be at most {MAX_TRUNCATION}"));
    }
    if !(2..=MAX_POINTS).contains(&points) {
        return Err(format!("points must lie in [2, {MAX_POINTS}]"));
    }
    let f = parse_poly(d, poly)?;
    if f.degree() > truncation as isize {
        return Err(format!("poly degree {} exceeds truncation {truncation}", f.degree()));
    }
    let radii: Vec<f64> = (1..=points).map(|i| i as f64 / points as f64).collect();
    let seminorms = radii
        .iter()
        .map(|&r| norms::seminorm_trunc(&f, r, None, truncation))
        .collect::<Result<Vec<f64>, _>>()
        .map_err(|e| e.to_string())?;
    let monotone = seminorms.windows(2).all(|w| w[1] >= w[0] - deform::MONOTONE_SLACK);
    Ok(json!({ "radii": radii, "seminorms": seminorms, "monotone": monotone }).to_string())
}

pub fn grassmann_path_impl(family_name: &str, degree: usize, points: usize) -> Result<String, String> {
    let fam = family(family_name)?;
    let g = grid(points)?;
    if !(1..=4).contains(&degree) {
        return Err("degree must lie in [1, 4]".into());
    }
    let kernel = deform::kernel_dims(&fam, &g, degree, RANK_TOL).map_err(|e| e.to_string())?;
    let modulus = 10.0 * g.max_step().max(f64::MIN_POSITIVE);
    let out = match deform::grassmann_path(&fam, &g, degree, modulus, RANK_TOL, DEFAULT_PLUCKER_CAP) {
        Ok(path) => json!({ "kernel": kernel, "path": path.report }),
        Err(e) => json!({ "kernel": kernel, "path": null, "error": e.to_string(), "verdict": Verdict::Fail }),
    };
    Ok(out.to_string())
}

/// Norm field `t ↦ ‖p + Ī_t‖` on `points` equally spaced values in [0, 1].
#[wasm_bindgen]
pub fn norm_field(family: &str, poly: &str, points: usize) -> Result<String, JsError> {
    norm_field_impl(family, poly, points).map_err(|e| JsError::new(&e))
}

/// Truncated seminorm `‖F‖_r` (zero ideal) for `r = 1/points, …, 1`.
#[wasm_bindgen]
pub fn seminorm_curve(poly: &str, d: usize, points: usize, truncation: usize) -> Result<String, JsError> {
    seminorm_curve_impl(poly, d, points, truncation).map_err(|e| JsError::new(&e))
}

/// Kernel dimensions and chordal increments of `Ev(I_t^m)` along [0, 1].
#[wasm_bindgen]
pub fn grassmann_path(family: &str, degree: usize, points: usize) -> Result<String, JsError> {
    grassmann_path_impl(family, degree, points).map_err(|e| JsError::new(&e))
}
