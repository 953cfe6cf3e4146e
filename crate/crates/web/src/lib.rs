//! Browser bindings for the static demo page in `www/`.
//!
//! Each export returns a JSON string; errors are raised as JS exceptions.

use blindconv::ambiguity::{attack_with_certificate, rotational_family};
use blindconv::campaign::PaperSeeds;
use blindconv::nullspace::{m2_element, n0_element, n2_generate};
use blindconv::sampling::{rng_from_seed, uniform_signal};
use blindconv::{convolve, rank_estimate, DenseMatrix, LiftedConvOp, Signal, ToleranceProfile};
use serde::Serialize;
use wasm_bindgen::prelude::*;

#[derive(Serialize)]
struct RotationView {
    x3: Signal,
    y3: Signal,
    x4: Signal,
    y4: Signal,
    z3: Signal,
    z4: Signal,
    gap: f64,
}

/// Rotated pairs of the worked example at angles `theta`, `phi`.
pub fn rotation_json(theta: f64, phi: f64) -> Result<String, String> {
    let s = PaperSeeds::default();
    let f = rotational_family(&s.x1, &s.x2, &s.y1, &s.y2, theta, phi, &ToleranceProfile::default())
        .map_err(|e| e.to_string())?;
    let z3 = convolve(&f.x1p, &f.y1p);
    let z4 = convolve(&f.x2p, &f.y2p);
    let gap = z3.max_abs_diff(&z4).map_err(|e| e.to_string())?;
    let view = RotationView {
        x3: f.x1p,
        y3: f.y1p,
        x4: f.x2p,
        y4: f.y2p,
        z3,
        z4,
        gap,
    };
    Ok(serde_json::to_string(&view).expect("plain data"))
}

#[derive(Serialize)]
struct AttackView {
    x_alt: Signal,
    y_alt: Signal,
    z: Signal,
    z_alt: Signal,
    residual: f64,
    collinearity: f64,
    theta: f64,
    phi: f64,
}

/// Adversarial pair for user-supplied even-length signals.
pub fn attack_json(x: &[f64], y: &[f64]) -> Result<String, String> {
    let x = Signal::from_slice(x).map_err(|e| format!("x: {e}"))?;
    let y = Signal::from_slice(y).map_err(|e| format!("y: {e}"))?;
    let c = attack_with_certificate(&x, &y, &ToleranceProfile::default()).map_err(|e| e.to_string())?;
    let view = AttackView {
        z: convolve(&x, &y),
        z_alt: convolve(&c.pair.x_alt, &c.pair.y_alt),
        x_alt: c.pair.x_alt,
        y_alt: c.pair.y_alt,
        residual: c.pair.residual,
        collinearity: c.pair.collinearity,
        theta: c.theta,
        phi: c.phi,
    };
    Ok(serde_json::to_string(&view).expect("plain data"))
}

#[derive(Serialize)]
struct HeatmapView {
    matrix: DenseMatrix,
    lift_residual: f64,
    rank: usize,
}

/// Seeded kernel element of family `n0`, `n2` or `m2` (square, `n >= 3`).
pub fn heatmap_json(family: &str, m: usize, n: usize, seed: u64) -> Result<String, String> {
    let mut rng = rng_from_seed(seed);
    let matrix = match family {
        "n0" if m >= 2 && n >= 2 => Ok(n0_element(
            &uniform_signal(&mut rng, m - 1),
            &uniform_signal(&mut rng, n - 1),
        )),
        "n2" => n2_generate(m, n, seed).map(|(w, _)| w),
        "m2" if m == n && n >= 3 => {
            let u = uniform_signal(&mut rng, n - 2);
            let lambda = 0.5 + uniform_signal(&mut rng, 1).max_abs();
            m2_element(&u, lambda)
        }
        "m2" => return Err("m2 needs a square size of at least 3".into()),
        "n0" => return Err("n0 needs at least 2 rows and 2 columns".into()),
        other => return Err(format!("unknown family `{other}`")),
    }
    .map_err(|e| e.to_string())?;
    let op = LiftedConvOp::for_matrix(&matrix);
    let lift_residual = op.apply(&matrix).map_err(|e| e.to_string())?.max_abs();
    let view = HeatmapView {
        rank: rank_estimate(&matrix, &ToleranceProfile::default()),
        lift_residual,
        matrix,
    };
    Ok(serde_json::to_string(&view).expect("plain data"))
}

#[wasm_bindgen]
pub fn rotation(theta: f64, phi: f64) -> Result<String, JsError> {
    rotation_json(theta, phi).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn adversarial_pair(x: Vec<f64>, y: Vec<f64>) -> Result<String, JsError> {
    attack_json(&x, &y).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn kernel_heatmap(family: &str, m: usize, n: usize, seed: u32) -> Result<String, JsError> {
    heatmap_json(family, m, n, u64::from(seed)).map_err(|e| JsError::new(&e))
}
