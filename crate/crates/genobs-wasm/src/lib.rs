//! Browser bindings for the interactive demo page.
//!
//! Three operations, each returning a JSON string the page renders onto
//! canvases: the nonlinearity curve of a diagonal qubit family, an oblique
//! frame explorer, and the representability decision on a pasted document.
//! Errors come back as `{"error": "..."}` so the page can show them inline.

use wasm_bindgen::prelude::*;

use genobs::born::{prob_coeff, prob_effects};
use genobs::eig::min_eigenvalue;
use genobs::envelope::{DocumentEnvelope, VerdictDocument};
use genobs::matrix::{ComplexMatrix, StateVector};
use genobs::observable::{frame_effects, EffectFamily, ObliqueFrame};
use genobs::represent::decide;
use genobs::solve::{condition_number, frame_matrix};
use genobs::state::GeneralizedState;
use genobs::transition::{frame_transition, is_doubly_stochastic};

fn error_json(message: impl std::fmt::Display) -> String {
    serde_json::json!({ "error": message.to_string() }).to_string()
}

/// Probability of outcome 0 under the family {a|0><0|, b|1><1|} along the
/// diagonal states diag(t, 1-t), against the affine chord between the
/// endpoints. The returned `gap` array shows where the ratio rule bends away
/// from every possible POVM prediction.
#[wasm_bindgen]
pub fn nonlinearity_curve(e0_scale: f64, e1_scale: f64, samples: u32) -> String {
    if !(e0_scale > 0.0 && e1_scale > 0.0) {
        return error_json("both effect scales must be positive");
    }
    if !(2..=4096).contains(&samples) {
        return error_json("samples must lie in 2..=4096");
    }
    let family = match EffectFamily::new(
        vec![
            ComplexMatrix::diag(&[e0_scale, 0.0]),
            ComplexMatrix::diag(&[0.0, e1_scale]),
        ],
        None,
    ) {
        Ok(f) => f,
        Err(e) => return error_json(e),
    };

    let mut t_values = Vec::with_capacity(samples as usize);
    let mut curve = Vec::with_capacity(samples as usize);
    let mut chord = Vec::with_capacity(samples as usize);
    let mut gap = Vec::with_capacity(samples as usize);
    let p0 = 0.0; // probability of outcome 0 at diag(0, 1)
    let p1 = 1.0; // probability of outcome 0 at diag(1, 0)
    for k in 0..samples {
        let t = k as f64 / (samples - 1) as f64;
        let rho = match GeneralizedState::new(ComplexMatrix::diag(&[t, 1.0 - t])) {
            Ok(rho) => rho,
            Err(e) => return error_json(e),
        };
        let p = match prob_effects(&family, &rho) {
            Ok(d) => d.probs()[0],
            Err(e) => return error_json(e),
        };
        let affine = p0 + t * (p1 - p0);
        t_values.push(t);
        curve.push(p);
        chord.push(affine);
        gap.push(p - affine);
    }
    let max_gap = gap.iter().cloned().fold(0.0f64, |a, g| a.max(g.abs()));

    serde_json::json!({
        "t": t_values,
        "curve": curve,
        "chord": chord,
        "gap": gap,
        "max_gap": max_gap,
        "povm": family.is_povm(1e-10),
    })
    .to_string()
}

fn matrix_json(m: &ComplexMatrix) -> serde_json::Value {
    let rows: Vec<Vec<[f64; 2]>> = (0..m.dim())
        .map(|i| {
            (0..m.dim())
                .map(|j| [m.get(i, j).re, m.get(i, j).im])
                .collect()
        })
        .collect();
    serde_json::json!(rows)
}

/// Oblique-frame explorer: the frame {|0>, (cos t, sin t)} with t in
/// degrees, probed by the pure state (cos p, sin p). Reports the induced
/// effects, their total and its spectrum floor, the coefficient-rule
/// distribution, and the transition matrix against the standard basis with
/// its column sums.
#[wasm_bindgen]
pub fn frame_explorer(theta_degrees: f64, psi_degrees: f64) -> String {
    let theta = theta_degrees.to_radians();
    let second = match StateVector::from_re(&[theta.cos(), theta.sin()]) {
        Ok(v) => v,
        Err(e) => return error_json(e),
    };
    let frame = match ObliqueFrame::new(vec![StateVector::basis(2, 0), second], None) {
        Ok(f) => f,
        Err(e) => return error_json(e),
    };
    let family = match frame_effects(&frame) {
        Ok(f) => f,
        Err(e) => return error_json(e),
    };
    let total = family.total();
    let min_eig = match min_eigenvalue(&total) {
        Ok(v) => v,
        Err(e) => return error_json(e),
    };

    let psi = psi_degrees.to_radians();
    let probe = match StateVector::from_re(&[psi.cos(), psi.sin()]) {
        Ok(v) => v,
        Err(e) => return error_json(e),
    };
    let dist = match prob_coeff(&frame, &probe) {
        Ok(d) => d,
        Err(e) => return error_json(e),
    };

    let standard = match genobs::observable::pvm_from_orthonormal(
        vec![StateVector::basis(2, 0), StateVector::basis(2, 1)],
        vec![0.0, 1.0],
        None,
    ) {
        Ok(p) => p,
        Err(e) => return error_json(e),
    };
    let transition = match frame_transition(&frame, &standard) {
        Ok(t) => t,
        Err(e) => return error_json(e),
    };
    let rows: Vec<Vec<f64>> = (0..transition.size())
        .map(|i| transition.row(i).to_vec())
        .collect();

    let f = match frame_matrix(frame.vectors()) {
        Ok(f) => f,
        Err(e) => return error_json(e),
    };
    let overlap = frame.gram().get(0, 1);

    serde_json::json!({
        "overlap": [overlap.re, overlap.im],
        "condition_number": condition_number(&f),
        "effects": family.effects().iter().map(matrix_json).collect::<Vec<_>>(),
        "total": matrix_json(&total),
        "min_eigenvalue": min_eig,
        "povm": family.is_povm(1e-10),
        "distribution": dist.probs(),
        "transition": rows,
        "column_sums": transition.column_sums(),
        "doubly_stochastic": is_doubly_stochastic(&transition, 1e-10),
    })
    .to_string()
}

/// Runs the representability decision on a pasted observable document
/// (kind `effect_family`, `frame`, or `pvm`) and returns the verdict JSON.
#[wasm_bindgen]
pub fn decide_observable(document_json: &str) -> String {
    let doc = match DocumentEnvelope::from_json(document_json) {
        Ok(d) => d,
        Err(e) => return error_json(e),
    };
    let family = match doc.as_effect_family() {
        Ok(f) => f,
        Err(e) => return error_json(e),
    };
    match decide(&family) {
        Ok(verdict) => VerdictDocument::from_verdict(&verdict).to_json(),
        Err(e) => error_json(e),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn curve_bends_for_the_generalized_family() {
        let out = nonlinearity_curve(2.0, 1.0, 101);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert!(v.get("error").is_none(), "{out}");
        assert!(!v["povm"].as_bool().unwrap());
        // at t = 1/2 the curve sits at 2/3 while the chord sits at 1/2
        let mid = v["curve"][50].as_f64().unwrap();
        assert!((mid - 2.0 / 3.0).abs() <= 1e-12);
        assert!((v["chord"][50].as_f64().unwrap() - 0.5).abs() <= 1e-12);
        // the curve 2t/(1+t) peaks 3 - 2*sqrt(2) above the chord at t = sqrt(2)-1
        let peak = 3.0 - 2.0 * 2.0_f64.sqrt();
        assert!((v["max_gap"].as_f64().unwrap() - peak).abs() <= 1e-3);
    }

    #[test]
    fn curve_flattens_for_a_povm() {
        let out = nonlinearity_curve(1.0, 1.0, 33);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert!(v["povm"].as_bool().unwrap());
        assert!(v["max_gap"].as_f64().unwrap() <= 1e-12);
    }

    #[test]
    fn explorer_reports_the_worked_frame() {
        let out = frame_explorer(45.0, 90.0);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert!(v.get("error").is_none(), "{out}");
        assert!(!v["povm"].as_bool().unwrap());
        assert!((v["distribution"][0].as_f64().unwrap() - 1.0 / 3.0).abs() <= 1e-12);
        assert!((v["distribution"][1].as_f64().unwrap() - 2.0 / 3.0).abs() <= 1e-12);
        assert!((v["column_sums"][0].as_f64().unwrap() - 4.0 / 3.0).abs() <= 1e-12);
        assert!(!v["doubly_stochastic"].as_bool().unwrap());
    }

    #[test]
    fn explorer_rejects_degenerate_angles() {
        let out = frame_explorer(0.0, 30.0);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert!(v.get("error").is_some(), "{out}");
    }

    #[test]
    fn decide_handles_documents_and_garbage() {
        let doc = r#"{"kind":"effect_family","dim":2,"effects":[
            [[[2.0,0.0],[0.0,0.0]],[[0.0,0.0],[0.0,0.0]]],
            [[[0.0,0.0],[0.0,0.0]],[[0.0,0.0],[1.0,0.0]]]
        ]}"#;
        let out = decide_observable(doc);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["status"], "not_representable", "{out}");

        let out = decide_observable("not json");
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert!(v.get("error").is_some());
    }
}
