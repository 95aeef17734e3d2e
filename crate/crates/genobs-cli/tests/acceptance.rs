//! Acceptance criterion 10: stored golden files match the binary's output
//! byte for byte, and serialized documents keep full float precision.

use std::process::Command;
use std::time::Instant;

use genobs::envelope::DocumentEnvelope;
use genobs::matrix::ComplexMatrix;
use genobs::state::GeneralizedState;

fn run(args: &[&str]) -> Vec<u8> {
    let out = Command::new(env!("CARGO_BIN_EXE_genobs"))
        .args(args)
        .output()
        .expect("binary runs");
    assert!(
        out.status.success(),
        "{:?} failed: {}",
        args,
        String::from_utf8_lossy(&out.stderr)
    );
    out.stdout
}

fn golden(name: &str) -> Vec<u8> {
    std::fs::read(format!("tests/goldens/{name}")).expect("golden file exists")
}

#[test]
fn acceptance_10_cli_golden_files() {
    let started = Instant::now();
    let cases: &[(&str, &[&str])] = &[
        ("demo_example.txt", &["demo-example"]),
        (
            "prob.txt",
            &[
                "prob",
                "tests/fixtures/rho_mixed.json",
                "tests/fixtures/example_effects.json",
            ],
        ),
        (
            "decide.txt",
            &["decide", "tests/fixtures/example_effects.json"],
        ),
        (
            "decide_povm.txt",
            &["decide", "tests/fixtures/povm_projective.json"],
        ),
        ("frame.txt", &["frame", "tests/fixtures/oblique_frame.json"]),
        (
            "transition.txt",
            &[
                "transition",
                "tests/fixtures/oblique_frame.json",
                "tests/fixtures/standard_pvm.json",
                "--check-doubly-stochastic",
            ],
        ),
        (
            "sample.txt",
            &[
                "sample",
                "tests/fixtures/example_effects.json",
                "tests/fixtures/rho_mixed.json",
                "--n",
                "1000",
            ],
        ),
    ];
    for (name, args) in cases {
        let observed = run(args);
        let expected = golden(name);
        assert_eq!(
            observed,
            expected,
            "golden mismatch for {name}:\n--- observed ---\n{}",
            String::from_utf8_lossy(&observed)
        );
    }
    println!(
        "acceptance criterion 10: PASS — {} golden files byte-identical ({} ms)",
        cases.len(),
        started.elapsed().as_millis()
    );
}

#[test]
fn acceptance_10_roundtrip_keeps_full_precision() {
    let started = Instant::now();

    // 2/3 must survive serialization with at least 17 significant digits
    let third = 2.0 / 3.0;
    let state =
        GeneralizedState::new(ComplexMatrix::diag(&[third, 1.0 - third])).unwrap();
    let doc = DocumentEnvelope::from_generalized_state(&state);
    let json = doc.to_json();
    assert!(json.contains("0.6666666666666666"), "{json}");

    let restored = DocumentEnvelope::from_json(&json)
        .unwrap()
        .as_generalized_state()
        .unwrap();
    for (a, b) in restored.op().entries().iter().zip(state.op().entries()) {
        assert_eq!(a.re.to_bits(), b.re.to_bits());
        assert_eq!(a.im.to_bits(), b.im.to_bits());
    }
    println!(
        "acceptance criterion 10 (roundtrip): PASS — bit-exact state documents ({} ms)",
        started.elapsed().as_millis()
    );
}
