//! Command-line interface: evaluate generalized Born-rule distributions,
//! decide POVM-representability, expand oblique frames into effect families,
//! analyze transition matrices, and sample outcome counts, all over the JSON
//! document format.

mod report;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgAction, Parser, Subcommand};

use genobs::born::{effects_denominator, prob_effects, sample_outcomes};
use genobs::eig::min_eigenvalue;
use genobs::envelope::{DocumentEnvelope, VerdictDocument};
use genobs::error::Error;
use genobs::matrix::ComplexMatrix;
use genobs::observable::{frame_effects, frame_projectors, EffectFamily};
use genobs::represent::{decide_with, RepresentabilityVerdict};
use genobs::rng::RNG_ALGORITHM;
use genobs::solve::{condition_number, frame_matrix};
use genobs::state::GeneralizedState;
use genobs::transition::{
    frame_transition, is_doubly_stochastic, transition_matrix, TransitionMatrix,
};

use report::{fmt15, matrix_lines, real_row};

const DECIDE_TRIALS: u64 = 64;

#[derive(Parser)]
#[command(
    name = "genobs",
    about = "Generalized quantum observables: ratio-rule probabilities, POVM-representability, transition analysis",
    version
)]
struct Cli {
    /// Tolerance for report-level checks (POVM flags, double stochasticity).
    #[arg(long, global = true, default_value_t = 1e-10)]
    tol: f64,

    /// Seed for sampling and randomized verification.
    #[arg(long, global = true, default_value_t = 7)]
    seed: u64,

    /// Emit machine-readable JSON instead of the plain-text report.
    #[arg(long, global = true, action = ArgAction::SetTrue)]
    json: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Outcome distribution of an observable in a state.
    Prob {
        /// State document (kind `state` or `state_vector`).
        state: PathBuf,
        /// Observable document (kind `effect_family`, `frame`, or `pvm`).
        observable: PathBuf,
    },
    /// Decide whether the observable's probability map is POVM-representable.
    Decide {
        /// Observable document.
        observable: PathBuf,
    },
    /// Expand an oblique frame into projectors and its effect family.
    Frame {
        /// Frame document (kind `frame`).
        frame: PathBuf,
    },
    /// Transition matrix between two observables.
    Transition {
        /// First observable (kind `pvm` or `frame`).
        obs_a: PathBuf,
        /// Second observable (kind `pvm`).
        obs_b: PathBuf,
        /// Also report whether the matrix is doubly stochastic.
        #[arg(long, action = ArgAction::SetTrue)]
        check_doubly_stochastic: bool,
    },
    /// Sample outcome counts from an observable in a state.
    Sample {
        /// Observable document.
        observable: PathBuf,
        /// State document.
        state: PathBuf,
        /// Number of draws.
        #[arg(long)]
        n: u64,
    },
    /// Run the built-in qubit example end to end.
    DemoExample,
}

/// Input and validation problems exit with 2, internal invariant violations
/// with 1.
enum Failure {
    Input(String),
    Internal(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Input(_) => 2,
            Failure::Internal(_) => 1,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Input(m) | Failure::Internal(m) => m,
        }
    }
}

fn classify(err: Error) -> Failure {
    match err {
        Error::DegenerateDenominator { .. }
        | Error::SingularReconstruction
        | Error::EigenFailed { .. }
        | Error::InvalidDistribution(_)
        | Error::NoWitnessFound { .. }
        | Error::IndeterminateRepresentability { .. } => Failure::Internal(err.to_string()),
        other => Failure::Input(other.to_string()),
    }
}

fn load_document(path: &PathBuf) -> Result<DocumentEnvelope, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::Input(format!("cannot read {}: {e}", path.display())))?;
    DocumentEnvelope::from_json(&text).map_err(classify)
}

/// Restores default SIGPIPE handling so piping into `head` terminates the
/// process instead of panicking on a closed stdout.
fn reset_sigpipe() {
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
}

fn main() -> ExitCode {
    reset_sigpipe();
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("error: {}", failure.message());
            ExitCode::from(failure.code())
        }
    }
}

fn run(cli: &Cli) -> Result<(), Failure> {
    match &cli.command {
        Command::Prob { state, observable } => cmd_prob(cli, state, observable),
        Command::Decide { observable } => cmd_decide(cli, observable),
        Command::Frame { frame } => cmd_frame(cli, frame),
        Command::Transition {
            obs_a,
            obs_b,
            check_doubly_stochastic,
        } => cmd_transition(cli, obs_a, obs_b, *check_doubly_stochastic),
        Command::Sample {
            observable,
            state,
            n,
        } => cmd_sample(cli, observable, state, *n),
        Command::DemoExample => cmd_demo_example(cli),
    }
}

fn cmd_prob(cli: &Cli, state_path: &PathBuf, observable_path: &PathBuf) -> Result<(), Failure> {
    let state_doc = load_document(state_path)?;
    let observable_doc = load_document(observable_path)?;
    let state = state_doc.as_generalized_state().map_err(classify)?;
    let family = observable_doc.as_effect_family().map_err(classify)?;

    let dist = prob_effects(&family, &state).map_err(classify)?;
    let denominator = effects_denominator(&family, &state).map_err(classify)?;
    let povm = family.is_povm(cli.tol);

    if cli.json {
        let value = serde_json::json!({
            "kind": "distribution",
            "labels": dist.labels(),
            "probs": dist.probs(),
            "denominator": denominator,
            "povm": povm,
        });
        println!(
            "{}",
            serde_json::to_string_pretty(&value).expect("serializable")
        );
    } else {
        println!(
            "observable: {}, dim {}, outcomes {}, povm: {}",
            observable_doc.kind_name(),
            family.dim(),
            family.len(),
            povm
        );
        println!("state: dim {}, trace {}", state.dim(), fmt15(state.trace()));
        println!("denominator Tr(rho E(X)) = {}", fmt15(denominator));
        for (label, &p) in dist.labels().iter().zip(dist.probs()) {
            println!("p[{label}] = {}", fmt15(p));
        }
    }
    Ok(())
}

fn cmd_decide(cli: &Cli, observable_path: &PathBuf) -> Result<(), Failure> {
    let doc = load_document(observable_path)?;
    let family = doc.as_effect_family().map_err(classify)?;
    let verdict = decide_with(&family, DECIDE_TRIALS, cli.seed).map_err(classify)?;

    if cli.json {
        println!("{}", VerdictDocument::from_verdict(&verdict).to_json());
        return Ok(());
    }
    print_verdict(&verdict);
    Ok(())
}

fn print_verdict(verdict: &RepresentabilityVerdict) {
    match verdict {
        RepresentabilityVerdict::Representable { povm } => {
            println!("verdict: Representable");
            for (label, w) in povm.labels().iter().zip(povm.effects()) {
                println!("W[{label}]:");
                for line in matrix_lines(w) {
                    println!("{line}");
                }
            }
        }
        RepresentabilityVerdict::NotRepresentable { witness } => {
            println!("verdict: NotRepresentable");
            println!("witness outcome: {}", witness.outcome);
            println!("p(state_a) = {}", fmt15(witness.prob_a));
            println!("p(state_b) = {}", fmt15(witness.prob_b));
            println!("p(midpoint) = {}", fmt15(witness.prob_mid));
            println!(
                "affine midpoint average = {}",
                fmt15(0.5 * (witness.prob_a + witness.prob_b))
            );
            println!("gap = {}", fmt15(witness.gap));
            println!("state_a:");
            for line in matrix_lines(witness.state_a.op()) {
                println!("{line}");
            }
            println!("state_b:");
            for line in matrix_lines(witness.state_b.op()) {
                println!("{line}");
            }
            println!("midpoint:");
            for line in matrix_lines(witness.midpoint.op()) {
                println!("{line}");
            }
        }
    }
}

fn cmd_frame(cli: &Cli, frame_path: &PathBuf) -> Result<(), Failure> {
    let doc = load_document(frame_path)?;
    let frame = doc.as_frame().map_err(classify)?;
    let family = frame_effects(&frame).map_err(classify)?;
    let projectors = frame_projectors(&frame);
    let total = family.total();
    let min_eig = min_eigenvalue(&total).map_err(classify)?;
    let povm = family.is_povm(cli.tol);
    let document = DocumentEnvelope::from_effect_family(&family);

    if cli.json {
        println!("{}", document.to_json());
        return Ok(());
    }

    let f = frame_matrix(frame.vectors()).map_err(classify)?;
    println!(
        "frame: dim {}, condition number {}",
        frame.dim(),
        fmt15(condition_number(&f))
    );
    for (label, p) in frame.labels().iter().zip(&projectors) {
        println!("projector[{label}]:");
        for line in matrix_lines(p.op()) {
            println!("{line}");
        }
    }
    for (label, m) in family.labels().iter().zip(family.effects()) {
        println!("effect[{label}]:");
        for line in matrix_lines(m) {
            println!("{line}");
        }
    }
    println!("total M:");
    for line in matrix_lines(&total) {
        println!("{line}");
    }
    println!("min eigenvalue of M = {}", fmt15(min_eig));
    println!("povm: {povm}");
    println!("effect family document:");
    println!("{}", document.to_json());
    Ok(())
}

fn cmd_transition(
    cli: &Cli,
    path_a: &PathBuf,
    path_b: &PathBuf,
    check: bool,
) -> Result<(), Failure> {
    let doc_a = load_document(path_a)?;
    let doc_b = load_document(path_b)?;
    let pvm_b = doc_b.as_pvm().map_err(classify)?;

    let (matrix, conditioning): (TransitionMatrix, &str) = match &doc_a {
        DocumentEnvelope::Pvm { .. } => {
            let pvm_a = doc_a.as_pvm().map_err(classify)?;
            (
                transition_matrix(&pvm_a, &pvm_b).map_err(classify)?,
                "rows condition on the first observable's outcomes",
            )
        }
        DocumentEnvelope::Frame { .. } => {
            let frame = doc_a.as_frame().map_err(classify)?;
            (
                frame_transition(&frame, &pvm_b).map_err(classify)?,
                "rows condition on the second observable's eigenstates; columns index frame outcomes",
            )
        }
        other => {
            return Err(Failure::Input(format!(
                "first observable must be a pvm or frame document, found kind {:?}",
                other.kind_name()
            )))
        }
    };

    let doubly = is_doubly_stochastic(&matrix, cli.tol);
    if cli.json {
        let rows: Vec<Vec<f64>> = (0..matrix.size()).map(|i| matrix.row(i).to_vec()).collect();
        let value = serde_json::json!({
            "kind": "transition",
            "matrix": rows,
            "row_sums": matrix.row_sums(),
            "column_sums": matrix.column_sums(),
            "doubly_stochastic": doubly,
        });
        println!(
            "{}",
            serde_json::to_string_pretty(&value).expect("serializable")
        );
        return Ok(());
    }

    println!("transition matrix ({conditioning}):");
    for i in 0..matrix.size() {
        println!("[ {} ]", real_row(matrix.row(i)));
    }
    println!("row sums: {}", real_row(&matrix.row_sums()));
    println!("column sums: {}", real_row(&matrix.column_sums()));
    if check {
        println!("doubly stochastic: {doubly}");
    }
    Ok(())
}

fn cmd_sample(
    cli: &Cli,
    observable_path: &PathBuf,
    state_path: &PathBuf,
    n: u64,
) -> Result<(), Failure> {
    let observable_doc = load_document(observable_path)?;
    let state_doc = load_document(state_path)?;
    let family = observable_doc.as_effect_family().map_err(classify)?;
    let state = state_doc.as_generalized_state().map_err(classify)?;

    let counts = sample_outcomes(&family, &state, n, cli.seed).map_err(classify)?;
    let exact = prob_effects(&family, &state).map_err(classify)?;
    let empirical: Vec<f64> = counts
        .iter()
        .map(|&c| if n == 0 { 0.0 } else { c as f64 / n as f64 })
        .collect();

    if cli.json {
        let value = serde_json::json!({
            "kind": "sample",
            "rng": RNG_ALGORITHM,
            "seed": cli.seed,
            "n": n,
            "labels": exact.labels(),
            "counts": counts,
            "empirical": empirical,
            "exact": exact.probs(),
        });
        println!(
            "{}",
            serde_json::to_string_pretty(&value).expect("serializable")
        );
        return Ok(());
    }

    println!("rng: {RNG_ALGORITHM}, seed {}", cli.seed);
    println!("n = {n}");
    for (j, label) in exact.labels().iter().enumerate() {
        println!(
            "outcome {label}: count {}, empirical {}, exact {}",
            counts[j],
            fmt15(empirical[j]),
            fmt15(exact.probs()[j])
        );
    }
    Ok(())
}

fn cmd_demo_example(cli: &Cli) -> Result<(), Failure> {
    let family = EffectFamily::new(
        vec![
            ComplexMatrix::diag(&[2.0, 0.0]),
            ComplexMatrix::diag(&[0.0, 1.0]),
        ],
        None,
    )
    .map_err(classify)?;

    let states = [
        ("diag(1,0)", ComplexMatrix::diag(&[1.0, 0.0])),
        ("diag(0,1)", ComplexMatrix::diag(&[0.0, 1.0])),
        ("diag(1/2,1/2)", ComplexMatrix::diag(&[0.5, 0.5])),
    ];
    let mut probs = Vec::new();
    for (_, op) in &states {
        let rho = GeneralizedState::new(op.clone()).map_err(classify)?;
        probs.push(prob_effects(&family, &rho).map_err(classify)?.probs()[0]);
    }

    let candidate = genobs::represent::reconstruct_candidate(&family).map_err(classify)?;
    let x00 = candidate[0].get(0, 0).re;
    let x11 = candidate[0].get(1, 1).re;
    let affine_mid = 0.5 * (x00 + x11);

    let verdict = decide_with(&family, DECIDE_TRIALS, cli.seed).map_err(classify)?;

    if cli.json {
        println!("{}", VerdictDocument::from_verdict(&verdict).to_json());
        return Ok(());
    }

    println!("generalized qubit observable: E0 = 2|0><0|, E1 = |1><1|");
    println!("E(X) = E0 + E1:");
    for line in matrix_lines(&family.total()) {
        println!("{line}");
    }
    println!("povm: {}", family.is_povm(cli.tol));
    for ((name, _), p) in states.iter().zip(&probs) {
        println!("p(0 | {name}) = {}", fmt15(*p));
    }
    println!("reconstructed candidate x00 = {}", fmt15(x00));
    println!("reconstructed candidate x11 = {}", fmt15(x11));
    println!(
        "affine prediction at diag(1/2,1/2): (x00 + x11)/2 = {}",
        fmt15(affine_mid)
    );
    println!(
        "observed {} != {}: no POVM reproduces this map",
        fmt15(probs[2]),
        fmt15(affine_mid)
    );
    match &verdict {
        RepresentabilityVerdict::NotRepresentable { witness } => {
            println!("verdict: NotRepresentable");
            println!(
                "witness gap = {} at outcome {}",
                fmt15(witness.gap),
                witness.outcome
            );
        }
        RepresentabilityVerdict::Representable { .. } => {
            println!("verdict: Representable");
        }
    }
    Ok(())
}
