//! Numerical convergence certificate: sample the sign of the
//! best-response-utility derivative over convex combinations of path
//! points following a cycle, excluding a ball around the equilibria of
//! the pure competitive part.
//!
//! Run with `cargo run --release --example certify_convergence`.

use cooplab::cfp::{cycle_convergence_certificate, CertificateOutcome};
use cooplab::decompose::strategic_decompose;
use cooplab::dfp::{detect_cycle, run_dfp, DfpConfig, DfpInit, TieRule};
use cooplab::experiments::{builtin, BuiltinGame};
use cooplab::game::BimatrixGame;

fn main() {
    let shapley: BimatrixGame<f64> = builtin(BuiltinGame::Shapley).unwrap();
    let parts = strategic_decompose(&shapley);

    for lambda in [1.0, 0.5, 0.0] {
        // The game under study: lambda * I + Z from the strategic split.
        let game = parts.identical.scale(&lambda).add(&parts.zero_sum).unwrap();

        // Reference run from the symmetric corner finds the diagonal
        // cycle that convergent plays follow.
        let cfg = DfpConfig::new(50_000, TieRule::LowestIndex, 1e-2, 50_000).unwrap();
        let reference = run_dfp(&game, DfpInit::Pure(0, 0), &cfg).unwrap();
        let cycle = detect_cycle(&reference.br_stream).expect("reference run cycles");
        let pairs: Vec<String> = cycle
            .pairs
            .iter()
            .map(|&(i, j)| format!("({},{})", i + 1, j + 1))
            .collect();

        let outcome =
            cycle_convergence_certificate(&game, lambda, &parts.identical, &cycle, 2000, 7).unwrap();
        let text = match outcome {
            CertificateOutcome::CertifiedNegative => "CertifiedNegative".to_string(),
            CertificateOutcome::FoundNonNegative(x) => format!("FoundNonNegative at {x:?}"),
            CertificateOutcome::Inconclusive => "Inconclusive".to_string(),
        };
        println!(
            "lambda = {lambda}: cycle {} (converged reference: {}) -> {text}",
            pairs.join(" "),
            reference.converged
        );
    }
}
