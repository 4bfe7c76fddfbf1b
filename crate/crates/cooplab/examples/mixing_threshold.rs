//! Mixing the cooperative and competitive components of Example 1:
//! classification sweep over lambda and exact localization of the
//! zero-sum/identical-interest threshold at 5/6.
//!
//! Run with `cargo run --release --example mixing_threshold`.

use cooplab::decompose::hodge_decompose;
use cooplab::dfp::{DfpConfig, TieRule};
use cooplab::experiments::{builtin, find_class_threshold, lambda_sweep, BuiltinGame};
use cooplab::game::BimatrixGame;
use cooplab::scalar::{Rational, Scalar};

fn main() {
    let game: BimatrixGame<Rational> = builtin(BuiltinGame::Example1).unwrap();
    let parts = hodge_decompose(&game);

    // Exact rational root of the dominant-class condition.
    let threshold = find_class_threshold(
        &parts.potential,
        &parts.harmonic,
        &Rational::zero(),
        &Rational::one(),
        &Rational::zero(),
    )
    .unwrap();
    println!("exact classification threshold: lambda = {threshold}");

    // Bisection on the float classifier agrees.
    let float_parts = hodge_decompose(&game.to_f64());
    let bisected = find_class_threshold(
        &float_parts.potential,
        &float_parts.harmonic,
        &0.0,
        &1.0,
        &1e-8,
    )
    .unwrap();
    println!("bisection threshold:          lambda = {bisected:.8}");

    // Sweep lambda over [0, 1]: labels flip SZ -> SI across 5/6 and the
    // fictitious-play limit point moves from mixed to pure.
    let grid: Vec<Rational> = (0..=10).map(|k| Rational::from_ratio(k, 10)).collect();
    let cfg = DfpConfig::new(50_000, TieRule::LowestIndex, 5e-2, 50_000).unwrap();
    let records = lambda_sweep(&parts.potential, &parts.harmonic, &grid, (0, 0), &cfg).unwrap();
    println!("lambda  label  converged  final_ME    final p");
    for record in &records {
        println!(
            "{:>6}  {:>5}  {:>9}  {:.2e}  {:?}",
            record.lambda.to_string(),
            record.label.to_string(),
            record.converged,
            record.final_me,
            record
                .final_profile
                .p()
                .iter()
                .map(|v| (v * 1000.0).round() / 1000.0)
                .collect::<Vec<_>>(),
        );
    }
}
