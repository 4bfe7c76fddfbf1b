//! Strategic-equivalence classification with scaling witnesses.
//!
//! Run with `cargo run --example classify_games`.

use cooplab::equivalence::{classify, is_in_subspace, Subspace};
use cooplab::experiments::{builtin, BuiltinGame};
use cooplab::game::BimatrixGame;
use cooplab::generate::{random_game, GameClass};
use cooplab::scalar::Rational;

fn main() {
    // Example 1 is (2Z, -3Z): zero-sum equivalent with beta/alpha = 2/3.
    let example1: BimatrixGame<Rational> = builtin(BuiltinGame::Example1).unwrap();
    let verdict = classify(&example1);
    println!("example1: label {}", verdict.label);
    if let (Some(alpha), Some(beta)) = (&verdict.alpha, &verdict.beta) {
        println!("  witnesses: alpha = {alpha}, beta = {beta} (beta/alpha = {})",
                 beta.clone() / alpha.clone());
    }
    if let Some(witness) = &verdict.witness {
        // (alpha A + E1) + (beta B + E2) recomposes to the zero matrix.
        let alpha = verdict.alpha.clone().unwrap();
        let beta = verdict.beta.clone().unwrap();
        let total = example1
            .a()
            .scale(&alpha)
            .add(witness.a())
            .add(&example1.b().scale(&beta))
            .add(witness.b());
        println!("  zero-sum reconstruction is exact: {}", total.is_zero());
    }

    // The Shapley game fits no equivalence class.
    let shapley: BimatrixGame<Rational> = builtin(BuiltinGame::Shapley).unwrap();
    println!("shapley: label {}", classify(&shapley).label);
    for space in [Subspace::ZeroSum, Subspace::Potential, Subspace::Harmonic] {
        println!("  in {space:?}? {}", is_in_subspace(&shapley, space));
    }

    // Generated games land in their classes by construction.
    for (class, label) in [
        (GameClass::Sz, "SZ"),
        (GameClass::Si, "SI"),
        (GameClass::BClass, "B"),
        (GameClass::DClass, "D"),
    ] {
        let game: BimatrixGame<Rational> = random_game(class, 3, 3, 42).unwrap();
        println!("random {class} game classifies {} (expected {label})",
                 classify(&game).label);
    }
}
