//! Exact direct-sum decompositions of the two built-in reference games.
//!
//! Run with `cargo run --example decompose_builtins`.

use cooplab::decompose::{hodge_decompose, strategic_decompose};
use cooplab::experiments::{builtin, BuiltinGame};
use cooplab::game::BimatrixGame;
use cooplab::scalar::Rational;

fn main() {
    for name in [BuiltinGame::Shapley, BuiltinGame::Example1] {
        let game: BimatrixGame<Rational> = builtin(name).unwrap();
        println!("=== {} ===", name.name());
        println!("{game:?}");

        let parts = hodge_decompose(&game);
        println!("potential component:\n{:?}", parts.potential);
        println!("harmonic component:\n{:?}", parts.harmonic);
        println!("non-strategic component:\n{:?}", parts.nonstrategic);
        assert_eq!(parts.recompose(), game);
        println!("recomposition residual: 0 (exact)\n");

        let strategic = strategic_decompose(&game);
        println!("identical-interest component:\n{:?}", strategic.identical);
        println!("zero-sum component:\n{:?}", strategic.zero_sum);
        println!("dominant component:\n{:?}", strategic.dominant);
        assert_eq!(strategic.recompose(), game);
    }

    // On the Shapley game the two decompositions coincide.
    let shapley: BimatrixGame<Rational> = builtin(BuiltinGame::Shapley).unwrap();
    let hodge = hodge_decompose(&shapley);
    let strategic = strategic_decompose(&shapley);
    assert_eq!(hodge.potential, strategic.identical);
    assert_eq!(hodge.harmonic, strategic.zero_sum);
    assert_eq!(hodge.nonstrategic, strategic.dominant);
    println!("Shapley: hodge and strategic components coincide.");
}
