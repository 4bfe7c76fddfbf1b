//! Structure of the normalized harmonic subspace: the corner-pattern
//! basis, the unique identical-interest/zero-sum split, and convergence
//! of fictitious play on arbitrary mixes of the split.
//!
//! Run with `cargo run --release --example harmonic_structure`.

use cooplab::decompose::{harmonic_basis, harmonic_split};
use cooplab::dfp::{run_dfp, DfpConfig, DfpInit, TieRule};
use cooplab::equivalence::{is_in_subspace, Subspace};
use cooplab::game::BimatrixGame;
use cooplab::generate::{random_game, GameClass};
use cooplab::scalar::{Rational, Scalar};

fn main() {
    let (m, n) = (2usize, 3usize);

    let basis: Vec<BimatrixGame<Rational>> = harmonic_basis(m, n).unwrap();
    println!(
        "harmonic basis of the {m}x{n} space: {} games of the form (nC, -mC)",
        basis.len()
    );
    for (k, game) in basis.iter().enumerate() {
        assert!(is_in_subspace(game, Subspace::Harmonic));
        println!("basis game {k}:\n{game:?}");
    }

    // Any normalized harmonic game splits uniquely into a normalized
    // identical-interest part and a normalized zero-sum part, with the
    // identical part ((n-m)/(m+n)) times the zero-sum part.
    let harmonic: BimatrixGame<Rational> =
        random_game(GameClass::NormalizedHarmonic, m, n, 7).unwrap();
    let (identical, zero_sum) = harmonic_split(&harmonic).unwrap();
    println!("random harmonic game:\n{harmonic:?}");
    println!("identical part:\n{identical:?}");
    println!("zero-sum part:\n{zero_sum:?}");
    let ratio = Rational::from_ratio(n as i64 - m as i64, (m + n) as i64);
    assert_eq!(identical.a(), &zero_sum.a().scale(&ratio));
    println!("identical = ({}) * zero-sum, as predicted", ratio);

    // lambda * I + Z keeps the fictitious-play property for any weight.
    let cfg = DfpConfig::new(200_000, TieRule::LowestIndex, 5e-2, 200_000).unwrap();
    for lambda in [-2i64, -1, 0, 1, 2] {
        let mix = identical
            .scale(&Rational::from_int(lambda))
            .add(&zero_sum)
            .unwrap();
        let traj = run_dfp(&mix.to_f64(), DfpInit::Pure(0, 0), &cfg).unwrap();
        println!(
            "lambda = {lambda:>2}: converged = {}, final ME = {:.2e}",
            traj.converged,
            traj.samples.last().unwrap().report.me
        );
    }
}
