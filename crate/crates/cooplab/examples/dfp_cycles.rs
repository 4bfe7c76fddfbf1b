//! Discrete fictitious play on the Shapley game: the two starting
//! conditions, cycle detection, and the cycle payoff sums that separate
//! the convergent run from the non-convergent one.
//!
//! Run with `cargo run --release --example dfp_cycles`.

use cooplab::dfp::{cycle_sum_check, detect_cycle, run_dfp, DfpConfig, DfpInit, TieRule};
use cooplab::experiments::{builtin, BuiltinGame};
use cooplab::game::BimatrixGame;

fn show(pairs: &[(usize, usize)]) -> String {
    pairs
        .iter()
        .map(|&(i, j)| format!("({},{})", i + 1, j + 1))
        .collect::<Vec<_>>()
        .join(" ")
}

fn main() {
    let game: BimatrixGame<f64> = builtin(BuiltinGame::Shapley).unwrap();
    let cfg = DfpConfig::new(100_000, TieRule::LowestIndex, 1e-2, 10_000).unwrap();

    for (init, label) in [((0, 1), "asymmetric (1,2)"), ((0, 0), "symmetric (1,1)")] {
        let traj = run_dfp(&game, DfpInit::Pure(init.0, init.1), &cfg).unwrap();
        let last = traj.samples.last().unwrap();
        println!("start {label}: converged = {}, final ME = {:.5}", traj.converged, last.report.me);
        println!("  final beliefs p = {:?}", last.profile.p());

        match detect_cycle(&traj.br_stream) {
            Some(cycle) => {
                println!(
                    "  cycle of length {} entered at round {}: {}",
                    cycle.pairs.len(),
                    cycle.entry_round + 1,
                    show(&cycle.pairs)
                );
                let sums = cycle_sum_check(&game, &cycle).unwrap();
                println!(
                    "  payoff sums along the cycle: {:?} (all equal: {}, equals min of A+B: {})",
                    sums.values, sums.all_equal, sums.equals_min
                );
            }
            None => println!("  no periodic pattern detected"),
        }
        println!();
    }
}
