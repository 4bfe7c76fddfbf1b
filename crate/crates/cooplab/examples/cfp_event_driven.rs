//! Event-driven continuous fictitious play: exact switch times, sliding
//! along attracting indifference surfaces, and the renewal identity for
//! the best-response utility.
//!
//! Run with `cargo run --example cfp_event_driven`.

use cooplab::cfp::{bru_integral_check, run_cfp, CfpConfig, CfpVerdict};
use cooplab::experiments::{builtin, BuiltinGame};
use cooplab::game::{BimatrixGame, MixedProfile};

fn main() {
    let game: BimatrixGame<f64> = builtin(BuiltinGame::Shapley).unwrap();
    let cfg = CfpConfig::default();

    // Symmetric start: one vertex segment, then a slide along the
    // indifference surface straight into the uniform equilibrium.
    let init = MixedProfile::pure(0, 0, 3, 3).unwrap();
    let traj = run_cfp(&game, &init, (1e6f64).ln(), &cfg).unwrap();
    println!("symmetric start: {:?}", traj.verdict);
    for seg in &traj.segments {
        println!(
            "  s in [{:.4}, {:.4}]  target p = {:?}  sliding = {}",
            seg.s_start, seg.s_end, seg.target.p, seg.target.sliding
        );
    }
    println!("  final profile: {:?}", traj.final_profile);
    println!(
        "  renewal-identity residual: {:.3e}",
        bru_integral_check(&traj, &game, 1.0, 100)
    );

    // Asymmetric start: the trajectory spirals onto the hexagonal
    // best-response cycle and U converges to the common payoff sum 3.
    let init = MixedProfile::pure(0, 1, 3, 3).unwrap();
    let traj = run_cfp(&game, &init, (1e6f64).ln(), &cfg).unwrap();
    match &traj.verdict {
        CfpVerdict::EnteredCycle(cycle) => {
            let pairs: Vec<String> = cycle
                .pairs
                .iter()
                .map(|&(i, j)| format!("({},{})", i + 1, j + 1))
                .collect();
            println!("asymmetric start: entered cycle {}", pairs.join(" "));
        }
        other => println!("asymmetric start: {other:?}"),
    }
    let (s_last, u_last) = *traj.bru_series.last().unwrap();
    println!("  U at s = {s_last:.2}: {u_last:.6} (limit 3)");
    println!(
        "  renewal-identity residual: {:.3e}",
        bru_integral_check(&traj, &game, 1.0, 100)
    );
}
