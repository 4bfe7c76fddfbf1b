//! File-based workflow: save a game, decompose it to a parts file,
//! sweep mixes to CSV with a reproducibility manifest, and validate the
//! emitted CSV against the tool's own schema check.
//!
//! Run with `cargo run --release --example reproducible_sweeps`.

use std::fs;

use cooplab::decompose::hodge_decompose;
use cooplab::dfp::{run_dfp, DfpConfig, DfpInit, TieRule};
use cooplab::experiments::{builtin, lambda_sweep, BuiltinGame};
use cooplab::game::BimatrixGame;
use cooplab::io::{
    dfp_csv, hodge_parts_to_json, load_game, save_game, sweep_csv, validate_csv, RunManifest,
};
use cooplab::scalar::{Rational, Scalar};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = std::env::temp_dir().join("cooplab_sweep_demo");
    fs::create_dir_all(&dir)?;

    // Save and re-load the exact game; fractions survive as strings.
    let game: BimatrixGame<Rational> = builtin(BuiltinGame::Example1)?;
    let game_path = dir.join("example1.json");
    save_game(&game, &game_path)?;
    let loaded: BimatrixGame<Rational> = load_game(game_path.to_str().unwrap())?;
    assert_eq!(loaded, game);

    // Decompose into a parts file with the verification block.
    let parts = hodge_decompose(&game);
    let parts_path = dir.join("parts.json");
    fs::write(
        &parts_path,
        serde_json::to_string_pretty(&hodge_parts_to_json(&game, &parts))? + "\n",
    )?;
    let harmonic: BimatrixGame<Rational> =
        load_game(&format!("{}#H", parts_path.display()))?;
    assert_eq!(harmonic, parts.harmonic);

    // Sweep a lambda grid, write the CSV, and record the manifest.
    let grid: Vec<Rational> = (0..=20i64).map(|k| Rational::from_ratio(k, 20)).collect();
    let cfg = DfpConfig::new(20_000, TieRule::LowestIndex, 5e-2, 20_000)?;
    let records = lambda_sweep(&parts.potential, &parts.harmonic, &grid, (0, 0), &cfg)?;
    let csv_path = dir.join("sweep.csv");
    fs::write(&csv_path, sweep_csv(&records))?;
    RunManifest::new(
        "sweep",
        game_path.display().to_string(),
        &[
            ("lambda", "0:1:0.05".to_string()),
            ("rounds", "20000".to_string()),
            ("init", "1,1".to_string()),
        ],
        None,
        vec![csv_path.display().to_string()],
    )
    .write(&dir.join("sweep.manifest.json"))?;

    // A trajectory CSV for one run, also schema-checked.
    let traj = run_dfp(&game.to_f64(), DfpInit::Pure(0, 0), &cfg)?;
    let traj_path = dir.join("dfp.csv");
    fs::write(&traj_path, dfp_csv(&traj, game.m(), game.n()))?;

    for path in [&csv_path, &traj_path] {
        let kind = validate_csv(&fs::read_to_string(path)?)?;
        println!("{} validates as {kind:?}", path.display());
    }
    println!("artifacts in {}", dir.display());
    Ok(())
}
