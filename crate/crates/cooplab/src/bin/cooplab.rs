//! Thin command-line front end over the `cooplab` library.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use cooplab::cfp::{cycle_convergence_certificate, run_cfp, CertificateOutcome, CfpConfig, CfpVerdict};
use cooplab::decompose::{hodge_decompose, strategic_decompose};
use cooplab::dfp::{detect_cycle, run_dfp, DfpConfig, DfpInit, TieRule};
use cooplab::equivalence::classify;
use cooplab::error::Error;
use cooplab::experiments::{builtin, find_class_threshold, lambda_sweep, BuiltinGame};
use cooplab::game::{BimatrixGame, MixedProfile};
use cooplab::io::{
    cfp_csv, dfp_csv, game_to_json, hodge_parts_to_json, load_game, save_game,
    strategic_parts_to_json, sweep_csv, validate_csv, RunManifest,
};
use cooplab::scalar::{Rational, Scalar};

#[derive(Parser)]
#[command(
    name = "cooplab",
    version,
    about = "Bimatrix game decomposition, classification, and fictitious-play dynamics"
)]
struct Cli {
    /// Machine-readable JSON verdicts instead of human-readable text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Split a game into its three direct-sum components.
    Decompose(DecomposeArgs),
    /// Classify a game among SZ, SI, B, D, and NONE.
    Classify(ClassifyArgs),
    /// Run fictitious-play dynamics.
    #[command(subcommand)]
    Play(PlayCommand),
    /// Classify and play lambda-mixes of two components over a grid.
    Sweep(SweepArgs),
    /// Locate the SZ/SI classification threshold of a mixing family.
    Threshold(ThresholdArgs),
    /// Emit a built-in reference game.
    Builtin(BuiltinArgs),
    /// Sample the sign of the BRU derivative over traced cycle paths.
    CertifyT4(CertifyArgs),
    /// Schema-check a CSV file produced by this tool.
    ValidateCsv(ValidateCsvArgs),
}

#[derive(Args)]
struct DecomposeArgs {
    #[arg(long)]
    input: String,
    /// `hodge` (P/H/E) or `strategic` (I_N/Z_N/B).
    #[arg(long, default_value = "hodge")]
    mode: String,
    #[arg(long)]
    output: PathBuf,
    /// Exact rational arithmetic (entries serialize as fractions).
    #[arg(long)]
    exact: bool,
}

#[derive(Args)]
struct ClassifyArgs {
    #[arg(long)]
    input: String,
    #[arg(long)]
    exact: bool,
}

#[derive(Subcommand)]
enum PlayCommand {
    /// Discrete-time fictitious play.
    Dfp(PlayDfpArgs),
    /// Continuous-time fictitious play (event-driven, log-time).
    Cfp(PlayCfpArgs),
}

#[derive(Args)]
struct PlayDfpArgs {
    #[arg(long)]
    input: String,
    /// Initial pure actions `i,j` (1-based).
    #[arg(long, default_value = "1,1")]
    init: String,
    #[arg(long, default_value_t = 100_000)]
    rounds: u64,
    /// Tie rule: lowest | sticky | random.
    #[arg(long, default_value = "lowest")]
    tie: String,
    /// Seed for the random tie rule.
    #[arg(long)]
    seed: Option<u64>,
    /// Convergence threshold on the final exploitability.
    #[arg(long, default_value_t = 1e-2)]
    eps: f64,
    /// Metric sampling stride.
    #[arg(long, default_value_t = 1000)]
    record_every: u64,
    #[arg(long)]
    csv: Option<PathBuf>,
    /// Write a reproducibility manifest next to the outputs.
    #[arg(long)]
    manifest: Option<PathBuf>,
}

#[derive(Args)]
struct PlayCfpArgs {
    #[arg(long)]
    input: String,
    /// Initial mixed strategy of player 1, comma-separated.
    #[arg(long)]
    init_p: Option<String>,
    /// Initial mixed strategy of player 2, comma-separated.
    #[arg(long)]
    init_q: Option<String>,
    /// Initial pure actions `i,j` (1-based), when no mixed init given.
    #[arg(long, default_value = "1,1")]
    init: String,
    /// Log-time horizon (default ln(1e6)).
    #[arg(long, default_value_t = 13.815510557964274)]
    horizon_log: f64,
    #[arg(long, default_value_t = 1e-3)]
    eps: f64,
    #[arg(long, default_value = "lowest")]
    tie: String,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    csv: Option<PathBuf>,
    #[arg(long)]
    manifest: Option<PathBuf>,
}

#[derive(Args)]
struct SweepArgs {
    /// Potential component, e.g. `parts.json#P`.
    #[arg(long = "p")]
    potential: String,
    /// Harmonic component, e.g. `parts.json#H`.
    #[arg(long = "h")]
    harmonic: String,
    /// Grid `start:end:step`, e.g. `0:1:0.01`.
    #[arg(long)]
    lambda: String,
    #[arg(long, default_value_t = 200_000)]
    rounds: u64,
    /// Initial pure actions `i,j` (1-based).
    #[arg(long, default_value = "1,1")]
    init: String,
    #[arg(long, default_value_t = 5e-2)]
    eps: f64,
    #[arg(long, default_value = "lowest")]
    tie: String,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    csv: PathBuf,
    #[arg(long)]
    manifest: Option<PathBuf>,
}

#[derive(Args)]
struct ThresholdArgs {
    #[arg(long = "p")]
    potential: String,
    #[arg(long = "h")]
    harmonic: String,
    #[arg(long, default_value_t = 0.0)]
    lo: f64,
    #[arg(long, default_value_t = 1.0)]
    hi: f64,
    #[arg(long, default_value_t = 1e-6)]
    tol: f64,
    /// Solve the exact rational root instead of bisecting.
    #[arg(long)]
    exact: bool,
}

#[derive(Args)]
struct BuiltinArgs {
    /// `shapley` or `example1`.
    name: String,
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long)]
    exact: bool,
}

#[derive(Args)]
struct CertifyArgs {
    #[arg(long)]
    input: String,
    /// Mixing weight of the identical-interest component.
    #[arg(long, default_value_t = 1.0)]
    lambda: f64,
    #[arg(long, default_value_t = 2000)]
    samples: usize,
    #[arg(long, default_value_t = 7)]
    seed: u64,
    /// Initial pure actions of the reference run (1-based).
    #[arg(long, default_value = "1,1")]
    init: String,
}

#[derive(Args)]
struct ValidateCsvArgs {
    file: PathBuf,
}

fn parse_pair(text: &str) -> Result<(usize, usize), Error> {
    let (i, j) = text
        .split_once(',')
        .ok_or_else(|| Error::PreconditionViolated(format!("bad action pair `{text}`")))?;
    let parse = |s: &str| {
        s.trim()
            .parse::<usize>()
            .ok()
            .filter(|&v| v >= 1)
            .ok_or_else(|| Error::PreconditionViolated(format!("bad action `{s}`")))
    };
    Ok((parse(i)? - 1, parse(j)? - 1))
}

fn parse_tie(name: &str, seed: Option<u64>) -> Result<TieRule, Error> {
    match name {
        "lowest" => Ok(TieRule::LowestIndex),
        "sticky" => Ok(TieRule::StickyPrevious),
        "random" => Ok(TieRule::SeededRandom(seed.unwrap_or(0))),
        other => Err(Error::PreconditionViolated(format!(
            "unknown tie rule `{other}` (expected lowest|sticky|random)"
        ))),
    }
}

fn parse_grid(text: &str) -> Result<Vec<f64>, Error> {
    let parts: Vec<&str> = text.split(':').collect();
    let bad = || Error::PreconditionViolated(format!("bad lambda grid `{text}`"));
    if parts.len() != 3 {
        return Err(bad());
    }
    let start: f64 = parts[0].parse().map_err(|_| bad())?;
    let end: f64 = parts[1].parse().map_err(|_| bad())?;
    let step: f64 = parts[2].parse().map_err(|_| bad())?;
    if step <= 0.0 || end < start {
        return Err(bad());
    }
    let count = ((end - start) / step).round() as usize;
    Ok((0..=count).map(|k| start + step * k as f64).collect())
}

fn parse_simplex(text: &str) -> Result<Vec<f64>, Error> {
    text.split(',')
        .map(|s| {
            s.trim()
                .parse::<f64>()
                .map_err(|_| Error::PreconditionViolated(format!("bad probability `{s}`")))
        })
        .collect()
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            use clap::error::ErrorKind;
            let code = match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = err.print();
            return ExitCode::from(code);
        }
    };

    if let Ok(threads) = std::env::var("COOPLAB_THREADS") {
        if let Ok(threads) = threads.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build_global();
        }
    }

    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            match err {
                Error::NumericalStall { .. } => ExitCode::from(2),
                _ => ExitCode::from(1),
            }
        }
    }
}

fn run(cli: Cli) -> Result<(), Error> {
    let as_json = cli.json;
    match cli.command {
        Command::Decompose(args) => {
            if args.exact {
                decompose_cmd::<Rational>(&args, as_json)
            } else {
                decompose_cmd::<f64>(&args, as_json)
            }
        }
        Command::Classify(args) => {
            if args.exact {
                classify_cmd::<Rational>(&args, as_json)
            } else {
                classify_cmd::<f64>(&args, as_json)
            }
        }
        Command::Play(PlayCommand::Dfp(args)) => play_dfp(&args, as_json),
        Command::Play(PlayCommand::Cfp(args)) => play_cfp(&args, as_json),
        Command::Sweep(args) => sweep_cmd(&args, as_json),
        Command::Threshold(args) => threshold_cmd(&args, as_json),
        Command::Builtin(args) => builtin_cmd(&args, as_json),
        Command::CertifyT4(args) => certify_cmd(&args, as_json),
        Command::ValidateCsv(args) => {
            let text = std::fs::read_to_string(&args.file)?;
            let kind = validate_csv(&text)?;
            if as_json {
                println!("{}", json!({"valid": true, "kind": format!("{kind:?}")}));
            } else {
                println!("valid {kind:?} CSV: {}", args.file.display());
            }
            Ok(())
        }
    }
}

fn decompose_cmd<S: Scalar>(args: &DecomposeArgs, as_json: bool) -> Result<(), Error> {
    let game: BimatrixGame<S> = load_game(&args.input)?;
    let doc = match args.mode.as_str() {
        "hodge" => hodge_parts_to_json(&game, &hodge_decompose(&game)),
        "strategic" => strategic_parts_to_json(&game, &strategic_decompose(&game)),
        other => {
            return Err(Error::PreconditionViolated(format!(
                "unknown mode `{other}` (expected hodge|strategic)"
            )))
        }
    };
    std::fs::write(
        &args.output,
        serde_json::to_string_pretty(&doc).expect("valid JSON tree") + "\n",
    )?;
    if as_json {
        println!("{}", json!({"written": args.output.display().to_string(),
                              "verification": doc["verification"]}));
    } else {
        println!(
            "wrote {} ({} mode); residual {}, memberships {}",
            args.output.display(),
            args.mode,
            doc["verification"]["max_recomposition_residual"],
            doc["verification"]["memberships"],
        );
    }
    Ok(())
}

fn classify_cmd<S: Scalar>(args: &ClassifyArgs, as_json: bool) -> Result<(), Error> {
    let game: BimatrixGame<S> = load_game(&args.input)?;
    let verdict = classify(&game);
    let witness_residual = verdict.witness.as_ref().map(|witness| {
        // Residual of the reconstructed witness equation, in f64.
        let alpha = verdict.alpha.as_ref().expect("witness carries alpha");
        let beta = verdict.beta.as_ref().expect("witness carries beta");
        let lhs = game.a().scale(alpha).add(witness.a());
        match verdict.label {
            cooplab::equivalence::ClassLabel::ZeroSumEquivalent => {
                lhs.add(&game.b().scale(beta)).add(witness.b()).max_abs().to_f64()
            }
            _ => {
                let rhs = game.b().scale(beta).add(witness.b());
                lhs.sub(&rhs).max_abs().to_f64()
            }
        }
    });
    if as_json {
        println!(
            "{}",
            json!({
                "label": verdict.label.to_string(),
                "alpha": verdict.alpha.as_ref().map(ToString::to_string),
                "beta": verdict.beta.as_ref().map(ToString::to_string),
                "witness_residual": witness_residual,
            })
        );
    } else {
        print!("label {}", verdict.label);
        if let (Some(alpha), Some(beta)) = (&verdict.alpha, &verdict.beta) {
            print!(", alpha {alpha}, beta {beta}");
        }
        if let Some(residual) = witness_residual {
            print!(", witness residual {residual:e}");
        }
        println!();
    }
    Ok(())
}

fn play_dfp(args: &PlayDfpArgs, as_json: bool) -> Result<(), Error> {
    let game: BimatrixGame<f64> = load_game(&args.input)?;
    let (i, j) = parse_pair(&args.init)?;
    let tie = parse_tie(&args.tie, args.seed)?;
    let cfg = DfpConfig::new(args.rounds, tie, args.eps, args.record_every.min(args.rounds))?;
    let traj = run_dfp(&game, DfpInit::Pure(i, j), &cfg)?;
    let cycle = detect_cycle(&traj.br_stream);
    let last = traj.samples.last().expect("runs record a final sample");

    let mut outputs = Vec::new();
    if let Some(path) = &args.csv {
        std::fs::write(path, dfp_csv(&traj, game.m(), game.n()))?;
        outputs.push(path.display().to_string());
    }
    if let Some(path) = &args.manifest {
        RunManifest::new(
            "play dfp",
            &args.input,
            &[
                ("init", args.init.clone()),
                ("rounds", args.rounds.to_string()),
                ("tie", args.tie.clone()),
                ("eps", args.eps.to_string()),
                ("record_every", args.record_every.to_string()),
            ],
            args.seed,
            outputs.clone(),
        )
        .write(path)?;
    }

    let cycle_text = cycle.as_ref().map(format_cycle);
    if as_json {
        println!(
            "{}",
            json!({
                "converged": traj.converged,
                "final_me": last.report.me,
                "final_u": last.report.u,
                "cycle": cycle_text,
                "rounds": args.rounds,
            })
        );
    } else {
        println!(
            "converged={} final ME={:.6} U={:.6}{}",
            traj.converged,
            last.report.me,
            last.report.u,
            cycle_text
                .map(|c| format!(" cycle {c}"))
                .unwrap_or_default()
        );
    }
    Ok(())
}

fn format_cycle(cycle: &cooplab::dfp::CycleDescriptor) -> String {
    cycle
        .pairs
        .iter()
        .map(|&(i, j)| format!("({},{})", i + 1, j + 1))
        .collect::<Vec<_>>()
        .join(" ")
}

fn play_cfp(args: &PlayCfpArgs, as_json: bool) -> Result<(), Error> {
    let game: BimatrixGame<f64> = load_game(&args.input)?;
    let init = match (&args.init_p, &args.init_q) {
        (Some(p), Some(q)) => MixedProfile::new(parse_simplex(p)?, parse_simplex(q)?)?,
        (None, None) => {
            let (i, j) = parse_pair(&args.init)?;
            MixedProfile::pure(i, j, game.m(), game.n())?
        }
        _ => {
            return Err(Error::PreconditionViolated(
                "--init-p and --init-q must be given together".into(),
            ))
        }
    };
    let cfg = CfpConfig {
        tie_rule: parse_tie(&args.tie, args.seed)?,
        eps: args.eps,
        ..CfpConfig::default()
    };
    let traj = run_cfp(&game, &init, args.horizon_log, &cfg)?;

    let mut outputs = Vec::new();
    if let Some(path) = &args.csv {
        std::fs::write(path, cfp_csv(&traj, &game))?;
        outputs.push(path.display().to_string());
    }
    if let Some(path) = &args.manifest {
        RunManifest::new(
            "play cfp",
            &args.input,
            &[
                ("horizon_log", args.horizon_log.to_string()),
                ("eps", args.eps.to_string()),
                ("tie", args.tie.clone()),
            ],
            args.seed,
            outputs.clone(),
        )
        .write(path)?;
    }

    let verdict = match &traj.verdict {
        CfpVerdict::ConvergedToNe => "ConvergedToNE".to_string(),
        CfpVerdict::EnteredCycle(cycle) => format!("EnteredCycle {}", format_cycle(cycle)),
        CfpVerdict::HorizonExhausted => "HorizonExhausted".to_string(),
    };
    let final_me = game.epsilon_report(&traj.final_profile)?.me;
    if as_json {
        println!(
            "{}",
            json!({
                "verdict": verdict,
                "segments": traj.segments.len(),
                "final_me": final_me,
            })
        );
    } else {
        println!(
            "{verdict}; {} segments, final ME={final_me:.6}",
            traj.segments.len()
        );
    }
    Ok(())
}

fn sweep_cmd(args: &SweepArgs, as_json: bool) -> Result<(), Error> {
    let potential: BimatrixGame<f64> = load_game(&args.potential)?;
    let harmonic: BimatrixGame<f64> = load_game(&args.harmonic)?;
    let grid = parse_grid(&args.lambda)?;
    let (i, j) = parse_pair(&args.init)?;
    let tie = parse_tie(&args.tie, args.seed)?;
    let cfg = DfpConfig::new(args.rounds, tie, args.eps, args.rounds)?;
    let records = lambda_sweep(&potential, &harmonic, &grid, (i, j), &cfg)?;
    std::fs::write(&args.csv, sweep_csv(&records))?;
    if let Some(path) = &args.manifest {
        RunManifest::new(
            "sweep",
            format!("{} + {}", args.potential, args.harmonic),
            &[
                ("lambda", args.lambda.clone()),
                ("rounds", args.rounds.to_string()),
                ("init", args.init.clone()),
                ("eps", args.eps.to_string()),
                ("tie", args.tie.clone()),
            ],
            args.seed,
            vec![args.csv.display().to_string()],
        )
        .write(path)?;
    }
    let converged = records.iter().filter(|r| r.converged).count();
    if as_json {
        println!(
            "{}",
            json!({
                "written": args.csv.display().to_string(),
                "points": records.len(),
                "converged": converged,
            })
        );
    } else {
        println!(
            "wrote {} ({} grid points, {} converged)",
            args.csv.display(),
            records.len(),
            converged
        );
    }
    Ok(())
}

fn threshold_cmd(args: &ThresholdArgs, as_json: bool) -> Result<(), Error> {
    if args.exact {
        let potential: BimatrixGame<Rational> = load_game(&args.potential)?;
        let harmonic: BimatrixGame<Rational> = load_game(&args.harmonic)?;
        let lo = Rational::from_f64_exact(args.lo)
            .ok_or(Error::PreconditionViolated("non-finite lo".into()))?;
        let hi = Rational::from_f64_exact(args.hi)
            .ok_or(Error::PreconditionViolated("non-finite hi".into()))?;
        let root = find_class_threshold(&potential, &harmonic, &lo, &hi, &Rational::zero())?;
        if as_json {
            println!("{}", json!({"threshold": root.to_string(), "exact": true}));
        } else {
            println!("{root}");
        }
    } else {
        let potential: BimatrixGame<f64> = load_game(&args.potential)?;
        let harmonic: BimatrixGame<f64> = load_game(&args.harmonic)?;
        let root = find_class_threshold(&potential, &harmonic, &args.lo, &args.hi, &args.tol)?;
        if as_json {
            println!("{}", json!({"threshold": root, "exact": false}));
        } else {
            println!("{root}");
        }
    }
    Ok(())
}

fn builtin_cmd(args: &BuiltinArgs, as_json: bool) -> Result<(), Error> {
    let name: BuiltinGame = args.name.parse()?;
    if let Some(path) = &args.output {
        if args.exact {
            save_game(&builtin::<Rational>(name)?, path)?;
        } else {
            save_game(&builtin::<f64>(name)?, path)?;
        }
        if as_json {
            println!("{}", json!({"written": path.display().to_string()}));
        } else {
            println!("wrote {}", path.display());
        }
    } else {
        let game = builtin::<Rational>(name)?;
        if as_json {
            println!("{}", game_to_json(&game));
        } else {
            println!("{game:?}");
        }
    }
    Ok(())
}

fn certify_cmd(args: &CertifyArgs, as_json: bool) -> Result<(), Error> {
    let game: BimatrixGame<f64> = load_game(&args.input)?;
    let parts = strategic_decompose(&game);
    let mixed = parts
        .identical
        .scale(&args.lambda)
        .add(&parts.zero_sum)?;
    let (i, j) = parse_pair(&args.init)?;
    let reference_cfg = DfpConfig::new(50_000, TieRule::LowestIndex, 1e-2, 50_000)?;
    let reference = run_dfp(&mixed, DfpInit::Pure(i, j), &reference_cfg)?;
    let cycle = detect_cycle(&reference.br_stream).ok_or_else(|| {
        Error::PreconditionViolated("reference run did not settle into a cycle".into())
    })?;
    let outcome = cycle_convergence_certificate(
        &mixed,
        args.lambda,
        &parts.identical,
        &cycle,
        args.samples,
        args.seed,
    )?;
    let text = match &outcome {
        CertificateOutcome::CertifiedNegative => "CertifiedNegative".to_string(),
        CertificateOutcome::FoundNonNegative(profile) => {
            format!("FoundNonNegative at {profile:?}")
        }
        CertificateOutcome::Inconclusive => "Inconclusive".to_string(),
    };
    if as_json {
        println!(
            "{}",
            json!({
                "outcome": text,
                "cycle": format_cycle(&cycle),
                "lambda": args.lambda,
                "samples": args.samples,
            })
        );
    } else {
        println!("cycle {}; {}", format_cycle(&cycle), text);
    }
    Ok(())
}
