//! Command-line front end for the half-street poker solver workbench.
//!
//! Subcommands build equity tables, run the analytic / CFR / GA solvers,
//! and verify strategies. Every run resolves its arguments into an effective
//! config, executes from it, and echoes it into the output directory;
//! `run --config <dir>/config.toml` reproduces the run byte-for-byte.
//!
//! Exit codes: 0 success, 2 argument error, 3 I/O error, 4 missing
//! dependency artifact, 5 parse error.

mod artifacts;
mod config;

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use halfstreet::equity::{self, EquityFileError, EquityMode, EquityTables};
use halfstreet::ga::{FitnessMode, GaConfig};
use halfstreet::vn_analytic;
use halfstreet::{cfr, verify, FlopGame, GameSpec, HalfStreetGame, Role, Strategy, VnGame};
use serde::Serialize;

use artifacts::{
    checkpoints_csv, diag_csv, ensure_dir, fitness_csv, read_strategy_csv, sign_violations,
    strategy_csv, write_config, write_json, write_text, DiagnosticsJson,
};
use config::{
    CfrSection, CommandKind, EquitySection, GaSection, GameKind, GameSection, OutputSection,
    RunConfig, VerifySection,
};

/// Error carrying the process exit code.
#[derive(Debug)]
pub struct CliError {
    code: u8,
    message: String,
}

impl CliError {
    fn argument(message: impl Into<String>) -> CliError {
        CliError { code: 2, message: message.into() }
    }

    fn io(message: impl Into<String>) -> CliError {
        CliError { code: 3, message: message.into() }
    }

    fn missing_artifact(message: impl Into<String>) -> CliError {
        CliError { code: 4, message: message.into() }
    }

    fn parse(message: impl Into<String>) -> CliError {
        CliError { code: 5, message: message.into() }
    }
}

#[derive(Parser)]
#[command(name = "halfstreet", version, about = "Half-street poker solver workbench")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct GameArgs {
    /// Game family: vn (discrete von Neumann) or flop.
    #[arg(long, default_value = "vn")]
    game: String,
    /// Ante paid by both seats.
    #[arg(long)]
    ante: f64,
    /// Bet size available to the Player.
    #[arg(long)]
    bet: f64,
    /// Hand count for the von Neumann grid (flop poker is fixed at 169).
    #[arg(long, default_value_t = 100)]
    hands: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Solve continuous von Neumann poker in closed form and discretize it.
    SolveVn {
        /// Ante paid by both seats.
        #[arg(long)]
        ante: f64,
        /// Bet size available to the Player.
        #[arg(long)]
        bet: f64,
        /// Grid size for the discretized strategies.
        #[arg(long, default_value_t = 100)]
        hands: usize,
        /// Output directory for the solution and strategy CSVs.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build and persist flop equity tables.
    Equity {
        /// Community cards at showdown: 3 or 5.
        #[arg(long, default_value_t = 3)]
        board_size: u8,
        /// "exact" enumeration or seeded "monte_carlo" sampling.
        #[arg(long, default_value = "exact")]
        mode: String,
        /// Samples per class pair in monte_carlo mode.
        #[arg(long, default_value_t = 1_000_000, value_parser = parse_count)]
        samples: u64,
        /// Seed for monte_carlo mode.
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Output directory; the table is written as equity.tbl inside it.
        #[arg(long)]
        out: PathBuf,
    },
    /// Train a solver by self-play.
    Train {
        #[command(subcommand)]
        algorithm: TrainCommand,
    },
    /// Compute equilibrium diagnostics for a strategy pair.
    Verify {
        #[command(flatten)]
        game: GameArgs,
        /// Player strategy CSV.
        #[arg(long)]
        player: PathBuf,
        /// Dealer strategy CSV.
        #[arg(long)]
        dealer: PathBuf,
        /// Equity table file (required for flop games).
        #[arg(long)]
        equity: Option<PathBuf>,
        /// Optional output directory for diagnostics files.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Re-run a persisted effective config.
    Run {
        /// Path to a config.toml produced by a previous run.
        #[arg(long)]
        config: PathBuf,
    },
}

#[derive(Subcommand)]
enum TrainCommand {
    /// Counterfactual regret minimization.
    Cfr {
        #[command(flatten)]
        game: GameArgs,
        /// Self-play rounds; scientific notation accepted (e.g. 1e7).
        #[arg(long, value_parser = parse_count)]
        iters: u64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Exploitability checkpoint cadence; defaults to iters/20.
        #[arg(long, value_parser = parse_count)]
        checkpoint_every: Option<u64>,
        /// Equity table file (required for flop games).
        #[arg(long)]
        equity: Option<PathBuf>,
        /// Output directory.
        #[arg(long)]
        out: PathBuf,
    },
    /// Genetic algorithm.
    Ga {
        #[command(flatten)]
        game: GameArgs,
        /// Population size per role (or Participants), must be even.
        #[arg(long, default_value_t = 1_000)]
        population: usize,
        /// Rounds of evolution.
        #[arg(long, default_value_t = 200, value_parser = parse_count_usize)]
        generations: usize,
        /// Random pairings played per generation.
        #[arg(long, default_value_t = 2_000, value_parser = parse_count_usize)]
        rounds: usize,
        /// Fraction of top performers kept for breeding.
        #[arg(long, default_value_t = 0.1)]
        alpha: f64,
        /// Per-gene mutation probability.
        #[arg(long, default_value_t = 1e-6)]
        mutation: f64,
        /// Starting bankroll reset at each generation.
        #[arg(long, default_value_t = 1e4)]
        bankroll: f64,
        /// "bankroll" or "negative_squared_loss".
        #[arg(long, default_value = "bankroll")]
        fitness: String,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Equity table file (required for flop games).
        #[arg(long)]
        equity: Option<PathBuf>,
        /// Output directory.
        #[arg(long)]
        out: PathBuf,
    },
}

/// Accepts "10000000" or "1e7" style counts.
fn parse_count(s: &str) -> Result<u64, String> {
    let value: f64 = s.parse().map_err(|_| format!("{s:?} is not a number"))?;
    if !value.is_finite() || value < 1.0 || value > 1e18 {
        return Err(format!("{s:?} is not a positive count"));
    }
    Ok(value.round() as u64)
}

fn parse_count_usize(s: &str) -> Result<usize, String> {
    parse_count(s).map(|v| v as usize)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {}", err.message);
            ExitCode::from(err.code)
        }
    }
}

fn game_section(args: &GameArgs) -> Result<GameSection, CliError> {
    let kind = match args.game.as_str() {
        "vn" => GameKind::Vn,
        "flop" => GameKind::Flop,
        other => return Err(CliError::argument(format!("unknown game {other:?}"))),
    };
    let hands = match kind {
        GameKind::Vn => args.hands,
        GameKind::Flop => halfstreet::NUM_CLASSES,
    };
    Ok(GameSection { kind, ante: args.ante, bet: args.bet, hands })
}

fn equity_section_for_input(path: &Option<PathBuf>, kind: GameKind) -> Option<EquitySection> {
    match (kind, path) {
        (GameKind::Flop, Some(path)) => Some(EquitySection {
            board_size: 3,
            mode: "exact".into(),
            samples: 0,
            seed: 0,
            path: path.display().to_string(),
        }),
        _ => None,
    }
}

/// Resolves CLI arguments into an effective config, then executes it.
fn dispatch(command: Command) -> Result<(), CliError> {
    let config = match command {
        Command::SolveVn { ante, bet, hands, out } => RunConfig {
            command: CommandKind::SolveVn,
            game: Some(GameSection { kind: GameKind::Vn, ante, bet, hands }),
            cfr: None,
            ga: None,
            equity: None,
            verify: None,
            output: OutputSection { directory: out.map(|p| p.display().to_string()) },
        },
        Command::Equity { board_size, mode, samples, seed, out } => {
            let path = out.join("equity.tbl").display().to_string();
            RunConfig {
                command: CommandKind::Equity,
                game: None,
                cfr: None,
                ga: None,
                equity: Some(EquitySection { board_size, mode, samples, seed, path }),
                verify: None,
                output: OutputSection { directory: Some(out.display().to_string()) },
            }
        }
        Command::Train { algorithm } => match algorithm {
            TrainCommand::Cfr { game, iters, seed, checkpoint_every, equity, out } => {
                let section = game_section(&game)?;
                RunConfig {
                    command: CommandKind::TrainCfr,
                    equity: equity_section_for_input(&equity, section.kind),
                    game: Some(section),
                    cfr: Some(CfrSection {
                        iterations: iters,
                        seed,
                        checkpoint_every: checkpoint_every
                            .unwrap_or_else(|| cfr::default_checkpoint_every(iters)),
                    }),
                    ga: None,
                    verify: None,
                    output: OutputSection { directory: Some(out.display().to_string()) },
                }
            }
            TrainCommand::Ga {
                game,
                population,
                generations,
                rounds,
                alpha,
                mutation,
                bankroll,
                fitness,
                seed,
                equity,
                out,
            } => {
                let section = game_section(&game)?;
                RunConfig {
                    command: CommandKind::TrainGa,
                    equity: equity_section_for_input(&equity, section.kind),
                    game: Some(section),
                    cfr: None,
                    ga: Some(GaSection {
                        population,
                        generations,
                        rounds_per_generation: rounds,
                        selection_fraction: alpha,
                        mutation_probability: mutation,
                        starting_bankroll: bankroll,
                        fitness,
                        seed,
                    }),
                    verify: None,
                    output: OutputSection { directory: Some(out.display().to_string()) },
                }
            }
        },
        Command::Verify { game, player, dealer, equity, out } => {
            let section = game_section(&game)?;
            RunConfig {
                command: CommandKind::Verify,
                equity: equity_section_for_input(&equity, section.kind),
                game: Some(section),
                cfr: None,
                ga: None,
                verify: Some(VerifySection {
                    player_csv: player.display().to_string(),
                    dealer_csv: dealer.display().to_string(),
                }),
                output: OutputSection { directory: out.map(|p| p.display().to_string()) },
            }
        }
        Command::Run { config } => {
            let text = std::fs::read_to_string(&config).map_err(|err| {
                CliError::io(format!("cannot read {}: {err}", config.display()))
            })?;
            RunConfig::from_toml(&text)?
        }
    };
    execute(&config)
}

fn execute(config: &RunConfig) -> Result<(), CliError> {
    match config.command {
        CommandKind::SolveVn => execute_solve_vn(config),
        CommandKind::Equity => execute_equity(config),
        CommandKind::TrainCfr | CommandKind::TrainGa => execute_train(config),
        CommandKind::Verify => execute_verify(config),
    }
}

fn game_spec(section: &GameSection) -> Result<GameSpec, CliError> {
    GameSpec::new(section.ante, section.bet).map_err(|err| CliError::argument(err.to_string()))
}

fn require_game<'c>(config: &'c RunConfig) -> Result<&'c GameSection, CliError> {
    config.game.as_ref().ok_or_else(|| CliError::argument("config is missing a [game] section"))
}

fn output_dir(config: &RunConfig) -> Option<PathBuf> {
    config.output.directory.as_ref().map(PathBuf::from)
}

#[derive(Serialize)]
struct VnSolutionJson {
    x1: f64,
    x2: f64,
    c: f64,
    y0: f64,
    value: f64,
}

fn solution_json(sol: &vn_analytic::VnSolution) -> VnSolutionJson {
    VnSolutionJson {
        x1: sol.bluff_threshold,
        x2: sol.value_threshold,
        c: sol.call_mass,
        y0: sol.call_threshold,
        value: sol.game_value,
    }
}

fn execute_solve_vn(config: &RunConfig) -> Result<(), CliError> {
    let section = require_game(config)?;
    if section.kind != GameKind::Vn {
        return Err(CliError::argument("solve-vn only applies to the vn game"));
    }
    if section.hands < 2 {
        return Err(CliError::argument("need at least two hands"));
    }
    let spec = game_spec(section)?;
    let sol = vn_analytic::solve(&spec);
    let summary = solution_json(&sol);
    println!("{}", serde_json::to_string_pretty(&summary).expect("serializable"));

    if let Some(dir) = output_dir(config) {
        ensure_dir(&dir)?;
        write_config(&dir, config)?;
        write_json(&dir.join("solution.json"), &summary)?;
        let game = VnGame::new(spec, section.hands);
        let (player, dealer) = vn_analytic::discretize(&sol, section.hands);
        write_text(&dir.join("player_strategy.csv"), &strategy_csv(&game, &player))?;
        write_text(&dir.join("dealer_strategy.csv"), &strategy_csv(&game, &dealer))?;
    }
    Ok(())
}

fn parse_equity_mode(section: &EquitySection) -> Result<EquityMode, CliError> {
    match section.mode.as_str() {
        "exact" => Ok(EquityMode::Exact),
        "monte_carlo" | "mc" => {
            Ok(EquityMode::MonteCarlo { samples: section.samples, seed: section.seed })
        }
        other => Err(CliError::argument(format!("unknown equity mode {other:?}"))),
    }
}

fn execute_equity(config: &RunConfig) -> Result<(), CliError> {
    let section = config
        .equity
        .as_ref()
        .ok_or_else(|| CliError::argument("config is missing an [equity] section"))?;
    let mode = parse_equity_mode(section)?;
    let ranks = halfstreet::RankTables::build();
    let tables = equity::build_equity_tables(&ranks, section.board_size, mode)
        .map_err(|err| CliError::argument(err.to_string()))?;

    if let Some(dir) = output_dir(config) {
        ensure_dir(&dir)?;
        write_config(&dir, config)?;
    }
    equity::save_tables(&tables, Path::new(&section.path))
        .map_err(|err| CliError::io(err.to_string()))?;
    Ok(())
}

fn load_equity(config: &RunConfig) -> Result<Arc<EquityTables>, CliError> {
    let section = config.equity.as_ref().ok_or_else(|| {
        CliError::missing_artifact("flop games need an equity table; pass --equity FILE")
    })?;
    let tables = equity::load_tables(Path::new(&section.path)).map_err(|err| match err {
        EquityFileError::Missing(path) => {
            CliError::missing_artifact(format!("equity file not found: {path}"))
        }
        EquityFileError::Io(err) => CliError::io(err.to_string()),
        other => CliError::parse(other.to_string()),
    })?;
    if tables.board_size() != 3 {
        return Err(CliError::argument(format!(
            "flop games use 3-card boards; equity file has board_size {}",
            tables.board_size()
        )));
    }
    Ok(Arc::new(tables))
}

/// The two game families behind one object so train/verify share one path.
enum AnyGame {
    Vn(VnGame),
    Flop(FlopGame),
}

impl AnyGame {
    fn build(config: &RunConfig) -> Result<AnyGame, CliError> {
        let section = require_game(config)?;
        let spec = game_spec(section)?;
        match section.kind {
            GameKind::Vn => {
                if section.hands < 2 {
                    return Err(CliError::argument("need at least two hands"));
                }
                Ok(AnyGame::Vn(VnGame::new(spec, section.hands)))
            }
            GameKind::Flop => {
                if section.hands != halfstreet::NUM_CLASSES {
                    return Err(CliError::argument("flop poker always has 169 hands"));
                }
                Ok(AnyGame::Flop(FlopGame::new(spec, load_equity(config)?)))
            }
        }
    }
}

fn diagnostics_json(game: &AnyGame, player: &Strategy, dealer: &Strategy) -> DiagnosticsJson {
    match game {
        AnyGame::Vn(game) => {
            let sol = vn_analytic::solve(&game.spec());
            let diag = verify::diagnostics_vn(player, dealer, game, &sol);
            DiagnosticsJson {
                value_player: diag.value_player,
                value_dealer: diag.value_dealer,
                exploitability: diag.exploitability,
                dealer_call_mass: diag.dealer_call_mass,
                sign_violations_player: sign_violations(player.probs(), &diag.player_gain, 0.05),
                sign_violations_dealer: sign_violations(dealer.probs(), &diag.dealer_gain, 0.05),
            }
        }
        AnyGame::Flop(game) => {
            let diag = verify::diagnostics_flop(player, dealer, game).expect("matching dims");
            DiagnosticsJson {
                value_player: diag.value_player,
                value_dealer: diag.value_dealer,
                exploitability: diag.exploitability,
                dealer_call_mass: None,
                sign_violations_player: sign_violations(player.probs(), &diag.player_gain, 0.05),
                sign_violations_dealer: sign_violations(dealer.probs(), &diag.dealer_gain, 0.05),
            }
        }
    }
}

fn write_strategies(
    dir: &Path,
    game: &AnyGame,
    player: &Strategy,
    dealer: &Strategy,
) -> Result<(), CliError> {
    let (p_csv, d_csv) = match game {
        AnyGame::Vn(g) => (strategy_csv(g, player), strategy_csv(g, dealer)),
        AnyGame::Flop(g) => (strategy_csv(g, player), strategy_csv(g, dealer)),
    };
    write_text(&dir.join("player_strategy.csv"), &p_csv)?;
    write_text(&dir.join("dealer_strategy.csv"), &d_csv)
}

fn execute_train(config: &RunConfig) -> Result<(), CliError> {
    let game = AnyGame::build(config)?;
    let dir = output_dir(config)
        .ok_or_else(|| CliError::argument("training requires an output directory"))?;
    ensure_dir(&dir)?;
    write_config(&dir, config)?;

    let (player, dealer) = match config.command {
        CommandKind::TrainCfr => {
            let section = config
                .cfr
                .as_ref()
                .ok_or_else(|| CliError::argument("config is missing a [cfr] section"))?;
            if section.iterations == 0 {
                return Err(CliError::argument("iterations must be positive"));
            }
            let report = match &game {
                AnyGame::Vn(g) => cfr::train(
                    g,
                    section.iterations,
                    section.seed,
                    Some(section.checkpoint_every),
                ),
                AnyGame::Flop(g) => cfr::train(
                    g,
                    section.iterations,
                    section.seed,
                    Some(section.checkpoint_every),
                ),
            };
            write_text(&dir.join("checkpoints.csv"), &checkpoints_csv(&report.checkpoints))?;
            (report.player, report.dealer)
        }
        CommandKind::TrainGa => {
            let section = config
                .ga
                .as_ref()
                .ok_or_else(|| CliError::argument("config is missing a [ga] section"))?;
            let fitness_mode = match section.fitness.as_str() {
                "bankroll" => FitnessMode::Bankroll,
                "negative_squared_loss" => FitnessMode::NegativeSquaredLoss,
                other => {
                    return Err(CliError::argument(format!("unknown fitness mode {other:?}")))
                }
            };
            let ga_config = GaConfig {
                population: section.population,
                generations: section.generations,
                rounds_per_generation: section.rounds_per_generation,
                selection_fraction: section.selection_fraction,
                mutation_probability: section.mutation_probability,
                starting_bankroll: section.starting_bankroll,
                fitness_mode,
                seed: section.seed,
            };
            let report = match &game {
                AnyGame::Vn(g) => halfstreet::ga::evolve(&ga_config, g),
                AnyGame::Flop(g) => halfstreet::ga::evolve(&ga_config, g),
            }
            .map_err(|err| CliError::argument(err.to_string()))?;
            write_text(&dir.join("fitness.csv"), &fitness_csv(&report.fitness_series))?;
            (report.player, report.dealer)
        }
        _ => unreachable!("train commands only"),
    };

    write_strategies(&dir, &game, &player, &dealer)?;
    write_json(&dir.join("diagnostics.json"), &diagnostics_json(&game, &player, &dealer))?;
    Ok(())
}

fn execute_verify(config: &RunConfig) -> Result<(), CliError> {
    let game = AnyGame::build(config)?;
    let section = config
        .verify
        .as_ref()
        .ok_or_else(|| CliError::argument("config is missing a [verify] section"))?;
    let hands = match &game {
        AnyGame::Vn(g) => g.num_hands(),
        AnyGame::Flop(g) => g.num_hands(),
    };
    let player = Strategy::new(
        read_strategy_csv(Path::new(&section.player_csv), hands)?,
        Role::Player,
    )
    .map_err(|err| CliError::parse(err.to_string()))?;
    let dealer = Strategy::new(
        read_strategy_csv(Path::new(&section.dealer_csv), hands)?,
        Role::Dealer,
    )
    .map_err(|err| CliError::parse(err.to_string()))?;

    let summary = diagnostics_json(&game, &player, &dealer);
    println!("{}", serde_json::to_string_pretty(&summary).expect("serializable"));

    if let Some(dir) = output_dir(config) {
        ensure_dir(&dir)?;
        write_config(&dir, config)?;
        write_json(&dir.join("diagnostics.json"), &summary)?;
        let (player_gain, dealer_gain) = match &game {
            AnyGame::Vn(g) => {
                let spec = g.spec();
                (verify::vn_player_gain(&dealer, &spec), verify::vn_dealer_gain(&player, &spec))
            }
            AnyGame::Flop(g) => (
                verify::flop_player_gain(&dealer, g.tables(), &g.spec())
                    .expect("matching dims"),
                verify::flop_dealer_gain(&player, g.tables(), &g.spec())
                    .expect("matching dims"),
            ),
        };
        let (p_csv, d_csv) = match &game {
            AnyGame::Vn(g) => {
                (diag_csv(g, &player, &player_gain), diag_csv(g, &dealer, &dealer_gain))
            }
            AnyGame::Flop(g) => {
                (diag_csv(g, &player, &player_gain), diag_csv(g, &dealer, &dealer_gain))
            }
        };
        write_text(&dir.join("diag_player.csv"), &p_csv)?;
        write_text(&dir.join("diag_dealer.csv"), &d_csv)?;
    }
    Ok(())
}
