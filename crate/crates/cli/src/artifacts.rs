//! Readers and writers for the run artifacts: strategy CSVs, diagnostics
//! JSON, checkpoint and fitness time series, and the echoed config.

use std::path::Path;

use halfstreet::cfr::Checkpoint;
use halfstreet::ga::FitnessPoint;
use halfstreet::{HalfStreetGame, Strategy};
use serde::Serialize;

use crate::config::RunConfig;
use crate::CliError;

pub fn ensure_dir(dir: &Path) -> Result<(), CliError> {
    std::fs::create_dir_all(dir)
        .map_err(|err| CliError::io(format!("cannot create {}: {err}", dir.display())))
}

pub fn write_text(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text)
        .map_err(|err| CliError::io(format!("cannot write {}: {err}", path.display())))
}

pub fn write_config(dir: &Path, config: &RunConfig) -> Result<(), CliError> {
    write_text(&dir.join("config.toml"), &config.to_toml())
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(value).expect("serializable");
    text.push('\n');
    write_text(path, &text)
}

/// Strategy CSV: `index,label,probability` with a mandatory header. Von
/// Neumann hands are labeled "1".."M"; flop hands use the grid labels.
pub fn strategy_csv<G: HalfStreetGame>(game: &G, strategy: &Strategy) -> String {
    let mut out = String::from("index,label,probability\n");
    for (k, p) in strategy.probs().iter().enumerate() {
        let index = if game.num_hands() == halfstreet::NUM_CLASSES { k } else { k + 1 };
        out.push_str(&format!("{index},{},{p}\n", game.hand_label(k)));
    }
    out
}

pub fn read_strategy_csv(path: &Path, expected: usize) -> Result<Vec<f64>, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|err| CliError::parse(format!("cannot read {}: {err}", path.display())))?;
    let mut lines = text.lines();
    match lines.next() {
        Some("index,label,probability") => {}
        _ => return Err(CliError::parse(format!("{}: missing header row", path.display()))),
    }
    let mut probs = Vec::new();
    for (n, line) in lines.enumerate() {
        let mut cols = line.split(',');
        let (_, _, prob) = (
            cols.next(),
            cols.next(),
            cols.next().ok_or_else(|| {
                CliError::parse(format!("{}: row {} has too few columns", path.display(), n + 2))
            })?,
        );
        if cols.next().is_some() {
            return Err(CliError::parse(format!(
                "{}: row {} has too many columns",
                path.display(),
                n + 2
            )));
        }
        let value: f64 = prob.parse().map_err(|_| {
            CliError::parse(format!("{}: bad probability {prob:?}", path.display()))
        })?;
        if !(0.0..=1.0).contains(&value) {
            return Err(CliError::parse(format!(
                "{}: probability {value} outside [0, 1]",
                path.display()
            )));
        }
        probs.push(value);
    }
    if probs.len() != expected {
        return Err(CliError::parse(format!(
            "{}: {} hands, game expects {expected}",
            path.display(),
            probs.len()
        )));
    }
    Ok(probs)
}

pub fn checkpoints_csv(checkpoints: &[Checkpoint]) -> String {
    let mut out = String::from("iteration,exploitability\n");
    for c in checkpoints {
        out.push_str(&format!("{},{}\n", c.iteration, c.exploitability));
    }
    out
}

pub fn fitness_csv(series: &[FitnessPoint]) -> String {
    let mut out =
        String::from("generation,mean_top_alpha_fitness_player,mean_top_alpha_fitness_dealer\n");
    for p in series {
        out.push_str(&format!("{},{},{}\n", p.generation, p.player_mean, p.dealer_mean));
    }
    out
}

/// Per-hand diagnostics CSV: strategy entries next to their action gains.
pub fn diag_csv<G: HalfStreetGame>(game: &G, strategy: &Strategy, gains: &[f64]) -> String {
    let mut out = String::from("index,label,probability,gain\n");
    for (k, (p, g)) in strategy.probs().iter().zip(gains).enumerate() {
        let index = if game.num_hands() == halfstreet::NUM_CLASSES { k } else { k + 1 };
        out.push_str(&format!("{index},{},{p},{g}\n", game.hand_label(k)));
    }
    out
}

/// Summary written by `verify` and by the trainers.
#[derive(Debug, Serialize)]
pub struct DiagnosticsJson {
    pub value_player: f64,
    pub value_dealer: f64,
    pub exploitability: f64,
    pub dealer_call_mass: Option<f64>,
    pub sign_violations_player: usize,
    pub sign_violations_dealer: usize,
}

/// Hands whose strategy disagrees with the sign of a decisive action gain.
pub fn sign_violations(strategy: &[f64], gains: &[f64], threshold: f64) -> usize {
    strategy
        .iter()
        .zip(gains)
        .filter(|&(&p, &g)| g.abs() > threshold && (p >= 0.5) != (g > 0.0))
        .count()
}
