//! The effective run configuration.
//!
//! Every command resolves its arguments and defaults into a [`RunConfig`],
//! executes from that alone, and echoes it as `config.toml` into the output
//! directory, so any run can be reproduced byte-for-byte with `run --config`.
//! Unknown keys are rejected when loading.

use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CommandKind {
    #[serde(rename = "solve-vn")]
    SolveVn,
    #[serde(rename = "equity")]
    Equity,
    #[serde(rename = "train-cfr")]
    TrainCfr,
    #[serde(rename = "train-ga")]
    TrainGa,
    #[serde(rename = "verify")]
    Verify,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GameKind {
    Vn,
    Flop,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GameSection {
    pub kind: GameKind,
    pub ante: f64,
    pub bet: f64,
    /// Hand count for the von Neumann grid; flop poker always has 169.
    pub hands: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CfrSection {
    pub iterations: u64,
    pub seed: u64,
    pub checkpoint_every: u64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GaSection {
    pub population: usize,
    pub generations: usize,
    pub rounds_per_generation: usize,
    pub selection_fraction: f64,
    pub mutation_probability: f64,
    pub starting_bankroll: f64,
    /// "bankroll" or "negative_squared_loss".
    pub fitness: String,
    pub seed: u64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EquitySection {
    pub board_size: u8,
    /// "exact" or "monte_carlo".
    pub mode: String,
    pub samples: u64,
    pub seed: u64,
    /// Equity table file: written by `equity`, read by flop training and
    /// verification.
    pub path: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifySection {
    pub player_csv: String,
    pub dealer_csv: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    pub directory: Option<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub command: CommandKind,
    pub game: Option<GameSection>,
    pub cfr: Option<CfrSection>,
    pub ga: Option<GaSection>,
    pub equity: Option<EquitySection>,
    pub verify: Option<VerifySection>,
    pub output: OutputSection,
}

impl RunConfig {
    pub fn to_toml(&self) -> String {
        toml::to_string_pretty(self).expect("config serializes")
    }

    pub fn from_toml(text: &str) -> Result<RunConfig, CliError> {
        toml::from_str(text).map_err(|err| CliError::parse(format!("bad config: {err}")))
    }
}
