//! Solver workbench for two half-street poker games.
//!
//! Discrete von Neumann poker deals each seat a uniform number and compares
//! them at showdown; flop poker deals real hole cards from a 52-card deck,
//! reduces them to the 169 preflop classes, and resolves showdowns with a
//! three-card board. Both share the same betting structure (ante, one bet,
//! call/fold), modeled by [`game::HalfStreetGame`]. On top of that sit a
//! closed-form equilibrium for the von Neumann game ([`vn_analytic`]), a
//! counterfactual regret minimization trainer ([`cfr`]), a genetic-algorithm
//! trainer ([`ga`]), and equilibrium diagnostics ([`verify`]). The card
//! machinery lives in [`cards`] (exact 7462-class hand evaluation),
//! [`abstraction`] (the 169-class grid and deal distributions), and
//! [`equity`] (exact or Monte-Carlo win/draw tables).

pub mod abstraction;
pub mod cards;
pub mod cfr;
pub mod equity;
pub mod ga;
pub mod game;
pub mod verify;
pub mod vn_analytic;

pub use abstraction::{ClassIndex, ClassPrior, ConditionalDist, NUM_CLASSES};
pub use cards::{Card, HandCategory, RankIndex, RankTables, NUM_HAND_RANKS};
pub use cfr::{RegretState, TrainReport};
pub use equity::{EquityMode, EquityTables, Matchup};
pub use game::{FlopGame, GameSpec, HalfStreetGame, Role, Showdown, Strategy, VnGame};
pub use ga::{Chromosome, FitnessMode, GaConfig, GaReport, Participant, Population};
pub use verify::Diagnostics;
pub use vn_analytic::VnSolution;
