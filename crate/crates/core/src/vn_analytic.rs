//! Closed-form Nash equilibrium of continuous von Neumann poker.
//!
//! With pot P = 2a and bet B, let D = PB + 2(P+B)^2. The Player bluffs below
//! x1 = PB/D, checks through the middle, and value-bets above
//! x2 = (2(P+B)^2 - P^2)/D. The Dealer must call with total mass
//! c = P(P+B)/D inside (x1, x2); the admissible choice concentrates that mass
//! directly below x2, calling everything above y0 = x2 - c. The Player nets
//! (P/2) * PB/D per round.

use crate::game::{GameSpec, Role, Strategy};

/// Thresholds and value of the continuous-game equilibrium.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VnSolution {
    /// Upper edge of the bluff-bet region (x1).
    pub bluff_threshold: f64,
    /// Lower edge of the value-bet region (x2).
    pub value_threshold: f64,
    /// Dealer call mass required inside the check region (c).
    pub call_mass: f64,
    /// Admissible Dealer call threshold (y0 = x2 - c).
    pub call_threshold: f64,
    /// Player's net expectation per round.
    pub game_value: f64,
}

/// Solves the continuous game for the given ante and bet.
pub fn solve(spec: &GameSpec) -> VnSolution {
    let pot = spec.pot();
    let bet = spec.bet();
    let denom = pot * bet + 2.0 * (pot + bet) * (pot + bet);
    let bluff_threshold = pot * bet / denom;
    let value_threshold = (2.0 * (pot + bet) * (pot + bet) - pot * pot) / denom;
    let call_mass = pot * (pot + bet) / denom;
    let call_threshold = bet * (3.0 * pot + 2.0 * bet) / denom;
    VnSolution {
        bluff_threshold,
        value_threshold,
        call_mass,
        call_threshold,
        game_value: pot / 2.0 * pot * bet / denom,
    }
}

/// Equilibrium bet probability at hand value `x`: bet the bluff and value
/// regions, check between. Hands exactly on a threshold act with the region
/// below it.
pub fn player_equilibrium(x: f64, sol: &VnSolution) -> f64 {
    if x <= sol.bluff_threshold || x > sol.value_threshold {
        1.0
    } else {
        0.0
    }
}

/// Admissible equilibrium call probability at hand value `y`: fold below the
/// call threshold, call above it.
pub fn dealer_admissible(y: f64, sol: &VnSolution) -> f64 {
    if y > sol.call_threshold {
        1.0
    } else {
        0.0
    }
}

/// Samples the continuous equilibrium onto the M-hand grid. Hand k owns the
/// cell [(k-1)/M, k/M) and is sampled at its center, which keeps the
/// discretized pair within O(1/M) exploitability of an exact equilibrium;
/// sampling cell edges instead biases every threshold by half a cell.
pub fn discretize(sol: &VnSolution, hands: usize) -> (Strategy, Strategy) {
    assert!(hands >= 2, "need at least two hands");
    let player: Vec<f64> = (0..hands)
        .map(|k| player_equilibrium((k as f64 + 0.5) / hands as f64, sol))
        .collect();
    let dealer: Vec<f64> = (0..hands)
        .map(|k| dealer_admissible((k as f64 + 0.5) / hands as f64, sol))
        .collect();
    (
        Strategy::new(player, Role::Player).unwrap(),
        Strategy::new(dealer, Role::Dealer).unwrap(),
    )
}

/// Player's gain from betting instead of checking at hand value `x`, against
/// the admissible Dealer, integrated in closed form. Zero at both thresholds.
pub fn player_bet_gain_continuous(x: f64, sol: &VnSolution, spec: &GameSpec) -> f64 {
    let pot = spec.pot();
    let bet = spec.bet();
    let call_below = (x - sol.call_threshold).max(0.0);
    let call_above = 1.0 - x.max(sol.call_threshold);
    pot * (1.0 - x) + bet * call_below - (pot + bet) * call_above
}
