//! Vanilla counterfactual regret minimization over a half-street game.
//!
//! One Player and one Dealer self-play for T rounds. Each round deals a hand
//! pair, compares what each pure action would have earned against what the
//! current mixed strategies expect, accumulates those counterfactual regrets
//! (clamped at zero), and regret-matches the next strategies. The Dealer's
//! regrets are weighted by the Player's betting probability, which is the
//! chance of reaching the call/fold decision. Time-averaged strategies from
//! the cumulative strategy sums converge to equilibrium.

use crate::game::{HalfStreetGame, Role, Strategy};
use crate::verify::exploitability;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Index of the aggressive action (bet / call) in per-hand action pairs.
const AGGRESSIVE: usize = 0;
/// Index of the passive action (check / fold).
const PASSIVE: usize = 1;

/// Cumulative regrets, cumulative strategy weights, and the current
/// regret-matched strategy for one seat.
#[derive(Debug, Clone)]
pub struct RegretState {
    regrets: Vec<[f64; 2]>,
    strategy_sum: Vec<[f64; 2]>,
    current: Vec<f64>,
}

impl RegretState {
    /// Fresh state: zero regrets and strategy sums, strategies at one half.
    pub fn new(hands: usize) -> RegretState {
        RegretState {
            regrets: vec![[0.0; 2]; hands],
            strategy_sum: vec![[0.0; 2]; hands],
            current: vec![0.5; hands],
        }
    }

    pub fn num_hands(&self) -> usize {
        self.current.len()
    }

    /// Clamped cumulative regrets (aggressive, passive) for one hand.
    pub fn regrets(&self, hand: usize) -> [f64; 2] {
        self.regrets[hand]
    }

    pub fn strategy_sum(&self, hand: usize) -> [f64; 2] {
        self.strategy_sum[hand]
    }

    /// Current probability of the aggressive action for one hand.
    pub fn current(&self, hand: usize) -> f64 {
        self.current[hand]
    }

    /// Time-averaged strategy from the cumulative sums; hands never visited
    /// default to one half.
    pub fn average(&self, role: Role) -> Strategy {
        let probs = self
            .strategy_sum
            .iter()
            .map(|&[agg, pass]| if agg + pass == 0.0 { 0.5 } else { agg / (agg + pass) })
            .collect();
        Strategy::new(probs, role).unwrap()
    }
}

/// Regret matching for two actions: play in proportion to positive regret,
/// and mix evenly when neither action has any.
pub fn regret_match(r_action: f64, r_other: f64) -> f64 {
    debug_assert!(r_action >= 0.0 && r_other >= 0.0, "inputs are post-clamp regrets");
    if r_action + r_other == 0.0 {
        0.5
    } else {
        r_action / (r_action + r_other)
    }
}

/// One self-play round at the dealt hands (i, j): accumulate counterfactual
/// regrets, clamp negatives, refresh the current strategies, and add them to
/// the strategy sums.
pub fn cfr_round<G: HalfStreetGame>(
    player: &mut RegretState,
    dealer: &mut RegretState,
    game: &G,
    i: usize,
    j: usize,
) {
    let spec = game.spec();
    let (ante, bet) = (spec.ante(), spec.bet());
    let margin = game.showdown(i, j).margin();
    let v_player = player.current[i];
    let v_dealer = dealer.current[j];

    // Player's expected values for the pure actions and the current mix.
    let e_bet = v_dealer * (ante + bet) * margin + (1.0 - v_dealer) * ante;
    let e_check = ante * margin;
    let e_player = v_player * e_bet + (1.0 - v_player) * e_check;

    // Dealer's values are conditional on facing a bet; the regret deltas are
    // weighted by the probability of that happening.
    let e_call = (ante + bet) * -margin;
    let e_fold = -ante;
    let e_dealer = v_dealer * e_call + (1.0 - v_dealer) * e_fold;

    let p_regret = &mut player.regrets[i];
    p_regret[AGGRESSIVE] = (p_regret[AGGRESSIVE] + e_bet - e_player).max(0.0);
    p_regret[PASSIVE] = (p_regret[PASSIVE] + e_check - e_player).max(0.0);
    player.current[i] = regret_match(p_regret[AGGRESSIVE], p_regret[PASSIVE]);

    let d_regret = &mut dealer.regrets[j];
    d_regret[AGGRESSIVE] = (d_regret[AGGRESSIVE] + v_player * (e_call - e_dealer)).max(0.0);
    d_regret[PASSIVE] = (d_regret[PASSIVE] + v_player * (e_fold - e_dealer)).max(0.0);
    dealer.current[j] = regret_match(d_regret[AGGRESSIVE], d_regret[PASSIVE]);

    player.strategy_sum[i][AGGRESSIVE] += player.current[i];
    player.strategy_sum[i][PASSIVE] += 1.0 - player.current[i];
    dealer.strategy_sum[j][AGGRESSIVE] += dealer.current[j];
    dealer.strategy_sum[j][PASSIVE] += 1.0 - dealer.current[j];
}

/// Exploitability of the running average strategies at one checkpoint.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Checkpoint {
    pub iteration: u64,
    pub exploitability: f64,
}

/// Output of a training run.
#[derive(Debug, Clone)]
pub struct TrainReport {
    pub iterations: u64,
    pub player: Strategy,
    pub dealer: Strategy,
    pub checkpoints: Vec<Checkpoint>,
}

/// Default checkpoint cadence: twenty per run.
pub fn default_checkpoint_every(iterations: u64) -> u64 {
    (iterations / 20).max(1)
}

/// Trains for `iterations` self-play rounds; deterministic given the seed.
/// `checkpoint_every = Some(n)` records exploitability every n rounds.
pub fn train<G: HalfStreetGame>(
    game: &G,
    iterations: u64,
    seed: u64,
    checkpoint_every: Option<u64>,
) -> TrainReport {
    assert!(iterations >= 1, "need at least one round");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut player = RegretState::new(game.num_hands());
    let mut dealer = RegretState::new(game.num_hands());
    let mut checkpoints = Vec::new();

    for round in 1..=iterations {
        let (i, j) = game.deal(&mut rng);
        cfr_round(&mut player, &mut dealer, game, i, j);
        if let Some(every) = checkpoint_every {
            if round % every == 0 || round == iterations {
                let avg_p = player.average(Role::Player);
                let avg_d = dealer.average(Role::Dealer);
                checkpoints.push(Checkpoint {
                    iteration: round,
                    exploitability: exploitability(&avg_p, &avg_d, game),
                });
            }
        }
    }

    TrainReport {
        iterations,
        player: player.average(Role::Player),
        dealer: dealer.average(Role::Dealer),
        checkpoints,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::{GameSpec, VnGame};
    use crate::vn_analytic::solve;
    use crate::verify::{dealer_call_mass, game_value};
    use rand::Rng;

    fn vn(ante: f64, bet: f64, hands: usize) -> VnGame {
        VnGame::new(GameSpec::new(ante, bet).unwrap(), hands)
    }

    #[test]
    fn regret_match_cases() {
        assert_eq!(regret_match(0.0, 0.0), 0.5);
        assert_eq!(regret_match(3.0, 1.0), 0.75);
        // Pre-clamp (-2, 5) becomes (0, 5) and the first action dies.
        let clamped = (-2.0f64).max(0.0);
        assert_eq!(regret_match(clamped, 5.0), 0.0);
    }

    #[test]
    fn first_round_regrets_from_fresh_state() {
        // Player ahead with everyone still mixing half: betting expects 2,
        // the current mix expects 1.5, so the bet regret grows by 0.5.
        let game = vn(1.0, 2.0, 10);
        let mut player = RegretState::new(10);
        let mut dealer = RegretState::new(10);
        cfr_round(&mut player, &mut dealer, &game, 7, 2);
        assert!((player.regrets(7)[AGGRESSIVE] - 0.5).abs() < 1e-15);
        // Checking expects 1, so its regret update is negative and clamps.
        assert_eq!(player.regrets(7)[PASSIVE], 0.0);
        assert!((player.current(7) - 1.0).abs() < 1e-15);

        // Draw case: the dealer's fold regret is V_P * (-a - E_D).
        let mut player = RegretState::new(10);
        let mut dealer = RegretState::new(10);
        cfr_round(&mut player, &mut dealer, &game, 4, 4);
        let e_dealer: f64 = -(1.0 - 0.5) * 1.0;
        let expected_fold: f64 = 0.5 * (-1.0 - e_dealer);
        assert!((dealer.regrets(4)[PASSIVE] - expected_fold.max(0.0)).abs() < 1e-15);
        // Calling a draw refunds the bet, so its regret is positive.
        let expected_call = 0.5 * (0.0 - e_dealer);
        assert!((dealer.regrets(4)[AGGRESSIVE] - expected_call).abs() < 1e-15);
    }

    #[test]
    fn regrets_stay_nonnegative_and_current_matches_regrets() {
        let game = vn(1.0, 2.0, 30);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(9);
        let mut player = RegretState::new(30);
        let mut dealer = RegretState::new(30);
        for _ in 0..100_000 {
            let i = rng.gen_range(0..30);
            let j = rng.gen_range(0..30);
            cfr_round(&mut player, &mut dealer, &game, i, j);
            let [agg, pass] = player.regrets(i);
            assert!(agg >= 0.0 && pass >= 0.0);
            assert_eq!(player.current(i), regret_match(agg, pass));
            let [agg, pass] = dealer.regrets(j);
            assert!(agg >= 0.0 && pass >= 0.0);
            assert_eq!(dealer.current(j), regret_match(agg, pass));
        }
        // Average strategy entries are strategy-sum ratios in [0, 1].
        let avg = player.average(Role::Player);
        for (hand, &p) in avg.probs().iter().enumerate() {
            let [agg, pass] = player.strategy_sum(hand);
            if agg + pass > 0.0 {
                assert!((p - agg / (agg + pass)).abs() < 1e-15);
            } else {
                assert_eq!(p, 0.5);
            }
        }
    }

    #[test]
    fn training_is_deterministic_per_seed() {
        let game = vn(1.0, 2.0, 50);
        let one = train(&game, 50_000, 123, None);
        let two = train(&game, 50_000, 123, None);
        assert_eq!(one.player.probs(), two.player.probs());
        assert_eq!(one.dealer.probs(), two.dealer.probs());
        let other = train(&game, 50_000, 124, None);
        assert_ne!(one.player.probs(), other.player.probs());
    }

    #[test]
    fn exploitability_decays_across_checkpoints() {
        let game = vn(1.0, 2.0, 100);
        let iterations = 1_000_000;
        let report = train(&game, iterations, 5, Some(10_000));
        let first = report.checkpoints.first().unwrap().exploitability;
        let last = report.checkpoints.last().unwrap().exploitability;
        assert!(
            last <= first / 5.0,
            "exploitability {last} after {iterations} rounds vs {first} at first checkpoint"
        );
        assert_eq!(report.checkpoints.len(), 100);
        assert_eq!(report.checkpoints.last().unwrap().iteration, iterations);
    }

    #[test]
    fn vn_training_approaches_equilibrium() {
        let game = vn(1.0, 2.0, 100);
        let report = train(&game, 2_000_000, 1, None);
        let sol = solve(&game.spec());

        let (value, _) = game_value(&report.player, &report.dealer, &game);
        assert!((value - sol.game_value).abs() < 0.02, "game value {value}");

        let mass = dealer_call_mass(&report.dealer, &sol);
        assert!((mass - sol.call_mass).abs() < 0.05, "call mass {mass}");
    }
}
