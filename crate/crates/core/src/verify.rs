//! Equilibrium diagnostics: per-hand action gains, best response,
//! exploitability, game value, and the Dealer call-mass check.
//!
//! The von Neumann gain grids approximate the continuous indifference
//! integrals on the hand grid: each hand owns a 1/M cell, contributes 1/M to
//! the integral sums (cells strictly below the evaluation hand count as the
//! lower integral), and is positioned at its cell center. Zeros land within
//! one grid cell of the analytic thresholds. The flop gains are exact sums
//! over the 169 classes and equal the zero-sum expected gain of the
//! aggressive action per hand.

use crate::equity::EquityTables;
use crate::game::{FlopGame, GameSpec, HalfStreetGame, Role, Strategy, VnGame};
use crate::vn_analytic::VnSolution;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum VerifyError {
    #[error("strategy has {found} hands, expected {expected}")]
    DimensionMismatch { expected: usize, found: usize },
}

/// Summary of an equilibrium check for a strategy pair.
#[derive(Debug, Clone)]
pub struct Diagnostics {
    /// Per-hand gain of betting over checking for the Player.
    pub player_gain: Vec<f64>,
    /// Per-hand gain of calling over folding for the Dealer, weighted by the
    /// probability of facing a bet.
    pub dealer_gain: Vec<f64>,
    pub value_player: f64,
    pub value_dealer: f64,
    pub exploitability: f64,
    /// Dealer call mass inside the check region (von Neumann games only).
    pub dealer_call_mass: Option<f64>,
}

/// Discrete analog of the Player's bet-minus-check integrand on the M-grid.
pub fn vn_player_gain(dealer: &Strategy, spec: &GameSpec) -> Vec<f64> {
    let hands = dealer.len();
    let m = hands as f64;
    let (pot, bet) = (spec.pot(), spec.bet());
    let q = dealer.probs();
    let total: f64 = q.iter().sum();
    let mut below = 0.0;
    (0..hands)
        .map(|k| {
            let x = (k as f64 + 0.5) / m;
            let above = total - below;
            let gain = pot * (1.0 - x) + bet * below / m - (pot + bet) * above / m;
            below += q[k];
            gain
        })
        .collect()
}

/// Discrete analog of the Dealer's call-minus-fold integrand; nondecreasing
/// whenever the Player strategy is nonnegative.
pub fn vn_dealer_gain(player: &Strategy, spec: &GameSpec) -> Vec<f64> {
    let hands = player.len();
    let m = hands as f64;
    let (pot, bet) = (spec.pot(), spec.bet());
    let p = player.probs();
    let total: f64 = p.iter().sum();
    let mut below = 0.0;
    (0..hands)
        .map(|k| {
            let above = total - below;
            let gain = (pot + bet) * below / m - bet * above / m;
            below += p[k];
            gain
        })
        .collect()
}

fn check_dims(strategy: &Strategy, expected: usize) -> Result<(), VerifyError> {
    if strategy.len() == expected {
        Ok(())
    } else {
        Err(VerifyError::DimensionMismatch { expected, found: strategy.len() })
    }
}

/// Exact per-class gain of betting over checking for the flop Player.
pub fn flop_player_gain(
    dealer: &Strategy,
    tables: &EquityTables,
    spec: &GameSpec,
) -> Result<Vec<f64>, VerifyError> {
    let n = crate::abstraction::NUM_CLASSES;
    check_dims(dealer, n)?;
    let (pot, bet) = (spec.pot(), spec.bet());
    let q = dealer.probs();
    let gains = (0..n)
        .map(|i| {
            let mut called = 0.0;
            for j in 0..n {
                let h = tables.conditional(i, j);
                let w = tables.win(i, j);
                let l = tables.win(j, i);
                let d = tables.draw(i, j);
                called += h * ((pot + bet) * w - bet * l - pot + pot / 2.0 * d) * q[j];
            }
            called + pot * (1.0 - tables.class_win(i) - tables.class_draw(i) / 2.0)
        })
        .collect();
    Ok(gains)
}

/// Exact per-class gain of calling over folding for the flop Dealer, weighted
/// by the Player's betting frequency.
pub fn flop_dealer_gain(
    player: &Strategy,
    tables: &EquityTables,
    spec: &GameSpec,
) -> Result<Vec<f64>, VerifyError> {
    let n = crate::abstraction::NUM_CLASSES;
    check_dims(player, n)?;
    let (pot, bet) = (spec.pot(), spec.bet());
    let p = player.probs();
    let gains = (0..n)
        .map(|j| {
            let mut gain = 0.0;
            for i in 0..n {
                let h = tables.conditional(j, i);
                let w_dealer = tables.win(j, i);
                let w_player = tables.win(i, j);
                let d = tables.draw(j, i);
                gain += h * ((pot + bet) * w_dealer - bet * w_player + pot / 2.0 * d) * p[i];
            }
            gain
        })
        .collect();
    Ok(gains)
}

/// Pure best response to a fixed opponent strategy. Ties break to the
/// passive action (check or fold). Returns the responder's net value.
pub fn best_response<G: HalfStreetGame>(
    opponent: &Strategy,
    role: Role,
    game: &G,
) -> (Strategy, f64) {
    let hands = game.num_hands();
    assert_eq!(opponent.len(), hands, "opponent strategy must match the game");
    let spec = game.spec();
    let (ante, bet) = (spec.ante(), spec.bet());
    let mut probs = vec![0.0; hands];
    let mut value = 0.0;

    match role {
        Role::Player => {
            let q = opponent.probs();
            for i in 0..hands {
                let mut e_bet = 0.0;
                let mut e_check = 0.0;
                for (j, &qj) in q.iter().enumerate() {
                    let weight = game.deal_weight(i, j);
                    let margin = game.showdown(i, j).margin();
                    e_bet += weight * (qj * (ante + bet) * margin + (1.0 - qj) * ante);
                    e_check += weight * ante * margin;
                }
                if e_bet > e_check {
                    probs[i] = 1.0;
                    value += e_bet;
                } else {
                    value += e_check;
                }
            }
        }
        Role::Dealer => {
            let p = opponent.probs();
            for j in 0..hands {
                let mut e_call = 0.0;
                let mut e_fold = 0.0;
                for (i, &pi) in p.iter().enumerate() {
                    let weight = game.deal_weight(i, j);
                    let margin = game.showdown(i, j).margin();
                    let checked = -weight * (1.0 - pi) * ante * margin;
                    e_call += checked - weight * pi * (ante + bet) * margin;
                    e_fold += checked - weight * pi * ante;
                }
                if e_call > e_fold {
                    probs[j] = 1.0;
                    value += e_call;
                } else {
                    value += e_fold;
                }
            }
        }
    }
    (Strategy::new(probs, role).unwrap(), value)
}

/// Exact net game value of a strategy pair by summation over all deals.
/// The two components are accumulated independently and sum to zero.
pub fn game_value<G: HalfStreetGame>(player: &Strategy, dealer: &Strategy, game: &G) -> (f64, f64) {
    let hands = game.num_hands();
    assert_eq!(player.len(), hands);
    assert_eq!(dealer.len(), hands);
    let mut value_player = 0.0;
    let mut value_dealer = 0.0;
    for i in 0..hands {
        for j in 0..hands {
            let weight = game.deal_weight(i, j);
            let (ep, ed) = game.expected_payoffs(i, j, player.probs()[i], dealer.probs()[j]);
            value_player += weight * ep;
            value_dealer += weight * ed;
        }
    }
    (value_player, value_dealer)
}

/// Sum over both roles of (best-response value minus actual value);
/// nonnegative, and zero exactly at an equilibrium of the discrete game.
pub fn exploitability<G: HalfStreetGame>(player: &Strategy, dealer: &Strategy, game: &G) -> f64 {
    let (value_player, value_dealer) = game_value(player, dealer, game);
    let (_, br_player) = best_response(dealer, Role::Player, game);
    let (_, br_dealer) = best_response(player, Role::Dealer, game);
    (br_player - value_player) + (br_dealer - value_dealer)
}

/// Average call probability over grid hands strictly inside the analytic
/// check region (x1, x2).
pub fn dealer_call_mass(dealer: &Strategy, sol: &VnSolution) -> f64 {
    let m = dealer.len() as f64;
    dealer
        .probs()
        .iter()
        .enumerate()
        .filter(|&(k, _)| {
            let x = (k as f64 + 0.5) / m;
            x > sol.bluff_threshold && x < sol.value_threshold
        })
        .map(|(_, &q)| q)
        .sum::<f64>()
        / m
}

/// Full diagnostics for a von Neumann strategy pair.
pub fn diagnostics_vn(
    player: &Strategy,
    dealer: &Strategy,
    game: &VnGame,
    sol: &VnSolution,
) -> Diagnostics {
    let (value_player, value_dealer) = game_value(player, dealer, game);
    Diagnostics {
        player_gain: vn_player_gain(dealer, &game.spec()),
        dealer_gain: vn_dealer_gain(player, &game.spec()),
        value_player,
        value_dealer,
        exploitability: exploitability(player, dealer, game),
        dealer_call_mass: Some(dealer_call_mass(dealer, sol)),
    }
}

/// Full diagnostics for a flop strategy pair.
pub fn diagnostics_flop(
    player: &Strategy,
    dealer: &Strategy,
    game: &FlopGame,
) -> Result<Diagnostics, VerifyError> {
    let (value_player, value_dealer) = game_value(player, dealer, game);
    Ok(Diagnostics {
        player_gain: flop_player_gain(dealer, game.tables(), &game.spec())?,
        dealer_gain: flop_dealer_gain(player, game.tables(), &game.spec())?,
        value_player,
        value_dealer,
        exploitability: exploitability(player, dealer, game),
        dealer_call_mass: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::equity::tests_support::synthetic_tables;
    use crate::vn_analytic::{discretize, solve};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::sync::Arc;

    fn vn(ante: f64, bet: f64, hands: usize) -> VnGame {
        VnGame::new(GameSpec::new(ante, bet).unwrap(), hands)
    }

    fn strategy(probs: Vec<f64>, role: Role) -> Strategy {
        Strategy::new(probs, role).unwrap()
    }

    fn random_strategy(rng: &mut ChaCha8Rng, hands: usize, role: Role) -> Strategy {
        strategy((0..hands).map(|_| rng.gen()).collect(), role)
    }

    #[test]
    fn vn_player_gain_special_dealers() {
        let game = vn(1.0, 2.0, 100);
        let spec = game.spec();
        // Never calling: gain is P(1 - x), positive everywhere on the grid.
        let never = strategy(vec![0.0; 100], Role::Dealer);
        let gain = vn_player_gain(&never, &spec);
        for (k, g) in gain.iter().enumerate() {
            let x = (k as f64 + 0.5) / 100.0;
            assert!((g - spec.pot() * (1.0 - x)).abs() < 1e-12);
            assert!(*g > 0.0);
        }
        // Always calling: the top of the grid approaches gain B, short by the
        // O(1/M) boundary terms (frozen: 1.95 at the last hand).
        let always = strategy(vec![1.0; 100], Role::Dealer);
        let gain = vn_player_gain(&always, &spec);
        assert!((gain[99] - 1.95).abs() < 1e-12);
        assert!((gain[99] - spec.bet()).abs() <= 0.06);
    }

    #[test]
    fn vn_gain_zeros_near_analytic_thresholds() {
        let spec = GameSpec::new(1.0, 2.0).unwrap();
        let sol = solve(&spec);
        let (_, dealer) = discretize(&sol, 100);
        let gain = vn_player_gain(&dealer, &spec);
        let near_bluff = (sol.bluff_threshold * 100.0).round() as usize;
        let near_value = (sol.value_threshold * 100.0).round() as usize;
        // Within O(1/M) of zero at the grid points nearest both thresholds.
        let tol = 3.0 * (spec.pot() + spec.bet()) / 100.0;
        assert!(gain[near_bluff].abs() < tol, "gain {} at bluff threshold", gain[near_bluff]);
        assert!(gain[near_value].abs() < tol, "gain {} at value threshold", gain[near_value]);
    }

    #[test]
    fn vn_dealer_gain_shape() {
        let spec = GameSpec::new(1.0, 2.0).unwrap();
        // Always betting makes the call gain linear in the hand.
        let p_all = strategy(vec![1.0; 100], Role::Player);
        let gain = vn_dealer_gain(&p_all, &spec);
        assert!(gain[0] < 0.0);
        assert!(gain[99] > 0.0);
        let diffs: Vec<f64> = gain.windows(2).map(|w| w[1] - w[0]).collect();
        for d in &diffs {
            assert!((d - diffs[0]).abs() < 1e-12, "not linear");
        }

        // Nondecreasing for any nonnegative player strategy.
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..20 {
            let p = random_strategy(&mut rng, 100, Role::Player);
            let gain = vn_dealer_gain(&p, &spec);
            assert!(gain.windows(2).all(|w| w[1] >= w[0] - 1e-12));
        }
    }

    #[test]
    fn best_response_matches_exhaustive_search_small_game() {
        let game = vn(1.0, 2.0, 5);
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..20 {
            let q = random_strategy(&mut rng, 5, Role::Dealer);
            let (br, br_value) = best_response(&q, Role::Player, &game);
            // Exhaustive search over all 2^5 pure player strategies.
            let mut best = f64::NEG_INFINITY;
            for mask in 0..32u32 {
                let probs: Vec<f64> =
                    (0..5).map(|k| f64::from(mask >> k & 1)).collect();
                let p = strategy(probs, Role::Player);
                let (v, _) = game_value(&p, &q, &game);
                best = best.max(v);
            }
            assert!((br_value - best).abs() < 1e-12, "{br_value} vs exhaustive {best}");
            let (v, _) = game_value(&br, &q, &game);
            assert!((v - best).abs() < 1e-12);
            assert!(br.probs().iter().all(|&p| p == 0.0 || p == 1.0));
        }

        // Same check for the dealer side.
        for _ in 0..20 {
            let p = random_strategy(&mut rng, 5, Role::Player);
            let (_, br_value) = best_response(&p, Role::Dealer, &game);
            let mut best = f64::NEG_INFINITY;
            for mask in 0..32u32 {
                let probs: Vec<f64> =
                    (0..5).map(|k| f64::from(mask >> k & 1)).collect();
                let q = strategy(probs, Role::Dealer);
                let (_, v) = game_value(&p, &q, &game);
                best = best.max(v);
            }
            assert!((br_value - best).abs() < 1e-12);
        }
    }

    #[test]
    fn best_response_to_passive_dealer_always_bets() {
        let game = vn(1.0, 2.0, 50);
        let never = strategy(vec![0.0; 50], Role::Dealer);
        let (br, _) = best_response(&never, Role::Player, &game);
        assert!(br.probs().iter().all(|&p| p == 1.0), "free pot steal");
    }

    #[test]
    fn game_value_reference_points() {
        let game = vn(1.0, 2.0, 100);
        // Pure showdown of iid uniform hands is symmetric.
        let p0 = strategy(vec![0.0; 100], Role::Player);
        let any_q = strategy(vec![0.3; 100], Role::Dealer);
        let (v, _) = game_value(&p0, &any_q, &game);
        assert!(v.abs() < 1e-12);

        // Discretized analytic pair lands near the continuous value 1/9.
        let sol = solve(&game.spec());
        let (p, q) = discretize(&sol, 100);
        let (v, vd) = game_value(&p, &q, &game);
        assert!((v - sol.game_value).abs() < 0.02, "value {v}");
        assert_eq!(v + vd, 0.0);
    }

    #[test]
    fn exploitability_reference_points() {
        let game = vn(1.0, 2.0, 100);
        let sol = solve(&game.spec());
        let (p, q) = discretize(&sol, 100);
        let analytic = exploitability(&p, &q, &game);
        assert!(analytic >= 0.0);
        assert!(analytic <= 0.01, "analytic pair exploitability {analytic}");

        let uniform_p = Strategy::uniform(100, Role::Player);
        let uniform_q = Strategy::uniform(100, Role::Dealer);
        let uniform = exploitability(&uniform_p, &uniform_q, &game);
        assert!(uniform > 0.05, "uniform pair exploitability {uniform}");

        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..10 {
            let p = random_strategy(&mut rng, 100, Role::Player);
            let q = random_strategy(&mut rng, 100, Role::Dealer);
            assert!(exploitability(&p, &q, &game) >= -1e-12);
        }
    }

    #[test]
    fn dealer_call_mass_reference_points() {
        let spec = GameSpec::new(1.0, 2.0).unwrap();
        let sol = solve(&spec);
        let (_, q) = discretize(&sol, 100);
        let mass = dealer_call_mass(&q, &sol);
        assert!((mass - sol.call_mass).abs() < 0.01, "admissible mass {mass}");

        let never = strategy(vec![0.0; 100], Role::Dealer);
        assert_eq!(dealer_call_mass(&never, &sol), 0.0);
    }

    /// Equilibrium-constrained dealers with arbitrary interior call placement
    /// all achieve the analytic value against the equilibrium player.
    #[test]
    fn interior_call_placement_does_not_move_the_value() {
        let game = vn(1.0, 2.0, 100);
        let sol = solve(&game.spec());
        let (p, _) = discretize(&sol, 100);
        let interior: Vec<usize> = (0..100)
            .filter(|&k| {
                let x = (k as f64 + 0.5) / 100.0;
                x > sol.bluff_threshold && x < sol.value_threshold
            })
            .collect();
        let calls = (sol.call_mass * 100.0).round() as usize;
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..10 {
            let mut probs = vec![0.0; 100];
            for (k, slot) in probs.iter_mut().enumerate() {
                if (k as f64 + 0.5) / 100.0 > sol.value_threshold {
                    *slot = 1.0;
                }
            }
            // Scatter the required call mass uniformly inside (x1, x2).
            let mut picks = interior.clone();
            for n in 0..calls {
                let swap = rng.gen_range(n..picks.len());
                picks.swap(n, swap);
                probs[picks[n]] = 1.0;
            }
            let q = strategy(probs, Role::Dealer);
            let (v, _) = game_value(&p, &q, &game);
            assert!(
                (v - sol.game_value).abs() < 0.02,
                "value {v} for random interior placement"
            );
        }
    }

    #[test]
    fn flop_gain_substitutions() {
        let tables = synthetic_tables();
        let spec = GameSpec::new(1.0, 2.0).unwrap();
        let n = crate::abstraction::NUM_CLASSES;

        // Dealer never calls: betting steals the pot whenever the showdown
        // would not already be won.
        let q0 = strategy(vec![0.0; n], Role::Dealer);
        let gain = flop_player_gain(&q0, &tables, &spec).unwrap();
        for (i, g) in gain.iter().enumerate() {
            let expected =
                spec.pot() * (1.0 - tables.class_win(i) - tables.class_draw(i) / 2.0);
            assert!((g - expected).abs() < 1e-12);
            assert!(*g > 0.0);
        }

        // Dealer always calls: evaluate the double sum independently.
        let q1 = strategy(vec![1.0; n], Role::Dealer);
        let gain = flop_player_gain(&q1, &tables, &spec).unwrap();
        for (i, g) in gain.iter().enumerate() {
            let mut expected = 0.0;
            for j in 0..n {
                expected += tables.conditional(i, j)
                    * ((spec.pot() + spec.bet()) * tables.win(i, j)
                        - spec.bet() * tables.win(j, i)
                        + spec.pot() / 2.0 * tables.draw(i, j));
            }
            expected -= spec.pot() * (tables.class_win(i) + tables.class_draw(i) / 2.0);
            assert!((g - expected).abs() < 1e-9, "class {i}");
        }

        // Player never bets: the dealer never faces a decision.
        let p0 = strategy(vec![0.0; n], Role::Player);
        let gain = flop_dealer_gain(&p0, &tables, &spec).unwrap();
        assert!(gain.iter().all(|&g| g == 0.0));

        // A single betting class makes the gain proportional to h(i0|j).
        let i0 = 42;
        let mut probs = vec![0.0; n];
        probs[i0] = 1.0;
        let p_single = strategy(probs, Role::Player);
        let gain = flop_dealer_gain(&p_single, &tables, &spec).unwrap();
        for j in 0..n {
            let coeff = (spec.pot() + spec.bet()) * tables.win(j, i0)
                - spec.bet() * tables.win(i0, j)
                + spec.pot() / 2.0 * tables.draw(j, i0);
            assert!((gain[j] - tables.conditional(j, i0) * coeff).abs() < 1e-12);
        }

        let short = strategy(vec![0.5; n - 1], Role::Dealer);
        assert!(flop_player_gain(&short, &tables, &spec).is_err());
    }

    /// Flipping the player strategy to the sign of its gain never hurts
    /// against a fixed dealer, since the gain is the exact bet-over-check
    /// advantage per class.
    #[test]
    fn gain_sign_strategy_is_optimal_against_fixed_dealer() {
        let tables = Arc::new(synthetic_tables());
        let spec = GameSpec::new(1.0, 2.0).unwrap();
        let game = FlopGame::new(spec, tables.clone());
        let n = crate::abstraction::NUM_CLASSES;
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..100 {
            let q = random_strategy(&mut rng, n, Role::Dealer);
            let p = random_strategy(&mut rng, n, Role::Player);
            let gain = flop_player_gain(&q, &tables, &spec).unwrap();
            let improved: Vec<f64> = p
                .probs()
                .iter()
                .zip(&gain)
                .map(|(&pi, &g)| {
                    if g > 0.0 {
                        1.0
                    } else if g < 0.0 {
                        0.0
                    } else {
                        pi
                    }
                })
                .collect();
            let improved = strategy(improved, Role::Player);
            let (v_before, _) = game_value(&p, &q, &game);
            let (v_after, _) = game_value(&improved, &q, &game);
            assert!(v_after >= v_before - 1e-12, "{v_after} < {v_before}");
        }
    }

    #[test]
    fn diagnostics_assemble() {
        let game = vn(1.0, 2.0, 100);
        let sol = solve(&game.spec());
        let (p, q) = discretize(&sol, 100);
        let diag = diagnostics_vn(&p, &q, &game, &sol);
        assert_eq!(diag.player_gain.len(), 100);
        assert_eq!(diag.value_player + diag.value_dealer, 0.0);
        assert!(diag.dealer_call_mass.is_some());

        let tables = Arc::new(synthetic_tables());
        let flop = FlopGame::new(game.spec(), tables);
        let n = crate::abstraction::NUM_CLASSES;
        let diag = diagnostics_flop(
            &Strategy::uniform(n, Role::Player),
            &Strategy::uniform(n, Role::Dealer),
            &flop,
        )
        .unwrap();
        assert_eq!(diag.player_gain.len(), n);
        assert!(diag.dealer_call_mass.is_none());
        assert_eq!(diag.value_player + diag.value_dealer, 0.0);
    }
}
