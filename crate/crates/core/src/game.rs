//! The shared half-street game model: ante, one bet, call/fold, showdown.
//!
//! Both instantiations (discrete von Neumann poker and flop poker) expose the
//! same interface: a hand index space, a joint deal distribution, and a
//! showdown outcome distribution per matchup. Payoffs are zero-sum net chips;
//! ties split the pot, so the contested amount nets to zero.

use crate::abstraction::{classify, ClassIndex, NUM_CLASSES};
use crate::cards::{full_deck, Card};
use crate::equity::EquityTables;
use rand::{Rng, RngCore};
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GameError {
    #[error("ante must be positive, got {0}")]
    InvalidAnte(f64),
    #[error("bet must be positive, got {0}")]
    InvalidBet(f64),
    #[error("strategy probability {value} at hand {index} outside [0, 1]")]
    InvalidProbability { index: usize, value: f64 },
    #[error("strategy has {found} hands, game expects {expected}")]
    LengthMismatch { expected: usize, found: usize },
}

/// Ante and bet sizes; the pot is twice the ante.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GameSpec {
    ante: f64,
    bet: f64,
}

impl GameSpec {
    pub fn new(ante: f64, bet: f64) -> Result<GameSpec, GameError> {
        if !(ante > 0.0) || !ante.is_finite() {
            return Err(GameError::InvalidAnte(ante));
        }
        if !(bet > 0.0) || !bet.is_finite() {
            return Err(GameError::InvalidBet(bet));
        }
        Ok(GameSpec { ante, bet })
    }

    pub fn ante(&self) -> f64 {
        self.ante
    }

    pub fn bet(&self) -> f64 {
        self.bet
    }

    pub fn pot(&self) -> f64 {
        2.0 * self.ante
    }
}

/// Which seat a strategy belongs to: the Player bets or checks, the Dealer
/// calls or folds when facing a bet.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Role {
    Player,
    Dealer,
}

/// A behavioral strategy: per hand, the probability of the aggressive action
/// (bet for the Player, call for the Dealer).
#[derive(Debug, Clone, PartialEq)]
pub struct Strategy {
    probs: Vec<f64>,
    role: Role,
}

impl Strategy {
    pub fn new(probs: Vec<f64>, role: Role) -> Result<Strategy, GameError> {
        for (index, &value) in probs.iter().enumerate() {
            if !(0.0..=1.0).contains(&value) {
                return Err(GameError::InvalidProbability { index, value });
            }
        }
        Ok(Strategy { probs, role })
    }

    pub fn uniform(len: usize, role: Role) -> Strategy {
        Strategy { probs: vec![0.5; len], role }
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn role(&self) -> Role {
        self.role
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }
}

/// Showdown outcome distribution from the Player's side; the three
/// probabilities sum to one. Von Neumann matchups are degenerate (a single
/// outcome has probability one), flop matchups come from the equity tables.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Showdown {
    pub win: f64,
    pub lose: f64,
    pub draw: f64,
}

impl Showdown {
    /// Expected sign of the showdown for the Player: win minus lose.
    pub fn margin(&self) -> f64 {
        self.win - self.lose
    }

    fn sample(&self, rng: &mut dyn RngCore) -> std::cmp::Ordering {
        use std::cmp::Ordering;
        // Degenerate matchups consume no randomness, which keeps the
        // von Neumann rng stream independent of showdown frequency.
        if self.win == 1.0 {
            return Ordering::Greater;
        }
        if self.lose == 1.0 {
            return Ordering::Less;
        }
        if self.draw == 1.0 {
            return Ordering::Equal;
        }
        let u: f64 = rng.gen();
        if u < self.win {
            Ordering::Greater
        } else if u < self.win + self.draw {
            Ordering::Equal
        } else {
            Ordering::Less
        }
    }
}

/// One-bet poker game over an abstract hand index space.
pub trait HalfStreetGame {
    fn spec(&self) -> GameSpec;

    /// Number of hand indices per seat.
    fn num_hands(&self) -> usize;

    /// Deals a (player, dealer) hand pair.
    fn deal(&self, rng: &mut dyn RngCore) -> (usize, usize);

    /// Showdown outcome distribution for player hand `i` versus dealer hand `j`.
    fn showdown(&self, i: usize, j: usize) -> Showdown;

    /// Joint probability of dealing (i, j).
    fn deal_weight(&self, i: usize, j: usize) -> f64;

    /// Human-readable hand label for exports.
    fn hand_label(&self, index: usize) -> String;

    /// Zero-sum net expectations when the Player bets with probability
    /// `p_bet` and the Dealer calls with probability `q_call`.
    fn expected_payoffs(&self, i: usize, j: usize, p_bet: f64, q_call: f64) -> (f64, f64) {
        let spec = self.spec();
        let (ante, bet) = (spec.ante(), spec.bet());
        let margin = self.showdown(i, j).margin();
        let e_check = ante * margin;
        let e_bet = q_call * (ante + bet) * margin + (1.0 - q_call) * ante;
        let e_player = p_bet * e_bet + (1.0 - p_bet) * e_check;
        (e_player, -e_player)
    }

    /// Plays one round with pure actions, resolving any showdown by sampling
    /// the matchup's outcome distribution. Returns zero-sum net payoffs.
    fn play_round(
        &self,
        i: usize,
        j: usize,
        player_bets: bool,
        dealer_calls: bool,
        rng: &mut dyn RngCore,
    ) -> (f64, f64) {
        use std::cmp::Ordering;
        let spec = self.spec();
        let ante = spec.ante();
        if player_bets && !dealer_calls {
            return (ante, -ante);
        }
        let stake = if player_bets { ante + spec.bet() } else { ante };
        match self.showdown(i, j).sample(rng) {
            Ordering::Greater => (stake, -stake),
            Ordering::Less => (-stake, stake),
            Ordering::Equal => (0.0, 0.0),
        }
    }
}

/// Discrete von Neumann poker: both seats draw independent uniform hands
/// from 1..=M (ties possible) and the higher hand wins showdowns.
#[derive(Debug, Clone)]
pub struct VnGame {
    spec: GameSpec,
    hands: usize,
}

impl VnGame {
    pub fn new(spec: GameSpec, hands: usize) -> VnGame {
        assert!(hands >= 2, "need at least two hands");
        VnGame { spec, hands }
    }
}

impl HalfStreetGame for VnGame {
    fn spec(&self) -> GameSpec {
        self.spec
    }

    fn num_hands(&self) -> usize {
        self.hands
    }

    fn deal(&self, rng: &mut dyn RngCore) -> (usize, usize) {
        (rng.gen_range(0..self.hands), rng.gen_range(0..self.hands))
    }

    fn showdown(&self, i: usize, j: usize) -> Showdown {
        use std::cmp::Ordering;
        match i.cmp(&j) {
            Ordering::Greater => Showdown { win: 1.0, lose: 0.0, draw: 0.0 },
            Ordering::Less => Showdown { win: 0.0, lose: 1.0, draw: 0.0 },
            Ordering::Equal => Showdown { win: 0.0, lose: 0.0, draw: 1.0 },
        }
    }

    fn deal_weight(&self, _i: usize, _j: usize) -> f64 {
        1.0 / (self.hands as f64 * self.hands as f64)
    }

    fn hand_label(&self, index: usize) -> String {
        (index + 1).to_string()
    }
}

/// Flop poker over the 169 hand classes: hands are dealt jointly from a
/// 52-card deck and showdowns follow the precomputed win/draw tables.
#[derive(Clone)]
pub struct FlopGame {
    spec: GameSpec,
    tables: Arc<EquityTables>,
    deck: Vec<Card>,
}

impl FlopGame {
    pub fn new(spec: GameSpec, tables: Arc<EquityTables>) -> FlopGame {
        FlopGame { spec, tables, deck: full_deck() }
    }

    pub fn tables(&self) -> &EquityTables {
        &self.tables
    }

    /// Deals concrete non-conflicting hole cards and their classes.
    pub fn deal_concrete(&self, rng: &mut dyn RngCore) -> ((Card, Card), (Card, Card)) {
        let mut picks = [0usize; 4];
        let mut n = 0;
        while n < 4 {
            let c = rng.gen_range(0..52);
            if !picks[..n].contains(&c) {
                picks[n] = c;
                n += 1;
            }
        }
        (
            (self.deck[picks[0]], self.deck[picks[1]]),
            (self.deck[picks[2]], self.deck[picks[3]]),
        )
    }
}

impl HalfStreetGame for FlopGame {
    fn spec(&self) -> GameSpec {
        self.spec
    }

    fn num_hands(&self) -> usize {
        NUM_CLASSES
    }

    fn deal(&self, rng: &mut dyn RngCore) -> (usize, usize) {
        let (player, dealer) = self.deal_concrete(rng);
        let i = classify(player.0, player.1).unwrap();
        let j = classify(dealer.0, dealer.1).unwrap();
        (i.get(), j.get())
    }

    fn showdown(&self, i: usize, j: usize) -> Showdown {
        Showdown {
            win: self.tables.win(i, j),
            lose: self.tables.win(j, i),
            draw: self.tables.draw(i, j),
        }
    }

    fn deal_weight(&self, i: usize, j: usize) -> f64 {
        self.tables.prior(i) * self.tables.conditional(i, j)
    }

    fn hand_label(&self, index: usize) -> String {
        ClassIndex::new(index).unwrap().label()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::equity::tests_support::synthetic_tables;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn vn(ante: f64, bet: f64, hands: usize) -> VnGame {
        VnGame::new(GameSpec::new(ante, bet).unwrap(), hands)
    }

    #[test]
    fn spec_validation() {
        assert!(GameSpec::new(0.0, 1.0).is_err());
        assert!(GameSpec::new(1.0, -2.0).is_err());
        let spec = GameSpec::new(1.0, 2.0).unwrap();
        assert_eq!(spec.pot(), 2.0);
    }

    #[test]
    fn strategy_validation() {
        assert!(Strategy::new(vec![0.0, 0.5, 1.0], Role::Player).is_ok());
        assert!(Strategy::new(vec![1.5], Role::Dealer).is_err());
        assert!(Strategy::new(vec![-0.1], Role::Dealer).is_err());
    }

    #[test]
    fn expected_payoff_cases() {
        let game = vn(1.0, 2.0, 100);
        // Draw state, both mixing half: the bet steals the ante when the
        // dealer folds.
        let (ep, ed) = game.expected_payoffs(5, 5, 0.5, 0.5);
        assert!((ep - 0.25).abs() < 1e-15);
        assert_eq!(ep + ed, 0.0);

        // Player ahead, always bet and always call.
        let (ep, _) = game.expected_payoffs(7, 3, 1.0, 1.0);
        assert!((ep - 3.0).abs() < 1e-15);

        // Never betting while behind just loses the ante at showdown.
        let (ep, _) = game.expected_payoffs(2, 9, 0.0, 0.7);
        assert!((ep + 1.0).abs() < 1e-15);
    }

    #[test]
    fn play_round_terminal_payoffs() {
        let game = vn(1.0, 2.0, 100);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        // Bet plus fold transfers the ante regardless of hands.
        assert_eq!(game.play_round(3, 90, true, false, &mut rng), (1.0, -1.0));
        // Bet plus call with the better hand wins ante + bet.
        assert_eq!(game.play_round(90, 3, true, true, &mut rng), (3.0, -3.0));
        // Checked tie splits the pot.
        assert_eq!(game.play_round(4, 4, false, false, &mut rng), (0.0, 0.0));
    }

    #[test]
    fn zero_sum_for_random_states() {
        let game = vn(2.0, 3.0, 50);
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..200 {
            let (i, j) = game.deal(&mut rng);
            let p: f64 = rng.gen();
            let q: f64 = rng.gen();
            let (ep, ed) = game.expected_payoffs(i, j, p, q);
            assert_eq!(ep + ed, 0.0);
        }
    }

    #[test]
    fn expected_payoffs_match_simulated_rounds() {
        let game = vn(1.0, 2.0, 10);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let i = rng.gen_range(0..10);
            let j = rng.gen_range(0..10);
            let p: f64 = rng.gen();
            let q: f64 = rng.gen();
            let (expected, _) = game.expected_payoffs(i, j, p, q);

            let trials = 1_000_000u32;
            let mut total = 0.0;
            for _ in 0..trials {
                let bets = rng.gen_bool(p);
                let calls = rng.gen_bool(q);
                total += game.play_round(i, j, bets, calls, &mut rng).0;
            }
            let mean = total / f64::from(trials);
            // Per-round payoffs are bounded by ante + bet = 3, so four
            // standard errors of the worst-case variance is a safe band.
            let sigma = 3.0 / f64::from(trials).sqrt();
            assert!(
                (mean - expected).abs() <= 4.0 * sigma,
                "state ({i},{j}) p={p:.3} q={q:.3}: mean {mean:.5} vs expected {expected:.5}"
            );
        }
    }

    /// Gross pot-framework accounting minus half the pot reproduces the
    /// zero-sum net payoffs on every von Neumann state.
    #[test]
    fn pot_framework_matches_net_payoffs() {
        let game = vn(1.0, 2.0, 20);
        let spec = game.spec();
        let (pot, bet) = (spec.pot(), spec.bet());
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for i in 0..20 {
            for j in 0..20 {
                let p: f64 = rng.gen();
                let q: f64 = rng.gen();
                let s = game.showdown(i, j);
                // Antes are sunk: checking contests the pot, betting risks
                // the extra bet to win the pot plus the called bet.
                let gross_check = pot * s.win + pot / 2.0 * s.draw;
                let gross_call = (pot + bet) * s.win + pot / 2.0 * s.draw - bet * s.lose;
                let gross_bet = q * gross_call + (1.0 - q) * pot;
                let gross = p * gross_bet + (1.0 - p) * gross_check;
                let (net, _) = game.expected_payoffs(i, j, p, q);
                assert!(
                    (gross - pot / 2.0 - net).abs() < 1e-12,
                    "state ({i},{j}): gross {gross} vs net {net}"
                );
            }
        }
    }

    #[test]
    fn vn_deal_is_uniform() {
        let game = vn(1.0, 2.0, 100);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let n = 1_000_000usize;
        let mut counts = vec![0u32; 100];
        for _ in 0..n {
            let (i, _) = game.deal(&mut rng);
            counts[i] += 1;
        }
        // Chi-squared against uniform with 99 dof; 99% quantile ~ 135.
        let expected = n as f64 / 100.0;
        let chi2: f64 = counts
            .iter()
            .map(|&c| {
                let d = f64::from(c) - expected;
                d * d / expected
            })
            .sum();
        assert!(chi2 < 135.0, "chi-squared {chi2} too large for uniform deal");
    }

    #[test]
    fn flop_deal_frequencies_and_disjointness() {
        let tables = Arc::new(synthetic_tables());
        let game = FlopGame::new(GameSpec::new(1.0, 2.0).unwrap(), tables);
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let aa = ClassIndex::parse("AA").unwrap().get();
        let n = 1_000_000usize;
        let mut aa_count = 0u32;
        for _ in 0..n {
            let (hand_p, hand_d) = game.deal_concrete(&mut rng);
            for a in [hand_p.0, hand_p.1] {
                assert_ne!(a, hand_d.0);
                assert_ne!(a, hand_d.1);
            }
            if classify(hand_p.0, hand_p.1).unwrap().get() == aa {
                aa_count += 1;
            }
        }
        let p = 6.0 / 1326.0;
        let sigma = (p * (1.0 - p) / n as f64).sqrt();
        let freq = f64::from(aa_count) / n as f64;
        assert!(
            (freq - p).abs() <= 3.0 * sigma,
            "AA frequency {freq:.6} vs expected {p:.6}"
        );
    }
}
