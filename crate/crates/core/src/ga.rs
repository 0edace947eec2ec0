//! Genetic-algorithm trainer with binary-gene strategy chromosomes.
//!
//! Two population styles mirror the two fitness modes. Bankroll mode evolves
//! separate Player and Dealer populations: everyone starts each generation
//! with the same bankroll, plays one game per random pairing for R pairings,
//! and is scored by final-to-starting bankroll ratio. Loss-minimization mode
//! unites both seats into one Participant with a chromosome per role; only
//! chips lost reduce the score, so a perfect score is zero and parents breed
//! uniformly. Mixed strategies emerge as population polymorphism: the
//! per-gene average over the top performers.

use crate::game::{HalfStreetGame, Role, Strategy};
use rand::distributions::{Distribution, WeightedIndex};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GaError {
    #[error("population size {0} must be even and positive")]
    InvalidPopulation(usize),
    #[error("selection fraction {0} must lie in (0, 1]")]
    InvalidSelectionFraction(f64),
    #[error("mutation probability {0} must lie in [0, 1]")]
    InvalidMutationProbability(f64),
    #[error("starting bankroll {0} must be positive")]
    InvalidBankroll(f64),
    #[error("generations and rounds per generation must be positive")]
    InvalidSchedule,
}

/// How fitness is scored, which also selects the population style.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FitnessMode {
    /// Final bankroll over starting bankroll; separate role populations.
    Bankroll,
    /// Minus the squared sum of chips lost; unified Participants.
    NegativeSquaredLoss,
}

#[derive(Debug, Clone)]
pub struct GaConfig {
    pub population: usize,
    pub generations: usize,
    pub rounds_per_generation: usize,
    pub selection_fraction: f64,
    pub mutation_probability: f64,
    pub starting_bankroll: f64,
    pub fitness_mode: FitnessMode,
    pub seed: u64,
}

impl GaConfig {
    pub fn validate(&self) -> Result<(), GaError> {
        if self.population == 0 || self.population % 2 != 0 {
            return Err(GaError::InvalidPopulation(self.population));
        }
        if !(self.selection_fraction > 0.0 && self.selection_fraction <= 1.0) {
            return Err(GaError::InvalidSelectionFraction(self.selection_fraction));
        }
        if !(0.0..=1.0).contains(&self.mutation_probability) {
            return Err(GaError::InvalidMutationProbability(self.mutation_probability));
        }
        if !(self.starting_bankroll > 0.0) {
            return Err(GaError::InvalidBankroll(self.starting_bankroll));
        }
        if self.generations == 0 || self.rounds_per_generation == 0 {
            return Err(GaError::InvalidSchedule);
        }
        Ok(())
    }

    /// Full-scale von Neumann run matching the reported experiments.
    pub fn vn_paper_scale(seed: u64) -> GaConfig {
        GaConfig {
            population: 5_000,
            generations: 1_000,
            rounds_per_generation: 10_000,
            selection_fraction: 0.1,
            mutation_probability: 1e-6,
            starting_bankroll: 1e4,
            fitness_mode: FitnessMode::Bankroll,
            seed,
        }
    }

    /// Desk-scale von Neumann preset used by the acceptance checks.
    pub fn vn_desk_scale(seed: u64) -> GaConfig {
        GaConfig {
            population: 1_000,
            generations: 200,
            rounds_per_generation: 2_000,
            selection_fraction: 0.1,
            mutation_probability: 1e-6,
            starting_bankroll: 1e4,
            fitness_mode: FitnessMode::Bankroll,
            seed,
        }
    }

    /// Full-scale flop run matching the reported experiments.
    pub fn flop_paper_scale(seed: u64) -> GaConfig {
        GaConfig {
            population: 2_000,
            generations: 1_000,
            rounds_per_generation: 10_000,
            selection_fraction: 0.3,
            mutation_probability: 1e-4,
            starting_bankroll: 1e4,
            fitness_mode: FitnessMode::NegativeSquaredLoss,
            seed,
        }
    }

    /// Desk-scale flop preset.
    pub fn flop_desk_scale(seed: u64) -> GaConfig {
        GaConfig {
            population: 400,
            generations: 150,
            rounds_per_generation: 2_000,
            selection_fraction: 0.3,
            mutation_probability: 1e-4,
            starting_bankroll: 1e4,
            fitness_mode: FitnessMode::NegativeSquaredLoss,
            seed,
        }
    }
}

/// A strategy vector of binary genes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Chromosome {
    pub genes: Vec<u8>,
}

impl Chromosome {
    fn random(hands: usize, rng: &mut ChaCha8Rng) -> Chromosome {
        Chromosome { genes: (0..hands).map(|_| u8::from(rng.gen_bool(0.5))).collect() }
    }
}

/// A unified agent carrying one chromosome per seat.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Participant {
    pub player: Chromosome,
    pub dealer: Chromosome,
}

/// Either two role populations or one Participant population.
#[derive(Debug, Clone)]
pub enum Population {
    Roles { players: Vec<Chromosome>, dealers: Vec<Chromosome> },
    Participants(Vec<Participant>),
}

/// Fitness scores with the same layout as the population.
#[derive(Debug, Clone)]
pub enum FitnessScores {
    Roles { players: Vec<f64>, dealers: Vec<f64> },
    Participants(Vec<f64>),
}

/// Initializes the population with i.i.d. uniform genes.
pub fn init_population(
    cfg: &GaConfig,
    hands: usize,
    rng: &mut ChaCha8Rng,
) -> Result<Population, GaError> {
    cfg.validate()?;
    let n = cfg.population;
    Ok(match cfg.fitness_mode {
        FitnessMode::Bankroll => Population::Roles {
            players: (0..n).map(|_| Chromosome::random(hands, rng)).collect(),
            dealers: (0..n).map(|_| Chromosome::random(hands, rng)).collect(),
        },
        FitnessMode::NegativeSquaredLoss => Population::Participants(
            (0..n)
                .map(|_| Participant {
                    player: Chromosome::random(hands, rng),
                    dealer: Chromosome::random(hands, rng),
                })
                .collect(),
        ),
    })
}

/// Plays one generation: R random pairings over the whole population, one
/// game per pairing, with bankrolls (or loss tallies) reset at the start.
pub fn play_generation<G: HalfStreetGame>(
    population: &Population,
    game: &G,
    rounds: usize,
    cfg: &GaConfig,
    rng: &mut ChaCha8Rng,
) -> FitnessScores {
    match population {
        Population::Roles { players, dealers } => {
            let n = players.len();
            let mut player_bank = vec![cfg.starting_bankroll; n];
            let mut dealer_bank = vec![cfg.starting_bankroll; n];
            let mut pairing: Vec<usize> = (0..n).collect();
            for _ in 0..rounds {
                pairing.shuffle(rng);
                for (p_idx, &d_idx) in pairing.iter().enumerate() {
                    let (i, j) = game.deal(rng);
                    let bets = players[p_idx].genes[i] == 1;
                    let calls = dealers[d_idx].genes[j] == 1;
                    let (pp, pd) = game.play_round(i, j, bets, calls, rng);
                    player_bank[p_idx] += pp;
                    dealer_bank[d_idx] += pd;
                }
            }
            FitnessScores::Roles {
                players: player_bank.iter().map(|b| b / cfg.starting_bankroll).collect(),
                dealers: dealer_bank.iter().map(|b| b / cfg.starting_bankroll).collect(),
            }
        }
        Population::Participants(members) => {
            let n = members.len();
            let mut losses = vec![0.0; n];
            let mut pairing: Vec<usize> = (0..n).collect();
            for _ in 0..rounds {
                pairing.shuffle(rng);
                for pair in pairing.chunks_exact(2) {
                    // Seats are assigned at random within each pairing.
                    let (p_idx, d_idx) =
                        if rng.gen_bool(0.5) { (pair[0], pair[1]) } else { (pair[1], pair[0]) };
                    let (i, j) = game.deal(rng);
                    let bets = members[p_idx].player.genes[i] == 1;
                    let calls = members[d_idx].dealer.genes[j] == 1;
                    let (pp, pd) = game.play_round(i, j, bets, calls, rng);
                    if pp < 0.0 {
                        losses[p_idx] -= pp;
                    }
                    if pd < 0.0 {
                        losses[d_idx] -= pd;
                    }
                }
            }
            FitnessScores::Participants(losses.iter().map(|l| -(l * l)).collect())
        }
    }
}

/// Indices sorted by fitness descending, ties broken by index for
/// deterministic ranking.
fn ranked(fitness: &[f64]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..fitness.len()).collect();
    order.sort_by(|&a, &b| {
        fitness[b].partial_cmp(&fitness[a]).unwrap().then(a.cmp(&b))
    });
    order
}

fn survivors(fitness: &[f64], alpha: f64) -> Vec<usize> {
    let keep = ((alpha * fitness.len() as f64).ceil() as usize).clamp(1, fitness.len());
    ranked(fitness)[..keep].to_vec()
}

/// Draws a pair of parent indices: proportional to fitness in bankroll mode,
/// uniform in loss-minimization mode (where the best score is zero).
fn pick_parents(
    kept_fitness: &[f64],
    proportional: bool,
    rng: &mut ChaCha8Rng,
) -> (usize, usize) {
    if proportional {
        let weights = WeightedIndex::new(kept_fitness).expect("positive bankroll fitness");
        (weights.sample(rng), weights.sample(rng))
    } else {
        (rng.gen_range(0..kept_fitness.len()), rng.gen_range(0..kept_fitness.len()))
    }
}

/// Recombines one gene slot: matching parent genes are copied but flip with
/// the mutation probability; differing genes are inherited from a parent
/// drawn by fitness weight (or evenly under uniform inheritance).
fn breed_genes(
    a: &Chromosome,
    b: &Chromosome,
    fit_a: f64,
    fit_b: f64,
    mutation: f64,
    uniform_inherit: bool,
    rng: &mut ChaCha8Rng,
) -> Chromosome {
    let genes = a
        .genes
        .iter()
        .zip(&b.genes)
        .map(|(&ga, &gb)| {
            if ga == gb {
                if mutation > 0.0 && rng.gen_bool(mutation) {
                    (1 + ga) % 2
                } else {
                    ga
                }
            } else {
                let take_a = if uniform_inherit || fit_a + fit_b <= 0.0 {
                    rng.gen_bool(0.5)
                } else {
                    rng.gen_bool(fit_a / (fit_a + fit_b))
                };
                if take_a {
                    ga
                } else {
                    gb
                }
            }
        })
        .collect();
    Chromosome { genes }
}

fn breed_role(
    members: &[Chromosome],
    fitness: &[f64],
    cfg: &GaConfig,
    proportional: bool,
    rng: &mut ChaCha8Rng,
) -> Vec<Chromosome> {
    let kept = survivors(fitness, cfg.selection_fraction);
    let kept_fitness: Vec<f64> = kept.iter().map(|&k| fitness[k]).collect();
    let mut next: Vec<Chromosome> = kept.iter().map(|&k| members[k].clone()).collect();
    while next.len() < members.len() {
        let (pa, pb) = pick_parents(&kept_fitness, proportional, rng);
        next.push(breed_genes(
            &members[kept[pa]],
            &members[kept[pb]],
            kept_fitness[pa],
            kept_fitness[pb],
            cfg.mutation_probability,
            !proportional,
            rng,
        ));
    }
    next
}

/// Keeps the top selection fraction and refills the population with their
/// offspring.
pub fn select_and_breed(
    population: &Population,
    fitness: &FitnessScores,
    cfg: &GaConfig,
    rng: &mut ChaCha8Rng,
) -> Population {
    match (population, fitness) {
        (Population::Roles { players, dealers }, FitnessScores::Roles { players: fp, dealers: fd }) => {
            Population::Roles {
                players: breed_role(players, fp, cfg, true, rng),
                dealers: breed_role(dealers, fd, cfg, true, rng),
            }
        }
        (Population::Participants(members), FitnessScores::Participants(fit)) => {
            let kept = survivors(fit, cfg.selection_fraction);
            let kept_fitness: Vec<f64> = kept.iter().map(|&k| fit[k]).collect();
            let mut next: Vec<Participant> = kept.iter().map(|&k| members[k].clone()).collect();
            while next.len() < members.len() {
                let (pa, pb) = pick_parents(&kept_fitness, false, rng);
                let (ma, mb) = (&members[kept[pa]], &members[kept[pb]]);
                next.push(Participant {
                    player: breed_genes(
                        &ma.player,
                        &mb.player,
                        0.0,
                        0.0,
                        cfg.mutation_probability,
                        true,
                        rng,
                    ),
                    dealer: breed_genes(
                        &ma.dealer,
                        &mb.dealer,
                        0.0,
                        0.0,
                        cfg.mutation_probability,
                        true,
                        rng,
                    ),
                });
            }
            Population::Participants(next)
        }
        _ => panic!("population and fitness layouts disagree"),
    }
}

/// Per-gene average of the top selection fraction: the population
/// polymorphism read as a mixed strategy.
pub fn population_strategy(
    population: &Population,
    fitness: &FitnessScores,
    alpha: f64,
    role: Role,
) -> Strategy {
    let average = |chromosomes: Vec<&Chromosome>| -> Vec<f64> {
        let hands = chromosomes[0].genes.len();
        let mut sums = vec![0.0; hands];
        for chromosome in &chromosomes {
            for (s, &g) in sums.iter_mut().zip(&chromosome.genes) {
                *s += f64::from(g);
            }
        }
        sums.iter().map(|s| s / chromosomes.len() as f64).collect()
    };

    let probs = match (population, fitness) {
        (Population::Roles { players, dealers }, FitnessScores::Roles { players: fp, dealers: fd }) => {
            let (members, fit) = match role {
                Role::Player => (players, fp),
                Role::Dealer => (dealers, fd),
            };
            average(survivors(fit, alpha).iter().map(|&k| &members[k]).collect())
        }
        (Population::Participants(members), FitnessScores::Participants(fit)) => {
            let kept = survivors(fit, alpha);
            average(
                kept.iter()
                    .map(|&k| match role {
                        Role::Player => &members[k].player,
                        Role::Dealer => &members[k].dealer,
                    })
                    .collect(),
            )
        }
        _ => panic!("population and fitness layouts disagree"),
    };
    Strategy::new(probs, role).unwrap()
}

/// Mean top-fraction fitness per generation, for the exported time series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitnessPoint {
    pub generation: usize,
    pub player_mean: f64,
    pub dealer_mean: f64,
}

#[derive(Debug, Clone)]
pub struct GaReport {
    pub player: Strategy,
    pub dealer: Strategy,
    pub fitness_series: Vec<FitnessPoint>,
}

fn top_alpha_mean(fitness: &[f64], alpha: f64) -> f64 {
    let kept = survivors(fitness, alpha);
    kept.iter().map(|&k| fitness[k]).sum::<f64>() / kept.len() as f64
}

/// Runs the full evolution loop and averages the final top performers into
/// the output strategies.
pub fn evolve<G: HalfStreetGame>(cfg: &GaConfig, game: &G) -> Result<GaReport, GaError> {
    cfg.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut population = init_population(cfg, game.num_hands(), &mut rng)?;
    let mut fitness_series = Vec::with_capacity(cfg.generations);
    let mut last_fitness = None;

    for generation in 0..cfg.generations {
        let fitness =
            play_generation(&population, game, cfg.rounds_per_generation, cfg, &mut rng);
        let point = match &fitness {
            FitnessScores::Roles { players, dealers } => FitnessPoint {
                generation,
                player_mean: top_alpha_mean(players, cfg.selection_fraction),
                dealer_mean: top_alpha_mean(dealers, cfg.selection_fraction),
            },
            FitnessScores::Participants(fit) => {
                let mean = top_alpha_mean(fit, cfg.selection_fraction);
                FitnessPoint { generation, player_mean: mean, dealer_mean: mean }
            }
        };
        fitness_series.push(point);

        if generation + 1 < cfg.generations {
            population = select_and_breed(&population, &fitness, cfg, &mut rng);
        }
        last_fitness = Some(fitness);
    }

    let fitness = last_fitness.expect("at least one generation");
    Ok(GaReport {
        player: population_strategy(&population, &fitness, cfg.selection_fraction, Role::Player),
        dealer: population_strategy(&population, &fitness, cfg.selection_fraction, Role::Dealer),
        fitness_series,
    })
}
