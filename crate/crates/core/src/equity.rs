//! Win/draw probability tables for flop poker matchups.
//!
//! Exact mode enumerates every non-conflicting pair of concrete hole cards
//! for the two classes together with every board, reduced by the 4! suit
//! symmetry: equivalent hole-card configurations are grouped under a
//! canonical key and enumerated once with a multiplicity weight. All tallies
//! are integers, so results are independent of enumeration order and of how
//! the work is scheduled across threads. Monte Carlo mode draws uniformly
//! random non-conflicting deals from a per-pair seeded stream.

use crate::abstraction::{class_combos, ClassIndex, ClassPrior, ConditionalDist, NUM_CLASSES};
use crate::cards::{full_deck, RankTables};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use std::collections::BTreeMap;
use std::path::Path;
use thiserror::Error;

/// Current equity file format tag.
pub const EQUITY_FORMAT_VERSION: &str = "flop-equity/1";

#[derive(Debug, Error, Clone, Copy, PartialEq, Eq)]
pub enum EquityError {
    #[error("board size {0} unsupported; expected 3 or 5")]
    InvalidBoardSize(u8),
    #[error("monte carlo sample count must be positive")]
    InvalidSamples,
}

#[derive(Debug, Error)]
pub enum EquityFileError {
    #[error("equity file not found: {0}")]
    Missing(String),
    #[error("io error reading equity file: {0}")]
    Io(#[from] std::io::Error),
    #[error("unsupported equity file version: {0:?}")]
    VersionMismatch(String),
    #[error("equity file checksum mismatch")]
    ChecksumMismatch,
    #[error("malformed equity file: {0}")]
    Malformed(String),
}

/// How the matchup probabilities were obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EquityMode {
    Exact,
    MonteCarlo { samples: u64, seed: u64 },
}

impl EquityMode {
    fn validate(&self) -> Result<(), EquityError> {
        if let EquityMode::MonteCarlo { samples: 0, .. } = self {
            return Err(EquityError::InvalidSamples);
        }
        Ok(())
    }
}

/// Directed matchup probabilities for (first, second) classes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Matchup {
    pub win_first: f64,
    pub win_second: f64,
    pub draw: f64,
}

/// Full 169x169 win and draw tables plus the deal distributions they pair
/// with, and the derived per-class showdown probabilities.
#[derive(Debug, Clone)]
pub struct EquityTables {
    board_size: u8,
    mode: EquityMode,
    win: Vec<f64>,
    draw: Vec<f64>,
    prior: Vec<f64>,
    conditional: Vec<f64>,
    class_win: Vec<f64>,
    class_draw: Vec<f64>,
}

impl EquityTables {
    /// Assembles tables from raw matrices, deriving the per-class win and
    /// draw probabilities W(i) and D(i).
    pub fn from_parts(
        board_size: u8,
        mode: EquityMode,
        win: Vec<f64>,
        draw: Vec<f64>,
        prior: Vec<f64>,
        conditional: Vec<f64>,
    ) -> EquityTables {
        assert_eq!(win.len(), NUM_CLASSES * NUM_CLASSES);
        assert_eq!(draw.len(), NUM_CLASSES * NUM_CLASSES);
        assert_eq!(prior.len(), NUM_CLASSES);
        assert_eq!(conditional.len(), NUM_CLASSES * NUM_CLASSES);
        let mut class_win = vec![0.0; NUM_CLASSES];
        let mut class_draw = vec![0.0; NUM_CLASSES];
        for i in 0..NUM_CLASSES {
            for j in 0..NUM_CLASSES {
                let h = conditional[i * NUM_CLASSES + j];
                class_win[i] += h * win[i * NUM_CLASSES + j];
                class_draw[i] += h * draw[i * NUM_CLASSES + j];
            }
        }
        EquityTables { board_size, mode, win, draw, prior, conditional, class_win, class_draw }
    }

    pub fn board_size(&self) -> u8 {
        self.board_size
    }

    pub fn mode(&self) -> EquityMode {
        self.mode
    }

    /// w(i|j): probability that class `i` beats class `j` at showdown.
    pub fn win(&self, i: usize, j: usize) -> f64 {
        self.win[i * NUM_CLASSES + j]
    }

    /// d(i|j) = d(j|i): probability the showdown ties.
    pub fn draw(&self, i: usize, j: usize) -> f64 {
        self.draw[i * NUM_CLASSES + j]
    }

    /// h(i): prior probability of being dealt class `i`.
    pub fn prior(&self, i: usize) -> f64 {
        self.prior[i]
    }

    /// h(j|i): opponent class distribution given our own class.
    pub fn conditional(&self, i: usize, j: usize) -> f64 {
        self.conditional[i * NUM_CLASSES + j]
    }

    /// W(i): probability of winning the showdown against a random opponent.
    pub fn class_win(&self, i: usize) -> f64 {
        self.class_win[i]
    }

    /// D(i): probability of a tie against a random opponent.
    pub fn class_draw(&self, i: usize) -> f64 {
        self.class_draw[i]
    }
}

// ---------------------------------------------------------------------------
// Exact enumeration
// ---------------------------------------------------------------------------

/// Integer tallies for one class pair: outcomes are counted over every
/// (hole pair, board) combination, so `first_wins + second_wins + draws`
/// always equals `total`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
struct ExactCounts {
    first_wins: u64,
    second_wins: u64,
    draws: u64,
    total: u64,
}

fn class_codes(class: ClassIndex) -> Vec<(u32, u32)> {
    class_combos(class)
        .into_iter()
        .map(|(a, b)| (a.code(), b.code()))
        .collect()
}

fn suit_permutations() -> Vec<[usize; 4]> {
    let mut perms = Vec::with_capacity(24);
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                for d in 0..4 {
                    let p = [a, b, c, d];
                    let mut sorted = p;
                    sorted.sort_unstable();
                    if sorted == [0, 1, 2, 3] {
                        perms.push(p);
                    }
                }
            }
        }
    }
    perms
}

fn permute_code(code: u32, perm: &[usize; 4]) -> u32 {
    let suit = (code >> 8).trailing_zeros() as usize;
    (256 << perm[suit]) | (code & 255)
}

fn pack_config(h1: (u32, u32), h2: (u32, u32)) -> u64 {
    let (a, b) = (h1.0.min(h1.1) as u64, h1.0.max(h1.1) as u64);
    let (c, d) = (h2.0.min(h2.1) as u64, h2.0.max(h2.1) as u64);
    (a << 36) | (b << 24) | (c << 12) | d
}

fn unpack_config(key: u64) -> ((u32, u32), (u32, u32)) {
    let mask = 0xfff;
    (
        (((key >> 36) & mask) as u32, ((key >> 24) & mask) as u32),
        (((key >> 12) & mask) as u32, (key & mask) as u32),
    )
}

/// Smallest packed encoding over all 24 suit relabelings; hole-card pairs
/// related by a suit permutation share a canonical key.
fn canonical_key(h1: (u32, u32), h2: (u32, u32), perms: &[[usize; 4]]) -> u64 {
    perms
        .iter()
        .map(|perm| {
            pack_config(
                (permute_code(h1.0, perm), permute_code(h1.1, perm)),
                (permute_code(h2.0, perm), permute_code(h2.1, perm)),
            )
        })
        .min()
        .unwrap()
}

fn remaining_deck(exclude: [u32; 4]) -> Vec<u32> {
    full_deck()
        .iter()
        .map(|c| c.code())
        .filter(|code| !exclude.contains(code))
        .collect()
}

fn board_count(board_size: u8, cards_left: u64) -> u64 {
    match board_size {
        3 => cards_left * (cards_left - 1) * (cards_left - 2) / 6,
        5 => {
            cards_left * (cards_left - 1) * (cards_left - 2) * (cards_left - 3)
                * (cards_left - 4)
                / 120
        }
        _ => unreachable!("validated board size"),
    }
}

/// Enumerates every board for one concrete hole-card configuration.
fn enumerate_boards(
    ranks: &RankTables,
    h1: (u32, u32),
    h2: (u32, u32),
    board_size: u8,
) -> ExactCounts {
    let rem = remaining_deck([h1.0, h1.1, h2.0, h2.1]);
    let n = rem.len();
    let mut counts = ExactCounts::default();
    let mut tally = |r1: u16, r2: u16| {
        counts.total += 1;
        match r1.cmp(&r2) {
            std::cmp::Ordering::Less => counts.first_wins += 1,
            std::cmp::Ordering::Greater => counts.second_wins += 1,
            std::cmp::Ordering::Equal => counts.draws += 1,
        }
    };
    match board_size {
        3 => {
            for a in 0..n - 2 {
                for b in a + 1..n - 1 {
                    for c in b + 1..n {
                        let r1 = ranks.rank_of_codes5([h1.0, h1.1, rem[a], rem[b], rem[c]]);
                        let r2 = ranks.rank_of_codes5([h2.0, h2.1, rem[a], rem[b], rem[c]]);
                        tally(r1, r2);
                    }
                }
            }
        }
        5 => {
            for a in 0..n - 4 {
                for b in a + 1..n - 3 {
                    for c in b + 1..n - 2 {
                        for d in c + 1..n - 1 {
                            for e in d + 1..n {
                                let board = [rem[a], rem[b], rem[c], rem[d], rem[e]];
                                let r1 = ranks.rank_of_codes7([
                                    h1.0, h1.1, board[0], board[1], board[2], board[3], board[4],
                                ]);
                                let r2 = ranks.rank_of_codes7([
                                    h2.0, h2.1, board[0], board[1], board[2], board[3], board[4],
                                ]);
                                tally(r1, r2);
                            }
                        }
                    }
                }
            }
        }
        _ => unreachable!("validated board size"),
    }
    counts
}

/// Exact matchup tallies, reduced by suit isomorphism. Every group member
/// sees the same per-board outcomes because hand evaluation is invariant
/// under suit relabeling, so one representative enumeration per group is
/// scaled by the group size.
fn exact_matchup(
    ranks: &RankTables,
    first: ClassIndex,
    second: ClassIndex,
    board_size: u8,
) -> ExactCounts {
    let perms = suit_permutations();
    let combos_first = class_codes(first);
    let combos_second = class_codes(second);

    let mut groups: BTreeMap<u64, u64> = BTreeMap::new();
    let mut num_pairs = 0u64;
    for &(a, b) in &combos_first {
        for &(c, d) in &combos_second {
            if a == c || a == d || b == c || b == d {
                continue;
            }
            num_pairs += 1;
            *groups.entry(canonical_key((a, b), (c, d), &perms)).or_insert(0) += 1;
        }
    }

    let groups: Vec<(u64, u64)> = groups.into_iter().collect();
    let summed = groups
        .par_iter()
        .map(|&(key, weight)| {
            let (h1, h2) = unpack_config(key);
            let c = enumerate_boards(ranks, h1, h2, board_size);
            ExactCounts {
                first_wins: c.first_wins * weight,
                second_wins: c.second_wins * weight,
                draws: c.draws * weight,
                total: c.total * weight,
            }
        })
        .reduce(ExactCounts::default, |x, y| ExactCounts {
            first_wins: x.first_wins + y.first_wins,
            second_wins: x.second_wins + y.second_wins,
            draws: x.draws + y.draws,
            total: x.total + y.total,
        });

    debug_assert_eq!(summed.total, num_pairs * board_count(board_size, 48));
    summed
}

// ---------------------------------------------------------------------------
// Monte Carlo
// ---------------------------------------------------------------------------

/// Stream id so every class pair draws from its own deterministic substream
/// regardless of build order or parallelism.
fn pair_stream(first: ClassIndex, second: ClassIndex) -> u64 {
    (first.get() as u64) * NUM_CLASSES as u64 + second.get() as u64 + 1
}

fn mc_matchup(
    ranks: &RankTables,
    first: ClassIndex,
    second: ClassIndex,
    board_size: u8,
    samples: u64,
    seed: u64,
) -> ExactCounts {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(pair_stream(first, second));
    let combos_first = class_codes(first);
    let combos_second = class_codes(second);
    let deck: Vec<u32> = full_deck().iter().map(|c| c.code()).collect();

    let mut counts = ExactCounts::default();
    for _ in 0..samples {
        let (h1, h2) = loop {
            let a = combos_first[rng.gen_range(0..combos_first.len())];
            let b = combos_second[rng.gen_range(0..combos_second.len())];
            if a.0 != b.0 && a.0 != b.1 && a.1 != b.0 && a.1 != b.1 {
                break (a, b);
            }
        };
        let mut used = [h1.0, h1.1, h2.0, h2.1, 0, 0, 0, 0, 0];
        let mut filled = 4;
        while filled < 4 + board_size as usize {
            let code = deck[rng.gen_range(0..52)];
            if !used[..filled].contains(&code) {
                used[filled] = code;
                filled += 1;
            }
        }
        let (r1, r2) = match board_size {
            3 => (
                ranks.rank_of_codes5([h1.0, h1.1, used[4], used[5], used[6]]),
                ranks.rank_of_codes5([h2.0, h2.1, used[4], used[5], used[6]]),
            ),
            5 => (
                ranks.rank_of_codes7([h1.0, h1.1, used[4], used[5], used[6], used[7], used[8]]),
                ranks.rank_of_codes7([h2.0, h2.1, used[4], used[5], used[6], used[7], used[8]]),
            ),
            _ => unreachable!("validated board size"),
        };
        counts.total += 1;
        match r1.cmp(&r2) {
            std::cmp::Ordering::Less => counts.first_wins += 1,
            std::cmp::Ordering::Greater => counts.second_wins += 1,
            std::cmp::Ordering::Equal => counts.draws += 1,
        }
    }
    counts
}

// ---------------------------------------------------------------------------
// Public entry points
// ---------------------------------------------------------------------------

fn validate_board_size(board_size: u8) -> Result<(), EquityError> {
    if board_size == 3 || board_size == 5 {
        Ok(())
    } else {
        Err(EquityError::InvalidBoardSize(board_size))
    }
}

/// Showdown probabilities for class `first` against class `second`.
pub fn compute_matchup(
    ranks: &RankTables,
    first: ClassIndex,
    second: ClassIndex,
    board_size: u8,
    mode: EquityMode,
) -> Result<Matchup, EquityError> {
    validate_board_size(board_size)?;
    mode.validate()?;
    let counts = match mode {
        EquityMode::Exact => exact_matchup(ranks, first, second, board_size),
        EquityMode::MonteCarlo { samples, seed } => {
            mc_matchup(ranks, first, second, board_size, samples, seed)
        }
    };
    let total = counts.total as f64;
    Ok(Matchup {
        win_first: counts.first_wins as f64 / total,
        win_second: counts.second_wins as f64 / total,
        draw: counts.draws as f64 / total,
    })
}

/// Builds the full 169x169 tables; deterministic given the mode parameters.
pub fn build_equity_tables(
    ranks: &RankTables,
    board_size: u8,
    mode: EquityMode,
) -> Result<EquityTables, EquityError> {
    validate_board_size(board_size)?;
    mode.validate()?;

    let pairs: Vec<(usize, usize)> = (0..NUM_CLASSES)
        .flat_map(|i| (i..NUM_CLASSES).map(move |j| (i, j)))
        .collect();

    let results: Vec<((usize, usize), ExactCounts)> = pairs
        .par_iter()
        .map(|&(i, j)| {
            let first = ClassIndex::new(i).unwrap();
            let second = ClassIndex::new(j).unwrap();
            let counts = match mode {
                EquityMode::Exact => exact_matchup(ranks, first, second, board_size),
                EquityMode::MonteCarlo { samples, seed } => {
                    mc_matchup(ranks, first, second, board_size, samples, seed)
                }
            };
            ((i, j), counts)
        })
        .collect();

    let mut win = vec![0.0; NUM_CLASSES * NUM_CLASSES];
    let mut draw = vec![0.0; NUM_CLASSES * NUM_CLASSES];
    for ((i, j), counts) in results {
        let total = counts.total as f64;
        win[i * NUM_CLASSES + j] = counts.first_wins as f64 / total;
        win[j * NUM_CLASSES + i] = counts.second_wins as f64 / total;
        draw[i * NUM_CLASSES + j] = counts.draws as f64 / total;
        draw[j * NUM_CLASSES + i] = counts.draws as f64 / total;
    }

    let prior = ClassPrior::compute().probs().to_vec();
    let cond = ConditionalDist::compute();
    let mut conditional = vec![0.0; NUM_CLASSES * NUM_CLASSES];
    for i in 0..NUM_CLASSES {
        let row = cond.row_probs(ClassIndex::new(i).unwrap());
        conditional[i * NUM_CLASSES..(i + 1) * NUM_CLASSES].copy_from_slice(&row);
    }

    Ok(EquityTables::from_parts(board_size, mode, win, draw, prior, conditional))
}

// ---------------------------------------------------------------------------
// Persistence
// ---------------------------------------------------------------------------

fn fnv1a64(bytes: &[u8]) -> u64 {
    let mut hash = 0xcbf2_9ce4_8422_2325u64;
    for &b in bytes {
        hash ^= u64::from(b);
        hash = hash.wrapping_mul(0x0000_0100_0000_01b3);
    }
    hash
}

fn push_row(out: &mut String, row: &[f64]) {
    for (n, v) in row.iter().enumerate() {
        if n > 0 {
            out.push(' ');
        }
        out.push_str(&v.to_string());
    }
    out.push('\n');
}

/// Writes a self-describing text file; probabilities round-trip bit-exactly
/// through Rust's shortest-representation float formatting.
pub fn save_tables(tables: &EquityTables, path: &Path) -> Result<(), EquityFileError> {
    let (mode_name, seed, samples) = match tables.mode {
        EquityMode::Exact => ("exact", 0, 0),
        EquityMode::MonteCarlo { samples, seed } => ("monte_carlo", seed, samples),
    };
    let max_std_error = match tables.mode {
        EquityMode::Exact => 0.0,
        EquityMode::MonteCarlo { samples, .. } => 0.5 / (samples as f64).sqrt(),
    };

    let mut data = String::new();
    data.push_str(&format!("board_size {}\n", tables.board_size));
    data.push_str(&format!("mode {mode_name}\n"));
    data.push_str(&format!("seed {seed}\n"));
    data.push_str(&format!("samples {samples}\n"));
    data.push_str(&format!("max_std_error {max_std_error}\n"));
    data.push_str("h\n");
    push_row(&mut data, &tables.prior);
    data.push_str("hcond\n");
    for i in 0..NUM_CLASSES {
        push_row(&mut data, &tables.conditional[i * NUM_CLASSES..(i + 1) * NUM_CLASSES]);
    }
    data.push_str("w\n");
    for i in 0..NUM_CLASSES {
        push_row(&mut data, &tables.win[i * NUM_CLASSES..(i + 1) * NUM_CLASSES]);
    }
    data.push_str("d\n");
    for i in 0..NUM_CLASSES {
        push_row(&mut data, &tables.draw[i * NUM_CLASSES..(i + 1) * NUM_CLASSES]);
    }

    let header = format!("{EQUITY_FORMAT_VERSION}\nchecksum {:016x}\n", fnv1a64(data.as_bytes()));
    std::fs::write(path, header + &data)?;
    Ok(())
}

pub fn load_tables(path: &Path) -> Result<EquityTables, EquityFileError> {
    let text = match std::fs::read_to_string(path) {
        Ok(text) => text,
        Err(err) if err.kind() == std::io::ErrorKind::NotFound => {
            return Err(EquityFileError::Missing(path.display().to_string()));
        }
        Err(err) => return Err(err.into()),
    };
    let malformed = |msg: &str| EquityFileError::Malformed(msg.to_string());

    let (version, rest) = text.split_once('\n').ok_or_else(|| malformed("missing version"))?;
    if version != EQUITY_FORMAT_VERSION {
        return Err(EquityFileError::VersionMismatch(version.to_string()));
    }
    let (checksum_line, data) =
        rest.split_once('\n').ok_or_else(|| malformed("missing checksum"))?;
    let stored = checksum_line
        .strip_prefix("checksum ")
        .and_then(|s| u64::from_str_radix(s, 16).ok())
        .ok_or_else(|| malformed("bad checksum line"))?;
    if stored != fnv1a64(data.as_bytes()) {
        return Err(EquityFileError::ChecksumMismatch);
    }

    let mut lines = data.lines();
    let mut field = |name: &str| -> Result<String, EquityFileError> {
        let line = lines.next().ok_or_else(|| malformed("truncated header"))?;
        line.strip_prefix(name)
            .and_then(|s| s.strip_prefix(' '))
            .map(str::to_string)
            .ok_or_else(|| EquityFileError::Malformed(format!("expected field {name}")))
    };
    let board_size: u8 =
        field("board_size")?.parse().map_err(|_| malformed("bad board_size"))?;
    let mode_name = field("mode")?;
    let seed: u64 = field("seed")?.parse().map_err(|_| malformed("bad seed"))?;
    let samples: u64 = field("samples")?.parse().map_err(|_| malformed("bad samples"))?;
    let _max_std_error = field("max_std_error")?;
    let mode = match mode_name.as_str() {
        "exact" => EquityMode::Exact,
        "monte_carlo" => EquityMode::MonteCarlo { samples, seed },
        other => return Err(EquityFileError::Malformed(format!("unknown mode {other}"))),
    };

    let mut read_section = |name: &str, rows: usize| -> Result<Vec<f64>, EquityFileError> {
        if lines.next() != Some(name) {
            return Err(EquityFileError::Malformed(format!("expected section {name}")));
        }
        let mut out = Vec::with_capacity(rows * NUM_CLASSES);
        for _ in 0..rows {
            let line = lines.next().ok_or_else(|| malformed("truncated section"))?;
            for value in line.split(' ') {
                out.push(value.parse::<f64>().map_err(|_| malformed("bad probability"))?);
            }
        }
        if out.len() != rows * NUM_CLASSES {
            return Err(malformed("wrong section size"));
        }
        Ok(out)
    };

    let prior = read_section("h", 1)?;
    let conditional = read_section("hcond", NUM_CLASSES)?;
    let win = read_section("w", NUM_CLASSES)?;
    let draw = read_section("d", NUM_CLASSES)?;

    Ok(EquityTables::from_parts(board_size, mode, win, draw, prior, conditional))
}

// ---------------------------------------------------------------------------
// Test support
// ---------------------------------------------------------------------------

#[cfg(test)]
pub mod tests_support {
    use super::*;

    /// A structurally valid table set (normalized, symmetric draws, real deal
    /// distributions) built from a smooth synthetic strength model, for tests
    /// that need tables without paying for the full enumeration.
    pub fn synthetic_tables() -> EquityTables {
        let prior = ClassPrior::compute().probs().to_vec();
        let cond = ConditionalDist::compute();
        let mut conditional = vec![0.0; NUM_CLASSES * NUM_CLASSES];
        for i in 0..NUM_CLASSES {
            let row = cond.row_probs(ClassIndex::new(i).unwrap());
            conditional[i * NUM_CLASSES..(i + 1) * NUM_CLASSES].copy_from_slice(&row);
        }

        let strength: Vec<f64> = (0..NUM_CLASSES)
            .map(|i| {
                let class = ClassIndex::new(i).unwrap();
                let pair_bonus = if class.is_pair() { 6.0 } else { 0.0 };
                let suited_bonus = if class.is_suited() { 0.5 } else { 0.0 };
                let high = (26 - class.row() - class.col()) as f64;
                high + pair_bonus + suited_bonus
            })
            .collect();

        let tie = 0.04;
        let mut win = vec![0.0; NUM_CLASSES * NUM_CLASSES];
        let mut draw = vec![0.0; NUM_CLASSES * NUM_CLASSES];
        for i in 0..NUM_CLASSES {
            for j in 0..NUM_CLASSES {
                let edge = 1.0 / (1.0 + (-(strength[i] - strength[j]) / 4.0).exp());
                win[i * NUM_CLASSES + j] = (1.0 - tie) * edge;
                draw[i * NUM_CLASSES + j] = tie;
            }
        }
        // Force exact complementarity w(i|j) + w(j|i) + d = 1.
        for i in 0..NUM_CLASSES {
            for j in 0..NUM_CLASSES {
                if i < j {
                    let w_ij = win[i * NUM_CLASSES + j];
                    win[j * NUM_CLASSES + i] = 1.0 - tie - w_ij;
                } else if i == j {
                    win[i * NUM_CLASSES + j] = (1.0 - tie) / 2.0;
                }
            }
        }
        EquityTables::from_parts(3, EquityMode::Exact, win, draw, prior, conditional)
    }
}
