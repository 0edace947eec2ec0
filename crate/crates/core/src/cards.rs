//! Card encoding, deck handling, and exact five/seven-card hand evaluation.
//!
//! Each card is a single integer `suit_bit + rank_prime`: the rank is one of
//! thirteen primes (deuce = 2 up to ace = 41) in the low byte, and the suit is
//! a one-hot bit in bits 8..=11. Flushes are detected by AND-ing the shifted
//! suit bits of all five cards, and hand strength is looked up by the product
//! of the five rank primes, which is a collision-free key because prime
//! factorizations are unique. Flush and non-flush hands with the same ranks
//! share a prime product, so they live in separate tables.

use thiserror::Error;

/// Rank primes for deuce..=ace.
pub const RANK_PRIMES: [u32; 13] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41];

/// One-hot suit bits: spades, hearts, clubs, diamonds.
pub const SUIT_BITS: [u32; 4] = [256, 512, 1024, 2048];

/// Number of distinct five-card hand strengths.
pub const NUM_HAND_RANKS: u16 = 7462;

/// Number of five-card hands dealt from a 52-card deck.
pub const NUM_FIVE_CARD_HANDS: u64 = 2_598_960;

#[derive(Debug, Error, Clone, Copy, PartialEq, Eq)]
pub enum CardsError {
    #[error("rank {0} outside 2..=14")]
    InvalidRank(u8),
    #[error("suit {0} outside 0..=3")]
    InvalidSuit(u8),
    #[error("hand contains duplicate cards")]
    DuplicateCard,
}

/// A playing card packed as `suit_bit + rank_prime`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Card(u32);

impl Card {
    /// Builds a card from a rank (2..=14, ace high) and a suit (0..=3).
    pub fn new(rank: u8, suit: u8) -> Result<Card, CardsError> {
        if !(2..=14).contains(&rank) {
            return Err(CardsError::InvalidRank(rank));
        }
        if suit > 3 {
            return Err(CardsError::InvalidSuit(suit));
        }
        Ok(Card(SUIT_BITS[suit as usize] + RANK_PRIMES[rank as usize - 2]))
    }

    /// The raw integer code.
    pub fn code(self) -> u32 {
        self.0
    }

    /// Reconstructs a card from its integer code.
    pub fn from_code(code: u32) -> Option<Card> {
        let prime = code & 255;
        let suit = code >> 8;
        let rank_ok = RANK_PRIMES.contains(&prime);
        let suit_ok = SUIT_BITS.contains(&(suit << 8));
        (rank_ok && suit_ok && suit << 8 | prime == code).then_some(Card(code))
    }

    /// Rank prime in the low byte.
    pub fn rank_prime(self) -> u32 {
        self.0 & 255
    }

    /// One-hot suit bits shifted down to 1, 2, 4, 8.
    pub fn suit_bits(self) -> u32 {
        self.0 >> 8
    }

    /// Rank as 2..=14.
    pub fn rank(self) -> u8 {
        let prime = self.rank_prime();
        RANK_PRIMES.iter().position(|&p| p == prime).unwrap() as u8 + 2
    }

    /// Suit as 0..=3.
    pub fn suit(self) -> u8 {
        self.suit_bits().trailing_zeros() as u8
    }
}

impl std::fmt::Debug for Card {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        const RANKS: [char; 13] = [
            '2', '3', '4', '5', '6', '7', '8', '9', 'T', 'J', 'Q', 'K', 'A',
        ];
        const SUITS: [char; 4] = ['s', 'h', 'c', 'd'];
        write!(
            f,
            "{}{}",
            RANKS[self.rank() as usize - 2],
            SUITS[self.suit() as usize]
        )
    }
}

/// All 52 cards, rank-major.
pub fn full_deck() -> Vec<Card> {
    let mut deck = Vec::with_capacity(52);
    for rank in 2..=14 {
        for suit in 0..4 {
            deck.push(Card::new(rank, suit).unwrap());
        }
    }
    deck
}

/// Strength class of a five-card hand: 1 (ace-high straight flush) is the
/// strongest, 7462 (7 5 4 3 2 high card) the weakest.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RankIndex(u16);

impl RankIndex {
    pub fn new(value: u16) -> Option<RankIndex> {
        (1..=NUM_HAND_RANKS).contains(&value).then_some(RankIndex(value))
    }

    pub fn get(self) -> u16 {
        self.0
    }

    /// True when `self` beats `other` at showdown.
    pub fn beats(self, other: RankIndex) -> bool {
        self.0 < other.0
    }

    pub fn category(self) -> HandCategory {
        HandCategory::of_rank(self.0)
    }
}

/// The nine broad hand categories, each owning a contiguous rank span.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum HandCategory {
    StraightFlush,
    FourOfAKind,
    FullHouse,
    Flush,
    Straight,
    ThreeOfAKind,
    TwoPair,
    Pair,
    HighCard,
}

impl HandCategory {
    pub const ALL: [HandCategory; 9] = [
        HandCategory::StraightFlush,
        HandCategory::FourOfAKind,
        HandCategory::FullHouse,
        HandCategory::Flush,
        HandCategory::Straight,
        HandCategory::ThreeOfAKind,
        HandCategory::TwoPair,
        HandCategory::Pair,
        HandCategory::HighCard,
    ];

    /// Inclusive rank span occupied by the category.
    pub fn span(self) -> (u16, u16) {
        match self {
            HandCategory::StraightFlush => (1, 10),
            HandCategory::FourOfAKind => (11, 166),
            HandCategory::FullHouse => (167, 322),
            HandCategory::Flush => (323, 1599),
            HandCategory::Straight => (1600, 1609),
            HandCategory::ThreeOfAKind => (1610, 2467),
            HandCategory::TwoPair => (2468, 3325),
            HandCategory::Pair => (3326, 6185),
            HandCategory::HighCard => (6186, 7462),
        }
    }

    pub fn of_rank(rank: u16) -> HandCategory {
        debug_assert!((1..=NUM_HAND_RANKS).contains(&rank));
        *HandCategory::ALL
            .iter()
            .find(|c| {
                let (lo, hi) = c.span();
                (lo..=hi).contains(&rank)
            })
            .expect("rank within 1..=7462")
    }
}

/// Returns true when all five cards share a suit.
pub fn is_flush(hand: &[Card; 5]) -> Result<bool, CardsError> {
    check_distinct(hand)?;
    let and = hand.iter().fold(!0u32, |acc, c| acc & c.suit_bits());
    Ok(and != 0)
}

fn check_distinct(cards: &[Card]) -> Result<(), CardsError> {
    for (n, a) in cards.iter().enumerate() {
        if cards[n + 1..].contains(a) {
            return Err(CardsError::DuplicateCard);
        }
    }
    Ok(())
}

/// Lookup tables mapping the prime product of a hand's five ranks to its
/// strength, split into flush and non-flush hands.
///
/// Keys are stored sorted so lookups are a binary search; the tables are
/// immutable after construction and safe to share across threads.
pub struct RankTables {
    flush_keys: Vec<u32>,
    flush_ranks: Vec<u16>,
    nonflush_keys: Vec<u32>,
    nonflush_ranks: Vec<u16>,
}

/// Straight high cards from ace down to the five-high wheel.
const STRAIGHT_HIGHS: [u8; 10] = [14, 13, 12, 11, 10, 9, 8, 7, 6, 5];

fn prime(rank: u8) -> u32 {
    RANK_PRIMES[rank as usize - 2]
}

fn straight_product(high: u8) -> u32 {
    if high == 5 {
        // Wheel: A 5 4 3 2.
        prime(14) * prime(5) * prime(4) * prime(3) * prime(2)
    } else {
        (high - 4..=high).map(prime).product()
    }
}

/// All 5-subsets of the 13 ranks in descending strength order (descending
/// lexicographic on the sorted-descending rank tuple), straights excluded.
fn nonstraight_rank_sets() -> Vec<[u8; 5]> {
    let straight_keys: Vec<u32> = STRAIGHT_HIGHS.iter().map(|&h| straight_product(h)).collect();
    let mut sets = Vec::with_capacity(1277);
    for a in (6..=14).rev() {
        for b in (5..a).rev() {
            for c in (4..b).rev() {
                for d in (3..c).rev() {
                    for e in (2..d).rev() {
                        let set = [a, b, c, d, e];
                        let key: u32 = set.iter().map(|&r| prime(r)).product();
                        if !straight_keys.contains(&key) {
                            sets.push(set);
                        }
                    }
                }
            }
        }
    }
    sets
}

impl RankTables {
    /// Enumerates every rank multiset per category in strength order and
    /// assigns ranks 1..=7462.
    pub fn build() -> RankTables {
        let mut flush: Vec<(u32, u16)> = Vec::with_capacity(1287);
        let mut nonflush: Vec<(u32, u16)> = Vec::with_capacity(6175);
        let mut next = 1u16;

        // Straight flushes.
        for &high in &STRAIGHT_HIGHS {
            flush.push((straight_product(high), next));
            next += 1;
        }

        // Four of a kind: quad rank descending, kicker descending.
        for quad in (2..=14u8).rev() {
            for kicker in (2..=14u8).rev() {
                if kicker != quad {
                    nonflush.push((prime(quad).pow(4) * prime(kicker), next));
                    next += 1;
                }
            }
        }

        // Full house: trips descending, pair descending.
        for trips in (2..=14u8).rev() {
            for pair in (2..=14u8).rev() {
                if pair != trips {
                    nonflush.push((prime(trips).pow(3) * prime(pair).pow(2), next));
                    next += 1;
                }
            }
        }

        // Flushes share rank sets with high cards.
        let distinct_sets = nonstraight_rank_sets();
        for set in &distinct_sets {
            flush.push((set.iter().map(|&r| prime(r)).product(), next));
            next += 1;
        }

        // Non-flush straights.
        for &high in &STRAIGHT_HIGHS {
            nonflush.push((straight_product(high), next));
            next += 1;
        }

        // Three of a kind: trips descending, then kickers descending.
        for trips in (2..=14u8).rev() {
            for k1 in (2..=14u8).rev() {
                if k1 == trips {
                    continue;
                }
                for k2 in (2..k1).rev() {
                    if k2 == trips {
                        continue;
                    }
                    nonflush.push((prime(trips).pow(3) * prime(k1) * prime(k2), next));
                    next += 1;
                }
            }
        }

        // Two pair: high pair, low pair, kicker, all descending.
        for hi in (2..=14u8).rev() {
            for lo in (2..hi).rev() {
                for kicker in (2..=14u8).rev() {
                    if kicker != hi && kicker != lo {
                        nonflush.push((prime(hi).pow(2) * prime(lo).pow(2) * prime(kicker), next));
                        next += 1;
                    }
                }
            }
        }

        // One pair: pair rank descending, then the three kickers descending.
        for pair in (2..=14u8).rev() {
            for k1 in (2..=14u8).rev() {
                if k1 == pair {
                    continue;
                }
                for k2 in (2..k1).rev() {
                    if k2 == pair {
                        continue;
                    }
                    for k3 in (2..k2).rev() {
                        if k3 == pair {
                            continue;
                        }
                        nonflush
                            .push((prime(pair).pow(2) * prime(k1) * prime(k2) * prime(k3), next));
                        next += 1;
                    }
                }
            }
        }

        // High cards.
        for set in &distinct_sets {
            nonflush.push((set.iter().map(|&r| prime(r)).product(), next));
            next += 1;
        }

        assert_eq!(next, NUM_HAND_RANKS + 1);
        assert_eq!(flush.len(), 1287);
        assert_eq!(nonflush.len(), 6175);

        flush.sort_unstable_by_key(|&(k, _)| k);
        nonflush.sort_unstable_by_key(|&(k, _)| k);
        RankTables {
            flush_keys: flush.iter().map(|&(k, _)| k).collect(),
            flush_ranks: flush.iter().map(|&(_, r)| r).collect(),
            nonflush_keys: nonflush.iter().map(|&(k, _)| k).collect(),
            nonflush_ranks: nonflush.iter().map(|&(_, r)| r).collect(),
        }
    }

    pub fn flush_entries(&self) -> usize {
        self.flush_keys.len()
    }

    pub fn nonflush_entries(&self) -> usize {
        self.nonflush_keys.len()
    }

    /// Evaluates five distinct cards.
    pub fn eval5(&self, hand: &[Card; 5]) -> Result<RankIndex, CardsError> {
        check_distinct(hand)?;
        let codes = [
            hand[0].code(),
            hand[1].code(),
            hand[2].code(),
            hand[3].code(),
            hand[4].code(),
        ];
        Ok(RankIndex(self.rank_of_codes5(codes)))
    }

    /// Evaluates the best five of seven distinct cards.
    pub fn eval7(&self, cards: &[Card; 7]) -> Result<RankIndex, CardsError> {
        check_distinct(cards)?;
        let mut codes = [0u32; 7];
        for (dst, src) in codes.iter_mut().zip(cards) {
            *dst = src.code();
        }
        Ok(RankIndex(self.rank_of_codes7(codes)))
    }

    /// Raw-code evaluation without the duplicate check, for hot loops that
    /// construct hands from a deck and cannot repeat cards.
    pub fn rank_of_codes5(&self, c: [u32; 5]) -> u16 {
        let suits = (c[0] & c[1] & c[2] & c[3] & c[4]) >> 8;
        let key = (c[0] & 255) * (c[1] & 255) * (c[2] & 255) * (c[3] & 255) * (c[4] & 255);
        if suits != 0 {
            let i = self.flush_keys.binary_search(&key).expect("flush key");
            self.flush_ranks[i]
        } else {
            let i = self.nonflush_keys.binary_search(&key).expect("non-flush key");
            self.nonflush_ranks[i]
        }
    }

    /// Minimum rank over the 21 five-card subsets, by choosing two cards to drop.
    pub fn rank_of_codes7(&self, c: [u32; 7]) -> u16 {
        let mut best = u16::MAX;
        for skip_a in 0..6 {
            for skip_b in skip_a + 1..7 {
                let mut five = [0u32; 5];
                let mut n = 0;
                for (idx, &code) in c.iter().enumerate() {
                    if idx != skip_a && idx != skip_b {
                        five[n] = code;
                        n += 1;
                    }
                }
                let rank = self.rank_of_codes5(five);
                if rank < best {
                    best = rank;
                }
            }
        }
        best
    }

    /// Writes the table as a versioned CSV of (prime_product, rank_index,
    /// is_flush) triples; regeneration is byte-identical.
    pub fn write_csv(&self, path: &std::path::Path) -> std::io::Result<()> {
        use std::io::Write;
        let mut out = String::from("rank-tables/1\nprime_product,rank_index,is_flush\n");
        for (k, r) in self.flush_keys.iter().zip(&self.flush_ranks) {
            out.push_str(&format!("{k},{r},1\n"));
        }
        for (k, r) in self.nonflush_keys.iter().zip(&self.nonflush_ranks) {
            out.push_str(&format!("{k},{r},0\n"));
        }
        std::fs::File::create(path)?.write_all(out.as_bytes())
    }

    pub fn read_csv(path: &std::path::Path) -> std::io::Result<RankTables> {
        let text = std::fs::read_to_string(path)?;
        let mut lines = text.lines();
        let bad = |msg: &str| std::io::Error::new(std::io::ErrorKind::InvalidData, msg.to_string());
        if lines.next() != Some("rank-tables/1") {
            return Err(bad("unsupported rank table version"));
        }
        if lines.next() != Some("prime_product,rank_index,is_flush") {
            return Err(bad("missing header row"));
        }
        let mut tables = RankTables {
            flush_keys: Vec::new(),
            flush_ranks: Vec::new(),
            nonflush_keys: Vec::new(),
            nonflush_ranks: Vec::new(),
        };
        for line in lines {
            let mut cols = line.split(',');
            let key: u32 = cols
                .next()
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| bad("bad key"))?;
            let rank: u16 = cols
                .next()
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| bad("bad rank"))?;
            match cols.next() {
                Some("1") => {
                    tables.flush_keys.push(key);
                    tables.flush_ranks.push(rank);
                }
                Some("0") => {
                    tables.nonflush_keys.push(key);
                    tables.nonflush_ranks.push(rank);
                }
                _ => return Err(bad("bad flush flag")),
            }
        }
        Ok(tables)
    }
}
