//! The 169-class preflop hand abstraction.
//!
//! Two-card hands reduce to a 13x13 grid with ranks descending A..2 along
//! both axes: the diagonal holds the 13 pairs, the upper triangle the 78
//! suited hands, the lower triangle the 78 offsuit hands. The linear index of
//! cell (row, col) is `13 * row + col`.

use crate::cards::{full_deck, Card, CardsError};
use thiserror::Error;

/// Number of hand classes.
pub const NUM_CLASSES: usize = 169;

/// Unordered two-card deals from a full deck.
pub const NUM_HOLE_DEALS: u32 = 1326;

/// Unordered two-card deals from the 50 cards left after one hand is removed.
pub const NUM_OPPONENT_DEALS: u32 = 1225;

const RANK_CHARS: [char; 13] = [
    'A', 'K', 'Q', 'J', 'T', '9', '8', '7', '6', '5', '4', '3', '2',
];

#[derive(Debug, Error, Clone, Copy, PartialEq, Eq)]
pub enum AbstractionError {
    #[error("class index {0} outside 0..=168")]
    InvalidIndex(usize),
    #[error(transparent)]
    Cards(#[from] CardsError),
}

/// Index of a hand class on the 13x13 grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ClassIndex(u8);

impl ClassIndex {
    pub fn new(value: usize) -> Result<ClassIndex, AbstractionError> {
        if value < NUM_CLASSES {
            Ok(ClassIndex(value as u8))
        } else {
            Err(AbstractionError::InvalidIndex(value))
        }
    }

    pub fn get(self) -> usize {
        self.0 as usize
    }

    pub fn row(self) -> usize {
        self.0 as usize / 13
    }

    pub fn col(self) -> usize {
        self.0 as usize % 13
    }

    pub fn is_pair(self) -> bool {
        self.row() == self.col()
    }

    pub fn is_suited(self) -> bool {
        self.row() < self.col()
    }

    /// Number of concrete two-card combos in this class.
    pub fn degeneracy(self) -> u32 {
        if self.is_pair() {
            6
        } else if self.is_suited() {
            4
        } else {
            12
        }
    }

    /// Canonical label such as "AA", "AKs", or "72o".
    pub fn label(self) -> String {
        let (r, c) = (self.row(), self.col());
        if r == c {
            format!("{}{}", RANK_CHARS[r], RANK_CHARS[c])
        } else if r < c {
            format!("{}{}s", RANK_CHARS[r], RANK_CHARS[c])
        } else {
            format!("{}{}o", RANK_CHARS[c], RANK_CHARS[r])
        }
    }

    /// Parses a canonical label; inverse of [`ClassIndex::label`].
    pub fn parse(label: &str) -> Option<ClassIndex> {
        let chars: Vec<char> = label.chars().collect();
        let pos = |ch: char| RANK_CHARS.iter().position(|&r| r == ch);
        match chars.as_slice() {
            [a, b] if a == b => {
                let r = pos(*a)?;
                Some(ClassIndex((13 * r + r) as u8))
            }
            [a, b, kind] => {
                let hi = pos(*a)?;
                let lo = pos(*b)?;
                if hi >= lo {
                    return None;
                }
                match kind {
                    's' => Some(ClassIndex((13 * hi + lo) as u8)),
                    'o' => Some(ClassIndex((13 * lo + hi) as u8)),
                    _ => None,
                }
            }
            _ => None,
        }
    }

    pub fn all() -> impl Iterator<Item = ClassIndex> {
        (0..NUM_CLASSES).map(|i| ClassIndex(i as u8))
    }
}

/// Classifies an unordered pair of distinct cards onto the grid.
pub fn classify(a: Card, b: Card) -> Result<ClassIndex, AbstractionError> {
    if a == b {
        return Err(CardsError::DuplicateCard.into());
    }
    // Grid rows run A..2, so higher ranks get smaller row numbers.
    let row_of = |rank: u8| (14 - rank) as usize;
    if a.rank() == b.rank() {
        let r = row_of(a.rank());
        return Ok(ClassIndex((13 * r + r) as u8));
    }
    let hi = row_of(a.rank().max(b.rank()));
    let lo = row_of(a.rank().min(b.rank()));
    if a.suit() == b.suit() {
        Ok(ClassIndex((13 * hi + lo) as u8))
    } else {
        Ok(ClassIndex((13 * lo + hi) as u8))
    }
}

/// Every concrete two-card combo belonging to a class, in deck order.
pub fn class_combos(class: ClassIndex) -> Vec<(Card, Card)> {
    let deck = full_deck();
    let mut combos = Vec::new();
    for (n, &a) in deck.iter().enumerate() {
        for &b in &deck[n + 1..] {
            if classify(a, b).unwrap() == class {
                combos.push((a, b));
            }
        }
    }
    combos
}

/// A fixed concrete representative of the class.
pub fn representative(class: ClassIndex) -> (Card, Card) {
    class_combos(class)[0]
}

/// Prior probabilities h(i) of being dealt each class.
#[derive(Debug, Clone)]
pub struct ClassPrior {
    counts: [u32; NUM_CLASSES],
}

impl ClassPrior {
    pub fn compute() -> ClassPrior {
        let mut counts = [0u32; NUM_CLASSES];
        for class in ClassIndex::all() {
            counts[class.get()] = class.degeneracy();
        }
        debug_assert_eq!(counts.iter().sum::<u32>(), NUM_HOLE_DEALS);
        ClassPrior { counts }
    }

    /// Combo count out of the 1326 deals.
    pub fn count(&self, class: ClassIndex) -> u32 {
        self.counts[class.get()]
    }

    pub fn prob(&self, class: ClassIndex) -> f64 {
        f64::from(self.count(class)) / f64::from(NUM_HOLE_DEALS)
    }

    pub fn probs(&self) -> [f64; NUM_CLASSES] {
        let mut out = [0.0; NUM_CLASSES];
        for (dst, &n) in out.iter_mut().zip(&self.counts) {
            *dst = f64::from(n) / f64::from(NUM_HOLE_DEALS);
        }
        out
    }
}

/// Conditional opponent distribution h(j|i): the probability the opponent
/// holds class j given our own hand is in class i.
///
/// Entries are exact rationals with denominator 1225, stored as integer combo
/// counts. The distribution is computed from a fixed representative of class
/// i; suit symmetry makes the result representative-independent, which the
/// tests check exhaustively.
#[derive(Debug, Clone)]
pub struct ConditionalDist {
    counts: Vec<[u16; NUM_CLASSES]>,
}

impl ConditionalDist {
    pub fn compute() -> ConditionalDist {
        let counts = ClassIndex::all()
            .map(|class| Self::row_counts(representative(class)))
            .collect();
        ConditionalDist { counts }
    }

    /// Opponent-class combo counts after removing one concrete hand.
    pub fn row_counts(removed: (Card, Card)) -> [u16; NUM_CLASSES] {
        let mut counts = [0u16; NUM_CLASSES];
        let rest: Vec<Card> = full_deck()
            .into_iter()
            .filter(|&c| c != removed.0 && c != removed.1)
            .collect();
        debug_assert_eq!(rest.len(), 50);
        for (n, &a) in rest.iter().enumerate() {
            for &b in &rest[n + 1..] {
                counts[classify(a, b).unwrap().get()] += 1;
            }
        }
        counts
    }

    /// Exact combo count for h(j|i), out of 1225.
    pub fn count(&self, given: ClassIndex, other: ClassIndex) -> u16 {
        self.counts[given.get()][other.get()]
    }

    pub fn prob(&self, given: ClassIndex, other: ClassIndex) -> f64 {
        f64::from(self.count(given, other)) / f64::from(NUM_OPPONENT_DEALS)
    }

    /// One row of h(.|i) as probabilities.
    pub fn row_probs(&self, given: ClassIndex) -> [f64; NUM_CLASSES] {
        let mut out = [0.0; NUM_CLASSES];
        for (dst, &n) in out.iter_mut().zip(&self.counts[given.get()]) {
            *dst = f64::from(n) / f64::from(NUM_OPPONENT_DEALS);
        }
        out
    }
}
