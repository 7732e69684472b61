//! Coalitions as bitmasks over players `0..n`.
//!
//! Player `k` is bit `k`. Displayed and parsed 1-based, so `{1,3}` is `0b101`.

use std::cmp::Ordering;
use std::fmt;

pub const MAX_PLAYERS: usize = 20;

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Coalition(u32);

impl Coalition {
    pub const EMPTY: Coalition = Coalition(0);

    pub const fn from_bits(bits: u32) -> Self {
        Coalition(bits)
    }

    /// Builds a coalition from 0-based player indices.
    pub fn from_players(players: &[usize]) -> Self {
        Coalition(players.iter().fold(0, |acc, &p| {
            assert!(p < MAX_PLAYERS, "player index {p} out of range");
            acc | (1 << p)
        }))
    }

    pub fn grand(n: usize) -> Self {
        assert!(n <= MAX_PLAYERS);
        Coalition(((1u64 << n) - 1) as u32)
    }

    pub fn singleton(player: usize) -> Self {
        Coalition::from_players(&[player])
    }

    pub const fn bits(self) -> u32 {
        self.0
    }

    /// Position on the `2^n - 1` coalition axis (increasing bitmask, empty set removed).
    pub fn index(self) -> usize {
        debug_assert!(self.0 != 0, "the empty coalition has no axis index");
        self.0 as usize - 1
    }

    pub fn from_index(index: usize) -> Self {
        Coalition(index as u32 + 1)
    }

    pub const fn contains(self, player: usize) -> bool {
        self.0 >> player & 1 == 1
    }

    pub const fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub const fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub const fn with(self, player: usize) -> Self {
        Coalition(self.0 | 1 << player)
    }

    pub const fn without(self, player: usize) -> Self {
        Coalition(self.0 & !(1 << player))
    }

    pub const fn union(self, other: Coalition) -> Self {
        Coalition(self.0 | other.0)
    }

    pub const fn intersection(self, other: Coalition) -> Self {
        Coalition(self.0 & other.0)
    }

    pub const fn is_disjoint(self, other: Coalition) -> bool {
        self.0 & other.0 == 0
    }

    pub const fn is_subset_of(self, other: Coalition) -> bool {
        self.0 & !other.0 == 0
    }

    /// 0-based members in increasing order.
    pub fn members(self) -> impl Iterator<Item = usize> {
        let bits = self.0;
        (0..32).filter(move |&k| bits >> k & 1 == 1)
    }

    /// All subsets of `self`, including the empty set and `self`.
    pub fn subsets(self) -> impl Iterator<Item = Coalition> {
        let full = self.0;
        let mut next = Some(full);
        std::iter::from_fn(move || {
            let current = next?;
            next = if current == 0 { None } else { Some((current - 1) & full) };
            Some(Coalition(current))
        })
    }

    /// Tie-break order for most effective coalitions: smaller cardinality first,
    /// then the sorted member lists compared lexicographically.
    pub fn tie_break_cmp(self, other: Coalition) -> Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.members().cmp(other.members()))
    }

    /// Indicator vector `1_S` of length `n`.
    pub fn indicator(self, n: usize) -> Vec<bool> {
        (0..n).map(|k| self.contains(k)).collect()
    }
}

/// Non-empty coalitions of `n` players in increasing bitmask order.
pub fn nonempty(n: usize) -> impl Iterator<Item = Coalition> {
    (1..1u32 << n).map(Coalition)
}

impl fmt::Display for Coalition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (k, p) in self.members().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{}", p + 1)?;
        }
        f.write_str("}")
    }
}

impl fmt::Debug for Coalition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
