//! Rules, rule min terms (RMTs) and the bit algebra between them.
//!
//! A rule is the 8-bit truth table of one cell's next-state function. Bit `k`
//! of the code is the next state produced for RMT `k`, where the RMT is the
//! neighborhood `(left, self, right)` read as a 3-bit number.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Error;

/// An 8-bit next-state truth table, named by its decimal code.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
#[repr(transparent)]
pub struct Rule(pub u8);

/// A neighborhood triple `(left, self, right)` encoded as `0..=7`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RmtIndex(u8);

/// A subset of the eight RMTs, stored as a bitmask (bit `k` set iff RMT `k` is a member).
#[derive(Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RmtSet(u8);

/// Effective RMTs for a boundary cell are described with the same set type.
pub type RmtMask = RmtSet;

/// The 14 rules whose next-state function is an XOR/XNOR of the neighborhood.
const LINEAR_ADDITIVE: [u8; 14] = [
    15, 51, 60, 85, 90, 102, 105, 150, 153, 165, 170, 195, 204, 240,
];

/// RMT quadruples on which a balanced rule must not be constant if it is to
/// appear in a reversible automaton.
const FORBIDDEN_MONOCHROME: [RmtSet; 4] = [
    RmtSet::from_bits(0b0001_1101), // {0, 2, 3, 4}
    RmtSet::from_bits(0b1101_0001), // {0, 4, 6, 7}
    RmtSet::from_bits(0b0100_0111), // {0, 1, 2, 6}
    RmtSet::from_bits(0b1000_1011), // {0, 1, 3, 7}
];

impl RmtIndex {
    pub const fn new(value: u8) -> Option<Self> {
        if value < 8 {
            Some(RmtIndex(value))
        } else {
            None
        }
    }

    /// Builds the RMT for a neighborhood; `true` is state 1.
    pub const fn from_neighborhood(left: bool, center: bool, right: bool) -> Self {
        RmtIndex(((left as u8) << 2) | ((center as u8) << 1) | right as u8)
    }

    pub const fn value(self) -> u8 {
        self.0
    }

    /// `(left, self, right)` bits of the neighborhood.
    pub const fn neighborhood(self) -> (bool, bool, bool) {
        (self.0 & 4 != 0, self.0 & 2 != 0, self.0 & 1 != 0)
    }

    pub fn all() -> impl Iterator<Item = RmtIndex> {
        (0..8).map(RmtIndex)
    }
}

impl fmt::Display for RmtIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// RMTs of cell `i + 1` that can follow RMT `k` of cell `i`: `(2k mod 8, 2k + 1 mod 8)`.
pub const fn next_rmts(k: RmtIndex) -> (RmtIndex, RmtIndex) {
    let base = (k.0 << 1) & 7;
    (RmtIndex(base), RmtIndex(base | 1))
}

/// Canonical representative of `k` under equivalence: `k` and `k + 4` share successors.
pub const fn equivalent_rmt(k: RmtIndex) -> RmtIndex {
    RmtIndex(k.0 & 3)
}

/// The other RMT produced together with `k` by a common parent.
pub const fn sibling_rmt(k: RmtIndex) -> RmtIndex {
    RmtIndex(k.0 ^ 1)
}

impl RmtSet {
    pub const EMPTY: RmtSet = RmtSet(0);
    pub const ALL: RmtSet = RmtSet(0xFF);
    /// Effective RMTs of the first cell, whose left neighbor is the null boundary.
    pub const FIRST_CELL: RmtSet = RmtSet(0x0F);
    /// Effective RMTs of the last cell, whose right neighbor is the null boundary.
    pub const LAST_CELL: RmtSet = RmtSet(0x55);

    pub const fn from_bits(bits: u8) -> Self {
        RmtSet(bits)
    }

    pub const fn bits(self) -> u8 {
        self.0
    }

    pub const fn len(self) -> u32 {
        self.0.count_ones()
    }

    pub const fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub const fn contains(self, k: RmtIndex) -> bool {
        self.0 & (1 << k.0) != 0
    }

    pub const fn insert(self, k: RmtIndex) -> Self {
        RmtSet(self.0 | (1 << k.0))
    }

    pub const fn union(self, other: RmtSet) -> Self {
        RmtSet(self.0 | other.0)
    }

    pub const fn intersection(self, other: RmtSet) -> Self {
        RmtSet(self.0 & other.0)
    }

    pub const fn difference(self, other: RmtSet) -> Self {
        RmtSet(self.0 & !other.0)
    }

    /// Members in increasing order.
    pub fn iter(self) -> impl Iterator<Item = RmtIndex> {
        (0..8u8)
            .filter(move |k| self.0 & (1 << k) != 0)
            .map(RmtIndex)
    }

    /// Union of `next_rmts` over all members.
    pub const fn successors(self) -> RmtSet {
        // RMTs k and k + 4 share successors, so only the low nibble matters.
        let low = (self.0 | (self.0 >> 4)) & 0x0F;
        let mut out = 0u8;
        let mut k = 0;
        while k < 4 {
            if low & (1 << k) != 0 {
                out |= 0b11 << (2 * k);
            }
            k += 1;
        }
        RmtSet(out)
    }

    /// Replaces every member by its equivalent in `0..=3`, merging duplicates.
    pub const fn normalized(self) -> RmtSet {
        RmtSet((self.0 | (self.0 >> 4)) & 0x0F)
    }
}

impl FromIterator<RmtIndex> for RmtSet {
    fn from_iter<I: IntoIterator<Item = RmtIndex>>(iter: I) -> Self {
        iter.into_iter().fold(RmtSet::EMPTY, RmtSet::insert)
    }
}

impl fmt::Debug for RmtSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for RmtSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, k) in self.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{k}")?;
        }
        f.write_str("}")
    }
}

impl Serialize for RmtSet {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_seq(self.iter().map(RmtIndex::value))
    }
}

impl Rule {
    pub const fn code(self) -> u8 {
        self.0
    }

    /// Next state for RMT `k`.
    pub const fn rmt_value(self, k: RmtIndex) -> bool {
        (self.0 >> k.0) & 1 == 1
    }

    /// RMTs the rule maps to 1.
    pub const fn ones(self) -> RmtSet {
        RmtSet(self.0)
    }

    /// RMTs the rule maps to 0.
    pub const fn zeros(self) -> RmtSet {
        RmtSet(!self.0)
    }

    /// Four ones and four zeros.
    pub const fn is_balanced(self) -> bool {
        self.0.count_ones() == 4
    }

    pub const fn complement(self) -> Rule {
        Rule(!self.0)
    }

    pub fn is_linear_additive(self) -> bool {
        LINEAR_ADDITIVE.contains(&self.0)
    }

    /// Whether exactly half of `mask` maps to 1. Odd-size masks are rejected.
    pub fn is_balanced_on(self, mask: RmtMask) -> Result<bool, Error> {
        if !mask.len().is_multiple_of(2) {
            return Err(Error::OddMask(mask.bits()));
        }
        Ok(self.ones().intersection(mask).len() * 2 == mask.len())
    }

    /// Whether the rule can appear at an interior cell of a reversible automaton:
    /// balanced, and not constant on any of the four forbidden RMT quadruples.
    pub fn is_reversible(self) -> bool {
        self.is_balanced()
            && FORBIDDEN_MONOCHROME.iter().all(|quad| {
                let ones = self.ones().intersection(*quad);
                !ones.is_empty() && ones != *quad
            })
    }

    pub fn all() -> impl Iterator<Item = Rule> {
        (0..=255u8).map(Rule)
    }
}

pub const fn rmt_value(rule: Rule, k: RmtIndex) -> bool {
    rule.rmt_value(k)
}

pub const fn is_balanced(rule: Rule) -> bool {
    rule.is_balanced()
}

pub const fn complement_rule(rule: Rule) -> Rule {
    rule.complement()
}

pub fn is_linear_additive(rule: Rule) -> bool {
    rule.is_linear_additive()
}

pub fn is_balanced_on(rule: Rule, mask: RmtMask) -> Result<bool, Error> {
    rule.is_balanced_on(mask)
}

pub fn is_reversible_rule(rule: Rule) -> bool {
    rule.is_reversible()
}

impl From<u8> for Rule {
    fn from(code: u8) -> Self {
        Rule(code)
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl FromStr for Rule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
            return Err(Error::MalformedRule(s.to_string()));
        }
        match s.parse::<u32>() {
            Ok(v) if v <= 255 => Ok(Rule(v as u8)),
            Ok(v) => Err(Error::RuleOutOfRange(u64::from(v))),
            // Too many digits for u32 is still a range problem.
            Err(_) => Err(Error::RuleOutOfRange(u64::MAX)),
        }
    }
}
