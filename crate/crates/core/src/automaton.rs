//! Null-boundary hybrid automata: rule vectors, states and one-step evolution.

use std::fmt;
use std::str::FromStr;

use bitvec::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::rule::{RmtIndex, Rule};

/// Configuration of an `n`-cell automaton. Index 0 is cell 1, the leftmost cell.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CaState {
    bits: BitVec<u64, Msb0>,
}

/// One rule per cell, cell 1 first.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<Rule>", into = "Vec<Rule>")]
pub struct RuleVector {
    rules: Vec<Rule>,
}

impl CaState {
    pub fn zeros(n: usize) -> Result<Self, Error> {
        if n == 0 {
            return Err(Error::Empty);
        }
        Ok(CaState {
            bits: bitvec![u64, Msb0; 0; n],
        })
    }

    pub fn from_bits<I: IntoIterator<Item = bool>>(bits: I) -> Result<Self, Error> {
        let bits: BitVec<u64, Msb0> = bits.into_iter().collect();
        if bits.is_empty() {
            return Err(Error::Empty);
        }
        Ok(CaState { bits })
    }

    /// State whose binary expansion, cell 1 most significant, is `index`.
    pub fn from_index(n: usize, index: u64) -> Result<Self, Error> {
        if n == 0 {
            return Err(Error::Empty);
        }
        if n > 64 {
            return Err(Error::TooManyCells {
                what: "indexed states",
                n,
                max: 64,
            });
        }
        Self::from_bits((0..n).map(|i| (index >> (n - 1 - i)) & 1 == 1))
    }

    /// Inverse of [`CaState::from_index`]; `None` beyond 64 cells.
    pub fn to_index(&self) -> Option<u64> {
        if self.len() > 64 {
            return None;
        }
        Some(self.bits.iter().fold(0u64, |acc, b| (acc << 1) | *b as u64))
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    /// State of cell `i` (0-indexed).
    pub fn get(&self, i: usize) -> Option<bool> {
        self.bits.get(i).map(|b| *b)
    }

    pub fn set(&mut self, i: usize, value: bool) {
        self.bits.set(i, value);
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        self.bits.iter().by_vals()
    }
}

impl fmt::Display for CaState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in self.iter() {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for CaState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CaState({self})")
    }
}

impl FromStr for CaState {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let bits = s
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                _ => Err(Error::MalformedState(s.to_string())),
            })
            .collect::<Result<Vec<_>, _>>()?;
        if bits.is_empty() {
            return Err(Error::MalformedState(s.to_string()));
        }
        Self::from_bits(bits)
    }
}

impl Serialize for CaState {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl RuleVector {
    pub fn new(rules: Vec<Rule>) -> Result<Self, Error> {
        if rules.is_empty() {
            return Err(Error::Empty);
        }
        Ok(RuleVector { rules })
    }

    /// `n` copies of one rule.
    pub fn uniform(rule: Rule, n: usize) -> Result<Self, Error> {
        Self::new(vec![rule; n])
    }

    pub fn len(&self) -> usize {
        self.rules.len()
    }

    /// Always false; kept for the `len`/`is_empty` pair.
    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    pub fn first(&self) -> Rule {
        self.rules[0]
    }

    pub fn last(&self) -> Rule {
        self.rules[self.rules.len() - 1]
    }

    /// Next configuration, reading each neighborhood explicitly with zero padding.
    pub fn next_state(&self, state: &CaState) -> Result<CaState, Error> {
        let n = self.len();
        if state.len() != n {
            return Err(Error::LengthMismatch {
                rules: n,
                state: state.len(),
            });
        }
        let cell = |i: isize| -> bool {
            if i < 0 {
                false
            } else {
                state.get(i as usize).unwrap_or(false)
            }
        };
        let next = (0..n).map(|i| {
            let i = i as isize;
            let rmt = RmtIndex::from_neighborhood(cell(i - 1), cell(i), cell(i + 1));
            self.rules[i as usize].rmt_value(rmt)
        });
        CaState::from_bits(next)
    }

    /// Next state on packed indices (cell 1 most significant), using the sliding
    /// 3-bit window: the window of cell `i + 1` is the window of cell `i` shifted
    /// left by one with the next cell's bit appended.
    ///
    /// Requires `self.len() <= 64`.
    #[inline]
    pub fn next_index(&self, index: u64) -> u64 {
        let n = self.len();
        debug_assert!(n <= 64);
        let bit = |i: usize| -> u64 {
            if i < n {
                (index >> (n - 1 - i)) & 1
            } else {
                0
            }
        };
        let mut window = (bit(0) << 1) | bit(1);
        let mut out = 0u64;
        for (i, rule) in self.rules.iter().enumerate() {
            out = (out << 1) | ((rule.0 as u64 >> window) & 1);
            window = ((window << 1) | bit(i + 2)) & 7;
        }
        out
    }

    /// `[s0, next(s0), ...]`, `steps + 1` states in total.
    pub fn evolve(&self, start: &CaState, steps: usize) -> Result<Vec<CaState>, Error> {
        if start.len() != self.len() {
            return Err(Error::LengthMismatch {
                rules: self.len(),
                state: start.len(),
            });
        }
        let mut states = Vec::with_capacity(steps + 1);
        states.push(start.clone());
        for _ in 0..steps {
            let next = self.next_state(states.last().unwrap())?;
            states.push(next);
        }
        Ok(states)
    }

    /// Every rule complemented.
    pub fn complemented(&self) -> RuleVector {
        RuleVector {
            rules: self.rules.iter().map(|r| r.complement()).collect(),
        }
    }
}

pub fn next_state(rv: &RuleVector, state: &CaState) -> Result<CaState, Error> {
    rv.next_state(state)
}

pub fn evolve(rv: &RuleVector, start: &CaState, steps: usize) -> Result<Vec<CaState>, Error> {
    rv.evolve(start, steps)
}

pub fn uniform(rule: Rule, n: usize) -> Result<RuleVector, Error> {
    RuleVector::uniform(rule, n)
}

impl TryFrom<Vec<Rule>> for RuleVector {
    type Error = Error;

    fn try_from(rules: Vec<Rule>) -> Result<Self, Self::Error> {
        RuleVector::new(rules)
    }
}

impl From<RuleVector> for Vec<Rule> {
    fn from(rv: RuleVector) -> Self {
        rv.rules
    }
}

impl fmt::Display for RuleVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, r) in self.rules.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{r}")?;
        }
        Ok(())
    }
}

impl FromStr for RuleVector {
    type Err = Error;

    /// Comma-separated decimals, whitespace allowed: `"90, 15,85,15"`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.trim().is_empty() {
            return Err(Error::Empty);
        }
        let rules = s
            .split(',')
            .map(str::parse)
            .collect::<Result<Vec<Rule>, _>>()?;
        RuleVector::new(rules)
    }
}

impl From<&[u8]> for RuleVector {
    /// Panics on an empty slice.
    fn from(codes: &[u8]) -> Self {
        RuleVector::new(codes.iter().copied().map(Rule).collect()).expect("non-empty rule vector")
    }
}

impl<const N: usize> From<[u8; N]> for RuleVector {
    fn from(codes: [u8; N]) -> Self {
        RuleVector::from(&codes[..])
    }
}
