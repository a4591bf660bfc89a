//! Compressed reachability trees and the linear-time reversibility test.
//!
//! A node at level `i` of the reachability tree holds the RMTs of rule
//! `R(i+1)` that the cell may follow; its 0-edge and 1-edge are labeled by the
//! RMTs the rule maps to 0 and to 1. Because RMTs `k` and `k + 4` have the same
//! successors, every edge label is kept in normalized form (members in `0..=3`)
//! and a level is fully described by its set of unique normalized edge labels,
//! the [`Frontier`]. An automaton is reversible iff the tree is complete, which
//! happens iff every non-leaf edge comes from exactly two inequivalent RMTs and
//! every last-level node has exactly one effective RMT per leaf edge.

use std::fmt;

use serde::Serialize;

use crate::automaton::RuleVector;
use crate::rule::{RmtSet, Rule};

/// Largest number of unique nodes a level can hold while the tree may still be complete.
pub const MAX_UNIQUE_NODES: u32 = 4;

/// Why an automaton was found irreversible.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Reason {
    /// The first rule does not split `{0,1,2,3}` into two pairs.
    FirstCellImbalance,
    /// An interior rule maps other than two of a node's four RMTs to 0.
    UnbalancedSplit,
    /// An edge is labeled by two equivalent RMTs, leaving a two-RMT child.
    SingletonAfterNormalization,
    /// The last rule gives both effective RMTs of a node the same value.
    LastCellCollision,
}

impl Reason {
    pub fn as_str(self) -> &'static str {
        match self {
            Reason::FirstCellImbalance => "first-cell-imbalance",
            Reason::UnbalancedSplit => "unbalanced-split",
            Reason::SingletonAfterNormalization => "singleton-after-normalization",
            Reason::LastCellCollision => "last-cell-collision",
        }
    }
}

impl fmt::Display for Reason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Where the tree first became incomplete.
///
/// `level` is the tree level of the failing node, which is also the 0-based
/// index of the rule that failed. `set` is the offending RMT set: the node for
/// imbalance, the raw edge label for a normalization collapse, the effective
/// RMT pair for a last-cell collision.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Witness {
    pub level: usize,
    pub set: RmtSet,
    pub reason: Reason,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Verdict {
    pub reversible: bool,
    pub witness: Option<Witness>,
}

impl Verdict {
    pub const REVERSIBLE: Verdict = Verdict {
        reversible: true,
        witness: None,
    };

    fn irreversible(level: usize, set: RmtSet, reason: Reason) -> Self {
        Verdict {
            reversible: false,
            witness: Some(Witness { level, set, reason }),
        }
    }
}

#[derive(Serialize)]
struct VerdictRecord {
    reversible: bool,
    witness_level: Option<usize>,
    reason: Option<Reason>,
    witness_set: Option<RmtSet>,
}

impl Serialize for Verdict {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        VerdictRecord {
            reversible: self.reversible,
            witness_level: self.witness.map(|w| w.level),
            reason: self.witness.map(|w| w.reason),
            witness_set: self.witness.map(|w| w.set),
        }
        .serialize(serializer)
    }
}

/// The unique normalized edge labels leaving one level of the tree.
///
/// Stored as a bitset over the 16 possible normalized sets, so the node count
/// is a popcount and deduplication is an `or`.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Frontier(u16);

impl Frontier {
    pub const fn from_bits(bits: u16) -> Self {
        Frontier(bits)
    }

    pub const fn bits(self) -> u16 {
        self.0
    }

    pub fn from_sets<I: IntoIterator<Item = RmtSet>>(sets: I) -> Self {
        sets.into_iter()
            .fold(Frontier(0), |f, s| f.with(s.normalized()))
    }

    const fn with(self, normalized: RmtSet) -> Self {
        Frontier(self.0 | (1 << normalized.bits()))
    }

    /// Number of unique nodes on the next level.
    pub const fn len(self) -> u32 {
        self.0.count_ones()
    }

    pub const fn is_empty(self) -> bool {
        self.0 == 0
    }

    /// The edge labels, each a normalized set, in increasing mask order.
    pub fn sets(self) -> impl Iterator<Item = RmtSet> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                return None;
            }
            let code = bits.trailing_zeros() as u8;
            bits &= bits - 1;
            Some(RmtSet::from_bits(code))
        })
    }

    /// Nodes of the next level: the successors of each edge label.
    pub fn nodes(self) -> impl Iterator<Item = RmtSet> {
        self.sets().map(RmtSet::successors)
    }

    /// Edge labels produced by the first rule from the root `{0,1,2,3}`.
    pub fn first(rule: Rule) -> Result<Frontier, Witness> {
        let root = RmtSet::FIRST_CELL;
        let zeros = root.intersection(rule.zeros());
        let ones = root.intersection(rule.ones());
        if zeros.len() != ones.len() {
            return Err(Witness {
                level: 0,
                set: root,
                reason: Reason::FirstCellImbalance,
            });
        }
        Ok(Frontier::from_sets([zeros, ones]))
    }

    /// Splits every node by an interior rule and returns the next level's labels.
    /// `level` is only used to fill in the witness.
    #[inline]
    pub fn advance(self, rule: Rule, level: usize) -> Result<Frontier, Witness> {
        let mut next = Frontier(0);
        let mut bits = self.0;
        while bits != 0 {
            let code = bits.trailing_zeros() as u8;
            bits &= bits - 1;
            let node = RmtSet::from_bits(code).successors();
            let zeros = node.intersection(rule.zeros());
            if zeros.len() != 2 {
                return Err(Witness {
                    level,
                    set: node,
                    reason: Reason::UnbalancedSplit,
                });
            }
            let ones = node.intersection(rule.ones());
            for side in [zeros, ones] {
                let norm = side.normalized();
                if norm.len() == 1 {
                    return Err(Witness {
                        level,
                        set: side,
                        reason: Reason::SingletonAfterNormalization,
                    });
                }
                next = next.with(norm);
            }
        }
        assert!(
            next.len() <= MAX_UNIQUE_NODES,
            "viable level with {} unique nodes",
            next.len()
        );
        Ok(next)
    }

    /// Checks the last rule against every last-level node.
    pub fn finish(self, rule: Rule, level: usize) -> Result<(), Witness> {
        self.nodes()
            .try_for_each(|node| last_cell_check(node, rule, level))
    }
}

fn last_cell_check(node: RmtSet, rule: Rule, level: usize) -> Result<(), Witness> {
    let effective = node.intersection(RmtSet::LAST_CELL);
    if effective.intersection(rule.ones()).len() != 1 {
        return Err(Witness {
            level,
            set: effective,
            reason: Reason::LastCellCollision,
        });
    }
    Ok(())
}

impl fmt::Debug for Frontier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.sets()).finish()
    }
}

/// Successors of `node`, split by the rule's output bit: `(zero_set, one_set)`.
pub fn split_node(node: RmtSet, rule: Rule) -> (RmtSet, RmtSet) {
    let succ = node.successors();
    (
        succ.intersection(rule.zeros()),
        succ.intersection(rule.ones()),
    )
}

/// Members replaced by their equivalents in `0..=3`.
pub fn normalize(set: RmtSet) -> RmtSet {
    set.normalized()
}

/// Decides reversibility in one left-to-right pass over the rules.
pub fn identify_reversible(rv: &RuleVector) -> Verdict {
    let rules = rv.rules();
    let n = rules.len();
    if n == 1 {
        // The single cell is first and last at once: only RMTs 0 and 2 occur.
        return match last_cell_check(RmtSet::FIRST_CELL, rules[0], 0) {
            Ok(()) => Verdict::REVERSIBLE,
            Err(w) => Verdict::irreversible(w.level, w.set, w.reason),
        };
    }
    let run = || -> Result<(), Witness> {
        let mut frontier = Frontier::first(rules[0])?;
        for (i, &rule) in rules[1..n - 1].iter().enumerate() {
            frontier = frontier.advance(rule, i + 1)?;
        }
        frontier.finish(rules[n - 1], n - 1)
    };
    match run() {
        Ok(()) => Verdict::REVERSIBLE,
        Err(w) => Verdict::irreversible(w.level, w.set, w.reason),
    }
}

/// One level of the compressed tree.
///
/// `nodes` are the unique node RMT sets at this level (as raw RMTs of rule
/// `R(level+1)`); `edge_sets` are the unique normalized labels of the edges
/// leaving them. On the last level the edge labels are the single effective
/// RMTs of the leaf edges.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CompressedTreeLevel {
    pub level: usize,
    pub nodes: Vec<RmtSet>,
    pub edge_sets: Vec<RmtSet>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CompressedTree {
    pub levels: Vec<CompressedTreeLevel>,
    pub verdict: Verdict,
}

fn push_unique(sets: &mut Vec<RmtSet>, s: RmtSet) {
    if !sets.contains(&s) {
        sets.push(s);
    }
}

/// Builds the compressed tree level by level. For an irreversible automaton
/// the tree stops at the witness level, whose `edge_sets` are left empty.
pub fn compressed_tree(rv: &RuleVector) -> CompressedTree {
    let rules = rv.rules();
    let n = rules.len();
    let mut levels = Vec::with_capacity(n);
    // Edge labels entering the current level; the root has none.
    let mut labels: Vec<RmtSet> = Vec::new();
    for (level, &rule) in rules.iter().enumerate() {
        let nodes: Vec<RmtSet> = if level == 0 {
            vec![RmtSet::FIRST_CELL]
        } else {
            labels.iter().map(|s| s.successors()).collect()
        };
        let mut edge_sets = Vec::new();
        // Checks run on the whole frontier first so the witness is the one
        // identification reports.
        let failure = if level == n - 1 {
            let check = if level == 0 {
                last_cell_check(RmtSet::FIRST_CELL, rule, level)
            } else {
                Frontier::from_sets(labels.iter().copied()).finish(rule, level)
            };
            check.map(|()| {
                for node in &nodes {
                    for k in node.intersection(RmtSet::LAST_CELL).iter() {
                        edge_sets.push(RmtSet::EMPTY.insert(k));
                    }
                }
            })
        } else if level == 0 {
            Frontier::first(rule).map(|_| {
                edge_sets.push(RmtSet::FIRST_CELL.intersection(rule.zeros()));
                edge_sets.push(RmtSet::FIRST_CELL.intersection(rule.ones()));
            })
        } else {
            Frontier::from_sets(labels.iter().copied())
                .advance(rule, level)
                .map(|_| {
                    for &label in &labels {
                        let (zeros, ones) = split_node(label, rule);
                        push_unique(&mut edge_sets, zeros.normalized());
                        push_unique(&mut edge_sets, ones.normalized());
                    }
                })
        };
        if let Err(w) = failure {
            levels.push(CompressedTreeLevel {
                level,
                nodes,
                edge_sets: Vec::new(),
            });
            return CompressedTree {
                levels,
                verdict: Verdict::irreversible(w.level, w.set, w.reason),
            };
        }
        labels = edge_sets.clone();
        levels.push(CompressedTreeLevel {
            level,
            nodes,
            edge_sets,
        });
    }
    CompressedTree {
        levels,
        verdict: Verdict::REVERSIBLE,
    }
}
