//! Brute-force ground truth: the explicit state transition graph on all `2^n` states.

use std::io::{self, Write};

use rayon::prelude::*;
use serde::Serialize;

use crate::automaton::{CaState, RuleVector};
use crate::error::Error;

/// Two arrays of `2^n` entries; 24 cells is 128 MiB.
pub const MAX_ORACLE_CELLS: usize = 24;

/// Below this size the graph is built on the calling thread.
const PARALLEL_MIN_CELLS: usize = 16;

/// State `s` is the integer whose binary expansion, cell 1 first, is the configuration.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StateTransitionGraph {
    n: usize,
    successor: Vec<u32>,
    predecessor_count: Vec<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StgSummary {
    pub n: usize,
    pub bijective: bool,
    pub non_reachable: usize,
    pub max_predecessors: u32,
    pub cycle_type: Vec<usize>,
}

pub fn build_stg(rv: &RuleVector) -> Result<StateTransitionGraph, Error> {
    let n = rv.len();
    if n > MAX_ORACLE_CELLS {
        return Err(Error::TooManyCells {
            what: "the oracle",
            n,
            max: MAX_ORACLE_CELLS,
        });
    }
    let size = 1usize << n;
    let mut successor = vec![0u32; size];
    if n >= PARALLEL_MIN_CELLS {
        successor
            .par_chunks_mut(1 << 12)
            .enumerate()
            .for_each(|(chunk, out)| {
                let base = chunk << 12;
                for (i, slot) in out.iter_mut().enumerate() {
                    *slot = rv.next_index((base + i) as u64) as u32;
                }
            });
    } else {
        for (s, slot) in successor.iter_mut().enumerate() {
            *slot = rv.next_index(s as u64) as u32;
        }
    }
    let mut predecessor_count = vec![0u32; size];
    for &t in &successor {
        predecessor_count[t as usize] += 1;
    }
    Ok(StateTransitionGraph {
        n,
        successor,
        predecessor_count,
    })
}

pub fn is_bijective(stg: &StateTransitionGraph) -> bool {
    stg.is_bijective()
}

pub fn cycle_structure(stg: &StateTransitionGraph) -> Vec<usize> {
    stg.cycle_structure()
}

impl StateTransitionGraph {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.successor.len()
    }

    pub fn is_empty(&self) -> bool {
        self.successor.is_empty()
    }

    pub fn successor(&self, state: usize) -> usize {
        self.successor[state] as usize
    }

    pub fn successors(&self) -> &[u32] {
        &self.successor
    }

    pub fn predecessor_count(&self, state: usize) -> u32 {
        self.predecessor_count[state]
    }

    pub fn predecessor_counts(&self) -> &[u32] {
        &self.predecessor_count
    }

    /// Every state has exactly one predecessor.
    pub fn is_bijective(&self) -> bool {
        self.predecessor_count.iter().all(|&c| c == 1)
    }

    /// States with no predecessor.
    pub fn non_reachable(&self) -> impl Iterator<Item = usize> + '_ {
        self.predecessor_count
            .iter()
            .enumerate()
            .filter(|(_, &c)| c == 0)
            .map(|(s, _)| s)
    }

    pub fn max_predecessors(&self) -> u32 {
        self.predecessor_count.iter().copied().max().unwrap_or(0)
    }

    /// Lengths of the terminal cycles of the functional graph, ascending. For a
    /// bijection this is the cycle type of the permutation.
    pub fn cycle_structure(&self) -> Vec<usize> {
        const UNSEEN: u32 = u32::MAX;
        const DONE: u32 = u32::MAX - 1;
        // For states on the walk in progress, the position along the walk.
        let mut mark = vec![UNSEEN; self.len()];
        let mut path: Vec<u32> = Vec::new();
        let mut cycles = Vec::new();
        for start in 0..self.len() {
            if mark[start] != UNSEEN {
                continue;
            }
            path.clear();
            let mut s = start as u32;
            while mark[s as usize] == UNSEEN {
                mark[s as usize] = path.len() as u32;
                path.push(s);
                s = self.successor[s as usize];
            }
            if mark[s as usize] != DONE {
                cycles.push(path.len() - mark[s as usize] as usize);
            }
            for &p in &path {
                mark[p as usize] = DONE;
            }
        }
        cycles.sort_unstable();
        cycles
    }

    pub fn summary(&self) -> StgSummary {
        StgSummary {
            n: self.n,
            bijective: self.is_bijective(),
            non_reachable: self.non_reachable().count(),
            max_predecessors: self.max_predecessors(),
            cycle_type: self.cycle_structure(),
        }
    }

    pub fn state_label(&self, state: usize) -> String {
        CaState::from_index(self.n, state as u64)
            .map(|s| s.to_string())
            .unwrap_or_default()
    }

    /// Graphviz `digraph`, one edge per state.
    pub fn write_dot<W: Write>(&self, out: &mut W) -> io::Result<()> {
        writeln!(out, "digraph stg {{")?;
        for (s, &t) in self.successor.iter().enumerate() {
            writeln!(
                out,
                "  \"{}\" -> \"{}\";",
                self.state_label(s),
                self.state_label(t as usize)
            )?;
        }
        writeln!(out, "}}")
    }

    pub fn to_dot(&self) -> String {
        let mut buf = Vec::new();
        self.write_dot(&mut buf)
            .expect("writing to a Vec cannot fail");
        String::from_utf8(buf).expect("labels are ASCII")
    }
}
