//! Constructing reversible automata, and exhaustive counting for small sizes.
//!
//! Two constructions are provided. [`synthesize_tree`] grows the compressed
//! reachability tree directly: at every cell it enumerates the rules that split
//! all current nodes two-and-two without an equivalence collapse and picks one.
//! [`synthesize_classwalk`] instead walks the derived class tables. Both make
//! their random choices through a [`RuleChooser`], so a run can be replayed
//! from a seed or scripted rule by rule.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::automaton::RuleVector;
use crate::classes::{canonicalize_boundary_rule, ClassTables, Position};
use crate::error::Error;
use crate::reachability::Frontier;
use crate::rule::{RmtSet, Rule};

/// Effective RMTs of a one-cell automaton: both neighbors are null.
const SINGLE_CELL: RmtSet = RmtSet::FIRST_CELL.intersection(RmtSet::LAST_CELL);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Tree,
    Classwalk,
}

impl FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "tree" => Ok(Method::Tree),
            "classwalk" => Ok(Method::Classwalk),
            other => Err(format!(
                "unknown method {other:?}, expected tree or classwalk"
            )),
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Tree => "tree",
            Method::Classwalk => "classwalk",
        })
    }
}

/// Source of the choices a synthesizer makes.
pub trait RuleChooser {
    /// Picks the rule for `cell` (0-based). `candidates` is sorted and non-empty.
    /// On boundary cells the candidates are canonical (don't-care RMTs zero);
    /// the returned rule may set those don't-care bits.
    fn choose(&mut self, cell: usize, candidates: &[Rule]) -> Rule;
}

/// Uniform choices from an RNG, don't-care bits optionally randomized.
#[derive(Debug)]
pub struct RandomChooser<R> {
    rng: R,
    randomize_dont_cares: bool,
    n: usize,
}

impl<R: Rng> RandomChooser<R> {
    pub fn new(rng: R, n: usize, randomize_dont_cares: bool) -> Self {
        RandomChooser {
            rng,
            randomize_dont_cares,
            n,
        }
    }

    fn dont_cares(&self, cell: usize) -> u8 {
        let mut care = 0xFFu8;
        if cell == 0 {
            care &= RmtSet::FIRST_CELL.bits();
        }
        if cell + 1 == self.n {
            care &= RmtSet::LAST_CELL.bits();
        }
        !care
    }
}

impl<R: Rng> RuleChooser for RandomChooser<R> {
    fn choose(&mut self, cell: usize, candidates: &[Rule]) -> Rule {
        let pick = candidates[self.rng.gen_range(0..candidates.len())];
        let free = self.dont_cares(cell);
        if self.randomize_dont_cares && free != 0 {
            Rule(pick.0 | (self.rng.gen::<u8>() & free))
        } else {
            pick
        }
    }
}

/// Replays a fixed list of rules, one per cell.
#[derive(Clone, Debug)]
pub struct ScriptedChooser(pub Vec<Rule>);

impl RuleChooser for ScriptedChooser {
    fn choose(&mut self, cell: usize, _candidates: &[Rule]) -> Rule {
        self.0[cell]
    }
}

/// Whether `pick` is an allowed choice: boundary picks are judged by their canonical form.
fn accept(cell: usize, n: usize, pick: Rule, candidates: &[Rule]) -> Result<Rule, Error> {
    let mut canonical = pick;
    if cell == 0 {
        canonical = canonicalize_boundary_rule(canonical, Position::First);
    }
    if cell + 1 == n {
        canonical = canonicalize_boundary_rule(canonical, Position::Last);
    }
    if candidates.binary_search(&canonical).is_ok() {
        Ok(pick)
    } else {
        Err(Error::InvalidChoice { cell, rule: pick.0 })
    }
}

fn first_candidates() -> Vec<Rule> {
    (0..16u8)
        .map(Rule)
        .filter(|r| r.0.count_ones() == 2)
        .collect()
}

/// Grows the reachability tree cell by cell.
///
/// Interior candidates depend only on the current frontier; there are at most
/// a handful of distinct frontiers, so their candidate lists are cached and
/// each cell costs constant time.
pub fn synthesize_tree_with<C: RuleChooser>(
    n: usize,
    chooser: &mut C,
) -> Result<RuleVector, Error> {
    if n == 0 {
        return Err(Error::Empty);
    }
    if n == 1 {
        let candidates: Vec<Rule> = (0..=255u8)
            .map(Rule)
            .filter(|r| r.0 & !SINGLE_CELL.bits() == 0 && r.ones().len() == 1)
            .collect();
        let pick = accept(0, 1, chooser.choose(0, &candidates), &candidates)?;
        return RuleVector::new(vec![pick]);
    }

    let mut rules = Vec::with_capacity(n);
    let first = first_candidates();
    let pick = accept(0, n, chooser.choose(0, &first), &first)?;
    let mut frontier = Frontier::first(pick).expect("first candidates are balanced");
    rules.push(pick);

    let mut cache: Vec<(Frontier, Vec<Rule>)> = Vec::new();
    for cell in 1..n - 1 {
        let pos = match cache.iter().position(|(f, _)| *f == frontier) {
            Some(pos) => pos,
            None => {
                let candidates = Rule::all()
                    .filter(|r| frontier.advance(*r, cell).is_ok())
                    .collect();
                cache.push((frontier, candidates));
                cache.len() - 1
            }
        };
        let candidates = &cache[pos].1;
        let pick = accept(cell, n, chooser.choose(cell, candidates), candidates)?;
        frontier = frontier
            .advance(pick, cell)
            .expect("candidate rules advance");
        rules.push(pick);
    }

    let last: Vec<Rule> = Rule::all()
        .filter(|r| canonicalize_boundary_rule(*r, Position::Last) == *r)
        .filter(|r| frontier.finish(*r, n - 1).is_ok())
        .collect();
    rules.push(accept(n - 1, n, chooser.choose(n - 1, &last), &last)?);
    RuleVector::new(rules)
}

/// Walks the class tables: first rule, then one member rule per interior cell
/// (the class advances with each pick), then a last rule for the final class.
pub fn synthesize_classwalk_with<C: RuleChooser>(
    n: usize,
    chooser: &mut C,
) -> Result<RuleVector, Error> {
    if n < 2 {
        return Err(Error::TooFewCells {
            what: "class-walk synthesis",
            n,
            min: 2,
        });
    }
    let tables = ClassTables::get();
    let mut rules = Vec::with_capacity(n);

    let first: Vec<Rule> = tables.first_rules().iter().map(|(r, _)| *r).collect();
    let pick = accept(0, n, chooser.choose(0, &first), &first)?;
    let canonical = canonicalize_boundary_rule(pick, Position::First);
    let mut class = tables
        .first_rules()
        .iter()
        .find(|(r, _)| *r == canonical)
        .map(|(_, c)| *c)
        .expect("accepted first rule is in the table");
    rules.push(pick);

    for cell in 1..n - 1 {
        let members = tables.members(class);
        let pick = accept(cell, n, chooser.choose(cell, members), members)?;
        class = tables.next(class, pick).ok_or(Error::Unclassified {
            rule: pick.0,
            class: class.name(),
        })?;
        rules.push(pick);
    }

    let last = tables.last_rules(class);
    rules.push(accept(n - 1, n, chooser.choose(n - 1, last), last)?);
    RuleVector::new(rules)
}

pub fn synthesize_tree<R: Rng>(n: usize, rng: &mut R) -> Result<RuleVector, Error> {
    synthesize_tree_with(n, &mut RandomChooser::new(rng, n, false))
}

pub fn synthesize_classwalk<R: Rng>(n: usize, rng: &mut R) -> Result<RuleVector, Error> {
    synthesize_classwalk_with(n, &mut RandomChooser::new(rng, n, false))
}

/// A reproducible synthesis run.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SynthesisRequest {
    pub n: usize,
    pub seed: u64,
    pub method: Method,
    pub randomize_dont_cares: bool,
}

impl SynthesisRequest {
    pub fn new(n: usize, seed: u64, method: Method) -> Self {
        SynthesisRequest {
            n,
            seed,
            method,
            randomize_dont_cares: false,
        }
    }

    /// Same request, same rule vector: the RNG is ChaCha8 seeded from `seed`.
    pub fn run(&self) -> Result<RuleVector, Error> {
        let rng = ChaCha8Rng::seed_from_u64(self.seed);
        let mut chooser = RandomChooser::new(rng, self.n, self.randomize_dont_cares);
        match self.method {
            Method::Tree => synthesize_tree_with(self.n, &mut chooser),
            Method::Classwalk => synthesize_classwalk_with(self.n, &mut chooser),
        }
    }
}

/// Which rules each cell ranges over when counting.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CountDomain {
    /// All 256 rules at every cell.
    All,
    /// Only rules passing [`Rule::is_reversible`], at every cell.
    Reversible,
    /// Boundary cells range over canonical rules only (first cell: upper
    /// nibble zero; last cell: odd RMTs zero); interior cells over all 256.
    /// A single cell is counted as a first cell.
    Canonical,
}

impl FromStr for CountDomain {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "all" => Ok(CountDomain::All),
            "reversible" => Ok(CountDomain::Reversible),
            "canonical" => Ok(CountDomain::Canonical),
            other => Err(format!(
                "unknown domain {other:?}, expected all, reversible or canonical"
            )),
        }
    }
}

impl fmt::Display for CountDomain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CountDomain::All => "all",
            CountDomain::Reversible => "reversible",
            CountDomain::Canonical => "canonical",
        })
    }
}

/// Largest `n` accepted by [`count_reversible`].
pub const MAX_COUNT_CELLS: usize = 4;

fn domain_rules(domain: CountDomain, position: Option<Position>) -> Vec<Rule> {
    match (domain, position) {
        (CountDomain::All, _) => Rule::all().collect(),
        (CountDomain::Reversible, _) => Rule::all().filter(|r| r.is_reversible()).collect(),
        (CountDomain::Canonical, None) => Rule::all().collect(),
        (CountDomain::Canonical, Some(p)) => Rule::all()
            .filter(|r| canonicalize_boundary_rule(*r, p) == *r)
            .collect(),
    }
}

/// Counts reversible rule vectors of length `n` by identifying every vector in
/// the domain. Vectors sharing a failed prefix are rejected together.
pub fn count_reversible(n: usize, domain: CountDomain) -> Result<u64, Error> {
    if n == 0 {
        return Err(Error::Empty);
    }
    if n > MAX_COUNT_CELLS {
        return Err(Error::TooManyCells {
            what: "exhaustive counting",
            n,
            max: MAX_COUNT_CELLS,
        });
    }
    let first = domain_rules(domain, Some(Position::First));
    if n == 1 {
        let count = first
            .iter()
            .filter(|r| {
                crate::reachability::identify_reversible(&RuleVector::from([r.0])).reversible
            })
            .count();
        return Ok(count as u64);
    }
    let interior = domain_rules(domain, None);
    let last = domain_rules(domain, Some(Position::Last));

    fn extend(frontier: Frontier, cell: usize, n: usize, interior: &[Rule], last: &[Rule]) -> u64 {
        if cell == n - 1 {
            return last
                .iter()
                .filter(|r| frontier.finish(**r, cell).is_ok())
                .count() as u64;
        }
        interior
            .iter()
            .filter_map(|r| frontier.advance(*r, cell).ok())
            .map(|next| extend(next, cell + 1, n, interior, last))
            .sum()
    }

    Ok(first
        .iter()
        .filter_map(|r| Frontier::first(*r).ok())
        .map(|f| extend(f, 1, n, &interior, &last))
        .sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reachability::identify_reversible;

    fn rv(codes: &[u8]) -> RuleVector {
        RuleVector::from(codes)
    }

    fn script(codes: &[u8]) -> ScriptedChooser {
        ScriptedChooser(codes.iter().copied().map(Rule).collect())
    }

    #[test]
    fn tree_walkthrough_replay() {
        // First rule: RMTs 0, 2 -> 0 and 1, 3 -> 1 is rule 10; then 15, 85, 5.
        let out = synthesize_tree_with(4, &mut script(&[10, 15, 85, 5])).unwrap();
        assert_eq!(out, rv(&[10, 15, 85, 5]));
        assert!(identify_reversible(&out).reversible);
        // Canonical boundary forms of 90 and 15 on the first and last cell.
        assert_eq!(
            canonicalize_boundary_rule(Rule(90), Position::First),
            Rule(10)
        );
        assert_eq!(
            canonicalize_boundary_rule(Rule(15), Position::Last),
            Rule(5)
        );

        let out = synthesize_tree_with(4, &mut script(&[9, 15, 85, 5])).unwrap();
        assert_eq!(out, rv(&[9, 15, 85, 5]));
        assert!(identify_reversible(&out).reversible);
        assert!(identify_reversible(&rv(&[90, 15, 85, 15])).reversible);
    }

    #[test]
    fn classwalk_replay() {
        let out = synthesize_classwalk_with(4, &mut script(&[9, 177, 170, 65])).unwrap();
        assert_eq!(out, rv(&[9, 177, 170, 65]));
        assert!(identify_reversible(&out).reversible);
        let tables = ClassTables::get();
        let class2 = tables
            .first_rules()
            .iter()
            .find(|(r, _)| r.0 == 9)
            .unwrap()
            .1;
        assert_eq!(class2, crate::classes::RuleClass::III);
        assert_eq!(
            tables.next(class2, Rule(177)),
            Some(crate::classes::RuleClass::V)
        );
    }

    #[test]
    fn invalid_choices_are_rejected() {
        let err = synthesize_tree_with(4, &mut script(&[7, 15, 85, 5])).unwrap_err();
        assert_eq!(err, Error::InvalidChoice { cell: 0, rule: 7 });
        let err = synthesize_classwalk_with(4, &mut script(&[9, 60, 170, 65])).unwrap_err();
        assert_eq!(err, Error::InvalidChoice { cell: 1, rule: 60 });
        // Don't-care bits on a boundary cell are fine.
        assert!(synthesize_tree_with(4, &mut script(&[90, 15, 85, 15])).is_ok());
    }

    #[test]
    fn degenerate_sizes() {
        for n in 1..=2 {
            for seed in 0..50 {
                let out = SynthesisRequest::new(n, seed, Method::Tree).run().unwrap();
                assert!(identify_reversible(&out).reversible, "{out}");
            }
        }
        assert!(SynthesisRequest::new(2, 3, Method::Classwalk).run().is_ok());
        assert!(SynthesisRequest::new(1, 3, Method::Classwalk)
            .run()
            .is_err());
        assert_eq!(
            SynthesisRequest::new(0, 3, Method::Tree).run(),
            Err(Error::Empty)
        );
    }

    #[test]
    fn canonical_boundaries_by_default() {
        for seed in 0..100 {
            for method in [Method::Tree, Method::Classwalk] {
                let out = SynthesisRequest::new(6, seed, method).run().unwrap();
                assert!(out.first().0 < 16);
                assert_eq!(out.last().0 & 0xAA, 0);
            }
        }
    }

    #[test]
    fn randomized_dont_cares_stay_reversible() {
        let mut seen_upper = false;
        for seed in 0..200 {
            let mut req = SynthesisRequest::new(5, seed, Method::Tree);
            req.randomize_dont_cares = true;
            let out = req.run().unwrap();
            seen_upper |= out.first().0 >= 16;
            assert!(identify_reversible(&out).reversible);
        }
        assert!(seen_upper);
    }

    #[test]
    fn small_counts() {
        assert_eq!(count_reversible(1, CountDomain::Canonical), Ok(8));
        // RMTs 0 and 2 must differ: half of all rules.
        assert_eq!(count_reversible(1, CountDomain::All), Ok(128));
        assert!(count_reversible(5, CountDomain::All).is_err());
        assert_eq!(count_reversible(0, CountDomain::All), Err(Error::Empty));
    }

    #[test]
    fn parse_names() {
        assert_eq!("tree".parse::<Method>(), Ok(Method::Tree));
        assert_eq!("classwalk".parse::<Method>(), Ok(Method::Classwalk));
        assert!("walk".parse::<Method>().is_err());
        assert_eq!(
            "canonical".parse::<CountDomain>(),
            Ok(CountDomain::Canonical)
        );
    }
}
