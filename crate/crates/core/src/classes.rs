//! The six classes of reversible rules and the transitions between them.
//!
//! In the reachability tree of a reversible automaton every non-leaf node holds
//! four RMTs made of two sibling pairs, and a level holds two or four unique
//! nodes. Sibling pairs can be grouped into two complementary nodes in three
//! ways (classes I, II, III); a four-node level combines two of those
//! organizations (IV = I+II, V = I+III, VI = II+III). The class of a cell is
//! the organization of the level its rule reads, which fixes both the rules
//! that may be placed there and the class of the following cell.
//!
//! Every table here is derived from those node sets alone. The published
//! tables in [`crate::reference`] are only compared against, see
//! [`reference_checks`].

use std::fmt;
use std::sync::OnceLock;

use serde::Serialize;

use crate::error::Error;
use crate::reference;
use crate::rule::{RmtSet, Rule};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum RuleClass {
    I,
    II,
    III,
    IV,
    V,
    VI,
}

const ORG_I: [RmtSet; 2] = [RmtSet::from_bits(0x0F), RmtSet::from_bits(0xF0)];
const ORG_II: [RmtSet; 2] = [RmtSet::from_bits(0x33), RmtSet::from_bits(0xCC)];
const ORG_III: [RmtSet; 2] = [RmtSet::from_bits(0xC3), RmtSet::from_bits(0x3C)];

const NODES_IV: [RmtSet; 4] = [ORG_I[0], ORG_I[1], ORG_II[0], ORG_II[1]];
const NODES_V: [RmtSet; 4] = [ORG_I[0], ORG_I[1], ORG_III[0], ORG_III[1]];
const NODES_VI: [RmtSet; 4] = [ORG_II[0], ORG_II[1], ORG_III[0], ORG_III[1]];

impl RuleClass {
    pub const ALL: [RuleClass; 6] = [
        RuleClass::I,
        RuleClass::II,
        RuleClass::III,
        RuleClass::IV,
        RuleClass::V,
        RuleClass::VI,
    ];

    pub const fn name(self) -> &'static str {
        match self {
            RuleClass::I => "I",
            RuleClass::II => "II",
            RuleClass::III => "III",
            RuleClass::IV => "IV",
            RuleClass::V => "V",
            RuleClass::VI => "VI",
        }
    }

    const fn index(self) -> usize {
        self as usize
    }

    /// The unique node RMT sets of a level in this class.
    pub const fn node_sets(self) -> &'static [RmtSet] {
        match self {
            RuleClass::I => &ORG_I,
            RuleClass::II => &ORG_II,
            RuleClass::III => &ORG_III,
            RuleClass::IV => &NODES_IV,
            RuleClass::V => &NODES_V,
            RuleClass::VI => &NODES_VI,
        }
    }

    /// The class whose node sets are exactly `nodes`, order and repeats ignored.
    pub fn from_node_sets(nodes: &[RmtSet]) -> Option<RuleClass> {
        let mut unique: Vec<RmtSet> = nodes.to_vec();
        unique.sort();
        unique.dedup();
        RuleClass::ALL.into_iter().find(|c| {
            let mut own = c.node_sets().to_vec();
            own.sort();
            own == unique
        })
    }
}

impl fmt::Display for RuleClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for RuleClass {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        RuleClass::ALL
            .into_iter()
            .find(|c| c.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| format!("unknown rule class {s:?}"))
    }
}

/// Splits one node two-and-two without putting an equivalent pair on one side.
/// Returns the `(zero, one)` halves.
fn valid_split(node: RmtSet, rule: Rule) -> Option<(RmtSet, RmtSet)> {
    let zeros = node.intersection(rule.zeros());
    let ones = node.intersection(rule.ones());
    let ok = zeros.len() == 2
        && ones.len() == 2
        && zeros.normalized().len() == 2
        && ones.normalized().len() == 2;
    ok.then_some((zeros, ones))
}

fn is_member(class: RuleClass, rule: Rule) -> bool {
    class
        .node_sets()
        .iter()
        .all(|&node| valid_split(node, rule).is_some())
}

/// Child nodes of every node of `class` under `rule`, or `None` for a non-member.
fn child_nodes(class: RuleClass, rule: Rule) -> Option<Vec<RmtSet>> {
    let mut children = Vec::with_capacity(8);
    for &node in class.node_sets() {
        let (zeros, ones) = valid_split(node, rule)?;
        children.push(zeros.successors());
        children.push(ones.successors());
    }
    Some(children)
}

/// Boundary cell of a null-boundary automaton.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Position {
    First,
    Last,
}

/// Zeroes the RMTs a boundary cell can never read: 4..=7 for the first cell,
/// the odd ones for the last.
pub const fn canonicalize_boundary_rule(rule: Rule, position: Position) -> Rule {
    match position {
        Position::First => Rule(rule.0 & RmtSet::FIRST_CELL.bits()),
        Position::Last => Rule(rule.0 & RmtSet::LAST_CELL.bits()),
    }
}

/// All class tables, derived once.
#[derive(Debug)]
pub struct ClassTables {
    members: [Vec<Rule>; 6],
    transitions: [[Option<RuleClass>; 256]; 6],
    first: Vec<(Rule, RuleClass)>,
    last: [Vec<Rule>; 6],
    /// Member rules whose child nodes match no class. Empty when the class system is closed.
    unclassified: Vec<(RuleClass, Rule)>,
}

impl ClassTables {
    fn derive() -> Self {
        let mut members: [Vec<Rule>; 6] = Default::default();
        let mut transitions = [[None; 256]; 6];
        let mut unclassified = Vec::new();
        for class in RuleClass::ALL {
            for rule in Rule::all() {
                let Some(children) = child_nodes(class, rule) else {
                    continue;
                };
                members[class.index()].push(rule);
                match RuleClass::from_node_sets(&children) {
                    Some(next) => transitions[class.index()][rule.0 as usize] = Some(next),
                    None => unclassified.push((class, rule)),
                }
            }
        }

        let root = RmtSet::FIRST_CELL;
        let first = (0..16u8)
            .map(Rule)
            .filter_map(|rule| {
                let zeros = root.intersection(rule.zeros());
                let ones = root.intersection(rule.ones());
                if zeros.len() != 2 {
                    return None;
                }
                RuleClass::from_node_sets(&[zeros.successors(), ones.successors()])
                    .map(|c| (rule, c))
            })
            .collect();

        let last = RuleClass::ALL.map(|class| {
            Rule::all()
                .filter(|r| canonicalize_boundary_rule(*r, Position::Last) == *r)
                .filter(|r| r.is_balanced_on(RmtSet::LAST_CELL).unwrap_or(false))
                .filter(|r| {
                    class.node_sets().iter().all(|node| {
                        node.intersection(RmtSet::LAST_CELL)
                            .intersection(r.ones())
                            .len()
                            == 1
                    })
                })
                .collect()
        });

        ClassTables {
            members,
            transitions,
            first,
            last,
            unclassified,
        }
    }

    pub fn get() -> &'static ClassTables {
        static TABLES: OnceLock<ClassTables> = OnceLock::new();
        TABLES.get_or_init(ClassTables::derive)
    }

    /// Sorted member rules.
    pub fn members(&self, class: RuleClass) -> &[Rule] {
        &self.members[class.index()]
    }

    pub fn contains(&self, class: RuleClass, rule: Rule) -> bool {
        self.members[class.index()].binary_search(&rule).is_ok()
    }

    /// Class of the next cell, or `None` when `rule` is not a member of `class`.
    #[inline]
    pub fn next(&self, class: RuleClass, rule: Rule) -> Option<RuleClass> {
        self.transitions[class.index()][rule.0 as usize]
    }

    pub fn first_rules(&self) -> &[(Rule, RuleClass)] {
        &self.first
    }

    pub fn last_rules(&self, class: RuleClass) -> &[Rule] {
        &self.last[class.index()]
    }

    pub fn unclassified(&self) -> &[(RuleClass, Rule)] {
        &self.unclassified
    }
}

pub fn rules_of_class(class: RuleClass) -> Vec<Rule> {
    ClassTables::get().members(class).to_vec()
}

/// Member of all six classes.
pub fn is_complete_rule(rule: Rule) -> bool {
    RuleClass::ALL.into_iter().all(|c| is_member(c, rule))
}

pub fn next_class(class: RuleClass, rule: Rule) -> Result<RuleClass, Error> {
    let tables = ClassTables::get();
    match tables.next(class, rule) {
        Some(next) => Ok(next),
        None if tables.contains(class, rule) => Err(Error::Unclassified {
            rule: rule.0,
            class: class.name(),
        }),
        None => Err(Error::NotInClass {
            rule: rule.0,
            class: class.name(),
        }),
    }
}

/// First-cell rules balanced over `{0,1,2,3}` (upper nibble zero) with the class of cell 2.
pub fn first_rule_options() -> Vec<(Rule, RuleClass)> {
    ClassTables::get().first_rules().to_vec()
}

/// Canonical last-cell rules that complete a tree whose last level is in `class`.
pub fn last_rule_options(class: RuleClass) -> Vec<Rule> {
    ClassTables::get().last_rules(class).to_vec()
}

/// One row of a derived table next to the reference row.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TableCheck {
    pub table: &'static str,
    pub row: String,
    pub derived: Vec<u8>,
    pub expected: Vec<u8>,
}

impl TableCheck {
    fn new(table: &'static str, row: String, mut derived: Vec<u8>, mut expected: Vec<u8>) -> Self {
        derived.sort_unstable();
        expected.sort_unstable();
        TableCheck {
            table,
            row,
            derived,
            expected,
        }
    }

    pub fn matches(&self) -> bool {
        self.derived == self.expected
    }

    /// Expected but not derived.
    pub fn missing(&self) -> Vec<u8> {
        self.expected
            .iter()
            .filter(|r| !self.derived.contains(r))
            .copied()
            .collect()
    }

    /// Derived but not expected.
    pub fn extra(&self) -> Vec<u8> {
        self.derived
            .iter()
            .filter(|r| !self.expected.contains(r))
            .copied()
            .collect()
    }

    /// Named diagnostic for a mismatched row; `None` when the row matches.
    pub fn diagnostic(&self) -> Option<String> {
        (!self.matches()).then(|| {
            format!(
                "table {} row {}: missing {:?}, unexpected {:?}",
                self.table,
                self.row,
                self.missing(),
                self.extra()
            )
        })
    }
}

fn codes(rules: &[Rule]) -> Vec<u8> {
    rules.iter().map(|r| r.0).collect()
}

/// Compares every derived table with its reference fixture.
///
/// Tables: `reversible` and `balanced-irreversible` rule lists, `classes`
/// (one row per class), `transitions` (one row per `from->to` pair, plus an
/// `unclassified` row that must stay empty), `first-rules` (per class of cell 2)
/// and `last-rules` (per class).
pub fn reference_checks() -> Vec<TableCheck> {
    let tables = ClassTables::get();
    let mut checks = Vec::new();

    checks.push(TableCheck::new(
        "reversible",
        "all".into(),
        Rule::all()
            .filter(|r| r.is_reversible())
            .map(|r| r.0)
            .collect(),
        reference::REVERSIBLE_RULES.to_vec(),
    ));
    checks.push(TableCheck::new(
        "balanced-irreversible",
        "all".into(),
        Rule::all()
            .filter(|r| r.is_balanced() && !r.is_reversible())
            .map(|r| r.0)
            .collect(),
        reference::BALANCED_IRREVERSIBLE_RULES.to_vec(),
    ));

    for (class, expected) in reference::CLASS_MEMBERS {
        checks.push(TableCheck::new(
            "classes",
            class.name().into(),
            codes(tables.members(class)),
            expected.to_vec(),
        ));
    }

    for from in RuleClass::ALL {
        for to in RuleClass::ALL {
            let derived: Vec<u8> = tables
                .members(from)
                .iter()
                .filter(|&&r| tables.next(from, r) == Some(to))
                .map(|r| r.0)
                .collect();
            let expected: Vec<u8> = reference::CLASS_TRANSITIONS
                .iter()
                .filter(|(f, _, t)| *f == from && *t == to)
                .flat_map(|(_, rules, _)| rules.iter().copied())
                .collect();
            if derived.is_empty() && expected.is_empty() {
                continue;
            }
            checks.push(TableCheck::new(
                "transitions",
                format!("{from}->{to}"),
                derived,
                expected,
            ));
        }
    }
    checks.push(TableCheck::new(
        "transitions",
        "unclassified".into(),
        tables.unclassified().iter().map(|(_, r)| r.0).collect(),
        Vec::new(),
    ));

    for (expected, class) in reference::FIRST_RULES {
        let derived = tables
            .first_rules()
            .iter()
            .filter(|(_, c)| *c == class)
            .map(|(r, _)| r.0)
            .collect();
        checks.push(TableCheck::new(
            "first-rules",
            class.name().into(),
            derived,
            expected.to_vec(),
        ));
    }

    for (class, expected) in reference::LAST_RULES {
        checks.push(TableCheck::new(
            "last-rules",
            class.name().into(),
            codes(tables.last_rules(class)),
            expected.to_vec(),
        ));
    }
    checks
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rules(codes: &[u8]) -> Vec<Rule> {
        codes.iter().copied().map(Rule).collect()
    }

    #[test]
    fn organizations_are_sibling_partitions() {
        for class in [RuleClass::I, RuleClass::II, RuleClass::III] {
            let [a, b] = [class.node_sets()[0], class.node_sets()[1]];
            assert_eq!(a.union(b), RmtSet::ALL);
            assert!(a.intersection(b).is_empty());
            for node in [a, b] {
                assert_eq!(node.len(), 4);
                for k in node.iter() {
                    assert!(node.contains(crate::rule::sibling_rmt(k)));
                }
            }
        }
        for class in [RuleClass::IV, RuleClass::V, RuleClass::VI] {
            assert_eq!(class.node_sets().len(), 4);
        }
    }

    #[test]
    fn class_members() {
        let one = rules_of_class(RuleClass::I);
        assert_eq!(one.len(), 36);
        for r in [51, 90, 204] {
            assert!(one.contains(&Rule(r)));
        }
        assert_eq!(
            rules_of_class(RuleClass::II),
            rules(&[15, 30, 45, 60, 75, 90, 105, 120, 135, 150, 165, 180, 195, 210, 225, 240])
        );
        assert_eq!(
            rules_of_class(RuleClass::IV),
            rules(&[60, 90, 105, 150, 165, 195])
        );
    }

    #[test]
    fn complete_rules() {
        assert!(is_complete_rule(Rule(90)));
        assert!(!is_complete_rule(Rule(15)));
        assert!(!is_complete_rule(Rule(204)));
        let complete: Vec<u8> = Rule::all()
            .filter(|r| is_complete_rule(*r))
            .map(|r| r.0)
            .collect();
        assert_eq!(complete, [90, 105, 150, 165]);
    }

    #[test]
    fn transitions() {
        assert_eq!(next_class(RuleClass::I, Rule(85)), Ok(RuleClass::II));
        assert_eq!(next_class(RuleClass::III, Rule(177)), Ok(RuleClass::V));
        assert_eq!(next_class(RuleClass::V, Rule(170)), Ok(RuleClass::II));
        for r in rules_of_class(RuleClass::II) {
            assert_eq!(next_class(RuleClass::II, r), Ok(RuleClass::I));
        }
        assert_eq!(
            next_class(RuleClass::II, Rule(51)),
            Err(Error::NotInClass {
                rule: 51,
                class: "II"
            })
        );
    }

    #[test]
    fn boundary_tables() {
        let first = first_rule_options();
        assert_eq!(first.len(), 6);
        assert!(first.contains(&(Rule(9), RuleClass::III)));
        assert!(first.contains(&(Rule(3), RuleClass::I)));
        assert_eq!(last_rule_options(RuleClass::I), rules(&[17, 20, 65, 68]));
        assert_eq!(last_rule_options(RuleClass::II), rules(&[5, 20, 65, 80]));
        assert_eq!(last_rule_options(RuleClass::VI), rules(&[5, 80]));
    }

    #[test]
    fn boundary_canonical_forms() {
        assert_eq!(
            canonicalize_boundary_rule(Rule(105), Position::First),
            Rule(9)
        );
        assert_eq!(
            canonicalize_boundary_rule(Rule(75), Position::Last),
            Rule(65)
        );
        assert_eq!(
            canonicalize_boundary_rule(Rule(9), Position::First),
            Rule(9)
        );
    }

    #[test]
    fn class_lookup_by_nodes() {
        let nodes = [
            RmtSet::from_bits(0xF0),
            RmtSet::from_bits(0x0F),
            RmtSet::from_bits(0x0F),
        ];
        assert_eq!(RuleClass::from_node_sets(&nodes), Some(RuleClass::I));
        assert_eq!(RuleClass::from_node_sets(&[RmtSet::from_bits(0x0F)]), None);
        assert_eq!("vi".parse::<RuleClass>(), Ok(RuleClass::VI));
    }

    #[test]
    fn mismatch_diagnostic_names_the_row() {
        let check = TableCheck::new("classes", "IV".into(), vec![60, 90], vec![90, 105]);
        assert_eq!(
            check.diagnostic().unwrap(),
            "table classes row IV: missing [105], unexpected [60]"
        );
    }
}
