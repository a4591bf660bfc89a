#![allow(dead_code)]

use rand::Rng;
use rca_core::oracle::StateTransitionGraph;
use rca_core::reference::REVERSIBLE_RULES;
use rca_core::synthesis::{synthesize_tree_with, RandomChooser};
use rca_core::{Rule, RuleVector};

/// Uniform over all `256^n` vectors.
pub fn uniform_vector<R: Rng>(rng: &mut R, n: usize) -> RuleVector {
    RuleVector::new((0..n).map(|_| Rule(rng.gen())).collect()).unwrap()
}

/// A synthesized reversible vector (random don't-care bits), with one cell
/// replaced by a random or reversible rule half of the time, so that both
/// verdicts are common.
pub fn mixed_vector<R: Rng>(rng: &mut R, n: usize) -> RuleVector {
    let mut chooser = RandomChooser::new(&mut *rng, n, true);
    let mut rules = synthesize_tree_with(n, &mut chooser)
        .unwrap()
        .rules()
        .to_vec();
    if rng.gen_bool(0.5) {
        let cell = rng.gen_range(0..n);
        rules[cell] = if rng.gen_bool(0.5) {
            Rule(rng.gen())
        } else {
            Rule(REVERSIBLE_RULES[rng.gen_range(0..REVERSIBLE_RULES.len())])
        };
    }
    RuleVector::new(rules).unwrap()
}

/// For a finite automaton: injective, surjective and bijective coincide.
pub fn moore_myhill_holds(stg: &StateTransitionGraph) -> bool {
    let surjective = stg.non_reachable().next().is_none();
    let injective = stg.max_predecessors() <= 1;
    let bijective = stg.is_bijective();
    surjective == injective && injective == bijective
}
