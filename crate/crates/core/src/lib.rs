//! Analysis and synthesis of reversible one-dimensional, two-state,
//! three-neighborhood hybrid cellular automata with null boundaries.
//!
//! * [`rule`]: rules as 8-bit truth tables over rule min terms (RMTs).
//! * [`automaton`]: rule vectors, states, evolution.
//! * [`reachability`]: compressed reachability trees and the linear-time
//!   reversibility test.
//! * [`classes`]: the six classes of reversible rules, derived from node sets.
//! * [`synthesis`]: tree-constructive and class-walk synthesis, exhaustive counts.
//! * [`oracle`]: explicit state transition graphs for small automata.

pub mod automaton;
pub mod classes;
pub mod error;
pub mod oracle;
pub mod reachability;
pub mod reference;
pub mod rule;
pub mod synthesis;

pub use automaton::{CaState, RuleVector};
pub use classes::{Position, RuleClass};
pub use error::Error;
pub use oracle::{build_stg, StateTransitionGraph};
pub use reachability::{compressed_tree, identify_reversible, Verdict};
pub use rule::{RmtIndex, RmtMask, RmtSet, Rule};
pub use synthesis::{CountDomain, Method, SynthesisRequest};
