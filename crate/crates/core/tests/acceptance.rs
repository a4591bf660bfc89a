mod common;

use std::cell::Cell;
use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rca_core::classes::{reference_checks, ClassTables};
use rca_core::oracle::{build_stg, StateTransitionGraph};
use rca_core::reachability::{compressed_tree, Frontier, MAX_UNIQUE_NODES};
use rca_core::synthesis::{count_reversible, CountDomain};
use rca_core::{
    identify_reversible, CaState, Method, RmtSet, Rule, RuleClass, RuleVector, SynthesisRequest,
};

const EXHAUSTIVE_N: usize = 3;
const SAMPLES_PER_N: usize = 100_000;
const SAMPLED_SIZES: std::ops::RangeInclusive<usize> = 4..=12;
const SYNTHESIS_RUNS: u64 = 10_000;
const SYNTHESIS_SIZES: std::ops::RangeInclusive<usize> = 3..=12;
const SMALL_N: usize = 100_000;
const LARGE_N: usize = 1_000_000;
const TIMING_REPEATS: usize = 15;
const RATIO_MIN: f64 = 5.0;
const RATIO_MAX: f64 = 20.0;

thread_local! {
    static GRAPHS: Cell<u64> = const { Cell::new(0) };
    static MOORE_MYHILL_VIOLATIONS: Cell<u64> = const { Cell::new(0) };
}

/// Builds the graph and records whether injectivity, surjectivity and bijectivity coincide.
fn oracle(rv: &RuleVector) -> StateTransitionGraph {
    let stg = build_stg(rv).expect("oracle size");
    GRAPHS.with(|g| g.set(g.get() + 1));
    if !common::moore_myhill_holds(&stg) {
        MOORE_MYHILL_VIOLATIONS.with(|v| v.set(v.get() + 1));
    }
    stg
}

type Criterion = (&'static str, fn() -> Outcome);

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn exhaustive() -> Outcome {
    let mut disagreements = Vec::new();
    let mut reversible = 0u64;
    for a in 0..=255u8 {
        for b in 0..=255u8 {
            for c in 0..=255u8 {
                let rv = RuleVector::from([a, b, c]);
                let fast = identify_reversible(&rv).reversible;
                if fast != oracle(&rv).is_bijective() {
                    disagreements.push(rv);
                }
                reversible += fast as u64;
            }
        }
    }
    let counted = count_reversible(EXHAUSTIVE_N, CountDomain::All).unwrap();
    let examples: Vec<String> = disagreements
        .iter()
        .take(5)
        .map(|rv| rv.to_string())
        .collect();
    outcome(
        disagreements.is_empty() && counted == reversible,
        format!(
            "n={EXHAUSTIVE_N}: {} vectors, {} reversible, {} disagreements {:?}, counter gives {}",
            1u64 << 24,
            reversible,
            disagreements.len(),
            examples,
            counted
        ),
    )
}

fn sampled() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut disagreements = Vec::new();
    let mut parts = Vec::new();
    for n in SAMPLED_SIZES {
        let mut reversible = 0;
        for _ in 0..SAMPLES_PER_N {
            let rv = common::uniform_vector(&mut rng, n);
            let fast = identify_reversible(&rv).reversible;
            if fast != oracle(&rv).is_bijective() {
                disagreements.push(rv);
            }
            reversible += fast as usize;
        }
        // Uniform vectors are almost never reversible; a mixed batch covers that side.
        let mut mixed_reversible = 0;
        for _ in 0..SAMPLES_PER_N / 10 {
            let rv = common::mixed_vector(&mut rng, n);
            let fast = identify_reversible(&rv).reversible;
            if fast != oracle(&rv).is_bijective() {
                disagreements.push(rv);
            }
            mixed_reversible += fast as usize;
        }
        parts.push(format!("n={n} {reversible}+{mixed_reversible}"));
    }
    let examples: Vec<String> = disagreements
        .iter()
        .take(5)
        .map(|rv| rv.to_string())
        .collect();
    outcome(
        disagreements.is_empty(),
        format!(
            "{SAMPLES_PER_N} uniform + {} mixed per n, reversible seen [{}], {} disagreements {:?}",
            SAMPLES_PER_N / 10,
            parts.join(", "),
            disagreements.len(),
            examples
        ),
    )
}

fn fixtures() -> Outcome {
    let verdicts: [(&[u8], bool); 6] = [
        (&[90, 15, 85, 15], true),
        (&[105, 129, 171, 65], false),
        (&[90, 85, 15, 15], false),
        (&[105, 177, 170, 75], true),
        (&[105, 177, 171, 75], false),
        (&[9, 177, 170, 65], true),
    ];
    let mut failures = Vec::new();
    for (rules, expected) in verdicts {
        let rv = RuleVector::from(rules);
        if identify_reversible(&rv).reversible != expected || oracle(&rv).is_bijective() != expected
        {
            failures.push(format!("<{rv}> expected reversible={expected}"));
        }
    }
    let rv = RuleVector::from([105, 129, 171, 65]);
    let start: CaState = "0011".parse().unwrap();
    let next = rv.next_state(&start).unwrap().to_string();
    if next != "1011" {
        failures.push(format!("0011 -> {next}, expected 1011"));
    }
    let stg = oracle(&rv);
    let at = |s: &str| stg.predecessor_count(usize::from_str_radix(s, 2).unwrap());
    for s in ["0100", "1101"] {
        if at(s) != 0 {
            failures.push(format!("{s} has {} predecessors, expected none", at(s)));
        }
    }
    for s in ["0000", "0010"] {
        if at(s) < 2 {
            failures.push(format!("{s} has {} predecessors, expected several", at(s)));
        }
    }
    outcome(
        failures.is_empty(),
        if failures.is_empty() {
            "6 verdicts, 0011 -> 1011, non-reachable 0100 1101, multi-predecessor 0000 0010".into()
        } else {
            failures.join("; ")
        },
    )
}

fn tables() -> Outcome {
    let checks = reference_checks();
    let mut diagnostics: Vec<String> = checks.iter().filter_map(|c| c.diagnostic()).collect();
    let t = ClassTables::get();
    let set = |c: RuleClass| t.members(c).iter().copied().collect::<BTreeSet<Rule>>();
    let sizes: Vec<usize> = RuleClass::ALL.iter().map(|&c| t.members(c).len()).collect();
    if sizes != [36, 16, 36, 6, 18, 6] {
        diagnostics.push(format!(
            "class sizes {sizes:?}, expected [36, 16, 36, 6, 18, 6]"
        ));
    }
    for (combined, a, b) in [
        (RuleClass::IV, RuleClass::I, RuleClass::II),
        (RuleClass::V, RuleClass::I, RuleClass::III),
        (RuleClass::VI, RuleClass::II, RuleClass::III),
    ] {
        let both: BTreeSet<Rule> = set(a).intersection(&set(b)).copied().collect();
        if set(combined) != both {
            diagnostics.push(format!(
                "class {combined} differs from {a} and {b} in common"
            ));
        }
    }
    let union: BTreeSet<Rule> = RuleClass::ALL.iter().flat_map(|&c| set(c)).collect();
    let reversible: BTreeSet<Rule> = Rule::all().filter(|r| r.is_reversible()).collect();
    if union != reversible {
        diagnostics.push("union of the classes differs from the reversible rules".into());
    }
    outcome(
        diagnostics.is_empty(),
        if diagnostics.is_empty() {
            format!("{} table rows match, class sizes {sizes:?}", checks.len())
        } else {
            diagnostics.join("; ")
        },
    )
}

fn synthesis() -> Outcome {
    let mut failures = Vec::new();
    let mut runs = 0u64;
    for method in [Method::Tree, Method::Classwalk] {
        for n in SYNTHESIS_SIZES {
            for seed in 0..SYNTHESIS_RUNS {
                runs += 1;
                let request = SynthesisRequest::new(n, seed, method);
                let rv = match request.run() {
                    Ok(rv) => rv,
                    Err(e) => {
                        failures.push(format!("{method} n={n} seed={seed}: {e}"));
                        continue;
                    }
                };
                if !identify_reversible(&rv).reversible || !oracle(&rv).is_bijective() {
                    failures.push(format!("{method} n={n} seed={seed}: <{rv}> irreversible"));
                }
                if request.run().as_ref() != Ok(&rv) {
                    failures.push(format!("{method} n={n} seed={seed}: replay differs"));
                }
            }
        }
    }
    outcome(
        failures.is_empty(),
        format!(
            "{runs} runs checked by identification, oracle and replay, {} failures {:?}",
            failures.len(),
            failures.iter().take(5).collect::<Vec<_>>()
        ),
    )
}

fn median(mut samples: Vec<Duration>) -> Duration {
    samples.sort();
    samples[samples.len() / 2]
}

fn time<F: FnMut()>(mut f: F) -> Duration {
    f();
    median(
        (0..TIMING_REPEATS)
            .map(|_| {
                let start = Instant::now();
                f();
                start.elapsed()
            })
            .collect(),
    )
}

fn scaling() -> Outcome {
    let small = SynthesisRequest::new(SMALL_N, 1, Method::Classwalk)
        .run()
        .unwrap();
    let large = SynthesisRequest::new(LARGE_N, 1, Method::Classwalk)
        .run()
        .unwrap();
    let identify = |rv: &RuleVector| {
        time(|| {
            assert!(std::hint::black_box(identify_reversible(std::hint::black_box(rv))).reversible);
        })
    };
    let synthesize = |n: usize| {
        time(|| {
            std::hint::black_box(
                SynthesisRequest::new(n, 2, Method::Classwalk)
                    .run()
                    .unwrap(),
            );
        })
    };
    let ratios = [
        ("identify", identify(&small), identify(&large)),
        ("classwalk", synthesize(SMALL_N), synthesize(LARGE_N)),
    ];
    let mut pass = true;
    let mut parts = Vec::new();
    for (name, a, b) in ratios {
        let ratio = b.as_secs_f64() / a.as_secs_f64();
        pass &= (RATIO_MIN..=RATIO_MAX).contains(&ratio);
        parts.push(format!("{name} {a:?} -> {b:?} ratio {ratio:.2}"));
    }
    outcome(
        pass,
        format!(
            "median of {TIMING_REPEATS}, n={SMALL_N} vs n={LARGE_N}, allowed [{RATIO_MIN}, {RATIO_MAX}]: {}",
            parts.join(", ")
        ),
    )
}

fn theorems() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x7e0);
    let mut failures = Vec::new();

    // An unbalanced interior rule makes the automaton irreversible.
    let mut interior = 0;
    for n in 3..=12 {
        for _ in 0..2000 {
            let mut rules = common::mixed_vector(&mut rng, n).rules().to_vec();
            let r = loop {
                let r = Rule(rng.gen());
                if !r.is_balanced() {
                    break r;
                }
            };
            rules[rng.gen_range(1..n - 1)] = r;
            let rv = RuleVector::new(rules).unwrap();
            interior += 1;
            if identify_reversible(&rv).reversible || oracle(&rv).is_bijective() {
                failures.push(format!("unbalanced interior <{rv}> reversible"));
            }
        }
    }

    // Every frontier a viable identification can reach has at most four nodes.
    let mut seen = BTreeSet::new();
    let mut queue: Vec<Frontier> = Rule::all()
        .filter_map(|r| Frontier::first(r).ok())
        .collect();
    while let Some(f) = queue.pop() {
        if seen.insert(f) {
            queue.extend(Rule::all().filter_map(|r| f.advance(r, 1).ok()));
        }
    }
    let widest = seen.iter().map(|f| f.len()).max().unwrap_or(0);
    if widest > MAX_UNIQUE_NODES {
        failures.push(format!("a viable frontier has {widest} nodes"));
    }
    for _ in 0..5000 {
        let n = rng.gen_range(2..=64);
        let rv = common::mixed_vector(&mut rng, n);
        for level in compressed_tree(&rv).levels {
            let unique: BTreeSet<RmtSet> = level.nodes.iter().copied().collect();
            if unique.len() > MAX_UNIQUE_NODES as usize {
                failures.push(format!(
                    "<{rv}> level {} has {} nodes",
                    level.level,
                    unique.len()
                ));
            }
        }
    }

    // Reversible vectors have boundary rules balanced on their effective RMTs.
    let mut boundary = 0;
    for _ in 0..20000 {
        let n = rng.gen_range(2..=64);
        let rv = common::mixed_vector(&mut rng, n);
        if identify_reversible(&rv).reversible {
            boundary += 1;
            let first = rv.first().is_balanced_on(RmtSet::FIRST_CELL).unwrap();
            let last = rv.last().is_balanced_on(RmtSet::LAST_CELL).unwrap();
            if !(first && last) {
                failures.push(format!("reversible <{rv}> has an unbalanced boundary rule"));
            }
        }
    }

    let graphs = GRAPHS.with(Cell::get);
    let violations = MOORE_MYHILL_VIOLATIONS.with(Cell::get);
    if violations > 0 {
        failures.push(format!(
            "{violations} graphs where injective, surjective and bijective disagree"
        ));
    }
    outcome(
        failures.is_empty(),
        format!(
            "{interior} unbalanced-interior vectors, {} viable frontiers (widest {widest}), \
             {boundary} reversible boundary checks, {graphs} graphs checked for Moore-Myhill, \
             {} failures {:?}",
            seen.len(),
            failures.len(),
            failures.iter().take(5).collect::<Vec<_>>()
        ),
    )
}

fn main() -> ExitCode {
    let criteria: [Criterion; 7] = [
        ("oracle equivalence, exhaustive", exhaustive),
        ("oracle equivalence, sampled", sampled),
        ("reference fixtures", fixtures),
        ("table reproduction", tables),
        ("synthesis soundness and replay", synthesis),
        ("linear scaling", scaling),
        ("theorem properties", theorems),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = check();
        let status = if result.pass { "PASS" } else { "FAIL" };
        failed += !result.pass as usize;
        println!(
            "{status} criterion {} {name}: {} ({:.1}s)",
            i + 1,
            result.detail,
            start.elapsed().as_secs_f64()
        );
    }
    println!(
        "acceptance: {} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
