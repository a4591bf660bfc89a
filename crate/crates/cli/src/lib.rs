//! `rca`: identify, synthesize and inspect reversible null-boundary hybrid CAs.
//!
//! Every subcommand prints plain text by default. With `--format json` each
//! subcommand prints exactly one JSON object on one line; the field names are
//! listed on the record structs below.

use std::ffi::OsString;
use std::io::Write;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use rca_core::classes::{self, ClassTables, TableCheck};
use rca_core::oracle::{build_stg, StgSummary};
use rca_core::reachability::{compressed_tree, CompressedTreeLevel, Verdict};
use rca_core::synthesis::{count_reversible, CountDomain, Method, SynthesisRequest};
use rca_core::{CaState, Error, Rule, RuleClass, RuleVector};

pub const EXIT_OK: u8 = 0;
pub const EXIT_IRREVERSIBLE: u8 = 1;
pub const EXIT_USAGE: u8 = 2;

#[derive(Parser, Debug)]
#[command(
    name = "rca",
    version,
    about = "Reversible hybrid cellular automata with null boundary"
)]
struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Plain, global = true)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Plain,
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Decide reversibility of a rule vector.
    Identify(IdentifyArgs),
    /// Build a random reversible rule vector.
    Synthesize(SynthesizeArgs),
    /// Run a rule vector from a start state.
    Evolve(EvolveArgs),
    /// Print the derived rule tables, or the classification of one rule.
    Classify(ClassifyArgs),
    /// Print the state transition graph in DOT.
    Stg(StgArgs),
    /// Count reversible rule vectors of a small size exhaustively.
    Count(CountArgs),
}

#[derive(Args, Debug)]
struct IdentifyArgs {
    /// Comma-separated decimal rules, e.g. "90,15,85,15".
    #[arg(long)]
    rules: RuleVector,
    /// Also print the compressed reachability tree.
    #[arg(long)]
    tree: bool,
    /// Exit with status 1 when the automaton is irreversible.
    #[arg(long)]
    expect_reversible: bool,
}

#[derive(Args, Debug)]
struct SynthesizeArgs {
    #[arg(long)]
    n: usize,
    /// Generated and reported on stderr when omitted.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, default_value_t = Method::Tree)]
    method: Method,
    /// Fill the boundary rules' unused bits randomly instead of with zeros.
    #[arg(long = "randomize-dontcares")]
    randomize_dont_cares: bool,
}

#[derive(Args, Debug)]
struct EvolveArgs {
    #[arg(long)]
    rules: RuleVector,
    /// Binary string, cell 1 first.
    #[arg(long)]
    state: CaState,
    #[arg(long, default_value_t = 1)]
    steps: usize,
}

#[derive(Args, Debug)]
struct ClassifyArgs {
    /// Classify a single rule instead of printing the tables.
    #[arg(long)]
    rule: Option<Rule>,
}

#[derive(Args, Debug)]
struct StgArgs {
    #[arg(long)]
    rules: RuleVector,
}

#[derive(Args, Debug)]
struct CountArgs {
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = CountDomain::Canonical)]
    domain: CountDomain,
}

/// `identify` record.
#[derive(Serialize)]
struct IdentifyRecord<'a> {
    rules: &'a RuleVector,
    #[serde(flatten)]
    verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    tree: Option<Vec<CompressedTreeLevel>>,
}

/// `synthesize` record.
#[derive(Serialize)]
struct SynthesizeRecord<'a> {
    #[serde(flatten)]
    request: SynthesisRequest,
    rules: &'a RuleVector,
}

/// `evolve` record.
#[derive(Serialize)]
struct EvolveRecord<'a> {
    rules: &'a RuleVector,
    states: Vec<CaState>,
}

/// `classify` record without `--rule`.
#[derive(Serialize)]
struct TablesRecord {
    rows: Vec<TableRow>,
    mismatches: usize,
}

#[derive(Serialize)]
struct TableRow {
    #[serde(flatten)]
    check: TableCheck,
    matches: bool,
}

/// `classify --rule` record.
#[derive(Serialize)]
struct RuleRecord {
    rule: Rule,
    balanced: bool,
    reversible: bool,
    /// Classes containing the rule, each with the class it leads to.
    classes: Vec<(RuleClass, Option<RuleClass>)>,
}

/// `stg` record.
#[derive(Serialize)]
struct StgRecord<'a> {
    rules: &'a RuleVector,
    #[serde(flatten)]
    summary: StgSummary,
    dot: String,
}

/// `count` record.
#[derive(Serialize)]
struct CountRecord {
    n: usize,
    domain: CountDomain,
    reversible: u64,
}

/// Parses `args` (program name first), runs the subcommand and returns the exit status.
pub fn run<I, T, W, E>(args: I, out: &mut W, err: &mut E) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
    W: Write,
    E: Write,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let informational = !e.use_stderr();
            let text = e.render().to_string();
            if informational {
                let _ = out.write_all(text.as_bytes());
                return EXIT_OK;
            }
            let _ = err.write_all(text.as_bytes());
            return EXIT_USAGE;
        }
    };
    match execute(&cli, out, err) {
        Ok(code) => code,
        Err(Failure::Input(e)) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_USAGE
        }
        Err(Failure::Io(e)) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_USAGE
        }
    }
}

enum Failure {
    Input(Error),
    Io(std::io::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Input(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Io(e)
    }
}

fn json_line<W: Write, T: Serialize>(out: &mut W, record: &T) -> Result<(), Failure> {
    serde_json::to_writer(&mut *out, record).map_err(|e| Failure::Io(e.into()))?;
    writeln!(out)?;
    Ok(())
}

fn sets(list: &[rca_core::RmtSet]) -> String {
    list.iter()
        .map(|s| s.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

fn execute<W: Write, E: Write>(cli: &Cli, out: &mut W, err: &mut E) -> Result<u8, Failure> {
    let json = cli.format == Format::Json;
    match &cli.command {
        Command::Identify(args) => {
            let tree = compressed_tree(&args.rules);
            let verdict = tree.verdict;
            if json {
                let record = IdentifyRecord {
                    rules: &args.rules,
                    verdict,
                    tree: args.tree.then(|| tree.levels.clone()),
                };
                json_line(out, &record)?;
            } else {
                if args.tree {
                    for level in &tree.levels {
                        writeln!(
                            out,
                            "level {}: nodes {} edges {}",
                            level.level,
                            sets(&level.nodes),
                            sets(&level.edge_sets)
                        )?;
                    }
                }
                match verdict.witness {
                    None => writeln!(out, "reversible")?,
                    Some(w) => writeln!(
                        out,
                        "irreversible: level {} reason {} set {}",
                        w.level, w.reason, w.set
                    )?,
                }
            }
            Ok(if args.expect_reversible && !verdict.reversible {
                EXIT_IRREVERSIBLE
            } else {
                EXIT_OK
            })
        }
        Command::Synthesize(args) => {
            let seed = match args.seed {
                Some(seed) => seed,
                None => {
                    let seed = rand::random::<u64>();
                    writeln!(err, "seed: {seed}")?;
                    seed
                }
            };
            let mut request = SynthesisRequest::new(args.n, seed, args.method);
            request.randomize_dont_cares = args.randomize_dont_cares;
            let rules = request.run()?;
            if json {
                json_line(
                    out,
                    &SynthesizeRecord {
                        request,
                        rules: &rules,
                    },
                )?;
            } else {
                writeln!(out, "{rules}")?;
            }
            Ok(EXIT_OK)
        }
        Command::Evolve(args) => {
            let states = args.rules.evolve(&args.state, args.steps)?;
            if json {
                json_line(
                    out,
                    &EvolveRecord {
                        rules: &args.rules,
                        states,
                    },
                )?;
            } else {
                let line: Vec<String> = states.iter().map(|s| s.to_string()).collect();
                writeln!(out, "{}", line.join(" "))?;
            }
            Ok(EXIT_OK)
        }
        Command::Classify(args) => {
            if let Some(rule) = args.rule {
                let tables = ClassTables::get();
                let record = RuleRecord {
                    rule,
                    balanced: rule.is_balanced(),
                    reversible: rule.is_reversible(),
                    classes: RuleClass::ALL
                        .into_iter()
                        .filter(|&c| tables.contains(c, rule))
                        .map(|c| (c, tables.next(c, rule)))
                        .collect(),
                };
                if json {
                    json_line(out, &record)?;
                } else {
                    writeln!(
                        out,
                        "rule {}: balanced {} reversible {}",
                        rule, record.balanced, record.reversible
                    )?;
                    for (from, to) in &record.classes {
                        match to {
                            Some(to) => writeln!(out, "  class {from} -> {to}")?,
                            None => writeln!(out, "  class {from} -> unclassified")?,
                        }
                    }
                }
                return Ok(EXIT_OK);
            }
            let rows: Vec<TableRow> = classes::reference_checks()
                .into_iter()
                .map(|check| TableRow {
                    matches: check.matches(),
                    check,
                })
                .collect();
            let mismatches = rows.iter().filter(|r| !r.matches).count();
            if json {
                json_line(out, &TablesRecord { rows, mismatches })?;
            } else {
                for row in &rows {
                    let rules: Vec<String> = row.check.derived.iter().map(u8::to_string).collect();
                    let flag = if row.matches { "match" } else { "MISMATCH" };
                    writeln!(
                        out,
                        "{} {}: {} [{}]",
                        row.check.table,
                        row.check.row,
                        flag,
                        rules.join(",")
                    )?;
                    if let Some(d) = row.check.diagnostic() {
                        writeln!(out, "  {d}")?;
                    }
                }
                writeln!(out, "mismatches: {mismatches}")?;
            }
            Ok(EXIT_OK)
        }
        Command::Stg(args) => {
            let stg = build_stg(&args.rules)?;
            let summary = stg.summary();
            if json {
                json_line(
                    out,
                    &StgRecord {
                        rules: &args.rules,
                        summary,
                        dot: stg.to_dot(),
                    },
                )?;
            } else {
                let cycles: Vec<String> = summary.cycle_type.iter().map(usize::to_string).collect();
                writeln!(out, "// rules: {}", args.rules)?;
                writeln!(out, "// bijective: {}", summary.bijective)?;
                writeln!(out, "// non_reachable: {}", summary.non_reachable)?;
                writeln!(out, "// max_predecessors: {}", summary.max_predecessors)?;
                writeln!(out, "// cycle_type: {}", cycles.join(","))?;
                stg.write_dot(out)?;
            }
            Ok(EXIT_OK)
        }
        Command::Count(args) => {
            let reversible = count_reversible(args.n, args.domain)?;
            if json {
                json_line(
                    out,
                    &CountRecord {
                        n: args.n,
                        domain: args.domain,
                        reversible,
                    },
                )?;
            } else {
                writeln!(
                    out,
                    "n {} domain {}: {} reversible",
                    args.n, args.domain, reversible
                )?;
            }
            Ok(EXIT_OK)
        }
    }
}
