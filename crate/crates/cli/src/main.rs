//! `ordterm`: parse, normalize and compare order terms from the shell.
//!
//! Exit codes: 0 success or equivalent, 1 inequivalent, 2 parse or usage
//! error, 3 internal invariant violation, 4 oracle disagreement, 5 a
//! repeated sequence tail the normalizer cannot handle.

use std::fs;
use std::io::{self, Read};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use ordterm_core::oracle::closure::{closure_equivalent_capped, DEFAULT_FRONTIER_CAP};
use ordterm_core::oracle::game::DEFAULT_MEMO_CAP;
use ordterm_core::oracle::{gen_random, ClosureVerdict, EfSolver, GameConfig, Winner};
use ordterm_core::sequence::{normalize_sequence_unrolling, MAX_UNROLL};
use ordterm_core::{
    is_normal_form, is_normal_form_sequence, normal_form, normalize, parse, parse_sequence,
    ParseError, SequenceError, Tail, Term, TermSequence,
};

const EXIT_INEQUIVALENT: u8 = 1;
const EXIT_PARSE: u8 = 2;
const EXIT_INVARIANT: u8 = 3;
const EXIT_DISAGREEMENT: u8 = 4;
const EXIT_UNSUPPORTED_TAIL: u8 = 5;

#[derive(Parser, Debug)]
#[command(
    name = "ordterm",
    version,
    about = "Normal forms for shuffle/concatenation order terms"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Parse a term and print its canonical rendering.
    Parse {
        #[command(flatten)]
        input: OneInput,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Print the normal form of a term.
    Normalize {
        #[command(flatten)]
        input: OneInput,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        /// Also print every rewrite step.
        #[arg(long)]
        trace: bool,
    },
    /// Decide whether two terms denote isomorphic orders.
    Eq {
        #[command(flatten)]
        input: TwoInputs,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        /// Cross-check the verdict with the closure search and the game solver.
        #[arg(long)]
        oracle: bool,
        #[command(flatten)]
        limits: OracleLimits,
    },
    /// Normalize a sequence such as `[1; 1; sh(1)]` or `[sh(1); repeat 2^sh(1)]`.
    SeqNormalize {
        #[command(flatten)]
        input: OneInput,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        /// Copies of a repeated tail to unroll before giving up.
        #[arg(long, default_value_t = MAX_UNROLL)]
        max_unroll: usize,
    },
    /// Print seeded random terms.
    Gen {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 12)]
        max_complexity: u64,
        #[arg(long, default_value_t = 3)]
        max_depth: u32,
        /// Number of terms, using seeds `seed`, `seed + 1`, ...
        #[arg(long, default_value_t = 1)]
        count: u64,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Run both oracles on two terms and report whether they agree with the
    /// normalizer.
    Oracle {
        #[command(flatten)]
        input: TwoInputs,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        #[command(flatten)]
        limits: OracleLimits,
    },
}

#[derive(Args, Debug)]
struct OneInput {
    /// Input text; read from --file or standard input when absent.
    text: Option<String>,
    #[arg(long, conflicts_with = "text")]
    file: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct TwoInputs {
    /// Two terms; read one per line from --file or standard input when absent.
    #[arg(num_args = 2, value_names = ["A", "B"])]
    terms: Vec<String>,
    #[arg(long, conflicts_with = "terms")]
    file: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct OracleLimits {
    /// Closure search bound; defaults to the larger input complexity plus 4.
    #[arg(long)]
    max_complexity: Option<u64>,
    #[arg(long, default_value_t = 3)]
    rounds: u32,
    #[arg(long, default_value_t = DEFAULT_MEMO_CAP)]
    memo_cap: usize,
    #[arg(long, default_value_t = DEFAULT_FRONTIER_CAP)]
    frontier_cap: usize,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Format {
    Text,
    Json,
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Self {
        Failure {
            code,
            message: message.into(),
        }
    }
}

impl From<ParseError> for Failure {
    fn from(e: ParseError) -> Self {
        Failure::new(EXIT_PARSE, format!("parse error: {e}"))
    }
}

impl From<SequenceError> for Failure {
    fn from(e: SequenceError) -> Self {
        Failure::new(EXIT_UNSUPPORTED_TAIL, e.to_string())
    }
}

type CmdResult = Result<u8, Failure>;

fn read_source(file: &Option<PathBuf>) -> Result<String, Failure> {
    let text = match file {
        Some(path) => fs::read_to_string(path).map_err(|e| {
            Failure::new(EXIT_PARSE, format!("cannot read {}: {e}", path.display()))
        })?,
        None => {
            let mut buf = String::new();
            io::stdin().read_to_string(&mut buf).map_err(|e| {
                Failure::new(EXIT_PARSE, format!("cannot read standard input: {e}"))
            })?;
            buf
        }
    };
    Ok(text)
}

fn one_input(input: &OneInput) -> Result<String, Failure> {
    match &input.text {
        Some(t) => Ok(t.clone()),
        None => read_source(&input.file),
    }
}

fn two_inputs(input: &TwoInputs) -> Result<(String, String), Failure> {
    if let [a, b] = input.terms.as_slice() {
        return Ok((a.clone(), b.clone()));
    }
    let text = read_source(&input.file)?;
    let lines: Vec<&str> = text.lines().filter(|l| !l.trim().is_empty()).collect();
    match lines.as_slice() {
        [a, b] => Ok((a.to_string(), b.to_string())),
        _ => Err(Failure::new(
            EXIT_PARSE,
            format!(
                "expected two terms, one per line, found {} lines",
                lines.len()
            ),
        )),
    }
}

fn parse_term(text: &str) -> Result<Term, Failure> {
    parse(text.trim()).map_err(Failure::from)
}

fn term_summary(t: &Term) -> Value {
    let m = t.metrics();
    json!({
        "text": t.to_string(),
        "term": t,
        "complexity": m.complexity,
        "depth": m.depth,
        "finite": m.finite,
    })
}

fn print_json(v: &Value) {
    println!(
        "{}",
        serde_json::to_string(v).expect("json values always serialize")
    );
}

fn cmd_parse(input: &OneInput, format: Format) -> CmdResult {
    let t = parse_term(&one_input(input)?)?;
    match format {
        Format::Text => println!("{t}"),
        Format::Json => print_json(&term_summary(&t)),
    }
    Ok(0)
}

fn cmd_normalize(input: &OneInput, format: Format, trace: bool) -> CmdResult {
    let t = parse_term(&one_input(input)?)?;
    let out = normalize(&t);
    if !is_normal_form(&out.term) {
        return Err(Failure::new(
            EXIT_INVARIANT,
            format!("result {} is not in normal form", out.term),
        ));
    }
    if let Some(s) = out
        .steps
        .iter()
        .find(|s| s.after.complexity() >= s.before.complexity())
    {
        return Err(Failure::new(
            EXIT_INVARIANT,
            format!(
                "{} step {} -> {} does not lower complexity",
                s.rule, s.before, s.after
            ),
        ));
    }
    match format {
        Format::Text => {
            println!("{}", out.term);
            if trace {
                for s in &out.steps {
                    let path: Vec<String> = s.path.iter().map(usize::to_string).collect();
                    println!(
                        "  {} at [{}]: {} -> {}",
                        s.rule,
                        path.join("."),
                        s.before,
                        s.after
                    );
                }
            }
        }
        Format::Json => {
            let mut v = term_summary(&out.term);
            v["input"] = json!(t.to_string());
            if trace {
                v["steps"] = out
                    .steps
                    .iter()
                    .map(|s| {
                        json!({
                            "rule": s.rule,
                            "path": s.path,
                            "before": s.before.to_string(),
                            "after": s.after.to_string(),
                        })
                    })
                    .collect();
            }
            print_json(&v);
        }
    }
    Ok(0)
}

struct OracleReport {
    closure: Result<ClosureVerdict, String>,
    bound: u64,
    game: Result<Winner, String>,
    rounds: u32,
    separated_at: Option<u32>,
}

impl OracleReport {
    fn disagrees_with(&self, equivalent: bool) -> bool {
        let closure_bad = match self.closure {
            Ok(v) => (v == ClosureVerdict::Connected) != equivalent,
            Err(_) => false,
        };
        // inequivalent terms may need more rounds to tell apart
        let game_bad = equivalent && self.game == Ok(Winner::Spoiler);
        closure_bad || game_bad
    }

    fn to_json(&self) -> Value {
        json!({
            "closure": match &self.closure {
                Ok(ClosureVerdict::Connected) => json!("connected"),
                Ok(ClosureVerdict::NotConnectedWithinBound) => json!("not_connected"),
                Err(e) => json!({ "error": e }),
            },
            "bound": self.bound,
            "game": match &self.game {
                Ok(w) => json!(w.to_string()),
                Err(e) => json!({ "error": e }),
            },
            "rounds": self.rounds,
            "separated_at": self.separated_at,
        })
    }
}

fn run_oracles(a: &Term, b: &Term, limits: &OracleLimits) -> OracleReport {
    let bound = limits
        .max_complexity
        .unwrap_or(a.complexity().max(b.complexity()) + 4);
    let closure =
        closure_equivalent_capped(a, b, bound, limits.frontier_cap).map_err(|e| e.to_string());
    let mut solver = EfSolver::new(
        a.clone(),
        b.clone(),
        GameConfig {
            max_rounds: limits
                .rounds
                .max(ordterm_core::oracle::game::DEFAULT_MAX_ROUNDS),
            memo_cap: limits.memo_cap,
        },
    );
    let mut separated_at = None;
    let mut game = Ok(Winner::Duplicator);
    for k in 0..=limits.rounds {
        match solver.winner(k) {
            Ok(Winner::Spoiler) => {
                separated_at = Some(k);
                game = Ok(Winner::Spoiler);
                break;
            }
            Ok(Winner::Duplicator) => {}
            Err(e) => {
                game = Err(e.to_string());
                break;
            }
        }
    }
    OracleReport {
        closure,
        bound,
        game,
        rounds: limits.rounds,
        separated_at,
    }
}

fn print_oracle_text(r: &OracleReport, agree: bool) {
    match &r.closure {
        Ok(ClosureVerdict::Connected) => println!("closure: connected (bound {})", r.bound),
        Ok(ClosureVerdict::NotConnectedWithinBound) => {
            println!("closure: not connected (bound {})", r.bound)
        }
        Err(e) => println!("closure: unknown ({e})"),
    }
    match (&r.game, r.separated_at) {
        (Ok(_), Some(k)) => println!("game: spoiler wins in {k} rounds"),
        (Ok(_), None) => println!("game: duplicator survives {} rounds", r.rounds),
        (Err(e), _) => println!("game: unknown ({e})"),
    }
    println!(
        "oracle: {}",
        if agree { "agreement" } else { "DISAGREEMENT" }
    );
}

fn compare(input: &TwoInputs, format: Format, limits: Option<&OracleLimits>) -> CmdResult {
    let (ta, tb) = two_inputs(input)?;
    let a = parse_term(&ta)?;
    let b = parse_term(&tb)?;
    let (na, nb) = (normal_form(&a), normal_form(&b));
    let equivalent = na == nb;
    let verdict = if equivalent {
        "equivalent"
    } else {
        "inequivalent"
    };
    let report = limits.map(|l| run_oracles(&a, &b, l));
    let agree = report
        .as_ref()
        .is_none_or(|r| !r.disagrees_with(equivalent));
    match format {
        Format::Text => {
            println!("{verdict}");
            if let Some(r) = &report {
                print_oracle_text(r, agree);
            }
        }
        Format::Json => {
            let mut v = json!({
                "verdict": verdict,
                "normal_forms": [na.to_string(), nb.to_string()],
            });
            if let Some(r) = &report {
                v["oracle"] = r.to_json();
                v["agreement"] = json!(agree);
            }
            print_json(&v);
        }
    }
    if !agree {
        return Ok(EXIT_DISAGREEMENT);
    }
    Ok(if equivalent { 0 } else { EXIT_INEQUIVALENT })
}

fn sequence_json(s: &TermSequence) -> Value {
    json!({
        "text": s.to_string(),
        "prefix": s.prefix,
        "tail": match &s.tail {
            Tail::Finite => json!({ "kind": "finite" }),
            Tail::Ones => json!({ "kind": "ones" }),
            Tail::Repeat(t) => json!({ "kind": "repeat", "term": t }),
        },
    })
}

fn cmd_seq_normalize(input: &OneInput, format: Format, max_unroll: usize) -> CmdResult {
    let s = parse_sequence(one_input(input)?.trim())?;
    let (out, _) = normalize_sequence_unrolling(&s, max_unroll)?;
    if !is_normal_form_sequence(&out) {
        return Err(Failure::new(
            EXIT_INVARIANT,
            format!("result {out} is not in normal form"),
        ));
    }
    match format {
        Format::Text => println!("{out}"),
        Format::Json => print_json(&sequence_json(&out)),
    }
    Ok(0)
}

fn cmd_gen(
    seed: u64,
    max_complexity: u64,
    max_depth: u32,
    count: u64,
    format: Format,
) -> CmdResult {
    for s in seed..seed.saturating_add(count) {
        let t = gen_random(s, max_complexity, max_depth);
        match format {
            Format::Text => println!("{t}"),
            Format::Json => {
                let mut v = term_summary(&t);
                v["seed"] = json!(s);
                print_json(&v);
            }
        }
    }
    Ok(0)
}

fn run(cli: &Cli) -> CmdResult {
    match &cli.command {
        Command::Parse { input, format } => cmd_parse(input, *format),
        Command::Normalize {
            input,
            format,
            trace,
        } => cmd_normalize(input, *format, *trace),
        Command::Eq {
            input,
            format,
            oracle,
            limits,
        } => compare(input, *format, oracle.then_some(limits)),
        Command::SeqNormalize {
            input,
            format,
            max_unroll,
        } => cmd_seq_normalize(input, *format, *max_unroll),
        Command::Gen {
            seed,
            max_complexity,
            max_depth,
            count,
            format,
        } => cmd_gen(*seed, *max_complexity, *max_depth, *count, *format),
        Command::Oracle {
            input,
            format,
            limits,
        } => compare(input, *format, Some(limits)),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
