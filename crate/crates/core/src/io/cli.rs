//! Command-line front end. [`run`] is the whole program minus process exit,
//! so tests can drive it with in-memory writers.

use super::bench::{impartial_trials, run_table1, BenchReport, BenchTrial};
use super::generate::{generate, GenParams, Model};
use super::profile::{parse_profile, serialize_profile};
use crate::axioms::{self, Axiom, CheckBudget};
use crate::model::{AxiomVerdict, Committee, ElectionInstance, SwapStep};
use crate::pav::{self, DEFAULT_ENUMERATION_BUDGET};
use crate::solvers::{self, InitPolicy, Rule};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};
use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

pub const EXIT_OK: i32 = 0;
pub const EXIT_RUNTIME: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_VIOLATED: i32 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "ejr",
    version,
    about = "Approval-based committee voting with EJR guarantees"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Compute a committee with one of the implemented rules.
    Solve(SolveArgs),
    /// Check a committee against JR, PJR and/or EJR.
    Check(CheckArgs),
    /// Print the exact PAV-score of a committee.
    Score(ScoreArgs),
    /// Generate a random profile.
    Gen(GenArgs),
    /// Rule-versus-axiom benchmarks.
    Bench(BenchArgs),
}

#[derive(Args, Debug)]
struct SolveArgs {
    #[arg(long)]
    rule: RuleArg,
    #[arg(long)]
    input: PathBuf,
    /// `lex`, `random` (uses --seed) or `explicit:LIST`.
    #[arg(long, default_value = "lex")]
    init: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Print every applied swap.
    #[arg(long)]
    trace: bool,
    #[arg(long)]
    json: bool,
    /// Committee enumeration budget for `--rule pav`.
    #[arg(long, default_value_t = DEFAULT_ENUMERATION_BUDGET)]
    budget: u64,
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum RuleArg {
    Maxswappav,
    Swappav,
    Pav,
    Greedyav,
    Seqpav,
}

impl From<RuleArg> for Rule {
    fn from(r: RuleArg) -> Rule {
        match r {
            RuleArg::Maxswappav => Rule::MaxSwapPav,
            RuleArg::Swappav => Rule::SwapPav,
            RuleArg::Pav => Rule::Pav,
            RuleArg::Greedyav => Rule::GreedyAv,
            RuleArg::Seqpav => Rule::SeqPav,
        }
    }
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum AxiomArg {
    Jr,
    Pjr,
    Ejr,
    All,
}

#[derive(Args, Debug)]
struct BudgetArgs {
    #[arg(long, default_value_t = CheckBudget::default().max_candidate_sets)]
    max_candidate_sets: u64,
    #[arg(long, default_value_t = CheckBudget::default().max_voter_subsets)]
    max_voter_subsets: u64,
}

impl BudgetArgs {
    fn budget(&self) -> CheckBudget {
        CheckBudget {
            max_candidate_sets: self.max_candidate_sets,
            max_voter_subsets: self.max_voter_subsets,
        }
    }
}

#[derive(Args, Debug)]
struct CheckArgs {
    #[arg(long)]
    axiom: AxiomArg,
    #[arg(long)]
    input: PathBuf,
    /// Comma-separated ascending candidate indices.
    #[arg(long)]
    committee: String,
    #[arg(long)]
    json: bool,
    #[command(flatten)]
    budget: BudgetArgs,
}

#[derive(Args, Debug)]
struct ScoreArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    committee: String,
    #[arg(long)]
    json: bool,
}

#[derive(Args, Debug)]
struct GenArgs {
    #[command(subcommand)]
    model: GenModel,
}

#[derive(Args, Debug)]
struct GenCommon {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    m: usize,
    #[arg(long)]
    k: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output file; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum GenModel {
    /// Independent approvals with probability --p.
    Impartial {
        #[command(flatten)]
        common: GenCommon,
        #[arg(long)]
        p: f64,
    },
    /// Voters approve one whole party; `--groups "0,1;2,3" --weights "3,1"`.
    Party {
        #[command(flatten)]
        common: GenCommon,
        #[arg(long)]
        groups: String,
        /// Defaults to equal weights.
        #[arg(long)]
        weights: Option<String>,
    },
}

#[derive(Args, Debug)]
struct BenchArgs {
    #[command(subcommand)]
    suite: BenchSuite,
}

#[derive(Subcommand, Debug)]
enum BenchSuite {
    /// JR/PJR/EJR pass rates of every rule over impartial-culture profiles.
    Table1 {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Fixed approval probability; cycles 0.1..0.9 when omitted.
        #[arg(long)]
        p: Option<f64>,
        /// Extra profile file to include as a trial, labelled by file name
        /// (repeatable).
        #[arg(long = "fixture")]
        fixtures: Vec<PathBuf>,
        #[arg(long)]
        json: bool,
        #[command(flatten)]
        budget: BudgetArgs,
    },
}

/// A command failure and the exit code it maps to.
struct Failure {
    code: i32,
    message: String,
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_USAGE,
        message: message.into(),
    }
}

fn runtime(message: impl ToString) -> Failure {
    Failure {
        code: EXIT_RUNTIME,
        message: message.to_string(),
    }
}

enum Field {
    Int(u64),
    Text(String),
    List(Vec<usize>),
    Trace(Vec<SwapStep>),
}

/// Ordered key/value output rendered as `key=value` lines or one JSON object.
#[derive(Default)]
struct Output {
    fields: Vec<(String, Field)>,
}

impl Output {
    fn push(&mut self, key: impl Into<String>, field: Field) {
        self.fields.push((key.into(), field));
    }

    fn text(&mut self, key: impl Into<String>, value: impl ToString) {
        self.push(key, Field::Text(value.to_string()));
    }

    fn render(&self, json_mode: bool) -> String {
        if json_mode {
            let mut map = Map::new();
            for (key, field) in &self.fields {
                let value = match field {
                    Field::Int(v) => json!(v),
                    Field::Text(s) => json!(s),
                    Field::List(v) => json!(v),
                    Field::Trace(steps) => Value::Array(
                        steps
                            .iter()
                            .map(|s| json!([s.out, s.incoming, s.diff.to_string()]))
                            .collect(),
                    ),
                };
                map.insert(key.clone(), value);
            }
            let mut s = Value::Object(map).to_string();
            s.push('\n');
            return s;
        }
        let mut s = String::new();
        for (key, field) in &self.fields {
            match field {
                Field::Int(v) => s.push_str(&format!("{key}={v}\n")),
                Field::Text(v) => s.push_str(&format!("{key}={v}\n")),
                Field::List(v) => s.push_str(&format!("{key}={}\n", join(v))),
                Field::Trace(steps) => {
                    for step in steps {
                        s.push_str(&format!(
                            "{key}={} {} {}\n",
                            step.out, step.incoming, step.diff
                        ));
                    }
                }
            }
        }
        s
    }
}

fn join(values: &[usize]) -> String {
    values
        .iter()
        .map(usize::to_string)
        .collect::<Vec<_>>()
        .join(" ")
}

/// Runs the CLI on `args` (including the program name) and returns the
/// process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() {
                let _ = write!(stderr, "{}", e.render());
                EXIT_USAGE
            } else {
                let _ = write!(stdout, "{}", e.render());
                EXIT_OK
            };
            return code;
        }
    };
    let outcome = match cli.command {
        Command::Solve(args) => solve_cmd(&args),
        Command::Check(args) => check_cmd(&args),
        Command::Score(args) => score_cmd(&args),
        Command::Gen(args) => gen_cmd(&args),
        Command::Bench(args) => bench_cmd(&args),
    };
    match outcome {
        Ok((text, code)) => {
            if stdout.write_all(text.as_bytes()).is_err() {
                return EXIT_RUNTIME;
            }
            code
        }
        Err(failure) => {
            let _ = writeln!(stderr, "error: {}", failure.message);
            failure.code
        }
    }
}

fn load(path: &PathBuf) -> Result<ElectionInstance, Failure> {
    let text =
        std::fs::read_to_string(path).map_err(|e| runtime(format!("{}: {e}", path.display())))?;
    parse_profile(&text).map_err(|e| runtime(format!("{}: {e}", path.display())))
}

/// Parses `2,3` into a committee of the instance, rejecting wrong sizes,
/// duplicates, unsorted lists and out-of-range indices.
fn parse_committee(list: &str, instance: &ElectionInstance) -> Result<Committee, Failure> {
    let members = parse_index_list(list)?;
    if let Some(w) = members.windows(2).find(|w| w[0] >= w[1]) {
        return Err(usage(if w[0] == w[1] {
            format!("committee lists candidate {} twice", w[0])
        } else {
            format!("committee must be ascending ({} before {})", w[0], w[1])
        }));
    }
    let committee = Committee::new(members).map_err(|e| usage(e.to_string()))?;
    instance
        .check_committee(&committee)
        .map_err(|e| usage(format!("committee: {e}")))?;
    Ok(committee)
}

fn parse_index_list(list: &str) -> Result<Vec<usize>, Failure> {
    if list.trim().is_empty() {
        return Ok(Vec::new());
    }
    list.split(',')
        .map(|t| {
            t.trim()
                .parse::<usize>()
                .map_err(|_| usage(format!("not a candidate index: {t:?}")))
        })
        .collect()
}

fn parse_init(spec: &str, seed: u64, instance: &ElectionInstance) -> Result<InitPolicy, Failure> {
    match spec {
        "lex" => Ok(InitPolicy::Lexicographic),
        "random" => Ok(InitPolicy::SeededRandom(seed)),
        _ => match spec.strip_prefix("explicit:") {
            Some(list) => Ok(InitPolicy::Explicit(parse_committee(list, instance)?)),
            None => Err(usage(format!(
                "unknown --init {spec:?}; expected lex, random or explicit:LIST"
            ))),
        },
    }
}

fn solve_cmd(args: &SolveArgs) -> Result<(String, i32), Failure> {
    let instance = load(&args.input)?;
    let init = parse_init(&args.init, args.seed, &instance)?;
    let rule = Rule::from(args.rule);
    let result = match rule {
        Rule::Pav => {
            let (committee, final_score) =
                pav::exact_pav_with_budget(&instance, args.budget).map_err(runtime)?;
            crate::model::SolveResult {
                committee,
                final_score,
                swaps: Vec::new(),
            }
        }
        _ => solvers::solve(rule, &instance, &init).map_err(runtime)?,
    };
    let mut out = Output::default();
    out.text("rule", rule.name());
    out.push(
        "committee",
        Field::List(result.committee.members().to_vec()),
    );
    out.text("pav_score", &result.final_score);
    out.push("swaps", Field::Int(result.swap_count() as u64));
    if args.trace {
        let key = if args.json { "trace" } else { "swap" };
        out.push(key, Field::Trace(result.swaps.clone()));
    }
    Ok((out.render(args.json), EXIT_OK))
}

fn push_verdict(out: &mut Output, prefix: &str, verdict: &AxiomVerdict) {
    match verdict.witness() {
        None => out.text(format!("{prefix}verdict"), "satisfied"),
        Some(w) => {
            out.text(format!("{prefix}verdict"), "violated");
            out.push(format!("{prefix}witness_l"), Field::Int(w.ell as u64));
            out.push(
                format!("{prefix}witness_T"),
                Field::List(w.candidates.clone()),
            );
            out.push(format!("{prefix}witness_X"), Field::List(w.voters.clone()));
        }
    }
}

fn check_cmd(args: &CheckArgs) -> Result<(String, i32), Failure> {
    let instance = load(&args.input)?;
    let committee = parse_committee(&args.committee, &instance)?;
    let budget = args.budget.budget();
    let mut out = Output::default();
    let satisfied = match args.axiom {
        AxiomArg::All => {
            let report =
                axioms::implication_audit(&instance, &committee, budget).map_err(runtime)?;
            out.text("axiom", "all");
            for axiom in [Axiom::Jr, Axiom::Pjr, Axiom::Ejr] {
                push_verdict(&mut out, &format!("{}_", axiom.name()), report.get(axiom));
            }
            report.jr.is_satisfied() && report.pjr.is_satisfied() && report.ejr.is_satisfied()
        }
        single => {
            let axiom = match single {
                AxiomArg::Jr => Axiom::Jr,
                AxiomArg::Pjr => Axiom::Pjr,
                _ => Axiom::Ejr,
            };
            let verdict = axioms::check(axiom, &instance, &committee, budget).map_err(runtime)?;
            out.text("axiom", axiom.name());
            push_verdict(&mut out, "", &verdict);
            verdict.is_satisfied()
        }
    };
    let code = if satisfied { EXIT_OK } else { EXIT_VIOLATED };
    Ok((out.render(args.json), code))
}

fn score_cmd(args: &ScoreArgs) -> Result<(String, i32), Failure> {
    let instance = load(&args.input)?;
    let committee = parse_committee(&args.committee, &instance)?;
    let score = pav::pav_score(&instance, &committee).map_err(runtime)?;
    let mut out = Output::default();
    out.text("pav_score", score);
    Ok((out.render(args.json), EXIT_OK))
}

fn parse_groups(spec: &str) -> Result<Vec<Vec<usize>>, Failure> {
    spec.split(';').map(parse_index_list).collect()
}

fn gen_cmd(args: &GenArgs) -> Result<(String, i32), Failure> {
    let (common, model) = match &args.model {
        GenModel::Impartial { common, p } => (common, Model::Impartial { p: *p }),
        GenModel::Party {
            common,
            groups,
            weights,
        } => {
            let groups = parse_groups(groups)?;
            let weights = match weights {
                Some(w) => w
                    .split(',')
                    .map(|t| {
                        t.trim()
                            .parse::<f64>()
                            .map_err(|_| usage(format!("not a weight: {t:?}")))
                    })
                    .collect::<Result<Vec<_>, _>>()?,
                None => vec![1.0; groups.len()],
            };
            (common, Model::PartyList { groups, weights })
        }
    };
    let params = GenParams {
        model,
        n: common.n,
        m: common.m,
        k: common.k,
        seed: common.seed,
    };
    let instance = generate(&params).map_err(|e| usage(e.to_string()))?;
    let text = serialize_profile(&instance);
    match &common.out {
        Some(path) => {
            std::fs::write(path, text).map_err(|e| runtime(format!("{}: {e}", path.display())))?;
            Ok((String::new(), EXIT_OK))
        }
        None => Ok((text, EXIT_OK)),
    }
}

fn bench_cmd(args: &BenchArgs) -> Result<(String, i32), Failure> {
    let BenchSuite::Table1 {
        n,
        m,
        k,
        trials,
        seed,
        p,
        fixtures,
        json,
        budget,
    } = &args.suite;
    let mut trials_list =
        impartial_trials(*n, *m, *k, *trials, *seed, *p).map_err(|e| usage(e.to_string()))?;
    for path in fixtures {
        let label = path
            .file_name()
            .unwrap_or(path.as_os_str())
            .to_string_lossy()
            .into_owned();
        trials_list.push(BenchTrial::fixture(label, load(path)?));
    }
    let report = run_table1(&trials_list, budget.budget()).map_err(runtime)?;
    let mut out = Output::default();
    out.push("trials", Field::Int(report.trials as u64));
    out.push("n", Field::Int(*n as u64));
    out.push("m", Field::Int(*m as u64));
    out.push("k", Field::Int(*k as u64));
    render_report(&mut out, &report);
    let code = if report.guarantees_hold() {
        EXIT_OK
    } else {
        EXIT_RUNTIME
    };
    Ok((out.render(*json), code))
}

fn render_report(out: &mut Output, report: &BenchReport) {
    for row in &report.rows {
        let rule = row.rule.name();
        for axiom in [Axiom::Jr, Axiom::Pjr, Axiom::Ejr] {
            let tally = row.tally(axiom);
            out.text(
                format!("{rule}_{}", axiom.name()),
                format!("{}/{}", tally.passed, tally.checked),
            );
        }
        out.push(format!("{rule}_skipped"), Field::Int(row.skipped as u64));
        for axiom in [Axiom::Jr, Axiom::Pjr, Axiom::Ejr] {
            let seeds = &row.tally(axiom).failing_seeds;
            if !seeds.is_empty() {
                out.text(
                    format!("{rule}_{}_failing_seeds", axiom.name()),
                    seeds.join(" "),
                );
            }
        }
    }
    out.text(
        "guarantees",
        if report.guarantees_hold() {
            "hold"
        } else {
            "broken"
        },
    );
}
