//! `polyenc`: encode, analyze, monomorphise, check and measure TPTP problems.

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand};
use polyenc::analysis::{analyze, verdict_line, AnalysisConfig, CoverPolicy, InfRegistry, Report};
use polyenc::corpus::Expected;
use polyenc::encode::{run_pipeline_mono, EncodeError, EncodedProblem, Scheme, SchemeId};
use polyenc::monomorph::{monomorphise, MonoConfig, Monomorphised};
use polyenc::oracle::{check_status, run_external, Budget, RefuteConfig, Status};
use polyenc::stats::SizeStats;
use polyenc::syntax::{Origin, Problem, Type};
use polyenc::tptp::{parse_file, parse_type, print_as, Dialect, ParseOptions};
use polyenc::typing::check_well_typed;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "polyenc", version, about = "Type encodings from polymorphic TFF1 to TFF0 and FOF")]
#[command(after_long_help = scheme_table())]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Translate a problem with one of the type encodings.
    Encode(EncodeArgs),
    /// Report monotonicity verdicts, naked and undercover variables, covers and type-argument classes.
    Analyze(AnalyzeArgs),
    /// Instantiate type variables heuristically and mangle symbol instances.
    Monomorphise(MonoArgs),
    /// Confirm a claimed status with the model finder or the refuter.
    Check(CheckArgs),
    /// Print clause, literal and symbol counts.
    Stats(StatsArgs),
}

#[derive(Args)]
struct InputArgs {
    input: PathBuf,
    /// Input dialect: tff1, tff0, fof or auto.
    #[arg(long, default_value = "auto")]
    from: Dialect,
}

#[derive(Args)]
struct AnalysisArgs {
    /// Types declared infinite, separated by `;` (e.g. `list(A);nat`).
    #[arg(long, value_name = "TYPES")]
    infinite_types: Option<String>,
    /// File with one infinite type per line; `%` and `#` start comments.
    #[arg(long, value_name = "FILE")]
    inf_registry: Option<PathBuf>,
    /// Types to treat as nonmonotonic regardless of the calculus, separated by `;`.
    #[arg(long, value_name = "TYPES")]
    protect_extra: Option<String>,
    /// Cover choice: minimal (earliest minimal cover) or maximal (every position).
    #[arg(long, default_value = "minimal", value_parser = parse_policy)]
    cover_policy: CoverPolicy,
}

#[derive(Args)]
struct MonoFlags {
    /// Refinement rounds K.
    #[arg(long, default_value_t = 3)]
    mono_iterations: usize,
    /// Budget Δ on new formulas.
    #[arg(long, default_value_t = 200)]
    mono_budget: usize,
}

impl MonoFlags {
    fn config(&self) -> MonoConfig {
        MonoConfig { iterations: self.mono_iterations, budget: self.mono_budget }
    }
}

#[derive(Args)]
struct SchemeArgs {
    /// Encoding scheme; see `--help` for the table.
    #[arg(long)]
    scheme: String,
    /// Use the monomorphic variant, monomorphising polymorphic input first.
    #[arg(long)]
    mono: bool,
}

#[derive(Args)]
struct EncodeArgs {
    #[command(flatten)]
    input: InputArgs,
    #[command(flatten)]
    scheme: SchemeArgs,
    #[command(flatten)]
    analysis: AnalysisArgs,
    #[command(flatten)]
    mono: MonoFlags,
    /// Output dialect: tff1, tff0, fof or auto (by the output's level).
    #[arg(long, default_value = "auto")]
    to: Dialect,
    #[arg(short, long)]
    output: Option<PathBuf>,
    /// Write a JSON map from output formula names to their sources.
    #[arg(long, value_name = "FILE")]
    emit_provenance: Option<PathBuf>,
}

#[derive(Args)]
struct AnalyzeArgs {
    #[command(flatten)]
    input: InputArgs,
    #[command(flatten)]
    analysis: AnalysisArgs,
    /// Report these types instead of the problem's own, separated by `;`.
    #[arg(long = "type", value_name = "TYPES")]
    types: Option<String>,
    /// Print only the one-line verdict summary.
    #[arg(long)]
    brief: bool,
}

#[derive(Args)]
struct MonoArgs {
    #[command(flatten)]
    input: InputArgs,
    #[command(flatten)]
    mono: MonoFlags,
    /// List polymorphic formulas that produced no instance.
    #[arg(long)]
    report_dropped: bool,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct CheckArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Claimed status: `sat:N` (a model with at most N elements) or `unsat`.
    #[arg(long)]
    expect: Expected,
    /// Refuter step limit.
    #[arg(long, default_value_t = 50_000)]
    steps: usize,
    /// Encode with this scheme before checking.
    #[arg(long)]
    scheme: Option<String>,
    #[arg(long, requires = "scheme")]
    mono: bool,
    #[command(flatten)]
    analysis: AnalysisArgs,
    /// Ask the prover named by POLYENC_PROVER instead of the built-in oracle.
    #[arg(long)]
    external: bool,
}

#[derive(Args)]
struct StatsArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Encode with this scheme first.
    #[arg(long)]
    scheme: Option<String>,
    #[arg(long, requires = "scheme")]
    mono: bool,
    #[command(flatten)]
    analysis: AnalysisArgs,
    /// Count formulas and atoms as they are, without clausifying.
    #[arg(long)]
    no_clausify: bool,
}

fn parse_policy(s: &str) -> Result<CoverPolicy, String> {
    match s {
        "minimal" | "minimal-earliest" => Ok(CoverPolicy::MinimalEarliest),
        "maximal" => Ok(CoverPolicy::Maximal),
        _ => Err(format!("unknown cover policy `{s}` (expected minimal or maximal)")),
    }
}

fn scheme_table() -> String {
    let describe = |s: Scheme| match s {
        Scheme::Erased => "full type erasure (unsound with equality)",
        Scheme::Args(_) => "type arguments (unsound)",
        Scheme::TagsTrad => "traditional tags",
        Scheme::GuardsTrad => "traditional guards",
        Scheme::TagsCover => "cover-based tags",
        Scheme::GuardsCover => "cover-based guards",
        Scheme::TagsLight => "lightweight tags, monotonic types untagged",
        Scheme::TagsFeather => "featherweight tags",
        Scheme::GuardsLight => "lightweight guards, monotonic types unguarded",
        Scheme::GuardsFeather => "featherweight guards",
    };
    let row = |id: SchemeId| {
        let stages: Vec<String> = id.stages().iter().map(ToString::to_string).collect();
        format!("  {:<8} {:<18} {}\n", id.scheme.name(), stages.join(", "), describe(id.scheme))
    };
    let mut out = String::from("Schemes (stages run left to right):\n");
    for id in SchemeId::all().into_iter().filter(|s| !s.mono) {
        out.push_str(&row(id));
    }
    out.push_str("\nWith --mono (polymorphic input is monomorphised first):\n");
    for id in SchemeId::all().into_iter().filter(|s| s.mono) {
        out.push_str(&row(id));
    }
    out.push_str("\nExit status: 0 on success, 1 on bad input or a refuted claim, 2 on an internal error,\n");
    out.push_str("3 when `check` can neither confirm nor refute the claim.\n");
    out
}

/// Failures, split by who is to blame.
enum Failure {
    User(anyhow::Error),
    Internal(anyhow::Error),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Failure {
        Failure::User(e)
    }
}

type Outcome = Result<ExitCode, Failure>;

fn read(input: &InputArgs, allow_reserved: bool) -> anyhow::Result<Problem> {
    let opts = ParseOptions { dialect: input.from, allow_reserved, include_dir: None };
    let parsed = parse_file(&input.input, &opts).map_err(|e| anyhow!("{}: {e}", input.input.display()))?;
    Ok(parsed.problem)
}

fn types(list: &str) -> anyhow::Result<Vec<Type>> {
    list.split([';', '\n'])
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| parse_type(s).map_err(|e| anyhow!("bad type `{s}`: {e}")))
        .collect()
}

impl AnalysisArgs {
    fn config(&self) -> anyhow::Result<AnalysisConfig> {
        let mut inf = match &self.infinite_types {
            Some(s) => types(s)?,
            None => Vec::new(),
        };
        if let Some(path) = &self.inf_registry {
            let text = std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
            let lines: Vec<&str> = text.lines().map(|l| l.split(['%', '#']).next().unwrap_or("")).collect();
            inf.extend(types(&lines.join("\n"))?);
        }
        let protect_extra = match &self.protect_extra {
            Some(s) => types(s)?,
            None => Vec::new(),
        };
        Ok(AnalysisConfig { inf: InfRegistry::new(inf), policy: self.cover_policy, protect_extra })
    }
}

fn write_out(path: Option<&Path>, text: &str) -> anyhow::Result<()> {
    match path {
        Some(p) => std::fs::write(p, text).with_context(|| format!("cannot write {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn encode(problem: &Problem, name: &str, mono: bool, cfg: &AnalysisConfig, m: &MonoConfig) -> Result<(EncodedProblem, Option<Monomorphised>), Failure> {
    let id = SchemeId::parse(name, mono).map_err(|e| Failure::User(anyhow!(e)))?;
    let (encoded, monomorphised) = run_pipeline_mono(problem, id, cfg, m).map_err(|e| match e {
        EncodeError::AlreadyUntyped => Failure::User(anyhow!("already untyped: {e}")),
        e => Failure::User(e.into()),
    })?;
    let errors = check_well_typed(&encoded.problem);
    if let Some(err) = errors.first() {
        return Err(Failure::Internal(anyhow!("encoding with {id} produced an ill-typed problem: {err}")));
    }
    Ok((encoded, monomorphised))
}

fn provenance(encoded: &EncodedProblem, m: Option<&Monomorphised>) -> serde_json::Value {
    // Translated formulas keep the order of the (monomorphised) input.
    let mut inputs = encoded.source.formulas.iter();
    let mut map = serde_json::Map::new();
    for n in &encoded.problem.formulas {
        let entry = match &n.origin {
            Origin::Axiom { schema, symbol } => serde_json::json!({ "axiom": schema, "symbol": symbol }),
            Origin::Translated(_) | Origin::Input => {
                let name = inputs.next().map_or(n.name.as_str(), |i| i.name.as_str());
                match m.and_then(|m| m.instances.iter().find(|i| i.name == name)) {
                    Some(i) => {
                        let subst: serde_json::Map<String, serde_json::Value> =
                            i.subst.0.iter().map(|(a, t)| (a.clone(), t.to_string().into())).collect();
                        serde_json::json!({ "source": i.source, "instance": name, "types": subst })
                    }
                    None => serde_json::json!({ "source": name }),
                }
            }
        };
        map.insert(n.name.clone(), entry);
    }
    serde_json::Value::Object(map)
}

fn cmd_encode(a: &EncodeArgs) -> Outcome {
    let problem = read(&a.input, false)?;
    let cfg = a.analysis.config()?;
    let (encoded, m) = encode(&problem, &a.scheme.scheme, a.scheme.mono, &cfg, &a.mono.config())?;
    let text = print_as(&encoded.problem, a.to).map_err(anyhow::Error::from)?;
    write_out(a.output.as_deref(), &text)?;
    if let Some(path) = &a.emit_provenance {
        let json = serde_json::to_string_pretty(&provenance(&encoded, m.as_ref())).map_err(|e| Failure::Internal(e.into()))?;
        std::fs::write(path, json + "\n").with_context(|| format!("cannot write {}", path.display()))?;
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_analyze(a: &AnalyzeArgs) -> Outcome {
    let problem = read(&a.input, false)?;
    if problem.level() == polyenc::syntax::Level::Untyped {
        return Err(Failure::User(anyhow!("analysis needs a typed problem")));
    }
    let cfg = a.analysis.config()?;
    let analysis = analyze(&problem, &cfg);
    let mut report = Report::new(&problem, &analysis);
    if let Some(t) = &a.types {
        report.types = types(t)?;
    }
    if a.brief {
        println!("{}", verdict_line(&report.types, &analysis.verdicts));
    } else {
        print!("{report}");
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_monomorphise(a: &MonoArgs) -> Outcome {
    let problem = read(&a.input, false)?;
    let m = monomorphise(&problem, &a.mono.config()).map_err(anyhow::Error::from)?;
    let text = print_as(&m.problem, Dialect::Tff0).map_err(|e| Failure::Internal(e.into()))?;
    write_out(a.output.as_deref(), &text)?;
    let s = &m.stats;
    eprintln!(
        "{} rounds, {} monomorphic formulas, {} new instances, {} over budget",
        s.rounds, s.mono_formulas, s.new_formulas, s.over_budget
    );
    if a.report_dropped {
        for name in &s.dropped {
            eprintln!("dropped: {name}");
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_check(a: &CheckArgs) -> Outcome {
    let mut problem = read(&a.input, true)?;
    if let Some(scheme) = &a.scheme {
        let cfg = a.analysis.config()?;
        problem = encode(&problem, scheme, a.mono, &cfg, &MonoConfig::default())?.0.problem;
    }
    if a.external {
        let dir = tempfile::tempdir().context("cannot create a temporary directory")?;
        let path = dir.path().join("problem.p");
        std::fs::write(&path, polyenc::tptp::print(&problem)).context("cannot write temporary problem")?;
        let szs = run_external(&path).map_err(anyhow::Error::from)?;
        println!("SZS status {szs:?}");
        return Ok(match szs.agrees(a.expect) {
            Some(true) => ExitCode::SUCCESS,
            Some(false) => ExitCode::from(1),
            None => ExitCode::from(3),
        });
    }
    let budget = Budget { refute: RefuteConfig { steps: a.steps, ..RefuteConfig::default() }, ..Budget::default() };
    let report = check_status(&problem, a.expect, &budget).map_err(anyhow::Error::from)?;
    println!("{}: {}", report.status, report.detail);
    if let Some(m) = &report.model {
        print!("{m}");
    }
    Ok(match report.status {
        Status::Pass => ExitCode::SUCCESS,
        Status::Fail => ExitCode::from(1),
        Status::Inconclusive => ExitCode::from(3),
    })
}

fn cmd_stats(a: &StatsArgs) -> Outcome {
    let mut problem = read(&a.input, true)?;
    if let Some(scheme) = &a.scheme {
        let cfg = a.analysis.config()?;
        problem = encode(&problem, scheme, a.mono, &cfg, &MonoConfig::default())?.0.problem;
    }
    let stats = if a.no_clausify || !problem.is_type_ground() {
        SizeStats::of_formulas(&problem)
    } else {
        SizeStats::of_problem(&problem).map_err(|e| Failure::Internal(e.into()))?
    };
    print!("{stats}");
    Ok(ExitCode::SUCCESS)
}

fn run(cli: &Cli) -> Outcome {
    match &cli.command {
        Command::Encode(a) => cmd_encode(a),
        Command::Analyze(a) => cmd_analyze(a),
        Command::Monomorphise(a) => cmd_monomorphise(a),
        Command::Check(a) => cmd_check(a),
        Command::Stats(a) => cmd_stats(a),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match std::panic::catch_unwind(|| run(&cli)) {
        Ok(Ok(code)) => code,
        Ok(Err(Failure::User(e))) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
        Ok(Err(Failure::Internal(e))) => {
            eprintln!("internal error: {e:#}");
            ExitCode::from(2)
        }
        Err(_) => {
            eprintln!("internal error: the command panicked");
            ExitCode::from(2)
        }
    }
}
