//! Batch command-line runner: every verification as a reproducible run
//! with a line-oriented report and stable exit codes.
//!
//! Exit codes: 0 all checks pass / verdict computed, 1 a FAIL or
//! COUNTEREXAMPLE line was produced, 2 usage or input error, 3 budget
//! exceeded.

use clap::{Args, Parser, Subcommand};
use paradox_core::formula::{parse_class_term, ClassEnv, Mutation};
use paradox_core::hf::{SetStore, StoreError};
use paradox_core::hierarchy::{axiom_report, build_stages, diagonal_sweep, StageConfig, StageIndex};
use paradox_core::model::{ModelError, Structure, Verdict};
use paradox_core::productivity::{
    self, decide, injective_image_demo, los_cardinal, los_cumulative, los_zermelo_exhaustive, ni_demo,
    nwf_demo, productive_choice_exists, random_hyperset_store, CatalogError, InjectiveOp, wf_demo,
};
use paradox_core::report::Report;
use paradox_core::rules::{parse_rules_file, RuleFile};
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

/// Compiled hard caps; `--unsafe-budget` lifts them and downgrades the
/// report header from exhaustive to bounded.
const UNIVERSE_CAP: usize = 4;
const FORMULA_DEPTH_CAP: usize = 3;
const RANK_UNIVERSE_CAP: usize = 5;
const LOS_STAGE_CAP: usize = 3;

#[derive(Parser)]
#[command(name = "paradox-lab", version, about = "Finite verification laboratory for set-vs-paradoxical-class logic")]
struct Cli {
    /// Also write the report to this file (stdout always gets a copy).
    #[arg(long, global = true)]
    report: Option<PathBuf>,

    /// Seed for sampled sweeps; fixed seed means byte-identical reports.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Lift compiled budget caps; exhaustive claims become bounded ones.
    #[arg(long, global = true, default_value_t = false)]
    unsafe_budget: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Exhaustive verification sweeps.
    #[command(subcommand)]
    Check(CheckCommand),
    /// Decide a class term over a universe file.
    Classify(ClassifyArgs),
    /// Classic paradoxical class builders with checked certificates.
    Catalog(CatalogArgs),
    /// Rule-system analysis over a rules file.
    #[command(subcommand)]
    Rules(RulesCommand),
    /// Cumulative-cardinal stage construction.
    #[command(subcommand)]
    Hierarchy(HierarchyCommand),
    /// Exhaustive Cantor-diagonal sweep.
    Diagonal(DiagonalArgs),
    /// Limitation-of-size biconditional checks.
    Los(LosArgs),
}

#[derive(Subcommand)]
enum CheckCommand {
    /// Both principle sweeps (class level and formula level).
    Principle(PrincipleArgs),
    /// Formula-level sweep only; supports evaluator mutations.
    PrincipleFormulas(PrincipleArgs),
    /// Identity-productivity suite over all structures up to a size.
    Identity(IdentityArgs),
}

#[derive(Args)]
struct PrincipleArgs {
    #[arg(long, default_value_t = 3)]
    max_universe: usize,
    #[arg(long, default_value_t = 2)]
    formula_depth: usize,
    /// Corrupt one evaluator connective case (demonstrates sweep
    /// sensitivity; expect counterexamples).
    #[arg(long)]
    mutation: Option<String>,
}

#[derive(Args)]
struct IdentityArgs {
    #[arg(long, default_value_t = 3)]
    max_universe: usize,
}

#[derive(Args)]
struct ClassifyArgs {
    /// Universe file (`elements …` / `member x y` lines).
    #[arg(long)]
    universe: PathBuf,
    /// Class term, e.g. "{ x | x notin x }".
    #[arg(long)]
    class: String,
}

#[derive(Args)]
struct CatalogArgs {
    /// One of: russell | rn:N | ni | wf | nwf | sikic | inj:OP
    /// (OP = singleton | powerset | successor).
    #[arg(long)]
    which: String,
    /// Universe file for the structure-level kinds (russell, rn, sikic).
    #[arg(long)]
    universe: Option<PathBuf>,
    /// Element map for sikic, e.g. "a:b,b:a".
    #[arg(long)]
    map: Option<String>,
    #[arg(long, default_value_t = 2)]
    rank_budget: u32,
    #[arg(long, default_value_t = 2)]
    card_budget: usize,
    /// Number of generated hyperset stores for the nwf demo.
    #[arg(long, default_value_t = 100)]
    stores: usize,
}

#[derive(Subcommand)]
enum RulesCommand {
    Validate(RulesArgs),
    Lfp(RulesArgs),
    Gfp(RulesArgs),
    Productivity(RulesArgs),
}

#[derive(Args)]
struct RulesArgs {
    #[arg(long)]
    rules: PathBuf,
    /// Stage budget for fixed-point iteration.
    #[arg(long, default_value_t = 256)]
    budget: usize,
}

#[derive(Subcommand)]
enum HierarchyCommand {
    Build(HierarchyArgs),
}

#[derive(Args)]
struct HierarchyArgs {
    #[arg(long, default_value_t = 2)]
    stages: usize,
    #[arg(long, default_value_t = 2)]
    seed_rank: u32,
    #[arg(long, default_value_t = 4)]
    card_budget: usize,
    #[arg(long, default_value_t = 3)]
    rank_budget: u32,
    /// Append the first limit stage.
    #[arg(long, default_value_t = false)]
    limit: bool,
    /// Also emit the per-axiom closure report for the rank universe.
    #[arg(long, default_value_t = false)]
    axiom_report: bool,
    /// Rank-universe depth for the axiom report.
    #[arg(long, default_value_t = 3)]
    rank_universe: usize,
}

#[derive(Args)]
struct DiagonalArgs {
    #[arg(long, default_value_t = 3)]
    size: usize,
}

#[derive(Args)]
struct LosArgs {
    /// cumulative | cardinal | zermelo
    #[arg(long)]
    mode: String,
    /// Stage depth for cumulative mode.
    #[arg(long, default_value_t = 3)]
    stages: usize,
    /// Include the self-membered set in the cumulative ground.
    #[arg(long, default_value_t = false)]
    omega: bool,
    /// Cardinality threshold for cardinal mode.
    #[arg(long, default_value_t = 2)]
    threshold: usize,
    /// Ground size for cardinal and zermelo modes.
    #[arg(long, default_value_t = 3)]
    ground: usize,
}

enum CliError {
    Usage(String),
    Input(String),
    Budget(String),
}

impl CliError {
    fn code(&self) -> (&'static str, u8) {
        match self {
            CliError::Usage(_) => ("E_USAGE", 2),
            CliError::Input(_) => ("E_INPUT", 2),
            CliError::Budget(_) => ("E_BUDGET", 3),
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Input(m) | CliError::Budget(m) => m,
        }
    }
}

impl From<ModelError> for CliError {
    fn from(e: ModelError) -> CliError {
        match e {
            ModelError::EnumerationBudget { .. } | ModelError::TooLarge { .. } => CliError::Budget(e.to_string()),
            _ => CliError::Input(e.to_string()),
        }
    }
}

impl From<StoreError> for CliError {
    fn from(e: StoreError) -> CliError {
        match e {
            StoreError::Budget { .. } => CliError::Budget(e.to_string()),
            _ => CliError::Input(e.to_string()),
        }
    }
}

impl From<CatalogError> for CliError {
    fn from(e: CatalogError) -> CliError {
        match e {
            CatalogError::Store(s) => s.into(),
            _ => CliError::Input(e.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(report) => {
            let mut full = Report::new();
            full.count("seed", cli.seed);
            full.count("exhaustive_mode", u64::from(!cli.unsafe_budget));
            full.merge(report);
            let text = full.to_string();
            print!("{text}");
            if let Some(path) = &cli.report {
                if let Err(e) = fs::write(path, &text) {
                    eprintln!("ERROR E_INPUT cannot write report file: {e}");
                    return ExitCode::from(2);
                }
            }
            if full.has_failure() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(err) => {
            let (code, exit) = err.code();
            eprintln!("ERROR {code} {}", err.message());
            ExitCode::from(exit)
        }
    }
}

fn cap(value: usize, cap: usize, what: &str, unsafe_budget: bool) -> Result<(), CliError> {
    if value > cap && !unsafe_budget {
        return Err(CliError::Budget(format!(
            "{what} {value} exceeds the compiled cap {cap} (pass --unsafe-budget to lift)"
        )));
    }
    Ok(())
}

fn run(cli: &Cli) -> Result<Report, CliError> {
    match &cli.command {
        Command::Check(CheckCommand::Principle(args)) => {
            cap(args.max_universe, UNIVERSE_CAP, "--max-universe", cli.unsafe_budget)?;
            cap(args.formula_depth, FORMULA_DEPTH_CAP, "--formula-depth", cli.unsafe_budget)?;
            let mutation = parse_mutation(&args.mutation)?;
            let mut report = run_formula_level(args, mutation)?;
            report.merge(productivity::verify_principle_class_level(args.max_universe).map_err(CliError::from)?);
            let ok = !report.has_failure();
            report.check("principle", ok);
            Ok(report)
        }
        Command::Check(CheckCommand::PrincipleFormulas(args)) => {
            cap(args.max_universe, UNIVERSE_CAP, "--max-universe", cli.unsafe_budget)?;
            cap(args.formula_depth, FORMULA_DEPTH_CAP, "--formula-depth", cli.unsafe_budget)?;
            let mutation = parse_mutation(&args.mutation)?;
            run_formula_level(args, mutation)
        }
        Command::Check(CheckCommand::Identity(args)) => {
            cap(args.max_universe, UNIVERSE_CAP, "--max-universe", cli.unsafe_budget)?;
            productivity::identity_productive_sweep(args.max_universe).map_err(CliError::from)
        }
        Command::Classify(args) => {
            let text = fs::read_to_string(&args.universe)
                .map_err(|e| CliError::Input(format!("cannot read {}: {e}", args.universe.display())))?;
            let m = Structure::parse(&text)?;
            let term = parse_class_term(&args.class).map_err(|e| CliError::Input(e.to_string()))?;
            let class = paradox_core::formula::class_extension(&m, &term, &ClassEnv::new())
                .map_err(|e| CliError::Input(e.to_string()))?;
            let mut report = Report::new();
            report.count("class_extension_bitmap", class.extension);
            emit_verdict(&mut report, &m, class.extension);
            Ok(report)
        }
        Command::Catalog(args) => run_catalog(cli, args),
        Command::Rules(cmd) => run_rules(cmd),
        Command::Hierarchy(HierarchyCommand::Build(args)) => {
            cap(args.rank_universe, RANK_UNIVERSE_CAP, "--rank-universe", cli.unsafe_budget)?;
            let mut store = SetStore::new();
            let cfg = StageConfig {
                stage_count: args.stages,
                seed_rank: args.seed_rank,
                card_budget: args.card_budget,
                rank_budget: args.rank_budget,
                include_limit: args.limit,
            };
            let stages = build_stages(&mut store, &cfg);
            let mut report = Report::new();
            for stage in &stages {
                let name = match stage.index {
                    StageIndex::Finite(i) => format!("stage_{i}"),
                    StageIndex::Limit => "stage_limit".into(),
                };
                report.count(format!("{name}_size"), stage.cardinality as u64);
                report.count(format!("{name}_truncated"), u64::from(stage.truncated));
                // Stage dump: one member per line in canonical order.
                for m in &stage.members {
                    report.witness(stage.cardinality as u64, &name, store.display(*m));
                }
            }
            if args.axiom_report {
                report.merge(axiom_report(&mut store, args.rank_universe)?);
            }
            Ok(report)
        }
        Command::Diagonal(args) => {
            cap(args.size, 4, "--size", cli.unsafe_budget)?;
            Ok(diagonal_sweep(args.size, args.size.max(4))?)
        }
        Command::Los(args) => match args.mode.as_str() {
            "cumulative" => {
                cap(args.stages, LOS_STAGE_CAP, "--stages", cli.unsafe_budget)?;
                Ok(los_cumulative(args.stages, args.omega))
            }
            "cardinal" => Ok(los_cardinal(args.threshold, args.ground)),
            "zermelo" => {
                cap(args.ground, 4, "--ground", cli.unsafe_budget)?;
                Ok(los_zermelo_exhaustive(args.ground))
            }
            other => Err(CliError::Usage(format!("unknown los mode `{other}`"))),
        },
    }
}

fn parse_mutation(name: &Option<String>) -> Result<Option<Mutation>, CliError> {
    match name {
        None => Ok(None),
        Some(n) => Mutation::from_name(n)
            .map(Some)
            .ok_or_else(|| CliError::Usage(format!("unknown mutation `{n}`"))),
    }
}

fn run_formula_level(args: &PrincipleArgs, mutation: Option<Mutation>) -> Result<Report, CliError> {
    productivity::verify_principle_formula_level(args.max_universe, args.formula_depth, mutation)
        .map_err(CliError::from)
}

fn emit_verdict(report: &mut Report, m: &Structure, extension: u64) {
    match decide(m, extension) {
        Verdict::Set(e) => {
            report.count("verdict_set", 1);
            report.witness(extension, "representative", m.label(e));
            report.count(
                "productive_choice_exists",
                u64::from(productive_choice_exists(m, extension)),
            );
        }
        Verdict::Paradoxical(cert) => {
            report.count("verdict_paradoxical", 1);
            report.check("certificate-valid", cert.validate(m, extension));
            for entry in &cert.entries {
                report.witness(extension, m.label(entry.element), m.label(entry.witness));
            }
        }
    }
}

fn load_universe(path: &Option<PathBuf>) -> Result<Structure, CliError> {
    let path = path
        .as_ref()
        .ok_or_else(|| CliError::Usage("this catalog kind needs --universe FILE".into()))?;
    let text =
        fs::read_to_string(path).map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?;
    Ok(Structure::parse(&text)?)
}

fn run_catalog(cli: &Cli, args: &CatalogArgs) -> Result<Report, CliError> {
    let mut report = Report::new();
    match args.which.as_str() {
        "russell" => {
            let m = load_universe(&args.universe)?;
            let out = productivity::russell(&m);
            report.count("class_extension_bitmap", out.class.extension);
            emit_verdict(&mut report, &m, out.class.extension);
        }
        which if which.starts_with("rn:") => {
            let n: u32 = which[3..]
                .parse()
                .map_err(|_| CliError::Usage(format!("bad cycle length in `{which}`")))?;
            let m = load_universe(&args.universe)?;
            let out = productivity::not_n_cyclic(&m, n);
            report.count("class_extension_bitmap", out.class.extension);
            emit_verdict(&mut report, &m, out.class.extension);
        }
        "sikic" => {
            let m = load_universe(&args.universe)?;
            let map_text = args
                .map
                .as_ref()
                .ok_or_else(|| CliError::Usage("sikic needs --map a:b,…".into()))?;
            let mut f = vec![usize::MAX; m.size()];
            for part in map_text.split(',') {
                let (from, to) = part
                    .split_once(':')
                    .ok_or_else(|| CliError::Usage(format!("bad map entry `{part}`")))?;
                let from = m
                    .element_by_label(from.trim())
                    .ok_or_else(|| CliError::Input(format!("unknown element `{from}`")))?;
                let to = m
                    .element_by_label(to.trim())
                    .ok_or_else(|| CliError::Input(format!("unknown element `{to}`")))?;
                f[from] = to;
            }
            if f.iter().any(|t| *t == usize::MAX) {
                return Err(CliError::Usage("sikic map must cover every element".into()));
            }
            let out = productivity::sikic(&m, &f)?;
            report.count("class_extension_bitmap", out.class.extension);
            emit_verdict(&mut report, &m, out.class.extension);
        }
        "ni" => {
            let mut store = SetStore::new();
            report.merge(ni_demo(&mut store, args.rank_budget, args.card_budget, 64)?);
        }
        "wf" => {
            let mut store = SetStore::new();
            report.merge(wf_demo(&mut store, args.rank_budget, args.card_budget));
        }
        "nwf" => {
            use rand::SeedableRng;
            let mut passes = 0u64;
            for i in 0..args.stores {
                let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(cli.seed.wrapping_add(i as u64));
                let mut store = random_hyperset_store(&mut rng);
                let r = nwf_demo(&mut store, args.card_budget);
                if r.has_failure() {
                    report.merge(r);
                } else {
                    passes += 1;
                }
            }
            report.count("stores", args.stores as u64);
            report.count("stores_passing", passes);
            report.check("nwf-demo", passes == args.stores as u64);
        }
        which if which.starts_with("inj:") => {
            let op = InjectiveOp::from_name(&which[4..])
                .ok_or_else(|| CliError::Usage(format!("unknown injective op in `{which}`")))?;
            let mut store = SetStore::new();
            report.merge(injective_image_demo(&mut store, op, args.rank_budget, args.card_budget)?);
        }
        other => return Err(CliError::Usage(format!("unknown catalog kind `{other}`"))),
    }
    Ok(report)
}

fn run_rules(cmd: &RulesCommand) -> Result<Report, CliError> {
    let (args, which) = match cmd {
        RulesCommand::Validate(a) => (a, "validate"),
        RulesCommand::Lfp(a) => (a, "lfp"),
        RulesCommand::Gfp(a) => (a, "gfp"),
        RulesCommand::Productivity(a) => (a, "productivity"),
    };
    let text = fs::read_to_string(&args.rules)
        .map_err(|e| CliError::Input(format!("cannot read {}: {e}", args.rules.display())))?;
    let file = parse_rules_file(&text).map_err(|e| CliError::Input(e.to_string()))?;
    let mut report = Report::new();
    match (which, file) {
        ("validate", RuleFile::Abstract(sys)) => {
            let v = sys.validate();
            report.count("bounded", 0);
            report.check("deterministic", v.deterministic.is_ok());
            if let Err((x, p1, p2)) = v.deterministic {
                report.witness(p1, format!("{p2:b}"), sys.labels[x].clone());
            }
            report.check("global", v.global.is_ok());
            if let Err(s) = v.global {
                report.witness(s, "underivable-premise", format!("{s:b}"));
            }
        }
        ("validate", RuleFile::Store(sys)) => {
            let mut store = SetStore::new();
            let v = sys.validate(&mut store);
            report.count("bounded", 1);
            report.check("deterministic", v.deterministic.is_ok());
            report.check("global", v.global.is_ok());
        }
        ("lfp", RuleFile::Abstract(sys)) => {
            let fp = sys.lfp(args.budget);
            report.count("size", fp.set.count_ones() as u64);
            report.count("stages", fp.stages.len() as u64);
            report.count("unstable", u64::from(fp.unstable));
            for (i, label) in sys.labels.iter().enumerate() {
                if fp.set >> i & 1 == 1 {
                    report.witness(fp.set, "member", label.clone());
                }
            }
        }
        ("lfp", RuleFile::Store(sys)) => {
            let mut store = SetStore::new();
            let fp = sys.lfp(&mut store, args.budget);
            report.count("size", fp.set.len() as u64);
            report.count("stages", fp.stages.len() as u64);
            report.count("unstable", u64::from(fp.unstable));
            report.count("truncated", u64::from(fp.truncated));
            for h in &fp.set {
                report.witness(fp.set.len() as u64, "member", store.display(*h));
            }
        }
        ("gfp", RuleFile::Abstract(sys)) => {
            let fp = sys.gfp(args.budget);
            report.count("size", fp.set.count_ones() as u64);
            for (i, label) in sys.labels.iter().enumerate() {
                if fp.set >> i & 1 == 1 {
                    report.witness(fp.set, "member", label.clone());
                }
            }
        }
        ("gfp", RuleFile::Store(sys)) => {
            let mut store = SetStore::new();
            let fp = sys.gfp(&mut store, args.budget);
            report.count("size", fp.set.len() as u64);
            report.count("truncated", u64::from(fp.truncated));
            for h in &fp.set {
                report.witness(fp.set.len() as u64, "member", store.display(*h));
            }
        }
        ("productivity", RuleFile::Abstract(sys)) => {
            report.merge(sys.productivity_on_lfp(args.budget));
        }
        ("productivity", RuleFile::Store(sys)) => {
            let mut store = SetStore::new();
            report.merge(sys.productivity_on_lfp(&mut store, args.budget)?);
        }
        _ => unreachable!(),
    }
    Ok(report)
}
