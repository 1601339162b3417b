mod pretty;

use std::fmt::Display;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::value::RawValue;
use serde_json::{json, Value};

use critnum::cache::{CacheError, CacheKey, ResultCache};
use critnum::catalog::{catalog_init, resolve_group};
use critnum::critnum::{
    cr_exhaustive, cr_formula, cr_sampled_upper, resolving_sequence, witness_lower_bound_all, CrCertificate,
    CritError, ExhaustiveOptions, FormulaFacts, DEFAULT_BUDGET,
};
use critnum::group::{load_cayley, make_group, save_cayley, Descriptor, GroupError, GroupTable};
use critnum::lemma_lab::{self, LabError, LemmaId, Mode, VerificationReport, VerifyOptions, DEFAULT_SEED, DEFAULT_TRIALS};
use critnum::sumset::{sigma, SumsetError};
use critnum::ElementSet;

/// Subset sums, critical numbers and lemma checks for finite groups.
#[derive(Parser)]
#[command(name = "critnum", version)]
struct Cli {
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Human-readable output instead of JSON.
    #[arg(long, global = true)]
    pretty: bool,
    /// Subset budget for exhaustive critical-number runs.
    #[arg(long, global = true, default_value_t = DEFAULT_BUDGET)]
    budget: u64,
    /// Seed for sampled runs.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Neither read nor write the result cache.
    #[arg(long, global = true)]
    no_cache: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build, load or inspect a group.
    #[command(subcommand)]
    Group(GroupCmd),
    /// Subset-sum closure Σ(S).
    Sigma {
        #[command(flatten)]
        target: Target,
        /// Also report Σ_r(S) for every r.
        #[arg(long)]
        by_cardinality: bool,
    },
    /// Critical number certificates.
    #[command(subcommand)]
    Cr(CrCmd),
    /// Resolving sequence of a subset.
    Resolve {
        #[command(flatten)]
        target: Target,
    },
    /// Run a lemma verifier.
    Verify {
        /// L2.1 .. L2.6, L2.5i .. L2.5v, EQ2.1, EQ2.2, INEQ2.3, INEQ2.4, RSEQ, CDFOLD, T1.3small
        id: String,
        #[arg(long)]
        group: Option<String>,
        #[arg(long)]
        mode: Option<String>,
        #[arg(long, default_value_t = DEFAULT_TRIALS)]
        trials: u64,
    },
    /// The built-in groups.
    #[command(subcommand)]
    Catalog(CatalogCmd),
}

#[derive(Subcommand)]
enum GroupCmd {
    /// Construct from a descriptor such as D7, Z9:Z3(k=4) or dihedral(5).
    Make {
        descriptor: String,
        /// Write the Cayley table here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Validate a Cayley table file.
    Load { path: PathBuf },
    /// Structure summary and multiplication table.
    Show { group: String },
}

#[derive(Subcommand)]
enum CrCmd {
    /// Exact value by exhaustive search.
    Exact(GroupArg),
    /// Closed-form prediction, when one applies.
    Formula(GroupArg),
    /// Lower bound from an explicit non-basis.
    Witness(GroupArg),
    /// Random evidence for cr <= t.
    Sample {
        #[command(flatten)]
        group: GroupArg,
        #[arg(long)]
        t: usize,
        #[arg(long, default_value_t = DEFAULT_TRIALS)]
        trials: u64,
        /// Extra subsets to check first (repeatable), e.g. 1,3,6.
        #[arg(long)]
        inject: Vec<String>,
    },
}

#[derive(Subcommand)]
enum CatalogCmd {
    List,
}

#[derive(Args)]
struct GroupArg {
    /// Catalog name, descriptor, or path to a Cayley table file.
    #[arg(long)]
    group: String,
}

#[derive(Args)]
struct Target {
    #[arg(long)]
    group: String,
    /// Comma-separated element indices.
    #[arg(long)]
    set: String,
}

/// An error together with the exit code it maps to.
struct Failure {
    code: u8,
    msg: String,
}

impl Failure {
    fn usage(msg: impl Display) -> Self {
        Failure {
            code: 2,
            msg: msg.to_string(),
        }
    }

    fn failed(msg: impl Display) -> Self {
        Failure {
            code: 1,
            msg: msg.to_string(),
        }
    }
}

impl From<CacheError> for Failure {
    fn from(e: CacheError) -> Self {
        Failure::failed(e)
    }
}

impl From<SumsetError> for Failure {
    fn from(e: SumsetError) -> Self {
        Failure::usage(e)
    }
}

impl From<GroupError> for Failure {
    fn from(e: GroupError) -> Self {
        match e {
            GroupError::UnknownDescriptor(_) | GroupError::InvalidParameters(_) | GroupError::TooLarge(_) => {
                Failure::usage(e)
            }
            _ => Failure::failed(e),
        }
    }
}

impl From<CritError> for Failure {
    fn from(e: CritError) -> Self {
        match e {
            CritError::Precondition(_) | CritError::Sumset(_) => Failure::usage(e),
            CritError::Group(g) => g.into(),
            _ => Failure::failed(e),
        }
    }
}

impl From<LabError> for Failure {
    fn from(e: LabError) -> Self {
        match e {
            LabError::Crit(c) => c.into(),
            LabError::Group(g) => g.into(),
            LabError::Precondition(_) | LabError::Sumset(_) | LabError::Malformed(_) => Failure::usage(e),
        }
    }
}

/// Writes to stdout; a closed pipe (e.g. `| head`) ends the process quietly.
fn out(text: &str) {
    let mut stdout = std::io::stdout().lock();
    if let Err(e) = stdout.write_all(text.as_bytes()).and_then(|()| stdout.flush()) {
        if e.kind() == std::io::ErrorKind::BrokenPipe {
            std::process::exit(0);
        }
        eprintln!("error: writing output: {e}");
        std::process::exit(1);
    }
}

struct Ctx {
    pretty: bool,
    budget: u64,
    seed: u64,
    cache: Option<ResultCache>,
}

impl Ctx {
    fn emit(&self, json: &str) {
        if self.pretty {
            let v: Value = serde_json::from_str(json).expect("emitted JSON is valid");
            out(&pretty::render(&v));
        } else {
            out(&format!("{json}\n"));
        }
    }

    /// Serves `key` from the cache or computes and stores it.
    fn cached<T: serde::Serialize>(
        &mut self,
        key: CacheKey,
        compute: impl FnOnce() -> Result<T, Failure>,
    ) -> Result<String, Failure> {
        match self.cache.as_mut() {
            Some(cache) => Ok(cache.get_or_insert(&key, compute)?.0),
            None => Ok(serde_json::to_string(&compute()?).expect("records serialize")),
        }
    }
}

fn group_arg(spec: &str) -> Result<GroupTable, Failure> {
    let path = Path::new(spec);
    if path.is_file() {
        let text = std::fs::read_to_string(path).map_err(|e| Failure::usage(format!("{spec}: {e}")))?;
        return Ok(load_cayley(&text)?);
    }
    resolve_group(spec).map_err(|e| Failure::usage(format!("unknown group {spec:?}: {e}")))
}

fn parse_set(g: &GroupTable, text: &str) -> Result<ElementSet, Failure> {
    let mut s = ElementSet::EMPTY;
    for part in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let x: usize = part
            .parse()
            .map_err(|_| Failure::usage(format!("bad element {part:?} in set {text:?}")))?;
        if x >= g.order() {
            return Err(Failure::usage(format!("element {x} out of range for {} (order {})", g.name(), g.order())));
        }
        s.insert(x);
    }
    Ok(s)
}

fn summary(g: &GroupTable) -> Value {
    let facts = FormulaFacts::of(g);
    json!({
        "name": g.name(),
        "order": g.order(),
        "abelian": facts.abelian,
        "nilpotent": facts.nilpotent,
        "has_index2_subgroup": facts.has_index2_subgroup,
        "smallest_prime": facts.smallest_prime,
        "fingerprint": g.fingerprint(),
        "labels": g.labels(),
    })
}

fn check_cert(cert: &str, g: &GroupTable) -> Result<(), Failure> {
    let parsed: CrCertificate = serde_json::from_str(cert).expect("certificates round-trip");
    parsed
        .check(g)
        .map_err(|e| Failure::failed(format!("certificate contradiction: {e}")))
}

fn run(cli: Cli) -> Result<(), Failure> {
    if let Some(jobs) = cli.jobs {
        if jobs == 0 {
            return Err(Failure::usage("--jobs must be at least 1"));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
            .map_err(Failure::failed)?;
    }
    let cache = if cli.no_cache {
        None
    } else {
        Some(ResultCache::from_env()?)
    };
    let mut ctx = Ctx {
        pretty: cli.pretty,
        budget: cli.budget,
        seed: cli.seed,
        cache,
    };

    match cli.command {
        Command::Group(cmd) => group_cmd(&ctx, cmd),
        Command::Sigma { target, by_cardinality } => {
            let g = group_arg(&target.group)?;
            let s = parse_set(&g, &target.set)?;
            let c = sigma(&g, s, by_cardinality)?;
            let mut out = json!({
                "group": g.name(),
                "set": s,
                "sigma": c.full,
                "size": c.full.len(),
                "is_basis": c.full == g.full_set(),
            });
            if let Some(slices) = c.by_cardinality {
                out["by_cardinality"] = json!(slices);
            }
            ctx.emit(&out.to_string());
            Ok(())
        }
        Command::Resolve { target } => {
            let g = group_arg(&target.group)?;
            let s = parse_set(&g, &target.set)?;
            let seq = resolving_sequence(&g, s)?;
            let mut out = json!({ "group": g.name(), "set": s });
            if let (Value::Object(o), Value::Object(extra)) = (&mut out, json!(seq)) {
                o.extend(extra);
            }
            ctx.emit(&out.to_string());
            Ok(())
        }
        Command::Cr(cmd) => cr_cmd(&mut ctx, cmd),
        Command::Verify {
            id,
            group,
            mode,
            trials,
        } => {
            let id: LemmaId = id.parse().map_err(Failure::usage)?;
            let mode: Option<Mode> = mode.map(|m| m.parse()).transpose().map_err(Failure::usage)?;
            let g = group.as_deref().map(group_arg).transpose()?;
            let opts = VerifyOptions {
                mode,
                seed: ctx.seed,
                trials,
                budget: ctx.budget,
            };
            let params = json!({"id": id, "mode": mode, "seed": ctx.seed, "trials": trials, "budget": ctx.budget});
            let key = match &g {
                Some(g) => CacheKey::new(g, "verify", &params)?,
                None => CacheKey::named("default", "", "verify", &params)?,
            };
            let json = ctx.cached(key, || Ok(lemma_lab::verify(id, g.as_ref(), &opts)?))?;
            let reports: Vec<Box<RawValue>> = serde_json::from_str(&json).expect("cached reports are a list");
            let mut failed = false;
            for raw in &reports {
                let r: VerificationReport = serde_json::from_str(raw.get()).expect("reports round-trip");
                failed |= !r.passed();
                ctx.emit(raw.get());
            }
            if failed {
                Err(Failure::failed("verification reported failures"))
            } else {
                Ok(())
            }
        }
        Command::Catalog(CatalogCmd::List) => {
            let entries = catalog_init();
            if ctx.pretty {
                out(&pretty::render(&json!(entries)));
            } else {
                for e in entries {
                    out(&format!("{}\n", json!(e)));
                }
            }
            Ok(())
        }
    }
}

fn group_cmd(ctx: &Ctx, cmd: GroupCmd) -> Result<(), Failure> {
    match cmd {
        GroupCmd::Make { descriptor, out } => {
            let d: Descriptor = descriptor.parse()?;
            let g = make_group(&d)?;
            if let Some(path) = out {
                std::fs::write(&path, save_cayley(&g)).map_err(|e| Failure::failed(format!("{}: {e}", path.display())))?;
            }
            ctx.emit(&summary(&g).to_string());
        }
        GroupCmd::Load { path } => {
            let text = std::fs::read_to_string(&path).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
            let g = load_cayley(&text)?;
            let mut s = summary(&g);
            if let Some(perm) = g.reindexed_from() {
                s["reindexed_from"] = json!(perm);
            }
            ctx.emit(&s.to_string());
        }
        GroupCmd::Show { group } => {
            let g = group_arg(&group)?;
            if ctx.pretty {
                out(&pretty::render(&summary(&g)));
                out(&pretty::cayley(&g));
            } else {
                let mut s = summary(&g);
                s["table"] = json!(g.rows());
                out(&format!("{s}\n"));
            }
        }
    }
    Ok(())
}

fn cr_cmd(ctx: &mut Ctx, cmd: CrCmd) -> Result<(), Failure> {
    match cmd {
        CrCmd::Exact(arg) => {
            let g = group_arg(&arg.group)?;
            let opts = ExhaustiveOptions {
                budget: ctx.budget,
                ..Default::default()
            };
            let key = CacheKey::new(&g, "cr.exact", &json!({ "budget": ctx.budget }))?;
            let cached = match ctx.cache.as_mut() {
                Some(cache) => cache.get(&key)?,
                None => None,
            };
            let json = match cached {
                Some(hit) => hit,
                None => match cr_exhaustive(&g, &opts) {
                    Ok(cert) => match ctx.cache.as_mut() {
                        Some(cache) => cache.put(&key, &cert)?,
                        None => serde_json::to_string(&cert).expect("certificates serialize"),
                    },
                    // bounds only; left out of the cache so a larger budget recomputes
                    Err(CritError::BudgetExhausted { partial, budget, .. }) => {
                        eprintln!("budget of {budget} subsets exhausted; reporting bounds only");
                        serde_json::to_string(&partial).expect("certificates serialize")
                    }
                    Err(e) => return Err(e.into()),
                },
            };
            check_cert(&json, &g)?;
            ctx.emit(&json);
        }
        CrCmd::Formula(arg) => {
            let g = group_arg(&arg.group)?;
            let key = CacheKey::new(&g, "cr.formula", &())?;
            let json = ctx.cached(key, || Ok(cr_formula(&g)))?;
            if json == "null" {
                eprintln!("no closed form applies to {}", g.name());
            }
            ctx.emit(&json);
        }
        CrCmd::Witness(arg) => {
            let g = group_arg(&arg.group)?;
            let key = CacheKey::new(&g, "cr.witness", &())?;
            let json = ctx.cached(key, || Ok(witness_lower_bound_all(&g)?))?;
            check_cert(&json, &g)?;
            ctx.emit(&json);
        }
        CrCmd::Sample {
            group,
            t,
            trials,
            inject,
        } => {
            let g = group_arg(&group.group)?;
            let injected = inject.iter().map(|s| parse_set(&g, s)).collect::<Result<Vec<_>, _>>()?;
            let params = json!({ "t": t, "trials": trials, "seed": ctx.seed, "inject": injected });
            let key = CacheKey::new(&g, "cr.sample", &params)?;
            let seed = ctx.seed;
            let json = ctx.cached(key, || Ok(cr_sampled_upper(&g, t, trials, seed, &injected)?))?;
            check_cert(&json, &g)?;
            ctx.emit(&json);
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.msg);
            if f.code == 2 {
                eprintln!("run `critnum --help` for usage");
            }
            ExitCode::from(f.code)
        }
    }
}
