use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use anyhow::{bail, Context};
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Map, Value};

use cliquepart::bounds::{
    cp21_3_certificate, identity_check_phi, known_cp_table, phi, projective_plane_exists, qr_sieve, theorem2_bound,
    theorem2_threshold_r3, PlaneExistence,
};
use cliquepart::conics::build_conic_design_with;
use cliquepart::curves::{build_curves_with_budget, coverage_census_with, max_pairwise_intersection, DEFAULT_CURVE_BUDGET};
use cliquepart::design::{
    derive_link, partition_stats, read_design, render_design, verify_coverage_with, CensusConfig, Design, Mode,
    DEFAULT_CENSUS_BUDGET,
};
use cliquepart::inversive::{build_inversive, verify_circle_axioms, AxiomConfig};
use cliquepart::search::{greedy_complete_with, solve_cp, LowerBoundOracle, SearchConfig};
use cliquepart::witt::{build_golay, build_s843, octad_designs};
use cliquepart::zarankiewicz::{brute_z, convexity_upper_bound, verify_lemma7};
use cliquepart::Error as CoreError;

const EXIT_PROPERTY: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_RESOURCE: u8 = 3;

#[derive(Parser)]
#[command(name = "cliquepart", version, about = "Build and verify clique partitions of complete uniform hypergraphs")]
struct Cli {
    /// Report format.
    #[arg(long, value_enum, global = true, default_value_t = Output::Json)]
    output: Output,
    /// Where to write the design produced by the command.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads (default: available parallelism).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Largest r-set space a census may allocate.
    #[arg(long, global = true)]
    budget: Option<u128>,
    /// Wall-clock limit in seconds for searches.
    #[arg(long, global = true)]
    time_limit: Option<f64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Output {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Construct a design.
    #[command(subcommand)]
    Build(Build),
    /// Exact coverage census of a design file.
    Verify {
        #[arg(long)]
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = ModeArg::Partition)]
        mode: ModeArg,
        /// Also check the three inversive-plane axioms (needs n = q² + 1).
        #[arg(long)]
        axioms: bool,
        /// Seed for sampled axiom-3 checks.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Derived design at a point.
    Link {
        #[arg(long)]
        file: PathBuf,
        #[arg(long)]
        point: u32,
    },
    /// Exact lower bounds and sieves.
    #[command(subcommand)]
    Bounds(Bounds),
    /// Zarankiewicz numbers.
    #[command(subcommand)]
    Z(Z),
    /// Exact and heuristic search.
    #[command(subcommand)]
    Search(Search),
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Partition,
    Packing,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::Partition => Mode::Partition,
            ModeArg::Packing => Mode::Packing,
        }
    }
}

#[derive(Subcommand)]
enum Build {
    /// Circles of the inversive plane of order q (q = 3 mod 4).
    Inversive {
        #[arg(long)]
        q: u64,
    },
    /// Polynomial graphs of degree < r over GF(q).
    Curves {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        r: usize,
    },
    /// Conics of PG(2, q) as a packing of 4- or 5-sets.
    Conics {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        r: usize,
    },
    /// Octad designs from the extended Golay code.
    Witt {
        #[arg(long, value_enum)]
        which: Witt,
    },
    /// The Steiner system S(8,4,3).
    S843,
}

#[derive(Clone, Copy, ValueEnum)]
enum Witt {
    S24,
    S23,
    S22,
}

#[derive(Subcommand)]
enum Bounds {
    /// The lower bound phi(n, r) in exact arithmetic.
    Phi {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        r: u64,
    },
    /// Lower bound from the smallest link size L.
    Theorem2 {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        r: u64,
        #[arg(long)]
        l: u64,
    },
    /// Orders q passing the divisibility conditions for S(q²+q+r-1, q+r-1, r).
    Qsieve {
        #[arg(long)]
        r: u64,
        #[arg(long, default_value_t = 1000)]
        qmax: u64,
    },
    /// Known exact values of cp(n, r).
    Table,
    /// Check phi(n,r)(q+r-1) = n phi(n-1,r-1) exactly.
    Identity {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        r: u64,
    },
}

#[derive(Subcommand)]
enum Z {
    /// Certify z(m, n, 2, r) >= km from a uniform partition file.
    Lemma7 {
        #[arg(long)]
        file: PathBuf,
    },
    /// Exact z(m, n, s, t) by branch and bound (n <= 20).
    Brute {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        s: usize,
        #[arg(long)]
        t: usize,
    },
    /// Counting upper bound on z(m, n, 2, r).
    Convexity {
        #[arg(long)]
        m: u64,
        #[arg(long)]
        n: u64,
        #[arg(long)]
        r: u64,
    },
}

#[derive(Subcommand)]
enum Search {
    /// Branch and bound for cp(n, r).
    Cp {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        r: usize,
        /// Known partition to start from.
        #[arg(long)]
        seed: Option<PathBuf>,
        #[arg(long)]
        max_block: Option<usize>,
        #[arg(long, value_enum, default_value_t = OracleArg::Phi)]
        oracle: OracleArg,
    },
    /// Greedily complete a packing to a partition with r-set blocks.
    Complete {
        #[arg(long)]
        file: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum OracleArg {
    Phi,
    Theorem2,
    None,
}

impl From<OracleArg> for LowerBoundOracle {
    fn from(o: OracleArg) -> Self {
        match o {
            OracleArg::Phi => LowerBoundOracle::Phi,
            OracleArg::Theorem2 => LowerBoundOracle::Theorem2,
            OracleArg::None => LowerBoundOracle::None,
        }
    }
}

/// A finished command: the report, the design it produced (if any) and
/// whether the mathematical property it checked holds.
struct Outcome {
    command: &'static str,
    report: Value,
    design: Option<Design>,
    exit: u8,
}

impl Outcome {
    fn new(command: &'static str, report: impl Serialize) -> anyhow::Result<Self> {
        Ok(Outcome { command, report: serde_json::to_value(report)?, design: None, exit: 0 })
    }

    fn with_design(mut self, d: Design) -> Self {
        self.design = Some(d);
        self
    }

    fn holds(mut self, ok: bool) -> Self {
        if !ok {
            self.exit = EXIT_PROPERTY;
        }
        self
    }
}

struct Ctx {
    census: CensusConfig,
    budget: Option<u128>,
    time_limit: Option<Duration>,
}

fn design_summary(d: &Design) -> Value {
    json!({ "label": d.label(), "n": d.n(), "r": d.r(), "blocks": d.len() })
}

fn build(cmd: Build, ctx: &Ctx) -> anyhow::Result<Outcome> {
    let out = match cmd {
        Build::Inversive { q } => {
            let d = build_inversive(q)?.into_design();
            Outcome::new("build inversive", design_summary(&d))?.with_design(d)
        }
        Build::Curves { q, r } => {
            let fam = build_curves_with_budget(q, r, ctx.budget.unwrap_or(DEFAULT_CURVE_BUDGET))?;
            let census = coverage_census_with(&fam, &ctx.census)?;
            let mut rep = design_summary(fam.design());
            rep["census"] = serde_json::to_value(&census)?;
            rep["max_pairwise_intersection"] = json!(max_pairwise_intersection(fam.design()));
            let ok = census.matches_closed_form && census.multicovered == 0;
            Outcome::new("build curves", rep)?.with_design(fam.into_design()).holds(ok)
        }
        Build::Conics { q, r } => {
            let cd = build_conic_design_with(q, r, &ctx.census)?;
            let ok = cd.matches_formula && cd.census.is_packing;
            let mut rep = serde_json::to_value(&cd)?;
            rep["label"] = json!(cd.design.label());
            rep["n"] = json!(cd.design.n());
            Outcome::new("build conics", rep)?.with_design(cd.design).holds(ok)
        }
        Build::Witt { which } => {
            let code = build_golay()?;
            let o = octad_designs(&code)?;
            let d = match which {
                Witt::S24 => o.s24,
                Witt::S23 => o.s23,
                Witt::S22 => o.s22,
            };
            let mut rep = design_summary(&d);
            rep["golay_weights"] = json!(code.weights.iter().enumerate().filter(|(_, &c)| c > 0).map(|(w, c)| json!([w, c])).collect::<Vec<_>>());
            Outcome::new("build witt", rep)?.with_design(d)
        }
        Build::S843 => {
            let d = build_s843()?;
            Outcome::new("build s843", design_summary(&d))?.with_design(d)
        }
    };
    Ok(out)
}

fn isqrt_exact(x: usize) -> Option<u32> {
    let r = (x as f64).sqrt().round() as usize;
    (r * r == x).then_some(r as u32)
}

fn verify(file: PathBuf, mode: ModeArg, axioms: bool, seed: Option<u64>, ctx: &Ctx) -> anyhow::Result<Outcome> {
    let d = read_design(&file).with_context(|| format!("reading {}", file.display()))?;
    let rep = verify_coverage_with(&d, mode.into(), &ctx.census)?;
    let mut ok = match mode {
        ModeArg::Partition => rep.is_partition,
        ModeArg::Packing => rep.is_packing,
    };
    let mut v = serde_json::to_value(&rep)?;
    v["label"] = json!(d.label());
    v["n"] = json!(d.n());
    v["r"] = json!(d.r());
    v["blocks"] = json!(d.len());
    v["stats"] = serde_json::to_value(partition_stats(&d))?;
    if axioms {
        let Some(q) = d.n().checked_sub(1).and_then(isqrt_exact) else {
            bail!(CoreError::BadParams(format!("n = {} is not q² + 1", d.n())));
        };
        let mut cfg = AxiomConfig { census: ctx.census.clone(), ..AxiomConfig::default() };
        if let Some(s) = seed {
            cfg.seed = s;
        }
        let ax = verify_circle_axioms(&d, q, &cfg)?;
        ok &= ax.all_hold();
        v["axioms"] = serde_json::to_value(&ax)?;
    }
    Ok(Outcome::new("verify", v)?.holds(ok))
}

fn link(file: PathBuf, point: u32, ctx: &Ctx) -> anyhow::Result<Outcome> {
    let d = read_design(&file).with_context(|| format!("reading {}", file.display()))?;
    let l = derive_link(&d, point)?;
    let mut v = design_summary(&l.design);
    v["degenerate"] = json!(l.degenerate);
    v["statistics_only"] = json!(l.statistics_only);
    v["stats"] = serde_json::to_value(partition_stats(&l.design))?;
    if !l.statistics_only {
        v["census"] = serde_json::to_value(verify_coverage_with(&l.design, Mode::Partition, &ctx.census)?)?;
    }
    Ok(Outcome::new("link", v)?.with_design(l.design))
}

fn bounds(cmd: Bounds) -> anyhow::Result<Outcome> {
    Ok(match cmd {
        Bounds::Phi { n, r } => Outcome::new("bounds phi", phi(n, r)?)?,
        Bounds::Theorem2 { n, r, l } => {
            let bound = theorem2_bound(n, r, l)?;
            let mut v = json!({ "n": n, "r": r, "l": l, "bound": bound, "certified": true });
            if r == 3 {
                v["threshold"] = serde_json::to_value(theorem2_threshold_r3(n, l)?)?;
            }
            if (n, r, l) == (21, 3, 21) {
                v["cp21_3"] = serde_json::to_value(cp21_3_certificate()?)?;
            }
            Outcome::new("bounds theorem2", v)?
        }
        Bounds::Qsieve { r, qmax } => Outcome::new("bounds qsieve", qr_sieve(r, qmax)?)?,
        Bounds::Table => {
            let planes: Vec<Value> = (2..=12u64)
                .map(|o| {
                    let s = match projective_plane_exists(o) {
                        PlaneExistence::Exists => "exists",
                        PlaneExistence::DoesNotExist => "does_not_exist",
                        PlaneExistence::Unknown => "unknown",
                    };
                    json!({ "order": o, "plane": s })
                })
                .collect();
            Outcome::new("bounds table", json!({ "known_cp": known_cp_table(), "projective_planes": planes }))?
        }
        Bounds::Identity { n, r } => {
            let holds = identity_check_phi(n, r)?;
            Outcome::new("bounds identity", json!({ "n": n, "r": r, "holds": holds }))?.holds(holds)
        }
    })
}

fn zcmd(cmd: Z, ctx: &Ctx) -> anyhow::Result<Outcome> {
    Ok(match cmd {
        Z::Lemma7 { file } => {
            let d = read_design(&file).with_context(|| format!("reading {}", file.display()))?;
            let rep = verify_lemma7(&d)?;
            let ok = rep.meets;
            Outcome::new("z lemma7", rep)?.holds(ok)
        }
        Z::Brute { m, n, s, t } => {
            let z = brute_z(m, n, s, t, ctx.time_limit)?;
            let mut out = Outcome::new("z brute", &z)?;
            if !z.exact {
                out.exit = EXIT_RESOURCE;
            }
            out
        }
        Z::Convexity { m, n, r } => {
            let ub = convexity_upper_bound(m, n, r)?;
            Outcome::new("z convexity", json!({ "m": m, "n": n, "s": 2, "t": r, "upper_bound": ub }))?
        }
    })
}

fn search(cmd: Search, ctx: &Ctx) -> anyhow::Result<Outcome> {
    Ok(match cmd {
        Search::Cp { n, r, seed, max_block, oracle } => {
            let mut cfg = SearchConfig::new(n, r);
            cfg.max_block_size = max_block;
            cfg.oracle = oracle.into();
            cfg.time_limit = ctx.time_limit;
            if let Some(path) = seed {
                cfg.seed = Some(read_design(&path).with_context(|| format!("reading {}", path.display()))?);
            }
            let res = solve_cp(&cfg)?;
            let cert = res.certificate.clone();
            let check = verify_coverage_with(&cert, Mode::Partition, &ctx.census)?;
            let mut v = serde_json::to_value(&res)?;
            v["certificate_verified"] = json!(check.is_partition);
            let mut out = Outcome::new("search cp", v)?.with_design(cert).holds(check.is_partition);
            if res.timed_out && !res.proven_optimal && out.exit == 0 {
                out.exit = EXIT_RESOURCE;
            }
            out
        }
        Search::Complete { file } => {
            let d = read_design(&file).with_context(|| format!("reading {}", file.display()))?;
            let g = greedy_complete_with(&d, &ctx.census)?;
            let design = g.design.clone();
            Outcome::new("search complete", g)?.with_design(design)
        }
    })
}

fn run(cli: Cli) -> anyhow::Result<u8> {
    let ctx = Ctx {
        census: CensusConfig { budget: cli.budget.unwrap_or(DEFAULT_CENSUS_BUDGET), threads: cli.threads },
        budget: cli.budget,
        time_limit: match cli.time_limit {
            Some(s) if !(s.is_finite() && s >= 0.0) => bail!(CoreError::BadParams(format!("time limit {s}"))),
            s => s.map(Duration::from_secs_f64),
        },
    };
    let outcome = match cli.command {
        Command::Build(b) => build(b, &ctx)?,
        Command::Verify { file, mode, axioms, seed } => verify(file, mode, axioms, seed, &ctx)?,
        Command::Link { file, point } => link(file, point, &ctx)?,
        Command::Bounds(b) => bounds(b)?,
        Command::Z(z) => zcmd(z, &ctx)?,
        Command::Search(s) => search(s, &ctx)?,
    };
    emit(&outcome, cli.out.as_deref(), cli.output)?;
    Ok(outcome.exit)
}

/// The design goes to `--out` when given, otherwise to stdout with the
/// report moved to stderr.
fn emit(o: &Outcome, out: Option<&std::path::Path>, fmt: Output) -> anyhow::Result<()> {
    let mut report = Map::new();
    report.insert("report".into(), json!("v1"));
    report.insert("command".into(), json!(o.command));
    match &o.report {
        Value::Object(m) => report.extend(m.clone()),
        other => {
            report.insert("result".into(), other.clone());
        }
    }
    if let (Some(_), Some(path)) = (&o.design, out) {
        report.insert("design_file".into(), json!(path.display().to_string()));
    }
    let text = match fmt {
        Output::Json => serde_json::to_string_pretty(&Value::Object(report))? + "\n",
        Output::Text => report
            .iter()
            .map(|(k, v)| match v {
                Value::String(s) => format!("{k}: {s}\n"),
                v => format!("{k}: {v}\n"),
            })
            .collect(),
    };
    match (&o.design, out) {
        (Some(d), Some(path)) => {
            fs::write(path, render_design(d)).with_context(|| format!("writing {}", path.display()))?;
            io::stdout().write_all(text.as_bytes())?;
        }
        (Some(d), None) => {
            io::stdout().write_all(render_design(d).as_bytes())?;
            io::stderr().write_all(text.as_bytes())?;
        }
        (None, _) => io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn exit_code(e: &anyhow::Error) -> u8 {
    match e.downcast_ref::<CoreError>() {
        Some(
            CoreError::BudgetExceeded { .. } | CoreError::RsetSpaceTooLarge { .. } | CoreError::CapExceeded { .. },
        ) => EXIT_RESOURCE,
        Some(CoreError::ConstructionFailed(_)) => EXIT_PROPERTY,
        _ => EXIT_USAGE,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if n == 0 {
            eprintln!("error: --threads must be positive");
            return ExitCode::from(EXIT_USAGE);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_USAGE);
        }
    }
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
