use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use serde_json::{json, Value};

use subtree_stats::experiment::{self, ExperimentSpec, Family, Mode};
use subtree_stats::families::FamilySpec;
use subtree_stats::profile;
use subtree_stats::subtree::BigRatio;
use subtree_stats::{limits, verify, Exec, LogBase, Tree};

#[derive(Parser)]
#[command(name = "subtrees", version, about = "Subtree counts, densities and local profiles of trees")]
struct Cli {
    /// Run everything on one thread.
    #[arg(long, global = true)]
    sequential: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a family member as an edge list.
    Gen(GenArgs),
    /// Subtree statistics of a tree file as JSON.
    Stats(StatsArgs),
    /// Radius-r ball profile of a tree file.
    Profile(ProfileArgs),
    /// Convergence table for a family.
    Converge(ConvergeArgs),
    /// Run the invariant suite.
    Verify(VerifyArgs),
    /// Print the limit constants.
    Limits(LimitsArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum GenFamily {
    Path,
    Star,
    Comb,
    Broom,
    DoubleBroom,
    Bethe,
    CombStar,
    Caterpillar,
    Random,
}

#[derive(Args)]
struct GenArgs {
    family: GenFamily,
    /// Family parameters: `n` for path, star, comb, bethe and random; `p k`
    /// for broom; `p lambda` for double-broom; `n m` for comb-star; `k d1
    /// [d2 ...]` for caterpillar.
    #[arg(required = true)]
    params: Vec<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Base {
    E,
    #[value(name = "2")]
    Two,
}

impl From<Base> for LogBase {
    fn from(b: Base) -> Self {
        match b {
            Base::E => LogBase::E,
            Base::Two => LogBase::Two,
        }
    }
}

#[derive(Args)]
struct StatsArgs {
    file: PathBuf,
    /// Log-domain engine.
    #[arg(long)]
    log: bool,
    /// Base of the `entropy` field.
    #[arg(long, value_enum, default_value_t = Base::E)]
    base: Base,
    #[arg(long)]
    per_vertex: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ProfileArgs {
    file: PathBuf,
    #[arg(long = "radius", required = true)]
    radii: Vec<usize>,
    #[arg(long)]
    json: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum ConvergeFamily {
    Path,
    Star,
    Comb,
    Bethe,
    CombStar,
    DoubleBroom,
}

#[derive(Args)]
struct ConvergeArgs {
    family: ConvergeFamily,
    start: usize,
    end: usize,
    #[arg(long, default_value_t = 1)]
    step: usize,
    /// Ratio parameter for comb-star (m / n) and double-broom (lambda / log2 p).
    #[arg(long, default_value_t = 1.0)]
    x: f64,
    #[arg(long)]
    log: bool,
    #[arg(long = "radius")]
    radii: Vec<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, default_value_t = 200)]
    trees: usize,
    #[arg(long, default_value_t = 12)]
    max_n: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Largest tree checked against exhaustive enumeration.
    #[arg(long, default_value_t = 12)]
    oracle_cap: usize,
    /// Size limit for the deterministic family corpus.
    #[arg(long, default_value_t = 50)]
    families_up_to: usize,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct LimitsArgs {
    #[arg(long)]
    json: bool,
}

enum Failure {
    Usage(String),
    Invariant(String),
    Io(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 1,
            Failure::Invariant(_) => 2,
            Failure::Io(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Invariant(m) | Failure::Io(m) => m,
        }
    }
}

type Outcome = Result<(), Failure>;

fn usage(e: impl ToString) -> Failure {
    Failure::Usage(e.to_string())
}

/// Reads an edge list; `-` means stdin.
fn read_tree(path: &Path) -> Result<Tree, Failure> {
    let text = if path == Path::new("-") { io::read_to_string(io::stdin().lock()) } else { fs::read_to_string(path) }
        .map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
    Tree::parse(&text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn emit(out: Option<&Path>, text: &str) -> Outcome {
    match out {
        Some(p) => fs::write(p, text).map_err(|e| Failure::Io(format!("{}: {e}", p.display()))),
        None => {
            let mut stdout = io::stdout().lock();
            stdout.write_all(text.as_bytes()).map_err(|e| Failure::Io(e.to_string()))
        }
    }
}

fn arity(params: &[usize], want: usize, shape: &str) -> Result<(), Failure> {
    if params.len() != want {
        return Err(usage(format!("expected parameters: {shape}")));
    }
    Ok(())
}

fn cmd_gen(args: &GenArgs) -> Outcome {
    let p = &args.params;
    let spec = match args.family {
        GenFamily::Path | GenFamily::Star | GenFamily::Comb | GenFamily::Bethe | GenFamily::Random => {
            arity(p, 1, "n")?;
            match args.family {
                GenFamily::Path => FamilySpec::Path(p[0]),
                GenFamily::Star => FamilySpec::Star(p[0]),
                GenFamily::Comb => FamilySpec::Comb(p[0]),
                GenFamily::Bethe => FamilySpec::Bethe(p[0]),
                _ => FamilySpec::Random { n: p[0], seed: args.seed },
            }
        }
        GenFamily::Broom => {
            arity(p, 2, "p k")?;
            FamilySpec::Broom { handle: p[0], leaves: p[1] }
        }
        GenFamily::DoubleBroom => {
            arity(p, 2, "p lambda")?;
            FamilySpec::DoubleBroom { handle: p[0], leaves: p[1] }
        }
        GenFamily::CombStar => {
            arity(p, 2, "n m")?;
            FamilySpec::CombStar { comb: p[0], star: p[1] }
        }
        GenFamily::Caterpillar => {
            if p.len() < 2 {
                return Err(usage("expected parameters: k d1 [d2 ...]"));
            }
            FamilySpec::Caterpillar { gaps: p[1..].to_vec(), end_leaves: p[0] }
        }
    };
    let tree = spec.build().map_err(usage)?;
    emit(args.out.as_deref(), &tree.serialize())
}

fn ratio_json(r: &BigRatio) -> Value {
    json!({
        "num": r.numer().to_string(),
        "den": r.denom().to_string(),
        "value": limits::ratio_to_f64(r),
    })
}

fn cmd_stats(args: &StatsArgs) -> Outcome {
    let t = read_tree(&args.file)?;
    let base = LogBase::from(args.base);
    let doc = if args.log {
        let s = subtree_stats::analyze_log(&t);
        let mut doc = json!({
            "n": t.len(),
            "mode": "log",
            "lnTotalN": s.ln_total_n(),
            "lnTotalR": s.ln_total_r(),
            "cores": s.cores,
            "entropy": s.entropy(base),
            "entropy_e": s.entropy(LogBase::E),
            "entropy_2": s.entropy(LogBase::Two),
            "entropy_estimate": s.entropy_estimate(),
            "density": { "value": s.density() },
            "q_density": s.q_density(),
        });
        if args.per_vertex {
            let ln_q = s.ln_q();
            doc["vertices"] = (0..t.len())
                .map(|v| {
                    json!({
                        "lnN": s.n_all[v].ln(),
                        "lnM": s.m[v].map(|m| m.ln()),
                        "p": s.p_prob(v),
                        "q": ln_q[v].exp(),
                    })
                })
                .collect();
        }
        doc
    } else {
        let s = subtree_stats::analyze(&t);
        let mut doc = json!({
            "n": t.len(),
            "mode": "exact",
            "totalN": s.total_n.to_string(),
            "totalR": s.total_r.to_string(),
            "cores": s.cores,
            "entropy": s.entropy(base),
            "entropy_e": s.entropy(LogBase::E),
            "entropy_2": s.entropy(LogBase::Two),
            "entropy_estimate": s.entropy_estimate(),
            "mean_order": ratio_json(&s.mean_order()),
            "density": ratio_json(&s.density()),
        });
        if args.per_vertex {
            doc["vertices"] = (0..t.len())
                .map(|v| {
                    json!({
                        "N": s.n_all[v].to_string(),
                        "M": s.m[v].as_ref().map(BigUint::to_string),
                        "p": ratio_json(&s.p_prob(v)),
                        "q": ratio_json(&s.q_prob(v, None)),
                    })
                })
                .collect();
        }
        doc
    };
    emit(args.out.as_deref(), &(serde_json::to_string_pretty(&doc).unwrap() + "\n"))
}

fn cmd_profile(args: &ProfileArgs, exec: Exec) -> Outcome {
    let t = read_tree(&args.file)?;
    if let Some(&r) = args.radii.iter().find(|&&r| r < 1) {
        return Err(usage(format!("radius must be at least 1, got {r}")));
    }
    let profiles: Vec<_> = args.radii.iter().map(|&r| profile::ball_distribution_with(&t, r, exec)).collect();
    let fractions: Vec<_> = args.radii.iter().map(|&r| profile::path_ball_fraction(&t, r)).collect();
    let text = if args.json {
        let doc: Vec<Value> = profiles
            .iter()
            .zip(&fractions)
            .map(|(p, f)| {
                json!({
                    "radius": p.radius,
                    "total": p.total,
                    "codes": p.counts.iter().map(|(c, &k)| json!({
                        "code": hex::encode(&c.0),
                        "count": k,
                        "frequency": k as f64 / p.total as f64,
                    })).collect::<Vec<_>>(),
                    "path_ball_fraction": {
                        "num": f.numer(),
                        "den": f.denom(),
                        "value": *f.numer() as f64 / *f.denom() as f64,
                    },
                })
            })
            .collect();
        serde_json::to_string_pretty(&doc).unwrap() + "\n"
    } else {
        let mut out = String::from("radius,code,count,frequency\n");
        for p in &profiles {
            for (code, &k) in &p.counts {
                let freq = experiment::format_g(k as f64 / p.total as f64);
                out.push_str(&format!("{},{},{k},{freq}\n", p.radius, hex::encode(&code.0)));
            }
        }
        for (&r, f) in args.radii.iter().zip(&fractions) {
            let value = experiment::format_g(*f.numer() as f64 / *f.denom() as f64);
            out.push_str(&format!("{r},path_ball_fraction,{},{value}\n", profile::path_ball_count(&t, r)));
        }
        out
    };
    emit(args.out.as_deref(), &text)
}

fn cmd_converge(args: &ConvergeArgs, exec: Exec) -> Outcome {
    let family = match args.family {
        ConvergeFamily::Path => Family::Path,
        ConvergeFamily::Star => Family::Star,
        ConvergeFamily::Comb => Family::Comb,
        ConvergeFamily::Bethe => Family::Bethe,
        ConvergeFamily::CombStar => Family::CombStar { x: args.x },
        ConvergeFamily::DoubleBroom => Family::DoubleBroom { x: args.x },
    };
    let spec = ExperimentSpec {
        family,
        start: args.start,
        end: args.end,
        step: args.step,
        mode: if args.log { Mode::Log } else { Mode::Exact },
        radii: args.radii.clone(),
    };
    let rows = experiment::run(&spec, exec).map_err(usage)?;
    emit(args.out.as_deref(), &experiment::to_csv(&spec, &rows))
}

fn cmd_verify(args: &VerifyArgs, exec: Exec) -> Outcome {
    if args.max_n == 0 {
        return Err(usage("--max-n must be positive"));
    }
    let config = verify::VerifyConfig {
        trees: args.trees,
        max_n: args.max_n,
        seed: args.seed,
        oracle_cap: args.oracle_cap.min(subtree_stats::brute::DEFAULT_CAP),
        families_up_to: args.families_up_to,
        exec,
    };
    let report = verify::run(&config);
    let text = if args.json {
        let doc = json!({
            "trees": report.trees,
            "checks": report.evaluated,
            "passed": report.passed(),
            "failures": report.failures.iter().map(|v| json!({
                "check": v.check,
                "detail": v.detail,
                "tree": v.tree.serialize(),
            })).collect::<Vec<_>>(),
        });
        serde_json::to_string_pretty(&doc).unwrap() + "\n"
    } else {
        let mut out = format!("{} trees\n", report.trees);
        for (name, count) in &report.evaluated {
            let failed = report.failures.iter().any(|v| v.check == *name);
            out.push_str(&format!("{:<4} {name} ({count})\n", if failed { "FAIL" } else { "ok" }));
        }
        for v in &report.failures {
            out.push_str(&verify::describe(v));
        }
        out
    };
    emit(None, &text)?;
    if report.passed() {
        Ok(())
    } else {
        Err(Failure::Invariant(format!("{} check(s) failed", report.failures.len())))
    }
}

fn cmd_limits(args: &LimitsArgs) -> Outcome {
    let rows = limits::limit_table();
    let text = if args.json {
        let doc: Vec<Value> = rows
            .iter()
            .map(|l| {
                json!({
                    "name": l.name,
                    "value": l.value,
                    "error_bound": l.error_bound,
                    "exact": l.exact.map(|r| format!("{}/{}", r.numer(), r.denom())),
                })
            })
            .collect();
        serde_json::to_string_pretty(&doc).unwrap() + "\n"
    } else {
        let width = rows.iter().map(|l| l.name.len()).max().unwrap_or(0);
        rows.iter()
            .map(|l| {
                format!(
                    "{:<width$}  {:<16}  {}\n",
                    l.name,
                    experiment::format_g(l.value),
                    experiment::format_g(l.error_bound)
                )
            })
            .collect()
    };
    emit(None, &text)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let exec = if cli.sequential { Exec::Sequential } else { Exec::Parallel };
    let result = match &cli.command {
        Command::Gen(a) => cmd_gen(a),
        Command::Stats(a) => cmd_stats(a),
        Command::Profile(a) => cmd_profile(a, exec),
        Command::Converge(a) => cmd_converge(a, exec),
        Command::Verify(a) => cmd_verify(a, exec),
        Command::Limits(a) => cmd_limits(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("subtrees: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
