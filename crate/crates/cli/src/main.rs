//! Command-line front end for the stable-marriage library.
//!
//! Subcommands: `gs-lists` (reduced preference lists via propagation or the
//! reference algorithm), `enumerate` (all stable matchings), `sex-equal`
//! (balance-optimal stable matching), `generate` (random instances),
//! `verify` (cross-check against the brute-force oracle), and `bench`
//! (timing harness). Exit codes: 0 success, 1 usage or input errors, 2
//! verification found a discrepancy.

mod bench;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use stable_marriage::constraint::{reduce, Orientation};
use stable_marriage::egs;
use stable_marriage::instance::{Instance, Side};
use stable_marriage::matching::Matching;
use stable_marriage::oracle;
use stable_marriage::search::{enumerate_all, solve_sex_equal, ScoreTables};
use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "smatch",
    version,
    about = "Stable-marriage solving on a constraint-propagation kernel"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Print reduced preference lists for an instance
    GsLists(GsListsArgs),
    /// Enumerate every stable matching of an instance
    Enumerate(EnumerateArgs),
    /// Find a stable matching that balances the two sides' happiness
    SexEqual(SexEqualArgs),
    /// Generate random instances
    Generate(GenerateArgs),
    /// Cross-check search results against the brute-force oracle
    Verify(VerifyArgs),
    /// Time reductions and searches over random instances
    Bench(bench::BenchArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Engine {
    /// Propagate the stability constraint to its fixpoint
    Constraint,
    /// Run the extended Gale-Shapley reference passes
    Egs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OrientationArg {
    Male,
    Female,
    Full,
}

impl From<OrientationArg> for Orientation {
    fn from(o: OrientationArg) -> Orientation {
        match o {
            OrientationArg::Male => Orientation::Male,
            OrientationArg::Female => Orientation::Female,
            OrientationArg::Full => Orientation::Full,
        }
    }
}

#[derive(Args)]
struct GsListsArgs {
    /// Instance file, or '-' for standard input
    instance: String,
    /// Which engine produces the lists (both agree on the full reduction;
    /// single orientations promise the proposing side's lists)
    #[arg(long, value_enum, default_value_t = Engine::Constraint)]
    via: Engine,
    #[arg(long, value_enum, default_value_t = OrientationArg::Full)]
    orientation: OrientationArg,
    /// Shorthand for --orientation=full
    #[arg(long)]
    full: bool,
}

#[derive(Args)]
struct EnumerateArgs {
    /// Instance file, or '-' for standard input
    instance: String,
}

#[derive(Args)]
struct SexEqualArgs {
    /// Instance file, or '-' for standard input
    instance: String,
    /// File with an n-row whitespace-separated matrix of the men's partner
    /// scores (row i, column j: man i's score for woman j); rank sums are
    /// used when omitted
    #[arg(long, requires = "women_scores")]
    men_scores: Option<PathBuf>,
    /// The women's score matrix (row j, column i: woman j's score for man i)
    #[arg(long, requires = "men_scores")]
    women_scores: Option<PathBuf>,
}

#[derive(Args)]
struct GenerateArgs {
    /// Number of people per side
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// How many instances (seeds seed, seed+1, ...)
    #[arg(long, default_value_t = 1)]
    count: u64,
    /// Generate incomplete lists by dropping acceptability pairs
    #[arg(long)]
    smi: bool,
    /// Probability of keeping each acceptability pair under --smi
    #[arg(long, default_value_t = 0.5)]
    keep_prob: f64,
    /// Directory for the generated files; required when count > 1, stdout
    /// otherwise
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u32).range(1..=9))]
    n_min: u32,
    #[arg(long, default_value_t = 8, value_parser = clap::value_parser!(u32).range(1..=9))]
    n_max: u32,
    /// Instances per size
    #[arg(long, default_value_t = 50)]
    count: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Verify on incomplete-list instances instead of complete ones
    #[arg(long)]
    smi: bool,
    #[arg(long, default_value_t = 0.5)]
    keep_prob: f64,
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
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.cmd {
        Cmd::GsLists(args) => gs_lists(args)?,
        Cmd::Enumerate(args) => enumerate(args)?,
        Cmd::SexEqual(args) => sex_equal(args)?,
        Cmd::Generate(args) => generate(args)?,
        Cmd::Verify(args) => return verify(args),
        Cmd::Bench(args) => bench::run(args)?,
    }
    Ok(ExitCode::SUCCESS)
}

fn read_instance(path: &str) -> Result<Instance> {
    let text = if path == "-" {
        let mut buf = String::new();
        std::io::stdin()
            .read_to_string(&mut buf)
            .context("reading standard input")?;
        buf
    } else {
        std::fs::read_to_string(path).with_context(|| format!("reading {path}"))?
    };
    Ok(Instance::parse(&text)?)
}

fn gs_lists(args: GsListsArgs) -> Result<()> {
    let inst = read_instance(&args.instance)?;
    let orientation = if args.full {
        Orientation::Full
    } else {
        args.orientation.into()
    };
    let lists = match args.via {
        Engine::Constraint => {
            let (s, c) = reduce(&inst, orientation)
                .map_err(|_| anyhow::anyhow!("propagation wiped out a domain"))?;
            c.lists(&s)
        }
        Engine::Egs => match orientation {
            Orientation::Male => egs::male_reduction(&inst).lists,
            Orientation::Female => egs::female_reduction(&inst).lists,
            Orientation::Full => egs::full_reduction(&inst).lists,
        },
    };
    print!("{}", lists.render());
    Ok(())
}

fn matching_line(m: &Matching) -> String {
    (1..=m.n() as u32)
        .map(|i| match m.partner_of_man(i) {
            Some(w) => w.to_string(),
            None => "-".to_string(),
        })
        .collect::<Vec<_>>()
        .join(" ")
}

fn enumerate(args: EnumerateArgs) -> Result<()> {
    let inst = read_instance(&args.instance)?;
    let (found, stats) = enumerate_all(&inst);
    for m in &found {
        println!("{}", matching_line(m));
    }
    println!("solutions: {}", found.len());
    println!("nodes: {}", stats.nodes);
    println!("fails: {}", stats.fails);
    Ok(())
}

fn read_score_matrix(path: &PathBuf) -> Result<Vec<Vec<u64>>> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading {}", path.display()))?;
    text.lines()
        .filter(|l| !l.trim().is_empty())
        .map(|line| {
            line.split_whitespace()
                .map(|tok| {
                    tok.parse::<u64>()
                        .with_context(|| format!("bad score {tok:?} in {}", path.display()))
                })
                .collect()
        })
        .collect()
}

fn sex_equal(args: SexEqualArgs) -> Result<()> {
    let inst = read_instance(&args.instance)?;
    let scores = match (&args.men_scores, &args.women_scores) {
        (Some(m), Some(w)) => {
            ScoreTables::weighted(&inst, &read_score_matrix(m)?, &read_score_matrix(w)?)?
        }
        _ => ScoreTables::unweighted(&inst),
    };
    let (best, objective, stats) = solve_sex_equal(&inst, &scores);
    println!("matching: {}", matching_line(&best));
    println!(
        "men total: {}",
        scores.side_sum(&inst, &best, Side::Men)
    );
    println!(
        "women total: {}",
        scores.side_sum(&inst, &best, Side::Women)
    );
    println!("objective: {objective}");
    println!("nodes: {}", stats.nodes);
    println!("fails: {}", stats.fails);
    Ok(())
}

fn generate(args: GenerateArgs) -> Result<()> {
    if args.count == 0 {
        bail!("--count must be at least 1");
    }
    if args.count > 1 && args.out.is_none() {
        bail!("--count > 1 needs --out DIR; one instance at a time goes to stdout");
    }
    for seed in args.seed..args.seed + args.count {
        let inst = if args.smi {
            Instance::random_smi(args.n, seed, args.keep_prob)
        } else {
            Instance::random(args.n, seed)
        };
        match &args.out {
            None => print!("{}", inst.render()),
            Some(dir) => {
                std::fs::create_dir_all(dir)
                    .with_context(|| format!("creating {}", dir.display()))?;
                let kind = if args.smi { "smi" } else { "sm" };
                let path = dir.join(format!("{kind}_n{}_s{seed}.txt", args.n));
                std::fs::write(&path, inst.render())
                    .with_context(|| format!("writing {}", path.display()))?;
                println!("{}", path.display());
            }
        }
    }
    Ok(())
}

fn verify(args: VerifyArgs) -> Result<ExitCode> {
    if args.n_min > args.n_max {
        bail!("--n-min exceeds --n-max");
    }
    let mut mismatches = 0u64;
    for n in args.n_min..=args.n_max {
        let mut ok = 0u64;
        for k in 0..args.count {
            let seed = args.seed.wrapping_add((n as u64) << 32).wrapping_add(k);
            let inst = if args.smi {
                Instance::random_smi(n as usize, seed, args.keep_prob)
            } else {
                Instance::random(n as usize, seed)
            };
            let expected = oracle::enumerate_stable(&inst)?;
            let (found, stats) = enumerate_all(&inst);
            let mut bad: Vec<String> = Vec::new();
            if found != expected {
                bad.push(format!(
                    "stable sets differ: search found {}, oracle {}",
                    found.len(),
                    expected.len()
                ));
            }
            if !inst.is_smi() && stats.fails > 0 {
                bad.push(format!("enumeration hit {} dead ends", stats.fails));
            }
            let scores = ScoreTables::unweighted(&inst);
            let (_, objective, _) = solve_sex_equal(&inst, &scores);
            let oracle_best = expected
                .iter()
                .map(|m| scores.objective(&inst, m))
                .min()
                .expect("oracle set is never empty");
            if objective != oracle_best {
                bad.push(format!(
                    "sex-equal objective {objective} differs from oracle minimum {oracle_best}"
                ));
            }
            if bad.is_empty() {
                ok += 1;
            } else {
                mismatches += 1;
                for line in bad {
                    println!("n={n} seed={seed}: {line}");
                }
            }
        }
        println!("n={n}: {ok}/{} ok", args.count);
    }
    if mismatches == 0 {
        println!("all passed");
        Ok(ExitCode::SUCCESS)
    } else {
        println!("{mismatches} instances disagreed");
        Ok(ExitCode::from(2))
    }
}
