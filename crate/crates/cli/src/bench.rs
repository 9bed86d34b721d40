//! Timing harness: builds random instances, times the men-propose reduction
//! (model build and propagation separately), and optionally the two
//! searches, reporting per-run rows plus a mean row per size.

use anyhow::Result;
use clap::{Args, ValueEnum};
use stable_marriage::constraint::{Orientation, StabilityConstraint};
use stable_marriage::instance::Instance;
use stable_marriage::kernel::Solver;
use stable_marriage::search::{enumerate_all, solve_sex_equal, ScoreTables};
use std::rc::Rc;
use std::time::Instant;

#[derive(Args)]
pub struct BenchArgs {
    /// Instance sizes to measure
    #[arg(long, value_delimiter = ',', default_value = "100,200,400")]
    sizes: Vec<usize>,
    /// Instances per size (seeds seed, seed+1, ...)
    #[arg(long, default_value_t = 3)]
    count: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Also time enumerating every stable matching (slow on large sizes)
    #[arg(long)]
    enumerate: bool,
    /// Also time the sex-equal search (slow on large sizes)
    #[arg(long)]
    sex_equal: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Table,
    Json,
}

struct Row {
    n: usize,
    seed: u64,
    build_ms: f64,
    reduce_ms: f64,
    proposals: u64,
    removals: u64,
    enumerate_ms: Option<f64>,
    solutions: Option<u64>,
    sex_equal_ms: Option<f64>,
    objective: Option<u64>,
}

const COLUMNS: [&str; 10] = [
    "n",
    "seed",
    "build_ms",
    "reduce_ms",
    "proposals",
    "removals",
    "enumerate_ms",
    "solutions",
    "sex_equal_ms",
    "objective",
];

fn ms(start: Instant) -> f64 {
    start.elapsed().as_secs_f64() * 1e3
}

fn measure(n: usize, seed: u64, args: &BenchArgs) -> Row {
    let inst = Instance::random(n, seed);
    let started = Instant::now();
    let mut s = Solver::new();
    let c = StabilityConstraint::post(&mut s, Rc::new(inst.clone()), Orientation::Male)
        .expect("posting on fresh domains cannot wipe out");
    let build_ms = ms(started);
    let started = Instant::now();
    s.fixpoint()
        .expect("root propagation never fails on a complete instance");
    let reduce_ms = ms(started);
    let mut row = Row {
        n,
        seed,
        build_ms,
        reduce_ms,
        proposals: c.proposal_count(),
        removals: s.removal_count(),
        enumerate_ms: None,
        solutions: None,
        sex_equal_ms: None,
        objective: None,
    };
    if args.enumerate {
        let started = Instant::now();
        let (found, _) = enumerate_all(&inst);
        row.enumerate_ms = Some(ms(started));
        row.solutions = Some(found.len() as u64);
    }
    if args.sex_equal {
        let started = Instant::now();
        let (_, objective, _) = solve_sex_equal(&inst, &ScoreTables::unweighted(&inst));
        row.sex_equal_ms = Some(ms(started));
        row.objective = Some(objective);
    }
    row
}

/// Column means over one size's rows; `None` columns stay empty.
fn mean_cells(n: usize, rows: &[Row]) -> Vec<String> {
    let count = rows.len() as f64;
    let mean = |f: &dyn Fn(&Row) -> f64| format!("{:.3}", rows.iter().map(f).sum::<f64>() / count);
    let mean_opt = |f: &dyn Fn(&Row) -> Option<f64>| {
        let vals: Vec<f64> = rows.iter().filter_map(f).collect();
        if vals.is_empty() {
            String::new()
        } else {
            format!("{:.3}", vals.iter().sum::<f64>() / vals.len() as f64)
        }
    };
    vec![
        n.to_string(),
        "mean".to_string(),
        mean(&|r| r.build_ms),
        mean(&|r| r.reduce_ms),
        mean(&|r| r.proposals as f64),
        mean(&|r| r.removals as f64),
        mean_opt(&|r| r.enumerate_ms),
        mean_opt(&|r| r.solutions.map(|v| v as f64)),
        mean_opt(&|r| r.sex_equal_ms),
        mean_opt(&|r| r.objective.map(|v| v as f64)),
    ]
}

fn row_cells(r: &Row) -> Vec<String> {
    let opt_ms = |v: Option<f64>| v.map(|x| format!("{x:.3}")).unwrap_or_default();
    let opt_count = |v: Option<u64>| v.map(|x| x.to_string()).unwrap_or_default();
    vec![
        r.n.to_string(),
        r.seed.to_string(),
        format!("{:.3}", r.build_ms),
        format!("{:.3}", r.reduce_ms),
        r.proposals.to_string(),
        r.removals.to_string(),
        opt_ms(r.enumerate_ms),
        opt_count(r.solutions),
        opt_ms(r.sex_equal_ms),
        opt_count(r.objective),
    ]
}

pub fn run(args: BenchArgs) -> Result<()> {
    let mut all_cells: Vec<Vec<String>> = Vec::new();
    for &n in &args.sizes {
        let rows: Vec<Row> = (args.seed..args.seed + args.count)
            .map(|seed| measure(n, seed, &args))
            .collect();
        all_cells.extend(rows.iter().map(row_cells));
        all_cells.push(mean_cells(n, &rows));
    }
    match args.format {
        Format::Csv => {
            println!("{}", COLUMNS.join(","));
            for cells in &all_cells {
                println!("{}", cells.join(","));
            }
        }
        Format::Table => {
            let mut widths: Vec<usize> = COLUMNS.iter().map(|c| c.len()).collect();
            for cells in &all_cells {
                for (w, cell) in widths.iter_mut().zip(cells) {
                    *w = (*w).max(cell.len());
                }
            }
            let render = |cells: &[String]| {
                cells
                    .iter()
                    .zip(&widths)
                    .map(|(c, w)| format!("{c:>w$}"))
                    .collect::<Vec<_>>()
                    .join("  ")
                    .trim_end()
                    .to_string()
            };
            let header: Vec<String> = COLUMNS.iter().map(|c| c.to_string()).collect();
            println!("{}", render(&header));
            for cells in &all_cells {
                println!("{}", render(cells));
            }
        }
        Format::Json => {
            let rows: Vec<serde_json::Value> = all_cells
                .iter()
                .map(|cells| {
                    let entries = COLUMNS.iter().zip(cells).filter(|(_, c)| !c.is_empty());
                    serde_json::Value::Object(
                        entries
                            .map(|(&k, c)| (k.to_string(), cell_to_json(k, c)))
                            .collect(),
                    )
                })
                .collect();
            println!("{}", serde_json::to_string_pretty(&rows)?);
        }
    }
    Ok(())
}

fn cell_to_json(column: &str, cell: &str) -> serde_json::Value {
    if column == "seed" && cell == "mean" {
        return serde_json::Value::String(cell.to_string());
    }
    cell.parse::<u64>()
        .map(Into::into)
        .or_else(|_| cell.parse::<f64>().map(Into::into))
        .unwrap_or_else(|_| serde_json::Value::String(cell.to_string()))
}
