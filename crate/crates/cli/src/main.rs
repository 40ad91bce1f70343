use std::io::Read;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;

use listedge::bipartite::{extend_bipartite, Bipartition};
use listedge::discharge::{audit, SurfaceSpec};
use listedge::generate::{
    gen_fig1, gen_fig2, gen_random_planar_instance, RandomPlanarOptions,
};
use listedge::json::{ColouringFile, InstanceFile};
use listedge::model::{verify_colouring, FullColouring, ProblemInstance};
use listedge::solver::{oracle_solve_with_budget, solve_with, SolveOutcome, SolverConfig};
use listedge::search::DEFAULT_NODE_BUDGET;

const EXIT_OK: u8 = 0;
const EXIT_INPUT: u8 = 1;
const EXIT_INFEASIBLE: u8 = 2;
const EXIT_HYPOTHESIS: u8 = 3;
const EXIT_BUDGET: u8 = 4;

#[derive(Parser)]
#[command(name = "listedge", about = "Precoloured list-edge-colouring toolkit", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Extend the instance's precolouring via the reduction loop
    Solve {
        /// instance file, or - for stdin
        file: String,
        #[arg(long)]
        json: bool,
        /// scan all valid bad-subgraph parameters, not only the proof family
        #[arg(long)]
        scan_wide: bool,
        /// node budget for exact-search stages
        #[arg(long, default_value_t = DEFAULT_NODE_BUDGET)]
        budget: u64,
        /// report stuck states instead of resolving them exactly
        #[arg(long)]
        no_fallback: bool,
        /// write the colouring file here on success
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Decide extendability by exhaustive search
    Oracle {
        file: String,
        #[arg(long)]
        json: bool,
        #[arg(long, default_value_t = DEFAULT_NODE_BUDGET)]
        budget: u64,
    },
    /// Check a colouring file against an instance
    Verify {
        file: String,
        colouring: String,
        #[arg(long)]
        json: bool,
    },
    /// Run the discharging audit on an embedded instance
    Audit {
        file: String,
        #[arg(long)]
        json: bool,
    },
    /// Emit a generated instance as JSON
    Generate {
        #[command(subcommand)]
        family: Family,
    },
    /// Colour a bipartite instance through the kernel engine
    BipartiteColour {
        file: String,
        #[arg(long)]
        json: bool,
    },
    /// Solve every *.json instance in a directory
    Bench {
        dir: PathBuf,
        #[arg(long)]
        scan_wide: bool,
        #[arg(long, default_value_t = DEFAULT_NODE_BUDGET)]
        budget: u64,
    },
}

#[derive(Args)]
struct OutputArg {
    /// write to this file instead of stdout
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Family {
    /// Star with one coloured edge and coloured fringes; needs t >= Delta-1
    Fig1 {
        #[arg(long = "Delta", visible_alias = "delta")]
        delta: usize,
        #[arg(long, default_value_t = 1)]
        t: usize,
        #[command(flatten)]
        out: OutputArg,
    },
    /// Uncoloured star with d-coloured fringes; needs t >= d
    Fig2 {
        #[arg(long = "Delta", visible_alias = "delta")]
        delta: usize,
        #[arg(long)]
        d: usize,
        #[arg(long, default_value_t = 1)]
        t: usize,
        #[command(flatten)]
        out: OutputArg,
    },
    /// Seeded random planar embedded instance
    Random {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        n: usize,
        #[arg(long = "Delta", visible_alias = "delta")]
        delta: usize,
        #[arg(long)]
        t: usize,
        #[arg(long)]
        d: usize,
        /// target edge count after subsampling
        #[arg(long)]
        edges: Option<usize>,
        /// extra colours above Delta+t in the list universe
        #[arg(long, default_value_t = 3)]
        slack: usize,
        /// per-edge random lists instead of {1..Delta+t}
        #[arg(long)]
        list_mode: bool,
        /// allow d > t
        #[arg(long)]
        adversarial: bool,
        /// allow the subsample to disconnect the graph
        #[arg(long)]
        allow_disconnected: bool,
        #[command(flatten)]
        out: OutputArg,
    },
}

fn read_input(file: &str) -> Result<String> {
    if file == "-" {
        let mut buf = String::new();
        std::io::stdin().read_to_string(&mut buf).context("reading stdin")?;
        Ok(buf)
    } else {
        std::fs::read_to_string(file).with_context(|| format!("reading {file}"))
    }
}

fn load_instance(file: &str) -> Result<(ProblemInstance, InstanceFile)> {
    let text = read_input(file)?;
    let doc = InstanceFile::from_json(&text).with_context(|| format!("parsing {file}"))?;
    let inst = doc.to_instance().with_context(|| format!("validating {file}"))?;
    Ok((inst, doc))
}

fn emit(out: &OutputArg, text: &str) -> Result<()> {
    match &out.output {
        Some(path) => std::fs::write(path, text).with_context(|| format!("writing {path:?}"))?,
        None => println!("{text}"),
    }
    Ok(())
}

fn outcome_json(outcome: &SolveOutcome) -> serde_json::Value {
    match outcome {
        SolveOutcome::Coloured(col) => serde_json::json!({
            "outcome": "coloured",
            "colouring": ColouringFile::from_colouring(col).colouring,
        }),
        SolveOutcome::Infeasible { nodes } => {
            serde_json::json!({ "outcome": "infeasible", "nodes": nodes })
        }
        SolveOutcome::HypothesisViolation(w) => serde_json::json!({
            "outcome": "hypothesis-violation",
            "stage": format!("{:?}", w.stage),
            "detail": w.detail,
            "uncoloured": w.uncoloured,
        }),
        SolveOutcome::BudgetExceeded { nodes } => {
            serde_json::json!({ "outcome": "budget-exceeded", "nodes": nodes })
        }
    }
}

fn report_outcome(
    instance: &ProblemInstance,
    outcome: &SolveOutcome,
    json: bool,
) -> Result<ExitCode> {
    if json {
        println!("{}", serde_json::to_string_pretty(&outcome_json(outcome))?);
    } else {
        match outcome {
            SolveOutcome::Coloured(col) => {
                let verdict = verify_colouring(instance, col);
                println!(
                    "coloured: {} edges, {} colours, verifier {}",
                    col.len(),
                    col.palette().len(),
                    if verdict.ok() { "clean" } else { "REJECTED" }
                );
                println!("{}", ColouringFile::from_colouring(col).to_json());
            }
            SolveOutcome::Infeasible { nodes } => {
                println!("infeasible (search exhausted after {nodes} nodes)");
            }
            SolveOutcome::HypothesisViolation(w) => {
                println!("hypothesis violation at {:?}: {}", w.stage, w.detail);
            }
            SolveOutcome::BudgetExceeded { nodes } => {
                println!("node budget exceeded ({nodes} nodes)");
            }
        }
    }
    Ok(ExitCode::from(match outcome {
        SolveOutcome::Coloured(_) => EXIT_OK,
        SolveOutcome::Infeasible { .. } => EXIT_INFEASIBLE,
        SolveOutcome::HypothesisViolation(_) => EXIT_HYPOTHESIS,
        SolveOutcome::BudgetExceeded { .. } => EXIT_BUDGET,
    }))
}

fn cmd_solve(
    file: &str,
    json: bool,
    scan_wide: bool,
    budget: u64,
    no_fallback: bool,
    output: Option<&Path>,
) -> Result<ExitCode> {
    let (inst, _) = load_instance(file)?;
    let cfg = SolverConfig { scan_wide, fallback: !no_fallback, budget };
    let outcome = solve_with(&inst, &cfg);
    if let (SolveOutcome::Coloured(col), Some(path)) = (&outcome, output) {
        std::fs::write(path, ColouringFile::from_colouring(col).to_json())
            .with_context(|| format!("writing {path:?}"))?;
    }
    report_outcome(&inst, &outcome, json)
}

fn cmd_oracle(file: &str, json: bool, budget: u64) -> Result<ExitCode> {
    let (inst, _) = load_instance(file)?;
    let outcome = oracle_solve_with_budget(&inst, budget);
    report_outcome(&inst, &outcome, json)
}

fn cmd_verify(file: &str, colouring: &str, json: bool) -> Result<ExitCode> {
    let (inst, _) = load_instance(file)?;
    let text = read_input(colouring)?;
    let col_doc = ColouringFile::from_json(&text).context("parsing colouring")?;
    let col: FullColouring = col_doc.to_colouring(&inst.graph).context("validating colouring")?;
    let verdict = verify_colouring(&inst, &col);
    if json {
        let value = serde_json::json!({
            "ok": verdict.ok(),
            "violations": verdict.violations.iter().map(|v| v.to_string()).collect::<Vec<_>>(),
        });
        println!("{}", serde_json::to_string_pretty(&value)?);
    } else if verdict.ok() {
        println!("ok");
    } else {
        for v in &verdict.violations {
            println!("violation: {v}");
        }
    }
    Ok(ExitCode::from(if verdict.ok() { EXIT_OK } else { EXIT_INFEASIBLE }))
}

fn cmd_audit(file: &str, json: bool) -> Result<ExitCode> {
    let (inst, doc) = load_instance(file)?;
    if inst.rot.is_none() {
        bail!("audit needs a rotation system in the instance file");
    }
    let surface: SurfaceSpec = doc.surface_spec();
    let report = audit(&inst, surface).context("running the audit")?;
    if json {
        println!("{}", serde_json::to_string_pretty(&listedge::report::audit_to_json(&report))?);
    } else {
        print!("{}", listedge::report::render_audit(&report));
    }
    Ok(ExitCode::from(EXIT_OK))
}

fn cmd_generate(family: Family) -> Result<ExitCode> {
    let (instance, seed, out) = match family {
        Family::Fig1 { delta, t, out } => (gen_fig1(delta, t)?, None, out),
        Family::Fig2 { delta, d, t, out } => (gen_fig2(delta, d, t)?, None, out),
        Family::Random {
            seed,
            n,
            delta,
            t,
            d,
            edges,
            slack,
            list_mode,
            adversarial,
            allow_disconnected,
            out,
        } => {
            let opts = RandomPlanarOptions {
                n,
                delta,
                t,
                d,
                edge_target: edges,
                slack,
                list_mode,
                adversarial,
                connected: !allow_disconnected,
                h_fraction: 0.5,
            };
            (gen_random_planar_instance(seed, &opts)?, Some(seed), out)
        }
    };
    let file = InstanceFile::from_instance_with(&instance, Some(SurfaceSpec::PLANE), seed);
    emit(&out, &file.to_json())?;
    Ok(ExitCode::from(EXIT_OK))
}

fn cmd_bipartite_colour(file: &str, json: bool) -> Result<ExitCode> {
    let (inst, _) = load_instance(file)?;
    let Some(bip) = Bipartition::of_graph(&inst.graph) else {
        println!("hypothesis violation: the graph is not bipartite");
        return Ok(ExitCode::from(EXIT_HYPOTHESIS));
    };
    match extend_bipartite(&inst, &bip) {
        Ok(col) => {
            let verdict = verify_colouring(&inst, &col);
            if json {
                println!(
                    "{}",
                    serde_json::to_string_pretty(&serde_json::json!({
                        "outcome": "coloured",
                        "verified": verdict.ok(),
                        "colouring": ColouringFile::from_colouring(&col).colouring,
                    }))?
                );
            } else {
                println!(
                    "coloured, verifier {}",
                    if verdict.ok() { "clean" } else { "REJECTED" }
                );
                println!("{}", ColouringFile::from_colouring(&col).to_json());
            }
            Ok(ExitCode::from(EXIT_OK))
        }
        Err(err) => {
            println!("hypothesis violation: {err}");
            Ok(ExitCode::from(EXIT_HYPOTHESIS))
        }
    }
}

fn cmd_bench(dir: &Path, scan_wide: bool, budget: u64) -> Result<ExitCode> {
    let mut files: Vec<PathBuf> = std::fs::read_dir(dir)
        .with_context(|| format!("reading {dir:?}"))?
        .filter_map(|entry| entry.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|ext| ext == "json"))
        .collect();
    files.sort();
    if files.is_empty() {
        bail!("no .json instances in {dir:?}");
    }
    let cfg = SolverConfig { scan_wide, fallback: true, budget };
    let rows: Vec<String> = files
        .par_iter()
        .map(|path| {
            let name = path.file_name().unwrap_or_default().to_string_lossy().to_string();
            let started = Instant::now();
            let row = (|| -> Result<String> {
                let (inst, _) = load_instance(&path.to_string_lossy())?;
                let outcome = solve_with(&inst, &cfg);
                let label = match &outcome {
                    SolveOutcome::Coloured(col) => {
                        let ok = verify_colouring(&inst, col).ok();
                        format!("coloured ({} colours, verify {})", col.palette().len(), ok)
                    }
                    SolveOutcome::Infeasible { .. } => "infeasible".to_string(),
                    SolveOutcome::HypothesisViolation(_) => "hypothesis-violation".to_string(),
                    SolveOutcome::BudgetExceeded { .. } => "budget-exceeded".to_string(),
                };
                Ok(label)
            })()
            .unwrap_or_else(|err| format!("error: {err}"));
            format!("{name:40} {row} [{:?}]", started.elapsed())
        })
        .collect();
    for row in rows {
        println!("{row}");
    }
    Ok(ExitCode::from(EXIT_OK))
}

fn run() -> Result<ExitCode> {
    let cli = Cli::parse();
    match cli.command {
        Command::Solve { file, json, scan_wide, budget, no_fallback, output } => {
            cmd_solve(&file, json, scan_wide, budget, no_fallback, output.as_deref())
        }
        Command::Oracle { file, json, budget } => cmd_oracle(&file, json, budget),
        Command::Verify { file, colouring, json } => cmd_verify(&file, &colouring, json),
        Command::Audit { file, json } => cmd_audit(&file, json),
        Command::Generate { family } => cmd_generate(family),
        Command::BipartiteColour { file, json } => cmd_bipartite_colour(&file, json),
        Command::Bench { dir, scan_wide, budget } => cmd_bench(&dir, scan_wide, budget),
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(EXIT_INPUT)
        }
    }
}
