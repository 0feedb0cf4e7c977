//! `strgraph`: builds overlap and string graphs from a file of reads.
//!
//! Exit status is 0 on success, 1 when the input or the arguments are
//! rejected and 2 when an internal consistency check fails.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use serde_json::json;
use strgraph::index::ReadFormat;
use strgraph::oracle::verify;
use strgraph::pipeline::{
    current_arcs, dump_seeds, load_reads, read_stats, run_index, run_overlap, run_reduce,
    PipelineConfig, PipelineStats,
};
use strgraph::{assemble_path, export_graph};

#[derive(Parser, Debug)]
#[command(
    name = "strgraph",
    version,
    about = "External-memory overlap and string graph construction"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Workdir {
    /// Work directory holding the index and the graph lists.
    #[arg(short = 'w', long = "workdir", env = "STRGRAPH_WORKDIR")]
    workdir: PathBuf,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Index a read file into the work directory.
    Index {
        reads: PathBuf,
        #[command(flatten)]
        workdir: Workdir,
        #[arg(long, default_value = "plain")]
        format: ReadFormat,
    },
    /// List the seed intervals of the indexed reads.
    Seeds {
        #[command(flatten)]
        workdir: Workdir,
        #[arg(long, default_value_t = 1)]
        min_overlap: u32,
    },
    /// Index the reads and compute every arc of the overlap graph.
    Overlap {
        reads: PathBuf,
        #[command(flatten)]
        workdir: Workdir,
        /// Shortest overlap reported.
        #[arg(long, default_value_t = 1)]
        min_overlap: u32,
        #[arg(long, default_value = "plain")]
        format: ReadFormat,
        /// Print the statistics as JSON.
        #[arg(long)]
        stats: bool,
        /// Proceed even if some read is contained in another.
        #[arg(long)]
        force: bool,
        /// Keep the intermediate encoding lists.
        #[arg(long)]
        keep_intermediate: bool,
        /// Write the arcs as TSV.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Remove the transitive arcs of the overlap graph in the work directory.
    Reduce {
        #[command(flatten)]
        workdir: Workdir,
        /// Arc records held in memory at once.
        #[arg(short = 'M', long)]
        memory_records: u32,
        #[arg(long)]
        stats: bool,
        /// Write the string graph as TSV.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Spell the string along a path of read ids.
    Assemble {
        #[command(flatten)]
        workdir: Workdir,
        /// Comma-separated read ids, e.g. 1,2,3.
        #[arg(long, value_delimiter = ',', required = true)]
        path: Vec<u32>,
    },
    /// Compare the pipeline against brute force on random read sets.
    Verify {
        #[arg(short = 'n', long, default_value_t = 100)]
        instances: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Print the statistics of the last run in the work directory.
    Stats {
        #[command(flatten)]
        workdir: Workdir,
    },
}

fn stats_json(stats: &PipelineStats) -> serde_json::Value {
    json!({
        "n": stats.n,
        "m": stats.m,
        "l": stats.l,
        "seeds": stats.seeds,
        "arcs": stats.arcs,
        "irreducible_arcs": stats.irreducible_arcs,
        "records_read": stats.records_read,
        "records_written": stats.records_written,
        "io_bound": stats.io_bound,
        "reduction_io_bound": stats.reduction_io_bound,
        "io_bound_held": stats.io_bound_held,
    })
}

fn write_out(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn run(cli: Cli) -> Result<u8> {
    match cli.command {
        Command::Index {
            reads,
            workdir,
            format,
        } => {
            let cfg = PipelineConfig {
                format,
                ..PipelineConfig::new(workdir.workdir)
            };
            let (_, report) = run_index(&cfg, &reads)?;
            println!(
                "indexed {} reads, {} symbols, longest {}",
                report.m, report.n, report.l
            );
            if report.duplicates_removed > 0 {
                eprintln!(
                    "warning: dropped {} duplicate reads",
                    report.duplicates_removed
                );
            }
            if !report.contained.is_empty() {
                eprintln!(
                    "warning: {} reads are contained in other reads",
                    report.contained.len()
                );
            }
        }
        Command::Seeds {
            workdir,
            min_overlap,
        } => {
            let cfg = PipelineConfig {
                min_overlap,
                ..PipelineConfig::new(workdir.workdir)
            };
            print!("{}", dump_seeds(&cfg)?);
        }
        Command::Overlap {
            reads,
            workdir,
            min_overlap,
            format,
            stats,
            force,
            keep_intermediate,
            out,
        } => {
            let cfg = PipelineConfig {
                min_overlap,
                format,
                force,
                keep_intermediate,
                ..PipelineConfig::new(workdir.workdir)
            };
            let result = run_overlap(&cfg, &reads)?;
            if let Some(out) = out {
                let storage = cfg.storage()?;
                let text = export_graph(&current_arcs(&storage)?, &load_reads(&storage)?);
                write_out(&out, &text)?;
            }
            if stats {
                println!("{}", serde_json::to_string_pretty(&stats_json(&result))?);
            } else {
                println!("{} reads, {} arcs", result.m, result.arcs);
            }
        }
        Command::Reduce {
            workdir,
            memory_records,
            stats,
            out,
        } => {
            let cfg = PipelineConfig {
                memory_records,
                ..PipelineConfig::new(workdir.workdir)
            };
            let result = run_reduce(&cfg)?;
            if let Some(out) = out {
                let storage = cfg.storage()?;
                let text = export_graph(&current_arcs(&storage)?, &load_reads(&storage)?);
                write_out(&out, &text)?;
            }
            if stats {
                println!("{}", serde_json::to_string_pretty(&stats_json(&result))?);
            } else {
                println!(
                    "{} arcs, {} irreducible",
                    result.arcs,
                    result.irreducible_arcs.unwrap_or(0)
                );
            }
        }
        Command::Assemble { workdir, path } => {
            let storage = PipelineConfig::new(workdir.workdir).storage()?;
            let reads = load_reads(&storage)?;
            let seq = assemble_path(&path, &current_arcs(&storage)?, &reads)?;
            println!("{}", String::from_utf8_lossy(&seq));
        }
        Command::Verify { instances, seed } => {
            let report = verify(instances, seed)?;
            for failure in &report.failures {
                println!("FAIL {failure}");
            }
            let verdict = if report.failures.is_empty() {
                "PASS"
            } else {
                "FAIL"
            };
            println!(
                "{verdict}: {} instances, {} reads, {} arcs, {} irreducible, seed {seed}",
                report.instances, report.reads, report.arcs, report.irreducible_arcs
            );
            if !report.failures.is_empty() {
                return Ok(2);
            }
        }
        Command::Stats { workdir } => {
            let storage = PipelineConfig::new(workdir.workdir).storage()?;
            let stats = read_stats(&storage)?;
            println!("{}", serde_json::to_string_pretty(&stats_json(&stats))?);
        }
    }
    Ok(0)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let _ = err.print();
            return ExitCode::from(if err.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err:#}");
            let internal = err
                .downcast_ref::<strgraph::Error>()
                .is_some_and(strgraph::Error::is_internal);
            ExitCode::from(if internal { 2 } else { 1 })
        }
    }
}
