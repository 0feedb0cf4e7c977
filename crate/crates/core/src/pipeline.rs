//! Work-directory driver behind the command-line tool.

use std::fmt::Write as _;
use std::fs::File;
use std::io::BufReader;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{
    overlap_from_index, read_arcs, ArcRecord, OverlapGraph, OverlapOptions, OverlapStats,
};
use crate::index::{
    build_index, check_substring_free, ingest_reads, IndexBundle, ReadFormat, ReadSet, READS_FILE,
};
use crate::labeling::{merge_for_pass, pass_lists, Family};
use crate::reduce::{reduce_overlap_graph, ReduceStats, STRING_GRAPH_LIST};
use crate::seedscan::build_basic_arc_intervals;
use crate::seqlist::Storage;

pub const STATS_FILE: &str = "stats.json";

#[derive(Clone, Debug)]
pub struct PipelineConfig {
    pub workdir: PathBuf,
    pub min_overlap: u32,
    pub memory_records: u32,
    pub keep_intermediate: bool,
    pub format: ReadFormat,
    pub force: bool,
}

impl PipelineConfig {
    pub fn new(workdir: impl Into<PathBuf>) -> Self {
        PipelineConfig {
            workdir: workdir.into(),
            min_overlap: 1,
            memory_records: 1 << 20,
            keep_intermediate: false,
            format: ReadFormat::Plain,
            force: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.min_overlap == 0 {
            return Err(Error::Param("minimum overlap must be at least 1".into()));
        }
        if self.memory_records == 0 {
            return Err(Error::Param(
                "memory must hold at least one arc record".into(),
            ));
        }
        Ok(())
    }

    pub fn storage(&self) -> Result<Storage> {
        if self.workdir.exists() && !self.workdir.is_dir() {
            return Err(Error::Path(format!(
                "{} is not a directory",
                self.workdir.display()
            )));
        }
        Storage::dir(&self.workdir)
    }

    fn overlap_options(&self) -> OverlapOptions {
        OverlapOptions {
            min_overlap: self.min_overlap,
            keep_intermediate: self.keep_intermediate,
            force: self.force,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct IndexReport {
    pub n: u64,
    pub m: u32,
    pub l: u32,
    pub duplicates_removed: usize,
    /// Reads contained in other reads.
    pub contained: Vec<u32>,
}

/// Summary written to `stats.json`; the reduction fields are filled by `reduce`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PipelineStats {
    pub n: u64,
    pub m: u32,
    pub l: u32,
    pub seeds: u64,
    pub arcs: u64,
    pub irreducible_arcs: Option<u64>,
    pub records_read: u64,
    pub records_written: u64,
    pub io_bound: u64,
    pub reduction_io_bound: Option<u64>,
    pub io_bound_held: bool,
    pub overlap: OverlapStats,
    pub reduction: Option<ReduceStats>,
}

pub fn load_reads(storage: &Storage) -> Result<ReadSet> {
    let text = storage.read_text(READS_FILE)?;
    Ok(ingest_reads(text.as_bytes(), ReadFormat::Plain)?.reads)
}

fn open_reads(path: &Path, format: ReadFormat) -> Result<crate::index::Ingested> {
    let file = File::open(path).map_err(|e| Error::io(path.display().to_string(), e))?;
    ingest_reads(BufReader::new(file), format)
}

/// Ingests the reads at `reads_path` and indexes them in the work directory.
pub fn run_index(cfg: &PipelineConfig, reads_path: &Path) -> Result<(IndexBundle, IndexReport)> {
    cfg.validate()?;
    let ingested = open_reads(reads_path, cfg.format)?;
    let storage = cfg.storage()?;
    for name in storage.names()? {
        storage.remove(&name)?;
    }
    let reads = &ingested.reads;
    storage.write_text(READS_FILE, &reads.to_text())?;
    let index = build_index(reads, &storage)?;
    let contained = check_substring_free(&index, reads)?;
    let report = IndexReport {
        n: reads.n(),
        m: reads.m(),
        l: reads.max_len(),
        duplicates_removed: ingested.duplicates_removed,
        contained,
    };
    Ok((index, report))
}

/// Indexes the reads and computes the overlap graph.
pub fn run_overlap(cfg: &PipelineConfig, reads_path: &Path) -> Result<PipelineStats> {
    let (index, report) = run_index(cfg, reads_path)?;
    if !report.contained.is_empty() && !cfg.force {
        return Err(Error::NotSubstringFree(report.contained));
    }
    let (_, overlap) = overlap_from_index(&index, &cfg.overlap_options())?;
    let stats = PipelineStats {
        n: overlap.n,
        m: overlap.m,
        l: overlap.l,
        seeds: overlap.seeds,
        arcs: overlap.arcs,
        irreducible_arcs: None,
        records_read: overlap.records_read,
        records_written: overlap.records_written,
        io_bound: overlap.io_bound,
        reduction_io_bound: None,
        io_bound_held: overlap.records_read <= overlap.io_bound,
        overlap,
        reduction: None,
    };
    write_stats(&index.storage().clone(), &stats)?;
    Ok(stats)
}

/// Reduces the overlap graph stored in the work directory.
pub fn run_reduce(cfg: &PipelineConfig) -> Result<PipelineStats> {
    cfg.validate()?;
    let storage = cfg.storage()?;
    let mut stats = read_stats(&storage)?;
    let graph = OverlapGraph::new(&storage, stats.m);
    let reduction = reduce_overlap_graph(&graph, cfg.memory_records)?;
    stats.irreducible_arcs = Some(reduction.irreducible_arcs);
    stats.reduction_io_bound = Some(reduction.io_bound);
    stats.io_bound_held = stats.records_read <= stats.io_bound
        && reduction.records_read + reduction.records_written <= reduction.io_bound;
    stats.reduction = Some(reduction);
    write_stats(&storage, &stats)?;
    Ok(stats)
}

fn write_stats(storage: &Storage, stats: &PipelineStats) -> Result<()> {
    let text = serde_json::to_string_pretty(stats).expect("statistics serialize");
    storage.write_text(STATS_FILE, &text)
}

pub fn read_stats(storage: &Storage) -> Result<PipelineStats> {
    let text = storage.read_text(STATS_FILE).map_err(|_| {
        Error::Path("no overlap graph in the work directory; run `overlap` first".into())
    })?;
    serde_json::from_str(&text).map_err(|e| Error::format(STATS_FILE, e.to_string()))
}

/// The overlap graph, or the string graph once `reduce` has run.
pub fn current_arcs(storage: &Storage) -> Result<Vec<ArcRecord>> {
    if storage.exists(STRING_GRAPH_LIST) {
        read_arcs(storage, STRING_GRAPH_LIST)
    } else {
        let stats = read_stats(storage)?;
        OverlapGraph::new(storage, stats.m).arcs()
    }
}

/// Recomputes the seeds of the indexed reads and lists them as
/// `seed`, `q(S$)` and `q($S)`, one per line, in index order.
pub fn dump_seeds(cfg: &PipelineConfig) -> Result<String> {
    cfg.validate()?;
    let storage = cfg.storage()?;
    let index = IndexBundle::load(&storage)?;
    let reads = load_reads(&storage)?;
    build_basic_arc_intervals(&index, cfg.min_overlap)?;
    let mut sa = index.scan_sa()?;
    let mut row = 0u32;
    let mut out = String::from("seed\tq_S$\tq_$S\n");
    for enc in merge_for_pass(&storage, Family::E, 0)? {
        let enc = enc?;
        let entry = loop {
            let entry = sa.expect_record()?;
            row += 1;
            if row == enc.q_ps_dollar.b {
                break entry;
            }
        };
        let read = reads.read(entry.j);
        let seed = &read[read.len() - entry.k as usize..];
        let _ = writeln!(
            out,
            "{}\t[{}, {})\t[{}, {})",
            String::from_utf8_lossy(seed),
            enc.q_ps_dollar.b,
            enc.q_ps_dollar.e,
            enc.q_dollar_s.b,
            enc.q_dollar_s.e
        );
    }
    for key in pass_lists(&storage, Family::E, 0)? {
        storage.remove(&key.file_name())?;
    }
    Ok(out)
}
