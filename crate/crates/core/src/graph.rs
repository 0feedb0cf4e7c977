//! Overlap graph construction, path assembly and export.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::index::{build_index, check_substring_free, sentinel_rank_table, IndexBundle, ReadSet};
use crate::labeling::{complete_extensions, extend_encodings, pass_lists, Family};
use crate::seedscan::build_basic_arc_intervals;
use crate::seqlist::{get_u32, put_u32, ListKey, Record, Storage};

/// Arc `source -> target` whose left extension is the `l_p`-prefix of the
/// source read. `[b_r, e_r)` is the interval of the reversed left extension
/// in the index of the reversed reads.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ArcRecord {
    pub source: u32,
    pub target: u32,
    pub b_r: u32,
    pub e_r: u32,
    pub l_p: u32,
}

impl ArcRecord {
    pub fn overlap_len(&self, reads: &ReadSet) -> u32 {
        reads.read(self.source).len() as u32 - self.l_p
    }

    pub fn left_extension<'r>(&self, reads: &'r ReadSet) -> &'r [u8] {
        &reads.read(self.source)[..self.l_p as usize]
    }
}

impl Record for ArcRecord {
    const WIDTH: usize = 20;

    fn encode(&self, out: &mut [u8]) {
        put_u32(out, 0, self.source);
        put_u32(out, 1, self.target);
        put_u32(out, 2, self.b_r);
        put_u32(out, 3, self.e_r);
        put_u32(out, 4, self.l_p);
    }

    fn decode(buf: &[u8]) -> Self {
        ArcRecord {
            source: get_u32(buf, 0),
            target: get_u32(buf, 1),
            b_r: get_u32(buf, 2),
            e_r: get_u32(buf, 3),
            l_p: get_u32(buf, 4),
        }
    }
}

/// The overlap graph as the family of lists `A(l_p, z)` in a storage.
#[derive(Clone, Debug)]
pub struct OverlapGraph {
    storage: Storage,
    m: u32,
}

impl OverlapGraph {
    pub fn new(storage: &Storage, m: u32) -> Self {
        OverlapGraph {
            storage: storage.clone(),
            m,
        }
    }

    pub fn storage(&self) -> &Storage {
        &self.storage
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    /// `l_p` values of the nonempty lists entering each target, ascending.
    pub fn lists_by_target(&self) -> Result<BTreeMap<u32, Vec<u32>>> {
        let mut by_target: BTreeMap<u32, Vec<u32>> = BTreeMap::new();
        for key in self.storage.list_keys()? {
            if let ListKey::A { l_p, z } = key {
                by_target.entry(z).or_default().push(l_p);
            }
        }
        for lens in by_target.values_mut() {
            lens.sort_unstable();
        }
        Ok(by_target)
    }

    /// Every arc, ordered by target, then `l_p`, then source.
    pub fn arcs(&self) -> Result<Vec<ArcRecord>> {
        let mut arcs = Vec::new();
        for (z, lens) in self.lists_by_target()? {
            for l_p in lens {
                let start = arcs.len();
                for arc in self
                    .storage
                    .open::<ArcRecord>(&ListKey::A { l_p, z }.file_name())?
                {
                    arcs.push(arc?);
                }
                arcs[start..].sort_unstable_by_key(|a| a.source);
            }
        }
        Ok(arcs)
    }
}

/// Reads a whole arc list, e.g. a reduced graph.
pub fn read_arcs(storage: &Storage, name: &str) -> Result<Vec<ArcRecord>> {
    storage.open(name)?.collect()
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct OverlapStats {
    pub n: u64,
    pub m: u32,
    pub l: u32,
    pub seeds: u64,
    pub arcs: u64,
    pub rounds: u32,
    pub records_read: u64,
    pub records_written: u64,
    /// `(3 + 6l)(n + m)`.
    pub io_bound: u64,
    pub max_seed_stack_depth: usize,
    pub peak_labeling_encodings: usize,
    /// Largest number of lists merged into one labeling pass.
    pub max_merged_lists: usize,
    pub sentinel_table_entries: usize,
}

#[derive(Clone, Copy, Debug)]
pub struct OverlapOptions {
    pub min_overlap: u32,
    pub keep_intermediate: bool,
    /// Proceed on input that is not substring-free.
    pub force: bool,
}

impl Default for OverlapOptions {
    fn default() -> Self {
        OverlapOptions {
            min_overlap: 1,
            keep_intermediate: false,
            force: false,
        }
    }
}

/// Indexes `reads` into `storage`, then computes every arc of the overlap graph.
pub fn build_overlap_graph(
    reads: &ReadSet,
    storage: &Storage,
    opts: &OverlapOptions,
) -> Result<(OverlapGraph, OverlapStats)> {
    let index = build_index(reads, storage)?;
    if !opts.force {
        let contained = check_substring_free(&index, reads)?;
        if !contained.is_empty() {
            return Err(Error::NotSubstringFree(contained));
        }
    }
    overlap_from_index(&index, opts)
}

/// The overlap phase proper, on an existing index. I/O counters are reset first.
pub fn overlap_from_index(
    index: &IndexBundle,
    opts: &OverlapOptions,
) -> Result<(OverlapGraph, OverlapStats)> {
    if opts.min_overlap == 0 {
        return Err(Error::Param("minimum overlap must be at least 1".into()));
    }
    let storage = index.storage();
    for key in storage.list_keys()? {
        storage.remove(&key.file_name())?;
    }
    storage.reset_io_counters();
    let meta = index.meta();
    let l = meta.max_len;

    let seeds = build_basic_arc_intervals(index, opts.min_overlap)?;
    let ranks = sentinel_rank_table(index)?;
    let mut stats = OverlapStats {
        n: meta.n,
        m: meta.m,
        l,
        seeds: seeds.seeds,
        max_seed_stack_depth: seeds.max_stack_depth,
        sentinel_table_entries: ranks.rank_to_read.len(),
        io_bound: (3 + 6 * l as u64) * (meta.n + meta.m as u64),
        ..Default::default()
    };
    for l_p in 0..l {
        if pass_lists(storage, Family::E, l_p)?.is_empty() {
            break;
        }
        let ext = extend_encodings(l_p, index, &ranks)?;
        stats.rounds += 1;
        stats.arcs += ext.arcs;
        stats.peak_labeling_encodings = stats.peak_labeling_encodings.max(ext.peak_encodings);
        stats.max_merged_lists = stats.max_merged_lists.max(ext.merged_lists);
        if !opts.keep_intermediate {
            for key in pass_lists(storage, Family::E, l_p)? {
                storage.remove(&key.file_name())?;
            }
        }
        if l_p + 1 < l {
            let done = complete_extensions(l_p, index)?;
            stats.peak_labeling_encodings = stats.peak_labeling_encodings.max(done.peak_encodings);
            stats.max_merged_lists = stats.max_merged_lists.max(done.merged_lists);
            if !opts.keep_intermediate {
                for key in pass_lists(storage, Family::P, l_p)? {
                    storage.remove(&key.file_name())?;
                }
            }
        }
    }
    let io = storage.io_counters();
    stats.records_read = io.records_read;
    stats.records_written = io.records_written;
    Ok((OverlapGraph::new(storage, meta.m), stats))
}

/// Concatenates the left extensions along `path` and the last read.
/// Among parallel arcs the one with the shortest left extension is used.
pub fn assemble_path(path: &[u32], arcs: &[ArcRecord], reads: &ReadSet) -> Result<Vec<u8>> {
    let Some(&last) = path.last() else {
        return Err(Error::Path("empty path".into()));
    };
    for &v in path {
        if v == 0 || v > reads.m() {
            return Err(Error::Path(format!("no read with id {v}")));
        }
    }
    let mut out = Vec::new();
    for pair in path.windows(2) {
        let arc = arcs
            .iter()
            .filter(|a| a.source == pair[0] && a.target == pair[1])
            .min_by_key(|a| a.l_p)
            .ok_or_else(|| Error::Path(format!("no arc {} -> {}", pair[0], pair[1])))?;
        out.extend_from_slice(arc.left_extension(reads));
    }
    out.extend_from_slice(reads.read(last));
    Ok(out)
}

pub const TSV_HEADER: &str = "source\ttarget\toverlap_len\tleft_ext_len\tleft_ext";

/// Tab-separated arcs, ordered by target, `l_p` and source.
pub fn export_graph(arcs: &[ArcRecord], reads: &ReadSet) -> String {
    let mut sorted = arcs.to_vec();
    sorted.sort_unstable_by_key(|a| (a.target, a.l_p, a.source));
    let mut out = String::from(TSV_HEADER);
    out.push('\n');
    for a in sorted {
        let _ = writeln!(
            out,
            "{}\t{}\t{}\t{}\t{}",
            a.source,
            a.target,
            a.overlap_len(reads),
            a.l_p,
            String::from_utf8_lossy(a.left_extension(reads))
        );
    }
    out
}
