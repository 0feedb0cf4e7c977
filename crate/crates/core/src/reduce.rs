//! Transitive reduction of the overlap graph into the string graph.
//!
//! Arcs entering a target `z` are examined in order of increasing left
//! extension. An arc is transitive iff an irreducible arc into `z` has a left
//! extension that is a proper suffix of its own, which on the reversed reads
//! is interval containment plus a strictly shorter length. Accepted arcs are
//! kept in a chunk of at most `M` records; when the chunk is full the rest of
//! the arcs wait for another pass, tracked by a one-byte mark per arc.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{ArcRecord, OverlapGraph};
use crate::seqlist::{ListKey, RecordReader, RecordWriter, Storage};

pub const STRING_GRAPH_LIST: &str = "G.bin";

const UNPROCESSED: u8 = 0;
const PROCESSED: u8 = 1;
const TRANSITIVE: u8 = 2;

/// Whether `accepted` proves `candidate` transitive; both must enter the same read.
pub fn containment_reduces(candidate: &ArcRecord, accepted: &ArcRecord) -> bool {
    accepted.l_p < candidate.l_p && accepted.b_r <= candidate.b_r && candidate.e_r <= accepted.e_r
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReduceStats {
    pub arcs: u64,
    pub irreducible_arcs: u64,
    pub memory_records: u32,
    pub passes: u64,
    pub max_passes_per_target: u64,
    pub records_read: u64,
    pub records_written: u64,
    /// Largest in-degree of the string graph.
    pub max_in_degree: u64,
    /// `3 |E(G_O)| ceil(d / M)`.
    pub io_bound: u64,
    /// Whether every target stayed within `3 |E_O(z)| ceil(|D_z| / M)`.
    pub per_target_bound_held: bool,
    pub peak_resident_arcs: usize,
}

/// Sequential reader over `A(l_1, z), A(l_2, z), ...` for increasing `l_i`.
struct TargetArcs<'a> {
    storage: &'a Storage,
    z: u32,
    lens: &'a [u32],
    current: Option<RecordReader<ArcRecord>>,
}

impl<'a> TargetArcs<'a> {
    fn new(storage: &'a Storage, z: u32, lens: &'a [u32]) -> Self {
        TargetArcs {
            storage,
            z,
            lens,
            current: None,
        }
    }

    fn next_arc(&mut self) -> Result<Option<ArcRecord>> {
        loop {
            if let Some(reader) = &mut self.current {
                if let Some(arc) = reader.next_record()? {
                    return Ok(Some(arc));
                }
            }
            let Some((&l_p, rest)) = self.lens.split_first() else {
                return Ok(None);
            };
            self.lens = rest;
            self.current = Some(
                self.storage
                    .open(&ListKey::A { l_p, z: self.z }.file_name())?,
            );
        }
    }
}

fn mark_name(z: u32) -> String {
    format!("M_{z}.bin")
}

/// Writes the irreducible arcs of `graph` to `G.bin`, holding at most
/// `memory_records` accepted arcs at a time.
pub fn reduce_overlap_graph(graph: &OverlapGraph, memory_records: u32) -> Result<ReduceStats> {
    if memory_records == 0 {
        return Err(Error::Param(
            "memory must hold at least one arc record".into(),
        ));
    }
    let storage = graph.storage();
    let cap = memory_records as usize;
    let before = storage.io_counters();
    let mut out: RecordWriter<ArcRecord> = storage.create(STRING_GRAPH_LIST)?;
    let mut stats = ReduceStats {
        memory_records,
        per_target_bound_held: true,
        ..Default::default()
    };
    let mut chunk: Vec<ArcRecord> = Vec::new();

    for (z, lens) in graph.lists_by_target()? {
        let start = storage.io_counters();
        let marks = mark_name(z);
        let tmp = format!("M_{z}.tmp.bin");
        let mut accepted = 0u64;
        let mut pass = 0u64;
        let arcs_in = loop {
            pass += 1;
            chunk.clear();
            let mut arcs = TargetArcs::new(storage, z, &lens);
            let mut old_marks: Option<RecordReader<u8>> = if pass > 1 {
                Some(storage.open(&marks)?)
            } else {
                None
            };
            let mut new_marks: RecordWriter<u8> = storage.create(&tmp)?;
            let mut pending = false;
            let mut seen = 0u64;
            while let Some(arc) = arcs.next_arc()? {
                seen += 1;
                if arc.target != z {
                    return Err(Error::invariant(format!(
                        "arc {} -> {} stored among arcs into {z}",
                        arc.source, arc.target
                    )));
                }
                let mark = match &mut old_marks {
                    Some(r) => r.expect_record()?,
                    None => UNPROCESSED,
                };
                let mark = if mark != UNPROCESSED {
                    mark
                } else if chunk.iter().any(|acc| containment_reduces(&arc, acc)) {
                    TRANSITIVE
                } else if chunk.len() < cap {
                    chunk.push(arc);
                    out.append(&arc)?;
                    accepted += 1;
                    PROCESSED
                } else {
                    pending = true;
                    UNPROCESSED
                };
                stats.peak_resident_arcs = stats.peak_resident_arcs.max(chunk.len() + 1);
                new_marks.append(&mark)?;
            }
            if let Some(mut r) = old_marks {
                if r.next_record()?.is_some() {
                    return Err(Error::format(&marks, "more marks than arcs"));
                }
            }
            new_marks.finish()?;
            storage.rename(&tmp, &marks)?;
            if !pending {
                break seen;
            }
        };
        storage.remove(&marks)?;
        let used = storage.io_counters().since(start);
        let bound = 3 * arcs_in * accepted.div_ceil(cap as u64);
        if used.records_read + used.records_written > bound {
            stats.per_target_bound_held = false;
        }
        stats.arcs += arcs_in;
        stats.irreducible_arcs += accepted;
        stats.passes += pass;
        stats.max_passes_per_target = stats.max_passes_per_target.max(pass);
        stats.max_in_degree = stats.max_in_degree.max(accepted);
    }
    out.finish()?;
    let used = storage.io_counters().since(before);
    stats.records_read = used.records_read;
    stats.records_written = used.records_written;
    stats.io_bound = 3 * stats.arcs * stats.max_in_degree.div_ceil(cap as u64);
    Ok(stats)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{build_overlap_graph, read_arcs, OverlapOptions};
    use crate::index::ReadSet;
    use crate::seqlist::Storage;

    fn arc(b_r: u32, e_r: u32, l_p: u32) -> ArcRecord {
        ArcRecord {
            source: 1,
            target: 2,
            b_r,
            e_r,
            l_p,
        }
    }

    #[test]
    fn containment_test() {
        assert!(containment_reduces(&arc(6, 8, 5), &arc(5, 9, 2)));
        assert!(!containment_reduces(&arc(5, 9, 2), &arc(5, 9, 2)));
        assert!(!containment_reduces(&arc(4, 8, 5), &arc(5, 9, 2)));
        assert!(!containment_reduces(&arc(5, 9, 2), &arc(6, 8, 5)));
    }

    #[test]
    fn zero_memory_is_rejected() {
        let storage = Storage::memory();
        let graph = OverlapGraph::new(&storage, 1);
        assert!(matches!(
            reduce_overlap_graph(&graph, 0),
            Err(Error::Param(_))
        ));
    }

    #[test]
    fn single_arc_survives_any_budget() {
        let reads = ReadSet::from_strs(&["APPLE", "LEMON", "APRICOT"]).unwrap();
        for m in [1, 2, 1024] {
            let storage = Storage::memory();
            let (graph, _) =
                build_overlap_graph(&reads, &storage, &OverlapOptions::default()).unwrap();
            let stats = reduce_overlap_graph(&graph, m).unwrap();
            assert_eq!(stats.irreducible_arcs, 1);
            assert_eq!(
                read_arcs(&storage, STRING_GRAPH_LIST).unwrap(),
                graph.arcs().unwrap()
            );
            assert!(!storage.exists("M_2.bin"));
        }
    }

    #[test]
    fn chain_shortcut_is_removed() {
        // ABCD -> BCDE -> CDEF, plus the shortcut ABCD -> CDEF
        let reads = ReadSet::from_strs(&["ABCD", "BCDE", "CDEF"]).unwrap();
        for m in [1, 2, 8] {
            let storage = Storage::memory();
            let (graph, _) =
                build_overlap_graph(&reads, &storage, &OverlapOptions::default()).unwrap();
            assert_eq!(graph.arcs().unwrap().len(), 3);
            let stats = reduce_overlap_graph(&graph, m).unwrap();
            let mut kept: Vec<_> = read_arcs(&storage, STRING_GRAPH_LIST)
                .unwrap()
                .iter()
                .map(|a| (a.source, a.target, a.l_p))
                .collect();
            kept.sort_unstable();
            assert_eq!(kept, vec![(1, 2, 1), (2, 3, 1)]);
            assert!(stats.per_target_bound_held);
            assert!(stats.peak_resident_arcs <= m as usize + 1);
        }
    }
}
