//! Brute-force references.
//!
//! Everything here works on the reads alone, by direct string comparison, and
//! shares nothing with the streaming pipeline beyond [`ReadSet`]. It is
//! quadratic or worse and only meant for small instances.

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashSet};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{build_overlap_graph, read_arcs, ArcRecord, OverlapOptions};
use crate::index::ReadSet;
use crate::intervals::{LabeledInterval, StringInterval};
use crate::reduce::{reduce_overlap_graph, STRING_GRAPH_LIST};
use crate::seqlist::Storage;

const DOLLAR: u8 = b'$';

fn rank(b: u8) -> u16 {
    if b == DOLLAR {
        0
    } else {
        1 + b as u16
    }
}

fn lex(a: &[u8], b: &[u8]) -> Ordering {
    a.iter().map(|&x| rank(x)).cmp(b.iter().map(|&x| rank(x)))
}

/// All rotations `r[|r|-k..] $ r[..|r|-k]`, sorted.
pub struct NaiveIndex {
    rotations: Vec<(Vec<u8>, u32, u32)>,
}

impl NaiveIndex {
    pub fn new(reads: &ReadSet) -> Self {
        let mut rotations = Vec::new();
        for j in 1..=reads.m() {
            let r = reads.read(j);
            for k in 0..=r.len() {
                let cut = r.len() - k;
                let mut rot = r[cut..].to_vec();
                rot.push(DOLLAR);
                rot.extend_from_slice(&r[..cut]);
                rotations.push((rot, k as u32, j));
            }
        }
        rotations.sort_by(|a, b| lex(&a.0, &b.0));
        NaiveIndex { rotations }
    }

    pub fn len(&self) -> usize {
        self.rotations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rotations.is_empty()
    }

    /// `(k, j)` of the rotation at 1-based position `pos`.
    pub fn entry(&self, pos: u32) -> (u32, u32) {
        let (_, k, j) = &self.rotations[pos as usize - 1];
        (*k, *j)
    }

    pub fn rotation(&self, pos: u32) -> &[u8] {
        &self.rotations[pos as usize - 1].0
    }

    /// Last symbol of every rotation, in order.
    pub fn bwt(&self) -> Vec<u8> {
        self.rotations
            .iter()
            .map(|(r, _, _)| *r.last().unwrap())
            .collect()
    }

    /// The `q`-interval; an empty one sits at the insertion point.
    pub fn interval(&self, q: &[u8]) -> LabeledInterval {
        // rotations starting with q follow every rotation smaller than q
        let smaller = self
            .rotations
            .partition_point(|(rot, _, _)| lex(rot, q) == Ordering::Less);
        let matching = self.rotations[smaller..].partition_point(|(rot, _, _)| rot.starts_with(q));
        let (smaller, matching) = (smaller as u32, matching as u32);
        LabeledInterval {
            interval: StringInterval::new(smaller + 1, smaller + 1 + matching),
            length: q.iter().filter(|&&c| c != DOLLAR).count() as u32,
        }
    }
}

pub fn naive_interval(q: &[u8], reads: &ReadSet) -> LabeledInterval {
    NaiveIndex::new(reads).interval(q)
}

/// `r_source = lx · overlap` and `r_target = overlap · rx`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NaiveArc {
    pub source: u32,
    pub target: u32,
    pub overlap: Vec<u8>,
    pub lx: Vec<u8>,
    pub rx: Vec<u8>,
}

impl NaiveArc {
    pub fn from_record(arc: &ArcRecord, reads: &ReadSet) -> Self {
        let src = reads.read(arc.source);
        let overlap = &src[arc.l_p as usize..];
        NaiveArc {
            source: arc.source,
            target: arc.target,
            overlap: overlap.to_vec(),
            lx: src[..arc.l_p as usize].to_vec(),
            rx: reads.read(arc.target)[overlap.len()..].to_vec(),
        }
    }
}

/// Every `(i, j, k)` with `1 <= k < |r_i|`, `k <= |r_j|` and the `k`-suffix of
/// `r_i` equal to the `k`-prefix of `r_j`.
pub fn naive_overlap_graph(reads: &ReadSet) -> Vec<NaiveArc> {
    let mut arcs = Vec::new();
    for i in 1..=reads.m() {
        let ri = reads.read(i);
        for j in 1..=reads.m() {
            let rj = reads.read(j);
            for k in 1..ri.len().min(rj.len() + 1) {
                if ri[ri.len() - k..] == rj[..k] {
                    arcs.push(NaiveArc {
                        source: i,
                        target: j,
                        overlap: rj[..k].to_vec(),
                        lx: ri[..ri.len() - k].to_vec(),
                        rx: rj[k..].to_vec(),
                    });
                }
            }
        }
    }
    arcs.sort();
    arcs
}

fn contains(hay: &[u8], needle: &[u8]) -> bool {
    needle.is_empty() || hay.windows(needle.len()).any(|w| w == needle)
}

/// Suffixes of reads that are also a prefix of a read and a proper substring of a read.
pub fn naive_seeds(reads: &ReadSet) -> BTreeSet<Vec<u8>> {
    let mut seeds = BTreeSet::new();
    for r in reads.reads() {
        for k in 1..=r.len() {
            let s = &r[r.len() - k..];
            if seeds.contains(s) {
                continue;
            }
            let is_prefix = reads.reads().iter().any(|x| x.starts_with(s));
            let is_proper = reads.reads().iter().any(|x| x.len() > k && contains(x, s));
            if is_prefix && is_proper {
                seeds.insert(s.to_vec());
            }
        }
    }
    seeds
}

/// Ids of reads occurring inside another read.
pub fn naive_contained(reads: &ReadSet) -> Vec<u32> {
    (1..=reads.m())
        .filter(|&i| (1..=reads.m()).any(|j| j != i && contains(reads.read(j), reads.read(i))))
        .collect()
}

/// Whether another path from `arc.source` to `arc.target` spells the same left extension.
fn reducible_by_path(arc: &NaiveArc, arcs: &[NaiveArc]) -> bool {
    let t = &arc.lx;
    let mut seen = HashSet::new();
    let mut todo = vec![(arc.source, 0usize)];
    while let Some((v, c)) = todo.pop() {
        for next in arcs.iter().filter(|a| a.source == v) {
            let end = c + next.lx.len();
            if end > t.len() || t[c..end] != next.lx[..] {
                continue;
            }
            if end == t.len() {
                if next.target == arc.target && c > 0 {
                    return true;
                }
            } else if seen.insert((next.target, end)) {
                todo.push((next.target, end));
            }
        }
    }
    false
}

/// Whether another arc into the same read has a left extension that is a proper suffix of this one's.
fn reducible_by_suffix(arc: &NaiveArc, arcs: &[NaiveArc]) -> bool {
    arcs.iter().any(|other| {
        other.target == arc.target && other.lx.len() < arc.lx.len() && arc.lx.ends_with(&other.lx)
    })
}

/// The irreducible arcs, by exhaustive path search, cross-checked against the
/// local suffix characterization.
pub fn naive_string_graph(reads: &ReadSet) -> Result<Vec<NaiveArc>> {
    let contained = naive_contained(reads);
    if !contained.is_empty() {
        return Err(Error::NotSubstringFree(contained));
    }
    let arcs = naive_overlap_graph(reads);
    let mut kept = Vec::new();
    for arc in &arcs {
        let by_path = reducible_by_path(arc, &arcs);
        let by_suffix = reducible_by_suffix(arc, &arcs);
        if by_path != by_suffix {
            return Err(Error::Oracle(format!(
                "arc {} -> {} with left extension {}: path search says {by_path}, suffix test says {by_suffix}",
                arc.source,
                arc.target,
                String::from_utf8_lossy(&arc.lx)
            )));
        }
        if !by_path {
            kept.push(arc.clone());
        }
    }
    Ok(kept)
}

/// `lx_1 · lx_2 ··· lx_k · r_last` along a walk of arcs.
pub fn assemble_left(walk: &[NaiveArc], reads: &ReadSet) -> Vec<u8> {
    let mut out = Vec::new();
    for a in walk {
        out.extend_from_slice(&a.lx);
    }
    if let Some(last) = walk.last() {
        out.extend_from_slice(reads.read(last.target));
    }
    out
}

/// `r_first · rx_1 · rx_2 ··· rx_k` along a walk of arcs.
pub fn assemble_right(walk: &[NaiveArc], reads: &ReadSet) -> Vec<u8> {
    let mut out = Vec::new();
    if let Some(first) = walk.first() {
        out.extend_from_slice(reads.read(first.source));
    }
    for a in walk {
        out.extend_from_slice(&a.rx);
    }
    out
}

/// Up to `m` distinct reads of length `1..=l` over `alphabet`, in random order.
pub fn random_reads(rng: &mut impl Rng, m: usize, l: usize, alphabet: &[u8]) -> ReadSet {
    let mut seen = HashSet::new();
    let mut reads = Vec::new();
    for _ in 0..m {
        let len = rng.gen_range(1..=l);
        let r: Vec<u8> = (0..len).map(|_| *alphabet.choose(rng).unwrap()).collect();
        if seen.insert(r.clone()) {
            reads.push(r);
        }
    }
    ReadSet::new(reads).expect("at least one read")
}

/// Substring-free reads sampled from a random genome.
///
/// Short genomes over small alphabets are chosen often, so that overlaps at
/// several lengths, self-overlaps and transitive arcs are common.
pub fn substring_free_reads(rng: &mut impl Rng, m: usize, l: usize) -> ReadSet {
    let alphabet = &b"ACGT"[..rng.gen_range(2..=4)];
    let genome_len = rng.gen_range(l..=l.max(m * l / 3).max(l + 1));
    let genome: Vec<u8> = if rng.gen_bool(0.2) {
        let period = rng.gen_range(1..=4);
        let unit: Vec<u8> = (0..period)
            .map(|_| *alphabet.choose(rng).unwrap())
            .collect();
        (0..genome_len)
            .map(|i| {
                if rng.gen_bool(0.1) {
                    *alphabet.choose(rng).unwrap()
                } else {
                    unit[i % period]
                }
            })
            .collect()
    } else {
        (0..genome_len)
            .map(|_| *alphabet.choose(rng).unwrap())
            .collect()
    };
    let lo = (l / 2).max(1);
    let mut reads: Vec<Vec<u8>> = (0..m)
        .map(|_| {
            let len = rng.gen_range(lo..=l.min(genome.len()));
            let start = rng.gen_range(0..=genome.len() - len);
            genome[start..start + len].to_vec()
        })
        .collect();
    reads.sort_by(|a, b| b.len().cmp(&a.len()).then_with(|| a.cmp(b)));
    reads.dedup();
    let mut kept: Vec<Vec<u8>> = Vec::new();
    for r in reads {
        if !kept.iter().any(|k| contains(k, &r)) {
            kept.push(r);
        }
    }
    kept.shuffle(rng);
    ReadSet::new(kept).expect("at least one read")
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct VerifyReport {
    pub instances: usize,
    pub reads: u64,
    pub arcs: u64,
    pub irreducible_arcs: u64,
    pub failures: Vec<String>,
}

/// Runs the pipeline on `instances` random substring-free read sets and
/// compares every stage against the brute-force references.
pub fn verify(instances: usize, seed: u64) -> Result<VerifyReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = VerifyReport {
        instances,
        ..Default::default()
    };
    for case in 0..instances {
        let m = rng.gen_range(1..=50);
        let l = rng.gen_range(2..=30);
        let reads = substring_free_reads(&mut rng, m, l);
        report.reads += reads.m() as u64;
        let mut fail = |what: String| report.failures.push(format!("instance {case}: {what}"));

        let storage = Storage::memory();
        let (graph, stats) = build_overlap_graph(&reads, &storage, &OverlapOptions::default())?;
        let records = graph.arcs()?;
        let mut got: Vec<NaiveArc> = records
            .iter()
            .map(|a| NaiveArc::from_record(a, &reads))
            .collect();
        got.sort();
        let expected = naive_overlap_graph(&reads);
        if got != expected {
            fail(format!("{} arcs, expected {}", got.len(), expected.len()));
            continue;
        }
        report.arcs += got.len() as u64;
        if stats.records_read > stats.io_bound {
            fail(format!(
                "read {} records, bound {}",
                stats.records_read, stats.io_bound
            ));
        }
        let reversed = NaiveIndex::new(&reads.reversed());
        for a in &records {
            let lx_r: Vec<u8> = reads.read(a.source)[..a.l_p as usize]
                .iter()
                .rev()
                .copied()
                .collect();
            if reversed.interval(&lx_r).interval != StringInterval::new(a.b_r, a.e_r) {
                fail(format!(
                    "wrong reversed interval on arc {} -> {}",
                    a.source, a.target
                ));
            }
        }

        let mut expected = naive_string_graph(&reads)?;
        expected.sort();
        for budget in [1, 2, 8, 1024] {
            let rstats = reduce_overlap_graph(&graph, budget)?;
            let mut kept: Vec<NaiveArc> = read_arcs(&storage, STRING_GRAPH_LIST)?
                .iter()
                .map(|a| NaiveArc::from_record(a, &reads))
                .collect();
            kept.sort();
            if kept != expected {
                fail(format!(
                    "M = {budget}: {} irreducible arcs, expected {}",
                    kept.len(),
                    expected.len()
                ));
            }
            if !rstats.per_target_bound_held
                || rstats.records_read + rstats.records_written > rstats.io_bound
            {
                fail(format!("M = {budget}: reduction exceeded its I/O bound"));
            }
        }
        report.irreducible_arcs += expected.len() as u64;
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(items: &[&str]) -> BTreeSet<Vec<u8>> {
        items.iter().map(|s| s.as_bytes().to_vec()).collect()
    }

    #[test]
    fn seeds_by_hand() {
        let fruits = ReadSet::from_strs(&["APPLE", "LEMON", "APRICOT"]).unwrap();
        assert_eq!(naive_seeds(&fruits), set(&["LE"]));
        let ab = ReadSet::from_strs(&["AB", "BA"]).unwrap();
        assert_eq!(naive_seeds(&ab), set(&["A", "B"]));
        let none = ReadSet::from_strs(&["AAC", "GGT"]).unwrap();
        assert!(naive_seeds(&none).is_empty());
    }

    #[test]
    fn overlap_graph_by_hand() {
        let fruits = ReadSet::from_strs(&["APPLE", "LEMON", "APRICOT"]).unwrap();
        let arcs = naive_overlap_graph(&fruits);
        assert_eq!(arcs.len(), 1);
        assert_eq!((arcs[0].source, arcs[0].target), (1, 2));
        assert_eq!(arcs[0].overlap, b"LE");
        let aa = ReadSet::from_strs(&["AA"]).unwrap();
        let arcs = naive_overlap_graph(&aa);
        assert_eq!(arcs.len(), 1);
        assert_eq!(
            (arcs[0].source, arcs[0].target, &arcs[0].overlap[..]),
            (1, 1, &b"A"[..])
        );
    }

    #[test]
    fn string_graph_by_hand() {
        let chain = ReadSet::from_strs(&["ABCD", "BCDE", "CDEF"]).unwrap();
        let kept = naive_string_graph(&chain).unwrap();
        let pairs: Vec<_> = kept.iter().map(|a| (a.source, a.target)).collect();
        assert_eq!(pairs, vec![(1, 2), (2, 3)]);
        let no_shortcut = ReadSet::from_strs(&["ABC", "BCD", "CDE"]).unwrap();
        assert_eq!(naive_string_graph(&no_shortcut).unwrap().len(), 2);
    }

    #[test]
    fn naive_index_of_fruits() {
        let fruits = ReadSet::from_strs(&["APPLE", "LEMON", "APRICOT"]).unwrap();
        let idx = NaiveIndex::new(&fruits);
        assert_eq!(idx.len(), 20);
        assert_eq!(idx.bwt(), b"ETN$$ILLRP$EOMCPAAPO");
        assert_eq!(idx.entry(2), (0, 3));
    }

    #[test]
    fn generated_reads_are_substring_free() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let reads = substring_free_reads(&mut rng, 30, 12);
            assert!(naive_contained(&reads).is_empty());
        }
    }

    #[test]
    fn left_and_right_assembly_agree() {
        let fruits = ReadSet::from_strs(&["APPLE", "LEMON", "APRICOT"]).unwrap();
        let arcs = naive_overlap_graph(&fruits);
        assert_eq!(assemble_left(&arcs, &fruits), b"APPLEMON");
        assert_eq!(assemble_right(&arcs, &fruits), b"APPLEMON");
    }

    #[test]
    fn small_verification_run() {
        let report = verify(5, 11).unwrap();
        assert!(report.failures.is_empty(), "{:?}", report.failures);
    }
}
