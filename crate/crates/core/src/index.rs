//! Read ingestion and the three index lists: BWT, generalized suffix array, LCP.
//!
//! Suffixes are ordered as rotations of `r_j$`: the sentinel sorts before
//! every symbol, and the pure-sentinel suffixes `(0, j)` therefore come first,
//! ordered by the lexicographic order of their reads. The LCP of two suffixes
//! never extends over a sentinel.

use std::cmp::Ordering;
use std::collections::HashSet;
use std::fmt;
use std::io::BufRead;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::intervals::symbol_rank;
use crate::seqlist::{get_u32, put_u32, Record, RecordReader, Storage};

pub const SENTINEL: u8 = b'$';

pub const BWT_LIST: &str = "B.bin";
pub const SA_LIST: &str = "SA.bin";
pub const LCP_LIST: &str = "LCP.bin";
pub const META_FILE: &str = "index.json";
pub const READS_FILE: &str = "reads.txt";

/// Ordered read alphabet. Code 0 is the sentinel; symbols get codes `1..=len`.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Alphabet {
    symbols: Vec<u8>,
    #[serde(skip)]
    codes: Box<[u8; 256]>,
}

impl fmt::Debug for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Alphabet({:?})", String::from_utf8_lossy(&self.symbols))
    }
}

impl Alphabet {
    pub fn new(mut symbols: Vec<u8>) -> Result<Self> {
        symbols.sort_unstable();
        symbols.dedup();
        if symbols.len() > 254 {
            return Err(Error::Param("alphabet too large".into()));
        }
        let mut codes = Box::new([u8::MAX; 256]);
        codes[SENTINEL as usize] = 0;
        for (i, &s) in symbols.iter().enumerate() {
            if !valid_symbol(s) {
                return Err(Error::Param(format!("illegal symbol {:?}", s as char)));
            }
            codes[s as usize] = i as u8 + 1;
        }
        Ok(Alphabet { symbols, codes })
    }

    pub fn symbols(&self) -> &[u8] {
        &self.symbols
    }

    /// Number of codes including the sentinel.
    pub fn size(&self) -> usize {
        self.symbols.len() + 1
    }

    pub fn code(&self, byte: u8) -> Option<u8> {
        match self.codes[byte as usize] {
            u8::MAX => None,
            c => Some(c),
        }
    }

    pub fn byte(&self, code: u8) -> u8 {
        if code == 0 {
            SENTINEL
        } else {
            self.symbols[code as usize - 1]
        }
    }
}

impl TryFrom<String> for Alphabet {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        Alphabet::new(s.into_bytes())
    }
}

impl From<Alphabet> for String {
    fn from(a: Alphabet) -> String {
        String::from_utf8_lossy(&a.symbols).into_owned()
    }
}

fn valid_symbol(b: u8) -> bool {
    b.is_ascii_graphic() && b != SENTINEL
}

/// The input collection: distinct, nonempty reads with 1-based ids.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReadSet {
    reads: Vec<Vec<u8>>,
    alphabet: Alphabet,
}

impl ReadSet {
    pub fn new(reads: Vec<Vec<u8>>) -> Result<Self> {
        if reads.is_empty() {
            return Err(Error::EmptyInput);
        }
        let mut seen = HashSet::with_capacity(reads.len());
        let mut symbols = HashSet::new();
        for (i, r) in reads.iter().enumerate() {
            if r.is_empty() {
                return Err(Error::Param(format!("read {} is empty", i + 1)));
            }
            if !seen.insert(r.as_slice()) {
                return Err(Error::Param(format!("read {} is a duplicate", i + 1)));
            }
            symbols.extend(r.iter().copied());
        }
        let alphabet = Alphabet::new(symbols.into_iter().collect())?;
        Ok(ReadSet { reads, alphabet })
    }

    pub fn from_strs(reads: &[&str]) -> Result<Self> {
        ReadSet::new(reads.iter().map(|r| r.as_bytes().to_vec()).collect())
    }

    /// Number of reads.
    pub fn m(&self) -> u32 {
        self.reads.len() as u32
    }

    /// Total number of symbols, sentinels excluded.
    pub fn n(&self) -> u64 {
        self.reads.iter().map(|r| r.len() as u64).sum()
    }

    /// Length of the longest read.
    pub fn max_len(&self) -> u32 {
        self.reads.iter().map(|r| r.len() as u32).max().unwrap_or(0)
    }

    /// Read with 1-based id `id`.
    pub fn read(&self, id: u32) -> &[u8] {
        &self.reads[id as usize - 1]
    }

    pub fn reads(&self) -> &[Vec<u8>] {
        &self.reads
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    /// The collection of reversed reads, ids preserved.
    pub fn reversed(&self) -> ReadSet {
        ReadSet::new(
            self.reads
                .iter()
                .map(|r| r.iter().rev().copied().collect())
                .collect(),
        )
        .expect("reversal preserves validity")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::with_capacity(self.n() as usize + self.reads.len());
        for r in &self.reads {
            out.push_str(&String::from_utf8_lossy(r));
            out.push('\n');
        }
        out
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ReadFormat {
    #[default]
    Plain,
    Fasta,
}

impl FromStr for ReadFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "plain" => Ok(ReadFormat::Plain),
            "fasta" => Ok(ReadFormat::Fasta),
            other => Err(Error::Param(format!("unknown read format `{other}`"))),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Ingested {
    pub reads: ReadSet,
    pub duplicates_removed: usize,
}

/// Parses reads, dropping exact duplicates. Ids follow input order after deduplication.
pub fn ingest_reads(source: impl BufRead, format: ReadFormat) -> Result<Ingested> {
    let mut raw: Vec<Vec<u8>> = Vec::new();
    let mut in_record = false;
    for (i, line) in source.lines().enumerate() {
        let lineno = i + 1;
        let line = line.map_err(|e| Error::Parse {
            line: lineno,
            msg: e.to_string(),
        })?;
        let line = line.trim_end_matches('\r');
        if format == ReadFormat::Fasta && line.starts_with('>') {
            raw.push(Vec::new());
            in_record = true;
            continue;
        }
        let seq = line.trim();
        if seq.is_empty() {
            continue;
        }
        if let Some(bad) = seq.bytes().find(|&b| !valid_symbol(b)) {
            return Err(Error::Parse {
                line: lineno,
                msg: format!("illegal symbol {:?}", bad as char),
            });
        }
        match format {
            ReadFormat::Plain => raw.push(seq.as_bytes().to_vec()),
            ReadFormat::Fasta => {
                if !in_record {
                    return Err(Error::Parse {
                        line: lineno,
                        msg: "sequence before the first FASTA header".into(),
                    });
                }
                raw.last_mut().unwrap().extend_from_slice(seq.as_bytes());
            }
        }
    }
    raw.retain(|r| !r.is_empty());
    if raw.is_empty() {
        return Err(Error::EmptyInput);
    }
    let before = raw.len();
    let mut seen = HashSet::new();
    raw.retain(|r| seen.insert(r.clone()));
    let duplicates_removed = before - raw.len();
    Ok(Ingested {
        reads: ReadSet::new(raw)?,
        duplicates_removed,
    })
}

/// One GSA entry: the `k`-suffix of read `j` (1-based).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct GsaEntry {
    pub k: u32,
    pub j: u32,
}

impl Record for GsaEntry {
    const WIDTH: usize = 8;

    fn encode(&self, out: &mut [u8]) {
        put_u32(out, 0, self.k);
        put_u32(out, 1, self.j);
    }

    fn decode(buf: &[u8]) -> Self {
        GsaEntry {
            k: get_u32(buf, 0),
            j: get_u32(buf, 1),
        }
    }
}

/// Summary of an index, persisted next to its lists.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndexMeta {
    pub m: u32,
    pub n: u64,
    pub max_len: u32,
    pub total_len: u32,
    pub alphabet: Alphabet,
    /// Occurrences in the BWT, by symbol code.
    pub counts: Vec<u32>,
    /// `c[code]`: number of BWT symbols strictly smaller than `code`.
    pub c: Vec<u32>,
}

/// The BWT, GSA and LCP lists of a read set, plus the `C` table.
#[derive(Clone, Debug)]
pub struct IndexBundle {
    storage: Storage,
    meta: IndexMeta,
}

impl IndexBundle {
    pub fn load(storage: &Storage) -> Result<Self> {
        let text = storage.read_text(META_FILE)?;
        let meta =
            serde_json::from_str(&text).map_err(|e| Error::format(META_FILE, e.to_string()))?;
        Ok(IndexBundle {
            storage: storage.clone(),
            meta,
        })
    }

    pub fn storage(&self) -> &Storage {
        &self.storage
    }

    pub fn meta(&self) -> &IndexMeta {
        &self.meta
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.meta.alphabet
    }

    /// `n + m`, the length of every index list.
    pub fn total_len(&self) -> u32 {
        self.meta.total_len
    }

    pub fn c(&self, code: u8) -> u32 {
        self.meta.c[code as usize]
    }

    /// Symbol code of the first character of the rotation at sorted position `pos`.
    pub fn symbol_at(&self, pos: u32) -> u8 {
        debug_assert!(pos >= 1 && pos <= self.meta.total_len);
        let mut code = 0;
        for (c, (&start, &count)) in self.meta.c.iter().zip(&self.meta.counts).enumerate() {
            if pos > start && pos <= start + count {
                code = c as u8;
                break;
            }
        }
        code
    }

    pub fn scan_bwt(&self) -> Result<BwtScan> {
        Ok(BwtScan {
            inner: self.storage.open(BWT_LIST)?,
            alphabet: self.meta.alphabet.clone(),
        })
    }

    pub fn scan_sa(&self) -> Result<RecordReader<GsaEntry>> {
        self.storage.open(SA_LIST)
    }

    pub fn scan_lcp(&self) -> Result<RecordReader<i32>> {
        self.storage.open(LCP_LIST)
    }
}

/// Sequential BWT scan yielding symbol codes.
pub struct BwtScan {
    inner: RecordReader<u8>,
    alphabet: Alphabet,
}

impl BwtScan {
    pub fn next_code(&mut self) -> Result<Option<u8>> {
        match self.inner.next_record()? {
            None => Ok(None),
            Some(b) => self.alphabet.code(b).map(Some).ok_or_else(|| {
                Error::format(
                    BWT_LIST,
                    format!("symbol {:?} outside the alphabet", b as char),
                )
            }),
        }
    }

    pub fn expect_code(&mut self) -> Result<u8> {
        self.next_code()?
            .ok_or_else(|| Error::format(BWT_LIST, "list ended early"))
    }
}

impl Iterator for BwtScan {
    type Item = Result<u8>;

    fn next(&mut self) -> Option<Self::Item> {
        self.next_code().transpose()
    }
}

fn rotation_symbol(read: &[u8], k: usize, t: usize) -> u16 {
    let cut = read.len() - k;
    match t.cmp(&k) {
        Ordering::Less => symbol_rank(read[cut + t]),
        Ordering::Equal => 0,
        Ordering::Greater => symbol_rank(read[t - k - 1]),
    }
}

fn compare_rotations(reads: &ReadSet, a: GsaEntry, b: GsaEntry) -> Ordering {
    let (ra, rb) = (reads.read(a.j), reads.read(b.j));
    let (la, lb) = (ra.len() + 1, rb.len() + 1);
    for t in 0..la.min(lb) {
        let ord = rotation_symbol(ra, a.k as usize, t).cmp(&rotation_symbol(rb, b.k as usize, t));
        if ord != Ordering::Equal {
            return ord;
        }
    }
    la.cmp(&lb).then(a.j.cmp(&b.j))
}

fn suffix_lcp(reads: &ReadSet, a: GsaEntry, b: GsaEntry) -> i32 {
    let ra = reads.read(a.j);
    let rb = reads.read(b.j);
    let sa = &ra[ra.len() - a.k as usize..];
    let sb = &rb[rb.len() - b.k as usize..];
    sa.iter().zip(sb).take_while(|(x, y)| x == y).count() as i32
}

/// Sorts every rotation in memory and writes `B.bin`, `SA.bin`, `LCP.bin` and `index.json`.
pub fn build_index(reads: &ReadSet, storage: &Storage) -> Result<IndexBundle> {
    let total = reads.n() + reads.m() as u64;
    if total + 2 > i32::MAX as u64 {
        return Err(Error::Capacity(total));
    }
    let mut entries: Vec<GsaEntry> = Vec::with_capacity(total as usize);
    for (i, r) in reads.reads().iter().enumerate() {
        for k in 0..=r.len() as u32 {
            entries.push(GsaEntry { k, j: i as u32 + 1 });
        }
    }
    entries.sort_unstable_by(|&a, &b| compare_rotations(reads, a, b));

    let alphabet = reads.alphabet().clone();
    let mut counts = vec![0u32; alphabet.size()];
    let mut bwt = storage.create::<u8>(BWT_LIST)?;
    let mut sa = storage.create::<GsaEntry>(SA_LIST)?;
    let mut lcp = storage.create::<i32>(LCP_LIST)?;
    for (i, &entry) in entries.iter().enumerate() {
        let read = reads.read(entry.j);
        let preceding = if entry.k as usize == read.len() {
            SENTINEL
        } else {
            read[read.len() - entry.k as usize - 1]
        };
        counts[alphabet.code(preceding).unwrap() as usize] += 1;
        bwt.append(&preceding)?;
        sa.append(&entry)?;
        let l = if i == 0 {
            -1
        } else {
            suffix_lcp(reads, entries[i - 1], entry)
        };
        lcp.append(&l)?;
    }
    bwt.finish()?;
    sa.finish()?;
    lcp.finish()?;

    let mut c = Vec::with_capacity(counts.len());
    let mut acc = 0;
    for &k in &counts {
        c.push(acc);
        acc += k;
    }
    let meta = IndexMeta {
        m: reads.m(),
        n: reads.n(),
        max_len: reads.max_len(),
        total_len: total as u32,
        alphabet,
        counts,
        c,
    };
    storage.write_text(
        META_FILE,
        &serde_json::to_string_pretty(&meta).expect("index metadata serializes"),
    )?;
    Ok(IndexBundle {
        storage: storage.clone(),
        meta,
    })
}

/// Ids of reads that occur inside another read, from one joint scan of SA and LCP.
///
/// A read `r_i` is contained iff, at the row `p` of its full suffix,
/// `L[p] >= |r_i|` or `L[p+1] >= |r_i|`.
pub fn check_substring_free(index: &IndexBundle, reads: &ReadSet) -> Result<Vec<u32>> {
    let mut sa = index.scan_sa()?;
    let mut lcp = index.scan_lcp()?;
    let mut contained = Vec::new();
    // full suffix of the previous row, awaiting L[p+1]
    let mut pending: Option<(u32, i32)> = None;
    while let Some(entry) = sa.next_record()? {
        let l = lcp.expect_record()?;
        if let Some((j, len)) = pending.take() {
            if l >= len {
                contained.push(j);
            }
        }
        let len = reads.read(entry.j).len() as i32;
        if entry.k as i32 == len {
            if l >= len {
                contained.push(entry.j);
            } else {
                pending = Some((entry.j, len));
            }
        }
    }
    if lcp.next_record()?.is_some() {
        return Err(Error::format(LCP_LIST, "longer than SA"));
    }
    contained.sort_unstable();
    contained.dedup();
    Ok(contained)
}

/// Read ids of the sentinel block, in sorted order: `rank_to_read[i-1]` is the read at row `i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SentinelRankTable {
    pub rank_to_read: Vec<u32>,
}

impl SentinelRankTable {
    /// Reads whose sentinel rotations occupy rows `[b, e)` of the sentinel block.
    pub fn reads_in(&self, rows: crate::intervals::StringInterval) -> &[u32] {
        &self.rank_to_read[rows.b as usize - 1..rows.e as usize - 1]
    }
}

pub fn sentinel_rank_table(index: &IndexBundle) -> Result<SentinelRankTable> {
    let m = index.meta().m as usize;
    let mut sa = index.scan_sa()?;
    let mut rank_to_read = Vec::with_capacity(m);
    for _ in 0..m {
        let entry = sa.expect_record()?;
        if entry.k != 0 {
            return Err(Error::invariant(format!(
                "row {} of the sentinel block holds ({}, {})",
                rank_to_read.len() + 1,
                entry.k,
                entry.j
            )));
        }
        rank_to_read.push(entry.j);
    }
    Ok(SentinelRankTable { rank_to_read })
}
