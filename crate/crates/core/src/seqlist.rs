//! Sequential record lists.
//!
//! Every array the pipeline touches (BWT, GSA, LCP, encodings, arcs, marks)
//! lives in a [`RecordList`]: a named, fixed-width, append-only file that can
//! only be read front to back. There is no seek operation anywhere in this
//! module, so an algorithm written against it is sequential by construction.
//!
//! Each [`Storage`] owns a pair of counters that are bumped once per record
//! appended or scanned; they are what the I/O bounds are checked against.

use std::cmp::{Ordering, Reverse};
use std::collections::HashMap;
use std::fmt;
use std::fs::{self, File, OpenOptions};
use std::io::{BufReader, ErrorKind, Read, Write};
use std::marker::PhantomData;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicU64, Ordering as AtomicOrdering};
use std::sync::{Arc, Mutex};

use crate::error::{Error, Result};
use crate::intervals::StringInterval;

/// Bytes buffered by a file-backed writer before it is flushed.
const WRITE_BUFFER: usize = 1 << 16;

/// A fixed-width little-endian record.
pub trait Record: Sized {
    const WIDTH: usize;

    fn encode(&self, out: &mut [u8]);

    fn decode(buf: &[u8]) -> Self;
}

impl Record for u8 {
    const WIDTH: usize = 1;

    fn encode(&self, out: &mut [u8]) {
        out[0] = *self;
    }

    fn decode(buf: &[u8]) -> Self {
        buf[0]
    }
}

impl Record for i32 {
    const WIDTH: usize = 4;

    fn encode(&self, out: &mut [u8]) {
        out.copy_from_slice(&self.to_le_bytes());
    }

    fn decode(buf: &[u8]) -> Self {
        i32::from_le_bytes(buf[..4].try_into().unwrap())
    }
}

/// Raw record of arbitrary width, for callers that only move bytes around.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RawRecord<const W: usize>(pub [u8; W]);

impl<const W: usize> Record for RawRecord<W> {
    const WIDTH: usize = W;

    fn encode(&self, out: &mut [u8]) {
        out.copy_from_slice(&self.0);
    }

    fn decode(buf: &[u8]) -> Self {
        RawRecord(buf[..W].try_into().unwrap())
    }
}

pub(crate) fn put_u32(out: &mut [u8], slot: usize, v: u32) {
    out[slot * 4..slot * 4 + 4].copy_from_slice(&v.to_le_bytes());
}

pub(crate) fn get_u32(buf: &[u8], slot: usize) -> u32 {
    u32::from_le_bytes(buf[slot * 4..slot * 4 + 4].try_into().unwrap())
}

#[derive(Debug, Default)]
struct IoCounters {
    read: AtomicU64,
    written: AtomicU64,
}

/// Snapshot of the record counters of a [`Storage`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct IoSnapshot {
    pub records_read: u64,
    pub records_written: u64,
}

impl IoSnapshot {
    pub fn since(self, earlier: IoSnapshot) -> IoSnapshot {
        IoSnapshot {
            records_read: self.records_read - earlier.records_read,
            records_written: self.records_written - earlier.records_written,
        }
    }
}

#[derive(Clone)]
enum Backend {
    Dir(PathBuf),
    Memory(Arc<Mutex<HashMap<String, Arc<Vec<u8>>>>>),
}

/// A namespace of record lists plus the I/O counters shared by all of them.
///
/// Cloning is cheap and clones share both the lists and the counters.
#[derive(Clone)]
pub struct Storage {
    backend: Backend,
    io: Arc<IoCounters>,
}

impl fmt::Debug for Storage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.backend {
            Backend::Dir(p) => write!(f, "Storage::Dir({})", p.display()),
            Backend::Memory(_) => write!(f, "Storage::Memory"),
        }
    }
}

impl Storage {
    /// Lists stored as files under `dir`, which is created if missing.
    pub fn dir(dir: impl AsRef<Path>) -> Result<Self> {
        let dir = dir.as_ref().to_path_buf();
        fs::create_dir_all(&dir).map_err(|e| Error::io(dir.display().to_string(), e))?;
        Ok(Storage {
            backend: Backend::Dir(dir),
            io: Arc::default(),
        })
    }

    /// Lists kept in memory buffers; same counters, same sequential API.
    pub fn memory() -> Self {
        Storage {
            backend: Backend::Memory(Arc::default()),
            io: Arc::default(),
        }
    }

    pub fn path(&self) -> Option<&Path> {
        match &self.backend {
            Backend::Dir(p) => Some(p),
            Backend::Memory(_) => None,
        }
    }

    pub fn io_counters(&self) -> IoSnapshot {
        IoSnapshot {
            records_read: self.io.read.load(AtomicOrdering::Relaxed),
            records_written: self.io.written.load(AtomicOrdering::Relaxed),
        }
    }

    pub fn reset_io_counters(&self) {
        self.io.read.store(0, AtomicOrdering::Relaxed);
        self.io.written.store(0, AtomicOrdering::Relaxed);
    }

    /// Creates (or truncates) the list `name` and opens it for appending.
    pub fn create<R: Record>(&self, name: &str) -> Result<RecordWriter<R>> {
        let sink = match &self.backend {
            Backend::Dir(dir) => {
                let path = dir.join(name);
                File::create(&path).map_err(|e| Error::io(name, e))?;
                Sink::File {
                    path,
                    buf: Vec::new(),
                }
            }
            Backend::Memory(map) => {
                map.lock().unwrap().insert(name.to_string(), Arc::default());
                Sink::Memory {
                    map: Arc::clone(map),
                    buf: Vec::new(),
                }
            }
        };
        Ok(RecordWriter {
            list: RecordList::new(name, R::WIDTH),
            sink,
            scratch: vec![0; R::WIDTH],
            io: Arc::clone(&self.io),
            finished: false,
            _marker: PhantomData,
        })
    }

    /// Opens the finalized list `name` for one sequential scan.
    pub fn open<R: Record>(&self, name: &str) -> Result<RecordReader<R>> {
        let source = match &self.backend {
            Backend::Dir(dir) => {
                let file = File::open(dir.join(name)).map_err(|e| Error::io(name, e))?;
                Source::File(BufReader::with_capacity(WRITE_BUFFER, file))
            }
            Backend::Memory(map) => {
                let data =
                    map.lock().unwrap().get(name).cloned().ok_or_else(|| {
                        Error::io(name, std::io::Error::from(ErrorKind::NotFound))
                    })?;
                Source::Memory { data, pos: 0 }
            }
        };
        Ok(RecordReader {
            list: RecordList::new(name, R::WIDTH),
            source,
            buf: vec![0; R::WIDTH],
            io: Arc::clone(&self.io),
            done: false,
            _marker: PhantomData,
        })
    }

    pub fn exists(&self, name: &str) -> bool {
        match &self.backend {
            Backend::Dir(dir) => dir.join(name).is_file(),
            Backend::Memory(map) => map.lock().unwrap().contains_key(name),
        }
    }

    pub fn remove(&self, name: &str) -> Result<()> {
        match &self.backend {
            Backend::Dir(dir) => match fs::remove_file(dir.join(name)) {
                Ok(()) => Ok(()),
                Err(e) if e.kind() == ErrorKind::NotFound => Ok(()),
                Err(e) => Err(Error::io(name, e)),
            },
            Backend::Memory(map) => {
                map.lock().unwrap().remove(name);
                Ok(())
            }
        }
    }

    pub fn rename(&self, from: &str, to: &str) -> Result<()> {
        match &self.backend {
            Backend::Dir(dir) => {
                fs::rename(dir.join(from), dir.join(to)).map_err(|e| Error::io(from, e))
            }
            Backend::Memory(map) => {
                let mut map = map.lock().unwrap();
                let data = map
                    .remove(from)
                    .ok_or_else(|| Error::io(from, std::io::Error::from(ErrorKind::NotFound)))?;
                map.insert(to.to_string(), data);
                Ok(())
            }
        }
    }

    /// Names of all entries, sorted.
    pub fn names(&self) -> Result<Vec<String>> {
        let mut names = match &self.backend {
            Backend::Dir(dir) => {
                let mut names = Vec::new();
                for entry in
                    fs::read_dir(dir).map_err(|e| Error::io(dir.display().to_string(), e))?
                {
                    let entry = entry.map_err(|e| Error::io(dir.display().to_string(), e))?;
                    if entry.path().is_file() {
                        names.push(entry.file_name().to_string_lossy().into_owned());
                    }
                }
                names
            }
            Backend::Memory(map) => map.lock().unwrap().keys().cloned().collect(),
        };
        names.sort();
        Ok(names)
    }

    /// Keys of every E/P/A list currently stored.
    pub fn list_keys(&self) -> Result<Vec<ListKey>> {
        Ok(self
            .names()?
            .iter()
            .filter_map(|n| ListKey::parse(n))
            .collect())
    }

    /// Uncounted metadata (read set, index summary, run statistics).
    pub fn write_text(&self, name: &str, text: &str) -> Result<()> {
        match &self.backend {
            Backend::Dir(dir) => fs::write(dir.join(name), text).map_err(|e| Error::io(name, e)),
            Backend::Memory(map) => {
                map.lock()
                    .unwrap()
                    .insert(name.to_string(), Arc::new(text.as_bytes().to_vec()));
                Ok(())
            }
        }
    }

    pub fn read_text(&self, name: &str) -> Result<String> {
        let bytes = match &self.backend {
            Backend::Dir(dir) => fs::read(dir.join(name)).map_err(|e| Error::io(name, e))?,
            Backend::Memory(map) => map
                .lock()
                .unwrap()
                .get(name)
                .map(|d| d.as_ref().clone())
                .ok_or_else(|| Error::io(name, std::io::Error::from(ErrorKind::NotFound)))?,
        };
        String::from_utf8(bytes).map_err(|_| Error::format(name, "not valid UTF-8"))
    }
}

/// Identity of a list: its name and record width.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RecordList {
    pub name: String,
    pub record_width: usize,
}

impl RecordList {
    fn new(name: &str, record_width: usize) -> Self {
        RecordList {
            name: name.to_string(),
            record_width,
        }
    }
}

enum Sink {
    File {
        path: PathBuf,
        buf: Vec<u8>,
    },
    Memory {
        map: Arc<Mutex<HashMap<String, Arc<Vec<u8>>>>>,
        buf: Vec<u8>,
    },
}

/// Append-only handle on a list.
///
/// File-backed writers keep no descriptor open between flushes, so a pass may
/// hold one writer per output list without running out of file handles.
pub struct RecordWriter<R: Record> {
    list: RecordList,
    sink: Sink,
    scratch: Vec<u8>,
    io: Arc<IoCounters>,
    finished: bool,
    _marker: PhantomData<R>,
}

impl<R: Record> RecordWriter<R> {
    pub fn list(&self) -> &RecordList {
        &self.list
    }

    pub fn append(&mut self, record: &R) -> Result<()> {
        let mut scratch = std::mem::take(&mut self.scratch);
        record.encode(&mut scratch);
        let res = self.push(&scratch);
        self.scratch = scratch;
        res
    }

    /// Appends an already-encoded record; its length must equal the list width.
    pub fn append_bytes(&mut self, record: &[u8]) -> Result<()> {
        if record.len() != self.list.record_width {
            return Err(Error::format(
                &self.list.name,
                format!(
                    "record of {} bytes appended to a list of width {}",
                    record.len(),
                    self.list.record_width
                ),
            ));
        }
        self.push(record)
    }

    fn push(&mut self, bytes: &[u8]) -> Result<()> {
        debug_assert!(!self.finished);
        match &mut self.sink {
            Sink::File { buf, .. } | Sink::Memory { buf, .. } => buf.extend_from_slice(bytes),
        }
        self.io.written.fetch_add(1, AtomicOrdering::Relaxed);
        if let Sink::File { buf, .. } = &self.sink {
            if buf.len() >= WRITE_BUFFER {
                self.flush()?;
            }
        }
        Ok(())
    }

    fn flush(&mut self) -> Result<()> {
        match &mut self.sink {
            Sink::File { path, buf } => {
                if !buf.is_empty() {
                    let mut f = OpenOptions::new()
                        .append(true)
                        .open(&*path)
                        .map_err(|e| Error::io(&self.list.name, e))?;
                    f.write_all(buf)
                        .map_err(|e| Error::io(&self.list.name, e))?;
                    buf.clear();
                }
            }
            Sink::Memory { map, buf } => {
                let mut map = map.lock().unwrap();
                let entry = map.entry(self.list.name.clone()).or_default();
                Arc::make_mut(entry).extend_from_slice(buf);
                buf.clear();
            }
        }
        Ok(())
    }

    /// Makes every appended record visible to readers.
    pub fn finish(mut self) -> Result<()> {
        self.flush()?;
        self.finished = true;
        Ok(())
    }
}

impl<R: Record> Drop for RecordWriter<R> {
    fn drop(&mut self) {
        if !self.finished {
            let _ = self.flush();
        }
    }
}

enum Source {
    File(BufReader<File>),
    Memory { data: Arc<Vec<u8>>, pos: usize },
}

impl Source {
    /// Fills `buf` as far as possible and returns the number of bytes read.
    fn fill(&mut self, buf: &mut [u8]) -> std::io::Result<usize> {
        match self {
            Source::File(r) => {
                let mut got = 0;
                while got < buf.len() {
                    match r.read(&mut buf[got..]) {
                        Ok(0) => break,
                        Ok(k) => got += k,
                        Err(e) if e.kind() == ErrorKind::Interrupted => {}
                        Err(e) => return Err(e),
                    }
                }
                Ok(got)
            }
            Source::Memory { data, pos } => {
                let k = buf.len().min(data.len() - *pos);
                buf[..k].copy_from_slice(&data[*pos..*pos + k]);
                *pos += k;
                Ok(k)
            }
        }
    }
}

/// Forward-only cursor over a list.
pub struct RecordReader<R: Record> {
    list: RecordList,
    source: Source,
    buf: Vec<u8>,
    io: Arc<IoCounters>,
    done: bool,
    _marker: PhantomData<R>,
}

impl<R: Record> RecordReader<R> {
    pub fn list(&self) -> &RecordList {
        &self.list
    }

    pub fn next_record(&mut self) -> Result<Option<R>> {
        if self.done {
            return Ok(None);
        }
        let got = self
            .source
            .fill(&mut self.buf)
            .map_err(|e| Error::io(&self.list.name, e))?;
        if got == 0 {
            self.done = true;
            return Ok(None);
        }
        if got < self.buf.len() {
            self.done = true;
            return Err(Error::format(
                &self.list.name,
                format!(
                    "truncated trailing record ({got} of {} bytes)",
                    self.buf.len()
                ),
            ));
        }
        self.io.read.fetch_add(1, AtomicOrdering::Relaxed);
        Ok(Some(R::decode(&self.buf)))
    }

    /// Like [`next_record`](Self::next_record) but treats end-of-list as a format error.
    pub fn expect_record(&mut self) -> Result<R> {
        self.next_record()?
            .ok_or_else(|| Error::format(&self.list.name, "list ended early"))
    }
}

impl<R: Record> Iterator for RecordReader<R> {
    type Item = Result<R>;

    fn next(&mut self) -> Option<Self::Item> {
        self.next_record().transpose()
    }
}

/// Family of the intermediate lists produced by the overlap pipeline.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ListKey {
    /// Complete encodings, keyed by first symbol of `PS`, `|S|`, `|PS|`.
    E { sigma: u8, l_s: u32, l_ps: u32 },
    /// Partially extended encodings, same key schema as `E`.
    P { sigma: u8, l_s: u32, l_ps: u32 },
    /// Arcs entering read `z` whose left extension has length `l_p`.
    A { l_p: u32, z: u32 },
}

impl ListKey {
    pub fn file_name(&self) -> String {
        match *self {
            ListKey::E { sigma, l_s, l_ps } => format!("E_{}_{l_s}_{l_ps}.bin", symbol_tag(sigma)),
            ListKey::P { sigma, l_s, l_ps } => format!("P_{}_{l_s}_{l_ps}.bin", symbol_tag(sigma)),
            ListKey::A { l_p, z } => format!("A_{l_p}_{z}.bin"),
        }
    }

    pub fn parse(name: &str) -> Option<ListKey> {
        let stem = name.strip_suffix(".bin")?;
        let mut parts = stem.split('_');
        let family = parts.next()?;
        let key = match family {
            "E" | "P" => {
                let sigma = parse_symbol_tag(parts.next()?)?;
                let l_s = parts.next()?.parse().ok()?;
                let l_ps = parts.next()?.parse().ok()?;
                if family == "E" {
                    ListKey::E { sigma, l_s, l_ps }
                } else {
                    ListKey::P { sigma, l_s, l_ps }
                }
            }
            "A" => {
                let l_p = parts.next()?.parse().ok()?;
                let z = parts.next()?.parse().ok()?;
                ListKey::A { l_p, z }
            }
            _ => return None,
        };
        if parts.next().is_some() {
            return None;
        }
        Some(key)
    }

    /// Length of the left extension of the encodings an E/P list feeds into a pass.
    pub fn pass(&self) -> u32 {
        match *self {
            ListKey::E { l_s, l_ps, .. } | ListKey::P { l_s, l_ps, .. } => l_ps - l_s,
            ListKey::A { l_p, .. } => l_p,
        }
    }
}

fn symbol_tag(sigma: u8) -> String {
    if sigma.is_ascii_alphanumeric() {
        (sigma as char).to_string()
    } else {
        format!("x{sigma:02x}")
    }
}

fn parse_symbol_tag(tag: &str) -> Option<u8> {
    let b = tag.as_bytes();
    match b.len() {
        1 if b[0].is_ascii_alphanumeric() => Some(b[0]),
        3 if b[0] == b'x' => u8::from_str_radix(&tag[1..], 16).ok(),
        _ => None,
    }
}

fn merge_order(a: StringInterval, b: StringInterval) -> Ordering {
    (a.b, Reverse(a.e)).cmp(&(b.b, Reverse(b.e)))
}

struct Head<R: Record> {
    reader: RecordReader<R>,
    current: Option<(StringInterval, R)>,
}

/// Streaming k-way merge of lists sorted by increasing opening position,
/// ties by decreasing closing position.
///
/// At most one record per input is held. An input that is out of order is
/// reported as an invariant violation the moment it is detected.
pub struct Merge<R: Record, F: Fn(&R) -> StringInterval> {
    heads: Vec<Head<R>>,
    key: F,
    failed: bool,
}

impl<R: Record, F: Fn(&R) -> StringInterval> Merge<R, F> {
    pub fn new(readers: Vec<RecordReader<R>>, key: F) -> Result<Self> {
        let mut heads = Vec::with_capacity(readers.len());
        for mut reader in readers {
            let current = reader.next_record()?.map(|r| (key(&r), r));
            heads.push(Head { reader, current });
        }
        Ok(Merge {
            heads,
            key,
            failed: false,
        })
    }

    fn advance(&mut self) -> Result<Option<R>> {
        let mut best: Option<usize> = None;
        for (i, h) in self.heads.iter().enumerate() {
            if let Some((k, _)) = &h.current {
                let better = match best {
                    None => true,
                    Some(bi) => {
                        let bk = self.heads[bi].current.as_ref().unwrap().0;
                        merge_order(*k, bk) == Ordering::Less
                    }
                };
                if better {
                    best = Some(i);
                }
            }
        }
        let Some(i) = best else { return Ok(None) };
        let head = &mut self.heads[i];
        let (prev_key, rec) = head.current.take().unwrap();
        if let Some(next) = head.reader.next_record()? {
            let k = (self.key)(&next);
            if merge_order(prev_key, k) == Ordering::Greater {
                return Err(Error::invariant(format!(
                    "list `{}` is not sorted: [{}, {}) precedes [{}, {})",
                    head.reader.list().name,
                    prev_key.b,
                    prev_key.e,
                    k.b,
                    k.e
                )));
            }
            head.current = Some((k, next));
        }
        Ok(Some(rec))
    }
}

impl<R: Record, F: Fn(&R) -> StringInterval> Iterator for Merge<R, F> {
    type Item = Result<R>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.failed {
            return None;
        }
        let res = self.advance().transpose();
        if matches!(res, Some(Err(_))) {
            self.failed = true;
        }
        res
    }
}
