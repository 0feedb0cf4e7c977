//! Left-extension rounds.
//!
//! Round `l_P` takes every `(P, S)`-encoding with `|P| = l_P` and produces the
//! encodings of all `(σP, S)` whose `σPS$`-interval is nonempty. It does so in
//! two sequential passes over the BWT: [`extend_encodings`] computes the
//! `σPS$`-intervals and reports the reads equal to `PS` as arcs, and
//! [`complete_extensions`] brings `q(P)` and `q^r(P^r)` up to date.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::graph::ArcRecord;
use crate::index::{IndexBundle, SentinelRankTable};
use crate::intervals::{backward_extension, StringInterval};
use crate::seqlist::{get_u32, put_u32, ListKey, Merge, Record, RecordWriter, Storage};

/// A `(P, S)`-encoding: the intervals of `PS$`, `$S`, `P` and, on the reversed
/// collection, `P^r`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Encoding {
    pub q_ps_dollar: StringInterval,
    pub q_dollar_s: StringInterval,
    pub q_p: StringInterval,
    pub q_pr: StringInterval,
    pub l_p: u32,
    pub l_ps: u32,
}

impl Encoding {
    pub fn l_s(&self) -> u32 {
        self.l_ps - self.l_p
    }
}

impl Record for Encoding {
    const WIDTH: usize = 40;

    fn encode(&self, out: &mut [u8]) {
        let fields = [
            self.q_ps_dollar.b,
            self.q_ps_dollar.e,
            self.q_dollar_s.b,
            self.q_dollar_s.e,
            self.q_p.b,
            self.q_p.e,
            self.q_pr.b,
            self.q_pr.e,
            self.l_p,
            self.l_ps,
        ];
        for (slot, v) in fields.into_iter().enumerate() {
            put_u32(out, slot, v);
        }
    }

    fn decode(buf: &[u8]) -> Self {
        let f = |slot| get_u32(buf, slot);
        Encoding {
            q_ps_dollar: StringInterval { b: f(0), e: f(1) },
            q_dollar_s: StringInterval { b: f(2), e: f(3) },
            q_p: StringInterval { b: f(4), e: f(5) },
            q_pr: StringInterval { b: f(6), e: f(7) },
            l_p: f(8),
            l_ps: f(9),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    /// Complete encodings, merged on `q(PS$)`.
    E,
    /// Partial encodings, merged on `q(P)`.
    P,
}

pub type EncodingMerge = Merge<Encoding, fn(&Encoding) -> StringInterval>;

/// The input lists of round `l_p` of the given family, in key order.
pub fn pass_lists(storage: &Storage, family: Family, l_p: u32) -> Result<Vec<ListKey>> {
    Ok(storage
        .list_keys()?
        .into_iter()
        .filter(|key| match (family, key) {
            (Family::E, ListKey::E { .. }) => key.pass() == l_p,
            (Family::P, ListKey::P { .. }) => key.pass() == l_p + 1,
            _ => false,
        })
        .collect())
}

/// All lists feeding round `l_p` of `family`, merged into one sorted stream.
pub fn merge_for_pass(storage: &Storage, family: Family, l_p: u32) -> Result<EncodingMerge> {
    let readers = pass_lists(storage, family, l_p)?
        .iter()
        .map(|key| storage.open(&key.file_name()))
        .collect::<Result<Vec<_>>>()?;
    let key: fn(&Encoding) -> StringInterval = match family {
        Family::E => |e| e.q_ps_dollar,
        Family::P => |e| e.q_p,
    };
    Merge::new(readers, key)
}

/// Output writers keyed by list, created on first append.
pub(crate) struct Outputs<R: Record, K> {
    storage: Storage,
    writers: HashMap<K, RecordWriter<R>>,
}

impl<R: Record, K: std::hash::Hash + Eq + Copy> Outputs<R, K> {
    pub(crate) fn new(storage: &Storage) -> Self {
        Outputs {
            storage: storage.clone(),
            writers: HashMap::new(),
        }
    }

    pub(crate) fn append(&mut self, key: K, name: impl FnOnce() -> String, rec: &R) -> Result<()> {
        if !self.writers.contains_key(&key) {
            let w = self.storage.create(&name())?;
            self.writers.insert(key, w);
        }
        self.writers.get_mut(&key).unwrap().append(rec)
    }

    pub(crate) fn finish(self) -> Result<usize> {
        let n = self.writers.len();
        for (_, w) in self.writers {
            w.finish()?;
        }
        Ok(n)
    }
}

/// Sequential BWT cursor that keeps `Occ(c, p)` for every code `c`.
struct OccCursor {
    bwt: crate::index::BwtScan,
    /// `occ[c]` counts code `c` in `B[1..p-1]`.
    occ: Vec<u32>,
    p: u32,
}

impl OccCursor {
    fn new(index: &IndexBundle) -> Result<Self> {
        Ok(OccCursor {
            bwt: index.scan_bwt()?,
            occ: vec![0; index.alphabet().size()],
            p: 1,
        })
    }

    fn step(&mut self) -> Result<u8> {
        let c = self.bwt.expect_code()?;
        self.occ[c as usize] += 1;
        self.p += 1;
        Ok(c)
    }

    fn advance_to(&mut self, target: u32) -> Result<()> {
        while self.p < target {
            self.step()?;
        }
        Ok(())
    }
}

fn check_bounds(q: StringInterval, p: u32, total: u32, what: &str) -> Result<()> {
    if q.b < p {
        return Err(Error::invariant(format!(
            "{what} [{}, {}) starts before the cursor at {p}",
            q.b, q.e
        )));
    }
    if q.b > q.e || q.e > total + 1 {
        return Err(Error::invariant(format!(
            "{what} [{}, {}) is not a valid interval",
            q.b, q.e
        )));
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ExtendStats {
    pub encodings: u64,
    pub partials: u64,
    pub arcs: u64,
    /// Most encodings held in memory at once, not counting merge lookahead.
    pub peak_encodings: usize,
    /// Lists merged into the input; the merge holds one lookahead record per list.
    pub merged_lists: usize,
}

/// Round `l_p`, first half: reads the `E` lists of the round and writes partial
/// encodings to `P(σ, l_S, l_PS+1)` and arcs to `A(l_p, z)`.
pub fn extend_encodings(
    l_p: u32,
    index: &IndexBundle,
    ranks: &SentinelRankTable,
) -> Result<ExtendStats> {
    let storage = index.storage();
    let total = index.total_len();
    let sigma = index.alphabet().size();
    let mut cursor = OccCursor::new(index)?;
    let mut sa = index.scan_sa()?;
    let mut partials: Outputs<Encoding, ListKey> = Outputs::new(storage);
    let mut arcs: Outputs<ArcRecord, u32> = Outputs::new(storage);
    let mut delta = vec![0u32; sigma];
    let mut stats = ExtendStats {
        merged_lists: pass_lists(storage, Family::E, l_p)?.len(),
        ..Default::default()
    };

    for enc in merge_for_pass(storage, Family::E, l_p)? {
        let enc = enc?;
        stats.encodings += 1;
        stats.peak_encodings = 1;
        if enc.l_p != l_p || enc.l_p >= enc.l_ps {
            return Err(Error::invariant(format!(
                "encoding with l_P = {}, l_PS = {} in round {l_p}",
                enc.l_p, enc.l_ps
            )));
        }
        let q = enc.q_ps_dollar;
        check_bounds(q, cursor.p, total, "PS$-interval")?;
        if enc.q_dollar_s.is_empty() || enc.q_dollar_s.e > ranks.rank_to_read.len() as u32 + 1 {
            return Err(Error::invariant(format!(
                "$S-interval [{}, {}) outside the sentinel block",
                enc.q_dollar_s.b, enc.q_dollar_s.e
            )));
        }
        while cursor.p < q.b {
            cursor.step()?;
            sa.expect_record()?;
        }
        delta.fill(0);
        while cursor.p < q.e {
            let c = cursor.bwt.expect_code()?;
            let entry = sa.expect_record()?;
            if c == 0 && l_p > 0 {
                for &z in ranks.reads_in(enc.q_dollar_s) {
                    let arc = ArcRecord {
                        source: entry.j,
                        target: z,
                        b_r: enc.q_pr.b,
                        e_r: enc.q_pr.e,
                        l_p,
                    };
                    arcs.append(z, || ListKey::A { l_p, z }.file_name(), &arc)?;
                    stats.arcs += 1;
                }
            }
            delta[c as usize] += 1;
            cursor.p += 1;
        }
        for (c, &d) in delta.iter().enumerate().take(sigma).skip(1) {
            if d == 0 {
                continue;
            }
            let ext = backward_extension(index.c(c as u8), cursor.occ[c], cursor.occ[c] + d);
            let partial = Encoding {
                q_ps_dollar: ext,
                l_p: l_p + 1,
                l_ps: enc.l_ps + 1,
                ..enc
            };
            let key = ListKey::P {
                sigma: index.alphabet().byte(c as u8),
                l_s: enc.l_s(),
                l_ps: enc.l_ps + 1,
            };
            partials.append(key, || key.file_name(), &partial)?;
            stats.partials += 1;
        }
        for (o, d) in cursor.occ.iter_mut().zip(&delta) {
            *o += d;
        }
    }
    partials.finish()?;
    arcs.finish()?;
    Ok(stats)
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct CompleteStats {
    pub completed: u64,
    /// Most encodings held in memory at once, not counting merge lookahead.
    pub peak_encodings: usize,
    /// Lists merged into the input; each of the two cursors holds one lookahead record per list.
    pub merged_lists: usize,
}

/// Round `l_p`, second half: turns every partial encoding of `σPS` into the
/// full encoding, writing it to `E(σ, l_S, l_PS)`.
///
/// All `P` in a round have length `l_p`, so their intervals are equal or
/// disjoint. The merged input is consumed by two cursors: a leading one that
/// only looks at `q(P)` to find the extent of each group of equal intervals,
/// and a trailing one that re-reads the group once the BWT cursor has passed
/// its closing position. Groups are therefore never buffered.
pub fn complete_extensions(l_p: u32, index: &IndexBundle) -> Result<CompleteStats> {
    let storage = index.storage();
    let total = index.total_len();
    let mut lead = merge_for_pass(storage, Family::P, l_p)?;
    let mut trail = merge_for_pass(storage, Family::P, l_p)?;
    let mut cursor = OccCursor::new(index)?;
    let mut outputs: Outputs<Encoding, ListKey> = Outputs::new(storage);
    let mut stats = CompleteStats {
        merged_lists: pass_lists(storage, Family::P, l_p)?.len(),
        ..Default::default()
    };

    let mut next_key = lead.next().transpose()?.map(|r| r.q_p);
    while let Some(key) = next_key {
        check_bounds(key, cursor.p, total, "P-interval")?;
        cursor.advance_to(key.b)?;
        let snapshot = cursor.occ.clone();
        let mut group = 1u64;
        loop {
            next_key = lead.next().transpose()?.map(|r| r.q_p);
            match next_key {
                Some(k) if k == key => group += 1,
                _ => break,
            }
        }
        cursor.advance_to(key.e)?;
        for _ in 0..group {
            let part = trail
                .next()
                .transpose()?
                .ok_or_else(|| Error::invariant("trailing cursor ran out of partials"))?;
            stats.peak_encodings = 1;
            if part.q_p != key || part.l_p != l_p + 1 {
                return Err(Error::invariant(format!(
                    "partial with P-interval [{}, {}) and l_P = {} in group [{}, {})",
                    part.q_p.b, part.q_p.e, part.l_p, key.b, key.e
                )));
            }
            let sigma = index.symbol_at(part.q_ps_dollar.b);
            let s = sigma as usize;
            let width = cursor.occ[s] - snapshot[s];
            if sigma == 0 || width < part.q_ps_dollar.width() {
                return Err(Error::invariant(format!(
                    "partial [{}, {}) not covered by its extension symbol",
                    part.q_ps_dollar.b, part.q_ps_dollar.e
                )));
            }
            let prev: u32 = (0..s).map(|c| cursor.occ[c] - snapshot[c]).sum();
            let q_p = backward_extension(index.c(sigma), snapshot[s], cursor.occ[s]);
            let b_r = part.q_pr.b + prev;
            let full = Encoding {
                q_p,
                q_pr: StringInterval::new(b_r, b_r + width),
                ..part
            };
            let out_key = ListKey::E {
                sigma: index.alphabet().byte(sigma),
                l_s: full.l_s(),
                l_ps: full.l_ps,
            };
            outputs.append(out_key, || out_key.file_name(), &full)?;
            stats.completed += 1;
        }
    }
    if trail.next().is_some() {
        return Err(Error::invariant("trailing cursor has partials left over"));
    }
    outputs.finish()?;
    Ok(stats)
}
