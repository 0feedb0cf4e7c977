//! Seed enumeration.
//!
//! A seed is a string that is both a suffix and a prefix of reads and a proper
//! substring of some read. Every seed `S` starts an arc search with `P = ε`.
//! The scan walks `B`, `L` and `SA` together, keeping a stack of open
//! candidates whose `S$`-interval has been seen; when a candidate's
//! `S`-interval closes, the sentinels counted inside it give `q($S)`.

use crate::error::{Error, Result};
use crate::index::{IndexBundle, LCP_LIST, SA_LIST};
use crate::intervals::StringInterval;
use crate::labeling::{Encoding, Outputs};
use crate::seqlist::ListKey;

/// Candidate seed length at opening position `b`, from `L[b]` and `L[b+1]`.
pub fn seed_opening_check(l_b: i32, l_next: i32) -> Option<u32> {
    (l_next > l_b && l_next > 0).then_some(l_next as u32)
}

#[derive(Clone, Copy, Debug)]
struct OpenSeedFrame {
    s_dollar: StringInterval,
    l_s: u32,
    /// Sentinels in `B[1..opening-1]`.
    dollars_before: u32,
    /// Whether the next row may still extend the `S$`-interval.
    extending: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SeedStats {
    pub seeds: u64,
    /// Seeds shorter than the minimum overlap, not emitted.
    pub filtered: u64,
    pub max_stack_depth: usize,
    pub lists: Vec<ListKey>,
}

/// Writes the basic encoding of every seed of length at least `min_overlap`
/// to `E(S[1], |S|, |S|)`.
pub fn build_basic_arc_intervals(index: &IndexBundle, min_overlap: u32) -> Result<SeedStats> {
    let storage = index.storage();
    let total = index.total_len();
    let everything = StringInterval::new(1, total + 1);
    let mut bwt = index.scan_bwt()?;
    let mut sa = index.scan_sa()?;
    let mut lcp = index.scan_lcp()?;
    let mut outputs: Outputs<Encoding, ListKey> = Outputs::new(storage);
    let mut stack: Vec<OpenSeedFrame> = Vec::new();
    let mut stats = SeedStats::default();
    let mut lists = Vec::new();

    // values at row p-1
    let mut prev_l = -1i32;
    let mut prev_k = 0u32;
    // sentinels in B[1..p-2] and B[1..p-1]
    let mut dollars_before_prev = 0u32;
    let mut dollars = 0u32;

    let mut emit = |frame: OpenSeedFrame, dollars_at_close: u32, stats: &mut SeedStats| {
        if dollars_at_close == frame.dollars_before {
            return Ok(());
        }
        if frame.l_s < min_overlap {
            stats.filtered += 1;
            return Ok(());
        }
        let sigma = index.alphabet().byte(index.symbol_at(frame.s_dollar.b));
        let key = ListKey::E {
            sigma,
            l_s: frame.l_s,
            l_ps: frame.l_s,
        };
        let enc = Encoding {
            q_ps_dollar: frame.s_dollar,
            q_dollar_s: StringInterval::new(frame.dollars_before + 1, dollars_at_close + 1),
            q_p: everything,
            q_pr: everything,
            l_p: 0,
            l_ps: frame.l_s,
        };
        if !lists.contains(&key) {
            lists.push(key);
        }
        stats.seeds += 1;
        outputs.append(key, || key.file_name(), &enc)
    };

    for p in 1..=total + 1 {
        let row = if p <= total {
            let c = bwt.expect_code()?;
            let entry = sa.expect_record()?;
            let l = lcp
                .next_record()?
                .ok_or_else(|| Error::format(LCP_LIST, "shorter than SA"))?;
            Some((c, entry.k, l))
        } else {
            if lcp.next_record()?.is_some() {
                return Err(Error::format(LCP_LIST, "longer than SA"));
            }
            None
        };
        let l = row.map_or(-1, |(_, _, l)| l);

        while stack.last().is_some_and(|f| f.l_s as i32 > l) {
            let frame = stack.pop().unwrap();
            emit(frame, dollars, &mut stats)?;
        }

        if let Some(k) = seed_opening_check(prev_l, l) {
            if k == prev_k {
                stack.push(OpenSeedFrame {
                    s_dollar: StringInterval::new(p - 1, p),
                    l_s: k,
                    dollars_before: dollars_before_prev,
                    extending: true,
                });
                stats.max_stack_depth = stats.max_stack_depth.max(stack.len());
            }
        }

        let Some((c, k, l)) = row else { break };
        if let Some(top) = stack.last_mut() {
            if top.extending {
                if k == top.l_s && l == top.l_s as i32 {
                    top.s_dollar.e = p + 1;
                } else {
                    top.extending = false;
                }
            }
        }
        prev_l = l;
        prev_k = k;
        dollars_before_prev = dollars;
        if c == 0 {
            dollars += 1;
        }
    }
    if !stack.is_empty() {
        return Err(Error::invariant("seed stack not drained at end of input"));
    }
    if sa.next_record()?.is_some() {
        return Err(Error::format(SA_LIST, "longer than the BWT"));
    }
    outputs.finish()?;
    lists.sort();
    stats.lists = lists;
    Ok(stats)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::index::{build_index, ReadSet};
    use crate::seqlist::Storage;

    #[test]
    fn opening_check() {
        assert_eq!(seed_opening_check(0, 2), Some(2));
        assert_eq!(seed_opening_check(2, 2), None);
        assert_eq!(seed_opening_check(-1, 0), None);
    }

    #[test]
    fn fruits_have_one_seed() {
        let reads = ReadSet::from_strs(&["APPLE", "LEMON", "APRICOT"]).unwrap();
        let storage = Storage::memory();
        let index = build_index(&reads, &storage).unwrap();
        let stats = build_basic_arc_intervals(&index, 1).unwrap();
        assert_eq!(stats.seeds, 1);
        let key = ListKey::E {
            sigma: b'L',
            l_s: 2,
            l_ps: 2,
        };
        assert_eq!(stats.lists, vec![key]);
        let encs: Vec<Encoding> = storage
            .open(&key.file_name())
            .unwrap()
            .collect::<Result<_>>()
            .unwrap();
        assert_eq!(
            encs,
            vec![Encoding {
                q_ps_dollar: StringInterval::new(10, 11),
                q_dollar_s: StringInterval::new(3, 4),
                q_p: StringInterval::new(1, 21),
                q_pr: StringInterval::new(1, 21),
                l_p: 0,
                l_ps: 2,
            }]
        );
    }

    #[test]
    fn minimum_overlap_filters_seeds() {
        let reads = ReadSet::from_strs(&["APPLE", "LEMON", "APRICOT"]).unwrap();
        let index = build_index(&reads, &Storage::memory()).unwrap();
        let stats = build_basic_arc_intervals(&index, 3).unwrap();
        assert_eq!((stats.seeds, stats.filtered), (0, 1));
        assert!(stats.lists.is_empty());
    }

    #[test]
    fn unrelated_reads_have_no_seeds() {
        let reads = ReadSet::from_strs(&["AAC", "GGT"]).unwrap();
        let index = build_index(&reads, &Storage::memory()).unwrap();
        let stats = build_basic_arc_intervals(&index, 1).unwrap();
        assert_eq!(stats.seeds, 0);
        assert!(index.storage().list_keys().unwrap().is_empty());
    }
}
