//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.
//!
//! Run alone with `cargo test -p strgraph-core --test acceptance`.

use std::collections::{BTreeMap, BTreeSet};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use strgraph::graph::{assemble_path, build_overlap_graph, read_arcs, ArcRecord, OverlapOptions};
use strgraph::index::{build_index, GsaEntry, IndexBundle, ReadSet};
use strgraph::intervals::{
    backward_extension, forward_extension, is_proper_prefix, StringInterval,
};
use strgraph::labeling::Encoding;
use strgraph::oracle::{
    assemble_left, assemble_right, naive_overlap_graph, naive_seeds, naive_string_graph,
    random_reads, substring_free_reads, NaiveArc, NaiveIndex,
};
use strgraph::reduce::{reduce_overlap_graph, STRING_GRAPH_LIST};
use strgraph::seedscan::build_basic_arc_intervals;
use strgraph::seqlist::{ListKey, Storage};

type Check = std::result::Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn ok<T, E: std::fmt::Display>(r: Result<T, E>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

/// Peaks gathered across every run, checked by the memory criterion.
#[derive(Default)]
struct Peaks {
    runs: u64,
    seed_stack_violations: Vec<String>,
    labeling_violations: Vec<String>,
    reduction_violations: Vec<String>,
    max_seed_stack_over_l: f64,
    max_labeling_encodings: usize,
    max_merged_lists: usize,
    max_reduction_resident_over_m: f64,
}

impl Peaks {
    fn seed_stack(&mut self, depth: usize, l: u32) {
        self.runs += 1;
        self.max_seed_stack_over_l = self
            .max_seed_stack_over_l
            .max(depth as f64 / (l + 1) as f64);
        if depth > l as usize + 1 {
            self.seed_stack_violations
                .push(format!("depth {depth} with l = {l}"));
        }
    }

    fn labeling(&mut self, encodings: usize, merged: usize, table: usize, m: u32) {
        self.max_labeling_encodings = self.max_labeling_encodings.max(encodings);
        self.max_merged_lists = self.max_merged_lists.max(merged);
        if encodings > 1 || table != m as usize {
            self.labeling_violations.push(format!(
                "{encodings} encodings, sentinel table {table} for m = {m}"
            ));
        }
    }

    fn reduction(&mut self, resident: usize, m: u32) {
        self.max_reduction_resident_over_m = self
            .max_reduction_resident_over_m
            .max(resident as f64 / (m + 1) as f64);
        if resident > m as usize + 1 {
            self.reduction_violations
                .push(format!("{resident} arcs resident with M = {m}"));
        }
    }
}

fn fruits() -> ReadSet {
    ReadSet::from_strs(&["APPLE", "LEMON", "APRICOT"]).unwrap()
}

fn bwt_of(index: &IndexBundle) -> Vec<u8> {
    index.scan_bwt().unwrap().map(|c| c.unwrap()).collect()
}

fn sa_of(index: &IndexBundle) -> Vec<GsaEntry> {
    index.scan_sa().unwrap().map(|e| e.unwrap()).collect()
}

fn criterion_1() -> Check {
    let expected_sa = [
        (0, 1),
        (0, 3),
        (0, 2),
        (5, 1),
        (7, 3),
        (3, 3),
        (1, 1),
        (4, 2),
        (4, 3),
        (2, 1),
        (5, 2),
        (3, 2),
        (1, 2),
        (2, 2),
        (2, 3),
        (3, 1),
        (4, 1),
        (6, 3),
        (5, 3),
        (1, 3),
    ];
    let expected_lcp = [-1, 0, 0, 0, 2, 0, 0, 1, 0, 0, 2, 0, 0, 0, 1, 0, 1, 1, 0, 0];
    let expected_bwt = b"ETN$$ILLRP$EOMCPAAPO";
    let index = ok(build_index(&fruits(), &Storage::memory()))?;
    let sa: Vec<(u32, u32)> = sa_of(&index).iter().map(|e| (e.k, e.j)).collect();
    let lcp: Vec<i32> = index.scan_lcp().unwrap().map(|l| l.unwrap()).collect();
    let bwt: Vec<u8> = bwt_of(&index)
        .iter()
        .map(|&c| index.alphabet().byte(c))
        .collect();
    for i in 0..20 {
        ensure!(sa[i] == expected_sa[i], "SA row {}: {:?}", i + 1, sa[i]);
        ensure!(lcp[i] == expected_lcp[i], "L row {}: {}", i + 1, lcp[i]);
        ensure!(
            bwt[i] == expected_bwt[i],
            "B row {}: {}",
            i + 1,
            bwt[i] as char
        );
    }
    ensure!(
        sa.len() == 20 && lcp.len() == 20 && bwt.len() == 20,
        "wrong list lengths"
    );
    Ok("20/20 rows of (SA, L, B) match".into())
}

/// `Occ(c, i)` for every `i`, from the index's own BWT list.
fn occ_table(bwt: &[u8], sigma: usize) -> Vec<Vec<u32>> {
    let mut occ = vec![vec![0u32; bwt.len() + 2]; sigma];
    for (i, &c) in bwt.iter().enumerate() {
        for (s, row) in occ.iter_mut().enumerate() {
            row[i + 2] = row[i + 1] + (s == c as usize) as u32;
        }
    }
    occ
}

fn criterion_2(rng: &mut ChaCha8Rng) -> Check {
    let mut pairs = 0;
    let mut nonempty = 0;
    while pairs < 1000 {
        let (m, l) = (rng.gen_range(1..=100), rng.gen_range(1..=40));
        let reads = random_reads(rng, m, l, b"ACGT");
        let index = ok(build_index(&reads, &Storage::memory()))?;
        let naive = NaiveIndex::new(&reads);
        let naive_rev = NaiveIndex::new(&reads.reversed());
        let bwt = bwt_of(&index);
        let sigma = index.alphabet().size();
        let occ = occ_table(&bwt, sigma);
        for _ in 0..50 {
            let q: Vec<u8> = if rng.gen_bool(0.8) {
                let r = reads.read(rng.gen_range(1..=reads.m()));
                let a = rng.gen_range(0..r.len());
                let b = rng.gen_range(a..=r.len());
                r[a..b].to_vec()
            } else {
                (0..rng.gen_range(1..=6))
                    .map(|_| *b"ACGT".choose(rng).unwrap())
                    .collect()
            };
            let sym = *b"ACGT".choose(rng).unwrap();
            let qi = naive.interval(&q).interval;
            let Some(code) = index.alphabet().code(sym) else {
                continue;
            };
            let c = code as usize;
            let mut sq = vec![sym];
            sq.extend_from_slice(&q);
            let got =
                backward_extension(index.c(code), occ[c][qi.b as usize], occ[c][qi.e as usize]);
            let want = naive.interval(&sq).interval;
            ensure!(
                got == want,
                "backward {}·{}: {got:?} vs {want:?}",
                sym as char,
                String::from_utf8_lossy(&q)
            );

            let deltas: Vec<u32> = (0..sigma)
                .map(|s| occ[s][qi.e as usize] - occ[s][qi.b as usize])
                .collect();
            let q_rev: Vec<u8> = q.iter().rev().copied().collect();
            let qr = naive_rev.interval(&q_rev).interval;
            let mut qr_sym = q_rev.clone();
            qr_sym.push(sym);
            if !qi.is_empty() {
                let got = forward_extension(qr, code, &deltas);
                let want = naive_rev.interval(&qr_sym).interval;
                ensure!(
                    got == want,
                    "forward {}·{}: {got:?} vs {want:?}",
                    String::from_utf8_lossy(&q_rev),
                    sym as char
                );
                nonempty += 1;
            }
            pairs += 1;
        }
    }

    let mut prefix_checks = 0u64;
    for _ in 0..50 {
        let (m, l) = (rng.gen_range(1..=6), rng.gen_range(1..=8));
        let reads = random_reads(rng, m, l, b"ACGT");
        let naive = NaiveIndex::new(&reads);
        let mut subs = BTreeSet::new();
        for r in reads.reads() {
            for a in 0..r.len() {
                for b in a + 1..=r.len() {
                    subs.insert(r[a..b].to_vec());
                }
            }
        }
        let labeled: Vec<_> = subs.iter().map(|s| (s, naive.interval(s))).collect();
        for (s1, q1) in &labeled {
            for (s2, q2) in &labeled {
                let want = s1.len() < s2.len() && s2.starts_with(s1);
                ensure!(
                    ok(is_proper_prefix(q1, q2))? == want,
                    "prefix test on {s1:?}, {s2:?}"
                );
                prefix_checks += 1;
            }
        }
    }
    Ok(format!(
        "{pairs} (Q, σ) pairs ({nonempty} forward), {prefix_checks} prefix pairs"
    ))
}

fn criterion_3(rng: &mut ChaCha8Rng, peaks: &mut Peaks) -> Check {
    let mut total_seeds = 0;
    for case in 0..200 {
        let alphabet = &b"ACGT"[..rng.gen_range(2..=4)];
        let (m, l) = (rng.gen_range(1..=40), rng.gen_range(1..=20));
        let reads = random_reads(rng, m, l, alphabet);
        let storage = Storage::memory();
        let index = ok(build_index(&reads, &storage))?;
        let stats = ok(build_basic_arc_intervals(&index, 1))?;
        peaks.seed_stack(stats.max_stack_depth, reads.max_len());
        let sa = sa_of(&index);
        let everything = StringInterval::new(1, index.total_len() + 1);

        let mut got = BTreeSet::new();
        for key in ok(storage.list_keys())? {
            let ListKey::E { sigma, l_s, l_ps } = key else {
                return Err(format!("instance {case}: unexpected list {key:?}"));
            };
            let encs: Vec<Encoding> =
                ok(ok(storage.open(&key.file_name()))?.collect::<Result<_, _>>())?;
            for w in encs.windows(2) {
                ensure!(
                    w[0].q_ps_dollar.e <= w[1].q_ps_dollar.b,
                    "instance {case}: list {} not sorted and disjoint",
                    key.file_name()
                );
            }
            for enc in encs {
                let entry = sa[enc.q_ps_dollar.b as usize - 1];
                let read = reads.read(entry.j);
                let seed = read[read.len() - entry.k as usize..].to_vec();
                ensure!(
                    seed.len() as u32 == l_s && l_s == l_ps && seed[0] == sigma,
                    "instance {case}: seed {seed:?} in list {}",
                    key.file_name()
                );
                ensure!(
                    enc.q_p == everything
                        && enc.q_pr == everything
                        && enc.l_p == 0
                        && enc.l_ps == l_s,
                    "instance {case}: seed encoding {enc:?} is not basic"
                );
                got.insert((seed, enc.q_ps_dollar, enc.q_dollar_s));
            }
        }
        let naive = NaiveIndex::new(&reads);
        let want: BTreeSet<_> = naive_seeds(&reads)
            .into_iter()
            .map(|s| {
                let mut s_dollar = s.clone();
                s_dollar.push(b'$');
                let mut dollar_s = vec![b'$'];
                dollar_s.extend_from_slice(&s);
                let q1 = naive.interval(&s_dollar).interval;
                let q2 = naive.interval(&dollar_s).interval;
                (s, q1, q2)
            })
            .collect();
        ensure!(
            got == want,
            "instance {case}: {} seeds found, {} expected",
            got.len(),
            want.len()
        );
        ensure!(
            stats.seeds as usize == got.len(),
            "instance {case}: seed count mismatch"
        );
        total_seeds += got.len();
    }
    Ok(format!(
        "200 instances, {total_seeds} seeds, all lists sorted and disjoint"
    ))
}

fn naive_arcs(records: &[ArcRecord], reads: &ReadSet) -> Vec<NaiveArc> {
    let mut arcs: Vec<NaiveArc> = records
        .iter()
        .map(|a| NaiveArc::from_record(a, reads))
        .collect();
    arcs.sort();
    arcs
}

struct IoRecord {
    read: u64,
    bound: u64,
}

fn criterion_4(rng: &mut ChaCha8Rng, peaks: &mut Peaks, io: &mut Vec<IoRecord>) -> Check {
    let mut total_arcs = 0;
    let mut self_loops = 0;
    let mut parallel = 0;
    let tmp = ok(tempfile::tempdir())?;
    for case in 0..200 {
        let (m, l) = (rng.gen_range(1..=200), rng.gen_range(2..=50));
        let reads = substring_free_reads(rng, m, l);
        let storage = if case % 20 == 0 {
            ok(Storage::dir(tmp.path().join(format!("case{case}"))))?
        } else {
            Storage::memory()
        };
        let (graph, stats) = ok(build_overlap_graph(
            &reads,
            &storage,
            &OverlapOptions::default(),
        ))?;
        peaks.seed_stack(stats.max_seed_stack_depth, stats.l);
        peaks.labeling(
            stats.peak_labeling_encodings,
            stats.max_merged_lists,
            stats.sentinel_table_entries,
            stats.m,
        );
        io.push(IoRecord {
            read: stats.records_read,
            bound: stats.io_bound,
        });
        let records = ok(graph.arcs())?;
        let got = naive_arcs(&records, &reads);
        let want = naive_overlap_graph(&reads);
        ensure!(
            got == want,
            "instance {case}: {} arcs, expected {}",
            got.len(),
            want.len()
        );
        ensure!(
            stats.arcs as usize == got.len(),
            "instance {case}: arc count mismatch"
        );

        let reversed = NaiveIndex::new(&reads.reversed());
        for a in &records {
            let lx_r: Vec<u8> = reads.read(a.source)[..a.l_p as usize]
                .iter()
                .rev()
                .copied()
                .collect();
            let want = reversed.interval(&lx_r).interval;
            ensure!(
                want == StringInterval::new(a.b_r, a.e_r),
                "instance {case}: arc {} -> {} has reversed interval [{}, {}), expected {want:?}",
                a.source,
                a.target,
                a.b_r,
                a.e_r
            );
        }
        total_arcs += got.len();
        self_loops += got.iter().filter(|a| a.source == a.target).count();
        let pairs: BTreeSet<_> = got.iter().map(|a| (a.source, a.target)).collect();
        parallel += got.len() - pairs.len();
    }
    Ok(format!(
        "200 instances, {total_arcs} arcs ({self_loops} self-loops, {parallel} parallel), labels checked"
    ))
}

fn criterion_5(io: &[IoRecord]) -> Check {
    ensure!(!io.is_empty(), "no overlap runs recorded");
    let mut worst = 0.0f64;
    for (case, r) in io.iter().enumerate() {
        ensure!(
            r.read <= r.bound,
            "instance {case}: read {} records, bound {}",
            r.read,
            r.bound
        );
        worst = worst.max(r.read as f64 / r.bound as f64);
    }
    let mean = io
        .iter()
        .map(|r| r.read as f64 / r.bound as f64)
        .sum::<f64>()
        / io.len() as f64;
    Ok(format!(
        "{} runs, observed/bound ratio max {worst:.3}, mean {mean:.3}",
        io.len()
    ))
}

struct ReductionIo {
    used: u64,
    bound: u64,
    per_target: bool,
}

fn criterion_6(rng: &mut ChaCha8Rng, peaks: &mut Peaks, io: &mut Vec<ReductionIo>) -> Check {
    let mut removed = 0;
    let mut kept_total = 0;
    for case in 0..100 {
        let (m, l) = (rng.gen_range(1..=50), rng.gen_range(2..=30));
        let reads = substring_free_reads(rng, m, l);
        let want = ok(naive_string_graph(&reads))?;
        let storage = Storage::memory();
        let (graph, stats) = ok(build_overlap_graph(
            &reads,
            &storage,
            &OverlapOptions::default(),
        ))?;
        let mut outputs = Vec::new();
        for m in [1, 2, 8, 1024] {
            let rstats = ok(reduce_overlap_graph(&graph, m))?;
            peaks.reduction(rstats.peak_resident_arcs, m);
            io.push(ReductionIo {
                used: rstats.records_read + rstats.records_written,
                bound: rstats.io_bound,
                per_target: rstats.per_target_bound_held,
            });
            let got = naive_arcs(&ok(read_arcs(&storage, STRING_GRAPH_LIST))?, &reads);
            ensure!(
                got == want,
                "instance {case}, M = {m}: {} arcs kept, expected {}",
                got.len(),
                want.len()
            );
            outputs.push(got);
        }
        ensure!(
            outputs.windows(2).all(|w| w[0] == w[1]),
            "instance {case}: output depends on M"
        );
        kept_total += want.len();
        removed += stats.arcs as usize - want.len();
    }
    Ok(format!(
        "100 instances x 4 budgets, {kept_total} irreducible arcs, {removed} transitive arcs removed"
    ))
}

fn criterion_7(io: &[ReductionIo]) -> Check {
    ensure!(!io.is_empty(), "no reduction runs recorded");
    let mut worst = 0.0f64;
    for (run, r) in io.iter().enumerate() {
        ensure!(
            r.used <= r.bound,
            "run {run}: {} records, bound {}",
            r.used,
            r.bound
        );
        ensure!(r.per_target, "run {run}: a target exceeded its own bound");
        if r.bound > 0 {
            worst = worst.max(r.used as f64 / r.bound as f64);
        }
    }
    Ok(format!(
        "{} runs, observed/bound ratio max {worst:.3}",
        io.len()
    ))
}

fn criterion_8(peaks: &Peaks) -> Check {
    ensure!(peaks.runs > 0, "no runs recorded");
    let all: Vec<_> = peaks
        .seed_stack_violations
        .iter()
        .chain(&peaks.labeling_violations)
        .chain(&peaks.reduction_violations)
        .collect();
    ensure!(
        all.is_empty(),
        "{} violations, first: {}",
        all.len(),
        all[0]
    );
    Ok(format!(
        "seed stack <= {:.2}(l+1), labeling <= {} encoding (merge fan-in <= {} lists), reduction <= {:.2}(M+1)",
        peaks.max_seed_stack_over_l,
        peaks.max_labeling_encodings,
        peaks.max_merged_lists,
        peaks.max_reduction_resident_over_m
    ))
}

fn criterion_9(rng: &mut ChaCha8Rng) -> Check {
    let mut paths = 0;
    let mut checked_pipeline = 0;
    let mut longest = 0;
    while paths < 1000 {
        let (m, l) = (rng.gen_range(2..=40), rng.gen_range(3..=20));
        let reads = substring_free_reads(rng, m, l);
        let arcs = naive_overlap_graph(&reads);
        if arcs.is_empty() {
            continue;
        }
        let mut out: BTreeMap<u32, Vec<&NaiveArc>> = BTreeMap::new();
        for a in &arcs {
            out.entry(a.source).or_default().push(a);
        }
        let storage = Storage::memory();
        let (graph, _) = ok(build_overlap_graph(
            &reads,
            &storage,
            &OverlapOptions::default(),
        ))?;
        let records = ok(graph.arcs())?;
        for _ in 0..20 {
            let mut walk: Vec<NaiveArc> = vec![arcs.choose(rng).unwrap().clone()];
            let steps = rng.gen_range(0..8);
            for _ in 0..steps {
                let Some(next) = out.get(&walk.last().unwrap().target) else {
                    break;
                };
                walk.push((*next.choose(rng).unwrap()).clone());
            }
            let left = assemble_left(&walk, &reads);
            let right = assemble_right(&walk, &reads);
            ensure!(
                left == right,
                "walk of {} arcs: assemblies differ",
                walk.len()
            );

            let shortest = walk.iter().all(|a| {
                out[&a.source]
                    .iter()
                    .filter(|b| b.target == a.target)
                    .all(|b| b.lx.len() >= a.lx.len())
            });
            if shortest {
                let mut path = vec![walk[0].source];
                path.extend(walk.iter().map(|a| a.target));
                let assembled = ok(assemble_path(&path, &records, &reads))?;
                ensure!(assembled == left, "pipeline assembly differs on {path:?}");
                checked_pipeline += 1;
            }
            longest = longest.max(walk.len());
            paths += 1;
        }
    }
    Ok(format!(
        "{paths} walks up to {longest} arcs, {checked_pipeline} also through the pipeline's assembly"
    ))
}

fn example_graph(
    reads: &ReadSet,
    min_overlap: u32,
) -> Result<(Vec<ArcRecord>, Vec<ArcRecord>), String> {
    let storage = Storage::memory();
    let opts = OverlapOptions {
        min_overlap,
        ..Default::default()
    };
    let (graph, _) = ok(build_overlap_graph(reads, &storage, &opts))?;
    let overlap = ok(graph.arcs())?;
    ok(reduce_overlap_graph(&graph, 1024))?;
    let reduced = ok(read_arcs(&storage, STRING_GRAPH_LIST))?;
    Ok((overlap, reduced))
}

fn criterion_10() -> Check {
    let pair = ok(ReadSet::from_strs(&[
        "ATATCATCGATCTACTATTAC",
        "GATCTACTATTACTTCATATC",
    ]))?;
    let (all, _) = example_graph(&pair, 1)?;
    let with_8: Vec<_> = all.iter().filter(|a| a.l_p == 8).collect();
    ensure!(with_8.len() == 1, "{} arcs with l_P = 8", with_8.len());
    let a = with_8[0];
    ensure!(
        (a.source, a.target, a.overlap_len(&pair)) == (1, 2, 13),
        "arc with l_P = 8 is {} -> {} with overlap {}",
        a.source,
        a.target,
        a.overlap_len(&pair)
    );
    ensure!(
        a.left_extension(&pair) == b"ATATCATC",
        "left extension differs"
    );
    let (strict, _) = example_graph(&pair, 6)?;
    ensure!(
        strict.len() == 1 && strict[0] == *a,
        "{} arcs with overlaps of at least 6",
        strict.len()
    );
    let assembled = ok(assemble_path(&[1, 2], &all, &pair))?;
    ensure!(
        assembled == b"ATATCATCGATCTACTATTACTTCATATC",
        "assembly differs"
    );

    let triple = ok(ReadSet::from_strs(&[
        "ATATCATCGATCTACTATTA",
        "ATCGATCTACTATTACTACTATTAC",
        "CTATTACTACTATTACTTCAT",
    ]))?;
    let (overlap, reduced) = example_graph(&triple, 3)?;
    let pairs = |arcs: &[ArcRecord]| -> BTreeSet<(u32, u32)> {
        arcs.iter().map(|a| (a.source, a.target)).collect()
    };
    ensure!(
        pairs(&overlap) == BTreeSet::from([(1, 2), (1, 3), (2, 3)]),
        "overlap graph pairs {:?}",
        pairs(&overlap)
    );
    ensure!(
        pairs(&reduced) == BTreeSet::from([(1, 2), (2, 3)]),
        "string graph pairs {:?}",
        pairs(&reduced)
    );
    Ok(format!(
        "read pair: one arc with l_P = 8 (overlap 13); read triple with overlaps >= 3: {} arcs reduce to {}, (1, 3) removed",
        overlap.len(),
        reduced.len()
    ))
}

fn main() -> ExitCode {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_2024);
    let mut peaks = Peaks::default();
    let mut overlap_io = Vec::new();
    let mut reduction_io = Vec::new();
    let mut failed = 0;

    let mut run = |id: u32, name: &str, budget: Duration, f: &mut dyn FnMut() -> Check| {
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let elapsed = start.elapsed();
        let (pass, detail) = match result {
            Ok(d) if elapsed <= budget => (true, d),
            Ok(d) => (false, format!("{d}; over time budget of {budget:?}")),
            Err(e) => (false, e),
        };
        if !pass {
            failed += 1;
        }
        println!(
            "criterion {id:>2}  {}  {name}  ({:.2} s)  {detail}",
            if pass { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64()
        );
    };

    let secs = Duration::from_secs;
    run(1, "worked index table", secs(1), &mut criterion_1);
    run(2, "interval algebra", secs(30), &mut || {
        criterion_2(&mut rng)
    });
    run(3, "seed scan", secs(60), &mut || {
        criterion_3(&mut rng, &mut peaks)
    });
    run(4, "overlap graph equivalence", secs(300), &mut || {
        criterion_4(&mut rng, &mut peaks, &mut overlap_io)
    });
    run(5, "overlap I/O bound", secs(1), &mut || {
        criterion_5(&overlap_io)
    });
    run(6, "string graph equivalence", secs(300), &mut || {
        criterion_6(&mut rng, &mut peaks, &mut reduction_io)
    });
    run(7, "reduction I/O bound", secs(1), &mut || {
        criterion_7(&reduction_io)
    });
    run(8, "memory contract", secs(1), &mut || criterion_8(&peaks));
    run(9, "assembly identity", secs(300), &mut || {
        criterion_9(&mut rng)
    });
    run(10, "worked pair and triple", secs(5), &mut criterion_10);

    if failed == 0 {
        println!("acceptance: all 10 criteria passed");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {failed} criteria failed");
        ExitCode::FAILURE
    }
}
