//! Acceptance suite: one PASS / FAIL / SKIP line per criterion.
//!
//! Runs as a plain binary (`harness = false`) and exits nonzero if any
//! criterion fails.

mod common;

use std::collections::HashMap;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use statrs::distribution::{ChiSquared, ContinuousCDF};

use common::*;
use skiptour::oracles::{ForestModel, SeqListModel};
use skiptour::runtime::with_threads;
use skiptour::{
    CutStrategy, ElementHandle, EulerTourForest, ForestConfig, SkipList, SkipListConfig, Sum,
};

enum Outcome {
    Pass(String),
    Fail(String),
    Skip(String),
}

fn verdict(ok: bool, detail: String) -> Outcome {
    if ok {
        Outcome::Pass(detail)
    } else {
        Outcome::Fail(detail)
    }
}

fn hardware_threads() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

fn thread_counts() -> Vec<usize> {
    let mut t = vec![1, 2, hardware_threads()];
    t.sort_unstable();
    t.dedup();
    t
}

fn median(mut xs: Vec<Duration>) -> Duration {
    xs.sort_unstable();
    xs[xs.len() / 2]
}

// 1 ------------------------------------------------------------------------

fn phase_equivalence() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let threads = thread_counts();
    let mut failures = Vec::new();
    for instance_no in 0..1000 {
        let inst = ListInstance::random(&mut rng, 256, 64);
        let (seq, hs) = inst.build();
        for (a, b) in inst.join_pairs(&hs) {
            seq.join(a, b);
        }
        let joined = seq.dump();
        for v in inst.split_targets(&hs) {
            seq.split(v);
        }
        let split = seq.dump();
        for &t in &threads {
            let (par, hs) = inst.build();
            let pairs = inst.join_pairs(&hs);
            let targets = inst.split_targets(&hs);
            with_threads(t, || par.batch_join(&pairs)).unwrap();
            let ok_join = par.dump() == joined && par.check_structure().is_ok();
            with_threads(t, || par.batch_split(&targets));
            let ok_split = par.dump() == split && par.check_structure().is_ok();
            if !(ok_join && ok_split) {
                failures.push((instance_no, t));
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    verdict(
        failures.is_empty() && secs < 120.0,
        format!(
            "1000 instances x threads {threads:?}, {} failures {:?}, {secs:.1}s",
            failures.len(),
            &failures[..failures.len().min(5)]
        ),
    )
}

// 2 ------------------------------------------------------------------------

fn augmented_consistency() -> Outcome {
    let start = Instant::now();
    let n = 10_000;
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut list: SkipList<Sum> = SkipList::new(SkipListConfig::with_seed(2), 0);
    let hs = list.create_elements(n, 0);
    let mut values: Vec<i64> = (0..n).map(|_| rng.random_range(-1000..1000)).collect();
    let init: Vec<_> = hs.iter().zip(&values).map(|(&h, &v)| (h, v)).collect();
    list.batch_update_values(&init).unwrap();

    let ids: Vec<u64> = (0..n as u64).collect();
    let mut model = SeqListModel::singletons(&ids);
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(&mut rng);
    let mut setup = Vec::new();
    for w in perm.windows(2) {
        if rng.random_bool(0.99) {
            model.join(w[0] as u64, w[1] as u64).unwrap();
            setup.push((hs[w[0]], hs[w[1]]));
        }
    }
    list.batch_join_aug(&setup).unwrap();

    let mut sweep_failures = 0;
    let mut query_failures = 0;
    for _ in 0..1000 {
        let k = rng.random_range(1..=100);
        match rng.random_range(0..3) {
            0 => {
                let mut picks: Vec<usize> = (0..k).map(|_| rng.random_range(0..n)).collect();
                picks.sort_unstable();
                picks.dedup();
                let batch: Vec<_> = picks
                    .iter()
                    .map(|&i| {
                        values[i] = rng.random_range(-1000..1000);
                        (hs[i], values[i])
                    })
                    .collect();
                list.batch_update_values(&batch).unwrap();
            }
            1 => {
                let mut lists = model.lists();
                lists.shuffle(&mut rng);
                let pairs: Vec<(u64, u64)> = lists
                    .chunks_exact(2)
                    .take(k)
                    .map(|c| (*c[0].last().unwrap(), c[1][0]))
                    .collect();
                for &(a, b) in &pairs {
                    model.join(a, b).unwrap();
                }
                let batch: Vec<_> =
                    pairs.iter().map(|&(a, b)| (hs[a as usize], hs[b as usize])).collect();
                list.batch_join_aug(&batch).unwrap();
            }
            _ => {
                let picks: Vec<usize> = (0..k).map(|_| rng.random_range(0..n)).collect();
                for &i in &picks {
                    model.split(i as u64).unwrap();
                }
                let batch: Vec<_> = picks.iter().map(|&i| hs[i]).collect();
                list.batch_split_aug(&batch);
            }
        }
        if list.check_values().is_err() {
            sweep_failures += 1;
        }
        // linear-fold oracle from per-list prefix sums
        let seqs = model.lists();
        let mut owner = vec![(0usize, 0usize); n];
        let mut prefix: Vec<Vec<i64>> = Vec::with_capacity(seqs.len());
        for (li, seq) in seqs.iter().enumerate() {
            let mut p = vec![0i64];
            for (pos, &id) in seq.iter().enumerate() {
                owner[id as usize] = (li, pos);
                p.push(p[pos] + values[id as usize]);
            }
            prefix.push(p);
        }
        for _ in 0..1000 {
            let x = rng.random_range(0..n);
            let (li, i) = owner[x];
            let j = rng.random_range(i..seqs[li].len());
            let y = seqs[li][j] as usize;
            let want = prefix[li][j + 1] - prefix[li][i];
            if list.query_value(hs[x], hs[y]) != Ok(want) {
                query_failures += 1;
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    verdict(
        sweep_failures == 0 && query_failures == 0 && secs < 120.0,
        format!("1000 phases, n={n}: {sweep_failures} sweep failures, {query_failures} query mismatches, {secs:.1}s"),
    )
}

// 3 ------------------------------------------------------------------------

fn single_recompute() -> Outcome {
    let n = 10_000;
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut list: SkipList<Sum> = SkipList::new(SkipListConfig::with_seed(3), 1);
    let hs = list.create_elements(n, 1);
    let mut order = hs.clone();
    order.shuffle(&mut rng);
    chain(&list, &order);
    list.enable_write_log();
    let mut violations = 0;
    let mut writes = 0;
    for _ in 0..100 {
        let k = rng.random_range(1..=2000);
        let mut picks: Vec<ElementHandle> = (0..k).map(|_| hs[rng.random_range(0..n)]).collect();
        picks.sort_unstable();
        picks.dedup();
        let batch: Vec<_> = picks.iter().map(|&h| (h, rng.random_range(0..100))).collect();
        list.batch_update_values(&batch).unwrap();
        let log = list.take_write_log();
        writes += log.len();
        let mut counts = HashMap::new();
        for node in log {
            *counts.entry(node).or_insert(0u32) += 1;
        }
        violations += counts.values().filter(|&&c| c > 1).count();
        if list.check_values().is_err() {
            violations += 1;
        }
    }
    verdict(
        violations == 0,
        format!("100 batches, {writes} value writes, {violations} nodes written twice"),
    )
}

// 4 and 5 ------------------------------------------------------------------

struct EttReport {
    mismatches: usize,
    tour_failures: usize,
    secs: f64,
}

fn ett_workload() -> EttReport {
    let start = Instant::now();
    let n = 256;
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut forests: Vec<EulerTourForest<Sum>> = [CutStrategy::Recursive, CutStrategy::TailFind]
        .into_iter()
        .map(|s| {
            let mut cfg = ForestConfig::with_seed(4);
            cfg.cut_strategy = s;
            EulerTourForest::initialize(n, cfg, 1, 0).unwrap()
        })
        .collect();
    let mut model = ForestModel::new(n, 1i64);
    let mut mismatches = 0;
    let mut tour_failures = 0;
    for _ in 0..1000 {
        match rng.random_range(0..5) {
            0 | 1 => {
                let batch = random_links(&mut rng, &model, 64);
                let vals: Vec<_> =
                    batch.iter().map(|&(u, v)| (u, v, rng.random_range(0..10))).collect();
                for &(u, v, w) in &vals {
                    model.link(u, v, w).unwrap();
                }
                for f in &mut forests {
                    mismatches += usize::from(f.batch_link_with_values(&vals).is_err());
                }
            }
            2 => {
                let batch = random_cuts(&mut rng, &model, 64);
                for &(u, v) in &batch {
                    model.cut(u, v).unwrap();
                }
                for f in &mut forests {
                    mismatches += usize::from(f.batch_cut(&batch).is_err());
                }
            }
            3 => {
                let mut picks: Vec<u32> = (0..32).map(|_| rng.random_range(1..=n as u32)).collect();
                picks.sort_unstable();
                picks.dedup();
                let batch: Vec<_> = picks.iter().map(|&v| (v, rng.random_range(0..10))).collect();
                for &(v, x) in &batch {
                    model.set_vertex_value(v, x).unwrap();
                }
                for f in &forests {
                    mismatches += usize::from(f.batch_update_vertex_values(&batch).is_err());
                }
            }
            _ => {
                let mut edges = model.edges();
                edges.shuffle(&mut rng);
                let batch: Vec<_> = edges
                    .iter()
                    .take(16)
                    .map(|&(u, v)| (u, v, rng.random_range(0..10)))
                    .collect();
                for &(u, v, x) in &batch {
                    model.set_edge_value(u, v, x).unwrap();
                }
                for f in &forests {
                    mismatches += usize::from(f.batch_update_edge_values(&batch).is_err());
                }
            }
        }
        let queries: Vec<(u32, u32)> = (0..64)
            .map(|_| (rng.random_range(1..=n as u32), rng.random_range(1..=n as u32)))
            .collect();
        let want_conn: Vec<bool> =
            queries.iter().map(|&(u, v)| model.connected(u, v).unwrap()).collect();
        let subtree_q: Vec<(u32, u32)> =
            model.edges().into_iter().flat_map(|(a, b)| [(a, b), (b, a)]).collect();
        let want_sub: Vec<i64> = subtree_q
            .iter()
            .map(|&(u, p)| model.subtree(u, p, 0, |a, b| a + b).unwrap())
            .collect();
        for f in &forests {
            if f.batch_connected(&queries).unwrap() != want_conn {
                mismatches += 1;
            }
            let got: Vec<_> = f.batch_subtree(&subtree_q).into_iter().map(|r| r.ok()).collect();
            mismatches += got.iter().zip(&want_sub).filter(|(g, w)| **g != Some(**w)).count();
            if f.edges() != model.edges() || f.check().is_err() {
                mismatches += 1;
            }
            if tours_match_model(f, &model).is_err() {
                tour_failures += 1;
            }
        }
    }
    EttReport {
        mismatches,
        tour_failures,
        secs: start.elapsed().as_secs_f64(),
    }
}

// 6 ------------------------------------------------------------------------

fn height_distribution() -> Outcome {
    let draws = 1_000_000usize;
    let mut list = SkipList::unaugmented(SkipListConfig::with_seed(6));
    let cap = list.config().max_height;
    let mut counts = vec![0u64; cap as usize + 1];
    for _ in 0..draws {
        let h = list.create_element();
        counts[list.height(h) as usize] += 1;
    }
    let mean = counts.iter().enumerate().map(|(h, &c)| h as f64 * c as f64).sum::<f64>()
        / draws as f64;

    // truncated Geometric(1/2): P(h) = 2^-h below the cap, the rest at it
    let prob = |h: u32| {
        if h < cap {
            0.5f64.powi(h as i32)
        } else {
            0.5f64.powi(cap as i32 - 1)
        }
    };
    // pool the tail so every bin expects at least 5 draws
    let mut bins: Vec<(f64, f64)> = Vec::new();
    let mut tail = (0.0, 0.0);
    for h in 1..=cap {
        let expected = prob(h) * draws as f64;
        let observed = counts[h as usize] as f64;
        if expected >= 5.0 && tail == (0.0, 0.0) {
            bins.push((observed, expected));
        } else {
            tail.0 += observed;
            tail.1 += expected;
        }
    }
    if tail.1 < 5.0 {
        let last = bins.pop().unwrap();
        tail = (tail.0 + last.0, tail.1 + last.1);
    }
    bins.push(tail);
    let chi2: f64 = bins.iter().map(|(o, e)| (o - e) * (o - e) / e).sum();
    let df = (bins.len() - 1) as f64;
    let critical = ChiSquared::new(df).unwrap().inverse_cdf(0.999);
    verdict(
        (1.96..=2.04).contains(&mean) && chi2 <= critical,
        format!("mean {mean:.4}, chi2 {chi2:.2} vs {critical:.2} at df {df}"),
    )
}

// 7 ------------------------------------------------------------------------

fn chained_list(n: usize, seed: u64) -> (SkipList, Vec<ElementHandle>) {
    let mut list = SkipList::unaugmented(SkipListConfig::with_seed(seed));
    let hs = list.create_elements(n, ());
    chain(&list, &hs);
    (list, hs)
}

fn scaled_speedup() -> Outcome {
    let hw = hardware_threads();
    if hw < 8 {
        return Outcome::Skip(format!("needs at least 8 hardware threads, found {hw}"));
    }
    let (n, k) = (1_000_000, 100_000);
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let picks: Vec<usize> = (0..k).map(|_| rng.random_range(0..n)).collect();
    let time = |threads: usize| {
        (0..3)
            .map(|_| {
                let (list, hs) = chained_list(n, 7);
                let targets: Vec<_> = picks.iter().map(|&i| hs[i]).collect();
                with_threads(threads, || {
                    let t = Instant::now();
                    list.batch_split(&targets);
                    t.elapsed()
                })
            })
            .min()
            .unwrap()
    };
    let (t1, tp) = (time(1), time(hw));
    let speedup = t1.as_secs_f64() / tp.as_secs_f64();
    verdict(
        speedup >= 3.0,
        format!("batch split n={n} k={k}: {t1:?} on 1 thread, {tp:?} on {hw}, speedup {speedup:.2}x"),
    )
}

// 8 ------------------------------------------------------------------------

fn tail_split_savings() -> Outcome {
    let (n, k) = (1_000_000usize, 100_000usize);
    let build = || {
        let mut list: SkipList<Sum> = SkipList::new(SkipListConfig::with_seed(8), 1);
        let hs = list.create_elements(n, 1);
        chain(&list, &hs);
        (list, hs)
    };
    // split after each of the last k elements but one: peels k elements off
    let points = n - k - 1..n - 1;
    let mut batch_times = Vec::new();
    let mut seq_times = Vec::new();
    let mut correct = true;
    for _ in 0..3 {
        let (list, hs) = build();
        let targets: Vec<_> = hs[points.clone()].to_vec();
        let t = with_threads(1, || {
            let t = Instant::now();
            list.batch_split_aug(&targets);
            t.elapsed()
        });
        batch_times.push(t);
        correct &= list.query_value(hs[0], hs[n - k - 1]) == Ok((n - k) as i64);
        correct &= list.check_values().is_ok();

        let (list, hs) = build();
        let t = with_threads(1, || {
            let t = Instant::now();
            for i in points.clone().rev() {
                list.split_with_sequential_update(hs[i]);
            }
            t.elapsed()
        });
        seq_times.push(t);
        correct &= list.query_value(hs[0], hs[n - k - 1]) == Ok((n - k) as i64);
        correct &= list.check_values().is_ok();
    }
    let (tb, ts) = (median(batch_times), median(seq_times));
    let ratio = ts.as_secs_f64() / tb.as_secs_f64();
    verdict(
        correct && ratio >= 5.0,
        format!("n={n} k={k} one thread: batch {tb:?}, per-op {ts:?}, ratio {ratio:.1}x, results agree: {correct}"),
    )
}

// 9 ------------------------------------------------------------------------

fn search_path_bound() -> Outcome {
    let n = 100_000;
    let bound = 6.0 * (n as f64).log2();
    let mut worst = 0;
    for seed in 0..100 {
        let (list, hs) = chained_list(n, 900 + seed);
        let m = hs.iter().map(|&h| list.climb_cost(h)).max().unwrap();
        worst = worst.max(m);
    }
    verdict(
        (worst as f64) <= bound,
        format!("max path {worst} over 100 lists of n={n}, bound {bound:.1}"),
    )
}

fn main() {
    let mut any_fail = false;
    let mut report = |id: u32, name: &str, outcome: Outcome| {
        let (tag, detail) = match outcome {
            Outcome::Pass(d) => ("PASS", d),
            Outcome::Fail(d) => {
                any_fail = true;
                ("FAIL", d)
            }
            Outcome::Skip(d) => ("SKIP", d),
        };
        println!("[{tag}] {id} {name}: {detail}");
    };
    report(1, "phase equivalence", phase_equivalence());
    report(2, "augmented consistency", augmented_consistency());
    report(3, "single recompute per node", single_recompute());
    let ett = ett_workload();
    report(
        4,
        "euler tour oracle equivalence",
        verdict(
            ett.mismatches == 0 && ett.secs < 300.0,
            format!(
                "1000 phases, n=256, both cut strategies: {} mismatches, {:.1}s",
                ett.mismatches, ett.secs
            ),
        ),
    );
    report(
        5,
        "tour structure",
        verdict(
            ett.tour_failures == 0,
            format!("{} phases with a malformed tour", ett.tour_failures),
        ),
    );
    report(6, "height distribution", height_distribution());
    report(7, "scaled speedup", scaled_speedup());
    report(8, "batched tail split savings", tail_split_savings());
    report(9, "search path bound", search_path_bound());
    if any_fail {
        std::process::exit(1);
    }
}
