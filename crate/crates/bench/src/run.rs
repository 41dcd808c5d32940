use std::time::{Duration, Instant};

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use skiptour::runtime::{mix64, with_threads};
use skiptour::{
    Augmentation, ElementHandle, EulerTourForest, ForestConfig, SkipList, SkipListConfig, Sum,
};

use crate::report::median;
use crate::{
    build_graph, BenchConfig, BenchError, BenchRecord, CellStatus, GraphKind, Op, Structure,
    Workload,
};

type Timings = Vec<(Op, Duration)>;

fn timed(f: impl FnOnce()) -> Duration {
    let t = Instant::now();
    f();
    t.elapsed()
}

fn chained<A: Augmentation>(n: usize, seed: u64, value: A::Value) -> (SkipList<A>, Vec<ElementHandle>) {
    let mut list = SkipList::new(SkipListConfig::with_seed(seed), value);
    let hs = list.create_elements(n, value);
    let pairs: Vec<_> = hs.windows(2).map(|w| (w[0], w[1])).collect();
    list.batch_join_aug(&pairs).expect("chain endpoints are distinct");
    (list, hs)
}

fn split_rejoin<A: Augmentation>(
    n: usize,
    seed: u64,
    value: A::Value,
    picks: &[usize],
    threads: usize,
) -> Result<Timings, BenchError> {
    let (list, hs) = chained::<A>(n, seed, value);
    let targets: Vec<_> = picks.iter().map(|&i| hs[i]).collect();
    let rejoin: Vec<_> = picks.iter().filter(|&&i| i + 1 < n).map(|&i| (hs[i], hs[i + 1])).collect();
    with_threads(threads, || {
        let split = timed(|| list.batch_split_aug(&targets));
        let mut res = Ok(());
        let join = timed(|| res = list.batch_join_aug(&rejoin));
        res?;
        Ok(vec![(Op::Split, split), (Op::Join, join)])
    })
}

fn tail_split<A: Augmentation>(
    n: usize,
    k: usize,
    seed: u64,
    value: A::Value,
    threads: usize,
    sequential_too: bool,
) -> Timings {
    let points = n - k - 1..n - 1;
    let (list, hs) = chained::<A>(n, seed, value);
    let targets = hs[points.clone()].to_vec();
    let mut out = vec![(Op::Split, with_threads(threads, || timed(|| list.batch_split_aug(&targets))))];
    if sequential_too {
        let (list, hs) = chained::<A>(n, seed, value);
        let t = with_threads(threads, || {
            timed(|| {
                for i in points.rev() {
                    list.split_with_sequential_update(hs[i]);
                }
            })
        });
        out.push((Op::SplitSequential, t));
    }
    out
}

fn cut_relink(
    n: usize,
    seed: u64,
    edges: &[(u32, u32)],
    picks: &[usize],
    threads: usize,
) -> Result<Timings, BenchError> {
    let mut f = EulerTourForest::<skiptour::NoAug>::initialize(n, ForestConfig::with_seed(seed), (), ())?;
    f.batch_link(edges)?;
    let batch: Vec<_> = picks.iter().map(|&i| edges[i]).collect();
    with_threads(threads, || {
        let mut res = Ok(());
        let cut = timed(|| res = f.batch_cut(&batch));
        res?;
        let mut res = Ok(());
        let link = timed(|| res = f.batch_link(&batch));
        res?;
        Ok(vec![(Op::Cut, cut), (Op::Link, link)])
    })
}

/// Runs every `(k, threads)` cell: one discarded warm-up, then `trials`
/// timed runs, each on a freshly built structure. Sampled positions depend
/// only on the seed and `k`.
pub fn run_bench(cfg: &BenchConfig) -> Result<Vec<BenchRecord>, BenchError> {
    cfg.validate()?;
    let (graph, n, edges) = match (&cfg.edges, cfg.structure) {
        (Some(e), Structure::Ett) => {
            let max = e.iter().map(|&(a, b)| a.max(b)).max().unwrap_or(1) as usize;
            (GraphKind::File, max, e.clone())
        }
        (None, Structure::Ett) => (cfg.graph, cfg.n, build_graph(cfg.graph, cfg.n, cfg.seed)?),
        _ => (cfg.graph, cfg.n, Vec::new()),
    };
    let ops = cfg.workload.ops(cfg.structure);
    let mut records = Vec::new();
    for &k in &cfg.ks {
        for &threads in &cfg.threads {
            let record = |op: Op, status, trials: Vec<f64>, note: String| BenchRecord {
                structure: cfg.structure,
                workload: cfg.workload,
                graph,
                n,
                k,
                threads,
                op,
                status,
                median_seconds: median(&trials),
                trial_seconds: trials,
                note,
            };
            let limit = match cfg.workload {
                Workload::SplitRejoin => n,
                Workload::AdversarialTailSplit => n.saturating_sub(1),
                Workload::CutRelink => edges.len(),
            };
            if k > limit {
                let note = format!("k = {k} exceeds the {limit} available positions");
                eprintln!("warning: skipping cell k={k} threads={threads}: {note}");
                for &op in ops {
                    records.push(record(op, CellStatus::Skipped, Vec::new(), note.clone()));
                }
                continue;
            }
            let mut rng = ChaCha8Rng::seed_from_u64(mix64(cfg.seed) ^ k as u64);
            let picks = sample(&mut rng, limit, k).into_vec();
            let seed = mix64(cfg.seed ^ 0x5eed);
            let run = || -> Result<Timings, BenchError> {
                match (cfg.structure, cfg.workload) {
                    (Structure::Skiplist, Workload::SplitRejoin) => {
                        split_rejoin::<skiptour::NoAug>(n, seed, (), &picks, threads)
                    }
                    (Structure::SkiplistAug, Workload::SplitRejoin) => {
                        split_rejoin::<Sum>(n, seed, 1, &picks, threads)
                    }
                    (Structure::Skiplist, Workload::AdversarialTailSplit) => {
                        Ok(tail_split::<skiptour::NoAug>(n, k, seed, (), threads, false))
                    }
                    (Structure::SkiplistAug, Workload::AdversarialTailSplit) => {
                        Ok(tail_split::<Sum>(n, k, seed, 1, threads, true))
                    }
                    (Structure::Ett, Workload::CutRelink) => {
                        cut_relink(n, seed, &edges, &picks, threads)
                    }
                    _ => unreachable!("rejected by validate"),
                }
            };
            let mut per_op: Vec<Vec<f64>> = vec![Vec::new(); ops.len()];
            let outcome = (0..=cfg.trials).try_for_each(|trial| {
                let timings = run()?;
                if trial > 0 {
                    for (slot, (_, d)) in per_op.iter_mut().zip(timings) {
                        slot.push(d.as_secs_f64());
                    }
                }
                Ok::<(), BenchError>(())
            });
            for (i, &op) in ops.iter().enumerate() {
                records.push(match &outcome {
                    Ok(()) => record(op, CellStatus::Ok, per_op[i].clone(), String::new()),
                    Err(e) => record(op, CellStatus::Error, Vec::new(), e.to_string()),
                });
            }
        }
    }
    Ok(records)
}
