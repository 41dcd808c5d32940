use std::fmt;

use clap::ValueEnum;

use crate::BenchError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, ValueEnum)]
pub enum Structure {
    Skiplist,
    SkiplistAug,
    Ett,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, ValueEnum)]
pub enum Workload {
    /// Split a chain at k random positions, then rejoin it.
    SplitRejoin,
    /// Peel the last k elements off a chain one split point each.
    AdversarialTailSplit,
    /// Cut k random tree edges, then link them back.
    CutRelink,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, ValueEnum)]
pub enum GraphKind {
    Path,
    Star,
    RandomRecursive,
    /// Edges read from a file.
    #[value(skip)]
    File,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Op {
    Join,
    Split,
    /// Split points processed one at a time, each followed by its own walk
    /// to the top repairing cached values.
    SplitSequential,
    Link,
    Cut,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CellStatus {
    Ok,
    Skipped,
    Error,
}

macro_rules! names {
    ($ty:ty { $($v:ident => $s:literal),* $(,)? }) => {
        impl $ty {
            pub fn name(self) -> &'static str {
                match self { $(Self::$v => $s),* }
            }

            pub fn parse(s: &str) -> Result<Self, BenchError> {
                match s {
                    $($s => Ok(Self::$v),)*
                    _ => Err(BenchError::Parse(format!(
                        concat!("unknown ", stringify!($ty), " {:?}"), s
                    ))),
                }
            }
        }

        impl fmt::Display for $ty {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(self.name())
            }
        }
    };
}

names!(Structure { Skiplist => "skiplist", SkiplistAug => "skiplist-aug", Ett => "ett" });
names!(Workload {
    SplitRejoin => "split-rejoin",
    AdversarialTailSplit => "adversarial-tail-split",
    CutRelink => "cut-relink",
});
names!(GraphKind {
    Path => "path",
    Star => "star",
    RandomRecursive => "random-recursive",
    File => "file",
});
names!(Op {
    Join => "join",
    Split => "split",
    SplitSequential => "split-sequential",
    Link => "link",
    Cut => "cut",
});
names!(CellStatus { Ok => "ok", Skipped => "skipped", Error => "error" });

impl Workload {
    /// The natural workload for a structure.
    pub fn default_for(s: Structure) -> Self {
        match s {
            Structure::Ett => Workload::CutRelink,
            _ => Workload::SplitRejoin,
        }
    }

    /// Timed operations of one cell, in the order they run.
    pub fn ops(self, s: Structure) -> &'static [Op] {
        match (self, s) {
            (Workload::SplitRejoin, _) => &[Op::Split, Op::Join],
            (Workload::AdversarialTailSplit, Structure::SkiplistAug) => {
                &[Op::Split, Op::SplitSequential]
            }
            (Workload::AdversarialTailSplit, _) => &[Op::Split],
            (Workload::CutRelink, _) => &[Op::Cut, Op::Link],
        }
    }
}

/// Thread counts 1, 2, 4, ... up to and including the hardware count.
pub fn default_threads() -> Vec<usize> {
    let hw = std::thread::available_parallelism().map_or(1, |n| n.get());
    let mut t: Vec<usize> = std::iter::successors(Some(1usize), |&x| Some(x * 2))
        .take_while(|&x| x < hw)
        .collect();
    t.push(hw);
    t
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchConfig {
    pub structure: Structure,
    pub workload: Workload,
    pub graph: GraphKind,
    pub n: usize,
    pub ks: Vec<usize>,
    pub threads: Vec<usize>,
    pub trials: usize,
    pub seed: u64,
    /// Replaces the generated graph for the forest structure.
    pub edges: Option<Vec<(u32, u32)>>,
}

impl Default for BenchConfig {
    fn default() -> Self {
        Self {
            structure: Structure::Skiplist,
            workload: Workload::SplitRejoin,
            graph: GraphKind::Path,
            n: 1_000_000,
            ks: vec![100, 1_000, 10_000, 100_000],
            threads: default_threads(),
            trials: 3,
            seed: 1,
            edges: None,
        }
    }
}

impl BenchConfig {
    pub fn validate(&self) -> Result<(), BenchError> {
        let bad = |m: String| Err(BenchError::Config(m));
        if self.trials == 0 {
            return bad("trials must be at least 1".into());
        }
        if self.n == 0 {
            return bad("n must be at least 1".into());
        }
        if self.ks.is_empty() || self.threads.is_empty() {
            return bad("need at least one batch size and one thread count".into());
        }
        if self.threads.contains(&0) {
            return bad("thread counts must be positive".into());
        }
        let ok = matches!(
            (self.structure, self.workload),
            (Structure::Skiplist | Structure::SkiplistAug, Workload::SplitRejoin)
                | (Structure::Skiplist | Structure::SkiplistAug, Workload::AdversarialTailSplit)
                | (Structure::Ett, Workload::CutRelink)
        );
        if !ok {
            return bad(format!(
                "workload {} does not apply to {}",
                self.workload, self.structure
            ));
        }
        Ok(())
    }
}
