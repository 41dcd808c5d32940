//! Fork-join substrate and the batch primitives the structures are built on.
//!
//! Everything here runs on the ambient rayon pool. Use [`with_threads`] to
//! pin a computation to a specific worker count.

mod dict;

pub use dict::ConcurrentDict;

use std::ops::Range;

use rayon::prelude::*;

use crate::error::{Error, Result};

/// Runs `body` once for every index in `range`, in parallel.
///
/// Returns after every invocation has finished. A panic in any invocation is
/// propagated to the caller once the others are joined.
pub fn parallel_for<F>(range: Range<usize>, body: F)
where
    F: Fn(usize) + Sync + Send,
{
    range.into_par_iter().for_each(body);
}

/// Runs `f` on a dedicated pool with exactly `threads` workers.
pub fn with_threads<R, F>(threads: usize, f: F) -> R
where
    R: Send,
    F: FnOnce() -> R + Send,
{
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads.max(1))
        .build()
        .expect("failed to build worker pool");
    pool.install(f)
}

/// Number of workers in the current pool.
pub fn current_threads() -> usize {
    rayon::current_num_threads()
}

/// 64-bit finalizer with splitmix constants.
#[inline]
pub fn mix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

/// An item tagged with a grouping key.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct KeyedItem<T> {
    pub key: u64,
    pub payload: T,
}

impl<T> KeyedItem<T> {
    pub fn new(key: u64, payload: T) -> Self {
        Self { key, payload }
    }
}

/// Reorders `items` so that items with equal keys are contiguous.
///
/// Runs of different keys come out in hash order, not key order. Within a
/// run the input order is kept (the underlying sort is stable).
pub fn group_by_key<T: Send>(mut items: Vec<KeyedItem<T>>) -> Vec<KeyedItem<T>> {
    // Ties on the hash are broken by the key itself so colliding keys cannot
    // interleave.
    items.par_sort_by_key(|it| (mix64(it.key), it.key));
    items
}

/// Keeps the items whose flag is set, preserving order.
pub fn pack<T: Clone + Send + Sync>(items: &[T], flags: &[bool]) -> Result<Vec<T>> {
    if items.len() != flags.len() {
        return Err(Error::LengthMismatch {
            left: items.len(),
            right: flags.len(),
        });
    }
    Ok(items
        .par_iter()
        .zip(flags.par_iter())
        .filter_map(|(x, &keep)| keep.then(|| x.clone()))
        .collect())
}

/// For every node of a successor forest, the last node reachable from it.
///
/// `successors[i]` is the node after `i`, or `None` if `i` ends its list.
/// Pointer jumping: `O(m log m)` work, `O(log m)` rounds.
pub fn list_tail_find(successors: &[Option<usize>]) -> Result<Vec<usize>> {
    let m = successors.len();
    if let Some(bad) = successors.iter().flatten().find(|&&s| s >= m) {
        return Err(Error::InvalidArgument(format!(
            "successor {bad} out of range for {m} nodes"
        )));
    }
    let mut jump: Vec<usize> = successors
        .par_iter()
        .enumerate()
        .map(|(i, s)| s.unwrap_or(i))
        .collect();
    let rounds = usize::BITS - m.leading_zeros() + 1;
    for _ in 0..rounds {
        let next: Vec<usize> = jump.par_iter().map(|&j| jump[j]).collect();
        if next == jump {
            break;
        }
        jump = next;
    }
    // Every pointer must now rest on a true tail; anything else sits on a cycle.
    if let Some((i, _)) = jump
        .par_iter()
        .enumerate()
        .find_any(|&(_, &t)| successors[t].is_some())
    {
        return Err(Error::CycleDetected(i));
    }
    Ok(jump)
}

/// Sequential walk version of [`list_tail_find`].
pub fn list_tail_find_sequential(successors: &[Option<usize>]) -> Result<Vec<usize>> {
    let m = successors.len();
    (0..m)
        .map(|start| {
            let mut cur = start;
            for _ in 0..=m {
                match successors[cur] {
                    None => return Ok(cur),
                    Some(s) if s >= m => {
                        return Err(Error::InvalidArgument(format!(
                            "successor {s} out of range for {m} nodes"
                        )))
                    }
                    Some(s) => cur = s,
                }
            }
            Err(Error::CycleDetected(start))
        })
        .collect()
}
