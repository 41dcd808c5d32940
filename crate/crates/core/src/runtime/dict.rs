use std::sync::atomic::{AtomicU64, Ordering};

use rayon::prelude::*;

use super::mix64;
use crate::error::{Error, Result};

const EMPTY: u64 = u64::MAX;
const TOMBSTONE: u64 = u64::MAX - 1;

struct Slot {
    key: AtomicU64,
    value: AtomicU64,
}

impl Slot {
    fn empty() -> Self {
        Self {
            key: AtomicU64::new(EMPTY),
            value: AtomicU64::new(0),
        }
    }
}

/// Phase-concurrent open-addressed map from `u64` keys to `u64` values.
///
/// Linear probing; slots are claimed with compare-and-swap and deletions
/// leave tombstones. Concurrent calls are allowed only while every caller
/// does the same kind of operation (all inserts, all removes, or all
/// lookups). Growth and tombstone purging happen in [`reserve`], which takes
/// `&mut self` and therefore runs between phases.
///
/// The two largest `u64` values are reserved as slot markers.
///
/// [`reserve`]: ConcurrentDict::reserve
pub struct ConcurrentDict {
    slots: Box<[Slot]>,
    mask: usize,
    seed: u64,
    // live + tombstones, an upper bound maintained between phases
    occupied: AtomicU64,
    live: AtomicU64,
}

impl ConcurrentDict {
    pub fn new(seed: u64) -> Self {
        Self::with_capacity(0, seed)
    }

    /// A dictionary that can take `n` inserts before the next [`reserve`].
    ///
    /// [`reserve`]: ConcurrentDict::reserve
    pub fn with_capacity(n: usize, seed: u64) -> Self {
        let cap = (2 * n).next_power_of_two().max(16);
        Self {
            slots: (0..cap).map(|_| Slot::empty()).collect(),
            mask: cap - 1,
            seed,
            occupied: AtomicU64::new(0),
            live: AtomicU64::new(0),
        }
    }

    pub fn len(&self) -> usize {
        self.live.load(Ordering::Relaxed) as usize
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn capacity(&self) -> usize {
        self.slots.len()
    }

    #[inline]
    fn home(&self, key: u64) -> usize {
        (mix64(key ^ self.seed) as usize) & self.mask
    }

    /// Makes room for `additional` inserts at load factor at most 1/2.
    pub fn reserve(&mut self, additional: usize) {
        let occupied = *self.occupied.get_mut() as usize;
        if 2 * (occupied + additional) <= self.slots.len() {
            return;
        }
        let live = *self.live.get_mut() as usize;
        let cap = (2 * (live + additional)).next_power_of_two().max(16);
        let old = std::mem::replace(
            &mut self.slots,
            (0..cap).map(|_| Slot::empty()).collect(),
        );
        self.mask = cap - 1;
        *self.occupied.get_mut() = 0;
        *self.live.get_mut() = 0;
        old.par_iter().for_each(|s| {
            let k = s.key.load(Ordering::Relaxed);
            if k != EMPTY && k != TOMBSTONE {
                self.insert(k, s.value.load(Ordering::Relaxed))
                    .expect("rehash target sized for every live key");
            }
        });
    }

    /// Inserts or overwrites `key`. Safe to call concurrently with other
    /// inserts of distinct keys.
    pub fn insert(&self, key: u64, value: u64) -> Result<()> {
        debug_assert!(key < TOMBSTONE, "reserved key");
        let mut i = self.home(key);
        for _ in 0..self.slots.len() {
            let slot = &self.slots[i];
            let k = slot.key.load(Ordering::Acquire);
            if k == key {
                slot.value.store(value, Ordering::Release);
                return Ok(());
            }
            if k == EMPTY {
                match slot
                    .key
                    .compare_exchange(EMPTY, key, Ordering::AcqRel, Ordering::Acquire)
                {
                    Ok(_) => {
                        slot.value.store(value, Ordering::Release);
                        self.occupied.fetch_add(1, Ordering::Relaxed);
                        self.live.fetch_add(1, Ordering::Relaxed);
                        return Ok(());
                    }
                    Err(now) if now == key => {
                        slot.value.store(value, Ordering::Release);
                        return Ok(());
                    }
                    Err(_) => {}
                }
            }
            i = (i + 1) & self.mask;
        }
        Err(Error::DictionaryFull {
            capacity: self.slots.len(),
        })
    }

    /// Removes `key`, returning its value if it was present.
    pub fn remove(&self, key: u64) -> Option<u64> {
        let i = self.find(key)?;
        let slot = &self.slots[i];
        slot.key
            .compare_exchange(key, TOMBSTONE, Ordering::AcqRel, Ordering::Acquire)
            .ok()?;
        self.live.fetch_sub(1, Ordering::Relaxed);
        Some(slot.value.load(Ordering::Acquire))
    }

    pub fn get(&self, key: u64) -> Option<u64> {
        self.find(key)
            .map(|i| self.slots[i].value.load(Ordering::Acquire))
    }

    fn find(&self, key: u64) -> Option<usize> {
        let mut i = self.home(key);
        for _ in 0..self.slots.len() {
            match self.slots[i].key.load(Ordering::Acquire) {
                k if k == key => return Some(i),
                EMPTY => return None,
                _ => i = (i + 1) & self.mask,
            }
        }
        None
    }

    /// Inserts every pair, growing first if needed.
    pub fn batch_insert(&mut self, pairs: &[(u64, u64)]) -> Result<()> {
        if cfg!(debug_assertions) {
            check_distinct(pairs.iter().map(|p| p.0))?;
        }
        self.reserve(pairs.len());
        pairs
            .par_iter()
            .try_for_each(|&(k, v)| self.insert(k, v))
    }

    /// Removes every key; the result holds the removed values.
    pub fn batch_delete(&mut self, keys: &[u64]) -> Result<Vec<Option<u64>>> {
        if cfg!(debug_assertions) {
            check_distinct(keys.iter().copied())?;
        }
        let this = &*self;
        Ok(keys.par_iter().map(|&k| this.remove(k)).collect())
    }

    pub fn batch_lookup(&self, keys: &[u64]) -> Vec<Option<u64>> {
        keys.par_iter().map(|&k| self.get(k)).collect()
    }

    /// Snapshot of all live entries in slot order.
    pub fn entries(&self) -> Vec<(u64, u64)> {
        self.slots
            .iter()
            .filter_map(|s| {
                let k = s.key.load(Ordering::Acquire);
                (k != EMPTY && k != TOMBSTONE).then(|| (k, s.value.load(Ordering::Acquire)))
            })
            .collect()
    }
}

impl std::fmt::Debug for ConcurrentDict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ConcurrentDict")
            .field("len", &self.len())
            .field("capacity", &self.capacity())
            .finish()
    }
}

fn check_distinct(keys: impl Iterator<Item = u64>) -> Result<()> {
    let mut seen = std::collections::HashSet::new();
    for k in keys {
        if !seen.insert(k) {
            return Err(Error::DuplicateKey(k));
        }
    }
    Ok(())
}
