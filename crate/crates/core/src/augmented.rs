//! Value maintenance on augmented skip lists.
//!
//! Every node above the bottom level caches the fold of its children: the
//! level-below nodes from its own element rightwards up to (not including)
//! the next element that also reaches its level. Range folds then touch
//! `O(log n)` nodes.
//!
//! A batch of value updates runs in two passes. The claim pass walks up from
//! every updated element, lowering each ancestor's `update_level` marker;
//! a walker that finds a node already claimed stops, since the owner of that
//! node will handle everything above it. The repair pass then descends from
//! the topmost claimed nodes, recomputing children before parents, so every
//! dirty node is written exactly once.

use std::sync::atomic::Ordering;
use std::sync::Mutex;

use rayon::prelude::*;

use crate::aug::Augmentation;
use crate::error::{Error, Result};
use crate::skiplist::{ElementHandle, LevelNode, SkipList};

impl<A: Augmentation> SkipList<A> {
    /// The bottom-level value of `h`.
    pub fn value(&self, h: ElementHandle) -> A::Value {
        self.level(h.node(0)).val.load()
    }

    /// The cached fold stored at `n`.
    pub fn node_value(&self, n: LevelNode) -> A::Value {
        self.level(n).val.load()
    }

    #[inline]
    fn write_val(&self, n: LevelNode, v: A::Value) {
        self.level(n).val.store(v);
        if let Some(log) = &self.write_log {
            log.lock().unwrap().push(n);
        }
    }

    /// Starts recording every cached-value write. For instrumentation only.
    pub fn enable_write_log(&mut self) {
        self.write_log = Some(Mutex::new(Vec::new()));
    }

    /// Drains the recorded writes.
    pub fn take_write_log(&self) -> Vec<LevelNode> {
        self.write_log
            .as_ref()
            .map(|l| std::mem::take(&mut *l.lock().unwrap()))
            .unwrap_or_default()
    }

    #[inline]
    fn needs_update(&self, n: LevelNode) -> bool {
        self.elements[n.element.index()]
            .update_level
            .load(Ordering::Acquire)
            <= n.level
    }

    /// Fold over `v`'s children, in order.
    fn fold_children(&self, v: LevelNode) -> A::Value {
        let first = v.element.node(v.level - 1);
        let mut sum = self.node_value(first);
        let mut cur = self.right_of(first);
        while let Some(c) = cur {
            if self.has_up(c) {
                break;
            }
            sum = A::combine(sum, self.node_value(c));
            cur = self.right_of(c);
        }
        sum
    }

    /// Recomputes `v` and every marked descendant, children first, and
    /// clears their markers.
    pub fn update_top_down(&self, v: LevelNode) {
        let elem = &self.elements[v.element.index()];
        if v.level == 0 {
            elem.update_level.store(1, Ordering::Release);
            return;
        }
        let first = v.element.node(v.level - 1);
        let mut dirty: Vec<LevelNode> = Vec::new();
        let mut cur = Some(first);
        while let Some(c) = cur {
            if self.needs_update(c) {
                dirty.push(c);
            }
            cur = self.right_of(c).filter(|&r| !self.has_up(r));
        }
        match dirty.as_slice() {
            [] => {}
            [only] => self.update_top_down(*only),
            many => rayon::scope(|s| {
                for &c in many {
                    s.spawn(move |_| self.update_top_down(c));
                }
            }),
        }
        let sum = self.fold_children(v);
        self.write_val(v, sum);
        elem.update_level.store(v.level + 1, Ordering::Release);
    }

    /// Claims `start` and its ancestors. Returns the topmost node claimed if
    /// this walker reached the top of the list.
    fn claim_upward(&self, start: LevelNode) -> Option<LevelNode> {
        let mut cur = start;
        loop {
            let elem = &self.elements[cur.element.index()];
            // Claiming level i of an element claims every level above it too.
            let prev = elem.update_level.fetch_min(cur.level, Ordering::AcqRel);
            if prev <= cur.level || prev < elem.height {
                return None;
            }
            let top = cur.element.node(elem.height - 1);
            match self.search_left(top) {
                None => return Some(top),
                Some(p) => cur = p,
            }
        }
    }

    /// Sets bottom values and repairs every affected cached fold.
    ///
    /// Handles must be distinct; no other phase may be active.
    pub fn batch_update_values(&self, pairs: &[(ElementHandle, A::Value)]) -> Result<()> {
        if cfg!(debug_assertions) {
            check_distinct(pairs.iter().map(|p| p.0))?;
        }
        if !A::ENABLED {
            return Ok(());
        }
        let tops: Vec<LevelNode> = pairs
            .par_iter()
            .filter_map(|&(h, v)| {
                self.write_val(h.node(0), v);
                self.claim_upward(h.node(0))
            })
            .collect();
        tops.par_iter().for_each(|&t| self.update_top_down(t));
        Ok(())
    }

    /// Recomputes the ancestors of `elements` without changing any value.
    pub(crate) fn refresh(&self, elements: &[ElementHandle]) {
        if !A::ENABLED {
            return;
        }
        let tops: Vec<LevelNode> = elements
            .par_iter()
            .filter_map(|&h| self.claim_upward(h.node(0)))
            .collect();
        tops.par_iter().for_each(|&t| self.update_top_down(t));
    }

    /// One upward pass from each element, no claims. Only valid when no two
    /// of the elements share an ancestor, which holds right after splitting
    /// at each of them.
    pub(crate) fn repair_after_split(&self, elements: &[ElementHandle]) {
        if !A::ENABLED {
            return;
        }
        elements.par_iter().for_each(|&h| self.repair_upward(h));
    }

    fn repair_upward(&self, h: ElementHandle) {
        let mut cur = h.node(0);
        while let Some(p) = self.search_left(cur) {
            let sum = self.fold_children(p);
            self.write_val(p, sum);
            cur = p;
        }
    }

    /// Joins every pair, then repairs the folds above the left endpoints.
    pub fn batch_join_aug(&self, pairs: &[(ElementHandle, ElementHandle)]) -> Result<()> {
        self.batch_join(pairs)?;
        let lefts: Vec<ElementHandle> = pairs.iter().map(|p| p.0).collect();
        self.refresh(&lefts);
        Ok(())
    }

    /// Splits after every element, then repairs folds in one upward pass.
    /// Duplicate targets are allowed.
    pub fn batch_split_aug(&self, elements: &[ElementHandle]) {
        let mut targets = elements.to_vec();
        targets.par_sort_unstable();
        targets.dedup();
        self.batch_split(&targets);
        self.repair_after_split(&targets);
    }

    /// A single split followed by an immediate walk to the top repairing
    /// folds; the conventional per-operation scheme.
    pub fn split_with_sequential_update(&self, v: ElementHandle) {
        self.split(v);
        if A::ENABLED {
            self.repair_upward(v);
        }
    }

    /// Fold of the values from `x` through `y` inclusive, walking rightward.
    ///
    /// `y` must be reachable from `x` by following successors. On cyclic
    /// lists the range is the rightward arc from `x` to `y`. In debug builds
    /// elements of different lists are reported as [`Error::DifferentLists`].
    pub fn query_value(&self, x: ElementHandle, y: ElementHandle) -> Result<A::Value> {
        if cfg!(debug_assertions) && self.find_rep(x) != self.find_rep(y) {
            return Err(Error::DifferentLists);
        }
        let mut l = x.node(0);
        let mut r = y.node(0);
        let mut sum_l: Option<A::Value> = None;
        let mut sum_r = self.node_value(r);
        while l != r {
            while self.has_up(l) && self.has_up(r) {
                l = Self::up(l);
                r = Self::up(r);
            }
            if !self.has_up(l) {
                let v = self.node_value(l);
                sum_l = Some(sum_l.map_or(v, |s| A::combine(s, v)));
                l = self.right_of(l).ok_or_else(|| {
                    Error::InvalidArgument("range end does not follow range start".into())
                })?;
            } else {
                r = self.left_of(r).ok_or_else(|| {
                    Error::InvalidArgument("range end does not follow range start".into())
                })?;
                sum_r = A::combine(self.node_value(r), sum_r);
            }
        }
        Ok(sum_l.map_or(sum_r, |s| A::combine(s, sum_r)))
    }

    /// Independent range folds, in parallel.
    pub fn batch_query_value(
        &self,
        ranges: &[(ElementHandle, ElementHandle)],
    ) -> Vec<Result<A::Value>> {
        ranges
            .par_iter()
            .map(|&(x, y)| self.query_value(x, y))
            .collect()
    }

    /// Checks every cached fold against a recomputation from its children,
    /// and that no update marker is left set.
    pub fn check_values(&self) -> std::result::Result<(), String> {
        for h in self.handles() {
            let e = &self.elements[h.index()];
            if e.update_level.load(Ordering::Acquire) < e.height {
                return Err(format!("{h:?} left marked at level {}", e.update_level.load(Ordering::Relaxed)));
            }
            for lvl in 1..e.height {
                let n = h.node(lvl);
                let want = self.fold_children(n);
                let got = self.node_value(n);
                if want != got {
                    return Err(format!("{n:?} caches {got:?}, children fold to {want:?}"));
                }
            }
        }
        Ok(())
    }

    /// [`dump`](SkipList::dump) with each node's cached value.
    pub fn dump_values(&self) -> String {
        self.dump_with(|list, n| format!("={:?}", list.node_value(n)))
    }
}

fn check_distinct(handles: impl Iterator<Item = ElementHandle>) -> Result<()> {
    let mut seen = std::collections::HashSet::new();
    for h in handles {
        if !seen.insert(h) {
            return Err(Error::InvalidArgument(format!("duplicate handle {h:?} in batch")));
        }
    }
    Ok(())
}
