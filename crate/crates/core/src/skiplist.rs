//! Phase-concurrent skip lists with join, split and representative queries.
//!
//! A list here is a plain sequence (there are no ordered keys). Each element
//! owns a contiguous array of levels; level `i` of an element links to the
//! nearest element on either side that is tall enough to reach level `i`.
//! Lists may be cyclic: joining the last element of a list to its own first
//! element closes it, and splitting a cyclic list unrolls it so that the
//! split element becomes the last one.
//!
//! Joins, splits and reads form separate phases. Within one phase any number
//! of threads may run operations of that kind; see [`SkipList::join`].

use std::fmt::Write as _;
use std::sync::atomic::{fence, AtomicU32, Ordering};
use std::sync::Mutex;

use crossbeam_utils::atomic::AtomicCell;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Geometric};
use rayon::prelude::*;

use crate::aug::{Augmentation, NoAug};
use crate::error::{Error, Result};

pub(crate) const NIL: u32 = u32::MAX;

/// Hard cap on element heights.
pub const MAX_HEIGHT: u32 = 32;

/// Parameters for element heights.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SkipListConfig {
    /// Probability that a node has a direct parent.
    pub p: f64,
    pub max_height: u32,
    pub rng_seed: u64,
}

impl Default for SkipListConfig {
    fn default() -> Self {
        Self {
            p: 0.5,
            max_height: MAX_HEIGHT,
            rng_seed: 0x5eed,
        }
    }
}

impl SkipListConfig {
    pub fn with_seed(rng_seed: u64) -> Self {
        Self {
            rng_seed,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.p > 0.0 && self.p < 1.0) {
            return Err(Error::InvalidArgument(format!("p = {} not in (0, 1)", self.p)));
        }
        if self.max_height == 0 || self.max_height > MAX_HEIGHT {
            return Err(Error::InvalidArgument(format!(
                "max_height = {} not in 1..={MAX_HEIGHT}",
                self.max_height
            )));
        }
        Ok(())
    }
}

/// A stable reference to one element of a [`SkipList`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ElementHandle(pub(crate) u32);

impl ElementHandle {
    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub(crate) fn node(self, level: u32) -> LevelNode {
        LevelNode {
            element: self,
            level,
        }
    }
}

/// One level of one element. Level 0 is the bottom.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct LevelNode {
    pub element: ElementHandle,
    pub level: u32,
}

impl LevelNode {
    #[inline]
    fn at(elem: u32, level: u32) -> Self {
        Self {
            element: ElementHandle(elem),
            level,
        }
    }

    #[inline]
    pub(crate) fn elem(self) -> u32 {
        self.element.0
    }
}

pub(crate) struct Level<V> {
    pub(crate) left: AtomicU32,
    pub(crate) right: AtomicU32,
    pub(crate) val: AtomicCell<V>,
}

pub(crate) struct Element<V> {
    pub(crate) id: u64,
    pub(crate) height: u32,
    pub(crate) alive: bool,
    /// Lowest level that awaits recomputation; `>= height` means clean.
    pub(crate) update_level: AtomicU32,
    pub(crate) levels: Box<[Level<V>]>,
}

impl<V: Copy> Element<V> {
    fn new(id: u64, height: u32, value: V) -> Self {
        // Power-of-two level arrays keep the number of allocation sizes small.
        let cap = height.next_power_of_two() as usize;
        let levels = (0..cap)
            .map(|_| Level {
                left: AtomicU32::new(NIL),
                right: AtomicU32::new(NIL),
                val: AtomicCell::new(value),
            })
            .collect();
        Self {
            id,
            height,
            alive: true,
            update_level: AtomicU32::new(u32::MAX),
            levels,
        }
    }
}

/// A phase-concurrent skip list, optionally augmented.
///
/// ```
/// use skiptour::SkipList;
///
/// let mut list = SkipList::unaugmented(Default::default());
/// let a = list.create_element();
/// let b = list.create_element();
/// list.join(a, b);
/// assert_eq!(list.find_rep(a), list.find_rep(b));
/// list.split(a);
/// assert_ne!(list.find_rep(a), list.find_rep(b));
/// ```
pub struct SkipList<A: Augmentation = NoAug> {
    pub(crate) cfg: SkipListConfig,
    pub(crate) elements: Vec<Element<A::Value>>,
    free: Vec<u32>,
    next_id: u64,
    rng: ChaCha8Rng,
    heights: Geometric,
    initial: A::Value,
    pub(crate) write_log: Option<Mutex<Vec<LevelNode>>>,
}

impl SkipList<NoAug> {
    pub fn unaugmented(cfg: SkipListConfig) -> Self {
        Self::new(cfg, ())
    }
}

impl<A: Augmentation> SkipList<A> {
    /// Panics if `cfg` is invalid; see [`SkipList::try_new`].
    pub fn new(cfg: SkipListConfig, initial: A::Value) -> Self {
        Self::try_new(cfg, initial).expect("invalid skip list config")
    }

    /// `initial` is the value given to elements created without one.
    pub fn try_new(cfg: SkipListConfig, initial: A::Value) -> Result<Self> {
        cfg.validate()?;
        Ok(Self {
            cfg,
            elements: Vec::new(),
            free: Vec::new(),
            next_id: 0,
            rng: ChaCha8Rng::seed_from_u64(cfg.rng_seed),
            heights: Geometric::new(1.0 - cfg.p)
                .map_err(|e| Error::InvalidArgument(e.to_string()))?,
            initial,
            write_log: None,
        })
    }

    pub fn config(&self) -> &SkipListConfig {
        &self.cfg
    }

    /// Number of live elements.
    pub fn len(&self) -> usize {
        self.elements.len() - self.free.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Number of slots ever allocated; handles index below this.
    pub fn slots(&self) -> usize {
        self.elements.len()
    }

    /// Draws a height: `P(h = l) = (1-p) p^(l-1)`, truncated at `max_height`.
    pub fn draw_height(&mut self) -> u32 {
        let extra = self.heights.sample(&mut self.rng);
        (extra.min(u64::from(self.cfg.max_height - 1)) as u32) + 1
    }

    /// Creates an isolated element with a random height.
    pub fn create_element(&mut self) -> ElementHandle {
        let v = self.initial;
        self.create_element_with_value(v)
    }

    pub fn create_element_with_value(&mut self, value: A::Value) -> ElementHandle {
        let h = self.draw_height();
        self.create_element_with_height(h, value)
    }

    /// Creates an element of exactly `height` levels (clamped to the cap).
    /// Tests use this to pin down the structure.
    pub fn create_element_with_height(&mut self, height: u32, value: A::Value) -> ElementHandle {
        let height = height.clamp(1, self.cfg.max_height);
        let id = self.next_id;
        self.next_id += 1;
        let element = Element::new(id, height, value);
        match self.free.pop() {
            Some(slot) => {
                self.elements[slot as usize] = element;
                ElementHandle(slot)
            }
            None => {
                let slot = u32::try_from(self.elements.len())
                    .ok()
                    .filter(|&s| s != NIL)
                    .expect("skip list slot space exhausted");
                self.elements.push(element);
                ElementHandle(slot)
            }
        }
    }

    /// Creates one element per height, in parallel. Ids follow input order.
    pub fn create_elements_with_heights(
        &mut self,
        heights: &[u32],
        value: A::Value,
    ) -> Vec<ElementHandle> {
        let max = self.cfg.max_height;
        let base = self.next_id;
        let fresh: Vec<Element<A::Value>> = heights
            .par_iter()
            .enumerate()
            .map(|(i, &h)| Element::new(base + i as u64, h.clamp(1, max), value))
            .collect();
        self.next_id += heights.len() as u64;
        let mut out = Vec::with_capacity(fresh.len());
        for element in fresh {
            let slot = match self.free.pop() {
                Some(slot) => {
                    self.elements[slot as usize] = element;
                    slot
                }
                None => {
                    self.elements.push(element);
                    (self.elements.len() - 1) as u32
                }
            };
            out.push(ElementHandle(slot));
        }
        out
    }

    /// Creates `count` elements with random heights.
    pub fn create_elements(&mut self, count: usize, value: A::Value) -> Vec<ElementHandle> {
        let heights: Vec<u32> = (0..count).map(|_| self.draw_height()).collect();
        self.create_elements_with_heights(&heights, value)
    }

    /// Releases elements. Each must already be an isolated singleton.
    pub fn free_elements(&mut self, handles: &[ElementHandle]) {
        for &h in handles {
            let e = &mut self.elements[h.index()];
            debug_assert!(e.alive, "double free of slot {}", h.0);
            debug_assert!(
                e.levels[..e.height as usize].iter().all(|l| {
                    let (lf, rt) = (l.left.load(Ordering::Relaxed), l.right.load(Ordering::Relaxed));
                    (lf == NIL || lf == h.0) && (rt == NIL || rt == h.0)
                }),
                "freeing a linked element"
            );
            e.alive = false;
            self.free.push(h.0);
        }
    }

    pub fn is_alive(&self, h: ElementHandle) -> bool {
        self.elements.get(h.index()).is_some_and(|e| e.alive)
    }

    /// The stable id of an element.
    pub fn id(&self, h: ElementHandle) -> u64 {
        self.elements[h.index()].id
    }

    pub fn height(&self, h: ElementHandle) -> u32 {
        self.elements[h.index()].height
    }

    /// Live handles in slot order.
    pub fn handles(&self) -> impl Iterator<Item = ElementHandle> + '_ {
        self.elements
            .iter()
            .enumerate()
            .filter(|(_, e)| e.alive)
            .map(|(i, _)| ElementHandle(i as u32))
    }

    // --- link access ----------------------------------------------------

    #[inline]
    pub(crate) fn level(&self, n: LevelNode) -> &Level<A::Value> {
        &self.elements[n.elem() as usize].levels[n.level as usize]
    }

    #[inline]
    pub(crate) fn height_of(&self, elem: u32) -> u32 {
        self.elements[elem as usize].height
    }

    #[inline]
    pub(crate) fn has_up(&self, n: LevelNode) -> bool {
        n.level + 1 < self.height_of(n.elem())
    }

    #[inline]
    pub(crate) fn up(n: LevelNode) -> LevelNode {
        LevelNode::at(n.elem(), n.level + 1)
    }

    /// Successor at the same level.
    #[inline]
    pub fn right_of(&self, n: LevelNode) -> Option<LevelNode> {
        let r = self.level(n).right.load(Ordering::Acquire);
        (r != NIL).then(|| LevelNode::at(r, n.level))
    }

    /// Predecessor at the same level.
    #[inline]
    pub fn left_of(&self, n: LevelNode) -> Option<LevelNode> {
        let l = self.level(n).left.load(Ordering::Acquire);
        (l != NIL).then(|| LevelNode::at(l, n.level))
    }

    /// Bottom-level successor.
    pub fn next(&self, h: ElementHandle) -> Option<ElementHandle> {
        self.right_of(h.node(0)).map(|n| n.element)
    }

    /// Bottom-level predecessor.
    pub fn prev(&self, h: ElementHandle) -> Option<ElementHandle> {
        self.left_of(h.node(0)).map(|n| n.element)
    }

    // --- searches ---------------------------------------------------------

    /// The left parent of `v`: the next-level node of the nearest element at
    /// or before `v` that reaches that level. `None` at the start of an
    /// acyclic list, or after a full turn of a cyclic one.
    pub fn search_left(&self, v: LevelNode) -> Option<LevelNode> {
        let mut cur = v;
        while !self.has_up(cur) {
            cur = self.left_of(cur)?;
            if cur == v {
                return None;
            }
        }
        Some(Self::up(cur))
    }

    /// Mirror of [`search_left`](Self::search_left).
    pub fn search_right(&self, v: LevelNode) -> Option<LevelNode> {
        let mut cur = v;
        while !self.has_up(cur) {
            cur = self.right_of(cur)?;
            if cur == v {
                return None;
            }
        }
        Some(Self::up(cur))
    }

    // --- join / split -----------------------------------------------------

    /// Concatenates the list ending at `left` with the list starting at
    /// `right`. `join(x, x)` on a singleton closes it into a cycle, and more
    /// generally joining a list's last element to its first closes the list.
    ///
    /// May run concurrently with other joins as long as no two concurrent
    /// joins share a left endpoint or a right endpoint.
    pub fn join(&self, left: ElementHandle, right: ElementHandle) {
        self.join_nodes(left.node(0), right.node(0));
    }

    pub(crate) fn join_nodes(&self, mut l: LevelNode, mut r: LevelNode) {
        loop {
            // Only the winner of the right link continues upward.
            if self
                .level(l)
                .right
                .compare_exchange(NIL, r.elem(), Ordering::AcqRel, Ordering::Acquire)
                .is_err()
            {
                return;
            }
            self.level(r).left.store(l.elem(), Ordering::Release);
            // The parent searches below must not be satisfied before the left
            // write is visible; otherwise two joins can each miss the other's
            // link and neither adds the parent link.
            fence(Ordering::SeqCst);
            match (self.search_left(l), self.search_right(r)) {
                (Some(pl), Some(pr)) => {
                    l = pl;
                    r = pr;
                }
                _ => return,
            }
        }
    }

    /// Severs the list immediately after `v`. A no-op if `v` is last.
    ///
    /// May run concurrently with other splits; duplicate targets are fine.
    pub fn split(&self, v: ElementHandle) {
        self.split_node(v.node(0));
    }

    pub(crate) fn split_node(&self, mut v: LevelNode) {
        loop {
            let cell = &self.level(v).right;
            let ngh = cell.load(Ordering::Acquire);
            if ngh == NIL
                || cell
                    .compare_exchange(ngh, NIL, Ordering::AcqRel, Ordering::Acquire)
                    .is_err()
            {
                return;
            }
            self.level(LevelNode::at(ngh, v.level))
                .left
                .store(NIL, Ordering::Release);
            fence(Ordering::SeqCst);
            match self.search_left(v) {
                Some(p) => v = p,
                None => return,
            }
        }
    }

    /// Joins every `(left, right)` pair concurrently.
    ///
    /// Lefts must be pairwise distinct, as must rights. The result equals
    /// applying the joins one at a time in any order.
    pub fn batch_join(&self, pairs: &[(ElementHandle, ElementHandle)]) -> Result<()> {
        if cfg!(debug_assertions) {
            check_endpoints(pairs)?;
        }
        pairs.par_iter().for_each(|&(l, r)| self.join(l, r));
        Ok(())
    }

    /// Splits after every element concurrently.
    pub fn batch_split(&self, elements: &[ElementHandle]) {
        elements.par_iter().for_each(|&v| self.split(v));
    }

    // --- representatives --------------------------------------------------

    /// The top-level node identifying `v`'s list: the leftmost top node of
    /// an acyclic list, or the top node with the lowest id on a cycle.
    /// Requires a quiescent list.
    pub fn find_rep_node(&self, v: ElementHandle) -> LevelNode {
        let mut v = v.node(0);
        while let Some(p) = self.search_right(v) {
            v = p;
        }
        while let Some(p) = self.search_left(v) {
            v = p;
        }
        let start = v;
        let mut best = v;
        loop {
            match self.left_of(v) {
                None => return v,
                Some(l) => v = l,
            }
            if v == start {
                return best;
            }
            if self.elements[v.elem() as usize].id < self.elements[best.elem() as usize].id {
                best = v;
            }
        }
    }

    /// Representative id of `v`'s list. Equal ids mean the same list.
    pub fn find_rep(&self, v: ElementHandle) -> u64 {
        self.elements[self.find_rep_node(v).elem() as usize].id
    }

    pub fn batch_find_rep(&self, elements: &[ElementHandle]) -> Vec<u64> {
        elements.par_iter().map(|&v| self.find_rep(v)).collect()
    }

    /// Whether `v`'s list is closed into a cycle.
    pub fn is_cyclic(&self, v: ElementHandle) -> bool {
        let top = self.find_rep_node(v);
        self.left_of(top).is_some()
    }

    /// First element of an acyclic list, `None` for a cyclic one.
    pub fn first(&self, v: ElementHandle) -> Option<ElementHandle> {
        let mut n = self.find_rep_node(v);
        if self.left_of(n).is_some() {
            return None;
        }
        while n.level > 0 {
            n = LevelNode::at(n.elem(), n.level - 1);
            while let Some(l) = self.left_of(n) {
                n = l;
            }
        }
        Some(n.element)
    }

    /// Last element of an acyclic list, `None` for a cyclic one.
    pub fn last(&self, v: ElementHandle) -> Option<ElementHandle> {
        let mut n = self.find_rep_node(v);
        if self.left_of(n).is_some() {
            return None;
        }
        while let Some(r) = self.right_of(n) {
            n = r;
        }
        while n.level > 0 {
            n = LevelNode::at(n.elem(), n.level - 1);
            while let Some(r) = self.right_of(n) {
                n = r;
            }
        }
        Some(n.element)
    }

    /// Bottom-level walk of `v`'s list. Acyclic lists are listed from their
    /// first element; cycles start at `v`.
    pub fn sequence(&self, v: ElementHandle) -> Vec<ElementHandle> {
        let start = self.first(v).unwrap_or(v);
        let mut out = vec![start];
        let mut cur = start;
        while let Some(n) = self.next(cur) {
            if n == start {
                break;
            }
            out.push(n);
            cur = n;
        }
        out
    }

    /// Steps (horizontal plus vertical) on the walk from `v`'s bottom node to
    /// the top of its list by repeated left-parent searches.
    pub fn climb_cost(&self, v: ElementHandle) -> usize {
        let mut steps = 0;
        let mut cur = v.node(0);
        loop {
            let origin = cur;
            let mut probe = cur;
            while !self.has_up(probe) {
                match self.left_of(probe) {
                    Some(l) if l != origin => {
                        probe = l;
                        steps += 1;
                    }
                    _ => return steps,
                }
            }
            cur = Self::up(probe);
            steps += 1;
        }
    }

    // --- verification -----------------------------------------------------

    /// Checks link symmetry and level coherence over every live element.
    /// Only meaningful at quiescence.
    pub fn check_structure(&self) -> std::result::Result<(), String> {
        let bound = self.elements.len() + 1;
        for (ei, e) in self.elements.iter().enumerate().filter(|(_, e)| e.alive) {
            let ei = ei as u32;
            for lvl in 0..e.height {
                let n = LevelNode::at(ei, lvl);
                if let Some(r) = self.right_of(n) {
                    let re = &self.elements[r.elem() as usize];
                    if !re.alive || re.height <= lvl {
                        return Err(format!("{n:?} links right to invalid {r:?}"));
                    }
                    if self.left_of(r) != Some(n) {
                        return Err(format!("right({n:?}) = {r:?} but left is {:?}", self.left_of(r)));
                    }
                }
                if let Some(l) = self.left_of(n) {
                    let le = &self.elements[l.elem() as usize];
                    if !le.alive || le.height <= lvl {
                        return Err(format!("{n:?} links left to invalid {l:?}"));
                    }
                    if self.right_of(l) != Some(n) {
                        return Err(format!("left({n:?}) = {l:?} but right is {:?}", self.right_of(l)));
                    }
                }
                if lvl == 0 {
                    continue;
                }
                let mut cur = self.right_of(LevelNode::at(ei, lvl - 1));
                let mut steps = 0;
                while let Some(c) = cur {
                    if self.height_of(c.elem()) > lvl {
                        break;
                    }
                    steps += 1;
                    if steps > bound {
                        return Err(format!("level {} walk from {ei} does not end", lvl - 1));
                    }
                    cur = self.right_of(c);
                }
                let expect = cur.map(|c| LevelNode::at(c.elem(), lvl));
                if self.right_of(n) != expect {
                    return Err(format!(
                        "{n:?} has right {:?} but the level below reaches {expect:?}",
                        self.right_of(n)
                    ));
                }
            }
        }
        Ok(())
    }

    /// Canonical text dump: for each level, every path and cycle as its
    /// element ids in order. Paths start at their first element, cycles at
    /// their lowest id; components are sorted by that first id.
    pub fn dump(&self) -> String {
        self.dump_with(|_, _| String::new())
    }

    pub(crate) fn dump_with(&self, mut label: impl FnMut(&Self, LevelNode) -> String) -> String {
        let top = self
            .elements
            .iter()
            .filter(|e| e.alive)
            .map(|e| e.height)
            .max()
            .unwrap_or(0);
        let mut out = String::new();
        for lvl in 0..top {
            let mut comps: Vec<(u64, bool, Vec<LevelNode>)> = Vec::new();
            let mut seen = vec![false; self.elements.len()];
            let nodes: Vec<u32> = (0..self.elements.len() as u32)
                .filter(|&i| {
                    let e = &self.elements[i as usize];
                    e.alive && e.height > lvl
                })
                .collect();
            for &i in &nodes {
                let n = LevelNode::at(i, lvl);
                if self.left_of(n).is_none() {
                    let mut comp = Vec::new();
                    let mut cur = Some(n);
                    while let Some(c) = cur {
                        if std::mem::replace(&mut seen[c.elem() as usize], true) {
                            break;
                        }
                        comp.push(c);
                        cur = self.right_of(c);
                    }
                    comps.push((self.elements[i as usize].id, false, comp));
                }
            }
            for &i in &nodes {
                if seen[i as usize] {
                    continue;
                }
                let mut ring = Vec::new();
                let mut cur = Some(LevelNode::at(i, lvl));
                while let Some(c) = cur {
                    if std::mem::replace(&mut seen[c.elem() as usize], true) {
                        break;
                    }
                    ring.push(c);
                    cur = self.right_of(c);
                }
                let pos = (0..ring.len())
                    .min_by_key(|&j| self.elements[ring[j].elem() as usize].id)
                    .unwrap_or(0);
                ring.rotate_left(pos);
                let id = self.elements[ring[0].elem() as usize].id;
                comps.push((id, true, ring));
            }
            comps.sort_by_key(|c| c.0);
            let _ = writeln!(out, "level {lvl}");
            for (_, cyclic, comp) in comps {
                out.push_str(if cyclic { "  cycle:" } else { "  path:" });
                for n in comp {
                    let _ = write!(out, " {}{}", self.elements[n.elem() as usize].id, label(self, n));
                }
                out.push('\n');
            }
        }
        out
    }
}

fn check_endpoints(pairs: &[(ElementHandle, ElementHandle)]) -> Result<()> {
    use std::collections::HashMap;
    let mut lefts = HashMap::with_capacity(pairs.len());
    let mut rights = HashMap::with_capacity(pairs.len());
    for (i, &(l, r)) in pairs.iter().enumerate() {
        if let Some(first) = lefts.insert(l, i) {
            return Err(Error::DuplicateEndpoint { first, second: i });
        }
        if let Some(first) = rights.insert(r, i) {
            return Err(Error::DuplicateEndpoint { first, second: i });
        }
    }
    Ok(())
}
