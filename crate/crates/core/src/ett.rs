//! Euler tour forests.
//!
//! Each tree is stored as one cyclic skip list holding a loop element `(v, v)`
//! per vertex and two directed elements `(u, v)`, `(v, u)` per edge. After
//! `(u, v)` the tour walks `v`'s side of the edge and comes back with
//! `(v, u)`, so a subtree is a contiguous arc of the tour.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::sync::atomic::{AtomicU32, Ordering};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::aug::{ForestAugmentation, NoAug};
use crate::error::{Error, Result};
use crate::oracles::UnionFind;
use crate::runtime::{group_by_key, list_tail_find, mix64, ConcurrentDict, KeyedItem};
use crate::skiplist::{ElementHandle, SkipList, SkipListConfig, NIL};

const UNMARKED: u32 = u32::MAX;

/// How [`EulerTourForest::batch_cut`] finds the elements to rejoin.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CutStrategy {
    /// Cut a random half of the batch, walking around marked incidences
    /// sequentially, then repeat on the rest.
    #[default]
    Recursive,
    /// Cut the whole batch at once, finding rejoin targets by list
    /// tail-finding.
    TailFind,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct ForestConfig {
    pub list: SkipListConfig,
    pub cut_strategy: CutStrategy,
}

impl ForestConfig {
    pub fn with_seed(seed: u64) -> Self {
        Self {
            list: SkipListConfig::with_seed(seed),
            ..Self::default()
        }
    }
}

#[inline]
fn edge_key(u: u32, v: u32) -> u64 {
    (u64::from(u.min(v)) << 32) | u64::from(u.max(v))
}

/// A dynamic forest on vertices `1..=n`.
///
/// Vertex and edge values are folded with `A`; the combine must be
/// commutative for subtree queries to be meaningful.
///
/// ```
/// use skiptour::EulerTourForest;
///
/// let mut f = EulerTourForest::new(4).unwrap();
/// f.batch_link(&[(1, 2), (2, 3)]).unwrap();
/// assert_eq!(f.batch_connected(&[(1, 3), (1, 4)]).unwrap(), vec![true, false]);
/// f.batch_cut(&[(2, 3)]).unwrap();
/// assert_eq!(f.batch_connected(&[(1, 3)]).unwrap(), vec![false]);
/// ```
pub struct EulerTourForest<A: ForestAugmentation = NoAug> {
    n: usize,
    cfg: ForestConfig,
    list: SkipList<A>,
    verts: Vec<ElementHandle>,
    /// Canonical key of `{u, v}` to the slot of the `(min, max)` element.
    edges: ConcurrentDict,
    // per-slot side data
    twin: Vec<u32>,
    labels: Vec<(u32, u32)>,
    mark: Vec<AtomicU32>,
    successors: Vec<AtomicU32>,
    rng: ChaCha8Rng,
    edge_default: A::Value,
}

impl EulerTourForest<NoAug> {
    /// An unaugmented forest with the default configuration.
    pub fn new(n: usize) -> Result<Self> {
        Self::initialize(n, ForestConfig::default(), (), ())
    }
}

impl<A: ForestAugmentation> EulerTourForest<A> {
    /// `n` isolated vertices, each holding `vertex_value`. Edges linked
    /// without an explicit value get `edge_value`.
    pub fn initialize(
        n: usize,
        cfg: ForestConfig,
        vertex_value: A::Value,
        edge_value: A::Value,
    ) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("a forest needs at least one vertex".into()));
        }
        if n >= NIL as usize {
            return Err(Error::InvalidArgument(format!("{n} vertices is too many")));
        }
        let mut list = SkipList::try_new(cfg.list, vertex_value)?;
        let verts = list.create_elements(n, vertex_value);
        let loops: Vec<_> = verts.iter().map(|&h| (h, h)).collect();
        list.batch_join(&loops)?;
        let mut forest = Self {
            n,
            cfg,
            list,
            verts,
            edges: ConcurrentDict::with_capacity(n, mix64(cfg.list.rng_seed ^ 0xed6e)),
            twin: Vec::new(),
            labels: Vec::new(),
            mark: Vec::new(),
            successors: (0..=n).map(|_| AtomicU32::new(NIL)).collect(),
            rng: ChaCha8Rng::seed_from_u64(mix64(cfg.list.rng_seed)),
            edge_default: edge_value,
        };
        forest.grow_side_arrays();
        for v in 1..=n as u32 {
            let s = forest.verts[v as usize - 1].index();
            forest.labels[s] = (v, v);
            forest.twin[s] = NIL;
        }
        Ok(forest)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn config(&self) -> &ForestConfig {
        &self.cfg
    }

    pub fn set_cut_strategy(&mut self, strategy: CutStrategy) {
        self.cfg.cut_strategy = strategy;
    }

    /// Number of edges.
    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// The underlying list, for inspection.
    pub fn list(&self) -> &SkipList<A> {
        &self.list
    }

    fn grow_side_arrays(&mut self) {
        let slots = self.list.slots();
        self.twin.resize(slots, NIL);
        self.labels.resize(slots, (0, 0));
        self.mark.resize_with(slots, || AtomicU32::new(UNMARKED));
    }

    fn check_vertex(&self, v: u32) -> Result<()> {
        if v == 0 || v as usize > self.n {
            return Err(Error::VertexOutOfRange { vertex: v, n: self.n });
        }
        Ok(())
    }

    #[inline]
    fn vert(&self, v: u32) -> ElementHandle {
        self.verts[v as usize - 1]
    }

    #[inline]
    fn twin_of(&self, h: ElementHandle) -> ElementHandle {
        ElementHandle(self.twin[h.index()])
    }

    #[inline]
    fn is_marked(&self, h: ElementHandle) -> bool {
        self.mark[h.index()].load(Ordering::Acquire) != UNMARKED
    }

    #[inline]
    fn succ(&self, h: ElementHandle) -> ElementHandle {
        self.list.next(h).expect("tours are cyclic")
    }

    /// The loop element `(v, v)`.
    pub fn vertex_element(&self, v: u32) -> Result<ElementHandle> {
        self.check_vertex(v)?;
        Ok(self.vert(v))
    }

    /// The element of directed edge `(u, v)`, if `{u, v}` is an edge.
    pub fn edge_element(&self, u: u32, v: u32) -> Option<ElementHandle> {
        if u == v {
            return None;
        }
        let slot = self.edges.get(edge_key(u, v))? as u32;
        let canon = ElementHandle(slot);
        Some(if u < v { canon } else { self.twin_of(canon) })
    }

    /// The `(u, v)` label of an element; loops are `(v, v)`.
    pub fn label(&self, h: ElementHandle) -> (u32, u32) {
        self.labels[h.index()]
    }

    pub fn has_edge(&self, u: u32, v: u32) -> bool {
        self.edge_element(u, v).is_some()
    }

    /// Every edge as `(min, max)`, sorted.
    pub fn edges(&self) -> Vec<(u32, u32)> {
        let mut out: Vec<(u32, u32)> = self
            .edges
            .entries()
            .into_iter()
            .map(|(k, _)| ((k >> 32) as u32, k as u32))
            .collect();
        out.sort_unstable();
        out
    }

    // --- link ---------------------------------------------------------------

    /// Adds every edge, each carrying the default edge value.
    ///
    /// The edges must keep the graph a forest. In debug builds a violation is
    /// reported as [`Error::WouldCreateCycle`] before anything changes; in
    /// release builds it corrupts the forest.
    pub fn batch_link(&mut self, edges: &[(u32, u32)]) -> Result<()> {
        let d = self.edge_default;
        let with: Vec<_> = edges.iter().map(|&(u, v)| (u, v, d)).collect();
        self.batch_link_with_values(&with)
    }

    pub fn batch_link_with_values(&mut self, edges: &[(u32, u32, A::Value)]) -> Result<()> {
        for &(u, v, _) in edges {
            self.check_vertex(u)?;
            self.check_vertex(v)?;
            if u == v {
                return Err(Error::WouldCreateCycle(u, v));
            }
        }
        if cfg!(debug_assertions) {
            self.check_acyclic(edges)?;
        }
        if edges.is_empty() {
            return Ok(());
        }

        // New elements: the (min, max) direction carries the edge value.
        let k = edges.len();
        let identity = A::identity();
        let heights: Vec<u32> = (0..2 * k).map(|_| self.list.draw_height()).collect();
        let fresh = self.list.create_elements_with_heights(&heights, identity);
        self.grow_side_arrays();
        let mut valued = Vec::with_capacity(k);
        let mut pairs = Vec::with_capacity(k);
        for (i, &(u, v, val)) in edges.iter().enumerate() {
            let (uv, vu) = (fresh[2 * i], fresh[2 * i + 1]);
            self.twin[uv.index()] = vu.0;
            self.twin[vu.index()] = uv.0;
            self.labels[uv.index()] = (u, v);
            self.labels[vu.index()] = (v, u);
            let canon = if u < v { uv } else { vu };
            valued.push((canon, val));
            pairs.push((edge_key(u, v), u64::from(canon.0)));
        }
        self.edges.batch_insert(&pairs)?;
        if A::ENABLED {
            valued.par_iter().for_each(|&(h, val)| {
                // isolated elements: every level covers only the element
                for lvl in 0..self.list.height(h) {
                    self.list.level(h.node(lvl)).val.store(val);
                }
            });
        }

        // Open each touched tour right after the endpoint's loop. Several
        // workers may handle the same vertex; they record the same successor
        // and the split is idempotent.
        let this = &*self;
        edges.par_iter().for_each(|&(u, v, _)| {
            for w in [u, v] {
                let node = this.vert(w);
                if let Some(s) = this.list.next(node) {
                    this.successors[w as usize].store(s.0, Ordering::Relaxed);
                    this.list.split(node);
                }
            }
        });

        // Group the directed edges by tail and splice each group in after
        // the tail's loop.
        let items: Vec<KeyedItem<(u32, ElementHandle, ElementHandle)>> = (0..k)
            .into_par_iter()
            .flat_map_iter(|i| {
                let (u, v, _) = edges[i];
                let (uv, vu) = (fresh[2 * i], fresh[2 * i + 1]);
                [
                    KeyedItem::new(u64::from(u), (u, uv, vu)),
                    KeyedItem::new(u64::from(v), (v, vu, uv)),
                ]
            })
            .collect();
        let sorted = group_by_key(items);
        let m = sorted.len();
        let joins: Vec<(ElementHandle, ElementHandle)> = (0..m)
            .into_par_iter()
            .flat_map_iter(|i| {
                let (u, out_edge, back_edge) = sorted[i].payload;
                let mut js = Vec::with_capacity(2);
                if i == 0 || sorted[i - 1].payload.0 != u {
                    js.push((this.vert(u), out_edge));
                }
                if i + 1 == m || sorted[i + 1].payload.0 != u {
                    let s = this.successors[u as usize].load(Ordering::Relaxed);
                    js.push((back_edge, ElementHandle(s)));
                } else {
                    js.push((back_edge, sorted[i + 1].payload.1));
                }
                js
            })
            .collect();
        self.list.batch_join_aug(&joins)
    }

    fn check_acyclic(&self, edges: &[(u32, u32, A::Value)]) -> Result<()> {
        let mut ends: Vec<ElementHandle> =
            edges.iter().flat_map(|&(u, v, _)| [self.vert(u), self.vert(v)]).collect();
        ends.sort_unstable();
        ends.dedup();
        let reps = self.list.batch_find_rep(&ends);
        let mut index: HashMap<u64, usize> = HashMap::new();
        for r in reps {
            let next = index.len();
            index.entry(r).or_insert(next);
        }
        let mut uf = UnionFind::new(index.len());
        for &(u, v, _) in edges {
            let a = index[&self.list.find_rep(self.vert(u))];
            let b = index[&self.list.find_rep(self.vert(v))];
            if !uf.union(a, b) {
                return Err(Error::WouldCreateCycle(u, v));
            }
        }
        Ok(())
    }

    // --- cut ----------------------------------------------------------------

    /// Removes every edge. All must exist and be distinct; otherwise nothing
    /// changes and the offending batch positions are reported.
    pub fn batch_cut(&mut self, edges: &[(u32, u32)]) -> Result<()> {
        let canon = self.lookup_batch(edges)?;
        if canon.is_empty() {
            return Ok(());
        }
        let keys: Vec<u64> = edges.iter().map(|&(u, v)| edge_key(u, v)).collect();
        self.edges.batch_delete(&keys)?;
        match self.cfg.cut_strategy {
            CutStrategy::TailFind => self.cut_round(&canon, CutStrategy::TailFind)?,
            CutStrategy::Recursive => {
                let mut rest = canon;
                while !rest.is_empty() {
                    let (mut now, ignored): (Vec<_>, Vec<_>) =
                        rest.into_iter().partition(|_| self.rng.random_bool(0.5));
                    rest = ignored;
                    if now.is_empty() {
                        now.push(rest.pop().expect("nonempty"));
                    }
                    self.cut_round(&now, CutStrategy::Recursive)?;
                }
            }
        }
        Ok(())
    }

    /// Canonical elements of `edges`, or every position that is missing or
    /// repeated.
    fn lookup_batch(&self, edges: &[(u32, u32)]) -> Result<Vec<ElementHandle>> {
        for &(u, v) in edges {
            self.check_vertex(u)?;
            self.check_vertex(v)?;
        }
        let found: Vec<Option<ElementHandle>> = edges
            .par_iter()
            .map(|&(u, v)| self.edge_element(u.min(v), u.max(v)))
            .collect();
        let mut bad: Vec<usize> = (0..edges.len()).filter(|&i| found[i].is_none()).collect();
        let mut first_seen: HashMap<u64, usize> = HashMap::with_capacity(edges.len());
        for (i, &(u, v)) in edges.iter().enumerate() {
            if found[i].is_some() && first_seen.insert(edge_key(u, v), i).is_some() {
                bad.push(i);
            }
        }
        if !bad.is_empty() {
            bad.sort_unstable();
            return Err(Error::MissingEdges { indices: bad });
        }
        Ok(found.into_iter().map(Option::unwrap).collect())
    }

    /// Cuts out the given canonical elements and their twins, already gone
    /// from the dictionary.
    fn cut_round(&mut self, canon: &[ElementHandle], how: CutStrategy) -> Result<()> {
        let directed: Vec<ElementHandle> =
            canon.iter().flat_map(|&c| [c, self.twin_of(c)]).collect();
        let this = &*self;
        directed
            .par_iter()
            .enumerate()
            .for_each(|(i, &e)| this.mark[e.index()].store(i as u32, Ordering::Release));
        let join_lefts: Vec<ElementHandle> = directed
            .par_iter()
            .map(|&e| this.list.prev(e).expect("tours are cyclic"))
            .collect();
        let join_rights = match how {
            CutStrategy::TailFind => this.next_unmarked_tail_find(&directed)?,
            CutStrategy::Recursive => directed
                .par_iter()
                .map(|&e| this.next_unmarked_walk(e, directed.len()))
                .collect(),
        };
        directed.par_iter().for_each(|&e| {
            this.list.split(e);
            if let Some(p) = this.list.prev(e) {
                this.list.split(p);
            }
        });
        let joins: Vec<(ElementHandle, ElementHandle)> = (0..directed.len())
            .into_par_iter()
            .filter(|&i| !this.is_marked(join_lefts[i]))
            .map(|i| (join_lefts[i], join_rights[i]))
            .collect();
        this.list.batch_join_aug(&joins)?;
        directed
            .par_iter()
            .for_each(|&e| this.mark[e.index()].store(UNMARKED, Ordering::Release));
        self.list.free_elements(&directed);
        Ok(())
    }

    /// Steps `twin -> successor` from `z` until an unmarked element.
    fn next_unmarked_walk(&self, z: ElementHandle, bound: usize) -> ElementHandle {
        let mut next = self.succ(self.twin_of(z));
        let mut steps = 0;
        while self.is_marked(next) {
            steps += 1;
            debug_assert!(steps <= bound, "incidence walk from {z:?} does not end");
            next = self.succ(self.twin_of(next));
        }
        next
    }

    /// `result[i]` is the first unmarked element reached from `marked[i]` by
    /// stepping `twin -> successor`. Requires `mark[marked[i]] == i`.
    fn next_unmarked_tail_find(&self, marked: &[ElementHandle]) -> Result<Vec<ElementHandle>> {
        let chain: Vec<Option<usize>> = marked
            .par_iter()
            .map(|&z| {
                let next = self.succ(self.twin_of(z));
                let m = self.mark[next.index()].load(Ordering::Acquire);
                (m != UNMARKED).then_some(m as usize)
            })
            .collect();
        let tails = list_tail_find(&chain)?;
        Ok(tails
            .par_iter()
            .map(|&t| self.succ(self.twin_of(marked[t])))
            .collect())
    }

    /// For each edge element, the first element reached by stepping
    /// `twin -> successor` that is not in `elements`. These are where the
    /// tour resumes once every listed element is cut out.
    pub fn get_next_unmarked(&self, elements: &[ElementHandle]) -> Result<Vec<ElementHandle>> {
        for &e in elements {
            if !self.list.is_alive(e) || self.twin[e.index()] == NIL {
                return Err(Error::InvalidArgument(format!("{e:?} is not an edge element")));
            }
        }
        let set = |i: usize, m: u32| self.mark[elements[i].index()].store(m, Ordering::Release);
        for i in 0..elements.len() {
            if self.is_marked(elements[i]) {
                (0..i).for_each(|j| set(j, UNMARKED));
                return Err(Error::InvalidArgument(format!("{:?} repeated", elements[i])));
            }
            set(i, i as u32);
        }
        let out = self.next_unmarked_tail_find(elements);
        (0..elements.len()).for_each(|i| set(i, UNMARKED));
        out
    }

    // --- queries ------------------------------------------------------------

    pub fn batch_connected(&self, pairs: &[(u32, u32)]) -> Result<Vec<bool>> {
        for &(u, v) in pairs {
            self.check_vertex(u)?;
            self.check_vertex(v)?;
        }
        Ok(pairs
            .par_iter()
            .map(|&(u, v)| u == v || self.list.find_rep(self.vert(u)) == self.list.find_rep(self.vert(v)))
            .collect())
    }

    pub fn connected(&self, u: u32, v: u32) -> Result<bool> {
        Ok(self.batch_connected(&[(u, v)])?[0])
    }

    /// For each `(u, p)`, the fold over `u`'s side of the edge `{u, p}`: its
    /// vertices, its edges, and `{u, p}` itself.
    pub fn batch_subtree(&self, queries: &[(u32, u32)]) -> Vec<Result<A::Value>> {
        queries
            .par_iter()
            .map(|&(u, p)| {
                let down = self.edge_element(p, u).ok_or(Error::MissingEdge(u, p))?;
                self.list.query_value(down, self.twin_of(down))
            })
            .collect()
    }

    pub fn subtree(&self, u: u32, p: u32) -> Result<A::Value> {
        self.batch_subtree(&[(u, p)]).pop().unwrap()
    }

    pub fn vertex_value(&self, v: u32) -> Result<A::Value> {
        Ok(self.list.value(self.vertex_element(v)?))
    }

    pub fn edge_value(&self, u: u32, v: u32) -> Result<A::Value> {
        let canon = self
            .edge_element(u.min(v), u.max(v))
            .ok_or(Error::MissingEdge(u, v))?;
        Ok(self.list.value(canon))
    }

    /// Sets vertex values. Vertices must be distinct.
    pub fn batch_update_vertex_values(&self, pairs: &[(u32, A::Value)]) -> Result<()> {
        let mut targets = Vec::with_capacity(pairs.len());
        for &(v, val) in pairs {
            targets.push((self.vertex_element(v)?, val));
        }
        self.list.batch_update_values(&targets)
    }

    /// Sets edge values. All edges must exist and be distinct; otherwise
    /// nothing changes and the offending positions are reported.
    pub fn batch_update_edge_values(&self, triples: &[(u32, u32, A::Value)]) -> Result<()> {
        let edges: Vec<(u32, u32)> = triples.iter().map(|&(u, v, _)| (u, v)).collect();
        let canon = self.lookup_batch(&edges)?;
        let targets: Vec<_> = canon.into_iter().zip(triples.iter().map(|t| t.2)).collect();
        self.list.batch_update_values(&targets)
    }

    // --- inspection ---------------------------------------------------------

    /// One tour per tree, as element labels. Each starts at the loop of the
    /// tree's smallest vertex; trees are ordered by that vertex.
    pub fn tours(&self) -> Vec<Vec<(u32, u32)>> {
        let mut seen = vec![false; self.n + 1];
        let limit = self.list.slots() + 1;
        let mut out = Vec::new();
        for v in 1..=self.n as u32 {
            if seen[v as usize] {
                continue;
            }
            let start = self.vert(v);
            let mut tour = Vec::new();
            let mut cur = start;
            loop {
                let (a, b) = self.label(cur);
                if a == b {
                    seen[a as usize] = true;
                }
                tour.push((a, b));
                match self.list.next(cur) {
                    Some(nx) if nx != start && tour.len() < limit => cur = nx,
                    _ => break,
                }
            }
            out.push(tour);
        }
        out
    }

    /// [`tours`](Self::tours) as text, one tree per line.
    pub fn dump(&self) -> String {
        let mut s = String::new();
        for tour in self.tours() {
            let parts: Vec<String> = tour.iter().map(|(a, b)| format!("({a},{b})")).collect();
            let _ = writeln!(s, "{}", parts.join(" "));
        }
        s
    }

    /// Full consistency check: list structure and values, twin and
    /// dictionary coherence, and that every tour is a closed Euler tour.
    pub fn check(&self) -> std::result::Result<(), String> {
        self.list.check_structure()?;
        if A::ENABLED {
            self.list.check_values()?;
        }
        let entries = self.edges.entries();
        for &(k, slot) in &entries {
            let h = ElementHandle(slot as u32);
            if !self.list.is_alive(h) {
                return Err(format!("dictionary key {k:#x} points at a dead slot"));
            }
            let (a, b) = self.label(h);
            if a >= b || edge_key(a, b) != k {
                return Err(format!("key {k:#x} maps to element labelled ({a},{b})"));
            }
            let t = self.twin_of(h);
            if !self.list.is_alive(t) || self.twin[t.index()] != h.0 || self.label(t) != (b, a) {
                return Err(format!("twin of ({a},{b}) is broken"));
            }
        }
        let expect = self.n + 2 * entries.len();
        if self.list.len() != expect {
            return Err(format!("{} live elements, expected {expect}", self.list.len()));
        }
        if let Some(h) = self.list.handles().find(|&h| self.is_marked(h)) {
            return Err(format!("{h:?} still marked"));
        }
        let mut seen_loops = vec![false; self.n + 1];
        let mut seen_edges: HashMap<(u32, u32), ()> = HashMap::new();
        let mut total = 0;
        for tour in self.tours() {
            for (i, &(a, b)) in tour.iter().enumerate() {
                let (na, _) = tour[(i + 1) % tour.len()];
                if na != b {
                    return Err(format!("({a},{b}) is followed by an element starting at {na}"));
                }
                if a == b {
                    if std::mem::replace(&mut seen_loops[a as usize], true) {
                        return Err(format!("loop ({a},{a}) visited twice"));
                    }
                } else {
                    if !self.has_edge(a, b) {
                        return Err(format!("tour holds ({a},{b}), which is not an edge"));
                    }
                    if seen_edges.insert((a, b), ()).is_some() {
                        return Err(format!("({a},{b}) appears twice"));
                    }
                }
            }
            total += tour.len();
        }
        if total != expect {
            return Err(format!("tours hold {total} elements, expected {expect}"));
        }
        Ok(())
    }
}

impl<A: ForestAugmentation> std::fmt::Debug for EulerTourForest<A> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("EulerTourForest")
            .field("n", &self.n)
            .field("edges", &self.edges.len())
            .finish()
    }
}

/// Parses `u v` pairs, one per line. Blank lines and lines starting with
/// `#` are skipped.
pub fn parse_edge_list(text: &str) -> Result<Vec<(u32, u32)>> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let bad = || Error::InvalidArgument(format!("line {}: expected `u v`, got {line:?}", i + 1));
        let mut it = line.split_whitespace();
        let (Some(a), Some(b), None) = (it.next(), it.next(), it.next()) else {
            return Err(bad());
        };
        out.push((a.parse().map_err(|_| bad())?, b.parse().map_err(|_| bad())?));
    }
    Ok(out)
}
