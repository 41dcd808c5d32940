//! Brute-force reference models.
//!
//! Single-threaded, strict (precondition violations are errors), and sharing
//! no code with the structures they check.

use std::collections::{BTreeSet, HashMap, VecDeque};

use crate::error::{Error, Result};

#[derive(Debug, Clone)]
struct ModelList {
    seq: Vec<u64>,
    cyclic: bool,
}

/// Sequences of element ids under join and split.
#[derive(Debug, Clone, Default)]
pub struct SeqListModel {
    lists: Vec<Option<ModelList>>,
    owner: HashMap<u64, usize>,
}

impl SeqListModel {
    pub fn singletons(ids: &[u64]) -> Self {
        let mut m = Self::default();
        for &id in ids {
            m.insert(id);
        }
        m
    }

    /// Adds a fresh singleton.
    pub fn insert(&mut self, id: u64) {
        assert!(!self.owner.contains_key(&id), "id {id} already present");
        self.owner.insert(id, self.lists.len());
        self.lists.push(Some(ModelList {
            seq: vec![id],
            cyclic: false,
        }));
    }

    /// Drops a singleton.
    pub fn remove(&mut self, id: u64) -> Result<()> {
        let li = self.list_of(id);
        let list = self.lists[li].as_ref().unwrap();
        if list.seq.len() != 1 || list.cyclic {
            return Err(Error::InvalidArgument(format!("{id} is not an acyclic singleton")));
        }
        self.lists[li] = None;
        self.owner.remove(&id);
        Ok(())
    }

    fn get(&self, li: usize) -> &ModelList {
        self.lists[li].as_ref().expect("dead list index")
    }

    /// Index of the list holding `id`; equal indices mean the same list.
    pub fn list_of(&self, id: u64) -> usize {
        self.owner[&id]
    }

    pub fn is_cyclic(&self, li: usize) -> bool {
        self.get(li).cyclic
    }

    pub fn first(&self, li: usize) -> u64 {
        self.get(li).seq[0]
    }

    pub fn last(&self, li: usize) -> u64 {
        *self.get(li).seq.last().unwrap()
    }

    pub fn sequence(&self, li: usize) -> &[u64] {
        &self.get(li).seq
    }

    /// Live sequences; cyclic ones start at an arbitrary element.
    pub fn lists(&self) -> Vec<Vec<u64>> {
        self.lists.iter().flatten().map(|l| l.seq.clone()).collect()
    }

    /// Appends the list starting at `front` to the list ending at `end`, or
    /// closes a list into a cycle when both are in the same list.
    pub fn join(&mut self, end: u64, front: u64) -> Result<()> {
        let (la, lb) = (self.list_of(end), self.list_of(front));
        let (a, b) = (self.get(la), self.get(lb));
        if a.cyclic || b.cyclic {
            return Err(Error::InvalidArgument("join on a cyclic list".into()));
        }
        if *a.seq.last().unwrap() != end || b.seq[0] != front {
            return Err(Error::InvalidArgument(format!(
                "join({end}, {front}) needs a list end and a list front"
            )));
        }
        if la == lb {
            self.lists[la].as_mut().unwrap().cyclic = true;
            return Ok(());
        }
        let tail = self.lists[lb].take().unwrap();
        for &id in &tail.seq {
            self.owner.insert(id, la);
        }
        self.lists[la].as_mut().unwrap().seq.extend(tail.seq);
        Ok(())
    }

    /// Cuts the list right after `x`.
    pub fn split(&mut self, x: u64) -> Result<()> {
        let li = self.list_of(x);
        let list = self.lists[li].as_mut().unwrap();
        let pos = list.seq.iter().position(|&i| i == x).unwrap();
        if list.cyclic {
            list.seq.rotate_left(pos + 1);
            list.cyclic = false;
            return Ok(());
        }
        if pos + 1 == list.seq.len() {
            return Ok(());
        }
        let rest = list.seq.split_off(pos + 1);
        let idx = self.lists.len();
        for &id in &rest {
            self.owner.insert(id, idx);
        }
        self.lists.push(Some(ModelList {
            seq: rest,
            cyclic: false,
        }));
        Ok(())
    }

    /// Left-to-right fold of `value` over `x..=y` of one list (rightward arc
    /// on a cycle).
    pub fn fold<V: Copy>(
        &self,
        x: u64,
        y: u64,
        value: impl Fn(u64) -> V,
        combine: impl Fn(V, V) -> V,
    ) -> Result<V> {
        let li = self.list_of(x);
        if self.list_of(y) != li {
            return Err(Error::DifferentLists);
        }
        let list = self.get(li);
        let px = list.seq.iter().position(|&i| i == x).unwrap();
        let py = list.seq.iter().position(|&i| i == y).unwrap();
        let len = list.seq.len();
        let steps = if py >= px {
            py - px
        } else if list.cyclic {
            py + len - px
        } else {
            return Err(Error::InvalidArgument(format!("{y} precedes {x}")));
        };
        let mut acc = value(x);
        for k in 1..=steps {
            acc = combine(acc, value(list.seq[(px + k) % len]));
        }
        Ok(acc)
    }
}

/// Disjoint sets with path halving and union by size.
#[derive(Debug, Clone)]
pub struct UnionFind {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
            size: vec![1; n],
        }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns `false` if they were already together.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (mut a, mut b) = (self.find(a), self.find(b));
        if a == b {
            return false;
        }
        if self.size[a] < self.size[b] {
            std::mem::swap(&mut a, &mut b);
        }
        self.parent[b] = a;
        self.size[a] += self.size[b];
        true
    }

    pub fn same(&mut self, a: usize, b: usize) -> bool {
        self.find(a) == self.find(b)
    }
}

/// An undirected forest on vertices `1..=n` with vertex and edge values.
#[derive(Debug, Clone)]
pub struct ForestModel<V> {
    n: usize,
    adj: Vec<BTreeSet<u32>>,
    vertex_values: Vec<V>,
    edge_values: HashMap<(u32, u32), V>,
}

fn key(u: u32, v: u32) -> (u32, u32) {
    (u.min(v), u.max(v))
}

impl<V: Copy> ForestModel<V> {
    pub fn new(n: usize, vertex_value: V) -> Self {
        Self {
            n,
            adj: vec![BTreeSet::new(); n + 1],
            vertex_values: vec![vertex_value; n + 1],
            edge_values: HashMap::new(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    fn check_vertex(&self, v: u32) -> Result<()> {
        if v == 0 || v as usize > self.n {
            return Err(Error::VertexOutOfRange { vertex: v, n: self.n });
        }
        Ok(())
    }

    pub fn has_edge(&self, u: u32, v: u32) -> bool {
        self.edge_values.contains_key(&key(u, v))
    }

    /// Edges as `(min, max)` pairs, sorted.
    pub fn edges(&self) -> Vec<(u32, u32)> {
        let mut e: Vec<_> = self.edge_values.keys().copied().collect();
        e.sort_unstable();
        e
    }

    pub fn link(&mut self, u: u32, v: u32, value: V) -> Result<()> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        if u == v || self.connected(u, v)? {
            return Err(Error::WouldCreateCycle(u, v));
        }
        self.adj[u as usize].insert(v);
        self.adj[v as usize].insert(u);
        self.edge_values.insert(key(u, v), value);
        Ok(())
    }

    pub fn cut(&mut self, u: u32, v: u32) -> Result<()> {
        if self.edge_values.remove(&key(u, v)).is_none() {
            return Err(Error::MissingEdge(u, v));
        }
        self.adj[u as usize].remove(&v);
        self.adj[v as usize].remove(&u);
        Ok(())
    }

    pub fn set_vertex_value(&mut self, v: u32, value: V) -> Result<()> {
        self.check_vertex(v)?;
        self.vertex_values[v as usize] = value;
        Ok(())
    }

    pub fn set_edge_value(&mut self, u: u32, v: u32, value: V) -> Result<()> {
        match self.edge_values.get_mut(&key(u, v)) {
            Some(slot) => {
                *slot = value;
                Ok(())
            }
            None => Err(Error::MissingEdge(u, v)),
        }
    }

    /// BFS reachability.
    pub fn connected(&self, u: u32, v: u32) -> Result<bool> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        let mut seen = vec![false; self.n + 1];
        let mut queue = VecDeque::from([u]);
        seen[u as usize] = true;
        while let Some(x) = queue.pop_front() {
            if x == v {
                return Ok(true);
            }
            for &y in &self.adj[x as usize] {
                if !std::mem::replace(&mut seen[y as usize], true) {
                    queue.push_back(y);
                }
            }
        }
        Ok(false)
    }

    /// Vertex sets of every tree, each sorted, ordered by smallest vertex.
    pub fn components(&self) -> Vec<Vec<u32>> {
        let mut seen = vec![false; self.n + 1];
        let mut out = Vec::new();
        for s in 1..=self.n as u32 {
            if seen[s as usize] {
                continue;
            }
            let mut comp = vec![s];
            seen[s as usize] = true;
            let mut i = 0;
            while i < comp.len() {
                let x = comp[i];
                for &y in &self.adj[x as usize] {
                    if !std::mem::replace(&mut seen[y as usize], true) {
                        comp.push(y);
                    }
                }
                i += 1;
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    /// Number of edges in the tree containing `v`.
    pub fn tree_edge_count(&self, v: u32) -> usize {
        let comp = self
            .components()
            .into_iter()
            .find(|c| c.binary_search(&v).is_ok())
            .unwrap();
        comp.iter().map(|&x| self.adj[x as usize].len()).sum::<usize>() / 2
    }

    /// Fold over `u`'s side of edge `{u, p}`: its vertices, its edges, and
    /// the edge `{u, p}` itself. Iterative DFS.
    pub fn subtree(
        &self,
        u: u32,
        p: u32,
        identity: V,
        combine: impl Fn(V, V) -> V,
    ) -> Result<V> {
        let edge = *self.edge_values.get(&key(u, p)).ok_or(Error::MissingEdge(u, p))?;
        let mut acc = combine(identity, edge);
        let mut stack = vec![(u, p)];
        while let Some((x, from)) = stack.pop() {
            acc = combine(acc, self.vertex_values[x as usize]);
            for &y in &self.adj[x as usize] {
                if y != from {
                    acc = combine(acc, self.edge_values[&key(x, y)]);
                    stack.push((y, x));
                }
            }
        }
        Ok(acc)
    }

    /// Recursive twin of [`subtree`](Self::subtree), for cross-checking.
    pub fn subtree_recursive(
        &self,
        u: u32,
        p: u32,
        identity: V,
        combine: &impl Fn(V, V) -> V,
    ) -> Result<V> {
        fn go<V: Copy>(
            m: &ForestModel<V>,
            x: u32,
            from: u32,
            identity: V,
            combine: &impl Fn(V, V) -> V,
        ) -> V {
            let mut acc = m.vertex_values[x as usize];
            for &y in &m.adj[x as usize] {
                if y != from {
                    let below = go(m, y, x, identity, combine);
                    acc = combine(acc, combine(m.edge_values[&key(x, y)], below));
                }
            }
            acc
        }
        let edge = *self.edge_values.get(&key(u, p)).ok_or(Error::MissingEdge(u, p))?;
        Ok(combine(edge, go(self, u, p, identity, combine)))
    }
}

/// First element reachable from `start` by stepping `twin -> successor`
/// across marked elements: the sequential reference for the batch-cut join
/// targets.
pub fn next_unmarked_walk(
    start: usize,
    twin: impl Fn(usize) -> usize,
    succ: impl Fn(usize) -> usize,
    marked: impl Fn(usize) -> bool,
) -> usize {
    let mut cur = start;
    loop {
        let next = succ(twin(cur));
        if !marked(next) {
            return next;
        }
        cur = next;
    }
}
