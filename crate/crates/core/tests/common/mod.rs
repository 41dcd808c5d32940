//! Workload generators and checks shared by the integration suites.

#![allow(dead_code)]

use std::collections::{BTreeSet, HashSet};

use rand::seq::SliceRandom;
use rand::Rng;
use skiptour::oracles::{ForestModel, SeqListModel, UnionFind};
use skiptour::{Augmentation, ElementHandle, EulerTourForest, ForestAugmentation, SkipList};

/// Heights with `P(h) = 2^-h`, capped at 32.
pub fn geometric_heights(rng: &mut impl Rng, n: usize) -> Vec<u32> {
    (0..n)
        .map(|_| {
            let mut h = 1;
            while h < 32 && rng.random_bool(0.5) {
                h += 1;
            }
            h
        })
        .collect()
}

/// A random starting structure plus one join batch and one split batch,
/// all in terms of element indices.
#[derive(Debug, Clone)]
pub struct ListInstance {
    pub heights: Vec<u32>,
    pub setup: Vec<(usize, usize)>,
    pub joins: Vec<(usize, usize)>,
    pub splits: Vec<usize>,
}

impl ListInstance {
    pub fn random(rng: &mut impl Rng, max_n: usize, max_k: usize) -> Self {
        let n = rng.random_range(1..=max_n);
        let heights = geometric_heights(rng, n);
        let ids: Vec<u64> = (0..n as u64).collect();
        let mut model = SeqListModel::singletons(&ids);
        let mut perm: Vec<usize> = (0..n).collect();
        perm.shuffle(rng);
        let mut setup = Vec::new();
        for w in perm.windows(2) {
            if rng.random_bool(0.8) {
                model.join(w[0] as u64, w[1] as u64).unwrap();
                setup.push((w[0], w[1]));
            }
        }
        let mut acyclic = Vec::new();
        for seq in model.lists() {
            let (first, last) = (seq[0] as usize, *seq.last().unwrap() as usize);
            if rng.random_bool(0.15) {
                setup.push((last, first));
            } else {
                acyclic.push((first, last));
            }
        }

        acyclic.shuffle(rng);
        let mut joins = Vec::new();
        let mut rest = &acyclic[..];
        while !rest.is_empty() {
            let len = rng.random_range(1..=4).min(rest.len());
            let (chain, tail) = rest.split_at(len);
            rest = tail;
            let close = rng.random_bool(0.3);
            let needed = len - 1 + usize::from(close);
            if joins.len() + needed > max_k {
                break;
            }
            for w in chain.windows(2) {
                joins.push((w[0].1, w[1].0));
            }
            if close {
                joins.push((chain[len - 1].1, chain[0].0));
            }
        }
        joins.shuffle(rng);

        let k = rng.random_range(0..=max_k);
        let splits = (0..k).map(|_| rng.random_range(0..n)).collect();
        Self {
            heights,
            setup,
            joins,
            splits,
        }
    }

    /// Elements with the injected heights, linked by `setup` one at a time.
    pub fn build(&self) -> (SkipList, Vec<ElementHandle>) {
        let mut list = SkipList::unaugmented(Default::default());
        let hs = list.create_elements_with_heights(&self.heights, ());
        for &(a, b) in &self.setup {
            list.join(hs[a], hs[b]);
        }
        (list, hs)
    }

    pub fn join_pairs(&self, hs: &[ElementHandle]) -> Vec<(ElementHandle, ElementHandle)> {
        self.joins.iter().map(|&(a, b)| (hs[a], hs[b])).collect()
    }

    pub fn split_targets(&self, hs: &[ElementHandle]) -> Vec<ElementHandle> {
        self.splits.iter().map(|&i| hs[i]).collect()
    }
}

/// Chains `hs` in order into one acyclic list.
pub fn chain<A: Augmentation>(list: &SkipList<A>, hs: &[ElementHandle]) {
    let pairs: Vec<_> = hs.windows(2).map(|w| (w[0], w[1])).collect();
    list.batch_join_aug(&pairs).unwrap();
}

/// Acyclic forest-preserving edges between random vertex pairs.
pub fn random_links(
    rng: &mut impl Rng,
    model: &ForestModel<i64>,
    max_k: usize,
) -> Vec<(u32, u32)> {
    let n = model.n() as u32;
    let mut uf = UnionFind::new(n as usize + 1);
    for (a, b) in model.edges() {
        uf.union(a as usize, b as usize);
    }
    let mut out = Vec::new();
    for _ in 0..rng.random_range(1..=max_k) {
        let (u, v) = (rng.random_range(1..=n), rng.random_range(1..=n));
        if uf.union(u as usize, v as usize) {
            out.push(if rng.random_bool(0.5) { (u, v) } else { (v, u) });
        }
    }
    out
}

/// Up to `max_k` distinct existing edges, in random orientation.
pub fn random_cuts(rng: &mut impl Rng, model: &ForestModel<i64>, max_k: usize) -> Vec<(u32, u32)> {
    let mut edges = model.edges();
    edges.shuffle(rng);
    let k = rng.random_range(0..=max_k.min(edges.len()));
    edges
        .into_iter()
        .take(k)
        .map(|(a, b)| if rng.random_bool(0.5) { (a, b) } else { (b, a) })
        .collect()
}

/// Each tour holds exactly one tree of the model: one loop per vertex, both
/// directions of every tree edge once each, and nothing else.
pub fn tours_match_model<A: ForestAugmentation>(
    f: &EulerTourForest<A>,
    model: &ForestModel<i64>,
) -> Result<(), String> {
    let comps = model.components();
    let tours = f.tours();
    if comps.len() != tours.len() {
        return Err(format!("{} tours for {} trees", tours.len(), comps.len()));
    }
    let edges: BTreeSet<(u32, u32)> = model.edges().into_iter().collect();
    for (comp, tour) in comps.iter().zip(&tours) {
        let members: HashSet<u32> = comp.iter().copied().collect();
        let mut loops: Vec<u32> = tour.iter().filter(|(a, b)| a == b).map(|p| p.0).collect();
        loops.sort_unstable();
        if loops != *comp {
            return Err(format!("tour loops {loops:?} but tree {comp:?}"));
        }
        let tree_edges: Vec<(u32, u32)> = edges
            .iter()
            .copied()
            .filter(|(a, _)| members.contains(a))
            .collect();
        if tour.len() != comp.len() + 2 * tree_edges.len() {
            return Err(format!(
                "tour of {} elements for {} vertices and {} edges",
                tour.len(),
                comp.len(),
                tree_edges.len()
            ));
        }
        let mut directed: Vec<(u32, u32)> = tour.iter().copied().filter(|(a, b)| a != b).collect();
        directed.sort_unstable();
        let mut want: Vec<(u32, u32)> =
            tree_edges.iter().flat_map(|&(a, b)| [(a, b), (b, a)]).collect();
        want.sort_unstable();
        if directed != want {
            return Err(format!("tour of tree {:?} holds the wrong directed edges", comp[0]));
        }
    }
    Ok(())
}
