//! Exhaustive subtree enumeration for small trees.
//!
//! Each subtree is grown from its minimum vertex (the anchor) over vertices
//! with larger ids: at every step one frontier vertex is either excluded for
//! good or added, and its new neighbours join the frontier. In a tree a vertex
//! outside a connected set touches at most one of its members, so an excluded
//! vertex never re-enters the frontier and every subtree is produced once.

use crate::error::CapExceeded;
use crate::tree::Tree;

pub const DEFAULT_CAP: usize = 16;

/// Subtrees as vertex bitmasks (bit `v` set when `v` is a member).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubtreeSet {
    pub n: usize,
    pub masks: Vec<u64>,
}

impl SubtreeSet {
    pub fn len(&self) -> usize {
        self.masks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.masks.is_empty()
    }

    pub fn vertices(&self, i: usize) -> Vec<usize> {
        (0..self.n).filter(|&v| self.masks[i] >> v & 1 == 1).collect()
    }
}

pub fn enumerate_subtrees(t: &Tree) -> Result<SubtreeSet, CapExceeded> {
    enumerate_subtrees_capped(t, DEFAULT_CAP)
}

pub fn enumerate_subtrees_capped(t: &Tree, cap: usize) -> Result<SubtreeSet, CapExceeded> {
    let n = t.len();
    let cap = cap.min(64);
    if n > cap {
        return Err(CapExceeded { n, cap });
    }
    let mut masks = Vec::new();
    for anchor in 0..n {
        let frontier: Vec<usize> = t.neighbors(anchor).iter().copied().filter(|&w| w > anchor).collect();
        grow(t, anchor, 1u64 << anchor, frontier, &mut masks);
    }
    Ok(SubtreeSet { n, masks })
}

fn grow(t: &Tree, anchor: usize, set: u64, mut frontier: Vec<usize>, out: &mut Vec<u64>) {
    let Some(v) = frontier.pop() else {
        out.push(set);
        return;
    };
    grow(t, anchor, set, frontier.clone(), out);
    for &w in t.neighbors(v) {
        if w > anchor && set >> w & 1 == 0 {
            frontier.push(w);
        }
    }
    grow(t, anchor, set | 1 << v, frontier, out);
}

/// Everything the DP computes, recomputed by direct counting.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleStats {
    pub total_n: u64,
    pub total_r: u64,
    pub n_all: Vec<u64>,
    /// `None` for the singleton's vertex.
    pub m: Vec<Option<u64>>,
    pub cores: Vec<usize>,
}

pub fn oracle_stats(t: &Tree) -> Result<OracleStats, CapExceeded> {
    let set = enumerate_subtrees(t)?;
    let n = t.len();
    let total_r = set.masks.iter().map(|m| m.count_ones() as u64).sum();
    let n_all: Vec<u64> = (0..n).map(|v| set.masks.iter().filter(|&&m| m >> v & 1 == 1).count() as u64).collect();

    // M(T, v): for each incident edge vu, count subtrees of the component of
    // v in T - vu that contain v, by re-enumerating that component.
    let m = (0..n).map(|v| t.neighbors(v).iter().map(|&u| count_in_component(t, v, u)).min()).collect();

    let best = *n_all.iter().max().unwrap();
    let cores = (0..n).filter(|&v| n_all[v] == best).collect();
    Ok(OracleStats { total_n: set.len() as u64, total_r, n_all, m, cores })
}

/// Subtrees containing `v` of the component of `v` after deleting edge `vu`.
fn count_in_component(t: &Tree, v: usize, u: usize) -> u64 {
    let mut keep = vec![false; t.len()];
    let mut stack = vec![v];
    keep[v] = true;
    while let Some(x) = stack.pop() {
        for &y in t.neighbors(x) {
            if !keep[y] && !(x == v && y == u) {
                keep[y] = true;
                stack.push(y);
            }
        }
    }
    let ids: Vec<usize> = (0..t.len()).filter(|&x| keep[x]).collect();
    let index = |x: usize| ids.binary_search(&x).unwrap();
    let edges: Vec<_> =
        t.edges().into_iter().filter(|&(a, b)| keep[a] && keep[b]).map(|(a, b)| (index(a), index(b))).collect();
    let sub = Tree::from_edges(ids.len(), &edges).expect("component of a tree is a tree");
    let root = index(v);
    enumerate_subtrees_capped(&sub, 64)
        .expect("component is no larger than the tree")
        .masks
        .iter()
        .filter(|&&m| m >> root & 1 == 1)
        .count() as u64
}
