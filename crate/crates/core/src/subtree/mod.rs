//! Per-vertex subtree counts by a rerooting dynamic program.
//!
//! Every subtree containing `v` decomposes uniquely into a (possibly empty)
//! subtree from each branch at `v`, so `N(T, v) = prod (1 + N(T_i, v_i))`
//! over the branches `T_i` rooted at the neighbours `v_i`. One post-order pass
//! fills the downward counts, one pre-order pass fills the counts through the
//! parent side using prefix/suffix products over sibling factors. No division
//! is needed, so the same code drives exact big-integer counts and
//! natural-log magnitudes.

mod domain;
mod exact;
mod log;

use std::cmp::Ordering;

pub use domain::{CountDomain, Exact, LogCount, LogDomain};
pub use exact::{
    count_containing_pair, density, entropy, entropy_estimate, f_value, ln_big, m_value, mean_order, p_prob, q_prob,
    q_star, subtree_core, total_size, BigRatio,
};

use crate::tree::Tree;

pub(crate) const NONE: usize = usize::MAX;

/// Logarithm base for entropies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LogBase {
    E,
    Two,
}

impl LogBase {
    pub fn convert_from_ln(self, ln_value: f64) -> f64 {
        match self {
            LogBase::E => ln_value,
            LogBase::Two => ln_value / std::f64::consts::LN_2,
        }
    }
}

/// Results of the rerooting DP over one tree.
///
/// `down[v]` counts subtrees of `v`'s part below it (rooted at `root`) that
/// contain `v`; `up[v]` counts subtrees of the rest of the tree containing
/// `v`'s parent (zero at the root). `n_all[v] = down[v] * (1 + up[v])` is
/// `N(T, v)`; `m[v]` is `M(T, v)` with `None` as the infinite value of the
/// singleton.
#[derive(Debug, Clone)]
pub struct SubtreeStats<V = num_bigint::BigUint> {
    pub root: usize,
    pub parent: Vec<usize>,
    pub order: Vec<usize>,
    pub down: Vec<V>,
    pub up: Vec<V>,
    pub n_all: Vec<V>,
    pub m: Vec<Option<V>>,
    /// Neighbour whose branch count is maximal (smallest index on ties).
    pub max_branch: Vec<Option<usize>>,
    /// One or two maximizers of `n_all`, ascending.
    pub cores: Vec<usize>,
    /// Next vertex towards the nearer core; `usize::MAX` at the cores.
    pub toward_core: Vec<usize>,
    /// Breadth-first order starting from the cores.
    pub core_order: Vec<usize>,
    pub total_n: V,
    pub total_r: V,
    neighbors: Vec<Vec<usize>>,
}

/// Log-domain statistics.
pub type LogStats = SubtreeStats<LogCount>;

/// Exact statistics with the DP oriented at vertex 0.
pub fn analyze(t: &Tree) -> SubtreeStats {
    analyze_in::<Exact>(t, 0)
}

/// Exact statistics with the DP oriented at `root`; `down` then holds the
/// counts of subtrees growing away from `root`.
pub fn analyze_rooted(t: &Tree, root: usize) -> SubtreeStats {
    analyze_in::<Exact>(t, root)
}

/// Log-domain statistics, for trees whose counts are too large to carry
/// exactly.
pub fn analyze_log(t: &Tree) -> LogStats {
    analyze_in::<LogDomain>(t, 0)
}

pub fn analyze_in<D: CountDomain>(t: &Tree, root: usize) -> SubtreeStats<D::Value> {
    let n = t.len();
    let (parent, order) = t.bfs_order(root);

    let mut down = vec![D::one(); n];
    for &v in order.iter().rev() {
        let mut acc = D::one();
        for &c in t.neighbors(v) {
            if c != parent[v] {
                acc = D::mul(&acc, &D::succ(&down[c]));
            }
        }
        down[v] = acc;
    }

    let mut up = vec![D::zero(); n];
    for &v in &order {
        let children: Vec<usize> = t.neighbors(v).iter().copied().filter(|&c| c != parent[v]).collect();
        if children.is_empty() {
            continue;
        }
        let factors: Vec<D::Value> = children.iter().map(|&c| D::succ(&down[c])).collect();
        let mut suffix = vec![D::one(); children.len() + 1];
        for i in (0..children.len()).rev() {
            suffix[i] = D::mul(&factors[i], &suffix[i + 1]);
        }
        let mut prefix = D::succ(&up[v]);
        for (i, &c) in children.iter().enumerate() {
            up[c] = D::mul(&prefix, &suffix[i + 1]);
            prefix = D::mul(&prefix, &factors[i]);
        }
    }

    let n_all: Vec<D::Value> = (0..n).map(|v| D::mul(&down[v], &D::succ(&up[v]))).collect();

    let branch = |v: usize, w: usize| -> &D::Value {
        if parent[w] == v {
            &down[w]
        } else {
            &up[v]
        }
    };
    let mut m = Vec::with_capacity(n);
    let mut max_branch = Vec::with_capacity(n);
    for v in 0..n {
        let nb = t.neighbors(v);
        let best = nb.iter().copied().reduce(|best, w| {
            if D::cmp(branch(v, w), branch(v, best)) == Ordering::Greater {
                w
            } else {
                best
            }
        });
        max_branch.push(best);
        m.push(
            best.map(|b| nb.iter().filter(|&&w| w != b).fold(D::one(), |acc, &w| D::mul(&acc, &D::succ(branch(v, w))))),
        );
    }

    let total_n = down.iter().fold(D::zero(), |acc, x| D::add(&acc, x));
    let total_r = n_all.iter().fold(D::zero(), |acc, x| D::add(&acc, x));

    let cores = find_cores::<D>(t, &n_all);
    let (toward_core, core_order) = orient_to_cores(t, &cores);

    SubtreeStats {
        root,
        parent,
        order,
        down,
        up,
        n_all,
        m,
        max_branch,
        cores,
        toward_core,
        core_order,
        total_n,
        total_r,
        neighbors: (0..n).map(|v| t.neighbors(v).to_vec()).collect(),
    }
}

fn find_cores<D: CountDomain>(t: &Tree, n_all: &[D::Value]) -> Vec<usize> {
    let best =
        (0..n_all.len()).reduce(|b, v| if D::cmp(&n_all[v], &n_all[b]) == Ordering::Greater { v } else { b }).unwrap();
    // A second core must be a neighbour of the first.
    let mut cores = vec![best];
    for &w in t.neighbors(best) {
        if D::tie(&n_all[w], &n_all[best]) {
            cores.push(w);
            break;
        }
    }
    cores.sort_unstable();
    cores
}

fn orient_to_cores(t: &Tree, cores: &[usize]) -> (Vec<usize>, Vec<usize>) {
    let n = t.len();
    let mut next = vec![NONE; n];
    let mut seen = vec![false; n];
    let mut order = cores.to_vec();
    for &c in cores {
        seen[c] = true;
    }
    let mut head = 0;
    while head < order.len() {
        let v = order[head];
        head += 1;
        for &w in t.neighbors(v) {
            if !seen[w] {
                seen[w] = true;
                next[w] = v;
                order.push(w);
            }
        }
    }
    (next, order)
}

impl<V> SubtreeStats<V> {
    pub fn len(&self) -> usize {
        self.n_all.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.neighbors[v]
    }

    /// Count of subtrees in the branch at `v` through neighbour `w` that
    /// contain `w`.
    pub fn branch_count(&self, v: usize, w: usize) -> &V {
        if self.parent[w] == v {
            &self.down[w]
        } else {
            debug_assert_eq!(self.parent[v], w);
            &self.up[v]
        }
    }

    /// The core nearer to `v`.
    pub fn core_for(&self, v: usize) -> usize {
        let mut x = v;
        while self.toward_core[x] != NONE {
            x = self.toward_core[x];
        }
        x
    }

    /// `v = v_0, v_1, ..., v_k = c` towards the nearer core `c`.
    pub fn path_to_core(&self, v: usize) -> Vec<usize> {
        let mut path = vec![v];
        let mut x = v;
        while self.toward_core[x] != NONE {
            x = self.toward_core[x];
            path.push(x);
        }
        path
    }
}
