//! Deterministic generators for the tree families studied here, plus seeded
//! uniformly random labelled trees.
//!
//! Vertex numbering conventions:
//!
//! * `path(n)`: `0 - 1 - ... - (n-1)`.
//! * `star(n)`: centre `0`, leaves `1..n`.
//! * `comb(n)`: spine `0..n` in order, tooth of spine vertex `i` is `n + i`.
//! * `broom(p, k)`: handle `0..p` in order, the `k` leaves `p..p+k` hang off `0`.
//! * `double_broom(p, l)`: handle `0..p`, leaves `p..p+l` at `0` and
//!   `p+l..p+2l` at `p - 1`.
//! * `bethe(n)`: centre `0`, remaining vertices in breadth-first order; the
//!   children of vertex `v >= 1` are `2v + 2` and `2v + 3`.
//! * `comb_star(n, m)`: comb `0..2n` as above, extra leaf `2n` at spine `0`,
//!   star centre `2n + 1` joined to spine `n - 1`, star leaves `2n+2..2n+2+m`.
//! * `spider(l, s)`: centre `0`, leg `i` is `1 + i s ..= (i + 1) s`.
//! * `caterpillar(d, k)`: spine `v_1..v_{t+1}` is `0..=t`; the leaves follow
//!   in spine order.
//!
//! # Random trees
//!
//! `random_tree(n, seed)` decodes a Prüfer sequence of length `n - 2`. Entries
//! are drawn from SplitMix64 seeded with `seed` (state `x`, step
//! `x += 0x9E3779B97F4A7C15`, output mix `z = (z ^ (z >> 30)) *
//! 0xBF58476D1CE4E5B9; z = (z ^ (z >> 27)) * 0x94D049BB133111EB; z ^ (z >>
//! 31)`). A draw in `0..n` takes the next output `z` and rejects it while
//! `z >= 2^64 - (2^64 mod n)`, then returns `z mod n`. Decoding repeatedly
//! joins the smallest current leaf to the next sequence entry.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use rand_core::{RngCore, SeedableRng};
use rand_xoshiro::SplitMix64;

use crate::error::ParamError;
use crate::tree::Tree;

/// A named family with its parameters.
#[derive(Debug, Clone, PartialEq)]
pub enum FamilySpec {
    Path(usize),
    Star(usize),
    Comb(usize),
    Broom { handle: usize, leaves: usize },
    DoubleBroom { handle: usize, leaves: usize },
    Bethe(usize),
    CombStar { comb: usize, star: usize },
    Caterpillar { gaps: Vec<usize>, end_leaves: usize },
    Random { n: usize, seed: u64 },
}

impl FamilySpec {
    pub fn build(&self) -> Result<Tree, ParamError> {
        match self {
            FamilySpec::Path(n) => path(*n),
            FamilySpec::Star(n) => star(*n),
            FamilySpec::Comb(n) => comb(*n),
            FamilySpec::Broom { handle, leaves } => broom(*handle, *leaves),
            FamilySpec::DoubleBroom { handle, leaves } => double_broom(*handle, *leaves),
            FamilySpec::Bethe(n) => Ok(bethe(*n)),
            FamilySpec::CombStar { comb, star } => comb_star(*comb, *star),
            FamilySpec::Caterpillar { gaps, end_leaves } => caterpillar(gaps, *end_leaves).map(|c| c.tree),
            FamilySpec::Random { n, seed } => random_tree(*n, *seed),
        }
    }
}

fn at_least(name: &'static str, value: usize, min: usize) -> Result<(), ParamError> {
    if value < min {
        Err(ParamError::BelowMinimum { name, value: value as i64, min: min as i64 })
    } else {
        Ok(())
    }
}

fn build(n: usize, edges: &[(usize, usize)]) -> Tree {
    Tree::from_edges(n, edges).expect("generator produced an invalid tree")
}

pub fn path(n: usize) -> Result<Tree, ParamError> {
    at_least("n", n, 1)?;
    let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
    Ok(build(n, &edges))
}

pub fn star(n: usize) -> Result<Tree, ParamError> {
    at_least("n", n, 1)?;
    let edges: Vec<_> = (1..n).map(|i| (0, i)).collect();
    Ok(build(n, &edges))
}

pub fn comb(n: usize) -> Result<Tree, ParamError> {
    at_least("n", n, 1)?;
    Ok(build(2 * n, &comb_edges(n)))
}

fn comb_edges(n: usize) -> Vec<(usize, usize)> {
    (1..n).map(|i| (i - 1, i)).chain((0..n).map(|i| (i, n + i))).collect()
}

pub fn broom(handle: usize, leaves: usize) -> Result<Tree, ParamError> {
    at_least("p", handle, 1)?;
    at_least("k", leaves, 1)?;
    let mut edges: Vec<_> = (1..handle).map(|i| (i - 1, i)).collect();
    edges.extend((0..leaves).map(|j| (0, handle + j)));
    Ok(build(handle + leaves, &edges))
}

pub fn double_broom(handle: usize, leaves: usize) -> Result<Tree, ParamError> {
    at_least("p", handle, 2)?;
    at_least("lambda", leaves, 1)?;
    let mut edges: Vec<_> = (1..handle).map(|i| (i - 1, i)).collect();
    edges.extend((0..leaves).map(|j| (0, handle + j)));
    edges.extend((0..leaves).map(|j| (handle - 1, handle + leaves + j)));
    Ok(build(handle + 2 * leaves, &edges))
}

/// Three complete binary trees of height `n - 1` joined at a centre;
/// `bethe(0)` is the singleton. Has `3 * 2^n - 2` vertices.
pub fn bethe(n: usize) -> Tree {
    if n == 0 {
        return Tree::singleton();
    }
    let size = 3 * (1usize << n) - 2;
    let mut edges: Vec<_> = (1..=3).map(|v| (0, v)).collect();
    for v in 1..size {
        for c in [2 * v + 2, 2 * v + 3] {
            if c < size {
                edges.push((v, c));
            }
        }
    }
    build(size, &edges)
}

/// A comb `C_n` with an extra leaf at its first spine vertex and the centre
/// of an `m`-leaf star joined to its last spine vertex; `2n + m + 2` vertices.
pub fn comb_star(n: usize, m: usize) -> Result<Tree, ParamError> {
    at_least("n", n, 1)?;
    at_least("m", m, 1)?;
    let mut edges = comb_edges(n);
    let extra = 2 * n;
    let centre = 2 * n + 1;
    edges.push((0, extra));
    edges.push((n - 1, centre));
    edges.extend((0..m).map(|j| (centre, centre + 1 + j)));
    Ok(build(2 * n + m + 2, &edges))
}

/// A caterpillar together with its two distinguished vertices.
#[derive(Debug, Clone)]
pub struct Caterpillar {
    pub tree: Tree,
    /// The first spine vertex `v_1`.
    pub u: usize,
    /// A leaf of `v_1`.
    pub w: usize,
    /// Spine vertices `v_1..v_{t+1}`.
    pub spine: Vec<usize>,
}

/// Spine `v_1..v_{t+1}` carrying `d_1 + 1, d_2, ..., d_t` and `k` leaves.
pub fn caterpillar(gaps: &[usize], end_leaves: usize) -> Result<Caterpillar, ParamError> {
    if gaps.is_empty() {
        return Err(ParamError::Invalid("caterpillar needs at least one gap".into()));
    }
    for &d in gaps {
        at_least("d_i", d, 1)?;
    }
    at_least("k", end_leaves, 1)?;
    let t = gaps.len();
    let mut leaf_counts: Vec<usize> = gaps.to_vec();
    leaf_counts[0] += 1;
    leaf_counts.push(end_leaves);
    let mut edges: Vec<_> = (1..=t).map(|i| (i - 1, i)).collect();
    let mut next = t + 1;
    for (spine, &count) in leaf_counts.iter().enumerate() {
        for _ in 0..count {
            edges.push((spine, next));
            next += 1;
        }
    }
    Ok(Caterpillar { tree: build(next, &edges), u: 0, w: t + 1, spine: (0..=t).collect() })
}

/// A subdivided star: `legs` paths of `length` vertices hanging off centre
/// `0`; leg `i` is `1 + i*length ..= (i+1)*length`, outward.
pub fn spider(legs: usize, length: usize) -> Result<Tree, ParamError> {
    at_least("legs", legs, 1)?;
    at_least("length", length, 1)?;
    let mut edges = Vec::with_capacity(legs * length);
    for i in 0..legs {
        let first = 1 + i * length;
        edges.push((0, first));
        edges.extend((first + 1..first + length).map(|v| (v - 1, v)));
    }
    Ok(build(1 + legs * length, &edges))
}

fn draw_below(rng: &mut SplitMix64, n: u64) -> u64 {
    let zone = u64::MAX - (u64::MAX % n + 1) % n;
    loop {
        let z = rng.next_u64();
        if z <= zone {
            return z % n;
        }
    }
}

/// The SplitMix64 stream used by [`random_tree`].
pub fn rng(seed: u64) -> SplitMix64 {
    SplitMix64::seed_from_u64(seed)
}

/// Uniformly random labelled tree on `n` vertices.
pub fn random_tree(n: usize, seed: u64) -> Result<Tree, ParamError> {
    at_least("n", n, 1)?;
    if n <= 2 {
        return path(n);
    }
    let mut rng = rng(seed);
    let code: Vec<usize> = (0..n - 2).map(|_| draw_below(&mut rng, n as u64) as usize).collect();
    Ok(from_prufer(&code))
}

/// Decodes a Prüfer sequence over `0..code.len() + 2`.
pub fn from_prufer(code: &[usize]) -> Tree {
    let n = code.len() + 2;
    let mut degree = vec![1usize; n];
    for &c in code {
        degree[c] += 1;
    }
    let mut leaves: BinaryHeap<Reverse<usize>> = (0..n).filter(|&v| degree[v] == 1).map(Reverse).collect();
    let mut edges = Vec::with_capacity(n - 1);
    for &c in code {
        let Reverse(leaf) = leaves.pop().expect("a tree always has a leaf");
        edges.push((leaf, c));
        degree[c] -= 1;
        if degree[c] == 1 {
            leaves.push(Reverse(c));
        }
    }
    let Reverse(a) = leaves.pop().unwrap();
    let Reverse(b) = leaves.pop().unwrap();
    edges.push((a, b));
    build(n, &edges)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diameter(t: &Tree) -> usize {
        let d0 = t.distances(0);
        let far = (0..t.len()).max_by_key(|&v| d0[v]).unwrap();
        *t.distances(far).iter().max().unwrap()
    }

    #[test]
    fn paths_and_stars() {
        let p = path(4).unwrap();
        assert_eq!((p.len(), p.leaves().len(), diameter(&p)), (4, 2, 3));
        assert_eq!(star(5).unwrap().degree(0), 4);
        assert_eq!(path(1).unwrap(), Tree::singleton());
        assert_eq!(star(1).unwrap(), Tree::singleton());
        assert!(path(0).is_err());
        assert!(star(0).is_err());
    }

    #[test]
    fn combs() {
        let c2 = comb(2).unwrap();
        assert_eq!(c2.len(), 4);
        assert_eq!(diameter(&c2), 3);
        assert_eq!(c2.leaves().len(), 2);
        assert_eq!(comb(7).unwrap().len(), 14);
        assert_eq!(comb(1).unwrap(), path(2).unwrap());
        assert_eq!(comb(3).unwrap().leaves(), vec![3, 4, 5]);
        assert!(comb(0).is_err());
    }

    #[test]
    fn brooms() {
        assert_eq!(broom(1, 3).unwrap(), star(4).unwrap());
        let db = double_broom(2, 1).unwrap();
        assert_eq!((db.len(), diameter(&db), db.leaves().len()), (4, 3, 2));
        assert_eq!(double_broom(10, 5).unwrap().len(), 20);
        assert!(broom(0, 1).is_err());
        assert!(double_broom(1, 1).is_err());
        assert!(double_broom(2, 0).is_err());
    }

    #[test]
    fn bethe_sizes() {
        assert_eq!(bethe(1), star(4).unwrap());
        assert_eq!(bethe(3).len(), 22);
        assert_eq!(bethe(0), Tree::singleton());
        for n in 1..8 {
            let t = bethe(n);
            assert_eq!(t.len(), 3 * (1 << n) - 2);
            assert!((0..t.len()).all(|v| t.degree(v) == 1 || t.degree(v) == 3));
            assert_eq!(t.leaves().len(), 3 << (n - 1));
        }
    }

    #[test]
    fn comb_star_shape() {
        assert_eq!(comb_star(3, 4).unwrap().len(), 12);
        let spider = comb_star(1, 1).unwrap();
        assert_eq!(spider.len(), 5);
        assert_eq!(spider.degree(0), 3);
        for n in 1..6 {
            for m in 2..6 {
                assert!(comb_star(n, m).unwrap().is_series_reduced());
            }
        }
    }

    #[test]
    fn spiders() {
        let s = spider(3, 4).unwrap();
        assert_eq!((s.len(), s.degree(0), s.leaves()), (13, 3, vec![4, 8, 12]));
        assert_eq!(spider(2, 3).unwrap(), path(7).unwrap().relabel(&[3, 2, 1, 0, 4, 5, 6]));
        assert!(spider(0, 2).is_err());
    }

    #[test]
    fn caterpillars() {
        let c = caterpillar(&[1], 2).unwrap();
        assert_eq!(c.tree.len(), 6);
        assert_eq!(c.tree.degree(0), 3);
        assert_eq!(c.tree.degree(1), 3);
        assert_eq!(c.tree.neighbors(c.w), &[c.u]);
        assert_eq!(caterpillar(&[2, 1], 3).unwrap().tree.len(), 10);
        let big = caterpillar(&[1, 2, 1, 3], 2).unwrap();
        assert!(big.tree.is_series_reduced());
        assert!(caterpillar(&[], 2).is_err());
        assert!(caterpillar(&[0], 2).is_err());
        assert!(caterpillar(&[1], 0).is_err());
    }

    #[test]
    fn splitmix_reference_stream() {
        let mut r = rng(1234567);
        let got: Vec<u64> = (0..3).map(|_| r.next_u64()).collect();
        assert_eq!(got, vec![6457827717110365317, 3203168211198807973, 9817491932198370423]);
    }

    #[test]
    fn random_trees_are_deterministic() {
        for s in 0..5 {
            assert_eq!(random_tree(1, s).unwrap(), Tree::singleton());
        }
        let a = random_tree(12, 7).unwrap();
        assert_eq!(a.len(), 12);
        assert_eq!(a, random_tree(12, 7).unwrap());
        assert_ne!(a, random_tree(12, 8).unwrap());
    }

    #[test]
    fn prufer_is_uniform_on_four_vertices() {
        // Cayley: 16 labelled trees on 4 vertices, each from exactly one code.
        let mut seen = std::collections::HashSet::new();
        for a in 0..4 {
            for b in 0..4 {
                seen.insert(from_prufer(&[a, b]).serialize());
            }
        }
        assert_eq!(seen.len(), 16);
    }
}
