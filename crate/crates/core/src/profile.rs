//! Empirical local statistics: closed `r`-balls as rooted trees, canonical
//! codes for rooted isomorphism, ball-frequency profiles, the fraction of
//! vertices whose ball is a long path, and the `m`-good test.

use std::collections::BTreeMap;

use num_rational::Ratio;

use crate::par::Exec;
use crate::tree::Tree;

/// A tree with a distinguished root.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootedTree {
    pub tree: Tree,
    pub root: usize,
}

/// Canonical bracket encoding of a rooted tree: each vertex is `(` followed
/// by the sorted codes of its children and `)`. Equal codes iff rooted
/// isomorphic.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BallCode(pub Vec<u8>);

impl BallCode {
    pub fn to_hex(&self) -> String {
        self.0.iter().map(|b| format!("{b:02x}")).collect()
    }
}

impl std::fmt::Display for BallCode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(std::str::from_utf8(&self.0).unwrap_or("?"))
    }
}

/// Counts of ball codes over all centres at one radius.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BallProfile {
    pub radius: usize,
    pub counts: BTreeMap<BallCode, usize>,
    pub total: usize,
}

impl BallProfile {
    pub fn frequency(&self, code: &BallCode) -> f64 {
        self.counts.get(code).copied().unwrap_or(0) as f64 / self.total as f64
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("profiles have different radii ({0} and {1})")]
pub struct RadiusMismatch(pub usize, pub usize);

/// Vertices within distance `radius` of `root` in breadth-first order, with
/// parent indices into that order (`usize::MAX` for the root).
fn ball_bfs(t: &Tree, root: usize, radius: usize) -> (Vec<usize>, Vec<usize>) {
    let mut verts = vec![root];
    let mut parent_idx = vec![usize::MAX];
    let mut depth = vec![0usize];
    let mut head = 0;
    while head < verts.len() {
        let v = verts[head];
        if depth[head] < radius {
            let from = if parent_idx[head] == usize::MAX { usize::MAX } else { verts[parent_idx[head]] };
            for &w in t.neighbors(v) {
                if w != from {
                    verts.push(w);
                    parent_idx.push(head);
                    depth.push(depth[head] + 1);
                }
            }
        }
        head += 1;
    }
    (verts, parent_idx)
}

/// The closed `radius`-ball around `v`, relabelled in breadth-first order so
/// that the centre is vertex 0.
pub fn extract_ball(t: &Tree, v: usize, radius: usize) -> Result<RootedTree, crate::TreeError> {
    t.check_vertex(v)?;
    let (verts, parent_idx) = ball_bfs(t, v, radius);
    let edges: Vec<_> = (1..verts.len()).map(|i| (parent_idx[i], i)).collect();
    let tree = Tree::from_edges(verts.len(), &edges).expect("a ball of a tree is a tree");
    Ok(RootedTree { tree, root: 0 })
}

fn code_from_bfs(parent_idx: &[usize]) -> BallCode {
    let k = parent_idx.len();
    let mut child_codes: Vec<Vec<Vec<u8>>> = vec![Vec::new(); k];
    let mut done: Vec<Vec<u8>> = vec![Vec::new(); k];
    for i in (0..k).rev() {
        let mut kids = std::mem::take(&mut child_codes[i]);
        kids.sort_unstable();
        let mut code = Vec::with_capacity(2 + kids.iter().map(Vec::len).sum::<usize>());
        code.push(b'(');
        for c in kids {
            code.extend_from_slice(&c);
        }
        code.push(b')');
        if parent_idx[i] == usize::MAX {
            done[i] = code;
        } else {
            child_codes[parent_idx[i]].push(code);
        }
    }
    BallCode(std::mem::take(&mut done[0]))
}

/// Canonical code of a rooted tree.
pub fn canonical_code(rooted: &RootedTree) -> BallCode {
    let (_, parent_idx) = ball_bfs(&rooted.tree, rooted.root, usize::MAX);
    code_from_bfs(&parent_idx)
}

/// Canonical code of the `radius`-ball around `v`, without materializing it.
pub fn ball_code(t: &Tree, v: usize, radius: usize) -> BallCode {
    let (_, parent_idx) = ball_bfs(t, v, radius);
    code_from_bfs(&parent_idx)
}

/// Code of the path on `2r + 1` vertices rooted at its middle.
pub fn centred_path_code(radius: usize) -> BallCode {
    let mut arm = b"()".to_vec();
    for _ in 1..radius {
        arm = [b"(".as_slice(), &arm, b")"].concat();
    }
    if radius == 0 {
        return BallCode(b"()".to_vec());
    }
    BallCode([b"(".as_slice(), &arm, &arm, b")"].concat())
}

pub fn ball_distribution(t: &Tree, radius: usize) -> BallProfile {
    ball_distribution_with(t, radius, Exec::default())
}

/// Ball profile with an explicit execution mode; codes are computed per
/// centre independently and merged.
pub fn ball_distribution_with(t: &Tree, radius: usize, exec: Exec) -> BallProfile {
    let codes = exec.map_range(0..t.len(), |v| ball_code(t, v, radius));
    let mut counts = BTreeMap::new();
    for code in codes {
        *counts.entry(code).or_insert(0) += 1;
    }
    BallProfile { radius, counts, total: t.len() }
}

/// Number of vertices whose `radius`-ball is the centred path `P*_{2r+1}`.
pub fn path_ball_count(t: &Tree, radius: usize) -> usize {
    let target = centred_path_code(radius);
    (0..t.len()).filter(|&v| ball_code(t, v, radius) == target).count()
}

/// Fraction of vertices whose `radius`-ball is `P*_{2r+1}`.
pub fn path_ball_fraction(t: &Tree, radius: usize) -> Ratio<u64> {
    Ratio::new(path_ball_count(t, radius) as u64, t.len() as u64)
}

/// Number of vertices lying inside path segments longer than `m`.
pub fn long_segment_vertices(t: &Tree, m: usize, root: Option<usize>) -> Result<usize, crate::TreeError> {
    Ok(t.path_segments(root)?.iter().filter(|s| s.length() > m).map(|s| s.internal().len()).sum())
}

/// At most half of the vertices lie inside path segments longer than `m`.
pub fn is_m_good(t: &Tree, m: usize, root: Option<usize>) -> Result<bool, crate::TreeError> {
    Ok(2 * long_segment_vertices(t, m, root)? <= t.len())
}

/// Total-variation distance between two profiles of the same radius.
pub fn tv_distance(a: &BallProfile, b: &BallProfile) -> Result<f64, RadiusMismatch> {
    if a.radius != b.radius {
        return Err(RadiusMismatch(a.radius, b.radius));
    }
    let mut sum = 0.0;
    for (code, &count) in &a.counts {
        sum += (count as f64 / a.total as f64 - b.frequency(code)).abs();
    }
    for (code, &count) in &b.counts {
        if !a.counts.contains_key(code) {
            sum += count as f64 / b.total as f64;
        }
    }
    Ok(sum / 2.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families;

    fn rooted(t: Tree, root: usize) -> RootedTree {
        RootedTree { tree: t, root }
    }

    #[test]
    fn balls_of_paths_and_stars() {
        let p5 = families::path(5).unwrap();
        let ball = extract_ball(&p5, 2, 1).unwrap();
        assert_eq!(ball.tree.len(), 3);
        assert_eq!(ball.tree.degree(ball.root), 2);
        assert_eq!(extract_ball(&p5, 4, 0).unwrap().tree, Tree::singleton());
        let s5 = families::star(5).unwrap();
        assert_eq!(extract_ball(&s5, 0, 1).unwrap().tree, s5);
        assert!(extract_ball(&s5, 7, 1).is_err());
    }

    #[test]
    fn codes_distinguish_roots() {
        let p3 = families::path(3).unwrap();
        let centre = canonical_code(&rooted(p3.clone(), 1));
        let end = canonical_code(&rooted(p3.clone(), 0));
        assert_ne!(centre, end);
        assert_eq!(centre, centred_path_code(1));
        assert_eq!(end, canonical_code(&rooted(p3, 2)));
    }

    #[test]
    fn centred_path_codes() {
        for r in 0..6 {
            let p = families::path(2 * r + 1).unwrap();
            assert_eq!(canonical_code(&rooted(p, r)), centred_path_code(r));
        }
    }

    #[test]
    fn path_profile() {
        let prof = ball_distribution(&families::path(5).unwrap(), 1);
        assert_eq!(prof.counts.len(), 2);
        assert_eq!(prof.counts[&centred_path_code(1)], 3);
        assert_eq!(prof.counts[&BallCode(b"(())".to_vec())], 2);
        let single = ball_distribution(&Tree::singleton(), 3);
        assert_eq!(single.counts.into_iter().collect::<Vec<_>>(), vec![(BallCode(b"()".to_vec()), 1)]);
    }

    #[test]
    fn path_ball_fractions() {
        for n in [5usize, 9, 20] {
            for r in 1..=2 {
                let f = path_ball_fraction(&families::path(n).unwrap(), r);
                assert_eq!(f, Ratio::new((n - 2 * r) as u64, n as u64));
            }
        }
        assert_eq!(path_ball_fraction(&families::comb(8).unwrap(), 2), Ratio::from_integer(0));
        assert_eq!(path_ball_fraction(&families::star(6).unwrap(), 1), Ratio::from_integer(0));
    }

    #[test]
    fn m_good_examples() {
        assert!(!is_m_good(&families::path(10).unwrap(), 5, None).unwrap());
        assert!(is_m_good(&families::path(3).unwrap(), 2, None).unwrap());
        for n in 1..20 {
            assert!(is_m_good(&families::comb(n).unwrap(), 1, None).unwrap());
        }
    }

    #[test]
    fn tv_distance_basics() {
        let a = ball_distribution(&families::path(10).unwrap(), 1);
        let b = ball_distribution(&families::star(10).unwrap(), 1);
        assert_eq!(tv_distance(&a, &a).unwrap(), 0.0);
        // P_10: 8 centred P_3, 2 rooted edges; star: 9 rooted edges, 1 centre.
        assert!((tv_distance(&a, &b).unwrap() - 0.8).abs() < 1e-12);
        let c = ball_distribution(&families::path(10).unwrap(), 2);
        assert_eq!(tv_distance(&a, &c), Err(RadiusMismatch(1, 2)));
    }

    #[test]
    fn sequential_and_parallel_profiles_agree() {
        let t = families::random_tree(300, 5).unwrap();
        for r in 1..4 {
            assert_eq!(ball_distribution_with(&t, r, Exec::Sequential), ball_distribution_with(&t, r, Exec::Parallel));
        }
    }
}
