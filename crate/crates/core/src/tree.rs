//! Finite trees on dense vertex ids `0..n`, the edge-list text format, and
//! structural queries (degrees, leaves, path segments).
//!
//! The edge-list format is the interchange format of the CLI: the first line
//! holds `n`, followed by `n - 1` lines `u v` with `0 <= u, v < n`.

use std::fmt::Write as _;

use crate::error::TreeError;

/// An undirected finite tree. Neighbour lists are kept sorted ascending.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Tree {
    adj: Vec<Vec<usize>>,
}

/// A maximal path whose internal vertices have degree 2 and whose ends are
/// either the designated root or vertices of degree other than 2.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathSegment {
    /// Vertices from one end to the other; `vertices.len() == length + 1`.
    pub vertices: Vec<usize>,
}

impl PathSegment {
    pub fn endpoints(&self) -> (usize, usize) {
        (self.vertices[0], *self.vertices.last().unwrap())
    }

    /// Number of edges.
    pub fn length(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn internal(&self) -> &[usize] {
        &self.vertices[1..self.vertices.len() - 1]
    }
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns false if `a` and `b` were already joined.
    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra] = rb;
        true
    }
}

impl Tree {
    /// The one-vertex tree.
    pub fn singleton() -> Tree {
        Tree { adj: vec![Vec::new()] }
    }

    /// Builds a tree from an edge list, validating every tree invariant.
    ///
    /// Line numbers in errors refer to edge-list lines, so edge `i` is
    /// reported as line `i + 2`.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Tree, TreeError> {
        if n == 0 {
            return Err(TreeError::ZeroVertices);
        }
        let mut adj = vec![Vec::new(); n];
        let mut uf = UnionFind::new(n);
        for (i, &(u, v)) in edges.iter().enumerate() {
            let line = i + 2;
            for w in [u, v] {
                if w >= n {
                    return Err(TreeError::VertexOutOfRange { line, vertex: w, n });
                }
            }
            if u == v {
                return Err(TreeError::SelfLoop { line, vertex: u });
            }
            if adj[u].contains(&v) {
                return Err(TreeError::DuplicateEdge { line, u, v });
            }
            if !uf.union(u, v) {
                return Err(TreeError::Cycle { line, u, v });
            }
            adj[u].push(v);
            adj[v].push(u);
        }
        if edges.len() != n - 1 {
            return Err(TreeError::WrongEdgeCount { expected: n - 1, found: edges.len() });
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        Ok(Tree { adj })
    }

    /// Builds a tree from explicit adjacency lists.
    pub fn from_adjacency(adj: Vec<Vec<usize>>) -> Result<Tree, TreeError> {
        let n = adj.len();
        if n == 0 {
            return Err(TreeError::ZeroVertices);
        }
        let mut edges = Vec::new();
        for (u, list) in adj.iter().enumerate() {
            for &v in list {
                if v >= n {
                    return Err(TreeError::NoSuchVertex { vertex: v, n });
                }
                if !adj[v].contains(&u) {
                    return Err(TreeError::Asymmetric { u, v });
                }
                if u < v {
                    edges.push((u, v));
                }
            }
        }
        match Tree::from_edges(n, &edges) {
            Err(TreeError::WrongEdgeCount { found, .. }) if found < n - 1 => Err(TreeError::Disconnected),
            other => other,
        }
    }

    pub fn len(&self) -> usize {
        self.adj.len()
    }

    /// Always false; a tree has at least one vertex.
    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn check_vertex(&self, v: usize) -> Result<(), TreeError> {
        if v < self.len() {
            Ok(())
        } else {
            Err(TreeError::NoSuchVertex { vertex: v, n: self.len() })
        }
    }

    /// Edges `(u, v)` with `u < v`, sorted lexicographically.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out: Vec<_> = self
            .adj
            .iter()
            .enumerate()
            .flat_map(|(u, list)| list.iter().filter(move |&&v| u < v).map(move |&v| (u, v)))
            .collect();
        out.sort_unstable();
        out
    }

    /// Vertices of degree 1. The singleton tree counts its only vertex as a
    /// leaf.
    pub fn leaves(&self) -> Vec<usize> {
        if self.len() == 1 {
            return vec![0];
        }
        (0..self.len()).filter(|&v| self.degree(v) == 1).collect()
    }

    /// True if no vertex has degree 2.
    pub fn is_series_reduced(&self) -> bool {
        (0..self.len()).all(|v| self.degree(v) != 2)
    }

    /// Parent pointers and a preorder from `root`; `parent[root] == usize::MAX`.
    pub fn bfs_order(&self, root: usize) -> (Vec<usize>, Vec<usize>) {
        let n = self.len();
        let mut parent = vec![usize::MAX; n];
        let mut order = Vec::with_capacity(n);
        order.push(root);
        let mut head = 0;
        while head < order.len() {
            let v = order[head];
            head += 1;
            for &w in &self.adj[v] {
                if w != parent[v] {
                    parent[w] = v;
                    order.push(w);
                }
            }
        }
        (parent, order)
    }

    /// Distances from `source`.
    pub fn distances(&self, source: usize) -> Vec<usize> {
        let (parent, order) = self.bfs_order(source);
        let mut dist = vec![0; self.len()];
        for &v in order.iter().skip(1) {
            dist[v] = dist[parent[v]] + 1;
        }
        dist
    }

    /// Vertices on the path from `u` to `v`, both inclusive.
    pub fn path_between(&self, u: usize, v: usize) -> Vec<usize> {
        let (parent, _) = self.bfs_order(v);
        let mut path = vec![u];
        let mut x = u;
        while x != v {
            x = parent[x];
            path.push(x);
        }
        path
    }

    /// Decomposes the edge set into path segments. Segment ends are the root
    /// (if given) or vertices of degree other than 2. The singleton tree has
    /// no segments.
    pub fn path_segments(&self, root: Option<usize>) -> Result<Vec<PathSegment>, TreeError> {
        if let Some(r) = root {
            self.check_vertex(r)?;
        }
        let is_end = |v: usize| Some(v) == root || self.degree(v) != 2;
        let mut used = std::collections::HashSet::new();
        let mut segments = Vec::new();
        for start in 0..self.len() {
            if !is_end(start) {
                continue;
            }
            for &first in &self.adj[start] {
                if used.contains(&(start, first)) {
                    continue;
                }
                let mut vertices = vec![start, first];
                let (mut prev, mut cur) = (start, first);
                while !is_end(cur) {
                    let next = if self.adj[cur][0] == prev { self.adj[cur][1] } else { self.adj[cur][0] };
                    prev = cur;
                    cur = next;
                    vertices.push(cur);
                }
                used.insert((cur, prev));
                segments.push(PathSegment { vertices });
            }
        }
        Ok(segments)
    }

    /// Parses the edge-list format.
    pub fn parse(text: &str) -> Result<Tree, TreeError> {
        let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim()));
        let (first_line, first) = lines.find(|(_, l)| !l.is_empty()).ok_or(TreeError::EmptyInput)?;
        let n: usize =
            first.parse().map_err(|_| TreeError::Malformed { line: first_line, content: first.to_string() })?;
        if n == 0 {
            return Err(TreeError::ZeroVertices);
        }
        let mut edges = Vec::with_capacity(n - 1);
        for (line, content) in lines {
            if content.is_empty() {
                continue;
            }
            let malformed = || TreeError::Malformed { line, content: content.to_string() };
            let mut parts = content.split_whitespace();
            let u = parts.next().and_then(|s| s.parse::<usize>().ok()).ok_or_else(malformed)?;
            let v = parts.next().and_then(|s| s.parse::<usize>().ok()).ok_or_else(malformed)?;
            if parts.next().is_some() {
                return Err(malformed());
            }
            edges.push((u, v, line));
        }
        // Validate with true file line numbers.
        let plain: Vec<_> = edges.iter().map(|&(u, v, _)| (u, v)).collect();
        Tree::from_edges(n, &plain).map_err(|e| relabel_line(e, &edges))
    }

    /// Serializes to the edge-list format, edges sorted with the smaller
    /// endpoint first.
    pub fn serialize(&self) -> String {
        let mut out = format!("{}\n", self.len());
        for (u, v) in self.edges() {
            writeln!(out, "{u} {v}").unwrap();
        }
        out
    }

    /// Relabels vertex `v` as `perm[v]`.
    pub fn relabel(&self, perm: &[usize]) -> Tree {
        let edges: Vec<_> = self.edges().into_iter().map(|(u, v)| (perm[u], perm[v])).collect();
        Tree::from_edges(self.len(), &edges).expect("relabelling preserves tree structure")
    }
}

fn relabel_line(e: TreeError, edges: &[(usize, usize, usize)]) -> TreeError {
    let fix = |line: usize| edges[line - 2].2;
    match e {
        TreeError::VertexOutOfRange { line, vertex, n } => TreeError::VertexOutOfRange { line: fix(line), vertex, n },
        TreeError::SelfLoop { line, vertex } => TreeError::SelfLoop { line: fix(line), vertex },
        TreeError::DuplicateEdge { line, u, v } => TreeError::DuplicateEdge { line: fix(line), u, v },
        TreeError::Cycle { line, u, v } => TreeError::Cycle { line: fix(line), u, v },
        other => other,
    }
}

impl std::str::FromStr for Tree {
    type Err = TreeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Tree::parse(s)
    }
}
