//! Finite trees and forests over dense vertex ids.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::TreeError;

pub type Vertex = usize;

/// Read-only adjacency access shared by [`Tree`] and [`Forest`].
///
/// Implementors must be acyclic; the solvers rely on it.
pub trait Acyclic {
    fn order(&self) -> usize;
    fn neighbors(&self, v: Vertex) -> &[Vertex];

    fn degree(&self, v: Vertex) -> usize {
        self.neighbors(v).len()
    }
}

/// An immutable tree. Neighbor lists are sorted ascending.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Tree {
    adj: Vec<Vec<Vertex>>,
}

impl Tree {
    /// Builds a tree on vertices `0..n` from an edge list.
    pub fn new(n: usize, edges: &[(Vertex, Vertex)]) -> Result<Self, TreeError> {
        let adj = adjacency(n, edges)?;
        if n == 0 {
            return Err(TreeError::NotATree("empty vertex set".into()));
        }
        if edges.len() != n - 1 {
            return Err(TreeError::NotATree(format!(
                "{} edges on {} vertices",
                edges.len(),
                n
            )));
        }
        let tree = Tree { adj };
        if tree.reachable_from(0) != n {
            return Err(TreeError::NotATree("disconnected".into()));
        }
        Ok(tree)
    }

    pub fn single_vertex() -> Self {
        Tree {
            adj: vec![Vec::new()],
        }
    }

    pub fn path(n: usize) -> Self {
        let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Tree::new(n, &edges).expect("path is a tree")
    }

    pub fn star(leaves: usize) -> Self {
        let edges: Vec<_> = (1..=leaves).map(|i| (0, i)).collect();
        Tree::new(leaves + 1, &edges).expect("star is a tree")
    }

    pub fn order(&self) -> usize {
        self.adj.len()
    }

    pub fn neighbors(&self, v: Vertex) -> &[Vertex] {
        &self.adj[v]
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.adj[v].len()
    }

    /// Number of edges.
    pub fn size(&self) -> usize {
        self.adj.len() - 1
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> Vec<(Vertex, Vertex)> {
        let mut out = Vec::with_capacity(self.size());
        for (u, ns) in self.adj.iter().enumerate() {
            out.extend(ns.iter().filter(|&&v| u < v).map(|&v| (u, v)));
        }
        out
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        self.adj[u].binary_search(&v).is_ok()
    }

    pub fn is_leaf(&self, v: Vertex) -> bool {
        self.adj[v].len() == 1
    }

    pub fn leaves(&self) -> Vec<Vertex> {
        (0..self.order()).filter(|&v| self.is_leaf(v)).collect()
    }

    pub fn vertices(&self) -> std::ops::Range<Vertex> {
        0..self.adj.len()
    }

    /// The forest left after deleting `removed`, relabeled densely in
    /// increasing id order. Also returns, for each new id, its old id.
    pub fn delete_vertices(&self, removed: &VertexSet) -> (Forest, Vec<Vertex>) {
        let kept: Vec<Vertex> = self.vertices().filter(|v| !removed.contains(*v)).collect();
        let mut new_id = vec![usize::MAX; self.order()];
        for (i, &v) in kept.iter().enumerate() {
            new_id[v] = i;
        }
        let adj = kept
            .iter()
            .map(|&v| {
                self.adj[v]
                    .iter()
                    .filter(|&&u| new_id[u] != usize::MAX)
                    .map(|&u| new_id[u])
                    .collect()
            })
            .collect();
        (Forest { adj }, kept)
    }

    pub fn as_forest(&self) -> Forest {
        Forest {
            adj: self.adj.clone(),
        }
    }

    /// Distances from `source` (BFS).
    pub fn distances(&self, source: Vertex) -> Vec<usize> {
        let mut dist = vec![usize::MAX; self.order()];
        dist[source] = 0;
        let mut queue = VecDeque::from([source]);
        while let Some(u) = queue.pop_front() {
            for &w in &self.adj[u] {
                if dist[w] == usize::MAX {
                    dist[w] = dist[u] + 1;
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    /// The one or two central vertices (minimum eccentricity), ascending.
    pub fn centers(&self) -> Vec<Vertex> {
        let n = self.order();
        if n <= 2 {
            return self.vertices().collect();
        }
        let mut degree: Vec<usize> = self.adj.iter().map(Vec::len).collect();
        let mut layer: Vec<Vertex> = self.leaves();
        let mut remaining = n;
        while remaining > 2 {
            remaining -= layer.len();
            let mut next = Vec::new();
            for &leaf in &layer {
                for &w in &self.adj[leaf] {
                    degree[w] -= 1;
                    if degree[w] == 1 {
                        next.push(w);
                    }
                }
            }
            layer = next;
        }
        layer.sort_unstable();
        layer
    }

    pub fn rooted(&self, root: Vertex) -> RootedView<'_> {
        RootedView::new(self, root)
    }

    /// Plain edge-list text: `n` on the first line, then one `u v` per line.
    pub fn to_edge_list(&self) -> String {
        let mut out = format!("{}\n", self.order());
        for (u, v) in self.edges() {
            out.push_str(&format!("{u} {v}\n"));
        }
        out
    }

    pub fn from_edge_list(text: &str) -> Result<Self, TreeError> {
        let mut lines = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'));
        let header = lines
            .next()
            .ok_or_else(|| TreeError::Parse("empty edge list".into()))?;
        let n: usize = header
            .parse()
            .map_err(|_| TreeError::Parse(format!("bad vertex count {header:?}")))?;
        let mut edges = Vec::new();
        for line in lines {
            let mut parts = line.split_whitespace();
            let (Some(a), Some(b), None) = (parts.next(), parts.next(), parts.next()) else {
                return Err(TreeError::Parse(format!("bad edge line {line:?}")));
            };
            let parse = |s: &str| {
                s.parse::<Vertex>()
                    .map_err(|_| TreeError::Parse(format!("bad vertex id {s:?}")))
            };
            edges.push((parse(a)?, parse(b)?));
        }
        Tree::new(n, &edges)
    }

    fn reachable_from(&self, start: Vertex) -> usize {
        self.distances(start)
            .iter()
            .filter(|&&d| d != usize::MAX)
            .count()
    }
}

impl Acyclic for Tree {
    fn order(&self) -> usize {
        self.adj.len()
    }

    fn neighbors(&self, v: Vertex) -> &[Vertex] {
        &self.adj[v]
    }
}

impl fmt::Debug for Tree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Tree(n={}, edges={:?})", self.order(), self.edges())
    }
}

/// Serialized as `{ "n": .., "edges": [[u, v], ..] }`.
#[derive(Serialize, Deserialize)]
struct TreeRepr {
    n: usize,
    edges: Vec<(Vertex, Vertex)>,
}

impl Serialize for Tree {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        TreeRepr {
            n: self.order(),
            edges: self.edges(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Tree {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let repr = TreeRepr::deserialize(d)?;
        Tree::new(repr.n, &repr.edges).map_err(serde::de::Error::custom)
    }
}

/// A disjoint union of trees, e.g. what remains of a tree after deleting
/// vertices. May be empty.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Forest {
    adj: Vec<Vec<Vertex>>,
}

impl Forest {
    pub fn new(n: usize, edges: &[(Vertex, Vertex)]) -> Result<Self, TreeError> {
        let adj = adjacency(n, edges)?;
        let forest = Forest { adj };
        let components = forest.components().len();
        if edges.len() + components != n {
            return Err(TreeError::NotATree("graph contains a cycle".into()));
        }
        Ok(forest)
    }

    /// Edges with `u < v`, in lexicographic order.
    pub fn edges(&self) -> Vec<(Vertex, Vertex)> {
        let mut out = Vec::new();
        for (u, nb) in self.adj.iter().enumerate() {
            out.extend(nb.iter().filter(|&&v| u < v).map(|&v| (u, v)));
        }
        out.sort_unstable();
        out
    }

    /// Connected components, each as an ascending vertex list; components are
    /// ordered by their smallest vertex.
    pub fn components(&self) -> Vec<Vec<Vertex>> {
        let n = self.adj.len();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for s in 0..n {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut comp = vec![s];
            let mut stack = vec![s];
            while let Some(u) = stack.pop() {
                for &w in &self.adj[u] {
                    if !seen[w] {
                        seen[w] = true;
                        comp.push(w);
                        stack.push(w);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }
}

impl Acyclic for Forest {
    fn order(&self) -> usize {
        self.adj.len()
    }

    fn neighbors(&self, v: Vertex) -> &[Vertex] {
        &self.adj[v]
    }
}

fn adjacency(n: usize, edges: &[(Vertex, Vertex)]) -> Result<Vec<Vec<Vertex>>, TreeError> {
    let mut adj = vec![Vec::new(); n];
    for &(u, v) in edges {
        if u >= n || v >= n {
            return Err(TreeError::VertexOutOfRange {
                vertex: u.max(v),
                order: n,
            });
        }
        if u == v {
            return Err(TreeError::NotATree(format!("self-loop at {u}")));
        }
        adj[u].push(v);
        adj[v].push(u);
    }
    for (u, ns) in adj.iter_mut().enumerate() {
        ns.sort_unstable();
        if ns.windows(2).any(|w| w[0] == w[1]) {
            return Err(TreeError::NotATree(format!("duplicate edge at {u}")));
        }
    }
    Ok(adj)
}

/// A set of vertex ids, iterated in ascending order.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VertexSet(BTreeSet<Vertex>);

impl VertexSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.0.contains(&v)
    }

    pub fn insert(&mut self, v: Vertex) -> bool {
        self.0.insert(v)
    }

    pub fn remove(&mut self, v: Vertex) -> bool {
        self.0.remove(&v)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = Vertex> + '_ {
        self.0.iter().copied()
    }

    pub fn is_disjoint(&self, other: &VertexSet) -> bool {
        self.0.is_disjoint(&other.0)
    }

    pub fn is_subset(&self, other: &VertexSet) -> bool {
        self.0.is_subset(&other.0)
    }

    pub fn last(&self) -> Option<Vertex> {
        self.0.last().copied()
    }

    /// Number of members adjacent to `v`.
    pub fn count_neighbors<G: Acyclic + ?Sized>(&self, g: &G, v: Vertex) -> usize {
        g.neighbors(v).iter().filter(|&&u| self.contains(u)).count()
    }

    pub fn to_vec(&self) -> Vec<Vertex> {
        self.iter().collect()
    }
}

impl FromIterator<Vertex> for VertexSet {
    fn from_iter<I: IntoIterator<Item = Vertex>>(iter: I) -> Self {
        VertexSet(iter.into_iter().collect())
    }
}

impl<const N: usize> From<[Vertex; N]> for VertexSet {
    fn from(vs: [Vertex; N]) -> Self {
        vs.into_iter().collect()
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.0.iter()).finish()
    }
}

/// Members of `u` that have a neighbor outside `u`.
pub fn boundary<G: Acyclic + ?Sized>(t: &G, u: &VertexSet) -> VertexSet {
    u.iter()
        .filter(|&v| t.neighbors(v).iter().any(|&w| !u.contains(w)))
        .collect()
}

/// A tree together with a chosen root, parent pointers and child lists.
#[derive(Clone, Debug)]
pub struct RootedView<'a> {
    pub tree: &'a Tree,
    pub root: Vertex,
    pub parent: Vec<Option<Vertex>>,
    pub children: Vec<Vec<Vertex>>,
    /// Vertices in BFS order from the root.
    pub bfs_order: Vec<Vertex>,
    pub depth: Vec<usize>,
}

impl<'a> RootedView<'a> {
    pub fn new(tree: &'a Tree, root: Vertex) -> Self {
        let n = tree.order();
        let mut parent = vec![None; n];
        let mut children = vec![Vec::new(); n];
        let mut depth = vec![0; n];
        let mut seen = vec![false; n];
        let mut bfs_order = Vec::with_capacity(n);
        seen[root] = true;
        let mut queue = VecDeque::from([root]);
        while let Some(u) = queue.pop_front() {
            bfs_order.push(u);
            for &w in tree.neighbors(u) {
                if !seen[w] {
                    seen[w] = true;
                    parent[w] = Some(u);
                    depth[w] = depth[u] + 1;
                    children[u].push(w);
                    queue.push_back(w);
                }
            }
        }
        RootedView {
            tree,
            root,
            parent,
            children,
            bfs_order,
            depth,
        }
    }

    /// `D[v]`: `v` and all of its descendants.
    pub fn subtree(&self, v: Vertex) -> VertexSet {
        let mut out = VertexSet::new();
        let mut stack = vec![v];
        while let Some(u) = stack.pop() {
            out.insert(u);
            stack.extend(self.children[u].iter().copied());
        }
        out
    }

    /// A leaf of the maximal subtree at `w` farthest from `w`; ties go to the
    /// smallest id. Returns `w` itself when it has no children.
    pub fn eccentric_leaf(&self, w: Vertex) -> Vertex {
        let mut best = (0, w);
        let mut stack = vec![(w, 0usize)];
        while let Some((u, d)) = stack.pop() {
            if self.children[u].is_empty() && (d > best.0 || (d == best.0 && u < best.1)) {
                best = (d, u);
            }
            stack.extend(self.children[u].iter().map(|&c| (c, d + 1)));
        }
        best.1
    }
}
