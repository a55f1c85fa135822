//! Free vertex-labeled trees and the path-maximum distance they generate.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::rat::Rat;
use crate::space::{Ball, SpaceError, UltraSpace};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TreeError {
    #[error("a tree needs at least one vertex")]
    NoVertices,
    #[error("{vertices} vertices but {labels} labels")]
    LabelCount { vertices: usize, labels: usize },
    #[error("duplicate vertex name {0:?}")]
    DuplicateName(String),
    #[error("unknown vertex {0:?}")]
    UnknownVertex(String),
    #[error("negative label on vertex {0:?}")]
    NegativeLabel(String),
    #[error("self loop on vertex {0:?}")]
    SelfLoop(String),
    #[error("edge {{{0}, {1}}} listed twice")]
    DuplicateEdge(String, String),
    #[error("edge {{{0}, {1}}} closes a cycle")]
    HasCycle(String, String),
    #[error("graph is disconnected: vertex {0:?} is unreachable")]
    Disconnected(String),
    #[error("edge {{{0}, {1}}} has both endpoint labels zero, so d_l is not a metric")]
    NotAnUltrametricGenerator(String, String),
    #[error("the ball is not an open ball of the generated space")]
    NotABall,
    #[error("the tree does not generate the given space")]
    SpaceMismatch,
    #[error(transparent)]
    Space(#[from] SpaceError),
}

/// An unrooted tree with a nonnegative rational label on every vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabeledTree {
    names: Vec<String>,
    labels: Vec<Rat>,
    edges: Vec<(usize, usize)>,
    adjacency: Vec<Vec<usize>>,
}

/// Disjoint-set forest used for the cycle check.
struct Components(Vec<usize>);

impl Components {
    fn find(&mut self, mut x: usize) -> usize {
        while self.0[x] != x {
            self.0[x] = self.0[self.0[x]];
            x = self.0[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.0[ra] = rb;
        true
    }
}

impl LabeledTree {
    /// Validates vertex names, labels and an index-based edge list.
    pub fn new(names: Vec<String>, labels: Vec<Rat>, edges: Vec<(usize, usize)>) -> Result<Self, TreeError> {
        let n = names.len();
        if n == 0 {
            return Err(TreeError::NoVertices);
        }
        if labels.len() != n {
            return Err(TreeError::LabelCount { vertices: n, labels: labels.len() });
        }
        let mut seen = BTreeSet::new();
        for name in &names {
            if !seen.insert(name.as_str()) {
                return Err(TreeError::DuplicateName(name.clone()));
            }
        }
        if let Some(i) = labels.iter().position(Rat::is_negative) {
            return Err(TreeError::NegativeLabel(names[i].clone()));
        }

        let mut adjacency = vec![Vec::new(); n];
        let mut seen_edges = BTreeSet::new();
        let mut components = Components((0..n).collect());
        for &(u, v) in &edges {
            for w in [u, v] {
                if w >= n {
                    return Err(TreeError::UnknownVertex(format!("#{w}")));
                }
            }
            if u == v {
                return Err(TreeError::SelfLoop(names[u].clone()));
            }
            if !seen_edges.insert((u.min(v), u.max(v))) {
                return Err(TreeError::DuplicateEdge(names[u].clone(), names[v].clone()));
            }
            if !components.union(u, v) {
                return Err(TreeError::HasCycle(names[u].clone(), names[v].clone()));
            }
            adjacency[u].push(v);
            adjacency[v].push(u);
        }
        let root = components.find(0);
        if let Some(x) = (1..n).find(|&x| components.find(x) != root) {
            return Err(TreeError::Disconnected(names[x].clone()));
        }

        Ok(LabeledTree { names, labels, edges, adjacency })
    }

    /// Name-based constructor used by the document layer.
    pub fn from_named_edges(
        names: Vec<String>,
        labels: Vec<Rat>,
        edges: &[(String, String)],
    ) -> Result<Self, TreeError> {
        let index = |name: &str| {
            names.iter().position(|n| n == name).ok_or_else(|| TreeError::UnknownVertex(name.to_owned()))
        };
        let edges =
            edges.iter().map(|(u, v)| Ok((index(u)?, index(v)?))).collect::<Result<Vec<_>, TreeError>>()?;
        LabeledTree::new(names, labels, edges)
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn labels(&self) -> &[Rat] {
        &self.labels
    }

    pub fn label(&self, v: usize) -> &Rat {
        &self.labels[v]
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// First edge whose endpoints are both labeled zero.
    pub fn degenerate_edge(&self) -> Option<(usize, usize)> {
        self.edges.iter().copied().find(|&(u, v)| self.labels[u].is_zero() && self.labels[v].is_zero())
    }

    /// `d_l` is an ultrametric iff every edge has a positive endpoint label.
    pub fn generates_ultrametric(&self) -> bool {
        self.degenerate_edge().is_none()
    }

    /// Path-maximum from `source` to every vertex, endpoints included, with
    /// zero on the diagonal.
    fn path_max_from(&self, source: usize) -> Vec<Rat> {
        let n = self.len();
        let mut out = vec![Rat::zero(); n];
        let mut visited = vec![false; n];
        visited[source] = true;
        let mut stack = vec![(source, self.labels[source].clone())];
        while let Some((v, running)) = stack.pop() {
            for &w in &self.adjacency[v] {
                if !visited[w] {
                    visited[w] = true;
                    let m = Rat::max_of(&running, &self.labels[w]).clone();
                    out[w] = m.clone();
                    stack.push((w, m));
                }
            }
        }
        out
    }

    /// `d_l(u, v)`: zero when `u == v`, else the largest label on the path.
    pub fn d_l(&self, u: usize, v: usize) -> Result<Rat, TreeError> {
        for w in [u, v] {
            if w >= self.len() {
                return Err(TreeError::UnknownVertex(format!("#{w}")));
            }
        }
        if u == v {
            return Ok(Rat::zero());
        }
        let path = self.path(u, v);
        Ok(path.iter().map(|&w| &self.labels[w]).max().cloned().unwrap_or_default())
    }

    /// The unique path from `u` to `v`, both endpoints included.
    pub fn path(&self, u: usize, v: usize) -> Vec<usize> {
        let parent = self.parents_from(u);
        let mut path = vec![v];
        let mut cur = v;
        while cur != u {
            cur = parent[cur];
            path.push(cur);
        }
        path.reverse();
        path
    }

    fn parents_from(&self, root: usize) -> Vec<usize> {
        let mut parent = vec![usize::MAX; self.len()];
        parent[root] = root;
        let mut stack = vec![root];
        while let Some(v) = stack.pop() {
            for &w in &self.adjacency[v] {
                if parent[w] == usize::MAX {
                    parent[w] = v;
                    stack.push(w);
                }
            }
        }
        parent
    }

    /// Full `d_l` matrix, one traversal per source.
    pub fn distance_matrix(&self) -> Vec<Vec<Rat>> {
        (0..self.len()).map(|s| self.path_max_from(s)).collect()
    }

    /// The ultrametric space `(V(T), d_l)`.
    pub fn to_space(&self) -> Result<UltraSpace, TreeError> {
        if let Some((u, v)) = self.degenerate_edge() {
            return Err(TreeError::NotAnUltrametricGenerator(self.names[u].clone(), self.names[v].clone()));
        }
        Ok(UltraSpace::new(self.names.clone(), self.distance_matrix())?)
    }

    /// Union of the paths from the lowest-index member of `ball` to every
    /// other member. Its vertex set is exactly the ball, and its restricted
    /// labeling generates the induced subspace on the ball.
    pub fn ball_subtree(&self, space: &UltraSpace, ball: &Ball) -> Result<LabeledTree, TreeError> {
        if space.names() != self.names() {
            return Err(TreeError::SpaceMismatch);
        }
        if !space.is_ball(ball.members()) {
            return Err(TreeError::NotABall);
        }
        let anchor = ball.representative();
        let parent = self.parents_from(anchor);
        let mut in_subtree = vec![false; self.len()];
        in_subtree[anchor] = true;
        for &x in ball.members() {
            let mut cur = x;
            while !in_subtree[cur] {
                in_subtree[cur] = true;
                cur = parent[cur];
            }
        }
        let vertices: Vec<usize> = (0..self.len()).filter(|&v| in_subtree[v]).collect();
        if vertices != ball.members() {
            return Err(TreeError::SpaceMismatch);
        }

        let mut position = vec![usize::MAX; self.len()];
        for (i, &v) in vertices.iter().enumerate() {
            position[v] = i;
        }
        let edges = self
            .edges
            .iter()
            .filter(|&&(u, v)| in_subtree[u] && in_subtree[v])
            .map(|&(u, v)| (position[u], position[v]))
            .collect();
        LabeledTree::new(
            vertices.iter().map(|&v| self.names[v].clone()).collect(),
            vertices.iter().map(|&v| self.labels[v].clone()).collect(),
            edges,
        )
    }
}
