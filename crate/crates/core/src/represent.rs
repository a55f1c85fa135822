//! Representing trees of finite ultrametric spaces.
//!
//! The representing tree of `X` has the open balls of `X` as nodes. The root
//! is `X` itself, the children of a ball are the parts of its diametrical
//! graph, and every node is labeled with the diameter of its ball. Two finite
//! ultrametric spaces are isometric exactly when their representing trees are
//! isomorphic as labeled rooted trees, which is how [`isometric`] works.

use std::fmt;

use thiserror::Error;

use crate::diametrical::partition_subset;
use crate::rat::Rat;
use crate::space::{Ball, PointSet, SpaceError, UltraSpace};
use crate::tree::{LabeledTree, TreeError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RepresentError {
    #[error("the space has no points")]
    EmptySpace,
    #[error("malformed rooted tree: {0}")]
    Structure(String),
    #[error("tree violates the representing-tree shape conditions")]
    InvalidShape,
    #[error("not an open ball of the space")]
    NotABall,
    #[error(transparent)]
    Space(#[from] SpaceError),
    #[error(transparent)]
    Tree(#[from] TreeError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Node {
    pub label: Rat,
    pub children: Vec<usize>,
    /// Points of the ball this node stands for, as indices into
    /// [`RootedLabeledTree::points`].
    pub payload: Option<PointSet>,
    pub name: Option<String>,
}

impl Node {
    pub fn new(label: Rat, children: Vec<usize>) -> Self {
        Node { label, children, payload: None, name: None }
    }

    pub fn leaf(label: Rat) -> Self {
        Node::new(label, Vec::new())
    }

    pub fn is_leaf(&self) -> bool {
        self.children.is_empty()
    }
}

/// A rooted tree with rational node labels and optional point-set payloads.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootedLabeledTree {
    nodes: Vec<Node>,
    root: usize,
    points: Vec<String>,
    parent: Vec<Option<usize>>,
}

/// Byte string identifying a labeled rooted tree up to isomorphism.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalCode(Vec<u8>);

impl CanonicalCode {
    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }
}

impl fmt::Display for CanonicalCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in &self.0 {
            write!(f, "{b:02x}")?;
        }
        Ok(())
    }
}

fn push_chunk(out: &mut Vec<u8>, bytes: &[u8]) {
    out.extend_from_slice(&(bytes.len() as u32).to_be_bytes());
    out.extend_from_slice(bytes);
}

impl RootedLabeledTree {
    /// Checks that child links form a tree rooted at `root` and that every
    /// payload index refers into `points`.
    pub fn new(nodes: Vec<Node>, root: usize, points: Vec<String>) -> Result<Self, RepresentError> {
        let n = nodes.len();
        if root >= n {
            return Err(RepresentError::Structure(format!("root {root} out of range")));
        }
        let mut parent: Vec<Option<usize>> = vec![None; n];
        for (id, node) in nodes.iter().enumerate() {
            if node.label.is_negative() {
                return Err(RepresentError::Structure(format!("node {id} has a negative label")));
            }
            for &c in &node.children {
                if c >= n {
                    return Err(RepresentError::Structure(format!("child {c} out of range")));
                }
                if c == root || parent[c].is_some() {
                    return Err(RepresentError::Structure(format!("node {c} has two parents")));
                }
                parent[c] = Some(id);
            }
            if let Some(payload) = &node.payload {
                if let Some(&p) = payload.iter().find(|&&p| p >= points.len()) {
                    return Err(RepresentError::Structure(format!("payload point {p} out of range")));
                }
            }
        }
        // every non-root node has one parent; reachability rules out cycles
        let mut seen = vec![false; n];
        let mut stack = vec![root];
        seen[root] = true;
        let mut reached = 1;
        while let Some(v) = stack.pop() {
            for &c in &nodes[v].children {
                if !seen[c] {
                    seen[c] = true;
                    reached += 1;
                    stack.push(c);
                }
            }
        }
        if reached != n {
            return Err(RepresentError::Structure("not every node is reachable from the root".into()));
        }
        Ok(RootedLabeledTree { nodes, root, points, parent })
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn node(&self, id: usize) -> &Node {
        &self.nodes[id]
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn parent(&self, id: usize) -> Option<usize> {
        self.parent[id]
    }

    /// Names that payload indices refer to.
    pub fn points(&self) -> &[String] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Node ids in preorder, children visited in stored order.
    pub fn preorder(&self) -> Vec<usize> {
        let mut order = Vec::with_capacity(self.len());
        let mut stack = vec![self.root];
        while let Some(v) = stack.pop() {
            order.push(v);
            stack.extend(self.nodes[v].children.iter().rev());
        }
        order
    }

    pub fn leaves(&self) -> Vec<usize> {
        self.preorder().into_iter().filter(|&v| self.nodes[v].is_leaf()).collect()
    }

    /// Display name of a node: its own name, else `b<id>`.
    pub fn node_name(&self, id: usize) -> String {
        self.nodes[id].name.clone().unwrap_or_else(|| format!("b{id}"))
    }

    /// No node has exactly one child, leaves are exactly the nodes labeled
    /// zero, and labels strictly decrease from parent to child.
    pub fn is_representing_shape(&self) -> bool {
        self.nodes.iter().all(|node| {
            node.children.len() != 1
                && node.is_leaf() == node.label.is_zero()
                && node.children.iter().all(|&c| self.nodes[c].label < node.label)
        })
    }

    /// Internal nodes none of whose children is a leaf, in preorder.
    pub fn internal_nodes_without_leaf_child(&self) -> Vec<usize> {
        self.preorder()
            .into_iter()
            .filter(|&v| {
                let node = &self.nodes[v];
                !node.is_leaf() && !node.children.iter().any(|&c| self.nodes[c].is_leaf())
            })
            .collect()
    }

    fn depth(&self) -> Vec<usize> {
        let mut depth = vec![0; self.len()];
        for v in self.preorder() {
            for &c in &self.nodes[v].children {
                depth[c] = depth[v] + 1;
            }
        }
        depth
    }

    fn lca(&self, depth: &[usize], mut a: usize, mut b: usize) -> usize {
        while depth[a] > depth[b] {
            a = self.parent[a].expect("non-root node has a parent");
        }
        while depth[b] > depth[a] {
            b = self.parent[b].expect("non-root node has a parent");
        }
        while a != b {
            a = self.parent[a].expect("non-root node has a parent");
            b = self.parent[b].expect("non-root node has a parent");
        }
        a
    }

    fn leaf_point_name(&self, leaf: usize, ordinal: usize) -> String {
        let node = &self.nodes[leaf];
        match &node.payload {
            Some(p) if p.len() == 1 => self.points[p[0]].clone(),
            _ => node.name.clone().unwrap_or_else(|| format!("p{ordinal}")),
        }
    }

    /// The space on the leaves (in preorder) with `d(p, q)` the label of the
    /// lowest common ancestor of `p` and `q`.
    pub fn realize_space(&self) -> Result<UltraSpace, RepresentError> {
        if !self.is_representing_shape() {
            return Err(RepresentError::InvalidShape);
        }
        let leaves = self.leaves();
        let depth = self.depth();
        let names = leaves.iter().enumerate().map(|(k, &leaf)| self.leaf_point_name(leaf, k)).collect();
        let matrix =
            leaves
                .iter()
                .map(|&a| {
                    leaves
                        .iter()
                        .map(|&b| {
                            if a == b {
                                Rat::zero()
                            } else {
                                self.nodes[self.lca(&depth, a, b)].label.clone()
                            }
                        })
                        .collect()
                })
                .collect();
        Ok(UltraSpace::new(names, matrix)?)
    }

    /// Bottom-up canonical encoding. Each node contributes its label followed
    /// by the sorted multiset of its children's codes; names, payloads and
    /// child order do not affect the result.
    pub fn canonical_code(&self) -> CanonicalCode {
        let mut codes: Vec<Vec<u8>> = vec![Vec::new(); self.len()];
        for v in self.preorder().into_iter().rev() {
            let node = &self.nodes[v];
            let mut children: Vec<Vec<u8>> =
                node.children.iter().map(|&c| std::mem::take(&mut codes[c])).collect();
            children.sort_unstable();
            let mut out = Vec::new();
            push_chunk(&mut out, &node.label.numer().to_signed_bytes_be());
            push_chunk(&mut out, &node.label.denom().to_signed_bytes_be());
            out.extend_from_slice(&(children.len() as u32).to_be_bytes());
            for child in &children {
                push_chunk(&mut out, child);
            }
            codes[v] = out;
        }
        CanonicalCode(std::mem::take(&mut codes[self.root]))
    }

    pub fn is_isomorphic(&self, other: &RootedLabeledTree) -> bool {
        self.canonical_code() == other.canonical_code()
    }

    /// The same tree viewed as a free labeled tree on its nodes, vertex `i`
    /// being node `i`.
    pub fn to_labeled_tree(&self) -> Result<LabeledTree, RepresentError> {
        let names = (0..self.len()).map(|id| self.node_name(id)).collect();
        let labels = self.nodes.iter().map(|n| n.label.clone()).collect();
        let edges = self
            .nodes
            .iter()
            .enumerate()
            .flat_map(|(id, n)| n.children.iter().map(move |&c| (id, c)))
            .collect();
        Ok(LabeledTree::new(names, labels, edges)?)
    }

    /// Copy with one new leaf labeled zero attached under each listed node.
    /// New leaves are appended after the existing nodes.
    pub fn with_glued_leaves(&self, at: &[usize]) -> RootedLabeledTree {
        let mut nodes = self.nodes.clone();
        for &v in at {
            let id = nodes.len();
            nodes.push(Node::leaf(Rat::zero()));
            nodes[v].children.push(id);
        }
        RootedLabeledTree::new(nodes, self.root, self.points.clone())
            .expect("gluing leaves preserves tree structure")
    }
}

/// The representing tree of a nonempty space. Nodes are numbered in
/// preorder, children ordered by lowest contained point index.
pub fn representing_tree(space: &UltraSpace) -> Result<RootedLabeledTree, RepresentError> {
    if space.is_empty() {
        return Err(RepresentError::EmptySpace);
    }
    fn build(space: &UltraSpace, members: PointSet, nodes: &mut Vec<Node>) -> usize {
        let id = nodes.len();
        let label = space.diameter_unchecked(&members);
        let parts = if members.len() >= 2 {
            partition_subset(space, &members).expect("two or more points").parts().to_vec()
        } else {
            Vec::new()
        };
        nodes.push(Node { label, children: Vec::new(), payload: Some(members), name: None });
        for part in parts {
            let child = build(space, part, nodes);
            nodes[id].children.push(child);
        }
        id
    }
    let mut nodes = Vec::new();
    build(space, space.all_points(), &mut nodes);
    RootedLabeledTree::new(nodes, 0, space.names().to_vec())
}

/// Isometry test via canonical codes of representing trees.
pub fn isometric(a: &UltraSpace, b: &UltraSpace) -> bool {
    match (representing_tree(a), representing_tree(b)) {
        (Ok(ta), Ok(tb)) => ta.is_isomorphic(&tb),
        _ => a.is_empty() && b.is_empty(),
    }
}

/// Hausdorff distance between two open balls:
/// `max(max_{x in B1} d(x, B2), max_{x in B2} d(x, B1))`.
pub fn hausdorff_distance(space: &UltraSpace, b1: &Ball, b2: &Ball) -> Result<Rat, RepresentError> {
    if !space.is_ball(b1.members()) || !space.is_ball(b2.members()) {
        return Err(RepresentError::NotABall);
    }
    let directed = |from: &Ball, to: &Ball| {
        from.members()
            .iter()
            .map(|&x| to.members().iter().map(|&b| space.dist(x, b)).min().expect("balls are nonempty"))
            .max()
            .expect("balls are nonempty")
            .clone()
    };
    let (forward, backward) = (directed(b1, b2), directed(b2, b1));
    Ok(Rat::max_of(&forward, &backward).clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{pyramid, quadruple, space};

    fn r(v: i64) -> Rat {
        Rat::from_integer(v)
    }

    /// Root labeled 2 over two nodes labeled 1, each over two leaves.
    pub(crate) fn quadruple_shape() -> RootedLabeledTree {
        let nodes = vec![
            Node::new(r(2), vec![1, 2]),
            Node::new(r(1), vec![3, 4]),
            Node::new(r(1), vec![5, 6]),
            Node::leaf(r(0)),
            Node::leaf(r(0)),
            Node::leaf(r(0)),
            Node::leaf(r(0)),
        ];
        RootedLabeledTree::new(nodes, 0, vec![]).unwrap()
    }

    #[test]
    fn representing_tree_of_quadruple() {
        let t = representing_tree(&quadruple()).unwrap();
        assert_eq!(t.len(), 7);
        assert_eq!(t.node(0).label, r(2));
        assert_eq!(t.node(0).children.len(), 2);
        for &c in &t.node(0).children {
            assert_eq!(t.node(c).label, r(1));
            assert_eq!(t.node(c).children.len(), 2);
            for &leaf in &t.node(c).children {
                assert_eq!(t.node(leaf).label, r(0));
                assert!(t.node(leaf).is_leaf());
            }
        }
        assert_eq!(t.canonical_code(), quadruple_shape().canonical_code());
        assert!(t.is_representing_shape());
    }

    #[test]
    fn representing_tree_of_one_point() {
        let t = representing_tree(&space(&["a"], &[&["0"]]).unwrap()).unwrap();
        assert_eq!(t.len(), 1);
        assert_eq!(t.node(0).label, r(0));
        assert!(representing_tree(&space(&[], &[]).unwrap()).is_err());
    }

    #[test]
    fn representing_tree_of_pyramid() {
        let t = representing_tree(&pyramid()).unwrap();
        assert_eq!(t.len(), 8);
        let root = t.node(t.root());
        assert_eq!(root.children.len(), 3);
        let labels: Vec<Rat> = root.children.iter().map(|&c| t.node(c).label.clone()).collect();
        assert_eq!(labels, vec![r(1), r(1), r(0)]);
        let w = root.children[2];
        assert_eq!(t.node(w).payload.as_deref(), Some(&[4][..]));
    }

    #[test]
    fn shape_conditions() {
        assert!(quadruple_shape().is_representing_shape());
        let single = RootedLabeledTree::new(vec![Node::leaf(r(0))], 0, vec![]).unwrap();
        assert!(single.is_representing_shape());
        let one_child =
            RootedLabeledTree::new(vec![Node::new(r(2), vec![1]), Node::leaf(r(0))], 0, vec![]).unwrap();
        assert!(!one_child.is_representing_shape());
        let flat = RootedLabeledTree::new(
            vec![
                Node::new(r(1), vec![1, 2]),
                Node::new(r(1), vec![3, 4]),
                Node::leaf(r(0)),
                Node::leaf(r(0)),
                Node::leaf(r(0)),
            ],
            0,
            vec![],
        )
        .unwrap();
        assert!(!flat.is_representing_shape());
        let zero_internal = RootedLabeledTree::new(
            vec![Node::new(r(0), vec![1, 2]), Node::leaf(r(0)), Node::leaf(r(0))],
            0,
            vec![],
        )
        .unwrap();
        assert!(!zero_internal.is_representing_shape());
    }

    #[test]
    fn structure_errors() {
        assert!(RootedLabeledTree::new(vec![Node::leaf(r(0))], 1, vec![]).is_err());
        let cyc = vec![Node::new(r(1), vec![1]), Node::new(r(1), vec![2]), Node::new(r(1), vec![1])];
        assert!(RootedLabeledTree::new(cyc, 0, vec![]).is_err());
        let orphan = vec![Node::leaf(r(0)), Node::leaf(r(0))];
        assert!(RootedLabeledTree::new(orphan, 0, vec![]).is_err());
        let mut bad_payload = Node::leaf(r(0));
        bad_payload.payload = Some(vec![3]);
        assert!(RootedLabeledTree::new(vec![bad_payload], 0, vec!["a".into()]).is_err());
    }

    #[test]
    fn realization() {
        let s = quadruple_shape().realize_space().unwrap();
        assert!(isometric(&s, &quadruple()));

        let single = RootedLabeledTree::new(vec![Node::leaf(r(0))], 0, vec![]).unwrap();
        assert_eq!(single.realize_space().unwrap().len(), 1);

        let pair = RootedLabeledTree::new(
            vec![Node::new(r(3), vec![1, 2]), Node::leaf(r(0)), Node::leaf(r(0))],
            0,
            vec![],
        )
        .unwrap();
        let s = pair.realize_space().unwrap();
        assert_eq!(s.names(), &["p0", "p1"]);
        assert_eq!(s.dist(0, 1), &r(3));

        let one_child =
            RootedLabeledTree::new(vec![Node::new(r(2), vec![1]), Node::leaf(r(0))], 0, vec![]).unwrap();
        assert_eq!(one_child.realize_space(), Err(RepresentError::InvalidShape));
    }

    #[test]
    fn realization_keeps_payload_names() {
        let q = quadruple();
        let s = representing_tree(&q).unwrap().realize_space().unwrap();
        // leaves come out in preorder: x, z, y, t
        assert_eq!(s.names(), &["x", "z", "y", "t"]);
        let back = q.induced_subspace(&[0, 2, 1, 3]).unwrap();
        assert_eq!(s, back);
    }

    #[test]
    fn canonical_codes() {
        let leaf = || RootedLabeledTree::new(vec![Node::leaf(r(0))], 0, vec![]).unwrap();
        assert_eq!(leaf().canonical_code(), leaf().canonical_code());

        let t = quadruple_shape();
        let mut swapped_nodes = t.nodes().to_vec();
        swapped_nodes[0].children.reverse();
        let swapped = RootedLabeledTree::new(swapped_nodes, 0, vec![]).unwrap();
        assert_eq!(t.canonical_code(), swapped.canonical_code());

        let pyr = representing_tree(&pyramid()).unwrap();
        assert_ne!(t.canonical_code(), pyr.canonical_code());

        // labels matter, not just shape
        let a = RootedLabeledTree::new(
            vec![Node::new(r(3), vec![1, 2]), Node::leaf(r(0)), Node::leaf(r(0))],
            0,
            vec![],
        )
        .unwrap();
        let b = RootedLabeledTree::new(
            vec![Node::new(Rat::new(7, 2), vec![1, 2]), Node::leaf(r(0)), Node::leaf(r(0))],
            0,
            vec![],
        )
        .unwrap();
        assert!(!a.is_isomorphic(&b));
    }

    #[test]
    fn isometry() {
        let q = quadruple();
        let renamed = space(
            &["a", "b", "c", "d"],
            &[&["0", "2", "1", "2"], &["2", "0", "2", "1"], &["1", "2", "0", "2"], &["2", "1", "2", "0"]],
        )
        .unwrap();
        assert!(isometric(&q, &renamed));
        assert!(!isometric(&q, &pyramid()));
        let p1 = space(&["a", "b"], &[&["0", "3"], &["3", "0"]]).unwrap();
        let p2 = space(&["u", "v"], &[&["0", "3"], &["3", "0"]]).unwrap();
        assert!(isometric(&p1, &p2));
    }

    #[test]
    fn hausdorff() {
        let q = quadruple();
        let xz = q.ball(&[0, 2]).unwrap();
        let yt = q.ball(&[1, 3]).unwrap();
        let x = q.ball(&[0]).unwrap();
        assert_eq!(hausdorff_distance(&q, &xz, &xz).unwrap(), r(0));
        assert_eq!(hausdorff_distance(&q, &xz, &yt).unwrap(), r(2));
        assert_eq!(hausdorff_distance(&q, &x, &xz).unwrap(), r(1));

        let p = pyramid();
        let not_ball_in_p = p.ball(&[0, 1, 2, 3, 4]).unwrap();
        assert_eq!(hausdorff_distance(&q, &not_ball_in_p, &x), Err(RepresentError::NotABall));
    }

    #[test]
    fn glued_leaves() {
        let t = representing_tree(&quadruple()).unwrap();
        let glued = t.with_glued_leaves(&[0]);
        assert!(glued.is_isomorphic(&representing_tree(&pyramid()).unwrap()));
    }
}
