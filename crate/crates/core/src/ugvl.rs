//! Spaces generated by vertex-labeled trees.
//!
//! A finite ultrametric space is tree-generated when some labeled tree on its
//! points reproduces it through the path-maximum distance. This module
//! decides membership (by two independent criteria that must agree), builds
//! a generating tree, counts the open balls that fail to be centered spheres,
//! and builds the smallest tree-generated superspace.

use thiserror::Error;

use crate::diametrical::partition_subset;
use crate::rat::Rat;
use crate::represent::{isometric, representing_tree, RepresentError, RootedLabeledTree};
use crate::space::{Ball, SpaceError, UltraSpace};
use crate::tree::LabeledTree;

/// Subset search in [`is_ugvl_extension`] is exponential; inputs above this
/// many points are refused.
pub const MAX_EXTENSION_SEARCH_POINTS: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum UgvlError {
    #[error("the space has no points")]
    EmptySpace,
    #[error("not generated by a labeled tree: ball {witness:?} is not a centered sphere")]
    NotUgvl { witness: Ball },
    #[error("ball/sphere criterion says {by_balls} but representing-tree criterion says {by_tree}")]
    InternalCriterionMismatch { by_balls: bool, by_tree: bool },
    #[error("extension search limited to {max} points, got {got}")]
    InputTooLarge { max: usize, got: usize },
    #[error(transparent)]
    Represent(#[from] RepresentError),
    #[error(transparent)]
    Space(#[from] SpaceError),
}

/// Open balls that are not centered spheres, in representing-tree preorder
/// (largest ball first along each branch).
pub fn deficient_balls(space: &UltraSpace) -> Result<Vec<Ball>, UgvlError> {
    let tree = representing_tree(space)?;
    Ok(tree
        .preorder()
        .into_iter()
        .filter_map(|v| tree.node(v).payload.as_deref())
        .filter(|members| !space.is_centered_sphere(members))
        .map(|members| space.ball(members).expect("representing-tree payloads are balls"))
        .collect())
}

/// Every open ball is a centered sphere.
pub fn ball_sphere_criterion(space: &UltraSpace) -> bool {
    space.open_balls().iter().all(|b| space.is_centered_sphere(b.members()))
}

/// Every internal node of the representing tree has a leaf child.
pub fn leaf_child_criterion(tree: &RootedLabeledTree) -> bool {
    tree.internal_nodes_without_leaf_child().is_empty()
}

/// Membership test. Both criteria are evaluated; disagreement means a bug.
pub fn is_ugvl(space: &UltraSpace) -> Result<bool, UgvlError> {
    if space.is_empty() {
        return Err(UgvlError::EmptySpace);
    }
    let by_balls = ball_sphere_criterion(space);
    let by_tree = leaf_child_criterion(&representing_tree(space)?);
    if by_balls != by_tree {
        return Err(UgvlError::InternalCriterionMismatch { by_balls, by_tree });
    }
    Ok(by_balls)
}

/// Number of open balls that are not centered spheres.
pub fn delta(space: &UltraSpace) -> Result<usize, UgvlError> {
    if space.is_empty() {
        return Err(UgvlError::EmptySpace);
    }
    Ok(space.open_balls().iter().filter(|b| !space.is_centered_sphere(b.members())).count())
}

/// The same count read off the representing tree: internal nodes lacking a
/// leaf child.
pub fn delta_from_tree(space: &UltraSpace) -> Result<usize, UgvlError> {
    Ok(representing_tree(space)?.internal_nodes_without_leaf_child().len())
}

/// A labeled tree on the points of `space` whose path-maximum distance is
/// exactly `space`.
///
/// Recursive on the diametral partition: a singleton part `{c}` (lowest
/// index) is labeled `diam`, every other part gets its own tree, and `c` is
/// joined to the lowest-index point of each of those parts.
pub fn generating_tree(space: &UltraSpace) -> Result<LabeledTree, UgvlError> {
    if let Some(witness) = deficient_balls(space)?.into_iter().next() {
        return Err(UgvlError::NotUgvl { witness });
    }

    fn build(space: &UltraSpace, members: &[usize], labels: &mut [Rat], edges: &mut Vec<(usize, usize)>) {
        if members.len() < 2 {
            return;
        }
        let partition = partition_subset(space, members).expect("two or more points");
        let hub =
            partition.singleton_part().expect("every ball of a tree-generated space has a singleton part");
        labels[hub] = partition.space_diameter().clone();
        for part in partition.parts().iter().filter(|p| p[0] != hub) {
            build(space, part, labels, edges);
            edges.push((hub, part[0]));
        }
    }

    let mut labels = vec![Rat::zero(); space.len()];
    let mut edges = Vec::with_capacity(space.len().saturating_sub(1));
    build(space, &space.all_points(), &mut labels, &mut edges);
    let tree = LabeledTree::new(space.names().to_vec(), labels, edges).expect("construction yields a tree");
    debug_assert_eq!(tree.distance_matrix(), space.matrix());
    Ok(tree)
}

/// A minimal tree-generated extension together with how the input sits in it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtensionResult {
    pub extended: UltraSpace,
    /// `embedding[i]` is the index in `extended` of original point `i`.
    pub embedding: Vec<usize>,
    /// New point index and the deficient ball it was attached to.
    pub added: Vec<(usize, Ball)>,
}

fn fresh_name(taken: &[String], k: usize) -> String {
    let mut prefix = String::from("w#");
    loop {
        let candidate = format!("{prefix}{k}");
        if !taken.contains(&candidate) {
            return candidate;
        }
        prefix.push('#');
    }
}

/// Extension distances for new points glued under balls `a` and `b`, using
/// representatives `ra` and `rb`: `max(diam a, diam b, d(ra, rb))`.
fn glued_distance(space: &UltraSpace, a: &Ball, ra: usize, b: &Ball, rb: usize) -> Rat {
    let diam = Rat::max_of(a.diameter(), b.diameter());
    Rat::max_of(diam, space.dist(ra, rb)).clone()
}

/// Adds one point `w_B` per open ball `B` that is not a centered sphere, at
/// distance `max(diam B, d(b, x))` from each original `x` (any `b` in `B`).
/// The result is the smallest tree-generated space containing the input,
/// unique up to isometry.
pub fn minimal_extension(space: &UltraSpace) -> Result<ExtensionResult, UgvlError> {
    let deficient = deficient_balls(space)?;
    let n = space.len();
    let total = n + deficient.len();

    let mut names = space.names().to_vec();
    for k in 1..=deficient.len() {
        let name = fresh_name(&names, k);
        names.push(name);
    }

    let point_ball: Vec<Option<&Ball>> =
        (0..total).map(|i| if i < n { None } else { Some(&deficient[i - n]) }).collect();
    let distance = |i: usize, j: usize, pick: fn(&Ball) -> usize| -> Rat {
        if i == j {
            return Rat::zero();
        }
        match (point_ball[i], point_ball[j]) {
            (None, None) => space.dist(i, j).clone(),
            (Some(a), None) => Rat::max_of(a.diameter(), space.dist(pick(a), j)).clone(),
            (None, Some(b)) => Rat::max_of(b.diameter(), space.dist(i, pick(b))).clone(),
            (Some(a), Some(b)) => glued_distance(space, a, pick(a), b, pick(b)),
        }
    };

    let mut dist = Vec::with_capacity(total * total);
    for i in 0..total {
        for j in 0..total {
            let d = distance(i, j, Ball::representative);
            debug_assert_eq!(
                d,
                distance(i, j, |b| *b.members().last().unwrap()),
                "extension distance depends on the chosen representative"
            );
            dist.push(d);
        }
    }

    let extended = UltraSpace::from_trusted(names, dist);
    Ok(ExtensionResult {
        extended,
        embedding: (0..n).collect(),
        added: deficient.into_iter().enumerate().map(|(k, b)| (n + k, b)).collect(),
    })
}

/// Calls `visit` on every `k`-subset of `0..n` in lexicographic order until
/// it returns `true`.
pub(crate) fn any_subset(n: usize, k: usize, mut visit: impl FnMut(&[usize]) -> bool) -> bool {
    if k > n {
        return false;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        if visit(&idx) {
            return true;
        }
        let Some(i) = (0..k).rev().find(|&i| idx[i] != i + n - k) else {
            return false;
        };
        idx[i] += 1;
        for j in (i + 1)..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Some `small.len()`-point subset of `big` is isometric to `small`.
pub fn contains_isometric_copy(big: &UltraSpace, small: &UltraSpace) -> bool {
    let target = small.distance_multiset();
    any_subset(big.len(), small.len(), |subset| {
        let sub = big.induced_subspace(subset).expect("subset indices are valid");
        sub.distance_multiset() == target && isometric(&sub, small)
    })
}

/// `big` is tree-generated and contains an isometric copy of `small`.
pub fn is_ugvl_extension(big: &UltraSpace, small: &UltraSpace) -> Result<bool, UgvlError> {
    if big.len() > MAX_EXTENSION_SEARCH_POINTS {
        return Err(UgvlError::InputTooLarge { max: MAX_EXTENSION_SEARCH_POINTS, got: big.len() });
    }
    if small.is_empty() {
        return Err(UgvlError::EmptySpace);
    }
    Ok(is_ugvl(big)? && contains_isometric_copy(big, small))
}
