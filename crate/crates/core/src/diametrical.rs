//! Parts of the diametrical graph.
//!
//! Two points are joined in the diametrical graph when their distance equals
//! the diameter of the space. In an ultrametric space that graph is complete
//! multipartite, and its parts are the open balls of radius `diam X`. Only the
//! partition is ever built; an edge is implied by "different parts".

use thiserror::Error;

use crate::rat::Rat;
use crate::space::{PointSet, UltraSpace};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PartitionError {
    #[error("diametral partition needs at least two points, got {0}")]
    TooSmall(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiametralPartition {
    parts: Vec<PointSet>,
    space_diameter: Rat,
}

impl DiametralPartition {
    /// Parts in order of their lowest point index.
    pub fn parts(&self) -> &[PointSet] {
        &self.parts
    }

    pub fn space_diameter(&self) -> &Rat {
        &self.space_diameter
    }

    /// Some part is a single point. Equivalently the diametrical graph has a
    /// spanning star, or the whole space is a centered sphere.
    pub fn has_singleton_part(&self) -> bool {
        self.parts.iter().any(|p| p.len() == 1)
    }

    /// Lowest-index point forming a part on its own.
    pub fn singleton_part(&self) -> Option<usize> {
        self.parts.iter().find(|p| p.len() == 1).map(|p| p[0])
    }
}

/// Partitions the whole space.
pub fn diametral_partition(space: &UltraSpace) -> Result<DiametralPartition, PartitionError> {
    partition_subset(space, &space.all_points())
}

/// Partitions the subspace on `subset` (sorted) by the relation
/// `d(u, v) < diam subset`.
pub(crate) fn partition_subset(
    space: &UltraSpace,
    subset: &[usize],
) -> Result<DiametralPartition, PartitionError> {
    if subset.len() < 2 {
        return Err(PartitionError::TooSmall(subset.len()));
    }
    let diam = space.diameter_unchecked(subset);
    let mut assigned = vec![false; subset.len()];
    let mut parts = Vec::new();
    for a in 0..subset.len() {
        if assigned[a] {
            continue;
        }
        let seed = subset[a];
        let mut part = Vec::new();
        for b in a..subset.len() {
            if !assigned[b] && (a == b || *space.dist(seed, subset[b]) < diam) {
                assigned[b] = true;
                part.push(subset[b]);
            }
        }
        debug_assert!(
            part.iter().all(|&u| part.iter().all(|&v| *space.dist(u, v) < diam || u == v)),
            "closeness below the diameter is not transitive"
        );
        parts.push(part);
    }
    debug_assert!(parts.len() >= 2);
    Ok(DiametralPartition { parts, space_diameter: diam })
}
