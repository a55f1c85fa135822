//! Finite ultrametric spaces and the vertex-labeled trees that generate them.
//!
//! A labeled tree `(T, l)` induces `d_l(u, v) = max l(w)` over the path from
//! `u` to `v`. This crate decides which finite ultrametric spaces arise this
//! way, builds a generating tree when one exists, computes representing
//! trees, and constructs the smallest tree-generated superspace of any
//! finite ultrametric space. All arithmetic is exact.

#![forbid(unsafe_code)]

pub mod campaign;
pub mod diametrical;
pub mod document;
pub mod oracle;
pub mod rat;
pub mod represent;
pub mod space;
pub mod tree;
pub mod ugvl;

#[cfg(test)]
mod fixtures;

pub use diametrical::{diametral_partition, DiametralPartition, PartitionError};
pub use rat::{ParseRatError, Rat};
pub use represent::{
    hausdorff_distance, isometric, representing_tree, CanonicalCode, Node, RepresentError, RootedLabeledTree,
};
pub use space::{Ball, PointSet, SpaceError, UltraSpace};
pub use tree::{LabeledTree, TreeError};
pub use ugvl::{
    delta, generating_tree, is_ugvl, is_ugvl_extension, minimal_extension, ExtensionResult, UgvlError,
};

#[cfg(test)]
mod tests {
    fn thread_safe<T: Send + Sync>() {}

    #[test]
    fn core_types_are_thread_safe() {
        thread_safe::<crate::Rat>();
        thread_safe::<crate::UltraSpace>();
        thread_safe::<crate::LabeledTree>();
        thread_safe::<crate::RootedLabeledTree>();
    }
}
