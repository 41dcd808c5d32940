//! Batch-parallel skip lists and Euler tour trees.
//!
//! [`SkipList`] holds doubly-linked lists (possibly cyclic) of elements with
//! random heights and supports batches of joins, splits and representative
//! lookups. With an [`Augmentation`] every node caches the fold of the
//! elements it covers, so contiguous ranges can be folded in expected
//! logarithmic time. [`EulerTourForest`] builds dynamic forests on top:
//! batch link, batch cut, connectivity and subtree-fold queries.

pub mod aug;
mod augmented;
pub mod error;
pub mod ett;
pub mod oracles;
pub mod runtime;
pub mod skiplist;

pub use aug::{Affine, Augmentation, ForestAugmentation, Max, Min, NoAug, Sum};
pub use error::{Error, Result};
pub use ett::{parse_edge_list, CutStrategy, EulerTourForest, ForestConfig};
pub use runtime::ConcurrentDict;
pub use skiplist::{ElementHandle, LevelNode, SkipList, SkipListConfig, MAX_HEIGHT};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/intro.md")]
    mod intro {}
    #[doc = include_str!("../../../book/src/skip_lists.md")]
    mod skip_lists {}
    #[doc = include_str!("../../../book/src/augmentation.md")]
    mod augmentation {}
    #[doc = include_str!("../../../book/src/euler_tours.md")]
    mod euler_tours {}
    #[doc = include_str!("../../../book/src/batch_cut.md")]
    mod batch_cut {}
    #[doc = include_str!("../../../book/src/runtime.md")]
    mod runtime {}
}
