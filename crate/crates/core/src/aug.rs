//! Associative combine functions for augmented lists.

use std::fmt::Debug;

/// An associative combine over values of type [`Value`](Augmentation::Value).
///
/// Folds are always taken left to right, so `combine` need not commute.
pub trait Augmentation: Send + Sync + 'static {
    type Value: Copy + Send + Sync + PartialEq + Debug;

    /// `false` lets structures skip value maintenance entirely.
    const ENABLED: bool = true;

    fn combine(a: Self::Value, b: Self::Value) -> Self::Value;
}

/// A commutative augmentation with an identity, as the Euler tour layer
/// needs: subtree folds stitch values in tour order, which is not a
/// meaningful order on the tree.
pub trait ForestAugmentation: Augmentation {
    fn identity() -> Self::Value;
}

/// No augmentation.
#[derive(Debug, Clone, Copy, Default)]
pub struct NoAug;

impl Augmentation for NoAug {
    type Value = ();
    const ENABLED: bool = false;

    #[inline]
    fn combine(_: (), _: ()) {}
}

impl ForestAugmentation for NoAug {
    fn identity() {}
}

/// Wrapping sum of `i64`.
#[derive(Debug, Clone, Copy, Default)]
pub struct Sum;

impl Augmentation for Sum {
    type Value = i64;

    #[inline]
    fn combine(a: i64, b: i64) -> i64 {
        a.wrapping_add(b)
    }
}

impl ForestAugmentation for Sum {
    fn identity() -> i64 {
        0
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct Min;

impl Augmentation for Min {
    type Value = i64;

    #[inline]
    fn combine(a: i64, b: i64) -> i64 {
        a.min(b)
    }
}

impl ForestAugmentation for Min {
    fn identity() -> i64 {
        i64::MAX
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct Max;

impl Augmentation for Max {
    type Value = i64;

    #[inline]
    fn combine(a: i64, b: i64) -> i64 {
        a.max(b)
    }
}

impl ForestAugmentation for Max {
    fn identity() -> i64 {
        i64::MIN
    }
}

/// Composition of affine maps `x -> a*x + b` modulo 2^64.
///
/// `combine(f, g)` applies `f` first. Associative but not commutative,
/// which makes it useful for catching folds taken in the wrong order.
#[derive(Debug, Clone, Copy, Default)]
pub struct Affine;

impl Augmentation for Affine {
    type Value = (u64, u64);

    #[inline]
    fn combine((a1, b1): (u64, u64), (a2, b2): (u64, u64)) -> (u64, u64) {
        (a2.wrapping_mul(a1), a2.wrapping_mul(b1).wrapping_add(b2))
    }
}
