use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::{BenchError, GraphKind};

/// Edges of a tree on vertices `1..=n`.
///
/// A random recursive tree attaches each vertex `i > 1` to a uniformly
/// random earlier vertex.
pub fn build_graph(kind: GraphKind, n: usize, seed: u64) -> Result<Vec<(u32, u32)>, BenchError> {
    if n == 0 {
        return Err(BenchError::Config("a graph needs at least one vertex".into()));
    }
    let n = u32::try_from(n).map_err(|_| BenchError::Config(format!("n = {n} too large")))?;
    Ok(match kind {
        GraphKind::Path => (1..n).map(|i| (i, i + 1)).collect(),
        GraphKind::Star => (2..=n).map(|i| (1, i)).collect(),
        GraphKind::RandomRecursive => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (2..=n).map(|i| (rng.random_range(1..i), i)).collect()
        }
        GraphKind::File => {
            return Err(BenchError::Config("file graphs come from --edges".into()));
        }
    })
}
