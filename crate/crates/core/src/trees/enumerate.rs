//! Exhaustive enumeration by successive leaf insertion.
//!
//! Trees of size `n` are produced depth-first: starting from the star tree,
//! `Num(m + 1)` is inserted into each edge of a size-`m` tree in canonical
//! edge order. When only trees with `a` and `b` adjacent are wanted, the
//! leaf edges of `a` and `b` are skipped; every other insertion preserves
//! the adjacency, so the filtered stream has `(2n - 1)!!` trees instead of
//! `(2n + 1)!!`.

use rayon::prelude::*;

use super::{star_tree, LabeledTree};
use crate::error::{Error, Result};
use crate::label::Label;

/// Default upper bound on `n` for exhaustive enumeration.
pub const DEFAULT_MAX_N: usize = 10;

/// Depth at which the enumeration tree is cut into parallel partitions.
const PARTITION_DEPTH: usize = 4;

/// Depth-first stream of trees of a fixed size.
pub struct Enumeration {
    target: usize,
    ab_adjacent: bool,
    stack: Vec<LabeledTree>,
}

impl Enumeration {
    /// Enumerates all size-`target` descendants of `seed`, i.e. the trees
    /// whose insertion sequence extends the one that produced `seed`.
    pub fn from_seed(seed: LabeledTree, target: usize, ab_adjacent: bool) -> Enumeration {
        let stack = if seed.n() <= target { vec![seed] } else { Vec::new() };
        Enumeration {
            target,
            ab_adjacent,
            stack,
        }
    }
}

impl Iterator for Enumeration {
    type Item = LabeledTree;

    fn next(&mut self) -> Option<LabeledTree> {
        while let Some(tree) = self.stack.pop() {
            let n = tree.n();
            if n == self.target {
                return Some(tree);
            }
            let label = Label::Num(n + 1);
            let (a, b) = (Label::A.rank(), Label::B.rank());
            let edges: Vec<_> = tree
                .edges()
                .filter(|e| !self.ab_adjacent || (e.0 != a && e.0 != b))
                .collect();
            for &e in edges.iter().rev() {
                let child = tree
                    .insert_leaf(e, label)
                    .expect("fresh label on a valid edge");
                self.stack.push(child);
            }
        }
        None
    }
}

/// All trivalent trees on `{a, b, c, 1, ..., n}` (optionally only those with
/// `a`, `b` adjacent), bounded by [`DEFAULT_MAX_N`].
pub fn enumerate_trees(n: usize, ab_adjacent: bool) -> Result<Enumeration> {
    enumerate_trees_bounded(n, ab_adjacent, DEFAULT_MAX_N)
}

pub fn enumerate_trees_bounded(n: usize, ab_adjacent: bool, max_n: usize) -> Result<Enumeration> {
    if n > max_n {
        return Err(Error::ResourceLimit { n, max: max_n });
    }
    Ok(Enumeration::from_seed(star_tree(), n, ab_adjacent))
}

/// Prefix trees that split the enumeration of size `n` into independent
/// partitions. Concatenating `Enumeration::from_seed` over the seeds in
/// order reproduces the sequential stream.
pub fn partition_seeds(n: usize, ab_adjacent: bool, depth: usize) -> Vec<LabeledTree> {
    Enumeration::from_seed(star_tree(), depth.min(n), ab_adjacent).collect()
}

/// Applies `f` to each partition of the size-`n` enumeration on a pool of
/// `jobs` workers. Results come back in partition order, so the output is
/// independent of the worker count.
pub fn par_map_partitions<R, F>(
    n: usize,
    ab_adjacent: bool,
    max_n: usize,
    jobs: usize,
    f: F,
) -> Result<Vec<R>>
where
    R: Send,
    F: Fn(Enumeration) -> R + Sync,
{
    if n > max_n {
        return Err(Error::ResourceLimit { n, max: max_n });
    }
    let seeds = partition_seeds(n, ab_adjacent, PARTITION_DEPTH);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| Error::Internal(format!("thread pool: {e}")))?;
    Ok(pool.install(|| {
        seeds
            .into_par_iter()
            .map(|seed| f(Enumeration::from_seed(seed, n, ab_adjacent)))
            .collect()
    }))
}

/// Streaming form of [`par_map_partitions`]: partitions are processed in
/// batches of a few per worker and their results handed to `sink` in
/// partition order.
pub fn par_for_each_partition<R, F, S>(
    n: usize,
    ab_adjacent: bool,
    max_n: usize,
    jobs: usize,
    f: F,
    mut sink: S,
) -> Result<()>
where
    R: Send,
    F: Fn(Enumeration) -> R + Sync,
    S: FnMut(R) -> Result<()>,
{
    if n > max_n {
        return Err(Error::ResourceLimit { n, max: max_n });
    }
    let jobs = jobs.max(1);
    let seeds = partition_seeds(n, ab_adjacent, PARTITION_DEPTH);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| Error::Internal(format!("thread pool: {e}")))?;
    for batch in seeds.chunks(jobs * 4) {
        let results: Vec<R> = pool.install(|| {
            batch
                .par_iter()
                .map(|seed| f(Enumeration::from_seed(seed.clone(), n, ab_adjacent)))
                .collect()
        });
        for r in results {
            sink(r)?;
        }
    }
    Ok(())
}
