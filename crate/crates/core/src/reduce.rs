//! Order-fixed summation.
//!
//! Every O(n²) sum in the crate is reduced per row (sequentially inside the
//! row) and the row totals are then combined with [`pairwise_sum`]. The tree
//! shape depends only on the slice length, so the result is bit-identical no
//! matter how the rows were scheduled across threads.

use rayon::prelude::*;

const LEAF: usize = 8;

/// Pairwise (cascade) summation with a fixed tree shape.
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    if xs.len() <= LEAF {
        let mut acc = 0.0;
        for &x in xs {
            acc += x;
        }
        return acc;
    }
    let mid = xs.len() / 2;
    pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
}

/// Rows below this count are evaluated on the calling thread.
pub const PAR_THRESHOLD: usize = 96;

/// Evaluate `row(i)` for `i in 0..n`, in parallel for large `n`.
///
/// The output vector is in row order either way, so downstream reductions see
/// identical inputs.
pub fn map_rows<F>(n: usize, row: F) -> Vec<f64>
where
    F: Fn(usize) -> f64 + Sync + Send,
{
    if n < PAR_THRESHOLD {
        (0..n).map(row).collect()
    } else {
        (0..n).into_par_iter().map(row).collect()
    }
}

/// `pairwise_sum(map_rows(n, row))`.
pub fn sum_rows<F>(n: usize, row: F) -> f64
where
    F: Fn(usize) -> f64 + Sync + Send,
{
    pairwise_sum(&map_rows(n, row))
}
