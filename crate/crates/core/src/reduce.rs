//! Order-fixed reductions.
//!
//! Every accumulated sum in the crate goes through [`tree_sum`], whose
//! association order depends only on the slice length. Parallel stages
//! produce their partial results into an ordered `Vec` first, so results do
//! not depend on thread count or scheduling.

use std::ops::Add;

use num_traits::Zero;
use rayon::prelude::*;

const LEAF: usize = 16;

/// Pairwise sum with fixed split points.
pub fn tree_sum<T>(xs: &[T]) -> T
where
    T: Copy + Zero + Add<Output = T>,
{
    if xs.len() <= LEAF {
        return xs.iter().fold(T::zero(), |acc, &v| acc + v);
    }
    let mid = xs.len() / 2;
    tree_sum(&xs[..mid]) + tree_sum(&xs[mid..])
}

/// Maps `f` over `0..n` in parallel, keeping index order in the output.
pub fn par_map_indexed<U, F>(n: usize, f: F) -> Vec<U>
where
    U: Send,
    F: Fn(usize) -> U + Sync + Send,
{
    (0..n).into_par_iter().map(f).collect()
}

/// Maps `f` over a slice in parallel, keeping order.
pub fn par_map<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
{
    items.par_iter().map(f).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tree_sum_matches_exact_small_integers() {
        let xs: Vec<f64> = (1..=1000).map(|k| k as f64).collect();
        assert_eq!(tree_sum(&xs), 500500.0);
        assert_eq!(tree_sum::<f64>(&[]), 0.0);
    }

    #[test]
    fn tree_sum_is_thread_count_independent() {
        let xs: Vec<f64> = (0..10_007).map(|k| ((k as f64) * 0.37).sin() / (1.0 + k as f64)).collect();
        let a = tree_sum(&par_map(&xs, |v| v * 3.0));
        let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let b = pool.install(|| tree_sum(&par_map(&xs, |v| v * 3.0)));
        assert_eq!(a.to_bits(), b.to_bits());
    }
}
