//! Clustering agreement metrics.
//!
//! The adjusted Rand index scores how well a predicted partition recovers a
//! reference partition while correcting for chance, so relabeling clusters
//! does not change the score. It is the standard figure for judging ink
//! cluster recovery against synthetic ground truth.

use std::collections::HashMap;

/// Adjusted Rand index between two partitions of the same items.
///
/// Labels are opaque ids; only co-membership matters. Returns 1.0 for
/// identical partitions, near 0.0 for independent ones, and may go negative
/// for partitions that agree less than chance. When every pairing is trivial
/// (n < 2, or both partitions are all-singletons or single-cluster) the
/// chance correction degenerates and the index is 1.0 by convention.
///
/// Panics if the slices differ in length.
pub fn adjusted_rand_index(a: &[i64], b: &[i64]) -> f64 {
    assert_eq!(a.len(), b.len(), "partitions must cover the same items");
    let n = a.len() as u64;
    if n < 2 {
        return 1.0;
    }

    let mut contingency: HashMap<(i64, i64), u64> = HashMap::new();
    let mut row_sums: HashMap<i64, u64> = HashMap::new();
    let mut col_sums: HashMap<i64, u64> = HashMap::new();
    for (&x, &y) in a.iter().zip(b) {
        *contingency.entry((x, y)).or_insert(0) += 1;
        *row_sums.entry(x).or_insert(0) += 1;
        *col_sums.entry(y).or_insert(0) += 1;
    }

    fn choose2(m: u64) -> u64 {
        m * m.saturating_sub(1) / 2
    }

    let sum_cells: u64 = contingency.values().map(|&m| choose2(m)).sum();
    let sum_rows: u64 = row_sums.values().map(|&m| choose2(m)).sum();
    let sum_cols: u64 = col_sums.values().map(|&m| choose2(m)).sum();
    let total_pairs = choose2(n);

    // counts stay below 2^53, so the f64 arithmetic here is exact on inputs
    let expected = sum_rows as f64 * sum_cols as f64 / total_pairs as f64;
    let maximum = (sum_rows as f64 + sum_cols as f64) / 2.0;
    if maximum == expected {
        return 1.0;
    }
    (sum_cells as f64 - expected) / (maximum - expected)
}
