//! Direct-form FIR convolution used as ground truth for every mapping.

use crate::sim::ArithmeticOverflow;

/// Sample at `index`, zero outside `[0, x.len())`.
pub fn sample_at(x: &[i64], index: i64) -> i64 {
    usize::try_from(index)
        .ok()
        .and_then(|i| x.get(i))
        .copied()
        .unwrap_or(0)
}

/// `y_k = sum_j x[k-j] * w[j]` for `k` in `0..count`, with zero history.
pub fn fir_reference(x: &[i64], w: &[i64], count: usize) -> Result<Vec<i64>, ArithmeticOverflow> {
    (0..count as i64)
        .map(|k| {
            w.iter().enumerate().try_fold(0i64, |acc, (j, &wj)| {
                sample_at(x, k - j as i64)
                    .checked_mul(wj)
                    .and_then(|p| acc.checked_add(p))
                    .ok_or(ArithmeticOverflow)
            })
        })
        .collect()
}
