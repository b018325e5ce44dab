//! Empirical covariance probes over path batches (test instrumentation).

use crate::numerics::compensated_sum;

use super::PathBatch;

/// Sample covariance of `(X_{t_i}, X_{t_j})` across a batch, with a
/// moment-based standard error.
#[derive(Debug, Clone, Copy)]
pub struct CovEstimate {
    pub i: usize,
    pub j: usize,
    pub value: f64,
    pub stderr: f64,
}

/// Unbiased sample covariances of the requested grid-index pairs.
pub fn empirical_covariance(batch: &PathBatch, pairs: &[(usize, usize)]) -> Vec<CovEstimate> {
    let n = batch.n_paths();
    assert!(n >= 2, "empirical covariance needs at least two paths");

    pairs
        .iter()
        .map(|&(i, j)| {
            let xi: Vec<f64> = (0..n).map(|p| batch.path(p)[i]).collect();
            let xj: Vec<f64> = (0..n).map(|p| batch.path(p)[j]).collect();
            let mean_i = compensated_sum(&xi) / n as f64;
            let mean_j = compensated_sum(&xj) / n as f64;
            let prods: Vec<f64> = xi
                .iter()
                .zip(&xj)
                .map(|(&a, &b)| (a - mean_i) * (b - mean_j))
                .collect();
            let value = compensated_sum(&prods) / (n as f64 - 1.0);
            let centered: Vec<f64> = prods.iter().map(|&q| (q - value) * (q - value)).collect();
            let var_q = compensated_sum(&centered) / (n as f64 - 1.0);
            CovEstimate {
                i,
                j,
                value,
                stderr: (var_q / n as f64).sqrt(),
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampler::{HurstIndex, PathBatch, SampleMethod, SimulationGrid};

    #[test]
    fn identical_paths_have_zero_covariance() {
        let g = SimulationGrid::new(2, 1.0).unwrap();
        let h = HurstIndex::new(0.5).unwrap();
        let rows = vec![0.0, 1.0, 2.0, 0.0, 1.0, 2.0, 0.0, 1.0, 2.0];
        let batch = PathBatch::from_values(g, h, 0, SampleMethod::Cholesky, rows).unwrap();
        let est = empirical_covariance(&batch, &[(1, 2), (2, 2)]);
        for e in est {
            assert_eq!(e.value, 0.0);
            assert_eq!(e.stderr, 0.0);
        }
    }
}
