//! Dense Cholesky sampler: the small-grid oracle for the FFT path.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;

use crate::error::{Error, Result};

use super::{HurstIndex, PathBatch, SampleMethod, SimulationGrid};

/// Largest grid the O(n³) oracle accepts.
const MAX_CHOLESKY_STEPS: usize = 2048;

fn fbm_covariance(s: f64, t: f64, two_h: f64) -> f64 {
    0.5 * (s.powf(two_h) + t.powf(two_h) - (t - s).abs().powf(two_h))
}

/// In-place lower Cholesky factor of the symmetric matrix in `a` (row-major
/// `n × n`, lower triangle read). Fails when a pivot falls below the PSD
/// rounding tolerance.
fn cholesky_lower(a: &mut [f64], n: usize) -> Result<()> {
    let max_diag = (0..n).map(|i| a[i * n + i]).fold(0.0f64, f64::max);
    let tol = 1e-12 * max_diag.max(f64::MIN_POSITIVE);
    for j in 0..n {
        let mut d = a[j * n + j];
        for k in 0..j {
            d -= a[j * n + k] * a[j * n + k];
        }
        if d < -tol {
            return Err(Error::FactorizationFailed(format!(
                "pivot {d:e} at column {j}; dt too small or H too extreme for f64"
            )));
        }
        let d = d.max(0.0).sqrt();
        a[j * n + j] = d;
        for i in j + 1..n {
            let mut s = a[i * n + j];
            for k in 0..j {
                s -= a[i * n + k] * a[j * n + k];
            }
            a[i * n + j] = if d > 0.0 { s / d } else { 0.0 };
        }
    }
    Ok(())
}

/// Samples FBM paths by factoring the exact path covariance
/// `E[X_s X_t] = ½(|s|^{2H} + |t|^{2H} − |t−s|^{2H})` on `t_1..t_steps`.
///
/// Exact in law like the circulant path, but O(steps³) setup and
/// O(steps²) per path; intended as a cross-validation oracle on
/// small grids.
pub fn cholesky_sample(
    hurst: HurstIndex,
    grid: SimulationGrid,
    n_paths: usize,
    seed: u64,
) -> Result<PathBatch> {
    if n_paths == 0 {
        return Err(Error::InvalidInput("n_paths must be >= 1".into()));
    }
    let n = grid.steps();
    if n > MAX_CHOLESKY_STEPS {
        return Err(Error::InvalidInput(format!(
            "cholesky oracle is limited to {MAX_CHOLESKY_STEPS} steps, got {n}"
        )));
    }

    let two_h = 2.0 * hurst.value();
    let mut factor = vec![0.0; n * n];
    for i in 0..n {
        let ti = grid.time(i + 1);
        for j in 0..=i {
            let tj = grid.time(j + 1);
            factor[i * n + j] = fbm_covariance(tj, ti, two_h);
        }
    }
    cholesky_lower(&mut factor, n)?;

    let w = grid.n_points();
    let mut values = vec![0.0; n_paths * w];
    values.par_chunks_mut(w).enumerate().for_each_init(
        || vec![0.0; n],
        |z, (p, row)| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(p as u64);
            for zi in z.iter_mut() {
                *zi = StandardNormal.sample(&mut rng);
            }
            row[0] = 0.0;
            for i in 0..n {
                let mut acc = 0.0;
                for (k, &zk) in z[..=i].iter().enumerate() {
                    acc += factor[i * n + k] * zk;
                }
                row[i + 1] = acc;
            }
        },
    );

    PathBatch::from_values(grid, hurst, seed, SampleMethod::Cholesky, values)
}
