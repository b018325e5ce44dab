//! Exact sampling of fractional Gaussian noise and fractional Brownian
//! motion.
//!
//! Two generators target the same law: FFT circulant embedding (the fast
//! path, `O(n log n)` per path pair) and dense Cholesky factorization of the
//! path covariance (an `O(n³)` oracle for cross-validation on small grids).
//! All generation is keyed by `(seed, path index)` through counter-based
//! ChaCha streams, so batches are reproducible bit-for-bit regardless of how
//! the work is scheduled across threads.

mod cholesky;
mod covariance;
mod embedding;
mod empirical;
mod io;

pub use cholesky::cholesky_sample;
pub use covariance::{fgn_autocovariance, FgnCovariance};
pub use embedding::{circulant_eigenvalues, CirculantEmbedding, PairScratch};
pub use empirical::{empirical_covariance, CovEstimate};
pub use io::{read_path_batch, write_path_batch};

use rayon::prelude::*;

use crate::error::{Error, Result};

/// Self-similarity index `H`, restricted to the open interval `(0, 1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HurstIndex(f64);

impl HurstIndex {
    pub fn new(value: f64) -> Result<Self> {
        if value.is_finite() && value > 0.0 && value < 1.0 {
            Ok(Self(value))
        } else {
            Err(Error::InvalidHurst(value))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

/// Uniform time grid `t_i = i · dt`, `i = 0..=steps`, with `dt = horizon /
/// steps`. Step counts are powers of two: the sampler's transform is radix-2
/// and horizon sweeps are dyadic.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimulationGrid {
    steps: usize,
    horizon: f64,
}

impl SimulationGrid {
    pub fn new(steps: usize, horizon: f64) -> Result<Self> {
        if steps < 2 || !steps.is_power_of_two() {
            return Err(Error::InvalidGrid(format!(
                "steps must be a power of two >= 2, got {steps}"
            )));
        }
        if !horizon.is_finite() || horizon <= 0.0 {
            return Err(Error::InvalidGrid(format!(
                "horizon must be positive and finite, got {horizon}"
            )));
        }
        Ok(Self { steps, horizon })
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    pub fn dt(&self) -> f64 {
        self.horizon / self.steps as f64
    }

    /// Number of grid points, including `t_0 = 0`.
    pub fn n_points(&self) -> usize {
        self.steps + 1
    }

    pub fn time(&self, i: usize) -> f64 {
        i as f64 * self.dt()
    }

    /// Grid index of time `t`, or `HorizonMisaligned` when `t` is not a grid
    /// point.
    pub fn index_of(&self, t: f64) -> Result<usize> {
        let ratio = t / self.dt();
        let rounded = ratio.round();
        if !(0.0..=self.steps as f64).contains(&rounded) || (ratio - rounded).abs() > 1e-9 {
            return Err(Error::HorizonMisaligned(format!(
                "t = {t} is not a point of the grid (dt = {}, horizon = {})",
                self.dt(),
                self.horizon
            )));
        }
        Ok(rounded as usize)
    }

    /// Grid points per unit time, for monitoring at integer times. Errors
    /// when the integers are not grid points.
    pub fn integer_stride(&self) -> Result<usize> {
        let per_unit = 1.0 / self.dt();
        let rounded = per_unit.round();
        if rounded < 1.0 || (per_unit - rounded).abs() > 1e-9 {
            return Err(Error::HorizonMisaligned(format!(
                "integer times are not grid points (dt = {})",
                self.dt()
            )));
        }
        Ok(rounded as usize)
    }
}

/// Generation method recorded in batch provenance.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SampleMethod {
    CirculantEmbedding,
    Cholesky,
}

/// A batch of fGn increment rows (`n_paths × steps`), already scaled by
/// `dt^H` for the grid they live on.
#[derive(Debug, Clone)]
pub struct FgnBatch {
    grid: SimulationGrid,
    hurst: HurstIndex,
    n_paths: usize,
    seed: u64,
    method: SampleMethod,
    increments: Vec<f64>,
}

impl FgnBatch {
    pub fn grid(&self) -> SimulationGrid {
        self.grid
    }

    pub fn hurst(&self) -> HurstIndex {
        self.hurst
    }

    pub fn n_paths(&self) -> usize {
        self.n_paths
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn method(&self) -> SampleMethod {
        self.method
    }

    pub fn increments(&self, path: usize) -> &[f64] {
        let w = self.grid.steps();
        &self.increments[path * w..(path + 1) * w]
    }
}

/// A batch of FBM paths (`n_paths × (steps + 1)`), each starting at
/// `X_0 = 0`.
#[derive(Debug, Clone)]
pub struct PathBatch {
    grid: SimulationGrid,
    hurst: HurstIndex,
    n_paths: usize,
    seed: u64,
    method: SampleMethod,
    values: Vec<f64>,
}

impl PathBatch {
    /// Wraps externally produced rows, enforcing the shape and the
    /// `X_0 = 0` invariant. Used for injecting synthetic paths in tests and
    /// for reading dumps back.
    pub fn from_values(
        grid: SimulationGrid,
        hurst: HurstIndex,
        seed: u64,
        method: SampleMethod,
        values: Vec<f64>,
    ) -> Result<Self> {
        let w = grid.n_points();
        if values.is_empty() || values.len() % w != 0 {
            return Err(Error::InvalidInput(format!(
                "path matrix length {} is not a positive multiple of {w}",
                values.len()
            )));
        }
        let n_paths = values.len() / w;
        for p in 0..n_paths {
            if values[p * w] != 0.0 {
                return Err(Error::InvalidInput(format!(
                    "path {p} starts at {} instead of 0",
                    values[p * w]
                )));
            }
        }
        Ok(Self {
            grid,
            hurst,
            n_paths,
            seed,
            method,
            values,
        })
    }

    pub fn grid(&self) -> SimulationGrid {
        self.grid
    }

    pub fn hurst(&self) -> HurstIndex {
        self.hurst
    }

    pub fn n_paths(&self) -> usize {
        self.n_paths
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn method(&self) -> SampleMethod {
        self.method
    }

    pub fn path(&self, p: usize) -> &[f64] {
        let w = self.grid.n_points();
        &self.values[p * w..(p + 1) * w]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

fn check_n_paths(n_paths: usize) -> Result<()> {
    if n_paths == 0 {
        Err(Error::InvalidInput("n_paths must be >= 1".into()))
    } else {
        Ok(())
    }
}

/// Cumulative sum of one increment row into a path row (`X_0 = 0` prepended).
fn cumsum_row(increments: &[f64], path: &mut [f64]) {
    debug_assert_eq!(path.len(), increments.len() + 1);
    path[0] = 0.0;
    let mut acc = 0.0;
    for (i, &d) in increments.iter().enumerate() {
        acc += d;
        path[i + 1] = acc;
    }
}

/// Samples `n_paths` independent fGn rows by circulant embedding.
pub fn sample_fgn_batch(
    hurst: HurstIndex,
    grid: SimulationGrid,
    n_paths: usize,
    seed: u64,
) -> Result<FgnBatch> {
    check_n_paths(n_paths)?;
    let emb = CirculantEmbedding::new(hurst, grid)?;
    let w = grid.steps();
    let mut increments = vec![0.0; n_paths * w];
    let n_pairs = n_paths.div_ceil(2);

    increments
        .par_chunks_mut(2 * w)
        .enumerate()
        .for_each_init(
            || emb.scratch(),
            |scratch, (pair, rows)| {
                debug_assert!(pair < n_pairs);
                emb.sample_pair_into(seed, pair as u64, scratch);
                rows[..w].copy_from_slice(&scratch.inc_a);
                if rows.len() == 2 * w {
                    rows[w..].copy_from_slice(&scratch.inc_b);
                }
            },
        );

    Ok(FgnBatch {
        grid,
        hurst,
        n_paths,
        seed,
        method: SampleMethod::CirculantEmbedding,
        increments,
    })
}

/// Integrates an increment batch into an FBM path batch:
/// `X_{t_i} = Σ_{j ≤ i} increments_j`, `X_0 = 0`.
pub fn fgn_to_fbm(batch: &FgnBatch) -> PathBatch {
    let w_in = batch.grid.steps();
    let w_out = batch.grid.n_points();
    let mut values = vec![0.0; batch.n_paths * w_out];
    values
        .par_chunks_mut(w_out)
        .enumerate()
        .for_each(|(p, row)| cumsum_row(batch.increments(p), row));
    debug_assert_eq!(w_in + 1, w_out);
    PathBatch {
        grid: batch.grid,
        hurst: batch.hurst,
        n_paths: batch.n_paths,
        seed: batch.seed,
        method: batch.method,
        values,
    }
}

/// Convenience: circulant-embedding fGn integrated into FBM paths.
pub fn sample_fbm_batch(
    hurst: HurstIndex,
    grid: SimulationGrid,
    n_paths: usize,
    seed: u64,
) -> Result<PathBatch> {
    Ok(fgn_to_fbm(&sample_fgn_batch(hurst, grid, n_paths, seed)?))
}

/// Streams `n_paths` circulant-embedding FBM paths through `f` without ever
/// materializing the batch, returning the per-path results in path order.
///
/// `f` is called as `f(path_index, path_values)`; results are independent of
/// thread scheduling because every pair of paths is keyed by its own stream.
pub fn map_paths<R, F>(
    hurst: HurstIndex,
    grid: SimulationGrid,
    n_paths: usize,
    seed: u64,
    f: F,
) -> Result<Vec<R>>
where
    R: Send,
    F: Fn(usize, &[f64]) -> R + Sync,
{
    check_n_paths(n_paths)?;
    let emb = CirculantEmbedding::new(hurst, grid)?;
    let w = grid.n_points();
    let n_pairs = n_paths.div_ceil(2);

    let pair_results: Vec<(R, Option<R>)> = (0..n_pairs)
        .into_par_iter()
        .map_init(
            || (emb.scratch(), vec![0.0; w]),
            |(scratch, path), pair| {
                emb.sample_pair_into(seed, pair as u64, scratch);
                cumsum_row(&scratch.inc_a, path);
                let ra = f(2 * pair, path);
                let rb = if 2 * pair + 1 < n_paths {
                    cumsum_row(&scratch.inc_b, path);
                    Some(f(2 * pair + 1, path))
                } else {
                    None
                };
                (ra, rb)
            },
        )
        .collect();

    let mut out = Vec::with_capacity(n_paths);
    for (ra, rb) in pair_results {
        out.push(ra);
        if let Some(rb) = rb {
            out.push(rb);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_rejects_bad_shapes() {
        assert!(SimulationGrid::new(0, 1.0).is_err());
        assert!(SimulationGrid::new(3, 1.0).is_err());
        assert!(SimulationGrid::new(8, 0.0).is_err());
        assert!(SimulationGrid::new(8, f64::NAN).is_err());
    }

    #[test]
    fn grid_index_round_trip() {
        let g = SimulationGrid::new(1024, 16.0).unwrap();
        assert_eq!(g.index_of(0.0).unwrap(), 0);
        assert_eq!(g.index_of(16.0).unwrap(), 1024);
        assert_eq!(g.index_of(1.0).unwrap(), 64);
        assert!(g.index_of(16.001).is_err());
        assert_eq!(g.integer_stride().unwrap(), 64);
    }

    #[test]
    fn integer_stride_requires_alignment() {
        // dt = 3/8: integers are not grid points.
        let g = SimulationGrid::new(8, 3.0).unwrap();
        assert!(g.integer_stride().is_err());
    }

    #[test]
    fn cumsum_matches_hand_rolls() {
        let mut path = [f64::NAN; 2];
        cumsum_row(&[3.5], &mut path);
        assert_eq!(path, [0.0, 3.5]);

        let mut path = [f64::NAN; 4];
        cumsum_row(&[0.0, 0.0, 0.0], &mut path);
        assert_eq!(path, [0.0; 4]);

        let mut path = [f64::NAN; 4];
        cumsum_row(&[1.0, -2.0, 0.5], &mut path);
        assert_eq!(path, [0.0, 1.0, -1.0, -0.5]);
    }

    #[test]
    fn batches_are_deterministic_and_start_at_zero() {
        let h = HurstIndex::new(0.7).unwrap();
        let g = SimulationGrid::new(64, 1.0).unwrap();
        let a = sample_fbm_batch(h, g, 5, 42).unwrap();
        let b = sample_fbm_batch(h, g, 5, 42).unwrap();
        assert_eq!(a.values(), b.values());
        for p in 0..5 {
            assert_eq!(a.path(p)[0], 0.0);
        }
        let c = sample_fbm_batch(h, g, 5, 43).unwrap();
        assert_ne!(a.values(), c.values());
    }

    #[test]
    fn leading_paths_do_not_depend_on_batch_size() {
        let h = HurstIndex::new(0.3).unwrap();
        let g = SimulationGrid::new(32, 1.0).unwrap();
        let small = sample_fbm_batch(h, g, 4, 7).unwrap();
        let large = sample_fbm_batch(h, g, 64, 7).unwrap();
        for p in 0..4 {
            assert_eq!(small.path(p), large.path(p));
        }
    }

    #[test]
    fn map_paths_agrees_with_batch() {
        let h = HurstIndex::new(0.6).unwrap();
        let g = SimulationGrid::new(32, 2.0).unwrap();
        let batch = sample_fbm_batch(h, g, 9, 11).unwrap();
        let endpoints = map_paths(h, g, 9, 11, |_, path| *path.last().unwrap()).unwrap();
        assert_eq!(endpoints.len(), 9);
        for (p, &e) in endpoints.iter().enumerate() {
            assert_eq!(e, *batch.path(p).last().unwrap());
        }
    }

    #[test]
    fn zero_paths_rejected() {
        let h = HurstIndex::new(0.6).unwrap();
        let g = SimulationGrid::new(32, 2.0).unwrap();
        assert!(sample_fgn_batch(h, g, 0, 1).is_err());
    }

    #[test]
    fn from_values_enforces_start_at_zero() {
        let h = HurstIndex::new(0.5).unwrap();
        let g = SimulationGrid::new(2, 1.0).unwrap();
        let ok = PathBatch::from_values(
            g,
            h,
            0,
            SampleMethod::Cholesky,
            vec![0.0, 1.0, 2.0, 0.0, -1.0, 0.5],
        );
        assert!(ok.is_ok());
        let bad = PathBatch::from_values(g, h, 0, SampleMethod::Cholesky, vec![0.1, 1.0, 2.0]);
        assert!(bad.is_err());
    }
}
