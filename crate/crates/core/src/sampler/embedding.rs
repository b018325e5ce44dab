//! Circulant embedding of the fGn covariance and frequency-domain synthesis.
//!
//! The Toeplitz covariance of `n` unit-step increments embeds into a `2n`
//! circulant whose first row is `[γ(0), …, γ(n−1), γ(n), γ(n−1), …, γ(1)]`.
//! Its eigenvalues are the DFT of that row; for fGn they are nonnegative, so
//! scaling complex Gaussians by the square roots and transforming back yields
//! two independent exact fGn vectors per transform (real and imaginary part).

use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rustfft::num_complex::Complex;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};

use super::covariance::{fgn_autocovariance, FgnCovariance};
use super::{HurstIndex, SimulationGrid};

/// Relative tolerance under which slightly negative eigenvalues are treated
/// as rounding noise and clamped to zero. Anything below `-tol` means the
/// embedding (or its inputs) is broken rather than merely rounded.
const EIGENVALUE_REL_TOL: f64 = 1e-10;

/// Eigenvalues of the `2n`-circulant embedding of `cov`, clamped per the
/// tolerance rule. Requires `n` to be a power of two and `cov` to provide at
/// least `n + 1` lags.
pub fn circulant_eigenvalues(cov: &FgnCovariance, n: usize) -> Result<Vec<f64>> {
    if n < 2 || !n.is_power_of_two() {
        return Err(Error::InvalidInput(format!(
            "embedding size must be a power of two >= 2, got {n}"
        )));
    }
    if cov.lags().len() < n + 1 {
        return Err(Error::InvalidInput(format!(
            "embedding of size {n} needs {} lags, covariance has {}",
            n + 1,
            cov.lags().len()
        )));
    }

    let m = 2 * n;
    let lags = cov.lags();
    let mut row: Vec<Complex<f64>> = Vec::with_capacity(m);
    for &g in &lags[..=n] {
        row.push(Complex::new(g, 0.0));
    }
    for &g in lags[1..n].iter().rev() {
        row.push(Complex::new(g, 0.0));
    }

    let fft = FftPlanner::new().plan_fft_forward(m);
    fft.process(&mut row);

    // The row is real and even, so the spectrum is real up to rounding.
    let mut eig: Vec<f64> = row.iter().map(|c| c.re).collect();
    let max = eig.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let tol = EIGENVALUE_REL_TOL * max.max(f64::MIN_POSITIVE);
    let min = eig.iter().cloned().fold(f64::INFINITY, f64::min);
    if min < -tol {
        return Err(Error::EmbeddingNotPsd {
            min_eigenvalue: min,
            tolerance: tol,
        });
    }
    for e in &mut eig {
        if *e < 0.0 {
            *e = 0.0;
        }
    }
    Ok(eig)
}

/// Prepared sampler state for one `(H, grid)` pair: spectrum square roots and
/// an FFT plan, both reusable across any number of path pairs.
pub struct CirculantEmbedding {
    hurst: HurstIndex,
    grid: SimulationGrid,
    /// `sqrt(λ_j / m)`, premultiplied so the transform output has unit-step
    /// fGn covariance directly.
    sqrt_eig: Vec<f64>,
    /// `dt^H`: rescales unit-step noise onto the grid via self-similarity.
    increment_scale: f64,
    fft: Arc<dyn Fft<f64>>,
}

/// Per-worker scratch buffers for pair synthesis.
pub struct PairScratch {
    freq: Vec<Complex<f64>>,
    fft_scratch: Vec<Complex<f64>>,
    /// Increment rows produced by the last `sample_pair_into` call.
    pub inc_a: Vec<f64>,
    pub inc_b: Vec<f64>,
}

impl CirculantEmbedding {
    pub fn new(hurst: HurstIndex, grid: SimulationGrid) -> Result<Self> {
        let n = grid.steps();
        let cov = fgn_autocovariance(hurst, n + 1)?;
        let eig = circulant_eigenvalues(&cov, n)?;
        let m = 2 * n;
        let sqrt_eig = eig.iter().map(|&l| (l / m as f64).sqrt()).collect();
        let fft = FftPlanner::new().plan_fft_forward(m);
        Ok(Self {
            hurst,
            grid,
            sqrt_eig,
            increment_scale: grid.dt().powf(hurst.value()),
            fft,
        })
    }

    pub fn hurst(&self) -> HurstIndex {
        self.hurst
    }

    pub fn grid(&self) -> SimulationGrid {
        self.grid
    }

    pub fn scratch(&self) -> PairScratch {
        let m = self.sqrt_eig.len();
        PairScratch {
            freq: vec![Complex::default(); m],
            fft_scratch: vec![Complex::default(); self.fft.get_inplace_scratch_len()],
            inc_a: vec![0.0; self.grid.steps()],
            inc_b: vec![0.0; self.grid.steps()],
        }
    }

    /// Fills `scratch.inc_a` / `scratch.inc_b` with the two independent fGn
    /// increment rows of pair `pair_index`. The generator is keyed by
    /// `(seed, pair_index)` through the ChaCha stream counter, so any subset
    /// of pairs can be generated in any order with identical results.
    pub fn sample_pair_into(&self, seed: u64, pair_index: u64, scratch: &mut PairScratch) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(pair_index);

        for (slot, &s) in scratch.freq.iter_mut().zip(&self.sqrt_eig) {
            let re: f64 = StandardNormal.sample(&mut rng);
            let im: f64 = StandardNormal.sample(&mut rng);
            *slot = Complex::new(s * re, s * im);
        }
        self.fft
            .process_with_scratch(&mut scratch.freq, &mut scratch.fft_scratch);

        let n = self.grid.steps();
        for i in 0..n {
            scratch.inc_a[i] = scratch.freq[i].re * self.increment_scale;
            scratch.inc_b[i] = scratch.freq[i].im * self.increment_scale;
        }
    }
}
