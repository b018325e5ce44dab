//! Steady-state current functionals and their moment scaling.
//!
//! The discrete current through a segment of length `N` is
//! `J_N = ½ (1 + Σ_{n=1}^{N−1} exp(X_n))^{−1}`; its continuous counterpart is
//! `J_T = (∫_0^T exp(X_s) ds)^{−1}`, approximated by trapezoidal quadrature
//! on the grid. All exponential sums run in the log domain with the running
//! maximum subtracted: path values scale like `T^H` and would overflow
//! `exp` long before the horizons of interest.

use std::fmt;

use crate::error::{Error, Result};
use crate::estimators::{fit_power_law, mean_estimate, EstimateWithCI, ExponentFit};
use crate::numerics::LogSumExp;
use crate::persistence::DEFAULT_CI_LEVEL;
use crate::sampler::{map_paths, HurstIndex, SimulationGrid};

const LN_HALF: f64 = -std::f64::consts::LN_2;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CurrentVariant {
    DiscreteJn,
    ContinuousJt,
}

impl fmt::Display for CurrentVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::DiscreteJn => write!(f, "jn"),
            Self::ContinuousJt => write!(f, "jt"),
        }
    }
}

/// Moment estimates `E[J^k]` over an increasing horizon sweep.
#[derive(Debug, Clone)]
pub struct CurrentMomentCurve {
    pub hurst: HurstIndex,
    pub k: f64,
    pub variant: CurrentVariant,
    pub horizons: Vec<f64>,
    pub estimates: Vec<EstimateWithCI>,
    pub n_paths: usize,
    pub grid_steps: usize,
    pub seed: u64,
}

impl CurrentMomentCurve {
    pub fn to_csv(&self) -> String {
        let mut out =
            String::from("hurst,k,variant,T,moment_hat,stderr,n_paths,grid_steps,seed\n");
        for (t, est) in self.horizons.iter().zip(&self.estimates) {
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{},{}\n",
                self.hurst.value(),
                self.k,
                self.variant,
                t,
                est.point,
                est.stderr,
                self.n_paths,
                self.grid_steps,
                self.seed
            ));
        }
        out
    }
}

/// Log of the trapezoidal quadrature of `exp(X_s)` on `[0, t_m]`:
/// `log dt + logsumexp(X_0 + log ½, X_1, …, X_{m−1}, X_m + log ½)`.
fn log_trapezoid_integral(path: &[f64], m: usize, dt: f64) -> f64 {
    debug_assert!(m >= 1 && m < path.len());
    let mut acc = LogSumExp::new();
    acc.push(path[0] + LN_HALF);
    for &x in &path[1..m] {
        acc.push(x);
    }
    acc.push(path[m] + LN_HALF);
    acc.value() + dt.ln()
}

/// Log of `1 + Σ_{n=1}^{N−1} exp(X_n)` with `X_n` read at integer times.
fn log_discrete_sum(path: &[f64], n_target: usize, stride: usize) -> f64 {
    let mut acc = LogSumExp::new();
    acc.push(0.0);
    for n in 1..n_target {
        acc.push(path[n * stride]);
    }
    acc.value()
}

/// Discrete current `J_N = ½ (1 + Σ_{n=1}^{N−1} exp(X_n))^{−1}` for a path on
/// a grid containing the integer times. Values lie in `(0, ½]`.
pub fn compute_jn(path: &[f64], n_target: usize, grid: &SimulationGrid) -> Result<f64> {
    if n_target < 2 {
        return Err(Error::InvalidInput(format!(
            "J_N needs N >= 2, got {n_target}"
        )));
    }
    if (n_target - 1) as f64 > grid.horizon() {
        return Err(Error::HorizonMisaligned(format!(
            "N - 1 = {} exceeds the grid horizon {}",
            n_target - 1,
            grid.horizon()
        )));
    }
    let stride = grid.integer_stride()?;
    Ok(0.5 * (-log_discrete_sum(path, n_target, stride)).exp())
}

/// Continuous current `J_T = (∫_0^T exp(X_s) ds)^{−1}` by trapezoidal
/// quadrature.
pub fn compute_jt(path: &[f64], t: f64, grid: &SimulationGrid) -> Result<f64> {
    let m = grid.index_of(t)?;
    if m == 0 {
        return Err(Error::HorizonMisaligned(
            "J_T needs a horizon of at least one grid step".into(),
        ));
    }
    Ok((-log_trapezoid_integral(path, m, grid.dt())).exp())
}

fn validate_dyadic(horizons: &[f64]) -> Result<()> {
    if horizons.is_empty() {
        return Err(Error::InvalidInput("at least one horizon required".into()));
    }
    for w in horizons.windows(2) {
        if (w[1] / w[0] - 2.0).abs() > 1e-9 {
            return Err(Error::InvalidInput(format!(
                "horizons must double at each step, got {} -> {}",
                w[0], w[1]
            )));
        }
    }
    Ok(())
}

/// `E[J^k]` per horizon for every requested moment order, all served by one
/// shared batch. Per path the log integral is accumulated once, with a
/// checkpoint at each horizon; sharing the batch keeps the per-`k` exponent
/// fits comparable path by path.
pub fn moment_curves(
    hurst: HurstIndex,
    ks: &[f64],
    variant: CurrentVariant,
    grid: SimulationGrid,
    horizons: &[f64],
    n_paths: usize,
    seed: u64,
) -> Result<Vec<CurrentMomentCurve>> {
    if ks.is_empty() {
        return Err(Error::InvalidInput("at least one moment order required".into()));
    }
    for &k in ks {
        if !(k > 0.0) || !k.is_finite() {
            return Err(Error::InvalidInput(format!(
                "moment order k must be > 0, got {k}"
            )));
        }
    }
    validate_dyadic(horizons)?;

    // Per-horizon checkpoints, as (grid index to stop before, horizon count).
    let checkpoints: Vec<usize> = match variant {
        CurrentVariant::ContinuousJt => horizons
            .iter()
            .map(|&t| {
                let m = grid.index_of(t)?;
                if m == 0 {
                    return Err(Error::HorizonMisaligned(
                        "J_T needs a horizon of at least one grid step".into(),
                    ));
                }
                Ok(m)
            })
            .collect::<Result<_>>()?,
        CurrentVariant::DiscreteJn => {
            let stride = grid.integer_stride()?;
            horizons
                .iter()
                .map(|&t| {
                    if t < 2.0 || t.fract() != 0.0 {
                        return Err(Error::HorizonMisaligned(format!(
                            "J_N horizons must be integers >= 2, got {t}"
                        )));
                    }
                    if t - 1.0 > grid.horizon() {
                        return Err(Error::HorizonMisaligned(format!(
                            "N - 1 = {} exceeds the grid horizon {}",
                            t - 1.0,
                            grid.horizon()
                        )));
                    }
                    Ok(t as usize * stride)
                })
                .collect::<Result<_>>()?
        }
    };

    let dt = grid.dt();
    let stride = match variant {
        CurrentVariant::DiscreteJn => grid.integer_stride()?,
        CurrentVariant::ContinuousJt => 0,
    };

    // Per path: log J at each checkpoint, then every requested power of it.
    let per_path: Vec<Vec<f64>> = map_paths(hurst, grid, n_paths, seed, |_, path| {
        let mut values = Vec::with_capacity(checkpoints.len() * ks.len());
        let mut emit = |log_j: f64| {
            for &k in ks {
                values.push((k * log_j).exp());
            }
        };
        match variant {
            CurrentVariant::ContinuousJt => {
                // Interior running sum X_1..X_{i-1}; endpoints joined per
                // checkpoint so no term ever has to be removed.
                let mut interior = LogSumExp::new();
                let mut next = 0;
                for i in 1..path.len() {
                    if next < checkpoints.len() && checkpoints[next] == i {
                        let mut total = interior;
                        total.push(path[0] + LN_HALF);
                        total.push(path[i] + LN_HALF);
                        emit(-(total.value() + dt.ln()));
                        next += 1;
                    }
                    interior.push(path[i]);
                }
            }
            CurrentVariant::DiscreteJn => {
                let mut acc = LogSumExp::new();
                acc.push(0.0);
                let mut next = 0;
                let max_n = *checkpoints.last().unwrap() / stride;
                for n in 1..=max_n {
                    if next < checkpoints.len() && checkpoints[next] == n * stride {
                        emit(LN_HALF - acc.value());
                        next += 1;
                    }
                    acc.push(path[n * stride]);
                }
            }
        }
        values
    })?;

    Ok(ks
        .iter()
        .enumerate()
        .map(|(ki, &k)| {
            let estimates = (0..horizons.len())
                .map(|j| {
                    let column: Vec<f64> =
                        per_path.iter().map(|v| v[j * ks.len() + ki]).collect();
                    mean_estimate(&column, DEFAULT_CI_LEVEL)
                })
                .collect();
            CurrentMomentCurve {
                hurst,
                k,
                variant,
                horizons: horizons.to_vec(),
                estimates,
                n_paths,
                grid_steps: grid.steps(),
                seed,
            }
        })
        .collect())
}

/// Single-order moment curve; see [`moment_curves`].
pub fn moment_curve(
    hurst: HurstIndex,
    k: f64,
    variant: CurrentVariant,
    grid: SimulationGrid,
    horizons: &[f64],
    n_paths: usize,
    seed: u64,
) -> Result<CurrentMomentCurve> {
    Ok(moment_curves(hurst, &[k], variant, grid, horizons, n_paths, seed)?
        .pop()
        .expect("one order in, one curve out"))
}

/// Fits the decay exponent of `E[J^k]` in the horizon. The self-similarity
/// prediction is `1 − H` for every `k`.
pub fn current_exponent(
    curve: &CurrentMomentCurve,
    with_log_correction: bool,
) -> Result<ExponentFit> {
    let points: Vec<(f64, EstimateWithCI)> = curve
        .horizons
        .iter()
        .cloned()
        .zip(curve.estimates.iter().cloned())
        .collect();
    fit_power_law(&points, with_log_correction)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampler::{PathBatch, SampleMethod};
    use approx::assert_relative_eq;

    fn grid(steps: usize, horizon: f64) -> SimulationGrid {
        SimulationGrid::new(steps, horizon).unwrap()
    }

    fn zero_path(grid: &SimulationGrid) -> Vec<f64> {
        vec![0.0; grid.n_points()]
    }

    #[test]
    fn jn_closed_forms() {
        let g = grid(16, 16.0);
        let z = zero_path(&g);
        assert_relative_eq!(compute_jn(&z, 2, &g).unwrap(), 0.25, max_relative = 1e-14);
        assert_relative_eq!(compute_jn(&z, 10, &g).unwrap(), 0.05, max_relative = 1e-14);

        let mut path = zero_path(&g);
        path[1] = 3f64.ln(); // X_1 = log 3 (dt = 1 so index 1 is t = 1)
        assert_relative_eq!(
            compute_jn(&path, 2, &g).unwrap(),
            0.125,
            max_relative = 1e-14
        );
    }

    #[test]
    fn jn_bounds_and_preconditions() {
        let g = grid(16, 16.0);
        let z = zero_path(&g);
        assert!(compute_jn(&z, 1, &g).is_err());
        assert!(compute_jn(&z, 40, &g).is_err());
        for n in [2, 4, 8, 16] {
            let j = compute_jn(&z, n, &g).unwrap();
            assert!(j > 0.0 && j <= 0.5);
        }
        // Integer times absent from the grid.
        let g_bad = grid(8, 3.0);
        assert!(compute_jn(&zero_path(&g_bad), 2, &g_bad).is_err());
    }

    #[test]
    fn jt_zero_path_is_one_over_t() {
        let g = grid(512, 8.0);
        let z = zero_path(&g);
        assert_relative_eq!(compute_jt(&z, 5.0, &g).unwrap(), 0.2, max_relative = 1e-12);
        assert_relative_eq!(compute_jt(&z, 8.0, &g).unwrap(), 0.125, max_relative = 1e-12);
    }

    #[test]
    fn jt_exponential_ramp_quadrature_converges_second_order() {
        // X_s = s on [0, 1]: ∫ e^s ds = e − 1, so J_1 = 1/(e − 1), and the
        // trapezoid error must shrink by about 4x per refinement.
        let exact = 1.0 / (std::f64::consts::E - 1.0);
        let mut errors = Vec::new();
        for &steps in &[64usize, 128, 256] {
            let g = grid(steps, 1.0);
            let path: Vec<f64> = (0..=steps).map(|i| g.time(i)).collect();
            let j = compute_jt(&path, 1.0, &g).unwrap();
            errors.push((j - exact).abs());
        }
        assert_relative_eq!(errors[0] / errors[1], 4.0, max_relative = 0.1);
        assert_relative_eq!(errors[1] / errors[2], 4.0, max_relative = 0.1);
        let g = grid(256, 1.0);
        let path: Vec<f64> = (0..=256).map(|i| g.time(i)).collect();
        assert_relative_eq!(
            compute_jt(&path, 1.0, &g).unwrap(),
            0.581_976_706_869_326_2,
            max_relative = 1e-4
        );
    }

    #[test]
    fn jt_monotone_and_bounded_pathwise() {
        let g = grid(128, 8.0);
        let h = HurstIndex::new(0.3).unwrap();
        let batch = crate::sampler::sample_fbm_batch(h, g, 50, 21).unwrap();
        for p in 0..batch.n_paths() {
            let path = batch.path(p);
            let mut prev = f64::INFINITY;
            for &t in &[1.0, 2.0, 4.0, 8.0] {
                let j = compute_jt(path, t, &g).unwrap();
                assert!(j <= prev, "J_T increased in T");
                let m = g.index_of(t).unwrap();
                let min_x = path[..=m].iter().cloned().fold(f64::INFINITY, f64::min);
                let bound = 1.0 / (t * min_x.exp());
                assert!(j <= bound * (1.0 + 1e-12), "pathwise bound violated");
                prev = j;
            }
        }
    }

    #[test]
    fn degenerate_batch_moment_matches_closed_form() {
        // All-zero paths: J_T = 1/T exactly, so E[J_T^2] at T = 4 is 1/16.
        let g = grid(64, 4.0);
        let h = HurstIndex::new(0.5).unwrap();
        let values = vec![0.0; 3 * g.n_points()];
        let batch = PathBatch::from_values(g, h, 0, SampleMethod::Cholesky, values).unwrap();
        let mut js = Vec::new();
        for p in 0..batch.n_paths() {
            js.push(compute_jt(batch.path(p), 4.0, &g).unwrap().powi(2));
        }
        let est = mean_estimate(&js, 0.95);
        assert_relative_eq!(est.point, 1.0 / 16.0, max_relative = 1e-12);
        assert_eq!(est.stderr, 0.0);
    }

    #[test]
    fn moment_curve_streaming_matches_direct_evaluation() {
        let h = HurstIndex::new(0.6).unwrap();
        let g = grid(256, 8.0);
        let horizons = [1.0, 2.0, 4.0, 8.0];
        let curve = moment_curve(
            h,
            1.5,
            CurrentVariant::ContinuousJt,
            g,
            &horizons,
            64,
            13,
        )
        .unwrap();

        let batch = crate::sampler::sample_fbm_batch(h, g, 64, 13).unwrap();
        for (j, &t) in horizons.iter().enumerate() {
            let direct: Vec<f64> = (0..64)
                .map(|p| compute_jt(batch.path(p), t, &g).unwrap().powf(1.5))
                .collect();
            let est = mean_estimate(&direct, 0.95);
            assert_relative_eq!(curve.estimates[j].point, est.point, max_relative = 1e-12);
        }

        // Same for the discrete variant.
        let g_int = grid(32, 8.0);
        let horizons = [2.0, 4.0, 8.0];
        let curve =
            moment_curve(h, 2.0, CurrentVariant::DiscreteJn, g_int, &horizons, 64, 13).unwrap();
        let batch = crate::sampler::sample_fbm_batch(h, g_int, 64, 13).unwrap();
        for (j, &t) in horizons.iter().enumerate() {
            let direct: Vec<f64> = (0..64)
                .map(|p| compute_jn(batch.path(p), t as usize, &g_int).unwrap().powi(2))
                .collect();
            let est = mean_estimate(&direct, 0.95);
            assert_relative_eq!(curve.estimates[j].point, est.point, max_relative = 1e-12);
        }
    }

    #[test]
    fn moment_curve_estimates_positive_and_monotone() {
        let h = HurstIndex::new(0.4).unwrap();
        let g = grid(256, 8.0);
        let curve = moment_curve(
            h,
            0.5,
            CurrentVariant::ContinuousJt,
            g,
            &[1.0, 2.0, 4.0, 8.0],
            2000,
            17,
        )
        .unwrap();
        let mut prev = f64::INFINITY;
        for est in &curve.estimates {
            assert!(est.point > 0.0);
            // J is pathwise nonincreasing in T, hence so is every mean.
            assert!(est.point <= prev);
            prev = est.point;
        }
    }

    #[test]
    fn exact_synthetic_exponent() {
        // E = T^{-0.25} exactly.
        let points: Vec<f64> = vec![16.0, 32.0, 64.0, 128.0];
        let curve = CurrentMomentCurve {
            hurst: HurstIndex::new(0.75).unwrap(),
            k: 1.0,
            variant: CurrentVariant::ContinuousJt,
            horizons: points.clone(),
            estimates: points
                .iter()
                .map(|&t| {
                    let p = t.powf(-0.25);
                    EstimateWithCI {
                        point: p,
                        stderr: 0.0,
                        n: 1,
                        ci_level: 0.95,
                        ci_low: p,
                        ci_high: p,
                    }
                })
                .collect(),
            n_paths: 1,
            grid_steps: 2,
            seed: 0,
        };
        let fit = current_exponent(&curve, false).unwrap();
        assert_relative_eq!(fit.theta, 0.25, max_relative = 1e-10);
    }

    #[test]
    fn dyadic_horizons_enforced() {
        let h = HurstIndex::new(0.5).unwrap();
        let g = grid(64, 8.0);
        assert!(moment_curve(
            h,
            1.0,
            CurrentVariant::ContinuousJt,
            g,
            &[1.0, 2.0, 3.0],
            10,
            1
        )
        .is_err());
        assert!(moment_curve(
            h,
            -1.0,
            CurrentVariant::ContinuousJt,
            g,
            &[1.0, 2.0],
            10,
            1
        )
        .is_err());
    }
}
