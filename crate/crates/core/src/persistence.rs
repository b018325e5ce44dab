//! Survival probabilities `P(X_t ≤ f(t), 0 ≤ t ≤ T)` under moving
//! boundaries, estimated over dyadic horizon sweeps from one shared batch.
//!
//! Survival is the closed event `X ≤ f`; a path crosses at the first grid
//! point where it is strictly above the boundary. The first-crossing index is
//! a sufficient statistic for every horizon at once, which makes the
//! per-horizon estimates exactly nested: tightening `T` can only remove
//! survivors.

use std::fmt;

use crate::boundaries::BoundarySpec;
use crate::error::{Error, Result};
use crate::estimators::{bernoulli_estimate, fit_power_law, EstimateWithCI, ExponentFit};
use crate::sampler::{map_paths, HurstIndex, SimulationGrid};

pub const DEFAULT_CI_LEVEL: f64 = 0.95;

/// How the survival event is monitored.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MonitoringMode {
    /// Every grid point in `(0, T]`.
    Grid,
    /// Integer times `n = 1..⌊T⌋` only.
    IntegerTimes,
}

impl fmt::Display for MonitoringMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Grid => write!(f, "grid"),
            Self::IntegerTimes => write!(f, "integer"),
        }
    }
}

/// Survival estimates over an increasing horizon sweep.
#[derive(Debug, Clone)]
pub struct SurvivalCurve {
    pub hurst: HurstIndex,
    pub boundary: BoundarySpec,
    pub mode: MonitoringMode,
    pub horizons: Vec<f64>,
    pub estimates: Vec<EstimateWithCI>,
    pub n_paths: usize,
    pub grid_steps: usize,
    pub seed: u64,
}

impl SurvivalCurve {
    pub fn to_csv(&self) -> String {
        let mut out = String::from(
            "hurst,boundary_descriptor,mode,T,p_hat,stderr,n_paths,grid_steps,seed\n",
        );
        for (t, est) in self.horizons.iter().zip(&self.estimates) {
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{},{}\n",
                self.hurst.value(),
                self.boundary,
                self.mode,
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

/// First grid index `i ≥ 1` with `X_{t_i} > f(t_i)`, or `None` when the path
/// never leaves the closed survival region. Errors when `f(0) ≤ 0`: `X_0 = 0`
/// then makes the survival event degenerate.
pub fn first_crossing_index(
    path: &[f64],
    boundary: &BoundarySpec,
    grid: &SimulationGrid,
) -> Result<Option<usize>> {
    if boundary.eval(0.0) <= 0.0 {
        return Err(Error::BoundaryViolatedAtZero);
    }
    debug_assert_eq!(path.len(), grid.n_points());
    for i in 1..grid.n_points() {
        if path[i] > boundary.eval(grid.time(i)) {
            return Ok(Some(i));
        }
    }
    Ok(None)
}

/// First position `r ≥ 1` (1-based rank in the monitored sequence) where the
/// path exceeds the precomputed boundary values, or `None`.
fn first_crossing_rank(path: &[f64], monitor: &[(usize, f64)]) -> Option<u32> {
    for (rank, &(idx, bound)) in monitor.iter().enumerate() {
        if path[idx] > bound {
            return Some(rank as u32 + 1);
        }
    }
    None
}

fn validate_horizons(horizons: &[f64]) -> Result<()> {
    if horizons.is_empty() {
        return Err(Error::InvalidInput("at least one horizon required".into()));
    }
    for w in horizons.windows(2) {
        if w[1] <= w[0] {
            return Err(Error::InvalidInput(
                "horizons must be strictly increasing".into(),
            ));
        }
    }
    Ok(())
}

/// Monitored grid indices and boundary values for a mode, plus for each
/// horizon the number of leading monitor points it covers.
fn monitoring_plan(
    boundary: &BoundarySpec,
    mode: MonitoringMode,
    grid: &SimulationGrid,
    horizons: &[f64],
) -> Result<(Vec<(usize, f64)>, Vec<usize>)> {
    let monitor: Vec<(usize, f64)> = match mode {
        MonitoringMode::Grid => (1..grid.n_points())
            .map(|i| (i, boundary.eval(grid.time(i))))
            .collect(),
        MonitoringMode::IntegerTimes => {
            let stride = grid.integer_stride()?;
            (1..=(grid.horizon().floor() as usize))
                .map(|n| (n * stride, boundary.eval(n as f64)))
                .collect()
        }
    };

    let mut coverage = Vec::with_capacity(horizons.len());
    for &t in horizons {
        if t > grid.horizon() {
            return Err(Error::HorizonMisaligned(format!(
                "horizon {t} exceeds the grid horizon {}",
                grid.horizon()
            )));
        }
        let count = match mode {
            MonitoringMode::Grid => grid.index_of(t)?,
            MonitoringMode::IntegerTimes => {
                if t < 1.0 || t.fract() != 0.0 {
                    return Err(Error::HorizonMisaligned(format!(
                        "integer-times monitoring needs integer horizons >= 1, got {t}"
                    )));
                }
                t as usize
            }
        };
        coverage.push(count);
    }
    Ok((monitor, coverage))
}

/// Estimates survival curves for several boundaries from one shared batch:
/// each path contributes one first-crossing rank per boundary, compared
/// against every horizon. Sharing the batch makes cross-boundary comparisons
/// pathwise (tightening a boundary can only remove survivors, exactly).
pub fn survival_curves(
    hurst: HurstIndex,
    boundaries: &[BoundarySpec],
    mode: MonitoringMode,
    grid: SimulationGrid,
    horizons: &[f64],
    n_paths: usize,
    seed: u64,
) -> Result<Vec<SurvivalCurve>> {
    if boundaries.is_empty() {
        return Err(Error::InvalidInput("at least one boundary required".into()));
    }
    validate_horizons(horizons)?;
    let mut monitors = Vec::with_capacity(boundaries.len());
    let mut coverage = Vec::new();
    for boundary in boundaries {
        boundary.validate()?;
        if boundary.eval(0.0) <= 0.0 {
            return Err(Error::BoundaryViolatedAtZero);
        }
        let (monitor, cover) = monitoring_plan(boundary, mode, &grid, horizons)?;
        monitors.push(monitor);
        coverage = cover;
    }

    let ranks: Vec<Vec<Option<u32>>> = map_paths(hurst, grid, n_paths, seed, |_, path| {
        monitors
            .iter()
            .map(|monitor| first_crossing_rank(path, monitor))
            .collect()
    })?;

    let mut survivors = vec![vec![0u64; horizons.len()]; boundaries.len()];
    for per_path in &ranks {
        for (b, rank) in per_path.iter().enumerate() {
            for (j, &cover) in coverage.iter().enumerate() {
                let survived = match rank {
                    None => true,
                    Some(r) => *r as usize > cover,
                };
                if survived {
                    survivors[b][j] += 1;
                }
            }
        }
    }

    Ok(boundaries
        .iter()
        .zip(survivors)
        .map(|(boundary, counts)| SurvivalCurve {
            hurst,
            boundary: *boundary,
            mode,
            horizons: horizons.to_vec(),
            estimates: counts
                .iter()
                .map(|&s| bernoulli_estimate(s, n_paths as u64, DEFAULT_CI_LEVEL))
                .collect(),
            n_paths,
            grid_steps: grid.steps(),
            seed,
        })
        .collect())
}

/// Single-boundary survival curve; see [`survival_curves`].
pub fn survival_curve(
    hurst: HurstIndex,
    boundary: &BoundarySpec,
    mode: MonitoringMode,
    grid: SimulationGrid,
    horizons: &[f64],
    n_paths: usize,
    seed: u64,
) -> Result<SurvivalCurve> {
    Ok(survival_curves(hurst, &[*boundary], mode, grid, horizons, n_paths, seed)?
        .pop()
        .expect("one boundary in, one curve out"))
}

fn validate_dyadic_sweep(horizons: &[f64]) -> Result<()> {
    if horizons.len() < 4 {
        return Err(Error::InvalidInput(
            "exponent fits need at least 4 dyadic horizons".into(),
        ));
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

/// Estimates the survival curve and fits its decay exponent over a dyadic
/// horizon sweep (at least four horizons, spanning three octaves or more).
/// The self-similarity prediction for the exponent is `1 − H`.
pub fn survival_exponent(
    hurst: HurstIndex,
    boundary: &BoundarySpec,
    mode: MonitoringMode,
    grid: SimulationGrid,
    horizons: &[f64],
    n_paths: usize,
    seed: u64,
    with_log_correction: bool,
) -> Result<(SurvivalCurve, ExponentFit)> {
    validate_dyadic_sweep(horizons)?;
    let curve = survival_curve(hurst, boundary, mode, grid, horizons, n_paths, seed)?;
    let points: Vec<(f64, EstimateWithCI)> = curve
        .horizons
        .iter()
        .cloned()
        .zip(curve.estimates.iter().cloned())
        .collect();
    let fit = fit_power_law(&points, with_log_correction)?;
    Ok((curve, fit))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid(steps: usize, horizon: f64) -> SimulationGrid {
        SimulationGrid::new(steps, horizon).unwrap()
    }

    #[test]
    fn crossing_index_conventions() {
        let g = grid(2, 1.0);
        let level = BoundarySpec::constant(1.0);

        // Never crosses.
        assert_eq!(first_crossing_index(&[0.0, 0.0, 0.0], &level, &g).unwrap(), None);
        // Crosses at the first interior point.
        assert_eq!(
            first_crossing_index(&[0.0, 2.0, 0.0], &level, &g).unwrap(),
            Some(1)
        );
        // Touching the boundary is survival: the event is closed.
        assert_eq!(
            first_crossing_index(&[0.0, 1.0, 1.0], &level, &g).unwrap(),
            None
        );
    }

    #[test]
    fn nonpositive_boundary_at_zero_rejected() {
        let g = grid(2, 1.0);
        let level = BoundarySpec::constant(0.0);
        assert!(matches!(
            first_crossing_index(&[0.0, 0.0, 0.0], &level, &g),
            Err(Error::BoundaryViolatedAtZero)
        ));
        let h = HurstIndex::new(0.5).unwrap();
        assert!(matches!(
            survival_curve(h, &level, MonitoringMode::Grid, g, &[1.0], 10, 1),
            Err(Error::BoundaryViolatedAtZero)
        ));
    }

    #[test]
    fn unreachable_boundary_gives_probability_one() {
        let h = HurstIndex::new(0.7).unwrap();
        let g = grid(64, 1.0);
        let far = BoundarySpec::constant(1e6);
        let curve =
            survival_curve(h, &far, MonitoringMode::Grid, g, &[0.5, 1.0], 500, 3).unwrap();
        for est in &curve.estimates {
            assert_eq!(est.point, 1.0);
        }
    }

    #[test]
    fn horizons_validated() {
        let h = HurstIndex::new(0.5).unwrap();
        let g = grid(64, 1.0);
        let level = BoundarySpec::constant(1.0);
        // Beyond the grid horizon.
        assert!(survival_curve(h, &level, MonitoringMode::Grid, g, &[2.0], 10, 1).is_err());
        // Not a grid point.
        assert!(
            survival_curve(h, &level, MonitoringMode::Grid, g, &[0.3], 10, 1).is_err()
        );
        // Not increasing.
        assert!(
            survival_curve(h, &level, MonitoringMode::Grid, g, &[0.5, 0.5], 10, 1).is_err()
        );
        // Integer mode needs integer horizons.
        let g16 = grid(64, 16.0);
        assert!(survival_curve(
            h,
            &level,
            MonitoringMode::IntegerTimes,
            g16,
            &[1.5],
            10,
            1
        )
        .is_err());
    }

    #[test]
    fn nestedness_is_exact() {
        let h = HurstIndex::new(0.3).unwrap();
        let g = grid(256, 8.0);
        let level = BoundarySpec::constant(0.5);
        let horizons = [1.0, 2.0, 4.0, 8.0];
        let curve =
            survival_curve(h, &level, MonitoringMode::Grid, g, &horizons, 4000, 9).unwrap();
        for w in curve.estimates.windows(2) {
            assert!(w[1].point <= w[0].point);
        }
    }

    #[test]
    fn tightening_the_boundary_never_helps_pathwise() {
        let h = HurstIndex::new(0.6).unwrap();
        let g = grid(256, 8.0);
        let horizons = [1.0, 2.0, 4.0, 8.0];
        let loose = BoundarySpec::constant(1.0);
        let tight = BoundarySpec::constant(0.9);
        let a = survival_curve(h, &loose, MonitoringMode::Grid, g, &horizons, 3000, 5).unwrap();
        let b = survival_curve(h, &tight, MonitoringMode::Grid, g, &horizons, 3000, 5).unwrap();
        for (ea, eb) in a.estimates.iter().zip(&b.estimates) {
            assert!(eb.point <= ea.point);
        }

        // Same ordering for log boundaries with larger y1 (pointwise lower).
        let loose = BoundarySpec::log_decreasing(1.0, 1.0, 1.0);
        let tight = BoundarySpec::log_decreasing(1.0, 1.5, 1.0);
        let a = survival_curve(h, &loose, MonitoringMode::Grid, g, &horizons, 3000, 5).unwrap();
        let b = survival_curve(h, &tight, MonitoringMode::Grid, g, &horizons, 3000, 5).unwrap();
        for (ea, eb) in a.estimates.iter().zip(&b.estimates) {
            assert!(eb.point <= ea.point);
        }
    }

    #[test]
    fn integer_mode_monitors_fewer_points() {
        // Integer monitoring can only see a subset of the grid events, so its
        // survival estimate dominates the grid one pathwise.
        let h = HurstIndex::new(0.5).unwrap();
        let g = grid(512, 8.0);
        let level = BoundarySpec::constant(1.0);
        let horizons = [2.0, 4.0, 8.0];
        let grid_curve =
            survival_curve(h, &level, MonitoringMode::Grid, g, &horizons, 3000, 11).unwrap();
        let int_curve = survival_curve(
            h,
            &level,
            MonitoringMode::IntegerTimes,
            g,
            &horizons,
            3000,
            11,
        )
        .unwrap();
        for (gi, ii) in grid_curve.estimates.iter().zip(&int_curve.estimates) {
            assert!(ii.point >= gi.point);
        }
    }

    #[test]
    fn exponent_sweep_requires_dyadic_horizons() {
        let h = HurstIndex::new(0.5).unwrap();
        let g = grid(256, 16.0);
        let level = BoundarySpec::constant(1.0);
        assert!(survival_exponent(
            h,
            &level,
            MonitoringMode::Grid,
            g,
            &[2.0, 4.0, 8.0],
            100,
            1,
            false
        )
        .is_err());
        assert!(survival_exponent(
            h,
            &level,
            MonitoringMode::Grid,
            g,
            &[2.0, 4.0, 8.0, 12.0],
            100,
            1,
            false
        )
        .is_err());
    }

    #[test]
    fn csv_shape() {
        let h = HurstIndex::new(0.5).unwrap();
        let g = grid(64, 2.0);
        let level = BoundarySpec::constant(1.0);
        let curve =
            survival_curve(h, &level, MonitoringMode::Grid, g, &[1.0, 2.0], 100, 1).unwrap();
        let csv = curve.to_csv();
        let lines: Vec<&str> = csv.trim_end().lines().collect();
        assert_eq!(lines.len(), 3);
        assert!(lines[0].starts_with("hurst,boundary_descriptor,mode,T,"));
        assert!(lines[1].starts_with("0.5,const:1,grid,1,"));
    }
}
