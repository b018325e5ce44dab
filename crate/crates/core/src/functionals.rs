//! Extremal path functionals on `[0, 1]` and their small-value behavior:
//! the argmax location, the last zero, the time spent positive, and the
//! Laplace transform of the running maximum — plus the closed-form Brownian
//! oracles (arcsine law, reflection principle) used to validate them at
//! `H = 1/2`.

use std::fmt;

use crate::error::{Error, Result};
use crate::estimators::{
    bernoulli_estimate, fit_power_law, mean_estimate, EstimateWithCI, ExponentFit,
};
use crate::numerics::compensated_sum;
use crate::persistence::DEFAULT_CI_LEVEL;
use crate::sampler::{map_paths, HurstIndex, SimulationGrid};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FunctionalKind {
    /// Location of the path maximum on `[0, 1]`.
    TauMax,
    /// Last zero in `(0, 1)`.
    LastZero,
    /// Lebesgue measure of `{t ∈ (0, 1) : X_t > 0}`.
    PositiveMeasure,
}

impl fmt::Display for FunctionalKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::TauMax => write!(f, "tau_max"),
            Self::LastZero => write!(f, "last_zero"),
            Self::PositiveMeasure => write!(f, "positive_measure"),
        }
    }
}

/// `P(ξ < ε)` estimates over a decreasing epsilon sweep.
#[derive(Debug, Clone)]
pub struct SmallValueCurve {
    pub hurst: HurstIndex,
    pub kind: FunctionalKind,
    pub epsilons: Vec<f64>,
    pub estimates: Vec<EstimateWithCI>,
    pub n_paths: usize,
    pub grid_steps: usize,
    pub seed: u64,
}

/// `E[exp(−λ X*_1)]` estimates over an increasing lambda sweep.
#[derive(Debug, Clone)]
pub struct LaplaceCurve {
    pub hurst: HurstIndex,
    pub lambdas: Vec<f64>,
    pub estimates: Vec<EstimateWithCI>,
    pub n_paths: usize,
    pub grid_steps: usize,
    pub seed: u64,
}

fn curve_csv(
    hurst: HurstIndex,
    functional: &str,
    xs: &[f64],
    estimates: &[EstimateWithCI],
    n_paths: usize,
    grid_steps: usize,
    seed: u64,
) -> String {
    let mut out = String::from(
        "hurst,functional,epsilon_or_lambda,estimate,stderr,n_paths,grid_steps,seed\n",
    );
    for (x, est) in xs.iter().zip(estimates) {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{}\n",
            hurst.value(),
            functional,
            x,
            est.point,
            est.stderr,
            n_paths,
            grid_steps,
            seed
        ));
    }
    out
}

impl SmallValueCurve {
    pub fn to_csv(&self) -> String {
        curve_csv(
            self.hurst,
            &self.kind.to_string(),
            &self.epsilons,
            &self.estimates,
            self.n_paths,
            self.grid_steps,
            self.seed,
        )
    }
}

impl LaplaceCurve {
    pub fn to_csv(&self) -> String {
        curve_csv(
            self.hurst,
            "laplace_max",
            &self.lambdas,
            &self.estimates,
            self.n_paths,
            self.grid_steps,
            self.seed,
        )
    }
}

fn assert_unit_horizon(grid: &SimulationGrid) {
    assert!(
        grid.horizon() == 1.0,
        "path functionals are defined on [0, 1]; grid horizon is {}",
        grid.horizon()
    );
}

/// Grid location of the path maximum, ties broken by the smallest index.
/// The continuous-time argmax is a.s. unique; grid ties are discretization
/// artifacts.
pub fn compute_tau_max(path: &[f64], grid: &SimulationGrid) -> f64 {
    assert_unit_horizon(grid);
    let mut best = 0usize;
    for (i, &x) in path.iter().enumerate() {
        if x > path[best] {
            best = i;
        }
    }
    grid.time(best)
}

/// Root of the linear interpolant in `[t_i, t_{i+1}]` given a sign change.
fn interpolated_root(grid: &SimulationGrid, i: usize, xi: f64, xj: f64) -> f64 {
    let frac = if xi == xj { 0.0 } else { xi / (xi - xj) };
    grid.time(i) + frac * grid.dt()
}

/// Last zero of the path in `(0, 1]`: the linear-interpolation root in the
/// last interval with a sign change (exact zeros included), or `0` when the
/// path never returns to zero after `t_0`.
pub fn compute_last_zero(path: &[f64], grid: &SimulationGrid) -> f64 {
    assert_unit_horizon(grid);
    for i in (0..grid.steps()).rev() {
        let (xi, xj) = (path[i], path[i + 1]);
        if xj == 0.0 {
            return grid.time(i + 1);
        }
        if xi == 0.0 {
            if i >= 1 {
                return grid.time(i);
            }
            continue; // X_0 = 0 is the trivial zero, not a return to zero
        }
        if (xi > 0.0) != (xj > 0.0) {
            return interpolated_root(grid, i, xi, xj);
        }
    }
    0.0
}

/// Lebesgue measure of `{t : X_t > 0}` for the piecewise-linear interpolant:
/// full intervals count `dt`, straddling intervals are split at the
/// interpolated root.
pub fn compute_positive_measure(path: &[f64], grid: &SimulationGrid) -> f64 {
    assert_unit_horizon(grid);
    let dt = grid.dt();
    let mut measure = 0.0;
    for i in 0..grid.steps() {
        let (xi, xj) = (path[i], path[i + 1]);
        let pos_i = xi > 0.0;
        let pos_j = xj > 0.0;
        if pos_i && pos_j {
            measure += dt;
        } else if pos_i != pos_j {
            let frac = xi / (xi - xj);
            measure += if pos_i { frac * dt } else { (1.0 - frac) * dt };
        }
    }
    measure.min(1.0)
}

/// Grid maximum `max_i X_{t_i}` (an underestimate of the continuous
/// supremum; see the refinement sweeps for the induced bias).
pub fn grid_max(path: &[f64]) -> f64 {
    path.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
}

/// First interpolated zero strictly after `t0`, or `None` when the path
/// keeps its sign up to the grid horizon.
pub fn first_zero_after(path: &[f64], grid: &SimulationGrid, t0: f64) -> Option<f64> {
    for i in 0..grid.steps() {
        if grid.time(i + 1) <= t0 {
            continue;
        }
        let (xi, xj) = (path[i], path[i + 1]);
        let root = if xj == 0.0 {
            Some(grid.time(i + 1))
        } else if xi == 0.0 && i >= 1 {
            Some(grid.time(i))
        } else if xi != 0.0 && (xi > 0.0) != (xj > 0.0) {
            Some(interpolated_root(grid, i, xi, xj))
        } else {
            None
        };
        if let Some(r) = root {
            if r > t0 {
                return Some(r);
            }
        }
    }
    None
}

/// Whether the path is strictly negative at every grid point `t_i` with
/// `from_t ≤ t_i ≤ horizon`. With `from_t` on the grid this event implies,
/// pathwise and exactly for the estimators above, that the last zero, the
/// positive measure and the argmax location are all below `from_t`.
pub fn stays_negative_from(path: &[f64], grid: &SimulationGrid, from_t: f64) -> bool {
    let start = match grid.index_of(from_t) {
        Ok(i) => i,
        Err(_) => ((from_t / grid.dt()).ceil() as usize).min(grid.n_points()),
    };
    path[start..].iter().all(|&x| x < 0.0)
}

/// All three functional values per path of one shared batch on `[0, 1]`.
#[derive(Debug, Clone)]
pub struct FunctionalSamples {
    pub hurst: HurstIndex,
    pub n_paths: usize,
    pub grid_steps: usize,
    pub seed: u64,
    dt: f64,
    tau_max: Vec<f64>,
    last_zero: Vec<f64>,
    positive_measure: Vec<f64>,
}

impl FunctionalSamples {
    pub fn values(&self, kind: FunctionalKind) -> &[f64] {
        match kind {
            FunctionalKind::TauMax => &self.tau_max,
            FunctionalKind::LastZero => &self.last_zero,
            FunctionalKind::PositiveMeasure => &self.positive_measure,
        }
    }
}

/// Evaluates all three functionals on every path of a fresh batch.
pub fn functional_samples(
    hurst: HurstIndex,
    grid: SimulationGrid,
    n_paths: usize,
    seed: u64,
) -> Result<FunctionalSamples> {
    if grid.horizon() != 1.0 {
        return Err(Error::InvalidGrid(
            "path functionals need a grid on [0, 1]".into(),
        ));
    }
    let triples = map_paths(hurst, grid, n_paths, seed, move |_, path| {
        (
            compute_tau_max(path, &grid),
            compute_last_zero(path, &grid),
            compute_positive_measure(path, &grid),
        )
    })?;
    let mut tau_max = Vec::with_capacity(n_paths);
    let mut last_zero = Vec::with_capacity(n_paths);
    let mut positive_measure = Vec::with_capacity(n_paths);
    for (t, z, s) in triples {
        tau_max.push(t);
        last_zero.push(z);
        positive_measure.push(s);
    }
    Ok(FunctionalSamples {
        hurst,
        n_paths,
        grid_steps: grid.steps(),
        seed,
        dt: grid.dt(),
        tau_max,
        last_zero,
        positive_measure,
    })
}

/// Small-value curve of one functional over precomputed shared samples.
pub fn small_value_curve_from(
    samples: &FunctionalSamples,
    kind: FunctionalKind,
    epsilons: &[f64],
) -> Result<SmallValueCurve> {
    validate_epsilons_dt(epsilons, samples.dt)?;
    let values = samples.values(kind);
    let estimates = epsilons
        .iter()
        .map(|&e| {
            let hits = values.iter().filter(|&&v| v < e).count() as u64;
            bernoulli_estimate(hits, samples.n_paths as u64, DEFAULT_CI_LEVEL)
        })
        .collect();
    Ok(SmallValueCurve {
        hurst: samples.hurst,
        kind,
        epsilons: epsilons.to_vec(),
        estimates,
        n_paths: samples.n_paths,
        grid_steps: samples.grid_steps,
        seed: samples.seed,
    })
}

fn validate_epsilons_dt(epsilons: &[f64], dt: f64) -> Result<()> {
    if epsilons.is_empty() {
        return Err(Error::InvalidInput("at least one epsilon required".into()));
    }
    let floor = 8.0 * dt;
    for &e in epsilons {
        if !(e > 0.0 && e < 1.0) {
            return Err(Error::InvalidInput(format!(
                "epsilons must lie in (0, 1), got {e}"
            )));
        }
        if e < floor {
            return Err(Error::EpsilonBelowResolution { epsilon: e, floor });
        }
    }
    for w in epsilons.windows(2) {
        if (w[1] / w[0] - 0.5).abs() > 1e-9 {
            return Err(Error::InvalidInput(format!(
                "epsilons must halve at each step, got {} -> {}",
                w[0], w[1]
            )));
        }
    }
    Ok(())
}

/// Small-value curve `P(ξ < ε)` for one functional over a fresh shared
/// batch. Epsilons decrease dyadically and must stay at least eight grid
/// steps above the resolution floor.
pub fn small_value_curve(
    hurst: HurstIndex,
    kind: FunctionalKind,
    grid: SimulationGrid,
    epsilons: &[f64],
    n_paths: usize,
    seed: u64,
) -> Result<SmallValueCurve> {
    validate_epsilons_dt(epsilons, grid.dt())?;
    let samples = functional_samples(hurst, grid, n_paths, seed)?;
    small_value_curve_from(&samples, kind, epsilons)
}

/// Fits the small-value exponent of `P(ξ < ε) ~ ε^θ` as ε decreases; the fit
/// runs against `x = 1/ε` so the design points increase and `θ` carries the
/// usual decay sign. The self-similarity prediction is `θ = 1 − H`.
pub fn small_value_exponent(
    curve: &SmallValueCurve,
    with_log_correction: bool,
) -> Result<ExponentFit> {
    // Epsilons decrease, so 1/ε already increases in step.
    let points: Vec<(f64, EstimateWithCI)> = curve
        .epsilons
        .iter()
        .map(|&e| 1.0 / e)
        .zip(curve.estimates.iter().cloned())
        .collect();
    fit_power_law(&points, with_log_correction)
}

/// One Laplace-transform point `E[exp(−λ M)]` over precomputed grid maxima.
pub fn laplace_point(maxima: &[f64], lambda: f64) -> EstimateWithCI {
    let samples: Vec<f64> = maxima.iter().map(|&m| (-lambda * m).exp()).collect();
    mean_estimate(&samples, DEFAULT_CI_LEVEL)
}

/// Laplace transform of the running maximum on `[0, 1]` over a dyadic lambda
/// sweep (`λ ≥ 1`). The decay exponent in λ targets `(1 − H)/H`.
pub fn laplace_transform_max(
    hurst: HurstIndex,
    grid: SimulationGrid,
    lambdas: &[f64],
    n_paths: usize,
    seed: u64,
) -> Result<LaplaceCurve> {
    if grid.horizon() != 1.0 {
        return Err(Error::InvalidGrid(
            "the running-maximum transform needs a grid on [0, 1]".into(),
        ));
    }
    if lambdas.is_empty() {
        return Err(Error::InvalidInput("at least one lambda required".into()));
    }
    for &l in lambdas {
        if l < 1.0 {
            return Err(Error::InvalidInput(format!(
                "lambdas must be >= 1, got {l}"
            )));
        }
    }
    for w in lambdas.windows(2) {
        if (w[1] / w[0] - 2.0).abs() > 1e-9 {
            return Err(Error::InvalidInput(format!(
                "lambdas must double at each step, got {} -> {}",
                w[0], w[1]
            )));
        }
    }

    let maxima = map_paths(hurst, grid, n_paths, seed, |_, path| grid_max(path))?;
    let estimates = lambdas.iter().map(|&l| laplace_point(&maxima, l)).collect();

    Ok(LaplaceCurve {
        hurst,
        lambdas: lambdas.to_vec(),
        estimates,
        n_paths,
        grid_steps: grid.steps(),
        seed,
    })
}

/// Fits the decay exponent of the Laplace curve in λ.
pub fn laplace_exponent(curve: &LaplaceCurve, with_log_correction: bool) -> Result<ExponentFit> {
    let points: Vec<(f64, EstimateWithCI)> = curve
        .lambdas
        .iter()
        .cloned()
        .zip(curve.estimates.iter().cloned())
        .collect();
    fit_power_law(&points, with_log_correction)
}

/// Arcsine CDF `(2/π) arcsin(√x)` on `[0, 1]`: the Brownian law of the
/// argmax location, the last zero, and the occupation time of `(0, ∞)`.
pub fn arcsine_cdf(x: f64) -> f64 {
    assert!((0.0..=1.0).contains(&x), "arcsine CDF needs x in [0, 1]");
    std::f64::consts::FRAC_2_PI * x.sqrt().asin()
}

/// Brownian survival `P(sup_{[0,T]} W ≤ a) = 2Φ(a/√T) − 1 = erf(a/√(2T))`,
/// by the reflection principle.
pub fn bm_survival(a: f64, t: f64) -> f64 {
    assert!(a > 0.0 && t > 0.0, "bm_survival needs a, T > 0");
    libm::erf(a / (2.0 * t).sqrt())
}

/// Mean of the positive parts, used by lower-bound cross-checks.
pub fn positive_mean(samples: &[f64]) -> f64 {
    compensated_sum(samples) / samples.len() as f64
}
