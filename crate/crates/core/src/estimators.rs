//! Statistical machinery shared by the experiments: Bernoulli and mean
//! estimates with confidence intervals, and weighted log-log regression for
//! decay exponents with an optional logarithmic correction term.

use crate::error::{Error, Result};
use crate::numerics::{compensated_sum, normal_quantile};

/// A point estimate with its standard error and a two-sided confidence
/// interval at `ci_level`.
#[derive(Debug, Clone, Copy)]
pub struct EstimateWithCI {
    pub point: f64,
    pub stderr: f64,
    pub n: u64,
    pub ci_level: f64,
    pub ci_low: f64,
    pub ci_high: f64,
}

fn check_ci_level(ci_level: f64) {
    assert!(
        ci_level > 0.0 && ci_level < 1.0,
        "ci_level must be in (0, 1), got {ci_level}"
    );
}

/// Bernoulli proportion estimate with the Wilson score interval.
pub fn bernoulli_estimate(successes: u64, n: u64, ci_level: f64) -> EstimateWithCI {
    assert!(n >= 1, "bernoulli estimate needs n >= 1");
    assert!(successes <= n, "successes {successes} exceed n {n}");
    check_ci_level(ci_level);

    let nf = n as f64;
    let p = successes as f64 / nf;
    let stderr = (p * (1.0 - p) / nf).sqrt();

    let z = normal_quantile(0.5 + ci_level / 2.0);
    let z2 = z * z;
    let denom = 1.0 + z2 / nf;
    let center = (p + z2 / (2.0 * nf)) / denom;
    let half = z * (p * (1.0 - p) / nf + z2 / (4.0 * nf * nf)).sqrt() / denom;

    EstimateWithCI {
        point: p,
        stderr,
        n,
        ci_level,
        ci_low: (center - half).max(0.0),
        ci_high: (center + half).min(1.0),
    }
}

/// Sample-mean estimate. The reduction is chunked compensated summation in a
/// fixed order, so results are bit-deterministic for a given input order.
pub fn mean_estimate(samples: &[f64], ci_level: f64) -> EstimateWithCI {
    let n = samples.len();
    assert!(n >= 2, "mean estimate needs n >= 2 samples");
    check_ci_level(ci_level);

    // Identical samples short-circuit to a zero-spread estimate; summing and
    // re-subtracting would otherwise leave ulp-level noise in the variance.
    let (min, max) = samples
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &x| {
            (lo.min(x), hi.max(x))
        });
    if min == max {
        return EstimateWithCI {
            point: min,
            stderr: 0.0,
            n: n as u64,
            ci_level,
            ci_low: min,
            ci_high: min,
        };
    }

    let nf = n as f64;
    let mean = compensated_sum(samples) / nf;
    let sq: Vec<f64> = samples.iter().map(|&x| (x - mean) * (x - mean)).collect();
    let var = compensated_sum(&sq) / (nf - 1.0);
    let stderr = (var / nf).sqrt();
    let z = normal_quantile(0.5 + ci_level / 2.0);

    EstimateWithCI {
        point: mean,
        stderr,
        n: n as u64,
        ci_level,
        ci_low: mean - z * stderr,
        ci_high: mean + z * stderr,
    }
}

/// A fitted polynomial decay rate: `p(x) ≈ C · x^{−θ} (log x)^{κ}` with the
/// sign convention that positive `theta` means decay.
#[derive(Debug, Clone)]
pub struct ExponentFit {
    pub theta: f64,
    pub theta_stderr: f64,
    /// Coefficient `κ` of the `log log x` regressor, when requested.
    pub log_correction: Option<f64>,
    /// Unweighted RMS of the log-space residuals.
    pub residual_rms: f64,
    /// The `(x, estimate)` pairs the fit consumed.
    pub design_points: Vec<(f64, f64)>,
}

/// Relative-stderr floor: estimates that are exact (or nearly so) get this
/// floor instead of an infinite weight, which keeps the normal equations
/// finite while still dominating noisy points.
const MIN_RELATIVE_STDERR: f64 = 1e-12;

/// Weighted least squares for `log p = b − θ log x [+ κ log log x]`.
///
/// Weights are inverse squared relative standard errors, the delta-method
/// variance of `log p̂`; survival estimates at large horizons carry few
/// successes and must not dominate the fit.
pub fn fit_power_law(
    points: &[(f64, EstimateWithCI)],
    with_log_correction: bool,
) -> Result<ExponentFit> {
    let min_points = if with_log_correction { 4 } else { 3 };
    if points.len() < min_points {
        return Err(Error::InvalidInput(format!(
            "power-law fit needs at least {min_points} design points, got {}",
            points.len()
        )));
    }
    for w in points.windows(2) {
        if w[1].0 <= w[0].0 {
            return Err(Error::InvalidInput(
                "design points must have strictly increasing x".into(),
            ));
        }
    }
    for &(x, ref est) in points {
        if !(est.point > 0.0) {
            return Err(Error::NonpositiveEstimate {
                x,
                point: est.point,
            });
        }
        if with_log_correction && x < 3.0 {
            return Err(Error::InvalidInput(format!(
                "log-correction fits need x >= 3 at every design point, got {x}"
            )));
        }
    }

    let u: Vec<f64> = points.iter().map(|&(x, _)| x.ln()).collect();
    let v: Vec<f64> = points.iter().map(|&(x, _)| x.ln().ln()).collect();
    let y: Vec<f64> = points.iter().map(|(_, e)| e.point.ln()).collect();
    let w: Vec<f64> = points
        .iter()
        .map(|(_, e)| {
            let rel = (e.stderr / e.point).max(MIN_RELATIVE_STDERR);
            1.0 / (rel * rel)
        })
        .collect();

    let sw: f64 = w.iter().sum();
    let wmean = |zs: &[f64]| -> f64 { zs.iter().zip(&w).map(|(&z, &wi)| wi * z).sum::<f64>() / sw };
    let u_bar = wmean(&u);
    let v_bar = wmean(&v);
    let y_bar = wmean(&y);

    let dot = |a: &[f64], a0: f64, b: &[f64], b0: f64| -> f64 {
        a.iter()
            .zip(b)
            .zip(&w)
            .map(|((&ai, &bi), &wi)| wi * (ai - a0) * (bi - b0))
            .sum()
    };
    let suu = dot(&u, u_bar, &u, u_bar);
    let suy = dot(&u, u_bar, &y, y_bar);

    let (slope_u, slope_v, var_slope_u) = if with_log_correction {
        let svv = dot(&v, v_bar, &v, v_bar);
        let suv = dot(&u, u_bar, &v, v_bar);
        let svy = dot(&v, v_bar, &y, y_bar);
        let det = suu * svv - suv * suv;
        if det.abs() < 1e-12 * suu.abs().max(svv.abs()).max(f64::MIN_POSITIVE) {
            return Err(Error::InvalidInput(
                "log-correction design is singular; spread the design points further".into(),
            ));
        }
        let b1 = (svv * suy - suv * svy) / det;
        let b2 = (suu * svy - suv * suy) / det;
        (b1, Some(b2), svv / det)
    } else {
        (suy / suu, None, 1.0 / suu)
    };

    let residuals: Vec<f64> = (0..points.len())
        .map(|i| {
            let fitted = y_bar
                + slope_u * (u[i] - u_bar)
                + slope_v.unwrap_or(0.0) * (v[i] - v_bar);
            y[i] - fitted
        })
        .collect();
    let residual_rms =
        (residuals.iter().map(|r| r * r).sum::<f64>() / points.len() as f64).sqrt();

    Ok(ExponentFit {
        theta: -slope_u,
        theta_stderr: var_slope_u.sqrt(),
        log_correction: slope_v,
        residual_rms,
        design_points: points.iter().map(|&(x, ref e)| (x, e.point)).collect(),
    })
}
