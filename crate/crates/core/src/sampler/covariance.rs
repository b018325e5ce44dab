//! Autocovariance of unit-step fractional Gaussian noise.

use crate::error::{Error, Result};

use super::HurstIndex;

/// Lag covariances `γ(k)` of the unit-step increment sequence of fractional
/// Brownian motion: `γ(k) = ½(|k+1|^{2H} − 2|k|^{2H} + |k−1|^{2H})`.
#[derive(Debug, Clone)]
pub struct FgnCovariance {
    hurst: HurstIndex,
    lags: Vec<f64>,
}

impl FgnCovariance {
    pub fn hurst(&self) -> HurstIndex {
        self.hurst
    }

    /// `γ(0..max_lag)`, in lag order.
    pub fn lags(&self) -> &[f64] {
        &self.lags
    }
}

/// Lag at which evaluation switches from the closed form to the
/// central-difference form. Below it the closed form is exact enough; above
/// it the three-term difference cancels catastrophically for H near 1/2.
const STABLE_FORM_MIN_LAG: u64 = 8;

fn gamma_lag(two_h: f64, k: u64) -> f64 {
    if k == 0 {
        return 1.0;
    }
    let kf = k as f64;
    if k < STABLE_FORM_MIN_LAG {
        0.5 * ((kf + 1.0).powf(two_h) - 2.0 * kf.powf(two_h) + (kf - 1.0).powf(two_h))
    } else {
        // γ(k) = ½ k^{2H} [(1 + 1/k)^{2H} − 2 + (1 − 1/k)^{2H}], with each
        // bracket term written as expm1(2H · log1p(±1/k)). The O(1/k) leading
        // parts then cancel between two accurately computed small numbers
        // instead of between two O(k^{2H}) ones.
        let u = 1.0 / kf;
        let plus = (two_h * u.ln_1p()).exp_m1();
        let minus = (two_h * (-u).ln_1p()).exp_m1();
        0.5 * kf.powf(two_h) * (plus + minus)
    }
}

/// Computes `γ(0), …, γ(max_lag − 1)` for unit-step increments.
pub fn fgn_autocovariance(hurst: HurstIndex, max_lag: usize) -> Result<FgnCovariance> {
    if max_lag < 1 {
        return Err(Error::InvalidInput(format!(
            "autocovariance needs max_lag >= 1, got {max_lag}"
        )));
    }
    let two_h = 2.0 * hurst.value();
    let lags = (0..max_lag as u64).map(|k| gamma_lag(two_h, k)).collect();
    Ok(FgnCovariance { hurst, lags })
}
