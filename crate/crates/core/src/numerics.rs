//! Shared numerical primitives: compensated reductions, log-domain
//! accumulation, and Gaussian special functions.

use statrs::distribution::{ContinuousCDF, Normal};
use statrs::function::gamma::gamma;

/// Chunk length for all deterministic reductions. Partial sums are formed per
/// chunk and combined in chunk order, so a result never depends on how the
/// work was scheduled.
pub const REDUCTION_CHUNK: usize = 4096;

/// Neumaier-compensated sum of a slice.
pub fn compensated_sum(xs: &[f64]) -> f64 {
    let mut sum = 0.0;
    let mut comp = 0.0;
    for chunk in xs.chunks(REDUCTION_CHUNK) {
        for &x in chunk {
            let t = sum + x;
            if sum.abs() >= x.abs() {
                comp += (sum - t) + x;
            } else {
                comp += (x - t) + sum;
            }
            sum = t;
        }
    }
    sum + comp
}

/// Running log-sum-exp accumulator: after pushing `x_1..x_n` the value is
/// `log(exp(x_1) + ... + exp(x_n))`, computed with the running maximum
/// subtracted so that sums over large path values cannot overflow.
#[derive(Debug, Clone, Copy)]
pub struct LogSumExp {
    max: f64,
    acc: f64,
}

impl LogSumExp {
    pub fn new() -> Self {
        Self {
            max: f64::NEG_INFINITY,
            acc: 0.0,
        }
    }

    pub fn push(&mut self, x: f64) {
        if x == f64::NEG_INFINITY {
            return;
        }
        if x <= self.max {
            self.acc += (x - self.max).exp();
        } else {
            if self.max != f64::NEG_INFINITY {
                self.acc = self.acc * (self.max - x).exp() + 1.0;
            } else {
                self.acc = 1.0;
            }
            self.max = x;
        }
    }

    /// `log Σ exp(x_i)`, or `-inf` when nothing was pushed.
    pub fn value(&self) -> f64 {
        if self.acc == 0.0 {
            f64::NEG_INFINITY
        } else {
            self.max + self.acc.ln()
        }
    }
}

impl Default for LogSumExp {
    fn default() -> Self {
        Self::new()
    }
}

/// Standard normal CDF, evaluated through `erfc` so deep tails keep relative
/// accuracy.
pub fn normal_cdf(z: f64) -> f64 {
    0.5 * libm::erfc(-z / std::f64::consts::SQRT_2)
}

/// Standard normal quantile.
pub fn normal_quantile(p: f64) -> f64 {
    assert!(p > 0.0 && p < 1.0, "quantile requires p in (0, 1), got {p}");
    Normal::standard().inverse_cdf(p)
}

/// Absolute moment `E|Z|^a` of a standard Gaussian: `2^{a/2} Γ((a+1)/2) / √π`.
pub fn gaussian_abs_moment(a: f64) -> f64 {
    assert!(a > 0.0, "moment order must be positive, got {a}");
    2f64.powf(a / 2.0) * gamma((a + 1.0) / 2.0) / std::f64::consts::PI.sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn compensated_sum_recovers_cancellation() {
        // 1 + 1e16 - 1e16 ruins a naive sum but not a compensated one.
        let xs = [1.0, 1e16, -1e16];
        assert_eq!(compensated_sum(&xs), 1.0);
    }

    #[test]
    fn logsumexp_matches_naive_for_small_values() {
        let mut acc = LogSumExp::new();
        for x in [0.5, 2.0, -1.0] {
            acc.push(x);
        }
        let naive = (0.5f64.exp() + 2.0f64.exp() + (-1.0f64).exp()).ln();
        assert_relative_eq!(acc.value(), naive, max_relative = 1e-14);
    }

    #[test]
    fn logsumexp_survives_huge_inputs() {
        let mut acc = LogSumExp::new();
        acc.push(1234.0);
        acc.push(1232.0);
        // log(exp(1234) + exp(1232)) = 1234 + log(1 + exp(-2))
        let expected = 1234.0 + (-2.0f64).exp().ln_1p();
        assert_relative_eq!(acc.value(), expected, max_relative = 1e-14);
        assert!((1234.0f64.exp() + 1232.0f64.exp()).is_infinite());
    }

    #[test]
    fn logsumexp_empty_is_neg_infinity() {
        assert_eq!(LogSumExp::new().value(), f64::NEG_INFINITY);
    }

    #[test]
    fn normal_cdf_reference_points() {
        assert_relative_eq!(normal_cdf(0.0), 0.5, max_relative = 1e-15);
        assert_relative_eq!(normal_cdf(1.0), 0.8413447460685429, max_relative = 1e-12);
        assert_relative_eq!(normal_cdf(-1.0), 1.0 - normal_cdf(1.0), max_relative = 1e-12);
    }

    #[test]
    fn quantile_inverts_cdf() {
        for p in [0.025, 0.5, 0.975] {
            assert_relative_eq!(normal_cdf(normal_quantile(p)), p, max_relative = 1e-9);
        }
    }

    #[test]
    fn gaussian_abs_moments_closed_forms() {
        let two_over_pi = (2.0 / std::f64::consts::PI).sqrt();
        assert_relative_eq!(gaussian_abs_moment(1.0), two_over_pi, max_relative = 1e-12);
        assert_relative_eq!(gaussian_abs_moment(2.0), 1.0, max_relative = 1e-12);
        assert_relative_eq!(gaussian_abs_moment(3.0), 2.0 * two_over_pi, max_relative = 1e-12);
        assert_relative_eq!(gaussian_abs_moment(4.0), 3.0, max_relative = 1e-12);
    }
}
