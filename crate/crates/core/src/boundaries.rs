//! Moving boundaries for survival events: a constant level or
//! `y0 ∓ y1 · (log(1 + t))^γ`.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::sampler::SimulationGrid;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BoundarySpec {
    Constant { level: f64 },
    LogPowerDecreasing { y0: f64, y1: f64, gamma: f64 },
    LogPowerIncreasing { y0: f64, y1: f64, gamma: f64 },
}

/// Outcome of validation: the spec is usable, possibly with caveats that
/// experiments surface as metadata rather than rejecting.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BoundaryFlags {
    /// Set for decreasing boundaries with `γ < 1`: the polynomial decay-rate
    /// upper bound is not certified there, only the trivial constant-level
    /// one.
    pub gamma_below_one: bool,
}

impl BoundarySpec {
    pub fn constant(level: f64) -> Self {
        Self::Constant { level }
    }

    pub fn log_decreasing(y0: f64, y1: f64, gamma: f64) -> Self {
        Self::LogPowerDecreasing { y0, y1, gamma }
    }

    pub fn log_increasing(y0: f64, y1: f64, gamma: f64) -> Self {
        Self::LogPowerIncreasing { y0, y1, gamma }
    }

    /// Boundary value `f(t)`, `t ≥ 0`.
    pub fn eval(&self, t: f64) -> f64 {
        debug_assert!(t >= 0.0);
        match *self {
            Self::Constant { level } => level,
            Self::LogPowerDecreasing { y0, y1, gamma } => y0 - y1 * t.ln_1p().powf(gamma),
            Self::LogPowerIncreasing { y0, y1, gamma } => y0 + y1 * t.ln_1p().powf(gamma),
        }
    }

    /// Enforces the type invariants (`y0, y1 > 0`, `γ > 0`, finite fields)
    /// and reports the `γ < 1` caveat for decreasing boundaries.
    pub fn validate(&self) -> Result<BoundaryFlags> {
        let check_positive = |name: &str, v: f64| -> Result<()> {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(Error::InvalidBoundary(format!("{name} must be > 0, got {v}")))
            }
        };
        match *self {
            Self::Constant { level } => {
                if !level.is_finite() {
                    return Err(Error::InvalidBoundary(format!(
                        "level must be finite, got {level}"
                    )));
                }
                Ok(BoundaryFlags {
                    gamma_below_one: false,
                })
            }
            Self::LogPowerDecreasing { y0, y1, gamma } => {
                check_positive("y0", y0)?;
                check_positive("y1", y1)?;
                check_positive("gamma", gamma)?;
                Ok(BoundaryFlags {
                    gamma_below_one: gamma < 1.0,
                })
            }
            Self::LogPowerIncreasing { y0, y1, gamma } => {
                check_positive("y0", y0)?;
                check_positive("y1", y1)?;
                check_positive("gamma", gamma)?;
                Ok(BoundaryFlags {
                    gamma_below_one: false,
                })
            }
        }
    }

    /// Warning strings for experiment metadata.
    pub fn warnings(&self) -> Vec<String> {
        match self.validate() {
            Ok(flags) if flags.gamma_below_one => vec![
                "gamma < 1 on a decreasing boundary: polynomial upper bound not certified".into(),
            ],
            _ => Vec::new(),
        }
    }

    /// Boundary values at every grid point, `f(t_0), …, f(t_steps)`.
    pub fn values_on_grid(&self, grid: &SimulationGrid) -> Vec<f64> {
        (0..grid.n_points()).map(|i| self.eval(grid.time(i))).collect()
    }
}

impl fmt::Display for BoundarySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Self::Constant { level } => write!(f, "const:{level}"),
            Self::LogPowerDecreasing { y0, y1, gamma } => {
                write!(f, "logdec:y0={y0},y1={y1},gamma={gamma}")
            }
            Self::LogPowerIncreasing { y0, y1, gamma } => {
                write!(f, "loginc:y0={y0},y1={y1},gamma={gamma}")
            }
        }
    }
}

fn parse_log_params(body: &str) -> Result<(f64, f64, f64)> {
    let (mut y0, mut y1, mut gamma) = (None, None, None);
    for part in body.split(',') {
        let (key, value) = part.split_once('=').ok_or_else(|| {
            Error::InvalidBoundary(format!("expected key=value, got '{part}'"))
        })?;
        let value: f64 = value
            .parse()
            .map_err(|_| Error::InvalidBoundary(format!("'{value}' is not a number")))?;
        let slot = match key {
            "y0" => &mut y0,
            "y1" => &mut y1,
            "gamma" => &mut gamma,
            other => {
                return Err(Error::InvalidBoundary(format!("unknown key '{other}'")));
            }
        };
        if slot.replace(value).is_some() {
            return Err(Error::InvalidBoundary(format!("duplicate key '{key}'")));
        }
    }
    match (y0, y1, gamma) {
        (Some(y0), Some(y1), Some(gamma)) => Ok((y0, y1, gamma)),
        _ => Err(Error::InvalidBoundary(
            "log boundaries need y0=, y1= and gamma=".into(),
        )),
    }
}

impl FromStr for BoundarySpec {
    type Err = Error;

    /// Parses the textual descriptor grammar: `const:<level>`,
    /// `logdec:y0=<v>,y1=<v>,gamma=<v>`, `loginc:y0=<v>,y1=<v>,gamma=<v>`.
    fn from_str(s: &str) -> Result<Self> {
        let (kind, body) = s
            .split_once(':')
            .ok_or_else(|| Error::InvalidBoundary(format!("missing ':' in '{s}'")))?;
        let spec = match kind {
            "const" => {
                let level: f64 = body
                    .parse()
                    .map_err(|_| Error::InvalidBoundary(format!("'{body}' is not a number")))?;
                Self::Constant { level }
            }
            "logdec" => {
                let (y0, y1, gamma) = parse_log_params(body)?;
                Self::LogPowerDecreasing { y0, y1, gamma }
            }
            "loginc" => {
                let (y0, y1, gamma) = parse_log_params(body)?;
                Self::LogPowerIncreasing { y0, y1, gamma }
            }
            other => {
                return Err(Error::InvalidBoundary(format!(
                    "unknown boundary kind '{other}'"
                )));
            }
        };
        spec.validate()?;
        Ok(spec)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn eval_anchors() {
        let dec = BoundarySpec::log_decreasing(1.0, 1.0, 1.0);
        assert_eq!(dec.eval(0.0), 1.0);
        assert_relative_eq!(dec.eval(std::f64::consts::E - 1.0), 0.0, epsilon = 1e-14);

        let inc = BoundarySpec::log_increasing(1.0, 2.0, 2.0);
        assert_relative_eq!(
            inc.eval(std::f64::consts::E - 1.0),
            3.0,
            max_relative = 1e-14
        );
    }

    #[test]
    fn f_at_zero_is_y0_exactly() {
        assert_eq!(BoundarySpec::log_decreasing(2.5, 7.0, 3.0).eval(0.0), 2.5);
        assert_eq!(BoundarySpec::log_increasing(2.5, 7.0, 0.5).eval(0.0), 2.5);
        assert_eq!(BoundarySpec::constant(1.0).eval(0.0), 1.0);
    }

    #[test]
    fn validation_rules() {
        assert!(BoundarySpec::log_decreasing(1.0, -1.0, 1.0).validate().is_err());
        assert!(BoundarySpec::log_increasing(0.0, 1.0, 1.0).validate().is_err());
        assert!(BoundarySpec::constant(1.0).validate().is_ok());

        // gamma < 1 decreasing: accepted, flagged.
        let flags = BoundarySpec::log_decreasing(1.0, 1.0, 0.5).validate().unwrap();
        assert!(flags.gamma_below_one);
        assert_eq!(BoundarySpec::log_decreasing(1.0, 1.0, 0.5).warnings().len(), 1);
        let flags = BoundarySpec::log_decreasing(1.0, 1.0, 1.0).validate().unwrap();
        assert!(!flags.gamma_below_one);
    }

    #[test]
    fn descriptor_round_trip() {
        for s in [
            "const:1",
            "const:-2.5",
            "logdec:y0=1,y1=1,gamma=1",
            "loginc:y0=0.5,y1=2,gamma=1.5",
        ] {
            let spec: BoundarySpec = s.parse().unwrap();
            assert_eq!(spec.to_string(), s);
        }
    }

    #[test]
    fn parse_rejects_malformed_descriptors() {
        assert!("const".parse::<BoundarySpec>().is_err());
        assert!("logdec:y0=1,y1=1".parse::<BoundarySpec>().is_err());
        assert!("logdec:y0=1,y1=1,gamma=1,y0=2".parse::<BoundarySpec>().is_err());
        assert!("logdec:y0=1,y1=-1,gamma=1".parse::<BoundarySpec>().is_err());
        assert!("powerlaw:beta=1".parse::<BoundarySpec>().is_err());
        assert!("loginc:y0=1,weird=1,gamma=1".parse::<BoundarySpec>().is_err());
    }

    #[test]
    fn monotone_on_dense_grid() {
        let dec = BoundarySpec::log_decreasing(1.0, 0.7, 1.3);
        let inc = BoundarySpec::log_increasing(1.0, 0.7, 0.6);
        let mut prev_dec = f64::INFINITY;
        let mut prev_inc = f64::NEG_INFINITY;
        for i in 0..10_000 {
            let t = i as f64 * 0.01;
            let d = dec.eval(t);
            let u = inc.eval(t);
            assert!(d <= prev_dec + 1e-12);
            assert!(u >= prev_inc - 1e-12);
            prev_dec = d;
            prev_inc = u;
        }
    }
}
