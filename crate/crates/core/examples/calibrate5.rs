use fbmlab_core::functionals::*;
use fbmlab_core::sampler::{HurstIndex, SimulationGrid};

fn main() {
    // Small-value exponents for H in {0.25, 0.75}, eps = 2^-2..2^-6.
    let g = SimulationGrid::new(1 << 12, 1.0).unwrap();
    let eps: Vec<f64> = (2..=6).map(|j| 0.5f64.powi(j)).collect();
    for h in [0.25f64, 0.75] {
        let s = functional_samples(HurstIndex::new(h).unwrap(), g, 200_000, 77).unwrap();
        for kind in [FunctionalKind::TauMax, FunctionalKind::LastZero, FunctionalKind::PositiveMeasure] {
            let curve = small_value_curve_from(&s, kind, &eps).unwrap();
            let plain = small_value_exponent(&curve, false).map(|f| f.theta).unwrap_or(f64::NAN);
            let logf = small_value_exponent(&curve, true).map(|f| f.theta).unwrap_or(f64::NAN);
            println!(
                "H={h} {kind:18}: plain={plain:+.3} logfit={logf:+.3} target={:.2}  P(min eps)={:.4}",
                1.0 - h,
                curve.estimates.last().unwrap().point
            );
        }
    }
    // Laplace exponents, lambda = 1..256, steps 2^14.
    let g = SimulationGrid::new(1 << 14, 1.0).unwrap();
    let lambdas: Vec<f64> = (0..=8).map(|j| 2f64.powi(j)).collect();
    for h in [0.5f64, 0.75] {
        let hi = HurstIndex::new(h).unwrap();
        let curve = laplace_transform_max(hi, g, &lambdas, 200_000, 99).unwrap();
        let plain = laplace_exponent(&curve, false).unwrap();
        println!(
            "H={h} laplace: plain={:+.3} target={:.3}  E(max lambda)={:.3e}",
            plain.theta,
            (1.0 - h) / h,
            curve.estimates.last().unwrap().point
        );
    }
}
