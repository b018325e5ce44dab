use fbmlab_core::current::{current_exponent, moment_curve, CurrentVariant};
use fbmlab_core::sampler::{HurstIndex, SimulationGrid};
fn main() {
    let h = HurstIndex::new(0.5).unwrap();
    let g = SimulationGrid::new(1 << 9, 512.0).unwrap();
    let horizons: Vec<f64> = (2..=9).map(|j| (1u64 << j) as f64).collect();
    let curve = moment_curve(h, 1.0, CurrentVariant::DiscreteJn, g, &horizons, 100_000, 97).unwrap();
    for (t, e) in curve.horizons.iter().zip(&curve.estimates) {
        println!("N={t:6} E[J_N]={:.6e} se={:.2e}  N^0.5*E={:.4}", e.point, e.stderr, t.sqrt()*e.point);
    }
    let fit = current_exponent(&curve, false).unwrap();
    println!("theta = {:.4} +- {:.4}, rms {:.4}", fit.theta, fit.theta_stderr, fit.residual_rms);
    let fit = current_exponent(&curve, true).unwrap();
    println!("with log corr: theta = {:.4} +- {:.4}, kappa = {:.4}", fit.theta, fit.theta_stderr, fit.log_correction.unwrap());
}
