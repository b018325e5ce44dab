use fbmlab_core::functionals::*;
use fbmlab_core::sampler::{HurstIndex, SimulationGrid};
fn main() {
    // Arcsine gaps at H = 0.5 for the three functionals, two resolutions.
    for log2_steps in [10usize, 12] {
        let g = SimulationGrid::new(1 << log2_steps, 1.0).unwrap();
        let n = 400_000;
        let s = functional_samples(HurstIndex::new(0.5).unwrap(), g, n, 5).unwrap();
        println!("steps=2^{log2_steps} dt={:.2e}", g.dt());
        for kind in [FunctionalKind::TauMax, FunctionalKind::LastZero, FunctionalKind::PositiveMeasure] {
            for eps in [0.25f64, 0.125, 0.0625] {
                let hits = s.values(kind).iter().filter(|&&v| v < eps).count();
                let p = hits as f64 / n as f64;
                let target = arcsine_cdf(eps);
                let se = (p * (1.0 - p) / n as f64).sqrt();
                println!("  {kind:18} eps={eps:7}: p={p:.5} target={target:.5} gap={:+.5} ({:+.1} se, gap/dt={:+.1})",
                    p - target, (p - target) / se, (p - target) / g.dt());
            }
        }
    }
}
