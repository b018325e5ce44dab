use fbmlab_core::sampler::*;
use std::time::Instant;
fn main() {
    for (steps, horizon, n) in [(1024usize, 16.0, 20_000usize), (16384, 16384.0, 20_000)] {
        let h = HurstIndex::new(0.75).unwrap();
        let g = SimulationGrid::new(steps, horizon).unwrap();
        let t0 = Instant::now();
        let sums = map_paths(h, g, n, 1, |_, p| p.iter().sum::<f64>()).unwrap();
        let dt = t0.elapsed().as_secs_f64();
        println!(
            "steps={steps} n={n}: {:.2}s total, {:.1} us/path (checksum {:.3})",
            dt, dt / n as f64 * 1e6, sums[0]
        );
    }
}
