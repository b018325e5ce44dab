use fbmlab_core::boundaries::BoundarySpec;
use fbmlab_core::current::{current_exponent, moment_curves, CurrentVariant};
use fbmlab_core::estimators::fit_power_law;
use fbmlab_core::persistence::{survival_curves, MonitoringMode};
use fbmlab_core::sampler::{HurstIndex, SimulationGrid};

fn main() {
    let n = 200_000;
    // (A) const-1 at H=0.25: plain vs log-corrected fit, dt = 1 and dt = 1/2.
    for (log2_steps, horizon) in [(14usize, 16384.0f64), (15, 16384.0)] {
        let g = SimulationGrid::new(1 << log2_steps, horizon).unwrap();
        let horizons: Vec<f64> = (4..=14).map(|j| (1u64 << j) as f64).collect();
        let hi = HurstIndex::new(0.25).unwrap();
        let bs = [
            BoundarySpec::constant(1.0),
            BoundarySpec::log_decreasing(1.0, 1.0, 1.0),
            BoundarySpec::log_increasing(1.0, 1.0, 1.0),
        ];
        let curves = survival_curves(hi, &bs, MonitoringMode::Grid, g, &horizons, n, 11).unwrap();
        for c in &curves {
            // positive prefix
            let pts: Vec<_> = c.horizons.iter().cloned().zip(c.estimates.iter().cloned())
                .take_while(|(_, e)| e.point > 0.0).collect();
            let plain = fit_power_law(&pts, false).map(|f| f.theta);
            let logc = fit_power_law(&pts, true).map(|f| (f.theta, f.log_correction.unwrap()));
            println!("dt={} {:28} prefix={} plain={:?} logfit={:?}",
                g.dt(), c.boundary.to_string(), pts.len(),
                plain.map(|t| (t * 1e3).round() / 1e3),
                logc.map(|(t, k)| ((t * 1e3).round() / 1e3, (k * 1e2).round() / 1e2)));
        }
    }
    // (B) J_T at H=0.25, dt=1, T=2^7..2^14, log-corrected fits.
    let g = SimulationGrid::new(1 << 14, 16384.0).unwrap();
    let horizons: Vec<f64> = (7..=14).map(|j| (1u64 << j) as f64).collect();
    let hi = HurstIndex::new(0.25).unwrap();
    let curves = moment_curves(hi, &[0.5, 1.0, 2.0], CurrentVariant::ContinuousJt, g, &horizons, n, 7).unwrap();
    for c in &curves {
        let plain = current_exponent(c, false).unwrap();
        let logc = current_exponent(c, true).unwrap();
        println!("JT k={}: plain={:.3} logfit={:.3} (kappa {:.2})  E[J^k](2^14)={:.3e}",
            c.k, plain.theta, logc.theta, logc.log_correction.unwrap(),
            c.estimates.last().unwrap().point);
        let top = c.horizons.len() - 1;
        let r1 = c.horizons[top].powf(0.75) * c.estimates[top].point;
        let r0 = c.horizons[top-1].powf(0.75) * c.estimates[top-1].point;
        println!("   top-octave molchan-style ratio {:.4}", r1 / r0);
    }
}
