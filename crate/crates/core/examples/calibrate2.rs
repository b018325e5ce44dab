use fbmlab_core::boundaries::BoundarySpec;
use fbmlab_core::current::{current_exponent, moment_curves, CurrentVariant};
use fbmlab_core::estimators::fit_power_law;
use fbmlab_core::persistence::{survival_curves, MonitoringMode};
use fbmlab_core::sampler::{HurstIndex, SimulationGrid};

fn main() {
    // J_T moments at dt = 1/4, T = 2^6..2^12, reduced n.
    let n = 150_000;
    let g = SimulationGrid::new(1 << 14, 4096.0).unwrap();
    let horizons: Vec<f64> = (6..=12).map(|j| (1u64 << j) as f64).collect();
    for h in [0.25f64, 0.5, 0.75] {
        let hi = HurstIndex::new(h).unwrap();
        let curves = moment_curves(hi, &[0.5, 1.0, 2.0], CurrentVariant::ContinuousJt, g, &horizons, n, 7).unwrap();
        print!("H={h}: thetas ");
        for c in &curves {
            let fit = current_exponent(c, false).unwrap();
            print!("k={}: {:.3}  ", c.k, fit.theta);
        }
        let c1 = &curves[1];
        let top = c1.horizons.len() - 1;
        let r1 = c1.horizons[top].powf(1.0 - h) * c1.estimates[top].point;
        let r0 = c1.horizons[top - 1].powf(1.0 - h) * c1.estimates[top - 1].point;
        println!("molchan ratio {:.4}", r1 / r0);
    }

    // Boundary survival fits at reduced n, H = 0.25 (hardest).
    let n = 200_000;
    let g = SimulationGrid::new(1 << 14, 16384.0).unwrap();
    let horizons: Vec<f64> = (4..=14).map(|j| (1u64 << j) as f64).collect();
    for h in [0.25f64, 0.75] {
        let hi = HurstIndex::new(h).unwrap();
        let bs = [
            BoundarySpec::constant(1.0),
            BoundarySpec::log_decreasing(1.0, 1.0, 1.0),
            BoundarySpec::log_increasing(1.0, 1.0, 1.0),
        ];
        let curves = survival_curves(hi, &bs, MonitoringMode::Grid, g, &horizons, n, 11).unwrap();
        for c in &curves {
            let pts: Vec<_> = c.horizons.iter().cloned().zip(c.estimates.iter().cloned()).collect();
            let top = c.estimates.last().unwrap();
            match fit_power_law(&pts, false) {
                Ok(fit) => println!(
                    "H={h} {:7}: theta={:.3} (target {:.2}), p(2^14)={:.2e} ({} hits)",
                    c.boundary.to_string(), fit.theta, 1.0 - h, top.point, (top.point * n as f64).round()
                ),
                Err(e) => println!("H={h} {}: fit failed: {e}", c.boundary),
            }
        }
    }
}
