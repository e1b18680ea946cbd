//! Shared fixtures for the kernel benchmarks: representative barrier
//! geometries and a small but realistic propagation setup.

use barrier_times::tdse::{PacketSpec, Potential, RunMode, SimConfig, SimGrid};
use barrier_times::BarrierSpec;

/// The mid-opacity barrier most sweeps center on.
pub fn reference_barrier() -> BarrierSpec {
    BarrierSpec::from_strength(4.0 * std::f64::consts::PI).expect("reference strength")
}

/// Interior energy fractions of a modest sweep.
pub fn sweep_fractions(rows: usize) -> Vec<f64> {
    (1..=rows).map(|j| j as f64 / (rows + 1) as f64).collect()
}

/// A deliberately short propagation: enough steps to exercise the
/// split-step kernel without turning a benchmark run into a simulation
/// campaign.
pub fn short_run() -> SimConfig {
    let config = SimConfig {
        potential: Potential::new(0.5, 2.0, 1.0).expect("potential"),
        packet: PacketSpec {
            center_momentum: 0.5,
            momentum_width: 0.08,
            center: -25.0,
            cutoff_delta: None,
        },
        grid: SimGrid { points: 1024, x_min: -128.0, x_max: 128.0 },
        dt: 0.1,
        t_max: 10.0,
        sample_every: 20,
        mode: RunMode::Single,
        snapshot_every: None,
    };
    config.validate().expect("short run config");
    config
}
