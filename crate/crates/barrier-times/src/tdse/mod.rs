//! Time-dependent propagation of wave packets against the barrier: a
//! split-step Fourier integrator plus the bookkeeping needed to read delay
//! and dwell times off the dynamics. This subsystem shares no formulas with
//! the stationary closed forms, which is the point: it is the dynamical
//! cross-check.

mod observe;
mod packet;
mod propagate;
pub mod snapshot;

pub use observe::{analyze, transmitted_crossing, CrossingFit, PredictedTimes, SimReport};
pub use propagate::run;
pub use snapshot::{Snapshot, SnapshotSeries};

use crate::error::{Error, Result};
use crate::kinematics::BarrierSpec;

/// Potential landscape for a propagation run. Unlike `BarrierSpec` a zero
/// height is allowed: free runs are the natural control experiment.
#[derive(Debug, Clone, Copy)]
pub struct Potential {
    height: f64,
    width: f64,
    mass: f64,
}

impl Potential {
    pub fn new(height: f64, width: f64, mass: f64) -> Result<Self> {
        for (field, value, low_ok) in [
            ("height", height, true),
            ("width", width, false),
            ("mass", mass, false),
        ] {
            let ok = value.is_finite() && if low_ok { value >= 0.0 } else { value > 0.0 };
            if !ok {
                return Err(Error::Domain {
                    field,
                    requirement: if low_ok {
                        "non-negative and finite"
                    } else {
                        "positive and finite"
                    },
                    value,
                });
            }
        }
        Ok(Potential {
            height,
            width,
            mass,
        })
    }

    /// Zero-height landscape of the same extent; the control configuration.
    pub fn free(width: f64, mass: f64) -> Result<Self> {
        Potential::new(0.0, width, mass)
    }

    pub fn from_barrier(b: &BarrierSpec) -> Self {
        Potential {
            height: b.height(),
            width: b.width(),
            mass: b.mass(),
        }
    }

    pub fn height(&self) -> f64 {
        self.height
    }

    pub fn width(&self) -> f64 {
        self.width
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    /// `sqrt(2 m V0)`; zero for a free landscape.
    pub fn momentum_scale(&self) -> f64 {
        (2.0 * self.mass * self.height).sqrt()
    }

    /// The equivalent stationary description, when one exists (height > 0).
    pub fn barrier_spec(&self) -> Option<BarrierSpec> {
        if self.height > 0.0 {
            BarrierSpec::new(self.height, self.width, self.mass).ok()
        } else {
            None
        }
    }
}

/// Incident Gaussian packet, described in momentum space.
#[derive(Debug, Clone, Copy)]
pub struct PacketSpec {
    /// Carrier momentum `k0 > 0` (the mirrored right-side packet, when one
    /// is requested, carries `-k0`).
    pub center_momentum: f64,
    /// Standard deviation of the momentum probability density.
    pub momentum_width: f64,
    /// Initial center of the left packet; must be negative and clear of the
    /// barrier.
    pub center: f64,
    /// If set, spectral components with `|k| >= (1 - delta) w` are removed
    /// so that nothing travels above the barrier; the packet is then
    /// re-normalized.
    pub cutoff_delta: Option<f64>,
}

impl PacketSpec {
    /// Spatial standard deviation of the matching minimum-uncertainty
    /// packet.
    pub fn position_width(&self) -> f64 {
        1.0 / (2.0 * self.momentum_width)
    }
}

/// Uniform periodic spatial grid.
#[derive(Debug, Clone, Copy)]
pub struct SimGrid {
    pub points: usize,
    pub x_min: f64,
    pub x_max: f64,
}

impl SimGrid {
    pub fn length(&self) -> f64 {
        self.x_max - self.x_min
    }

    pub fn dx(&self) -> f64 {
        self.length() / self.points as f64
    }

    pub fn position(&self, j: usize) -> f64 {
        self.x_min + j as f64 * self.dx()
    }

    /// Angular wavenumber of FFT bin `j`, in the usual split order.
    pub fn wavenumber(&self, j: usize) -> f64 {
        let dk = 2.0 * std::f64::consts::PI / self.length();
        if j < self.points / 2 {
            j as f64 * dk
        } else {
            (j as f64 - self.points as f64) * dk
        }
    }
}

/// Which initial configuration to propagate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RunMode {
    /// One packet incident from the left.
    Single,
    /// Two mirrored packets, symmetrized.
    ParityPlus,
    /// Two mirrored packets, antisymmetrized.
    ParityMinus,
}

/// Full description of one propagation run.
#[derive(Debug, Clone, Copy)]
pub struct SimConfig {
    pub potential: Potential,
    pub packet: PacketSpec,
    pub grid: SimGrid,
    pub dt: f64,
    pub t_max: f64,
    /// Observables are recorded every this many steps (plus first and last).
    pub sample_every: usize,
    pub mode: RunMode,
    /// Density snapshots every this many steps, if requested.
    pub snapshot_every: Option<usize>,
}

impl SimConfig {
    /// Check every precondition the propagator and the packet builder rely
    /// on. Called by `run`, but exposed so configurations can be vetted
    /// before committing to a long propagation.
    pub fn validate(&self) -> Result<()> {
        let g = &self.grid;
        if !g.points.is_power_of_two() || g.points < 64 {
            return Err(Error::Config(format!(
                "grid points must be a power of two >= 64, got {}",
                g.points
            )));
        }
        if !(g.x_min.is_finite() && g.x_max.is_finite() && g.x_min < g.x_max) {
            return Err(Error::Config(format!(
                "grid interval [{}, {}] is not a finite non-empty range",
                g.x_min, g.x_max
            )));
        }
        if !self.dt.is_finite() || self.dt <= 0.0 {
            return Err(Error::Config(format!("time step must be positive, got {}", self.dt)));
        }
        if !self.t_max.is_finite() || self.t_max < self.dt {
            return Err(Error::Config(format!(
                "total time {} must be at least one step {}",
                self.t_max, self.dt
            )));
        }
        if self.sample_every == 0 {
            return Err(Error::Config("sample_every must be at least 1".into()));
        }
        if self.snapshot_every == Some(0) {
            return Err(Error::Config("snapshot_every must be at least 1".into()));
        }

        let p = &self.packet;
        if !p.center_momentum.is_finite() || p.center_momentum <= 0.0 {
            return Err(Error::Config(format!(
                "carrier momentum must be positive, got {}",
                p.center_momentum
            )));
        }
        if !p.momentum_width.is_finite() || p.momentum_width <= 0.0 {
            return Err(Error::Config(format!(
                "momentum width must be positive, got {}",
                p.momentum_width
            )));
        }
        if let Some(delta) = p.cutoff_delta {
            if !(0.0..1.0).contains(&delta) || delta == 0.0 {
                return Err(Error::Config(format!(
                    "spectral cutoff delta must lie in (0, 1), got {delta}"
                )));
            }
        }
        if p.center_momentum <= 4.0 * p.momentum_width {
            return Err(Error::Config(format!(
                "carrier momentum {} sits within 4 momentum widths of zero; \
                 the packet would contain standing components",
                p.center_momentum
            )));
        }
        let w = self.potential.momentum_scale();
        if w > 0.0 && p.cutoff_delta.is_none() && p.center_momentum + 4.0 * p.momentum_width >= w {
            return Err(Error::Config(format!(
                "carrier momentum {} + 4 momentum widths reaches the barrier \
                 momentum scale {w}; use a spectral cutoff or a narrower packet",
                p.center_momentum
            )));
        }

        let sigma_x = p.position_width();
        let clearance = 0.5 * self.potential.width() + 3.0 * sigma_x;
        if !p.center.is_finite() || p.center > -clearance {
            return Err(Error::Config(format!(
                "packet center {} must sit left of the barrier with 3 spatial \
                 widths of clearance (at most {})",
                p.center, -clearance
            )));
        }
        if p.center - g.x_min < 10.0 * sigma_x {
            return Err(Error::Config(format!(
                "packet center {} is within 10 spatial widths of the domain \
                 edge {}; periodic images would contaminate the run",
                p.center, g.x_min
            )));
        }
        if self.mode != RunMode::Single && g.x_min != -g.x_max {
            return Err(Error::Config(format!(
                "two-sided modes need a symmetric domain, got [{}, {}]",
                g.x_min, g.x_max
            )));
        }
        Ok(())
    }
}

/// Observables recorded along a propagation run.
#[derive(Debug, Clone, Default)]
pub struct History {
    pub times: Vec<f64>,
    pub norms: Vec<f64>,
    /// Probability inside the barrier interval, edge cells area-weighted.
    pub barrier_probability: Vec<f64>,
    /// Probability beyond the exit face `x > L/2`.
    pub transmitted_mass: Vec<f64>,
    /// Probability before the entry face `x < -L/2`.
    pub reflected_mass: Vec<f64>,
    /// Parabola-refined density peak beyond the exit face, when enough mass
    /// is out there to make the number meaningful.
    pub peak_position: Vec<Option<f64>>,
    /// Probability-weighted mean position of the dominant lobe beyond the
    /// exit face (cells with density at least half the right-side maximum),
    /// under the same mass gate. Unlike the raw peak this averages out
    /// interference ripples riding on the outgoing envelope, and unlike a
    /// plain half-line centroid it ignores the slow near-face trickle and
    /// the fast forerunner tail; it is the quantity the arrival-time fit
    /// uses.
    pub transmitted_centroid: Vec<Option<f64>>,
    /// L2 deviation from the requested exchange symmetry (zero for single
    /// runs).
    pub parity_deviation: Vec<f64>,
}

/// Everything a propagation run produces.
#[derive(Debug, Clone)]
pub struct SimOutput {
    pub history: History,
    /// Time integral of the barrier probability over the whole run.
    pub dynamic_dwell: f64,
    /// Largest observed deviation of the norm from one.
    pub norm_drift: f64,
    pub snapshots: SnapshotSeries,
    /// State at the final step, for convergence studies.
    pub final_state: Vec<num_complex::Complex64>,
}
