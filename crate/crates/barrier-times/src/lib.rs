//! Delay times for quantum tunneling through a rectangular barrier.
//!
//! The library computes phase, dwell and self-interference times for the
//! standard one-way scattering arrangement and for the symmetric two-sided
//! configuration in which identical packets hit the barrier from both sides
//! at once, combined with even (`+`) or odd (`-`) exchange symmetry. A
//! split-step wave-packet propagator provides a fully independent dynamical
//! check on the stationary predictions.
//!
//! Everything uses natural units: `hbar = 1`, and a barrier is described by
//! its height `V0`, width `L` and particle mass `m`, or equivalently by the
//! momentum scale `w = sqrt(2 m V0)` and the dimensionless strength `w L`.

pub mod checks;
pub mod delay;
pub mod error;
pub mod kinematics;
pub mod numeric;
pub mod scattering;
pub mod tdse;

pub use delay::{
    dwell_time_numeric, dwell_time_parity, dwell_time_side, phase_time_parity,
    phase_time_parity_fd, phase_time_standard, phase_time_standard_fd, self_interference_from_phase,
    self_interference_time, transmission_dominant, DelayTimes,
};
pub use error::{Error, Result};
pub use kinematics::{opacity_of, BarrierSpec, Kinematics};
pub use scattering::{
    combined_amplitude, combined_phase, combined_phase_closed, combined_phase_grid,
    continuity_residual, continuity_solution, interface_angle, interior_coefficients,
    reflection_amplitude, stationary_field, transfer_matrix_amplitudes, transmission_amplitude,
    transmission_magnitude, transmission_phase, ContinuitySolution, FieldConfig, FieldEvaluator,
    InteriorCoefficients, Parity, ScatteringSet, Side,
};
