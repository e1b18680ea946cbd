//! Reading delay times off a propagation record.
//!
//! Arrival times come from the outgoing lobe centroid, not from the raw
//! density maximum: the faint transmitted field carries interference
//! ripples (and, at finite step size, splitting-error ripples) that make an
//! argmax track hop between crests, while the lobe-weighted mean averages
//! them out. Once the barrier region has emptied the outgoing field evolves
//! freely, so its centroid moves on a straight line; fitting that line
//! gives both the exit-face crossing time and the packet's actual outgoing
//! velocity.
//!
//! The reference leg deliberately uses the *fitted* velocity rather than
//! the nominal carrier: a barrier transmits the upper part of the momentum
//! distribution preferentially, so the transmitted bundle both travels
//! faster than the carrier and arrived at the barrier earlier than a
//! carrier-speed reference would claim. Referencing the crossing against
//! free flight at the carrier speed would therefore accumulate an error
//! proportional to the approach distance and can even drive the apparent
//! delay negative; free flight at the bundle's own measured speed cancels
//! that filter bias, and what remains is the barrier delay itself.

use crate::delay::{
    dwell_time_parity, dwell_time_side, phase_time_parity, phase_time_standard,
};
use crate::error::{Error, Result};
use crate::scattering::Parity;
use crate::tdse::{RunMode, SimConfig, SimOutput};

/// Minimum number of post-interaction centroid samples for a trustworthy
/// fit.
const MIN_TRACK_POINTS: usize = 5;

/// The barrier episode counts as over once the interior probability has
/// dropped below this fraction of its maximum over the run.
const QUIET_FRACTION: f64 = 0.02;

/// Stationary predictions matching a run's mode, evaluated at the carrier
/// momentum.
#[derive(Debug, Clone, Copy)]
pub struct PredictedTimes {
    pub phase_time: f64,
    pub dwell_time: f64,
    pub traversal_time: f64,
}

/// Straight-line fit of the settled outgoing centroid track.
#[derive(Debug, Clone, Copy)]
pub struct CrossingFit {
    /// Time at which the fitted line crosses the exit face `x = L/2`.
    pub crossing_time: f64,
    /// Slope of the fitted line: the outgoing bundle's group velocity.
    pub velocity: f64,
}

/// Delay and dwell numbers extracted from one run.
#[derive(Debug, Clone, Copy)]
pub struct SimReport {
    /// Time at which the fitted outgoing centroid crossed the exit face.
    pub crossing_time: f64,
    /// Group velocity of the outgoing bundle, from the same fit.
    pub outgoing_velocity: f64,
    /// Free flight from the packet center to the entry face at the fitted
    /// outgoing velocity (filter-bias-free reference; see module docs).
    pub free_flight_reference: f64,
    /// `crossing_time - free_flight_reference`: the dynamical analogue of
    /// the stationary phase time.
    pub measured_delay: f64,
    /// Time integral of the interior probability.
    pub dynamic_dwell: f64,
    pub norm_drift: f64,
    pub max_parity_deviation: f64,
    /// Closed-form stationary values, when the landscape has a barrier and
    /// the carrier momentum tunnels.
    pub predicted: Option<PredictedTimes>,
}

/// Fit the outgoing centroid track and return the exit-face crossing.
pub fn transmitted_crossing(config: &SimConfig, output: &SimOutput) -> Result<CrossingFit> {
    let history = &output.history;
    let peak_interior = history
        .barrier_probability
        .iter()
        .cloned()
        .fold(0.0, f64::max);
    if peak_interior <= 0.0 {
        return Err(Error::Measurement(
            "no probability ever reached the barrier interval".into(),
        ));
    }
    // Last sample at which the barrier region was still busy; everything
    // after it is free flight of the scattered field.
    let last_busy = history
        .barrier_probability
        .iter()
        .rposition(|&p| p >= QUIET_FRACTION * peak_interior)
        .unwrap_or(0);

    let track: Vec<(f64, f64)> = history
        .times
        .iter()
        .zip(&history.transmitted_centroid)
        .skip(last_busy + 1)
        .filter_map(|(&t, &c)| c.map(|x| (t, x)))
        .collect();
    if track.len() < MIN_TRACK_POINTS {
        return Err(Error::Measurement(format!(
            "only {} settled centroid samples after the barrier emptied; \
             need {} (extend t_max)",
            track.len(),
            MIN_TRACK_POINTS
        )));
    }

    // Least-squares line x(t) through the settled track.
    let inv = 1.0 / track.len() as f64;
    let t_mean = track.iter().map(|&(t, _)| t).sum::<f64>() * inv;
    let x_mean = track.iter().map(|&(_, x)| x).sum::<f64>() * inv;
    let mut covariance = 0.0;
    let mut variance = 0.0;
    for &(t, x) in &track {
        covariance += (t - t_mean) * (x - x_mean);
        variance += (t - t_mean) * (t - t_mean);
    }
    let slope = covariance / variance;
    if !(slope > 0.0) {
        return Err(Error::Measurement(format!(
            "outgoing centroid is not moving outward (slope {slope:.3e})"
        )));
    }
    let exit_face = 0.5 * config.potential.width();
    Ok(CrossingFit {
        crossing_time: t_mean + (exit_face - x_mean) / slope,
        velocity: slope,
    })
}

/// Assemble the full report for a finished run.
pub fn analyze(config: &SimConfig, output: &SimOutput) -> Result<SimReport> {
    let fit = transmitted_crossing(config, output)?;
    let crossing_time = fit.crossing_time;
    let packet = &config.packet;
    let entry_distance = packet.center.abs() - 0.5 * config.potential.width();
    let free_flight_reference = entry_distance / fit.velocity;

    let predicted = config.potential.barrier_spec().and_then(|barrier| {
        let k0 = packet.center_momentum;
        if k0 >= barrier.momentum_scale() {
            return None;
        }
        let traversal_time = barrier.kinematics(k0).ok()?.traversal_time;
        let (phase_time, dwell_time) = match config.mode {
            RunMode::Single => (
                phase_time_standard(&barrier, k0).ok()?,
                dwell_time_side(&barrier, k0).ok()?,
            ),
            RunMode::ParityPlus => (
                phase_time_parity(&barrier, k0, Parity::Plus).ok()?,
                dwell_time_parity(&barrier, k0, Parity::Plus).ok()?,
            ),
            RunMode::ParityMinus => (
                phase_time_parity(&barrier, k0, Parity::Minus).ok()?,
                dwell_time_parity(&barrier, k0, Parity::Minus).ok()?,
            ),
        };
        Some(PredictedTimes {
            phase_time,
            dwell_time,
            traversal_time,
        })
    });

    let max_parity_deviation = output
        .history
        .parity_deviation
        .iter()
        .cloned()
        .fold(0.0, f64::max);

    Ok(SimReport {
        crossing_time,
        outgoing_velocity: fit.velocity,
        free_flight_reference,
        measured_delay: crossing_time - free_flight_reference,
        dynamic_dwell: output.dynamic_dwell,
        norm_drift: output.norm_drift,
        max_parity_deviation,
        predicted,
    })
}
