//! Initial-state construction in momentum space.
//!
//! Packets are assembled directly on the FFT wavenumber grid, so the
//! momentum content is exactly what the propagator evolves: a Gaussian
//! spectral envelope around the carrier, optionally truncated below the
//! barrier momentum scale, carried to the requested center by a linear
//! spectral phase. The mirrored right-side packet is an exact index
//! reflection of the left one, which keeps the parity combinations
//! symmetric to machine precision.

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::Result;
use crate::tdse::{RunMode, SimConfig};

/// Build the (unit-norm) initial state for the configured mode.
pub(crate) fn initial_state(config: &SimConfig) -> Result<Vec<Complex64>> {
    let left = left_packet(config)?;
    Ok(match config.mode {
        RunMode::Single => left,
        RunMode::ParityPlus => combine(&left, 1.0, config),
        RunMode::ParityMinus => combine(&left, -1.0, config),
    })
}

/// Left-incident packet, unit norm.
fn left_packet(config: &SimConfig) -> Result<Vec<Complex64>> {
    let grid = &config.grid;
    let packet = &config.packet;
    let n = grid.points;
    let k0 = packet.center_momentum;
    let sigma_k = packet.momentum_width;
    let cutoff = packet
        .cutoff_delta
        .map(|delta| (1.0 - delta) * config.potential.momentum_scale());

    let mut spectral = vec![Complex64::new(0.0, 0.0); n];
    for (j, slot) in spectral.iter_mut().enumerate() {
        let k = grid.wavenumber(j);
        if let Some(limit) = cutoff {
            if k.abs() >= limit {
                continue;
            }
        }
        // Spectral amplitude ~ exp(-(k-k0)^2 / (4 sigma_k^2)) so the
        // momentum *density* has standard deviation sigma_k.
        let q = (k - k0) / sigma_k;
        let envelope = (-0.25 * q * q).exp();
        // Plane-wave phase referred to the first grid node places the
        // packet center at the requested position.
        *slot = Complex64::from_polar(envelope, k * (grid.x_min - packet.center));
    }

    let mut planner = FftPlanner::new();
    planner.plan_fft_inverse(n).process(&mut spectral);
    normalize(&mut spectral, grid.dx());
    Ok(spectral)
}

/// Parity combination with the exact mirror of the left packet. On the
/// periodic symmetric grid the reflection x -> -x maps node j to node
/// (n - j) mod n.
fn combine(left: &[Complex64], sign: f64, config: &SimConfig) -> Vec<Complex64> {
    let n = left.len();
    let mut state: Vec<Complex64> = (0..n)
        .map(|j| left[j] + left[(n - j) % n] * sign)
        .collect();
    normalize(&mut state, config.grid.dx());
    state
}

fn normalize(state: &mut [Complex64], dx: f64) {
    let norm = (state.iter().map(|c| c.norm_sqr()).sum::<f64>() * dx).sqrt();
    for c in state.iter_mut() {
        *c /= norm;
    }
}

/// Discrete L2 norm of a state.
pub(crate) fn state_norm(state: &[Complex64], dx: f64) -> f64 {
    (state.iter().map(|c| c.norm_sqr()).sum::<f64>() * dx).sqrt()
}
