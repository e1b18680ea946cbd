//! Cross-validation of every closed form against an independent numerical
//! route over the standard verification grid: transfer matrices for the
//! amplitudes, an explicit linear continuity solve for the interior
//! coefficients, quadrature for the dwell times, and finite differences for
//! the phase times.

use barrier_times::checks::{standard_fractions, standard_strengths};
use barrier_times::{
    combined_phase, combined_phase_closed, continuity_residual, continuity_solution,
    dwell_time_numeric, dwell_time_parity, phase_time_parity, phase_time_parity_fd,
    phase_time_standard, phase_time_standard_fd, reflection_amplitude, transfer_matrix_amplitudes,
    transmission_amplitude, transmission_phase, BarrierSpec, FieldConfig, Parity, Side,
};
use num_complex::Complex64;

fn grid() -> impl Iterator<Item = (BarrierSpec, f64, f64, f64)> {
    standard_strengths(false).into_iter().flat_map(|wl| {
        standard_fractions(false).into_iter().map(move |n| {
            let b = BarrierSpec::from_strength(wl).unwrap();
            let k = b.momentum_for_fraction(n);
            (b, wl, n, k)
        })
    })
}

#[test]
fn transfer_matrix_reproduces_amplitudes_on_the_grid() {
    for (b, wl, n, k) in grid() {
        let (r_tm, t_tm) = transfer_matrix_amplitudes(&b, k).unwrap();
        let r = reflection_amplitude(&b, k).unwrap();
        let t = transmission_amplitude(&b, k).unwrap();
        assert!(
            (r_tm - r).norm() < 1e-12,
            "R gap {:.2e} at wL={wl:.3} n={n:.3}",
            (r_tm - r).norm()
        );
        assert!(
            (t_tm - t).norm() < 1e-12 * t.norm(),
            "T gap {:.2e} at wL={wl:.3} n={n:.3}",
            (t_tm - t).norm() / t.norm()
        );
    }
}

#[test]
fn continuity_solve_reproduces_amplitudes_and_satisfies_matching() {
    for (b, wl, n, k) in grid() {
        for side in [Side::Left, Side::Right] {
            let sol = continuity_solution(&b, k, side).unwrap();
            let r = reflection_amplitude(&b, k).unwrap();
            let t = transmission_amplitude(&b, k).unwrap();
            assert!(
                (sol.reflection - r).norm() < 1e-10,
                "R gap at wL={wl:.3} n={n:.3} {side:?}"
            );
            assert!(
                (sol.transmission - t).norm() < 1e-10 * t.norm().max(1e-300),
                "T gap at wL={wl:.3} n={n:.3} {side:?}"
            );
            let residual = continuity_residual(&b, k, side).unwrap();
            assert!(
                residual < 1e-10,
                "residual {residual:.2e} at wL={wl:.3} n={n:.3} {side:?}"
            );
        }
    }
}

#[test]
fn phases_agree_between_both_routes_on_the_grid() {
    for (b, wl, n, k) in grid() {
        let t = transmission_amplitude(&b, k).unwrap();
        let from_amp = (t * Complex64::from_polar(1.0, k * b.width())).arg();
        let theta = transmission_phase(&b, k).unwrap();
        assert!(
            (from_amp - theta).abs() < 1e-10,
            "theta gap at wL={wl:.3} n={n:.3}"
        );
        for parity in [Parity::Plus, Parity::Minus] {
            let direct = combined_phase(&b, k, parity).unwrap();
            let closed = combined_phase_closed(&b, k, parity).unwrap();
            let gap = barrier_times::numeric::wrap_to_principal(direct - closed).abs();
            assert!(gap < 1e-10, "phi gap {gap:.2e} at wL={wl:.3} n={n:.3}");
        }
    }
}

#[test]
fn quadrature_dwell_matches_closed_forms() {
    // Quadrature is the slow oracle; a representative sub-grid keeps the
    // test snappy while still covering thin, moderate and opaque barriers.
    for &wl in &standard_strengths(false) {
        let b = BarrierSpec::from_strength(wl).unwrap();
        for &n in &[0.05, 0.25, 0.5, 0.75, 0.95] {
            let k = b.momentum_for_fraction(n);
            for parity in [Parity::Plus, Parity::Minus] {
                let closed = dwell_time_parity(&b, k, parity).unwrap();
                let numeric = dwell_time_numeric(&b, k, FieldConfig::Parity(parity)).unwrap();
                let gap = (closed - numeric).abs() / closed;
                assert!(
                    gap < 1e-6,
                    "dwell gap {gap:.2e} at wL={wl:.3} n={n} {parity:?}"
                );
            }
        }
    }
}

#[test]
fn finite_differences_match_closed_phase_times_on_the_grid() {
    let step = 1e-5;
    for (b, wl, n, k) in grid() {
        if k - step <= 0.0 || k + step >= b.momentum_scale() {
            continue;
        }
        let closed = phase_time_standard(&b, k).unwrap();
        let fd = phase_time_standard_fd(&b, k, step).unwrap();
        assert!(
            (closed - fd).abs() / closed < 1e-6,
            "standard gap at wL={wl:.3} n={n:.3}"
        );
        for parity in [Parity::Plus, Parity::Minus] {
            let closed = phase_time_parity(&b, k, parity).unwrap();
            let fd = phase_time_parity_fd(&b, k, parity, step).unwrap();
            assert!(
                (closed - fd).abs() / closed < 1e-6,
                "{parity:?} gap at wL={wl:.3} n={n:.3}"
            );
        }
    }
}

#[test]
fn antisymmetric_phase_grows_with_momentum() {
    // The measured sign convention behind the positive antisymmetric phase
    // time: phi_minus is an increasing function of k. Checked directly on
    // the raw unwrapped phase so no derivative formula is involved.
    let b = BarrierSpec::from_strength(4.0 * std::f64::consts::PI).unwrap();
    let momenta: Vec<f64> = (1..200).map(|j| j as f64 / 200.0).collect();
    let phases = barrier_times::combined_phase_grid(&b, &momenta, Parity::Minus).unwrap();
    for w in phases.windows(2) {
        assert!(w[1] > w[0], "{} !> {}", w[1], w[0]);
    }
}
