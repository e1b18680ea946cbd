//! Small numeric helpers: stable hyperbolic differences, phase unwrapping,
//! and a refining composite Simpson rule.

use crate::error::{Error, Result};

/// `sinh(x) - x`, evaluated without cancellation for small `x`.
pub fn sinh_minus_x(x: f64) -> f64 {
    if x.abs() < 0.5 {
        // sum_{j>=1} x^(2j+1) / (2j+1)!
        let x2 = x * x;
        let mut term = x * x2 / 6.0;
        let mut sum = term;
        for j in 2..20 {
            term *= x2 / ((2 * j) as f64 * (2 * j + 1) as f64);
            sum += term;
            if term.abs() <= f64::EPSILON * sum.abs() {
                break;
            }
        }
        sum
    } else {
        x.sinh() - x
    }
}

/// `cosh(x) - 1 = 2 sinh^2(x/2)`, exact identity, no cancellation.
pub fn cosh_minus_one(x: f64) -> f64 {
    let s = (0.5 * x).sinh();
    2.0 * s * s
}

/// Map `delta` into `(-pi, pi]` by removing whole turns.
pub fn wrap_to_principal(delta: f64) -> f64 {
    use std::f64::consts::PI;
    let wrapped = delta - (delta / (2.0 * PI)).round() * 2.0 * PI;
    if wrapped <= -PI {
        wrapped + 2.0 * PI
    } else {
        wrapped
    }
}

/// Remove 2-pi jumps in place so the sequence is continuous; the first entry
/// is left untouched.
pub fn unwrap_phases(phases: &mut [f64]) {
    for i in 1..phases.len() {
        let delta = wrap_to_principal(phases[i] - phases[i - 1]);
        phases[i] = phases[i - 1] + delta;
    }
}

/// Composite Simpson rule with `panels` subintervals (`panels` even, >= 2).
pub fn simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, panels: usize) -> f64 {
    assert!(panels >= 2 && panels % 2 == 0, "panels must be even and >= 2");
    let h = (b - a) / panels as f64;
    let mut sum = f(a) + f(b);
    for i in 1..panels {
        let weight = if i % 2 == 1 { 4.0 } else { 2.0 };
        sum += weight * f(a + i as f64 * h);
    }
    sum * h / 3.0
}

/// Double the Simpson panel count until consecutive estimates agree to
/// `rel_tol`; returns `(value, last relative change)`.
pub fn integrate_refining<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    rel_tol: f64,
) -> Result<(f64, f64)> {
    let mut panels = 16;
    let mut previous = simpson(f, a, b, panels);
    loop {
        panels *= 2;
        let current = simpson(f, a, b, panels);
        let scale = current.abs().max(previous.abs()).max(f64::MIN_POSITIVE);
        let change = (current - previous).abs() / scale;
        if change <= rel_tol {
            return Ok((current, change));
        }
        if panels >= 1 << 20 {
            return Err(Error::Internal(format!(
                "quadrature failed to converge: last relative change {change:.3e}"
            )));
        }
        previous = current;
    }
}
