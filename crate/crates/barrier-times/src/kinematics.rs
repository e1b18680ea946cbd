//! Barrier parameters and per-momentum derived quantities (natural units, hbar = 1).

use crate::error::{Error, Result};

/// Rectangular potential barrier of height `V0` occupying `[-L/2, +L/2]`.
///
/// `momentum_scale` is `w = sqrt(2 m V0)`: components with momentum `k < w`
/// are evanescent inside the barrier, `k >= w` would fly over the top and is
/// outside the scope of this crate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BarrierSpec {
    height: f64,
    width: f64,
    mass: f64,
    momentum_scale: f64,
}

impl BarrierSpec {
    /// Build a barrier from height `V0`, width `L` and particle mass `m`,
    /// all strictly positive and finite.
    pub fn new(height: f64, width: f64, mass: f64) -> Result<Self> {
        check_positive("height", height)?;
        check_positive("width", width)?;
        check_positive("mass", mass)?;
        Ok(BarrierSpec {
            height,
            width,
            mass,
            momentum_scale: (2.0 * mass * height).sqrt(),
        })
    }

    /// Barrier with `w = 1`, `m = 1` and the requested dimensionless
    /// strength `wL`; the natural parametrization for sweeps, where a state
    /// is identified by `(wL, n)` alone.
    pub fn from_strength(wl: f64) -> Result<Self> {
        check_positive("wL", wl)?;
        BarrierSpec::new(0.5, wl, 1.0)
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

    /// `w = sqrt(2 m V0)`.
    pub fn momentum_scale(&self) -> f64 {
        self.momentum_scale
    }

    /// Dimensionless barrier strength `w L`.
    pub fn strength(&self) -> f64 {
        self.momentum_scale * self.width
    }

    /// Momentum whose energy is the fraction `n` of the barrier height,
    /// `k = w sqrt(n)`.
    pub fn momentum_for_fraction(&self, n: f64) -> f64 {
        self.momentum_scale * n.sqrt()
    }

    /// Derived per-momentum quantities for `0 < k < w`.
    pub fn kinematics(&self, k: f64) -> Result<Kinematics> {
        if !k.is_finite() || k <= 0.0 {
            return Err(Error::Domain {
                field: "momentum",
                requirement: "positive and finite",
                value: k,
            });
        }
        let w = self.momentum_scale;
        if k >= w {
            return Err(Error::AboveBarrier {
                momentum: k,
                momentum_scale: w,
            });
        }
        // (w - k)(w + k) keeps rho accurate when k is within a few ulp of w;
        // forming w^2 - k^2 directly would cancel catastrophically there.
        let rho = ((w - k) * (w + k)).sqrt();
        let n = (k / w) * (k / w);
        let evanescent_fraction = (rho / w) * (rho / w);
        Ok(Kinematics {
            momentum: k,
            energy_fraction: n,
            evanescent_fraction,
            decay_constant: rho,
            opacity: rho * self.width,
            energy: k * k / (2.0 * self.mass),
            traversal_time: self.mass * self.width / k,
            incident_flux: k / self.mass,
        })
    }
}

/// Quantities derived from a `(barrier, momentum)` pair, valid in the
/// tunneling regime `0 < n < 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Kinematics {
    /// Incident momentum `k`.
    pub momentum: f64,
    /// `n = k^2 / w^2 = E / V0`.
    pub energy_fraction: f64,
    /// `1 - n`, computed from `rho` so it stays accurate as `n -> 1`.
    pub evanescent_fraction: f64,
    /// Under-barrier decay constant `rho = sqrt(w^2 - k^2)`.
    pub decay_constant: f64,
    /// Opacity `alpha = rho L`; `alpha >> 1` is the opaque-barrier regime.
    pub opacity: f64,
    /// `E = k^2 / 2m`.
    pub energy: f64,
    /// Classical traversal time `tau_k = m L / k`.
    pub traversal_time: f64,
    /// Incident probability flux `k / m` for a unit-amplitude plane wave.
    pub incident_flux: f64,
}

/// Opacity `alpha = wL sqrt(1 - n)` as a function of the energy fraction.
///
/// `n = 0` is admitted as the free-limit anchor (`alpha = wL`); the tunneling
/// regime proper is `0 < n < 1`.
pub fn opacity_of(energy_fraction: f64, wl: f64) -> Result<f64> {
    if !energy_fraction.is_finite() || !(0.0..1.0).contains(&energy_fraction) {
        return Err(Error::Domain {
            field: "energy_fraction",
            requirement: "within [0, 1)",
            value: energy_fraction,
        });
    }
    check_positive("wL", wl)?;
    Ok(wl * (1.0 - energy_fraction).sqrt())
}

fn check_positive(field: &'static str, value: f64) -> Result<()> {
    if !value.is_finite() || value <= 0.0 {
        return Err(Error::Domain {
            field,
            requirement: "positive and finite",
            value,
        });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn momentum_scale_from_height_and_mass() {
        let b = BarrierSpec::new(0.5, 1.0, 1.0).unwrap();
        assert!((b.momentum_scale() - 1.0).abs() < 1e-15);

        let b = BarrierSpec::new(2.0, 4.0 * PI, 1.0).unwrap();
        assert!((b.momentum_scale() - 2.0).abs() < 1e-15);
        assert!((b.strength() - 8.0 * PI).abs() < 1e-12);
    }

    #[test]
    fn rejects_non_positive_parameters() {
        for (v0, l, m) in [(0.0, 1.0, 1.0), (1.0, -1.0, 1.0), (1.0, 1.0, 0.0)] {
            let err = BarrierSpec::new(v0, l, m).unwrap_err();
            assert!(matches!(err, Error::Domain { .. }), "got {err:?}");
        }
        let err = BarrierSpec::new(f64::NAN, 1.0, 1.0).unwrap_err();
        assert!(matches!(err, Error::Domain { .. }));
    }

    #[test]
    fn kinematics_reference_point() {
        // w = 1, L = 4*pi, k = sqrt(0.5): n = 0.5, alpha = 4*pi/sqrt(2).
        let b = BarrierSpec::new(0.5, 4.0 * PI, 1.0).unwrap();
        let kin = b.kinematics(0.5_f64.sqrt()).unwrap();
        assert!((kin.energy_fraction - 0.5).abs() < 1e-14);
        assert!((kin.decay_constant - 0.5_f64.sqrt()).abs() < 1e-14);
        let alpha_expected = 4.0 * PI * 0.5_f64.sqrt();
        assert!((kin.opacity - alpha_expected).abs() / alpha_expected < 1e-14);
        assert!((kin.opacity - 8.8858).abs() < 5e-5);
        assert!((kin.energy - 0.25).abs() < 1e-14);
    }

    #[test]
    fn momentum_just_below_scale_is_accepted() {
        let b = BarrierSpec::new(0.5, 1.0, 1.0).unwrap();
        let kin = b.kinematics(0.999_999).unwrap();
        assert!(kin.opacity > 0.0);
        assert!(kin.evanescent_fraction > 0.0);
    }

    #[test]
    fn momentum_at_or_above_scale_is_rejected() {
        let b = BarrierSpec::new(0.5, 1.0, 1.0).unwrap();
        assert!(matches!(
            b.kinematics(1.0).unwrap_err(),
            Error::AboveBarrier { .. }
        ));
        assert!(matches!(
            b.kinematics(1.5).unwrap_err(),
            Error::AboveBarrier { .. }
        ));
    }

    #[test]
    fn non_positive_momentum_is_rejected() {
        let b = BarrierSpec::new(0.5, 1.0, 1.0).unwrap();
        for k in [0.0, -1.0, f64::NAN] {
            assert!(matches!(
                b.kinematics(k).unwrap_err(),
                Error::Domain { .. }
            ));
        }
    }

    #[test]
    fn opacity_of_reference_values() {
        assert!((opacity_of(0.0, 4.0 * PI).unwrap() - 4.0 * PI).abs() < 1e-14);
        let a = opacity_of(0.75, 4.0 * PI).unwrap();
        assert!((a - 2.0 * PI).abs() / (2.0 * PI) < 1e-14);
        let a = opacity_of(0.5, 2.0 * PI).unwrap();
        assert!((a - 4.442882938158366).abs() < 1e-12);
    }

    #[test]
    fn opacity_of_rejects_out_of_range() {
        assert!(opacity_of(1.0, 1.0).is_err());
        assert!(opacity_of(-0.1, 1.0).is_err());
        assert!(opacity_of(0.5, 0.0).is_err());
    }

    #[test]
    fn evanescent_fraction_is_accurate_near_threshold() {
        let b = BarrierSpec::new(0.5, 1.0, 1.0).unwrap();
        // k chosen so that w - k is an exactly representable tiny gap.
        let k = 1.0 - 1e-12;
        let kin = b.kinematics(k).unwrap();
        // 1 - n = (w - k)(w + k) / w^2 ~ 2e-12.
        let expected = (1.0 - k) * (1.0 + k);
        assert!((kin.evanescent_fraction - expected).abs() / expected < 1e-12);
    }
}
