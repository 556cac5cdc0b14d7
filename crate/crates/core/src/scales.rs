//! Characteristic scales of the curved-mirror problem.
//!
//! A neutron skimming along a concave mirror of radius `R` at speed `v` sees,
//! in the rotating frame, a linear potential with effective acceleration
//! `a = v^2/R` plus the material's Fermi potential step `U0`. Everything
//! downstream is nondimensionalized by the length scale
//! `l0 = (hbar^2 R / (2 M^2 v^2))^{1/3}` and the energy scale
//! `eps0 = (hbar^2 M v^4 / (2 R^2))^{1/3}`, with the dimensionless barrier
//! height `z0 = U0/eps0`.

use crate::consts::PhysicalConstants;
use crate::error::{Error, Result};

/// Incident beam parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BeamSpec {
    /// Neutron velocity in m/s.
    pub velocity: f64,
}

impl BeamSpec {
    pub fn new(velocity: f64) -> Result<Self> {
        if !velocity.is_finite() || velocity <= 0.0 {
            return Err(Error::Validation {
                field: "velocity_v",
                message: format!("must be finite and > 0, got {velocity}"),
            });
        }
        Ok(BeamSpec { velocity })
    }
}

/// Geometry and material of the curved mirror.
#[derive(Debug, Clone, PartialEq)]
pub struct MirrorSpec {
    /// Curvature radius in m.
    pub radius: f64,
    /// Arc length of the mirror in m.
    pub length: f64,
    /// Fermi potential of the material in neV.
    pub fermi_potential_nev: f64,
    /// Free-form material label for reports.
    pub material: String,
}

impl MirrorSpec {
    pub fn new(radius: f64, length: f64, fermi_potential_nev: f64, material: &str) -> Result<Self> {
        if !radius.is_finite() || radius <= 0.0 {
            return Err(Error::Validation {
                field: "radius_R",
                message: format!("must be finite and > 0, got {radius}"),
            });
        }
        if !length.is_finite() || length <= 0.0 {
            return Err(Error::Validation {
                field: "length_L",
                message: format!("must be finite and > 0, got {length}"),
            });
        }
        if length >= 2.0 * std::f64::consts::PI * radius {
            return Err(Error::Validation {
                field: "length_L",
                message: format!(
                    "mirror arc {length} m does not fit on a circle of radius {radius} m"
                ),
            });
        }
        if !fermi_potential_nev.is_finite() || fermi_potential_nev <= 0.0 {
            return Err(Error::Validation {
                field: "fermi_potential_U0",
                message: format!("must be finite and > 0, got {fermi_potential_nev}"),
            });
        }
        Ok(MirrorSpec {
            radius,
            length,
            fermi_potential_nev,
            material: material.to_string(),
        })
    }

    /// Benchmark sapphire mirror: R = 2.5 cm, L = 5 cm, U0 = 150 neV.
    pub fn sapphire() -> Self {
        MirrorSpec::new(0.025, 0.05, 150.0, "sapphire").expect("benchmark values are valid")
    }

    /// Benchmark silicon mirror: R = 2.5 cm, L = 5 cm, U0 = 54 neV.
    pub fn silicon() -> Self {
        MirrorSpec::new(0.025, 0.05, 54.0, "silicon").expect("benchmark values are valid")
    }

    /// Fermi potential in joules.
    pub fn fermi_potential_j(&self, consts: &PhysicalConstants) -> f64 {
        consts.nev(self.fermi_potential_nev)
    }
}

/// The derived scale set for one (beam, mirror) combination.
///
/// All energies are stored in joules and lengths in meters; neV and um
/// appear only at I/O boundaries.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaleSet {
    /// Characteristic length l0 in m.
    pub l0: f64,
    /// Characteristic energy eps0 in J.
    pub eps0: f64,
    /// Dimensionless barrier height U0/eps0.
    pub z0: f64,
    /// Barrier height U0 in J (the mirror's Fermi potential).
    pub u0: f64,
    /// Classical angular momentum M v R / hbar (dimensionless).
    pub mu0: f64,
    /// Centrifugal acceleration v^2/R in m/s^2.
    pub accel_a: f64,
    /// Kinetic energy M v^2 / 2 in J.
    pub energy_e: f64,
    /// Neutron velocity in m/s (carried for downstream convenience).
    pub velocity: f64,
    /// Constants used to build this set.
    pub consts: PhysicalConstants,
}

impl ScaleSet {
    /// Characteristic energy in neV.
    pub fn eps0_nev(&self) -> f64 {
        self.consts.to_nev(self.eps0)
    }

    /// Characteristic length in micrometers.
    pub fn l0_um(&self) -> f64 {
        self.l0 * 1e6
    }
}

/// Build the scale set from beam and mirror parameters.
pub fn make_scales(
    beam: &BeamSpec,
    mirror: &MirrorSpec,
    consts: &PhysicalConstants,
) -> Result<ScaleSet> {
    let v = BeamSpec::new(beam.velocity)?.velocity;
    let m = MirrorSpec::new(
        mirror.radius,
        mirror.length,
        mirror.fermi_potential_nev,
        &mirror.material,
    )?;
    let hbar = consts.hbar;
    let mass = consts.neutron_mass;
    let r = m.radius;

    let l0 = (hbar * hbar * r / (2.0 * mass * mass * v * v)).cbrt();
    let eps0 = (hbar * hbar * mass * v.powi(4) / (2.0 * r * r)).cbrt();
    let u0 = m.fermi_potential_j(consts);

    Ok(ScaleSet {
        l0,
        eps0,
        z0: u0 / eps0,
        u0,
        mu0: mass * v * r / hbar,
        accel_a: v * v / r,
        energy_e: 0.5 * mass * v * v,
        velocity: v,
        consts: *consts,
    })
}

/// Classical angular momentum M v R / hbar of the grazing neutron.
pub fn classical_angular_momentum(
    beam: &BeamSpec,
    mirror: &MirrorSpec,
    consts: &PhysicalConstants,
) -> Result<f64> {
    Ok(make_scales(beam, mirror, consts)?.mu0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn sapphire_scales() -> ScaleSet {
        let consts = PhysicalConstants::codata();
        let beam = BeamSpec::new(1000.0).unwrap();
        make_scales(&beam, &MirrorSpec::sapphire(), &consts).unwrap()
    }

    #[test]
    fn sapphire_benchmark_values() {
        let s = sapphire_scales();
        // Reference values recomputed with 40-digit arithmetic from the same
        // CODATA constants.
        assert_relative_eq!(s.l0_um(), 0.036730212121, max_relative = 1e-9);
        assert_relative_eq!(s.eps0_nev(), 15.3592159528, max_relative = 1e-9);
        assert_relative_eq!(s.z0, 9.76612350925, max_relative = 1e-9);
        assert_relative_eq!(s.mu0, 397063403.137, max_relative = 1e-9);
        assert_relative_eq!(s.accel_a, 4.0e7, max_relative = 1e-12);
    }

    #[test]
    fn linear_potential_identity() {
        // eps0 == l0 * M * a ties the two scales to the same linear potential.
        let s = sapphire_scales();
        let rhs = s.l0 * s.consts.neutron_mass * s.accel_a;
        assert_relative_eq!(s.eps0, rhs, max_relative = 1e-12);
    }

    #[test]
    fn z0_definition_is_exact() {
        let s = sapphire_scales();
        let u0 = s.consts.nev(150.0);
        assert_eq!(s.z0, u0 / s.eps0);
    }

    #[test]
    fn l0_velocity_scaling() {
        let consts = PhysicalConstants::codata();
        let mirror = MirrorSpec::sapphire();
        let s1 = make_scales(&BeamSpec::new(1000.0).unwrap(), &mirror, &consts).unwrap();
        let s2 = make_scales(&BeamSpec::new(2000.0).unwrap(), &mirror, &consts).unwrap();
        assert_relative_eq!(s2.l0, s1.l0 * 2f64.powf(-2.0 / 3.0), max_relative = 1e-12);
        assert_relative_eq!(s2.eps0, s1.eps0 * 2f64.powf(4.0 / 3.0), max_relative = 1e-12);
    }

    #[test]
    fn radius_scaling() {
        let consts = PhysicalConstants::codata();
        let beam = BeamSpec::new(1000.0).unwrap();
        let m1 = MirrorSpec::new(0.025, 0.05, 150.0, "a").unwrap();
        let m2 = MirrorSpec::new(0.05, 0.05, 150.0, "b").unwrap();
        let s1 = make_scales(&beam, &m1, &consts).unwrap();
        let s2 = make_scales(&beam, &m2, &consts).unwrap();
        assert_relative_eq!(s2.l0, s1.l0 * 2f64.cbrt(), max_relative = 1e-12);
        assert_relative_eq!(s2.eps0, s1.eps0 * 2f64.powf(-2.0 / 3.0), max_relative = 1e-12);
        // mu0 is linear in R.
        assert_relative_eq!(s2.mu0, 2.0 * s1.mu0, max_relative = 1e-12);
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(BeamSpec::new(0.0).is_err());
        assert!(BeamSpec::new(-3.0).is_err());
        assert!(BeamSpec::new(f64::NAN).is_err());
        assert!(MirrorSpec::new(-0.025, 0.05, 150.0, "x").is_err());
        assert!(MirrorSpec::new(0.025, 0.0, 150.0, "x").is_err());
        assert!(MirrorSpec::new(0.025, 0.05, -150.0, "x").is_err());
        // Mirror longer than the full circle.
        assert!(MirrorSpec::new(0.025, 0.2, 150.0, "x").is_err());
        let err = MirrorSpec::new(0.025, 0.05, 0.0, "x").unwrap_err();
        assert!(err.to_string().contains("fermi_potential_U0"));
    }

    #[test]
    fn angular_momentum_matches_formula() {
        let consts = PhysicalConstants::codata();
        let beam = BeamSpec::new(1000.0).unwrap();
        let mirror = MirrorSpec::sapphire();
        let mu = classical_angular_momentum(&beam, &mirror, &consts).unwrap();
        let expect = consts.neutron_mass * 1000.0 * 0.025 / consts.hbar;
        assert_eq!(mu, expect);
        // Order of magnitude: a few 1e8 for cold neutrons on a cm-scale mirror.
        assert!(mu > 1e8 && mu < 1e9);
    }
}
