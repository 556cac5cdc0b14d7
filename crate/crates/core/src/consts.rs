/// Fundamental constants used throughout the crate.
///
/// Values are CODATA 2018. They are hardcoded rather than configurable so that
/// golden outputs are bit-for-bit reproducible; tests that need to probe
/// scaling behaviour can still construct a custom instance directly since the
/// fields are public.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalConstants {
    /// Neutron mass in kg.
    pub neutron_mass: f64,
    /// Reduced Planck constant in J s.
    pub hbar: f64,
    /// One nano-electronvolt in joules.
    pub nev_to_joule: f64,
}

impl PhysicalConstants {
    /// CODATA 2018 reference values.
    pub const fn codata() -> Self {
        PhysicalConstants {
            neutron_mass: 1.674_927_498_04e-27,
            hbar: 1.054_571_817e-34,
            nev_to_joule: 1.602_176_634e-28,
        }
    }

    /// Convert an energy in neV to joules.
    pub fn nev(&self, e_nev: f64) -> f64 {
        e_nev * self.nev_to_joule
    }

    /// Convert an energy in joules to neV.
    pub fn to_nev(&self, e_joule: f64) -> f64 {
        e_joule / self.nev_to_joule
    }
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        Self::codata()
    }
}
