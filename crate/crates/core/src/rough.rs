//! Roughness-induced ionization of the quasi-stationary states.
//!
//! A rough mirror surface moving under the neutron at angular frequency
//! omega_r = v / lr shakes the states and can eject ("ionize") them into the
//! continuum.  The golden-rule rate for a state n below the barrier is
//! P_n = br^2 U0^2 M / (hbar^2 l0 (z0 - Re lambda_n) sqrt(2 M Ef_n)),
//! with br the RMS roughness amplitude and Ef_n the mean energy of the
//! ejected neutron.  For states far below the barrier top (z0 >> lambda)
//! this reduces to the state-independent estimate
//! P = br^2 U0 v^2 M^2 / (hbar^2 R sqrt(2 M Ef)), exposed separately.
//! The extra width hbar P is added to the tunneling
//! width of each state when sweeping the deflected flux over a rough mirror,
//! which washes out the flux steps once br grows too large.

use crate::consts::PhysicalConstants;
use crate::error::{Error, Result};
use crate::flux::{assemble_flux_curve, flux_point_with, velocity_grid, FluxCurve, FluxPoint, PopulationModel};
use crate::resonance::{critical_velocity_semiclassical, Resonance};
use crate::scales::MirrorSpec;

/// Roughness amplitude used by the potential scaling check; the fitted
/// slope does not depend on it.
const SCALING_BR: f64 = 1e-9;

/// Correlation length used by the potential scaling check.
const SCALING_LR: f64 = 5e-7;

/// Mean energy carried away by an ionized neutron.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MeanFinalEnergy {
    /// Per state: Ef_n = Re(eps_n) + hbar omega_r with omega_r = v / lr.
    Auto,
    /// A fixed energy in J shared by every state.
    Fixed(f64),
}

/// Description of the mirror surface roughness.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RoughnessSpec {
    /// RMS roughness amplitude in m.
    pub amplitude_br: f64,
    /// Correlation length of the roughness in m.
    pub correlation_length_lr: f64,
    /// How the mean final energy is chosen.
    pub mean_final_energy: MeanFinalEnergy,
}

impl RoughnessSpec {
    pub fn new(
        amplitude_br: f64,
        correlation_length_lr: f64,
        mean_final_energy: MeanFinalEnergy,
    ) -> Result<Self> {
        if !amplitude_br.is_finite() || amplitude_br < 0.0 {
            return Err(Error::Validation {
                field: "amplitude_br",
                message: format!("must be finite and >= 0, got {amplitude_br}"),
            });
        }
        if !correlation_length_lr.is_finite() || correlation_length_lr <= 0.0 {
            return Err(Error::Validation {
                field: "correlation_length_lr",
                message: format!("must be finite and > 0, got {correlation_length_lr}"),
            });
        }
        if let MeanFinalEnergy::Fixed(e) = mean_final_energy {
            if !e.is_finite() || e <= 0.0 {
                return Err(Error::Validation {
                    field: "mean_final_energy",
                    message: format!("fixed value must be finite and > 0, got {e} J"),
                });
            }
        }
        Ok(Self {
            amplitude_br,
            correlation_length_lr,
            mean_final_energy,
        })
    }
}

/// Angular frequency at which the moving surface profile shakes the state,
/// omega_r = (v / R) * (R / lr) = v / lr.  The mirror radius cancels.
pub fn roughness_frequency(velocity: f64, spec: &RoughnessSpec) -> f64 {
    velocity / spec.correlation_length_lr
}

/// Mean final energy for one state under the given roughness model.
pub fn final_energy(state: &Resonance, spec: &RoughnessSpec, consts: &PhysicalConstants) -> f64 {
    match spec.mean_final_energy {
        MeanFinalEnergy::Auto => {
            state.energy_eps.re
                + consts.hbar * roughness_frequency(state.scales.velocity, spec)
        }
        MeanFinalEnergy::Fixed(e) => e,
    }
}

/// The rate formula assumes the ejected neutron is fast compared to the
/// state it left; warn when the resolved mean final energy is not at least
/// ten times the state energy.
pub fn final_energy_warning(
    state: &Resonance,
    spec: &RoughnessSpec,
    consts: &PhysicalConstants,
) -> Option<String> {
    let ef = final_energy(state, spec, consts);
    let eps = state.energy_eps.re;
    if ef < 10.0 * eps {
        Some(format!(
            "state n = {}: mean final energy {:.4} neV is below 10x the state energy {:.4} neV; \
             the fast-ejection assumption behind the ionization rate is shaky here",
            state.index_n,
            consts.to_nev(ef),
            consts.to_nev(eps)
        ))
    } else {
        None
    }
}

fn barrier_guard(state: &Resonance) -> Result<()> {
    let z0 = state.scales.z0;
    if z0 <= state.lambda.re {
        return Err(Error::AboveBarrier {
            index: state.index_n,
            z0,
            re_lambda: state.lambda.re,
        });
    }
    Ok(())
}

/// State-resolved golden-rule ionization rate in 1/s.
pub fn ionization_probability(
    state: &Resonance,
    spec: &RoughnessSpec,
    consts: &PhysicalConstants,
) -> Result<f64> {
    barrier_guard(state)?;
    let ef = final_energy(state, spec, consts);
    let s = &state.scales;
    let m = consts.neutron_mass;
    let hbar = consts.hbar;
    Ok(spec.amplitude_br * spec.amplitude_br * s.u0 * s.u0 * m
        / (hbar * hbar * s.l0 * (s.z0 - state.lambda.re) * (2.0 * m * ef).sqrt()))
}

/// Deep-state simplification of the rate (z0 >> lambda), in 1/s.  Relative
/// to the state-resolved form it is smaller by exactly (z0 - Re lambda)/z0.
pub fn ionization_probability_simplified(
    state: &Resonance,
    spec: &RoughnessSpec,
    consts: &PhysicalConstants,
) -> Result<f64> {
    barrier_guard(state)?;
    let ef = final_energy(state, spec, consts);
    let s = &state.scales;
    let m = consts.neutron_mass;
    let hbar = consts.hbar;
    Ok(spec.amplitude_br * spec.amplitude_br * s.u0 * s.accel_a * m * m
        / (hbar * hbar * (2.0 * m * ef).sqrt()))
}

/// Ionization width hbar P_n in J from the state-resolved rate.
pub fn ionization_width(
    state: &Resonance,
    spec: &RoughnessSpec,
    consts: &PhysicalConstants,
) -> Result<f64> {
    Ok(consts.hbar * ionization_probability(state, spec, consts)?)
}

/// Ionization width hbar P in J from the simplified rate.
pub fn ionization_width_simplified(
    state: &Resonance,
    spec: &RoughnessSpec,
    consts: &PhysicalConstants,
) -> Result<f64> {
    Ok(consts.hbar * ionization_probability_simplified(state, spec, consts)?)
}

/// Flux at one velocity over a rough mirror: every state decays with
/// Gamma_n + hbar P_n.
pub fn rough_flux_point(
    mirror: &MirrorSpec,
    velocity: f64,
    spec: &RoughnessSpec,
    model: &PopulationModel,
    consts: &PhysicalConstants,
) -> Result<FluxPoint> {
    flux_point_with(mirror, velocity, model, consts, &|state| {
        ionization_width(state, spec, consts)
    })
}

/// Deflected-flux sweep over a rough mirror.  With amplitude_br = 0 the
/// extra width is exactly zero and the curve matches the smooth sweep bit
/// for bit.
#[allow(clippy::too_many_arguments)]
pub fn rough_flux_sweep(
    mirror: &MirrorSpec,
    spec: &RoughnessSpec,
    v_min: f64,
    v_max: f64,
    steps: usize,
    reference_velocity: f64,
    model: &PopulationModel,
    consts: &PhysicalConstants,
) -> Result<FluxCurve> {
    let grid = velocity_grid(v_min, v_max, steps)?;
    if !(reference_velocity >= v_min && reference_velocity <= v_max) {
        return Err(Error::Validation {
            field: "reference_velocity",
            message: format!("{reference_velocity} outside sweep range [{v_min}, {v_max}]"),
        });
    }
    let points = grid
        .iter()
        .map(|&v| (v, rough_flux_point(mirror, v, spec, model, consts)))
        .collect();
    assemble_flux_curve(points, reference_velocity)
}

/// A tabulated roughness power spectrum: density f(omega) in m^2 s over
/// angular frequency omega in rad/s.  The monochromatic model corresponds
/// to f(omega) = br^2 delta(omega - omega_r).
#[derive(Debug, Clone, PartialEq)]
pub struct RoughnessSpectrum {
    pub omega: Vec<f64>,
    pub density: Vec<f64>,
}

impl RoughnessSpectrum {
    /// Parse two-column numeric text: omega (rad/s) and f(omega) (m^2 s) per
    /// line, strictly increasing omega.  Blank lines and lines starting with
    /// '#' are ignored.
    pub fn parse(text: &str) -> Result<Self> {
        let mut omega = Vec::new();
        let mut density = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.len() != 2 {
                return Err(Error::Spectrum(format!(
                    "line {}: expected 2 columns, found {}",
                    idx + 1,
                    fields.len()
                )));
            }
            let om: f64 = fields[0].parse().map_err(|_| {
                Error::Spectrum(format!("line {}: bad frequency {:?}", idx + 1, fields[0]))
            })?;
            let f: f64 = fields[1].parse().map_err(|_| {
                Error::Spectrum(format!("line {}: bad density {:?}", idx + 1, fields[1]))
            })?;
            if !om.is_finite() || om < 0.0 {
                return Err(Error::Spectrum(format!(
                    "line {}: frequency must be finite and >= 0, got {om}",
                    idx + 1
                )));
            }
            if !f.is_finite() || f < 0.0 {
                return Err(Error::Spectrum(format!(
                    "line {}: density must be finite and >= 0, got {f}",
                    idx + 1
                )));
            }
            if let Some(&prev) = omega.last() {
                if om <= prev {
                    return Err(Error::Spectrum(format!(
                        "line {}: frequencies must be strictly increasing ({om} after {prev})",
                        idx + 1
                    )));
                }
            }
            omega.push(om);
            density.push(f);
        }
        if omega.len() < 2 {
            return Err(Error::Spectrum(format!(
                "need at least 2 rows, found {}",
                omega.len()
            )));
        }
        Ok(Self { omega, density })
    }

    /// Integral of the density over the tabulated band (trapezoid), in m^2:
    /// the mean-square amplitude the spectrum carries.
    pub fn mean_square_amplitude(&self) -> f64 {
        let mut acc = 0.0;
        for i in 0..self.omega.len() - 1 {
            acc += 0.5 * (self.density[i] + self.density[i + 1])
                * (self.omega[i + 1] - self.omega[i]);
        }
        acc
    }
}

/// Ionization rate of one state under a tabulated spectrum: the
/// state-resolved rate kernel per unit mean-square amplitude, weighted by
/// f(omega) and integrated by the trapezoid rule with Ef = Re(eps_n) +
/// hbar omega at each node.
pub fn ionization_probability_tabulated(
    state: &Resonance,
    spectrum: &RoughnessSpectrum,
    consts: &PhysicalConstants,
) -> Result<f64> {
    barrier_guard(state)?;
    let s = &state.scales;
    let m = consts.neutron_mass;
    let hbar = consts.hbar;
    let base = s.u0 * s.u0 * m / (hbar * hbar * s.l0 * (s.z0 - state.lambda.re));
    let kernel = |omega: f64| -> f64 {
        let ef = state.energy_eps.re + hbar * omega;
        base / (2.0 * m * ef).sqrt()
    };
    let mut acc = 0.0;
    for i in 0..spectrum.omega.len() - 1 {
        let (w0, w1) = (spectrum.omega[i], spectrum.omega[i + 1]);
        let g0 = spectrum.density[i] * kernel(w0);
        let g1 = spectrum.density[i + 1] * kernel(w1);
        acc += 0.5 * (g0 + g1) * (w1 - w0);
    }
    Ok(acc)
}

/// One operating point of the potential scaling check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScalingRow {
    /// Barrier height in neV.
    pub u0_nev: f64,
    /// First critical velocity vc1(U0) in m/s, the operating point.
    pub critical_velocity: f64,
    /// Mean final energy hbar vc1 / lr in J.
    pub final_energy: f64,
    /// Simplified ionization rate at the operating point, 1/s.
    pub rate: f64,
}

/// Result of the potential scaling check.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalingCheck {
    pub rows: Vec<ScalingRow>,
    /// Least-squares slope of ln(rate) against ln(U0).
    pub fitted_slope: f64,
    /// The analytic exponent 17/8.
    pub analytic_slope: f64,
    /// Its decomposition: 2*(3/4) from v^2, 1 from U0, -(1/2)*(3/4) from
    /// 1/sqrt(Ef), with v and Ef both scaling as U0^(3/4) at the operating
    /// point.
    pub decomposition: [f64; 3],
}

/// How the ionization rate scales with the barrier height when each mirror
/// is operated at its own first critical velocity.  Each U0 is evaluated at
/// v = vc1(U0) with Ef = hbar vc1 / lr; the rate then follows the exact
/// power law U0^(17/8), and the least-squares log-log slope confirms it.
/// The roughness amplitude and correlation length drop out of the slope.
pub fn potential_scaling_check(
    u0_list_nev: &[f64],
    template: &MirrorSpec,
    consts: &PhysicalConstants,
) -> Result<ScalingCheck> {
    for &u in u0_list_nev {
        if !u.is_finite() || u <= 0.0 {
            return Err(Error::Validation {
                field: "u0_list_nev",
                message: format!("barrier heights must be finite and > 0, got {u}"),
            });
        }
    }
    let mut distinct: Vec<f64> = u0_list_nev.to_vec();
    distinct.sort_by(f64::total_cmp);
    distinct.dedup();
    if distinct.len() < 3 {
        return Err(Error::DegenerateFit(format!(
            "need at least 3 distinct barrier heights, got {} distinct of {}",
            distinct.len(),
            u0_list_nev.len()
        )));
    }
    let m = consts.neutron_mass;
    let hbar = consts.hbar;
    let mut rows = Vec::with_capacity(u0_list_nev.len());
    for &u0_nev in u0_list_nev {
        let mirror = MirrorSpec::new(
            template.radius,
            template.length,
            u0_nev,
            &template.material,
        )?;
        let vc1 = critical_velocity_semiclassical(1, &mirror, consts);
        let ef = hbar * vc1 / SCALING_LR;
        let u0_j = consts.nev(u0_nev);
        let accel = vc1 * vc1 / mirror.radius;
        let rate = SCALING_BR * SCALING_BR * u0_j * accel * m * m
            / (hbar * hbar * (2.0 * m * ef).sqrt());
        rows.push(ScalingRow {
            u0_nev,
            critical_velocity: vc1,
            final_energy: ef,
            rate,
        });
    }
    let xs: Vec<f64> = rows.iter().map(|r| r.u0_nev.ln()).collect();
    let ys: Vec<f64> = rows.iter().map(|r| r.rate.ln()).collect();
    let n = xs.len() as f64;
    let xm = xs.iter().sum::<f64>() / n;
    let ym = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - xm) * (y - ym)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - xm) * (x - xm)).sum();
    Ok(ScalingCheck {
        rows,
        fitted_slope: sxy / sxx,
        analytic_slope: 17.0 / 8.0,
        decomposition: [1.5, 1.0, -0.375],
    })
}
