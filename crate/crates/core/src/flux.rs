//! Deflected-flux curves: survival of quasi-stationary states over the mirror.
//!
//! A state of width Gamma_n decays as exp(-Gamma_n t / hbar) during the time
//! of flight t = L / v along a mirror of length L.  The flux reaching the
//! exit edge is F(v) = (v / R) sum_n w_n exp(-Gamma_n(v) (L / v) / hbar),
//! with initial populations w_n either uniform or set by the overlap of each
//! state with the incoming beam band.  Sweeping v and normalizing by the flux
//! at a reference velocity produces a step-like curve: each drop marks the
//! velocity at which one more state becomes too short-lived to survive the
//! mirror.  The step detector and contrast evaluation at the bottom of this
//! module quantify those drops.

use std::collections::BTreeMap;

use num_complex::Complex64;

use crate::airy::airy_eval;
use crate::consts::PhysicalConstants;
use crate::error::{Error, Result};
use crate::resonance::{solve_resonances, state_count_estimate, Resonance};
use crate::scales::{make_scales, BeamSpec, MirrorSpec};

/// Relative-flux visibility floor shared by the step detector and the
/// contrast evaluation: structure below this level counts as unobservable.
pub const FLUX_FLOOR: f64 = 0.1;

/// A step is dominant when the flux drops by at least this factor across it.
pub const DOMINANT_FACTOR: f64 = 1.5;

/// Hard cap on how many states a flux sum will ever include.
const MAX_STATES: usize = 32;

/// Panel count for the Simpson overlap quadratures (even).
const SIMPSON_PANELS: usize = 400;

/// How the states are populated when the beam enters the mirror.
#[derive(Debug, Clone, PartialEq)]
pub enum PopulationModel {
    /// Every state starts with unit weight (weights left unnormalized).
    Equal,
    /// Weights from the overlap of each state with a uniform incoming band
    /// occupying 0 < z < band_height above the mirror surface, band_height
    /// in meters.  Weights are normalized to unit sum.
    Overlap { band_height: f64 },
}

/// Time a neutron of the given velocity spends over the mirror, L / v.
pub fn time_of_flight(mirror: &MirrorSpec, velocity: f64) -> f64 {
    assert!(velocity > 0.0, "velocity must be positive");
    mirror.length / velocity
}

/// Simpson rule on [a, b] with an even number of panels.
fn simpson<F>(a: f64, b: f64, panels: usize, mut f: F) -> Result<Complex64>
where
    F: FnMut(f64) -> Result<Complex64>,
{
    debug_assert!(panels >= 2 && panels % 2 == 0);
    let h = (b - a) / panels as f64;
    let mut acc = f(a)? + f(b)?;
    for k in 1..panels {
        let w = if k % 2 == 1 { 4.0 } else { 2.0 };
        acc += w * f(a + h * k as f64)?;
    }
    Ok(acc * (h / 3.0))
}

/// Raw (unnormalized) beam-overlap weight of one state, everything in units
/// of the length scale l0.  The state profile is Ai(zeta - lambda), given
/// unit norm over the classically allowed region 0 < zeta < Re lambda; the
/// weight is the squared modulus of its integral over the beam band
/// 0 < zeta < band_height_zeta.  A common factor l0 is dropped because the
/// weights are normalized to unit sum afterwards.
fn overlap_weight_raw(lambda: Complex64, band_height_zeta: f64) -> Result<f64> {
    let norm = simpson(0.0, lambda.re, SIMPSON_PANELS, |t| {
        let q = airy_eval(Complex64::new(t, 0.0) - lambda)?;
        Ok(Complex64::new(q.ai.norm_sqr(), 0.0))
    })?
    .re;
    let overlap = simpson(0.0, band_height_zeta, SIMPSON_PANELS, |t| {
        Ok(airy_eval(Complex64::new(t, 0.0) - lambda)?.ai)
    })?;
    Ok(overlap.norm_sqr() / norm)
}

/// Initial population of each state when the beam enters the mirror.
pub fn initial_populations(states: &[Resonance], model: &PopulationModel) -> Result<Vec<f64>> {
    if states.is_empty() {
        return Err(Error::EmptyStates);
    }
    match model {
        PopulationModel::Equal => Ok(vec![1.0; states.len()]),
        PopulationModel::Overlap { band_height } => {
            if !band_height.is_finite() || *band_height <= 0.0 {
                return Err(Error::Validation {
                    field: "band_height",
                    message: format!("must be positive and finite, got {band_height}"),
                });
            }
            let mut raw = Vec::with_capacity(states.len());
            for s in states {
                raw.push(overlap_weight_raw(s.lambda, band_height / s.scales.l0)?);
            }
            let total: f64 = raw.iter().sum();
            if !(total > 0.0) {
                return Err(Error::Validation {
                    field: "band_height",
                    message: "overlap weights sum to zero".into(),
                });
            }
            Ok(raw.into_iter().map(|w| w / total).collect())
        }
    }
}

/// Flux at a single velocity, with the per-state breakdown.
#[derive(Debug, Clone)]
pub struct FluxPoint {
    /// Beam velocity (m/s).
    pub velocity: f64,
    /// Absolute deflected flux (1/s).
    pub raw_flux: f64,
    /// Per-state survival contribution (v / R) exp(-Gamma t / hbar) in 1/s,
    /// keyed by state index, before population weighting.
    pub per_state: Vec<(usize, f64)>,
}

/// Flux at one velocity with an additional width channel added to every
/// state (zero for a smooth mirror).  Adding an exact 0.0 leaves each width
/// bit-for-bit unchanged, so the smooth curve is the extra_width = 0 case of
/// the same code path.
pub(crate) fn flux_point_with(
    mirror: &MirrorSpec,
    velocity: f64,
    model: &PopulationModel,
    consts: &PhysicalConstants,
    extra_width: &dyn Fn(&Resonance) -> Result<f64>,
) -> Result<FluxPoint> {
    let beam = BeamSpec::new(velocity)?;
    let scales = make_scales(&beam, mirror, consts)?;
    let cap = (state_count_estimate(scales.z0) + 1).clamp(1, MAX_STATES);
    let states = solve_resonances(&scales, cap)?;
    if states.is_empty() {
        return Ok(FluxPoint {
            velocity,
            raw_flux: 0.0,
            per_state: Vec::new(),
        });
    }
    let weights = initial_populations(&states, model)?;
    let t_flight = time_of_flight(mirror, velocity);
    let prefactor = velocity / mirror.radius;
    let mut raw = 0.0;
    let mut per_state = Vec::with_capacity(states.len());
    for (state, w) in states.iter().zip(&weights) {
        let gamma_total = state.width_gamma + extra_width(state)?;
        let contribution = prefactor * (-gamma_total * t_flight / consts.hbar).exp();
        raw += w * contribution;
        per_state.push((state.index_n, contribution));
    }
    Ok(FluxPoint {
        velocity,
        raw_flux: raw,
        per_state,
    })
}

/// Flux at one velocity for a smooth mirror.
pub fn flux_point(
    mirror: &MirrorSpec,
    velocity: f64,
    model: &PopulationModel,
    consts: &PhysicalConstants,
) -> Result<FluxPoint> {
    flux_point_with(mirror, velocity, model, consts, &|_| Ok(0.0))
}

/// Absolute deflected flux (1/s) at one velocity for a smooth mirror.
pub fn deflected_flux(
    mirror: &MirrorSpec,
    velocity: f64,
    model: &PopulationModel,
    consts: &PhysicalConstants,
) -> Result<f64> {
    Ok(flux_point(mirror, velocity, model, consts)?.raw_flux)
}

/// A normalized flux-versus-velocity curve.
#[derive(Debug, Clone)]
pub struct FluxCurve {
    /// Velocities of the sweep grid (m/s), ascending.
    pub velocity_grid: Vec<f64>,
    /// Flux normalized by its value at the reference point; exactly 1 there.
    /// NaN at grid points whose solve failed.
    pub relative_flux: Vec<f64>,
    /// Grid velocity the curve is normalized at: the grid point nearest the
    /// requested reference velocity.
    pub reference_velocity: f64,
    /// Absolute flux at the reference point (1/s).
    pub reference_flux: f64,
    /// Unweighted per-state survival contributions (1/s) on the same grid,
    /// zero where the state does not exist.
    pub per_state: BTreeMap<usize, Vec<f64>>,
    /// Grid points whose evaluation failed, with the error text.
    pub failures: Vec<(f64, String)>,
}

/// Uniform velocity grid with `steps` points from v_min to v_max inclusive.
pub fn velocity_grid(v_min: f64, v_max: f64, steps: usize) -> Result<Vec<f64>> {
    if steps < 2 {
        return Err(Error::Validation {
            field: "steps",
            message: format!("need at least 2 grid points, got {steps}"),
        });
    }
    if !(v_min > 0.0) || !(v_max > v_min) || !v_max.is_finite() {
        return Err(Error::Validation {
            field: "velocity range",
            message: format!("need 0 < v_min < v_max, got [{v_min}, {v_max}]"),
        });
    }
    Ok((0..steps)
        .map(|i| v_min + (v_max - v_min) * i as f64 / (steps - 1) as f64)
        .collect())
}

/// Assemble a normalized curve from per-point results (points in grid
/// order).  Failed points are recorded and carried as NaN; the sweep is
/// rejected outright if more than 10% of points failed or the reference
/// point itself is unusable.
pub fn assemble_flux_curve(
    points: Vec<(f64, Result<FluxPoint>)>,
    reference_velocity: f64,
) -> Result<FluxCurve> {
    let total = points.len();
    if total < 2 {
        return Err(Error::Validation {
            field: "points",
            message: format!("need at least 2 grid points, got {total}"),
        });
    }
    let grid: Vec<f64> = points.iter().map(|(v, _)| *v).collect();
    let failures: Vec<(f64, String)> = points
        .iter()
        .filter_map(|(v, r)| r.as_ref().err().map(|e| (*v, e.to_string())))
        .collect();
    if failures.len() * 10 > total {
        return Err(Error::PartialSweep {
            failed: failures.len(),
            total,
        });
    }
    let iref = (0..total)
        .min_by(|&i, &j| {
            (grid[i] - reference_velocity)
                .abs()
                .total_cmp(&(grid[j] - reference_velocity).abs())
        })
        .unwrap();
    let ref_flux = match &points[iref].1 {
        Ok(p) => p.raw_flux,
        Err(e) => {
            return Err(Error::Validation {
                field: "reference_velocity",
                message: format!("evaluation failed at the reference point: {e}"),
            })
        }
    };
    if !(ref_flux > 0.0) {
        return Err(Error::Validation {
            field: "reference_velocity",
            message: format!(
                "flux vanishes at the reference point v = {}; nothing to normalize by",
                grid[iref]
            ),
        });
    }
    let relative: Vec<f64> = points
        .iter()
        .map(|(_, r)| match r {
            Ok(p) => p.raw_flux / ref_flux,
            Err(_) => f64::NAN,
        })
        .collect();
    let mut per_state: BTreeMap<usize, Vec<f64>> = BTreeMap::new();
    for (_, r) in &points {
        if let Ok(p) = r {
            for (n, _) in &p.per_state {
                per_state.entry(*n).or_insert_with(|| vec![0.0; total]);
            }
        }
    }
    for (i, (_, r)) in points.iter().enumerate() {
        match r {
            Ok(p) => {
                for (n, c) in &p.per_state {
                    per_state.get_mut(n).unwrap()[i] = *c;
                }
            }
            Err(_) => {
                for col in per_state.values_mut() {
                    col[i] = f64::NAN;
                }
            }
        }
    }
    let reference_velocity = grid[iref];
    Ok(FluxCurve {
        velocity_grid: grid,
        relative_flux: relative,
        reference_velocity,
        reference_flux: ref_flux,
        per_state,
        failures,
    })
}

/// Sweep the deflected flux over a uniform velocity grid and normalize at
/// the grid point nearest `reference_velocity`.
pub fn flux_sweep(
    mirror: &MirrorSpec,
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
        .map(|&v| (v, flux_point(mirror, v, model, consts)))
        .collect();
    assemble_flux_curve(points, reference_velocity)
}

/// One detected step of a flux curve.
#[derive(Debug, Clone)]
pub struct FluxStep {
    /// Grid velocity of the slope maximum.
    pub peak_velocity: f64,
    /// Centered slope of ln(flux) at the peak, 1 / (m/s).
    pub peak_slope: f64,
    /// Grid indices of the flanking slope minima bounding the step region.
    pub left_index: usize,
    pub right_index: usize,
    /// Grid velocities of the region edges.
    pub left_velocity: f64,
    pub right_velocity: f64,
    /// Flux drop across the region, exp(G_left - G_right) with
    /// G = ln(max(relative flux, FLUX_FLOOR)).
    pub factor: f64,
    /// Whether factor >= DOMINANT_FACTOR.
    pub dominant: bool,
}

/// Detect the step structure of a flux curve.
///
/// The curve is floored at FLUX_FLOOR and taken in log, G = ln(max(F, floor)).
/// Steps are strict interior local maxima of the centered slope |dG/dv|; each
/// peak's region extends to the flanking slope minima, and its factor is the
/// total flux drop across that region.  Peaks sharing a region are merged,
/// keeping the steepest.  Returned steepest first.
pub fn detect_steps(curve: &FluxCurve) -> Vec<FluxStep> {
    let v = &curve.velocity_grid;
    let n = v.len();
    if n < 5 {
        return Vec::new();
    }
    let g: Vec<f64> = curve
        .relative_flux
        .iter()
        .map(|&f| f.max(FLUX_FLOOR).ln())
        .collect();
    let mut s = vec![0.0; n];
    for i in 1..n - 1 {
        s[i] = ((g[i + 1] - g[i - 1]) / (v[i + 1] - v[i - 1])).abs();
    }
    let mut merged: Vec<FluxStep> = Vec::new();
    for i in 2..n - 2 {
        if s[i] > s[i - 1] && s[i] >= s[i + 1] {
            let mut a = i;
            while a > 1 && s[a - 1] < s[a] {
                a -= 1;
            }
            let mut b = i;
            while b < n - 2 && s[b + 1] < s[b] {
                b += 1;
            }
            let factor = (g[a] - g[b]).exp();
            let step = FluxStep {
                peak_velocity: v[i],
                peak_slope: s[i],
                left_index: a,
                right_index: b,
                left_velocity: v[a],
                right_velocity: v[b],
                factor,
                dominant: factor >= DOMINANT_FACTOR,
            };
            match merged
                .iter_mut()
                .find(|p| p.left_index == a && p.right_index == b)
            {
                Some(prev) => {
                    if step.peak_slope > prev.peak_slope {
                        *prev = step;
                    }
                }
                None => merged.push(step),
            }
        }
    }
    merged.sort_by(|x, y| y.peak_slope.total_cmp(&x.peak_slope));
    merged
}

/// Dominant steps ordered from the fast side down (descending velocity).
pub fn dominant_steps(curve: &FluxCurve) -> Vec<FluxStep> {
    let mut out: Vec<FluxStep> = detect_steps(curve)
        .into_iter()
        .filter(|s| s.dominant)
        .collect();
    out.sort_by(|x, y| y.peak_velocity.total_cmp(&x.peak_velocity));
    out
}

/// Contrast of the rough-mirror curve across each dominant step of the
/// smooth-mirror curve (at most the first two, descending velocity):
/// C = 1 - Ftil(right edge) / Ftil(left edge), where Ftil is the rough curve
/// rescaled to the smooth curve's absolute normalization and floored at
/// FLUX_FLOOR.  Both sweeps must share the same velocity grid.
pub fn step_contrasts(smooth: &FluxCurve, rough: &FluxCurve) -> Result<Vec<f64>> {
    if smooth.velocity_grid != rough.velocity_grid {
        return Err(Error::Validation {
            field: "velocity_grid",
            message: "smooth and rough sweeps must share the same grid".into(),
        });
    }
    let scale = rough.reference_flux / smooth.reference_flux;
    let mut out = Vec::new();
    for st in dominant_steps(smooth).iter().take(2) {
        let fa = (rough.relative_flux[st.left_index] * scale).max(FLUX_FLOOR);
        let fb = (rough.relative_flux[st.right_index] * scale).max(FLUX_FLOOR);
        out.push(1.0 - fb / fa);
    }
    Ok(out)
}
