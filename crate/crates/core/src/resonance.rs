//! Quasi-stationary states of a neutron skimming the concave mirror surface.
//!
//! In scaled variables the radial problem is a linear well capped by a finite
//! step of height z0 = U0/eps0. A state leaks out by tunneling through the
//! triangular barrier between its energy and the step top, so its
//! dimensionless energy lambda_n is a complex root of the matching condition
//!
//!   Ai'(-lambda) W(z0 - lambda) = Ai(-lambda) W'(z0 - lambda),
//!   W = Bi + i Ai,
//!
//! where W is the outgoing-wave combination. Roots are found by damped
//! Newton iteration with the derivative evaluated analytically: using
//! Ai''(x) = x Ai(x) and W'' (x) = x W(x), the derivative of the matching
//! function collapses to z0 Ai(-lambda) W(z0-lambda), so no finite
//! differences are involved and the exponentially small imaginary parts are
//! not drowned by differencing noise.
//!
//! All Airy factors are used in mantissa-exponent form. Both sides of the
//! matching condition share the exponent exp_ai(-lambda) + exp_w(z0-lambda)
//! exactly, so residuals and Newton steps are formed from mantissas alone
//! and the barrier suppression exp(-(4/3)(z0-lambda)^{3/2}) never has to be
//! exponentiated, no matter how large z0 is.

use num_complex::Complex64;

use crate::airy::airy_eval_scaled;
use crate::error::{Error, Result};
use crate::scales::{MirrorSpec, ScaleSet};
use crate::PhysicalConstants;

/// Convergence threshold on the normalized matching residual.
const RESIDUAL_TOL: f64 = 1e-9;
/// Convergence threshold on the Newton step.
const STEP_TOL: f64 = 1e-10;
/// Iteration budget per root.
const MAX_ITER: usize = 100;
/// Minimum distance between distinct roots.
const DISTINCT_TOL: f64 = 1e-6;
/// Largest Newton step accepted in one iteration (damping clamp).
const MAX_STEP: f64 = 0.5;

/// One quasi-stationary state.
#[derive(Debug, Clone, PartialEq)]
pub struct Resonance {
    /// State number, 1-based, ordered by Re(lambda).
    pub index_n: usize,
    /// Dimensionless complex eigenvalue.
    pub lambda: Complex64,
    /// Complex energy eps0 * lambda in J; the real part is the state
    /// position, -2 * imaginary part its width.
    pub energy_eps: Complex64,
    /// Width Gamma_n = -2 eps0 Im(lambda) in J.
    pub width_gamma: f64,
    /// Lifetime hbar / Gamma_n in s (infinite if the width underflows).
    pub lifetime_tau: f64,
    /// Complex angular momentum mu_n = mu0 - eps_n M R^2 / (mu0 hbar^2);
    /// Im(mu_n) = Gamma_n R / (2 hbar v).
    pub ang_momentum_mu: Complex64,
    /// Scale set the state was solved under.
    pub scales: ScaleSet,
    /// Normalized matching residual re-evaluated at the solved lambda.
    pub residual: f64,
}

/// Semiclassical estimate for one state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SemiclassicalEstimate {
    pub index_n: usize,
    /// Estimated Re(lambda_n).
    pub lambda_estimate: f64,
    /// Estimated width in the same unit as the eps0 passed in.
    pub gamma_estimate: f64,
    /// False when the hard-wall level sits at or above the barrier top, in
    /// which case the estimate formulas do not apply.
    pub valid: bool,
}

/// The two sides of the matching condition as mantissas on a common
/// exponent, plus the analytic Newton step. Internal to the solver.
struct MatchEval {
    /// Normalized residual (t1 - t2) / max(|t1|, |t2|).
    residual: Complex64,
    /// Newton step -D/D' (exponent-free).
    delta: Complex64,
}

fn match_eval(lambda: Complex64, z0: f64) -> MatchEval {
    let l = airy_eval_scaled(-lambda);
    let (w, wp, _e_w) = crate::airy::outgoing_wave_scaled(Complex64::new(z0, 0.0) - lambda);

    // t1 = Ai'(-lambda) W, t2 = Ai(-lambda) W'; both on exponent
    // exp_ai(l) + e_w, which therefore cancels from residual and step.
    let t1 = l.ai_prime * w;
    let t2 = l.ai * wp;
    let d = t1 - t2;
    let scale = t1.norm().max(t2.norm());
    let residual = if scale > 0.0 { d / scale } else { d };

    // dD/dlambda = z0 Ai(-lambda) W(z0-lambda), exact via the Airy ODE.
    let dprime = z0 * l.ai * w;
    let delta = if dprime.norm() > 0.0 {
        -d / dprime
    } else {
        Complex64::new(0.0, 0.0)
    };
    MatchEval { residual, delta }
}

/// Residual of the matching condition at `lambda`, normalized by the larger
/// of its two sides. A quasi-stationary eigenvalue makes this (nearly) zero.
pub fn matching_residual(lambda: Complex64, z0: f64) -> Result<Complex64> {
    if !(z0 > 0.0) {
        return Err(Error::Validation {
            field: "z0",
            message: format!("must be positive, got {z0}"),
        });
    }
    if !lambda.re.is_finite() || !lambda.im.is_finite() {
        return Err(Error::Validation {
            field: "lambda",
            message: format!("must be finite, got {lambda}"),
        });
    }
    Ok(match_eval(lambda, z0).residual)
}

/// Hard-wall level (3/4 pi (2n - 1/2))^{2/3}: the n-th state of the linear
/// well with an infinitely high wall.
fn hard_wall_lambda(n: usize) -> f64 {
    (0.75 * std::f64::consts::PI * (2.0 * n as f64 - 0.5)).powf(2.0 / 3.0)
}

/// Semiclassical count of states below the barrier top:
/// floor((2/(3 pi)) z0^{3/2} + 3/4). Exact for every barrier height the
/// solver has been validated on.
pub fn state_count_estimate(z0: f64) -> usize {
    let c = 2.0 / (3.0 * std::f64::consts::PI) * z0.powf(1.5) + 0.75;
    if c < 1.0 {
        0
    } else {
        c.floor() as usize
    }
}

/// Semiclassical estimate of lambda_n and the width Gamma_n.
///
/// The level is the hard-wall value lowered by the finite-step reflection
/// phase: lambda ~ lambda0 - atan(sqrt(lambda0/(z0-lambda0))) / sqrt(lambda0).
/// For z0 >> lambda0 the correction reduces to the familiar penetration
/// shift 1/sqrt(z0 - lambda0). The width is the barrier transmission
/// estimate 4 eps0 sqrt(z0-lambda)/z0 exp(-(4/3)(z0-lambda)^{3/2}).
///
/// `eps0` only scales `gamma_estimate`; pass 1.0 for a dimensionless width.
pub fn semiclassical_lambda(n: usize, z0: f64, eps0: f64) -> SemiclassicalEstimate {
    assert!(n >= 1, "state index must be positive");
    let l0 = hard_wall_lambda(n);
    if !(z0 > l0) {
        return SemiclassicalEstimate {
            index_n: n,
            lambda_estimate: l0,
            gamma_estimate: 0.0,
            valid: false,
        };
    }
    let lambda = l0 - (l0 / (z0 - l0)).sqrt().atan() / l0.sqrt();
    let barrier = z0 - lambda;
    let gamma = 4.0 * eps0 * barrier.sqrt() / z0 * (-4.0 / 3.0 * barrier.powf(1.5)).exp();
    SemiclassicalEstimate {
        index_n: n,
        lambda_estimate: lambda,
        gamma_estimate: gamma,
        valid: true,
    }
}

/// Newton iteration from one seed. Returns the converged root.
fn newton_root(seed: Complex64, z0: f64, index: usize) -> Result<Complex64> {
    let mut lambda = seed;
    let mut last_residual = f64::INFINITY;
    for _ in 0..MAX_ITER {
        let ev = match_eval(lambda, z0);
        last_residual = ev.residual.norm();
        if last_residual < RESIDUAL_TOL && ev.delta.norm() < STEP_TOL {
            return Ok(lambda);
        }
        let step = if ev.delta.norm() > MAX_STEP {
            ev.delta * (MAX_STEP / ev.delta.norm())
        } else {
            ev.delta
        };
        lambda += step;
    }
    Err(Error::Convergence {
        index,
        iterations: MAX_ITER,
        last_re: lambda.re,
        last_im: lambda.im,
        residual: last_residual,
    })
}

/// Scan the real segment (0, z0] at Im(lambda) = -1e-3 for sign changes of
/// the real part of the normalized residual; used to seed states near the
/// barrier top, where the semiclassical estimate is invalid. The endpoint
/// z0 is included because the crossing belonging to the topmost state sits
/// to the right of the state itself, displaced by roughly its distance to
/// the scan line.
fn scan_seeds(z0: f64) -> Vec<Complex64> {
    let points = 200.max((40.0 * z0) as usize);
    let im = -1e-3;
    let mut seeds = Vec::new();
    let mut prev: Option<(f64, f64)> = None;
    for k in 1..=points {
        let x = z0 * k as f64 / points as f64;
        let re = match_eval(Complex64::new(x, im), z0).residual.re;
        if let Some((px, pre)) = prev {
            if pre.signum() != re.signum() && pre != 0.0 {
                seeds.push(Complex64::new(0.5 * (px + x), im));
            }
        }
        prev = Some((x, re));
    }
    seeds
}

/// Extra seed for the first state whose hard-wall level sits above the
/// barrier: extend the reflection-phase correction continuously (the phase
/// saturates at pi/2 at the top) and start visibly off-axis, since such a
/// state is always broad.
fn near_top_seed(z0: f64, n: usize) -> Option<Complex64> {
    let l0 = hard_wall_lambda(n);
    let re = l0 - 0.5 * std::f64::consts::PI / l0.sqrt();
    (re > 0.0 && re < z0).then(|| Complex64::new(re, -0.05))
}

/// All dimensionless eigenvalues with 0 < Re(lambda) < z0, at most `n_max`,
/// ordered by real part.
///
/// States whose semiclassical seed is valid are Newton-iterated from it
/// (imaginary seed -gamma/2). If fewer than `n_max` result, the real-axis
/// scan supplies seeds for the remaining near-top states. Two
/// semiclassically seeded roots closer than 1e-6 are reported as a
/// collision; scan-seeded rediscoveries of known roots are dropped.
pub fn solve_lambdas(z0: f64, n_max: usize) -> Result<Vec<Complex64>> {
    if !(z0 > 0.0) || !z0.is_finite() {
        return Err(Error::Validation {
            field: "z0",
            message: format!("must be positive and finite, got {z0}"),
        });
    }
    if n_max == 0 {
        return Err(Error::Validation {
            field: "n_max",
            message: "must be at least 1".into(),
        });
    }

    let inside = |l: Complex64| l.re > 0.0 && l.re < z0 && l.im <= 0.0;

    let mut roots: Vec<Complex64> = Vec::new();
    for n in 1..=n_max {
        let est = semiclassical_lambda(n, z0, 1.0);
        if !est.valid {
            break;
        }
        let seed = Complex64::new(est.lambda_estimate, -0.5 * est.gamma_estimate);
        let root = newton_root(seed, z0, n)?;
        if !inside(root) {
            continue;
        }
        for (j, &other) in roots.iter().enumerate() {
            let sep = (root - other).norm();
            if sep <= DISTINCT_TOL {
                return Err(Error::RootCollision {
                    first: j + 1,
                    second: n,
                    separation: sep,
                    limit: DISTINCT_TOL,
                });
            }
        }
        roots.push(root);
    }

    if roots.len() < n_max {
        let extra = scan_seeds(z0)
            .into_iter()
            .chain(near_top_seed(z0, roots.len() + 1));
        for (k, seed) in extra.enumerate() {
            let Ok(root) = newton_root(seed, z0, roots.len() + k + 1) else {
                // A scan bracket may straddle a zero curve with no root
                // nearby; failures here are not fatal.
                continue;
            };
            if inside(root) && roots.iter().all(|&r| (root - r).norm() > DISTINCT_TOL) {
                roots.push(root);
            }
        }
    }

    roots.sort_by(|a, b| a.re.total_cmp(&b.re));
    roots.truncate(n_max);

    // Every root must satisfy the residual contract when re-checked cold.
    for (i, &root) in roots.iter().enumerate() {
        let res = match_eval(root, z0).residual.norm();
        if !(res < RESIDUAL_TOL) {
            return Err(Error::Convergence {
                index: i + 1,
                iterations: MAX_ITER,
                last_re: root.re,
                last_im: root.im,
                residual: res,
            });
        }
    }
    Ok(roots)
}

fn build_resonance(index_n: usize, lambda: Complex64, scales: &ScaleSet) -> Resonance {
    let consts = scales.consts;
    let eps = lambda * scales.eps0;
    let gamma = -2.0 * scales.eps0 * lambda.im;
    let tau = consts.hbar / gamma; // +inf when the width underflows
    // mu_n = mu0 - eps_n M R^2/(mu0 hbar^2); with mu0 = M v R/hbar the
    // prefactor reduces to R/(v hbar) = v/(a hbar), a = v^2/R.
    let mu = scales.mu0 - eps * scales.velocity / (scales.accel_a * consts.hbar);
    let residual = match_eval(lambda, scales.z0).residual.norm();
    Resonance {
        index_n,
        lambda,
        energy_eps: eps,
        width_gamma: gamma,
        lifetime_tau: tau,
        ang_momentum_mu: mu,
        scales: *scales,
        residual,
    }
}

/// Solve for the quasi-stationary states under a physical scale set.
pub fn solve_resonances(scales: &ScaleSet, n_max: usize) -> Result<Vec<Resonance>> {
    let lambdas = solve_lambdas(scales.z0, n_max)?;
    Ok(lambdas
        .into_iter()
        .enumerate()
        .map(|(i, l)| build_resonance(i + 1, l, scales))
        .collect())
}

/// Velocity at which the n-th state appears at the barrier top:
/// vc^n = [2 R^2 U0^3 / (hbar^2 M)]^{1/4} (3 pi/2 (n - 3/4))^{-1/2}.
/// Scales as U0^{3/4}, and vc(n)/vc(1) = (4n-3)^{-1/2}.
pub fn critical_velocity_semiclassical(
    n: usize,
    mirror: &MirrorSpec,
    consts: &PhysicalConstants,
) -> f64 {
    assert!(n >= 1, "state index must be positive");
    let u0 = mirror.fermi_potential_j(consts);
    let base = 2.0 * mirror.radius * mirror.radius * u0.powi(3)
        / (consts.hbar * consts.hbar * consts.neutron_mass);
    let phase = 1.5 * std::f64::consts::PI * (n as f64 - 0.75);
    base.powf(0.25) / phase.sqrt()
}

/// One row of a lifetime table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LifetimeRow {
    pub velocity: f64,
    pub index_n: usize,
    /// None when the state does not exist at this velocity.
    pub lifetime_tau: Option<f64>,
    /// Time the neutron spends over the mirror, L/v.
    pub time_of_flight: f64,
}

/// Lifetimes over a velocity grid, with per-point failures recorded.
#[derive(Debug, Clone)]
pub struct LifetimeTable {
    pub rows: Vec<LifetimeRow>,
    /// (velocity, message) for grid points whose solve failed.
    pub failures: Vec<(f64, String)>,
}

/// Lifetimes of the lowest `n_states` states across a velocity grid,
/// together with the flight time L/v. Missing states get None, and a grid
/// point whose solve fails is recorded rather than aborting the table.
pub fn lifetime_curve(
    mirror: &MirrorSpec,
    v_grid: &[f64],
    n_states: usize,
    consts: &PhysicalConstants,
) -> Result<LifetimeTable> {
    if v_grid.is_empty() {
        return Err(Error::Validation {
            field: "v_grid",
            message: "must not be empty".into(),
        });
    }
    if v_grid.windows(2).any(|w| w[0] >= w[1]) || v_grid[0] <= 0.0 {
        return Err(Error::Validation {
            field: "v_grid",
            message: "must be strictly ascending and positive".into(),
        });
    }
    let mut rows = Vec::with_capacity(v_grid.len() * n_states);
    let mut failures = Vec::new();
    for &v in v_grid {
        let t_flight = mirror.length / v;
        let beam = crate::scales::BeamSpec { velocity: v };
        let solved = crate::scales::make_scales(&beam, mirror, consts)
            .and_then(|s| solve_resonances(&s, n_states));
        match solved {
            Ok(states) => {
                for n in 1..=n_states {
                    rows.push(LifetimeRow {
                        velocity: v,
                        index_n: n,
                        lifetime_tau: states
                            .iter()
                            .find(|r| r.index_n == n)
                            .map(|r| r.lifetime_tau),
                        time_of_flight: t_flight,
                    });
                }
            }
            Err(e) => {
                failures.push((v, e.to_string()));
                for n in 1..=n_states {
                    rows.push(LifetimeRow {
                        velocity: v,
                        index_n: n,
                        lifetime_tau: None,
                        time_of_flight: t_flight,
                    });
                }
            }
        }
    }
    Ok(LifetimeTable { rows, failures })
}

/// Velocity where the lifetime of state n equals the flight time L/v,
/// located by bisection on ln(tau_n v / L) over [v_lo, v_hi].
pub fn lifetime_crossing(
    mirror: &MirrorSpec,
    n: usize,
    v_lo: f64,
    v_hi: f64,
    consts: &PhysicalConstants,
) -> Result<f64> {
    if !(v_lo > 0.0 && v_hi > v_lo) {
        return Err(Error::Validation {
            field: "v_lo/v_hi",
            message: format!("need 0 < v_lo < v_hi, got {v_lo}, {v_hi}"),
        });
    }
    let h = |v: f64| -> Result<f64> {
        let beam = crate::scales::BeamSpec { velocity: v };
        let scales = crate::scales::make_scales(&beam, mirror, consts)?;
        let states = solve_resonances(&scales, n)?;
        let state = states
            .iter()
            .find(|r| r.index_n == n)
            .ok_or(Error::EmptyStates)?;
        Ok((state.lifetime_tau * v / mirror.length).ln())
    };
    let (mut a, mut b) = (v_lo, v_hi);
    let (mut ha, hb) = (h(a)?, h(b)?);
    if ha.signum() == hb.signum() {
        return Err(Error::Validation {
            field: "v_lo/v_hi",
            message: format!(
                "lifetime/flight-time ratio does not change sign on [{v_lo}, {v_hi}]"
            ),
        });
    }
    for _ in 0..100 {
        let mid = 0.5 * (a + b);
        let hm = h(mid)?;
        if hm.signum() == ha.signum() {
            a = mid;
            ha = hm;
        } else {
            b = mid;
        }
        if b - a < 1e-6 * b {
            break;
        }
    }
    Ok(0.5 * (a + b))
}
