//! Brute-force cross-check of the resonance solver.
//!
//! Instead of Airy matching, integrate chi'' = (u(zeta) - lambda) chi
//! directly with a fixed-step Runge-Kutta scheme: outward from deep inside
//! the wall with a decaying WKB start, and inward from far outside with an
//! outgoing-wave WKB start.  A resonance is a lambda where the two branches
//! are proportional, i.e. their Wronskian at the mid-barrier matching point
//! vanishes.  Everything here is deliberately independent of the Airy code
//! path: different discretization, different boundary treatment, different
//! root iteration.
//!
//! Branch amplitudes span hundreds of decades under a thick barrier, so
//! every branch carries a base-two exponent alongside its f64 mantissas.
//! The exponent cancels in the normalized mismatch but is essential for the
//! root search: the normalized mismatch dips from O(1) to zero only inside
//! a window of width ~ exp(-2 integral kappa) around a deep resonance,
//! far too narrow for any iteration to find from a semiclassical seed.
//! The unnormalized Wronskian has no such cliff, so the secant iterates on
//! (mantissa, exponent) pairs of t1 - t2 instead.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::resonance::semiclassical_lambda;

/// Coarsest step the integrator accepts.
pub const MAX_STEP: f64 = 1e-3;

/// Discretization window for the two-sided integration, in units of l0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShootingGrid {
    /// Interior cut, inside the wall (negative).
    pub z_min: f64,
    /// Exterior cut, beyond the barrier (> z0 + 5 for the z0 in use).
    pub z_max: f64,
    /// Integration step.
    pub step: f64,
}

impl ShootingGrid {
    pub fn new(z_min: f64, z_max: f64, step: f64) -> Result<Self> {
        if !z_min.is_finite() || !z_max.is_finite() || z_min >= 0.0 || z_max <= 0.0 {
            return Err(Error::Grid(format!(
                "need z_min < 0 < z_max, got [{z_min}, {z_max}]"
            )));
        }
        if !step.is_finite() || step <= 0.0 || step > MAX_STEP {
            return Err(Error::Grid(format!(
                "step must lie in (0, {MAX_STEP}], got {step}"
            )));
        }
        Ok(Self { z_min, z_max, step })
    }

    /// A window sized for every state of a barrier of height z0: the wall
    /// cut sits below the deepest possible turning point by a 3 sqrt(z0)
    /// decay margin, the exterior cut 20 units past the barrier edge.
    pub fn for_barrier(z0: f64, step: f64) -> Result<Self> {
        if !z0.is_finite() || z0 <= 0.0 {
            return Err(Error::Grid(format!("barrier height must be > 0, got {z0}")));
        }
        Self::new(-(z0 + 3.0 * z0.sqrt() + 1.0), z0 + 20.0, step)
    }

    /// The window must cover the probe: wall cut below the turning point of
    /// Re(lambda) with decay margin, exterior cut well past the barrier.
    fn check_for(&self, z0: f64, lambda_re: f64) -> Result<()> {
        if self.z_max < z0 + 5.0 {
            return Err(Error::Grid(format!(
                "z_max = {} too close to the barrier edge; need at least z0 + 5 = {}",
                self.z_max,
                z0 + 5.0
            )));
        }
        let turn = lambda_re.max(0.0);
        let required = -(turn + 3.0 * turn.sqrt());
        if self.z_min > required {
            return Err(Error::Grid(format!(
                "z_min = {} not deep enough for Re(lambda) = {lambda_re}; need <= {required}",
                self.z_min
            )));
        }
        Ok(())
    }
}

/// One integration branch: chi and chi' mantissas on a shared power-of-two
/// exponent, so true chi = chi * 2^exp2.  Rescaling by exact powers of two
/// keeps the mantissa arithmetic bit-clean.
#[derive(Clone, Copy)]
struct Branch {
    chi: Complex64,
    chip: Complex64,
    exp2: i64,
}

impl Branch {
    fn renormalize(&mut self) {
        let m = self
            .chi
            .re
            .abs()
            .max(self.chi.im.abs())
            .max(self.chip.re.abs())
            .max(self.chip.im.abs());
        if m > 1e100 || (m > 0.0 && m < 1e-100) {
            let k = m.log2().round();
            let scale = f64::exp2(-k);
            self.chi *= scale;
            self.chip *= scale;
            self.exp2 += k as i64;
        }
    }
}

/// Integrate chi'' = (u(z) - lambda) chi over [a, b] (either direction)
/// with classic fixed-step fourth-order Runge-Kutta.  The step is shrunk so
/// the segment ends exactly on b; u must be smooth on the segment.
fn rk4_segment<U: Fn(f64) -> f64>(
    mut br: Branch,
    a: f64,
    b: f64,
    step: f64,
    u: U,
    lambda: Complex64,
) -> Branch {
    let span = b - a;
    let n = (span.abs() / step).ceil().max(1.0) as usize;
    let h = span / n as f64;
    let rhs = |z: f64, c: Complex64, cp: Complex64| -> (Complex64, Complex64) {
        (cp, (Complex64::new(u(z), 0.0) - lambda) * c)
    };
    for k in 0..n {
        let z = a + h * k as f64;
        let (chi, chip) = (br.chi, br.chip);
        let (k1, l1) = rhs(z, chi, chip);
        let (k2, l2) = rhs(z + 0.5 * h, chi + 0.5 * h * k1, chip + 0.5 * h * l1);
        let (k3, l3) = rhs(z + 0.5 * h, chi + 0.5 * h * k2, chip + 0.5 * h * l2);
        let (k4, l4) = rhs(z + h, chi + h * k3, chip + h * l3);
        br.chi += h / 6.0 * (k1 + 2.0 * (k2 + k3) + k4);
        br.chip += h / 6.0 * (l1 + 2.0 * (l2 + l3) + l4);
        br.renormalize();
    }
    br
}

/// The two cross products whose difference is the branch Wronskian at the
/// matching point, as mantissas on a shared exponent.
struct CrossProducts {
    t1: Complex64,
    t2: Complex64,
    exp2: i64,
}

fn shoot_products(lambda: Complex64, z0: f64, grid: &ShootingGrid) -> Result<CrossProducts> {
    if !z0.is_finite() || z0 <= 0.0 {
        return Err(Error::Grid(format!("barrier height must be > 0, got {z0}")));
    }
    if !lambda.re.is_finite() || !lambda.im.is_finite() {
        return Err(Error::Grid(format!("non-finite probe lambda {lambda}")));
    }
    grid.check_for(z0, lambda.re)?;
    let zm = 0.5 * z0;

    // interior branch: decaying WKB start deep inside the wall, where
    // u - lambda = -z_min - lambda and the physical solution grows toward
    // the well as exp(int kappa dz) / sqrt(kappa)
    let kappa = (Complex64::new(-grid.z_min, 0.0) - lambda).sqrt();
    let interior = Branch {
        chi: Complex64::new(1.0, 0.0),
        chip: kappa + 1.0 / (4.0 * kappa * kappa),
        exp2: 0,
    };
    let interior = rk4_segment(interior, grid.z_min, 0.0, grid.step, |z| -z, lambda);
    let interior = rk4_segment(interior, 0.0, zm, grid.step, |z| z0 - z, lambda);

    // exterior branch: outgoing WKB start far outside, where the local wave
    // number is k = sqrt(zeta - z0 + lambda) and chi ~ exp(+i int k)/sqrt(k)
    let k = (Complex64::new(grid.z_max - z0, 0.0) + lambda).sqrt();
    let exterior = Branch {
        chi: Complex64::new(1.0, 0.0),
        chip: Complex64::i() * k - 1.0 / (4.0 * k * k),
        exp2: 0,
    };
    let exterior = rk4_segment(exterior, grid.z_max, zm, grid.step, |z| z0 - z, lambda);

    let mut t1 = interior.chip * exterior.chi;
    let mut t2 = interior.chi * exterior.chip;
    let mut exp2 = interior.exp2 + exterior.exp2;
    // pull the product mantissas back to order one so that downstream
    // complex arithmetic (norms, divisions) cannot overflow
    let m = t1
        .re
        .abs()
        .max(t1.im.abs())
        .max(t2.re.abs())
        .max(t2.im.abs());
    if !m.is_finite() {
        return Err(Error::Grid(
            "branch products lost finiteness during integration".into(),
        ));
    }
    if m > 0.0 {
        let k = m.log2().round();
        let scale = f64::exp2(-k);
        t1 *= scale;
        t2 *= scale;
        exp2 += k as i64;
    }
    Ok(CrossProducts { t1, t2, exp2 })
}

/// Wronskian mismatch of the interior and exterior branches at the
/// mid-barrier point zeta = z0/2, normalized by the larger cross product:
/// (chi_i' chi_e - chi_i chi_e') / max(|chi_i' chi_e|, |chi_i chi_e'|).
/// Zero exactly at a resonance; the shared renormalization exponent of the
/// branches cancels in the ratio.
pub fn shoot_mismatch(lambda: Complex64, z0: f64, grid: &ShootingGrid) -> Result<Complex64> {
    let p = shoot_products(lambda, z0, grid)?;
    let scale = p.t1.norm().max(p.t2.norm());
    if !(scale > 0.0) || !scale.is_finite() {
        return Err(Error::Grid(format!(
            "branch products degenerate at the matching point (scale = {scale})"
        )));
    }
    Ok((p.t1 - p.t2) / scale)
}

/// Eigenvalues found by the shooting integrator alone.
#[derive(Debug, Clone)]
pub struct OracleOutcome {
    /// Converged eigenvalues, sorted by real part.
    pub roots: Vec<Complex64>,
    /// (state index, reason) for seeds that failed to converge.
    pub failures: Vec<(usize, String)>,
}

/// Secant iteration on the unnormalized Wronskian t1 - t2, carried as
/// (mantissa, exponent) pairs.  The exponent alignment below keeps every
/// quotient in f64 range even when |t| spans thousands of powers of two.
fn secant_root(
    index: usize,
    seed: Complex64,
    z0: f64,
    grid: &ShootingGrid,
) -> Result<Complex64> {
    let eval = |x: Complex64| -> Result<(Complex64, i64)> {
        let p = shoot_products(x, z0, grid)?;
        Ok((p.t1 - p.t2, p.exp2))
    };
    let mut x0 = seed;
    let mut x1 = seed + Complex64::new(1e-4, -1e-4);
    let (mut m0, mut e0) = eval(x0)?;
    let (mut m1, mut e1) = eval(x1)?;
    for iteration in 0..80 {
        // align both values on the larger exponent; the tiny one may flush
        // to zero, which is the correct limit
        let e = e0.max(e1);
        let a0 = m0 * f64::exp2((e0 - e) as f64);
        let a1 = m1 * f64::exp2((e1 - e) as f64);
        let d = a1 - a0;
        if d.norm() == 0.0 {
            return Err(Error::Convergence {
                index,
                iterations: iteration,
                last_re: x1.re,
                last_im: x1.im,
                residual: a1.norm(),
            });
        }
        let mut delta = -a1 * (x1 - x0) / d;
        if !delta.re.is_finite() || !delta.im.is_finite() {
            return Err(Error::Convergence {
                index,
                iterations: iteration,
                last_re: x1.re,
                last_im: x1.im,
                residual: a1.norm(),
            });
        }
        if delta.norm() > 0.5 {
            delta *= 0.5 / delta.norm();
        }
        let x2 = x1 + delta;
        if x2.re <= 0.0 || x2.re >= z0 + 1.0 || x2.im > 0.5 || x2.im < -2.0 {
            return Err(Error::Convergence {
                index,
                iterations: iteration,
                last_re: x2.re,
                last_im: x2.im,
                residual: a1.norm(),
            });
        }
        let (m2, e2) = eval(x2)?;
        x0 = x1;
        m0 = m1;
        e0 = e1;
        x1 = x2;
        m1 = m2;
        e1 = e2;
        if delta.norm() < 1e-11 * x1.norm().max(1.0) {
            return Ok(x1);
        }
    }
    Err(Error::Convergence {
        index,
        iterations: 80,
        last_re: x1.re,
        last_im: x1.im,
        residual: m1.norm(),
    })
}

/// Locate the eigenvalues of a barrier of height z0 by complex secant
/// iteration on the shooting Wronskian, seeded from the semiclassical
/// estimates.  Per-seed failures are reported, not fatal.  One extra probe
/// just below the barrier top checks for a state the semiclassical ladder
/// misses; it is silently dropped when it lands on a known root.
pub fn oracle_resonances(z0: f64, n_max: usize, grid: &ShootingGrid) -> Result<OracleOutcome> {
    if !z0.is_finite() || z0 <= 0.0 {
        return Err(Error::Grid(format!("barrier height must be > 0, got {z0}")));
    }
    if n_max == 0 {
        return Err(Error::Validation {
            field: "n_max",
            message: "need at least one state".into(),
        });
    }
    let mut roots: Vec<Complex64> = Vec::new();
    let mut failures = Vec::new();
    for n in 1..=n_max {
        let est = semiclassical_lambda(n, z0, 1.0);
        if est.valid {
            let seed = Complex64::new(
                est.lambda_estimate,
                -(0.5 * est.gamma_estimate).max(1e-12),
            );
            match secant_root(n, seed, z0, grid) {
                Ok(root) => {
                    if roots.iter().any(|r| (r - root).norm() < 1e-6) {
                        failures.push((n, "converged onto a previously found root".into()));
                    } else {
                        roots.push(root);
                    }
                }
                Err(e) => failures.push((n, e.to_string())),
            }
            continue;
        }
        // The hard-wall ladder has climbed past the barrier top, but one
        // more genuine state can hide just below the edge (the barrier
        // correction pulls levels down by about (pi/2)/sqrt(z0)).  Probe
        // for it; a probe landing on a known root or diverging just means
        // no such state exists.
        if est.lambda_estimate < z0 + 2.0 {
            let probes = [
                z0 - std::f64::consts::FRAC_PI_2 / z0.sqrt(),
                z0 - 0.05,
            ];
            for probe in probes {
                if probe <= 0.0 {
                    continue;
                }
                if let Ok(root) = secant_root(n, Complex64::new(probe, -0.05), z0, grid) {
                    if !roots.iter().any(|r| (r - root).norm() < 1e-6) {
                        roots.push(root);
                        break;
                    }
                }
            }
        }
        break;
    }
    roots.sort_by(|a, b| a.re.total_cmp(&b.re));
    Ok(OracleOutcome { roots, failures })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::resonance::solve_lambdas;

    #[test]
    fn grid_validation() {
        assert!(ShootingGrid::new(-20.0, 30.0, 1e-3).is_ok());
        assert!(ShootingGrid::new(1.0, 30.0, 1e-3).is_err());
        assert!(ShootingGrid::new(-20.0, 30.0, 2e-3).is_err());
        assert!(ShootingGrid::new(-20.0, 30.0, 0.0).is_err());
        let g = ShootingGrid::new(-4.0, 30.0, 1e-3).unwrap();
        // z_min = -4 is not below the turning point of a lambda ~ 9 state
        assert!(matches!(
            shoot_mismatch(Complex64::new(9.0, 0.0), 10.0, &g),
            Err(Error::Grid(_))
        ));
        let g2 = ShootingGrid::new(-20.0, 12.0, 1e-3).unwrap();
        assert!(matches!(
            shoot_mismatch(Complex64::new(2.0, 0.0), 10.0, &g2),
            Err(Error::Grid(_))
        ));
    }

    #[test]
    fn mismatch_small_at_resonances() {
        // At every Airy-solver root except the deepest, the normalized
        // mismatch probes below 1e-4.  The deepest state sits in a cliff so
        // steep (the Wronskian climbs like exp(2 int kappa) per unit
        // lambda) that the solver's own ~1e-11 rounding already reads back
        // as O(0.1); its cross-check is the root-agreement test below.
        let z0 = 10.0;
        let roots = solve_lambdas(z0, 8).unwrap();
        let grid = ShootingGrid::for_barrier(z0, 1e-3).unwrap();
        for &r in &roots[1..] {
            let m = shoot_mismatch(r, z0, &grid).unwrap().norm();
            assert!(m < 1e-4, "mismatch {m} at {r}");
        }
    }

    #[test]
    fn mismatch_large_off_resonance() {
        let z0 = 10.0;
        let roots = solve_lambdas(z0, 8).unwrap();
        let grid = ShootingGrid::for_barrier(z0, 1e-3).unwrap();
        for frac in [0.25, 0.5, 0.75] {
            let probe = roots[0] * (1.0 - frac) + roots[1] * frac;
            let m = shoot_mismatch(probe, z0, &grid).unwrap().norm();
            assert!(m > 1e-1, "expected off-resonance mismatch, got {m}");
        }
    }

    #[test]
    fn deepest_state_agrees_through_the_cliff() {
        // The unnormalized-Wronskian secant walks into the deep state's
        // narrow zero even though the normalized mismatch there looks
        // order-one from the solver root's distance.
        let z0 = 10.0;
        let grid = ShootingGrid::for_barrier(z0, 1e-3).unwrap();
        let solver = solve_lambdas(z0, 8).unwrap();
        let m = shoot_mismatch(solver[0], z0, &grid).unwrap().norm();
        assert!(m > 1e-2, "the deep-state cliff should read large, got {m}");
        let out = oracle_resonances(z0, 8, &grid).unwrap();
        assert!(out.failures.is_empty(), "{:?}", out.failures);
        assert!((out.roots[0].re - solver[0].re).abs() < 1e-9);
    }

    #[test]
    fn oracle_small_barrier_agrees() {
        let z0 = 4.0;
        let grid = ShootingGrid::for_barrier(z0, 1e-3).unwrap();
        let out = oracle_resonances(z0, 8, &grid).unwrap();
        assert!(out.failures.is_empty(), "{:?}", out.failures);
        let solver = solve_lambdas(z0, 8).unwrap();
        assert_eq!(out.roots.len(), solver.len());
        for (o, s) in out.roots.iter().zip(&solver) {
            assert!((o.re - s.re).abs() / s.re < 2e-6);
            assert!((o.im - s.im).abs() / s.im.abs() < 1e-4);
        }
    }

    #[test]
    fn tall_barrier_approaches_hard_wall() {
        // First eigenvalue drifts toward the first Airy zero as
        // a1 - 1/sqrt(z0), with the remainder shrinking like z0^{-3/2}
        let a1 = 2.338107410459767;
        let mut gaps = Vec::new();
        for z0 in [100.0, 400.0] {
            let grid = ShootingGrid::new(-9.0, z0 + 20.0, 1e-3).unwrap();
            let seed = Complex64::new(a1 - 1.0 / z0.sqrt(), -1e-6);
            let root = secant_root(1, seed, z0, &grid).unwrap();
            let gap = a1 - root.re;
            let expected = 1.0 / z0.sqrt();
            assert!(
                (gap - expected).abs() < 0.05 * expected,
                "z0 = {z0}: gap {gap} vs {expected}"
            );
            assert!(root.im.abs() < 1e-12);
            gaps.push(gap);
        }
        assert!(gaps[1] < gaps[0]);
    }

    #[test]
    fn oracle_input_validation() {
        let grid = ShootingGrid::for_barrier(10.0, 1e-3).unwrap();
        assert!(matches!(
            oracle_resonances(10.0, 0, &grid),
            Err(Error::Validation { .. })
        ));
        assert!(matches!(
            oracle_resonances(-1.0, 4, &grid),
            Err(Error::Grid(_))
        ));
        assert!(matches!(
            shoot_mismatch(Complex64::new(f64::NAN, 0.0), 10.0, &grid),
            Err(Error::Grid(_))
        ));
    }
}
