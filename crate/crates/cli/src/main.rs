//! Command-line front end for the curved-mirror neutron state solver.
//!
//! Subcommands compute characteristic scales, resonance tables, lifetime
//! curves, deflected-flux sweeps (smooth and rough), the barrier-height
//! scaling table, and a built-in verification battery.  All numeric output
//! is deterministic: fixed 12-significant-digit formatting, no RNG, and
//! atomic file writes.

mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use rayon::prelude::*;

use centrifugal_core::flux::assemble_flux_curve;
use centrifugal_core::resonance::state_count_estimate;
use centrifugal_core::rough::rough_flux_point;
use centrifugal_core::{
    airy_eval, dominant_steps, flux_point, ionization_width, lifetime_crossing, lifetime_curve,
    make_scales, oracle_resonances, potential_scaling_check, solve_lambdas, solve_resonances,
    step_contrasts, velocity_grid, BeamSpec, Complex64, Error as CoreError, FluxCurve, MirrorSpec,
    PhysicalConstants, PopulationModel, RoughnessSpec, ShootingGrid,
};

use config::{ConfigError, RunConfig};
use output::{plot_script, sig12, write_atomic, Csv};

const SCHEMAS: &str = "\
CSV column schemas (header row with units, 12 significant digits):
  scales        v_mps,R_cm,L_cm,U0_neV,l0_um,eps0_neV,z0,mu0,accel_mps2,E_neV,t_flight_s
  resonances    n,lambda_re,lambda_im,eps_neV,gamma_neV,tau_s,mu_re
  lifetimes     v_mps,n,tau_s,t_flight_s,exists
  sweep         v_mps,flux_rel,flux_abs_per_s
  rough-sweep   v_mps,rough_flux_rel,smooth_flux_rel
  scaling-check U0_neV,vc1_mps,Ef_J,P_per_s

Config keys (INI sections):
  [mirror]    R_cm, L_cm, U0_neV, material
  [beam]      v_mps, band_um, n_states
  [sweep]     v_min_mps, v_max_mps, points, v_ref_mps, U0_list_neV
  [roughness] br_nm, lr_um, Ef_neV
  [output]    path

Exit codes: 0 success, 2 configuration error, 3 convergence or
verification failure, 4 partial sweep (more than 10% of points failed).";

#[derive(Parser)]
#[command(
    name = "centrifugal",
    version,
    about = "Quasi-stationary neutron states near a curved mirror",
    after_help = SCHEMAS
)]
struct Cli {
    /// Path to the INI run configuration.
    #[arg(short, long, global = true)]
    config: Option<PathBuf>,

    /// Output CSV path (overrides [output] path; default prints CSV to stdout).
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Additionally write a plain-text plotting script for the CSV here.
    #[arg(long, global = true)]
    plot_script: Option<PathBuf>,

    /// Worker threads for sweeps.
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Print the characteristic scales for one mirror and velocity.
    Scales,
    /// Solve the quasi-stationary states at one velocity.
    Resonances,
    /// Tabulate state lifetimes against flight time over a velocity grid.
    Lifetimes,
    /// Sweep the deflected flux over velocity (smooth mirror).
    Sweep,
    /// Sweep the deflected flux over a rough mirror, with the smooth curve.
    RoughSweep,
    /// Tabulate the ionization rate against barrier height at each
    /// mirror's first critical velocity.
    ScalingCheck,
    /// Run the built-in cross-check battery; prints PASS/FAIL per case.
    Verify,
}

struct Failure {
    code: u8,
    message: String,
}

impl From<ConfigError> for Failure {
    fn from(e: ConfigError) -> Self {
        Failure {
            code: 2,
            message: format!("config error: {e}"),
        }
    }
}

impl From<CoreError> for Failure {
    fn from(e: CoreError) -> Self {
        let code = match e {
            CoreError::PartialSweep { .. } => 4,
            _ => 3,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(Failure {
                code: 2,
                message: "--threads must be at least 1".into(),
            });
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Failure {
                code: 3,
                message: format!("thread pool: {e}"),
            })?;
    }
    let consts = PhysicalConstants::codata();
    match cli.cmd {
        Cmd::Scales => cmd_scales(&cli, &consts),
        Cmd::Resonances => cmd_resonances(&cli, &consts),
        Cmd::Lifetimes => cmd_lifetimes(&cli, &consts),
        Cmd::Sweep => cmd_sweep(&cli, &consts),
        Cmd::RoughSweep => cmd_rough_sweep(&cli, &consts),
        Cmd::ScalingCheck => cmd_scaling_check(&cli, &consts),
        Cmd::Verify => cmd_verify(&consts),
    }
}

fn load_config(cli: &Cli) -> Result<RunConfig, Failure> {
    let Some(path) = &cli.config else {
        return Err(Failure {
            code: 2,
            message: "this subcommand needs --config <FILE>".into(),
        });
    };
    let text = std::fs::read_to_string(path).map_err(|e| Failure {
        code: 2,
        message: format!("cannot read {}: {e}", path.display()),
    })?;
    Ok(RunConfig::parse(&text)?)
}

/// Where the CSV goes: --out beats [output] path; stdout otherwise.
fn out_path(cli: &Cli, cfg: &RunConfig) -> Option<PathBuf> {
    cli.out.clone().or_else(|| cfg.path.clone())
}

/// What a subcommand's plot script should show.
struct PlotSpec {
    title: &'static str,
    xlabel: &'static str,
    ys: Vec<(usize, String)>,
}

/// Deliver a finished CSV and optional plot script; summary lines are
/// printed only in file mode so that stdout stays pure CSV otherwise.
fn deliver(
    cli: &Cli,
    cfg: &RunConfig,
    csv: Csv,
    summary: &[String],
    plot: Option<PlotSpec>,
) -> Result<(), Failure> {
    let text = csv.into_string();
    match out_path(cli, cfg) {
        Some(path) => {
            write_atomic(&path, &text).map_err(|e| Failure {
                code: 3,
                message: format!("cannot write {}: {e}", path.display()),
            })?;
            println!("wrote {}", path.display());
            for line in summary {
                println!("{line}");
            }
            if let Some(script_path) = &cli.plot_script {
                if let Some(spec) = plot {
                    let ys_ref: Vec<(usize, &str)> =
                        spec.ys.iter().map(|(c, l)| (*c, l.as_str())).collect();
                    let script = plot_script(&path, spec.title, (1, spec.xlabel), &ys_ref);
                    write_atomic(script_path, &script).map_err(|e| Failure {
                        code: 3,
                        message: format!("cannot write {}: {e}", script_path.display()),
                    })?;
                    println!("wrote {}", script_path.display());
                }
            }
        }
        None => {
            if cli.plot_script.is_some() {
                return Err(Failure {
                    code: 2,
                    message: "--plot-script needs a CSV file; set --out or [output] path".into(),
                });
            }
            print!("{text}");
        }
    }
    Ok(())
}

fn cmd_scales(cli: &Cli, consts: &PhysicalConstants) -> Result<(), Failure> {
    let cfg = load_config(cli)?;
    let mirror = cfg.mirror()?;
    let v = cfg.velocity()?;
    let beam = BeamSpec::new(v)?;
    let scales = make_scales(&beam, &mirror, consts)?;
    let mut csv = Csv::new("v_mps,R_cm,L_cm,U0_neV,l0_um,eps0_neV,z0,mu0,accel_mps2,E_neV,t_flight_s");
    csv.row(&[
        sig12(v),
        sig12(mirror.radius * 1e2),
        sig12(mirror.length * 1e2),
        sig12(mirror.fermi_potential_nev),
        sig12(scales.l0 * 1e6),
        sig12(consts.to_nev(scales.eps0)),
        sig12(scales.z0),
        sig12(scales.mu0),
        sig12(scales.accel_a),
        sig12(consts.to_nev(scales.energy_e)),
        sig12(mirror.length / v),
    ]);
    let summary = vec![
        format!(
            "{}: R = {} cm, L = {} cm, U0 = {} neV, v = {v} m/s",
            mirror.material,
            mirror.radius * 1e2,
            mirror.length * 1e2,
            mirror.fermi_potential_nev
        ),
        format!(
            "l0 = {} um, eps0 = {} neV, z0 = {}, mu0 = {}",
            sig12(scales.l0 * 1e6),
            sig12(consts.to_nev(scales.eps0)),
            sig12(scales.z0),
            sig12(scales.mu0)
        ),
    ];
    deliver(cli, &cfg, csv, &summary, None)
}

fn cmd_resonances(cli: &Cli, consts: &PhysicalConstants) -> Result<(), Failure> {
    let cfg = load_config(cli)?;
    let mirror = cfg.mirror()?;
    let v = cfg.velocity()?;
    let beam = BeamSpec::new(v)?;
    let scales = make_scales(&beam, &mirror, consts)?;
    let n_max = cfg.n_states.unwrap_or(12).min(32);
    let states = solve_resonances(&scales, n_max)?;
    let mut csv = Csv::new("n,lambda_re,lambda_im,eps_neV,gamma_neV,tau_s,mu_re");
    for s in &states {
        csv.row(&[
            s.index_n.to_string(),
            sig12(s.lambda.re),
            sig12(s.lambda.im),
            sig12(consts.to_nev(s.energy_eps.re)),
            sig12(consts.to_nev(s.width_gamma)),
            sig12(s.lifetime_tau),
            sig12(s.ang_momentum_mu.re),
        ]);
    }
    let summary = vec![format!(
        "{} quasi-stationary states at v = {v} m/s (z0 = {})",
        states.len(),
        sig12(scales.z0)
    )];
    deliver(cli, &cfg, csv, &summary, None)
}

fn cmd_lifetimes(cli: &Cli, consts: &PhysicalConstants) -> Result<(), Failure> {
    let cfg = load_config(cli)?;
    let mirror = cfg.mirror()?;
    let (lo, hi, points, _) = cfg.sweep_range()?;
    let grid = velocity_grid(lo, hi, points)?;
    let n_states = match cfg.n_states {
        Some(n) => n.min(32),
        None => {
            let scales = make_scales(&BeamSpec::new(lo)?, &mirror, consts)?;
            state_count_estimate(scales.z0).clamp(1, 32)
        }
    };
    let table = lifetime_curve(&mirror, &grid, n_states, consts)?;
    if table.failures.len() * 10 > grid.len() {
        return Err(CoreError::PartialSweep {
            failed: table.failures.len(),
            total: grid.len(),
        }
        .into());
    }
    let mut csv = Csv::new("v_mps,n,tau_s,t_flight_s,exists");
    for r in &table.rows {
        csv.row(&[
            sig12(r.velocity),
            r.index_n.to_string(),
            match r.lifetime_tau {
                Some(tau) => sig12(tau),
                None => "nan".into(),
            },
            sig12(r.time_of_flight),
            r.lifetime_tau.is_some().to_string(),
        ]);
    }
    let summary = vec![format!(
        "{} grid points, states 1..={n_states}, {} failed points",
        grid.len(),
        table.failures.len()
    )];
    let plot = Some(PlotSpec {
        title: "state lifetimes against flight time",
        xlabel: "v (m/s)",
        ys: vec![(3, "tau_s".to_string()), (4, "t_flight_s".to_string())],
    });
    deliver(cli, &cfg, csv, &summary, plot)
}

/// Parallel smooth sweep via the shared assembly path.
fn parallel_sweep(
    mirror: &MirrorSpec,
    grid: &[f64],
    v_ref: f64,
    model: &PopulationModel,
    consts: &PhysicalConstants,
) -> Result<FluxCurve, CoreError> {
    let points: Vec<(f64, centrifugal_core::Result<centrifugal_core::FluxPoint>)> = grid
        .par_iter()
        .map(|&v| (v, flux_point(mirror, v, model, consts)))
        .collect();
    assemble_flux_curve(points, v_ref)
}

fn parallel_rough_sweep(
    mirror: &MirrorSpec,
    spec: &RoughnessSpec,
    grid: &[f64],
    v_ref: f64,
    model: &PopulationModel,
    consts: &PhysicalConstants,
) -> Result<FluxCurve, CoreError> {
    let points: Vec<(f64, centrifugal_core::Result<centrifugal_core::FluxPoint>)> = grid
        .par_iter()
        .map(|&v| (v, rough_flux_point(mirror, v, spec, model, consts)))
        .collect();
    assemble_flux_curve(points, v_ref)
}

fn step_summary(curve: &FluxCurve) -> Vec<String> {
    let mut lines = vec![format!(
        "reference: v = {} m/s, flux = {} 1/s",
        sig12(curve.reference_velocity),
        sig12(curve.reference_flux)
    )];
    for s in dominant_steps(curve) {
        lines.push(format!(
            "step: v = {} m/s, drop factor = {}, slope = {} s/m",
            sig12(s.peak_velocity),
            sig12(s.factor),
            sig12(s.peak_slope)
        ));
    }
    lines
}

fn cmd_sweep(cli: &Cli, consts: &PhysicalConstants) -> Result<(), Failure> {
    let cfg = load_config(cli)?;
    let mirror = cfg.mirror()?;
    let (lo, hi, points, v_ref) = cfg.sweep_range()?;
    let grid = velocity_grid(lo, hi, points)?;
    let model = cfg.population();
    let curve = parallel_sweep(&mirror, &grid, v_ref, &model, consts)?;
    let mut csv = Csv::new("v_mps,flux_rel,flux_abs_per_s");
    for (&v, &f) in curve.velocity_grid.iter().zip(&curve.relative_flux) {
        csv.row(&[sig12(v), sig12(f), sig12(f * curve.reference_flux)]);
    }
    let summary = step_summary(&curve);
    let plot = Some(PlotSpec {
        title: "deflected flux",
        xlabel: "v (m/s)",
        ys: vec![(2, "flux_rel".to_string())],
    });
    deliver(cli, &cfg, csv, &summary, plot)
}

fn cmd_rough_sweep(cli: &Cli, consts: &PhysicalConstants) -> Result<(), Failure> {
    let cfg = load_config(cli)?;
    let mirror = cfg.mirror()?;
    let (lo, hi, points, v_ref) = cfg.sweep_range()?;
    let grid = velocity_grid(lo, hi, points)?;
    let model = cfg.population();
    let spec = cfg.roughness(consts)?;
    let smooth = parallel_sweep(&mirror, &grid, v_ref, &model, consts)?;
    let rough = parallel_rough_sweep(&mirror, &spec, &grid, v_ref, &model, consts)?;
    let mut csv = Csv::new("v_mps,rough_flux_rel,smooth_flux_rel");
    for i in 0..grid.len() {
        csv.row(&[
            sig12(grid[i]),
            sig12(rough.relative_flux[i]),
            sig12(smooth.relative_flux[i]),
        ]);
    }
    let mut summary = step_summary(&smooth);
    match step_contrasts(&smooth, &rough) {
        Ok(contrasts) => {
            for (i, c) in contrasts.iter().enumerate() {
                summary.push(format!("contrast at step {}: {}", i + 1, sig12(*c)));
            }
        }
        Err(e) => summary.push(format!("contrast unavailable: {e}")),
    }
    let plot = Some(PlotSpec {
        title: "deflected flux, rough against smooth",
        xlabel: "v (m/s)",
        ys: vec![
            (2, "rough_flux_rel".to_string()),
            (3, "smooth_flux_rel".to_string()),
        ],
    });
    deliver(cli, &cfg, csv, &summary, plot)
}

fn cmd_scaling_check(cli: &Cli, consts: &PhysicalConstants) -> Result<(), Failure> {
    let cfg = load_config(cli)?;
    let template = cfg.mirror()?;
    let default_list = vec![30.0, 60.0, 100.0, 150.0, 300.0];
    let list = cfg.u0_list_nev.clone().unwrap_or(default_list);
    let check = potential_scaling_check(&list, &template, consts)?;
    let mut csv = Csv::new("U0_neV,vc1_mps,Ef_J,P_per_s");
    for r in &check.rows {
        csv.row(&[
            sig12(r.u0_nev),
            sig12(r.critical_velocity),
            sig12(r.final_energy),
            sig12(r.rate),
        ]);
    }
    let summary = vec![format!(
        "log-log slope of P against U0: fitted = {}, analytic = {}",
        sig12(check.fitted_slope),
        sig12(check.analytic_slope)
    )];
    let plot = Some(PlotSpec {
        title: "ionization rate against barrier height",
        xlabel: "U0 (neV)",
        ys: vec![(4, "P_per_s".to_string())],
    });
    deliver(cli, &cfg, csv, &summary, plot)
}

// ---------------------------------------------------------------------------
// verify: built-in cross-check battery

struct Case {
    name: &'static str,
    run: fn(&PhysicalConstants) -> Result<(), String>,
}

fn check(cond: bool, detail: String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(detail)
    }
}

fn verify_scale_identities(consts: &PhysicalConstants) -> Result<(), String> {
    let mirror = MirrorSpec::sapphire();
    let scales = make_scales(&BeamSpec::new(1000.0).unwrap(), &mirror, consts)
        .map_err(|e| e.to_string())?;
    let u0 = mirror.fermi_potential_j(consts);
    let r1 = (scales.z0 * scales.eps0 - u0).abs() / u0;
    check(r1 < 1e-12, format!("z0*eps0 vs U0 off by {r1:.2e}"))?;
    let eps_from_l0 =
        consts.hbar * consts.hbar / (2.0 * consts.neutron_mass * scales.l0 * scales.l0);
    let r2 = (eps_from_l0 - scales.eps0).abs() / scales.eps0;
    check(r2 < 1e-12, format!("eps0 vs hbar^2/2Ml0^2 off by {r2:.2e}"))?;
    let mu = consts.neutron_mass * 1000.0 * mirror.radius / consts.hbar;
    let r3 = (mu - scales.mu0).abs() / mu;
    check(r3 < 1e-12, format!("mu0 off by {r3:.2e}"))
}

fn verify_airy_origin(_: &PhysicalConstants) -> Result<(), String> {
    let q = airy_eval(Complex64::new(0.0, 0.0)).map_err(|e| e.to_string())?;
    for (got, want, name) in [
        (q.ai.re, 0.355_028_053_887_817_24, "Ai(0)"),
        (q.ai_prime.re, -0.258_819_403_792_806_8, "Ai'(0)"),
        (q.bi.re, 0.614_926_627_446_000_74, "Bi(0)"),
        (q.bi_prime.re, 0.448_288_357_353_826_36, "Bi'(0)"),
    ] {
        check(
            (got - want).abs() < 1e-12,
            format!("{name} = {got:.15}, want {want:.15}"),
        )?;
    }
    Ok(())
}

fn verify_airy_wronskian(_: &PhysicalConstants) -> Result<(), String> {
    // deterministic lattice: golden-angle spiral over the |z| <= 20 disc
    let golden = 0.618_033_988_749_894_9_f64;
    for k in 0..100 {
        let r = 20.0 * ((k as f64 + 0.5) / 100.0).sqrt();
        let th = std::f64::consts::TAU * ((k as f64 * golden) % 1.0);
        let z = Complex64::from_polar(r, th);
        let q = airy_eval(z).map_err(|e| e.to_string())?;
        let res = q.wronskian_residual();
        check(res < 1e-10, format!("residual {res:.2e} at z = {z}"))?;
    }
    Ok(())
}

fn verify_spectrum_z0_10(_: &PhysicalConstants) -> Result<(), String> {
    let roots = solve_lambdas(10.0, 16).map_err(|e| e.to_string())?;
    check(roots.len() == 7, format!("state count {} != 7", roots.len()))?;
    for (got, want) in roots.iter().zip([2.0079235361172171, 3.7445362787075140]) {
        let dev = (got.re - want).abs() / want;
        check(dev < 1e-8, format!("level {want:.6} off by {dev:.2e}"))?;
        check(got.im <= 0.0, format!("width sign at {got}"))?;
    }
    Ok(())
}

fn verify_oracle_agreement(z0: f64) -> Result<(), String> {
    let grid = ShootingGrid::for_barrier(z0, 1e-3).map_err(|e| e.to_string())?;
    let outcome = oracle_resonances(z0, 16, &grid).map_err(|e| e.to_string())?;
    check(
        outcome.failures.is_empty(),
        format!("oracle failures: {:?}", outcome.failures),
    )?;
    let solver = solve_lambdas(z0, 16).map_err(|e| e.to_string())?;
    check(
        solver.len() == outcome.roots.len(),
        format!("counts {} vs {}", solver.len(), outcome.roots.len()),
    )?;
    for (s, o) in solver.iter().zip(&outcome.roots) {
        let dre = (s.re - o.re).abs() / s.re;
        check(dre < 1e-4, format!("Re off by {dre:.2e} at {s}"))?;
        if s.im.abs() > 1e-16 {
            let dim = (s.im - o.im).abs() / s.im.abs();
            check(dim < 1e-2, format!("Im off by {dim:.2e} at {s}"))?;
        }
    }
    Ok(())
}

fn verify_hard_wall(_: &PhysicalConstants) -> Result<(), String> {
    let roots = solve_lambdas(1e4, 2).map_err(|e| e.to_string())?;
    check(roots.len() >= 2, format!("found {} states", roots.len()))?;
    let a1 = 2.338107410459767;
    let dev = (roots[0].re - a1).abs() / a1;
    check(dev < 1e-2, format!("first level off hard wall by {dev:.2e}"))?;
    check(
        roots[0].im.abs() < 1e-8,
        format!("first width {:.2e} not closed-channel small", roots[0].im),
    )
}

fn verify_steps_vs_lifetimes(consts: &PhysicalConstants) -> Result<(), String> {
    let mirror = MirrorSpec::sapphire();
    let grid = velocity_grid(800.0, 2000.0, 61).map_err(|e| e.to_string())?;
    let curve = parallel_sweep(&mirror, &grid, 1200.0, &PopulationModel::Equal, consts)
        .map_err(|e| e.to_string())?;
    let dom = dominant_steps(&curve);
    check(dom.len() == 2, format!("{} dominant steps, want 2", dom.len()))?;
    let v1 = lifetime_crossing(&mirror, 1, 800.0, 2500.0, consts).map_err(|e| e.to_string())?;
    let v2 = lifetime_crossing(&mirror, 2, 800.0, 2200.0, consts).map_err(|e| e.to_string())?;
    let d1 = (dom[0].peak_velocity - v1).abs() / v1;
    let d2 = (dom[1].peak_velocity - v2).abs() / v2;
    check(d1 < 0.15, format!("step 1 at {} vs crossing {v1:.1}", dom[0].peak_velocity))?;
    check(d2 < 0.15, format!("step 2 at {} vs crossing {v2:.1}", dom[1].peak_velocity))
}

fn verify_roughness_quadratic(consts: &PhysicalConstants) -> Result<(), String> {
    let mirror = MirrorSpec::sapphire();
    let scales = make_scales(&BeamSpec::new(1000.0).unwrap(), &mirror, consts)
        .map_err(|e| e.to_string())?;
    let states = solve_resonances(&scales, 8).map_err(|e| e.to_string())?;
    let spec1 = RoughnessSpec::new(1e-9, 5e-7, centrifugal_core::MeanFinalEnergy::Auto)
        .map_err(|e| e.to_string())?;
    let spec2 = RoughnessSpec::new(2e-9, 5e-7, centrifugal_core::MeanFinalEnergy::Auto)
        .map_err(|e| e.to_string())?;
    let w1 = ionization_width(&states[0], &spec1, consts).map_err(|e| e.to_string())?;
    let w2 = ionization_width(&states[0], &spec2, consts).map_err(|e| e.to_string())?;
    check(
        w2 == 4.0 * w1,
        format!("amplitude doubling gave {w2:.6e} vs 4 x {w1:.6e}"),
    )
}

fn verify_scaling_slope(consts: &PhysicalConstants) -> Result<(), String> {
    let check_result =
        potential_scaling_check(&[30.0, 60.0, 100.0, 150.0, 300.0], &MirrorSpec::sapphire(), consts)
            .map_err(|e| e.to_string())?;
    let dev = (check_result.fitted_slope - 17.0 / 8.0).abs();
    check(dev < 1e-9, format!("slope {} vs 17/8", check_result.fitted_slope))
}

fn cmd_verify(consts: &PhysicalConstants) -> Result<(), Failure> {
    let cases: Vec<Case> = vec![
        Case { name: "scale-identities", run: verify_scale_identities },
        Case { name: "airy-origin-values", run: verify_airy_origin },
        Case { name: "airy-wronskian-lattice", run: verify_airy_wronskian },
        Case { name: "solver-spectrum-z0-10", run: verify_spectrum_z0_10 },
        Case { name: "oracle-agreement-z0-4", run: |_| verify_oracle_agreement(4.0) },
        Case { name: "oracle-agreement-z0-7", run: |_| verify_oracle_agreement(7.0) },
        Case { name: "hard-wall-limit", run: verify_hard_wall },
        Case { name: "flux-steps-vs-lifetimes", run: verify_steps_vs_lifetimes },
        Case { name: "roughness-quadratic-law", run: verify_roughness_quadratic },
        Case { name: "scaling-slope-17-8", run: verify_scaling_slope },
    ];
    let mut failed = 0usize;
    for case in &cases {
        match (case.run)(consts) {
            Ok(()) => println!("PASS {}", case.name),
            Err(detail) => {
                failed += 1;
                println!("FAIL {}: {detail}", case.name);
            }
        }
    }
    if failed > 0 {
        return Err(Failure {
            code: 3,
            message: format!("{failed} of {} verification cases failed", cases.len()),
        });
    }
    println!("all {} cases passed", cases.len());
    Ok(())
}
