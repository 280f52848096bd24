use std::path::Path;
use std::time::Instant;

use pn_core::dynamics::{run_dynamics, DynamicsOptions, DynamicsState, DynamicsTrace};
use pn_core::elastic::{extend_to_half_planes, stress_field, trace_stress, YLevels};
use pn_core::energy::{energy_breakdown, misfit_energy, YQuadrature};
use pn_core::perturb::Recipe;
use pn_core::static_solver::{
    burgers_density, center_profile, decay_coefficients, residual, solve_static, SolveOptions,
};
use pn_core::validation::{log_divergence, run_all, Context, ValidationConfig};
use pn_core::{Background, Grid1D, PhysParams, PotentialSpec, Profile, TablePotential};
use serde_json::json;

use crate::config::{BumpShape, InitKind, PotentialKind, RunConfig};
use crate::error::CliError;
use crate::output::OutputDir;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    SolveStatic,
    Extend,
    Energy,
    Dynamics,
    Validate,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::SolveStatic => "solve-static",
            Command::Extend => "extend",
            Command::Energy => "energy",
            Command::Dynamics => "dynamics",
            Command::Validate => "validate",
        }
    }
}

/// Outcome of a command that ran to completion.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Success,
    ChecksFailed,
}

struct Setup {
    p: PhysParams,
    grid: Grid1D,
    spec: PotentialSpec,
}

fn setup(cfg: &RunConfig) -> Result<Setup, CliError> {
    let p = cfg.params()?;
    let grid = Grid1D::new(cfg.l_over_zeta * p.zeta(), cfg.n)?;
    let spec = match cfg.potential {
        PotentialKind::Frenkel => PotentialSpec::frenkel(p),
        PotentialKind::Table => PotentialSpec::Table(TablePotential::from_csv(Path::new(&cfg.potential_table), p.b())?),
    };
    Ok(Setup { p, grid, spec })
}

/// Re-express a profile against the closed-form background centered at x = 0.
fn rebase(s: &Setup, u1: &[f64]) -> Result<Profile, CliError> {
    let bg = Background {
        zeta_bg: s.p.zeta(),
        x0: 0.0,
    };
    Ok(Profile::from_u1(&s.grid, s.p, Some(bg), u1)?)
}

fn read_profile(s: &Setup, path: &Path) -> Result<Profile, CliError> {
    let io = |e: csv::Error| CliError::io(path, e);
    let mut rdr = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(io)?;
    let headers = rdr.headers().map_err(io)?.clone();
    let col = |name: &str| {
        headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| CliError::io(path, format!("missing column {name}")))
    };
    let (cx, cu) = (col("x")?, col("u1")?);
    let mut u1 = Vec::with_capacity(s.grid.len());
    for (j, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(io)?;
        let get = |c: usize| {
            rec.get(c)
                .and_then(|v| v.parse::<f64>().ok())
                .ok_or_else(|| CliError::io(path, format!("bad number in row {}", j + 1)))
        };
        if j >= s.grid.len() || (get(cx)? - s.grid.node(j)).abs() > 1e-9 * s.grid.half_length() {
            return Err(CliError::io(path, "x column does not match the configured grid"));
        }
        u1.push(get(cu)?);
    }
    if u1.len() != s.grid.len() {
        return Err(CliError::io(path, format!("expected {} rows, found {}", s.grid.len(), u1.len())));
    }
    rebase(s, &u1)
}

struct Solved {
    profile: Profile,
    info: serde_json::Value,
}

fn solve(cfg: &RunConfig, s: &Setup) -> Result<Solved, CliError> {
    let init = match cfg.init {
        InitKind::Tanh => Profile::tanh_guess(&s.grid, s.p),
        InitKind::Analytic => Profile::analytic(&s.grid, s.p),
    };
    let opts = SolveOptions {
        max_iters: cfg.max_iters,
        newton: cfg.newton,
        ..SolveOptions::for_params(&s.p)
    };
    let rep = solve_static(&init, &s.spec, &opts)?;
    let (shift, centered) = center_profile(&rep.profile)?;
    let profile = rebase(s, &centered.u1())?;
    let info = json!({
        "flow_steps": rep.flow_steps,
        "newton_steps": rep.newton_steps,
        "residual_linf": rep.residual.linf,
        "residual_l2": rep.residual.l2,
        "monotone": rep.monotone,
        "warnings": rep.warnings,
        "centering_shift": shift,
    });
    Ok(Solved { profile, info })
}

fn obtain_profile(cfg: &RunConfig, s: &Setup) -> Result<Profile, CliError> {
    if cfg.profile.is_empty() {
        Ok(solve(cfg, s)?.profile)
    } else {
        read_profile(s, Path::new(&cfg.profile))
    }
}

fn profile_rows(p: &Profile, spec: &PotentialSpec) -> Vec<Vec<f64>> {
    let (rho, _) = burgers_density(p);
    let r = residual(p, spec);
    let u = p.u1();
    p.grid()
        .nodes()
        .iter()
        .enumerate()
        .map(|(j, x)| vec![*x, u[j], p.v()[j], rho[j], r.samples[j]])
        .collect()
}

const PROFILE_COLUMNS: [(&str, &str); 5] = [("x", "d"), ("u1", "b"), ("v", "b"), ("rho", "b/d"), ("residual", "G b/d")];

fn solve_static_cmd(cfg: &RunConfig, out: &mut OutputDir) -> Result<Outcome, CliError> {
    let s = setup(cfg)?;
    let solved = solve(cfg, &s)?;
    let p = &solved.profile;
    out.csv("profile.csv", &PROFILE_COLUMNS, &profile_rows(p, &s.spec))?;
    let (c_plus, c_minus) = decay_coefficients(p)?;
    let (_, total) = burgers_density(p);
    let summary = json!({
        "solve": solved.info,
        "zeta": s.p.zeta(),
        "decay": { "c_plus": c_plus, "c_minus": c_minus },
        "misfit_energy": misfit_energy(p, &s.spec)?,
        "burgers_total": total,
    });
    out.json("summary.json", &summary)?;
    Ok(Outcome::Success)
}

fn extend_cmd(cfg: &RunConfig, out: &mut OutputDir) -> Result<Outcome, CliError> {
    let s = setup(cfg)?;
    let p = obtain_profile(cfg, &s)?;
    let z = s.p.zeta();
    let yl = YLevels::geometric(cfg.y_min_over_zeta * z, cfg.y_max_over_zeta * z, cfg.y_count, true)?;
    let disp = extend_to_half_planes(&p, &yl);
    let st = stress_field(&p, &yl);
    let x = s.grid.nodes();
    let cols: Vec<usize> = (0..x.len()).filter(|&j| x[j].abs() <= cfg.x_max_over_zeta * z).collect();
    let mut rows = vec![];
    for (i, &y) in yl.values().iter().enumerate() {
        for &j in &cols {
            let u = &st.upper;
            rows.push(vec![x[j], y, disp.u1_plus[[i, j]], disp.u2_plus[[i, j]], u.s11[[i, j]], u.s12[[i, j]], u.s22[[i, j]], u.s33[[i, j]]]);
        }
        for &j in &cols {
            let l = &st.lower;
            rows.push(vec![x[j], -y, disp.u1_minus[[i, j]], disp.u2_minus[[i, j]], l.s11[[i, j]], l.s12[[i, j]], l.s22[[i, j]], l.s33[[i, j]]]);
        }
    }
    out.csv(
        "fields.csv",
        &[("x", "d"), ("y", "d"), ("u1", "b"), ("u2", "b"), ("s11", "G b/d"), ("s12", "G b/d"), ("s22", "G b/d"), ("s33", "G b/d")],
        &rows,
    )?;
    let (s12, s22) = trace_stress(&p);
    let rows: Vec<Vec<f64>> = x.iter().enumerate().map(|(j, x)| vec![*x, s12[j], s22[j]]).collect();
    out.csv("traction.csv", &[("x", "d"), ("s12", "G b/d"), ("s22", "G b/d")], &rows)?;
    out.json("summary.json", &json!({ "mirror_defect": disp.mirror_defect(), "levels": yl.values() }))?;
    Ok(Outcome::Success)
}

fn energy_cmd(cfg: &RunConfig, out: &mut OutputDir) -> Result<Outcome, CliError> {
    let s = setup(cfg)?;
    let p = obtain_profile(cfg, &s)?;
    let z = s.p.zeta();
    let quad = YQuadrature::for_grid(&s.grid, z);
    let radii: Vec<f64> = cfg.box_radii_over_zeta.iter().map(|r| r * z).collect();
    let box_radius = radii.iter().cloned().fold(0.0, f64::max);
    let perts = cfg.recipe().generate(&s.grid, s.p.b(), z)?;
    let mut list = vec![];
    for (i, phi) in perts.iter().enumerate() {
        let e = energy_breakdown(phi, &p, &s.spec, &quad, box_radius)?;
        let gap = (e.e_hat_total - e.e_hat_gamma).abs() / e.e_hat_gamma.abs().max(1e-3 * s.p.energy_unit());
        list.push(json!({ "index": i, "breakdown": e, "relative_gap": gap }));
    }
    let (slope, r2, ebox) = log_divergence(&p, &radii)?;
    let rows: Vec<Vec<f64>> = radii.iter().zip(&ebox).map(|(r, e)| vec![*r, r.ln(), *e]).collect();
    out.csv("ebox.csv", &[("R", "d"), ("lnR", "1"), ("E_box", "G b^2/d")], &rows)?;
    out.json(
        "energy.json",
        &json!({
            "recipe": cfg.recipe(),
            "perturbations": list,
            "log_fit": { "slope": slope, "r_squared": r2 },
        }),
    )?;
    Ok(Outcome::Success)
}

fn bump(cfg: &RunConfig, s: &Setup) -> Vec<f64> {
    let w = cfg.bump_width_over_zeta * s.p.zeta();
    let a = cfg.bump_amplitude * s.p.b();
    s.grid
        .nodes()
        .iter()
        .map(|x| {
            let g = (-(x / w).powi(2)).exp();
            match cfg.bump_shape {
                BumpShape::Gaussian => a * g,
                BumpShape::Odd => a * x / w * g,
            }
        })
        .collect()
}

fn trace_rows(tr: &DynamicsTrace, skip_first: bool) -> Vec<Vec<f64>> {
    (usize::from(skip_first)..tr.times.len())
        .map(|i| vec![tr.times[i], tr.f_values[i], tr.q_values[i], tr.residual_norms[i], tr.dt_history[i]])
        .collect()
}

const TRACE_COLUMNS: [(&str, &str); 5] = [("t", "d/G"), ("F", "G b^2/d"), ("Q", "(G b/d)^2 d"), ("residual", "G b/d"), ("dt", "d/G")];

fn dynamics_cmd(cfg: &RunConfig, out: &mut OutputDir) -> Result<Outcome, CliError> {
    let s = setup(cfg)?;
    let reference = obtain_profile(cfg, &s)?;
    let v0: Vec<f64> = reference.v().iter().zip(bump(cfg, &s)).map(|(a, b)| a + b).collect();
    let mut state = DynamicsState::new(reference.with_v(v0)?, s.spec.clone()).with_reference(reference);
    let opts = DynamicsOptions {
        dt: cfg.dt,
        adapt: cfg.adapt,
        integrator: cfg.integrator,
        energy_tol: cfg.energy_tol,
        max_halvings: cfg.max_halvings,
    };
    let mut stops: Vec<f64> = cfg.snapshot_times.iter().cloned().filter(|t| *t > 0.0).collect();
    stops.push(cfg.t_end);
    stops.sort_by(f64::total_cmp);
    stops.dedup();
    let snapshot = |out: &mut OutputDir, st: &DynamicsState| -> Result<(), CliError> {
        let rows = profile_rows(&st.profile, &st.spec);
        out.csv(&format!("snapshot_t{:.6}.csv", st.t), &PROFILE_COLUMNS, &rows)
    };
    if cfg.snapshot_times.contains(&0.0) {
        snapshot(out, &state)?;
    }
    let mut rows = vec![];
    for (k, &t) in stops.iter().enumerate() {
        match run_dynamics(&state, t, &opts) {
            Ok((next, tr)) => {
                rows.extend(trace_rows(&tr, k > 0));
                state = next;
                if cfg.snapshot_times.contains(&t) {
                    snapshot(out, &state)?;
                }
            }
            Err(fail) => {
                rows.extend(trace_rows(&fail.trace, k > 0));
                out.csv("trace.csv", &TRACE_COLUMNS, &rows)?;
                return Err(fail.error.into());
            }
        }
    }
    out.csv("trace.csv", &TRACE_COLUMNS, &rows)?;
    out.csv("final_profile.csv", &PROFILE_COLUMNS, &profile_rows(&state.profile, &state.spec))?;
    Ok(Outcome::Success)
}

fn validate_cmd(cfg: &RunConfig, out: &mut OutputDir) -> Result<Outcome, CliError> {
    let seed = cfg.validate_seed;
    let vc = ValidationConfig {
        params: cfg.params()?,
        l_over_zeta: cfg.l_over_zeta,
        n: cfg.n,
        energy: Recipe::in_range(seed, 10),
        minimizer_in: Recipe::in_range(seed.wrapping_add(1), 10),
        minimizer_out: Recipe::out_of_range(seed.wrapping_add(2), 10),
    };
    let ctx = Context::new(vc)?;
    let checks = run_all(&ctx);
    let pass = checks.iter().all(|c| c.pass);
    for c in &checks {
        println!(
            "{} [{:>2}] {}: actual {:.6e}, expected {:.6e}, tolerance {:.1e}",
            if c.pass { "PASS" } else { "FAIL" },
            c.criterion,
            c.name,
            c.actual,
            c.expected,
            c.tolerance
        );
    }
    out.json("report.json", &json!({ "pass": pass, "config": vc, "checks": checks }))?;
    Ok(if pass { Outcome::Success } else { Outcome::ChecksFailed })
}

pub fn run_command(cfg: &RunConfig, cmd: Command, overwrite: bool) -> Result<Outcome, CliError> {
    let t0 = Instant::now();
    let mut out = OutputDir::prepare(&cfg.output_dir(), overwrite)?;
    let res = match cmd {
        Command::SolveStatic => solve_static_cmd(cfg, &mut out),
        Command::Extend => extend_cmd(cfg, &mut out),
        Command::Energy => energy_cmd(cfg, &mut out),
        Command::Dynamics => dynamics_cmd(cfg, &mut out),
        Command::Validate => validate_cmd(cfg, &mut out),
    };
    let status = match &res {
        Ok(Outcome::Success) => "ok",
        Ok(Outcome::ChecksFailed) => "checks_failed",
        Err(_) => "error",
    };
    out.finish(cfg, cmd.name(), t0.elapsed().as_secs_f64(), status)?;
    res
}
