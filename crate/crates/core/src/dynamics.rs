//! Gradient-flow dynamics of the slip-plane profile.

use rustfft::num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::energy::relative_energy;
use crate::error::{invalid, PnError, Result};
use crate::operators::{apply_half_laplacian, apply_multiplier, inner};
use crate::potential::PotentialSpec;
use crate::profile::Profile;
use crate::static_solver::residual;

#[derive(Debug, Clone)]
pub struct DynamicsState {
    pub t: f64,
    pub profile: Profile,
    pub spec: PotentialSpec,
    /// Static profile u* used by the exponential integrator and for reporting F.
    pub reference: Option<Profile>,
}

impl DynamicsState {
    pub fn new(profile: Profile, spec: PotentialSpec) -> Self {
        Self {
            t: 0.0,
            profile,
            spec,
            reference: None,
        }
    }

    pub fn with_reference(mut self, reference: Profile) -> Self {
        self.reference = Some(reference);
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Integrator {
    SemiImplicit,
    Etd,
}

/// v - dt g treated explicitly, c0 (-d_xx)^{1/2} v implicitly, with
/// g = W'(u1) + c0 (-d_xx)^{1/2} u_bg.
pub fn semi_implicit_v(p: &Profile, spec: &PotentialSpec, dt: f64) -> Vec<f64> {
    let c0 = p.params().c0();
    let hb = p.bg_half_laplacian();
    let rhs: Vec<f64> = p
        .u1()
        .iter()
        .zip(p.v())
        .zip(&hb)
        .map(|((u, v), h)| v - dt * (spec.force(*u) + c0 * h))
        .collect();
    apply_multiplier(p.grid(), &rhs, |_, xi| Complex64::new(1.0 / (1.0 + dt * c0 * xi.abs()), 0.0))
        .expect("grid length")
}

pub fn step_semi_implicit(s: &DynamicsState, dt: f64) -> DynamicsState {
    let v = semi_implicit_v(&s.profile, &s.spec, dt);
    DynamicsState {
        t: s.t + dt,
        profile: s.profile.with_v(v).expect("grid length"),
        spec: s.spec.clone(),
        reference: s.reference.clone(),
    }
}

fn reference_offset(s: &DynamicsState) -> Result<(&Profile, Vec<f64>)> {
    let r = s.reference.as_ref().ok_or(PnError::MissingReference)?;
    if r.background() != s.profile.background() || r.grid() != s.profile.grid() {
        return Err(invalid("reference", "must share the grid and background of the state"));
    }
    let w = s.profile.v().iter().zip(r.v()).map(|(a, b)| a - b).collect();
    Ok((r, w))
}

/// Exponential Euler step for w = u1 - u*:
/// w^ <- e^{-a dt} w^ + (1 - e^{-a dt})/a T(w)^, a = c0|xi| + 1,
/// T(w) = w - W'(w + u*) + W'(u*).
pub fn step_etd(s: &DynamicsState, dt: f64) -> Result<DynamicsState> {
    let (r, w) = reference_offset(s)?;
    let c0 = s.profile.params().c0();
    let us = r.u1();
    let big_t: Vec<f64> = w
        .iter()
        .zip(&us)
        .map(|(w, u)| w - s.spec.force(w + u) + s.spec.force(*u))
        .collect();
    let g = s.profile.grid();
    let decay = |xi: f64| (-(c0 * xi.abs() + 1.0) * dt).exp();
    let a = apply_multiplier(g, &w, |_, xi| Complex64::new(decay(xi), 0.0))?;
    let b = apply_multiplier(g, &big_t, |_, xi| {
        let ak = c0 * xi.abs() + 1.0;
        Complex64::new(-(-ak * dt).exp_m1() / ak, 0.0)
    })?;
    let v = r
        .v()
        .iter()
        .zip(a.iter().zip(&b))
        .map(|(vr, (a, b))| vr + a + b)
        .collect();
    Ok(DynamicsState {
        t: s.t + dt,
        profile: s.profile.with_v(v)?,
        spec: s.spec.clone(),
        reference: s.reference.clone(),
    })
}

/// Free energy. With a reference u*, F(w) = k<w, Lw> - int w W'(u*) + int [W(w+u*) - W(u*)];
/// otherwise the reduced energy of v relative to the bare background.
pub fn free_energy(s: &DynamicsState) -> Result<f64> {
    if s.reference.is_none() {
        return Ok(relative_energy(&s.profile, &s.spec));
    }
    let (r, w) = reference_offset(s)?;
    let g = s.profile.grid();
    let k = s.profile.params().kappa();
    let hw = apply_half_laplacian(g, &w)?;
    let us = r.u1();
    let rest: f64 = w
        .iter()
        .zip(&us)
        .map(|(w, u)| -w * s.spec.force(*u) + s.spec.value(w + u) - s.spec.value(*u))
        .sum::<f64>()
        * g.spacing();
    Ok(k * inner(g, &w, &hw) + rest)
}

/// Q = int R^2 with R = c0 (-d_xx)^{1/2} u1 + W'(u1).
pub fn dissipation_rate(s: &DynamicsState) -> f64 {
    let r = residual(&s.profile, &s.spec);
    r.l2 * r.l2
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DynamicsOptions {
    pub dt: f64,
    pub adapt: bool,
    pub integrator: Integrator,
    /// Allowed increase of F per accepted step.
    pub energy_tol: f64,
    pub max_halvings: usize,
}

impl DynamicsOptions {
    pub fn for_params(p: &crate::PhysParams) -> Self {
        Self {
            dt: 0.1 * p.d() / p.g(),
            adapt: true,
            integrator: Integrator::SemiImplicit,
            energy_tol: 1e-10 * p.energy_unit(),
            max_halvings: 20,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct DynamicsTrace {
    pub times: Vec<f64>,
    pub f_values: Vec<f64>,
    pub q_values: Vec<f64>,
    pub residual_norms: Vec<f64>,
    pub dt_history: Vec<f64>,
}

impl DynamicsTrace {
    fn record(&mut self, s: &DynamicsState, f: f64, dt: f64) {
        let r = residual(&s.profile, &s.spec);
        self.times.push(s.t);
        self.f_values.push(f);
        self.q_values.push(r.l2 * r.l2);
        self.residual_norms.push(r.linf);
        self.dt_history.push(dt);
    }
}

/// A run that stopped early, with everything recorded up to that point.
#[derive(Debug, Clone)]
pub struct DynamicsFailure {
    pub error: PnError,
    pub state: DynamicsState,
    pub trace: DynamicsTrace,
}

impl std::fmt::Display for DynamicsFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} (t = {})", self.error, self.state.t)
    }
}

impl std::error::Error for DynamicsFailure {}

fn step(s: &DynamicsState, dt: f64, integ: Integrator) -> Result<DynamicsState> {
    match integ {
        Integrator::SemiImplicit => Ok(step_semi_implicit(s, dt)),
        Integrator::Etd => step_etd(s, dt),
    }
}

/// Integrate to `t_end`, halving dt whenever F would increase by more than the tolerance.
pub fn run_dynamics(
    s0: &DynamicsState,
    t_end: f64,
    opts: &DynamicsOptions,
) -> std::result::Result<(DynamicsState, DynamicsTrace), Box<DynamicsFailure>> {
    let mut trace = DynamicsTrace::default();
    let fail = |error: PnError, state: &DynamicsState, trace: &DynamicsTrace| {
        Box::new(DynamicsFailure {
            error,
            state: state.clone(),
            trace: trace.clone(),
        })
    };
    if !(t_end > 0.0) {
        return Err(fail(invalid("T_end", "must be positive"), s0, &trace));
    }
    if !(opts.dt > 0.0) {
        return Err(fail(invalid("dt", "must be positive"), s0, &trace));
    }
    let mut s = s0.clone();
    let mut f = free_energy(&s).map_err(|e| fail(e, &s, &trace))?;
    trace.record(&s, f, 0.0);
    let mut dt = opts.dt;
    let eps = 1e-12 * t_end;
    while s.t < t_end - eps {
        let mut halvings = 0;
        loop {
            let h = dt.min(t_end - s.t);
            let cand = step(&s, h, opts.integrator).map_err(|e| fail(e, &s, &trace))?;
            let fc = free_energy(&cand).map_err(|e| fail(e, &s, &trace))?;
            if !opts.adapt || fc <= f + opts.energy_tol {
                s = cand;
                f = fc;
                trace.record(&s, f, h);
                break;
            }
            halvings += 1;
            if halvings > opts.max_halvings {
                return Err(fail(PnError::StepUnderflow { t: s.t, dt: h }, &s, &trace));
            }
            dt = 0.5 * h;
        }
    }
    Ok((s, trace))
}
