//! Steady states of the slip-plane equation c0 (-d_xx)^{1/2} u1 + W'(u1) = 0.

use rustfft::num_complex::Complex64;
use serde::Serialize;

use crate::dynamics::semi_implicit_v;
use crate::energy::relative_energy;
use crate::error::{invalid, PnError, Result};
use crate::krylov::gmres;
use crate::operators::{apply_half_laplacian, apply_multiplier, fourier_shift};
use crate::potential::{validate_potential, PotentialSpec};
use crate::profile::{Background, Profile};

#[derive(Debug, Clone, Serialize)]
pub struct ResidualField {
    pub samples: Vec<f64>,
    pub linf: f64,
    pub l2: f64,
}

impl ResidualField {
    fn from_samples(samples: Vec<f64>, h: f64) -> Self {
        let linf = samples.iter().fold(0.0f64, |m, r| m.max(r.abs()));
        let l2 = (h * samples.iter().map(|r| r * r).sum::<f64>()).sqrt();
        Self { samples, linf, l2 }
    }
}

/// R = c0 (-d_xx)^{1/2} u1 + W'(u1).
pub fn residual(p: &Profile, spec: &PotentialSpec) -> ResidualField {
    let c0 = p.params().c0();
    let hl = p.half_laplacian();
    let samples = p
        .u1()
        .iter()
        .zip(&hl)
        .map(|(u, l)| c0 * l + spec.force(*u))
        .collect();
    ResidualField::from_samples(samples, p.grid().spacing())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SolveOptions {
    pub dt0: f64,
    pub res_tol: f64,
    pub max_iters: usize,
    pub newton: bool,
    pub newton_tol: f64,
    /// Residual level at which the pseudo-time flow hands over to Newton.
    pub flow_tol: f64,
    pub tail_tol: f64,
}

impl SolveOptions {
    pub fn for_params(p: &crate::PhysParams) -> Self {
        let unit = p.stress_unit();
        Self {
            dt0: 0.2 * p.d() / p.g(),
            res_tol: 1e-10 * unit,
            max_iters: 20_000,
            newton: true,
            newton_tol: 1e-10 * unit,
            flow_tol: 1e-3 * unit,
            tail_tol: crate::profile::DEFAULT_TAIL_TOL,
        }
    }

    fn validate(&self) -> Result<()> {
        if !(self.dt0 > 0.0) {
            return Err(invalid("dt0", "must be positive"));
        }
        for (name, v) in [
            ("res_tol", self.res_tol),
            ("newton_tol", self.newton_tol),
            ("flow_tol", self.flow_tol),
            ("tail_tol", self.tail_tol),
        ] {
            if !(v > 0.0) {
                return Err(invalid(name, "must be positive"));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct SolveReport {
    pub profile: Profile,
    pub residual: ResidualField,
    pub flow_steps: usize,
    pub newton_steps: usize,
    pub monotone: bool,
    pub warnings: Vec<String>,
}

/// Whether u1 is nonincreasing at every interior node.
pub fn is_monotone(u1: &[f64], tol: f64) -> bool {
    u1.windows(2)
        .skip(1)
        .take(u1.len().saturating_sub(3))
        .all(|w| w[1] - w[0] <= tol)
}

/// Monotonicity over the central half of the grid. The periodic wrap of an
/// initial guess with mismatched tails rings briefly near x = +-L, so the flow
/// only polices the core region.
fn is_monotone_core(p: &Profile, tol: f64) -> bool {
    let g = p.grid();
    let c = p.background().map_or(0.0, |bg| bg.x0);
    let half = 0.5 * g.half_length();
    let u = p.u1();
    let idx: Vec<usize> = (0..g.len()).filter(|&j| (g.node(j) - c).abs() <= half).collect();
    idx.windows(2).all(|w| u[w[1]] - u[w[0]] <= tol)
}

pub fn solve_static(init: &Profile, spec: &PotentialSpec, opts: &SolveOptions) -> Result<SolveReport> {
    opts.validate()?;
    let params = *init.params();
    let b = params.b();
    let report = validate_potential(spec, b);
    if !report.pass {
        return Err(invalid("potential", format!("fails the structural checks: {report:?}")));
    }
    let mut warnings = Vec::new();
    if let Some(t) = init.tail_violation(opts.tail_tol) {
        warnings.push(format!("initial tail |v| = {t:.3e} b exceeds tail tolerance"));
    }
    let mono_tol = 1e-12 * b;
    let mut p = init.clone();
    let mut r = residual(&p, spec);
    let mut iters = 0;

    // pseudo-time gradient flow
    let mut dt = opts.dt0;
    let mut energy = relative_energy(&p, spec);
    let target = if opts.newton { opts.flow_tol.max(opts.res_tol) } else { opts.res_tol };
    let mut monotone = is_monotone_core(&p, mono_tol);
    while r.linf > target {
        if iters >= opts.max_iters {
            return Err(PnError::NotConverged {
                iterations: iters,
                linf: r.linf,
                l2: r.l2,
            });
        }
        let cand = p.with_v(semi_implicit_v(&p, spec, dt))?;
        let e = relative_energy(&cand, spec);
        let mono = is_monotone_core(&cand, mono_tol);
        if e > energy + 1e-14 * params.energy_unit() || (monotone && !mono) {
            dt *= 0.5;
            if dt < 1e-12 * opts.dt0 {
                return Err(PnError::NotConverged {
                    iterations: iters,
                    linf: r.linf,
                    l2: r.l2,
                });
            }
            continue;
        }
        p = cand;
        energy = e;
        monotone = mono;
        r = residual(&p, spec);
        iters += 1;
        dt = (dt * 1.1).min(opts.dt0);
    }
    let flow_steps = iters;

    let mut newton_steps = 0;
    if opts.newton {
        let c0 = params.c0();
        let grid = p.grid().clone();
        let shift = spec.stiffness(0.25 * b).max(c0 * std::f64::consts::PI / grid.half_length());
        while r.linf > opts.newton_tol.min(opts.res_tol) {
            if newton_steps >= 50 || iters >= opts.max_iters {
                return Err(PnError::NotConverged {
                    iterations: iters,
                    linf: r.linf,
                    l2: r.l2,
                });
            }
            let curv: Vec<f64> = p.u1().iter().map(|u| spec.stiffness(*u)).collect();
            let apply = |x: &[f64]| -> Vec<f64> {
                let hx = apply_half_laplacian(&grid, x).expect("grid length");
                hx.iter()
                    .zip(x)
                    .zip(&curv)
                    .map(|((h, x), c)| c0 * h + c * x)
                    .collect()
            };
            let prec = |x: &[f64]| -> Vec<f64> {
                apply_multiplier(&grid, x, |_, xi| Complex64::new(1.0 / (c0 * xi.abs() + shift), 0.0))
                    .expect("grid length")
            };
            let rhs: Vec<f64> = r.samples.iter().map(|x| -x).collect();
            let sol = gmres(apply, prec, &rhs, 1e-8, 60, 2000);
            if !sol.converged {
                warnings.push(format!(
                    "Newton linear solve stopped at relative residual {:.2e}",
                    sol.rel_residual
                ));
            }
            let mut lambda = 1.0;
            loop {
                let v: Vec<f64> = p.v().iter().zip(&sol.x).map(|(v, d)| v + lambda * d).collect();
                let cand = p.with_v(v)?;
                let rc = residual(&cand, spec);
                if rc.l2 < r.l2 || lambda < 1.0 / 64.0 {
                    p = cand;
                    r = rc;
                    break;
                }
                lambda *= 0.5;
            }
            newton_steps += 1;
            iters += 1;
        }
    }
    let monotone_final = is_monotone(&p.u1(), mono_tol);
    if !monotone_final {
        warnings.push("solution lost monotonicity".into());
    }
    Ok(SolveReport {
        profile: p,
        residual: r,
        flow_steps,
        newton_steps,
        monotone: monotone_final,
        warnings,
    })
}

/// Zero crossings of u1: exact zeros at nodes plus strict sign changes between nodes.
fn zero_crossings(grid: &crate::Grid1D, u: &[f64]) -> Vec<f64> {
    let h = grid.spacing();
    let mut out = Vec::new();
    for j in 0..u.len() {
        if u[j] == 0.0 {
            out.push(grid.node(j));
        } else if j + 1 < u.len() && u[j] * u[j + 1] < 0.0 {
            out.push(grid.node(j) + h * u[j] / (u[j] - u[j + 1]));
        }
    }
    out
}

/// Location of the unique zero crossing of u1.
pub fn crossing(p: &Profile) -> Result<f64> {
    let z = zero_crossings(p.grid(), &p.u1());
    if z.len() != 1 {
        return Err(PnError::ZeroCrossing { crossings: z.len() });
    }
    Ok(z[0])
}

/// Translate the profile so that its zero crossing sits at x = 0.
pub fn center_profile(p: &Profile) -> Result<(f64, Profile)> {
    let shift = crossing(p)?;
    let v = fourier_shift(p.grid(), p.v(), -shift)?;
    let background = p.background().map(|bg| Background {
        zeta_bg: bg.zeta_bg,
        x0: bg.x0 - shift,
    });
    Ok((shift, Profile::new(p.grid(), *p.params(), background, v)?))
}

/// Least-squares fit of y = c + d / x^2 over the given abscissae; returns c.
fn fit_tail(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let t: Vec<f64> = xs.iter().map(|x| 1.0 / (x * x)).collect();
    let st: f64 = t.iter().sum();
    let stt: f64 = t.iter().map(|t| t * t).sum();
    let sy: f64 = ys.iter().sum();
    let sty: f64 = t.iter().zip(ys).map(|(t, y)| t * y).sum();
    let det = n * stt - st * st;
    (stt * sy - st * sty) / det
}

/// Far-field coefficients c_plus, c_minus with u1 + b/4 ~ c_plus / x (x -> +inf)
/// and b/4 - u1 ~ c_minus / |x| (x -> -inf), fitted over [L/4, L/2] from the crossing.
pub fn decay_coefficients(p: &Profile) -> Result<(f64, f64)> {
    let g = p.grid();
    let l = g.half_length();
    let xc = crossing(p)?;
    let (lo, hi) = (0.25 * l, 0.5 * l);
    if xc + hi > g.node(g.len() - 1) || xc - hi < g.node(0) {
        return Err(PnError::FitWindow { lo: xc + lo, hi: xc + hi });
    }
    let q = 0.25 * p.params().b();
    let u = p.u1();
    let x = g.nodes();
    let (mut xp, mut yp, mut xm, mut ym) = (vec![], vec![], vec![], vec![]);
    for (xj, uj) in x.iter().zip(&u) {
        let r = xj - xc;
        if (lo..=hi).contains(&r) {
            xp.push(r);
            yp.push(r * (uj + q));
        } else if (lo..=hi).contains(&-r) {
            xm.push(-r);
            ym.push(-r * (q - uj));
        }
    }
    if xp.len() < 3 || xm.len() < 3 {
        return Err(PnError::FitWindow { lo: xc + lo, hi: xc + hi });
    }
    Ok((fit_tail(&xp, &yp), fit_tail(&xm, &ym)))
}

/// Burgers vector density rho = -2 du1/dx and its total content, including the
/// contribution of the tails beyond the periodic window.
pub fn burgers_density(p: &Profile) -> (Vec<f64>, f64) {
    let g = p.grid();
    let rho: Vec<f64> = p.du1().iter().map(|d| -2.0 * d).collect();
    let q = 0.25 * p.params().b();
    let interior = g.spacing() * rho.iter().sum::<f64>();
    let l = g.half_length();
    let u_right = p.bg_at(l) + p.v()[0];
    let u_left = p.bg_at(-l) + p.v()[0];
    let total = interior + 2.0 * (q + u_right) + 2.0 * (q - u_left);
    (rho, total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{Grid1D, PhysParams};
    use std::f64::consts::PI;

    fn desk() -> (Grid1D, PhysParams, PotentialSpec) {
        let p = PhysParams::desk();
        (
            Grid1D::new(200.0 * p.zeta(), 4096).unwrap(),
            p,
            PotentialSpec::frenkel(p),
        )
    }

    #[test]
    fn analytic_profile_residual_vanishes() {
        let (g, p, w) = desk();
        let r = residual(&Profile::analytic(&g, p), &w);
        assert!(r.linf <= 1e-10, "{}", r.linf);
        let j = g.len() / 2;
        assert!(r.samples[j].abs() < 1e-15);
    }

    #[test]
    fn residual_with_wide_background_is_odd() {
        let (g, p, w) = desk();
        let r = residual(&Profile::with_background(&g, p, 2.0 * p.zeta(), 0.0), &w);
        assert!(r.linf > 1e-3);
        let n = g.len();
        for j in 1..n / 2 {
            assert!((r.samples[n / 2 + j] + r.samples[n / 2 - j]).abs() < 1e-14);
        }
    }

    #[test]
    fn residual_without_potential() {
        let (g, p, _) = desk();
        let zb = 1.7;
        let r = residual(&Profile::with_background(&g, p, zb, 0.0), &PotentialSpec::Zero);
        assert_eq!(r.samples[g.len() / 2], 0.0);
        let j = g.len() / 2 + 37;
        let x = g.node(j);
        let want = -p.c0() / (2.0 * PI) * x / (x * x + zb * zb);
        assert!((r.samples[j] - want).abs() < 1e-15);
    }

    #[test]
    fn analytic_is_fixed_point() {
        let (g, p, w) = desk();
        let opts = SolveOptions::for_params(&p);
        let out = solve_static(&Profile::analytic(&g, p), &w, &opts).unwrap();
        assert_eq!(out.newton_steps, 0);
        assert_eq!(out.flow_steps, 0);
    }

    #[test]
    fn rejects_zero_potential() {
        let (g, p, _) = desk();
        let opts = SolveOptions::for_params(&p);
        assert!(solve_static(&Profile::analytic(&g, p), &PotentialSpec::Zero, &opts).is_err());
    }

    #[test]
    fn center_shift_values() {
        let (g, p, _) = desk();
        let (s, c) = center_profile(&Profile::analytic(&g, p)).unwrap();
        assert_eq!(s, 0.0);
        assert_eq!(c.background().unwrap().x0, 0.0);
        let a = 1.5 * g.spacing();
        let (s, c) = center_profile(&Profile::with_background(&g, p, p.zeta(), a)).unwrap();
        assert!((s - a).abs() <= 1e-6 * g.spacing());
        assert!(c.u1()[g.len() / 2].abs() < 1e-6);
    }

    #[test]
    fn center_rejects_multiple_crossings() {
        let (g, p, _) = desk();
        let u: Vec<f64> = g.nodes().iter().map(|x| 0.1 * (x / 3.0).sin()).collect();
        let pr = Profile::from_u1(&g, p, None, &u).unwrap();
        assert!(matches!(center_profile(&pr), Err(PnError::ZeroCrossing { .. })));
        let pr = Profile::from_u1(&g, p, None, &vec![0.1; g.len()]).unwrap();
        assert!(matches!(center_profile(&pr), Err(PnError::ZeroCrossing { crossings: 0 })));
    }

    #[test]
    fn decay_of_analytic_and_wide_profiles() {
        let (g, p, _) = desk();
        let want = p.b() * p.zeta() / (2.0 * PI);
        let (cp, cm) = decay_coefficients(&Profile::analytic(&g, p)).unwrap();
        assert!((cp / want - 1.0).abs() < 0.05);
        assert!((cm / want - 1.0).abs() < 0.05);
        assert!((cp - cm).abs() < 1e-9, "{cp} {cm}");
        let (cp, _) = decay_coefficients(&Profile::with_background(&g, p, 2.0 * p.zeta(), 0.0)).unwrap();
        assert!((cp / (2.0 * want) - 1.0).abs() < 0.05);
    }

    #[test]
    fn decay_window_must_fit() {
        let (g, p, _) = desk();
        let pr = Profile::with_background(&g, p, p.zeta(), 0.6 * g.half_length());
        assert!(matches!(decay_coefficients(&pr), Err(PnError::FitWindow { .. })));
    }

    #[test]
    fn burgers_accounting() {
        let (g, p, _) = desk();
        let (rho, total) = burgers_density(&Profile::analytic(&g, p));
        let n = g.len();
        assert!((rho[n / 2] / (1.0 / (PI * p.zeta())) - 1.0).abs() < 5e-3);
        assert!((total - 1.0).abs() < 1e-3);
        for j in 1..n / 2 {
            assert!((rho[n / 2 + j] - rho[n / 2 - j]).abs() < 1e-15);
        }
    }

    #[test]
    fn monotone_check() {
        assert!(is_monotone(&[0.3, 0.2, 0.1, 0.0, -0.1], 0.0));
        assert!(!is_monotone(&[0.3, 0.2, 0.25, 0.0, -0.1], 0.0));
    }
}
