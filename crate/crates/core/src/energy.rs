//! Misfit, reduced and perturbed energies; cross terms; boxed elastic energy.

use rayon::prelude::*;
use serde::Serialize;

use crate::elastic::{background_point, spectral_level, stress_from_strain, ElasticProfile, ModeProfile};
use crate::error::{invalid, PnError, Result};
use crate::grid::Grid1D;
use crate::operators::{apply_half_laplacian, inner};
use crate::potential::PotentialSpec;
use crate::profile::{Profile, DEFAULT_TAIL_TOL};

/// Trapezoid nodes in y, starting at y = 0.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct YQuadrature {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl YQuadrature {
    /// y = 0 followed by geometric levels from y_min to y_max with ratio at most `ratio`,
    /// with every value of `extra` inserted as a node.
    pub fn geometric(y_min: f64, y_max: f64, ratio: f64, extra: &[f64]) -> Result<Self> {
        if !(y_min > 0.0 && y_max > y_min && ratio > 1.0) {
            return Err(invalid("quadrature", "need 0 < y_min < y_max and ratio > 1"));
        }
        let count = ((y_max / y_min).ln() / ratio.ln()).ceil() as usize + 1;
        let q = (y_max / y_min).powf(1.0 / (count - 1) as f64);
        let mut nodes = vec![0.0];
        nodes.extend((0..count).map(|i| y_min * q.powi(i as i32)));
        *nodes.last_mut().unwrap() = y_max;
        for &e in extra {
            if e > 0.0 && e < y_max {
                nodes.push(e);
            }
        }
        nodes.sort_by(f64::total_cmp);
        nodes.dedup_by(|a, b| (*a - *b).abs() <= 1e-12 * b.abs().max(1e-300));
        let n = nodes.len();
        let mut weights = vec![0.0; n];
        for i in 0..n - 1 {
            let w = 0.5 * (nodes[i + 1] - nodes[i]);
            weights[i] += w;
            weights[i + 1] += w;
        }
        Ok(Self { nodes, weights })
    }

    /// Default layout for a grid: y_min = zeta/50 up to 2L, ratio 1.03.
    pub fn for_grid(grid: &Grid1D, zeta: f64) -> Self {
        Self::geometric(zeta / 50.0, 2.0 * grid.half_length(), 1.03, &[]).expect("valid layout")
    }

    /// Weights restricted to [0, r]; r must be a node.
    fn truncated(&self, r: f64) -> Result<Vec<f64>> {
        let idx = self
            .nodes
            .iter()
            .position(|&y| (y - r).abs() <= 1e-12 * r.max(1.0))
            .ok_or_else(|| PnError::OutsideDomain(format!("y = {r} is not a quadrature node")))?;
        let mut w = vec![0.0; self.nodes.len()];
        for i in 0..idx {
            let h = 0.5 * (self.nodes[i + 1] - self.nodes[i]);
            w[i] += h;
            w[i + 1] += h;
        }
        Ok(w)
    }
}

/// sum_j W(u1_j) h plus tails fitted as W ~ A/x^2 from the last sample on each side.
pub fn misfit_energy(p: &Profile, spec: &PotentialSpec) -> Result<f64> {
    let g = p.grid();
    let b = p.params().b();
    let h = g.spacing();
    let w: Vec<f64> = p.u1().iter().map(|u| spec.value(*u)).collect();
    let n = w.len();
    let limit = 0.5 * spec.stiffness(0.25 * b).abs() * (10.0 * DEFAULT_TAIL_TOL * b).powi(2);
    if w[0].abs() > limit || w[n - 1].abs() > limit {
        return Err(PnError::DivergentMisfit {
            left: w[0],
            right: w[n - 1],
        });
    }
    let c = p.background().map_or(0.0, |bg| bg.x0);
    let l = g.half_length();
    let xl = (-l - c).abs();
    let xr = l - h - c;
    let left = w[0] * xl * xl / (xl + 0.5 * h);
    let right = w[n - 1] * xr * xr / (xr + 0.5 * h);
    Ok(h * w.iter().sum::<f64>() + left + right)
}

/// Reduced energy of v relative to the bare background:
/// k <v, Lv> + 2k <v, L u_bg> + int [W(u_bg + v) - W(u_bg)], k = G/(1-nu), L the half-Laplacian.
pub fn relative_energy(p: &Profile, spec: &PotentialSpec) -> f64 {
    let base = Profile::new(p.grid(), *p.params(), p.background(), vec![0.0; p.grid().len()])
        .expect("valid background");
    reduced_energy_samples(p.v(), &base, spec)
}

fn reduced_energy_samples(phi: &[f64], p: &Profile, spec: &PotentialSpec) -> f64 {
    let g = p.grid();
    let k = p.params().kappa();
    let hphi = apply_half_laplacian(g, phi).expect("grid length");
    let hu = p.half_laplacian();
    let u = p.u1();
    let mis: f64 = u
        .iter()
        .zip(phi)
        .map(|(u, f)| spec.value(u + f) - spec.value(*u))
        .sum::<f64>()
        * g.spacing();
    k * (inner(g, phi, &hphi) + 2.0 * inner(g, phi, &hu)) + mis
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PerturbationKind {
    ElasticExtension,
    UserField,
}

/// Perturbation of the upper trace u1+; the lower side follows by symmetry.
#[derive(Debug, Clone)]
pub struct Perturbation {
    pub grid: Grid1D,
    pub phi1: Vec<f64>,
    pub kind: PerturbationKind,
}

impl Perturbation {
    pub fn new(grid: &Grid1D, phi1: Vec<f64>) -> Result<Self> {
        grid.check_len(phi1.len())?;
        Ok(Self {
            grid: grid.clone(),
            phi1,
            kind: PerturbationKind::ElasticExtension,
        })
    }

    /// Largest |phi1| outside the central half of the grid.
    pub fn outer_magnitude(&self) -> f64 {
        let l = self.grid.half_length();
        self.grid
            .nodes()
            .iter()
            .zip(&self.phi1)
            .filter(|(x, _)| x.abs() > 0.5 * l)
            .fold(0.0f64, |m, (_, f)| m.max(f.abs()))
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self {
            grid: self.grid.clone(),
            phi1: self.phi1.iter().map(|f| s * f).collect(),
            kind: self.kind,
        }
    }
}

/// Perturbed energy on the slip plane:
/// k[<phi, L phi> + 2 <phi, L u1>] + int [W(u1 + phi) - W(u1)].
pub fn reduced_perturbed_energy(phi: &Perturbation, p: &Profile, spec: &PotentialSpec) -> f64 {
    reduced_energy_samples(&phi.phi1, p, spec)
}

/// Elastic part k <phi, L phi> of the reduced perturbed energy.
pub fn reduced_elastic_part(phi: &Perturbation, p: &Profile) -> f64 {
    let g = p.grid();
    let hphi = apply_half_laplacian(g, &phi.phi1).expect("grid length");
    p.params().kappa() * inner(g, &phi.phi1, &hphi)
}

/// 2 k <phi, L u1>.
pub fn cross_gamma(phi: &Perturbation, p: &Profile) -> f64 {
    2.0 * p.params().kappa() * inner(p.grid(), &phi.phi1, &p.half_laplacian())
}

pub fn misfit_difference(phi: &Perturbation, p: &Profile, spec: &PotentialSpec) -> f64 {
    p.u1()
        .iter()
        .zip(&phi.phi1)
        .map(|(u, f)| spec.value(u + f) - spec.value(*u))
        .sum::<f64>()
        * p.grid().spacing()
}

struct LevelSums {
    e_phi: f64,
    cross: f64,
    edge: f64,
}

/// Elastic energy of the field with trace phi1 and y-profile `prof`, and its
/// cross term with the stress of p, both by quadrature over the upper half-plane
/// and doubled. `edge` is the largest strain-energy density on the top level.
fn half_plane_quadrature<M: ModeProfile>(
    phi: &[f64],
    p: Option<&Profile>,
    grid: &Grid1D,
    params: &crate::PhysParams,
    prof: &M,
    quad: &YQuadrature,
) -> (f64, f64, f64) {
    let raw_phi = grid.fft(phi);
    let raw_v = p.map(|p| grid.fft(p.v()));
    let ext = ElasticProfile { nu: params.nu() };
    let x = grid.nodes();
    let h = grid.spacing();
    let top = quad.nodes.len() - 1;
    let sums: Vec<LevelSums> = quad
        .nodes
        .par_iter()
        .enumerate()
        .map(|(i, &y)| {
            let f = spectral_level(grid, &raw_phi, y, prof);
            let mut e_phi = 0.0;
            let mut cross = 0.0;
            let mut edge = 0.0f64;
            let fu = raw_v.as_ref().map(|r| spectral_level(grid, r, y, &ext));
            #[allow(clippy::needless_range_loop)]
            for j in 0..grid.len() {
                let s = stress_from_strain(params, f.e11[j], f.e22[j], f.e12[j]);
                let dens = s[0] * f.e11[j] + s[2] * f.e22[j] + 2.0 * s[1] * f.e12[j];
                e_phi += dens;
                if i == top {
                    edge = edge.max(dens.abs());
                }
                if let (Some(p), Some(fu)) = (p, fu.as_ref()) {
                    let mut su = stress_from_strain(params, fu.e11[j], fu.e22[j], fu.e12[j]);
                    if let Some(bg) = p.background() {
                        let b = background_point(params, bg.zeta_bg, x[j] - bg.x0, y, true);
                        su[0] += b.s11;
                        su[1] += b.s12;
                        su[2] += b.s22;
                    }
                    cross += su[0] * f.e11[j] + su[2] * f.e22[j] + 2.0 * su[1] * f.e12[j];
                }
            }
            LevelSums {
                e_phi: e_phi * h * quad.weights[i],
                cross: cross * h * quad.weights[i],
                edge,
            }
        })
        .collect();
    let e: f64 = sums.iter().map(|s| s.e_phi).sum();
    let c: f64 = sums.iter().map(|s| s.cross).sum();
    let edge = sums.iter().map(|s| s.edge).fold(0.0, f64::max);
    // (1/2) sigma:eps over both half-planes equals the upper-half integral;
    // the cross term (1/2)(eps_phi:sigma_u + eps_u:sigma_phi) over both halves is twice it.
    (e, 2.0 * c, edge)
}

/// Elastic energy of an arbitrary same-trace field given by per-mode y-profiles.
pub fn elastic_energy_with_profile<M: ModeProfile>(
    phi: &Perturbation,
    params: &crate::PhysParams,
    prof: &M,
    quad: &YQuadrature,
) -> f64 {
    half_plane_quadrature(&phi.phi1, None, &phi.grid, params, prof, quad).0
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TotalEnergy {
    pub e_els: f64,
    pub cross_els: f64,
    pub misfit_diff: f64,
    pub total: f64,
    /// Largest strain-energy density on the top quadrature level.
    pub edge_density: f64,
}

/// Perturbed total energy with the elastic parts integrated over the half-planes.
pub fn perturbed_total_energy(
    phi: &Perturbation,
    p: &Profile,
    spec: &PotentialSpec,
    quad: &YQuadrature,
) -> TotalEnergy {
    let params = *p.params();
    let prof = ElasticProfile { nu: params.nu() };
    let (e_els, cross_els, edge) = half_plane_quadrature(&phi.phi1, Some(p), p.grid(), &params, &prof, quad);
    let misfit_diff = misfit_difference(phi, p, spec);
    TotalEnergy {
        e_els,
        cross_els,
        misfit_diff,
        total: e_els + cross_els + misfit_diff,
        edge_density: edge,
    }
}

/// (C_els by half-plane quadrature, C_Gamma by slip-plane quadrature).
pub fn cross_terms(phi: &Perturbation, p: &Profile, quad: &YQuadrature) -> (f64, f64) {
    let params = *p.params();
    let prof = ElasticProfile { nu: params.nu() };
    let (_, c, _) = half_plane_quadrature(&phi.phi1, Some(p), p.grid(), &params, &prof, quad);
    (c, cross_gamma(phi, p))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EnergyBreakdown {
    pub e_mis: f64,
    pub e_gamma_e_pert: f64,
    pub e_hat_gamma: f64,
    pub e_hat_total: f64,
    pub cross_gamma: f64,
    pub cross_els: f64,
    pub e_els_box: f64,
    pub box_radius: f64,
}

pub fn energy_breakdown(
    phi: &Perturbation,
    p: &Profile,
    spec: &PotentialSpec,
    quad: &YQuadrature,
    box_radius: f64,
) -> Result<EnergyBreakdown> {
    let e_mis = misfit_energy(p, spec)?;
    let e_gamma_e_pert = reduced_elastic_part(phi, p);
    let cg = cross_gamma(phi, p);
    let md = misfit_difference(phi, p, spec);
    let tot = perturbed_total_energy(phi, p, spec, quad);
    let bq = YQuadrature::geometric(p.params().zeta() / 50.0, box_radius, 1.03, &[])?;
    Ok(EnergyBreakdown {
        e_mis,
        e_gamma_e_pert,
        e_hat_gamma: e_gamma_e_pert + cg + md,
        e_hat_total: tot.total,
        cross_gamma: cg,
        cross_els: tot.cross_els,
        e_els_box: elastic_energy_box(p, box_radius, &bq)?,
        box_radius,
    })
}

/// Weights of the piecewise-linear interpolant integrated over [-r, r].
fn x_weights(grid: &Grid1D, r: f64) -> Vec<f64> {
    let x = grid.nodes();
    let h = grid.spacing();
    let mut w = vec![0.0; x.len()];
    for j in 0..x.len() - 1 {
        let (a, b) = (x[j].max(-r), x[j + 1].min(r));
        if b <= a {
            continue;
        }
        // int over [a, b] of the hat functions at x_j and x_{j+1}
        let t = |s: f64| (s - x[j]) / h;
        let (ta, tb) = (t(a), t(b));
        w[j + 1] += h * 0.5 * (tb * tb - ta * ta);
        w[j] += h * ((tb - ta) - 0.5 * (tb * tb - ta * ta));
    }
    w
}

/// Elastic energy (1/2) int sigma:eps over the square |x|, |y| <= r, excluding the plane.
/// `quad` must contain r as a node.
pub fn elastic_energy_box(p: &Profile, r: f64, quad: &YQuadrature) -> Result<f64> {
    let g = p.grid();
    let l = g.half_length();
    if !(r > 0.0) || r > 0.5 * l + 1e-12 || r > *quad.nodes.last().unwrap() + 1e-12 {
        return Err(PnError::OutsideDomain(format!(
            "box radius {r} exceeds min(L/2, y_max) = {}",
            (0.5 * l).min(*quad.nodes.last().unwrap())
        )));
    }
    let wy = quad.truncated(r)?;
    let wx = x_weights(g, r);
    let params = *p.params();
    let raw_v = g.fft(p.v());
    let ext = ElasticProfile { nu: params.nu() };
    let x = g.nodes();
    let cols: Vec<usize> = (0..g.len()).filter(|&j| wx[j] != 0.0).collect();
    let total: f64 = quad
        .nodes
        .par_iter()
        .zip(&wy)
        .filter(|(_, w)| **w != 0.0)
        .map(|(&y, &wyv)| {
            let f = spectral_level(g, &raw_v, y, &ext);
            let mut s = 0.0;
            for &j in &cols {
                let mut st = stress_from_strain(&params, f.e11[j], f.e22[j], f.e12[j]);
                let (mut e11, mut e22, mut e12) = (f.e11[j], f.e22[j], f.e12[j]);
                if let Some(bg) = p.background() {
                    let b = background_point(&params, bg.zeta_bg, x[j] - bg.x0, y, true);
                    st[0] += b.s11;
                    st[1] += b.s12;
                    st[2] += b.s22;
                    let (g2, nu) = (2.0 * params.g(), params.nu());
                    let tr = b.s11 + b.s22;
                    e11 += (b.s11 - nu * tr) / g2;
                    e22 += (b.s22 - nu * tr) / g2;
                    e12 += b.s12 / g2;
                }
                s += wx[j] * (st[0] * e11 + st[2] * e22 + 2.0 * st[1] * e12);
            }
            s * wyv
        })
        .sum();
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::PhysParams;
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
    fn misfit_closed_form() {
        let (g, p, w) = desk();
        let e = misfit_energy(&Profile::analytic(&g, p), &w).unwrap();
        assert!((e / (1.0 / (3.0 * PI)) - 1.0).abs() < 5e-3, "{e}");
    }

    #[test]
    fn misfit_perfect_lattice_and_divergent() {
        let (g, p, w) = desk();
        let lattice = Profile::from_u1(&g, p, None, &vec![0.25; g.len()]).unwrap();
        assert!(misfit_energy(&lattice, &w).unwrap().abs() < 1e-15);
        let flat = Profile::from_u1(&g, p, None, &vec![0.0; g.len()]).unwrap();
        assert!(matches!(misfit_energy(&flat, &w), Err(PnError::DivergentMisfit { .. })));
    }

    #[test]
    fn zero_perturbation() {
        let (g, p, w) = desk();
        let pr = Profile::analytic(&g, p);
        let phi = Perturbation::new(&g, vec![0.0; g.len()]).unwrap();
        assert_eq!(reduced_perturbed_energy(&phi, &pr, &w), 0.0);
        let q = YQuadrature::geometric(0.02, 10.0, 1.2, &[]).unwrap();
        assert_eq!(cross_terms(&phi, &pr, &q), (0.0, 0.0));
        assert_eq!(perturbed_total_energy(&phi, &pr, &w, &q).total, 0.0);
    }

    #[test]
    fn gaussian_elastic_part_closed_form() {
        // k <phi, L phi> = k A^2 for phi = A exp(-x^2/w^2), any width
        let (g, p, _) = desk();
        let a = 0.05;
        let phi: Vec<f64> = g.nodes().iter().map(|x| a * (-x * x / 0.8).exp()).collect();
        let phi = Perturbation::new(&g, phi).unwrap();
        let e = reduced_elastic_part(&phi, &Profile::analytic(&g, p));
        // periodic box: the Riemann sum over xi sees the kink of |xi| at 0
        assert!((e / (p.kappa() * a * a) - 1.0).abs() < 1e-4, "{e} {}", p.kappa() * a * a);
    }

    #[test]
    fn x_weights_integrate_linear_exactly() {
        let g = Grid1D::new(10.0, 64).unwrap();
        let w = x_weights(&g, 3.3);
        let s: f64 = w.iter().sum();
        assert!((s - 6.6).abs() < 1e-12);
        let m: f64 = w.iter().zip(g.nodes()).map(|(w, x)| w * (x + 1.0)).sum();
        assert!((m - 6.6).abs() < 1e-12);
    }

    #[test]
    fn box_radius_limits() {
        let (g, p, _) = desk();
        let q = YQuadrature::geometric(0.01, 50.0, 1.1, &[]).unwrap();
        let pr = Profile::analytic(&g, p);
        assert!(elastic_energy_box(&pr, 0.6 * g.half_length(), &q).is_err());
        assert!(elastic_energy_box(&pr, 3.0, &q).is_err());
    }
}
